use alloc::vec;
use alloc::vec::Vec;

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// Hermite normal form of the lattice generated by `generators` together
/// with `d * Z^n`. Every intermediate entry stays below `d` in absolute
/// value, since any generator may be shifted by a multiple of `d e_j`.
///
/// The result is upper triangular with positive pivots dividing `d`, and
/// entries above each pivot reduced into `[0, pivot)`.
pub fn hnf_with_modulus(generators: &[Vec<i64>], n: usize, d: i64) -> Result<IntMatrix> {
    if d <= 0 {
        return Err(Error::Overflow("hnf modulus must be positive"));
    }
    if n == 0 {
        return Err(Error::EmptyDimension);
    }
    let mut rows: Vec<Vec<i64>> = Vec::with_capacity(generators.len());
    for g in generators {
        if g.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: g.len() });
        }
        rows.push(g.iter().map(|&v| v.rem_euclid(d)).collect());
    }

    let mut basis = IntMatrix::zeros(n, n);
    for j in 0..n {
        let mut pivot = vec![0i64; n];
        pivot[j] = d;
        for r in rows.iter_mut() {
            if r[j] == 0 {
                continue;
            }
            let (g, s, t) = ext_gcd(pivot[j], r[j]);
            let (pa, ra) = (pivot[j] / g, r[j] / g);
            for c in j + 1..n {
                let p = pivot[c];
                let q = r[c];
                pivot[c] = mul_add_mod(s, p, t, q, d);
                r[c] = mul_add_mod(ra, p, -pa, q, d);
            }
            pivot[j] = g;
            r[j] = 0;
        }
        basis.row_mut(j).copy_from_slice(&pivot);
    }

    for j in (0..n).rev() {
        let p = basis.get(j, j);
        for i in 0..j {
            let q = basis.get(i, j).div_euclid(p);
            if q != 0 {
                for c in j..n {
                    let v = basis.get(i, c) - q * basis.get(j, c);
                    basis.set(i, c, v);
                }
            }
        }
    }
    Ok(basis)
}

fn mul_add_mod(a: i64, x: i64, b: i64, y: i64, d: i64) -> i64 {
    ((a as i128 * x as i128 + b as i128 * y as i128).rem_euclid(d as i128)) as i64
}

/// `(g, s, t)` with `g = gcd(a, b) > 0` and `s a + t b = g`.
pub(crate) fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}
