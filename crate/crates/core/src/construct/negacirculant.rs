use alloc::vec;

use crate::error::{Error, Result};
use crate::zring::{euclidean_weight_raw, Modulus, RingMatrix, RingVector, StdFormCode};

/// The negacirculant matrix with the given first row: each row is the
/// previous one shifted right by one, the wrapped entry negated.
pub fn negacirculant(first_row: &RingVector) -> RingMatrix {
    let m = first_row.modulus();
    let r = first_row.coords();
    let n = r.len();
    let mut data = vec![0u32; n * n];
    for i in 0..n {
        for j in 0..n {
            data[i * n + j] = if j >= i { r[j - i] } else { m.neg(r[n + j - i]) };
        }
    }
    RingMatrix::new(m, n, n, data).expect("entries reduced")
}

/// First rows `r_A`, `r_B` of the two negacirculant blocks of a
/// four-negacirculant code of length `4l`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FourNegaSpec {
    r_a: RingVector,
    r_b: RingVector,
}

impl FourNegaSpec {
    pub fn new(r_a: RingVector, r_b: RingVector) -> Result<Self> {
        if r_a.modulus() != r_b.modulus() {
            return Err(Error::ModulusMismatch { left: r_a.modulus().m(), right: r_b.modulus().m() });
        }
        if r_a.len() != r_b.len() {
            return Err(Error::LengthMismatch { expected: r_a.len(), found: r_b.len() });
        }
        if r_a.is_empty() {
            return Err(Error::EmptyDimension);
        }
        Ok(Self { r_a, r_b })
    }

    pub fn modulus(&self) -> Modulus {
        self.r_a.modulus()
    }

    pub fn block_size(&self) -> usize {
        self.r_a.len()
    }

    pub fn length(&self) -> usize {
        4 * self.block_size()
    }

    pub fn r_a(&self) -> &RingVector {
        &self.r_a
    }

    pub fn r_b(&self) -> &RingVector {
        &self.r_b
    }
}

/// The code generated by `(I_2l | [[A, B], [-B^T, A^T]])`.
pub fn four_negacirculant(spec: &FourNegaSpec) -> StdFormCode {
    let m = spec.modulus();
    let l = spec.block_size();
    let a = negacirculant(&spec.r_a);
    let b = negacirculant(&spec.r_b);
    let mut right = RingMatrix::zeros(m, 2 * l, 2 * l);
    for i in 0..l {
        for j in 0..l {
            right.set(i, j, a.get(i, j));
            right.set(i, l + j, b.get(i, j));
            right.set(l + i, j, m.neg(b.get(j, i)));
            right.set(l + i, l + j, a.get(j, i));
        }
    }
    StdFormCode::new(right).expect("square and nonempty")
}

/// `A A^T + B B^T = -I`. Both products are negacirculant, so only their
/// first rows are compared.
pub fn check_four_nega_self_dual(spec: &FourNegaSpec) -> bool {
    let m = spec.modulus();
    let l = spec.block_size();
    let ra = spec.r_a.coords();
    let rb = spec.r_b.coords();
    let mut row_a = ra.to_vec();
    let mut row_b = rb.to_vec();
    let minus_one = m.m() - 1;
    for j in 0..l {
        let s = m.add(m.dot(ra, &row_a), m.dot(rb, &row_b));
        if s != if j == 0 { minus_one } else { 0 } {
            return false;
        }
        shift_negate(m, &mut row_a);
        shift_negate(m, &mut row_b);
    }
    true
}

fn shift_negate(m: Modulus, row: &mut [u32]) {
    let last = m.neg(row[row.len() - 1]);
    row.rotate_right(1);
    row[0] = last;
}

/// `wt_E(r_A) + wt_E(r_B) = -1 (mod 4k)` for a self-dual spec.
pub fn check_four_nega_type_ii(spec: &FourNegaSpec) -> Result<bool> {
    let k = spec.modulus().half().ok_or(Error::OddModulus { op: "check_four_nega_type_ii", m: spec.modulus().m() })?;
    if !check_four_nega_self_dual(spec) {
        return Err(Error::NotSelfDual);
    }
    let four_k = 4 * k as u64;
    let w = euclidean_weight_raw(spec.r_a.coords(), k) + euclidean_weight_raw(spec.r_b.coords(), k);
    Ok(w % four_k == four_k - 1)
}
