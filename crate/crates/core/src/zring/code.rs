//! Codes with generator matrix `(I_n | A)`.

use alloc::vec;
use alloc::vec::Vec;

use super::arith::{euclidean_weight_raw, Modulus, RingMatrix, RingVector};
use crate::binary::BinaryCode;
use crate::error::{Error, Result};

/// A `Z_m`-code of length `2n` generated by `(I_n | A)`; it has exactly
/// `m^n` codewords.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StdFormCode {
    right: RingMatrix,
}

impl StdFormCode {
    pub fn new(right: RingMatrix) -> Result<Self> {
        if right.rows() != right.cols() {
            return Err(Error::NotSquare { rows: right.rows(), cols: right.cols() });
        }
        if right.rows() == 0 {
            return Err(Error::EmptyDimension);
        }
        Ok(Self { right })
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.right.modulus()
    }

    /// `n`, the number of generator rows.
    #[inline]
    pub fn half_length(&self) -> usize {
        self.right.rows()
    }

    /// `2n`.
    #[inline]
    pub fn length(&self) -> usize {
        2 * self.right.rows()
    }

    /// The right block `A`.
    #[inline]
    pub fn right_block(&self) -> &RingMatrix {
        &self.right
    }

    /// Row `i` of `(I_n | A)`.
    pub fn generator_row(&self, i: usize) -> RingVector {
        let n = self.half_length();
        let mut coords = vec![0u32; 2 * n];
        coords[i] = 1;
        coords[n..].copy_from_slice(self.right.row(i));
        RingVector::new(self.modulus(), coords).expect("residues already reduced")
    }

    pub fn generator_rows(&self) -> Vec<RingVector> {
        (0..self.half_length()).map(|i| self.generator_row(i)).collect()
    }

    /// The codeword `u * (I_n | A)` for a message `u` in `Z_m^n`.
    pub fn encode(&self, message: &[u32]) -> Result<RingVector> {
        let n = self.half_length();
        if message.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: message.len() });
        }
        let m = self.modulus();
        let mut coords = vec![0u32; 2 * n];
        for (i, &u) in message.iter().enumerate() {
            let u = u % m.m();
            coords[i] = u;
            if u == 0 {
                continue;
            }
            for (j, &a) in self.right.row(i).iter().enumerate() {
                coords[n + j] = m.add(coords[n + j], m.mul(u, a));
            }
        }
        RingVector::new(m, coords)
    }

    /// Visits all `m^n` codewords. Fails if `m^n` exceeds `limit`.
    pub fn for_each_codeword(&self, limit: u64, mut f: impl FnMut(&RingVector)) -> Result<()> {
        let n = self.half_length();
        let m = self.modulus().m();
        let size = (m as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if size > limit as u128 {
            return Err(Error::TooLarge { what: "codeword count", size, limit: limit as u128 });
        }
        let mut message = vec![0u32; n];
        loop {
            f(&self.encode(&message)?);
            if !increment(&mut message, m) {
                return Ok(());
            }
        }
    }
}

/// Odometer increment over `Z_m^len`; false once it wraps to zero.
pub(crate) fn increment(digits: &mut [u32], m: u32) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < m {
            return true;
        }
        *d = 0;
    }
    false
}

/// `A A^T = -I_n`. For standard-form codes this is equivalent to self-duality:
/// it gives `C` inside `C^perp`, and both have `m^n` elements.
pub fn is_self_dual_standard(code: &StdFormCode) -> bool {
    let a = code.right_block();
    a.mul_transpose(a).map(|g| g.is_neg_identity()).unwrap_or(false)
}

/// Type II test on generator rows: each `(e_i | r_i)` has `wt_E = 0 mod 4k`.
pub fn is_type_ii(code: &StdFormCode) -> Result<bool> {
    let k = code.modulus().require_even("is_type_ii")?;
    if !is_self_dual_standard(code) {
        return Err(Error::NotSelfDual);
    }
    let four_k = 4 * k as u64;
    let a = code.right_block();
    Ok((0..a.rows()).all(|i| (1 + euclidean_weight_raw(a.row(i), k)) % four_k == 0))
}

/// The upper bound `4k floor(n/24) + 4k` on `d_E` and whether it is known to
/// hold for `(n, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtremalBound {
    pub value: u64,
    pub valid: bool,
}

pub fn extremal_bound(n: u64, k: u64) -> ExtremalBound {
    let blocks = n / 24;
    ExtremalBound { value: 4 * k * blocks + 4 * k, valid: (1..=6).contains(&k) || blocks + 2 <= k }
}

/// The binary part: generator rows mapped through `rho` and reduced mod 2.
pub fn binary_part(code: &StdFormCode) -> Result<BinaryCode> {
    let k = code.modulus().require_even("binary_part")?;
    let rows: Vec<Vec<bool>> = (0..code.half_length())
        .map(|i| {
            code.generator_row(i)
                .coords()
                .iter()
                .map(|&c| super::arith::rho_unchecked(c, k).rem_euclid(2) == 1)
                .collect()
        })
        .collect();
    BinaryCode::from_bool_rows(code.length(), &rows)
}

/// Exhaustive dual of the code generated by `generators`: every vector of
/// `Z_m^length` orthogonal to all generators, in lexicographic order.
pub fn brute_force_dual(modulus: Modulus, length: usize, generators: &[RingVector]) -> Result<Vec<RingVector>> {
    const LIMIT: u128 = 1 << 24;
    let size = (modulus.m() as u128).checked_pow(length as u32).unwrap_or(u128::MAX);
    if size > LIMIT {
        return Err(Error::TooLarge { what: "ambient space", size, limit: LIMIT });
    }
    for g in generators {
        if g.len() != length {
            return Err(Error::LengthMismatch { expected: length, found: g.len() });
        }
        if g.modulus() != modulus {
            return Err(Error::ModulusMismatch { left: modulus.m(), right: g.modulus().m() });
        }
    }
    let mut out = Vec::new();
    let mut x = vec![0u32; length];
    loop {
        if generators.iter().all(|g| modulus.dot(&x, g.coords()) == 0) {
            out.push(RingVector::new(modulus, x.clone())?);
        }
        if !increment(&mut x, modulus.m()) {
            break;
        }
    }
    out.sort_by(|a, b| a.coords().cmp(b.coords()));
    Ok(out)
}

impl StdFormCode {
    /// All codewords in lexicographic order; for small instances only.
    pub fn codeword_set(&self, limit: u64) -> Result<Vec<RingVector>> {
        let mut out = Vec::new();
        self.for_each_codeword(limit, |c| out.push(c.clone()))?;
        out.sort_by(|a, b| a.coords().cmp(b.coords()));
        Ok(out)
    }

    pub fn dual_by_brute_force(&self) -> Result<Vec<RingVector>> {
        brute_force_dual(self.modulus(), self.length(), &self.generator_rows())
    }
}
