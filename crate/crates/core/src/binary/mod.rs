//! Binary linear codes: the binary parts of `Z_2k`-codes.
//!
//! Codewords are packed into a `u128`, bit `j` holding coordinate `j`, so
//! lengths up to 128 are supported.

mod gleason;
mod lowweight;
mod signature;
mod weights;

use alloc::vec::Vec;

use crate::error::{Error, Result};

pub use gleason::{gleason_w56, gleason_w64, GleasonCoefficients};
pub use lowweight::{count_codewords_up_to_weight, words_of_weight, InformationSets, LowWeightConfig};
pub use signature::{
    compare_signatures, invariant_signature, InvariantSignature, LevelSignature, SignatureConfig, SignatureVerdict,
};
pub use weights::{
    macwilliams_dual, weight_distribution_exhaustive, weight_distribution_slice, Completeness, WeightEnumerator,
    DEFAULT_MAX_EXHAUSTIVE_DIMENSION,
};

pub const MAX_LENGTH: usize = 128;

/// A binary linear code held as a basis in reduced row echelon form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryCode {
    n: usize,
    rows: Vec<u128>,
    pivots: Vec<usize>,
}

impl BinaryCode {
    /// Row-reduces `rows` (each of length `n`) to a basis. Dependent rows are
    /// dropped.
    pub fn from_bool_rows(n: usize, rows: &[Vec<bool>]) -> Result<Self> {
        let mut packed = Vec::with_capacity(rows.len());
        for r in rows {
            if r.len() != n {
                return Err(Error::LengthMismatch { expected: n, found: r.len() });
            }
            packed.push(r.iter().enumerate().fold(0u128, |acc, (j, &b)| if b { acc | 1 << j } else { acc }));
        }
        Self::from_packed_rows(n, &packed)
    }

    pub fn from_packed_rows(n: usize, rows: &[u128]) -> Result<Self> {
        if n > MAX_LENGTH {
            return Err(Error::TooLarge { what: "binary code length", size: n as u128, limit: MAX_LENGTH as u128 });
        }
        let mask = length_mask(n);
        let mut rows: Vec<u128> = rows.iter().map(|r| r & mask).collect();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..n {
            let bit = 1u128 << col;
            let Some(p) = (rank..rows.len()).find(|&i| rows[i] & bit != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot_row = rows[rank];
            for (i, r) in rows.iter_mut().enumerate() {
                if i != rank && *r & bit != 0 {
                    *r ^= pivot_row;
                }
            }
            pivots.push(col);
            rank += 1;
        }
        rows.truncate(rank);
        Ok(Self { n, rows, pivots })
    }

    #[inline]
    pub fn length(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn rows(&self) -> &[u128] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn row_bools(&self, i: usize) -> Vec<bool> {
        (0..self.n).map(|j| self.rows[i] >> j & 1 == 1).collect()
    }

    /// Moves coordinate `j` to position `perm[j]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, found: perm.len() });
        }
        let rows: Vec<u128> = self
            .rows
            .iter()
            .map(|&r| (0..self.n).filter(|&j| r >> j & 1 == 1).fold(0u128, |acc, j| acc | 1 << perm[j]))
            .collect();
        Self::from_packed_rows(self.n, &rows)
    }

    /// True iff the code contains `word`.
    pub fn contains(&self, word: u128) -> bool {
        let mut w = word & length_mask(self.n);
        for (r, &p) in self.rows.iter().zip(&self.pivots) {
            if w >> p & 1 == 1 {
                w ^= r;
            }
        }
        w == 0
    }

    /// `d = n/2`, generators pairwise orthogonal and each of weight `0 mod 4`.
    pub fn is_doubly_even_self_dual(&self) -> bool {
        if self.n % 2 != 0 || 2 * self.dimension() != self.n {
            return false;
        }
        let rows = &self.rows;
        rows.iter().all(|r| r.count_ones() % 4 == 0)
            && rows.iter().enumerate().all(|(i, a)| rows[i + 1..].iter().all(|b| (a & b).count_ones() % 2 == 0))
    }
}

#[inline]
pub(crate) fn length_mask(n: usize) -> u128 {
    if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

/// Rank of a set of packed words over GF(2).
pub(crate) fn gf2_rank(words: &[u128]) -> usize {
    let mut basis: Vec<u128> = Vec::new();
    for &w in words {
        let mut w = w;
        for &b in &basis {
            w = w.min(w ^ b);
        }
        if w != 0 {
            basis.push(w);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}
