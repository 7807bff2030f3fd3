//! Weight distributions by exhaustive Gray-code sweep.

use alloc::vec;
use alloc::vec::Vec;

use super::BinaryCode;
use crate::error::{Error, Result};

pub const DEFAULT_MAX_EXHAUSTIVE_DIMENSION: usize = 28;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Completeness {
    Full,
    /// Exact counts for every weight `<= wmax`; nothing known above.
    TruncatedAt(usize),
}

/// `counts[w]` is the number of codewords of weight `w`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightEnumerator {
    pub counts: Vec<u64>,
    pub completeness: Completeness,
}

impl WeightEnumerator {
    pub fn get(&self, w: usize) -> u64 {
        self.counts.get(w).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Smallest nonzero weight with a codeword, among the weights covered.
    pub fn min_nonzero_weight(&self) -> Option<usize> {
        self.counts.iter().enumerate().skip(1).find(|&(_, &c)| c > 0).map(|(w, _)| w)
    }

    /// Restricts a full (or wider) enumerator to weights `<= wmax`.
    pub fn truncate(&self, wmax: usize) -> Self {
        let top = wmax.min(self.counts.len().saturating_sub(1));
        Self { counts: self.counts[..=top].to_vec(), completeness: Completeness::TruncatedAt(wmax) }
    }

    /// Adds another partial sweep of the same code.
    pub fn merge(&mut self, other: &Self) {
        if self.counts.len() < other.counts.len() {
            self.counts.resize(other.counts.len(), 0);
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }
}

/// Full weight distribution over all `2^d` codewords.
pub fn weight_distribution_exhaustive(code: &BinaryCode, max_dimension: usize) -> Result<WeightEnumerator> {
    weight_distribution_slice(code, max_dimension, 0, 0)
}

/// The part of the weight distribution coming from codewords whose
/// coefficients on the last `prefix_bits` basis rows spell `prefix`.
///
/// Summing the slices over all `2^prefix_bits` prefixes gives the full
/// distribution, so the sweep can be split across workers.
pub fn weight_distribution_slice(
    code: &BinaryCode,
    max_dimension: usize,
    prefix_bits: usize,
    prefix: u64,
) -> Result<WeightEnumerator> {
    let d = code.dimension();
    if d > max_dimension || d > 63 {
        return Err(Error::TooLarge {
            what: "dimension for exhaustive sweep",
            size: d as u128,
            limit: max_dimension.min(63) as u128,
        });
    }
    let prefix_bits = prefix_bits.min(d);
    let free = d - prefix_bits;
    let rows = code.rows();
    let start = (0..prefix_bits).filter(|&b| prefix >> b & 1 == 1).fold(0u128, |acc, b| acc ^ rows[free + b]);

    let mut counts = vec![0u64; code.length() + 1];
    sweep(&rows[..free], start, &mut counts);
    Ok(WeightEnumerator { counts, completeness: Completeness::Full })
}

/// Gray-code order visits `start + span(rows)`, one XOR per step.
fn sweep(rows: &[u128], start: u128, counts: &mut [u64]) {
    let mut word = start;
    counts[word.count_ones() as usize] += 1;
    let steps: u64 = 1 << rows.len();
    if rows.iter().all(|r| r >> 64 == 0) && start >> 64 == 0 {
        let rows64: Vec<u64> = rows.iter().map(|&r| r as u64).collect();
        let mut w = start as u64;
        for i in 1..steps {
            w ^= rows64[i.trailing_zeros() as usize];
            counts[w.count_ones() as usize] += 1;
        }
        return;
    }
    for i in 1..steps {
        word ^= rows[i.trailing_zeros() as usize];
        counts[word.count_ones() as usize] += 1;
    }
}

/// The weight distribution of the dual code by the MacWilliams identity,
/// or `None` if the transform is not integral (the input is not a weight
/// distribution of a linear code of that dimension).
pub fn macwilliams_dual(enumerator: &WeightEnumerator, dimension: usize) -> Option<Vec<u64>> {
    if enumerator.completeness != Completeness::Full {
        return None;
    }
    let n = enumerator.counts.len() - 1;
    let binom = binomials(n);
    let size = 1i128 << dimension;
    let mut out = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let mut acc: i128 = 0;
        for (i, &a) in enumerator.counts.iter().enumerate() {
            if a == 0 {
                continue;
            }
            acc += a as i128 * krawtchouk(&binom, n, i, j);
        }
        if acc % size != 0 || acc < 0 {
            return None;
        }
        out.push(u64::try_from(acc / size).ok()?);
    }
    Some(out)
}

fn binomials(n: usize) -> Vec<Vec<i128>> {
    let mut c = vec![vec![0i128; n + 1]; n + 1];
    for i in 0..=n {
        c[i][0] = 1;
        for j in 1..=i {
            c[i][j] = c[i - 1][j - 1] + if j < i { c[i - 1][j] } else { 0 };
        }
    }
    c
}

/// `K_j(i) = sum_s (-1)^s C(i,s) C(n-i, j-s)`.
fn krawtchouk(binom: &[Vec<i128>], n: usize, i: usize, j: usize) -> i128 {
    (0..=j.min(i))
        .filter(|&s| j - s <= n - i)
        .map(|s| {
            let t = binom[i][s] * binom[n - i][j - s];
            if s % 2 == 0 {
                t
            } else {
                -t
            }
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::super::testcodes::*;
    use super::*;

    #[test]
    fn hamming_distribution() {
        let e = weight_distribution_exhaustive(&hamming8(), 28).unwrap();
        assert_eq!(e.counts, [1, 0, 0, 0, 14, 0, 0, 0, 1]);
        assert_eq!(e.min_nonzero_weight(), Some(4));
    }

    #[test]
    fn golay_distribution() {
        let e = weight_distribution_exhaustive(&golay24(), 28).unwrap();
        assert_eq!(e.get(0), 1);
        assert_eq!(e.get(8), 759);
        assert_eq!(e.get(12), 2576);
        assert_eq!(e.get(16), 759);
        assert_eq!(e.get(24), 1);
        assert_eq!(e.total(), 4096);
    }

    #[test]
    fn zero_dimensional_code() {
        let c = BinaryCode::from_packed_rows(6, &[]).unwrap();
        let e = weight_distribution_exhaustive(&c, 28).unwrap();
        assert_eq!(e.counts, [1, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn slices_sum_to_full() {
        let c = golay24();
        let full = weight_distribution_exhaustive(&c, 28).unwrap();
        let mut acc = weight_distribution_slice(&c, 28, 3, 0).unwrap();
        for p in 1..8 {
            acc.merge(&weight_distribution_slice(&c, 28, 3, p).unwrap());
        }
        assert_eq!(acc, full);
    }

    #[test]
    fn dimension_ceiling() {
        assert!(matches!(weight_distribution_exhaustive(&golay24(), 10), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn macwilliams_fixes_self_dual_distributions() {
        for c in [hamming8(), golay24(), d_plus(16)] {
            let e = weight_distribution_exhaustive(&c, 28).unwrap();
            assert_eq!(macwilliams_dual(&e, c.dimension()).unwrap(), e.counts);
        }
        // The [8,1] repetition code is not self-dual: its dual is the even-weight code.
        let rep = BinaryCode::from_packed_rows(8, &[0xff]).unwrap();
        let e = weight_distribution_exhaustive(&rep, 28).unwrap();
        let dual = macwilliams_dual(&e, 1).unwrap();
        assert_eq!(dual, [1, 0, 28, 0, 70, 0, 28, 0, 1]);
    }
}
