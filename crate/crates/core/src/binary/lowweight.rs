//! Exact low-weight enumeration with disjoint information sets.
//!
//! If `I_1, ..., I_t` are pairwise disjoint information sets, every codeword
//! of weight `<= w` has weight `<= floor(w/t)` on at least one of them. For
//! each set we enumerate the codewords whose restriction to it has weight at
//! most that bound, and keep a word only at the first set where the bound
//! holds, so each codeword is produced exactly once.

use alloc::vec;
use alloc::vec::Vec;

use super::weights::{Completeness, WeightEnumerator};
use super::BinaryCode;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LowWeightConfig {
    /// Upper limit on enumerated information-set combinations.
    pub max_work: u128,
}

impl Default for LowWeightConfig {
    fn default() -> Self {
        Self { max_work: 4_000_000_000 }
    }
}

/// Systematic generator matrices for a family of disjoint information sets.
#[derive(Debug, Clone)]
pub struct InformationSets {
    dimension: usize,
    /// For each set: its coordinate mask and `d` rows, row `i` being the
    /// codeword equal to the `i`-th unit vector on the set.
    sets: Vec<(u128, Vec<u128>)>,
}

impl InformationSets {
    /// Greedily collects disjoint information sets, scanning unused
    /// coordinates left to right.
    pub fn greedy(code: &BinaryCode) -> Self {
        let d = code.dimension();
        let n = code.length();
        let mut used: u128 = 0;
        let mut sets = Vec::new();
        if d == 0 {
            return Self { dimension: 0, sets };
        }
        loop {
            let mut rows = code.rows().to_vec();
            let mut mask = 0u128;
            let mut rank = 0;
            for col in 0..n {
                let bit = 1u128 << col;
                if used & bit != 0 {
                    continue;
                }
                let Some(p) = (rank..d).find(|&i| rows[i] & bit != 0) else {
                    continue;
                };
                rows.swap(rank, p);
                let pr = rows[rank];
                for (i, r) in rows.iter_mut().enumerate() {
                    if i != rank && *r & bit != 0 {
                        *r ^= pr;
                    }
                }
                mask |= bit;
                rank += 1;
                if rank == d {
                    break;
                }
            }
            if rank < d {
                break;
            }
            used |= mask;
            sets.push((mask, rows));
        }
        Self { dimension: d, sets }
    }

    pub fn count(&self) -> usize {
        self.sets.len()
    }

    /// Number of combinations visited when enumerating up to weight `wmax`.
    pub fn work(&self, wmax: usize) -> u128 {
        if self.dimension == 0 {
            return 1;
        }
        let per_set = wmax / self.sets.len();
        let mut total: u128 = 0;
        let mut c: u128 = 1;
        for i in 0..=per_set.min(self.dimension) {
            total += c;
            c = c * (self.dimension - i) as u128 / (i + 1) as u128;
        }
        total * self.sets.len() as u128
    }

    /// Calls `visit` once for every nonzero codeword of weight `<= wmax`.
    pub fn for_each_low_weight(&self, wmax: usize, mut visit: impl FnMut(u128, u32)) {
        if self.dimension == 0 {
            return;
        }
        let t = self.sets.len();
        let bound = (wmax / t) as u32;
        let masks: Vec<u128> = self.sets.iter().map(|s| s.0).collect();
        for (j, (_, rows)) in self.sets.iter().enumerate() {
            let earlier = &masks[..j];
            let mut emit = |w: u128| {
                let wt = w.count_ones();
                if wt as usize <= wmax && earlier.iter().all(|&m| (w & m).count_ones() > bound) {
                    visit(w, wt);
                }
            };
            combinations(rows, bound as usize, &mut emit);
        }
    }
}

/// Visits XORs of every nonempty subset of `rows` of size `<= depth`.
fn combinations(rows: &[u128], depth: usize, emit: &mut impl FnMut(u128)) {
    fn rec(rows: &[u128], start: usize, left: usize, acc: u128, emit: &mut impl FnMut(u128)) {
        for i in start..rows.len() {
            let w = acc ^ rows[i];
            emit(w);
            if left > 1 {
                rec(rows, i + 1, left - 1, w, emit);
            }
        }
    }
    if depth > 0 {
        rec(rows, 0, depth, 0, emit);
    }
}

/// Exact counts `A_w` for `w <= wmax`.
pub fn count_codewords_up_to_weight(
    code: &BinaryCode,
    wmax: usize,
    config: &LowWeightConfig,
) -> Result<WeightEnumerator> {
    let wmax = wmax.min(code.length());
    let sets = InformationSets::greedy(code);
    let work = sets.work(wmax);
    if work > config.max_work {
        return Err(Error::TooLarge { what: "low-weight enumeration work", size: work, limit: config.max_work });
    }
    let mut counts = vec![0u64; wmax + 1];
    counts[0] = 1;
    sets.for_each_low_weight(wmax, |_, wt| counts[wt as usize] += 1);
    Ok(WeightEnumerator { counts, completeness: Completeness::TruncatedAt(wmax) })
}

/// All codewords of weight exactly `w`, sorted. Fails if there are more
/// than `cap`.
pub fn words_of_weight(code: &BinaryCode, w: usize, cap: usize, config: &LowWeightConfig) -> Result<Vec<u128>> {
    let sets = InformationSets::greedy(code);
    let work = sets.work(w);
    if work > config.max_work {
        return Err(Error::TooLarge { what: "low-weight enumeration work", size: work, limit: config.max_work });
    }
    let mut out = Vec::new();
    let mut overflow = false;
    sets.for_each_low_weight(w, |word, wt| {
        if wt as usize == w {
            if out.len() < cap {
                out.push(word);
            } else {
                overflow = true;
            }
        }
    });
    if overflow {
        return Err(Error::TooLarge { what: "words at signature level", size: cap as u128 + 1, limit: cap as u128 });
    }
    out.sort_unstable();
    Ok(out)
}
