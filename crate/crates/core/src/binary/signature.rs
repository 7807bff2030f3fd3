//! Permutation-invariant fingerprints of binary codes.
//!
//! Two codes with different signatures are inequivalent under coordinate
//! permutations. Equal signatures are only evidence of equivalence.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::lowweight::{count_codewords_up_to_weight, words_of_weight, LowWeightConfig};
use super::{gf2_rank, BinaryCode};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignatureConfig {
    /// Weight counts are recorded for weights `0..=wmax`.
    pub wmax: usize,
    /// A second weight level is added when the first has fewer words.
    pub escalation_threshold: usize,
    /// Maximum number of words enumerated at one level.
    pub word_cap: usize,
    /// Size of the coordinate subsets whose coverage by words is recorded;
    /// 0 turns coverage off. At most 9.
    pub subset_size: usize,
    /// Coverage is left empty at a level where `words * C(weight, subset_size)`
    /// exceeds this.
    pub coverage_cap: u64,
    pub low_weight: LowWeightConfig,
}

impl Default for SignatureConfig {
    fn default() -> Self {
        Self {
            wmax: 12,
            escalation_threshold: 64,
            word_cap: 1_000_000,
            subset_size: 4,
            coverage_cap: 50_000_000,
            low_weight: LowWeightConfig::default(),
        }
    }
}

/// Invariants of the set of codewords of one weight.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LevelSignature {
    pub weight: usize,
    pub count: usize,
    /// `(|supp(a) & supp(b)|, number of unordered pairs {a,b})`.
    pub intersections: Vec<(u32, u64)>,
    /// `(per-word intersection profile, multiplicity)`; a profile lists
    /// `(size, count)` over all other words at this level.
    pub word_profiles: Vec<(Vec<(u32, u32)>, u32)>,
    /// `(words through a coordinate, number of coordinates)`.
    pub coordinate_degrees: Vec<(u32, u32)>,
    /// Component sizes, descending, of the graph joining words with
    /// intersecting supports.
    pub components: Vec<u32>,
    /// GF(2) rank of the words.
    pub span_rank: usize,
    /// `(words containing a coordinate subset, number of such subsets)`
    /// over all subsets of the configured size.
    pub subset_coverage: Vec<(u32, u64)>,
    /// `(per-word coverage profile, multiplicity)`; a profile lists
    /// `(coverage, count)` over the subsets inside one word.
    pub word_coverage_profiles: Vec<(Vec<(u32, u32)>, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InvariantSignature {
    pub length: usize,
    pub dimension: usize,
    pub weight_counts: Vec<u64>,
    pub levels: Vec<LevelSignature>,
    pub config: SignatureConfig,
}

impl core::hash::Hash for SignatureConfig {
    fn hash<H: core::hash::Hasher>(&self, state: &mut H) {
        self.wmax.hash(state);
        self.escalation_threshold.hash(state);
        self.word_cap.hash(state);
        self.subset_size.hash(state);
        self.coverage_cap.hash(state);
        self.low_weight.max_work.hash(state);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignatureVerdict {
    Inequivalent,
    Indistinguishable,
}

pub fn invariant_signature(code: &BinaryCode, config: &SignatureConfig) -> Result<InvariantSignature> {
    if !code.is_doubly_even_self_dual() {
        return Err(Error::OutOfRegime {
            check: "invariant_signature",
            detail: "code is not doubly even self-dual".into(),
        });
    }
    let weights = count_codewords_up_to_weight(code, config.wmax, &config.low_weight)?;
    let nonzero: Vec<usize> = (1..weights.counts.len()).filter(|&w| weights.counts[w] > 0).collect();
    let Some(&first) = nonzero.first() else {
        return Err(Error::OutOfRegime {
            check: "invariant_signature",
            detail: "no nonzero codeword within wmax".into(),
        });
    };
    let mut level_weights = vec![first];
    if (weights.counts[first] as usize) < config.escalation_threshold {
        if let Some(&second) = nonzero.get(1) {
            level_weights.push(second);
        }
    }
    let mut levels = Vec::new();
    for w in level_weights {
        let words = words_of_weight(code, w, config.word_cap, &config.low_weight)?;
        levels.push(level_signature(code.length(), w, &words, config));
    }
    Ok(InvariantSignature {
        length: code.length(),
        dimension: code.dimension(),
        weight_counts: weights.counts,
        levels,
        config: *config,
    })
}

fn level_signature(n: usize, weight: usize, words: &[u128], config: &SignatureConfig) -> LevelSignature {
    let count = words.len();
    let mut pairs: BTreeMap<u32, u64> = BTreeMap::new();
    let mut profiles: Vec<BTreeMap<u32, u32>> = vec![BTreeMap::new(); count];
    let mut dsu = Dsu::new(count);
    for i in 0..count {
        for j in i + 1..count {
            let s = (words[i] & words[j]).count_ones();
            *pairs.entry(s).or_default() += 1;
            *profiles[i].entry(s).or_default() += 1;
            *profiles[j].entry(s).or_default() += 1;
            if s > 0 {
                dsu.union(i, j);
            }
        }
    }

    let mut profile_counts: BTreeMap<Vec<(u32, u32)>, u32> = BTreeMap::new();
    for p in profiles {
        *profile_counts.entry(p.into_iter().collect()).or_default() += 1;
    }

    let mut degree_counts: BTreeMap<u32, u32> = BTreeMap::new();
    for c in 0..n {
        let deg = words.iter().filter(|&&w| w >> c & 1 == 1).count() as u32;
        *degree_counts.entry(deg).or_default() += 1;
    }

    let mut sizes: BTreeMap<usize, u32> = BTreeMap::new();
    for i in 0..count {
        *sizes.entry(dsu.find(i)).or_default() += 1;
    }
    let mut components: Vec<u32> = sizes.into_values().collect();
    components.sort_unstable_by(|a, b| b.cmp(a));
    let (subset_coverage, word_coverage_profiles) = coverage(n, weight, words, config);

    LevelSignature {
        weight,
        count,
        intersections: pairs.into_iter().collect(),
        word_profiles: profile_counts.into_iter().collect(),
        coordinate_degrees: degree_counts.into_iter().collect(),
        components,
        span_rank: gf2_rank(words),
        subset_coverage,
        word_coverage_profiles,
    }
}

fn binomial(n: u64, t: u64) -> u64 {
    (0..t).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Calls `f` with a packed key for every `t`-subset of `support`.
fn for_each_subset(support: &[u32], t: usize, mut f: impl FnMut(u64)) {
    if t > support.len() {
        return;
    }
    let mut idx: Vec<usize> = (0..t).collect();
    loop {
        f(idx.iter().fold(0u64, |k, &i| k << 7 | support[i] as u64));
        let Some(pos) = (0..t).rev().find(|&p| idx[p] < support.len() - t + p) else {
            return;
        };
        idx[pos] += 1;
        for q in pos + 1..t {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

/// Subset cover counts, and per-word profiles of those counts.
type Coverage = (Vec<(u32, u64)>, Vec<(Vec<(u32, u32)>, u32)>);

fn coverage(n: usize, weight: usize, words: &[u128], config: &SignatureConfig) -> Coverage {
    let t = config.subset_size;
    let work = (words.len() as u64).saturating_mul(binomial(weight as u64, t as u64));
    if t == 0 || t > 9 || words.is_empty() || work > config.coverage_cap {
        return (Vec::new(), Vec::new());
    }
    let supports: Vec<Vec<u32>> = words.iter().map(|&w| (0..n as u32).filter(|&c| w >> c & 1 == 1).collect()).collect();
    let mut cover: BTreeMap<u64, u32> = BTreeMap::new();
    for s in &supports {
        for_each_subset(s, t, |k| *cover.entry(k).or_default() += 1);
    }
    let mut hist: BTreeMap<u32, u64> = BTreeMap::new();
    for &c in cover.values() {
        *hist.entry(c).or_default() += 1;
    }
    let uncovered = binomial(n as u64, t as u64) - cover.len() as u64;
    if uncovered > 0 {
        hist.insert(0, uncovered);
    }
    let mut profiles: BTreeMap<Vec<(u32, u32)>, u32> = BTreeMap::new();
    for s in &supports {
        let mut p: BTreeMap<u32, u32> = BTreeMap::new();
        for_each_subset(s, t, |k| *p.entry(cover[&k]).or_default() += 1);
        *profiles.entry(p.into_iter().collect()).or_default() += 1;
    }
    (hist.into_iter().collect(), profiles.into_iter().collect())
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

pub fn compare_signatures(a: &InvariantSignature, b: &InvariantSignature) -> Result<SignatureVerdict> {
    if a.config != b.config {
        return Err(Error::ConfigMismatch);
    }
    Ok(if a == b { SignatureVerdict::Indistinguishable } else { SignatureVerdict::Inequivalent })
}
