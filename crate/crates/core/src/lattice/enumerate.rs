//! Schnorr–Euchner enumeration of short lattice vectors.
//!
//! Pruning uses a floating Cholesky factor of the reduced Gram matrix with
//! the radius inflated by a slack factor. Every leaf is re-verified with
//! the exact integer Gram matrix before it is counted, so rounding can
//! only cost extra nodes, never a wrong count, unless it prunes a true
//! short vector; the slack and the measured factorization residual guard
//! against that.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::lll::{congruent, lll_reduce_gram, random_unimodular, LllParams};
use super::matrix::IntMatrix;
use crate::error::{Error, Result};

const BASE_SLACK: f64 = 1e-9;

/// A reduced Gram matrix ready for enumeration.
#[derive(Debug, Clone)]
pub struct EnumerationPlan {
    n: usize,
    /// Reduced Gram, exact.
    gram: IntMatrix,
    /// Rows express the reduced basis in terms of the input basis.
    transform: IntMatrix,
    bstar: Vec<f64>,
    /// `mu[i * n + j]` for `j < i`.
    mu: Vec<f64>,
    slack: f64,
}

/// Counts from one enumeration run. `pairs` maps an exact scaled norm to
/// the number of `{v, -v}` pairs found.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tally {
    pub nodes: u64,
    pub pairs: BTreeMap<i64, u64>,
}

impl Tally {
    pub fn merge(&mut self, other: &Tally) {
        self.nodes += other.nodes;
        for (&k, &v) in &other.pairs {
            *self.pairs.entry(k).or_default() += v;
        }
    }
}

/// Returned when the node budget runs out inside a subtree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetExhausted {
    pub partial: Tally,
}

impl EnumerationPlan {
    /// Reduces `gram` and, after `retries` random rebasings, keeps the
    /// basis with the smallest estimated cost at `bound`.
    pub fn new(gram: &IntMatrix, lll: LllParams, retries: usize, bound: i64, rng: &mut impl rand::Rng) -> Result<Self> {
        let mut best = Self::from_reduced(gram, lll)?;
        let mut best_cost = best.cost_estimate(bound);
        for _ in 0..retries {
            let u = random_unimodular(gram.rows(), rng);
            let mut cand = Self::from_reduced(&congruent(gram, &u)?, lll)?;
            cand.transform = cand.transform.mul(&u)?;
            let cost = cand.cost_estimate(bound);
            if cost < best_cost {
                best = cand;
                best_cost = cost;
            }
        }
        Ok(best)
    }

    fn from_reduced(gram: &IntMatrix, lll: LllParams) -> Result<Self> {
        let red = lll_reduce_gram(gram, lll)?;
        let (bstar, mu, slack) = cholesky(&red.gram)?;
        Ok(Self { n: gram.rows(), gram: red.gram, transform: red.transform, bstar, mu, slack })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn reduced_gram(&self) -> &IntMatrix {
        &self.gram
    }

    /// Maps coefficients in the reduced basis to the input basis.
    pub fn to_input_coefficients(&self, x: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.n];
        for (i, &xi) in x.iter().enumerate() {
            if xi != 0 {
                for (o, &t) in out.iter_mut().zip(self.transform.row(i)) {
                    *o += xi * t;
                }
            }
        }
        out
    }

    /// Gaussian-heuristic estimate of the number of enumeration nodes, as
    /// a natural logarithm.
    pub fn cost_estimate(&self, bound: i64) -> f64 {
        let n = self.n;
        let ln_r = libm::log(bound.max(1) as f64);
        let ln_pi = libm::log(core::f64::consts::PI);
        let mut acc = f64::NEG_INFINITY;
        let mut ln_det = 0.0;
        for k in 1..=n {
            ln_det += 0.5 * libm::log(self.bstar[n - k]);
            let h = k as f64 / 2.0;
            let ln_nodes = h * ln_pi - libm::lgamma(h + 1.0) + h * ln_r - ln_det;
            acc = log_add(acc, ln_nodes);
        }
        acc - core::f64::consts::LN_2
    }

    fn radius(&self, bound: i64) -> f64 {
        bound as f64 * (1.0 + self.slack)
    }

    /// Coordinate prefixes `(x_{n-1}, ..., x_{n-depth})` of every subtree
    /// that can hold a vector of scaled norm at most `bound`. One of each
    /// `{v, -v}` lies under exactly one prefix.
    pub fn frontier(&self, bound: i64, depth: usize) -> Vec<Vec<i64>> {
        let depth = depth.min(self.n);
        let mut out = Vec::new();
        if depth == 0 {
            out.push(Vec::new());
            return out;
        }
        let stop = self.n - depth;
        let mut nodes = 0;
        let _ = self.walk(&[], stop, self.radius(bound), u64::MAX, &mut nodes, |x, _| {
            out.push(x[stop..].iter().rev().copied().collect());
        });
        out
    }

    /// Enumerates the subtree under `prefix`, counting vectors of exact
    /// scaled norm at most `bound`. `visit` receives each counted vector as
    /// coefficients in the reduced basis, one per `{v, -v}` pair.
    pub fn enumerate_subtree(
        &self,
        prefix: &[i64],
        bound: i64,
        node_budget: u64,
        mut visit: impl FnMut(&[i64], i64),
    ) -> core::result::Result<Tally, BudgetExhausted> {
        let mut tally = Tally::default();
        let mut nodes = 0;
        let res = self.walk(prefix, 0, self.radius(bound), node_budget, &mut nodes, |x, _| {
            if x.iter().all(|&v| v == 0) {
                return;
            }
            let norm = self.exact_norm(x);
            if norm <= bound {
                *tally.pairs.entry(norm).or_default() += 1;
                visit(x, norm);
            }
        });
        tally.nodes = nodes;
        match res {
            Ok(()) => Ok(tally),
            Err(()) => Err(BudgetExhausted { partial: tally }),
        }
    }

    pub fn exact_norm(&self, x: &[i64]) -> i64 {
        let n = self.n;
        let mut s: i128 = 0;
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            let mut row: i128 = self.gram.get(i, i) as i128 * x[i] as i128;
            for j in i + 1..n {
                row += 2 * self.gram.get(i, j) as i128 * x[j] as i128;
            }
            s += row * x[i] as i128;
        }
        s as i64
    }

    /// Depth-first zigzag walk over levels `n-1` down to `stop`, with the
    /// levels above `n - prefix.len()` fixed. Calls `leaf` for every
    /// coordinate vector whose partial norm over levels `>= stop` is within
    /// `radius`. When every coordinate above a level is zero only
    /// nonnegative values are tried there.
    fn walk(
        &self,
        prefix: &[i64],
        stop: usize,
        radius: f64,
        budget: u64,
        nodes: &mut u64,
        mut leaf: impl FnMut(&[i64], f64),
    ) -> core::result::Result<(), ()> {
        let n = self.n;
        let top = n - prefix.len();
        let mut x = vec![0i64; n];
        for (t, &v) in prefix.iter().enumerate() {
            x[n - 1 - t] = v;
        }
        let mut c = vec![0f64; n];
        let mut l = vec![0f64; n + 1];
        let mut dx = vec![0i64; n];
        let mut zero_above = vec![true; n + 1];

        for i in (top..n).rev() {
            c[i] = self.center(&x, i);
            let d = x[i] as f64 - c[i];
            l[i] = l[i + 1] + self.bstar[i] * d * d;
            zero_above[i] = zero_above[i + 1] && x[i] == 0;
        }
        if l[top] > radius {
            return Ok(());
        }
        if top <= stop {
            leaf(&x, l[top]);
            return Ok(());
        }

        let mut i = top - 1;
        self.start_level(&mut x, &mut c, &mut dx, &zero_above, i);
        loop {
            *nodes += 1;
            if *nodes > budget {
                return Err(());
            }
            let d = x[i] as f64 - c[i];
            let li = l[i + 1] + self.bstar[i] * d * d;
            if li <= radius {
                if i == stop {
                    leaf(&x, li);
                    Self::next_sibling(&mut x, &mut dx, &zero_above, i);
                } else {
                    l[i] = li;
                    zero_above[i] = zero_above[i + 1] && x[i] == 0;
                    i -= 1;
                    self.start_level(&mut x, &mut c, &mut dx, &zero_above, i);
                }
            } else {
                i += 1;
                if i >= top {
                    return Ok(());
                }
                Self::next_sibling(&mut x, &mut dx, &zero_above, i);
            }
        }
    }

    fn center(&self, x: &[i64], i: usize) -> f64 {
        let n = self.n;
        let mut s = 0.0;
        for j in i + 1..n {
            if x[j] != 0 {
                s -= self.mu[j * n + i] * x[j] as f64;
            }
        }
        s
    }

    fn start_level(&self, x: &mut [i64], c: &mut [f64], dx: &mut [i64], zero_above: &[bool], i: usize) {
        if zero_above[i + 1] {
            c[i] = 0.0;
            x[i] = 0;
            dx[i] = 1;
        } else {
            c[i] = self.center(x, i);
            x[i] = libm::round(c[i]) as i64;
            dx[i] = if c[i] >= x[i] as f64 { 1 } else { -1 };
        }
    }

    fn next_sibling(x: &mut [i64], dx: &mut [i64], zero_above: &[bool], i: usize) {
        if zero_above[i + 1] {
            x[i] += 1;
        } else {
            x[i] += dx[i];
            dx[i] = -dx[i] - dx[i].signum();
        }
    }
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + libm::log1p(libm::exp(lo - hi))
}

/// Floating `G = R^T D R` factorization and a slack covering its measured
/// reconstruction error.
fn cholesky(g: &IntMatrix) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    let n = g.rows();
    let mut r = vec![0f64; n * n];
    let mut mu = vec![0f64; n * n];
    let mut bstar = vec![0f64; n];
    for i in 0..n {
        for j in 0..=i {
            let mut v = g.get(i, j) as f64;
            for t in 0..j {
                v -= mu[j * n + t] * r[i * n + t];
            }
            r[i * n + j] = v;
            if j < i {
                mu[i * n + j] = v / bstar[j];
            }
        }
        bstar[i] = r[i * n + i];
        if bstar[i].is_nan() || bstar[i] <= 0.0 {
            return Err(Error::NotPositiveDefinite);
        }
    }
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..=i {
            let mut v = if i == j { bstar[i] } else { mu[i * n + j] * bstar[j] };
            for t in 0..j {
                v += mu[i * n + t] * mu[j * n + t] * bstar[t];
            }
            let gij = g.get(i, j) as f64;
            let scale = libm::sqrt((g.get(i, i) as f64) * (g.get(j, j) as f64)).max(1.0);
            worst = worst.max(libm::fabs(v - gij) / scale);
        }
    }
    if worst > 1e-6 {
        return Err(Error::NotPositiveDefinite);
    }
    Ok((bstar, mu, BASE_SLACK + (n as f64) * 1e3 * worst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn plan(rows: &[&[i64]]) -> EnumerationPlan {
        let g = IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap();
        EnumerationPlan::new(&g, LllParams::default(), 0, 1, &mut ChaCha8Rng::seed_from_u64(0)).unwrap()
    }

    #[test]
    fn hexagonal() {
        let p = plan(&[&[2, 1], &[1, 2]]);
        let t = p.enumerate_subtree(&[], 2, u64::MAX, |_, _| {}).unwrap();
        assert_eq!(t.pairs.into_iter().collect::<Vec<_>>(), [(2, 3)]);
    }

    #[test]
    fn frontier_partitions_the_count() {
        let p = plan(&[&[4, 1, 0, 1], &[1, 4, 1, 0], &[0, 1, 4, 1], &[1, 0, 1, 4]]);
        let whole = p.enumerate_subtree(&[], 12, u64::MAX, |_, _| {}).unwrap();
        for depth in 1..=4 {
            let mut sum = Tally::default();
            for pre in p.frontier(12, depth) {
                sum.merge(&p.enumerate_subtree(&pre, 12, u64::MAX, |_, _| {}).unwrap());
            }
            assert_eq!(sum.pairs, whole.pairs, "depth {depth}");
        }
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let p = plan(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let err = p.enumerate_subtree(&[], 9, 5, |_, _| {}).unwrap_err();
        assert_eq!(err.partial.nodes, 6);
    }

    #[test]
    fn not_positive_definite() {
        let g = IntMatrix::from_rows(&[vec![1, 2], vec![2, 1]]).unwrap();
        let r = EnumerationPlan::new(&g, LllParams::default(), 0, 1, &mut ChaCha8Rng::seed_from_u64(0));
        assert!(r.is_err());
    }
}
