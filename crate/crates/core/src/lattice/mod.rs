//! Construction A lattices, exact short-vector enumeration and the
//! extremality deciders built on them.
//!
//! Norms are kept as integers scaled by `2k`: a lattice vector `v / sqrt(2k)`
//! with `v` in `rho(C) + 2k Z^n` is stored as `v`, so its true norm is
//! `|v|^2 / 2k`.

mod enumerate;
mod hnf;
mod lll;
mod matrix;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use enumerate::{BudgetExhausted, EnumerationPlan, Tally};
pub use hnf::hnf_with_modulus;
pub use lll::{deep_lll_reduce, lll_reduce, lll_reduce_gram, random_unimodular, LllParams, ReducedGram};
pub use matrix::IntMatrix;

use crate::error::{Error, Result};
use crate::zring::{is_type_ii, StdFormCode};

/// A nonnegative rational in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: i64,
    den: i64,
}

impl Ratio {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Overflow("zero denominator"));
        }
        let s = if den < 0 { -1 } else { 1 };
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()).max(1) as i64;
        Ok(Self { num: s * num / g, den: s * den / g })
    }

    pub fn integer(v: i64) -> Self {
        Self { num: v, den: 1 }
    }

    pub fn numer(self) -> i64 {
        self.num
    }

    pub fn denom(self) -> i64 {
        self.den
    }

    /// `floor(self * scale)`.
    pub fn scaled_floor(self, scale: i64) -> i64 {
        (self.num as i128 * scale as i128).div_euclid(self.den as i128) as i64
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `sqrt(2k) * A_{2k}(C)` given by an integer basis and its Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeRep {
    pub dim: usize,
    /// `2k`; true inner products are Gram entries divided by this.
    pub scale: i64,
    pub basis: IntMatrix,
    pub gram: IntMatrix,
}

impl LatticeRep {
    /// A lattice given only by a scaled Gram matrix.
    pub fn from_gram(gram: IntMatrix, scale: i64) -> Result<Self> {
        if gram.rows() != gram.cols() {
            return Err(Error::NotSquare { rows: gram.rows(), cols: gram.cols() });
        }
        for i in 0..gram.rows() {
            for j in 0..i {
                if gram.get(i, j) != gram.get(j, i) {
                    return Err(Error::NotPositiveDefinite);
                }
            }
        }
        Ok(Self { dim: gram.rows(), scale, basis: IntMatrix::identity(gram.rows()), gram })
    }

    pub fn determinant(&self) -> Result<i128> {
        self.gram.determinant()
    }

    /// `det(gram) = scale^n`, so the unscaled lattice is unimodular. With an
    /// upper triangular basis the diagonal is used instead of the Gram
    /// determinant, which leaves `i128` at dimension 64.
    pub fn is_unimodular(&self) -> Result<bool> {
        let b = &self.basis;
        let n = self.dim;
        let triangular = b.rows() == n
            && b.cols() == n
            && (0..n).all(|i| (0..i).all(|j| b.get(i, j) == 0))
            && b.gram()? == self.gram;
        if !triangular {
            let target = (0..n).try_fold(1i128, |acc, _| acc.checked_mul(self.scale as i128));
            return Ok(Some(self.determinant()?) == target);
        }
        let mut diag: u128 = 1;
        for i in 0..n {
            diag = diag.checked_mul(b.get(i, i).unsigned_abs() as u128).ok_or(Error::Overflow("basis determinant"))?;
        }
        let Some(sq) = diag.checked_mul(diag) else {
            // diag^2 = scale^n iff diag = scale^(n/2) for even n.
            if n % 2 == 1 {
                return Err(Error::Overflow("basis determinant"));
            }
            let half = (0..n / 2).try_fold(1u128, |acc, _| acc.checked_mul(self.scale as u128));
            return Ok(half == Some(diag));
        };
        let full = (0..n).try_fold(1u128, |acc, _| acc.checked_mul(self.scale as u128));
        Ok(full == Some(sq))
    }

    /// Every true norm is an even integer.
    pub fn is_even(&self) -> bool {
        (0..self.dim).all(|i| self.gram.get(i, i) % (2 * self.scale) == 0)
            && (0..self.dim).all(|i| (0..i).all(|j| self.gram.get(i, j) % self.scale == 0))
    }
}

/// Construction A: the lattice `rho(C) + 2k Z^n`, scaled by `sqrt(2k)`.
pub fn construction_a(code: &StdFormCode) -> Result<LatticeRep> {
    let m = code.modulus();
    let k = m.half().ok_or(Error::OddModulus { op: "construction_a", m: m.m() })?;
    let n = code.length();
    let gens: Vec<Vec<i64>> =
        code.generator_rows().iter().map(|r| r.coords().iter().map(|&c| c as i64).collect()).collect();
    let scale = 2 * k as i64;
    let basis = hnf_with_modulus(&gens, n, scale)?;
    let gram = basis.gram()?;
    Ok(LatticeRep { dim: n, scale, basis, gram })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnumerationOptions {
    pub node_budget: u64,
    pub lll: LllParams,
    /// Random rebasings tried before enumeration; the cheapest is kept.
    pub rebase_retries: usize,
    /// Repeat the count on an independently rebased basis and compare.
    pub cross_check: bool,
    pub seed: u64,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self {
            node_budget: 50_000_000_000,
            lll: LllParams::default(),
            rebase_retries: 0,
            cross_check: true,
            seed: 0x5eed,
        }
    }
}

impl EnumerationOptions {
    /// Defaults tuned by dimension: cross-checking up to 32, deep
    /// insertion and rebasing retries from 56.
    pub fn for_dimension(n: usize) -> Self {
        let mut o = Self { cross_check: n <= 32, ..Self::default() };
        if n >= 56 {
            o.lll = LllParams { delta: 0.999, deep_insertion: true };
            o.rebase_retries = 8;
        }
        o
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortVectorReport {
    /// Smallest nonzero true norm found, if any.
    pub min_norm: Option<Ratio>,
    /// Number of vectors, counting `v` and `-v`, at `min_norm`.
    pub kissing: u64,
    /// `(true norm, number of vectors)` for every norm found.
    pub norm_counts: Vec<(Ratio, u64)>,
    pub enumerated_bound: Ratio,
    pub exhaustive: bool,
    pub nodes: u64,
}

impl ShortVectorReport {
    pub fn from_tally(tally: &Tally, scale: i64, bound: Ratio) -> Result<Self> {
        let norm_counts = scaled_counts(&tally.pairs, scale)?;
        let (min_norm, kissing) = match norm_counts.first() {
            Some(&(r, c)) => (Some(r), c),
            None => (None, 0),
        };
        Ok(Self { min_norm, kissing, norm_counts, enumerated_bound: bound, exhaustive: true, nodes: tally.nodes })
    }

    pub fn count_at(&self, norm: Ratio) -> u64 {
        self.norm_counts.iter().find(|p| p.0 == norm).map_or(0, |p| p.1)
    }
}

fn scaled_counts(pairs: &BTreeMap<i64, u64>, scale: i64) -> Result<Vec<(Ratio, u64)>> {
    pairs.iter().map(|(&s, &c)| Ok((Ratio::new(s, scale)?, 2 * c))).collect()
}

/// State of an enumeration stopped by its node budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialEnumeration {
    pub nodes: u64,
    /// Counts over the subtrees visited so far; lower bounds only.
    pub norm_counts: Vec<(Ratio, u64)>,
    pub completed_subtrees: usize,
    pub total_subtrees: usize,
}

/// Reduces `lat` for enumeration up to `bound`, with the rebasing stream
/// selected by `stream`.
pub fn plan_enumeration(
    lat: &LatticeRep,
    bound: Ratio,
    opts: &EnumerationOptions,
    stream: u64,
) -> Result<EnumerationPlan> {
    if bound <= Ratio::integer(0) {
        return Err(Error::OutOfRegime { check: "short_vectors", detail: "bound must be positive".into() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(stream);
    EnumerationPlan::new(&lat.gram, opts.lll, opts.rebase_retries, bound.scaled_floor(lat.scale), &mut rng)
}

/// Every lattice vector of true norm at most `bound`.
pub fn short_vectors(lat: &LatticeRep, bound: Ratio, opts: &EnumerationOptions) -> Result<ShortVectorReport> {
    short_vectors_with(lat, bound, opts, |_, _| {})
}

/// As [`short_vectors`], also passing each counted vector (one of each
/// `{v, -v}`, as integer coordinates of `sqrt(2k) v`) and its true norm to
/// `visit`.
pub fn short_vectors_with(
    lat: &LatticeRep,
    bound: Ratio,
    opts: &EnumerationOptions,
    mut visit: impl FnMut(&[i64], Ratio),
) -> Result<ShortVectorReport> {
    let scaled = bound.scaled_floor(lat.scale);
    let plan = plan_enumeration(lat, bound, opts, 0)?;
    let mut err = None;
    let tally = plan
        .enumerate_subtree(&[], scaled, opts.node_budget, |x, norm| {
            let coeffs = plan.to_input_coefficients(x);
            match (ambient(&lat.basis, &coeffs), Ratio::new(norm, lat.scale)) {
                (Ok(v), Ok(r)) => visit(&v, r),
                (Err(e), _) | (_, Err(e)) => err = Some(e),
            }
        })
        .map_err(|e| budget_error(&e.partial, lat.scale, 0, 1))?;
    if let Some(e) = err {
        return Err(e);
    }
    if opts.cross_check {
        let second = plan_enumeration(lat, bound, opts, 1)?;
        let other = second
            .enumerate_subtree(&[], scaled, opts.node_budget, |_, _| {})
            .map_err(|e| budget_error(&e.partial, lat.scale, 0, 1))?;
        if other.pairs != tally.pairs {
            return Err(Error::CrossCheckMismatch);
        }
    }
    ShortVectorReport::from_tally(&tally, lat.scale, bound)
}

pub fn budget_error(partial: &Tally, scale: i64, completed: usize, total: usize) -> Error {
    Error::NodeBudgetExhausted(alloc::boxed::Box::new(PartialEnumeration {
        nodes: partial.nodes,
        norm_counts: scaled_counts(&partial.pairs, scale).unwrap_or_default(),
        completed_subtrees: completed,
        total_subtrees: total,
    }))
}

fn ambient(basis: &IntMatrix, coeffs: &[i64]) -> Result<Vec<i64>> {
    let mut v = alloc::vec![0i128; basis.cols()];
    for (i, &c) in coeffs.iter().enumerate() {
        if c != 0 {
            for (o, &b) in v.iter_mut().zip(basis.row(i)) {
                *o += c as i128 * b as i128;
            }
        }
    }
    v.into_iter().map(|x| i64::try_from(x).map_err(|_| Error::Overflow("lattice vector"))).collect()
}

/// Outcome of an extremality decision, with the enumeration behind it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extremality {
    pub extremal: bool,
    pub report: ShortVectorReport,
}

fn require_type_ii(code: &StdFormCode) -> Result<()> {
    if is_type_ii(code)? {
        Ok(())
    } else {
        Err(Error::NotTypeII)
    }
}

/// Checks the regime of [`check_extremal_small`] without enumerating.
pub fn small_regime(code: &StdFormCode) -> Result<()> {
    let k = code.modulus().half().unwrap_or(0);
    let n = code.length();
    if k < 3 || !matches!(n, 24 | 32 | 40) {
        return Err(Error::OutOfRegime {
            check: "is_extremal_small",
            detail: format!("needs k >= 3 and length 24, 32 or 40; got m = {}, n = {n}", code.modulus().m()),
        });
    }
    require_type_ii(code)
}

/// For `k >= 3` and length 24, 32 or 40, a Type II code is extremal iff
/// its Construction A lattice has minimum norm 4.
pub fn decide_small(report: &ShortVectorReport) -> bool {
    report.min_norm == Some(Ratio::integer(4))
}

pub fn check_extremal_small(code: &StdFormCode, opts: &EnumerationOptions) -> Result<Extremality> {
    small_regime(code)?;
    let report = short_vectors(&construction_a(code)?, Ratio::integer(4), opts)?;
    Ok(Extremality { extremal: decide_small(&report), report })
}

pub fn is_extremal_small(code: &StdFormCode, opts: &EnumerationOptions) -> Result<bool> {
    check_extremal_small(code, opts).map(|e| e.extremal)
}

/// Checks the regime of [`check_extremal_z4_large`] without enumerating.
pub fn z4_large_regime(code: &StdFormCode) -> Result<()> {
    let n = code.length();
    if code.modulus().m() != 4 || !matches!(n, 48 | 56 | 64) {
        return Err(Error::OutOfRegime {
            check: "is_extremal_z4_large",
            detail: format!("needs Z4 and length 48, 56 or 64; got m = {}, n = {n}", code.modulus().m()),
        });
    }
    require_type_ii(code)
}

/// The Z4 criterion for lengths 48, 56 and 64: extremal iff the lattice
/// has minimum norm 4 and exactly `2n` vectors of norm 4.
pub fn decide_z4_large(n: usize, report: &ShortVectorReport) -> bool {
    report.min_norm == Some(Ratio::integer(4)) && report.kissing == 2 * n as u64
}

pub fn check_extremal_z4_large(code: &StdFormCode, opts: &EnumerationOptions) -> Result<Extremality> {
    z4_large_regime(code)?;
    let report = short_vectors(&construction_a(code)?, Ratio::integer(4), opts)?;
    Ok(Extremality { extremal: decide_z4_large(code.length(), &report), report })
}

pub fn is_extremal_z4_large(code: &StdFormCode, opts: &EnumerationOptions) -> Result<bool> {
    check_extremal_z4_large(code, opts).map(|e| e.extremal)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exactness {
    Exact,
    /// The lattice minimum reached `2k`, where it no longer reflects the
    /// code's minimum Euclidean weight.
    LowerBound,
}

/// Minimum Euclidean weight of a Type II code read off its lattice: with
/// `mu` the minimum norm, `d_E = 2k mu` when `mu < 2k`, and `d_E >= 4k^2`
/// otherwise.
pub fn min_euclidean_weight(code: &StdFormCode, opts: &EnumerationOptions) -> Result<(u64, Exactness)> {
    require_type_ii(code)?;
    let k =
        code.modulus().half().ok_or(Error::OddModulus { op: "min_euclidean_weight", m: code.modulus().m() })? as i64;
    let lat = construction_a(code)?;
    // 2k e_i always has norm 2k, so only bounds below 2k need enumerating.
    for bound in (2..2 * k).step_by(2) {
        let report = short_vectors(&lat, Ratio::integer(bound), opts)?;
        if let Some(mu) = report.min_norm {
            // Even lattice: mu is an even integer below 2k.
            return Ok(((2 * k * mu.numer()) as u64, Exactness::Exact));
        }
    }
    Ok(((4 * k * k) as u64, Exactness::LowerBound))
}
