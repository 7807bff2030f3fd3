//! Seeded random search over four-negacirculant codes and neighbor
//! transforms. Trial `t` draws from its own ChaCha stream, so any trial
//! can be replayed alone and workers need no shared state.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::negacirculant::{check_four_nega_self_dual, check_four_nega_type_ii, four_negacirculant, FourNegaSpec};
use super::neighbor::{check_transform_type_ii, transform_matrix, TransformSpec};
use crate::error::{Error, Result, TransformCondition};
use crate::lattice::{check_extremal_small, check_extremal_z4_large, EnumerationOptions, Extremality};
use crate::zring::{is_self_dual_standard, is_type_ii, Modulus, RingVector, StdFormCode};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchKind {
    /// Random first rows of length `block_size`; codes have length `4 * block_size`.
    FourNegacirculant { block_size: usize },
    /// Random `x`, `y` applied to a fixed base code.
    Transform { base_id: String, base: StdFormCode },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Filters {
    pub type_ii: bool,
    /// Lattice extremality; implies `type_ii`.
    pub extremal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Construction {
    FourNegacirculant(FourNegaSpec),
    Transform { base_id: String, x: RingVector, y: RingVector },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub trial: u64,
    pub construction: Construction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rejection {
    NotSelfDual,
    NotTypeII,
    Transform(TransformCondition),
    NotExtremal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CandidateOutcome {
    Survivor { candidate: Candidate, code: StdFormCode, extremality: Option<Extremality> },
    Rejected { trial: u64, reason: Rejection },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchSpace {
    modulus: Modulus,
    kind: SearchKind,
    seed: u64,
    filters: Filters,
    /// Draws of `y` per transform trial before the trial is rejected.
    y_draws: u32,
    enumeration: EnumerationOptions,
}

impl SearchSpace {
    pub fn new(modulus: Modulus, kind: SearchKind, seed: u64, filters: Filters) -> Result<Self> {
        let length = match &kind {
            SearchKind::FourNegacirculant { block_size: 0 } => return Err(Error::EmptyDimension),
            SearchKind::FourNegacirculant { block_size } => 4 * block_size,
            SearchKind::Transform { base, .. } => {
                if base.modulus() != modulus {
                    return Err(Error::ModulusMismatch { left: modulus.m(), right: base.modulus().m() });
                }
                if !is_self_dual_standard(base) {
                    return Err(Error::Transform(TransformCondition::BaseSelfDual));
                }
                if (filters.type_ii || filters.extremal) && !is_type_ii(base)? {
                    return Err(Error::Transform(TransformCondition::BaseTypeII));
                }
                base.length()
            }
        };
        let filters = Filters { type_ii: filters.type_ii || filters.extremal, ..filters };
        if filters.type_ii && modulus.half().is_none() {
            return Err(Error::OddModulus { op: "search", m: modulus.m() });
        }
        if filters.extremal {
            let k = modulus.m() / 2;
            let small = k >= 3 && matches!(length, 24 | 32 | 40);
            let z4 = modulus.m() == 4 && matches!(length, 48 | 56 | 64);
            if !small && !z4 {
                return Err(Error::OutOfRegime {
                    check: "search extremal filter",
                    detail: format!("no extremality decider for m = {}, n = {length}", modulus.m()),
                });
            }
        }
        Ok(Self { modulus, kind, seed, filters, y_draws: 64, enumeration: EnumerationOptions::for_dimension(length) })
    }

    pub fn with_y_draws(mut self, y_draws: u32) -> Self {
        self.y_draws = y_draws.max(1);
        self
    }

    pub fn with_enumeration(mut self, enumeration: EnumerationOptions) -> Self {
        self.enumeration = enumeration;
        self
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn kind(&self) -> &SearchKind {
        &self.kind
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn filters(&self) -> Filters {
        self.filters
    }

    pub fn y_draws(&self) -> u32 {
        self.y_draws
    }

    pub fn length(&self) -> usize {
        match &self.kind {
            SearchKind::FourNegacirculant { block_size } => 4 * block_size,
            SearchKind::Transform { base, .. } => base.length(),
        }
    }

    fn rng(&self, trial: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial);
        rng
    }

    fn draw(&self, rng: &mut ChaCha8Rng, len: usize) -> RingVector {
        let m = self.modulus.m();
        let coords: Vec<u32> = (0..len).map(|_| rng.random_range(0..m)).collect();
        RingVector::new(self.modulus, coords).expect("residues in range")
    }

    /// The candidate of trial `trial`. For transforms, `y` is redrawn until
    /// it meets its conditions or the draws run out; the last draw is kept.
    pub fn candidate(&self, trial: u64) -> Candidate {
        let mut rng = self.rng(trial);
        let construction = match &self.kind {
            SearchKind::FourNegacirculant { block_size } => {
                let r_a = self.draw(&mut rng, *block_size);
                let r_b = self.draw(&mut rng, *block_size);
                Construction::FourNegacirculant(FourNegaSpec::new(r_a, r_b).expect("shapes agree"))
            }
            SearchKind::Transform { base_id, base } => {
                let n = base.half_length();
                let x = self.draw(&mut rng, n);
                let mut y = self.draw(&mut rng, n);
                for _ in 1..self.y_draws {
                    if self.transform_condition(&x, &y).is_none() {
                        break;
                    }
                    y = self.draw(&mut rng, n);
                }
                Construction::Transform { base_id: base_id.clone(), x, y }
            }
        };
        Candidate { trial, construction }
    }

    fn transform_condition(&self, x: &RingVector, y: &RingVector) -> Option<TransformCondition> {
        if self.filters.type_ii {
            return match check_transform_type_ii(x, y) {
                Ok(()) => None,
                Err(Error::Transform(c)) => Some(c),
                Err(_) => Some(TransformCondition::XYOrthogonal),
            };
        }
        let m = self.modulus;
        let (xs, ys) = (x.coords(), y.coords());
        if m.dot(xs, xs) != 0 {
            Some(TransformCondition::XSelfOrthogonal)
        } else if m.dot(ys, ys) != 0 {
            Some(TransformCondition::YSelfOrthogonal)
        } else if m.dot(xs, ys) != 0 {
            Some(TransformCondition::XYOrthogonal)
        } else {
            None
        }
    }

    /// Runs the filters in order: self-duality, Type II, extremality.
    pub fn evaluate(&self, candidate: Candidate) -> Result<CandidateOutcome> {
        let trial = candidate.trial;
        let reject = |reason| Ok(CandidateOutcome::Rejected { trial, reason });
        let code = match &candidate.construction {
            Construction::FourNegacirculant(spec) => {
                if spec.modulus() != self.modulus {
                    return Err(Error::ModulusMismatch { left: self.modulus.m(), right: spec.modulus().m() });
                }
                if !check_four_nega_self_dual(spec) {
                    return reject(Rejection::NotSelfDual);
                }
                if self.filters.type_ii && !check_four_nega_type_ii(spec)? {
                    return reject(Rejection::NotTypeII);
                }
                four_negacirculant(spec)
            }
            Construction::Transform { x, y, .. } => {
                let SearchKind::Transform { base, .. } = &self.kind else {
                    return Err(Error::OutOfRegime {
                        check: "search",
                        detail: "transform candidate in a four-negacirculant search".into(),
                    });
                };
                let spec = TransformSpec::new(base.clone(), x.clone(), y.clone())?;
                if let Some(c) = self.transform_condition(&spec.x, &spec.y) {
                    return reject(Rejection::Transform(c));
                }
                StdFormCode::new(transform_matrix(base.right_block(), &spec.x, &spec.y)?)?
            }
        };
        let extremality = if self.filters.extremal {
            let e = if self.modulus.m() == 4 {
                check_extremal_z4_large(&code, &self.enumeration)?
            } else {
                check_extremal_small(&code, &self.enumeration)?
            };
            if !e.extremal {
                return reject(Rejection::NotExtremal);
            }
            Some(e)
        } else {
            None
        };
        Ok(CandidateOutcome::Survivor { candidate, code, extremality })
    }

    pub fn run_trial(&self, trial: u64) -> Result<CandidateOutcome> {
        self.evaluate(self.candidate(trial))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z8() -> Modulus {
        Modulus::new(8).unwrap()
    }

    fn v(c: &[u32]) -> RingVector {
        RingVector::new(z8(), c.to_vec()).unwrap()
    }

    fn nega_space(filters: Filters) -> SearchSpace {
        SearchSpace::new(z8(), SearchKind::FourNegacirculant { block_size: 6 }, 42, filters).unwrap()
    }

    #[test]
    fn trials_are_reproducible_and_distinct() {
        let s = nega_space(Filters { type_ii: true, extremal: false });
        assert_eq!(s.candidate(17), s.candidate(17));
        assert_ne!(s.candidate(17), s.candidate(18));
        let other = SearchSpace::new(z8(), SearchKind::FourNegacirculant { block_size: 6 }, 43, s.filters()).unwrap();
        assert_ne!(s.candidate(17), other.candidate(17));
    }

    #[test]
    fn injected_table_pair_survives() {
        let s = nega_space(Filters { type_ii: true, extremal: true });
        let spec = FourNegaSpec::new(v(&[5, 3, 3, 3, 3, 1]), v(&[5, 5, 5, 6, 7, 7])).unwrap();
        let cand = Candidate { trial: 0, construction: Construction::FourNegacirculant(spec) };
        match s.evaluate(cand).unwrap() {
            CandidateOutcome::Survivor { code, extremality, .. } => {
                assert!(is_type_ii(&code).unwrap());
                assert!(extremality.unwrap().extremal);
            }
            other => panic!("rejected: {other:?}"),
        }
    }

    #[test]
    fn survivors_pass_their_filters() {
        let s = nega_space(Filters { type_ii: true, extremal: false });
        let mut survivors = 0;
        for t in 0..20_000 {
            if let CandidateOutcome::Survivor { code, .. } = s.run_trial(t).unwrap() {
                assert!(is_self_dual_standard(&code));
                assert!(is_type_ii(&code).unwrap());
                survivors += 1;
            }
        }
        assert!(survivors > 0);
    }

    #[test]
    fn transform_survivors_meet_preconditions() {
        let base = four_negacirculant(&FourNegaSpec::new(v(&[5, 3, 3, 3, 3, 1]), v(&[5, 5, 5, 6, 7, 7])).unwrap());
        let kind = SearchKind::Transform { base_id: "base".into(), base };
        let s = SearchSpace::new(z8(), kind, 7, Filters { type_ii: true, extremal: false }).unwrap();
        let mut survivors = 0;
        for t in 0..2_000 {
            match s.run_trial(t).unwrap() {
                CandidateOutcome::Survivor { candidate, code, .. } => {
                    let Construction::Transform { x, y, .. } = &candidate.construction else { unreachable!() };
                    assert!(check_transform_type_ii(x, y).is_ok());
                    assert!(is_type_ii(&code).unwrap());
                    survivors += 1;
                }
                CandidateOutcome::Rejected { reason, .. } => {
                    assert!(matches!(reason, Rejection::Transform(_)));
                }
            }
        }
        assert!(survivors > 0);
    }

    #[test]
    fn invalid_spaces() {
        let f = Filters { type_ii: true, extremal: true };
        assert!(SearchSpace::new(z8(), SearchKind::FourNegacirculant { block_size: 0 }, 0, f).is_err());
        assert!(SearchSpace::new(z8(), SearchKind::FourNegacirculant { block_size: 5 }, 0, f).is_err());
        let z7 = Modulus::new(7).unwrap();
        let f = Filters { type_ii: true, extremal: false };
        assert!(SearchSpace::new(z7, SearchKind::FourNegacirculant { block_size: 6 }, 0, f).is_err());
    }
}
