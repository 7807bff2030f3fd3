//! Ordered parallel driver for [`SearchSpace`] and conversion of
//! survivors into catalog records.

use std::collections::BTreeMap;
use std::ops::Range;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use sdcodes_core::construct::{CandidateOutcome, Construction, Rejection, SearchSpace};
use sdcodes_core::zring::is_type_ii;

use crate::catalog::{CatalogEntry, Claims, ConstructionData};
use crate::error::Result;

const CHUNK: u64 = 1024;

#[derive(Debug, Clone)]
pub enum TrialResult {
    Outcome(CandidateOutcome),
    /// The extremality enumeration ran out of budget.
    Undecided {
        trial: u64,
        reason: String,
    },
}

impl TrialResult {
    pub fn trial(&self) -> u64 {
        match self {
            Self::Outcome(CandidateOutcome::Survivor { candidate, .. }) => candidate.trial,
            Self::Outcome(CandidateOutcome::Rejected { trial, .. }) | Self::Undecided { trial, .. } => *trial,
        }
    }
}

/// Trial counts per filter stage, in the order the filters run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SearchSummary {
    pub requested: u64,
    pub completed: u64,
    pub passed_self_dual: u64,
    pub passed_type_ii: u64,
    pub passed_extremal: u64,
    pub survivors: u64,
    pub undecided: u64,
    pub rejections: BTreeMap<String, u64>,
    pub partial: bool,
}

impl SearchSummary {
    fn record(&mut self, r: &TrialResult, space: &SearchSpace) {
        self.completed += 1;
        let f = space.filters();
        match r {
            TrialResult::Outcome(CandidateOutcome::Survivor { .. }) => {
                self.passed_self_dual += 1;
                self.passed_type_ii += u64::from(f.type_ii);
                self.passed_extremal += u64::from(f.extremal);
                self.survivors += 1;
            }
            TrialResult::Outcome(CandidateOutcome::Rejected { reason, .. }) => {
                match reason {
                    Rejection::NotTypeII => self.passed_self_dual += 1,
                    Rejection::NotExtremal => {
                        self.passed_self_dual += 1;
                        self.passed_type_ii += 1;
                    }
                    Rejection::NotSelfDual | Rejection::Transform(_) => {}
                }
                *self.rejections.entry(rejection_name(reason)).or_default() += 1;
            }
            TrialResult::Undecided { .. } => {
                self.passed_self_dual += 1;
                self.passed_type_ii += 1;
                self.undecided += 1;
            }
        }
    }
}

pub fn rejection_name(r: &Rejection) -> String {
    match r {
        Rejection::NotSelfDual => "not_self_dual".into(),
        Rejection::NotTypeII => "not_type_ii".into(),
        Rejection::NotExtremal => "not_extremal".into(),
        Rejection::Transform(c) => format!("transform: {c}"),
    }
}

/// Runs `trials` in parallel and hands results to `emit` in trial order.
/// Trials not started by `deadline` are dropped, and so is everything
/// after the first dropped trial, so the emitted stream is always a prefix
/// of the full one.
pub fn run_search(
    space: &SearchSpace,
    trials: Range<u64>,
    deadline: Option<Instant>,
    mut emit: impl FnMut(&TrialResult) -> Result<()>,
) -> Result<SearchSummary> {
    let mut summary = SearchSummary { requested: trials.end.saturating_sub(trials.start), ..Default::default() };
    let mut start = trials.start;
    while start < trials.end {
        let end = trials.end.min(start.saturating_add(CHUNK));
        let chunk: Vec<Option<TrialResult>> = (start..end)
            .into_par_iter()
            .map(|t| {
                if deadline.is_some_and(|d| Instant::now() >= d) {
                    return Ok(None);
                }
                match space.run_trial(t) {
                    Ok(o) => Ok(Some(TrialResult::Outcome(o))),
                    Err(e @ sdcodes_core::Error::NodeBudgetExhausted(_)) => {
                        Ok(Some(TrialResult::Undecided { trial: t, reason: e.to_string() }))
                    }
                    Err(e) => Err(e),
                }
            })
            .collect::<std::result::Result<_, _>>()?;
        for r in chunk {
            let Some(r) = r else {
                summary.partial = true;
                return Ok(summary);
            };
            summary.record(&r, space);
            emit(&r)?;
        }
        start = end;
    }
    Ok(summary)
}

/// A survivor as a catalog entry with id `S_<m>_<n>_<trial>`. `extremal`
/// is true only when the lattice check ran and succeeded.
pub fn survivor_entry(outcome: &CandidateOutcome) -> Result<Option<CatalogEntry>> {
    let CandidateOutcome::Survivor { candidate, code, extremality } = outcome else {
        return Ok(None);
    };
    let m = code.modulus().m();
    let n = code.length();
    let construction = match &candidate.construction {
        Construction::FourNegacirculant(spec) => {
            ConstructionData::FourNegacirculant { r_a: spec.r_a().coords().to_vec(), r_b: spec.r_b().coords().to_vec() }
        }
        Construction::Transform { base_id, x, y } => {
            ConstructionData::Transform { base_id: base_id.clone(), x: x.coords().to_vec(), y: y.coords().to_vec() }
        }
    };
    let type_ii = m % 2 == 0 && is_type_ii(code)?;
    Ok(Some(CatalogEntry {
        id: format!("S_{m}_{n}_{}", candidate.trial),
        modulus: m,
        length: n,
        construction,
        claims: Claims {
            type_ii,
            extremal: extremality.as_ref().is_some_and(|e| e.extremal),
            binary_part_column: None,
            gleason_a: None,
        },
    }))
}
