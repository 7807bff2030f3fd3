//! Short-vector enumeration split over frontier subtrees and run on the
//! rayon pool, with a shared node budget and an on-disk checkpoint of
//! finished subtrees.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use sdcodes_core::lattice::{
    budget_error, plan_enumeration, EnumerationOptions, EnumerationPlan, LatticeRep, Ratio, ShortVectorReport, Tally,
};

use crate::error::{Error, Result};

/// Budgets for one enumeration on top of [`EnumerationOptions`].
#[derive(Debug, Clone, Default)]
pub struct RunLimits {
    /// No new subtree is started after this instant.
    pub deadline: Option<Instant>,
    /// Finished subtrees are saved here and skipped on a rerun.
    pub checkpoint: Option<PathBuf>,
    /// Minimum time between checkpoint writes.
    pub checkpoint_interval: Option<Duration>,
}

const CHECKPOINT_SCHEMA: &str = "sdcodes-enum-checkpoint/1";
const NODES_PER_SUBTREE: f64 = 2e7;
const MIN_SUBTREES: usize = 64;
const MAX_SUBTREES: usize = 20_000;

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Checkpoint {
    schema: String,
    fingerprint: String,
    total_subtrees: usize,
    completed: Vec<SubtreeResult>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SubtreeResult {
    index: usize,
    nodes: u64,
    /// `(scaled norm, pairs)`.
    pairs: Vec<(i64, u64)>,
}

impl SubtreeResult {
    fn tally(&self) -> Tally {
        Tally { nodes: self.nodes, pairs: self.pairs.iter().copied().collect() }
    }
}

/// Identifies the enumeration a checkpoint belongs to.
pub fn fingerprint(lat: &LatticeRep, bound: Ratio, opts: &EnumerationOptions, stream: u64) -> String {
    let mut h = Sha256::new();
    h.update(b"sdcodes-enum/1");
    h.update((lat.dim as u64).to_le_bytes());
    h.update(lat.scale.to_le_bytes());
    for v in lat.gram.data() {
        h.update(v.to_le_bytes());
    }
    h.update(bound.numer().to_le_bytes());
    h.update(bound.denom().to_le_bytes());
    h.update(opts.lll.delta.to_le_bytes());
    h.update([opts.lll.deep_insertion as u8]);
    h.update((opts.rebase_retries as u64).to_le_bytes());
    h.update(opts.seed.to_le_bytes());
    h.update(stream.to_le_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Parallel [`sdcodes_core::lattice::short_vectors`]. The counts do not
/// depend on the thread count or on how often the run was resumed.
pub fn short_vectors_par(
    lat: &LatticeRep,
    bound: Ratio,
    opts: &EnumerationOptions,
    limits: &RunLimits,
) -> Result<ShortVectorReport> {
    let report = run_stream(lat, bound, opts, limits, 0)?;
    if opts.cross_check {
        let again = run_stream(lat, bound, opts, &RunLimits { checkpoint: None, ..limits.clone() }, 1)?;
        if again.norm_counts != report.norm_counts {
            return Err(sdcodes_core::Error::CrossCheckMismatch.into());
        }
    }
    Ok(report)
}

fn split(plan: &EnumerationPlan, scaled: i64) -> Vec<Vec<i64>> {
    let est = plan.cost_estimate(scaled).exp() / NODES_PER_SUBTREE;
    let target = (est.max(0.0) as usize).clamp(MIN_SUBTREES, MAX_SUBTREES);
    let mut depth = 1;
    let mut prefixes = plan.frontier(scaled, depth);
    while prefixes.len() < target && depth < plan.dimension() && depth < 16 {
        depth += 1;
        prefixes = plan.frontier(scaled, depth);
    }
    prefixes
}

fn run_stream(
    lat: &LatticeRep,
    bound: Ratio,
    opts: &EnumerationOptions,
    limits: &RunLimits,
    stream: u64,
) -> Result<ShortVectorReport> {
    let scaled = bound.scaled_floor(lat.scale);
    let plan = plan_enumeration(lat, bound, opts, stream)?;
    let prefixes = split(&plan, scaled);
    let total = prefixes.len();
    let fp = fingerprint(lat, bound, opts, stream);

    let mut done: BTreeMap<usize, SubtreeResult> = BTreeMap::new();
    if let Some(path) = &limits.checkpoint {
        if let Some(cp) = load_checkpoint(path)? {
            if cp.fingerprint != fp || cp.total_subtrees != total {
                return Err(Error::Checkpoint {
                    path: path.clone(),
                    message: "belongs to a different enumeration".into(),
                });
            }
            done.extend(cp.completed.into_iter().map(|r| (r.index, r)));
        }
    }

    let used = AtomicU64::new(done.values().map(|r| r.nodes).sum());
    let exhausted = AtomicBool::new(false);
    let partial = Mutex::new(Tally::default());
    let state = Mutex::new((done, Instant::now()));
    let pending: Vec<usize> = (0..total).filter(|i| !state.lock().expect("state lock").0.contains_key(i)).collect();

    let save = |force: bool| -> Result<()> {
        let Some(path) = &limits.checkpoint else { return Ok(()) };
        let mut st = state.lock().expect("state lock");
        let interval = limits.checkpoint_interval.unwrap_or(Duration::from_secs(30));
        if !force && st.1.elapsed() < interval {
            return Ok(());
        }
        st.1 = Instant::now();
        let cp = Checkpoint {
            schema: CHECKPOINT_SCHEMA.into(),
            fingerprint: fp.clone(),
            total_subtrees: total,
            completed: st.0.values().cloned().collect(),
        };
        drop(st);
        write_checkpoint(path, &cp)
    };

    pending.par_iter().try_for_each(|&i| -> Result<()> {
        if exhausted.load(Ordering::Relaxed) || limits.deadline.is_some_and(|d| Instant::now() >= d) {
            exhausted.store(true, Ordering::Relaxed);
            return Ok(());
        }
        let left = opts.node_budget.saturating_sub(used.load(Ordering::Relaxed));
        if left == 0 {
            exhausted.store(true, Ordering::Relaxed);
            return Ok(());
        }
        match plan.enumerate_subtree(&prefixes[i], scaled, left, |_, _| {}) {
            Ok(t) => {
                used.fetch_add(t.nodes, Ordering::Relaxed);
                let r = SubtreeResult { index: i, nodes: t.nodes, pairs: t.pairs.into_iter().collect() };
                state.lock().expect("state lock").0.insert(i, r);
                save(false)
            }
            Err(e) => {
                used.fetch_add(e.partial.nodes, Ordering::Relaxed);
                exhausted.store(true, Ordering::Relaxed);
                partial.lock().expect("partial lock").merge(&e.partial);
                Ok(())
            }
        }
    })?;

    let (done, _) = state.into_inner().expect("state lock");
    let mut tally = Tally::default();
    for r in done.values() {
        tally.merge(&r.tally());
    }
    if done.len() == total {
        if limits.checkpoint.is_some() {
            let cp = Checkpoint {
                schema: CHECKPOINT_SCHEMA.into(),
                fingerprint: fp,
                total_subtrees: total,
                completed: done.into_values().collect(),
            };
            write_checkpoint(limits.checkpoint.as_deref().expect("checked"), &cp)?;
        }
        return Ok(ShortVectorReport::from_tally(&tally, lat.scale, bound)?);
    }
    let completed = done.len();
    if let Some(path) = &limits.checkpoint {
        let cp = Checkpoint {
            schema: CHECKPOINT_SCHEMA.into(),
            fingerprint: fp,
            total_subtrees: total,
            completed: done.into_values().collect(),
        };
        write_checkpoint(path, &cp)?;
    }
    tally.merge(&partial.into_inner().expect("partial lock"));
    Err(budget_error(&tally, lat.scale, completed, total).into())
}

fn load_checkpoint(path: &Path) -> Result<Option<Checkpoint>> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(Error::io(path, e)),
    };
    let cp: Checkpoint = serde_json::from_str(&text)
        .map_err(|e| Error::Checkpoint { path: path.to_path_buf(), message: e.to_string() })?;
    if cp.schema != CHECKPOINT_SCHEMA {
        return Err(Error::Checkpoint { path: path.to_path_buf(), message: format!("schema {:?}", cp.schema) });
    }
    Ok(Some(cp))
}

fn write_checkpoint(path: &Path, cp: &Checkpoint) -> Result<()> {
    let tmp = path.with_extension("tmp");
    let text = serde_json::to_string(cp).expect("checkpoint serializes");
    std::fs::write(&tmp, text).map_err(|e| Error::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}
