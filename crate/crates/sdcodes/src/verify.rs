//! Per-entry verification: algebraic checks, lattice extremality and
//! binary-part enumerators.

use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::json;

use sdcodes_core::binary::{
    count_codewords_up_to_weight, gleason_w56, gleason_w64, macwilliams_dual, Completeness, LowWeightConfig,
    WeightEnumerator, DEFAULT_MAX_EXHAUSTIVE_DIMENSION,
};
use sdcodes_core::construct::{check_four_nega_self_dual, check_four_nega_type_ii, FourNegaSpec};
use sdcodes_core::lattice::{
    construction_a, decide_small, decide_z4_large, small_regime, z4_large_regime, EnumerationOptions, Ratio,
    ShortVectorReport,
};
use sdcodes_core::zring::{binary_part, is_self_dual_standard, is_type_ii, Modulus, RingVector, StdFormCode};

use crate::catalog::{Catalog, CatalogEntry, CatalogError, ConstructionData};
use crate::enumerate::{short_vectors_par, RunLimits};
use crate::error::{Error, Result};
use crate::report::{LatticeCertificate, RunReport, Status, WeightCertificate};
use crate::weights::weight_distribution_par;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LatticeMode {
    #[default]
    Off,
    /// Lengths 24, 32 and 40.
    Standard,
    /// Also the Z4 lengths 48, 56 and 64.
    Deep,
}

impl LatticeMode {
    pub fn name(self) -> &'static str {
        match self {
            Self::Off => "off",
            Self::Standard => "standard",
            Self::Deep => "deep",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    pub lattice: LatticeMode,
    pub binary: bool,
    /// Overrides the per-dimension default node budget.
    pub node_budget: Option<u64>,
    pub deadline: Option<Instant>,
    /// One checkpoint file per entry is kept here.
    pub checkpoint_dir: Option<PathBuf>,
    /// Weight bound for truncated binary enumerators; 12 by default when a
    /// full sweep is out of reach.
    pub binary_wmax: Option<usize>,
}

impl VerifyOptions {
    fn enumeration(&self, n: usize) -> EnumerationOptions {
        let mut o = EnumerationOptions::for_dimension(n);
        if n >= 56 {
            o.node_budget = 2_000_000_000_000;
        }
        if let Some(b) = self.node_budget {
            o.node_budget = b;
        }
        o
    }

    fn config(&self) -> serde_json::Value {
        json!({
            "lattice": self.lattice.name(),
            "binary": self.binary,
            "node_budget": self.node_budget,
            "binary_wmax": self.binary_wmax,
        })
    }
}

fn timed<T>(report: &mut RunReport, name: &str, f: impl FnOnce() -> T) -> T {
    let t = Instant::now();
    let out = f();
    report.timings_ms.insert(name.into(), t.elapsed().as_millis() as u64);
    out
}

fn pass_fail(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

/// Verifies one catalog entry. Operational problems become `error`
/// checks rather than an `Err`.
pub fn verify_entry(catalog: &Catalog, entry: &CatalogEntry, opts: &VerifyOptions) -> RunReport {
    let mut report = RunReport::new(&entry.id, opts.config());
    let code = match timed(&mut report, "materialize", || catalog.materialize(&entry.id)) {
        Ok(c) => c,
        Err(CatalogError::Construct { id, source: sdcodes_core::Error::Transform(c) }) => {
            report.push("transform_preconditions", Status::Fail, Some(format!("{id}: {c}")));
            return report;
        }
        Err(e) => {
            report.push("materialize", Status::Error, Some(e.to_string()));
            return report;
        }
    };
    report.push("materialize", Status::Pass, None);

    if let ConstructionData::FourNegacirculant { r_a, r_b } = &entry.construction {
        match four_nega_conditions(entry.modulus, r_a, r_b) {
            Ok((sd, t2)) => {
                report.push("four_negacirculant_self_dual", pass_fail(sd), None);
                if entry.claims.type_ii {
                    report.push("four_negacirculant_type_ii", pass_fail(t2), None);
                }
            }
            Err(e) => report.push("four_negacirculant_self_dual", Status::Error, Some(e.to_string())),
        }
    } else {
        // Materialization already enforced the transform conditions.
        report.push("transform_preconditions", Status::Pass, None);
    }

    let self_dual = timed(&mut report, "self_dual", || is_self_dual_standard(&code));
    report.push("self_dual", pass_fail(self_dual), None);
    if !self_dual {
        return report;
    }
    let type_ii = if entry.modulus % 2 == 0 { is_type_ii(&code).unwrap_or(false) } else { false };
    report.push(
        "type_ii",
        pass_fail(type_ii == entry.claims.type_ii),
        (type_ii != entry.claims.type_ii).then(|| format!("claimed {}, computed {type_ii}", entry.claims.type_ii)),
    );
    if !type_ii {
        return report;
    }

    if opts.lattice != LatticeMode::Off {
        lattice_checks(&mut report, entry, &code, opts);
    }
    if opts.binary {
        binary_checks(&mut report, entry, &code, opts);
    }
    report
}

fn four_nega_conditions(m: u32, r_a: &[u32], r_b: &[u32]) -> sdcodes_core::Result<(bool, bool)> {
    let m = Modulus::new(m)?;
    let spec = FourNegaSpec::new(RingVector::new(m, r_a.to_vec())?, RingVector::new(m, r_b.to_vec())?)?;
    let sd = check_four_nega_self_dual(&spec);
    let t2 = m.half().is_some() && check_four_nega_type_ii(&spec)?;
    Ok((sd, t2))
}

fn lattice_checks(report: &mut RunReport, entry: &CatalogEntry, code: &StdFormCode, opts: &VerifyOptions) {
    let n = code.length();
    let deep = z4_large_regime(code).is_ok();
    if small_regime(code).is_err() && !deep {
        report.push(
            "extremal",
            Status::Skip,
            Some(format!("no extremality decider for m = {}, n = {n}", entry.modulus)),
        );
        return;
    }
    if deep && opts.lattice != LatticeMode::Deep {
        report.push(
            "extremal",
            Status::Skip,
            Some(format!("dimension {n} lattice checks are opt-in (--lattice=deep)")),
        );
        return;
    }
    let lat = match construction_a(code) {
        Ok(l) => l,
        Err(e) => {
            report.push("lattice", Status::Error, Some(e.to_string()));
            return;
        }
    };
    let unimodular = lat.is_unimodular();
    match unimodular {
        Ok(u) => report.push("lattice_even_unimodular", pass_fail(u && lat.is_even()), None),
        Err(e) => report.push("lattice_even_unimodular", Status::Error, Some(e.to_string())),
    }

    let limits = RunLimits {
        deadline: opts.deadline,
        checkpoint: opts.checkpoint_dir.as_ref().map(|d| d.join(format!("{}.json", entry.id))),
        checkpoint_interval: None,
    };
    let enumeration = opts.enumeration(n);
    let result: Result<ShortVectorReport> =
        timed(report, "extremal", || short_vectors_par(&lat, Ratio::integer(4), &enumeration, &limits));
    match result {
        Ok(r) => {
            let extremal = if deep { decide_z4_large(n, &r) } else { decide_small(&r) };
            let detail =
                format!("min norm {}, kissing {}", r.min_norm.map_or("none".into(), |m| m.to_string()), r.kissing);
            report.certificates.lattice = Some(LatticeCertificate::from(&r));
            report.push("extremal", pass_fail(extremal == entry.claims.extremal), Some(detail));
        }
        Err(Error::Core(sdcodes_core::Error::NodeBudgetExhausted(p))) => {
            report.push(
                "extremal",
                Status::Skip,
                Some(format!(
                    "budget exhausted after {} nodes, {}/{} subtrees complete",
                    p.nodes, p.completed_subtrees, p.total_subtrees
                )),
            );
        }
        Err(e) => report.push("extremal", Status::Error, Some(e.to_string())),
    }
}

fn binary_checks(report: &mut RunReport, entry: &CatalogEntry, code: &StdFormCode, opts: &VerifyOptions) {
    let bp = match binary_part(code) {
        Ok(b) => b,
        Err(e) => {
            report.push("binary_part", Status::Error, Some(e.to_string()));
            return;
        }
    };
    report.push("binary_part_doubly_even_self_dual", pass_fail(bp.is_doubly_even_self_dual()), None);
    let n = bp.length();
    let full = bp.dimension() <= DEFAULT_MAX_EXHAUSTIVE_DIMENSION && opts.binary_wmax.is_none();
    let enumerator: Result<WeightEnumerator> = timed(report, "binary_weights", || {
        if full {
            weight_distribution_par(&bp, DEFAULT_MAX_EXHAUSTIVE_DIMENSION)
        } else {
            let wmax = opts.binary_wmax.unwrap_or(12);
            Ok(count_codewords_up_to_weight(&bp, wmax, &LowWeightConfig::default())?)
        }
    });
    let e = match enumerator {
        Ok(e) => e,
        Err(e) => {
            report.push("binary_weights", Status::Error, Some(e.to_string()));
            return;
        }
    };
    report.certificates.binary_weights = Some(WeightCertificate {
        counts: e.counts.clone(),
        truncated_at: match e.completeness {
            Completeness::Full => None,
            Completeness::TruncatedAt(w) => Some(w),
        },
    });
    if e.completeness == Completeness::Full {
        let dual = macwilliams_dual(&e, bp.dimension());
        report.push("binary_macwilliams_self_dual", pass_fail(dual.as_deref() == Some(&e.counts[..])), None);
    }
    if let Some(a) = entry.claims.gleason_a {
        let a = a as i64;
        let form = match n {
            56 => Some(("W_56", gleason_w56(a))),
            64 => Some(("W_64", gleason_w64(a))),
            _ => None,
        };
        let Some((name, g)) = form else {
            report.push("gleason_fit", Status::Skip, Some(format!("no Gleason form for length {n}")));
            return;
        };
        let a8 = e.get(8) as i64;
        report.push("binary_a8", pass_fail(a8 == a), Some(format!("A_8 = {a8}, claimed {a}")));
        let top = match e.completeness {
            Completeness::Full => n,
            Completeness::TruncatedAt(w) => w,
        };
        let compared: Vec<(usize, i64)> =
            [(8, g.a8), (12, g.a12), (16, g.a16)].into_iter().filter(|&(w, _)| w <= top).collect();
        let fits = compared.iter().all(|&(w, c)| e.get(w) as i64 == c);
        let through = compared.last().map_or(0, |p| p.0);
        report.push("gleason_fit", pass_fail(fits), Some(format!("{name}({a}) through weight {through}")));
    }
}

/// Verifies entries on the rayon pool, passing reports to `emit` in input
/// order.
pub fn verify_all(
    catalog: &Catalog,
    entries: &[&CatalogEntry],
    opts: &VerifyOptions,
    mut emit: impl FnMut(&RunReport) -> Result<()>,
) -> Result<Vec<RunReport>> {
    let width = rayon::current_num_threads().max(1);
    let mut all = Vec::with_capacity(entries.len());
    for chunk in entries.chunks(width) {
        let reports: Vec<RunReport> = chunk.par_iter().map(|e| verify_entry(catalog, e, opts)).collect();
        for r in reports {
            emit(&r)?;
            all.push(r);
        }
    }
    Ok(all)
}
