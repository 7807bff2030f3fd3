//! JSON-lines run reports and CSV enumerators.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use sdcodes_core::binary::WeightEnumerator;
use sdcodes_core::lattice::ShortVectorReport;

pub const REPORT_SCHEMA: &str = "sdcodes-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skip,
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct LatticeCertificate {
    /// True norms as reduced fractions, e.g. `"4"` or `"7/2"`.
    pub min_norm: Option<String>,
    pub kissing: u64,
    pub norm_counts: Vec<(String, u64)>,
    pub enumerated_bound: String,
    pub nodes: u64,
}

impl From<&ShortVectorReport> for LatticeCertificate {
    fn from(r: &ShortVectorReport) -> Self {
        Self {
            min_norm: r.min_norm.map(|m| m.to_string()),
            kissing: r.kissing,
            norm_counts: r.norm_counts.iter().map(|(n, c)| (n.to_string(), *c)).collect(),
            enumerated_bound: r.enumerated_bound.to_string(),
            nodes: r.nodes,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct WeightCertificate {
    pub counts: Vec<u64>,
    /// Counts are exact up to this weight; absent for a full distribution.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncated_at: Option<usize>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Certificates {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub binary_weights: Option<WeightCertificate>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub entry: String,
    pub checks: Vec<Check>,
    pub timings_ms: BTreeMap<String, u64>,
    pub certificates: Certificates,
    pub config: serde_json::Value,
}

impl RunReport {
    pub fn new(entry: impl Into<String>, config: serde_json::Value) -> Self {
        Self {
            schema: REPORT_SCHEMA,
            entry: entry.into(),
            checks: Vec::new(),
            timings_ms: BTreeMap::new(),
            certificates: Certificates::default(),
            config,
        }
    }

    pub fn push(&mut self, name: &str, status: Status, detail: Option<String>) {
        self.checks.push(Check { name: name.into(), status, detail });
    }

    pub fn status_of(&self, name: &str) -> Option<Status> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.status)
    }

    pub fn any(&self, status: Status) -> bool {
        self.checks.iter().any(|c| c.status == status)
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Exit status for a batch: 1 if anything was refuted, else 2 on an
/// operational error or when every check was skipped, else 0.
pub fn exit_code(reports: &[RunReport]) -> i32 {
    if reports.iter().any(|r| r.any(Status::Fail)) {
        1
    } else if reports.iter().any(|r| r.any(Status::Error))
        || (!reports.is_empty() && reports.iter().all(|r| r.checks.iter().all(|c| c.status == Status::Skip)))
    {
        2
    } else {
        0
    }
}

/// `weight,count` rows, zero counts omitted.
pub fn write_weights_csv(out: impl Write, e: &WeightEnumerator) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["weight", "count"])?;
    for (wt, &c) in e.counts.iter().enumerate() {
        if c > 0 {
            w.serialize((wt, c))?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `norm,count` rows.
pub fn write_norms_csv(out: impl Write, r: &ShortVectorReport) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["norm", "count"])?;
    for (n, c) in &r.norm_counts {
        w.serialize((n.to_string(), c))?;
    }
    w.flush()?;
    Ok(())
}
