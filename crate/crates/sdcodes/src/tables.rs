//! Consistency of binary-part column claims with invariant signatures.
//!
//! Codes claimed to share a column must have equal signatures; codes in
//! different columns should not. A cross-column tie is reported as
//! indistinguishable at the configured level, never as equivalence.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use sdcodes_core::binary::{invariant_signature, InvariantSignature, SignatureConfig};
use sdcodes_core::zring::binary_part;

use crate::catalog::Catalog;
use crate::error::Result;

#[derive(Debug, Clone, Serialize)]
pub struct ColumnClass {
    pub column: String,
    pub members: Vec<String>,
    /// Number of distinct signatures among the members; 1 when consistent.
    pub distinct_signatures: usize,
    pub min_weight: Option<usize>,
    pub min_weight_count: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Collision {
    pub columns: (String, String),
    pub verdict: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConsistencyReport {
    pub length: usize,
    pub classes: Vec<ColumnClass>,
    /// Number of distinct signatures over all members.
    pub signature_classes: usize,
    pub collisions: Vec<Collision>,
    pub within_column_equal: bool,
}

impl ConsistencyReport {
    /// Every column has one signature and no two columns share one.
    pub fn consistent(&self) -> bool {
        self.within_column_equal && self.collisions.is_empty()
    }
}

/// Signature of the binary part of every entry at `length` that carries a
/// column claim, computed in parallel; columns keep catalog order.
pub fn table_consistency(catalog: &Catalog, length: usize, config: &SignatureConfig) -> Result<ConsistencyReport> {
    let claimed: Vec<(&str, &str)> = catalog
        .entries()
        .iter()
        .filter(|e| e.length == length)
        .filter_map(|e| Some((e.id.as_str(), e.claims.binary_part_column.as_deref()?)))
        .collect();
    let sigs: Vec<InvariantSignature> = claimed
        .par_iter()
        .map(|(id, _)| -> Result<InvariantSignature> {
            let code = catalog.materialize(id)?;
            Ok(invariant_signature(&binary_part(&code)?, config)?)
        })
        .collect::<Result<_>>()?;

    let mut order: Vec<&str> = Vec::new();
    let mut by_column: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, (_, col)) in claimed.iter().enumerate() {
        if !by_column.contains_key(col) {
            order.push(col);
        }
        by_column.entry(col).or_default().push(i);
    }

    let mut distinct: Vec<&InvariantSignature> = Vec::new();
    for s in &sigs {
        if !distinct.contains(&s) {
            distinct.push(s);
        }
    }

    let mut classes = Vec::new();
    for col in &order {
        let idx = &by_column[col];
        let mut seen: Vec<&InvariantSignature> = Vec::new();
        for &i in idx {
            if !seen.contains(&&sigs[i]) {
                seen.push(&sigs[i]);
            }
        }
        let first = &sigs[idx[0]];
        let min_weight = first.weight_counts.iter().enumerate().skip(1).find(|p| *p.1 > 0).map(|p| p.0);
        classes.push(ColumnClass {
            column: col.to_string(),
            members: idx.iter().map(|&i| claimed[i].0.to_string()).collect(),
            distinct_signatures: seen.len(),
            min_weight,
            min_weight_count: min_weight.map_or(0, |w| first.weight_counts[w]),
        });
    }

    let mut collisions = Vec::new();
    for (a, ca) in order.iter().enumerate() {
        for cb in &order[a + 1..] {
            let tied = by_column[ca].iter().any(|&i| by_column[cb].iter().any(|&j| sigs[i] == sigs[j]));
            if tied {
                collisions.push(Collision {
                    columns: (ca.to_string(), cb.to_string()),
                    verdict: "indistinguishable at configured signature level",
                });
            }
        }
    }

    Ok(ConsistencyReport {
        length,
        within_column_equal: classes.iter().all(|c| c.distinct_signatures == 1),
        signature_classes: distinct.len(),
        classes,
        collisions,
    })
}
