//! Side-by-side comparison of computed values with the published tables.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cache::{histogram_cached, CachedRunOptions, HistogramCache};
use crate::cartan::GroupLabel;
use crate::certify::{basic_invariants, prepared_group};
use crate::error::{Error, Result};
use crate::expected::{paper_entry, PaperEntry};
use crate::group::{fundamental_covector, orbit};
use crate::invariants::{enumerate_candidate_sets, jacobian_certificate};
use crate::molien::{covariant_series, numerator_from_series, recover_degrees, CovariantClass, HistogramOptions, DEFAULT_ORDER, DEGREE_RECOVERY_ORDER};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum RowStatus {
    Match,
    Mismatch,
    Skipped,
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            RowStatus::Match => "MATCH",
            RowStatus::Mismatch => "MISMATCH",
            RowStatus::Skipped => "SKIPPED",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub group: String,
    pub quantity: String,
    pub computed: String,
    pub paper: String,
    pub status: RowStatus,
    pub note: String,
}

impl TableRow {
    fn compare(group: GroupLabel, quantity: &str, computed: String, paper: String, note: impl Into<String>) -> Self {
        let status = if computed == paper { RowStatus::Match } else { RowStatus::Mismatch };
        TableRow { group: group.to_string(), quantity: quantity.into(), computed, paper, status, note: note.into() }
    }

    fn failed(group: GroupLabel, quantity: &str, paper: String, status: RowStatus, note: String) -> Self {
        TableRow { group: group.to_string(), quantity: quantity.into(), computed: "-".into(), paper, status, note }
    }
}

#[derive(Debug, Clone, Default)]
pub struct TablesConfig {
    pub workers: usize,
    pub allow_long: bool,
    pub cache: Option<HistogramCache>,
    pub truncation: Option<usize>,
}

fn list<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

/// Rows for one exceptional group.
pub fn table_rows(label: GroupLabel, cfg: &TablesConfig) -> Result<Vec<TableRow>> {
    let entry: &PaperEntry = paper_entry(label).ok_or_else(|| Error::UnknownLabel(format!("no paper-table entry for {label}")))?;
    let (g, _) = prepared_group(label)?;
    let mut rows = Vec::new();

    let o = orbit(&g, &fundamental_covector(&g));
    rows.push(TableRow::compare(label, "|O|", o.len().to_string(), entry.orbit_size.to_string(), ""));

    let paper_degrees = list(entry.degrees);
    let paper_num = entry.numerator().to_string();
    let opts = CachedRunOptions {
        histogram: HistogramOptions { workers: cfg.workers.max(1), allow_long: cfg.allow_long },
        ..CachedRunOptions::default()
    };
    let computed = histogram_cached(&g, cfg.cache.as_ref(), opts);
    let (degrees, numerator, provenance) = match computed {
        Ok(run) if run.complete => {
            let h = run.histogram;
            let note = if run.from_cache { "cache" } else { "enumerated" };
            rows.push(TableRow::compare(label, "|W|", h.total.to_string(), entry.order().to_string(), note));
            let inv = covariant_series(&h, CovariantClass::Trivial, DEGREE_RECOVERY_ORDER)?;
            let sym2 = covariant_series(&h, CovariantClass::Sym2, cfg.truncation.unwrap_or(DEFAULT_ORDER))?;
            match recover_degrees(&inv, g.rank()) {
                Ok(d) => {
                    rows.push(TableRow::compare(label, "degrees", list(&d), paper_degrees, note));
                    match numerator_from_series(sym2, CovariantClass::Sym2, &d) {
                        Ok(p) => {
                            rows.push(TableRow::compare(label, "sym2 numerator", p.numerator.to_string(), paper_num, note));
                            (d, p.numerator, "computed")
                        }
                        Err(e) => {
                            rows.push(TableRow::failed(label, "sym2 numerator", paper_num, RowStatus::Mismatch, e.to_string()));
                            (d, entry.numerator(), "paper-table")
                        }
                    }
                }
                Err(e) => {
                    rows.push(TableRow::failed(label, "degrees", paper_degrees, RowStatus::Mismatch, e.to_string()));
                    rows.push(TableRow::failed(label, "sym2 numerator", paper_num, RowStatus::Mismatch, e.to_string()));
                    (entry.degrees.to_vec(), entry.numerator(), "paper-table")
                }
            }
        }
        Ok(_) | Err(Error::BudgetExceeded { .. }) => {
            let note = "needs --long or a complete cache entry".to_string();
            rows.push(TableRow::failed(label, "|W|", entry.order().to_string(), RowStatus::Skipped, note.clone()));
            rows.push(TableRow::failed(label, "degrees", paper_degrees, RowStatus::Skipped, note.clone()));
            rows.push(TableRow::failed(label, "sym2 numerator", paper_num, RowStatus::Skipped, note));
            (entry.degrees.to_vec(), entry.numerator(), "paper-table")
        }
        Err(e) => {
            let note = e.to_string();
            for q in ["|W|", "degrees", "sym2 numerator"] {
                rows.push(TableRow::failed(label, q, "-".into(), RowStatus::Mismatch, note.clone()));
            }
            (entry.degrees.to_vec(), entry.numerator(), "paper-table")
        }
    };

    let choices = match enumerate_candidate_sets(&degrees, &numerator) {
        Ok(sets) => TableRow::compare(label, "choices", sets.len().to_string(), entry.choices.to_string(), format!("from {provenance} numerator")),
        Err(e) => TableRow::failed(label, "choices", entry.choices.to_string(), RowStatus::Mismatch, e.to_string()),
    };
    rows.push(choices);
    let b = basic_invariants(&g, &degrees);
    let regular = jacobian_certificate(&b, &entry.point())?.nonzero;
    let verdict = |r: bool| if r { "regular" } else { "singular" }.to_string();
    rows.push(TableRow::compare(label, "v", verdict(regular), verdict(true), format!("det J at ({})", list(entry.v))));
    Ok(rows)
}

pub fn tables(labels: &[GroupLabel], cfg: &TablesConfig) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for &l in labels {
        rows.extend(table_rows(l, cfg)?);
    }
    Ok(rows)
}

pub fn all_match(rows: &[TableRow]) -> bool {
    rows.iter().all(|r| r.status != RowStatus::Mismatch)
}

/// Fixed-width text rendering.
pub fn render(rows: &[TableRow]) -> String {
    let mut out = format!("{:<5} {:<15} {:<9} {:<60} {}\n", "group", "quantity", "status", "computed", "paper");
    for r in rows {
        out.push_str(&format!("{:<5} {:<15} {:<9} {:<60} {}", r.group, r.quantity, r.status, r.computed, r.paper));
        if !r.note.is_empty() {
            out.push_str(&format!("  [{}]", r.note));
        }
        out.push('\n');
    }
    out
}
