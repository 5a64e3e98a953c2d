//! End-to-end certification of a Hessian basis, and the product construction.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cartan::{CartanDatum, GroupLabel};
use crate::error::{Error, Result};
use crate::expected::paper_entry;
use crate::group::{build_group, fundamental_covector, orbit, resolve_last_node, NodeResolution, ReflectionGroup};
use crate::invariants::{
    enumerate_candidate_sets, hessian_certificates, hessian_from_jet, jacobian_from_jet, jet_at, psi_eval,
    BasicInvariantSet, CandidateSet, Certificate, Warning,
};
use crate::molien::{
    covariant_series, histogram_with, numerator_from_series, recover_degrees, CharPolyHistogram, CovariantClass,
    HistogramOptions, DEFAULT_ORDER, DEGREE_RECOVERY_ORDER,
};
use crate::scalar::{Field, Scalar};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Computed,
    PaperTable,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Computed => "computed",
            Provenance::PaperTable => "paper-table",
        })
    }
}

impl std::str::FromStr for Provenance {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "computed" => Ok(Provenance::Computed),
            "paper-table" => Ok(Provenance::PaperTable),
            _ => Err(Error::UnknownLabel(s.to_string())),
        }
    }
}

/// Where the evaluation point came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointSource {
    PaperTable,
    User,
    /// First `(1, k, k^2, ...)` with a nonzero Jacobian.
    Search,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateReport {
    pub label: String,
    pub set: CandidateSet,
    pub certificate: Certificate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub schema_version: u32,
    pub group: String,
    pub rank: usize,
    pub field: Field,
    pub cartan_hash: String,
    pub node_resolution: Option<NodeResolution>,
    pub orbit_size: usize,
    pub degrees: Vec<u32>,
    pub degrees_source: Provenance,
    pub v: Vec<Scalar>,
    pub v_source: PointSource,
    pub numerator: Vec<i64>,
    pub numerator_source: Provenance,
    pub jacobian: Certificate,
    pub candidate_sets: Vec<CandidateReport>,
    pub verdict: Verdict,
    pub warnings: Vec<Warning>,
    pub failures: Vec<String>,
    /// Wall-clock milliseconds per stage; the only nondeterministic field.
    pub timings_ms: BTreeMap<String, f64>,
}

impl CertificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_json_without_timings(&self) -> String {
        let mut r = self.clone();
        r.timings_ms.clear();
        r.to_json()
    }
}

#[derive(Debug, Clone)]
pub struct CertifyOptions {
    pub v: Option<Vec<Scalar>>,
    pub numerator_source: Provenance,
    pub workers: usize,
    pub allow_long: bool,
    pub truncation: usize,
    /// Histogram supplied by the caller (e.g. from a cache); computed otherwise.
    pub histogram: Option<CharPolyHistogram>,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            v: None,
            numerator_source: Provenance::Computed,
            workers: 1,
            allow_long: false,
            truncation: DEFAULT_ORDER,
            histogram: None,
        }
    }
}

/// The catalog group for `label`, relabelled for E types so that the last
/// node has the published fundamental orbit size.
pub fn prepared_group(label: GroupLabel) -> Result<(ReflectionGroup, Option<NodeResolution>)> {
    let datum = crate::cartan::catalog(label);
    let e_type = matches!(label, GroupLabel::E6 | GroupLabel::E7 | GroupLabel::E8);
    match paper_entry(label) {
        Some(entry) if e_type => {
            let (g, res) = resolve_last_node(&datum, entry.orbit_size)?;
            Ok((g, Some(res)))
        }
        _ => Ok((build_group(datum)?, None)),
    }
}

/// The basic invariants `psi_{d_i}` on the fundamental covector orbit.
pub fn basic_invariants(g: &ReflectionGroup, degrees: &[u32]) -> BasicInvariantSet {
    let o = orbit(g, &fundamental_covector(g));
    BasicInvariantSet::new(g, &o, degrees)
}

fn search_point(b: &BasicInvariantSet) -> Result<Vec<Scalar>> {
    for k in 2..64i64 {
        let v: Vec<Scalar> = (0..b.rank as u32).map(|i| Scalar::from_int(k.pow(i))).collect();
        if jacobian_from_jet(&jet_at(b, &v)?).nonzero {
            return Ok(v);
        }
    }
    Err(Error::PointNotRegular)
}

pub fn certify(label: &str, v: Option<Vec<Scalar>>, numerator_source: Provenance) -> Result<CertificationReport> {
    certify_with(label, CertifyOptions { v, numerator_source, ..CertifyOptions::default() })
}

pub fn certify_with(label: &str, opts: CertifyOptions) -> Result<CertificationReport> {
    let group_label: GroupLabel = label.parse()?;
    let mut timings = BTreeMap::new();
    let mut lap = {
        let mut t = Instant::now();
        move |name: &str, timings: &mut BTreeMap<String, f64>| {
            timings.insert(name.to_string(), t.elapsed().as_secs_f64() * 1e3);
            t = Instant::now();
        }
    };

    let (g, node_resolution) = prepared_group(group_label)?;
    let entry = paper_entry(group_label);
    let o = orbit(&g, &fundamental_covector(&g));
    lap("orbit", &mut timings);

    let (degrees, numerator) = match opts.numerator_source {
        Provenance::PaperTable => {
            let e = entry.ok_or_else(|| Error::UnknownLabel(format!("no paper-table entry for {label}")))?;
            (e.degrees.to_vec(), e.numerator())
        }
        Provenance::Computed => {
            let h = match opts.histogram {
                Some(h) => h,
                None => histogram_with(&g, HistogramOptions { workers: opts.workers, allow_long: opts.allow_long })?,
            };
            lap("histogram", &mut timings);
            let inv = covariant_series(&h, CovariantClass::Trivial, DEGREE_RECOVERY_ORDER)?;
            let degrees = recover_degrees(&inv, g.rank())?;
            let sym2 = covariant_series(&h, CovariantClass::Sym2, opts.truncation)?;
            let num = numerator_from_series(sym2, CovariantClass::Sym2, &degrees)?.numerator;
            (degrees, num)
        }
    };
    lap("molien", &mut timings);

    let b = BasicInvariantSet::new(&g, &o, &degrees);
    let (v, v_source) = match (opts.v, entry) {
        (Some(v), _) => (v, PointSource::User),
        (None, Some(e)) => (e.point(), PointSource::PaperTable),
        (None, None) => (search_point(&b)?, PointSource::Search),
    };
    let jet = jet_at(&b, &v)?;
    let jacobian = jacobian_from_jet(&jet);
    lap("jacobian", &mut timings);

    let mut warnings = Vec::new();
    let mut failures = Vec::new();
    if !jacobian.nonzero {
        warnings.push(Warning::PointNotRegular);
        failures.push("jacobian determinant vanishes".to_string());
    }
    let sets = match enumerate_candidate_sets(&degrees, &numerator) {
        Ok(s) => s,
        Err(e) => {
            failures.push(e.to_string());
            Vec::new()
        }
    };
    let certs = hessian_certificates(&jet, &sets, jacobian.nonzero, opts.workers)?;
    lap("hessians", &mut timings);

    let candidate_sets: Vec<CandidateReport> = sets
        .into_iter()
        .zip(certs)
        .map(|(set, certificate)| CandidateReport { label: set.to_string(), set, certificate })
        .collect();
    for c in candidate_sets.iter().filter(|c| !c.certificate.nonzero) {
        failures.push(format!("det M vanishes for {}", c.label));
    }
    let verdict = if jacobian.nonzero && !candidate_sets.is_empty() && candidate_sets.iter().all(|c| c.certificate.nonzero)
    {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    let numerator_ints = numerator.to_ints().ok_or_else(|| Error::NonPolynomialQuotient(numerator.to_string()))?;
    Ok(CertificationReport {
        schema_version: REPORT_SCHEMA_VERSION,
        group: g.label().to_string(),
        rank: g.rank(),
        field: g.datum.field,
        cartan_hash: g.datum.hash(),
        node_resolution,
        orbit_size: o.len(),
        degrees,
        degrees_source: opts.numerator_source,
        v,
        v_source,
        numerator: numerator_ints,
        numerator_source: opts.numerator_source,
        jacobian,
        candidate_sets,
        verdict,
        warnings,
        failures,
        timings_ms: timings,
    })
}

/// Generators `{Q_j} u {R_j} u {rho_i psi_j}` for a product group, with their certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductBasis {
    pub label: String,
    pub rank: usize,
    pub generators: Vec<String>,
    pub set: CandidateSet,
    pub v: Vec<Scalar>,
    pub invariance_checked: bool,
    pub jacobian: Certificate,
    pub certificate: Certificate,
    pub verdict: Verdict,
}

fn rebuild(report: &CertificationReport) -> Result<(CartanDatum, BasicInvariantSet)> {
    let label: GroupLabel = report.group.parse()?;
    let (g, _) = prepared_group(label)?;
    let b = basic_invariants(&g, &report.degrees);
    Ok((g.datum.clone(), b))
}

/// Combines certified bases of `W1` and `W2` into one for `W1 x W2` and certifies it directly.
pub fn compose_product_basis(a: &CertificationReport, b: &CertificationReport) -> Result<ProductBasis> {
    for r in [a, b] {
        if r.verdict != Verdict::Pass || r.candidate_sets.is_empty() {
            return Err(Error::InputNotCertified(r.group.clone()));
        }
    }
    let (da, ba) = rebuild(a)?;
    let (db, bb) = rebuild(b)?;
    let (n1, n2) = (ba.rank, bb.rank);
    let t1 = &a.candidate_sets[0].set;
    let t2 = &b.candidate_sets[0].set;

    let mut pairs: Vec<(usize, usize)> = t1.pairs.clone();
    pairs.extend(t2.pairs.iter().map(|&(i, j)| (i + n1, j + n1)));
    for i in 0..n1 {
        for j in 0..n2 {
            pairs.push((i, n1 + j));
        }
    }
    let set = CandidateSet { singles: (0..n1 + n2).collect(), pairs };
    let generators: Vec<String> = set
        .singles
        .iter()
        .map(|i| format!("rho{}", i + 1))
        .chain(set.pairs.iter().map(|(i, j)| format!("rho{}rho{}", i + 1, j + 1)))
        .collect();

    let product = build_group(CartanDatum::product(&da, &db)?)?;
    let basis = ba.direct_sum(&bb);
    let mut v = a.v.clone();
    v.extend(b.v.iter().cloned());

    let mut invariance_checked = true;
    for inv in &basis.invariants {
        let single = BasicInvariantSet {
            invariants: vec![inv.clone()],
            ..basis.clone()
        };
        let before = psi_eval(&single, inv.degree, &v)?;
        for i in 0..product.rank() {
            if psi_eval(&single, inv.degree, &product.reflect_point(i, &v))? != before {
                invariance_checked = false;
            }
        }
    }

    let jet = jet_at(&basis, &v)?;
    let jacobian = jacobian_from_jet(&jet);
    let certificate = hessian_from_jet(&jet, &set, jacobian.nonzero)?;
    let verdict = if invariance_checked && jacobian.nonzero && certificate.nonzero { Verdict::Pass } else { Verdict::Fail };
    Ok(ProductBasis {
        label: product.label().to_string(),
        rank: n1 + n2,
        generators,
        set,
        v,
        invariance_checked,
        jacobian,
        certificate,
        verdict,
    })
}

/// Parses a comma-separated point such as `1,-2,3/4` or `1|1/2` entries.
pub fn parse_point(csv: &str) -> Result<Vec<Scalar>> {
    csv.split(',').map(|s| s.trim().parse::<Scalar>()).collect()
}
