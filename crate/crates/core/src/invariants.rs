//! Orbit power-sum invariants, their point jets, and the Jacobian and Hessian certificates.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{CovectorOrbit, ReflectionGroup};
use crate::matrix::{dot, Matrix};
use crate::poly::UniPoly;
use crate::scalar::{Field, Scalar};

/// `psi_d = sum over forms of (form . x)^d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerSum {
    pub forms: Vec<Vec<Scalar>>,
    pub degree: u32,
}

/// The invariants `rho_i = psi_{d_i}`, each given as a power sum over linear forms.
///
/// For an irreducible group every invariant shares the orbit of the
/// fundamental covector; for a product the factors' forms are zero-padded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasicInvariantSet {
    pub label: String,
    pub rank: usize,
    pub field: Field,
    pub orbit_size: usize,
    pub invariants: Vec<PowerSum>,
}

impl BasicInvariantSet {
    pub fn new(g: &ReflectionGroup, orbit: &CovectorOrbit, degrees: &[u32]) -> Self {
        let forms = orbit.forms(g.cartan());
        BasicInvariantSet::from_forms(g.label(), g.datum.field, forms, degrees)
    }

    pub fn from_forms(label: &str, field: Field, forms: Vec<Vec<Scalar>>, degrees: &[u32]) -> Self {
        let rank = forms.first().map_or(degrees.len(), Vec::len);
        BasicInvariantSet {
            label: label.to_string(),
            rank,
            field,
            orbit_size: forms.len(),
            invariants: degrees.iter().map(|&d| PowerSum { forms: forms.clone(), degree: d }).collect(),
        }
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.invariants.iter().map(|p| p.degree).collect()
    }

    /// Invariants of `self x other` acting on concatenated coordinates.
    pub fn direct_sum(&self, other: &BasicInvariantSet) -> BasicInvariantSet {
        let (n1, n2) = (self.rank, other.rank);
        let pad = |p: &PowerSum, before: usize, after: usize, field: Field| PowerSum {
            degree: p.degree,
            forms: p
                .forms
                .iter()
                .map(|f| {
                    let mut row = vec![Scalar::zero_in(field); before];
                    row.extend(f.iter().cloned());
                    row.extend(std::iter::repeat(Scalar::zero_in(field)).take(after));
                    row
                })
                .collect(),
        };
        let field = self.field.join(other.field);
        let mut invariants: Vec<PowerSum> = self.invariants.iter().map(|p| pad(p, 0, n2, field)).collect();
        invariants.extend(other.invariants.iter().map(|p| pad(p, n1, 0, field)));
        BasicInvariantSet {
            label: format!("{}x{}", self.label, other.label),
            rank: n1 + n2,
            field,
            orbit_size: self.orbit_size + other.orbit_size,
            invariants,
        }
    }
}

fn check_dim(b: &BasicInvariantSet, v: &[Scalar]) -> Result<()> {
    if v.len() != b.rank {
        return Err(Error::DimensionMismatch { expected: b.rank, got: v.len() });
    }
    Ok(())
}

/// `psi_m(v)` over the forms of the first invariant.
pub fn psi_eval(b: &BasicInvariantSet, m: u32, v: &[Scalar]) -> Result<Scalar> {
    check_dim(b, v)?;
    let forms = b.invariants.first().map(|p| p.forms.as_slice()).unwrap_or(&[]);
    Ok(power_sum_value(forms, m, v))
}

fn power_sum_value(forms: &[Vec<Scalar>], m: u32, v: &[Scalar]) -> Scalar {
    forms.iter().map(|f| dot(f, v).pow(m)).sum()
}

/// Value, gradient and Hessian of one invariant at a point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantJet {
    pub degree: u32,
    pub value: Scalar,
    pub gradient: Vec<Scalar>,
    pub hessian: Vec<Vec<Scalar>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointJet {
    pub point: Vec<Scalar>,
    pub jets: Vec<InvariantJet>,
}

/// Closed-form jet of a power sum: no polynomial is ever expanded.
pub fn power_sum_jet(p: &PowerSum, v: &[Scalar]) -> InvariantJet {
    let n = v.len();
    let d = p.degree;
    let zero = || Scalar::from_int(0);
    let mut value = zero();
    let mut grad_acc = vec![zero(); n];
    let mut hess_acc = vec![vec![zero(); n]; n];
    for f in &p.forms {
        let lv = dot(f, v);
        if d >= 1 {
            let p1 = lv.pow(d - 1);
            if !p1.is_zero() {
                for j in 0..n {
                    grad_acc[j] = &grad_acc[j] + &(&p1 * &f[j]);
                }
            }
            value = &value + &(&p1 * &lv);
        } else {
            value = &value + &Scalar::from_int(1);
        }
        if d >= 2 {
            let p2 = lv.pow(d - 2);
            if p2.is_zero() {
                continue;
            }
            for a in 0..n {
                if f[a].is_zero() {
                    continue;
                }
                let pa = &p2 * &f[a];
                for bb in a..n {
                    hess_acc[a][bb] = &hess_acc[a][bb] + &(&pa * &f[bb]);
                }
            }
        }
    }
    let gscale = Scalar::from_int(d as i64);
    let hscale = Scalar::from_int(d as i64 * (d as i64 - 1));
    let gradient: Vec<Scalar> = grad_acc.iter().map(|x| x * &gscale).collect();
    let mut hessian = vec![vec![zero(); n]; n];
    for a in 0..n {
        for bb in a..n {
            let h = &hess_acc[a][bb] * &hscale;
            hessian[bb][a] = h.clone();
            hessian[a][bb] = h;
        }
    }
    InvariantJet { degree: d, value, gradient, hessian }
}

pub fn jet_at(b: &BasicInvariantSet, v: &[Scalar]) -> Result<PointJet> {
    check_dim(b, v)?;
    Ok(PointJet { point: v.to_vec(), jets: b.invariants.iter().map(|p| power_sum_jet(p, v)).collect() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Warning {
    PointNotRegular,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::PointNotRegular => f.write_str("PointNotRegular"),
        }
    }
}

/// An exact determinant and whether it vanishes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub determinant: Scalar,
    pub nonzero: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<Warning>,
}

impl Certificate {
    fn of(m: &Matrix) -> Self {
        let determinant = m.determinant();
        Certificate { nonzero: !determinant.is_zero(), determinant, warnings: Vec::new() }
    }
}

pub fn jacobian_from_jet(jet: &PointJet) -> Certificate {
    Certificate::of(&Matrix::from_rows(jet.jets.iter().map(|j| j.gradient.clone()).collect()))
}

/// `det (d rho_i / d x_j)(v)`; nonzero exactly when `v` is regular and the `rho_i` are basic.
pub fn jacobian_certificate(b: &BasicInvariantSet, v: &[Scalar]) -> Result<Certificate> {
    Ok(jacobian_from_jet(&jet_at(b, v)?))
}

/// All `rho_i` plus a choice of products `rho_i rho_j` (`i <= j`, zero-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CandidateSet {
    pub singles: Vec<usize>,
    pub pairs: Vec<(usize, usize)>,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.singles.len() + self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `sum over Q in T of t^(deg Q - 2)`.
    pub fn census(&self, degrees: &[u32]) -> UniPoly {
        let mut c: Vec<i64> = Vec::new();
        let mut bump = |k: usize| {
            if c.len() <= k {
                c.resize(k + 1, 0);
            }
            c[k] += 1;
        };
        for &i in &self.singles {
            bump(degrees[i] as usize - 2);
        }
        for &(i, j) in &self.pairs {
            bump((degrees[i] + degrees[j]) as usize - 2);
        }
        UniPoly::from_ints(&c)
    }
}

impl fmt::Display for CandidateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .singles
            .iter()
            .map(|i| format!("rho{}", i + 1))
            .chain(self.pairs.iter().map(|(i, j)| format!("rho{}rho{}", i + 1, j + 1)))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn combinations(items: &[(usize, usize)], k: usize) -> Vec<Vec<(usize, usize)>> {
    fn go(items: &[(usize, usize)], k: usize, start: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Every candidate set whose degree census equals `numerator`.
///
/// The products not covered by the singles are matched degree class by
/// degree class; within a class any `k` of the available distinct products
/// may be chosen. Output is sorted lexicographically.
pub fn enumerate_candidate_sets(degrees: &[u32], numerator: &UniPoly) -> Result<Vec<CandidateSet>> {
    let n = degrees.len();
    let target: Vec<i64> = numerator.to_ints().ok_or(Error::NoCandidateSets)?;
    if target.iter().any(|&c| c < 0) || target.iter().sum::<i64>() != (n * (n + 1) / 2) as i64 {
        return Err(Error::NoCandidateSets);
    }
    let mut need: BTreeMap<usize, i64> =
        target.iter().enumerate().filter(|(_, &c)| c > 0).map(|(k, &c)| (k, c)).collect();
    for &d in degrees {
        if d < 2 {
            return Err(Error::NoCandidateSets);
        }
        let e = need.entry(d as usize - 2).or_insert(0);
        *e -= 1;
        if *e < 0 {
            return Err(Error::NoCandidateSets);
        }
    }
    let mut by_exponent: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for i in 0..n {
        for j in i..n {
            by_exponent.entry((degrees[i] + degrees[j]) as usize - 2).or_default().push((i, j));
        }
    }
    let mut partial: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    for (k, &count) in need.iter().filter(|(_, &c)| c > 0) {
        let avail = by_exponent.get(k).map(Vec::as_slice).unwrap_or(&[]);
        let choices = combinations(avail, count as usize);
        if choices.is_empty() {
            return Err(Error::NoCandidateSets);
        }
        partial = partial
            .iter()
            .flat_map(|p| {
                choices.iter().map(move |c| {
                    let mut q = p.clone();
                    q.extend(c.iter().copied());
                    q
                })
            })
            .collect();
    }
    let mut sets: Vec<CandidateSet> = partial
        .into_iter()
        .map(|mut pairs| {
            pairs.sort_unstable();
            CandidateSet { singles: (0..n).collect(), pairs }
        })
        .collect();
    sets.sort();
    Ok(sets)
}

/// Hessian of `rho_i rho_j` by the product rule.
fn product_hessian(x: &InvariantJet, y: &InvariantJet) -> Vec<Vec<Scalar>> {
    let n = x.gradient.len();
    (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    &(&(&x.value * &y.hessian[a][b]) + &(&y.value * &x.hessian[a][b]))
                        + &(&(&x.gradient[a] * &y.gradient[b]) + &(&y.gradient[a] * &x.gradient[b]))
                })
                .collect()
        })
        .collect()
}

/// Upper-triangular entries `(a <= b)` in row-major order.
fn upper_triangle(h: &[Vec<Scalar>]) -> Vec<Scalar> {
    let n = h.len();
    (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).map(|(a, b)| h[a][b].clone()).collect()
}

/// The matrix `M`: one row per member of `t`, holding `Hess(Q)(v)` at the upper-triangular positions.
pub fn hessian_matrix(jet: &PointJet, t: &CandidateSet) -> Result<Matrix> {
    let n = jet.point.len();
    let size = n * (n + 1) / 2;
    if t.len() != size {
        return Err(Error::DimensionMismatch { expected: size, got: t.len() });
    }
    let rows: Vec<Vec<Scalar>> = t
        .singles
        .iter()
        .map(|&i| upper_triangle(&jet.jets[i].hessian))
        .chain(t.pairs.iter().map(|&(i, j)| upper_triangle(&product_hessian(&jet.jets[i], &jet.jets[j]))))
        .collect();
    Ok(Matrix::from_rows(rows))
}

/// `det M` for one candidate set, given a precomputed jet and Jacobian verdict.
pub fn hessian_from_jet(jet: &PointJet, t: &CandidateSet, regular: bool) -> Result<Certificate> {
    let mut c = Certificate::of(&hessian_matrix(jet, t)?);
    if !regular {
        c.warnings.push(Warning::PointNotRegular);
    }
    Ok(c)
}

/// `det M` at `v`. A non-regular `v` still yields a determinant, flagged with [`Warning::PointNotRegular`].
pub fn hessian_certificate(b: &BasicInvariantSet, t: &CandidateSet, v: &[Scalar]) -> Result<Certificate> {
    let jet = jet_at(b, v)?;
    let regular = jacobian_from_jet(&jet).nonzero;
    hessian_from_jet(&jet, t, regular)
}

/// Determinants for many candidate sets over one jet, in input order.
pub fn hessian_certificates(jet: &PointJet, sets: &[CandidateSet], regular: bool, workers: usize) -> Result<Vec<Certificate>> {
    if workers <= 1 {
        return sets.iter().map(|t| hessian_from_jet(jet, t, regular)).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().map_err(|e| Error::Io(e.to_string()))?;
    pool.install(|| sets.par_iter().map(|t| hessian_from_jet(jet, t, regular)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{catalog, GroupLabel};
    use crate::group::{build_group, fundamental_covector, orbit};
    use crate::scalar::rat;

    fn basic(l: GroupLabel, degrees: &[u32]) -> (ReflectionGroup, BasicInvariantSet) {
        let g = build_group(catalog(l)).unwrap();
        let o = orbit(&g, &fundamental_covector(&g));
        let b = BasicInvariantSet::new(&g, &o, degrees);
        (g, b)
    }

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    #[test]
    fn psi_zero_is_orbit_size() {
        let (_, b) = basic(GroupLabel::H3, &[2, 6, 10]);
        assert_eq!(psi_eval(&b, 0, &ints(&[1, 2, 3])).unwrap(), Scalar::from_int(12));
    }

    #[test]
    fn a1_jet() {
        // orbit {x, -x}: psi_2 = 2x^2
        let (_, b) = basic(GroupLabel::A(1), &[2]);
        let j = &jet_at(&b, &ints(&[3])).unwrap().jets[0];
        assert_eq!(j.value, Scalar::from_int(18));
        assert_eq!(j.gradient, ints(&[12]));
        assert_eq!(j.hessian, vec![ints(&[4])]);
    }

    #[test]
    fn h3_psi2_invariant() {
        let (g, b) = basic(GroupLabel::H3, &[2, 6, 10]);
        let v = ints(&[1, 2, 3]);
        for i in 0..3 {
            let rv = g.reflect_point(i, &v);
            for m in [2, 6, 10] {
                assert_eq!(psi_eval(&b, m, &v).unwrap(), psi_eval(&b, m, &rv).unwrap());
            }
        }
    }

    #[test]
    fn zero_point_jets_vanish() {
        let (_, b) = basic(GroupLabel::F4, &[2, 6, 8, 12]);
        let jet = jet_at(&b, &ints(&[0, 0, 0, 0])).unwrap();
        for j in &jet.jets[1..] {
            assert!(j.gradient.iter().all(Scalar::is_zero));
            assert!(j.hessian.iter().flatten().all(Scalar::is_zero));
        }
        assert!(!jacobian_from_jet(&jet).nonzero);
    }

    #[test]
    fn h3_jacobian_nonzero_and_golden_hessians() {
        let (_, b) = basic(GroupLabel::H3, &[2, 6, 10]);
        let jet = jet_at(&b, &ints(&[1, 2, 3])).unwrap();
        assert!(jacobian_from_jet(&jet).nonzero);
        for j in &jet.jets {
            for a in 0..3 {
                for c in 0..3 {
                    assert_eq!(j.hessian[a][c], j.hessian[c][a]);
                }
            }
        }
    }

    #[test]
    fn a2_reflection_fixed_point_is_singular() {
        let (g, b) = basic(GroupLabel::A(2), &[2, 3]);
        // 2 a1 - a2 = 0
        let v = ints(&[1, 2]);
        assert_eq!(g.reflect_point(0, &v), v);
        assert!(!jacobian_certificate(&b, &v).unwrap().nonzero);
        assert!(jacobian_certificate(&b, &ints(&[1, 3])).unwrap().nonzero);
    }

    #[test]
    fn h3_candidate_sets() {
        let num = UniPoly::from_ints(&[1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1]);
        let sets = enumerate_candidate_sets(&[2, 6, 10], &num).unwrap();
        assert_eq!(sets.len(), 2);
        assert_eq!(sets[0].pairs, vec![(0, 0), (0, 1), (0, 2)]);
        assert_eq!(sets[1].pairs, vec![(0, 0), (0, 1), (1, 1)]);
        for s in &sets {
            assert_eq!(s.census(&[2, 6, 10]), num);
        }
        assert_eq!(sets[0].to_string(), "{rho1, rho2, rho3, rho1rho1, rho1rho2, rho1rho3}");
    }

    #[test]
    fn unreachable_numerator() {
        assert_eq!(
            enumerate_candidate_sets(&[2, 6, 10], &UniPoly::from_ints(&[1, 0, 0, 1])),
            Err(Error::NoCandidateSets)
        );
        assert_eq!(
            enumerate_candidate_sets(&[2, 6, 10], &UniPoly::from_ints(&[1, 0, 1, 0, 1, 1, 1, 0, 1])),
            Err(Error::NoCandidateSets)
        );
    }

    #[test]
    fn h3_hessian_certificates() {
        let (_, b) = basic(GroupLabel::H3, &[2, 6, 10]);
        let num = UniPoly::from_ints(&[1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1]);
        let v = ints(&[1, 2, 3]);
        for t in enumerate_candidate_sets(&[2, 6, 10], &num).unwrap() {
            let c = hessian_certificate(&b, &t, &v).unwrap();
            assert!(c.nonzero, "{t}");
            assert!(c.warnings.is_empty());
        }
    }

    #[test]
    fn zero_point_hessian_flags_warning() {
        let (_, b) = basic(GroupLabel::H3, &[2, 6, 10]);
        let t = CandidateSet { singles: vec![0, 1, 2], pairs: vec![(0, 0), (0, 1), (0, 2)] };
        let c = hessian_certificate(&b, &t, &ints(&[0, 0, 0])).unwrap();
        assert!(!c.nonzero);
        assert_eq!(c.warnings, vec![Warning::PointNotRegular]);
    }

    #[test]
    fn dimension_checks() {
        let (_, b) = basic(GroupLabel::A(2), &[2, 3]);
        assert_eq!(jet_at(&b, &ints(&[1])), Err(Error::DimensionMismatch { expected: 2, got: 1 }));
        let short = CandidateSet { singles: vec![0, 1], pairs: vec![] };
        assert!(matches!(hessian_certificate(&b, &short, &ints(&[1, 3])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn direct_sum_pads_forms() {
        let (_, a1) = basic(GroupLabel::A(1), &[2]);
        let s = a1.direct_sum(&a1);
        assert_eq!(s.rank, 2);
        let v = vec![Scalar::from_int(1), Scalar::from_rational(rat(1, 2))];
        let jet = jet_at(&s, &v).unwrap();
        assert_eq!(jet.jets[0].value, Scalar::from_int(2));
        assert_eq!(jet.jets[1].value, Scalar::from_rational(rat(1, 2)));
    }
}
