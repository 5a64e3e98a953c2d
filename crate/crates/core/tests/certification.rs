use coxhess::cache::{histogram_cached, CachedRunOptions, HistogramCache};
use coxhess::certify::{basic_invariants, certify_with, CertifyOptions, PointSource};
use coxhess::invariants::{hessian_certificate, hessian_matrix, jet_at, CandidateSet, Warning};
use coxhess::molien::histogram_with;
use coxhess::symbolic::expand_psi;
use coxhess::group::{fundamental_covector, orbit};
use coxhess::{build_group, catalog_str, GroupLabel, Matrix, Provenance, Scalar, Verdict};

fn ints(v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&x| Scalar::from_int(x)).collect()
}

#[test]
fn a2_hessian_at_regular_point() {
    let g = build_group(catalog_str("A2").unwrap()).unwrap();
    let b = basic_invariants(&g, &[2, 3]);
    let t = CandidateSet { singles: vec![0, 1], pairs: vec![(0, 0)] };
    let v = ints(&[1, 3]);
    let c = hessian_certificate(&b, &t, &v).unwrap();
    assert!(c.nonzero);
    assert!(c.warnings.is_empty());
    assert_eq!(c.determinant, Scalar::from_int(5760));

    // the same matrix assembled from the expanded polynomials
    let forms = orbit(&g, &fundamental_covector(&g)).forms(g.cartan());
    let r1 = expand_psi(&forms, 2).unwrap();
    let r2 = expand_psi(&forms, 3).unwrap();
    let q = r1.mul(&r1);
    let row = |f: &coxhess::symbolic::MultiPoly| {
        vec![f.derivative(0).derivative(0).eval(&v), f.derivative(0).derivative(1).eval(&v), f.derivative(1).derivative(1).eval(&v)]
    };
    let m = Matrix::from_rows(vec![row(&r1), row(&r2), row(&q)]);
    assert_eq!(m.determinant(), c.determinant);
    assert_eq!(hessian_matrix(&jet_at(&b, &v).unwrap(), &t).unwrap(), m);
}

#[test]
fn a2_reflection_fixed_point_is_singular() {
    let g = build_group(catalog_str("A2").unwrap()).unwrap();
    let b = basic_invariants(&g, &[2, 3]);
    let t = CandidateSet { singles: vec![0, 1], pairs: vec![(0, 0)] };
    let v = ints(&[1, 2]);
    assert_eq!(g.reflect_point(0, &v), v);
    let c = hessian_certificate(&b, &t, &v).unwrap();
    assert!(!c.nonzero);
    assert_eq!(c.warnings, vec![Warning::PointNotRegular]);
}

#[test]
fn zero_point_fails_with_warning() {
    let r = certify_with("H3", CertifyOptions { v: Some(ints(&[0, 0, 0])), ..CertifyOptions::default() }).unwrap();
    assert_eq!(r.verdict, Verdict::Fail);
    assert!(r.warnings.contains(&Warning::PointNotRegular));
    assert_eq!(r.v_source, PointSource::User);
}

#[test]
fn report_is_independent_of_workers() {
    let base = |w| {
        certify_with("F4", CertifyOptions { workers: w, ..CertifyOptions::default() }).unwrap().to_json_without_timings()
    };
    let one = base(1);
    assert_eq!(one, base(2));
    assert_eq!(one, base(8));
}

#[test]
fn non_exceptional_group_searches_a_point() {
    let r = certify_with("B3", CertifyOptions::default()).unwrap();
    assert_eq!(r.v_source, PointSource::Search);
    assert_eq!(r.degrees, vec![2, 4, 6]);
    assert_eq!(r.numerator_source, Provenance::Computed);
    assert!(r.jacobian.nonzero);
}

#[test]
fn unknown_label_is_rejected() {
    assert!(certify_with("X9", CertifyOptions::default()).is_err());
    assert!("Q4".parse::<GroupLabel>().is_err());
}

#[test]
fn interrupted_run_resumes_from_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = HistogramCache::new(dir.path());
    let g = build_group(catalog_str("E6").unwrap()).unwrap();
    let partial = histogram_cached(&g, Some(&cache), CachedRunOptions { stop_after_blocks: Some(3), ..CachedRunOptions::default() }).unwrap();
    assert!(!partial.complete);
    let resumed = histogram_cached(&g, Some(&cache), CachedRunOptions::default()).unwrap();
    assert!(resumed.complete);
    assert_eq!(resumed.histogram, histogram_with(&g, Default::default()).unwrap());
    let again = histogram_cached(&g, Some(&cache), CachedRunOptions::default()).unwrap();
    assert!(again.from_cache);
    assert_eq!(again.histogram, resumed.histogram);
}
