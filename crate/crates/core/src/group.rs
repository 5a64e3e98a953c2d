//! Reflection groups generated from a Cartan matrix, covectors and their orbits.
//!
//! Points are coordinate columns `a` in the simple-root basis. A covector is
//! stored by its co-root coordinates `mu`; it pairs with a point as
//! `mu * C * a`, so `mu * C` is the row of the linear form in point
//! coordinates.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::cartan::CartanDatum;
use crate::error::{Error, Result};
use crate::matrix::{dot, Matrix};
use crate::poly::UniPoly;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement(pub Matrix);

impl GroupElement {
    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn mul(&self, o: &GroupElement) -> GroupElement {
        GroupElement(self.0.mul(&o.0))
    }

    /// Canonical key: matrix entries as canonical strings, row major.
    pub fn canonical_key(&self) -> String {
        self.0
            .to_canonical_rows()
            .iter()
            .map(|r| r.join(","))
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// `det(1 - t w)`.
pub fn char_poly(w: &GroupElement) -> UniPoly {
    w.0.one_minus_t_det()
}

#[derive(Debug, Clone)]
pub struct ReflectionGroup {
    pub datum: CartanDatum,
    pub generators: Vec<GroupElement>,
    cartan_inverse: Matrix,
}

impl ReflectionGroup {
    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    pub fn label(&self) -> &str {
        &self.datum.label
    }

    pub fn cartan(&self) -> &Matrix {
        &self.datum.matrix
    }

    pub fn cartan_inverse(&self) -> &Matrix {
        &self.cartan_inverse
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(Matrix::identity(self.rank(), self.datum.field))
    }

    /// Reflection `R_i` applied to a point.
    pub fn reflect_point(&self, i: usize, a: &[Scalar]) -> Vec<Scalar> {
        let mut out = a.to_vec();
        out[i] = &a[i] - &dot(self.datum.matrix.row(i), a);
        out
    }

    /// Dual action of `R_i` on a covector: the form `mu C` becomes `mu C R_i`.
    pub fn reflect_covector(&self, i: usize, c: &Covector) -> Covector {
        let col = self.datum.matrix.column(i);
        let mut mu = c.mu.clone();
        mu[i] = &c.mu[i] - &dot(&c.mu, &col);
        Covector { mu }
    }
}

/// Generators `R_i` with `(R_i a)_i = a_i - sum_j C_ij a_j`, other coordinates fixed.
pub fn build_group(datum: CartanDatum) -> Result<ReflectionGroup> {
    let n = datum.rank();
    let field = datum.field;
    let cartan_inverse = datum.matrix.inverse().map_err(|_| Error::SingularCartan)?;
    let generators = (0..n)
        .map(|i| {
            let mut m = Matrix::identity(n, field);
            for j in 0..n {
                let e = if i == j { Scalar::one_in(field) } else { Scalar::zero_in(field) };
                m[(i, j)] = &e - datum.entry(i, j);
            }
            GroupElement(m)
        })
        .collect();
    Ok(ReflectionGroup { datum, generators, cartan_inverse })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationVerdict {
    pub i: usize,
    pub j: usize,
    pub order: u32,
    pub holds: bool,
}

/// Checks `R_i^2 = 1` and `(R_i R_j)^{m_ij} = 1` with `m_ij` decoded from the bond,
/// and that no smaller positive power of `R_i R_j` is the identity.
pub fn coxeter_relation_check(g: &ReflectionGroup) -> Result<Vec<RelationVerdict>> {
    let n = g.rank();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            let order = if i == j { 2 } else { g.datum.bond(i, j) };
            let base = if i == j {
                g.generators[i].0.clone()
            } else {
                g.generators[i].0.mul(&g.generators[j].0)
            };
            let holds = base.pow(order).is_identity()
                && (1..order).all(|k| !base.pow(k).is_identity());
            if !holds {
                return Err(Error::RelationViolation { i, j, order });
            }
            out.push(RelationVerdict { i, j, order, holds });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Covector {
    pub mu: Vec<Scalar>,
}

impl Covector {
    /// Row of the linear form in point coordinates, `mu * C`.
    pub fn form(&self, cartan: &Matrix) -> Vec<Scalar> {
        cartan.apply_row(&self.mu)
    }

    pub fn pair(&self, cartan: &Matrix, a: &[Scalar]) -> Scalar {
        dot(&self.form(cartan), a)
    }

    pub fn canonical_key(&self) -> String {
        self.mu.iter().map(Scalar::to_canonical).collect::<Vec<_>>().join(",")
    }
}

/// Solves `mu C = (0, ..., 0, 1)`.
pub fn fundamental_covector(g: &ReflectionGroup) -> Covector {
    let n = g.rank();
    Covector { mu: g.cartan_inverse.row(n - 1).to_vec() }
}

/// Covector dual to the simple root `node`: `mu C = e_node`.
pub fn node_covector(g: &ReflectionGroup, node: usize) -> Covector {
    Covector { mu: g.cartan_inverse.row(node).to_vec() }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CovectorOrbit {
    pub label: String,
    pub elements: Vec<Covector>,
}

impl CovectorOrbit {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Linear forms in point coordinates, one per orbit element.
    pub fn forms(&self, cartan: &Matrix) -> Vec<Vec<Scalar>> {
        self.elements.iter().map(|c| c.form(cartan)).collect()
    }

    pub fn contains(&self, c: &Covector) -> bool {
        self.elements.iter().any(|e| e == c)
    }
}

/// Breadth-first closure of `seed` under the dual generator action.
/// Generators are tried in index order, so the element order is deterministic.
pub fn orbit(g: &ReflectionGroup, seed: &Covector) -> CovectorOrbit {
    let mut seen: HashSet<Covector> = HashSet::new();
    let mut elements = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(seed.clone());
    queue.push_back(seed.clone());
    while let Some(c) = queue.pop_front() {
        for i in 0..g.rank() {
            let next = g.reflect_covector(i, &c);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
        elements.push(c);
    }
    CovectorOrbit { label: g.label().to_string(), elements }
}

/// Outcome of matching the "last node" convention against an expected orbit size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeResolution {
    /// New node `k` is old node `permutation[k]`; `None` when no relabelling was needed.
    pub permutation: Option<Vec<usize>>,
    pub orbit_size: usize,
}

/// Makes the last node the one whose fundamental covector orbit has `expected` elements.
///
/// If the given labelling already satisfies this, it is kept. Otherwise each
/// node is tried as the last one (the others keep their relative order) and
/// the first match wins.
pub fn resolve_last_node(
    datum: &CartanDatum,
    expected: usize,
) -> Result<(ReflectionGroup, NodeResolution)> {
    let g = build_group(datum.clone())?;
    let size = orbit(&g, &fundamental_covector(&g)).len();
    if size == expected {
        return Ok((g, NodeResolution { permutation: None, orbit_size: size }));
    }
    let n = datum.rank();
    for node in 0..n {
        if orbit(&g, &node_covector(&g, node)).len() == expected {
            let mut perm: Vec<usize> = (0..n).filter(|&k| k != node).collect();
            perm.push(node);
            let relabelled = build_group(datum.permute_nodes(&perm)?)?;
            return Ok((relabelled, NodeResolution { permutation: Some(perm), orbit_size: expected }));
        }
    }
    Err(Error::InvalidCartan(format!(
        "no node of {} has a fundamental orbit of size {expected}",
        datum.label
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{catalog, GroupLabel};
    use crate::scalar::{rat, Field};

    fn group(l: GroupLabel) -> ReflectionGroup {
        build_group(catalog(l)).unwrap()
    }

    #[test]
    fn a1_generator_is_minus_one() {
        let g = group(GroupLabel::A(1));
        assert_eq!(g.generators[0].0, Matrix::from_int_rows(&[&[-1]]));
    }

    /// Plain integer 2x2 / 4x4 matrix products, independent of `Matrix`.
    fn int_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let n = a.len();
        (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
    }

    fn int_pow(a: &[Vec<i64>], e: u32) -> Vec<Vec<i64>> {
        let n = a.len();
        let mut acc: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
        for _ in 0..e {
            acc = int_mul(&acc, a);
        }
        acc
    }

    fn to_ints(m: &Matrix) -> Vec<Vec<i64>> {
        m.to_rows().iter().map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect()).collect()
    }

    #[test]
    fn a2_coxeter_element_has_order_three() {
        let g = group(GroupLabel::A(2));
        let r1 = to_ints(&g.generators[0].0);
        let r2 = to_ints(&g.generators[1].0);
        assert_eq!(r1, vec![vec![-1, 1], vec![0, 1]]);
        assert_eq!(r2, vec![vec![1, 0], vec![1, -1]]);
        let c = int_mul(&r1, &r2);
        assert_eq!(int_pow(&c, 3), int_pow(&c, 0));
        assert_ne!(int_pow(&c, 1), int_pow(&c, 0));
    }

    #[test]
    fn f4_double_bond_has_order_four() {
        let g = group(GroupLabel::F4);
        let p = int_mul(&to_ints(&g.generators[1].0), &to_ints(&g.generators[2].0));
        assert_eq!(int_pow(&p, 4), int_pow(&p, 0));
        assert_ne!(int_pow(&p, 2), int_pow(&p, 0));
    }

    #[test]
    fn relations_hold_across_catalog() {
        for l in [
            GroupLabel::A(2),
            GroupLabel::B(3),
            GroupLabel::C(4),
            GroupLabel::D(5),
            GroupLabel::G2,
            GroupLabel::H3,
            GroupLabel::H4,
            GroupLabel::F4,
            GroupLabel::E8,
        ] {
            let v = coxeter_relation_check(&group(l)).unwrap();
            let n = l.rank();
            assert_eq!(v.len(), n * (n + 1) / 2);
        }
        let h3 = coxeter_relation_check(&group(GroupLabel::H3)).unwrap();
        assert!(h3.iter().any(|r| r.i == 0 && r.j == 1 && r.order == 5 && r.holds));
        let a2 = coxeter_relation_check(&group(GroupLabel::A(2))).unwrap();
        assert!(a2.iter().any(|r| r.i == 0 && r.j == 1 && r.order == 3));
    }

    #[test]
    fn relation_violation_detected() {
        // Sabotage: swap a generator for the identity.
        let mut g = group(GroupLabel::A(2));
        g.generators[1] = g.identity();
        assert!(matches!(coxeter_relation_check(&g), Err(Error::RelationViolation { .. })));
    }

    #[test]
    fn fundamental_covectors() {
        let a2 = group(GroupLabel::A(2));
        let mu = fundamental_covector(&a2).mu;
        assert_eq!(mu, vec![Scalar::from_rational(rat(1, 3)), Scalar::from_rational(rat(2, 3))]);
        let a1 = group(GroupLabel::A(1));
        assert_eq!(fundamental_covector(&a1).mu, vec![Scalar::from_rational(rat(1, 2))]);
        // mu C = e_n
        let f = fundamental_covector(&a2).form(a2.cartan());
        assert_eq!(f, vec![Scalar::from_int(0), Scalar::from_int(1)]);
    }

    #[test]
    fn a1_orbit() {
        let g = group(GroupLabel::A(1));
        let o = orbit(&g, &fundamental_covector(&g));
        let mus: Vec<_> = o.elements.iter().map(|c| c.mu[0].clone()).collect();
        assert_eq!(mus, vec![Scalar::from_rational(rat(1, 2)), Scalar::from_rational(rat(-1, 2))]);
    }

    #[test]
    fn exceptional_orbit_sizes() {
        for (l, size) in [
            (GroupLabel::H3, 12),
            // Vector stabilizers are parabolic; the largest proper one in H4 is H3 (order 120).
            (GroupLabel::H4, 120),
            (GroupLabel::F4, 24),
            (GroupLabel::E6, 27),
            (GroupLabel::E7, 56),
        ] {
            let g = group(l);
            assert_eq!(orbit(&g, &fundamental_covector(&g)).len(), size, "{l}");
        }
    }

    #[test]
    fn orbit_is_closed_and_pairing_is_equivariant() {
        for l in [GroupLabel::F4, GroupLabel::B(3), GroupLabel::H3] {
            let g = group(l);
            let o = orbit(&g, &fundamental_covector(&g));
            let a: Vec<Scalar> = (1..=g.rank() as i64).map(|k| Scalar::int_in(k * k - 2, g.datum.field)).collect();
            for c in &o.elements {
                for i in 0..g.rank() {
                    let img = g.reflect_covector(i, c);
                    assert!(o.contains(&img));
                    // (R_i^* c)(a) = c(R_i a)
                    assert_eq!(img.pair(g.cartan(), &a), c.pair(g.cartan(), &g.reflect_point(i, &a)));
                }
            }
        }
    }

    #[test]
    fn reflect_point_matches_generator_matrix() {
        let g = group(GroupLabel::H3);
        let a = vec![Scalar::int_in(1, Field::Golden), Scalar::from_int(2), Scalar::from_int(3)];
        for i in 0..3 {
            assert_eq!(g.reflect_point(i, &a), g.generators[i].0.apply(&a));
        }
    }

    #[test]
    fn char_polys() {
        let g = group(GroupLabel::A(3));
        assert_eq!(char_poly(&g.identity()), UniPoly::from_ints(&[1, -3, 3, -1]));
        // (1-t)^2 (1+t)
        assert_eq!(char_poly(&g.generators[1]), UniPoly::from_ints(&[1, -1, -1, 1]));
        let a2 = group(GroupLabel::A(2));
        let c = a2.generators[0].mul(&a2.generators[1]);
        assert_eq!(char_poly(&c), UniPoly::from_ints(&[1, 1, 1]));
    }

    #[test]
    fn resolves_shuffled_e6() {
        let e6 = catalog(GroupLabel::E6);
        let shuffled = e6.permute_nodes(&[0, 5, 2, 3, 4, 1]).unwrap();
        let (g, res) = resolve_last_node(&shuffled, 27).unwrap();
        assert!(res.permutation.is_some());
        assert_eq!(orbit(&g, &fundamental_covector(&g)).len(), 27);
        let (_, plain) = resolve_last_node(&e6, 27).unwrap();
        assert_eq!(plain.permutation, None);
        assert!(resolve_last_node(&e6, 28).is_err());
    }
}
