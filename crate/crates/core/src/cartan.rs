//! Cartan matrices of finite reflection groups.
//!
//! Entries follow `C[i][j] = r_i^vee(r_j)`. Type E uses Bourbaki numbering
//! (nodes 1,3,4,5,... on the long arm, node 2 attached to node 4), which makes
//! the last node the one whose fundamental weight has the smallest orbit.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{rat, Field, GoldenScalar, Scalar};

/// Largest rank the catalog builds.
pub const MAX_RANK: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupLabel {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    G2,
    F4,
    E6,
    E7,
    E8,
    H3,
    H4,
}

impl GroupLabel {
    pub const EXCEPTIONAL: [GroupLabel; 6] = [
        GroupLabel::H3,
        GroupLabel::H4,
        GroupLabel::F4,
        GroupLabel::E6,
        GroupLabel::E7,
        GroupLabel::E8,
    ];

    pub fn rank(self) -> usize {
        match self {
            GroupLabel::A(n) | GroupLabel::B(n) | GroupLabel::C(n) | GroupLabel::D(n) => n,
            GroupLabel::G2 => 2,
            GroupLabel::F4 | GroupLabel::H4 => 4,
            GroupLabel::H3 => 3,
            GroupLabel::E6 => 6,
            GroupLabel::E7 => 7,
            GroupLabel::E8 => 8,
        }
    }

    pub fn field(self) -> Field {
        match self {
            GroupLabel::H3 | GroupLabel::H4 => Field::Golden,
            _ => Field::Rational,
        }
    }

    /// Standard degrees of the basic invariants.
    pub fn degrees(self) -> Vec<u32> {
        match self {
            GroupLabel::A(n) => (2..=n as u32 + 1).collect(),
            GroupLabel::B(n) | GroupLabel::C(n) => (1..=n as u32).map(|k| 2 * k).collect(),
            GroupLabel::D(n) => {
                let mut d: Vec<u32> = (1..n as u32).map(|k| 2 * k).collect();
                d.push(n as u32);
                d.sort_unstable();
                d
            }
            GroupLabel::G2 => vec![2, 6],
            GroupLabel::F4 => vec![2, 6, 8, 12],
            GroupLabel::E6 => vec![2, 5, 6, 8, 9, 12],
            GroupLabel::E7 => vec![2, 6, 8, 10, 12, 14, 18],
            GroupLabel::E8 => vec![2, 8, 12, 14, 18, 20, 24, 30],
            GroupLabel::H3 => vec![2, 6, 10],
            GroupLabel::H4 => vec![2, 12, 20, 30],
        }
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupLabel::A(n) => write!(f, "A{n}"),
            GroupLabel::B(n) => write!(f, "B{n}"),
            GroupLabel::C(n) => write!(f, "C{n}"),
            GroupLabel::D(n) => write!(f, "D{n}"),
            GroupLabel::G2 => write!(f, "G2"),
            GroupLabel::F4 => write!(f, "F4"),
            GroupLabel::E6 => write!(f, "E6"),
            GroupLabel::E7 => write!(f, "E7"),
            GroupLabel::E8 => write!(f, "E8"),
            GroupLabel::H3 => write!(f, "H3"),
            GroupLabel::H4 => write!(f, "H4"),
        }
    }
}

impl FromStr for GroupLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownLabel(s.to_string());
        let t = s.trim().to_ascii_uppercase();
        let mut chars = t.chars();
        let family = chars.next().ok_or_else(unknown)?;
        let rank: usize = chars.as_str().parse().map_err(|_| unknown())?;
        let bad_rank = Error::UnsupportedRank { family, rank };
        let label = match family {
            'A' if (1..=MAX_RANK).contains(&rank) => GroupLabel::A(rank),
            'B' if (2..=MAX_RANK).contains(&rank) => GroupLabel::B(rank),
            'C' if (2..=MAX_RANK).contains(&rank) => GroupLabel::C(rank),
            'D' if (4..=MAX_RANK).contains(&rank) => GroupLabel::D(rank),
            'G' if rank == 2 => GroupLabel::G2,
            'F' if rank == 4 => GroupLabel::F4,
            'E' if rank == 6 => GroupLabel::E6,
            'E' if rank == 7 => GroupLabel::E7,
            'E' if rank == 8 => GroupLabel::E8,
            'H' if rank == 3 => GroupLabel::H3,
            'H' if rank == 4 => GroupLabel::H4,
            'A' | 'B' | 'C' | 'D' | 'G' | 'F' | 'E' | 'H' => return Err(bad_rank),
            _ => return Err(unknown()),
        };
        Ok(label)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanDatum {
    pub label: String,
    pub matrix: Matrix,
    pub field: Field,
}

impl CartanDatum {
    /// Validates and wraps a Cartan matrix.
    pub fn new(label: impl Into<String>, matrix: Matrix) -> Result<Self> {
        let field = matrix.field();
        let datum = CartanDatum { label: label.into(), matrix, field };
        datum.validate()?;
        Ok(datum)
    }

    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        &self.matrix[(i, j)]
    }

    fn validate(&self) -> Result<()> {
        let c = &self.matrix;
        if !c.is_square() || c.rows() == 0 {
            return Err(Error::InvalidCartan("matrix must be square and nonempty".into()));
        }
        let n = c.rows();
        for i in 0..n {
            if c[(i, i)] != Scalar::from_int(2) {
                return Err(Error::InvalidCartan(format!("diagonal entry {i} is not 2")));
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                if c[(i, j)].is_zero() != c[(j, i)].is_zero() {
                    return Err(Error::InvalidCartan(format!(
                        "entries ({i},{j}) and ({j},{i}) disagree on vanishing"
                    )));
                }
                bond_order(&(&c[(i, j)] * &c[(j, i)]))
                    .ok_or_else(|| Error::InvalidCartan(format!("unsupported bond at ({i},{j})")))?;
            }
        }
        Ok(())
    }

    /// Order `m_ij` of `R_i R_j`.
    pub fn bond(&self, i: usize, j: usize) -> u32 {
        if i == j {
            return 1;
        }
        bond_order(&(self.entry(i, j) * self.entry(j, i))).expect("validated at construction")
    }

    /// Relabels nodes: new node `k` is old node `perm[k]`.
    pub fn permute_nodes(&self, perm: &[usize]) -> Result<CartanDatum> {
        let n = self.rank();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidCartan("node relabelling is not a permutation".into()));
        }
        let rows = (0..n)
            .map(|i| (0..n).map(|j| self.matrix[(perm[i], perm[j])].clone()).collect())
            .collect();
        CartanDatum::new(self.label.clone(), Matrix::from_rows(rows))
    }

    /// Block-diagonal Cartan matrix of the direct product.
    pub fn product(a: &CartanDatum, b: &CartanDatum) -> Result<CartanDatum> {
        let field = a.field.join(b.field);
        let (n1, n2) = (a.rank(), b.rank());
        let mut m = Matrix::zeros(n1 + n2, n1 + n2, field);
        for i in 0..n1 {
            for j in 0..n1 {
                m[(i, j)] = a.matrix[(i, j)].clone().promote(field);
            }
        }
        for i in 0..n2 {
            for j in 0..n2 {
                m[(n1 + i, n1 + j)] = b.matrix[(i, j)].clone().promote(field);
            }
        }
        let mut d = CartanDatum::new(format!("{}x{}", a.label, b.label), m)?;
        d.field = field;
        Ok(d)
    }

    /// Canonical text of the matrix (rows joined by `;`, entries by `,`).
    pub fn canonical_text(&self) -> String {
        self.matrix
            .to_canonical_rows()
            .iter()
            .map(|r| r.join(","))
            .collect::<Vec<_>>()
            .join(";")
    }

    /// SHA-256 of the canonical text, hex encoded.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(format!("{}:{}", self.label, self.canonical_text()).as_bytes());
        hex::encode(digest)
    }
}

fn bond_order(product: &Scalar) -> Option<u32> {
    let phi_sq = Scalar::golden(rat(3, 2), rat(1, 2));
    if product == &phi_sq {
        return Some(5);
    }
    match product.to_i64()? {
        0 => Some(2),
        1 => Some(3),
        2 => Some(4),
        3 => Some(6),
        _ => None,
    }
}

/// The entry `zeta^2 + zeta^3 = -(1 + sqrt 5)/2` for `zeta = exp(2 pi i/5)`.
pub fn golden_bond() -> Scalar {
    -Scalar::Golden(GoldenScalar::phi())
}

fn from_edges(n: usize, field: Field, edges: &[(usize, usize, Scalar, Scalar)]) -> Matrix {
    let mut m = Matrix::zeros(n, n, field);
    for i in 0..n {
        m[(i, i)] = Scalar::int_in(2, field);
    }
    for (i, j, cij, cji) in edges {
        m[(*i, *j)] = cij.clone().promote(field);
        m[(*j, *i)] = cji.clone().promote(field);
    }
    m
}

fn chain_edges(n: usize) -> Vec<(usize, usize, Scalar, Scalar)> {
    (0..n.saturating_sub(1))
        .map(|i| (i, i + 1, Scalar::from_int(-1), Scalar::from_int(-1)))
        .collect()
}

fn simple(i: usize, j: usize) -> (usize, usize, Scalar, Scalar) {
    (i, j, Scalar::from_int(-1), Scalar::from_int(-1))
}

/// Cartan matrix for a catalog label.
pub fn catalog(label: GroupLabel) -> CartanDatum {
    let n = label.rank();
    let field = label.field();
    let edges: Vec<(usize, usize, Scalar, Scalar)> = match label {
        GroupLabel::A(_) => chain_edges(n),
        GroupLabel::B(_) => {
            let mut e = chain_edges(n - 1);
            e.push((n - 2, n - 1, Scalar::from_int(-1), Scalar::from_int(-2)));
            e
        }
        GroupLabel::C(_) => {
            let mut e = chain_edges(n - 1);
            e.push((n - 2, n - 1, Scalar::from_int(-2), Scalar::from_int(-1)));
            e
        }
        GroupLabel::D(_) => {
            let mut e = chain_edges(n - 1);
            e.push(simple(n - 3, n - 1));
            e
        }
        GroupLabel::G2 => vec![(0, 1, Scalar::from_int(-3), Scalar::from_int(-1))],
        GroupLabel::F4 => vec![
            simple(0, 1),
            (1, 2, Scalar::from_int(-1), Scalar::from_int(-2)),
            simple(2, 3),
        ],
        GroupLabel::E6 | GroupLabel::E7 | GroupLabel::E8 => {
            let mut e = vec![simple(0, 2), simple(1, 3)];
            e.extend((2..n - 1).map(|i| simple(i, i + 1)));
            e
        }
        GroupLabel::H3 | GroupLabel::H4 => {
            let mut e = vec![(0, 1, golden_bond(), golden_bond())];
            e.extend((1..n - 1).map(|i| simple(i, i + 1)));
            e
        }
    };
    let matrix = from_edges(n, field, &edges);
    let mut d = CartanDatum::new(label.to_string(), matrix).expect("catalog matrices are valid");
    d.field = field;
    d
}

/// Parses a label string and returns its Cartan datum.
pub fn catalog_str(label: &str) -> Result<CartanDatum> {
    Ok(catalog(label.parse()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_rows(d: &CartanDatum) -> Vec<Vec<i64>> {
        d.matrix.to_rows().iter().map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect()).collect()
    }

    #[test]
    fn a1_is_two() {
        assert_eq!(int_rows(&catalog(GroupLabel::A(1))), vec![vec![2]]);
    }

    #[test]
    fn f4_matches_table() {
        assert_eq!(
            int_rows(&catalog(GroupLabel::F4)),
            vec![vec![2, -1, 0, 0], vec![-1, 2, -1, 0], vec![0, -2, 2, -1], vec![0, 0, -1, 2]]
        );
    }

    #[test]
    fn h3_has_golden_bond() {
        let d = catalog(GroupLabel::H3);
        assert_eq!(d.field, Field::Golden);
        let b = Scalar::golden(rat(-1, 2), rat(-1, 2));
        assert_eq!(d.entry(0, 1), &b);
        assert_eq!(d.entry(1, 0), &b);
        assert_eq!(d.entry(1, 2), &Scalar::from_int(-1));
        assert!(d.entry(0, 2).is_zero());
        assert_eq!(d.bond(0, 1), 5);
        assert_eq!(d.bond(1, 2), 3);
        assert_eq!(d.bond(0, 2), 2);
    }

    #[test]
    fn e8_bourbaki_edges() {
        let d = catalog(GroupLabel::E8);
        let rows = int_rows(&d);
        let mut edges = vec![];
        for i in 0..8 {
            for j in i + 1..8 {
                if rows[i][j] != 0 {
                    edges.push((i + 1, j + 1));
                }
            }
        }
        assert_eq!(edges, vec![(1, 3), (2, 4), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8)]);
    }

    #[test]
    fn classical_bonds() {
        assert_eq!(catalog(GroupLabel::B(3)).bond(1, 2), 4);
        assert_eq!(catalog(GroupLabel::C(3)).entry(1, 2), &Scalar::from_int(-2));
        assert_eq!(catalog(GroupLabel::G2).bond(0, 1), 6);
        let d5 = catalog(GroupLabel::D(5));
        assert_eq!(d5.entry(2, 4), &Scalar::from_int(-1));
        assert!(d5.entry(3, 4).is_zero());
    }

    #[test]
    fn label_parsing() {
        assert_eq!("e7".parse::<GroupLabel>().unwrap(), GroupLabel::E7);
        assert_eq!("A5".parse::<GroupLabel>().unwrap(), GroupLabel::A(5));
        assert!(matches!("X3".parse::<GroupLabel>(), Err(Error::UnknownLabel(_))));
        assert!(matches!("".parse::<GroupLabel>(), Err(Error::UnknownLabel(_))));
        assert!(matches!("A9".parse::<GroupLabel>(), Err(Error::UnsupportedRank { .. })));
        assert!(matches!("E9".parse::<GroupLabel>(), Err(Error::UnsupportedRank { .. })));
        assert!(matches!("D3".parse::<GroupLabel>(), Err(Error::UnsupportedRank { .. })));
        for l in GroupLabel::EXCEPTIONAL {
            assert_eq!(l.to_string().parse::<GroupLabel>().unwrap(), l);
        }
    }

    #[test]
    fn invalid_matrices_rejected() {
        let bad_diag = Matrix::from_int_rows(&[&[2, -1], &[-1, 3]]);
        assert!(matches!(CartanDatum::new("x", bad_diag), Err(Error::InvalidCartan(_))));
        let asym = Matrix::from_int_rows(&[&[2, -1], &[0, 2]]);
        assert!(matches!(CartanDatum::new("x", asym), Err(Error::InvalidCartan(_))));
        let bad_bond = Matrix::from_int_rows(&[&[2, -2], &[-2, 2]]);
        assert!(matches!(CartanDatum::new("x", bad_bond), Err(Error::InvalidCartan(_))));
    }

    #[test]
    fn product_and_hash() {
        let a1 = catalog(GroupLabel::A(1));
        let a2 = catalog(GroupLabel::A(2));
        let p = CartanDatum::product(&a1, &a2).unwrap();
        assert_eq!(p.label, "A1xA2");
        assert_eq!(int_rows(&p), vec![vec![2, 0, 0], vec![0, 2, -1], vec![0, -1, 2]]);
        assert_eq!(p.hash().len(), 64);
        assert_ne!(p.hash(), catalog(GroupLabel::A(3)).hash());
        assert_eq!(catalog(GroupLabel::E6).hash(), catalog(GroupLabel::E6).hash());
    }

    #[test]
    fn permuting_nodes() {
        let a3 = catalog(GroupLabel::A(3));
        let p = a3.permute_nodes(&[1, 0, 2]).unwrap();
        assert_eq!(int_rows(&p), vec![vec![2, -1, -1], vec![-1, 2, 0], vec![-1, 0, 2]]);
        assert!(a3.permute_nodes(&[0, 0, 1]).is_err());
    }
}
