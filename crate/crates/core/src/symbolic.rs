//! Sparse multivariate polynomials for small ranks, used as an independent
//! check on the closed-form jets, plus the polarization operators `D_ij`.
//!
//! A polynomial in `m` vector variables of rank `n` has `n * m` scalar
//! variables; block `b` (1-based) owns indices `(b - 1) * n .. b * n`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

pub const MAX_EXPAND_RANK: usize = 4;
pub const MAX_EXPAND_TERMS: u128 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    /// Rank of one block.
    pub n: usize,
    pub blocks: usize,
    terms: BTreeMap<Vec<u32>, Scalar>,
}

impl MultiPoly {
    pub fn zero(n: usize, blocks: usize) -> Self {
        MultiPoly { n, blocks, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, blocks: usize, c: Scalar) -> Self {
        let mut p = MultiPoly::zero(n, blocks);
        p.add_term(vec![0; n * blocks], c);
        p
    }

    /// Coordinate `k` (0-based) of block `b` (1-based).
    pub fn variable(n: usize, blocks: usize, b: usize, k: usize) -> Self {
        let mut e = vec![0; n * blocks];
        e[(b - 1) * n + k] = 1;
        let mut p = MultiPoly::zero(n, blocks);
        p.add_term(e, Scalar::from_int(1));
        p
    }

    /// `sum_k coeffs[k] * x_k` in block 1.
    pub fn linear(coeffs: &[Scalar], blocks: usize) -> Self {
        let n = coeffs.len();
        let mut p = MultiPoly::zero(n, blocks);
        for (k, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n * blocks];
            e[k] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.n * self.blocks
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Scalar> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, e: Vec<u32>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                let s = slot.get() + &c;
                if s.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = s;
                }
            }
        }
    }

    fn same_shape(&self, o: &MultiPoly) {
        assert_eq!((self.n, self.blocks), (o.n, o.blocks), "polynomial shapes differ");
    }

    pub fn add(&self, o: &MultiPoly) -> MultiPoly {
        self.same_shape(o);
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &MultiPoly) -> MultiPoly {
        self.add(&o.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> MultiPoly {
        let mut r = MultiPoly::zero(self.n, self.blocks);
        for (e, c) in &self.terms {
            r.add_term(e.clone(), c * s);
        }
        r
    }

    pub fn mul(&self, o: &MultiPoly) -> MultiPoly {
        self.same_shape(o);
        let mut r = MultiPoly::zero(self.n, self.blocks);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, m: u32) -> MultiPoly {
        let mut r = MultiPoly::constant(self.n, self.blocks, Scalar::from_int(1));
        for _ in 0..m {
            r = r.mul(self);
        }
        r
    }

    /// Partial derivative in scalar variable `var`.
    pub fn derivative(&self, var: usize) -> MultiPoly {
        let mut r = MultiPoly::zero(self.n, self.blocks);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[var] -= 1;
            r.add_term(e2, c * &Scalar::from_int(e[var] as i64));
        }
        r
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.nvars(), "point has the wrong number of coordinates");
        self.terms
            .iter()
            .map(|(e, c)| e.iter().zip(point).fold(c.clone(), |acc, (&k, x)| &acc * &x.pow(k)))
            .sum()
    }

    /// The same polynomial viewed in `blocks` vector variables (`blocks >= self.blocks`).
    pub fn with_blocks(&self, blocks: usize) -> MultiPoly {
        assert!(blocks >= self.blocks);
        let pad = self.n * (blocks - self.blocks);
        let mut r = MultiPoly::zero(self.n, blocks);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2.extend(std::iter::repeat(0).take(pad));
            r.add_term(e2, c.clone());
        }
        r
    }

    /// `f(M u_1, ..., M u_m)` for a linear map `M` applied to every block.
    pub fn substitute_linear(&self, m: &Matrix) -> MultiPoly {
        let n = self.n;
        let images: Vec<MultiPoly> = (0..self.nvars())
            .map(|var| {
                let (b, k) = (var / n, var % n);
                let mut p = MultiPoly::zero(n, self.blocks);
                for j in 0..n {
                    p = p.add(&MultiPoly::variable(n, self.blocks, b + 1, j).scale(&m[(k, j)]));
                }
                p
            })
            .collect();
        let mut r = MultiPoly::zero(n, self.blocks);
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(n, self.blocks, c.clone());
            for (var, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&images[var].pow(k));
                }
            }
            r = r.add(&t);
        }
        r
    }

    fn var_name(&self, var: usize) -> String {
        const LETTERS: [&str; 4] = ["x", "u", "w", "y"];
        let (b, k) = (var / self.n, var % self.n);
        match LETTERS.get(b) {
            Some(l) => format!("{l}{}", k + 1),
            None => format!("z{}_{}", b + 1, k + 1),
        }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let (sign, mag) = if c.signum() < 0 { ("-", -c.clone()) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| if k == 1 { self.var_name(v) } else { format!("{}^{k}", self.var_name(v)) })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// `psi_m = sum over forms of (form . x)^m`, fully expanded.
pub fn expand_psi(forms: &[Vec<Scalar>], m: u32) -> Result<MultiPoly> {
    let n = forms.first().map_or(0, Vec::len);
    let terms = binomial(m as u128 + n as u128 - 1, n.saturating_sub(1) as u128);
    if n > MAX_EXPAND_RANK || terms > MAX_EXPAND_TERMS {
        return Err(Error::ExpansionTooLarge { terms });
    }
    let mut r = MultiPoly::zero(n, 1);
    for f in forms {
        r = r.add(&MultiPoly::linear(f, 1).pow(m));
    }
    Ok(r)
}

/// `D_ij`: differentiate block `j` in the direction of block `i` (both 1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolarizationOp {
    pub i: usize,
    pub j: usize,
}

pub fn polarize(op: PolarizationOp, f: &MultiPoly, m: usize) -> Result<MultiPoly> {
    for idx in [op.i, op.j] {
        if idx == 0 || idx > m {
            return Err(Error::BlockIndexOutOfRange { index: idx, blocks: m });
        }
    }
    let f = if f.blocks < m { f.with_blocks(m) } else { f.clone() };
    let n = f.n;
    let mut r = MultiPoly::zero(n, f.blocks);
    for k in 0..n {
        let d = f.derivative((op.j - 1) * n + k);
        r = r.add(&d.mul(&MultiPoly::variable(n, f.blocks, op.i, k)));
    }
    Ok(r)
}

/// Coefficient of `u_a w_b` in a polynomial bilinear in blocks 2 and 3, as a block-1 polynomial.
fn bilinear_coefficient(p: &MultiPoly, a: usize, b: usize) -> MultiPoly {
    let n = p.n;
    let mut r = MultiPoly::zero(n, 1);
    for (e, c) in &p.terms {
        let (u, w) = (&e[n..2 * n], &e[2 * n..3 * n]);
        let hit = u.iter().sum::<u32>() == 1 && w.iter().sum::<u32>() == 1 && u[a] == 1 && w[b] == 1;
        if hit {
            r.add_term(e[..n].to_vec(), c.clone());
        }
    }
    r
}

/// `Hess f` read off from `D_21(D_31 f)`.
pub fn hessian_via_polarization(f: &MultiPoly) -> Result<Vec<Vec<MultiPoly>>> {
    let p = polarize(PolarizationOp { i: 2, j: 1 }, &polarize(PolarizationOp { i: 3, j: 1 }, f, 3)?, 3)?;
    Ok((0..f.n).map(|a| (0..f.n).map(|b| bilinear_coefficient(&p, a, b)).collect()).collect())
}

/// Value, gradient and Hessian of a single-block polynomial by direct differentiation.
pub fn symbolic_jet(f: &MultiPoly, v: &[Scalar]) -> (Scalar, Vec<Scalar>, Vec<Vec<Scalar>>) {
    let n = f.n;
    let value = f.eval(v);
    let firsts: Vec<MultiPoly> = (0..n).map(|k| f.derivative(k)).collect();
    let gradient = firsts.iter().map(|d| d.eval(v)).collect();
    let hessian = (0..n).map(|a| (0..n).map(|b| firsts[a].derivative(b).eval(v)).collect()).collect();
    (value, gradient, hessian)
}
