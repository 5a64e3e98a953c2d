//! Dense univariate polynomials and truncated power series over [`Scalar`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Coefficients indexed by degree, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UniPoly {
    coeffs: Vec<Scalar>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        UniPoly::new(c.iter().map(|&x| Scalar::from_int(x)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UniPoly::from_ints(&[1])
    }

    /// `t^k`
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![Scalar::from_int(0); k + 1];
        c[k] = Scalar::from_int(1);
        UniPoly::new(c)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn add(&self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Scalar::from_int(0); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        UniPoly::new(out)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(Scalar::from_int(0), |acc, c| &(&acc * x) + c)
    }

    /// Integer coefficients, if every coefficient is an integer fitting `i64`.
    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(Scalar::to_i64).collect()
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (k, c.is_one()) {
                (0, _) => write!(f, "{c}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{c}*t")?,
                (_, true) => write!(f, "t^{k}")?,
                (_, false) => write!(f, "{c}*t^{k}")?,
            }
        }
        Ok(())
    }
}

/// A power series known modulo `t^order`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncatedSeries {
    coeffs: Vec<Scalar>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        assert!(order > 0, "truncation order must be positive");
        TruncatedSeries { coeffs: vec![Scalar::from_int(0); order] }
    }

    /// Truncates (or zero-pads) `coeffs` to exactly `order` terms.
    pub fn from_coeffs(mut coeffs: Vec<Scalar>, order: usize) -> Self {
        assert!(order > 0, "truncation order must be positive");
        coeffs.resize(order, Scalar::from_int(0));
        TruncatedSeries { coeffs }
    }

    pub fn from_poly(p: &UniPoly, order: usize) -> Self {
        TruncatedSeries::from_coeffs(p.coeffs().iter().take(order).cloned().collect(), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Scalar {
        &self.coeffs[k]
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order());
        TruncatedSeries::from_coeffs(self.coeffs[..order].to_vec(), order)
    }

    pub fn add_assign(&mut self, o: &TruncatedSeries) {
        assert_eq!(self.order(), o.order(), "series orders differ");
        for (a, b) in self.coeffs.iter_mut().zip(&o.coeffs) {
            *a = &*a + b;
        }
    }

    pub fn scale(&self, s: &Scalar) -> TruncatedSeries {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn mul_poly(&self, p: &UniPoly) -> TruncatedSeries {
        let n = self.order();
        let mut out = vec![Scalar::from_int(0); n];
        for (j, b) in p.coeffs().iter().enumerate().take(n) {
            if b.is_zero() {
                continue;
            }
            for i in 0..n - j {
                if !self.coeffs[i].is_zero() {
                    out[i + j] = &out[i + j] + &(&self.coeffs[i] * b);
                }
            }
        }
        TruncatedSeries { coeffs: out }
    }

    pub fn mul(&self, o: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.order(), o.order(), "series orders differ");
        self.mul_poly(&UniPoly::new(o.coeffs.clone()))
    }

    /// The series as a polynomial (all retained terms).
    pub fn to_poly(&self) -> UniPoly {
        UniPoly::new(self.coeffs.clone())
    }
}

/// `q` with `p*q = 1 mod t^order`.
pub fn series_inverse(p: &UniPoly, order: usize) -> Result<TruncatedSeries> {
    assert!(order > 0, "truncation order must be positive");
    let c0 = p.coeff(0);
    if c0.is_zero() {
        return Err(Error::NonUnitConstantTerm);
    }
    let inv0 = c0.inverse()?;
    let pc = p.coeffs();
    let mut q: Vec<Scalar> = Vec::with_capacity(order);
    q.push(inv0.clone());
    for k in 1..order {
        let mut acc = Scalar::from_int(0);
        for j in 1..pc.len().min(k + 1) {
            if !pc[j].is_zero() {
                acc = &acc + &(&pc[j] * &q[k - j]);
            }
        }
        q.push(-(&acc * &inv0));
    }
    Ok(TruncatedSeries { coeffs: q })
}
