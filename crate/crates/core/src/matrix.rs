//! Small dense matrices over [`Scalar`], exact determinants and
//! characteristic polynomials.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::UniPoly;
use crate::scalar::{Field, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, field: Field) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero_in(field); rows * cols] }
    }

    pub fn identity(n: usize, field: Field) -> Self {
        let mut m = Matrix::zeros(n, n, field);
        for i in 0..n {
            m[(i, i)] = Scalar::one_in(field);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn field(&self) -> Field {
        self.data.iter().map(Scalar::field).fold(Field::Rational, Field::join)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows, Field::Rational);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "matrix product shape mismatch");
        let field = self.field().join(o.field());
        let mut out = Matrix::zeros(self.rows, o.cols, field);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = &out[(i, j)] + &(a * b);
                    }
                }
            }
        }
        out
    }

    /// `M x` for a column vector `x`.
    pub fn apply(&self, x: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, x.len());
        (0..self.rows)
            .map(|i| dot(self.row(i), x))
            .collect()
    }

    /// `y M` for a row vector `y`.
    pub fn apply_row(&self, y: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.rows, y.len());
        (0..self.cols)
            .map(|j| {
                y.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(i, v)| v * &self[(i, j)])
                    .sum()
            })
            .collect()
    }

    pub fn pow(&self, mut e: u32) -> Matrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.rows, self.field());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = &self[(i, j)];
                    if i == j { x.is_one() } else { x.is_zero() }
                })
            })
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.rows, got: self.cols });
        }
        let n = self.rows;
        let field = self.field();
        let mut a = self.clone();
        let mut inv = Matrix::identity(n, field);
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[(r, col)].is_zero()).ok_or(Error::SingularCartan)?;
            a.swap_rows(piv, col);
            inv.swap_rows(piv, col);
            let p = a[(col, col)].inverse()?;
            for j in 0..n {
                a[(col, j)] = &a[(col, j)] * &p;
                inv[(col, j)] = &inv[(col, j)] * &p;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for j in 0..n {
                    a[(r, j)] = &a[(r, j)] - &(&f * &a[(col, j)]);
                    inv[(r, j)] = &inv[(r, j)] - &(&f * &inv[(col, j)]);
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Exact determinant.
    ///
    /// Matrices with only rational entries are scaled to integers row by row
    /// and reduced with Bareiss elimination; golden matrices go through
    /// Gaussian elimination over the field.
    pub fn determinant(&self) -> Scalar {
        assert!(self.is_square(), "determinant of a non-square matrix");
        if self.rows == 0 {
            return Scalar::one_in(self.field());
        }
        if self.data.iter().all(Scalar::is_rational) {
            let det = self.rational_determinant();
            return Scalar::from_rational(det).promote(self.field());
        }
        self.field_determinant()
    }

    fn rational_determinant(&self) -> Rational {
        let n = self.rows;
        let mut scale = BigInt::one();
        let mut ints: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let row: Vec<Rational> = self.row(i).iter().map(|x| x.to_rational().unwrap()).collect();
            let l = row.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
            ints.push(row.iter().map(|r| (r * Rational::from_integer(l.clone())).to_integer()).collect());
            scale *= l;
        }
        Rational::new(bareiss(ints), scale)
    }

    fn field_determinant(&self) -> Scalar {
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Scalar::one_in(self.field());
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a[(r, col)].is_zero()) else {
                return Scalar::zero_in(self.field());
            };
            if piv != col {
                a.swap_rows(piv, col);
                det = -det;
            }
            let p = a[(col, col)].clone();
            det = &det * &p;
            let pinv = p.inverse().expect("pivot is nonzero");
            for r in col + 1..n {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let f = &a[(r, col)] * &pinv;
                for j in col..n {
                    a[(r, j)] = &a[(r, j)] - &(&f * &a[(col, j)]);
                }
            }
        }
        det
    }

    /// `det(1 - t M)` as a polynomial in `t`.
    pub fn one_minus_t_det(&self) -> UniPoly {
        UniPoly::new(charpoly_berkowitz(&self.to_rows()))
    }

    pub fn to_canonical_rows(&self) -> Vec<Vec<String>> {
        self.to_rows()
            .iter()
            .map(|r| r.iter().map(Scalar::to_canonical).collect())
            .collect()
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<Scalar>>::deserialize(d)?;
        if rows.iter().any(|r| r.len() != rows[0].len()) {
            return Err(serde::de::Error::custom("ragged matrix"));
        }
        Ok(Matrix::from_rows(rows))
    }
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

/// Fraction-free Bareiss elimination on an integer matrix.
pub fn bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 { -d } else { d }
}

/// Division-free Berkowitz algorithm.
///
/// Returns `[1, p1, ..., pn]` where `det(xI - A) = x^n + p1 x^(n-1) + ... + pn`,
/// which are also the coefficients of `det(1 - tA)` in increasing degree.
pub fn charpoly_berkowitz<T>(a: &[Vec<T>]) -> Vec<T>
where
    T: Clone + Zero + One,
    for<'x> &'x T: std::ops::Mul<&'x T, Output = T>
        + std::ops::Add<&'x T, Output = T>
        + std::ops::Neg<Output = T>,
{
    let n = a.len();
    let mut v: Vec<T> = vec![T::one()];
    for r in 0..n {
        // Leading r x r block M, column C = a[0..r][r], row R = a[r][0..r].
        let mut t: Vec<T> = Vec::with_capacity(r + 2);
        t.push(T::one());
        t.push(-&a[r][r]);
        let mut mc: Vec<T> = (0..r).map(|i| a[i][r].clone()).collect();
        for _ in 0..r {
            let rc = (0..r).fold(T::zero(), |acc, i| &acc + &(&a[r][i] * &mc[i]));
            t.push(-&rc);
            mc = (0..r)
                .map(|i| (0..r).fold(T::zero(), |acc, j| &acc + &(&a[i][j] * &mc[j])))
                .collect();
        }
        let mut nv: Vec<T> = Vec::with_capacity(r + 2);
        for i in 0..r + 2 {
            let mut acc = T::zero();
            for (j, vj) in v.iter().enumerate().take(i + 1) {
                acc = &acc + &(&t[i - j] * vj);
            }
            nv.push(acc);
        }
        v = nv;
    }
    v
}
