//! Exact scalars over the rationals and the golden field `Q(sqrt 5)`.
//!
//! Canonical text forms are `"num/den"` for rationals (the denominator is
//! always written, even when it is 1) and `"a|b"` for `a + b*sqrt(5)`, where
//! both halves are rational canonical strings.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::{Product, Sum};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rational_to_canonical(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rational_from_canonical(s: &str) -> Result<Rational> {
    let bad = || Error::ParseScalar(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(
            BigInt::from_str(s).map_err(|_| bad())?,
        )),
    }
}

/// Which field a scalar lives in. `Golden` is `Q(sqrt 5)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Rational,
    Golden,
}

impl Field {
    pub fn join(self, other: Field) -> Field {
        self.max(other)
    }
}

/// `a + b*sqrt(5)` with rational `a`, `b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GoldenScalar {
    pub a: Rational,
    pub b: Rational,
}

impl GoldenScalar {
    pub fn new(a: Rational, b: Rational) -> Self {
        GoldenScalar { a, b }
    }

    pub fn from_rational(a: Rational) -> Self {
        GoldenScalar { a, b: Rational::zero() }
    }

    /// The golden ratio `(1 + sqrt 5)/2`.
    pub fn phi() -> Self {
        GoldenScalar::new(rat(1, 2), rat(1, 2))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        GoldenScalar::new(self.a.clone(), -self.b.clone())
    }

    /// Field norm `a^2 - 5 b^2`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - rat_int(5) * &self.b * &self.b
    }

    pub fn add(&self, o: &Self) -> Self {
        GoldenScalar::new(&self.a + &o.a, &self.b + &o.b)
    }

    pub fn sub(&self, o: &Self) -> Self {
        GoldenScalar::new(&self.a - &o.a, &self.b - &o.b)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let five = rat_int(5);
        GoldenScalar::new(
            &self.a * &o.a + five * &self.b * &o.b,
            &self.a * &o.b + &self.b * &o.a,
        )
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(GoldenScalar::new(&self.a / &n, -&self.b / &n))
    }

    pub fn signum(&self) -> i32 {
        let sa = sign(&self.a);
        let sb = sign(&self.b);
        if sa == 0 {
            return sb;
        }
        if sb == 0 || sa == sb {
            return sa;
        }
        // opposite signs: compare a^2 with 5 b^2
        let lhs = &self.a * &self.a;
        let rhs = rat_int(5) * &self.b * &self.b;
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }
}

fn sign(r: &Rational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// A field-tagged exact scalar.
///
/// Equality and hashing are by value, so `Rational(3)` equals
/// `Golden(3 + 0*sqrt 5)`; arithmetic joins the field tags.
#[derive(Debug, Clone)]
pub enum Scalar {
    Rational(Rational),
    Golden(GoldenScalar),
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn from_int(n: i64) -> Self {
        Scalar::Rational(rat_int(n))
    }

    pub fn from_rational(r: Rational) -> Self {
        Scalar::Rational(r)
    }

    pub fn golden(a: Rational, b: Rational) -> Self {
        Scalar::Golden(GoldenScalar::new(a, b))
    }

    /// Integer `n` tagged with `field`.
    pub fn int_in(n: i64, field: Field) -> Self {
        Scalar::from_int(n).promote(field)
    }

    pub fn zero_in(field: Field) -> Self {
        Scalar::int_in(0, field)
    }

    pub fn one_in(field: Field) -> Self {
        Scalar::int_in(1, field)
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Golden(_) => Field::Golden,
        }
    }

    pub fn promote(self, field: Field) -> Self {
        match (self, field) {
            (Scalar::Rational(r), Field::Golden) => Scalar::Golden(GoldenScalar::from_rational(r)),
            (s, _) => s,
        }
    }

    fn as_golden(&self) -> GoldenScalar {
        match self {
            Scalar::Rational(r) => GoldenScalar::from_rational(r.clone()),
            Scalar::Golden(g) => g.clone(),
        }
    }

    /// Rational part and sqrt(5) part.
    pub fn parts(&self) -> (Rational, Rational) {
        let g = self.as_golden();
        (g.a, g.b)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Golden(g) => g.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Golden(g) => g.a.is_one() && g.b.is_zero(),
        }
    }

    /// True iff the value lies in Q, whatever the tag.
    pub fn is_rational(&self) -> bool {
        match self {
            Scalar::Rational(_) => true,
            Scalar::Golden(g) => g.is_rational(),
        }
    }

    pub fn to_rational(&self) -> Option<Rational> {
        match self {
            Scalar::Rational(r) => Some(r.clone()),
            Scalar::Golden(g) if g.is_rational() => Some(g.a.clone()),
            Scalar::Golden(_) => None,
        }
    }

    /// Integer value, if the scalar is an integer fitting in `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        use num_traits::ToPrimitive;
        let r = self.to_rational()?;
        if r.is_integer() {
            r.to_integer().to_i64()
        } else {
            None
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            Scalar::Rational(r) => sign(r),
            Scalar::Golden(g) => g.signum(),
        }
    }

    pub fn checked_div(&self, o: &Scalar) -> Result<Scalar> {
        Ok(self * &o.inverse()?)
    }

    pub fn inverse(&self) -> Result<Scalar> {
        match self {
            Scalar::Rational(r) => {
                if r.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Scalar::Rational(r.recip()))
                }
            }
            Scalar::Golden(g) => Ok(Scalar::Golden(g.inverse()?)),
        }
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one_in(self.field());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Least common multiple of the denominators of both components.
    pub fn denominator_lcm(&self) -> BigInt {
        match self {
            Scalar::Rational(r) => r.denom().clone(),
            Scalar::Golden(g) => g.a.denom().lcm(g.b.denom()),
        }
    }

    pub fn to_canonical(&self) -> String {
        match self {
            Scalar::Rational(r) => rational_to_canonical(r),
            Scalar::Golden(g) => format!(
                "{}|{}",
                rational_to_canonical(&g.a),
                rational_to_canonical(&g.b)
            ),
        }
    }

    pub fn from_canonical(s: &str) -> Result<Scalar> {
        match s.split_once('|') {
            Some((a, b)) => Ok(Scalar::golden(
                rational_from_canonical(a)?,
                rational_from_canonical(b)?,
            )),
            None => Ok(Scalar::Rational(rational_from_canonical(s)?)),
        }
    }
}

/// Applies one of the four field operations; the only fallible case is division by zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn scalar_arith(op: ArithOp, x: &Scalar, y: &Scalar) -> Result<Scalar> {
    Ok(match op {
        ArithOp::Add => x + y,
        ArithOp::Sub => x - y,
        ArithOp::Mul => x * y,
        ArithOp::Div => x.checked_div(y)?,
    })
}

pub fn golden_is_rational(x: &GoldenScalar) -> bool {
    x.is_rational()
}

fn binop(
    x: &Scalar,
    y: &Scalar,
    fr: impl Fn(&Rational, &Rational) -> Rational,
    fg: impl Fn(&GoldenScalar, &GoldenScalar) -> GoldenScalar,
) -> Scalar {
    match (x, y) {
        (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(fr(a, b)),
        _ => Scalar::Golden(fg(&x.as_golden(), &y.as_golden())),
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $rat:expr, $gold:expr) => {
        impl<'a, 'b> $tr<&'b Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, o: &'b Scalar) -> Scalar {
                binop(self, o, $rat, $gold)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, o: Scalar) -> Scalar {
                (&self).$method(&o)
            }
        }
        impl<'b> $tr<&'b Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, o: &'b Scalar) -> Scalar {
                (&self).$method(o)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, o: Scalar) -> Scalar {
                self.$method(&o)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a + b, |a, b| a.add(b));
forward_binop!(Sub, sub, |a, b| a - b, |a, b| a.sub(b));
forward_binop!(Mul, mul, |a, b| a * b, |a, b| a.mul(b));

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Golden(g) => Scalar::Golden(GoldenScalar::new(-&g.a, -&g.b)),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::from_int(0)
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::from_int(1)
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |acc, x| acc * x)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a == b,
            _ => self.as_golden() == other.as_golden(),
        }
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let (a, b) = self.parts();
        a.hash(state);
        b.hash(state);
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Numeric order on the real line.
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self - other).signum() {
            0 => Ordering::Equal,
            s if s > 0 => Ordering::Greater,
            _ => Ordering::Less,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Golden(g) if g.b.is_zero() => write!(f, "{}", g.a),
            Scalar::Golden(g) if g.a.is_zero() => write!(f, "{}*sqrt5", g.b),
            Scalar::Golden(g) => write!(f, "({} + {}*sqrt5)", g.a, g.b),
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Scalar::from_canonical(s)
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_canonical())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Scalar::from_canonical(&s).map_err(serde::de::Error::custom)
    }
}
