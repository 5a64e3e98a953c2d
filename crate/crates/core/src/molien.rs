//! Molien series of covariant modules from a histogram of characteristic polynomials.
//!
//! Every quantity the series needs (`det(1 - t w)`, `tr w`, `tr w^2`) is a
//! function of the characteristic polynomial, so the group is compressed to
//! the multiset of `det(1 - t w)` before any series arithmetic happens.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;
use std::ops::{Add, Mul, Neg};
use std::sync::Arc;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::{ChainWalker, RootSystem, StabilizerChain};
use crate::error::{Error, Result};
use crate::group::ReflectionGroup;
use crate::matrix::Matrix;
use crate::poly::{series_inverse, TruncatedSeries, UniPoly};
use crate::scalar::{rat, Field, Scalar};

/// Default truncation order for covariant series.
pub const DEFAULT_ORDER: usize = 64;
/// Truncation order used when recovering degrees (enough for E8, whose degrees sum to 128).
pub const DEGREE_RECOVERY_ORDER: usize = 140;
/// Groups larger than this need an explicit opt-in before a histogram is enumerated.
pub const LONG_RUN_THRESHOLD: u64 = 100_000_000;

/// Multiset of `det(1 - t w)` over all `w` in the group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharPolyHistogram {
    pub label: String,
    pub field: Field,
    pub entries: BTreeMap<UniPoly, u64>,
    pub total: u64,
}

impl CharPolyHistogram {
    pub fn empty(label: impl Into<String>, field: Field) -> Self {
        CharPolyHistogram { label: label.into(), field, entries: BTreeMap::new(), total: 0 }
    }

    pub fn add(&mut self, key: UniPoly, count: u64) {
        *self.entries.entry(key).or_insert(0) += count;
        self.total += count;
    }

    /// Order-insensitive merge of a disjoint block.
    pub fn merge(&mut self, other: &CharPolyHistogram) {
        for (k, &c) in &other.entries {
            self.add(k.clone(), c);
        }
    }

    /// Multiplicity of `(1 - t)^n`, which only the identity has.
    pub fn identity_multiplicity(&self, rank: usize) -> u64 {
        let mut p = UniPoly::one();
        for _ in 0..rank {
            p = p.mul(&UniPoly::from_ints(&[1, -1]));
        }
        self.entries.get(&p).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CovariantClass {
    Trivial,
    Vector,
    Sym2,
    Alt2,
}

impl CovariantClass {
    pub const ALL: [CovariantClass; 4] =
        [CovariantClass::Trivial, CovariantClass::Vector, CovariantClass::Sym2, CovariantClass::Alt2];

    /// Character value at an element with `det(1 - t w) = 1 - c1 t + c2 t^2 - ...`.
    pub fn character(self, det_one_minus_tw: &UniPoly) -> Scalar {
        let tr = -det_one_minus_tw.coeff(1);
        let e2 = det_one_minus_tw.coeff(2);
        let tr_sq = &(&tr * &tr) - &(&Scalar::from_int(2) * &e2);
        let half = Scalar::from_rational(rat(1, 2));
        match self {
            CovariantClass::Trivial => Scalar::from_int(1),
            CovariantClass::Vector => tr,
            CovariantClass::Sym2 => &(&(&tr * &tr) + &tr_sq) * &half,
            CovariantClass::Alt2 => &(&(&tr * &tr) - &tr_sq) * &half,
        }
    }

    pub fn dimension(self, n: usize) -> usize {
        match self {
            CovariantClass::Trivial => 1,
            CovariantClass::Vector => n,
            CovariantClass::Sym2 => n * (n + 1) / 2,
            CovariantClass::Alt2 => n * (n.saturating_sub(1)) / 2,
        }
    }
}

impl std::str::FromStr for CovariantClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "trivial" => Ok(CovariantClass::Trivial),
            "vector" => Ok(CovariantClass::Vector),
            "sym2" => Ok(CovariantClass::Sym2),
            "alt2" => Ok(CovariantClass::Alt2),
            _ => Err(Error::UnknownLabel(s.to_string())),
        }
    }
}

/// Coefficient rings for the fixed-size fast path.
trait SmallRing:
    Copy + Default + Eq + Hash + Send + Sync + Add<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn one() -> Self;
    fn from_scalar(x: &Scalar) -> Option<Self>;
    fn to_scalar(self) -> Scalar;
}

impl SmallRing for i64 {
    fn one() -> Self {
        1
    }

    fn from_scalar(x: &Scalar) -> Option<Self> {
        x.to_i64()
    }

    fn to_scalar(self) -> Scalar {
        Scalar::from_int(self)
    }
}

/// `a + b*phi` with integer `a`, `b` and `phi^2 = phi + 1`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
struct ZPhi {
    a: i64,
    b: i64,
}

impl Add for ZPhi {
    type Output = ZPhi;
    fn add(self, o: ZPhi) -> ZPhi {
        ZPhi { a: self.a + o.a, b: self.b + o.b }
    }
}

impl Mul for ZPhi {
    type Output = ZPhi;
    fn mul(self, o: ZPhi) -> ZPhi {
        let bd = self.b * o.b;
        ZPhi { a: self.a * o.a + bd, b: self.a * o.b + self.b * o.a + bd }
    }
}

impl Neg for ZPhi {
    type Output = ZPhi;
    fn neg(self) -> ZPhi {
        ZPhi { a: -self.a, b: -self.b }
    }
}

impl SmallRing for ZPhi {
    fn one() -> Self {
        ZPhi { a: 1, b: 0 }
    }

    fn from_scalar(x: &Scalar) -> Option<Self> {
        // a + b sqrt5 = (a - b) + 2b phi
        let (a, b) = x.parts();
        let two_b = &b * rat(2, 1);
        let lo = &a - &b;
        if !lo.is_integer() || !two_b.is_integer() {
            return None;
        }
        Some(ZPhi { a: lo.to_integer().try_into().ok()?, b: two_b.to_integer().try_into().ok()? })
    }

    fn to_scalar(self) -> Scalar {
        Scalar::golden(rat(2 * self.a + self.b, 2), rat(self.b, 2))
    }
}

/// Fixed-size matrix (rank <= 8) over a small ring.
#[derive(Clone, Copy)]
struct SmallMat<T> {
    n: usize,
    a: [T; 64],
}

impl<T: SmallRing> SmallMat<T> {
    fn from_columns(cols: &[Vec<T>]) -> Self {
        let n = cols.len();
        let mut a = [T::default(); 64];
        for (j, col) in cols.iter().enumerate() {
            for i in 0..n {
                a[i * 8 + j] = col[i];
            }
        }
        SmallMat { n, a }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> T {
        self.a[i * 8 + j]
    }

    fn mul(&self, o: &SmallMat<T>) -> SmallMat<T> {
        let n = self.n;
        let zero = T::default();
        let mut a = [zero; 64];
        for i in 0..n {
            for k in 0..n {
                let x = self.a[i * 8 + k];
                if x == zero {
                    continue;
                }
                for j in 0..n {
                    a[i * 8 + j] = a[i * 8 + j] + x * o.a[k * 8 + j];
                }
            }
        }
        SmallMat { n, a }
    }

    /// Berkowitz on fixed-size buffers: coefficients of `det(1 - t A)`.
    fn one_minus_t_det(&self) -> [T; 9] {
        let n = self.n;
        let zero = T::default();
        let mut v = [zero; 9];
        v[0] = T::one();
        for r in 0..n {
            let mut t = [zero; 10];
            t[0] = T::one();
            t[1] = -self.at(r, r);
            let mut mc = [zero; 8];
            for (i, x) in mc.iter_mut().enumerate().take(r) {
                *x = self.at(i, r);
            }
            for k in 0..r {
                let rc = (0..r).fold(zero, |acc, i| acc + self.at(r, i) * mc[i]);
                t[k + 2] = -rc;
                if k + 1 < r {
                    let mut next = [zero; 8];
                    for (i, x) in next.iter_mut().enumerate().take(r) {
                        *x = (0..r).fold(zero, |acc, j| acc + self.at(i, j) * mc[j]);
                    }
                    mc = next;
                }
            }
            let mut nv = [zero; 9];
            for i in 0..r + 2 {
                for j in 0..=i.min(r) {
                    nv[i] = nv[i] + t[i - j] * v[j];
                }
            }
            v = nv;
        }
        v
    }
}

fn small_levels<T: SmallRing>(roots: &RootSystem, chain: &StabilizerChain) -> Option<Arc<Vec<Vec<SmallMat<T>>>>> {
    let n = roots.rank();
    if n > 8 {
        return None;
    }
    let coords: Vec<Vec<T>> = roots
        .roots
        .iter()
        .map(|r| r.iter().map(T::from_scalar).collect::<Option<Vec<T>>>())
        .collect::<Option<_>>()?;
    let levels = chain
        .transversals
        .iter()
        .map(|t| {
            t.iter()
                .map(|p| {
                    let cols: Vec<Vec<T>> = (0..n).map(|i| coords[p.image(i)].clone()).collect();
                    SmallMat::from_columns(&cols)
                })
                .collect()
        })
        .collect();
    Some(Arc::new(levels))
}

fn run_small<T: SmallRing>(levels: &Arc<Vec<Vec<SmallMat<T>>>>, block: usize, rank: usize, out: &mut CharPolyHistogram) {
    let mul: fn(&SmallMat<T>, &SmallMat<T>) -> SmallMat<T> = SmallMat::mul;
    let mut local: HashMap<[T; 9], u64> = HashMap::new();
    for m in ChainWalker::new(levels.clone(), mul, block..block + 1) {
        *local.entry(m.one_minus_t_det()).or_insert(0) += 1;
    }
    for (k, c) in local {
        let key = UniPoly::new(k[..=rank].iter().map(|x| x.to_scalar().promote(out.field)).collect());
        out.add(key, c);
    }
}

enum Levels {
    Int(Arc<Vec<Vec<SmallMat<i64>>>>),
    Golden(Arc<Vec<Vec<SmallMat<ZPhi>>>>),
    Exact(Arc<Vec<Vec<Matrix>>>),
}

/// A histogram computation split into independent top-level blocks.
pub struct HistogramJob {
    label: String,
    field: Field,
    rank: usize,
    levels: Levels,
    order: u64,
}

impl HistogramJob {
    pub fn new(g: &ReflectionGroup) -> Result<Self> {
        let roots = RootSystem::new(g)?;
        let chain = StabilizerChain::build(&roots)?;
        let order: u64 = u64::try_from(&chain.order)
            .map_err(|_| Error::ChainInconsistent("group order exceeds u64".into()))?;
        let levels = if let Some(l) = small_levels::<i64>(&roots, &chain) {
            Levels::Int(l)
        } else if let Some(l) = small_levels::<ZPhi>(&roots, &chain) {
            Levels::Golden(l)
        } else {
            Levels::Exact(Arc::new(
                chain
                    .transversals
                    .iter()
                    .map(|t| t.iter().map(|p| roots.element_from_perm(p).0).collect())
                    .collect(),
            ))
        };
        Ok(HistogramJob { label: g.label().to_string(), field: g.datum.field, rank: g.rank(), levels, order })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn block_count(&self) -> usize {
        match &self.levels {
            Levels::Int(l) => l.first().map_or(0, Vec::len),
            Levels::Golden(l) => l.first().map_or(0, Vec::len),
            Levels::Exact(l) => l.first().map_or(0, Vec::len),
        }
    }

    pub fn empty(&self) -> CharPolyHistogram {
        CharPolyHistogram::empty(self.label.clone(), self.field)
    }

    /// Histogram of one top-level block.
    pub fn run_block(&self, block: usize) -> CharPolyHistogram {
        let mut out = self.empty();
        match &self.levels {
            Levels::Int(levels) => run_small(levels, block, self.rank, &mut out),
            Levels::Golden(levels) => run_small(levels, block, self.rank, &mut out),
            Levels::Exact(levels) => {
                let mul: fn(&Matrix, &Matrix) -> Matrix = |a, b| a.mul(b);
                for m in ChainWalker::new(levels.clone(), mul, block..block + 1) {
                    out.add(m.one_minus_t_det(), 1);
                }
            }
        }
        out
    }

    /// Runs `blocks` on `workers` threads and merges the results.
    pub fn run_blocks(&self, blocks: &[usize], workers: usize) -> Result<CharPolyHistogram> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build()
            .map_err(|e| Error::Io(e.to_string()))?;
        let parts: Vec<CharPolyHistogram> =
            pool.install(|| blocks.par_iter().map(|&b| self.run_block(b)).collect());
        let mut out = self.empty();
        for p in &parts {
            out.merge(p);
        }
        Ok(out)
    }

    /// Histogram of the `block` slice through the generic exact path, for cross-checks.
    pub fn run_block_exact(&self, g: &ReflectionGroup, block: usize) -> Result<CharPolyHistogram> {
        let roots = RootSystem::new(g)?;
        let chain = StabilizerChain::build(&roots)?;
        let levels: Arc<Vec<Vec<Matrix>>> = Arc::new(
            chain.transversals.iter().map(|t| t.iter().map(|p| roots.element_from_perm(p).0).collect()).collect(),
        );
        let mut out = self.empty();
        let mul: fn(&Matrix, &Matrix) -> Matrix = |a, b| a.mul(b);
        for m in ChainWalker::new(levels, mul, block..block + 1) {
            out.add(m.one_minus_t_det(), 1);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HistogramOptions {
    pub workers: usize,
    /// Permit groups above [`LONG_RUN_THRESHOLD`].
    pub allow_long: bool,
}

impl Default for HistogramOptions {
    fn default() -> Self {
        HistogramOptions { workers: 1, allow_long: false }
    }
}

/// Exact histogram over the whole group, split across `partitions` workers.
pub fn histogram(g: &ReflectionGroup, partitions: usize) -> Result<CharPolyHistogram> {
    histogram_with(g, HistogramOptions { workers: partitions, allow_long: false })
}

pub fn histogram_with(g: &ReflectionGroup, opts: HistogramOptions) -> Result<CharPolyHistogram> {
    let job = HistogramJob::new(g)?;
    if job.order() > LONG_RUN_THRESHOLD && !opts.allow_long {
        return Err(Error::BudgetExceeded { budget: LONG_RUN_THRESHOLD });
    }
    let blocks: Vec<usize> = (0..job.block_count()).collect();
    let h = job.run_blocks(&blocks, opts.workers)?;
    if h.total != job.order() {
        return Err(Error::ChainInconsistent(format!(
            "enumerated {} elements, chain order {}",
            h.total,
            job.order()
        )));
    }
    Ok(h)
}

/// Molien average `(1/|W|) sum_w chi(w) / det(1 - t w)` truncated at `order`.
pub fn covariant_series(h: &CharPolyHistogram, cls: CovariantClass, order: usize) -> Result<TruncatedSeries> {
    let mut acc = TruncatedSeries::zero(order);
    for (key, &count) in &h.entries {
        let chi = cls.character(key);
        if chi.is_zero() {
            continue;
        }
        let weight = &chi * &Scalar::from_int(count as i64);
        acc.add_assign(&series_inverse(key, order)?.scale(&weight));
    }
    let inv_total = Scalar::from_int(h.total as i64).inverse()?;
    Ok(acc.scale(&inv_total))
}

/// Peels `1/(1 - t^d)` factors off an invariant series, smallest degree first.
pub fn recover_degrees(invariant_series: &TruncatedSeries, n: usize) -> Result<Vec<u32>> {
    let fail = Error::NotAFreeAlgebraShape { rank: n };
    if !invariant_series.coeff(0).is_one() {
        return Err(fail);
    }
    let mut s = invariant_series.clone();
    let mut degrees = Vec::with_capacity(n);
    for _ in 0..n {
        let d = (1..s.order()).find(|&k| !s.coeff(k).is_zero()).ok_or_else(|| fail.clone())?;
        if s.coeff(d).signum() <= 0 {
            return Err(fail);
        }
        let mut factor = vec![Scalar::from_int(0); d + 1];
        factor[0] = Scalar::from_int(1);
        factor[d] = Scalar::from_int(-1);
        s = s.mul_poly(&UniPoly::new(factor));
        degrees.push(d as u32);
    }
    if s.coeffs()[1..].iter().any(|c| !c.is_zero()) {
        return Err(fail);
    }
    Ok(degrees)
}

/// Poincare series of a covariant module and its numerator over the invariants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoincareResult {
    pub class: CovariantClass,
    pub series: TruncatedSeries,
    pub numerator: UniPoly,
    pub degrees: Vec<u32>,
}

impl PoincareResult {
    pub fn numerator_ints(&self) -> Vec<i64> {
        self.numerator.to_ints().expect("numerator has integer coefficients")
    }
}

/// `covariant_series * prod (1 - t^d)`, checked to be a polynomial with
/// nonnegative integer coefficients whose degree leaves at least two spare
/// terms below the truncation order.
pub fn numerator(h: &CharPolyHistogram, cls: CovariantClass, degrees: &[u32], order: usize) -> Result<PoincareResult> {
    let series = covariant_series(h, cls, order)?;
    numerator_from_series(series, cls, degrees)
}

pub fn numerator_from_series(series: TruncatedSeries, cls: CovariantClass, degrees: &[u32]) -> Result<PoincareResult> {
    let order = series.order();
    let mut prod = series.clone();
    for &d in degrees {
        let mut factor = vec![Scalar::from_int(0); d as usize + 1];
        factor[0] = Scalar::from_int(1);
        factor[d as usize] = Scalar::from_int(-1);
        prod = prod.mul_poly(&UniPoly::new(factor));
    }
    let num = prod.to_poly();
    if let Some(deg) = num.degree() {
        if deg + 2 >= order {
            return Err(Error::NonPolynomialQuotient(format!(
                "nonzero coefficient at t^{deg} with truncation order {order}"
            )));
        }
    }
    for (k, c) in num.coeffs().iter().enumerate() {
        let ok = c.to_rational().is_some_and(|r| r.is_integer() && !(r < num_rational::BigRational::zero()));
        if !ok {
            return Err(Error::NonPolynomialQuotient(format!("coefficient of t^{k} is {c}")));
        }
    }
    Ok(PoincareResult { class: cls, series, numerator: num, degrees: degrees.to_vec() })
}
