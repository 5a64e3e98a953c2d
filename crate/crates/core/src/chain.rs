//! Element enumeration through the permutation action on roots.
//!
//! A group element is determined by the images of the simple roots, so the
//! simple roots form a base for the permutation action on the root system.
//! A stabilizer chain along that base (built with Schreier-Sims) lets us stream
//! every element exactly once as a product of coset representatives without
//! ever storing the group.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::group::{GroupElement, ReflectionGroup};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Default element budget for breadth-first enumeration.
pub const DEFAULT_BFS_BUDGET: u64 = 5_000_000;

/// Permutation of root indices; `p.0[x]` is the image of root `x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Perm(pub Vec<u16>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u16).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn image(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u16; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u16;
        }
        Perm(inv)
    }
}

/// All roots, as coordinate columns in the simple-root basis; the first
/// `rank` entries are the simple roots.
#[derive(Debug, Clone)]
pub struct RootSystem {
    pub roots: Vec<Vec<Scalar>>,
    pub generator_perms: Vec<Perm>,
    index: HashMap<Vec<Scalar>, usize>,
    rank: usize,
}

impl RootSystem {
    pub fn new(g: &ReflectionGroup) -> Result<Self> {
        let n = g.rank();
        let field = g.datum.field;
        let mut roots: Vec<Vec<Scalar>> = Vec::new();
        let mut index = HashMap::new();
        let mut queue = VecDeque::new();
        for i in 0..n {
            let r: Vec<Scalar> = (0..n).map(|k| Scalar::int_in((k == i) as i64, field)).collect();
            index.insert(r.clone(), roots.len());
            roots.push(r.clone());
            queue.push_back(r);
        }
        while let Some(r) = queue.pop_front() {
            for i in 0..n {
                let img = g.reflect_point(i, &r);
                if !index.contains_key(&img) {
                    if roots.len() >= u16::MAX as usize {
                        return Err(Error::ChainInconsistent("root system too large".into()));
                    }
                    index.insert(img.clone(), roots.len());
                    roots.push(img.clone());
                    queue.push_back(img);
                }
            }
        }
        let generator_perms = (0..n)
            .map(|i| Perm(roots.iter().map(|r| index[&g.reflect_point(i, r)] as u16).collect()))
            .collect();
        Ok(RootSystem { roots, generator_perms, index, rank: n })
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn index_of(&self, root: &[Scalar]) -> Option<usize> {
        self.index.get(root).copied()
    }

    /// Matrix whose column `i` is the root with index `images[i]`.
    pub fn matrix_from_images(&self, images: &[u16]) -> Matrix {
        let n = self.rank;
        let rows = (0..n)
            .map(|k| images.iter().map(|&r| self.roots[r as usize][k].clone()).collect())
            .collect();
        Matrix::from_rows(rows)
    }

    pub fn element_from_perm(&self, p: &Perm) -> GroupElement {
        let images: Vec<u16> = (0..self.rank).map(|i| p.0[i]).collect();
        GroupElement(self.matrix_from_images(&images))
    }

    /// Integer root coordinates, if every root is integral.
    pub fn integer_roots(&self) -> Option<Vec<Vec<i64>>> {
        self.roots.iter().map(|r| r.iter().map(Scalar::to_i64).collect()).collect()
    }
}

#[derive(Debug, Clone)]
struct Level {
    base_point: usize,
    generators: Vec<Perm>,
    orbit: Vec<usize>,
    /// `transversal[p]` maps the base point to `p`.
    transversal: Vec<Option<Perm>>,
}

impl Level {
    fn new(base_point: usize, degree: usize, generators: Vec<Perm>) -> Self {
        let mut level = Level { base_point, generators, orbit: vec![], transversal: vec![None; degree] };
        level.rebuild_orbit();
        level
    }

    fn rebuild_orbit(&mut self) {
        let degree = self.transversal.len();
        self.transversal = vec![None; degree];
        self.transversal[self.base_point] = Some(Perm::identity(degree));
        self.orbit = vec![self.base_point];
        let mut head = 0;
        while head < self.orbit.len() {
            let p = self.orbit[head];
            head += 1;
            for s in &self.generators {
                let q = s.image(p);
                if self.transversal[q].is_none() {
                    let u = s.compose(self.transversal[p].as_ref().unwrap());
                    self.transversal[q] = Some(u);
                    self.orbit.push(q);
                }
            }
        }
    }
}

/// Stabilizer chain along the simple-root base.
#[derive(Debug, Clone)]
pub struct StabilizerChain {
    pub base: Vec<usize>,
    /// Per level, coset representatives in orbit order.
    pub transversals: Vec<Vec<Perm>>,
    pub order: BigUint,
}

impl StabilizerChain {
    /// Deterministic Schreier-Sims over the root permutation action.
    pub fn build(roots: &RootSystem) -> Result<Self> {
        let degree = roots.len();
        let base: Vec<usize> = (0..roots.rank()).collect();
        let k = base.len();
        let gens: Vec<Perm> =
            roots.generator_perms.iter().filter(|p| !p.is_identity()).cloned().collect();
        let mut levels: Vec<Level> = (0..k)
            .map(|i| {
                let fixing = gens
                    .iter()
                    .filter(|g| base[..i].iter().all(|&b| g.image(b) == b))
                    .cloned()
                    .collect();
                Level::new(base[i], degree, fixing)
            })
            .collect();

        let mut i = k as isize - 1;
        'levels: while i >= 0 {
            let li = i as usize;
            let orbit = levels[li].orbit.clone();
            let gens_here = levels[li].generators.clone();
            for &p in &orbit {
                let up = levels[li].transversal[p].clone().unwrap();
                for s in &gens_here {
                    let q = s.image(p);
                    let uq_inv = levels[li].transversal[q].as_ref().unwrap().inverse();
                    let schreier = uq_inv.compose(&s.compose(&up));
                    let (residue, stop) = sift(&levels, li + 1, schreier);
                    if residue.is_identity() {
                        continue;
                    }
                    if stop >= k {
                        return Err(Error::ChainInconsistent(
                            "nontrivial element fixes every simple root".into(),
                        ));
                    }
                    for level in &mut levels[li + 1..=stop] {
                        level.generators.push(residue.clone());
                        level.rebuild_orbit();
                    }
                    i = stop as isize;
                    continue 'levels;
                }
            }
            i -= 1;
        }

        let transversals: Vec<Vec<Perm>> = levels
            .iter()
            .map(|l| l.orbit.iter().map(|&p| l.transversal[p].clone().unwrap()).collect())
            .collect();
        let order = transversals.iter().fold(BigUint::one(), |acc, t| acc * BigUint::from(t.len()));
        Ok(StabilizerChain { base, transversals, order })
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.transversals.iter().map(Vec::len).collect()
    }

    /// Number of top-level blocks (the size of the first transversal).
    pub fn block_count(&self) -> usize {
        self.transversals.first().map_or(1, Vec::len)
    }
}

/// Sifts `g` through `levels[from..]`; returns the residue and the level where sifting stopped.
fn sift(levels: &[Level], from: usize, mut g: Perm) -> (Perm, usize) {
    for (j, level) in levels.iter().enumerate().skip(from) {
        let q = g.image(level.base_point);
        match &level.transversal[q] {
            Some(u) => g = u.inverse().compose(&g),
            None => return (g, j),
        }
    }
    (g, levels.len())
}

/// Odometer over the chain: yields `M(u_0) M(u_1) ... M(u_{k-1})` for every
/// choice of coset representatives, with prefix products cached per level.
pub struct ChainWalker<M> {
    levels: Arc<Vec<Vec<M>>>,
    mul: fn(&M, &M) -> M,
    idx: Vec<usize>,
    prefix: Vec<M>,
    top_end: usize,
    done: bool,
}

impl<M: Clone> ChainWalker<M> {
    /// Walks the blocks `top_range` of the first level.
    pub fn new(levels: Arc<Vec<Vec<M>>>, mul: fn(&M, &M) -> M, top_range: std::ops::Range<usize>) -> Self {
        let k = levels.len();
        let done = k == 0 || top_range.is_empty() || levels.iter().any(Vec::is_empty);
        let mut w = ChainWalker {
            levels,
            mul,
            idx: vec![0; k],
            prefix: Vec::with_capacity(k),
            top_end: top_range.end,
            done,
        };
        if !w.done {
            w.idx[0] = top_range.start;
            w.recompute_from(0);
        }
        w
    }

    fn recompute_from(&mut self, level: usize) {
        self.prefix.truncate(level);
        for l in level..self.levels.len() {
            let m = &self.levels[l][self.idx[l]];
            let p = match self.prefix.last() {
                Some(prev) => (self.mul)(prev, m),
                None => m.clone(),
            };
            self.prefix.push(p);
        }
    }

    fn advance(&mut self) {
        let k = self.levels.len();
        let mut l = k;
        while l > 0 {
            l -= 1;
            self.idx[l] += 1;
            let end = if l == 0 { self.top_end } else { self.levels[l].len() };
            if self.idx[l] < end {
                self.recompute_from(l);
                return;
            }
            self.idx[l] = 0;
        }
        self.done = true;
    }
}

impl<M: Clone> Iterator for ChainWalker<M> {
    type Item = M;

    fn next(&mut self) -> Option<M> {
        if self.done {
            return None;
        }
        let out = self.prefix.last().cloned();
        self.advance();
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumerationMode {
    Bfs,
    Chain,
}

/// Streams every group element exactly once.
pub fn enumerate_elements(
    g: &ReflectionGroup,
    mode: EnumerationMode,
    bfs_budget: u64,
) -> Result<Box<dyn Iterator<Item = GroupElement>>> {
    let roots = RootSystem::new(g)?;
    match mode {
        EnumerationMode::Bfs => {
            let keys = bfs_images(&roots, bfs_budget)?;
            Ok(Box::new(keys.into_iter().map(move |k| GroupElement(roots.matrix_from_images(&k)))))
        }
        EnumerationMode::Chain => {
            let chain = StabilizerChain::build(&roots)?;
            let mats: Vec<Vec<Matrix>> = chain
                .transversals
                .iter()
                .map(|t| t.iter().map(|p| roots.element_from_perm(p).0).collect())
                .collect();
            let top = chain.block_count();
            let mul: fn(&Matrix, &Matrix) -> Matrix = |a, b| a.mul(b);
            Ok(Box::new(ChainWalker::new(Arc::new(mats), mul, 0..top).map(GroupElement)))
        }
    }
}

/// Breadth-first enumeration keyed by the images of the simple roots.
pub fn bfs_images(roots: &RootSystem, budget: u64) -> Result<Vec<Vec<u16>>> {
    let n = roots.rank();
    let start: Vec<u16> = (0..n as u16).collect();
    let mut seen: HashSet<Vec<u16>> = HashSet::new();
    let mut order = vec![start.clone()];
    seen.insert(start);
    let mut head = 0;
    while head < order.len() {
        let w = order[head].clone();
        head += 1;
        for s in &roots.generator_perms {
            let next: Vec<u16> = w.iter().map(|&r| s.0[r as usize]).collect();
            if !seen.contains(&next) {
                if order.len() as u64 >= budget {
                    return Err(Error::BudgetExceeded { budget });
                }
                seen.insert(next.clone());
                order.push(next);
            }
        }
    }
    Ok(order)
}
