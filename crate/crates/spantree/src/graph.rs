//! Graph specifications, explicit multigraph assembly and exact Laplacian
//! spectra for circulant graphs and diagonal discrete tori.

use std::collections::BTreeMap;

use crate::angle::TurnAngle;
use crate::ball::RealBall;
use crate::error::{Error, Result};

/// A circulant graph on `Z/nZ` given by a generator multiset.
///
/// Generators are canonicalized to `min(g mod n, n - g mod n)` and kept as a
/// multiset: repeated values are meaningful (each slot contributes two edge
/// ends per vertex). A generator reducing to 0 is a loop and is rejected
/// unless the spec was built with [`CirculantSpec::new_allowing_loops`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CirculantSpec {
    vertex_count: u64,
    generators: Vec<u64>,
    loop_slots: usize,
}

impl CirculantSpec {
    pub fn new(vertex_count: u64, generators: &[u64]) -> Result<Self> {
        Self::build(vertex_count, generators, false)
    }

    /// Like [`new`](Self::new) but keeps generators that reduce to 0 as loop
    /// markers. Loops contribute nothing to the Laplacian.
    pub fn new_allowing_loops(vertex_count: u64, generators: &[u64]) -> Result<Self> {
        Self::build(vertex_count, generators, true)
    }

    fn build(vertex_count: u64, generators: &[u64], allow_loops: bool) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::InvalidSpec("vertex count must be >= 1".into()));
        }
        let mut canonical = Vec::with_capacity(generators.len());
        let mut loop_slots = 0;
        for &g in generators {
            let r = g % vertex_count;
            let c = r.min(vertex_count - r);
            if c == 0 {
                if !allow_loops {
                    return Err(Error::LoopGenerator { generator: g, modulus: vertex_count });
                }
                loop_slots += 1;
            } else {
                canonical.push(c);
            }
        }
        canonical.sort_unstable();
        Ok(CirculantSpec { vertex_count, generators: canonical, loop_slots })
    }

    pub fn vertex_count(&self) -> u64 {
        self.vertex_count
    }

    /// Canonicalized non-loop generators, sorted, with multiplicity.
    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn loop_slots(&self) -> usize {
        self.loop_slots
    }

    /// Degree counting multiplicity: two edge ends per generator slot.
    pub fn degree(&self) -> u64 {
        2 * (self.generators.len() + self.loop_slots) as u64
    }
}

/// The family `C^{1, gamma_1*n, ..., gamma_{d-1}*n}_{beta*n}`: first
/// generator one, the others scaling linearly with the vertex count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledCirculantFamily {
    beta: u64,
    base_generators: Vec<u64>,
    scale: u64,
}

impl ScaledCirculantFamily {
    pub fn new(beta: u64, base_generators: &[u64], scale: u64) -> Result<Self> {
        if beta == 0 || scale == 0 {
            return Err(Error::InvalidSpec("beta and n must be >= 1".into()));
        }
        let mut gens = base_generators.to_vec();
        gens.sort_unstable();
        for &g in &gens {
            if g == 0 || g > beta / 2 {
                return Err(Error::InvalidSpec(format!(
                    "base generator {g} outside 1..=floor(beta/2) for beta = {beta}"
                )));
            }
        }
        Ok(ScaledCirculantFamily { beta, base_generators: gens, scale })
    }

    pub fn beta(&self) -> u64 {
        self.beta
    }

    pub fn base_generators(&self) -> &[u64] {
        &self.base_generators
    }

    pub fn scale(&self) -> u64 {
        self.scale
    }

    /// The concrete circulant graph at this scale. Generator collisions and
    /// half-turn generators are accepted as multigraph structure.
    pub fn instantiate(&self) -> CirculantSpec {
        let n_total = self.beta * self.scale;
        let mut gens = Vec::with_capacity(self.base_generators.len() + 1);
        gens.push(1);
        for &g in &self.base_generators {
            gens.push(g * self.scale);
        }
        // loops can only arise in the degenerate 1-vertex case
        CirculantSpec::new_allowing_loops(n_total, &gens)
            .expect("validated family always instantiates")
    }
}

/// A diagonal discrete torus `Z^d / diag(alpha_1, ..., alpha_{d-1}, n) Z^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusSpec {
    alphas: Vec<u64>,
    last: u64,
}

impl TorusSpec {
    pub fn new(alphas: &[u64], last: u64) -> Result<Self> {
        if last == 0 || alphas.iter().any(|&a| a == 0) {
            return Err(Error::InvalidSpec("torus side lengths must be >= 1".into()));
        }
        Ok(TorusSpec { alphas: alphas.to_vec(), last })
    }

    pub fn alphas(&self) -> &[u64] {
        &self.alphas
    }

    pub fn last(&self) -> u64 {
        self.last
    }

    pub fn dimension(&self) -> usize {
        self.alphas.len() + 1
    }

    pub fn det(&self) -> u64 {
        self.alphas.iter().product::<u64>() * self.last
    }

    /// Side lengths in index order `alpha_1, ..., alpha_{d-1}, n`.
    pub fn sides(&self) -> Vec<u64> {
        let mut s = self.alphas.clone();
        s.push(self.last);
        s
    }
}

/// An undirected multigraph as an edge multiset with multiplicity counters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeMultiset {
    vertex_count: usize,
    edges: BTreeMap<(usize, usize), u32>,
    loops: BTreeMap<usize, u32>,
}

impl EdgeMultiset {
    pub fn new(vertex_count: usize) -> Self {
        EdgeMultiset { vertex_count, edges: BTreeMap::new(), loops: BTreeMap::new() }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn add_edge(&mut self, u: usize, v: usize, multiplicity: u32) {
        assert!(u < self.vertex_count && v < self.vertex_count);
        if u == v {
            *self.loops.entry(u).or_insert(0) += multiplicity;
        } else {
            let key = (u.min(v), u.max(v));
            *self.edges.entry(key).or_insert(0) += multiplicity;
        }
    }

    /// Non-loop edges with multiplicity.
    pub fn edges(&self) -> impl Iterator<Item = ((usize, usize), u32)> + '_ {
        self.edges.iter().map(|(&k, &m)| (k, m))
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> u32 {
        if u == v {
            self.loops.get(&u).copied().unwrap_or(0)
        } else {
            self.edges.get(&(u.min(v), u.max(v))).copied().unwrap_or(0)
        }
    }

    /// Total non-loop edge count with multiplicity.
    pub fn edge_count(&self) -> u64 {
        self.edges.values().map(|&m| m as u64).sum()
    }

    pub fn loop_count(&self) -> u64 {
        self.loops.values().map(|&m| m as u64).sum()
    }

    /// Degree of `v` counting multiplicity; each loop contributes two ends.
    pub fn degree(&self, v: usize) -> u64 {
        let mut d = 0u64;
        for (&(a, b), &m) in &self.edges {
            if a == v || b == v {
                d += m as u64;
            }
        }
        d + 2 * self.loops.get(&v).copied().unwrap_or(0) as u64
    }

    /// Relabel vertices through a permutation (`perm[v]` is the new label).
    pub fn relabeled(&self, perm: &[usize]) -> EdgeMultiset {
        assert_eq!(perm.len(), self.vertex_count);
        let mut out = EdgeMultiset::new(self.vertex_count);
        for (&(u, v), &m) in &self.edges {
            out.add_edge(perm[u], perm[v], m);
        }
        for (&v, &m) in &self.loops {
            out.add_edge(perm[v], perm[v], m);
        }
        out
    }
}

/// One Laplacian eigenvalue with its exact angle arguments.
#[derive(Debug, Clone)]
pub struct SpectrumPoint {
    /// Index tuple; a single entry for circulants.
    pub index: Vec<u64>,
    /// Enclosure of the eigenvalue.
    pub value: RealBall,
    /// Exact angles `2*pi*p/q` feeding the cosine terms.
    pub exact_angle_args: Vec<TurnAngle>,
}

impl SpectrumPoint {
    /// Exactly zero iff every cosine argument is `0 mod 2*pi`; decided on
    /// the rationals, no floating point involved.
    pub fn is_zero(&self) -> bool {
        self.exact_angle_args.iter().all(|a| a.is_zero())
    }
}

fn eigenvalue_from_angles(angles: &[TurnAngle], prec: u32) -> RealBall {
    // 2*slots - 2*sum(cos) with the loop slots contributing angle 0
    if angles.iter().all(|a| a.is_zero()) {
        return RealBall::zero(prec);
    }
    let mut acc = RealBall::exact_i64(2 * angles.len() as i64, prec);
    for a in angles {
        acc = acc.sub(&RealBall::cos_two_pi(*a, prec).mul_u64(2));
    }
    // eigenvalues are nonnegative; the clamp absorbs rounding slack only
    if *acc.lo() < 0 {
        acc = RealBall::new(rug::Float::with_val(prec, 0), acc.hi().clone());
    }
    acc
}

/// Explicit edge multiset of a circulant graph.
///
/// A generator with `2g = 0 (mod n)` yields two parallel edges per pair, the
/// unique convention matching the character eigenvalues.
pub fn build_multigraph(spec: &CirculantSpec) -> EdgeMultiset {
    let n = spec.vertex_count() as usize;
    let mut g = EdgeMultiset::new(n);
    for v in 0..n {
        for &gen in spec.generators() {
            let w = (v + gen as usize) % n;
            g.add_edge(v, w, 1);
        }
        for _ in 0..spec.loop_slots() {
            g.add_edge(v, v, 1);
        }
    }
    g
}

/// Laplacian spectrum of a circulant graph: `lambda_k = 2d - 2 sum_i
/// cos(2 pi k g_i / n)` for `k = 0..n-1`, with exact-angle metadata.
pub fn circulant_spectrum(spec: &CirculantSpec, prec: u32) -> Vec<SpectrumPoint> {
    let n = spec.vertex_count();
    (0..n)
        .map(|k| {
            let mut angles: Vec<TurnAngle> =
                spec.generators().iter().map(|&g| TurnAngle::new(k * g % n, n)).collect();
            for _ in 0..spec.loop_slots() {
                angles.push(TurnAngle::ZERO);
            }
            SpectrumPoint {
                index: vec![k],
                value: eigenvalue_from_angles(&angles, prec),
                exact_angle_args: angles,
            }
        })
        .collect()
}

/// Laplacian spectrum of a diagonal discrete torus over the full index box.
pub fn torus_spectrum(spec: &TorusSpec, prec: u32) -> Vec<SpectrumPoint> {
    let sides = spec.sides();
    let det = spec.det();
    let mut out = Vec::with_capacity(det as usize);
    let mut index = vec![0u64; sides.len()];
    loop {
        let angles: Vec<TurnAngle> =
            index.iter().zip(&sides).map(|(&k, &s)| TurnAngle::new(k, s)).collect();
        out.push(SpectrumPoint {
            index: index.clone(),
            value: eigenvalue_from_angles(&angles, prec),
            exact_angle_args: angles,
        });
        // odometer increment
        let mut i = 0;
        loop {
            if i == sides.len() {
                return out;
            }
            index[i] += 1;
            if index[i] < sides[i] {
                break;
            }
            index[i] = 0;
            i += 1;
        }
    }
}

/// Explicit edge multiset of a diagonal discrete torus. Dimensions of size 1
/// are inert (their only step is a loop and contributes nothing); size-2
/// dimensions yield parallel edges, matching the spectrum convention.
pub fn build_torus_multigraph(spec: &TorusSpec) -> EdgeMultiset {
    let sides: Vec<usize> = spec.sides().iter().map(|&s| s as usize).collect();
    let total: usize = sides.iter().product();
    let mut g = EdgeMultiset::new(total);
    let flatten = |tuple: &[usize]| -> usize {
        let mut idx = 0;
        for (i, &t) in tuple.iter().enumerate().rev() {
            idx = idx * sides[i] + t;
        }
        idx
    };
    let mut tuple = vec![0usize; sides.len()];
    loop {
        let v = flatten(&tuple);
        for (dim, &s) in sides.iter().enumerate() {
            if s == 1 {
                continue;
            }
            let mut t2 = tuple.clone();
            t2[dim] = (t2[dim] + 1) % s;
            g.add_edge(v, flatten(&t2), 1);
        }
        let mut i = 0;
        loop {
            if i == sides.len() {
                return g;
            }
            tuple[i] += 1;
            if tuple[i] < sides[i] {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
    }
}
