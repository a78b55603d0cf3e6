//! Hamming graphs `H(d,q)`, their merged variants `H(d,q)_K`, and the wreath product
//! `S_q ≀ S_d` acting on `Q^d`.
//!
//! A vertex is the integer `sum coords[i] * q^i` (coordinate 0 least significant).

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::OnceLock;

use thiserror::Error;

use crate::nt;
use crate::permgroup::{self, GroupStore, Perm, PermError};

/// Largest vertex count accepted by [`HammingSpace`].
pub const MAX_VERTICES: u64 = 1 << 22;

/// Largest vertex count accepted by [`brute_force_automorphisms`].
pub const BRUTE_FORCE_MAX_VERTICES: usize = 40;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HammingError {
    #[error("invalid parameters d = {d}, q = {q}")]
    InvalidParams { d: usize, q: u32 },
    #[error("H({d},{q}) has {count} vertices, above the limit of {MAX_VERTICES}")]
    TooManyVertices { d: usize, q: u32, count: u64 },
    #[error("distance set must be a nonempty subset of 1..={d}")]
    BadDistanceSet { d: usize },
    #[error("vertex {0} out of range")]
    VertexOutOfRange(u32),
    #[error("dimension mismatch: {0} vs {1}")]
    Mismatch(usize, usize),
    #[error("the automorphism group of H({d},{q})_K is larger than the wreath product: {case}")]
    Exceptional {
        d: usize,
        q: u32,
        case: ExceptionalCase,
    },
    #[error(
        "the automorphism group of H({d},{q})_K is not known to equal the wreath product for q < 4"
    )]
    UnknownAutomorphismGroup { d: usize, q: u32 },
    #[error("brute-force automorphism search is limited to {BRUTE_FORCE_MAX_VERTICES} vertices")]
    TooLargeForBruteForce,
    #[error(transparent)]
    Group(#[from] PermError),
}

/// Merged graphs whose automorphism group properly contains `S_q ≀ S_d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExceptionalCase {
    /// `K = {1..d}`, `d >= 2`: the complete graph, with automorphism group `S_{q^d}`.
    CompleteGraph,
    /// `q = 4`, `d >= 3`, `K` = all even or all odd distances: a rank 3 group.
    ParityClassQ4,
}

impl std::fmt::Display for ExceptionalCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExceptionalCase::CompleteGraph => write!(f, "K = D gives the complete graph"),
            ExceptionalCase::ParityClassQ4 => {
                write!(f, "q = 4, d >= 3 and K is the set of even or odd distances")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub u32);

/// The vertex set `Q^d` with `Q = [0, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HammingSpace {
    d: usize,
    q: u32,
    count: u32,
}

impl HammingSpace {
    pub fn new(d: usize, q: u32) -> Result<HammingSpace, HammingError> {
        if d == 0 || q < 2 {
            return Err(HammingError::InvalidParams { d, q });
        }
        let count = (q as u64)
            .checked_pow(d as u32)
            .filter(|c| *c <= MAX_VERTICES);
        let count = count.ok_or(HammingError::TooManyVertices {
            d,
            q,
            count: (q as u64).saturating_pow(d as u32),
        })?;
        Ok(HammingSpace {
            d,
            q,
            count: count as u32,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn vertex_count(&self) -> u32 {
        self.count
    }

    pub fn coords(&self, v: VertexId) -> Vec<u32> {
        let mut x = v.0;
        (0..self.d)
            .map(|_| {
                let c = x % self.q;
                x /= self.q;
                c
            })
            .collect()
    }

    pub fn index(&self, coords: &[u32]) -> VertexId {
        debug_assert_eq!(coords.len(), self.d);
        VertexId(coords.iter().rev().fold(0, |acc, &c| acc * self.q + c))
    }

    pub fn distance(&self, v: VertexId, w: VertexId) -> usize {
        let (mut a, mut b) = (v.0, w.0);
        let mut dist = 0;
        for _ in 0..self.d {
            if a % self.q != b % self.q {
                dist += 1;
            }
            a /= self.q;
            b /= self.q;
        }
        dist
    }

    fn check(&self, v: VertexId) -> Result<(), HammingError> {
        if v.0 < self.count {
            Ok(())
        } else {
            Err(HammingError::VertexOutOfRange(v.0))
        }
    }
}

/// Hamming distance between two vertices of (possibly different) spaces.
pub fn hamming_distance(
    a: &HammingSpace,
    v: VertexId,
    b: &HammingSpace,
    w: VertexId,
) -> Result<usize, HammingError> {
    if a != b {
        return Err(HammingError::Mismatch(a.dim(), b.dim()));
    }
    a.check(v)?;
    a.check(w)?;
    Ok(a.distance(v, w))
}

/// `H(d,q)_K`: vertices adjacent iff their Hamming distance lies in `K`.
#[derive(Debug, Clone)]
pub struct MergedGraph {
    space: HammingSpace,
    distances: BTreeSet<usize>,
    adjacency: Vec<Vec<u32>>,
}

impl MergedGraph {
    pub fn new(d: usize, q: u32, distances: &[usize]) -> Result<MergedGraph, HammingError> {
        let space = HammingSpace::new(d, q)?;
        let distances: BTreeSet<usize> = distances.iter().copied().collect();
        if distances.is_empty() || distances.iter().any(|&k| k == 0 || k > d) {
            return Err(HammingError::BadDistanceSet { d });
        }
        let max_k = *distances.iter().next_back().unwrap();
        let adjacency = (0..space.count)
            .map(|v| {
                let coords = space.coords(VertexId(v));
                let mut out = Vec::new();
                let mut cur = coords.clone();
                collect_neighbors(&space, &distances, max_k, &coords, &mut cur, 0, 0, &mut out);
                out.sort_unstable();
                out
            })
            .collect();
        Ok(MergedGraph {
            space,
            distances,
            adjacency,
        })
    }

    /// The ordinary Hamming graph `H(d,q) = H(d,q)_{1}`.
    pub fn hamming(d: usize, q: u32) -> Result<MergedGraph, HammingError> {
        MergedGraph::new(d, q, &[1])
    }

    pub fn space(&self) -> &HammingSpace {
        &self.space
    }

    pub fn distances(&self) -> &BTreeSet<usize> {
        &self.distances
    }

    pub fn is_complete_distance_set(&self) -> bool {
        self.distances.len() == self.space.d
    }

    pub fn vertex_count(&self) -> u32 {
        self.space.count
    }

    /// Neighbors of `v` in ascending order.
    pub fn neighbors(&self, v: VertexId) -> &[u32] {
        &self.adjacency[v.0 as usize]
    }

    pub fn adjacency(&self) -> &[Vec<u32>] {
        &self.adjacency
    }

    pub fn is_adjacent(&self, v: u32, w: u32) -> bool {
        self.adjacency[v as usize].binary_search(&w).is_ok()
    }

    /// `sum_{k in K} C(d,k) (q-1)^k`.
    pub fn valency(&self) -> u64 {
        let (d, q) = (self.space.d as u64, self.space.q as u64);
        self.distances
            .iter()
            .map(|&k| nt::binomial(d, k as u64) * (q - 1).pow(k as u32))
            .sum()
    }

    pub fn arc_count(&self) -> u64 {
        self.valency() * self.space.count as u64
    }

    /// Adjacency list dump: one line `v: n1 n2 ...` per vertex, ascending.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (v, nbrs) in self.adjacency.iter().enumerate() {
            let parts: Vec<String> = nbrs.iter().map(|w| w.to_string()).collect();
            let _ = writeln!(s, "{v}: {}", parts.join(" "));
        }
        s
    }
}

#[allow(clippy::too_many_arguments)]
fn collect_neighbors(
    space: &HammingSpace,
    distances: &BTreeSet<usize>,
    max_k: usize,
    base: &[u32],
    cur: &mut Vec<u32>,
    pos: usize,
    changed: usize,
    out: &mut Vec<u32>,
) {
    if changed > max_k {
        return;
    }
    if pos == space.d {
        if distances.contains(&changed) {
            out.push(space.index(cur).0);
        }
        return;
    }
    collect_neighbors(space, distances, max_k, base, cur, pos + 1, changed, out);
    for c in 0..space.q {
        if c != base[pos] {
            cur[pos] = c;
            collect_neighbors(
                space,
                distances,
                max_k,
                base,
                cur,
                pos + 1,
                changed + 1,
                out,
            );
        }
    }
    cur[pos] = base[pos];
}

/// An element `(sigma_0, ..., sigma_{d-1}; tau)` of `S_q ≀ S_d`.
///
/// It maps `v` to `w` with `w[tau(i)] = sigma_i(v[i])`: entries are permuted first,
/// then places. Composition is function composition, `g.compose(h)` applying `h` first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WreathElement {
    pub sigmas: Vec<Vec<u32>>,
    pub tau: Vec<u32>,
}

impl WreathElement {
    pub fn identity(d: usize, q: u32) -> WreathElement {
        WreathElement {
            sigmas: vec![(0..q).collect(); d],
            tau: (0..d as u32).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.tau.len()
    }

    pub fn apply_coords(&self, v: &[u32]) -> Vec<u32> {
        let mut w = vec![0u32; v.len()];
        for (i, &x) in v.iter().enumerate() {
            w[self.tau[i] as usize] = self.sigmas[i][x as usize];
        }
        w
    }

    pub fn apply(&self, space: &HammingSpace, v: VertexId) -> VertexId {
        space.index(&self.apply_coords(&space.coords(v)))
    }

    pub fn compose(&self, h: &WreathElement) -> WreathElement {
        let d = self.dim();
        let tau = (0..d).map(|i| self.tau[h.tau[i] as usize]).collect();
        let sigmas = (0..d)
            .map(|i| {
                let outer = &self.sigmas[h.tau[i] as usize];
                h.sigmas[i].iter().map(|&x| outer[x as usize]).collect()
            })
            .collect();
        WreathElement { sigmas, tau }
    }

    pub fn inverse(&self) -> WreathElement {
        let d = self.dim();
        let mut tau = vec![0u32; d];
        let mut sigmas = vec![Vec::new(); d];
        for i in 0..d {
            let t = self.tau[i] as usize;
            tau[t] = i as u32;
            let mut inv = vec![0u32; self.sigmas[i].len()];
            for (a, &b) in self.sigmas[i].iter().enumerate() {
                inv[b as usize] = a as u32;
            }
            sigmas[t] = inv;
        }
        WreathElement { sigmas, tau }
    }

    /// The induced permutation of the vertex set.
    pub fn to_perm(&self, space: &HammingSpace) -> Perm {
        let images = (0..space.vertex_count())
            .map(|v| self.apply(space, VertexId(v)).0)
            .collect();
        Perm::from_images_unchecked(images)
    }
}

/// Standard generators of `S_q ≀ S_d`: Coxeter generators `(k k+1)` in every factor,
/// the place cycle `i -> i+1` and the place transposition `(0 1)`.
pub fn wreath_generators(d: usize, q: u32) -> Vec<WreathElement> {
    let mut gens = Vec::new();
    for i in 0..d {
        for k in 0..q - 1 {
            let mut g = WreathElement::identity(d, q);
            g.sigmas[i].swap(k as usize, k as usize + 1);
            gens.push(g);
        }
    }
    if d >= 2 {
        let mut cyc = WreathElement::identity(d, q);
        cyc.tau = (0..d as u32).map(|i| (i + 1) % d as u32).collect();
        gens.push(cyc);
        let mut tr = WreathElement::identity(d, q);
        tr.tau.swap(0, 1);
        gens.push(tr);
    }
    gens
}

/// `Aut H(d,q)_K` as the wreath product, with a lazily materialized element list.
#[derive(Debug)]
pub struct AutGroup {
    space: HammingSpace,
    generators: Vec<WreathElement>,
    order: u128,
    store: OnceLock<GroupStore>,
}

impl AutGroup {
    pub fn space(&self) -> &HammingSpace {
        &self.space
    }

    pub fn generators(&self) -> &[WreathElement] {
        &self.generators
    }

    /// `(q!)^d d!`.
    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn generator_perms(&self) -> Vec<Perm> {
        self.generators
            .iter()
            .map(|g| g.to_perm(&self.space))
            .collect()
    }

    /// All elements as vertex permutations, built on first use.
    pub fn elements(&self, cap: usize) -> Result<&GroupStore, HammingError> {
        if let Some(s) = self.store.get() {
            return Ok(s);
        }
        if self.order > cap as u128 {
            return Err(PermError::CapExceeded { cap, found: 0 }.into());
        }
        let store = permgroup::close(&self.generator_perms(), cap)?;
        Ok(self.store.get_or_init(|| store))
    }
}

/// Which case, if any, makes `Aut H(d,q)_K` strictly larger than `S_q ≀ S_d`.
pub fn exceptional_case(d: usize, q: u32, distances: &BTreeSet<usize>) -> Option<ExceptionalCase> {
    if d >= 2 && distances.len() == d {
        return Some(ExceptionalCase::CompleteGraph);
    }
    if q == 4 && d >= 3 {
        let evens: BTreeSet<usize> = (1..=d).filter(|k| k % 2 == 0).collect();
        let odds: BTreeSet<usize> = (1..=d).filter(|k| k % 2 == 1).collect();
        if *distances == evens || *distances == odds {
            return Some(ExceptionalCase::ParityClassQ4);
        }
    }
    None
}

/// The automorphism group of `G`, when it is the wreath product.
pub fn aut_group(graph: &MergedGraph) -> Result<AutGroup, HammingError> {
    let (d, q) = (graph.space.d, graph.space.q);
    if let Some(case) = exceptional_case(d, q, &graph.distances) {
        return Err(HammingError::Exceptional { d, q, case });
    }
    let is_plain = graph.distances.len() == 1 && graph.distances.contains(&1);
    if q < 4 && !is_plain {
        return Err(HammingError::UnknownAutomorphismGroup { d, q });
    }
    let order = nt::factorial(q as u64).pow(d as u32) * nt::factorial(d as u64);
    Ok(AutGroup {
        space: graph.space,
        generators: wreath_generators(d, q),
        order,
        store: OnceLock::new(),
    })
}

/// All automorphisms of a small simple graph by backtracking, optionally with some
/// vertex images prescribed. Fails if more than `cap` automorphisms exist.
pub fn brute_force_automorphisms(
    adjacency: &[Vec<u32>],
    fixed: &[(u32, u32)],
    cap: usize,
) -> Result<Vec<Perm>, HammingError> {
    let n = adjacency.len();
    if n > BRUTE_FORCE_MAX_VERTICES {
        return Err(HammingError::TooLargeForBruteForce);
    }
    let mut adj = vec![false; n * n];
    for (v, nbrs) in adjacency.iter().enumerate() {
        for &w in nbrs {
            adj[v * n + w as usize] = true;
        }
    }
    // breadth-first vertex order keeps every new vertex adjacent to an assigned one
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        order.push(s);
        let mut head = order.len() - 1;
        while head < order.len() {
            for &w in &adjacency[order[head]] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    order.push(w as usize);
                }
            }
            head += 1;
        }
    }
    let mut prescribed = vec![None; n];
    for &(v, w) in fixed {
        prescribed[v as usize] = Some(w as usize);
    }
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut out = Vec::new();

    struct Ctx<'a> {
        n: usize,
        adj: &'a [bool],
        adjacency: &'a [Vec<u32>],
        order: &'a [usize],
        prescribed: &'a [Option<usize>],
        cap: usize,
    }

    fn search(
        ctx: &Ctx,
        depth: usize,
        image: &mut [usize],
        used: &mut [bool],
        out: &mut Vec<Perm>,
    ) -> Result<(), HammingError> {
        if depth == ctx.n {
            if out.len() >= ctx.cap {
                return Err(PermError::CapExceeded {
                    cap: ctx.cap,
                    found: out.len(),
                }
                .into());
            }
            out.push(Perm::from_images_unchecked(
                image.iter().map(|&x| x as u32).collect(),
            ));
            return Ok(());
        }
        let v = ctx.order[depth];
        let candidates: Vec<usize> = match ctx.prescribed[v] {
            Some(w) => vec![w],
            None => (0..ctx.n).collect(),
        };
        for w in candidates {
            if used[w] || ctx.adjacency[v].len() != ctx.adjacency[w].len() {
                continue;
            }
            let consistent = ctx.order[..depth]
                .iter()
                .all(|&u| ctx.adj[v * ctx.n + u] == ctx.adj[w * ctx.n + image[u]]);
            if !consistent {
                continue;
            }
            image[v] = w;
            used[w] = true;
            search(ctx, depth + 1, image, used, out)?;
            used[w] = false;
            image[v] = usize::MAX;
        }
        Ok(())
    }

    let ctx = Ctx {
        n,
        adj: &adj,
        adjacency,
        order: &order,
        prescribed: &prescribed,
        cap,
    };
    search(&ctx, 0, &mut image, &mut used, &mut out)?;
    Ok(out)
}
