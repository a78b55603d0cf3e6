//! Exhaustive search for orientably regular embeddings of (merged) Hamming graphs, comparison
//! with the constructed Hamming maps, Galois data for `F_q`, and existence verdicts for merged
//! graphs.
//!
//! The search fixes a base vertex `v0` and its first neighbour `u0`. A regular embedding is given
//! by a rotation `x` fixing `v0` that cycles its neighbours, and the involution `y` reversing the
//! arc `(v0, u0)`; both lie in the graph's automorphism group `A`, and `⟨x,y⟩` must act regularly
//! on arcs. Rotations are only needed up to conjugacy in the stabilizer `A_{v0}`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use itertools::Itertools;
use rayon::prelude::*;
use thiserror::Error;

use crate::cayley::{self, CayleyError};
use crate::ffield::{format_poly, Field, FieldElement, FieldError};
use crate::hamming::{
    self, AutGroup, ExceptionalCase, HammingError, MergedGraph, VertexId, WreathElement,
};
use crate::nt;
use crate::omap::{CanonicalCode, MapError, MapInvariants, MapType, OrientedMap};
use crate::permgroup::{close, Perm, PermError, DEFAULT_GROUP_CAP};

/// Largest arc count the search will handle.
pub const DEFAULT_MAX_ARCS: u64 = 100_000;

/// Automorphism groups larger than this put a census in the slow tier.
pub const SLOW_AUT_ORDER: u128 = 1_000_000;

/// Choice for one orbit of a place involution: place, its permutation, and the partner place with the inverse.
type Slot = (usize, Vec<u32>, Option<(usize, Vec<u32>)>);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("{what} has size {size}, above the cap {cap}")]
    CapExceeded {
        what: &'static str,
        size: u128,
        cap: u128,
    },
    #[error("H({d},{q})_K with K = {k:?} is not supported: {reason}")]
    Unsupported {
        d: usize,
        q: u64,
        k: Vec<usize>,
        reason: String,
    },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("distance set {0:?} must be a nonempty subset of 1..=d")]
    BadDistanceSet(Vec<usize>),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Hamming(#[from] HammingError),
    #[error(transparent)]
    Cayley(#[from] CayleyError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

impl From<PermError> for ClassifyError {
    fn from(e: PermError) -> Self {
        match e {
            PermError::CapExceeded { cap, found } => ClassifyError::CapExceeded {
                what: "permutation group",
                size: found as u128,
                cap: cap as u128,
            },
            other => ClassifyError::Hamming(other.into()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    /// Limit on the stabilizer `A_{v0}` scanned for rotations, and on any group closure.
    pub cap: usize,
    pub max_arcs: u64,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
    /// Keep one rotation per `A_{v0}`-conjugacy class. Turning this off runs the whole grid.
    pub reduce_rotations: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            cap: DEFAULT_GROUP_CAP,
            max_arcs: DEFAULT_MAX_ARCS,
            workers: None,
            reduce_rotations: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
pub struct SearchStats {
    pub stabilizer_order: u64,
    pub rotations: usize,
    pub rotation_classes: usize,
    pub reversers: usize,
    pub accepted_pairs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certification {
    Search,
    Theorem,
    Construction,
}

#[derive(Debug, Clone)]
pub struct CensusEntry {
    pub map: OrientedMap,
    pub invariants: MapInvariants,
    /// Generator `ω` with `map ≅ H(d,ω)`, when there is one.
    pub omega: Option<FieldElement>,
    pub mirror_partner: Option<usize>,
    pub wilson_orbit: usize,
}

/// Pairwise non-isomorphic orientably regular embeddings of one graph, sorted by canonical code.
#[derive(Debug, Clone)]
pub struct EmbeddingCensus {
    pub d: usize,
    pub q: u64,
    pub distances: Vec<usize>,
    pub entries: Vec<CensusEntry>,
    pub stats: SearchStats,
}

impl EmbeddingCensus {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn codes(&self) -> Vec<&CanonicalCode> {
        self.entries
            .iter()
            .map(|e| e.map.canonical_code())
            .collect()
    }
}

/// Where the rotation and reverser candidates come from.
pub enum Symmetry<'a> {
    /// `S_q ≀ S_d`, walked structurally without listing the whole group.
    Wreath(&'a AutGroup),
    /// An explicit list of all automorphisms.
    Explicit(&'a [Perm]),
}

struct Candidates {
    rotations: Vec<Perm>,
    stabilizer_gens: Vec<Perm>,
    reversers: Vec<Perm>,
    stabilizer_order: u64,
}

fn single_cycle(images: &[u32]) -> bool {
    let n = images.len();
    let (mut a, mut steps) = (images[0] as usize, 1);
    while a != 0 {
        a = images[a] as usize;
        steps += 1;
        if steps > n {
            return false;
        }
    }
    steps == n
}

fn neighbor_positions(graph: &MergedGraph, v0: u32) -> Vec<u32> {
    let mut pos = vec![u32::MAX; graph.vertex_count() as usize];
    for (k, &w) in graph.neighbors(VertexId(v0)).iter().enumerate() {
        pos[w as usize] = k as u32;
    }
    pos
}

fn wreath_candidates(
    graph: &MergedGraph,
    aut: &AutGroup,
    u0: u32,
    cap: usize,
) -> Result<Candidates, ClassifyError> {
    let space = *graph.space();
    let (d, q) = (space.dim(), space.q());
    let stabilizer_order = nt::factorial(q as u64 - 1).pow(d as u32) * nt::factorial(d as u64);
    if stabilizer_order > cap as u128 {
        return Err(ClassifyError::CapExceeded {
            what: "vertex stabilizer",
            size: stabilizer_order,
            cap: cap as u128,
        });
    }
    let nbrs = graph.neighbors(VertexId(0));
    let nbr_coords: Vec<Vec<u32>> = nbrs.iter().map(|&w| space.coords(VertexId(w))).collect();
    let pos = neighbor_positions(graph, 0);
    let fixing_zero: Vec<Vec<u32>> = (1..q)
        .permutations(q as usize - 1)
        .map(|p| std::iter::once(0).chain(p).collect())
        .collect();

    let mut rotations = Vec::new();
    let mut images = vec![0u32; nbrs.len()];
    for tau in (0..d as u32).permutations(d) {
        for choice in (0..d)
            .map(|_| 0..fixing_zero.len())
            .multi_cartesian_product()
        {
            let g = WreathElement {
                sigmas: choice.iter().map(|&c| fixing_zero[c].clone()).collect(),
                tau: tau.clone(),
            };
            for (k, c) in nbr_coords.iter().enumerate() {
                images[k] = pos[space.index(&g.apply_coords(c)).0 as usize];
            }
            if single_cycle(&images) {
                rotations.push(g.to_perm(&space));
            }
        }
    }

    let stabilizer_gens = aut
        .generators()
        .iter()
        .filter(|g| g.sigmas.iter().all(|s| s[0] == 0))
        .map(|g| g.to_perm(&space))
        .collect();

    let u = space.coords(VertexId(u0));
    let all: Vec<Vec<u32>> = (0..q).permutations(q as usize).collect();
    let mut reversers = Vec::new();
    for tau in (0..d as u32)
        .permutations(d)
        .filter(|t| (0..d).all(|i| t[t[i] as usize] as usize == i))
    {
        // one slot per orbit of tau: fixed places need an involution, swapped places a permutation
        // and its inverse
        let slots: Vec<Vec<Slot>> = (0..d)
            .filter(|&i| tau[i] as usize >= i)
            .map(|i| {
                let j = tau[i] as usize;
                all.iter()
                    .filter(|s| {
                        if i == j {
                            s[0] == u[i] && (0..q as usize).all(|x| s[s[x] as usize] as usize == x)
                        } else {
                            s[0] == u[j] && s[u[i] as usize] == 0
                        }
                    })
                    .map(|s| {
                        let partner = (i != j).then(|| {
                            let mut inv = vec![0u32; q as usize];
                            for (x, &y) in s.iter().enumerate() {
                                inv[y as usize] = x as u32;
                            }
                            (j, inv)
                        });
                        (i, s.clone(), partner)
                    })
                    .collect()
            })
            .collect();
        for pick in slots.iter().map(|s| s.iter()).multi_cartesian_product() {
            let mut g = WreathElement::identity(d, q);
            g.tau = tau.clone();
            for (i, s, partner) in pick {
                g.sigmas[*i] = s.clone();
                if let Some((j, inv)) = partner {
                    g.sigmas[*j] = inv.clone();
                }
            }
            reversers.push(g.to_perm(&space));
        }
    }
    Ok(Candidates {
        rotations,
        stabilizer_gens,
        reversers,
        stabilizer_order: stabilizer_order as u64,
    })
}

fn explicit_candidates(graph: &MergedGraph, group: &[Perm], u0: u32) -> Candidates {
    let nbrs = graph.neighbors(VertexId(0));
    let pos = neighbor_positions(graph, 0);
    let stabilizer: Vec<Perm> = group.iter().filter(|g| g.apply(0) == 0).cloned().collect();
    let rotations = stabilizer
        .iter()
        .filter(|g| {
            let images: Vec<u32> = nbrs.iter().map(|&w| pos[g.apply(w) as usize]).collect();
            single_cycle(&images)
        })
        .cloned()
        .collect();
    let reversers = group
        .iter()
        .filter(|g| g.apply(0) == u0 && g.apply(u0) == 0 && g.pow(2).is_identity())
        .cloned()
        .collect();
    Candidates {
        rotations,
        stabilizer_order: stabilizer.len() as u64,
        stabilizer_gens: stabilizer,
        reversers,
    }
}

/// First member of each conjugacy class of `xs` under `⟨gens⟩`; `xs` must be closed under it.
fn conjugacy_representatives(xs: &[Perm], gens: &[Perm]) -> Vec<Perm> {
    let index: HashMap<&Perm, usize> = xs.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let inverses: Vec<Perm> = gens.iter().map(Perm::inverse).collect();
    let mut seen = vec![false; xs.len()];
    let mut reps = Vec::new();
    for start in 0..xs.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        reps.push(xs[start].clone());
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for (g, gi) in gens.iter().zip(&inverses) {
                let c = g.compose_unchecked(&xs[i]).compose_unchecked(gi);
                let j = *index
                    .get(&c)
                    .expect("rotation candidates are closed under conjugation");
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
    }
    reps
}

/// The map with rotation `x` at `v0` and reverser `y` of `(v0,u0)`, if `⟨x,y⟩` is arc-regular.
fn map_from_pair(graph: &MergedGraph, v0: u32, u0: u32, x: &Perm, y: &Perm) -> Option<OrientedMap> {
    let n = graph.valency() as u32;
    let arcs = graph.arc_count() as usize;
    let group = close(&[x.clone(), y.clone()], arcs).ok()?;
    if group.order() != arcs {
        return None;
    }
    let arc = |v: u32, w: u32| -> u32 {
        let k = graph
            .neighbors(VertexId(v))
            .binary_search(&w)
            .expect("adjacent");
        v * n + k as u32
    };
    let xu = x.apply(u0);
    let mut r = vec![u32::MAX; arcs];
    let mut l = vec![u32::MAX; arcs];
    let mut labels = vec![0u32; arcs];
    for g in group.elements() {
        let (gv, gu) = (g.apply(v0), g.apply(u0));
        let a = arc(gv, gu) as usize;
        if r[a] != u32::MAX {
            return None;
        }
        r[a] = arc(gv, g.apply(xu));
        l[a] = arc(gu, gv);
        labels[a] = gv;
    }
    OrientedMap::build(Perm::new(r).ok()?, Perm::new(l).ok()?, Some(labels)).ok()
}

fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match workers {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}

/// All orientably regular embeddings of `graph` up to isomorphism.
pub fn enumerate_embeddings(
    graph: &MergedGraph,
    config: &SearchConfig,
) -> Result<EmbeddingCensus, ClassifyError> {
    let aut = hamming::aut_group(graph)?;
    enumerate_with(graph, Symmetry::Wreath(&aut), config)
}

pub fn enumerate_with(
    graph: &MergedGraph,
    symmetry: Symmetry,
    config: &SearchConfig,
) -> Result<EmbeddingCensus, ClassifyError> {
    let arcs = graph.arc_count();
    if arcs > config.max_arcs {
        return Err(ClassifyError::CapExceeded {
            what: "arc count",
            size: arcs as u128,
            cap: config.max_arcs as u128,
        });
    }
    let space = graph.space();
    let distances: Vec<usize> = graph.distances().iter().copied().collect();
    let (d, q) = (space.dim(), space.q() as u64);
    let Some(&u0) = graph.neighbors(VertexId(0)).first() else {
        return Ok(EmbeddingCensus {
            d,
            q,
            distances,
            entries: Vec::new(),
            stats: SearchStats::default(),
        });
    };
    let cand = match symmetry {
        Symmetry::Wreath(aut) => wreath_candidates(graph, aut, u0, config.cap)?,
        Symmetry::Explicit(group) => explicit_candidates(graph, group, u0),
    };
    let reps = if config.reduce_rotations {
        conjugacy_representatives(&cand.rotations, &cand.stabilizer_gens)
    } else {
        cand.rotations.clone()
    };
    let pairs: Vec<(usize, usize)> = (0..reps.len())
        .cartesian_product(0..cand.reversers.len())
        .collect();
    let found: Vec<OrientedMap> = with_workers(config.workers, || {
        pairs
            .par_iter()
            .filter_map(|&(i, j)| map_from_pair(graph, 0, u0, &reps[i], &cand.reversers[j]))
            .collect()
    });
    let accepted_pairs = found.len();
    let mut unique: BTreeMap<CanonicalCode, OrientedMap> = BTreeMap::new();
    for m in found {
        unique.entry(m.canonical_code().clone()).or_insert(m);
    }
    let stats = SearchStats {
        stabilizer_order: cand.stabilizer_order,
        rotations: cand.rotations.len(),
        rotation_classes: reps.len(),
        reversers: cand.reversers.len(),
        accepted_pairs,
    };
    let maps: Vec<OrientedMap> = unique.into_values().collect();
    let entries = annotate(maps, d, q)?;
    Ok(EmbeddingCensus {
        d,
        q,
        distances,
        entries,
        stats,
    })
}

/// Invariants, mirror partners, Wilson orbits and matching Hamming-map generators.
fn annotate(maps: Vec<OrientedMap>, d: usize, q: u64) -> Result<Vec<CensusEntry>, ClassifyError> {
    let position: HashMap<CanonicalCode, usize> = maps
        .iter()
        .enumerate()
        .map(|(i, m)| (m.canonical_code().clone(), i))
        .collect();
    let constructed: HashMap<CanonicalCode, FieldElement> = match Field::of_order(q) {
        Ok(f) => f
            .generators()
            .into_iter()
            .rev()
            .filter_map(|w| {
                cayley::hamming_map(d, &w)
                    .ok()
                    .map(|m| (m.canonical_code().clone(), w))
            })
            .collect(),
        Err(_) => HashMap::new(),
    };
    let mut orbit = vec![usize::MAX; maps.len()];
    let mut next_orbit = 0;
    let mut entries = Vec::with_capacity(maps.len());
    for (i, m) in maps.iter().enumerate() {
        let invariants = m.invariants()?;
        let mirror_partner = position.get(m.mirror().canonical_code()).copied();
        if orbit[i] == usize::MAX {
            let n = invariants.map_type.n as u64;
            for j in nt::units(n) {
                if let Ok(w) = m.wilson(j as i64) {
                    if let Some(&k) = position.get(w.canonical_code()) {
                        orbit[k] = next_orbit;
                    }
                }
            }
            orbit[i] = next_orbit;
            next_orbit += 1;
        }
        entries.push(CensusEntry {
            map: m.clone(),
            invariants,
            omega: constructed.get(m.canonical_code()).cloned(),
            mirror_partner,
            wilson_orbit: orbit[i],
        });
    }
    Ok(entries)
}

/// `|S_q ≀ S_d|`.
pub fn wreath_order(d: usize, q: u64) -> u128 {
    nt::factorial(q).pow(d as u32) * nt::factorial(d as u64)
}

pub fn is_slow(d: usize, q: u64) -> bool {
    wreath_order(d, q) > SLOW_AUT_ORDER
}

/// Number of orientably regular embeddings of `H(d,q)`, where known.
pub fn expected_count(d: usize, q: u64) -> Option<u64> {
    match nt::prime_power(q) {
        None => Some(0),
        Some((_, e)) if q > 2 => Some(nt::euler_phi(q - 1) / e as u64),
        Some(_) if d <= 2 => Some(1),
        Some(_) if d % 2 == 1 => Some(1 << nt::factorize(d as u64).len()),
        Some(_) => None,
    }
}

#[derive(Debug, Clone)]
pub struct HammingReport {
    pub census: EmbeddingCensus,
    pub expected_count: Option<u64>,
    /// One constructed map per Frobenius class of generators, with its census position.
    pub constructed: Vec<(FieldElement, Option<usize>)>,
    /// Census maps that are not Hamming maps.
    pub extra: Vec<usize>,
    pub consistent: bool,
}

/// Census of `H(d,q)` checked against `{H(d,ω)}`. For `q > 2` the two sets must coincide;
/// for `q = 2` the Hamming map must appear and the count must match where it is known.
pub fn classify_hamming(
    d: usize,
    q: u64,
    config: &SearchConfig,
) -> Result<HammingReport, ClassifyError> {
    let graph = MergedGraph::hamming(d, q as u32)?;
    let census = enumerate_embeddings(&graph, config)?;
    let expected = expected_count(d, q);
    let index: HashMap<&CanonicalCode, usize> = census
        .codes()
        .into_iter()
        .enumerate()
        .map(|(i, c)| (c, i))
        .collect();
    let mut constructed = Vec::new();
    if let Ok(f) = Field::of_order(q) {
        for w in f.generator_classes().representatives() {
            let m = cayley::hamming_map(d, &w)?;
            let pos = index.get(m.canonical_code()).copied();
            constructed.push((w, pos));
        }
    }
    let hit: HashSet<usize> = constructed.iter().filter_map(|(_, p)| *p).collect();
    let extra: Vec<usize> = (0..census.len()).filter(|i| !hit.contains(i)).collect();
    let all_found = constructed.iter().all(|(_, p)| p.is_some());
    let count_ok = expected.is_none_or(|c| c == census.len() as u64);
    let consistent = all_found && count_ok && (q == 2 || extra.is_empty());
    Ok(HammingReport {
        census,
        expected_count: expected,
        constructed,
        extra,
        consistent,
    })
}

/// Unit groups and field-of-definition data for the Hamming maps over `F_q`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct GaloisStructure {
    pub q: u64,
    pub p: u64,
    pub e: u32,
    /// `Z*_{q−1}`.
    pub units: Vec<u64>,
    /// `⟨p⟩ ≤ Z*_{q−1}`.
    pub frobenius_subgroup: Vec<u64>,
    /// `φ(q−1)/e`.
    pub degree: u64,
    /// Invariants of `Z*_{q−1}/⟨p⟩` as prime powers, e.g. `[2, 2]`.
    pub quotient: Vec<u64>,
    pub rational: bool,
    pub description: String,
}

impl GaloisStructure {
    /// Preimage of `⟨p⟩` under reduction `Z*_n → Z*_{q−1}`, `n = d(q−1)`.
    pub fn preimage(&self, d: usize) -> Vec<u64> {
        let m = self.q - 1;
        let n = d as u64 * m;
        nt::units(n)
            .into_iter()
            .filter(|j| self.frobenius_subgroup.contains(&(j % m)))
            .collect()
    }

    pub fn quotient_name(&self) -> String {
        if self.quotient.is_empty() {
            "1".to_string()
        } else {
            self.quotient.iter().map(|c| format!("C{c}")).join(" x ")
        }
    }
}

pub fn galois_structure(q: u64) -> Result<GaloisStructure, ClassifyError> {
    let (p, e) = nt::prime_power(q).ok_or(ClassifyError::NotPrimePower(q))?;
    let m = q - 1;
    let units = nt::units(m);
    let mut frobenius_subgroup: Vec<u64> = (0..e).map(|i| p.pow(i) % m).collect();
    if m == 1 {
        frobenius_subgroup = vec![0];
    }
    frobenius_subgroup.sort_unstable();
    frobenius_subgroup.dedup();
    let degree = units.len() as u64 / frobenius_subgroup.len() as u64;
    let quotient = quotient_invariants(&units, &frobenius_subgroup, m);
    let rational = degree == 1;
    let description = if rational {
        "Q".to_string()
    } else {
        format!("splitting field of {p} in Q(zeta_{m}), degree {degree}")
    };
    Ok(GaloisStructure {
        q,
        p,
        e,
        units,
        frobenius_subgroup,
        degree,
        quotient,
        rational,
        description,
    })
}

/// Elementary divisors of the abelian group `units / sub` (all mod `m`).
fn quotient_invariants(units: &[u64], sub: &[u64], m: u64) -> Vec<u64> {
    if m == 1 {
        return Vec::new();
    }
    let sub: BTreeSet<u64> = sub.iter().copied().collect();
    let order = (units.len() / sub.len()) as u64;
    // order of the coset of a: least k with a^k in sub
    let coset_order = |a: u64| {
        let (mut x, mut k) = (a % m, 1u64);
        while !sub.contains(&x) {
            x = x * a % m;
            k += 1;
        }
        k
    };
    let orders: Vec<u64> = units.iter().map(|&a| coset_order(a)).collect();
    let mut out = Vec::new();
    for (l, _) in nt::factorize(order) {
        // s_k = log_l #{cosets of order dividing l^k} = Σ_i min(a_i, k)
        let count_dividing = |k: u32| {
            let lk = l.pow(k);
            orders.iter().filter(|&&o| lk % o == 0).count() as u64 / sub.len() as u64
        };
        let log = |mut x: u64| {
            let mut r = 0;
            while x > 1 {
                x /= l;
                r += 1;
            }
            r
        };
        let mut prev = 0i64;
        let mut at_least = Vec::new();
        for k in 1.. {
            let s = log(count_dividing(k)) as i64;
            if s == prev {
                break;
            }
            at_least.push((s - prev) as usize);
            prev = s;
        }
        // at_least[k-1] = number of cyclic factors of exponent >= k
        for k in (0..at_least.len()).rev() {
            let exact = at_least[k] - at_least.get(k + 1).copied().unwrap_or(0);
            out.extend(std::iter::repeat_n(l.pow(k as u32 + 1), exact));
        }
    }
    out.sort_unstable();
    out
}

/// Whether `{H(d,ω)}` is one orbit under Wilson's operations: every Hamming map for `(d,q)` is
/// isomorphic to some `H_j(H(d,ω0))`, `gcd(j, n) = 1`, and vice versa.
pub fn galois_orbit_check(d: usize, q: u64) -> Result<bool, ClassifyError> {
    let field = Field::of_order(q).map_err(|_| ClassifyError::NotPrimePower(q))?;
    let codes: BTreeSet<CanonicalCode> = field
        .generator_classes()
        .representatives()
        .iter()
        .map(|w| cayley::hamming_map(d, w).map(|m| m.canonical_code().clone()))
        .collect::<Result<_, _>>()?;
    let base = cayley::hamming_map(d, &field.default_generator())?;
    let n = (d as u64) * (q - 1);
    let orbit: BTreeSet<CanonicalCode> = nt::units(n)
        .into_iter()
        .map(|j| base.wilson(j as i64).map(|m| m.canonical_code().clone()))
        .collect::<Result<_, _>>()?;
    Ok(orbit == codes)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Existence {
    ExistsHamming,
    ExistsComplete,
    /// Found by search for a distance set other than `{1}` or `D`.
    ExistsOther,
    None,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct MergedVerdict {
    pub d: usize,
    pub q: u64,
    #[serde(rename = "K")]
    pub k: Vec<usize>,
    pub verdict: Existence,
    pub certified_by: Certification,
    pub exceptional: Option<ExceptionalCase>,
    pub note: String,
    #[serde(skip)]
    pub witness: Option<OrientedMap>,
    #[serde(skip)]
    pub census: Option<EmbeddingCensus>,
}

/// Whether `H(d,q)_K` has an orientably regular embedding.
///
/// `K = {1}` and `K = D` are settled by construction (Hamming maps; complete maps over
/// `F_{q^d}`). For other `K` with `q >= 4` the search decides when it fits the caps; the
/// `q = 4` parity classes, whose automorphism group is larger than the wreath product, are
/// answered by citation only. `q <= 3` is unsupported outside `{1}` and `D`.
pub fn merged_existence(
    d: usize,
    q: u64,
    k: &[usize],
    config: &SearchConfig,
) -> Result<MergedVerdict, ClassifyError> {
    let kset: BTreeSet<usize> = k.iter().copied().collect();
    if kset.is_empty() || kset.iter().any(|&x| x == 0 || x > d) {
        return Err(ClassifyError::BadDistanceSet(k.to_vec()));
    }
    let kv: Vec<usize> = kset.iter().copied().collect();
    let verdict = |verdict, certified_by, exceptional, note: String| MergedVerdict {
        d,
        q,
        k: kv.clone(),
        verdict,
        certified_by,
        exceptional,
        note,
        witness: None,
        census: None,
    };
    let prime_power = nt::prime_power(q).is_some();
    let is_d = kset.len() == d;
    if kset == BTreeSet::from([1]) && !is_d || d == 1 {
        if !prime_power {
            return Ok(match classify_hamming(d, q, config) {
                Ok(r) if r.census.is_empty() => verdict(
                    Existence::None,
                    Certification::Search,
                    None,
                    "no embedding found by exhaustive search".into(),
                ),
                Ok(r) => {
                    return Err(ClassifyError::Inconsistent(format!(
                        "{} embeddings of H({d},{q}) found",
                        r.census.len()
                    )))
                }
                Err(ClassifyError::CapExceeded { .. }) => verdict(
                    Existence::None,
                    Certification::Theorem,
                    None,
                    "q is not a prime power".into(),
                ),
                Err(e) => return Err(e),
            });
        }
        let m = cayley::hamming_map(d, &Field::of_order(q)?.default_generator())?;
        if !m.is_orientably_regular().regular {
            return Err(ClassifyError::Inconsistent(
                "constructed Hamming map is not regular".into(),
            ));
        }
        let mut v = verdict(
            Existence::ExistsHamming,
            Certification::Construction,
            None,
            "Hamming map H(d,omega)".into(),
        );
        v.witness = Some(m);
        return Ok(v);
    }
    if is_d {
        let vertices = (q as u128).pow(d as u32);
        if nt::prime_power(vertices as u64).is_none() {
            return Ok(verdict(
                Existence::None,
                Certification::Theorem,
                Some(ExceptionalCase::CompleteGraph),
                format!("complete graph on {vertices} vertices, not a prime power"),
            ));
        }
        let big = Field::of_order(vertices as u64)?;
        let m = cayley::hamming_map(1, &big.default_generator())?;
        let complete = m.vertex_count() as u128 == vertices
            && m.underlying_adjacency().is_some_and(|adj| {
                adj.iter().all(|(v, ns)| {
                    ns.len() as u128 == vertices - 1
                        && !ns.contains(v)
                        && ns.windows(2).all(|w| w[0] < w[1])
                })
            });
        if !complete || !m.is_orientably_regular().regular {
            return Err(ClassifyError::Inconsistent(
                "complete map over the extension field failed its checks".into(),
            ));
        }
        let mut v = verdict(
            Existence::ExistsComplete,
            Certification::Construction,
            Some(ExceptionalCase::CompleteGraph),
            format!("complete map K_{vertices} = H(1,omega) over F_{vertices}"),
        );
        v.witness = Some(m);
        return Ok(v);
    }
    if q <= 3 {
        return Err(ClassifyError::Unsupported {
            d,
            q,
            k: kv,
            reason: "the automorphism group is only known to be the wreath product for q >= 4"
                .into(),
        });
    }
    if let Some(case) = hamming::exceptional_case(d, q as u32, &kset) {
        return Ok(verdict(
            Existence::None,
            Certification::Theorem,
            Some(case),
            "automorphism group contains V:GO(2d,2); not checked by search".into(),
        ));
    }
    let graph = MergedGraph::new(d, q as u32, &kv)?;
    match enumerate_embeddings(&graph, config) {
        Ok(census) => {
            let mut v = if census.is_empty() {
                verdict(
                    Existence::None,
                    Certification::Search,
                    None,
                    "no embedding found by exhaustive search".into(),
                )
            } else {
                verdict(
                    Existence::ExistsOther,
                    Certification::Search,
                    None,
                    format!("{} embeddings found", census.len()),
                )
            };
            v.witness = census.entries.first().map(|e| e.map.clone());
            v.census = Some(census);
            Ok(v)
        }
        Err(ClassifyError::CapExceeded { .. }) => Ok(verdict(
            Existence::None,
            Certification::Theorem,
            None,
            "search exceeds the caps; K is neither {1} nor D".into(),
        )),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct CensusMapJson {
    pub omega: Option<String>,
    pub omega_min_poly: Option<String>,
    #[serde(rename = "type")]
    pub map_type: MapType,
    pub chi: i64,
    pub genus: u64,
    pub aut_order: usize,
    pub reflexible: bool,
    pub mirror_partner_index: Option<usize>,
    pub wilson_orbit_id: usize,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct CensusJson {
    pub d: usize,
    pub q: u64,
    pub p: Option<u64>,
    pub e: Option<u32>,
    #[serde(rename = "K")]
    pub k: Vec<usize>,
    pub expected_count: Option<u64>,
    pub maps: Vec<CensusMapJson>,
    pub certified_by: Certification,
}

impl CensusJson {
    pub fn new(census: &EmbeddingCensus, expected_count: Option<u64>) -> CensusJson {
        let pe = nt::prime_power(census.q);
        CensusJson {
            d: census.d,
            q: census.q,
            p: pe.map(|x| x.0),
            e: pe.map(|x| x.1),
            k: census.distances.clone(),
            expected_count,
            maps: census
                .entries
                .iter()
                .map(|e| CensusMapJson {
                    omega: e.omega.as_ref().map(|w| w.to_string()),
                    omega_min_poly: e
                        .omega
                        .as_ref()
                        .map(|w| format_poly(&w.minimal_polynomial())),
                    map_type: e.invariants.map_type,
                    chi: e.invariants.chi,
                    genus: e.invariants.genus,
                    aut_order: e.invariants.aut_order,
                    reflexible: e.invariants.reflexible,
                    mirror_partner_index: e.mirror_partner,
                    wilson_orbit_id: e.wilson_orbit,
                })
                .collect(),
            certified_by: Certification::Search,
        }
    }
}
