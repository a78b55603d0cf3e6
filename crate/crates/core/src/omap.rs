//! Oriented combinatorial maps given by a rotation `R` and an arc reversal `L`.
//!
//! Arcs are `[0, 2E)`. Vertices are the orbits of `R`, edges the orbits of `L`, and
//! faces the orbits of `R∘L` (reverse the arc, then turn to the next arc around the
//! new tail).

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;
use std::sync::OnceLock;

use rayon::prelude::*;
use thiserror::Error;

use crate::nt;
use crate::permgroup::{Perm, PermError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("rotation and reversal have different degrees ({0} vs {1})")]
    DegreeMismatch(usize, usize),
    #[error("a map needs at least one edge")]
    Empty,
    #[error("reversal is not an involution")]
    NotInvolution,
    #[error("reversal fixes arc {0}")]
    FixedArc(u32),
    #[error("the map is not connected")]
    Disconnected,
    #[error("vertex labels must be constant on rotation orbits and distinct across them")]
    BadLabels,
    #[error("Euler characteristic {0} is odd")]
    OddEulerCharacteristic(i64),
    #[error("Wilson exponent {j} is not coprime to the valency {n}")]
    NotCoprime { j: i64, n: usize },
    #[error("vertex valencies are not all equal")]
    NonUniformValency,
    #[error("malformed map file: {0}")]
    Parse(String),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// How the first step of a Petrie walk turns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PetrieConvention {
    /// Step with `R∘L`, then `R⁻¹∘L`, alternating.
    #[default]
    RightFirst,
    /// Step with `R⁻¹∘L` first.
    LeftFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct MapType {
    pub m: usize,
    pub n: usize,
    pub l: usize,
}

impl std::fmt::Display for MapType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{{},{}}}_{}", self.m, self.n, self.l)
    }
}

/// Orbit-length multisets (length -> count) of faces, vertices and Petrie walks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeProfile {
    pub faces: BTreeMap<usize, usize>,
    pub vertices: BTreeMap<usize, usize>,
    pub petrie: BTreeMap<usize, usize>,
}

impl TypeProfile {
    /// The single type `{m,n}_l` if every orbit family has one length.
    pub fn uniform(&self) -> Option<MapType> {
        match (
            single(&self.faces),
            single(&self.vertices),
            single(&self.petrie),
        ) {
            (Some(m), Some(n), Some(l)) => Some(MapType { m, n, l }),
            _ => None,
        }
    }
}

fn single(m: &BTreeMap<usize, usize>) -> Option<usize> {
    if m.len() == 1 {
        m.keys().next().copied()
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct MapInvariants {
    #[serde(rename = "type")]
    pub map_type: MapType,
    pub chi: i64,
    pub genus: u64,
    pub aut_order: usize,
    pub reflexible: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Regularity {
    pub regular: bool,
    pub aut_order: usize,
}

/// Isomorphism-complete code of a connected map; see [`OrientedMap::canonical_code`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode(pub Vec<u32>);

#[derive(Debug, Clone)]
pub struct OrientedMap {
    r: Perm,
    l: Perm,
    labels: Option<Vec<u32>>,
    vertices: usize,
    faces: usize,
    regular: OnceLock<bool>,
    code: OnceLock<(CanonicalCode, u32)>,
}

impl OrientedMap {
    /// Validates and builds a map. `labels[a]` names the tail vertex of arc `a`.
    pub fn build(r: Perm, l: Perm, labels: Option<Vec<u32>>) -> Result<OrientedMap, MapError> {
        let n = r.degree();
        if l.degree() != n {
            return Err(MapError::DegreeMismatch(n, l.degree()));
        }
        if n == 0 {
            return Err(MapError::Empty);
        }
        for a in 0..n as u32 {
            let b = l.apply(a);
            if b == a {
                return Err(MapError::FixedArc(a));
            }
            if l.apply(b) != a {
                return Err(MapError::NotInvolution);
            }
        }
        if !connected(&r, &l) {
            return Err(MapError::Disconnected);
        }
        let vertex_cycles = r.cycles();
        if let Some(lab) = &labels {
            if lab.len() != n {
                return Err(MapError::BadLabels);
            }
            let mut names = std::collections::HashSet::new();
            for c in &vertex_cycles {
                let name = lab[c[0] as usize];
                if c.iter().any(|&a| lab[a as usize] != name) || !names.insert(name) {
                    return Err(MapError::BadLabels);
                }
            }
        }
        let faces = r.compose_unchecked(&l).cycles().len();
        Ok(OrientedMap {
            vertices: vertex_cycles.len(),
            faces,
            r,
            l,
            labels,
            regular: OnceLock::new(),
            code: OnceLock::new(),
        })
    }

    pub fn arc_count(&self) -> usize {
        self.r.degree()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.arc_count() / 2
    }

    pub fn face_count(&self) -> usize {
        self.faces
    }

    pub fn rotation(&self) -> &Perm {
        &self.r
    }

    pub fn reversal(&self) -> &Perm {
        &self.l
    }

    pub fn labels(&self) -> Option<&[u32]> {
        self.labels.as_deref()
    }

    /// `R∘L`, whose cycles are the faces.
    pub fn face_rotation(&self) -> Perm {
        self.r.compose_unchecked(&self.l)
    }

    pub fn vertex_orbits(&self) -> Vec<Vec<u32>> {
        self.r.cycles()
    }

    pub fn face_orbits(&self) -> Vec<Vec<u32>> {
        self.face_rotation().cycles()
    }

    /// Lengths of all closed Petrie walks, one per cycle of the (arc, parity) walk.
    pub fn petrie_lengths(&self, convention: PetrieConvention) -> Vec<usize> {
        let a_count = self.arc_count();
        let rinv = self.r.inverse();
        let first = convention == PetrieConvention::RightFirst;
        let mut seen = vec![[false; 2]; a_count];
        let mut out = Vec::new();
        for start in 0..a_count as u32 {
            if seen[start as usize][first as usize] {
                continue;
            }
            let (mut a, mut s) = (start, first);
            let mut steps = 0;
            while !seen[a as usize][s as usize] {
                seen[a as usize][s as usize] = true;
                let back = self.l.apply(a);
                a = if s {
                    self.r.apply(back)
                } else {
                    rinv.apply(back)
                };
                s = !s;
                steps += 1;
            }
            out.push(steps);
        }
        out
    }

    pub fn type_profile(&self, convention: PetrieConvention) -> TypeProfile {
        let count = |lens: Vec<usize>| {
            let mut m = BTreeMap::new();
            for x in lens {
                *m.entry(x).or_insert(0) += 1;
            }
            m
        };
        TypeProfile {
            faces: count(self.face_orbits().iter().map(Vec::len).collect()),
            vertices: count(self.vertex_orbits().iter().map(Vec::len).collect()),
            petrie: count(self.petrie_lengths(convention)),
        }
    }

    /// `{m,n}_l` with the default Petrie convention, if uniform.
    pub fn map_type(&self) -> Option<MapType> {
        self.type_profile(PetrieConvention::default()).uniform()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices as i64 - self.edge_count() as i64 + self.faces as i64
    }

    pub fn euler_genus(&self) -> Result<(i64, u64), MapError> {
        let chi = self.euler_characteristic();
        if chi % 2 != 0 || chi > 2 {
            return Err(MapError::OddEulerCharacteristic(chi));
        }
        Ok((chi, ((2 - chi) / 2) as u64))
    }

    pub fn genus(&self) -> Result<u64, MapError> {
        self.euler_genus().map(|(_, g)| g)
    }

    /// Extends `a ↦ b` to an isomorphism `self → other` commuting with `R` and `L`, if one exists.
    pub fn transport_to(&self, other: &OrientedMap, a: u32, b: u32) -> Option<Vec<u32>> {
        let n = self.arc_count();
        if other.arc_count() != n {
            return None;
        }
        let mut phi = vec![u32::MAX; n];
        let mut used = vec![false; n];
        phi[a as usize] = b;
        used[b as usize] = true;
        let mut queue = VecDeque::from([a]);
        while let Some(x) = queue.pop_front() {
            let fx = phi[x as usize];
            for (src, dst) in [
                (self.r.apply(x), other.r.apply(fx)),
                (self.l.apply(x), other.l.apply(fx)),
            ] {
                let cur = phi[src as usize];
                if cur == u32::MAX {
                    if used[dst as usize] {
                        return None;
                    }
                    phi[src as usize] = dst;
                    used[dst as usize] = true;
                    queue.push_back(src);
                } else if cur != dst {
                    return None;
                }
            }
        }
        Some(phi)
    }

    /// Automorphism of `self` sending arc `a` to arc `b`, if any.
    pub fn transport(&self, a: u32, b: u32) -> Option<Vec<u32>> {
        self.transport_to(self, a, b)
    }

    /// Regular iff the transports `0 ↦ R(0)` and `0 ↦ L(0)` both extend: the arcs reachable
    /// from 0 by automorphisms form a set closed under `R` and `L`, hence everything.
    fn regular_fast(&self) -> bool {
        *self.regular.get_or_init(|| {
            self.transport(0, self.r.apply(0)).is_some()
                && self.transport(0, self.l.apply(0)).is_some()
        })
    }

    /// Number of orientation-preserving automorphisms, counted as successful transports of arc 0.
    pub fn is_orientably_regular(&self) -> Regularity {
        let n = self.arc_count();
        if self.regular_fast() {
            return Regularity {
                regular: true,
                aut_order: n,
            };
        }
        let aut_order = (0..n as u32)
            .into_par_iter()
            .filter(|&b| self.transport(0, b).is_some())
            .count();
        Regularity {
            regular: aut_order == n,
            aut_order,
        }
    }

    /// Breadth-first numbering from `start` over moves `R, R⁻¹, L`; the code lists, for every
    /// arc in numbering order, the numbers of its three move targets.
    ///
    /// Returns `None` as soon as the code would exceed `bound` lexicographically.
    fn code_from(
        &self,
        start: u32,
        rinv: &Perm,
        bound: Option<&[u32]>,
    ) -> Option<(Vec<u32>, Vec<u32>)> {
        let n = self.arc_count();
        let mut num = vec![u32::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut code = Vec::with_capacity(3 * n + 1);
        code.push(n as u32);
        num[start as usize] = 0;
        order.push(start);
        let mut head = 0;
        let mut tight = bound.is_some();
        while head < order.len() {
            let x = order[head];
            head += 1;
            for y in [self.r.apply(x), rinv.apply(x), self.l.apply(x)] {
                if num[y as usize] == u32::MAX {
                    num[y as usize] = order.len() as u32;
                    order.push(y);
                }
                let c = num[y as usize];
                if tight {
                    let b = bound.unwrap()[code.len()];
                    if c > b {
                        return None;
                    }
                    if c < b {
                        tight = false;
                    }
                }
                code.push(c);
            }
        }
        Some((code, num))
    }

    /// Lexicographically least code over all starting arcs, and an arc attaining it.
    pub fn canonical_code_with_start(&self) -> &(CanonicalCode, u32) {
        self.code.get_or_init(|| {
            let rinv = self.r.inverse();
            if self.regular_fast() {
                let (code, _) = self.code_from(0, &rinv, None).expect("unbounded");
                return (CanonicalCode(code), 0);
            }
            let n = self.arc_count() as u32;
            let best = (0..n)
                .into_par_iter()
                .fold(
                    || None::<(Vec<u32>, u32)>,
                    |best, s| match self.code_from(s, &rinv, best.as_ref().map(|b| b.0.as_slice()))
                    {
                        Some((code, _)) if best.as_ref().is_none_or(|b| code < b.0) => {
                            Some((code, s))
                        }
                        _ => best,
                    },
                )
                .reduce(
                    || None,
                    |a, b| match (a, b) {
                        (Some(a), Some(b)) => Some(if (&b.0, b.1) < (&a.0, a.1) { b } else { a }),
                        (a, None) => a,
                        (None, b) => b,
                    },
                )
                .expect("at least one arc");
            (CanonicalCode(best.0), best.1)
        })
    }

    pub fn canonical_code(&self) -> &CanonicalCode {
        &self.canonical_code_with_start().0
    }

    /// An arc bijection `φ` with `φR₁ = R₂φ` and `φL₁ = L₂φ`, or `None`.
    pub fn isomorphism_to(&self, other: &OrientedMap) -> Option<Vec<u32>> {
        if self.arc_count() != other.arc_count()
            || self.vertices != other.vertices
            || self.faces != other.faces
        {
            return None;
        }
        let (c1, s1) = self.canonical_code_with_start();
        let (c2, s2) = other.canonical_code_with_start();
        if c1 != c2 {
            return None;
        }
        let (_, num1) = self.code_from(*s1, &self.r.inverse(), None)?;
        let (_, num2) = other.code_from(*s2, &other.r.inverse(), None)?;
        let mut by_num = vec![0u32; num2.len()];
        for (a, &k) in num2.iter().enumerate() {
            by_num[k as usize] = a as u32;
        }
        Some(num1.iter().map(|&k| by_num[k as usize]).collect())
    }

    pub fn is_isomorphic(&self, other: &OrientedMap) -> bool {
        self.isomorphism_to(other).is_some()
    }

    /// Same arcs with the rotation reversed.
    pub fn mirror(&self) -> OrientedMap {
        self.with_rotation(self.r.inverse())
    }

    /// Wilson's operation: every vertex rotation raised to the power `j`.
    pub fn wilson(&self, j: i64) -> Result<OrientedMap, MapError> {
        let n = self.uniform_valency().ok_or(MapError::NonUniformValency)?;
        if nt::gcd(j.rem_euclid(n as i64) as u64, n as u64) != 1 {
            return Err(MapError::NotCoprime { j, n });
        }
        Ok(self.with_rotation(self.r.pow(j.rem_euclid(n as i64))))
    }

    /// Faces and vertices swapped; labels are dropped.
    pub fn dual(&self) -> OrientedMap {
        OrientedMap::build(self.face_rotation(), self.l.clone(), None)
            .expect("dual of a valid map is valid")
    }

    pub fn reflexible(&self) -> bool {
        self.is_isomorphic(&self.mirror())
    }

    pub fn uniform_valency(&self) -> Option<usize> {
        let t = self.r.cycle_type();
        if t.len() == 1 {
            t.keys().next().copied()
        } else {
            None
        }
    }

    fn with_rotation(&self, r: Perm) -> OrientedMap {
        OrientedMap::build(r, self.l.clone(), self.labels.clone()).expect("same vertices and edges")
    }

    /// Type, genus, automorphism count and reflexibility. Fails if the map is not uniform.
    pub fn invariants(&self) -> Result<MapInvariants, MapError> {
        let map_type = self.map_type().ok_or(MapError::NonUniformValency)?;
        let (chi, genus) = self.euler_genus()?;
        Ok(MapInvariants {
            map_type,
            chi,
            genus,
            aut_order: self.is_orientably_regular().aut_order,
            reflexible: self.reflexible(),
        })
    }

    /// Neighbor multisets per labelled vertex, ascending; `None` for unlabelled maps.
    pub fn underlying_adjacency(&self) -> Option<BTreeMap<u32, Vec<u32>>> {
        let lab = self.labels.as_ref()?;
        let mut adj: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for a in 0..self.arc_count() {
            let head = lab[self.l.apply(a as u32) as usize];
            adj.entry(lab[a]).or_default().push(head);
        }
        for v in adj.values_mut() {
            v.sort_unstable();
        }
        Some(adj)
    }

    /// Exchange text: `omap N`, then `R`, `L` and optionally the labels, space separated.
    pub fn to_text(&self) -> String {
        let line = |xs: &[u32]| xs.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
        let mut s = String::new();
        let _ = writeln!(s, "omap {}", self.arc_count());
        let _ = writeln!(s, "{}", line(self.r.images()));
        let _ = writeln!(s, "{}", line(self.l.images()));
        if let Some(lab) = &self.labels {
            let _ = writeln!(s, "{}", line(lab));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<OrientedMap, MapError> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| MapError::Parse("empty input".into()))?;
        let n: usize = header
            .strip_prefix("omap ")
            .and_then(|x| x.trim().parse().ok())
            .ok_or_else(|| MapError::Parse(format!("bad header {header:?}")))?;
        let mut row = |what: &str| -> Result<Option<Vec<u32>>, MapError> {
            let Some(line) = lines.next() else {
                return Ok(None);
            };
            let xs: Vec<u32> = line
                .split_whitespace()
                .map(|t| {
                    t.parse()
                        .map_err(|_| MapError::Parse(format!("bad number {t:?} in {what}")))
                })
                .collect::<Result<_, _>>()?;
            if xs.len() != n {
                return Err(MapError::Parse(format!(
                    "{what} has {} entries, expected {n}",
                    xs.len()
                )));
            }
            Ok(Some(xs))
        };
        let r = row("rotation")?.ok_or_else(|| MapError::Parse("missing rotation".into()))?;
        let l = row("reversal")?.ok_or_else(|| MapError::Parse("missing reversal".into()))?;
        let labels = row("labels")?;
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(MapError::Parse("trailing content".into()));
        }
        OrientedMap::build(Perm::new(r)?, Perm::new(l)?, labels)
    }
}

fn connected(r: &Perm, l: &Perm) -> bool {
    let n = r.degree();
    let mut seen = vec![false; n];
    let mut stack = vec![0u32];
    seen[0] = true;
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for y in [r.apply(x), l.apply(x)] {
            if !seen[y as usize] {
                seen[y as usize] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count == n
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Planar `k`-cycle: arcs `2i` leave vertex `i` forwards, `2i+1` leave it backwards.
    pub(crate) fn cycle_map(k: u32) -> OrientedMap {
        let n = 2 * k;
        let r: Vec<u32> = (0..n).map(|a| a ^ 1).collect();
        let l: Vec<u32> = (0..k)
            .flat_map(|i| [2 * ((i + 1) % k) + 1, 2 * ((i + k - 1) % k)])
            .collect();
        let labels = (0..n).map(|a| a / 2).collect();
        OrientedMap::build(Perm::new(r).unwrap(), Perm::new(l).unwrap(), Some(labels)).unwrap()
    }

    #[test]
    fn four_cycle_on_sphere() {
        let m = cycle_map(4);
        assert_eq!(
            (m.vertex_count(), m.edge_count(), m.face_count()),
            (4, 4, 2)
        );
        assert_eq!(m.map_type(), Some(MapType { m: 4, n: 2, l: 4 }));
        assert_eq!(m.euler_genus().unwrap(), (2, 0));
    }

    #[test]
    fn triangle_and_single_edge() {
        let t = cycle_map(3);
        assert_eq!(
            (t.vertex_count(), t.edge_count(), t.face_count()),
            (3, 3, 2)
        );
        let e = OrientedMap::build(
            Perm::identity(2),
            Perm::new(vec![1, 0]).unwrap(),
            Some(vec![0, 1]),
        )
        .unwrap();
        assert_eq!(
            (e.vertex_count(), e.edge_count(), e.face_count()),
            (2, 1, 1)
        );
        assert_eq!(e.genus().unwrap(), 0);
        assert!(e.is_orientably_regular().regular);
    }

    #[test]
    fn build_errors() {
        let id = Perm::identity(4);
        assert_eq!(
            OrientedMap::build(id.clone(), id.clone(), None).unwrap_err(),
            MapError::FixedArc(0)
        );
        let l = Perm::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap();
        assert_eq!(
            OrientedMap::build(id.clone(), l, None).unwrap_err(),
            MapError::NotInvolution
        );
        let l = Perm::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap();
        assert_eq!(
            OrientedMap::build(id.clone(), l.clone(), None).unwrap_err(),
            MapError::Disconnected
        );
        assert_eq!(
            OrientedMap::build(Perm::identity(2), l, None).unwrap_err(),
            MapError::DegreeMismatch(2, 4)
        );
        let r = Perm::from_cycles(4, &[&[1, 2]]).unwrap();
        let l = Perm::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap();
        assert_eq!(
            OrientedMap::build(r, l, Some(vec![0, 1, 2, 2])).unwrap_err(),
            MapError::BadLabels
        );
    }

    #[test]
    fn self_isomorphism_and_trivial_non_isomorphism() {
        let m = cycle_map(5);
        let phi = m.isomorphism_to(&m).unwrap();
        assert!(check_iso(&m, &m, &phi));
        assert!(!cycle_map(4).is_isomorphic(&cycle_map(5)));
    }

    #[test]
    fn wilson_and_mirror_basics() {
        let m = cycle_map(6);
        assert_eq!(m.wilson(1).unwrap().to_text(), m.to_text());
        assert!(m.mirror().mirror().is_isomorphic(&m));
        assert!(m.wilson(-1).unwrap().is_isomorphic(&m.mirror()));
        let bad = OrientedMap::build(
            Perm::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap(),
            Perm::from_cycles(4, &[&[0, 2], &[1, 3]]).unwrap(),
            None,
        )
        .unwrap();
        assert_eq!(
            bad.wilson(2).unwrap_err(),
            MapError::NotCoprime { j: 2, n: 4 }
        );
        assert!(bad.wilson(3).is_ok());
    }

    #[test]
    fn text_round_trip_exact() {
        let m = cycle_map(4);
        let text = m.to_text();
        assert_eq!(text.lines().next(), Some("omap 8"));
        assert_eq!(OrientedMap::from_text(&text).unwrap().to_text(), text);
        let unlabelled = "omap 2\n0 1\n1 0\n";
        assert_eq!(
            OrientedMap::from_text(unlabelled).unwrap().to_text(),
            unlabelled
        );
        assert!(OrientedMap::from_text("omap 3\n0 1 2\n").is_err());
        assert!(OrientedMap::from_text("map 2\n0 1\n1 0\n").is_err());
        assert!(OrientedMap::from_text("omap 2\n0 1\n1 0\n0 1\nextra\n").is_err());
    }

    pub(crate) fn check_iso(a: &OrientedMap, b: &OrientedMap, phi: &[u32]) -> bool {
        let mut seen = vec![false; phi.len()];
        for (x, &y) in phi.iter().enumerate() {
            if std::mem::replace(&mut seen[y as usize], true) {
                return false;
            }
            let x = x as u32;
            if phi[a.r.apply(x) as usize] != b.r.apply(y)
                || phi[a.l.apply(x) as usize] != b.l.apply(y)
            {
                return false;
            }
        }
        true
    }

    /// A random connected map on `2e` arcs: random rotation, random perfect matching.
    fn random_map() -> impl Strategy<Value = OrientedMap> {
        (2usize..9)
            .prop_flat_map(|e| {
                let n = 2 * e;
                (
                    Just((0..n as u32).collect::<Vec<_>>()).prop_shuffle(),
                    Just((0..n as u32).collect::<Vec<_>>()).prop_shuffle(),
                )
            })
            .prop_filter_map("connected", |(r, pairing)| {
                let mut l = vec![0u32; r.len()];
                for c in pairing.chunks(2) {
                    l[c[0] as usize] = c[1];
                    l[c[1] as usize] = c[0];
                }
                OrientedMap::build(Perm::new(r).unwrap(), Perm::new(l).unwrap(), None).ok()
            })
    }

    fn relabel(m: &OrientedMap, sigma: &Perm) -> OrientedMap {
        let conj = |p: &Perm| {
            sigma
                .compose_unchecked(p)
                .compose_unchecked(&sigma.inverse())
        };
        OrientedMap::build(conj(&m.r), conj(&m.l), None).unwrap()
    }

    proptest! {
        #[test]
        fn orbits_partition_and_chi_even(m in random_map()) {
            let n = m.arc_count();
            for orbits in [m.vertex_orbits(), m.face_orbits(), m.l.cycles()] {
                let mut all: Vec<u32> = orbits.into_iter().flatten().collect();
                all.sort_unstable();
                prop_assert_eq!(all, (0..n as u32).collect::<Vec<_>>());
            }
            prop_assert!(m.euler_genus().is_ok());
            let reg = m.is_orientably_regular();
            prop_assert_eq!(n % reg.aut_order, 0);
            prop_assert_eq!(reg.regular, reg.aut_order == n);
        }

        #[test]
        fn canonical_code_is_relabelling_invariant(m in random_map(), seed in any::<u64>()) {
            let n = m.arc_count() as u32;
            let mut images: Vec<u32> = (0..n).collect();
            // deterministic shuffle from the seed
            let mut s = seed;
            for i in (1..images.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                images.swap(i, (s >> 33) as usize % (i + 1));
            }
            let sigma = Perm::new(images).unwrap();
            let m2 = relabel(&m, &sigma);
            prop_assert_eq!(m.canonical_code(), m2.canonical_code());
            let phi = m.isomorphism_to(&m2).unwrap();
            prop_assert!(check_iso(&m, &m2, &phi));
        }

        #[test]
        fn code_equality_iff_transport(a in random_map(), b in random_map()) {
            let by_code = a.canonical_code() == b.canonical_code();
            let by_transport = a.arc_count() == b.arc_count()
                && (0..b.arc_count() as u32).any(|t| a.transport_to(&b, 0, t).is_some());
            prop_assert_eq!(by_code, by_transport);
        }

        #[test]
        fn wilson_composes(m in random_map(), j in 1i64..30, k in 1i64..30) {
            if let Some(n) = m.uniform_valency() {
                let n = n as i64;
                if nt::gcd(j as u64 % n as u64, n as u64) == 1 && nt::gcd(k as u64 % n as u64, n as u64) == 1 {
                    let twice = m.wilson(j).unwrap().wilson(k).unwrap();
                    prop_assert_eq!(twice.to_text(), m.wilson(j * k % n).unwrap().to_text());
                }
            }
        }

        #[test]
        fn mirror_is_involutive(m in random_map()) {
            prop_assert_eq!(m.mirror().mirror().to_text(), m.to_text());
            prop_assert_eq!(m.dual().dual().face_count(), m.face_count());
        }
    }
}
