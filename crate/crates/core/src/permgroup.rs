//! Finite permutations and breadth-first group closure.
//!
//! A [`Perm`] of degree `N` is stored as its image sequence over `[0, N)`. Composition
//! follows function notation: `a.compose(&b)` applies `b` first, then `a`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::nt;

/// Default cap on the number of elements materialized by [`close`].
pub const DEFAULT_GROUP_CAP: usize = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("image sequence is not a permutation")]
    NotBijective,
    #[error("no generators given")]
    NoGenerators,
    #[error("group closure exceeded the cap of {cap} elements ({found} found so far)")]
    CapExceeded { cap: usize, found: usize },
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn new(images: Vec<u32>) -> Result<Perm, PermError> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let slot = seen.get_mut(i as usize).ok_or(PermError::NotBijective)?;
            if *slot {
                return Err(PermError::NotBijective);
            }
            *slot = true;
        }
        Ok(Perm { images })
    }

    /// Caller guarantees `images` is a bijection of `[0, len)`.
    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Perm {
        debug_assert!(Perm::new(images.clone()).is_ok());
        Perm { images }
    }

    pub fn identity(n: usize) -> Perm {
        Perm {
            images: (0..n as u32).collect(),
        }
    }

    /// Builds a permutation of degree `n` from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[u32]]) -> Result<Perm, PermError> {
        let mut images: Vec<u32> = (0..n as u32).collect();
        for c in cycles {
            for (i, &a) in c.iter().enumerate() {
                let slot = images.get_mut(a as usize).ok_or(PermError::NotBijective)?;
                *slot = c[(i + 1) % c.len()];
            }
        }
        Perm::new(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, i: u32) -> u32 {
        self.images[i as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Result<Perm, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Perm) -> Perm {
        Perm {
            images: other
                .images
                .iter()
                .map(|&i| self.images[i as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm { images: inv }
    }

    /// `self^k` for any integer `k`.
    pub fn pow(&self, k: i64) -> Perm {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut k = k.unsigned_abs();
        let mut acc = Perm::identity(self.degree());
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose_unchecked(&sq);
            }
            sq = sq.compose_unchecked(&sq);
            k >>= 1;
        }
        acc
    }

    /// Disjoint cycles including fixed points, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut c = Vec::new();
            let mut x = start as u32;
            while !seen[x as usize] {
                seen[x as usize] = true;
                c.push(x);
                x = self.apply(x);
            }
            out.push(c);
        }
        out
    }

    /// Cycle length -> multiplicity.
    pub fn cycle_type(&self) -> BTreeMap<usize, usize> {
        let mut t = BTreeMap::new();
        for c in self.cycles() {
            *t.entry(c.len()).or_insert(0) += 1;
        }
        t
    }

    /// lcm of the cycle lengths.
    pub fn order(&self) -> u64 {
        self.cycle_type()
            .keys()
            .fold(1, |acc, &l| nt::lcm(acc, l as u64))
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

/// A finite permutation group with its full element list.
#[derive(Clone, Debug)]
pub struct GroupStore {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
}

impl GroupStore {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    /// Elements in insertion order; the identity comes first.
    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn contains(&self, g: &Perm) -> bool {
        self.index.contains_key(g)
    }

    pub fn position(&self, g: &Perm) -> Option<usize> {
        self.index.get(g).copied()
    }

    /// Transitivity and regularity of an action of this group on `[0, domain)`.
    pub fn action_tests<F>(&self, domain: usize, action: F) -> ActionReport
    where
        F: Fn(&Perm, u32) -> u32,
    {
        action_tests(self, domain, action)
    }

    pub fn natural_action(&self) -> ActionReport {
        self.action_tests(self.degree, |g, i| g.apply(i))
    }
}

/// Breadth-first closure of `gens` under right multiplication.
///
/// Fails with [`PermError::CapExceeded`] as soon as more than `cap` elements are found.
pub fn close(gens: &[Perm], cap: usize) -> Result<GroupStore, PermError> {
    let first = gens.first().ok_or(PermError::NoGenerators)?;
    let degree = first.degree();
    if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
        return Err(PermError::DegreeMismatch(degree, g.degree()));
    }
    let id = Perm::identity(degree);
    let mut elements = vec![id.clone()];
    let mut index = HashMap::new();
    index.insert(id, 0usize);
    let mut head = 0;
    while head < elements.len() {
        for g in gens {
            let h = elements[head].compose_unchecked(g);
            if !index.contains_key(&h) {
                if elements.len() >= cap {
                    return Err(PermError::CapExceeded {
                        cap,
                        found: elements.len(),
                    });
                }
                index.insert(h.clone(), elements.len());
                elements.push(h);
            }
        }
        head += 1;
    }
    Ok(GroupStore {
        degree,
        generators: gens.to_vec(),
        elements,
        index,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ActionReport {
    pub transitive: bool,
    pub regular: bool,
    /// Order of the stabilizer of point 0.
    pub stabilizer_order: usize,
    pub orbit_of_zero: usize,
}

pub fn action_tests<F>(group: &GroupStore, domain: usize, action: F) -> ActionReport
where
    F: Fn(&Perm, u32) -> u32,
{
    if domain == 0 {
        return ActionReport {
            transitive: true,
            regular: group.order() == 0,
            stabilizer_order: 0,
            orbit_of_zero: 0,
        };
    }
    let mut hit = vec![false; domain];
    let mut stabilizer_order = 0;
    for g in group.elements() {
        let img = action(g, 0);
        hit[img as usize] = true;
        if img == 0 {
            stabilizer_order += 1;
        }
    }
    let orbit_of_zero = hit.iter().filter(|&&h| h).count();
    let transitive = orbit_of_zero == domain;
    ActionReport {
        transitive,
        regular: transitive && group.order() == domain,
        stabilizer_order,
        orbit_of_zero,
    }
}
