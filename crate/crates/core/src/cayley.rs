//! Hamming maps `H(d,ω)` as Cayley maps of `F_q^d`, their predicted invariants, and maps
//! built from a generating pair `(x, y)` of a permutation group.
//!
//! Vectors are rows: the rotation at `0` is `e1, e1·M, e1·M², …` where `M = M_ω` has ones on
//! the superdiagonal and `ω` in the bottom-left corner, so `e_i·M = e_{i+1}` and `e_d·M = ω e1`.

use thiserror::Error;

use crate::ffield::{format_poly, Field, FieldElement, FieldError};
use crate::nt;
use crate::omap::{MapError, MapType, OrientedMap};
use crate::permgroup::{close, GroupStore, Perm, PermError};

/// Largest arc count a constructed map may have.
pub const MAX_ARCS: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CayleyError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("{0} does not generate the multiplicative group")]
    NotGenerator(String),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("vector or matrix has the wrong size for dimension {0}")]
    BadShape(usize),
    #[error("the connection set is not closed under negation")]
    NotInverseClosed,
    #[error("the connection set does not generate the group")]
    NotGenerating,
    #[error("the seed is zero")]
    ZeroSeed,
    #[error("map would have {0} arcs, above the limit of {MAX_ARCS}")]
    TooLarge(u64),
    #[error("generators do not generate the given group")]
    GeneratorsDoNotGenerate,
    #[error("y must be an involution other than the identity")]
    NotInvolution,
    #[error("no involution reverses the base arc")]
    NoReverser,
    #[error("genus formula is not integral for d = {d}, q = {q}")]
    NonIntegral { d: usize, q: u64 },
    #[error("group of order {order} exceeds the scan limit {cap}")]
    ScanTooLarge { order: u64, cap: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Group(#[from] PermError),
}

/// Square matrix over a finite field, entries stored as packed field values, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    d: usize,
    entries: Vec<u32>,
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<&[u32]> = self.entries.chunks(self.d).collect();
        write!(f, "{rows:?}")
    }
}

impl Matrix {
    pub fn zero(field: &Field, d: usize) -> Matrix {
        Matrix {
            field: field.clone(),
            d,
            entries: vec![0; d * d],
        }
    }

    pub fn identity(field: &Field, d: usize) -> Matrix {
        Matrix::scalar(field, d, 1)
    }

    pub fn scalar(field: &Field, d: usize, c: u32) -> Matrix {
        let mut m = Matrix::zero(field, d);
        for i in 0..d {
            m.entries[i * d + i] = c;
        }
        m
    }

    pub fn from_rows(field: &Field, rows: &[Vec<u32>]) -> Result<Matrix, CayleyError> {
        let d = rows.len();
        if d == 0 || rows.iter().any(|r| r.len() != d) {
            return Err(CayleyError::BadShape(d));
        }
        if rows.iter().flatten().any(|&x| x >= field.order()) {
            return Err(CayleyError::BadShape(d));
        }
        Ok(Matrix {
            field: field.clone(),
            d,
            entries: rows.concat(),
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.d + j]
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.d).map(<[u32]>::to_vec).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let (d, f) = (self.d, &self.field);
        let mut out = Matrix::zero(f, d);
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..d {
                    let cell = &mut out.entries[i * d + j];
                    *cell = f.add_raw(*cell, f.mul_raw(a, other.get(k, j)));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| self.field.add_raw(a, b))
            .collect();
        Matrix {
            field: self.field.clone(),
            d: self.d,
            entries,
        }
    }

    pub fn neg(&self) -> Matrix {
        let entries = self
            .entries
            .iter()
            .map(|&a| self.field.neg_raw(a))
            .collect();
        Matrix {
            field: self.field.clone(),
            d: self.d,
            entries,
        }
    }

    /// `self^k` by repeated squaring.
    pub fn pow(&self, mut k: u64) -> Matrix {
        let mut base = self.clone();
        let mut acc = Matrix::identity(&self.field, self.d);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    /// `Some(c)` if the matrix is `c·I`.
    pub fn scalar_value(&self) -> Option<u32> {
        let c = self.get(0, 0);
        (*self == Matrix::scalar(&self.field, self.d, c)).then_some(c)
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, v: &[u32]) -> Vec<u32> {
        let f = &self.field;
        let mut out = vec![0u32; self.d];
        for (k, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = f.add_raw(*o, f.mul_raw(a, self.get(k, j)));
            }
        }
        out
    }

    /// Multiplicative order, or `None` if singular. Walks powers, so only for small groups.
    pub fn order(&self) -> Option<u64> {
        let id = Matrix::identity(&self.field, self.d);
        let limit = (self.field.order() as u64).saturating_pow(self.d as u32);
        let mut m = self.clone();
        for k in 1..=limit {
            if m == id {
                return Some(k);
            }
            m = m.mul(self);
        }
        None
    }
}

/// `F_q^d` with vectors encoded as indices `Σ v_i q^i`.
#[derive(Debug, Clone)]
pub struct VectorSpace {
    field: Field,
    d: usize,
}

impl VectorSpace {
    pub fn new(field: &Field, d: usize) -> VectorSpace {
        VectorSpace {
            field: field.clone(),
            d,
        }
    }

    pub fn size(&self) -> u64 {
        (self.field.order() as u64).pow(self.d as u32)
    }

    pub fn index(&self, v: &[u32]) -> u32 {
        let q = self.field.order();
        v.iter().rev().fold(0, |acc, &x| acc * q + x)
    }

    pub fn vector(&self, mut idx: u32) -> Vec<u32> {
        let q = self.field.order();
        (0..self.d)
            .map(|_| {
                let x = idx % q;
                idx /= q;
                x
            })
            .collect()
    }

    pub fn add(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| self.field.add_raw(x, y))
            .collect()
    }

    pub fn neg(&self, a: &[u32]) -> Vec<u32> {
        a.iter().map(|&x| self.field.neg_raw(x)).collect()
    }

    pub fn unit(&self, i: usize) -> Vec<u32> {
        let mut v = vec![0; self.d];
        v[i] = 1;
        v
    }

    /// Additive order: `p` for nonzero vectors, 1 for zero.
    pub fn additive_order(&self, v: &[u32]) -> u64 {
        if v.iter().all(|&x| x == 0) {
            1
        } else {
            self.field.characteristic() as u64
        }
    }
}

/// The monomial matrix `M_ω` together with its order `n = d(q−1)`.
#[derive(Debug, Clone)]
pub struct MonomialMatrix {
    pub omega: FieldElement,
    pub matrix: Matrix,
    pub order: u64,
}

pub fn monomial_matrix(d: usize, omega: &FieldElement) -> Result<MonomialMatrix, CayleyError> {
    if d == 0 {
        return Err(CayleyError::ZeroDimension);
    }
    if !omega.is_generator() {
        return Err(CayleyError::NotGenerator(omega.to_string()));
    }
    let field = omega.field();
    let mut matrix = Matrix::zero(field, d);
    for i in 0..d - 1 {
        matrix.entries[i * d + i + 1] = 1;
    }
    matrix.entries[(d - 1) * d] = omega.value();
    let order = d as u64 * (field.order() as u64 - 1);
    Ok(MonomialMatrix {
        omega: omega.clone(),
        matrix,
        order,
    })
}

/// `e1·M^i` for `i = 0..n`: every nonzero multiple of a basis vector, once each.
pub fn rotation_sequence(d: usize, omega: &FieldElement) -> Result<Vec<Vec<u32>>, CayleyError> {
    let mm = monomial_matrix(d, omega)?;
    let space = VectorSpace::new(omega.field(), d);
    let mut v = space.unit(0);
    let mut out = Vec::with_capacity(mm.order as usize);
    for _ in 0..mm.order {
        let next = mm.matrix.apply_row(&v);
        out.push(std::mem::replace(&mut v, next));
    }
    Ok(out)
}

/// A Cayley map for `F_q^d`: the rotation at `0` is `s, sα, sα², …`.
#[derive(Debug, Clone)]
pub struct CayleyDatum {
    pub alpha: Matrix,
    pub s: Vec<u32>,
}

impl CayleyDatum {
    pub fn hamming(d: usize, omega: &FieldElement) -> Result<CayleyDatum, CayleyError> {
        let mm = monomial_matrix(d, omega)?;
        Ok(CayleyDatum {
            s: VectorSpace::new(omega.field(), d).unit(0),
            alpha: mm.matrix,
        })
    }

    pub fn space(&self) -> VectorSpace {
        VectorSpace::new(self.alpha.field(), self.alpha.dim())
    }

    /// The connection sequence `s, sα, …` up to its first repeat.
    pub fn connection_sequence(&self) -> Result<Vec<Vec<u32>>, CayleyError> {
        if self.s.len() != self.alpha.dim() {
            return Err(CayleyError::BadShape(self.alpha.dim()));
        }
        if self.s.iter().all(|&x| x == 0) {
            return Err(CayleyError::ZeroSeed);
        }
        let mut seq = vec![self.s.clone()];
        loop {
            let next = self.alpha.apply_row(seq.last().unwrap());
            if next == self.s {
                return Ok(seq);
            }
            if seq.contains(&next) {
                // α is singular: the orbit never returns to s
                return Err(CayleyError::NotGenerating);
            }
            seq.push(next);
        }
    }
}

/// Arcs are `v·n + i`, the arc from `v` to `v + c_i`; labels are vertex indices.
pub fn cayley_map(datum: &CayleyDatum) -> Result<OrientedMap, CayleyError> {
    let seq = datum.connection_sequence()?;
    let space = datum.space();
    let n = seq.len();
    let size = space.size();
    let arcs = size * n as u64;
    if arcs > MAX_ARCS {
        return Err(CayleyError::TooLarge(arcs));
    }
    let minus_s = space.neg(&datum.s);
    let shift = seq
        .iter()
        .position(|c| *c == minus_s)
        .ok_or(CayleyError::NotInverseClosed)?;
    let size = size as u32;
    let n32 = n as u32;
    let mut r = Vec::with_capacity(arcs as usize);
    let mut l = Vec::with_capacity(arcs as usize);
    let mut labels = Vec::with_capacity(arcs as usize);
    for v in 0..size {
        let vv = space.vector(v);
        for (i, c) in seq.iter().enumerate() {
            r.push(v * n32 + ((i + 1) % n) as u32);
            let w = space.index(&space.add(&vv, c));
            l.push(w * n32 + ((i + shift) % n) as u32);
            labels.push(v);
        }
    }
    match OrientedMap::build(Perm::new(r)?, Perm::new(l)?, Some(labels)) {
        Err(MapError::Disconnected) => Err(CayleyError::NotGenerating),
        other => Ok(other?),
    }
}

pub fn hamming_map(d: usize, omega: &FieldElement) -> Result<OrientedMap, CayleyError> {
    cayley_map(&CayleyDatum::hamming(d, omega)?)
}

/// Face valency and Petrie length read off the datum without building the map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CayleyPrediction {
    /// Order of `−α`, when `−α` fixes only `0`.
    pub face_valency: Option<u64>,
    /// Twice the additive order of `sα − s`.
    pub petrie_length: u64,
}

pub fn cayley_prediction(datum: &CayleyDatum) -> CayleyPrediction {
    let space = datum.space();
    let minus = datum.alpha.neg();
    let fixes_only_zero = (1..space.size() as u32).all(|i| {
        let v = space.vector(i);
        minus.apply_row(&v) != v
    });
    let face_valency = if fixes_only_zero { minus.order() } else { None };
    let diff = space.add(&datum.alpha.apply_row(&datum.s), &space.neg(&datum.s));
    CayleyPrediction {
        face_valency,
        petrie_length: 2 * space.additive_order(&diff),
    }
}

fn field_of_order(q: u64) -> Result<Field, CayleyError> {
    match Field::of_order(q) {
        Err(FieldError::NotPrimePower(q)) => Err(CayleyError::NotPrimePower(q)),
        other => Ok(other?),
    }
}

/// `{m,n}_l` of `H(d,ω)` from the case analysis on `d` and `q`.
///
/// `l = 2p`, except for the single edge `H(1,2)` where `sα − s = 0` and `l = 2`.
pub fn predicted_type(d: usize, q: u64) -> Result<MapType, CayleyError> {
    if d == 0 {
        return Err(CayleyError::ZeroDimension);
    }
    let (p, _) = nt::prime_power(q).ok_or(CayleyError::NotPrimePower(q))?;
    let n = d * (q as usize - 1);
    let odd = d % 2 == 1;
    let m = if q == 2 {
        2 * d
    } else if q == 3 && odd {
        3 * d
    } else if odd && q > 3 && q % 4 == 3 {
        n / 2
    } else {
        n
    };
    let l = if (d, q) == (1, 2) { 2 } else { 2 * p as usize };
    Ok(MapType { m, n, l })
}

/// Genus of `H(d,ω)` from the closed formulas, one per case of [`predicted_type`].
pub fn predicted_genus(d: usize, q: u64) -> Result<u64, CayleyError> {
    predicted_type(d, q)?;
    let qd = (q as i128).pow(d as u32);
    let di = d as i128;
    let n = di * (q as i128 - 1);
    let (num, den) = if q == 2 {
        (4 + qd * (di - 3), 4)
    } else if q == 3 && d % 2 == 1 {
        (2 + qd / 3 * (3 * di - 5), 2)
    } else if d % 2 == 1 && q > 3 && q % 4 == 3 {
        (4 + qd * (n - 6), 4)
    } else {
        (4 + qd * (n - 4), 4)
    };
    if num % den != 0 || num < 0 {
        return Err(CayleyError::NonIntegral { d, q });
    }
    Ok((num / den) as u64)
}

/// `Σ_{i<n} M_ω^i`.
pub fn matrix_power_sum(d: usize, omega: &FieldElement) -> Result<Matrix, CayleyError> {
    let mm = monomial_matrix(d, omega)?;
    let mut acc = Matrix::zero(omega.field(), d);
    let mut pw = Matrix::identity(omega.field(), d);
    for _ in 0..mm.order {
        acc = acc.add(&pw);
        pw = pw.mul(&mm.matrix);
    }
    Ok(acc)
}

/// Rotation `x` about vertex `0` and the reverser `y` of the arc `(0, e1)`, as permutations of
/// vertex indices, together with the group they generate.
#[derive(Debug, Clone)]
pub struct StandardGenerators {
    pub x: Perm,
    pub y: Perm,
    pub group: GroupStore,
}

/// `x(v) = v·M`; `y(v) = v·M^k + w` with `k = n/2` for odd `q` and `k = 0` for even `q`,
/// where `w` is found by search as the unique vector with `y(0) = e1` and `y(e1) = 0`.
pub fn standard_generators(
    d: usize,
    omega: &FieldElement,
    cap: usize,
) -> Result<StandardGenerators, CayleyError> {
    let mm = monomial_matrix(d, omega)?;
    let space = VectorSpace::new(omega.field(), d);
    let size = space.size() as u32;
    let linear = |m: &Matrix| {
        Perm::new(
            (0..size)
                .map(|v| space.index(&m.apply_row(&space.vector(v))))
                .collect(),
        )
    };
    let x = linear(&mm.matrix)?;
    let k = if omega.field().order() % 2 == 1 {
        mm.order / 2
    } else {
        0
    };
    let mk = mm.matrix.pow(k);
    let e1 = space.unit(0);
    let zero = vec![0; d];
    let w = (0..size)
        .map(|i| space.vector(i))
        .find(|w| {
            space.add(&mk.apply_row(&zero), w) == e1 && space.add(&mk.apply_row(&e1), w) == zero
        })
        .ok_or(CayleyError::NoReverser)?;
    let y = Perm::new(
        (0..size)
            .map(|v| space.index(&space.add(&mk.apply_row(&space.vector(v)), &w)))
            .collect(),
    )?;
    let group = close(&[x.clone(), y.clone()], cap)?;
    Ok(StandardGenerators { x, y, group })
}

/// Map with arcs the elements of `group`, `R(g) = g·x`, `L(g) = g·y`. Vertices are labelled by
/// the index of their coset `g⟨x⟩` in order of first appearance.
pub fn map_from_generators(
    group: &GroupStore,
    x: &Perm,
    y: &Perm,
) -> Result<OrientedMap, CayleyError> {
    if y.is_identity() || !y.compose(y)?.is_identity() {
        return Err(CayleyError::NotInvolution);
    }
    if !group.contains(x) || !group.contains(y) {
        return Err(CayleyError::GeneratorsDoNotGenerate);
    }
    if close(&[x.clone(), y.clone()], group.order() + 1)?.order() != group.order() {
        return Err(CayleyError::GeneratorsDoNotGenerate);
    }
    let pos = |g: Perm| group.position(&g).expect("closed under multiplication") as u32;
    let elems = group.elements();
    let r: Vec<u32> = elems.iter().map(|g| pos(g.compose_unchecked(x))).collect();
    let l: Vec<u32> = elems.iter().map(|g| pos(g.compose_unchecked(y))).collect();
    let r = Perm::new(r)?;
    let mut labels = vec![u32::MAX; elems.len()];
    for (k, cyc) in r.cycles().iter().enumerate() {
        for &a in cyc {
            labels[a as usize] = k as u32;
        }
    }
    Ok(OrientedMap::build(r, Perm::new(l)?, Some(labels))?)
}

/// The semidirect product `V:⟨M_ω⟩`, elements `(v, k)` acting as `u ↦ u·M^k + v`.
pub struct AffineGroup {
    space: VectorSpace,
    powers: Vec<Matrix>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineElement {
    pub v: Vec<u32>,
    pub k: usize,
}

impl AffineGroup {
    pub fn new(d: usize, omega: &FieldElement) -> Result<AffineGroup, CayleyError> {
        let mm = monomial_matrix(d, omega)?;
        let mut powers = vec![Matrix::identity(omega.field(), d)];
        for _ in 1..mm.order {
            powers.push(powers.last().unwrap().mul(&mm.matrix));
        }
        Ok(AffineGroup {
            space: VectorSpace::new(omega.field(), d),
            powers,
        })
    }

    pub fn n(&self) -> usize {
        self.powers.len()
    }

    pub fn order(&self) -> u64 {
        self.space.size() * self.n() as u64
    }

    /// `b ∘ a`: apply `a`, then `b`.
    pub fn then(&self, a: &AffineElement, b: &AffineElement) -> AffineElement {
        let v = self.space.add(&self.powers[b.k].apply_row(&a.v), &b.v);
        AffineElement {
            v,
            k: (a.k + b.k) % self.n(),
        }
    }

    pub fn element_order(&self, g: &AffineElement) -> u64 {
        let mut acc = g.clone();
        let mut k = 1;
        while acc.k != 0 || acc.v.iter().any(|&x| x != 0) {
            acc = self.then(&acc, g);
            k += 1;
        }
        k
    }

    pub fn elements(&self) -> impl Iterator<Item = AffineElement> + '_ {
        (0..self.space.size() as u32).flat_map(move |i| {
            let v = self.space.vector(i);
            (0..self.n()).map(move |k| AffineElement { v: v.clone(), k })
        })
    }
}

/// Outcome of scanning every element of `V:⟨M_ω⟩` for its order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderScan {
    pub group_order: u64,
    /// Elements of order `n` are exactly those whose linear part has order `n`.
    pub order_n_rule_holds: bool,
    /// The involutions found equal the predicted set.
    pub involution_rule_holds: bool,
    pub involutions: usize,
}

/// The scalar `λ = ω^{(q−2)/2}` with `v_{i+c} = λ v_i` cutting out the fixed vectors of the
/// central involution `M^{n/2}` when `q` and `d = 2c` are even (note `λ² = ω⁻¹`).
pub fn even_involution_ratio(omega: &FieldElement) -> u32 {
    let q = omega.field().order() as i64;
    omega.pow((q - 2) / 2).expect("nonzero").value()
}

fn predicted_involution(
    space: &VectorSpace,
    omega: &FieldElement,
    n: usize,
    g: &AffineElement,
) -> bool {
    let f = omega.field();
    let zero = g.v.iter().all(|&x| x == 0);
    if f.order() % 2 == 1 {
        return g.k == n / 2;
    }
    if g.k == 0 {
        return !zero;
    }
    let d = space.d;
    if d % 2 == 1 || g.k != n / 2 {
        return false;
    }
    let c = d / 2;
    let lambda = even_involution_ratio(omega);
    (0..c).all(|i| g.v[i + c] == f.mul_raw(lambda, g.v[i]))
}

pub fn scan_orders(d: usize, omega: &FieldElement, cap: u64) -> Result<OrderScan, CayleyError> {
    let g = AffineGroup::new(d, omega)?;
    if g.order() > cap {
        return Err(CayleyError::ScanTooLarge {
            order: g.order(),
            cap,
        });
    }
    let n = g.n();
    let mut order_n_rule_holds = true;
    let mut involution_rule_holds = true;
    let mut involutions = 0;
    for x in g.elements() {
        let ord = g.element_order(&x);
        let linear_order = n / nt::gcd(x.k as u64, n as u64) as usize;
        if (ord == n as u64) != (linear_order == n) {
            order_n_rule_holds = false;
        }
        if ord == 2 {
            involutions += 1;
        }
        if (ord == 2) != predicted_involution(&g.space, omega, n, &x) {
            involution_rule_holds = false;
        }
    }
    Ok(OrderScan {
        group_order: g.order(),
        order_n_rule_holds,
        involution_rule_holds,
        involutions,
    })
}

/// JSON header written next to an exported Hamming map.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct HammingHeader {
    pub d: usize,
    pub q: u32,
    pub p: u32,
    pub e: u32,
    pub omega: String,
    pub omega_min_poly: String,
}

impl HammingHeader {
    pub fn new(d: usize, omega: &FieldElement) -> HammingHeader {
        let f = omega.field();
        HammingHeader {
            d,
            q: f.order(),
            p: f.characteristic(),
            e: f.degree(),
            omega: omega.to_string(),
            omega_min_poly: format_poly(&omega.minimal_polynomial()),
        }
    }
}

/// Generator of `F_q^*` from an optional polynomial string, defaulting to the canonical one.
pub fn resolve_omega(q: u64, given: Option<&str>) -> Result<FieldElement, CayleyError> {
    let field = field_of_order(q)?;
    let omega = match given {
        Some(s) => field.parse_element(s)?,
        None => field.default_generator(),
    };
    if !omega.is_generator() {
        return Err(CayleyError::NotGenerator(omega.to_string()));
    }
    Ok(omega)
}
