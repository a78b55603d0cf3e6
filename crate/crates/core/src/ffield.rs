//! Exact arithmetic in `F_q`, `q = p^e`.
//!
//! Elements are polynomials over `F_p` reduced modulo a fixed monic irreducible of
//! degree `e`. The modulus is the lexicographically smallest such polynomial when the
//! coefficient sequences `(c0, c1, ..., c(e-1))` are compared from the constant term
//! upwards. This differs from Conway-polynomial conventions used by computer algebra
//! systems, so printed coordinates will not match those systems, but every
//! construction in this crate is invariant under field isomorphism.
//!
//! Internally an element is packed into a `u32` as `sum c_i p^i`; the packed value is
//! exposed as [`FieldElement::value`] and accepted by the `*_raw` methods, which the
//! vector-space code uses in its inner loops.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::nt;

/// Default upper bound on `q`.
pub const DEFAULT_FIELD_CAP: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {p}^{e} exceeds the size cap {cap}")]
    TooLarge { p: u64, e: u32, cap: u64 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("cannot parse field element {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("{0} does not generate the multiplicative group")]
    NotGenerator(String),
}

struct Inner {
    p: u32,
    e: u32,
    q: u32,
    /// Monic modulus, low degree first, length `e + 1`.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// A finite field `F_{p^e}`. Cheap to clone.
#[derive(Clone)]
pub struct Field {
    inner: Arc<Inner>,
}

impl Field {
    pub fn new(p: u64, e: u32) -> Result<Field, FieldError> {
        Field::with_cap(p, e, DEFAULT_FIELD_CAP)
    }

    pub fn with_cap(p: u64, e: u32, cap: u64) -> Result<Field, FieldError> {
        if !nt::is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if e == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = p.checked_pow(e).filter(|q| *q <= cap);
        let Some(q) = q else {
            return Err(FieldError::TooLarge { p, e, cap });
        };
        let (p, q) = (p as u32, q as u32);
        let modulus = smallest_irreducible(p, e);
        let mut inner = Inner {
            p,
            e,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        build_tables(&mut inner);
        Ok(Field {
            inner: Arc::new(inner),
        })
    }

    /// The field with `q` elements, if `q` is a prime power.
    pub fn of_order(q: u64) -> Result<Field, FieldError> {
        Field::of_order_with_cap(q, DEFAULT_FIELD_CAP)
    }

    pub fn of_order_with_cap(q: u64, cap: u64) -> Result<Field, FieldError> {
        let (p, e) = nt::prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Field::with_cap(p, e, cap)
    }

    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.e
    }

    pub fn order(&self) -> u32 {
        self.inner.q
    }

    /// Modulus coefficients, constant term first, including the leading 1.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn zero(&self) -> FieldElement {
        self.element_raw(0)
    }

    pub fn one(&self) -> FieldElement {
        self.element_raw(1)
    }

    /// Element with the given packed value. Panics if `value >= q`.
    pub fn element_raw(&self, value: u32) -> FieldElement {
        assert!(value < self.inner.q, "packed value {value} out of range");
        FieldElement {
            field: self.clone(),
            value,
        }
    }

    /// Element from its coefficient sequence (constant term first); entries are reduced mod p.
    pub fn element(&self, coeffs: &[u32]) -> FieldElement {
        let p = self.inner.p;
        let mut digits = vec![0u32; self.inner.e as usize];
        // reduce higher powers of t through the field itself
        let mut acc = 0u32;
        let mut t_pow = 1u32;
        let t = self.t_raw();
        for (i, &c) in coeffs.iter().enumerate() {
            if i < digits.len() {
                digits[i] = c % p;
            } else {
                acc = self.add_raw(acc, self.mul_raw(self.scalar_raw(c), t_pow));
            }
            t_pow = self.mul_raw(t_pow, t);
        }
        let low = pack(&digits, p);
        self.element_raw(self.add_raw(low, acc))
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.inner.q).map(|v| self.element_raw(v))
    }

    pub fn coeffs_raw(&self, value: u32) -> Vec<u32> {
        unpack(value, self.inner.p, self.inner.e)
    }

    fn scalar_raw(&self, c: u32) -> u32 {
        c % self.inner.p
    }

    fn t_raw(&self) -> u32 {
        if self.inner.e >= 2 {
            self.inner.p
        } else {
            (self.inner.p - self.inner.modulus[0]) % self.inner.p
        }
    }

    pub fn add_raw(&self, a: u32, b: u32) -> u32 {
        let p = self.inner.p;
        if p == 2 {
            return a ^ b;
        }
        let (mut a, mut b, mut r, mut w) = (a, b, 0, 1);
        while a > 0 || b > 0 {
            r += ((a % p + b % p) % p) * w;
            a /= p;
            b /= p;
            w *= p;
        }
        r
    }

    pub fn neg_raw(&self, a: u32) -> u32 {
        let p = self.inner.p;
        if p == 2 {
            return a;
        }
        let (mut a, mut r, mut w) = (a, 0, 1);
        while a > 0 {
            r += ((p - a % p) % p) * w;
            a /= p;
            w *= p;
        }
        r
    }

    pub fn sub_raw(&self, a: u32, b: u32) -> u32 {
        self.add_raw(a, self.neg_raw(b))
    }

    pub fn mul_raw(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.inner.q - 1;
        let s = (self.inner.log[a as usize] + self.inner.log[b as usize]) % n;
        self.inner.exp[s as usize]
    }

    pub fn inv_raw(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let n = self.inner.q - 1;
        let l = self.inner.log[a as usize];
        Some(self.inner.exp[((n - l) % n) as usize])
    }

    /// `a^k` with `k` reduced modulo `q - 1` for nonzero `a`.
    pub fn pow_raw(&self, a: u32, k: i64) -> Option<u32> {
        if a == 0 {
            return match k.cmp(&0) {
                Ordering::Less => None,
                Ordering::Equal => Some(1),
                Ordering::Greater => Some(0),
            };
        }
        let n = (self.inner.q - 1) as i64;
        let l = self.inner.log[a as usize] as i64;
        Some(self.inner.exp[(l * k.rem_euclid(n)).rem_euclid(n) as usize])
    }

    /// Multiplicative order of a nonzero packed element.
    pub fn order_raw(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let n = self.inner.q - 1;
        let l = self.inner.log[a as usize];
        Some(n / nt::gcd(l as u64, n as u64) as u32)
    }

    /// All elements of order `q - 1`, sorted by coefficient sequence.
    pub fn generators(&self) -> Vec<FieldElement> {
        let n = self.inner.q - 1;
        let mut gens: Vec<FieldElement> = (1..self.inner.q)
            .filter(|&a| self.order_raw(a) == Some(n))
            .map(|a| self.element_raw(a))
            .collect();
        gens.sort_by_key(|g| g.coeffs());
        gens
    }

    /// The canonical generator: smallest coefficient sequence among generators.
    pub fn default_generator(&self) -> FieldElement {
        self.generators()
            .into_iter()
            .next()
            .expect("F* is cyclic and nonempty")
    }

    pub fn generator_classes(&self) -> GeneratorClasses {
        let generators = self.generators();
        let mut seen = vec![false; self.inner.q as usize];
        let mut classes = Vec::new();
        for g in &generators {
            if seen[g.value as usize] {
                continue;
            }
            let mut class = Vec::new();
            let mut x = g.clone();
            while !seen[x.value as usize] {
                seen[x.value as usize] = true;
                class.push(x.clone());
                x = x.frobenius();
            }
            class.sort_by_key(|c| c.coeffs());
            classes.push(class);
        }
        GeneratorClasses {
            generators,
            classes,
        }
    }

    /// Parses `c0+c1*t+...`; also accepts `-`, implicit unit coefficients and plain integers.
    pub fn parse_element(&self, input: &str) -> Result<FieldElement, FieldError> {
        let err = |reason: &str| FieldError::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err("empty"));
        }
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for (i, ch) in s.chars().enumerate() {
            if (ch == '+' || ch == '-') && !(i > 0 && cur.ends_with('^')) {
                if i > 0 {
                    if cur.is_empty() {
                        return Err(err("dangling sign"));
                    }
                    terms.push((neg, std::mem::take(&mut cur)));
                }
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        if cur.is_empty() {
            return Err(err("dangling sign"));
        }
        terms.push((neg, cur));

        let p = self.inner.p as u64;
        let t = self.t_raw();
        let mut acc = 0u32;
        for (neg, term) in terms {
            let (coeff, power) = match term.find('t') {
                None => (term.parse::<u64>().map_err(|_| err("bad constant"))?, 0u64),
                Some(pos) => {
                    let head = term[..pos].trim_end_matches('*');
                    let coeff = if head.is_empty() {
                        1
                    } else {
                        head.parse::<u64>().map_err(|_| err("bad coefficient"))?
                    };
                    let tail = &term[pos + 1..];
                    let power = if tail.is_empty() {
                        1
                    } else {
                        tail.strip_prefix('^')
                            .and_then(|k| k.parse::<u64>().ok())
                            .ok_or_else(|| err("bad exponent"))?
                    };
                    (coeff, power)
                }
            };
            let mut c = (coeff % p) as u32;
            if neg {
                c = self.neg_raw(c);
            }
            let tp = self.pow_raw(t, power as i64).expect("nonnegative power");
            acc = self.add_raw(acc, self.mul_raw(c, tp));
        }
        Ok(self.element_raw(acc))
    }

    fn same(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.e == other.inner.e
                && self.inner.modulus == other.inner.modulus)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl Eq for Field {}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "F({}^{}; {})",
            self.inner.p,
            self.inner.e,
            format_poly(&self.inner.modulus)
        )
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An element of a [`Field`].
#[derive(Clone)]
pub struct FieldElement {
    field: Field,
    value: u32,
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Packed value `sum c_i p^i`, in `[0, q)`.
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs_raw(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn check(&self, other: &FieldElement) -> Result<(), FieldError> {
        if self.field.same(&other.field) {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch)
        }
    }

    fn with(&self, value: u32) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            value,
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(self.with(self.field.add_raw(self.value, other.value)))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(self.with(self.field.sub_raw(self.value, other.value)))
    }

    pub fn neg(&self) -> FieldElement {
        self.with(self.field.neg_raw(self.value))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(self.with(self.field.mul_raw(self.value, other.value)))
    }

    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        self.field
            .inv_raw(self.value)
            .map(|v| self.with(v))
            .ok_or(FieldError::ZeroInverse)
    }

    /// `self^k`; negative exponents require a nonzero base.
    pub fn pow(&self, k: i64) -> Result<FieldElement, FieldError> {
        self.field
            .pow_raw(self.value, k)
            .map(|v| self.with(v))
            .ok_or(FieldError::ZeroInverse)
    }

    /// Least `k >= 1` with `self^k = 1`.
    pub fn order(&self) -> Result<u32, FieldError> {
        self.field
            .order_raw(self.value)
            .ok_or(FieldError::ZeroInverse)
    }

    pub fn is_generator(&self) -> bool {
        self.field.order_raw(self.value) == Some(self.field.order() - 1)
    }

    /// Image under `t -> t^p`.
    pub fn frobenius(&self) -> FieldElement {
        self.pow(self.field.characteristic() as i64)
            .expect("positive exponent")
    }

    /// Minimal polynomial over `F_p`, constant term first, monic.
    pub fn minimal_polynomial(&self) -> Vec<u32> {
        let f = &self.field;
        let mut conj = vec![self.value];
        let mut x = self.frobenius().value;
        while x != self.value {
            conj.push(x);
            x = f
                .pow_raw(x, f.characteristic() as i64)
                .expect("positive exponent");
        }
        // expand prod (X - c) with coefficients in F_q
        let mut poly = vec![1u32];
        for c in conj {
            let mut next = vec![0u32; poly.len() + 1];
            for (i, &a) in poly.iter().enumerate() {
                next[i + 1] = f.add_raw(next[i + 1], a);
                next[i] = f.sub_raw(next[i], f.mul_raw(a, c));
            }
            poly = next;
        }
        debug_assert!(poly.iter().all(|&c| c < f.characteristic()));
        poly
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && self.field.same(&other.field)
    }
}

impl Eq for FieldElement {}

impl std::hash::Hash for FieldElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.value.hash(state);
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(&self.coeffs()))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.field)
    }
}

/// Generators of `F*` and their Frobenius orbits.
#[derive(Debug, Clone)]
pub struct GeneratorClasses {
    pub generators: Vec<FieldElement>,
    pub classes: Vec<Vec<FieldElement>>,
}

impl GeneratorClasses {
    /// Canonical representative (smallest member) of each class.
    pub fn representatives(&self) -> Vec<FieldElement> {
        self.classes.iter().map(|c| c[0].clone()).collect()
    }

    pub fn class_of(&self, x: &FieldElement) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(x))
    }
}

/// Formats a polynomial in `t`, constant term first, zero terms omitted.
pub fn format_poly(coeffs: &[u32]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => "t".to_string(),
            (1, c) => format!("{c}*t"),
            (i, 1) => format!("t^{i}"),
            (i, c) => format!("{c}*t^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

fn pack(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn unpack(mut value: u32, p: u32, e: u32) -> Vec<u32> {
    (0..e)
        .map(|_| {
            let d = value % p;
            value /= p;
            d
        })
        .collect()
}

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    a
}

/// Remainder of `a` divided by monic `b` over `F_p`.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db && !(r.len() == 1 && r[0] == 0) {
        let lead = *r.last().unwrap();
        if lead == 0 {
            r.pop();
            continue;
        }
        let shift = r.len() - 1 - db;
        for (i, &c) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - (lead * c) % p) % p;
        }
        r.pop();
    }
    trim(if r.is_empty() { vec![0] } else { r })
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    // trial division by every monic polynomial of degree 1..=deg/2
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for k in 0..count {
            let mut g: Vec<u32> = unpack(k as u32, p, d as u32);
            g.push(1);
            if poly_rem(f, &g, p) == vec![0] {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible of degree `e`, comparing `(c0, ..., c(e-1))` lexicographically.
fn smallest_irreducible(p: u32, e: u32) -> Vec<u32> {
    let count = (p as u64).pow(e);
    for k in 0..count {
        // c0 is the most significant digit of k so that k-order equals lexicographic order
        let mut coeffs: Vec<u32> = unpack(k as u32, p, e);
        coeffs.reverse();
        coeffs.push(1);
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials of every degree exist")
}

fn mul_slow(a: u32, b: u32, inner: &Inner) -> u32 {
    let (p, e) = (inner.p, inner.e);
    let da = unpack(a, p, e);
    let db = unpack(b, p, e);
    let mut prod = vec![0u32; 2 * e as usize];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let mut r = poly_rem(&prod, &inner.modulus, p);
    r.resize(e as usize, 0);
    pack(&r, p)
}

fn build_tables(inner: &mut Inner) {
    let n = inner.q - 1;
    let g = (1..inner.q)
        .find(|&g| {
            let mut x = g;
            let mut k = 1;
            while x != 1 {
                x = mul_slow(x, g, inner);
                k += 1;
            }
            k == n
        })
        .expect("F* is cyclic");
    let mut exp = vec![0u32; n as usize];
    let mut log = vec![0u32; inner.q as usize];
    let mut x = 1u32;
    for i in 0..n {
        exp[i as usize] = x;
        log[x as usize] = i;
        x = mul_slow(x, g, inner);
    }
    inner.exp = exp;
    inner.log = log;
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn prime_field_modulus() {
        let f = Field::new(3, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.to_string(), "F(3^1; t)");
    }

    #[test]
    fn f4_modulus_and_mul() {
        let f = Field::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        let w = f.element(&[0, 1]);
        assert_eq!(w.mul(&w).unwrap(), f.element(&[1, 1]));
        assert_eq!(w.order().unwrap(), 3);
    }

    #[test]
    fn f25_group_order() {
        let f = Field::new(5, 2).unwrap();
        assert_eq!(f.order(), 25);
        // t^2 + 1 splits over F_5, t^2 + t + 1 does not
        assert_eq!(f.modulus(), &[1, 1, 1]);
        for g in f.generators() {
            assert_eq!(g.order().unwrap(), 24);
        }
    }

    #[test]
    fn small_arith() {
        let f3 = Field::new(3, 1).unwrap();
        assert_eq!(f3.element(&[2]).inv().unwrap(), f3.element(&[2]));
        let f5 = Field::new(5, 1).unwrap();
        assert_eq!(f5.element(&[2]).pow(4).unwrap(), f5.one());
        assert_eq!(f5.element(&[4]).order().unwrap(), 2);
        assert_eq!(f5.zero().inv(), Err(FieldError::ZeroInverse));
        assert_eq!(f5.zero().order(), Err(FieldError::ZeroInverse));
        assert_eq!(f5.zero().pow(-1), Err(FieldError::ZeroInverse));
        assert_eq!(f5.zero().pow(0).unwrap(), f5.one());
    }

    #[test]
    fn mixed_fields_rejected() {
        let a = Field::new(5, 1).unwrap().one();
        let b = Field::new(7, 1).unwrap().one();
        assert_eq!(a.add(&b), Err(FieldError::FieldMismatch));
        assert_eq!(a.mul(&b), Err(FieldError::FieldMismatch));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Field::new(4, 1).err(), Some(FieldError::NotPrime(4)));
        assert_eq!(Field::new(5, 0).err(), Some(FieldError::ZeroDegree));
        assert!(matches!(
            Field::new(2, 17),
            Err(FieldError::TooLarge { .. })
        ));
        assert!(Field::with_cap(2, 17, 1 << 17).is_ok());
        assert_eq!(Field::of_order(6).err(), Some(FieldError::NotPrimePower(6)));
    }

    #[test]
    fn generator_classes_small() {
        let f4 = Field::new(2, 2).unwrap();
        let c = f4.generator_classes();
        assert_eq!(c.generators.len(), 2);
        assert_eq!(c.classes.len(), 1);

        let f5 = Field::new(5, 1).unwrap();
        let c = f5.generator_classes();
        let gens: Vec<u32> = c.generators.iter().map(|g| g.value()).collect();
        // exhaustive order check over F_5*
        let brute: Vec<u32> = (1..5u32)
            .filter(|&a| (1..4).all(|k| (a as u64).pow(k) % 5 != 1))
            .collect();
        assert_eq!(gens, brute);
        assert_eq!(c.classes.len(), 2);

        let f25 = Field::new(5, 2).unwrap();
        let c = f25.generator_classes();
        assert_eq!(c.generators.len(), 8);
        assert_eq!(c.classes.len(), 4);
        assert!(c.classes.iter().all(|k| k.len() == 2));
    }

    #[test]
    fn f25_minimal_polynomials_are_the_cyclotomic_factors() {
        // t^2 +- t + 2 and t^2 +- 2t - 2 over F_5
        let f = Field::new(5, 2).unwrap();
        let mut polys: Vec<Vec<u32>> = f
            .generators()
            .iter()
            .map(|g| g.minimal_polynomial())
            .collect();
        polys.sort();
        polys.dedup();
        let mut expected = vec![vec![2, 1, 1], vec![2, 4, 1], vec![3, 2, 1], vec![3, 3, 1]];
        expected.sort();
        assert_eq!(polys, expected);
    }

    #[test]
    fn frobenius_classes_have_size_e() {
        for (p, e) in [(2u64, 3u32), (2, 4), (3, 2), (3, 3), (7, 2), (2, 6)] {
            let f = Field::new(p, e).unwrap();
            let c = f.generator_classes();
            assert_eq!(
                c.generators.len() as u64,
                nt::euler_phi(f.order() as u64 - 1)
            );
            assert!(c.classes.iter().all(|k| k.len() == e as usize));
            assert_eq!(
                c.classes.len() as u64,
                nt::euler_phi(f.order() as u64 - 1) / e as u64
            );
        }
    }

    #[test]
    fn fermat_for_all_nonzero() {
        for q in [2u64, 3, 4, 8, 9, 25, 27, 49] {
            let f = Field::of_order(q).unwrap();
            for a in f.elements().filter(|a| !a.is_zero()) {
                assert_eq!(a.pow(q as i64 - 1).unwrap(), f.one());
                assert_eq!(((q - 1) as u32) % a.order().unwrap(), 0);
            }
        }
    }

    #[test]
    fn text_forms() {
        let f = Field::new(3, 2).unwrap();
        for a in f.elements() {
            assert_eq!(f.parse_element(&a.to_string()).unwrap(), a);
        }
        assert_eq!(f.parse_element("t").unwrap(), f.element(&[0, 1]));
        assert_eq!(f.parse_element("2 + 1*t").unwrap(), f.element(&[2, 1]));
        assert_eq!(f.parse_element("-t").unwrap(), f.element(&[0, 2]));
        assert_eq!(f.element(&[0, 2]).to_string(), "2*t");
        assert_eq!(f.zero().to_string(), "0");
        // t^2 reduces through the modulus
        let t = f.element(&[0, 1]);
        assert_eq!(f.parse_element("t^2").unwrap(), t.mul(&t).unwrap());
        assert!(f.parse_element("").is_err());
        assert!(f.parse_element("t^").is_err());
        assert!(f.parse_element("1++t").is_err());
        assert!(f.parse_element("x").is_err());
    }

    fn field_strategy() -> impl Strategy<Value = Field> {
        prop::sample::select(vec![
            (2u64, 1u32),
            (2, 3),
            (3, 2),
            (5, 1),
            (5, 2),
            (7, 2),
            (2, 5),
        ])
        .prop_map(|(p, e)| Field::new(p, e).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn field_axioms(f in field_strategy(), a in 0u32..u32::MAX, b in 0u32..u32::MAX, c in 0u32..u32::MAX) {
            let q = f.order();
            let (a, b, c) = (f.element_raw(a % q), f.element_raw(b % q), f.element_raw(c % q));
            prop_assert_eq!(a.mul(&b.add(&c).unwrap()).unwrap(), a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
            prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
            prop_assert_eq!(a.sub(&a).unwrap(), f.zero());
            if !a.is_zero() {
                prop_assert_eq!(a.mul(&a.inv().unwrap()).unwrap(), f.one());
            }
        }

        #[test]
        fn table_mul_matches_schoolbook(f in field_strategy(), a in 0u32..u32::MAX, b in 0u32..u32::MAX) {
            let q = f.order();
            let (a, b) = (a % q, b % q);
            prop_assert_eq!(f.mul_raw(a, b), mul_slow(a, b, &f.inner));
        }
    }
}
