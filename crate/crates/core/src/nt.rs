//! Small integer number theory used throughout the crate.

use num_integer::Integer;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Prime factorisation as `(prime, exponent)` pairs in ascending order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut k = 2u64;
    while k * k <= n {
        if n.is_multiple_of(k) {
            let mut e = 0;
            while n.is_multiple_of(k) {
                n /= k;
                e += 1;
            }
            out.push((k, e));
        }
        k += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Returns `(p, e)` with `q = p^e` when `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    match factorize(q).as_slice() {
        [(p, e)] => Some((*p, *e)),
        _ => None,
    }
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n).iter().fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Units of `Z/m`, ascending. For `m = 1` the unit group is the trivial group `{0}`.
pub fn units(m: u64) -> Vec<u64> {
    if m == 1 {
        return vec![0];
    }
    (1..m).filter(|a| a.gcd(&m) == 1).collect()
}

/// Multiplicative order of `a` modulo `m`; `a` must be a unit.
pub fn mult_order(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let a = a % m;
    let mut x = a;
    let mut k = 1;
    while x != 1 {
        x = x * a % m;
        k += 1;
    }
    k
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

pub fn factorial(n: u64) -> u128 {
    (1..=n as u128).product()
}
