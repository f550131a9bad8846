//! The finite residue field `F_{p^m}`.
//!
//! Elements are coefficient vectors of length `m` over `Z/p`, little-endian in
//! the generator `x` of `F_p[x]/(f)` where `f` is the field modulus.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field order and ring modulus, so products fit in `u128`
/// and exponents in `u64` without further care.
pub(crate) const MAX_ORDER: u64 = 1 << 62;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElem(Vec<u64>);

impl FieldElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        write!(f, "[")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// `F_{p^m}` presented as `F_p[x]/(f)` with `f` monic irreducible of degree `m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldDescriptor {
    p: u64,
    m: usize,
    /// Monic, little-endian, length `m + 1`. For `m = 1` this is `x` and plays no role.
    modulus: Vec<u64>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[inline]
fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn checked_order(p: u64, m: usize) -> Result<u64> {
    let mut q: u64 = 1;
    for _ in 0..m {
        q = q
            .checked_mul(p)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or_else(|| Error::UnsupportedRing(format!("p^m = {p}^{m} is too large")))?;
    }
    Ok(q)
}

impl FieldDescriptor {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    /// `F_{p^m}` with the lexicographically smallest monic irreducible modulus.
    pub fn new(p: u64, m: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::InvalidModulus("degree must be at least 1".into()));
        }
        checked_order(p, m)?;
        if m == 1 {
            return Ok(FieldDescriptor { p, m, modulus: vec![0, 1] });
        }
        let modulus = smallest_irreducible(p, m);
        Ok(FieldDescriptor { p, m, modulus })
    }

    /// `F_{p^m}` with a caller-supplied monic modulus of degree `m = modulus.len() - 1`.
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if modulus.len() < 2 {
            return Err(Error::InvalidModulus("degree must be at least 1".into()));
        }
        let m = modulus.len() - 1;
        if modulus[m] != 1 {
            return Err(Error::InvalidModulus("modulus must be monic".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidModulus(format!("coefficients must lie in [0, {p})")));
        }
        checked_order(p, m)?;
        if m == 1 {
            return Ok(FieldDescriptor { p, m, modulus: vec![0, 1] });
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::InvalidModulus(format!("{modulus:?} is reducible over F_{p}")));
        }
        Ok(FieldDescriptor { p, m, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// `q = p^m`.
    pub fn order(&self) -> u64 {
        self.p.pow(self.m as u32)
    }

    pub fn is_default_modulus(&self) -> bool {
        self.m == 1 || self.modulus == smallest_irreducible(self.p, self.m)
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(vec![0; self.m])
    }

    pub fn one(&self) -> FieldElem {
        let mut c = vec![0; self.m];
        c[0] = 1;
        FieldElem(c)
    }

    /// The class of `x`. Only meaningful for `m ≥ 2`.
    pub fn generator(&self) -> FieldElem {
        if self.m == 1 {
            return self.zero();
        }
        let mut c = vec![0; self.m];
        c[1] = 1;
        FieldElem(c)
    }

    pub fn from_coeffs(&self, coeffs: Vec<u64>) -> Result<FieldElem> {
        if coeffs.len() != self.m {
            return Err(Error::InvalidDigits(format!("expected {} coefficients, got {}", self.m, coeffs.len())));
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(Error::InvalidDigits(format!("coefficient {c} not in [0, {})", self.p)));
        }
        Ok(FieldElem(coeffs))
    }

    /// Reduces an integer mod `p` into the prime subfield.
    pub fn from_int(&self, v: i64) -> FieldElem {
        let mut c = vec![0; self.m];
        c[0] = v.rem_euclid(self.p as i64) as u64;
        FieldElem(c)
    }

    /// Element whose coefficients are the base-`p` digits of `index`.
    pub fn from_index(&self, mut index: u64) -> FieldElem {
        let mut c = vec![0; self.m];
        for slot in c.iter_mut() {
            *slot = index % self.p;
            index /= self.p;
        }
        FieldElem(c)
    }

    pub fn index(&self, a: &FieldElem) -> u64 {
        a.0.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    /// All `q` elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.order()).map(move |k| self.from_index(k))
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem(a.0.iter().zip(&b.0).map(|(&x, &y)| (x + y) % self.p).collect())
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem(a.0.iter().zip(&b.0).map(|(&x, &y)| (x + self.p - y) % self.p).collect())
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        FieldElem(a.0.iter().map(|&x| (self.p - x) % self.p).collect())
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        if self.m == 1 {
            return FieldElem(vec![mulmod(a.0[0], b.0[0], self.p)]);
        }
        FieldElem(poly_mul_mod(&a.0, &b.0, &self.modulus, self.p))
    }

    pub fn pow(&self, a: &FieldElem, mut e: u64) -> FieldElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &FieldElem) -> Option<FieldElem> {
        if a.is_zero() {
            return None;
        }
        Some(self.pow(a, self.order() - 2))
    }

    /// `a ↦ a^p`.
    pub fn frobenius(&self, a: &FieldElem) -> FieldElem {
        if self.m == 1 {
            return a.clone();
        }
        self.pow(a, self.p)
    }

    /// `a ↦ a^{p^k}` for any integer `k`, negative powers via `p^{-1} = p^{m-1}` mod `m`.
    pub fn frobenius_pow(&self, a: &FieldElem, k: i64) -> FieldElem {
        let steps = k.rem_euclid(self.m as i64) as usize;
        (0..steps).fold(a.clone(), |acc, _| self.frobenius(&acc))
    }
}

/// Product of two polynomials of degree `< m` reduced modulo the monic `modulus`
/// (degree `m`), coefficients modulo `q`. Shared by the field and the Witt ring.
pub(crate) fn poly_mul_mod(a: &[u64], b: &[u64], modulus: &[u64], q: u64) -> Vec<u64> {
    let m = modulus.len() - 1;
    let mut prod = vec![0u128; 2 * m - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u128 * y as u128) % q as u128;
        }
    }
    for d in (m..2 * m - 1).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        prod[d] = 0;
        for k in 0..m {
            let sub = c * modulus[k] as u128 % q as u128;
            prod[d - m + k] = (prod[d - m + k] + q as u128 - sub) % q as u128;
        }
    }
    prod.truncate(m);
    prod.into_iter().map(|c| c as u64).collect()
}

// Plain polynomial arithmetic over F_p for the irreducibility test.

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        e >>= 1;
    }
    acc
}

fn poly_rem(mut a: Vec<u64>, b: &[u64], p: u64) -> Vec<u64> {
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let lead_inv = inv_mod_p(b[db], p);
    a = trim(a);
    while a.len() > db {
        let da = a.len() - 1;
        let c = mulmod(a[da], lead_inv, p);
        for k in 0..=db {
            let s = mulmod(c, b[k], p);
            a[da - db + k] = (a[da - db + k] + p - s) % p;
        }
        a = trim(a);
    }
    a
}

fn poly_gcd(a: Vec<u64>, b: Vec<u64>, p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a), trim(b));
    while !b.is_empty() {
        let r = poly_rem(a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// `x^{p^k} mod f`.
fn x_pow_p_pow(f: &[u64], p: u64, k: usize) -> Vec<u64> {
    let m = f.len() - 1;
    let mut cur = vec![0; m];
    cur[1] = 1;
    for _ in 0..k {
        let mut acc = vec![0; m];
        acc[0] = 1;
        let mut base = cur.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mul_mod(&acc, &base, f, p);
            }
            base = poly_mul_mod(&base, &base, f, p);
            e >>= 1;
        }
        cur = acc;
    }
    cur
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's test for a monic polynomial of degree `m ≥ 2` over `F_p`.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let m = f.len() - 1;
    let sub_x = |mut v: Vec<u64>| {
        v[1] = (v[1] + p - 1) % p;
        v
    };
    if sub_x(x_pow_p_pow(f, p, m)).iter().any(|&c| c != 0) {
        return false;
    }
    prime_divisors(m).into_iter().all(|l| {
        let h = sub_x(x_pow_p_pow(f, p, m / l));
        poly_gcd(f.to_vec(), h, p).len() == 1
    })
}

fn smallest_irreducible(p: u64, m: usize) -> Vec<u64> {
    let mut idx: u64 = 0;
    loop {
        let mut f = vec![0u64; m + 1];
        let mut t = idx;
        for c in f.iter_mut().take(m) {
            *c = t % p;
            t /= p;
        }
        f[m] = 1;
        if f[0] != 0 && is_irreducible(&f, p) {
            return f;
        }
        idx += 1;
    }
}
