//! The truncated Witt ring `W_N(F_{p^m})`.
//!
//! Elements are stored as residues in the unramified extension
//! `(Z/p^N)[x]/(Φ)`, where `Φ` is the lift of the field modulus whose roots are
//! Teichmüller representatives, so `x` itself is the multiplicative lift of the
//! field generator and the Frobenius automorphism is `x ↦ x^p`.
//!
//! Witt digits `(a_0, …, a_{N-1})` are the standard p-typical coordinates:
//! the element equals `Σ V^i[a_i] = Σ p^i ξ(a_i)^{p^{-i}}`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{poly_mul_mod, FieldDescriptor, FieldElem, MAX_ORDER};

/// Teichmüller lifts are tabulated for residue fields up to this size.
const TEICHMULLER_TABLE_LIMIT: u64 = 1 << 10;

#[derive(Debug)]
struct RingInner {
    field: FieldDescriptor,
    len: usize,
    /// `p^N`.
    modulus: u64,
    /// Monic lift `Φ` of the field modulus, coefficients mod `p^N`, length `m + 1`.
    phi: Vec<u64>,
    /// `x^{p·k} mod Φ` for `k < m`: the Frobenius image of the power basis.
    frob_basis: Vec<Vec<u64>>,
    /// `ξ(a)` indexed by `FieldDescriptor::index(a)`, when the field is small.
    teichmuller: Option<Vec<Vec<u64>>>,
}

/// Handle to a ring descriptor `(p, m, N)`. Clones share the same tables.
#[derive(Clone)]
pub struct WittRing(Arc<RingInner>);

impl fmt::Debug for WittRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W_{}(F_{}^{})", self.len(), self.p(), self.m())
    }
}

impl PartialEq for WittRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.len == other.0.len && self.0.field == other.0.field)
    }
}

impl Eq for WittRing {}

#[inline]
fn mulmod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

fn p_adic_val(mut c: u64, p: u64, cap: usize) -> usize {
    if c == 0 {
        return cap;
    }
    let mut v = 0;
    while c.is_multiple_of(p) {
        c /= p;
        v += 1;
    }
    v.min(cap)
}

/// Arithmetic in `(Z/q)[x]/(phi)`, used both while constructing `Φ` and afterwards.
struct PolyRing<'a> {
    phi: &'a [u64],
    q: u64,
}

impl PolyRing<'_> {
    fn m(&self) -> usize {
        self.phi.len() - 1
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        if self.m() == 1 {
            return vec![mulmod(a[0], b[0], self.q)];
        }
        poly_mul_mod(a, b, self.phi, self.q)
    }

    fn pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut acc = vec![0; self.m()];
        acc[0] = 1 % self.q;
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| (x + self.q - y) % self.q).collect()
    }

    /// `a^{q_field^{N-1}}` computed as `m(N-1)` successive p-th powers.
    fn teichmuller(&self, a: &[u64], p: u64, steps: usize) -> Vec<u64> {
        (0..steps).fold(a.to_vec(), |acc, _| self.pow(&acc, p))
    }
}

/// Lifts the field modulus `f` to the monic `Φ` over `Z/p^N` whose roots are
/// the Teichmüller lifts of the roots of `f`.
fn hensel_lift_modulus(field: &FieldDescriptor, len: usize, modulus: u64) -> Vec<u64> {
    let m = field.m();
    let p = field.p();
    if m == 1 {
        return vec![0, 1];
    }
    let naive = PolyRing { phi: field.modulus(), q: modulus };
    let mut x = vec![0; m];
    x[1] = 1;
    let root = naive.teichmuller(&x, p, m * (len - 1));
    // Φ(X) = Π_k (X − root^{p^k}), a polynomial in X with coefficients in the naive ring.
    let mut prod: Vec<Vec<u64>> = vec![{
        let mut one = vec![0; m];
        one[0] = 1 % modulus;
        one
    }];
    let mut conj = root;
    for _ in 0..m {
        let neg_conj = naive.sub(&vec![0; m], &conj);
        let mut next = vec![vec![0; m]; prod.len() + 1];
        for (d, c) in prod.iter().enumerate() {
            let shifted = &mut next[d + 1];
            *shifted = c.iter().zip(shifted.iter()).map(|(&a, &b)| (a + b) % modulus).collect();
            let term = naive.mul(c, &neg_conj);
            next[d] = next[d].iter().zip(&term).map(|(&a, &b)| (a + b) % modulus).collect();
        }
        prod = next;
        conj = naive.pow(&conj, p);
    }
    prod.iter()
        .map(|c| {
            debug_assert!(c[1..].iter().all(|&v| v == 0), "Φ coefficient is not a constant");
            c[0]
        })
        .collect()
}

#[allow(clippy::len_without_is_empty)]
impl WittRing {
    pub fn new(field: FieldDescriptor, len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::UnsupportedRing("length N must be at least 1".into()));
        }
        let p = field.p();
        let mut modulus: u64 = 1;
        for _ in 0..len {
            modulus = modulus
                .checked_mul(p)
                .filter(|&q| q <= MAX_ORDER)
                .ok_or_else(|| Error::UnsupportedRing(format!("p^N = {p}^{len} is too large")))?;
        }
        let m = field.m();
        let phi = hensel_lift_modulus(&field, len, modulus);
        let ring = PolyRing { phi: &phi, q: modulus };
        let frob_basis = (0..m)
            .map(|k| {
                let mut x = vec![0; m];
                if m == 1 {
                    x[0] = 1 % modulus;
                    return x;
                }
                x[1] = 1;
                ring.pow(&x, p * k as u64)
            })
            .collect();
        let teichmuller = (field.order() <= TEICHMULLER_TABLE_LIMIT)
            .then(|| field.elements().map(|a| ring.teichmuller(a.coeffs(), p, m * (len - 1))).collect());
        Ok(WittRing(Arc::new(RingInner { field, len, modulus, phi, frob_basis, teichmuller })))
    }

    /// `W_N(F_p) ≅ Z/p^N`.
    pub fn prime(p: u64, len: usize) -> Result<Self> {
        Self::new(FieldDescriptor::prime(p)?, len)
    }

    /// `W_N(F_{p^m})` with the default field modulus.
    pub fn with_params(p: u64, m: usize, len: usize) -> Result<Self> {
        Self::new(FieldDescriptor::new(p, m)?, len)
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.0.field
    }

    pub fn p(&self) -> u64 {
        self.0.field.p()
    }

    pub fn m(&self) -> usize {
        self.0.field.m()
    }

    /// The length `N`.
    pub fn len(&self) -> usize {
        self.0.len
    }

    /// `p^N`, the characteristic of the ring.
    pub fn characteristic(&self) -> u64 {
        self.0.modulus
    }

    /// The lifted modulus `Φ`, coefficients mod `p^N`.
    pub fn lifted_modulus(&self) -> &[u64] {
        &self.0.phi
    }

    fn poly(&self) -> PolyRing<'_> {
        PolyRing { phi: &self.0.phi, q: self.0.modulus }
    }

    fn elem(&self, coeffs: Vec<u64>) -> WittElem {
        WittElem { ring: self.clone(), coeffs }
    }

    pub fn zero(&self) -> WittElem {
        self.elem(vec![0; self.m()])
    }

    pub fn one(&self) -> WittElem {
        self.from_int(1)
    }

    /// Image of an integer under `Z → W_N`.
    pub fn from_int(&self, v: i64) -> WittElem {
        let mut c = vec![0; self.m()];
        c[0] = (v as i128).rem_euclid(self.0.modulus as i128) as u64;
        self.elem(c)
    }

    /// Element with the given coordinates in the power basis of `(Z/p^N)[x]/(Φ)`.
    pub fn from_coeffs(&self, coeffs: Vec<u64>) -> Result<WittElem> {
        if coeffs.len() != self.m() {
            return Err(Error::InvalidDigits(format!("expected {} coefficients, got {}", self.m(), coeffs.len())));
        }
        let q = self.0.modulus;
        Ok(self.elem(coeffs.into_iter().map(|c| c % q).collect()))
    }

    /// `p^k`, which is zero for `k ≥ N`.
    pub fn p_pow(&self, k: usize) -> WittElem {
        if k >= self.len() {
            return self.zero();
        }
        self.from_int(self.p().pow(k as u32) as i64)
    }

    /// The multiplicative representative `ξ(a)`, with `ξ(0) = 0`.
    pub fn teichmuller(&self, a: &FieldElem) -> WittElem {
        self.elem(self.teichmuller_coeffs(a))
    }

    fn teichmuller_coeffs(&self, a: &FieldElem) -> Vec<u64> {
        if let Some(table) = &self.0.teichmuller {
            return table[self.field().index(a) as usize].clone();
        }
        self.poly().teichmuller(a.coeffs(), self.p(), self.m() * (self.len() - 1))
    }

    /// The element with standard Witt digits `digits`.
    pub fn from_digits(&self, digits: &[FieldElem]) -> Result<WittElem> {
        if digits.len() != self.len() {
            return Err(Error::InvalidDigits(format!("expected {} digits, got {}", self.len(), digits.len())));
        }
        let k = self.field();
        let mut acc = self.zero();
        for (i, a) in digits.iter().enumerate() {
            if a.coeffs().len() != self.m() || a.coeffs().iter().any(|&c| c >= self.p()) {
                return Err(Error::InvalidDigits(format!("digit {i} is not in F_{}^{}", self.p(), self.m())));
            }
            if a.is_zero() {
                continue;
            }
            let twisted = k.frobenius_pow(a, -(i as i64));
            acc = &acc + &(&self.p_pow(i) * &self.teichmuller(&twisted));
        }
        Ok(acc)
    }

    /// Element from the integer representative in `[0, p^N)`; only for `m = 1`.
    pub fn from_integer(&self, v: u64) -> Result<WittElem> {
        if self.m() != 1 {
            return Err(Error::RequiresPrimeField(self.m()));
        }
        Ok(self.from_int((v % self.0.modulus) as i64))
    }

    /// Every element of the ring, in coefficient order. Intended for small rings.
    pub fn elements(&self) -> impl Iterator<Item = WittElem> + '_ {
        let q = self.0.modulus;
        let m = self.m();
        let total = (q as u128).pow(m as u32);
        (0..total).map(move |mut idx| {
            let coeffs = (0..m)
                .map(|_| {
                    let c = (idx % q as u128) as u64;
                    idx /= q as u128;
                    c
                })
                .collect();
            self.elem(coeffs)
        })
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct WittElem {
    ring: WittRing,
    coeffs: Vec<u64>,
}

impl std::hash::Hash for WittElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for WittElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for WittElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.len() == 1 {
            write!(f, "{}", self.coeffs[0])
        } else {
            write!(f, "{:?}", self.coeffs)
        }
    }
}

impl WittElem {
    pub fn ring(&self) -> &WittRing {
        &self.ring
    }

    /// Coordinates in the power basis of `(Z/p^N)[x]/(Φ)`.
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_unit(&self) -> bool {
        self.coeffs.iter().any(|&c| c % self.ring.p() != 0)
    }

    /// Index of the first nonzero Witt digit; `N` for zero.
    pub fn valuation(&self) -> usize {
        let p = self.ring.p();
        let n = self.ring.len();
        self.coeffs.iter().map(|&c| p_adic_val(c, p, n)).min().unwrap_or(n)
    }

    /// Reduction modulo `p`, the digit `a_0`.
    pub fn residue(&self) -> FieldElem {
        let p = self.ring.p();
        self.ring
            .field()
            .from_coeffs(self.coeffs.iter().map(|&c| c % p).collect())
            .expect("residue coefficients are in range")
    }

    /// Untwisted expansion `Σ p^i ξ(t_i)`, i.e. `t_i = a_i^{p^{-i}}`.
    pub fn teichmuller_digits(&self) -> Vec<FieldElem> {
        let ring = &self.ring;
        let p = ring.p();
        let n = ring.len();
        let full = ring.characteristic();
        let mut out = Vec::with_capacity(n);
        let mut work = self.coeffs.clone();
        let mut precision = full;
        for _ in 0..n {
            let residue = ring
                .field()
                .from_coeffs(work.iter().map(|&c| c % p).collect())
                .expect("residue coefficients are in range");
            let teich = ring.teichmuller_coeffs(&residue);
            out.push(residue);
            work = work
                .iter()
                .zip(&teich)
                .map(|(&w, &t)| {
                    let diff = (w + full - t) % full % precision;
                    debug_assert_eq!(diff % p, 0);
                    diff / p
                })
                .collect();
            precision /= p;
        }
        out
    }

    /// Standard Witt digits `(a_0, …, a_{N-1})`.
    pub fn digits(&self) -> Vec<FieldElem> {
        let k = self.ring.field();
        self.teichmuller_digits().into_iter().enumerate().map(|(i, t)| k.frobenius_pow(&t, i as i64)).collect()
    }

    /// Integer representative in `[0, p^N)`; only for `m = 1`.
    pub fn to_integer(&self) -> Result<u64> {
        if self.ring.m() != 1 {
            return Err(Error::RequiresPrimeField(self.ring.m()));
        }
        Ok(self.coeffs[0])
    }

    fn check_ring(&self, other: &WittElem) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn try_add(&self, other: &WittElem) -> Result<WittElem> {
        self.check_ring(other)?;
        let q = self.ring.characteristic();
        Ok(self.with_coeffs(self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| (a + b) % q).collect()))
    }

    pub fn try_sub(&self, other: &WittElem) -> Result<WittElem> {
        self.check_ring(other)?;
        let q = self.ring.characteristic();
        Ok(self.with_coeffs(self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| (a + q - b) % q).collect()))
    }

    pub fn try_mul(&self, other: &WittElem) -> Result<WittElem> {
        self.check_ring(other)?;
        Ok(self.with_coeffs(self.ring.poly().mul(&self.coeffs, &other.coeffs)))
    }

    fn with_coeffs(&self, coeffs: Vec<u64>) -> WittElem {
        WittElem { ring: self.ring.clone(), coeffs }
    }

    pub fn pow(&self, e: u64) -> WittElem {
        self.with_coeffs(self.ring.poly().pow(&self.coeffs, e))
    }

    /// Multiplicative inverse of a unit, by Newton iteration from the residue inverse.
    pub fn inv(&self) -> Result<WittElem> {
        if !self.is_unit() {
            return Err(Error::NotAUnit);
        }
        let k = self.ring.field();
        let r = k.inv(&self.residue()).expect("unit has nonzero residue");
        let mut y = self.with_coeffs(r.coeffs().to_vec());
        let two = self.ring.from_int(2);
        let mut precision = 1;
        while precision < self.ring.len() {
            y = &y * &(&two - &(self * &y));
            precision *= 2;
        }
        debug_assert_eq!(self * &y, self.ring.one());
        Ok(y)
    }

    /// The ring automorphism lifting `a ↦ a^p`; on digits `(a_i) ↦ (a_i^p)`.
    pub fn frobenius(&self) -> WittElem {
        if self.ring.m() == 1 {
            return self.clone();
        }
        let q = self.ring.characteristic();
        let basis = &self.ring.0.frob_basis;
        let mut out = vec![0u64; self.coeffs.len()];
        for (c, image) in self.coeffs.iter().zip(basis) {
            for (o, &b) in out.iter_mut().zip(image) {
                *o = (*o + mulmod(*c, b, q)) % q;
            }
        }
        self.with_coeffs(out)
    }

    /// Inverse of [`WittElem::frobenius`].
    pub fn frobenius_inv(&self) -> WittElem {
        (1..self.ring.m()).fold(self.clone(), |acc, _| acc.frobenius())
    }

    /// Verschiebung: shifts the digits one place up, dropping the top digit.
    /// Computed as `p · F^{-1}(a)`.
    pub fn verschiebung(&self) -> WittElem {
        &self.ring.p_pow(1) * &self.frobenius_inv()
    }

    /// Some `y` with `p^k y = self`. Requires `valuation() ≥ k`.
    pub(crate) fn div_p_pow(&self, k: usize) -> WittElem {
        debug_assert!(self.valuation() >= k);
        let d = self.ring.p().pow(k.min(self.ring.len()) as u32);
        self.with_coeffs(self.coeffs.iter().map(|&c| c / d).collect())
    }

    /// Factors a nonzero element as `p^v u` with `u` a unit; returns `(v, u)`.
    pub fn split_unit(&self) -> Option<(usize, WittElem)> {
        if self.is_zero() {
            return None;
        }
        let v = self.valuation();
        Some((v, self.div_p_pow(v)))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&WittElem> for &WittElem {
            type Output = WittElem;
            /// Panics if the operands live in different rings; use the `try_` form to handle that.
            fn $method(self, rhs: &WittElem) -> WittElem {
                self.$checked(rhs).expect("ring mismatch")
            }
        }
        impl $trait<WittElem> for WittElem {
            type Output = WittElem;
            fn $method(self, rhs: WittElem) -> WittElem {
                (&self).$checked(&rhs).expect("ring mismatch")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &WittElem {
    type Output = WittElem;
    fn neg(self) -> WittElem {
        let q = self.ring.characteristic();
        self.with_coeffs(self.coeffs.iter().map(|&c| (q - c) % q).collect())
    }
}

impl Neg for WittElem {
    type Output = WittElem;
    fn neg(self) -> WittElem {
        -&self
    }
}

/// `{"p":2,"m":1,"N":3,"digits":[[1],[0],[1]]}`. `modulus` only appears for a
/// non-default residue field modulus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WittElemJson {
    pub p: u64,
    pub m: usize,
    #[serde(rename = "N")]
    pub len: usize,
    pub digits: Vec<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u64>>,
}

impl WittElemJson {
    pub fn ring(&self) -> Result<WittRing> {
        let field = match &self.modulus {
            Some(f) => FieldDescriptor::with_modulus(self.p, f.clone())?,
            None => FieldDescriptor::new(self.p, self.m)?,
        };
        if field.m() != self.m {
            return Err(Error::InvalidModulus("modulus degree differs from m".into()));
        }
        WittRing::new(field, self.len)
    }

    /// Decodes into `ring`, which must carry the same `(p, m, N)`.
    pub fn decode(&self, ring: &WittRing) -> Result<WittElem> {
        if self.p != ring.p() || self.m != ring.m() || self.len != ring.len() {
            return Err(Error::RingMismatch);
        }
        let k = ring.field();
        let digits = self.digits.iter().map(|d| k.from_coeffs(d.clone())).collect::<Result<Vec<_>>>()?;
        ring.from_digits(&digits)
    }
}

impl From<&WittElem> for WittElemJson {
    fn from(a: &WittElem) -> Self {
        let field = a.ring.field();
        WittElemJson {
            p: a.ring.p(),
            m: a.ring.m(),
            len: a.ring.len(),
            digits: a.digits().iter().map(|d| d.coeffs().to_vec()).collect(),
            modulus: (!field.is_default_modulus()).then(|| field.modulus().to_vec()),
        }
    }
}

impl Serialize for WittElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WittElemJson::from(self).serialize(s)
    }
}

impl WittElem {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("element serializes")
    }

    pub fn from_json(s: &str) -> Result<WittElem> {
        let j: WittElemJson = serde_json::from_str(s)?;
        j.decode(&j.ring()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(ring: &WittRing, v: u64) -> WittElem {
        ring.from_integer(v).unwrap()
    }

    fn digit_ints(a: &WittElem) -> Vec<u64> {
        a.digits().iter().map(|d| d.coeffs()[0]).collect()
    }

    #[test]
    fn addition_carries() {
        let r = WittRing::prime(2, 2).unwrap();
        let k = r.field();
        let one = r.from_digits(&[k.one(), k.zero()]).unwrap();
        assert_eq!(digit_ints(&(&one + &one)), vec![0, 1]);

        let r = WittRing::prime(5, 2).unwrap();
        let k = r.field();
        let a = r.from_digits(&[k.from_int(2), k.zero()]).unwrap();
        let b = r.from_digits(&[k.from_int(3), k.zero()]).unwrap();
        assert_eq!(a.to_integer().unwrap(), 7);
        assert_eq!(b.to_integer().unwrap(), 18);
        assert!((&a + &b).is_zero());
    }

    #[test]
    fn multiplication_examples() {
        let r = WittRing::prime(2, 2).unwrap();
        let p = r.p_pow(1);
        assert!((&p * &p).is_zero());

        let r = WittRing::prime(2, 3).unwrap();
        let prod = &ints(&r, 3) * &ints(&r, 5);
        assert_eq!(prod.to_integer().unwrap(), 7);
        assert_eq!(r.from_digits(&prod.digits()).unwrap(), prod);
    }

    #[test]
    fn inverse_examples() {
        let r = WittRing::prime(2, 3).unwrap();
        assert_eq!(r.one().inv().unwrap(), r.one());
        assert_eq!(ints(&r, 3).inv().unwrap().to_integer().unwrap(), 3);
        assert!(matches!(ints(&r, 2).inv(), Err(Error::NotAUnit)));
    }

    #[test]
    fn teichmuller_in_z25() {
        let r = WittRing::prime(5, 2).unwrap();
        let xi2 = r.teichmuller(&r.field().from_int(2));
        assert_eq!(xi2.to_integer().unwrap(), 7);
        assert_eq!(xi2.pow(5), xi2);
        assert_eq!(r.teichmuller(&r.field().one()), r.one());
    }

    #[test]
    fn generator_is_teichmuller() {
        let r = WittRing::with_params(2, 3, 4).unwrap();
        let x = r.teichmuller(&r.field().generator());
        assert_eq!(x.coeffs(), &[0, 1, 0]);
        // Φ(x) = 0 and Φ ≡ f mod p.
        let f = r.field().modulus();
        for (c, &fc) in r.lifted_modulus().iter().zip(f) {
            assert_eq!(c % 2, fc);
        }
    }

    #[test]
    fn valuation_examples() {
        let r = WittRing::prime(5, 3).unwrap();
        let k = r.field();
        let a = r.from_digits(&[k.zero(), k.zero(), k.from_int(3)]).unwrap();
        assert_eq!(a.valuation(), 2);
        assert_eq!(r.zero().valuation(), 3);
    }

    #[test]
    fn verschiebung_shifts_digits() {
        let r = WittRing::with_params(3, 2, 3).unwrap();
        let k = r.field();
        let digits = vec![k.from_index(5), k.from_index(7), k.from_index(2)];
        let a = r.from_digits(&digits).unwrap();
        let v = a.verschiebung();
        assert_eq!(v.digits(), vec![k.zero(), digits[0].clone(), digits[1].clone()]);
        assert!(r.zero().verschiebung().is_zero());
        assert_eq!(v.frobenius(), &r.p_pow(1) * &a);
    }

    #[test]
    fn codec_examples() {
        let r = WittRing::prime(2, 3).unwrap();
        assert_eq!(digit_ints(&ints(&r, 2)), vec![0, 1, 0]);
        assert_eq!(digit_ints(&ints(&r, 0)), vec![0, 0, 0]);
        for v in 0..8 {
            let a = ints(&r, v);
            assert_eq!(r.from_digits(&a.digits()).unwrap().to_integer().unwrap(), v);
        }
        let r2 = WittRing::with_params(2, 2, 3).unwrap();
        assert!(matches!(r2.from_integer(1), Err(Error::RequiresPrimeField(2))));
        assert!(matches!(r2.one().to_integer(), Err(Error::RequiresPrimeField(2))));
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let a = WittRing::prime(2, 3).unwrap().one();
        let b = WittRing::prime(2, 4).unwrap().one();
        assert!(matches!(a.try_add(&b), Err(Error::RingMismatch)));
        assert!(matches!(a.try_mul(&b), Err(Error::RingMismatch)));
        // Separately constructed but equal descriptors are compatible.
        let c = WittRing::prime(2, 3).unwrap().one();
        assert!(a.try_add(&c).is_ok());
    }

    #[test]
    fn json_round_trip() {
        let s = r#"{"p":2,"m":1,"N":3,"digits":[[1],[0],[1]]}"#;
        let a = WittElem::from_json(s).unwrap();
        assert_eq!(a.to_json(), s);
        let s = r#"{"p":3,"m":2,"N":2,"digits":[[1,2],[0,1]]}"#;
        assert_eq!(WittElem::from_json(s).unwrap().to_json(), s);
        let s = r#"{"p":3,"m":2,"N":2,"digits":[[1,2],[0,1]],"modulus":[2,2,1]}"#;
        assert_eq!(WittElem::from_json(s).unwrap().to_json(), s);
        assert!(WittElem::from_json(r#"{"p":2,"m":1,"N":3,"digits":[[2],[0],[1]]}"#).is_err());
        assert!(WittElem::from_json(r#"{"p":2,"m":1,"N":3,"digits":[[1],[0]]}"#).is_err());
    }
}
