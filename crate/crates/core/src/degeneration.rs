//! Degeneration witnesses: the one-parameter family `η(t)`, its explicit
//! four-factor decomposition, the embedding into `n × n`, and chains of
//! single-unit transfers between dominant exponent vectors.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::matrix::WittMat;
use crate::snf::{divisor_type, Cochar};
use crate::strata::dominance_leq;
use crate::witt::{WittElem, WittRing};

fn check_params(ring: &WittRing, r1: usize, rj: usize, b: usize, t: &FieldElem) -> Result<()> {
    if t.is_zero() {
        return Err(Error::Domain("t must be nonzero".into()));
    }
    if t.coeffs().len() != ring.m() {
        return Err(Error::RingMismatch);
    }
    if b > rj {
        return Err(Error::Domain(format!("b = {b} exceeds r_j = {rj}")));
    }
    if r1 + b < rj {
        return Err(Error::Domain(format!("r_1 + b = {} is below r_j = {rj}", r1 + b)));
    }
    Ok(())
}

/// `diag(p^{e_1}, …, p^{e_n})` plus the entry `p^{e_j − b} ξ(t)` at `(j, i)`, `i < j`.
pub fn eta_t(ring: &WittRing, exponents: &[usize], i: usize, j: usize, b: usize, t: &FieldElem) -> Result<WittMat> {
    let n = exponents.len();
    if i >= j || j >= n {
        return Err(Error::IndexOutOfRange(format!("slots ({i}, {j}) for n = {n}")));
    }
    check_params(ring, exponents[i], exponents[j], b, t)?;
    let mut a = WittMat::p_power_diagonal(ring, exponents);
    a.set(j, i, &ring.p_pow(exponents[j] - b) * &ring.teichmuller(t));
    Ok(a)
}

pub fn eta_t_2x2(ring: &WittRing, r1: usize, rj: usize, b: usize, t: &FieldElem) -> Result<WittMat> {
    eta_t(ring, &[r1, rj], 0, 1, b, t)
}

/// `η(t) = F_1 F_2 F_3 F_4` with `F_2 = diag(p^{r_1+b}, p^{r_j−b})` and the
/// other factors unipotent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacWitness {
    pub r1: usize,
    pub rj: usize,
    pub b: usize,
    pub t: FieldElem,
    pub factors: [WittMat; 4],
    pub target: WittMat,
}

fn mat2(ring: &WittRing, a: WittElem, b: WittElem, c: WittElem, d: WittElem) -> WittMat {
    WittMat::from_entries(ring, 2, vec![a, b, c, d]).expect("four entries")
}

pub fn fac_witness(ring: &WittRing, r1: usize, rj: usize, b: usize, t: &FieldElem) -> Result<FacWitness> {
    check_params(ring, r1, rj, b, t)?;
    let xi = ring.teichmuller(t);
    let xi_inv = xi.inv()?;
    let u = &(&ring.p_pow(b) - &ring.one()) * &xi_inv;
    let (zero, one) = (ring.zero(), ring.one());
    let f1 = mat2(ring, one.clone(), -(&ring.p_pow(r1 + b - rj) * &u), zero.clone(), one.clone());
    let f2 = WittMat::p_power_diagonal(ring, &[r1 + b, rj - b]);
    let f3 = mat2(ring, one.clone(), zero.clone(), xi, one.clone());
    let f4 = mat2(ring, one.clone(), u, zero, one);
    let target = eta_t_2x2(ring, r1, rj, b, t)?;
    let product = &(&(&f1 * &f2) * &f3) * &f4;
    if product != target {
        return Err(Error::WitnessMismatch(format!("four-factor product {product:?} differs from η(t) {target:?}")));
    }
    Ok(FacWitness { r1, rj, b, t: t.clone(), factors: [f1, f2, f3, f4], target })
}

impl FacWitness {
    pub fn ring(&self) -> &WittRing {
        self.target.ring()
    }

    pub fn eta_prime(&self) -> &WittMat {
        &self.factors[1]
    }

    pub fn x(&self) -> &WittMat {
        &self.factors[0]
    }

    /// `y^{-1} = F_3 F_4`.
    pub fn y_inv(&self) -> WittMat {
        &self.factors[2] * &self.factors[3]
    }

    /// `y = F_4^{-1} F_3^{-1}`.
    pub fn y(&self) -> WittMat {
        let f3 = &self.factors[2];
        let f4 = &self.factors[3];
        let ring = self.ring();
        let f4_inv = mat2(ring, ring.one(), -f4.get(0, 1), ring.zero(), ring.one());
        let f3_inv = mat2(ring, ring.one(), ring.zero(), -f3.get(1, 0), ring.one());
        &f4_inv * &f3_inv
    }
}

/// `x · η′ · y^{-1} = η(t)` at size `n × n`, the 2 × 2 blocks sitting in
/// rows and columns `{i, j}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddedWitness {
    pub slots: (usize, usize),
    /// Diagonal exponents of `η`, the `t → 0` limit of `η(t)`.
    pub ambient: Vec<usize>,
    pub fac: FacWitness,
    pub x: WittMat,
    pub eta_prime: WittMat,
    pub y: WittMat,
    pub target: WittMat,
}

fn embed_block(block: &WittMat, n: usize, i: usize, j: usize) -> WittMat {
    let ring = block.ring();
    let mut out = WittMat::identity(ring, n);
    for (bi, gi) in [(0, i), (1, j)] {
        for (bj, gj) in [(0, i), (1, j)] {
            out.set(gi, gj, block.get(bi, bj).clone());
        }
    }
    out
}

/// Embeds the witness for the pair `(ambient[0], ambient[j])`.
pub fn embed_witness(ring: &WittRing, ambient: &[usize], j: usize, b: usize, t: &FieldElem) -> Result<EmbeddedWitness> {
    embed_witness_at(ring, ambient, 0, j, b, t)
}

pub fn embed_witness_at(
    ring: &WittRing,
    ambient: &[usize],
    i: usize,
    j: usize,
    b: usize,
    t: &FieldElem,
) -> Result<EmbeddedWitness> {
    let n = ambient.len();
    if i >= j || j >= n {
        return Err(Error::IndexOutOfRange(format!("slots ({i}, {j}) for n = {n}")));
    }
    let fac = fac_witness(ring, ambient[i], ambient[j], b, t)?;
    let x = embed_block(fac.x(), n, i, j);
    let y = embed_block(&fac.y(), n, i, j);
    let y_inv = embed_block(&fac.y_inv(), n, i, j);
    let mut prime = ambient.to_vec();
    prime[i] += b;
    prime[j] -= b;
    let eta_prime = WittMat::p_power_diagonal(ring, &prime);
    let target = eta_t(ring, ambient, i, j, b, t)?;
    if &(&x * &eta_prime) * &y_inv != target {
        return Err(Error::WitnessMismatch(format!("embedded product differs from η(t) at slots ({i}, {j})")));
    }
    if &y * &y_inv != WittMat::identity(ring, n) {
        return Err(Error::WitnessMismatch("y is not the inverse of F_3 F_4".into()));
    }
    Ok(EmbeddedWitness { slots: (i, j), ambient: ambient.to_vec(), fac, x, eta_prime, y, target })
}

/// One transfer `upper → lower` moving a unit from slot `i` to slot `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    pub upper: Cochar,
    pub lower: Cochar,
    pub witness: EmbeddedWitness,
}

fn next_move(cur: &Cochar, floor: &Cochar) -> Option<(usize, usize, Cochar)> {
    let e = cur.exponents();
    let n = e.len();
    for i in 0..n {
        for j in (i + 1..n).rev() {
            if e[i] == 0 {
                continue;
            }
            let mut v = e.to_vec();
            v[i] -= 1;
            v[j] += 1;
            let Ok(cand) = Cochar::new(v) else { continue };
            if dominance_leq(floor, &cand).unwrap_or(false) {
                return Some((i, j, cand));
            }
        }
    }
    None
}

/// Single-unit transfers from `to` down to `from`, each certified by an
/// embedded witness: `lower` lies in the closure of the orbit of `upper`.
pub fn degeneration_chain(ring: &WittRing, from: &Cochar, to: &Cochar, t: &FieldElem) -> Result<Vec<ChainStep>> {
    if !dominance_leq(from, to)? {
        return Err(Error::Incomparable(from.exponents().to_vec(), to.exponents().to_vec()));
    }
    let mut steps = Vec::new();
    let mut cur = to.clone();
    while &cur != from {
        let (i, j, lower) = next_move(&cur, from).expect("a cover below the current vector dominates the target");
        let witness = embed_witness_at(ring, lower.exponents(), i, j, 1, t)?;
        debug_assert_eq!(witness.eta_prime, cur.matrix(ring));
        if divisor_type(&witness.target) != cur {
            return Err(Error::WitnessMismatch(format!("η(t) does not have divisor type {cur}")));
        }
        steps.push(ChainStep { upper: cur, lower: lower.clone(), witness });
        cur = lower;
    }
    Ok(steps)
}
