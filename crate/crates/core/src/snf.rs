//! Diagonalization over `W_N(k)` by elementary operations and permutations.
//!
//! Each step picks the active entry of minimal valuation (ties: smallest
//! column, then largest row), clears its column with row operations and its
//! row with column operations, and sets both aside. The resulting monomial
//! matrix is permuted to a descending diagonal and its units are absorbed into
//! the right transform.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::WittMat;
use crate::witt::WittRing;

/// A weakly decreasing exponent vector `r_1 ≥ … ≥ r_n ≥ 0`, standing for
/// `diag(p^{r_1}, …, p^{r_n})`. An exponent of `N` encodes a zero entry.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cochar {
    exponents: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct CocharJson {
    n: usize,
    exponents: Vec<usize>,
}

impl Serialize for Cochar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CocharJson { n: self.n(), exponents: self.exponents.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cochar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = CocharJson::deserialize(d)?;
        if j.n != j.exponents.len() {
            return Err(serde::de::Error::custom("n does not match the number of exponents"));
        }
        Cochar::new(j.exponents).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Cochar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.exponents.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl Cochar {
    pub fn new(exponents: Vec<usize>) -> Result<Self> {
        if exponents.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotDominant(exponents));
        }
        Ok(Cochar { exponents })
    }

    /// Sorts into descending order first.
    pub fn from_unsorted(mut exponents: Vec<usize>) -> Self {
        exponents.sort_unstable_by(|a, b| b.cmp(a));
        Cochar { exponents }
    }

    /// Parses `"2,0"` style lists.
    pub fn parse(s: &str) -> Result<Self> {
        let exps = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| Error::Domain(format!("bad exponent {t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(exps)
    }

    /// `μ_r = diag(p^{nr}, 1, …, 1)`.
    pub fn mu(n: usize, r: usize) -> Self {
        let mut e = vec![0; n];
        e[0] = n * r;
        Cochar { exponents: e }
    }

    /// `γ_i^sr = diag(p^{nr-i}, p^i, 1, …, 1)` for `0 ≤ i ≤ nr/2`.
    pub fn subregular(n: usize, r: usize, i: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("γ_i^sr needs n ≥ 2, got {n}")));
        }
        if i > n * r / 2 {
            return Err(Error::Domain(format!("i = {i} exceeds nr/2 = {}", n * r / 2)));
        }
        let mut e = vec![0; n];
        e[0] = n * r - i;
        e[1] = i;
        Ok(Cochar { exponents: e })
    }

    /// `p^r · I`.
    pub fn scalar(n: usize, r: usize) -> Self {
        Cochar { exponents: vec![r; n] }
    }

    pub fn n(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[usize] {
        &self.exponents
    }

    pub fn total(&self) -> usize {
        self.exponents.iter().sum()
    }

    /// `a = Σ_{j≥2} r_j`.
    pub fn tail_sum(&self) -> usize {
        self.exponents.iter().skip(1).sum()
    }

    /// Whether this indexes a stratum of `X_r`: entries in `[0, nr]` summing to `nr`.
    pub fn is_stratum(&self, r: usize) -> bool {
        let nr = self.n() * r;
        self.total() == nr && self.exponents.iter().all(|&e| e <= nr)
    }

    pub fn matrix(&self, ring: &WittRing) -> WittMat {
        WittMat::p_power_diagonal(ring, &self.exponents)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub divisors: Cochar,
    /// `left · A · right = diag(p^{r_1}, …, p^{r_n})`, both in `G`.
    pub left: WittMat,
    pub right: WittMat,
}

struct Pivot {
    row: usize,
    col: usize,
    valuation: usize,
}

/// Minimal valuation among active nonzero entries; ties go to the smallest
/// column, then the largest row.
fn select_pivot(work: &WittMat, row_free: &[bool], col_free: &[bool]) -> Option<Pivot> {
    let n = work.n();
    let len = work.ring().len();
    let mut best: Option<Pivot> = None;
    for col in (0..n).filter(|&c| col_free[c]) {
        for row in (0..n).filter(|&r| row_free[r]) {
            let v = work.get(row, col).valuation();
            if v >= len {
                continue;
            }
            let better = match &best {
                None => true,
                Some(b) => v < b.valuation || (v == b.valuation && col == b.col),
            };
            if better {
                best = Some(Pivot { row, col, valuation: v });
            }
        }
    }
    best
}

pub fn snf(a: &WittMat) -> SnfResult {
    let ring = a.ring().clone();
    let n = a.n();
    let len = ring.len();
    let mut work = a.clone();
    let mut left = WittMat::identity(&ring, n);
    let mut right = WittMat::identity(&ring, n);
    let mut row_free = vec![true; n];
    let mut col_free = vec![true; n];
    let mut pivots = Vec::with_capacity(n);

    for _ in 0..n {
        let best = select_pivot(&work, &row_free, &col_free);
        let Some(pivot) = best else { break };
        let unit_inv =
            work.get(pivot.row, pivot.col).div_p_pow(pivot.valuation).inv().expect("pivot cofactor is a unit");
        for row in (0..n).filter(|&r| r != pivot.row && row_free[r]) {
            let e = work.get(row, pivot.col);
            if e.is_zero() {
                continue;
            }
            let q = -(&e.div_p_pow(pivot.valuation) * &unit_inv);
            work.add_row_multiple(row, pivot.row, &q);
            left.add_row_multiple(row, pivot.row, &q);
        }
        for col in (0..n).filter(|&c| c != pivot.col && col_free[c]) {
            let e = work.get(pivot.row, col);
            if e.is_zero() {
                continue;
            }
            let q = -(&e.div_p_pow(pivot.valuation) * &unit_inv);
            work.add_col_multiple(col, pivot.col, &q);
            right.add_col_multiple(col, pivot.col, &q);
        }
        row_free[pivot.row] = false;
        col_free[pivot.col] = false;
        pivots.push(pivot);
    }
    // Whatever is left is identically zero.
    let rest_rows = (0..n).filter(|&r| row_free[r]);
    let rest_cols: Vec<usize> = (0..n).filter(|&c| col_free[c]).collect();
    for (row, &col) in rest_rows.zip(&rest_cols) {
        pivots.push(Pivot { row, col, valuation: len });
    }

    // Stable sort keeps the discovery order among equal exponents.
    pivots.sort_by_key(|x| std::cmp::Reverse(x.valuation));
    let row_perm: Vec<usize> = pivots.iter().map(|p| p.row).collect();
    let mut col_perm = vec![0; n];
    for (slot, p) in pivots.iter().enumerate() {
        col_perm[slot] = p.col;
    }
    let sigma_left = WittMat::permutation(&ring, &row_perm).expect("pivot rows form a permutation");
    // Column `slot` of `M·σ` is column `col_perm[slot]` of `M`.
    let sigma_right = WittMat::permutation(&ring, &col_perm).expect("pivot columns form a permutation").transpose();
    let units: Vec<_> = pivots
        .iter()
        .map(|p| match work.get(p.row, p.col).split_unit() {
            Some((_, u)) => u.inv().expect("split_unit returns a unit"),
            None => ring.one(),
        })
        .collect();
    let left = &sigma_left * &left;
    let right = &(&right * &sigma_right) * &WittMat::diagonal(&ring, &units);
    let divisors = Cochar { exponents: pivots.iter().map(|p| p.valuation).collect() };

    let reconstructed = &(&left * a) * &right;
    assert_eq!(reconstructed, divisors.matrix(&ring), "diagonalization does not reconstruct for {a:?}");
    SnfResult { divisors, left, right }
}

/// The elementary-divisor type, the complete invariant of `G × G` orbits.
pub fn divisor_type(a: &WittMat) -> Cochar {
    snf(a).divisors
}
