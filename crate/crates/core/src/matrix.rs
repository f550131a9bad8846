//! Square matrices over `W_N(F_{p^m})` and the subgroups `G`, `P`, `P⁻`, `B`, `B⁻`.
//!
//! Indices are 0-based throughout; the `(1,1)` corner of the usual notation is
//! `get(0, 0)`.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::witt::{WittElem, WittElemJson, WittRing};

/// Which subgroup of `GL_n(W_N)` a matrix is tested against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupShape {
    /// `G = GL_n`.
    #[serde(rename = "FULL")]
    Full,
    /// Invertible with zero first column below the corner.
    #[serde(rename = "P")]
    P,
    /// Invertible with zero first row right of the corner.
    #[serde(rename = "P_MINUS")]
    PMinus,
    /// Iwahori: invertible, strictly lower entries divisible by `p`.
    #[serde(rename = "B")]
    B,
    /// Opposite Iwahori: invertible, strictly upper entries divisible by `p`.
    #[serde(rename = "B_MINUS")]
    BMinus,
}

impl GroupShape {
    pub const ALL: [GroupShape; 5] =
        [GroupShape::Full, GroupShape::P, GroupShape::PMinus, GroupShape::B, GroupShape::BMinus];

    /// Minimal valuation allowed at entry `(i, j)` for a matrix of this shape:
    /// `0` (free), `1` (divisible by `p`) or `len` (forced zero).
    pub fn entry_floor(self, i: usize, j: usize, len: usize) -> usize {
        match self {
            GroupShape::Full => 0,
            GroupShape::P if j == 0 && i > 0 => len,
            GroupShape::PMinus if i == 0 && j > 0 => len,
            GroupShape::B if i > j => 1,
            GroupShape::BMinus if i < j => 1,
            _ => 0,
        }
    }
}

impl fmt::Display for GroupShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupShape::Full => "FULL",
            GroupShape::P => "P",
            GroupShape::PMinus => "P_MINUS",
            GroupShape::B => "B",
            GroupShape::BMinus => "B_MINUS",
        })
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct WittMat {
    ring: WittRing,
    n: usize,
    /// Row-major.
    entries: Vec<WittElem>,
}

impl fmt::Debug for WittMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.n {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl WittMat {
    pub fn from_fn(ring: &WittRing, n: usize, mut f: impl FnMut(usize, usize) -> WittElem) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        WittMat { ring: ring.clone(), n, entries }
    }

    /// Row-major entries, all of which must belong to `ring`.
    pub fn from_entries(ring: &WittRing, n: usize, entries: Vec<WittElem>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch(format!("{} entries for a {n}×{n} matrix", entries.len())));
        }
        if entries.iter().any(|e| e.ring() != ring) {
            return Err(Error::RingMismatch);
        }
        Ok(WittMat { ring: ring.clone(), n, entries })
    }

    /// Row-major integer entries mapped through `Z → W_N`.
    pub fn from_ints(ring: &WittRing, n: usize, values: &[i64]) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::DimensionMismatch(format!("{} entries for a {n}×{n} matrix", values.len())));
        }
        Ok(Self::from_fn(ring, n, |i, j| ring.from_int(values[i * n + j])))
    }

    pub fn zero(ring: &WittRing, n: usize) -> Self {
        Self::from_fn(ring, n, |_, _| ring.zero())
    }

    pub fn identity(ring: &WittRing, n: usize) -> Self {
        Self::from_fn(ring, n, |i, j| if i == j { ring.one() } else { ring.zero() })
    }

    pub fn diagonal(ring: &WittRing, diag: &[WittElem]) -> Self {
        let n = diag.len();
        Self::from_fn(ring, n, |i, j| if i == j { diag[i].clone() } else { ring.zero() })
    }

    /// `diag(p^{e_1}, …, p^{e_n})`.
    pub fn p_power_diagonal(ring: &WittRing, exponents: &[usize]) -> Self {
        let n = exponents.len();
        Self::from_fn(ring, n, |i, j| if i == j { ring.p_pow(exponents[i]) } else { ring.zero() })
    }

    /// The matrix with a `1` at `(i, perm[i])`, so row `i` of `P·A` is row `perm[i]` of `A`.
    pub fn permutation(ring: &WittRing, perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &k in perm {
            if k >= n || std::mem::replace(&mut seen[k], true) {
                return Err(Error::IndexOutOfRange(format!("{perm:?} is not a permutation")));
            }
        }
        Ok(Self::from_fn(ring, n, |i, j| if perm[i] == j { ring.one() } else { ring.zero() }))
    }

    /// `I + c·e_{ij}` with `i ≠ j`; left multiplication adds `c·(row j)` to row `i`.
    pub fn elementary(ring: &WittRing, n: usize, i: usize, j: usize, c: WittElem) -> Result<Self> {
        if i >= n || j >= n {
            return Err(Error::IndexOutOfRange(format!("({i}, {j}) in a {n}×{n} matrix")));
        }
        if i == j {
            return Err(Error::Domain("elementary matrix needs i ≠ j".into()));
        }
        if c.ring() != ring {
            return Err(Error::RingMismatch);
        }
        let mut e = Self::identity(ring, n);
        e.set(i, j, c);
        Ok(e)
    }

    pub fn ring(&self) -> &WittRing {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &WittElem {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: WittElem) {
        assert!(value.ring() == &self.ring, "ring mismatch");
        self.entries[i * self.n + j] = value;
    }

    pub fn entries(&self) -> &[WittElem] {
        &self.entries
    }

    fn check_compatible(&self, other: &WittMat) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!("{}×{} vs {}×{}", self.n, self.n, other.n, other.n)));
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &WittMat) -> Result<WittMat> {
        self.check_compatible(other)?;
        let n = self.n;
        Ok(Self::from_fn(&self.ring, n, |i, j| {
            (0..n).fold(self.ring.zero(), |acc, k| &acc + &(self.get(i, k) * other.get(k, j)))
        }))
    }

    pub fn try_add(&self, other: &WittMat) -> Result<WittMat> {
        self.check_compatible(other)?;
        Ok(Self::from_fn(&self.ring, self.n, |i, j| self.get(i, j) + other.get(i, j)))
    }

    pub fn transpose(&self) -> WittMat {
        Self::from_fn(&self.ring, self.n, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, c: &WittElem) -> WittMat {
        Self::from_fn(&self.ring, self.n, |i, j| c * self.get(i, j))
    }

    /// Row `target` += `c` · row `source`.
    pub(crate) fn add_row_multiple(&mut self, target: usize, source: usize, c: &WittElem) {
        for j in 0..self.n {
            let v = self.get(target, j) + &(c * self.get(source, j));
            self.entries[target * self.n + j] = v;
        }
    }

    /// Column `target` += `c` · column `source`.
    pub(crate) fn add_col_multiple(&mut self, target: usize, source: usize, c: &WittElem) {
        for i in 0..self.n {
            let v = self.get(i, target) + &(self.get(i, source) * c);
            self.entries[i * self.n + target] = v;
        }
    }

    /// The `(n-1)×(n-1)` matrix obtained by deleting row `i` and column `j`.
    pub fn submatrix(&self, i: usize, j: usize) -> Result<WittMat> {
        if self.n == 0 || i >= self.n || j >= self.n {
            return Err(Error::IndexOutOfRange(format!("({i}, {j}) in a {}×{} matrix", self.n, self.n)));
        }
        let m = self.n - 1;
        Ok(Self::from_fn(&self.ring, m, |a, b| self.get(a + (a >= i) as usize, b + (b >= j) as usize).clone()))
    }

    /// `det` of [`WittMat::submatrix`].
    pub fn minor(&self, i: usize, j: usize) -> Result<WittElem> {
        Ok(self.submatrix(i, j)?.det())
    }

    /// Cofactor expansion for `n ≤ 4`, pivoted elimination beyond.
    pub fn det(&self) -> WittElem {
        if self.n <= 4 {
            self.det_cofactor()
        } else {
            self.det_elimination()
        }
    }

    /// Laplace expansion along the first row.
    pub fn det_cofactor(&self) -> WittElem {
        fn rec(m: &WittMat, rows: &[usize], cols: &[usize]) -> WittElem {
            if rows.is_empty() {
                return m.ring.one();
            }
            if rows.len() == 1 {
                return m.get(rows[0], cols[0]).clone();
            }
            let mut acc = m.ring.zero();
            for (k, &c) in cols.iter().enumerate() {
                let entry = m.get(rows[0], c);
                if entry.is_zero() {
                    continue;
                }
                let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let term = entry * &rec(m, &rows[1..], &rest);
                acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
        let idx: Vec<usize> = (0..self.n).collect();
        rec(self, &idx, &idx)
    }

    /// Gaussian elimination with full pivoting on a minimal-valuation entry.
    ///
    /// Every other entry of the active block then has valuation at least that of
    /// the pivot, so each row operation uses an exact quotient and preserves the
    /// determinant.
    pub fn det_elimination(&self) -> WittElem {
        let n = self.n;
        let mut a = self.clone();
        let mut det = self.ring.one();
        let mut negate = false;
        for k in 0..n {
            let mut best: Option<(usize, usize, usize)> = None;
            for i in k..n {
                for j in k..n {
                    let v = a.get(i, j).valuation();
                    if v < self.ring.len() && best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
            let Some((v, pi, pj)) = best else {
                return self.ring.zero();
            };
            if pi != k {
                a.swap_rows(pi, k);
                negate = !negate;
            }
            if pj != k {
                a.swap_cols(pj, k);
                negate = !negate;
            }
            let pivot = a.get(k, k).clone();
            let unit_inv = pivot.div_p_pow(v).inv().expect("pivot cofactor is a unit");
            for i in k + 1..n {
                let e = a.get(i, k);
                if e.is_zero() {
                    continue;
                }
                let q = &e.div_p_pow(v) * &unit_inv;
                a.add_row_multiple(i, k, &-q);
            }
            det = &det * &pivot;
        }
        if negate {
            -det
        } else {
            det
        }
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.n {
            self.entries.swap(a * self.n + j, b * self.n + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.n {
            self.entries.swap(i * self.n + a, i * self.n + b);
        }
    }

    /// Standard Witt digits `(d_0, …, d_{N-1})` of the determinant.
    pub fn det_digits(&self) -> Vec<crate::field::FieldElem> {
        self.det().digits()
    }

    /// `b(A)`, the corner entry `a_{1,1}`.
    pub fn corner_b(&self) -> Result<WittElem> {
        if self.n == 0 {
            return Err(Error::DimensionMismatch("empty matrix has no corner".into()));
        }
        Ok(self.get(0, 0).clone())
    }

    /// `c(A)`, the determinant of the complementary `(n-1)×(n-1)` block.
    pub fn corner_c(&self) -> Result<WittElem> {
        if self.n < 2 {
            return Err(Error::DimensionMismatch(format!("corner_c needs n ≥ 2, got {}", self.n)));
        }
        self.minor(0, 0)
    }

    /// The adjugate: `adj(A)_{ij} = (-1)^{i+j} det A_{j,i}`.
    pub fn adjugate(&self) -> WittMat {
        if self.n == 1 {
            return Self::identity(&self.ring, 1);
        }
        Self::from_fn(&self.ring, self.n, |i, j| {
            let minor = self.minor(j, i).expect("indices in range");
            if (i + j) % 2 == 0 {
                minor
            } else {
                -minor
            }
        })
    }

    /// Inverse of an element of `G`, as `adj(A) · det(A)^{-1}`.
    pub fn inverse(&self) -> Result<WittMat> {
        let d = self.det().inv()?;
        Ok(self.adjugate().scale(&d))
    }

    pub fn in_group(&self, shape: GroupShape) -> bool {
        let len = self.ring.len();
        for i in 0..self.n {
            for j in 0..self.n {
                if self.get(i, j).valuation() < shape.entry_floor(i, j, len) {
                    return false;
                }
            }
        }
        self.det().is_unit()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("matrix serializes")
    }

    pub fn from_json(s: &str) -> Result<WittMat> {
        let j: WittMatJson = serde_json::from_str(s)?;
        j.decode()
    }
}

impl Mul<&WittMat> for &WittMat {
    type Output = WittMat;
    /// Panics on ring or size mismatch; see [`WittMat::try_mul`].
    fn mul(self, rhs: &WittMat) -> WittMat {
        self.try_mul(rhs).expect("incompatible matrices")
    }
}

/// `{"p":…,"m":…,"N":…,"n":…,"entries":[[elem,…],…]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WittMatJson {
    pub p: u64,
    pub m: usize,
    #[serde(rename = "N")]
    pub len: usize,
    pub n: usize,
    pub entries: Vec<Vec<WittElemJson>>,
}

impl WittMatJson {
    pub fn ring(&self) -> Result<WittRing> {
        let first = self
            .entries
            .first()
            .and_then(|row| row.first())
            .ok_or_else(|| Error::DimensionMismatch("matrix has no entries".into()))?;
        let ring = first.ring()?;
        if ring.p() != self.p || ring.m() != self.m || ring.len() != self.len {
            return Err(Error::RingMismatch);
        }
        Ok(ring)
    }

    pub fn decode(&self) -> Result<WittMat> {
        if self.entries.len() != self.n || self.entries.iter().any(|row| row.len() != self.n) {
            return Err(Error::DimensionMismatch(format!("entries do not form a {0}×{0} array", self.n)));
        }
        let ring = self.ring()?;
        let entries = self
            .entries
            .iter()
            .flatten()
            .map(|e| {
                if e.modulus != self.entries[0][0].modulus {
                    return Err(Error::RingMismatch);
                }
                e.decode(&ring)
            })
            .collect::<Result<Vec<_>>>()?;
        WittMat::from_entries(&ring, self.n, entries)
    }
}

impl From<&WittMat> for WittMatJson {
    fn from(a: &WittMat) -> Self {
        WittMatJson {
            p: a.ring.p(),
            m: a.ring.m(),
            len: a.ring.len(),
            n: a.n,
            entries: (0..a.n).map(|i| (0..a.n).map(|j| WittElemJson::from(a.get(i, j))).collect()).collect(),
        }
    }
}

impl Serialize for WittMat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WittMatJson::from(self).serialize(s)
    }
}
