//! Orbit and stabilizer dimensions: closed-form counts next to an exact
//! per-entry solution-space oracle, plus the exhaustive census at
//! `p = 2, n = 2, r = 1` over `Z/8`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::GroupShape;
use crate::snf::{divisor_type, Cochar};
use crate::witt::WittRing;

fn check_i(i: usize, n: usize, r: usize) -> Result<()> {
    if n < 2 || r < 1 {
        return Err(Error::Domain(format!("need n ≥ 2 and r ≥ 1, got n = {n}, r = {r}")));
    }
    if i > n * r / 2 {
        return Err(Error::Domain(format!("i = {i} exceeds ⌊nr/2⌋ = {}", n * r / 2)));
    }
    Ok(())
}

/// `n²(nr + 1)`.
pub fn dim_mat(n: usize, r: usize) -> usize {
    n * n * (n * r + 1)
}

/// `2 Σ_{k≥2} (1 − k) c_k` on the centered vector `c = γ − r`.
pub fn dim_lattice_orbit(gamma: &Cochar, r: usize) -> Result<usize> {
    let n = gamma.n();
    if gamma.total() != n * r || gamma.exponents()[0] > n * r {
        return Err(Error::NotDominant(gamma.exponents().to_vec()));
    }
    let sum: i64 = gamma.exponents().iter().enumerate().map(|(k, &e)| -(k as i64) * (e as i64 - r as i64)).sum();
    Ok(2 * sum as usize)
}

/// `n²(nr + 1) − (nr + 2i)`.
pub fn dim_matrix_orbit_paper(i: usize, n: usize, r: usize) -> Result<usize> {
    check_i(i, n, r)?;
    Ok(dim_mat(n, r) - (n * r + 2 * i))
}

/// `dim G + nr + 2i`.
pub fn stab_dim_paper_full(i: usize, n: usize, r: usize) -> Result<usize> {
    check_i(i, n, r)?;
    Ok(dim_mat(n, r) + n * r + 2 * i)
}

/// `(nr + 1)[(n − 1)² + 1] + nr + 2i`.
pub fn stab_dim_paper_parabolic(i: usize, n: usize, r: usize) -> Result<usize> {
    check_i(i, n, r)?;
    Ok((n * r + 1) * ((n - 1) * (n - 1) + 1) + n * r + 2 * i)
}

/// `n²(nr) + n + nr + 2i`.
pub fn stab_dim_paper_iwahori(i: usize, n: usize, r: usize) -> Result<usize> {
    check_i(i, n, r)?;
    Ok(n * n * (n * r) + n + n * r + 2 * i)
}

/// Dimension of the shape's matrix space over `W_len`, counted entrywise.
pub fn shape_dim(shape: GroupShape, n: usize, len: usize) -> usize {
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| len - shape.entry_floor(i, j, len)).sum()
}

/// Length of the solution space of `X γ = γ Y` with `X` and `Y` ranging over
/// the entrywise spaces of the two shapes in `W_len`.
///
/// Entry `(i, j)` reads `p^{s_j} X_ij = p^{s_i} Y_ij` with `X_ij ∈ p^{e}`, `Y_ij ∈ p^{f}`.
pub fn stab_dim_oracle(gamma: &Cochar, len: usize, left: GroupShape, right: GroupShape) -> usize {
    let s = gamma.exponents();
    let n = s.len();
    let mut total = 0;
    for i in 0..n {
        for j in 0..n {
            let e = left.entry_floor(i, j, len);
            let f = right.entry_floor(i, j, len);
            let image = len.min(s[j] + e).min(s[i] + f);
            total += len + image - e - f;
        }
    }
    total
}

pub fn dim_matrix_orbit_oracle_pair(gamma: &Cochar, len: usize, left: GroupShape, right: GroupShape) -> usize {
    let n = gamma.n();
    shape_dim(left, n, len) + shape_dim(right, n, len) - stab_dim_oracle(gamma, len, left, right)
}

/// `G × G` orbit dimension in `Mat_n(W_{nr+1})`.
pub fn dim_matrix_orbit_oracle(gamma: &Cochar, r: usize) -> usize {
    dim_matrix_orbit_oracle_pair(gamma, gamma.n() * r + 1, GroupShape::Full, GroupShape::Full)
}

pub fn ci_check_with_generators(i: usize, n: usize, r: usize, generators: usize) -> Result<bool> {
    check_i(i, n, r)?;
    let gamma = Cochar::subregular(n, r, i)?;
    Ok(generators == dim_mat(n, r) - dim_matrix_orbit_oracle(&gamma, r))
}

/// `nr + 2i` generators against the oracle codimension.
pub fn ci_check(i: usize, n: usize, r: usize) -> Result<bool> {
    ci_check_with_generators(i, n, r, n * r + 2 * i)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    PaperFormula,
    LinearOracle,
    PointCount,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tagged {
    pub value: usize,
    pub source: Source,
}

fn tag(value: usize, source: Source) -> Tagged {
    Tagged { value, source }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShapePairDims {
    pub left: GroupShape,
    pub right: GroupShape,
    pub stab_dim: Tagged,
    pub orbit_dim: Tagged,
    pub paper_stab_dim: Option<Tagged>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimReport {
    pub gamma: Cochar,
    pub n: usize,
    pub r: usize,
    #[serde(rename = "N")]
    pub len: usize,
    pub dim_g: usize,
    pub dim_lattice_orbit: Tagged,
    pub dim_matrix_orbit: Tagged,
    pub stab_dim: Tagged,
    pub codim_in_mat: Tagged,
    /// Set when `γ = γ_i^sr`.
    pub subregular_index: Option<usize>,
    pub dim_matrix_orbit_paper: Option<Tagged>,
    pub ci: Option<bool>,
    pub shape_pairs: Vec<ShapePairDims>,
}

const PAIRS: [(GroupShape, GroupShape); 3] =
    [(GroupShape::Full, GroupShape::Full), (GroupShape::P, GroupShape::PMinus), (GroupShape::B, GroupShape::BMinus)];

impl DimReport {
    pub fn new(gamma: &Cochar, r: usize) -> Result<Self> {
        let n = gamma.n();
        if n < 2 || r < 1 {
            return Err(Error::Domain(format!("need n ≥ 2 and r ≥ 1, got n = {n}, r = {r}")));
        }
        let len = n * r + 1;
        let lattice = dim_lattice_orbit(gamma, r)?;
        let subregular_index =
            (0..=n * r / 2).find(|&i| Cochar::subregular(n, r, i).map(|c| &c == gamma).unwrap_or(false));
        let stab = stab_dim_oracle(gamma, len, GroupShape::Full, GroupShape::Full);
        let orbit = dim_matrix_orbit_oracle(gamma, r);
        let shape_pairs = PAIRS
            .iter()
            .map(|&(left, right)| {
                let paper = subregular_index.map(|i| {
                    let v = match left {
                        GroupShape::Full => stab_dim_paper_full(i, n, r),
                        GroupShape::P => stab_dim_paper_parabolic(i, n, r),
                        _ => stab_dim_paper_iwahori(i, n, r),
                    };
                    tag(v.expect("index within range"), Source::PaperFormula)
                });
                ShapePairDims {
                    left,
                    right,
                    stab_dim: tag(stab_dim_oracle(gamma, len, left, right), Source::LinearOracle),
                    orbit_dim: tag(dim_matrix_orbit_oracle_pair(gamma, len, left, right), Source::LinearOracle),
                    paper_stab_dim: paper,
                }
            })
            .collect();
        Ok(DimReport {
            gamma: gamma.clone(),
            n,
            r,
            len,
            dim_g: dim_mat(n, r),
            dim_lattice_orbit: tag(lattice, Source::PaperFormula),
            dim_matrix_orbit: tag(orbit, Source::LinearOracle),
            stab_dim: tag(stab, Source::LinearOracle),
            codim_in_mat: tag(dim_mat(n, r) - orbit, Source::LinearOracle),
            subregular_index,
            dim_matrix_orbit_paper: subregular_index
                .map(|i| tag(dim_matrix_orbit_paper(i, n, r).expect("index within range"), Source::PaperFormula)),
            ci: subregular_index.map(|i| ci_check(i, n, r).expect("index within range")),
            shape_pairs,
        })
    }

    pub fn subregular(i: usize, n: usize, r: usize) -> Result<Self> {
        check_i(i, n, r)?;
        DimReport::new(&Cochar::subregular(n, r, i)?, r)
    }
}

/// Orbit count of one divisor type in the exhaustive census.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitCount {
    pub gamma: Cochar,
    pub matrices: u64,
    pub stab_order: u64,
    pub predicted: u64,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointCensus {
    pub p: u64,
    pub n: usize,
    pub r: usize,
    #[serde(rename = "N")]
    pub len: usize,
    pub total_matrices: u64,
    pub group_order: u64,
    pub xr_size: u64,
    /// Divisor-type histogram over all matrices, keyed by exponent vector.
    pub histogram: BTreeMap<String, u64>,
    pub orbits: Vec<OrbitCount>,
    pub partition_ok: bool,
    pub histogram_ok: bool,
    pub all_ok: bool,
}

const MOD: u32 = 8;

type M2 = [u32; 4];

fn decode(code: u32) -> M2 {
    [code % 8, (code / 8) % 8, (code / 64) % 8, code / 512]
}

fn encode(m: M2) -> u32 {
    m[0] + 8 * m[1] + 64 * m[2] + 512 * m[3]
}

fn det(m: M2) -> u32 {
    (m[0] * m[3] + MOD * MOD - m[1] * m[2]) % MOD
}

fn v2(x: u32) -> u32 {
    if x.is_multiple_of(MOD) {
        3
    } else {
        x.trailing_zeros()
    }
}

/// Divisor type of a `2 × 2` matrix over `Z/8`: `r_2` is the least entry
/// valuation, and `r_1 − r_2` the determinant valuation of `A / p^{r_2}` over
/// `Z/p^{3 − r_2}`.
fn type_by_minors(m: M2) -> (u32, u32) {
    let d1 = m.iter().map(|&x| v2(x)).min().expect("four entries");
    if d1 == 3 {
        return (3, 3);
    }
    let a = m.map(|x| x >> d1);
    let modulus = MOD >> d1;
    let det = (a[0] * a[3] + modulus * modulus - a[1] * a[2]) % modulus;
    let rest = if det == 0 { 3 - d1 } else { det.trailing_zeros() };
    (d1 + rest, d1)
}

fn gamma_codes(group: &[M2], s: [u32; 2], right: bool) -> Vec<u32> {
    let w = [1 << s[0], 1 << s[1]];
    group
        .iter()
        .map(|m| {
            let out = if right {
                [m[0] * w[0], m[1] * w[0], m[2] * w[1], m[3] * w[1]]
            } else {
                [m[0] * w[0], m[1] * w[1], m[2] * w[0], m[3] * w[1]]
            };
            encode(out.map(|x| x % MOD))
        })
        .collect()
}

fn count_stabilizer(group: &[M2], s: [u32; 2], jobs: usize) -> u64 {
    // x γ for every x, γ y for every y; a pair is in the stabilizer when they agree.
    let xg = gamma_codes(group, s, false);
    let gy = gamma_codes(group, s, true);
    let jobs = jobs.max(1);
    let chunk = xg.len().div_ceil(jobs);
    std::thread::scope(|scope| {
        let handles: Vec<_> = xg
            .chunks(chunk)
            .map(|part| {
                let gy = &gy;
                scope.spawn(move || {
                    let mut count = 0u64;
                    for &a in part {
                        for &b in gy {
                            count += u64::from(a == b);
                        }
                    }
                    count
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).sum()
    })
}

/// Exhaustive census of `Mat_2(Z/8)`: group order, stabilizer orders of the two
/// strata of `X_1` by enumeration of all pairs, and the orbit–stabilizer check.
pub fn point_count_oracle(jobs: usize) -> PointCensus {
    let ring = WittRing::prime(2, 3).expect("Z/8");
    let all: Vec<M2> = (0..4096).map(decode).collect();
    let group: Vec<M2> = all.iter().copied().filter(|&m| det(m) % 2 == 1).collect();
    let group_order = group.len() as u64;

    let mut histogram = BTreeMap::new();
    let mut by_minors: BTreeMap<String, u64> = BTreeMap::new();
    let mut xr_size = 0;
    for &m in &all {
        let vals: Vec<i64> = m.iter().map(|&x| x as i64).collect();
        let a = crate::matrix::WittMat::from_ints(&ring, 2, &vals).expect("four entries");
        let gamma = divisor_type(&a);
        *histogram.entry(gamma.to_string()).or_insert(0u64) += 1;
        let (r1, r2) = type_by_minors(m);
        *by_minors.entry(format!("({r1},{r2})")).or_insert(0) += 1;
        let d2 = v2(det(m));
        if d2 == 2 {
            xr_size += 1;
        }
    }
    let histogram_ok = histogram == by_minors;

    let orbits: Vec<OrbitCount> = [[2u32, 0u32], [1, 1]]
        .iter()
        .map(|&s| {
            let gamma = Cochar::new(s.iter().map(|&x| x as usize).collect()).expect("dominant");
            let matrices = all.iter().filter(|&&m| type_by_minors(m) == (s[0], s[1])).count() as u64;
            let stab_order = count_stabilizer(&group, s, jobs);
            let predicted = group_order * group_order / stab_order;
            OrbitCount {
                gamma,
                matrices,
                stab_order,
                predicted,
                matches: predicted * stab_order == group_order * group_order && predicted == matrices,
            }
        })
        .collect();
    let partition_ok = orbits.iter().map(|o| o.matrices).sum::<u64>() == xr_size;
    let all_ok = histogram_ok && partition_ok && orbits.iter().all(|o| o.matches) && all.len() == 4096;
    PointCensus {
        p: 2,
        n: 2,
        r: 1,
        len: 3,
        total_matrices: all.len() as u64,
        group_order,
        xr_size,
        histogram,
        orbits,
        partition_ok,
        histogram_ok,
        all_ok,
    }
}
