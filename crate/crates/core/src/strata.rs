//! Membership in `X_r` and its subregular strata, the poset of dominant
//! exponent vectors, and seeded sampling of group elements and orbits.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{GroupShape, WittMat};
use crate::snf::{divisor_type, Cochar};
use crate::witt::{WittElem, WittRing};

fn check_length(a: &WittMat, r: usize) -> Result<()> {
    let expected = a.n() * r + 1;
    if a.ring().len() != expected {
        return Err(Error::LengthMismatch { expected, found: a.ring().len() });
    }
    Ok(())
}

fn check_index(n: usize, r: usize, i: usize) -> Result<()> {
    if i > n * r / 2 {
        return Err(Error::Domain(format!("i = {i} exceeds ⌊nr/2⌋ = {}", n * r / 2)));
    }
    Ok(())
}

/// `det A = p^{nr} u` with `u` a unit.
pub fn in_xr(a: &WittMat, r: usize) -> Result<bool> {
    check_length(a, r)?;
    Ok(a.det().valuation() == a.n() * r)
}

/// The valuation conditions `v(c(A)) ≥ i` and `v(b(A)) ≤ nr − i`.
pub fn pred_val(a: &WittMat, r: usize, i: usize) -> Result<bool> {
    check_length(a, r)?;
    check_index(a.n(), r, i)?;
    let nr = a.n() * r;
    Ok(a.corner_c()?.valuation() >= i && a.corner_b()?.valuation() <= nr - i)
}

/// Membership in the closure of `G γ_i^sr G`, decided by divisor type: `r_1 ≤ nr − i`.
pub fn in_closure(a: &WittMat, r: usize, i: usize) -> Result<bool> {
    check_length(a, r)?;
    check_index(a.n(), r, i)?;
    let divisors = divisor_type(a);
    if !divisors.is_stratum(r) {
        return Err(Error::Domain("matrix is not in X_r".into()));
    }
    Ok(divisors.exponents()[0] + i <= a.n() * r)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumReport {
    #[serde(rename = "in_Xr")]
    pub in_xr: bool,
    #[serde(serialize_with = "exponents_only")]
    pub divisors: Cochar,
    /// `a = nr − r_1`, only defined on `X_r`.
    pub stratum_index: Option<usize>,
    pub val_b: usize,
    pub val_c: usize,
    /// Largest `i ≤ ⌊nr/2⌋` for which the valuation predicate holds.
    pub pred_val_i: Option<usize>,
    /// Largest `i ≤ ⌊nr/2⌋` with `A` in the closure of `G γ_i^sr G`, on `X_r`.
    pub deepest_closure_i: Option<usize>,
}

fn exponents_only<S: serde::Serializer>(c: &Cochar, s: S) -> std::result::Result<S::Ok, S::Error> {
    c.exponents().serialize(s)
}

pub fn classify(a: &WittMat, r: usize) -> Result<StratumReport> {
    check_length(a, r)?;
    let n = a.n();
    let nr = n * r;
    let cap = nr / 2;
    let divisors = divisor_type(a);
    let in_xr = divisors.is_stratum(r);
    debug_assert_eq!(in_xr, a.det().valuation() == nr);
    let stratum_index = in_xr.then(|| nr - divisors.exponents()[0]);
    let val_b = a.corner_b()?.valuation();
    let val_c = a.corner_c()?.valuation();
    let pred_val_i = (0..=cap).rev().find(|&i| val_c >= i && val_b + i <= nr);
    Ok(StratumReport {
        in_xr,
        divisors,
        stratum_index,
        val_b,
        val_c,
        pred_val_i,
        deepest_closure_i: stratum_index.map(|a| a.min(cap)),
    })
}

/// Partial-sum dominance `η ≤ γ`.
pub fn dominance_leq(eta: &Cochar, gamma: &Cochar) -> Result<bool> {
    if eta.n() != gamma.n() || eta.total() != gamma.total() {
        return Err(Error::Incomparable(eta.exponents().to_vec(), gamma.exponents().to_vec()));
    }
    let mut se = 0;
    let mut sg = 0;
    for (a, b) in eta.exponents().iter().zip(gamma.exponents()) {
        se += a;
        sg += b;
        if se > sg {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A covering relation `lower ⋖ upper`: `upper` moves one unit from slot
/// `from_slot` to `to_slot` to give `lower`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HasseEdge {
    pub upper: usize,
    pub lower: usize,
    pub from_slot: usize,
    pub to_slot: usize,
    pub b: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumNode {
    #[serde(flatten)]
    pub gamma: Cochar,
    /// `a = Σ_{j≥2} r_j`.
    pub a: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrataPoset {
    pub n: usize,
    pub r: usize,
    pub strata: Vec<StratumNode>,
    pub edges: Vec<HasseEdge>,
}

fn partitions(total: usize, parts: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if parts == 0 {
        if total == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    if total > parts * max_part {
        return;
    }
    for first in (0..=max_part.min(total)).rev() {
        prefix.push(first);
        partitions(total - first, parts - 1, first, prefix, out);
        prefix.pop();
    }
}

/// All dominant vectors with entries in `[0, nr]` summing to `nr`, ordered by
/// `a` then reverse-lexicographically, with the Hasse diagram of dominance.
pub fn enumerate_strata(n: usize, r: usize) -> Result<StrataPoset> {
    if n < 2 || r < 1 {
        return Err(Error::Domain(format!("need n ≥ 2 and r ≥ 1, got n = {n}, r = {r}")));
    }
    let nr = n * r;
    let mut raw = Vec::new();
    partitions(nr, n, nr, &mut Vec::new(), &mut raw);
    let mut strata: Vec<StratumNode> = raw
        .into_iter()
        .map(|e| {
            let gamma = Cochar::new(e).expect("partitions are generated in descending order");
            StratumNode { a: gamma.tail_sum(), gamma }
        })
        .collect();
    strata.sort_by(|x, y| x.a.cmp(&y.a).then_with(|| y.gamma.cmp(&x.gamma)));

    let leq = |x: usize, y: usize| dominance_leq(&strata[x].gamma, &strata[y].gamma).expect("same shape");
    let mut edges = Vec::new();
    for upper in 0..strata.len() {
        for lower in 0..strata.len() {
            if upper == lower || !leq(lower, upper) {
                continue;
            }
            let covered =
                (0..strata.len()).all(|mid| mid == upper || mid == lower || !(leq(lower, mid) && leq(mid, upper)));
            if !covered {
                continue;
            }
            let (u, l) = (strata[upper].gamma.exponents(), strata[lower].gamma.exponents());
            let from_slot = (0..n).find(|&k| u[k] > l[k]).expect("distinct vectors");
            let to_slot = (0..n).rev().find(|&k| u[k] < l[k]).expect("distinct vectors");
            edges.push(HasseEdge { upper, lower, from_slot, to_slot, b: u[from_slot] - l[from_slot] });
        }
    }
    Ok(StrataPoset { n, r, strata, edges })
}

impl StrataPoset {
    pub fn to_dot(&self) -> String {
        let mut out = format!("digraph strata_n{}_r{} {{\n  rankdir=TB;\n", self.n, self.r);
        for (k, s) in self.strata.iter().enumerate() {
            out.push_str(&format!("  s{k} [label=\"{} a={}\"];\n", s.gamma, s.a));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "  s{} -> s{} [label=\"{}→{}\"];\n",
                e.upper,
                e.lower,
                e.from_slot + 1,
                e.to_slot + 1
            ));
        }
        out.push_str("}\n");
        out
    }
}

/// Seeded generator of ring elements, group elements and orbit points.
pub struct Sampler {
    ring: WittRing,
    n: usize,
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(ring: &WittRing, n: usize, seed: u64) -> Self {
        Sampler { ring: ring.clone(), n, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn ring(&self) -> &WittRing {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Uniform element of `W_N`.
    pub fn element(&mut self) -> WittElem {
        let q = self.ring.characteristic();
        let coeffs = (0..self.ring.m()).map(|_| self.rng.gen_range(0..q)).collect();
        self.ring.from_coeffs(coeffs).expect("coefficient count matches m")
    }

    /// Uniform element of valuation at least `floor` (zero when `floor ≥ N`).
    pub fn element_above(&mut self, floor: usize) -> WittElem {
        let x = self.element();
        &x * &self.ring.p_pow(floor)
    }

    pub fn unit(&mut self) -> WittElem {
        loop {
            let x = self.element();
            if x.is_unit() {
                return x;
            }
        }
    }

    pub fn field_elem(&mut self) -> crate::field::FieldElem {
        let q = self.ring.field().order();
        self.ring.field().from_index(self.rng.gen_range(0..q))
    }

    pub fn nonzero_field_elem(&mut self) -> crate::field::FieldElem {
        let q = self.ring.field().order();
        self.ring.field().from_index(self.rng.gen_range(1..q))
    }

    pub fn index(&mut self, bound: usize) -> usize {
        self.rng.gen_range(0..bound)
    }

    pub fn matrix(&mut self) -> WittMat {
        let ring = self.ring.clone();
        WittMat::from_fn(&ring, self.n, |_, _| self.element())
    }

    /// A random element of the group; the Iwahori shapes get a unit diagonal so
    /// no rejection is needed.
    pub fn group(&mut self, shape: GroupShape) -> WittMat {
        let ring = self.ring.clone();
        let len = ring.len();
        loop {
            let a = WittMat::from_fn(&ring, self.n, |i, j| {
                let floor = shape.entry_floor(i, j, len);
                let unit_diag = matches!(shape, GroupShape::B | GroupShape::BMinus) && i == j;
                if unit_diag {
                    self.unit()
                } else {
                    self.element_above(floor)
                }
            });
            if a.in_group(shape) {
                return a;
            }
        }
    }

    /// `x · diag(p^γ) · y` with `x`, `y` drawn from `G`.
    pub fn orbit(&mut self, gamma: &Cochar) -> WittMat {
        self.two_sided(gamma, GroupShape::Full, GroupShape::Full)
    }

    /// `x · diag(p^γ) · y` with `x` from `left` and `y` from `right`.
    pub fn two_sided(&mut self, gamma: &Cochar, left: GroupShape, right: GroupShape) -> WittMat {
        let x = self.group(left);
        let y = self.group(right);
        &(&x * &gamma.matrix(&self.ring)) * &y
    }

    /// Uniform element of `X_r` by rejection.
    pub fn in_xr(&mut self, r: usize) -> WittMat {
        let target = self.n * r;
        loop {
            let a = self.matrix();
            if a.det().valuation() == target {
                return a;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, n: usize, r: usize) -> WittRing {
        WittRing::prime(p, n * r + 1).unwrap()
    }

    #[test]
    fn xr_membership() {
        let rg = ring(2, 2, 1);
        assert!(in_xr(&Cochar::mu(2, 1).matrix(&rg), 1).unwrap());
        assert!(!in_xr(&WittMat::identity(&rg, 2), 1).unwrap());
        let mut s = Sampler::new(&rg, 2, 7);
        for _ in 0..20 {
            assert!(in_xr(&s.orbit(&Cochar::mu(2, 1)), 1).unwrap());
        }
        assert!(matches!(in_xr(&WittMat::identity(&rg, 2), 2), Err(Error::LengthMismatch { expected: 5, found: 3 })));
    }

    #[test]
    fn valuation_predicate() {
        let rg = ring(3, 3, 1);
        let g1 = Cochar::subregular(3, 1, 1).unwrap().matrix(&rg);
        assert!(pred_val(&g1, 1, 1).unwrap());
        let mu = Cochar::mu(3, 1).matrix(&rg);
        assert!(pred_val(&mu, 1, 0).unwrap());
        assert!(!pred_val(&mu, 1, 1).unwrap());
        // diag(1, p^{nr}, 1): v(b) = 0 ≤ nr − 1 and v(c) = nr ≥ 1.
        let d = WittMat::p_power_diagonal(&rg, &[0, 3, 0]);
        assert!(pred_val(&d, 1, 1).unwrap());
        assert!(pred_val(&mu, 1, 2).is_err());
    }

    #[test]
    fn closure_membership() {
        let rg = ring(2, 2, 2);
        let mut s = Sampler::new(&rg, 2, 11);
        for a_idx in 1..=2 {
            let gamma = Cochar::new(vec![4 - a_idx, a_idx]).unwrap();
            for i in 0..=a_idx {
                assert!(in_closure(&s.orbit(&gamma), 2, i).unwrap());
            }
        }
        assert!(!in_closure(&Cochar::mu(2, 2).matrix(&rg), 2, 1).unwrap());
        assert!(in_closure(&WittMat::identity(&rg, 2), 2, 0).is_err());
    }

    #[test]
    fn predicate_does_not_force_closure() {
        // [[p, 1], [0, p]] over Z/8: det = p², v(b) = v(c) = 1, yet a unit entry
        // puts it in the open orbit of μ_1.
        let rg = ring(2, 2, 1);
        let a = WittMat::from_ints(&rg, 2, &[2, 1, 0, 2]).unwrap();
        assert!(in_xr(&a, 1).unwrap());
        assert!(pred_val(&a, 1, 1).unwrap());
        assert!(!in_closure(&a, 1, 1).unwrap());
        let report = classify(&a, 1).unwrap();
        assert_eq!(report.pred_val_i, Some(1));
        assert_eq!(report.deepest_closure_i, Some(0));
    }

    #[test]
    fn parabolic_orbits_lie_in_closure() {
        for (p, n, r) in [(2, 2, 2), (3, 3, 1), (2, 3, 2)] {
            let rg = ring(p, n, r);
            let mut s = Sampler::new(&rg, n, 3);
            for i in 0..=n * r / 2 {
                let gamma = Cochar::subregular(n, r, i).unwrap();
                for _ in 0..20 {
                    let a = s.two_sided(&gamma, GroupShape::P, GroupShape::PMinus);
                    assert!(a.corner_c().unwrap().valuation() >= i);
                    assert!(in_closure(&a, r, i).unwrap());
                }
            }
        }
    }

    #[test]
    fn parabolic_orbit_can_lose_the_corner_bound() {
        // b = p^{nr-i}(x_11 y_11 + z) with x_11 y_11 + z a non-unit.
        let rg = ring(2, 2, 1);
        let x = WittMat::from_ints(&rg, 2, &[1, 1, 0, 1]).unwrap();
        let y = WittMat::from_ints(&rg, 2, &[1, 0, -1, 1]).unwrap();
        assert!(x.in_group(GroupShape::P) && y.in_group(GroupShape::PMinus));
        let a = &(&x * &Cochar::subregular(2, 1, 1).unwrap().matrix(&rg)) * &y;
        assert!(a.corner_b().unwrap().is_zero());
        assert!(!pred_val(&a, 1, 1).unwrap());
        assert!(in_closure(&a, 1, 1).unwrap());
    }

    #[test]
    fn report_fields() {
        let rg = ring(2, 3, 1);
        let mu = Cochar::mu(3, 1).matrix(&rg);
        let rep = classify(&mu, 1).unwrap();
        assert!(rep.in_xr);
        assert_eq!(rep.divisors.exponents(), &[3, 0, 0]);
        assert_eq!(rep.stratum_index, Some(0));
        assert_eq!(rep.deepest_closure_i, Some(0));
        let id = classify(&WittMat::identity(&rg, 3), 1).unwrap();
        assert!(!id.in_xr);
        assert_eq!(id.stratum_index, None);
        let json = serde_json::to_string(&rep).unwrap();
        assert!(json.starts_with(r#"{"in_Xr":true,"divisors":[3,0,0],"stratum_index":0"#), "{json}");
    }

    #[test]
    fn small_posets() {
        let p = enumerate_strata(2, 1).unwrap();
        let got: Vec<_> = p.strata.iter().map(|s| s.gamma.exponents().to_vec()).collect();
        assert_eq!(got, vec![vec![2, 0], vec![1, 1]]);
        assert_eq!(p.edges.len(), 1);

        let p = enumerate_strata(2, 2).unwrap();
        let got: Vec<_> = p.strata.iter().map(|s| s.gamma.exponents().to_vec()).collect();
        assert_eq!(got, vec![vec![4, 0], vec![3, 1], vec![2, 2]]);
        assert_eq!(p.edges.len(), 2);
        assert!(p.edges.iter().all(|e| e.lower == e.upper + 1));

        for (n, r) in [(2, 3), (3, 2), (4, 2)] {
            let p = enumerate_strata(n, r).unwrap();
            assert_eq!(p.strata[0].gamma, Cochar::mu(n, r));
            assert_eq!(p.strata[1].gamma, Cochar::subregular(n, r, 1).unwrap());
            assert!(p.strata.iter().all(|s| s.a <= (n - 1) * r));
            // Covers in dominance order are single unit transfers.
            for e in &p.edges {
                assert_eq!(e.b, 1);
                let (u, l) = (p.strata[e.upper].gamma.exponents(), p.strata[e.lower].gamma.exponents());
                let diff: usize = u.iter().zip(l).map(|(x, y)| x.abs_diff(*y)).sum();
                assert_eq!(diff, 2);
            }
        }
        assert!(enumerate_strata(1, 1).is_err());
        assert!(p_dot_contains_edges());
    }

    fn p_dot_contains_edges() -> bool {
        let dot = enumerate_strata(2, 2).unwrap().to_dot();
        dot.contains("s0 -> s1") && dot.contains("s1 -> s2")
    }

    #[test]
    fn dominance_examples() {
        let c = |v: Vec<usize>| Cochar::new(v).unwrap();
        assert!(dominance_leq(&c(vec![1, 1]), &c(vec![2, 0])).unwrap());
        assert!(!dominance_leq(&c(vec![2, 0]), &c(vec![1, 1])).unwrap());
        assert!(dominance_leq(&c(vec![3, 1]), &c(vec![3, 1])).unwrap());
        assert!(dominance_leq(&c(vec![2, 2, 0]), &c(vec![3, 1, 0])).unwrap());
        assert!(dominance_leq(&c(vec![2, 1]), &c(vec![2, 0])).is_err());
    }

    #[test]
    fn closure_chain_is_down_set_of_subregular() {
        for (n, r) in [(2, 2), (3, 1), (3, 2), (4, 1)] {
            let poset = enumerate_strata(n, r).unwrap();
            for i in 0..=n * r / 2 {
                let sr = Cochar::subregular(n, r, i).unwrap();
                for s in &poset.strata {
                    let by_index = s.a >= i;
                    let by_first_slot = s.gamma.exponents()[0] <= n * r - i;
                    assert_eq!(by_index, by_first_slot);
                    if by_index {
                        assert!(dominance_leq(&s.gamma, &sr).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn samplers() {
        let rg = WittRing::with_params(2, 2, 3).unwrap();
        let mut s = Sampler::new(&rg, 3, 5);
        for shape in GroupShape::ALL {
            for _ in 0..10 {
                assert!(s.group(shape).in_group(shape));
            }
        }
        let gamma = Cochar::new(vec![2, 1, 0]).unwrap();
        for _ in 0..10 {
            assert_eq!(divisor_type(&s.orbit(&gamma)), gamma);
        }
        let a = Sampler::new(&rg, 3, 99).matrix();
        let b = Sampler::new(&rg, 3, 99).matrix();
        assert_eq!(a, b);
    }
}
