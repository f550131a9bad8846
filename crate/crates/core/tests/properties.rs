use proptest::prelude::*;
use wittlat::strata::{in_closure, in_xr};
use wittlat::{divisor_type, snf, Cochar, GroupShape, Sampler, WittMat, WittRing};

const PARAMS: [(u64, usize, usize); 6] = [(2, 1, 3), (3, 1, 3), (5, 1, 2), (2, 2, 3), (3, 2, 2), (2, 3, 2)];

fn ring_and_sampler(k: usize, seed: u64) -> (WittRing, Sampler) {
    let (p, m, len) = PARAMS[k];
    let ring = WittRing::with_params(p, m, len).unwrap();
    let sampler = Sampler::new(&ring, 3, seed);
    (ring, sampler)
}

fn minor_valuations(a: &WittMat, k: usize) -> usize {
    let n = a.n();
    let subsets: Vec<Vec<usize>> = (0u32..1 << n)
        .filter(|mask| mask.count_ones() as usize == k)
        .map(|mask| (0..n).filter(|b| mask & (1 << b) != 0).collect())
        .collect();
    let mut best = a.ring().len();
    for rows in &subsets {
        for cols in &subsets {
            let sub = WittMat::from_fn(a.ring(), k, |i, j| a.get(rows[i], cols[j]).clone());
            best = best.min(sub.det().valuation());
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms(k in 0..PARAMS.len(), seed in any::<u64>()) {
        let (ring, mut s) = ring_and_sampler(k, seed);
        let (a, b, c) = (s.element(), s.element(), s.element());
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &ring.zero(), a.clone());
        prop_assert_eq!(&a * &ring.one(), a.clone());
        prop_assert_eq!(&a + &(-&a), ring.zero());
        prop_assert_eq!(&a - &b, &a + &(-&b));
        if a.is_unit() {
            prop_assert_eq!(&a * &a.inv().unwrap(), ring.one());
        } else {
            prop_assert!(a.inv().is_err());
        }
    }

    #[test]
    fn valuation_min_rule(k in 0..PARAMS.len(), seed in any::<u64>()) {
        let (ring, mut s) = ring_and_sampler(k, seed);
        let len = ring.len();
        let fa = s.index(len + 1);
        let fb = s.index(len + 1);
        let a = s.element_above(fa);
        let b = s.element_above(fb);
        let (va, vb) = (a.valuation(), b.valuation());
        prop_assert_eq!((&a * &b).valuation(), len.min(va + vb));
        let vs = (&a + &b).valuation();
        prop_assert!(vs >= va.min(vb));
        if va != vb {
            prop_assert_eq!(vs, va.min(vb));
        }
    }

    #[test]
    fn teichmuller_is_multiplicative_section(k in 0..PARAMS.len(), seed in any::<u64>()) {
        let (ring, mut s) = ring_and_sampler(k, seed);
        let field = ring.field().clone();
        let (x, y) = (s.field_elem(), s.field_elem());
        prop_assert_eq!(ring.teichmuller(&field.mul(&x, &y)), &ring.teichmuller(&x) * &ring.teichmuller(&y));
        prop_assert_eq!(ring.teichmuller(&x).residue(), x.clone());
        prop_assert_eq!(ring.teichmuller(&x).frobenius(), ring.teichmuller(&field.frobenius(&x)));
    }

    #[test]
    fn digits_round_trip(k in 0..PARAMS.len(), seed in any::<u64>()) {
        let (ring, mut s) = ring_and_sampler(k, seed);
        let a = s.element();
        prop_assert_eq!(ring.from_digits(&a.digits()).unwrap(), a.clone());
        let digits: Vec<_> = (0..ring.len()).map(|_| s.field_elem()).collect();
        prop_assert_eq!(ring.from_digits(&digits).unwrap().digits(), digits);
        prop_assert_eq!(a.verschiebung().frobenius(), &a * &ring.p_pow(1));
    }

    #[test]
    fn det_multiplicative(k in 0..PARAMS.len(), seed in any::<u64>(), n in 1usize..5) {
        let (ring, _) = ring_and_sampler(k, seed);
        let mut s = Sampler::new(&ring, n, seed);
        let (a, b) = (s.matrix(), s.matrix());
        prop_assert_eq!((&a * &b).det(), &a.det() * &b.det());
        prop_assert_eq!(a.det_cofactor(), a.det_elimination());
        if n >= 2 {
            let e = WittMat::elementary(&ring, n, 0, n - 1, s.element()).unwrap();
            prop_assert_eq!((&e * &a).det(), a.det());
        }
    }

    #[test]
    fn group_closed_under_product_and_inverse(k in 0..PARAMS.len(), seed in any::<u64>()) {
        let (ring, mut s) = ring_and_sampler(k, seed);
        let (g, h) = (s.group(GroupShape::Full), s.group(GroupShape::Full));
        prop_assert!((&g * &h).in_group(GroupShape::Full));
        let gi = g.inverse().unwrap();
        prop_assert!(gi.in_group(GroupShape::Full));
        prop_assert_eq!(&g * &gi, WittMat::identity(&ring, 3));
    }

    #[test]
    fn parabolic_action_keeps_corner_c_bound(k in 0..PARAMS.len(), seed in any::<u64>()) {
        let (ring, mut s) = ring_and_sampler(k, seed);
        let len = ring.len();
        let e: Vec<usize> = (0..3).map(|_| s.index(len + 1)).collect();
        let a = WittMat::p_power_diagonal(&ring, &e);
        let g = s.group(GroupShape::P);
        let h = s.group(GroupShape::PMinus);
        let before = a.corner_c().unwrap().valuation();
        prop_assert!((&(&g * &a) * &h).corner_c().unwrap().valuation() >= before);
    }

    #[test]
    fn snf_round_trip(k in 0..PARAMS.len(), seed in any::<u64>()) {
        let (ring, mut s) = ring_and_sampler(k, seed);
        let len = ring.len();
        let gamma = Cochar::from_unsorted((0..3).map(|_| s.index(len + 1)).collect());
        let a = s.orbit(&gamma);
        let res = snf(&a);
        prop_assert_eq!(&res.divisors, &gamma);
        prop_assert_eq!(&(&res.left * &a) * &res.right, WittMat::p_power_diagonal(&ring, gamma.exponents()));
        prop_assert!(res.left.in_group(GroupShape::Full) && res.right.in_group(GroupShape::Full));
    }

    #[test]
    fn snf_matches_determinantal_ideals(k in 0..PARAMS.len(), seed in any::<u64>(), n in 1usize..4) {
        let (ring, _) = ring_and_sampler(k, seed);
        let mut s = Sampler::new(&ring, n, seed);
        let a = s.matrix();
        let d = divisor_type(&a);
        let e = d.exponents();
        for size in 1..=n {
            let tail: usize = e[n - size..].iter().sum();
            prop_assert_eq!(ring.len().min(tail), minor_valuations(&a, size));
        }
        let vdet = a.det().valuation();
        if vdet < ring.len() {
            prop_assert_eq!(d.total(), vdet);
        }
    }

    #[test]
    fn divisor_type_is_two_sided_invariant(k in 0..PARAMS.len(), seed in any::<u64>()) {
        let (_, mut s) = ring_and_sampler(k, seed);
        let a = s.matrix();
        let (x, y) = (s.group(GroupShape::Full), s.group(GroupShape::Full));
        prop_assert_eq!(divisor_type(&(&(&x * &a) * &y)), divisor_type(&a));
    }

    #[test]
    fn closure_membership_is_invariant(seed in any::<u64>(), case in 0usize..3) {
        let (p, n, r) = [(2, 2, 1), (2, 2, 2), (3, 3, 1)][case];
        let ring = WittRing::prime(p, n * r + 1).unwrap();
        let mut s = Sampler::new(&ring, n, seed);
        let poset = wittlat::strata::enumerate_strata(n, r).unwrap();
        let gamma = poset.strata[s.index(poset.strata.len())].gamma.clone();
        let a = s.orbit(&gamma);
        prop_assert!(in_xr(&a, r).unwrap());
        let report = wittlat::strata::classify(&a, r).unwrap();
        prop_assert_eq!(report.stratum_index, Some(gamma.tail_sum()));
        prop_assert!(gamma.tail_sum() <= (n - 1) * r);
        let (x, y) = (s.group(GroupShape::Full), s.group(GroupShape::Full));
        let b = &(&x * &a) * &y;
        for i in 0..=n * r / 2 {
            prop_assert_eq!(in_closure(&a, r, i).unwrap(), in_closure(&b, r, i).unwrap());
        }
    }

    #[test]
    fn sampler_is_deterministic(seed in any::<u64>(), k in 0..PARAMS.len()) {
        let (_, mut s1) = ring_and_sampler(k, seed);
        let (_, mut s2) = ring_and_sampler(k, seed);
        let gamma = Cochar::new(vec![1, 1, 0]).unwrap();
        prop_assert_eq!(s1.orbit(&gamma), s2.orbit(&gamma));
        prop_assert_eq!(s1.group(GroupShape::B), s2.group(GroupShape::B));
    }

    #[test]
    fn fac_identity_for_random_parameters(p_idx in 0usize..3, seed in any::<u64>()) {
        let p = [2u64, 3, 5][p_idx];
        let ring = WittRing::prime(p, 7).unwrap();
        let mut s = Sampler::new(&ring, 2, seed);
        let rj = s.index(3);
        let r1 = rj + s.index(3);
        let b = s.index(rj + 1);
        let t = s.nonzero_field_elem();
        let w = wittlat::fac_witness(&ring, r1, rj, b, &t).unwrap();
        let product = &(&(&w.factors[0] * &w.factors[1]) * &w.factors[2]) * &w.factors[3];
        prop_assert_eq!(&product, &w.target);
        let hi = (r1 + b).max(rj - b);
        let lo = (r1 + b).min(rj - b);
        prop_assert_eq!(divisor_type(&w.target).exponents().to_vec(), vec![hi, lo]);
    }

    #[test]
    fn chains_preserve_totals(seed in any::<u64>(), n in 2usize..5, r in 1usize..3) {
        let ring = WittRing::prime(2, n * r + 1).unwrap();
        let poset = wittlat::strata::enumerate_strata(n, r).unwrap();
        let mut s = Sampler::new(&ring, n, seed);
        let a = &poset.strata[s.index(poset.strata.len())].gamma;
        let b = &poset.strata[s.index(poset.strata.len())].gamma;
        let one = ring.field().one();
        if wittlat::strata::dominance_leq(a, b).unwrap() {
            let chain = wittlat::degeneration_chain(&ring, a, b, &one).unwrap();
            prop_assert_eq!(chain.is_empty(), a == b);
            for step in &chain {
                prop_assert_eq!(step.lower.total(), n * r);
                prop_assert!(wittlat::strata::dominance_leq(&step.lower, &step.upper).unwrap());
                prop_assert!(in_xr(&step.witness.target, r).unwrap());
            }
        }
    }
}
