use clap::{Args, ValueEnum};
use serde::Serialize;
use wittlat::dimension::{
    ci_check, dim_lattice_orbit, dim_mat, dim_matrix_orbit_oracle, dim_matrix_orbit_oracle_pair, point_count_oracle,
    stab_dim_oracle, stab_dim_paper_full, stab_dim_paper_iwahori, stab_dim_paper_parabolic,
};
use wittlat::strata::{classify, dominance_leq, enumerate_strata, in_closure, pred_val};
use wittlat::{degeneration_chain, divisor_type, fac_witness, snf, Cochar, GroupShape, Sampler, WittMat, WittRing};

use crate::{stream_seed, CmdResult, Failure, Output, DEFAULT_SEED};

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Witt,
    Snf,
    Fac,
    Strata,
    Dims,
    Tiny,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[arg(long, default_value_t = 2)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    r: usize,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, env = "WITTLAT_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[command(flatten)]
    out: Output,
}

#[derive(Serialize)]
struct PropertyResult {
    name: &'static str,
    samples: usize,
    failures: usize,
    /// Up to ten reproducers: a sample seed, or the parameters of an enumerated case.
    reproducers: Vec<String>,
}

#[derive(Serialize)]
struct VerifyReport {
    suite: Suite,
    p: u64,
    m: usize,
    n: usize,
    r: usize,
    seed: u64,
    samples: usize,
    properties: Vec<PropertyResult>,
    passed: bool,
}

const MAX_REPRODUCERS: usize = 10;

fn collect(name: &'static str, cases: impl IntoIterator<Item = (String, bool)>) -> PropertyResult {
    let mut result = PropertyResult { name, samples: 0, failures: 0, reproducers: Vec::new() };
    for (label, ok) in cases {
        result.samples += 1;
        if !ok {
            result.failures += 1;
            if result.reproducers.len() < MAX_REPRODUCERS {
                result.reproducers.push(label);
            }
        }
    }
    result
}

/// Evaluates `f` on `samples` derived seeds, sharded over `jobs` workers and
/// merged in seed order.
fn sampled(name: &'static str, cfg: &VerifyArgs, f: impl Fn(u64) -> bool + Sync) -> PropertyResult {
    let seeds: Vec<u64> = (0..cfg.samples as u64).map(|k| stream_seed(cfg.seed, k)).collect();
    let jobs = cfg.jobs.max(1);
    let chunk = seeds.len().div_ceil(jobs).max(1);
    let outcomes: Vec<bool> = std::thread::scope(|scope| {
        let handles: Vec<_> = seeds
            .chunks(chunk)
            .map(|part| {
                let f = &f;
                scope.spawn(move || part.iter().map(|&s| f(s)).collect::<Vec<_>>())
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    });
    collect(name, seeds.iter().zip(outcomes).map(|(s, ok)| (format!("seed={s}"), ok)))
}

fn witt_suite(cfg: &VerifyArgs, ring: &WittRing) -> Vec<PropertyResult> {
    let len = ring.len();
    let mut out = vec![
        sampled("ring_axioms", cfg, |seed| {
            let mut s = Sampler::new(ring, 1, seed);
            let (a, b, c) = (s.element(), s.element(), s.element());
            &(&a + &b) + &c == &a + &(&b + &c)
                && &(&a * &b) * &c == &a * &(&b * &c)
                && &a * &(&b + &c) == &(&a * &b) + &(&a * &c)
                && &a * &b == &b * &a
                && &a + &(-&a) == ring.zero()
                && (!a.is_unit() || &a * &a.inv().unwrap() == ring.one())
        }),
        sampled("valuation_min_rule", cfg, |seed| {
            let mut s = Sampler::new(ring, 1, seed);
            let (fa, fb) = (s.index(len + 1), s.index(len + 1));
            let (a, b) = (s.element_above(fa), s.element_above(fb));
            let (va, vb, vs) = (a.valuation(), b.valuation(), (&a + &b).valuation());
            (&a * &b).valuation() == len.min(va + vb) && vs >= va.min(vb) && (va == vb || vs == va.min(vb))
        }),
        sampled("teichmuller_multiplicative", cfg, |seed| {
            let mut s = Sampler::new(ring, 1, seed);
            let (x, y) = (s.field_elem(), s.field_elem());
            ring.teichmuller(&ring.field().mul(&x, &y)) == &ring.teichmuller(&x) * &ring.teichmuller(&y)
                && ring.teichmuller(&x).residue() == x
        }),
        sampled("digits_round_trip", cfg, |seed| {
            let mut s = Sampler::new(ring, 1, seed);
            let a = s.element();
            ring.from_digits(&a.digits()).map(|b| b == a).unwrap_or(false)
                && a.verschiebung().frobenius() == &a * &ring.p_pow(1)
        }),
    ];
    if ring.m() == 1 {
        let q = ring.characteristic();
        out.push(sampled("integer_oracle", cfg, |seed| {
            let mut s = Sampler::new(ring, 1, seed);
            let (a, b) = (s.element(), s.element());
            let (ia, ib) = (a.to_integer().unwrap(), b.to_integer().unwrap());
            (&a + &b).to_integer().unwrap() == (ia + ib) % q
                && (&a * &b).to_integer().unwrap() == (ia as u128 * ib as u128 % q as u128) as u64
                && (&a - &b).to_integer().unwrap() == (ia + q - ib) % q
        }));
    }
    out
}

fn snf_suite(cfg: &VerifyArgs, ring: &WittRing) -> Result<Vec<PropertyResult>, Failure> {
    let (n, r) = (cfg.n, cfg.r);
    let strata = enumerate_strata(n, r)?.strata;
    Ok(vec![
        sampled("snf_round_trip", cfg, |seed| {
            let mut s = Sampler::new(ring, n, seed);
            let gamma = strata[s.index(strata.len())].gamma.clone();
            let a = s.orbit(&gamma);
            let res = snf(&a);
            res.divisors == gamma
                && &(&res.left * &a) * &res.right == WittMat::p_power_diagonal(ring, gamma.exponents())
        }),
        sampled("divisor_type_invariance", cfg, |seed| {
            let mut s = Sampler::new(ring, n, seed);
            let a = s.matrix();
            let (x, y) = (s.group(GroupShape::Full), s.group(GroupShape::Full));
            divisor_type(&(&(&x * &a) * &y)) == divisor_type(&a)
        }),
        sampled("det_multiplicative", cfg, |seed| {
            let mut s = Sampler::new(ring, n, seed);
            let (a, b) = (s.matrix(), s.matrix());
            (&a * &b).det() == &a.det() * &b.det()
        }),
    ])
}

fn fac_suite(cfg: &VerifyArgs) -> Result<Vec<PropertyResult>, Failure> {
    let (n, r) = (cfg.n, cfg.r);
    let bound = (n * r).max(4);
    let ring = WittRing::with_params(cfg.p, cfg.m, bound + 1)?;
    let mut cases = Vec::new();
    for t in ring.field().elements().skip(1) {
        for rj in 0..=bound / 2 {
            for r1 in rj..=bound - rj {
                for b in 0..=rj {
                    let ok = fac_witness(&ring, r1, rj, b, &t)
                        .map(|w| divisor_type(&w.target) == Cochar::from_unsorted(vec![r1 + b, rj - b]))
                        .unwrap_or(false);
                    cases.push((format!("r1={r1} rj={rj} b={b} t={t}"), ok));
                }
            }
        }
    }
    let chain_ring = WittRing::with_params(cfg.p, cfg.m, n * r + 1)?;
    let strata = enumerate_strata(n, r)?.strata;
    let one = chain_ring.field().one();
    let mut chains = Vec::new();
    for lo in &strata {
        for hi in &strata {
            if dominance_leq(&lo.gamma, &hi.gamma)? {
                let ok = degeneration_chain(&chain_ring, &lo.gamma, &hi.gamma, &one)
                    .map(|steps| steps.iter().all(|s| divisor_type(&s.witness.target) == s.upper))
                    .unwrap_or(false);
                chains.push((format!("from={} to={}", lo.gamma, hi.gamma), ok));
            }
        }
    }
    Ok(vec![collect("fac_identity", cases), collect("chain_witnesses", chains)])
}

fn strata_suite(cfg: &VerifyArgs, ring: &WittRing) -> Result<Vec<PropertyResult>, Failure> {
    let (n, r) = (cfg.n, cfg.r);
    let strata = enumerate_strata(n, r)?.strata;
    let cap = n * r / 2;
    let sample_xr = |s: &mut Sampler| match s.index(3) {
        0 => s.in_xr(r),
        1 => {
            let gamma = strata[s.index(strata.len())].gamma.clone();
            s.orbit(&gamma)
        }
        _ => {
            let gamma = Cochar::subregular(n, r, s.index(cap + 1)).expect("index within cap");
            s.two_sided(&gamma, GroupShape::P, GroupShape::PMinus)
        }
    };
    Ok(vec![
        sampled("pred_val_implies_closure", cfg, |seed| {
            let mut s = Sampler::new(ring, n, seed);
            let a = sample_xr(&mut s);
            (0..=cap).all(|i| !pred_val(&a, r, i).unwrap() || in_closure(&a, r, i).unwrap())
        }),
        sampled("closure_invariance", cfg, |seed| {
            let mut s = Sampler::new(ring, n, seed);
            let a = sample_xr(&mut s);
            let (x, y) = (s.group(GroupShape::Full), s.group(GroupShape::Full));
            let b = &(&x * &a) * &y;
            (0..=cap).all(|i| in_closure(&a, r, i).unwrap() == in_closure(&b, r, i).unwrap())
        }),
        sampled("grading_consistency", cfg, |seed| {
            let mut s = Sampler::new(ring, n, seed);
            let gamma = strata[s.index(strata.len())].gamma.clone();
            let report = classify(&s.orbit(&gamma), r).unwrap();
            report.stratum_index == Some(gamma.tail_sum()) && gamma.tail_sum() <= (n - 1) * r
        }),
    ])
}

fn dims_suite() -> Vec<PropertyResult> {
    let mut formulas = Vec::new();
    let mut chain = Vec::new();
    let mut ci = Vec::new();
    for n in 2..=4usize {
        for r in 1..=3usize {
            let len = n * r + 1;
            for i in 0..=n * r / 2 {
                let g = Cochar::subregular(n, r, i).unwrap();
                let label = format!("n={n} r={r} i={i}");
                let pairs_ok = stab_dim_oracle(&g, len, GroupShape::Full, GroupShape::Full)
                    == stab_dim_paper_full(i, n, r).unwrap()
                    && stab_dim_oracle(&g, len, GroupShape::P, GroupShape::PMinus)
                        == stab_dim_paper_parabolic(i, n, r).unwrap()
                    && stab_dim_oracle(&g, len, GroupShape::B, GroupShape::BMinus)
                        == stab_dim_paper_iwahori(i, n, r).unwrap()
                    && dim_matrix_orbit_oracle(&g, r) == dim_mat(n, r) - (n * r + 2 * i)
                    && dim_matrix_orbit_oracle_pair(&g, len, GroupShape::P, GroupShape::PMinus)
                        == dim_matrix_orbit_oracle(&g, r);
                formulas.push((label.clone(), pairs_ok));
                let lat = dim_lattice_orbit(&g, r).unwrap();
                let next_ok = i == n * r / 2
                    || dim_lattice_orbit(&Cochar::subregular(n, r, i + 1).unwrap(), r).unwrap() + 2 == lat;
                chain.push((label.clone(), lat.is_multiple_of(2) && next_ok && (i > 0 || lat == (n - 1) * n * r)));
                ci.push((label, ci_check(i, n, r).unwrap()));
            }
        }
    }
    vec![
        collect("stabilizer_formulas", formulas),
        collect("lattice_codimension_chain", chain),
        collect("complete_intersection_count", ci),
    ]
}

pub fn run(cfg: VerifyArgs) -> CmdResult {
    if cfg.n < 2 || cfg.r < 1 {
        return Err(Failure::Usage("need n ≥ 2 and r ≥ 1".into()));
    }
    let ring = WittRing::with_params(cfg.p, cfg.m, cfg.n * cfg.r + 1)?;
    let properties = match cfg.suite {
        Suite::Witt => witt_suite(&cfg, &ring),
        Suite::Snf => snf_suite(&cfg, &ring)?,
        Suite::Fac => fac_suite(&cfg)?,
        Suite::Strata => strata_suite(&cfg, &ring)?,
        Suite::Dims => dims_suite(),
        Suite::Tiny => {
            let census = point_count_oracle(cfg.jobs);
            vec![collect("point_count_census", [("p=2 n=2 r=1 N=3".to_string(), census.all_ok)])]
        }
    };
    let passed = properties.iter().all(|p| p.failures == 0);
    cfg.out.emit(&VerifyReport {
        suite: cfg.suite,
        p: cfg.p,
        m: cfg.m,
        n: cfg.n,
        r: cfg.r,
        seed: cfg.seed,
        samples: cfg.samples,
        properties,
        passed,
    });
    if passed {
        Ok(())
    } else {
        Err(Failure::Property)
    }
}
