//! Acceptance checks. Each test writes one `PASS`/`FAIL` line to stdout
//! (bypassing the harness capture) and then asserts.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{Binomial, ChiSquared, ContinuousCDF, Discrete};

use hyperlab::bounds::{earlier_violating_set, high_obeying_set, high_violating_set, max_spectrum_candidates};
use hyperlab::constructions::{cycle_pair_witness, double_path_pair};
use hyperlab::efgame::EfGame;
use hyperlab::exec::{map_indexed, Execution};
use hyperlab::extlab::{classify_pair, is_pair_strictly_balanced, poisson_parameter, PairClass};
use hyperlab::folang::{
    build_cycle_pair_property, build_dist_exact, holds, random_formula, Formula, ModelChecker, RandomFormulaConfig,
};
use hyperlab::hypercore::{count_copies, density, distance, is_strictly_balanced, shg, SearchCaps};
use hyperlab::randmodel::{
    estimate_probability, poisson_fit, sample, uncovered_copies_experiment, ExperimentConfig, Sampler,
};
use hyperlab::rational::{int, pow2, rat, Rational};
use hyperlab::{Hypergraph, Vertex};

fn report(id: u32, name: &str, ok: bool, detail: &str) {
    let line = format!("{} [{id}] {name}: {detail}\n", if ok { "PASS" } else { "FAIL" });
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
    assert!(ok, "{line}");
}

/// For a criterion whose stated coverage is out of reach: the line reads
/// `FAIL` regardless, but only the part that was actually run is asserted.
fn report_short_of(id: u32, name: &str, checked_ok: bool, detail: &str, shortfall: &str) {
    let line = format!("FAIL [{id}] {name}: {detail}; not met as stated: {shortfall}\n");
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
    assert!(checked_ok, "{line}");
}

fn h1() -> Hypergraph {
    Hypergraph::from_edges(3, [[1, 2, 3], [3, 4, 1]], []).unwrap()
}

fn h2() -> Hypergraph {
    Hypergraph::from_edges(3, [[1, 2, 3], [3, 4, 5], [5, 6, 1]], []).unwrap()
}

fn triples(n: Vertex) -> Vec<[Vertex; 3]> {
    let mut out = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                out.push([a, b, c]);
            }
        }
    }
    out
}

fn from_mask(n: Vertex, all: &[[Vertex; 3]], mask: u64) -> Hypergraph {
    let edges = (0..all.len()).filter(|i| mask >> i & 1 == 1).map(|i| all[i]);
    Hypergraph::from_edges(3, edges, 1..=n).unwrap()
}

/// Oracle: direct recursion over assignments, no memo, no compilation.
fn oracle(f: &Formula, g: &Hypergraph, env: &mut BTreeMap<String, Vertex>) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(vs) => {
            let vals: Vec<Vertex> = vs.iter().map(|v| env[v]).collect();
            let mut sorted = vals.clone();
            sorted.sort_unstable();
            sorted.dedup();
            sorted.len() == vals.len() && g.edges().any(|e| *e == sorted)
        }
        Formula::Eq(x, y) => env[x] == env[y],
        Formula::Not(a) => !oracle(a, g, env),
        Formula::And(a, b) => oracle(a, g, env) && oracle(b, g, env),
        Formula::Or(a, b) => oracle(a, g, env) || oracle(b, g, env),
        Formula::Implies(a, b) => !oracle(a, g, env) || oracle(b, g, env),
        Formula::Exists(x, a) | Formula::Forall(x, a) => {
            let want = matches!(f, Formula::Exists(..));
            let saved = env.get(x).copied();
            let mut res = !want;
            for v in g.vertices() {
                env.insert(x.clone(), v);
                if oracle(a, g, env) == want {
                    res = want;
                    break;
                }
            }
            match saved {
                Some(v) => env.insert(x.clone(), v),
                None => env.remove(x),
            };
            res
        }
    }
}

#[test]
fn criterion_1_evaluator_matches_oracle() {
    let start = Instant::now();
    let mut graphs = Vec::new();
    for n in 1..=5 {
        let all = triples(n);
        for mask in 0u64..1 << all.len() {
            if mask.count_ones() <= 4 {
                graphs.push(from_mask(n, &all, mask));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0001);
    let cfg = RandomFormulaConfig::closed(3, 3);
    let formulas: Vec<Formula> = (0..1000).map(|_| random_formula(&mut rng, &cfg)).collect();
    assert!(formulas.iter().all(|f| f.quantifier_depth() <= 3 && f.is_closed()));
    let mismatches: u64 = map_indexed(Execution::Parallel, graphs.len() as u64, |gi| {
        let g = &graphs[gi as usize];
        let mc = ModelChecker::new(g);
        formulas
            .iter()
            .filter(|f| mc.check(f, &BTreeMap::new()).unwrap() != oracle(f, g, &mut BTreeMap::new()))
            .count() as u64
    })
    .into_iter()
    .sum();
    let t = start.elapsed();
    let checks = graphs.len() * formulas.len();
    report(
        1,
        "evaluator vs assignment oracle",
        mismatches == 0 && t < Duration::from_secs(120),
        &format!("{} graphs x {} formulas = {checks} checks, {mismatches} mismatches, {:.1}s", graphs.len(), formulas.len(), t.as_secs_f64()),
    );
}

fn clog2(i: usize) -> usize {
    if i <= 1 {
        0
    } else {
        (usize::BITS - (i - 1).leading_zeros()) as usize
    }
}

fn dist_failures(g: &Hypergraph, exact: &[Formula]) -> u64 {
    let mc = ModelChecker::new(g);
    let mut bad = 0;
    for (i, f) in exact.iter().enumerate() {
        for (xy, val) in mc.check_all(f, &["x1", "x2"]).unwrap() {
            let d = distance(g, xy[0], xy[1]).unwrap();
            if val != (d == Some(i as u32 + 1)) {
                bad += 1;
            }
        }
    }
    bad
}

#[test]
fn criterion_2_distance_formulas() {
    let start = Instant::now();
    let exact: Vec<Formula> = (1..=4).map(|i| build_dist_exact(i, 3).unwrap()).collect();
    let mut graphs = 0u64;
    let mut failures = 0u64;
    for n in 1..=5 {
        let all = triples(n);
        let count = 1u64 << all.len();
        graphs += count;
        failures += map_indexed(Execution::Parallel, count, |mask| dist_failures(&from_mask(n, &all, mask), &exact))
            .into_iter()
            .sum::<u64>();
    }
    // Six and seven vertices: random hypergraphs over a spread of edge densities.
    let random = 2_000u64;
    for n in [6, 7] {
        let all = triples(n);
        failures += map_indexed(Execution::Parallel, random, |t| {
            let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0002 ^ (n as u64) << 32 ^ t);
            let p = [0.05, 0.1, 0.15, 0.25, 0.4][t as usize % 5];
            let mask = (0..all.len()).filter(|_| rng.random_bool(p)).fold(0u64, |m, i| m | 1 << i);
            dist_failures(&from_mask(n, &all, mask), &exact)
        })
        .into_iter()
        .sum::<u64>();
    }
    let mut depth_bad = 0;
    for s in 3..=5 {
        for i in 1..=32 {
            if build_dist_exact(i, s).unwrap().quantifier_depth() != clog2(i) + s - 2 {
                depth_bad += 1;
            }
        }
    }
    report_short_of(
        2,
        "distance formula semantics and depth",
        failures == 0 && depth_bad == 0,
        &format!(
            "exhaustive on {graphs} labelled hypergraphs with <= 5 vertices plus {random} random ones each on 6 and 7 vertices, i <= 4: {failures} failures; depth formula for i <= 32, s in 3..=5: {depth_bad} failures; {:.1}s",
            start.elapsed().as_secs_f64()
        ),
        "exhaustive coverage of 7 vertices means 2^35 labelled hypergraphs",
    );
}

fn random_graph(rng: &mut ChaCha8Rng, max_v: Vertex) -> Hypergraph {
    let n = rng.random_range(1..=max_v);
    let p = rng.random_range(0.1..0.7);
    let edges: Vec<[Vertex; 3]> = triples(n).into_iter().filter(|_| rng.random_bool(p)).collect();
    Hypergraph::from_edges(3, edges, 1..=n).unwrap()
}

#[test]
fn criterion_3_game_soundness() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0003);
    let mut cases = Vec::new();
    for i in 0..200 {
        let g = random_graph(&mut rng, 5);
        // A quarter of the pairs are relabelled or lightly edited copies, so
        // both outcomes occur often.
        let h = match i % 4 {
            0 => {
                let vs: Vec<Vertex> = g.vertices().collect();
                let mut perm = vs.clone();
                perm.rotate_left(1);
                g.relabel(&vs.iter().copied().zip(perm).collect()).unwrap()
            }
            1 => {
                let mut h = g.clone();
                h.add_vertex(g.max_label().unwrap_or(0) + 1);
                h
            }
            _ => random_graph(&mut rng, 5),
        };
        let k = rng.random_range(1..=3);
        let seed: u64 = rng.random();
        cases.push((g, h, k, seed));
    }
    let results = map_indexed(Execution::Parallel, cases.len() as u64, |i| {
        let (g, h, k, seed) = &cases[i as usize];
        let out = EfGame::new(g, h, *k).unwrap().solve();
        if out.duplicator_wins {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let cfg = RandomFormulaConfig::closed(3, *k);
            let (mg, mh) = (ModelChecker::new(g), ModelChecker::new(h));
            let agree = (0..500).all(|_| {
                let f = random_formula(&mut rng, &cfg);
                mg.check(&f, &BTreeMap::new()).unwrap() == mh.check(&f, &BTreeMap::new()).unwrap()
            });
            (false, agree)
        } else {
            let f = out.formula.expect("spoiler win carries a formula");
            let ok = f.is_closed() && f.quantifier_depth() <= *k && holds(&f, g).unwrap() && !holds(&f, h).unwrap();
            (true, ok)
        }
    });
    let spoiler = results.iter().filter(|r| r.0).count();
    let bad = results.iter().filter(|r| !r.1).count();
    let t = start.elapsed();
    report(
        3,
        "game soundness",
        bad == 0 && t < Duration::from_secs(600),
        &format!(
            "{} pairs: {spoiler} Spoiler wins with verified formulas, {} Duplicator wins checked on 500 formulas each; {bad} failures; {:.1}s",
            results.len(),
            results.len() - spoiler,
            t.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_4_construction_identities() {
    let mut notes = Vec::new();
    let w = double_path_pair(3, 1, 2).unwrap();
    let (g, h) = (w.pair.outer(), w.pair.inner());
    let a_ok = w.alpha == rat(7, 4);
    let rho_ok = density(h).unwrap() == rat(4, 7) && w.pair.density().unwrap() == rat(4, 7);
    let bal_ok = is_strictly_balanced(h).unwrap() && is_pair_strictly_balanced(&w.pair).unwrap();
    let neutral = classify_pair(&w.pair, &w.alpha).unwrap() == PairClass::Neutral;
    notes.push(format!("double-path pair v(H)={} v(G)={}: α=7/4 {a_ok}, ρ=4/7 {rho_ok}, balanced {bal_ok}, neutral {neutral}", h.v(), g.v()));

    let c = cycle_pair_witness(3, 4, 2, 2).unwrap();
    let c_ok = density(&c.h).unwrap() == rat(5, 9) && c.alpha == rat(9, 5) && c.alpha == density(&c.h).unwrap().recip();
    let f = build_cycle_pair_property(3, 4, 2, 2).unwrap();
    let depth_ok = f.quantifier_depth() <= 4;
    let sat = holds(&f, &c.h).unwrap();
    let unsat = !holds(&f, &Hypergraph::empty(3, c.h.v()).unwrap()).unwrap();
    notes.push(format!(
        "cycle-pair witness: ρ=5/9=1/α {c_ok}, depth {} <= 4 {depth_ok}, H ⊨ L {sat}, edgeless ⊭ L {unsat}",
        f.quantifier_depth()
    ));
    report(
        4,
        "construction identities",
        a_ok && rho_ok && bal_ok && neutral && c_ok && depth_ok && sat && unsat,
        &notes.join("; "),
    );
}

#[test]
fn criterion_5_threshold() {
    let start = Instant::now();
    let motif = h1();
    let contains = |g: &Hypergraph| Ok(count_copies(&motif, g)? > 0);
    let below = ExperimentConfig::with_alpha(3, 60, rat(5, 2), 200, 5).unwrap();
    let above = ExperimentConfig::with_alpha(3, 60, rat(3, 2), 200, 5).unwrap();
    let lo = estimate_probability(&below, contains).unwrap().estimates[0];
    let hi = estimate_probability(&above, contains).unwrap().estimates[0];
    let t = start.elapsed();
    report(
        5,
        "threshold reproduction",
        lo < 0.05 && hi > 0.95 && t < Duration::from_secs(300),
        &format!("Pr(contains H1) = {lo:.3} at α=5/2, {hi:.3} at α=3/2 (n=60, 200 trials), {:.1}s", t.as_secs_f64()),
    );
}

#[test]
fn criterion_6_poisson_limits() {
    let edge = Hypergraph::from_edges(3, [[1, 2, 3]], []).unwrap();
    let cfg = ExperimentConfig::with_alpha(3, 100, int(3), 2000, 6).unwrap();
    let single = poisson_fit(&cfg, &[edge], SearchCaps::default()).unwrap();
    let tv1 = single.tv_distance.unwrap();
    let cfg = ExperimentConfig::with_alpha(3, 150, int(2), 2000, 6).unwrap();
    let joint = poisson_fit(&cfg, &[h1(), h2()], SearchCaps::default()).unwrap();
    let tv2 = joint.tv_distance.unwrap();
    let corr = joint.correlations[0];
    let corr_ok = corr.is_none_or(|c| c.abs() <= 0.1);
    report(
        6,
        "Poisson limits",
        tv1 <= 0.05 && tv2 <= 0.08 && corr_ok,
        &format!(
            "single edge n=100: TV {tv1:.4} (mean {:.4} vs 1/6); H1,H2 n=150: TV {tv2:.4}, correlation {corr:?}, means {:.3}/{:.3} vs 1/4, 1/6",
            single.estimates[0], joint.estimates[0], joint.estimates[1]
        ),
    );
}

#[test]
fn criterion_7_uncovered_copies_trend() {
    let start = Instant::now();
    let w = double_path_pair(3, 1, 2).unwrap();
    let par = poisson_parameter(&w.pair).unwrap();
    let mut tvs = Vec::new();
    let mut means = Vec::new();
    for n in [200, 400] {
        let cfg = ExperimentConfig::with_alpha(3, n, w.alpha.clone(), 500, 7).unwrap();
        let r = uncovered_copies_experiment(&w.pair, &cfg, SearchCaps::default()).unwrap();
        tvs.push(r.tv_distance.unwrap());
        means.push(r.estimates[0]);
    }
    report(
        7,
        "uncovered-copy trend",
        tvs[1] <= tvs[0],
        &format!(
            "a(H)={} a1={} a2={} λ={:.3e}; TV {:.4} at n=200, {:.4} at n=400 (means {:.4}, {:.4}), {:.1}s",
            par.a_h,
            par.a1,
            par.a2,
            par.lambda(),
            tvs[0],
            tvs[1],
            means[0],
            means[1],
            start.elapsed().as_secs_f64()
        ),
    );
}

fn near_top(s: usize, x: i64) -> Rational {
    int(s as i64 - 1) - rat(1, x)
}

#[test]
fn criterion_8_bounds_consistency() {
    let mut checked = 0;
    let mut bad = Vec::new();
    for s in 3..=4usize {
        for k in s + 1..=s + 8 {
            let obey = high_obeying_set(s, k, 16).unwrap();
            let viol = high_violating_set(s, k).unwrap();
            if obey.iter().any(|a| viol.binary_search(a).is_ok()) {
                bad.push(format!("overlap s={s} k={k}"));
            }
            let top: i64 = (pow2((k - s + 2) as u32)).try_into().unwrap();
            if viol.last() != Some(&near_top(s, top - 3)) {
                bad.push(format!("max violating s={s} k={k}"));
            }
            let cand = max_spectrum_candidates(s, k).unwrap();
            if cand != (near_top(s, top - 3), near_top(s, top - 2)) {
                bad.push(format!("candidates s={s} k={k}"));
            }
            if k >= s + 4 && !earlier_violating_set(s, k).unwrap().iter().all(|a| viol.binary_search(a).is_ok()) {
                bad.push(format!("older family not contained s={s} k={k}"));
            }
            checked += 1;
        }
    }
    report(
        8,
        "bounds consistency",
        bad.is_empty(),
        &format!("{checked} (s, k) cases with b <= 16; problems: {bad:?}"),
    );
}

#[test]
fn criterion_9_sampler() {
    let cfg = ExperimentConfig::with_probability(3, 40, 0.05, 1, 9).unwrap();
    let a: Vec<String> = (0..50).map(|t| shg::to_string(&sample(&cfg, t).unwrap())).collect();
    let b: Vec<String> = (0..50).map(|t| shg::to_string(&sample(&cfg, t).unwrap())).collect();
    let smp = Sampler::new(3, 40).unwrap();
    let par = map_indexed(Execution::Parallel, 50, |t| shg::to_string(&smp.sample(0.05, 9, t)));
    let identical = a == b && a == par;

    let smp = Sampler::new(3, 20).unwrap();
    let (p, trials) = (0.1, 2000u64);
    let counts = map_indexed(Execution::Parallel, trials, |t| smp.sample(p, 2024, t).e() as u64);
    let binom = Binomial::new(p, smp.subsets()).unwrap();
    // Bins with expected count >= 5, tails merged into the end bins.
    let lo = (0..).find(|&c| binom.pmf(c) * (trials as f64) >= 5.0).unwrap();
    let hi = (lo..).find(|&c| binom.pmf(c + 1) * (trials as f64) < 5.0).unwrap();
    let mut obs = vec![0f64; (hi - lo + 1) as usize];
    for &c in &counts {
        obs[(c.clamp(lo, hi) - lo) as usize] += 1.0;
    }
    let mut stat = 0.0;
    for (i, o) in obs.iter().enumerate() {
        let c = lo + i as u64;
        let prob = if c == lo {
            (0..=lo).map(|x| binom.pmf(x)).sum::<f64>()
        } else if c == hi {
            1.0 - (0..hi).map(|x| binom.pmf(x)).sum::<f64>()
        } else {
            binom.pmf(c)
        };
        let e = prob * trials as f64;
        stat += (o - e).powi(2) / e;
    }
    let df = (obs.len() - 1) as f64;
    let pval = 1.0 - ChiSquared::new(df).unwrap().cdf(stat);
    let mean = counts.iter().sum::<u64>() as f64 / trials as f64;
    report(
        9,
        "sampler determinism and edge-count law",
        identical && pval > 0.001,
        &format!("50 samples byte-identical across reruns and policies: {identical}; edge count mean {mean:.2} vs 114, chi-square {stat:.1} on {df} df, p = {pval:.3}"),
    );
}
