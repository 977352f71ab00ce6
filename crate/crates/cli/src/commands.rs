use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use hyperlab::bounds::{
    bound_table, high_obeying_set, high_violating_set, in_exceptional_set, max_spectrum_candidates, SpectrumBound,
};
use hyperlab::constructions::{cycle_pair_witness, double_path_pair_with_cap};
use hyperlab::efgame::EfGame;
use hyperlab::exec::Execution;
use hyperlab::extlab::{
    classify_pair_with_cap, count_maximal_extensions, cyclic_density_bound, f_alpha, find_m_decomposition,
    in_cyclic_class, is_cyclically_m_maximal, match_cyclic_extension, strict_extensions,
};
use hyperlab::folang::{holds, parse, parse_with_arity, Assignment, Formula, ModelChecker};
use hyperlab::hypercore::{
    density, distance, max_density_with_cap, shg, strictly_balanced_with_cap, SearchCaps,
};
use hyperlab::randmodel::{
    estimate_probability, poisson_fit, spectrum_probe, uncovered_copies_experiment, ExperimentConfig,
};
use hyperlab::rational::{format_rational, parse_rational, Rational};
use hyperlab::{Error, Hypergraph, Result, RootedPair, Vertex};
use serde::Serialize;
use serde_json::{json, Value};

use crate::{Cli, Command, Construct, ModelArgs, PairArgs, PropertyArgs, SCHEMA};

/// `{num, den}` with integers when they fit, decimal strings otherwise.
pub fn rat_json(r: &Rational) -> Value {
    let part = |x: String| -> Value {
        match x.parse::<i64>() {
            Ok(v) => json!(v),
            Err(_) => json!(x),
        }
    };
    json!({ "num": part(r.numer().to_string()), "den": part(r.denom().to_string()) })
}

fn document(command: &str, body: Value) -> String {
    let mut obj = serde_json::Map::new();
    obj.insert("schema".into(), json!(SCHEMA));
    obj.insert("command".into(), json!(command));
    if let Value::Object(m) = body {
        obj.extend(m);
    } else {
        obj.insert("result".into(), body);
    }
    serde_json::to_string_pretty(&Value::Object(obj)).expect("values serialise")
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("values serialise")
}

fn read(path: &Path) -> Result<Hypergraph> {
    shg::read(path)
}

fn load_pair(p: &PairArgs) -> Result<RootedPair> {
    let outer = read(&p.outer)?;
    match (&p.inner, &p.roots) {
        (Some(inner), _) => RootedPair::nested(outer, read(inner)?),
        (None, Some(roots)) => RootedPair::induced(outer, roots),
        (None, None) => Err(Error::Parameter("give --inner or --roots".into())),
    }
}

fn edges_json(g: &Hypergraph) -> Value {
    json!({
        "vertices": g.vertices().collect::<Vec<_>>(),
        "edges": g.edges().collect::<Vec<_>>(),
    })
}

fn map_json(m: &BTreeMap<Vertex, Vertex>) -> Value {
    Value::Object(m.iter().map(|(k, v)| (k.to_string(), json!(v))).collect())
}

fn exec(cli: &Cli) -> Execution {
    if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn model_config(cli: &Cli, m: &ModelArgs) -> Result<ExperimentConfig> {
    let cfg = match (&m.alpha, m.p) {
        (Some(a), _) => ExperimentConfig::with_alpha(m.s, m.n, parse_rational(a)?, m.trials, cli.seed)?,
        (None, Some(p)) => ExperimentConfig::with_probability(m.s, m.n, p, m.trials, cli.seed)?,
        (None, None) => return Err(Error::Parameter("give --alpha or --p".into())),
    };
    Ok(cfg.execution(exec(cli)))
}

enum Property {
    Motif(Hypergraph),
    Formula(Formula),
}

impl Property {
    fn load(p: &PropertyArgs, s: usize) -> Result<Self> {
        match (&p.motif, &p.formula) {
            (Some(m), _) => Ok(Property::Motif(read(m)?)),
            (None, Some(f)) => {
                let f = parse_with_arity(f, s)?;
                if !f.is_closed() {
                    return Err(Error::Parameter("the property formula must be closed".into()));
                }
                Ok(Property::Formula(f))
            }
            (None, None) => Err(Error::Parameter("give --motif or --formula".into())),
        }
    }

    fn check(&self, g: &Hypergraph, caps: SearchCaps) -> Result<bool> {
        match self {
            Property::Motif(m) => Ok(caps.count_copies(m, g)? > 0),
            Property::Formula(f) => holds(f, g),
        }
    }
}

fn parse_alphas(v: &[String]) -> Result<Vec<Rational>> {
    v.iter().map(|a| parse_rational(a)).collect()
}

fn bound_row(r: &SpectrumBound) -> Value {
    let v = rat_json(&r.value);
    json!({
        "bound": r.label,
        "kind": r.kind,
        "relation": r.relation,
        "measure": r.measure,
        "params": { "s": r.s, "k": r.k },
        "value_num": v["num"],
        "value_den": v["den"],
        "value": format_rational(&r.value),
        "needs_unknown_constant": r.needs_unknown_constant,
    })
}

fn rational_list(v: &[Rational]) -> Value {
    json!(v.iter().map(format_rational).collect::<Vec<_>>())
}

fn write_shg(path: &Path, suffix: &str, g: &Hypergraph) -> Result<String> {
    let mut name = path.as_os_str().to_owned();
    name.push(suffix);
    let p = PathBuf::from(name);
    shg::write(&p, g)?;
    Ok(p.display().to_string())
}

pub fn run(cli: &Cli) -> Result<String> {
    let caps = SearchCaps::new(cli.search_cap);
    match &cli.command {
        Command::Density { file, max } => {
            let g = read(file)?;
            if *max {
                let (rho, w) = max_density_with_cap(&g, cli.enum_cap)?;
                let mut body = rat_json(&rho);
                body["witness"] = edges_json(&w);
                Ok(document("density", body))
            } else {
                Ok(document("density", rat_json(&density(&g)?)))
            }
        }
        Command::Balance { file } => {
            let g = read(file)?;
            let (rho_max, _) = max_density_with_cap(&g, cli.enum_cap)?;
            Ok(document(
                "balance",
                json!({
                    "strictly_balanced": strictly_balanced_with_cap(&g, cli.enum_cap)?,
                    "density": rat_json(&density(&g)?),
                    "max_density": rat_json(&rho_max),
                }),
            ))
        }
        Command::ClassifyPair { pair, alpha } => {
            let pair = load_pair(pair)?;
            let alpha = parse_rational(alpha)?;
            let class = classify_pair_with_cap(&pair, &alpha, cli.enum_cap)?;
            Ok(document(
                "classify-pair",
                json!({
                    "alpha": format_rational(&alpha),
                    "class": class.name(),
                    "f_alpha": rat_json(&f_alpha(&pair, &alpha)),
                    "v_diff": pair.v_diff(),
                    "e_diff": pair.e_diff(),
                }),
            ))
        }
        Command::Copies { motif, host } => {
            let (m, h) = (read(motif)?, read(host)?);
            Ok(document(
                "copies",
                json!({
                    "copies": caps.count_copies(&m, &h)?.to_string(),
                    "induced_copies": caps.count_induced_copies(&m, &h)?.to_string(),
                    "embeddings": caps.count_embeddings(&m, &h)?.to_string(),
                    "automorphisms": caps.automorphism_count(&m)?.to_string(),
                }),
            ))
        }
        Command::Distance { file, x, y } => {
            let g = read(file)?;
            Ok(document("distance", json!({ "x": x, "y": y, "distance": distance(&g, *x, *y)? })))
        }
        Command::Parse { formula, arity } => {
            let f = match arity {
                Some(s) => parse_with_arity(formula, *s)?,
                None => parse(formula)?,
            };
            Ok(document(
                "parse",
                json!({
                    "formula": f.to_string(),
                    "depth": f.quantifier_depth(),
                    "free_vars": f.free_vars(),
                    "closed": f.is_closed(),
                    "size": f.size(),
                }),
            ))
        }
        Command::Depth { formula } => {
            let f = parse(formula)?;
            Ok(document("depth", json!({ "depth": f.quantifier_depth() })))
        }
        Command::Eval { graph, formula, assign } => {
            let g = read(graph)?;
            let f = parse_with_arity(formula, g.arity())?;
            let mut a = Assignment::new();
            for item in assign {
                let (var, val) = item
                    .split_once('=')
                    .ok_or_else(|| Error::Parameter(format!("assignment `{item}` is not var=vertex")))?;
                let v: Vertex = val
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parameter(format!("`{val}` is not a vertex label")))?;
                a.insert(var.trim().to_string(), v);
            }
            let value = ModelChecker::new(&g).check(&f, &a)?;
            Ok(document("eval", json!({ "value": value, "depth": f.quantifier_depth() })))
        }
        Command::Game { left, right, rounds, formula } => {
            let (g, h) = (read(left)?, read(right)?);
            let out = EfGame::new(&g, &h, *rounds)?.solve();
            let mut body = json!({
                "winner": if out.duplicator_wins { "duplicator" } else { "spoiler" },
                "rounds": rounds,
                "rules": out.rules,
            });
            if let Some(f) = &out.formula {
                // The formula is re-checked on both sides before it is reported.
                let verified = f.quantifier_depth() <= *rounds && holds(f, &g)? && !holds(f, &h)?;
                if !verified {
                    return Err(Error::Verification("extracted formula does not distinguish the pair".into()));
                }
                body["verified"] = json!(verified);
                if *formula {
                    body["formula"] = json!(f.to_string());
                    body["formula_depth"] = json!(f.quantifier_depth());
                }
            }
            Ok(document("game", body))
        }
        Command::Extension { pair, host, tuple, alpha, r } => {
            let template = load_pair(pair)?;
            let host = read(host)?;
            let maps = strict_extensions(&template, &host, tuple)?;
            let mut body = json!({
                "tuple": tuple,
                "count": maps.len(),
                "extensions": maps.iter().map(map_json).collect::<Vec<_>>(),
            });
            if let (Some(a), Some(r)) = (alpha, r) {
                let a = parse_rational(a)?;
                body["alpha"] = json!(format_rational(&a));
                body["r"] = json!(r);
                body["maximal_count"] = json!(count_maximal_extensions(&template, &host, tuple, &a, *r)?.to_string());
            }
            Ok(document("extension", body))
        }
        Command::Cyclic { pair, m, host } => {
            let pair = load_pair(pair)?;
            let pattern = match_cyclic_extension(&pair, *m)?;
            let mut body = json!({
                "m": m,
                "density_bound": format_rational(&cyclic_density_bound(pair.outer().arity(), *m)?),
                "pattern": pattern.as_ref().map(to_value),
            });
            if let Some(h) = host {
                body["cyclically_maximal"] = json!(is_cyclically_m_maximal(&pair, &read(h)?, *m)?);
            }
            Ok(document("cyclic", body))
        }
        Command::Decompose { file, m, root } => {
            let g = read(file)?;
            let root = match root {
                Some(r) => *r,
                None => g.vertices().next().ok_or_else(|| Error::Domain("empty hypergraph".into()))?,
            };
            let chain = find_m_decomposition(&g, *m, root)?;
            Ok(document(
                "decompose",
                json!({
                    "m": m,
                    "root": root,
                    "in_class": in_cyclic_class(&g, *m)?,
                    "chain": chain.map(|c| c.iter().map(edges_json).collect::<Vec<_>>()),
                }),
            ))
        }
        Command::Sample { s, n, alpha, p, trial, shg: as_shg } => {
            let m = ModelArgs { s: *s, n: *n, alpha: alpha.clone(), p: *p, trials: 1 };
            let cfg = model_config(cli, &m)?;
            let g = hyperlab::randmodel::sample(&cfg, *trial)?;
            if *as_shg {
                return Ok(shg::to_string(&g));
            }
            Ok(document(
                "sample",
                json!({
                    "config": to_value(&cfg),
                    "seed": cfg.seed,
                    "trial": trial,
                    "e": g.e(),
                    "edges": g.edges().collect::<Vec<_>>(),
                }),
            ))
        }
        Command::Scan { property, s, n, alphas, trials } => {
            let prop = Property::load(property, *s)?;
            let mut reports = Vec::new();
            for a in parse_alphas(alphas)? {
                let cfg = ExperimentConfig::with_alpha(*s, *n, a, *trials, cli.seed)?.execution(exec(cli));
                reports.push(to_value(&estimate_probability(&cfg, |g| prop.check(g, caps))?));
            }
            Ok(document("scan", json!({ "seed": cli.seed, "reports": reports })))
        }
        Command::Poisson { motifs, model } => {
            let cfg = model_config(cli, model)?;
            let ms = motifs.iter().map(|m| read(m)).collect::<Result<Vec<_>>>()?;
            Ok(document("poisson", to_value(&poisson_fit(&cfg, &ms, caps)?)))
        }
        Command::Uncovered { pair, n, alpha, trials } => {
            let pair = load_pair(pair)?;
            let alpha = match alpha {
                Some(a) => parse_rational(a)?,
                None => density(pair.inner())?.recip(),
            };
            let cfg = ExperimentConfig::with_alpha(pair.outer().arity(), *n, alpha, *trials, cli.seed)?
                .execution(exec(cli));
            Ok(document("uncovered", to_value(&uncovered_copies_experiment(&pair, &cfg, caps)?)))
        }
        Command::Probe { property, s, alphas, ns, trials, csv } => {
            let prop = Property::load(property, *s)?;
            let r = spectrum_probe(*s, &parse_alphas(alphas)?, ns, *trials, cli.seed, exec(cli), |g| {
                prop.check(g, caps)
            })?;
            if *csv {
                return Ok(r.to_csv());
            }
            Ok(document("probe", to_value(&r)))
        }
        Command::Bounds { s, k, max_candidates, qk, obeying, violating, table: _ } => {
            let (s, k) = (*s, *k);
            if *max_candidates {
                let (a, b) = max_spectrum_candidates(s, k)?;
                let rows: Vec<Value> = bound_table(s, k)?
                    .iter()
                    .filter(|r| r.value == a || r.value == b)
                    .filter(|r| r.label.starts_with("max_point_candidate"))
                    .map(bound_row)
                    .collect();
                return Ok(document("bounds", json!({ "rows": rows })));
            }
            if let Some(a) = qk {
                let alpha = parse_rational(a)?;
                return Ok(document(
                    "bounds",
                    json!({
                        "params": { "s": s, "k": k },
                        "alpha": format_rational(&alpha),
                        "in_q_k": in_exceptional_set(s, k, &alpha)?,
                    }),
                ));
            }
            if let Some(b) = obeying {
                let set = high_obeying_set(s, k, *b)?;
                return Ok(document("bounds", json!({ "params": { "s": s, "k": k, "b_max": b }, "obeying": rational_list(&set) })));
            }
            if *violating {
                let set = high_violating_set(s, k)?;
                return Ok(document("bounds", json!({ "params": { "s": s, "k": k }, "violating": rational_list(&set) })));
            }
            let rows: Vec<Value> = bound_table(s, k)?.iter().map(bound_row).collect();
            Ok(document("bounds", json!({ "rows": rows })))
        }
        Command::Construct { which } => construct(cli, which),
    }
}

fn construct(cli: &Cli, which: &Construct) -> Result<String> {
    match which {
        Construct::DoublePath { s, l, m, out } => {
            let w = double_path_pair_with_cap(*s, *l, *m, cli.enum_cap)?;
            let (g, h) = (w.pair.outer(), w.pair.inner());
            let mut body = json!({
                "alpha": format_rational(&w.alpha),
                "labels": { "a": w.a, "b": w.b, "z": w.z, "middles": w.middles },
                "h": shg::to_string(h),
                "g": shg::to_string(g),
                "verification": {
                    "v_h": h.v(), "e_h": h.e(), "v_g": g.v(), "e_g": g.e(),
                    "density_h": format_rational(&density(h)?),
                    "density_pair": format_rational(&w.pair.density()?),
                    "inverse_alpha": format_rational(&w.alpha.recip()),
                    "balance_checked": w.balance_checked,
                },
            });
            if let Some(p) = out {
                body["files"] = json!([write_shg(p, ".h.shg", h)?, write_shg(p, ".g.shg", g)?]);
            }
            Ok(document("construct", body))
        }
        Construct::CyclePair { s, k, a1, a2, out } => {
            let w = cycle_pair_witness(*s, *k, *a1, *a2)?;
            let mut body = json!({
                "alpha": format_rational(&w.alpha),
                "a": w.a,
                "hub": w.hub,
                "h": shg::to_string(&w.h),
                "h1": shg::to_string(&w.h1),
                "h2": shg::to_string(&w.h2),
                "verification": {
                    "v_h": w.h.v(), "e_h": w.h.e(),
                    "density_h": format_rational(&density(&w.h)?),
                    "inverse_alpha": format_rational(&w.alpha.recip()),
                },
            });
            if let Some(p) = out {
                body["files"] = json!([write_shg(p, ".shg", &w.h)?]);
            }
            Ok(document("construct", body))
        }
    }
}
