use rand::Rng;

use super::Formula;

/// Shape of randomly generated formulas.
#[derive(Debug, Clone)]
pub struct RandomFormulaConfig {
    pub arity: usize,
    pub max_depth: usize,
    /// Names available to quantifiers; re-binding an in-scope name is allowed.
    pub pool: Vec<String>,
    /// Free variables that leaves may use in addition to bound ones.
    pub free: Vec<String>,
    /// Rough bound on the number of connective nodes.
    pub max_size: usize,
}

impl RandomFormulaConfig {
    /// Closed formulas of depth at most `max_depth` over `x0..x{depth}`.
    pub fn closed(arity: usize, max_depth: usize) -> Self {
        RandomFormulaConfig {
            arity,
            max_depth,
            pool: (0..=max_depth).map(|i| format!("x{i}")).collect(),
            free: Vec::new(),
            max_size: 12,
        }
    }
}

pub fn random_formula<R: Rng + ?Sized>(rng: &mut R, cfg: &RandomFormulaConfig) -> Formula {
    let mut budget = cfg.max_size;
    let scope = cfg.free.clone();
    gen(rng, cfg, cfg.max_depth, &scope, &mut budget)
}

fn leaf<R: Rng + ?Sized>(rng: &mut R, cfg: &RandomFormulaConfig, scope: &[String]) -> Formula {
    if scope.is_empty() || rng.random_ratio(1, 12) {
        return if rng.random_bool(0.5) {
            Formula::True
        } else {
            Formula::False
        };
    }
    let pick = |rng: &mut R| scope[rng.random_range(0..scope.len())].clone();
    if rng.random_bool(0.6) {
        Formula::Atom((0..cfg.arity).map(|_| pick(rng)).collect())
    } else {
        Formula::Eq(pick(rng), pick(rng))
    }
}

fn gen<R: Rng + ?Sized>(
    rng: &mut R,
    cfg: &RandomFormulaConfig,
    depth: usize,
    scope: &[String],
    budget: &mut usize,
) -> Formula {
    let can_quantify = depth > 0 && !cfg.pool.is_empty();
    if *budget == 0 || (!scope.is_empty() && rng.random_ratio(1, 4)) {
        if scope.is_empty() && can_quantify {
            return quantify(rng, cfg, depth, scope, budget);
        }
        return leaf(rng, cfg, scope);
    }
    *budget -= 1;
    match rng.random_range(0..7) {
        0 => gen(rng, cfg, depth, scope, budget).not(),
        1 => gen(rng, cfg, depth, scope, budget).and(gen(rng, cfg, depth, scope, budget)),
        2 => gen(rng, cfg, depth, scope, budget).or(gen(rng, cfg, depth, scope, budget)),
        3 => gen(rng, cfg, depth, scope, budget).implies(gen(rng, cfg, depth, scope, budget)),
        _ if can_quantify => quantify(rng, cfg, depth, scope, budget),
        _ => leaf(rng, cfg, scope),
    }
}

fn quantify<R: Rng + ?Sized>(
    rng: &mut R,
    cfg: &RandomFormulaConfig,
    depth: usize,
    scope: &[String],
    budget: &mut usize,
) -> Formula {
    let v = cfg.pool[rng.random_range(0..cfg.pool.len())].clone();
    let mut inner = scope.to_vec();
    if !inner.contains(&v) {
        inner.push(v.clone());
    }
    let body = gen(rng, cfg, depth - 1, &inner, budget);
    if rng.random_bool(0.5) {
        Formula::Exists(v, Box::new(body))
    } else {
        Formula::Forall(v, Box::new(body))
    }
}
