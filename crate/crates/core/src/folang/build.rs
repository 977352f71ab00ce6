//! The distance formulas and the two non-convergent properties.

use super::Formula;
use crate::{Error, Result};

/// Builds formulas for a fixed arity. Every quantifier introduced by the
/// builder binds a fresh name (`base_n`), so instances never capture each
/// other's variables; equal calls on equal builders give equal trees.
#[derive(Debug, Clone)]
pub struct FormulaBuilder {
    s: usize,
    next: usize,
}

fn check_arity(s: usize) -> Result<()> {
    if s < 3 {
        return Err(Error::Parameter(format!("arity s = {s} must be at least 3")));
    }
    Ok(())
}

impl FormulaBuilder {
    pub fn new(s: usize) -> Result<Self> {
        check_arity(s)?;
        Ok(FormulaBuilder { s, next: 0 })
    }

    pub fn arity(&self) -> usize {
        self.s
    }

    pub fn fresh(&mut self, base: &str) -> String {
        self.next += 1;
        format!("{base}_{}", self.next)
    }

    /// `∃y_1..∃y_r (N(fixed, y_1..y_r) ∧ ⋀ y_i ≠ e)` for `e` in `excluded`,
    /// with `r = s − |fixed|`.
    pub fn edge_through(&mut self, fixed: &[&str], excluded: &[&str]) -> Formula {
        let extra: Vec<String> = (fixed.len()..self.s).map(|_| self.fresh("y")).collect();
        let mut args: Vec<&str> = fixed.to_vec();
        args.extend(extra.iter().map(String::as_str));
        let mut parts = vec![Formula::atom(&args)];
        for y in &extra {
            for e in excluded {
                parts.push(Formula::neq(y, e));
            }
        }
        Formula::exists_all(&extra, Formula::conj(parts))
    }

    /// `D_i(x, y)`: distance at most `i`.
    pub fn dist_le(&mut self, i: usize, x: &str, y: &str) -> Formula {
        assert!(i >= 1, "D_i needs i >= 1");
        if i == 1 {
            let edge = self.edge_through(&[x, y], &[]);
            return Formula::eq(x, y).or(edge);
        }
        let mid = self.fresh("w");
        let left = self.dist_le(i / 2, x, &mid);
        let right = self.dist_le(i.div_ceil(2), &mid, y);
        Formula::exists(&mid, left.and(right))
    }

    /// `D^=_i(x, y)`: distance exactly `i`. `i = 0` gives `x = y`.
    pub fn dist_eq(&mut self, i: usize, x: &str, y: &str) -> Formula {
        match i {
            0 => Formula::eq(x, y),
            1 => self.dist_le(1, x, y).and(Formula::eq(x, y).not()),
            _ => {
                let le = self.dist_le(i, x, y);
                let below = self.dist_le(i - 1, x, y);
                le.and(below.not())
            }
        }
    }

    /// `D^=_{i,j}(x, y, z) = D^=_i(x, z) ∧ D^=_j(z, y)`.
    pub fn dist_pair(&mut self, i: usize, j: usize, x: &str, y: &str, z: &str) -> Formula {
        let first = self.dist_eq(i, x, z);
        first.and(self.dist_eq(j, z, y))
    }

    /// `R_1(a, u_1, u_2)` of the double-path property at level `l`.
    pub fn path_r1(&mut self, l: u32, a: &str, u1: &str, u2: &str) -> Formula {
        let h = 1usize << (l - 1);
        let x = self.fresh("x");
        let cases: Vec<Formula> = (1..h)
            .map(|i| {
                let p = self.dist_pair(i, h - i, u1, a, &x);
                p.and(self.dist_eq(i, u2, &x))
            })
            .collect();
        Formula::exists(&x, Formula::disj(cases))
    }

    /// `R_2(a, u_1, u_2)` of the double-path property at level `l`.
    pub fn path_r2(&mut self, l: u32, a: &str, u1: &str, u2: &str) -> Formula {
        let h = 1usize << (l - 1);
        let (x1, x2) = (self.fresh("x"), self.fresh("x"));
        let d1 = self.dist_eq(h - 1, u1, &x1);
        let d2 = self.dist_eq(h - 1, u2, &x2);
        let edge = self.edge_through(&[a, &x1, &x2], &[]);
        Formula::exists_all(&[&x1, &x2], Formula::conj([d1, d2, edge]))
    }

    fn double_path_q1(&mut self, l: u32, a: &str, b: &str) -> Formula {
        let (full, half) = (1usize << l, 1usize << (l - 1));
        let head = self.dist_eq(full, a, b);
        let mut parts = vec![Formula::neq("u1", "u2")];
        parts.push(self.dist_pair(half, half, a, b, "u1"));
        parts.push(self.dist_pair(half, half, a, b, "u2"));
        let links = Formula::disj([
            self.path_r1(l, a, "u1", "u2"),
            self.path_r2(l, a, "u1", "u2"),
            self.path_r1(l, b, "u1", "u2"),
            self.path_r2(l, b, "u1", "u2"),
        ]);
        parts.push(links);
        head.and(Formula::exists_all(&["u1", "u2"], Formula::conj(parts)).not())
    }

    fn double_path_q2(&mut self, l: u32, a: &str, b: &str) -> Formula {
        let (full, half) = (1usize << l, 1usize << (l - 1));
        let mut parts = vec![Formula::neq("z1", "z2")];
        for z in ["z1", "z2"] {
            for end in [a, b] {
                parts.push(self.dist_le(full, end, z).not());
            }
        }
        let guard = self.dist_pair(half, half, a, b, "u").and(Formula::neq("u", "c"));
        let reach = self.dist_eq(full, "u", "z1").or(self.dist_eq(full, "u", "z2"));
        parts.push(Formula::forall("u", guard.implies(reach)));
        Formula::exists_all(&["c", "z1", "z2"], Formula::conj(parts)).not()
    }

    /// `∃a∃b (Q_1(a,b) ∧ Q_2(a,b))` with `l = k − s − 4`.
    pub fn double_path_property(&mut self, k: usize) -> Result<Formula> {
        if k < self.s + 5 {
            return Err(Error::Parameter(format!(
                "k = {k} must be at least s + 5 = {}",
                self.s + 5
            )));
        }
        let l = (k - self.s - 4) as u32;
        if l > 20 {
            return Err(Error::Parameter(format!("level l = {l} too large")));
        }
        let q1 = self.double_path_q1(l, "a", "b");
        let q2 = self.double_path_q2(l, "a", "b");
        Ok(Formula::exists_all(&["a", "b"], q1.and(q2)))
    }

    /// `R_1(x, y_1, y_2)`: an edge through `y_1, y_2` avoiding `x`.
    fn avoid_edge(&mut self, x: &str, y1: &str, y2: &str) -> Formula {
        self.edge_through(&[y1, y2], &[x])
    }

    /// `R_2(y_1, y_2, y_3)`: no edge through all three.
    fn no_edge(&mut self, y1: &str, y2: &str, y3: &str) -> Formula {
        self.edge_through(&[y1, y2, y3], &[]).not()
    }

    fn cycle_c1(&mut self, x1: &str, w: &str) -> Formula {
        let (p, q) = (self.fresh("x"), self.fresh("x"));
        let shared = self.edge_through(&[w, &p, &q], &[x1]);
        let other = self.edge_through(&[w, &p], &[x1, &q]);
        let body = Formula::conj([Formula::neq(&p, x1), Formula::neq(&q, x1), shared, other]);
        Formula::neq(w, x1).and(Formula::exists_all(&[&p, &q], body))
    }

    fn cycle_c2(&mut self, x1: &str, w: &str) -> Formula {
        let (p, q) = (self.fresh("x"), self.fresh("x"));
        let body = Formula::conj([
            Formula::neq(&p, x1),
            Formula::neq(&q, x1),
            self.avoid_edge(x1, w, &p),
            self.avoid_edge(x1, w, &q),
            self.avoid_edge(x1, &p, &q),
            self.no_edge(w, &p, &q),
        ]);
        Formula::neq(w, x1).and(Formula::exists_all(&[&p, &q], body))
    }

    /// `Q_i(x_1)`: a chain of exact distances `a_i, 2^{k−s−1}, ..., 2^2` ending
    /// at a vertex where `C_i` holds.
    fn cycle_q(&mut self, k: usize, first: usize, x1: &str, second: bool) -> Formula {
        let steps: Vec<usize> = (2..k - self.s).rev().map(|e| 1usize << e).collect();
        let vars: Vec<String> = (0..=steps.len()).map(|_| self.fresh("x")).collect();
        let last = vars.last().unwrap().clone();
        let mut body = if second {
            self.cycle_c2(x1, &last)
        } else {
            self.cycle_c1(x1, &last)
        };
        for (t, &len) in steps.iter().enumerate().rev() {
            let d = self.dist_eq(len, &vars[t], &vars[t + 1]);
            body = Formula::exists(&vars[t + 1], d.and(body));
        }
        let d = self.dist_eq(first, x1, &vars[0]);
        Formula::exists(&vars[0], d.and(body))
    }

    fn short_q1(&mut self) -> Formula {
        let triple = self.edge_through(&["x1", "x2", "x3"], &[]);
        let pair = self.edge_through(&["x1", "x2"], &["x3"]);
        Formula::exists_all(&["x2", "x3"], triple.and(pair))
    }

    fn short_q2(&mut self) -> Formula {
        let body = Formula::conj([
            self.edge_through(&["x1", "x2"], &[]),
            self.edge_through(&["x1", "x3"], &[]),
            self.edge_through(&["x2", "x3"], &[]),
            self.edge_through(&["x1", "x2", "x3"], &[]).not(),
        ]);
        Formula::exists_all(&["x2", "x3"], body)
    }

    /// `∃x_1 (Q_1(x_1) ∧ Q_2(x_1))` for the cycle-pair property at depth `k`.
    pub fn cycle_pair_property(&mut self, k: usize, a1: usize, a2: usize) -> Result<Formula> {
        let s = self.s;
        check_cycle_params(s, k, a1, a2)?;
        let (q1, q2) = if k == s + 1 {
            (self.short_q1(), self.short_q2())
        } else {
            (self.cycle_q(k, a1, "x1", false), self.cycle_q(k, a2, "x1", true))
        };
        Ok(Formula::exists("x1", q1.and(q2)))
    }
}

/// Validates `(k, a_1, a_2)` for the cycle-pair property and returns `a`.
pub fn check_cycle_params(s: usize, k: usize, a1: usize, a2: usize) -> Result<usize> {
    check_arity(s)?;
    if k < s + 1 {
        return Err(Error::Parameter(format!("k = {k} must be at least s + 1 = {}", s + 1)));
    }
    if k - s > 40 {
        return Err(Error::Parameter(format!("k − s = {} too large", k - s)));
    }
    if k == s + 1 {
        if (a1, a2) != (2, 2) {
            return Err(Error::Parameter(
                "for k = s + 1 the only split is a1 = a2 = 2 (a = 1)".into(),
            ));
        }
        return Ok(1);
    }
    let top = 1usize << (k - s);
    if !(1..=top).contains(&a1) || !(1..=top).contains(&a2) {
        return Err(Error::Parameter(format!("a1, a2 must lie in 1..={top}")));
    }
    let a = (a1 + a2).checked_sub(3).filter(|&a| a >= 1).ok_or_else(|| {
        Error::Parameter("a1 + a2 − 3 must be at least 1".into())
    })?;
    if a > 2 * top - 3 {
        return Err(Error::Parameter(format!("a = {a} exceeds 2^(k−s+1) − 3 = {}", 2 * top - 3)));
    }
    Ok(a)
}

fn checked(f: Formula, limit: usize) -> Result<Formula> {
    let d = f.quantifier_depth();
    if d > limit {
        return Err(Error::Verification(format!("built depth {d} exceeds {limit}")));
    }
    Ok(f)
}

/// `D_i(x1, x2)`.
pub fn build_dist_at_most(i: usize, s: usize) -> Result<Formula> {
    if i < 1 {
        return Err(Error::Parameter("distance bound i must be at least 1".into()));
    }
    Ok(FormulaBuilder::new(s)?.dist_le(i, "x1", "x2"))
}

/// `D^=_i(x1, x2)`.
pub fn build_dist_exact(i: usize, s: usize) -> Result<Formula> {
    if i < 1 {
        return Err(Error::Parameter("distance i must be at least 1".into()));
    }
    Ok(FormulaBuilder::new(s)?.dist_eq(i, "x1", "x2"))
}

/// `D^=_{i,j}(x, y, z)`.
pub fn build_dist_pair(i: usize, j: usize, s: usize) -> Result<Formula> {
    if i < 1 || j < 1 {
        return Err(Error::Parameter("distances must be at least 1".into()));
    }
    Ok(FormulaBuilder::new(s)?.dist_pair(i, j, "x", "y", "z"))
}

/// The closed double-path property; quantifier depth at most `k`.
pub fn build_double_path_property(s: usize, k: usize) -> Result<Formula> {
    let f = FormulaBuilder::new(s)?.double_path_property(k)?;
    checked(f, k)
}

/// The closed cycle-pair property; quantifier depth at most `k`.
pub fn build_cycle_pair_property(s: usize, k: usize, a1: usize, a2: usize) -> Result<Formula> {
    let f = FormulaBuilder::new(s)?.cycle_pair_property(k, a1, a2)?;
    checked(f, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clog2(i: usize) -> usize {
        (usize::BITS - (i - 1).leading_zeros()) as usize
    }

    #[test]
    fn distance_depths() {
        assert_eq!(build_dist_at_most(1, 3).unwrap().quantifier_depth(), 1);
        assert_eq!(build_dist_at_most(4, 3).unwrap().quantifier_depth(), 3);
        assert_eq!(build_dist_exact(8, 4).unwrap().quantifier_depth(), 5);
        for s in 3..=5 {
            for i in 1..=32 {
                let expect = if i == 1 { 0 } else { clog2(i) } + s - 2;
                assert_eq!(build_dist_at_most(i, s).unwrap().quantifier_depth(), expect);
                assert_eq!(build_dist_exact(i, s).unwrap().quantifier_depth(), expect);
            }
        }
        assert!(build_dist_at_most(0, 3).is_err());
        assert!(build_dist_at_most(2, 2).is_err());
    }

    #[test]
    fn distance_free_vars() {
        let f = build_dist_exact(5, 3).unwrap();
        assert_eq!(f.free_vars().into_iter().collect::<Vec<_>>(), vec!["x1", "x2"]);
        let p = build_dist_pair(2, 3, 4).unwrap();
        assert_eq!(p.free_vars().into_iter().collect::<Vec<_>>(), vec!["x", "y", "z"]);
    }

    #[test]
    fn double_path_shape() {
        let f = build_double_path_property(3, 8).unwrap();
        assert!(f.is_closed());
        assert_eq!(f.quantifier_depth(), 8);
        let g = build_double_path_property(4, 11).unwrap();
        assert_eq!(g.quantifier_depth(), 11);
        assert!(build_double_path_property(3, 7).is_err());
        let mut b = FormulaBuilder::new(3).unwrap();
        let r2 = b.path_r2(1, "a", "u1", "u2");
        assert_eq!(r2.free_vars().into_iter().collect::<Vec<_>>(), vec!["a", "u1", "u2"]);
        let r2 = b.path_r2(3, "a", "u1", "u2");
        assert_eq!(r2.free_vars().into_iter().collect::<Vec<_>>(), vec!["a", "u1", "u2"]);
        assert_eq!(build_double_path_property(3, 8).unwrap(), f, "builders are deterministic");
    }

    #[test]
    fn cycle_pair_shape() {
        let f = build_cycle_pair_property(3, 4, 2, 2).unwrap();
        assert!(f.is_closed());
        assert!(f.quantifier_depth() <= 4);
        for (k, a1, a2) in [(5, 2, 2), (5, 4, 4), (6, 1, 3), (7, 8, 8)] {
            let g = build_cycle_pair_property(3, k, a1, a2).unwrap();
            assert!(g.quantifier_depth() <= k && g.is_closed());
            let h = build_cycle_pair_property(4, k + 1, a1, a2).unwrap();
            assert!(h.quantifier_depth() <= k + 1);
        }
        assert!(build_cycle_pair_property(3, 4, 1, 3).is_err());
        assert!(build_cycle_pair_property(3, 5, 1, 2).is_err(), "a = 0");
        assert!(build_cycle_pair_property(3, 5, 5, 1).is_err(), "a1 > 2^(k-s)");
        assert!(build_cycle_pair_property(3, 3, 2, 2).is_err());
    }
}
