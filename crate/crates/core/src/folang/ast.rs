use std::collections::BTreeSet;
use std::fmt;

/// First-order formula over the signature `{N, =}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    /// `N(v_1, ..., v_s)`.
    Atom(Vec<String>),
    Eq(String, String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn atom<S: AsRef<str>>(vars: &[S]) -> Self {
        Formula::Atom(vars.iter().map(|v| v.as_ref().to_string()).collect())
    }

    pub fn eq(x: &str, y: &str) -> Self {
        Formula::Eq(x.into(), y.into())
    }

    pub fn neq(x: &str, y: &str) -> Self {
        Formula::eq(x, y).not()
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Self {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Self {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Formula) -> Self {
        Formula::Implies(Box::new(self), Box::new(other))
    }

    pub fn exists(var: &str, body: Formula) -> Self {
        Formula::Exists(var.into(), Box::new(body))
    }

    pub fn forall(var: &str, body: Formula) -> Self {
        Formula::Forall(var.into(), Box::new(body))
    }

    /// `∃v_1 ... ∃v_r body`, outermost first.
    pub fn exists_all<S: AsRef<str>>(vars: &[S], body: Formula) -> Self {
        vars.iter()
            .rev()
            .fold(body, |acc, v| Formula::exists(v.as_ref(), acc))
    }

    /// Left-nested conjunction; `true` when empty.
    pub fn conj(parts: impl IntoIterator<Item = Formula>) -> Self {
        parts
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    /// Left-nested disjunction; `false` when empty.
    pub fn disj(parts: impl IntoIterator<Item = Formula>) -> Self {
        parts
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::False)
    }

    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) | Formula::Eq(..) => 0,
            Formula::Not(f) => f.quantifier_depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.quantifier_depth().max(b.quantifier_depth())
            }
            Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.quantifier_depth(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        let mut see = |v: &String, bound: &Vec<&str>| {
            if !bound.contains(&v.as_str()) {
                out.insert(v.clone());
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(vs) => vs.iter().for_each(|v| see(v, bound)),
            Formula::Eq(x, y) => {
                see(x, bound);
                see(y, bound);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(v);
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Arities of all `N` atoms, deduplicated.
    pub fn atom_arities(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom(vs) = f {
                out.insert(vs.len());
            }
        });
        out
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    pub fn visit(&self, f: &mut dyn FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Not(a) | Formula::Exists(_, a) | Formula::Forall(_, a) => a.visit(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Formula::Exists(..) | Formula::Forall(..) => 0,
            Formula::Implies(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            _ => 4,
        }
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, child: &Formula, min: u8) -> fmt::Result {
    if child.prec() < min {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

/// Concrete syntax accepted by [`super::parse`].
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Atom(vs) => write!(f, "N({})", vs.join(",")),
            Formula::Eq(x, y) => write!(f, "{x} = {y}"),
            Formula::Not(inner) => match inner.as_ref() {
                Formula::Eq(x, y) => write!(f, "{x} != {y}"),
                _ => {
                    f.write_str("!")?;
                    write_child(f, inner, 4)
                }
            },
            Formula::And(a, b) => {
                write_child(f, a, 3)?;
                f.write_str(" & ")?;
                write_child(f, b, 4)
            }
            Formula::Or(a, b) => {
                write_child(f, a, 2)?;
                f.write_str(" | ")?;
                write_child(f, b, 3)
            }
            Formula::Implies(a, b) => {
                write_child(f, a, 2)?;
                f.write_str(" -> ")?;
                write_child(f, b, 1)
            }
            Formula::Exists(v, body) => write!(f, "exists {v} {body}"),
            Formula::Forall(v, body) => write!(f, "forall {v} {body}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_and_free() {
        let f = Formula::exists("x", Formula::atom(&["x", "y", "z"]).and(Formula::forall("y", Formula::eq("x", "y"))));
        assert_eq!(f.quantifier_depth(), 2);
        assert_eq!(f.free_vars().into_iter().collect::<Vec<_>>(), vec!["y", "z"]);
        assert_eq!(Formula::atom(&["a", "b", "c"]).quantifier_depth(), 0);
    }

    #[test]
    fn printing() {
        let f = Formula::eq("x", "y").and(Formula::atom(&["x", "y", "z"]).not());
        assert_eq!(f.to_string(), "x = y & !N(x,y,z)");
        let g = Formula::exists("x", Formula::True).and(Formula::False);
        assert_eq!(g.to_string(), "(exists x true) & false");
        let h = Formula::eq("a", "b").implies(Formula::eq("b", "c")).implies(Formula::False);
        assert_eq!(h.to_string(), "(a = b -> b = c) -> false");
        assert_eq!(Formula::conj([]), Formula::True);
        assert_eq!(Formula::disj([]), Formula::False);
    }
}
