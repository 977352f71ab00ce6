use std::collections::{BTreeMap, HashMap};

use super::Formula;
use crate::hypercore::{Hypergraph, Indexed, Vertex};
use crate::{Error, Result};

/// Variable name to vertex label.
pub type Assignment = BTreeMap<String, Vertex>;

type Slot = u16;

enum Node {
    True,
    False,
    Atom(Vec<Slot>),
    Eq(Slot, Slot),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    Exists(Slot, usize),
    Forall(Slot, usize),
}

/// A formula flattened into nodes whose variables are numbered slots.
struct Compiled {
    nodes: Vec<Node>,
    /// Free slots of each node, ascending.
    free: Vec<Vec<Slot>>,
    slots: Vec<String>,
    root: usize,
}

impl Compiled {
    fn new(f: &Formula) -> Result<Self> {
        let mut c = Compiled {
            nodes: Vec::new(),
            free: Vec::new(),
            slots: Vec::new(),
            root: 0,
        };
        c.root = c.add(f)?;
        Ok(c)
    }

    fn slot(&mut self, name: &str) -> Result<Slot> {
        if let Some(i) = self.slots.iter().position(|s| s == name) {
            return Ok(i as Slot);
        }
        if self.slots.len() >= Slot::MAX as usize {
            return Err(Error::Domain("too many variables".into()));
        }
        self.slots.push(name.to_string());
        Ok((self.slots.len() - 1) as Slot)
    }

    fn push(&mut self, node: Node, mut free: Vec<Slot>) -> usize {
        free.sort_unstable();
        free.dedup();
        self.nodes.push(node);
        self.free.push(free);
        self.nodes.len() - 1
    }

    fn add(&mut self, f: &Formula) -> Result<usize> {
        Ok(match f {
            Formula::True => self.push(Node::True, vec![]),
            Formula::False => self.push(Node::False, vec![]),
            Formula::Atom(vs) => {
                let slots = vs.iter().map(|v| self.slot(v)).collect::<Result<Vec<_>>>()?;
                self.push(Node::Atom(slots.clone()), slots)
            }
            Formula::Eq(x, y) => {
                let (a, b) = (self.slot(x)?, self.slot(y)?);
                self.push(Node::Eq(a, b), vec![a, b])
            }
            Formula::Not(g) => {
                let i = self.add(g)?;
                let free = self.free[i].clone();
                self.push(Node::Not(i), free)
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                let (i, j) = (self.add(a)?, self.add(b)?);
                let free = [self.free[i].clone(), self.free[j].clone()].concat();
                let node = match f {
                    Formula::And(..) => Node::And(i, j),
                    Formula::Or(..) => Node::Or(i, j),
                    _ => Node::Implies(i, j),
                };
                self.push(node, free)
            }
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                let s = self.slot(v)?;
                let i = self.add(g)?;
                let free = self.free[i].iter().copied().filter(|&x| x != s).collect();
                let node = if matches!(f, Formula::Exists(..)) {
                    Node::Exists(s, i)
                } else {
                    Node::Forall(s, i)
                };
                self.push(node, free)
            }
        })
    }
}

/// Memo key: node id plus the values of its free slots, packed when they fit.
#[derive(PartialEq, Eq, Hash)]
enum Key {
    Packed(u32, u128),
    Wide(u32, Vec<u32>),
}

/// Evaluates formulas on one hypergraph. Quantifier nodes are memoised on the
/// values of their free variables; the memo lives for one `check`/`check_all` call.
pub struct ModelChecker {
    host: Indexed,
    bits: u32,
}

struct Run<'c> {
    host: &'c Indexed,
    code: &'c Compiled,
    bits: u32,
    env: Vec<u32>,
    memo: HashMap<Key, bool>,
    buf: Vec<u32>,
}

impl Run<'_> {
    fn key(&self, id: usize) -> Key {
        let free = &self.code.free[id];
        if free.len() as u32 * self.bits <= 128 {
            let mut packed = 0u128;
            for &s in free {
                packed = (packed << self.bits) | self.env[s as usize] as u128;
            }
            Key::Packed(id as u32, packed)
        } else {
            Key::Wide(id as u32, free.iter().map(|&s| self.env[s as usize]).collect())
        }
    }

    fn eval(&mut self, id: usize) -> bool {
        match &self.code.nodes[id] {
            Node::True => true,
            Node::False => false,
            Node::Atom(slots) => {
                self.buf.clear();
                for &s in slots {
                    self.buf.push(self.env[s as usize]);
                }
                self.host.has_edge(&self.buf)
            }
            Node::Eq(a, b) => self.env[*a as usize] == self.env[*b as usize],
            Node::Not(i) => !self.eval(*i),
            Node::And(i, j) => self.eval(*i) && self.eval(*j),
            Node::Or(i, j) => self.eval(*i) || self.eval(*j),
            Node::Implies(i, j) => !self.eval(*i) || self.eval(*j),
            &Node::Exists(s, body) | &Node::Forall(s, body) => {
                let want = matches!(self.code.nodes[id], Node::Exists(..));
                let key = self.key(id);
                if let Some(&v) = self.memo.get(&key) {
                    return v;
                }
                let saved = self.env[s as usize];
                let mut result = !want;
                for v in 0..self.host.n() as u32 {
                    self.env[s as usize] = v;
                    if self.eval(body) == want {
                        result = want;
                        break;
                    }
                }
                self.env[s as usize] = saved;
                self.memo.insert(key, result);
                result
            }
        }
    }
}

impl ModelChecker {
    pub fn new(g: &Hypergraph) -> Self {
        let host = Indexed::new(g);
        let bits = (usize::BITS - host.n().leading_zeros()).max(1);
        ModelChecker { host, bits }
    }

    fn prepare<'c>(&'c self, f: &Formula, code: &'c Compiled) -> Result<Run<'c>> {
        if let Some(&found) = f.atom_arities().iter().find(|&&a| a != self.host.arity) {
            return Err(Error::Arity {
                expected: self.host.arity,
                found,
            });
        }
        Ok(Run {
            host: &self.host,
            code,
            bits: self.bits,
            env: vec![0; code.slots.len()],
            memo: HashMap::new(),
            buf: Vec::with_capacity(self.host.arity),
        })
    }

    fn bind(&self, run: &mut Run, a: &Assignment) -> Result<()> {
        for &s in &run.code.free[run.code.root] {
            let name = &run.code.slots[s as usize];
            let label = a.get(name).ok_or_else(|| Error::Unbound(name.clone()))?;
            let idx = self
                .host
                .index
                .get(label)
                .ok_or_else(|| Error::Domain(format!("vertex {label} not in hypergraph")))?;
            run.env[s as usize] = *idx as u32;
        }
        Ok(())
    }

    pub fn check(&self, f: &Formula, a: &Assignment) -> Result<bool> {
        let code = Compiled::new(f)?;
        let mut run = self.prepare(f, &code)?;
        self.bind(&mut run, a)?;
        Ok(run.eval(code.root))
    }

    /// Evaluates `f` under every assignment of `vars` (which must cover the free
    /// variables) in lexicographic order of ascending labels, sharing one memo.
    pub fn check_all(&self, f: &Formula, vars: &[&str]) -> Result<Vec<(Vec<Vertex>, bool)>> {
        let free = f.free_vars();
        if let Some(v) = free.iter().find(|v| !vars.contains(&v.as_str())) {
            return Err(Error::Unbound(v.clone()));
        }
        let code = Compiled::new(f)?;
        let mut run = self.prepare(f, &code)?;
        let slots: Vec<Option<Slot>> = vars
            .iter()
            .map(|v| code.slots.iter().position(|s| s == v).map(|i| i as Slot))
            .collect();
        let n = self.host.n();
        let mut out = Vec::new();
        let mut idx = vec![0usize; vars.len()];
        if n == 0 && !vars.is_empty() {
            return Ok(out);
        }
        loop {
            for (k, s) in slots.iter().enumerate() {
                if let Some(s) = s {
                    run.env[*s as usize] = idx[k] as u32;
                }
            }
            let labels = idx.iter().map(|&i| self.host.labels[i]).collect();
            out.push((labels, run.eval(code.root)));
            let mut k = vars.len();
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < n {
                    break;
                }
                idx[k] = 0;
            }
        }
    }
}

/// One-shot evaluation of `f` on `g` under `a`.
pub fn evaluate(f: &Formula, g: &Hypergraph, a: &Assignment) -> Result<bool> {
    ModelChecker::new(g).check(f, a)
}

/// Evaluation of a closed formula.
pub fn holds(f: &Formula, g: &Hypergraph) -> Result<bool> {
    evaluate(f, g, &Assignment::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folang::parse;

    fn edge() -> Hypergraph {
        Hypergraph::from_edges(3, [[1, 2, 3]], []).unwrap()
    }

    #[test]
    fn closed_examples() {
        let f = parse("exists x exists y exists z N(x,y,z)").unwrap();
        assert!(holds(&f, &edge()).unwrap());
        assert!(!holds(&f, &Hypergraph::empty(3, 3).unwrap()).unwrap());
        assert!(!holds(&parse("exists x N(x,x,x)").unwrap(), &edge()).unwrap());
        assert!(holds(&parse("forall x exists y x != y").unwrap(), &edge()).unwrap());
    }

    #[test]
    fn shadowing() {
        let f = parse("exists x (N(x,y,z) & exists x x = y)").unwrap();
        let a: Assignment = [("y".to_string(), 2), ("z".to_string(), 3)].into();
        assert!(evaluate(&f, &edge(), &a).unwrap());
        let g = parse("exists y (y = x & exists x x != y) & x = x").unwrap();
        let a: Assignment = [("x".to_string(), 1)].into();
        assert!(evaluate(&g, &edge(), &a).unwrap());
    }

    #[test]
    fn errors() {
        let f = parse("N(x,y,z)").unwrap();
        assert!(matches!(evaluate(&f, &edge(), &Assignment::new()), Err(Error::Unbound(_))));
        let g = parse("exists x exists y N(x,y)").unwrap();
        assert!(matches!(holds(&g, &edge()), Err(Error::Arity { .. })));
    }

    #[test]
    fn batch() {
        let h1 = Hypergraph::from_edges(3, [[1, 2, 3], [3, 4, 1]], []).unwrap();
        let f = parse("exists z N(x,y,z)").unwrap();
        let all = ModelChecker::new(&h1).check_all(&f, &["x", "y"]).unwrap();
        assert_eq!(all.len(), 16);
        let co: Vec<_> = all.iter().filter(|(_, b)| *b).map(|(v, _)| (v[0], v[1])).collect();
        assert!(co.contains(&(2, 3)) && !co.contains(&(2, 4)) && !co.contains(&(1, 1)));
    }
}
