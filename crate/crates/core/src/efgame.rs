//! Exhaustive solver for the k-round Ehrenfeucht–Fraïssé game.
//!
//! Classical rules: in each round Spoiler picks a vertex in either structure
//! and Duplicator answers in the other one. Duplicator wins if after `k`
//! rounds the pebbled vertices induce a partial isomorphism (equality and `N`
//! preserved in both directions). Picking an already pebbled vertex never
//! helps Spoiler (Duplicator copies the answer), so such moves are skipped.

use std::collections::HashMap;

use crate::folang::Formula;
use crate::hypercore::{Hypergraph, Indexed, Vertex};
use crate::{Error, Result};

/// Rule set recorded in reports.
pub const RULES: &str = "classical: Spoiler picks in either structure each round";

/// Default vertex limit per structure.
pub const DEFAULT_GAME_CAP: usize = 8;

/// A position: pebbles in play order, and the rounds still to be played.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameState {
    pub rounds_left: usize,
    pub pebbles_g: Vec<Vertex>,
    pub pebbles_h: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameOutcome {
    pub duplicator_wins: bool,
    /// Present iff Spoiler wins: true on the left structure, false on the right.
    pub formula: Option<Formula>,
    pub rules: &'static str,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

/// Solver for one pair of structures; the memo is confined to the instance.
pub struct EfGame {
    g: Indexed,
    h: Indexed,
    k: usize,
    memo: HashMap<Vec<(u8, u8)>, bool>,
}

fn var(i: usize) -> String {
    format!("x{}", i + 1)
}

impl EfGame {
    pub fn new(g: &Hypergraph, h: &Hypergraph, k: usize) -> Result<Self> {
        Self::with_cap(g, h, k, DEFAULT_GAME_CAP)
    }

    pub fn with_cap(g: &Hypergraph, h: &Hypergraph, k: usize, cap: usize) -> Result<Self> {
        g.check_arity(h)?;
        let cap = cap.min(u8::MAX as usize);
        for x in [g, h] {
            if x.v() > cap {
                return Err(Error::capacity("game vertices", x.v(), cap));
            }
        }
        Ok(EfGame {
            g: Indexed::new(g),
            h: Indexed::new(h),
            k,
            memo: HashMap::new(),
        })
    }

    /// The opening position.
    pub fn start(&self) -> GameState {
        GameState {
            rounds_left: self.k,
            pebbles_g: Vec::new(),
            pebbles_h: Vec::new(),
        }
    }

    /// First literal (over pebble variables) that separates the pebbling
    /// `pairs + (a, b)`, oriented to be true on the left; `None` if the
    /// extension is still a partial isomorphism.
    fn clash(&self, pairs: &[(u8, u8)], a: u8, b: u8) -> Option<Formula> {
        let new = var(pairs.len());
        for (j, &(x, y)) in pairs.iter().enumerate() {
            let (eg, eh) = (x == a, y == b);
            if eg != eh {
                let lit = Formula::eq(&new, &var(j));
                return Some(if eg { lit } else { lit.not() });
            }
            if eg {
                return None;
            }
        }
        let s = self.g.arity;
        let mut chosen = Vec::with_capacity(s);
        self.clash_edges(pairs, a, b, 0, &mut chosen)
    }

    fn clash_edges(&self, pairs: &[(u8, u8)], a: u8, b: u8, from: usize, chosen: &mut Vec<usize>) -> Option<Formula> {
        let s = self.g.arity;
        if chosen.len() == s - 1 {
            let mut eg: Vec<u32> = chosen.iter().map(|&j| pairs[j].0 as u32).collect();
            let mut eh: Vec<u32> = chosen.iter().map(|&j| pairs[j].1 as u32).collect();
            eg.push(a as u32);
            eh.push(b as u32);
            let (in_g, in_h) = (self.g.has_edge(&eg), self.h.has_edge(&eh));
            if in_g == in_h {
                return None;
            }
            let mut names: Vec<String> = chosen.iter().map(|&j| var(j)).collect();
            names.push(var(pairs.len()));
            let atom = Formula::Atom(names);
            return Some(if in_g { atom } else { atom.not() });
        }
        for j in from..pairs.len() {
            chosen.push(j);
            let found = self.clash_edges(pairs, a, b, j + 1, chosen);
            chosen.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }

    fn key(pairs: &[(u8, u8)]) -> Vec<(u8, u8)> {
        let mut k = pairs.to_vec();
        k.sort_unstable();
        k
    }

    fn pebbled(pairs: &[(u8, u8)], side: Side, v: u8) -> bool {
        pairs.iter().any(|&(x, y)| match side {
            Side::Left => x == v,
            Side::Right => y == v,
        })
    }

    /// Spoiler moves in deterministic order: left vertices ascending, then right.
    fn moves(&self, pairs: &[(u8, u8)]) -> Vec<(Side, u8)> {
        let left = (0..self.g.n() as u8).map(|v| (Side::Left, v));
        let right = (0..self.h.n() as u8).map(|v| (Side::Right, v));
        left.chain(right)
            .filter(|&(side, v)| !Self::pebbled(pairs, side, v))
            .collect()
    }

    fn pair(side: Side, pick: u8, reply: u8) -> (u8, u8) {
        match side {
            Side::Left => (pick, reply),
            Side::Right => (reply, pick),
        }
    }

    fn replies(&self, side: Side) -> u8 {
        match side {
            Side::Left => self.h.n() as u8,
            Side::Right => self.g.n() as u8,
        }
    }

    fn duplicator_wins_from(&mut self, pairs: &mut Vec<(u8, u8)>, rounds: usize) -> bool {
        if rounds == 0 {
            return true;
        }
        let key = Self::key(pairs);
        if let Some(&w) = self.memo.get(&key) {
            return w;
        }
        let mut wins = true;
        for (side, v) in self.moves(pairs) {
            if self.spoiler_move_wins(pairs, rounds, side, v) {
                wins = false;
                break;
            }
        }
        self.memo.insert(key, wins);
        wins
    }

    fn spoiler_move_wins(&mut self, pairs: &mut Vec<(u8, u8)>, rounds: usize, side: Side, v: u8) -> bool {
        for w in 0..self.replies(side) {
            let (a, b) = Self::pair(side, v, w);
            if self.clash(pairs, a, b).is_some() {
                continue;
            }
            pairs.push((a, b));
            let ok = self.duplicator_wins_from(pairs, rounds - 1);
            pairs.pop();
            if ok {
                return false;
            }
        }
        true
    }

    pub fn duplicator_wins(&mut self) -> bool {
        self.duplicator_wins_from(&mut Vec::new(), self.k)
    }

    /// Winner from an arbitrary reachable position.
    pub fn duplicator_wins_at(&mut self, state: &GameState) -> Result<bool> {
        let mut pairs = self.state_pairs(state)?;
        for i in 0..pairs.len() {
            if self.clash(&pairs[..i], pairs[i].0, pairs[i].1).is_some() {
                return Ok(false);
            }
        }
        Ok(self.duplicator_wins_from(&mut pairs, state.rounds_left))
    }

    fn state_pairs(&self, state: &GameState) -> Result<Vec<(u8, u8)>> {
        if state.pebbles_g.len() != state.pebbles_h.len() {
            return Err(Error::Domain("pebble sequences differ in length".into()));
        }
        let look = |ix: &Indexed, v: &Vertex| {
            ix.index
                .get(v)
                .map(|&i| i as u8)
                .ok_or_else(|| Error::Domain(format!("vertex {v} not in structure")))
        };
        state
            .pebbles_g
            .iter()
            .zip(&state.pebbles_h)
            .map(|(a, b)| Ok((look(&self.g, a)?, look(&self.h, b)?)))
            .collect()
    }

    /// A formula true under the left pebbling and false under the right one,
    /// assuming Spoiler wins from `pairs` with `rounds` left.
    fn extract(&mut self, pairs: &mut Vec<(u8, u8)>, rounds: usize) -> Formula {
        let (side, v) = self
            .moves(pairs)
            .into_iter()
            .find(|&(side, v)| self.spoiler_move_wins(pairs, rounds, side, v))
            .expect("extraction only from Spoiler wins");
        let mut parts: Vec<Formula> = Vec::new();
        for w in 0..self.replies(side) {
            let (a, b) = Self::pair(side, v, w);
            let part = match self.clash(pairs, a, b) {
                Some(lit) => lit,
                None => {
                    pairs.push((a, b));
                    let f = self.extract(pairs, rounds - 1);
                    pairs.pop();
                    f
                }
            };
            if !parts.contains(&part) {
                parts.push(part);
            }
        }
        let x = var(pairs.len());
        match side {
            Side::Left => Formula::exists(&x, Formula::conj(parts)),
            Side::Right => Formula::forall(&x, Formula::disj(parts)),
        }
    }

    pub fn solve(&mut self) -> GameOutcome {
        let wins = self.duplicator_wins();
        let formula = (!wins).then(|| self.extract(&mut Vec::new(), self.k));
        GameOutcome {
            duplicator_wins: wins,
            formula,
            rules: RULES,
        }
    }
}

/// True iff Duplicator wins `EHR(G, H, k)`.
pub fn duplicator_wins(g: &Hypergraph, h: &Hypergraph, k: usize) -> Result<bool> {
    Ok(EfGame::new(g, h, k)?.duplicator_wins())
}

/// A closed formula of depth at most `k` true in `G` and false in `H`, or
/// `None` when Duplicator wins.
pub fn distinguishing_formula(g: &Hypergraph, h: &Hypergraph, k: usize) -> Result<Option<Formula>> {
    Ok(EfGame::new(g, h, k)?.solve().formula)
}
