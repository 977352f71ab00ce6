use super::Formula;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Eq,
    Neq,
    Bang,
    Amp,
    Bar,
    Arrow,
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        pos,
        msg: msg.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'=' => Tok::Eq,
            b'&' => Tok::Amp,
            b'|' => Tok::Bar,
            b'!' if bytes.get(i + 1) == Some(&b'=') => {
                i += 1;
                Tok::Neq
            }
            b'!' => Tok::Bang,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap();
                return Err(syntax(i, format!("unexpected character {ch:?}")));
            }
        };
        i += 1;
        out.push((start, tok));
    }
    Ok(out)
}

const KEYWORDS: [&str; 5] = ["exists", "forall", "true", "false", "N"];

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected {what}")))
        }
    }

    fn var(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(name)) if !KEYWORDS.contains(&name.as_str()) => {
                let name = name.clone();
                self.at += 1;
                Ok(name)
            }
            _ => Err(syntax(self.pos(), "expected variable")),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Tok::Ident(k)) if k == "exists" || k == "forall" => {
                let universal = k == "forall";
                self.at += 1;
                let v = self.var()?;
                let body = self.formula()?;
                Ok(if universal {
                    Formula::Forall(v, Box::new(body))
                } else {
                    Formula::Exists(v, Box::new(body))
                })
            }
            _ => self.implication(),
        }
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.implication()?;
            return Ok(lhs.implies(rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut f = self.conjunction()?;
        while self.eat(&Tok::Bar) {
            f = f.or(self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while self.eat(&Tok::Amp) {
            f = f.and(self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Bang) => {
                self.at += 1;
                Ok(self.unary()?.not())
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let f = self.formula()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok::Ident(k)) if k == "exists" || k == "forall" => self.formula(),
            Some(Tok::Ident(k)) if k == "true" => {
                self.at += 1;
                Ok(Formula::True)
            }
            Some(Tok::Ident(k)) if k == "false" => {
                self.at += 1;
                Ok(Formula::False)
            }
            Some(Tok::Ident(k)) if k == "N" => {
                self.at += 1;
                self.expect(&Tok::LParen, "`(` after N")?;
                let mut vars = vec![self.var()?];
                while self.eat(&Tok::Comma) {
                    vars.push(self.var()?);
                }
                self.expect(&Tok::RParen, "`)`")?;
                Ok(Formula::Atom(vars))
            }
            Some(Tok::Ident(_)) => {
                let x = self.var()?;
                if self.eat(&Tok::Eq) {
                    Ok(Formula::Eq(x, self.var()?))
                } else if self.eat(&Tok::Neq) {
                    Ok(Formula::Eq(x, self.var()?).not())
                } else {
                    Err(syntax(self.pos(), "expected `=` or `!=`"))
                }
            }
            _ => Err(syntax(pos, "expected formula")),
        }
    }
}

/// Parses the concrete syntax. All `N` atoms must share one arity.
pub fn parse(text: &str) -> Result<Formula> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        end: text.len(),
    };
    let f = p.formula()?;
    if p.at != p.toks.len() {
        return Err(syntax(p.pos(), "trailing input"));
    }
    let arities = f.atom_arities();
    if arities.len() > 1 {
        let mut it = arities.into_iter();
        return Err(Error::Arity {
            expected: it.next().unwrap(),
            found: it.next().unwrap(),
        });
    }
    Ok(f)
}

/// Parses and checks that every `N` atom has exactly `arity` arguments.
pub fn parse_with_arity(text: &str, arity: usize) -> Result<Formula> {
    let f = parse(text)?;
    if let Some(&found) = f.atom_arities().iter().find(|&&a| a != arity) {
        return Err(Error::Arity {
            expected: arity,
            found,
        });
    }
    Ok(f)
}
