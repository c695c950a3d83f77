//! The `.bnl` text format.
//!
//! ```text
//! % comment
//! X(0) :- T.
//! Y :- Y & X.
//! X :- !X | (Y -> X).
//! #print X,Y
//! #attention X        (or: #rounds arith:0,1)
//! ```
//!
//! Operators by decreasing precedence: `!`, `&`, `|`, `->` (right
//! associative), `<->`. `T` and `F` are the constants.

use super::{Attention, BnlProgram, ProgramBuilder};
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::rounds::RoundMap;
use std::collections::HashSet;
use std::fmt::Write as _;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClauseKind {
    Terminal,
    Iteration,
}

/// A clause with unresolved identifiers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub head: String,
    pub kind: ClauseKind,
    pub body: Formula<String>,
    pub line: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Directives {
    pub print: Option<Vec<String>>,
    pub attention: Option<Vec<String>>,
    pub rounds: Option<RoundMap>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Top,
    Bot,
    LParen,
    RParen,
    Zero,
    Neck,
    Dot,
    Not,
    And,
    Or,
    Implies,
    Iff,
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Splits the text into clause tokens and directives.
fn lex(text: &str) -> Result<(Vec<(Tok, usize)>, Directives)> {
    let mut toks = Vec::new();
    let mut dirs = Directives::default();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let content = match raw.find('%') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let trimmed = content.trim();
        if let Some(rest) = trimmed.strip_prefix('#') {
            directive(rest, line, &mut dirs)?;
            continue;
        }
        let chars: Vec<char> = content.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if is_ident_start(c) {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                toks.push((
                    match word.as_str() {
                        "T" => Tok::Top,
                        "F" => Tok::Bot,
                        _ => Tok::Ident(word),
                    },
                    line,
                ));
                continue;
            }
            let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
            let (tok, len) = if rest.starts_with("<->") {
                (Tok::Iff, 3)
            } else if rest.starts_with("->") {
                (Tok::Implies, 2)
            } else if rest.starts_with(":-") {
                (Tok::Neck, 2)
            } else {
                match c {
                    '(' => (Tok::LParen, 1),
                    ')' => (Tok::RParen, 1),
                    '0' => (Tok::Zero, 1),
                    '.' => (Tok::Dot, 1),
                    '!' => (Tok::Not, 1),
                    '&' => (Tok::And, 1),
                    '|' => (Tok::Or, 1),
                    _ => return Err(perr(line, format!("unexpected character '{c}'"))),
                }
            };
            toks.push((tok, line));
            i += len;
        }
    }
    Ok((toks, dirs))
}

fn name_list(rest: &str, line: usize) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for part in rest.split(',') {
        let n = part.trim();
        if n.is_empty() {
            continue;
        }
        if !n.starts_with(is_ident_start) || !n.chars().all(is_ident_char) {
            return Err(perr(line, format!("bad predicate name '{n}'")));
        }
        out.push(n.to_string());
    }
    Ok(out)
}

fn directive(rest: &str, line: usize, d: &mut Directives) -> Result<()> {
    let (key, arg) = match rest.find(char::is_whitespace) {
        Some(i) => (&rest[..i], rest[i..].trim()),
        None => (rest, ""),
    };
    match key {
        "print" => {
            if d.print.is_some() {
                return Err(perr(line, "duplicate #print"));
            }
            d.print = Some(name_list(arg, line)?);
        }
        "attention" => {
            if d.attention.is_some() {
                return Err(perr(line, "duplicate #attention"));
            }
            d.attention = Some(name_list(arg, line)?);
        }
        "rounds" => {
            if d.rounds.is_some() {
                return Err(perr(line, "duplicate #rounds"));
            }
            d.rounds = Some(RoundMap::parse(arg).map_err(|e| perr(line, e.to_string()))?);
        }
        _ => return Err(perr(line, format!("unknown directive '#{key}'"))),
    }
    Ok(())
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    i: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.0)
    }

    fn line(&self) -> usize {
        self.toks.get(self.i).or(self.toks.last()).map(|t| t.1).unwrap_or(1)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(perr(self.line(), format!("expected {what}")))
        }
    }

    fn clause(&mut self) -> Result<Clause> {
        let line = self.line();
        let head = match self.peek() {
            Some(Tok::Ident(n)) => n.clone(),
            _ => return Err(perr(line, "expected a clause head")),
        };
        self.i += 1;
        let kind = if self.eat(&Tok::LParen) {
            self.expect(Tok::Zero, "'0' in terminal clause head")?;
            self.expect(Tok::RParen, "')'")?;
            ClauseKind::Terminal
        } else {
            ClauseKind::Iteration
        };
        self.expect(Tok::Neck, "':-'")?;
        let body = self.iff()?;
        self.expect(Tok::Dot, "'.' at end of clause")?;
        Ok(Clause { head, kind, body, line })
    }

    fn iff(&mut self) -> Result<Formula<String>> {
        let mut f = self.implies()?;
        while self.eat(&Tok::Iff) {
            let g = self.implies()?;
            f = Formula::iff(f, g);
        }
        Ok(f)
    }

    fn implies(&mut self) -> Result<Formula<String>> {
        let f = self.or()?;
        if self.eat(&Tok::Implies) {
            let g = self.implies()?;
            return Ok(Formula::implies(f, g));
        }
        Ok(f)
    }

    fn or(&mut self) -> Result<Formula<String>> {
        let mut f = self.and()?;
        while self.eat(&Tok::Or) {
            let g = self.and()?;
            f = Formula::or(f, g);
        }
        Ok(f)
    }

    fn and(&mut self) -> Result<Formula<String>> {
        let mut f = self.unary()?;
        while self.eat(&Tok::And) {
            let g = self.unary()?;
            f = Formula::and(f, g);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula<String>> {
        if self.eat(&Tok::Not) {
            return Ok(Formula::not(self.unary()?));
        }
        let line = self.line();
        match self.peek().cloned() {
            Some(Tok::Top) => {
                self.i += 1;
                Ok(Formula::top())
            }
            Some(Tok::Bot) => {
                self.i += 1;
                Ok(Formula::bot())
            }
            Some(Tok::Ident(n)) => {
                self.i += 1;
                Ok(Formula::var(n))
            }
            Some(Tok::LParen) => {
                self.i += 1;
                let f = self.iff()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            _ => Err(perr(line, "expected a formula")),
        }
    }
}

/// Parses clauses and directives without resolving names.
pub fn parse_clauses(text: &str) -> Result<(Vec<Clause>, Directives)> {
    let (toks, dirs) = lex(text)?;
    let mut p = Parser { toks, i: 0 };
    let mut clauses = Vec::new();
    while p.peek().is_some() {
        clauses.push(p.clause()?);
    }
    if dirs.attention.is_some() && dirs.rounds.is_some() {
        return Err(perr(0, "both #attention and #rounds given"));
    }
    Ok((clauses, dirs))
}

/// Parses a `.bnl` program. Variable order is the order in which heads first
/// appear.
pub fn parse_bnl(text: &str) -> Result<BnlProgram> {
    let (clauses, dirs) = parse_clauses(text)?;
    let mut b = ProgramBuilder::new();
    let mut seen_term = HashSet::new();
    let mut seen_iter = HashSet::new();
    for c in &clauses {
        b.var(&c.head);
    }
    for c in &clauses {
        let v = b.var(&c.head);
        match c.kind {
            ClauseKind::Terminal => {
                if !seen_term.insert(v) {
                    return Err(perr(c.line, format!("duplicate terminal clause for '{}'", c.head)));
                }
                let val = c.body.as_const().ok_or_else(|| {
                    perr(c.line, format!("terminal clause of '{}' must be T or F", c.head))
                })?;
                b.set_terminal(v, Some(val));
            }
            ClauseKind::Iteration => {
                if !seen_iter.insert(v) {
                    return Err(perr(c.line, format!("duplicate iteration clause for '{}'", c.head)));
                }
                let mut missing = None;
                let body = c.body.map_atoms(&mut |n: &String| match b.lookup(n) {
                    Some(id) => Formula::var(id),
                    None => {
                        missing = Some(n.clone());
                        Formula::top()
                    }
                });
                if let Some(n) = missing {
                    return Err(perr(c.line, format!("undefined predicate '{n}'")));
                }
                b.set_rule(v, body);
            }
        }
    }
    for v in 0..b.num_vars() {
        if b.rule(v).is_none() {
            return Err(perr(0, format!("'{}' has no iteration clause", b.name(v))));
        }
    }
    let resolve = |names: &[String], b: &ProgramBuilder| -> Result<Vec<usize>> {
        names
            .iter()
            .map(|n| b.lookup(n).ok_or_else(|| perr(0, format!("undefined predicate '{n}' in directive"))))
            .collect()
    };
    let print = resolve(dirs.print.as_deref().unwrap_or(&[]), &b)?;
    let attention = match (dirs.attention, dirs.rounds) {
        (Some(a), None) => Attention::Predicates(resolve(&a, &b)?),
        (None, Some(m)) => Attention::External(m),
        (None, None) => return Err(perr(0, "missing #attention or #rounds")),
        (Some(_), Some(_)) => unreachable!(),
    };
    b.set_print(print);
    b.set_attention(attention);
    b.build()
}

/// Writes a formula with the minimum of parentheses needed to re-parse it to
/// the same tree.
pub fn format_formula<A>(f: &Formula<A>, name: &impl Fn(&A) -> String) -> String {
    let mut s = String::new();
    write_formula(&mut s, f, name);
    s
}

fn write_formula<A>(s: &mut String, f: &Formula<A>, name: &impl Fn(&A) -> String) {
    match f {
        Formula::Top => s.push('T'),
        Formula::Var(a) => s.push_str(&name(a)),
        Formula::Not(g) if g.is_top() => s.push('F'),
        Formula::Not(g) => {
            s.push('!');
            if matches!(**g, Formula::And(..)) {
                s.push('(');
                write_formula(s, g, name);
                s.push(')');
            } else {
                write_formula(s, g, name);
            }
        }
        Formula::And(a, b) => {
            write_formula(s, a, name);
            s.push_str(" & ");
            if matches!(**b, Formula::And(..)) {
                s.push('(');
                write_formula(s, b, name);
                s.push(')');
            } else {
                write_formula(s, b, name);
            }
        }
    }
}

/// Canonical text of a program; `parse_bnl(pretty_bnl(p)) == p`.
pub fn pretty_bnl(p: &BnlProgram) -> String {
    let mut s = String::new();
    let name = |v: &usize| p.name(*v).to_string();
    for v in 0..p.num_vars() {
        if let Some(t) = p.terminal(v) {
            let _ = writeln!(s, "{}(0) :- {}.", p.name(v), if t { "T" } else { "F" });
        }
        let _ = writeln!(s, "{} :- {}.", p.name(v), format_formula(p.rule(v), &name));
    }
    let list = |vs: &[usize]| vs.iter().map(|&v| p.name(v).to_string()).collect::<Vec<_>>().join(",");
    let _ = writeln!(s, "#print {}", list(p.print()));
    match p.attention() {
        Attention::Predicates(a) => {
            let _ = writeln!(s, "#attention {}", list(a));
        }
        Attention::External(m) => {
            let _ = writeln!(s, "#rounds {m}");
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sugar_and_precedence() {
        let p = parse_bnl("A :- A | B & !C -> F.\nB :- A <-> B.\nC :- T.\n#print A\n#rounds arith:0,1\n").unwrap();
        let a = p.rule(0);
        for m in 0..8u32 {
            let env = |i: &usize| m >> i & 1 == 1;
            let (x, y, z) = (env(&0), env(&1), env(&2));
            assert_eq!(a.eval(&env), !(x || (y && !z)));
            assert_eq!(p.rule(1).eval(&env), x == y);
        }
        assert_eq!(p.inputs(), vec![0, 1, 2]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_bnl("A :- A.\nB :- Q.\n#print A\n#attention A\n").unwrap_err();
        assert_eq!(e, Error::Parse { line: 2, message: "undefined predicate 'Q'".into() });
        let e = parse_bnl("A :- A\n#print A\n#attention A\n").unwrap_err();
        assert!(matches!(e, Error::Parse { .. }));
        let e = parse_bnl("A(0) :- A.\nA :- A.\n#print A\n#attention A\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn pretty_round_trip() {
        let src = "X(0) :- T.\nX :- !(X & Y) & F.\nY :- Y & (X & !Y).\n#print X,Y\n#attention X\n";
        let p = parse_bnl(src).unwrap();
        let q = parse_bnl(&pretty_bnl(&p)).unwrap();
        assert_eq!(p, q);
        assert_eq!(pretty_bnl(&p), src);
    }
}
