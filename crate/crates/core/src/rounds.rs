//! Round maps used for external attention and output emissions.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A set of rounds at which output is produced.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RoundMap {
    /// The listed rounds.
    Explicit(Vec<u64>),
    /// `start, start + step, start + 2·step, …` (only `start` when `step = 0`).
    Arithmetic { start: u64, step: u64 },
    /// `{scale·r + offset : r ∈ inner}`.
    Affine { scale: u64, offset: u64, inner: Box<RoundMap> },
    /// One map per input, indexed by the input read as a binary number
    /// (first input bit most significant).
    PerInput(Vec<RoundMap>),
}

impl RoundMap {
    pub fn every_round() -> Self {
        RoundMap::Arithmetic { start: 0, step: 1 }
    }

    pub fn affine(scale: u64, offset: u64, inner: RoundMap) -> Self {
        RoundMap::Affine { scale, offset, inner: Box::new(inner) }
    }

    /// Whether `round` belongs to the map for the input with the given index.
    pub fn contains(&self, round: u64, input_index: usize) -> bool {
        match self {
            RoundMap::Explicit(v) => v.contains(&round),
            RoundMap::Arithmetic { start, step } => {
                if round < *start {
                    false
                } else if *step == 0 {
                    round == *start
                } else {
                    (round - start) % step == 0
                }
            }
            RoundMap::Affine { scale, offset, inner } => {
                if round < *offset {
                    return false;
                }
                let r = round - offset;
                if *scale == 0 {
                    return r == 0 && inner.contains(0, input_index);
                }
                r % scale == 0 && inner.contains(r / scale, input_index)
            }
            RoundMap::PerInput(maps) => maps
                .get(input_index)
                .map(|m| m.contains(round, input_index))
                .unwrap_or(false),
        }
    }

    /// Number of inputs a per-input table expects, if any table is present.
    pub fn table_len(&self) -> Option<usize> {
        match self {
            RoundMap::PerInput(v) => Some(v.len()),
            RoundMap::Affine { inner, .. } => inner.table_len(),
            _ => None,
        }
    }

    /// Composes with an affine round transformation.
    pub fn scaled(&self, scale: u64, offset: u64) -> RoundMap {
        RoundMap::affine(scale, offset, self.clone())
    }

    pub fn parse(text: &str) -> Result<RoundMap> {
        let mut p = MapParser { s: text.trim().as_bytes(), i: 0 };
        let m = p.map()?;
        p.ws();
        if p.i != p.s.len() {
            return Err(p.err("trailing characters"));
        }
        Ok(m)
    }
}

impl fmt::Display for RoundMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RoundMap::Explicit(v) => {
                write!(f, "explicit:")?;
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "{}", parts.join(","))
            }
            RoundMap::Arithmetic { start, step } => write!(f, "arith:{start},{step}"),
            RoundMap::Affine { scale, offset, inner } => write!(f, "affine:{scale},{offset}({inner})"),
            RoundMap::PerInput(v) => {
                write!(f, "table(")?;
                for (i, m) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{m}")?;
                }
                write!(f, ")")
            }
        }
    }
}

struct MapParser<'a> {
    s: &'a [u8],
    i: usize,
}

impl MapParser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { line: 0, message: format!("round map at offset {}: {msg}", self.i) }
    }

    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn eat(&mut self, t: &str) -> bool {
        self.ws();
        if self.s[self.i..].starts_with(t.as_bytes()) {
            self.i += t.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &str) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{t}'")))
        }
    }

    fn number(&mut self) -> Result<u64> {
        self.ws();
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        std::str::from_utf8(&self.s[start..self.i])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| self.err("expected a number"))
    }

    fn map(&mut self) -> Result<RoundMap> {
        if self.eat("explicit:") {
            let mut v = Vec::new();
            self.ws();
            if self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
                v.push(self.number()?);
                while self.eat(",") {
                    v.push(self.number()?);
                }
            }
            Ok(RoundMap::Explicit(v))
        } else if self.eat("arith:") {
            let start = self.number()?;
            self.expect(",")?;
            let step = self.number()?;
            Ok(RoundMap::Arithmetic { start, step })
        } else if self.eat("affine:") {
            let scale = self.number()?;
            self.expect(",")?;
            let offset = self.number()?;
            self.expect("(")?;
            let inner = self.map()?;
            self.expect(")")?;
            Ok(RoundMap::affine(scale, offset, inner))
        } else if self.eat("table(") {
            let mut v = vec![self.map()?];
            while self.eat(";") {
                v.push(self.map()?);
            }
            self.expect(")")?;
            Ok(RoundMap::PerInput(v))
        } else {
            Err(self.err("expected explicit:, arith:, affine: or table("))
        }
    }
}

/// One output emission: the round and the printed values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Emission<T> {
    pub round: u64,
    pub value: T,
}

/// Emissions in increasing round order.
pub type OutputSequence<T = Vec<bool>> = Vec<Emission<T>>;

/// Index of a bit string read as a binary number, first bit most significant.
pub fn input_index(bits: &[bool]) -> usize {
    bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership() {
        let a = RoundMap::Arithmetic { start: 2, step: 3 };
        let got: Vec<u64> = (0..12).filter(|&r| a.contains(r, 0)).collect();
        assert_eq!(got, vec![2, 5, 8, 11]);
        let aff = RoundMap::affine(4, 1, RoundMap::Explicit(vec![0, 2]));
        let got: Vec<u64> = (0..12).filter(|&r| aff.contains(r, 0)).collect();
        assert_eq!(got, vec![1, 9]);
        let t = RoundMap::PerInput(vec![RoundMap::Explicit(vec![1]), RoundMap::Explicit(vec![2])]);
        assert!(t.contains(1, 0) && !t.contains(1, 1) && t.contains(2, 1));
    }

    #[test]
    fn text_round_trip() {
        for s in ["explicit:0,3,7", "arith:0,1", "affine:3,1(arith:0,2)", "table(explicit:1;arith:2,2)", "explicit:"] {
            let m = RoundMap::parse(s).unwrap();
            assert_eq!(m.to_string(), s);
            assert_eq!(RoundMap::parse(&m.to_string()).unwrap(), m);
        }
        assert!(RoundMap::parse("arith:1").is_err());
    }
}
