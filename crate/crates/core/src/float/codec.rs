//! One-hot strings: exponent sign, fraction sign (1 for `+`), the exponent
//! blocks and then the fraction blocks, most significant digit first.

use super::{pow, to_digits, FloatSystem, FloatValue};
use crate::error::{Error, Result};
use crate::int::{decode_blocks, one_hot};
use serde::{Deserialize, Serialize};

fn push_digits(bits: &mut Vec<bool>, digits: &[u32], beta: u32) {
    for &d in digits {
        bits.extend(one_hot(d, beta));
    }
}

fn value_of(digits: &[u32], beta: u32) -> u128 {
    digits.iter().fold(0u128, |a, &d| a * beta as u128 + d as u128)
}

impl FloatSystem {
    /// Length of an encoded value, `2 + β(p + q)`.
    pub fn width(&self) -> usize {
        2 + self.beta as usize * (self.p + self.q)
    }

    pub fn encode(&self, v: &FloatValue) -> Vec<bool> {
        let (epos, ed) = v.exponent_digits();
        let mut bits = vec![epos, !v.is_negative()];
        push_digits(&mut bits, &ed, self.beta);
        push_digits(&mut bits, &v.fraction_digits(), self.beta);
        bits
    }

    /// Decodes a normalized value; a zero exponent may carry either sign.
    pub fn decode(&self, bits: &[bool]) -> Result<FloatValue> {
        if bits.len() != self.width() {
            return Err(Error::Encoding(format!("expected {} bits, got {}", self.width(), bits.len())));
        }
        let b = self.beta as usize;
        let ed = decode_blocks(&bits[2..2 + b * self.q], self.beta)?;
        let fd = decode_blocks(&bits[2 + b * self.q..], self.beta)?;
        let e = value_of(&ed, self.beta) as i64;
        self.from_digits(!bits[1], if bits[0] { e } else { -e }, &fd)
    }
}

/// Widths `p′` and `q′` of raw values `±d_0.d_1⋯d_{p′} × β^{±e_1⋯e_{q′}}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RawFormat {
    pub p: usize,
    pub q: usize,
    pub beta: u32,
}

/// A raw value: sign, digits `d_0 … d_{p′}` and exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RawValue {
    pub negative: bool,
    pub digits: Vec<u32>,
    pub exponent: i64,
}

impl RawFormat {
    pub fn new(p: usize, q: usize, beta: u32) -> Result<Self> {
        FloatSystem::new((p + 1).div_ceil(2), q, beta)?;
        if p == 0 {
            return Err(Error::InvalidSystem("raw values need p′ ≥ 1".into()));
        }
        Ok(RawFormat { p, q, beta })
    }

    /// The widths used for intermediate results of `sys`: `p′ = 2p + 1`,
    /// `q′ = q + 1`.
    pub fn for_system(sys: FloatSystem) -> RawFormat {
        RawFormat { p: 2 * sys.p + 1, q: sys.q + 1, beta: sys.beta }
    }

    /// `2 + β(p′ + 1 + q′)`.
    pub fn width(&self) -> usize {
        2 + self.beta as usize * (self.p + 1 + self.q)
    }

    pub fn emax(&self) -> i64 {
        pow(self.beta, self.q) as i64 - 1
    }

    pub fn check(&self, v: &RawValue) -> Result<()> {
        if v.digits.len() != self.p + 1 || v.digits.iter().any(|&d| d >= self.beta) || v.exponent.abs() > self.emax() {
            return Err(Error::Domain(format!("raw value does not fit widths ({}, {})", self.p, self.q)));
        }
        Ok(())
    }

    pub fn encode(&self, v: &RawValue) -> Result<Vec<bool>> {
        self.check(v)?;
        let mut bits = vec![v.exponent >= 0, !v.negative];
        push_digits(&mut bits, &to_digits(v.exponent.unsigned_abs() as u128, self.beta, self.q), self.beta);
        push_digits(&mut bits, &v.digits, self.beta);
        Ok(bits)
    }

    pub fn decode(&self, bits: &[bool]) -> Result<RawValue> {
        if bits.len() != self.width() {
            return Err(Error::Encoding(format!("expected {} bits, got {}", self.width(), bits.len())));
        }
        let b = self.beta as usize;
        let ed = decode_blocks(&bits[2..2 + b * self.q], self.beta)?;
        let digits = decode_blocks(&bits[2 + b * self.q..], self.beta)?;
        let e = value_of(&ed, self.beta) as i64;
        Ok(RawValue { negative: !bits[1], digits, exponent: if bits[0] { e } else { -e } })
    }

    /// Rounds and range-checks a raw value into `sys`.
    pub fn normalize(&self, v: &RawValue, sys: FloatSystem) -> Result<FloatValue> {
        self.check(v)?;
        if sys.beta != self.beta {
            return Err(Error::InvalidSystem("raw value and system differ in base".into()));
        }
        Ok(sys.normalize_parts(v.negative, value_of(&v.digits, self.beta), v.exponent, self.p))
    }

    /// Parses `±d.d⋯d e±e⋯e`.
    pub fn parse(&self, text: &str) -> Result<RawValue> {
        let bad = || Error::Encoding(format!("'{text}' is not a raw value with widths ({}, {})", self.p, self.q));
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let (negative, rest) = match t.split_at_checked(1).ok_or_else(bad)? {
            ("+", r) => (false, r),
            ("-", r) => (true, r),
            _ => return Err(bad()),
        };
        let (mant, exp) = rest.split_once(['e', 'E']).ok_or_else(bad)?;
        let (d0, frac) = mant.split_once('.').ok_or_else(bad)?;
        let digit_list = |s: &str| -> Option<Vec<u32>> { s.chars().map(|c| c.to_digit(36).filter(|&d| d < self.beta)).collect() };
        let mut digits = digit_list(d0).filter(|d| d.len() == 1).ok_or_else(bad)?;
        digits.extend(digit_list(frac).filter(|d| d.len() == self.p).ok_or_else(bad)?);
        let (eneg, edigits) = match exp.split_at_checked(1).ok_or_else(bad)? {
            ("+", r) => (false, r),
            ("-", r) => (true, r),
            _ => return Err(bad()),
        };
        let ed = digit_list(edigits).filter(|d| d.len() == self.q).ok_or_else(bad)?;
        let e = value_of(&ed, self.beta) as i64;
        let v = RawValue { negative, digits, exponent: if eneg { -e } else { e } };
        self.check(&v)?;
        Ok(v)
    }

    pub fn format(&self, v: &RawValue) -> String {
        let c = crate::int::digit_char;
        let mut s = String::from(if v.negative { "-" } else { "+" });
        s.push(c(v.digits[0]));
        s.push('.');
        s.extend(v.digits[1..].iter().map(|&d| c(d)));
        s.push_str(if v.exponent >= 0 { "e+" } else { "e-" });
        s.extend(to_digits(v.exponent.unsigned_abs() as u128, self.beta, self.q).into_iter().map(c));
        s
    }
}
