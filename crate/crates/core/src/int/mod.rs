//! Signed base-β integers `Z(p, β)`, their one-hot codec and compiled
//! comparison, addition and multiplication programs.

mod compile;
pub(crate) mod words;

pub use compile::{compile_int_op, CompiledInt, IntOp, Probe};

use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Parameters `p` (digits) and `β` (base).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntSystem {
    pub p: usize,
    pub beta: u32,
}

/// A sign and `p` digits, most significant first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntValue {
    pub positive: bool,
    pub digits: Vec<u32>,
}

impl IntSystem {
    pub fn new(p: usize, beta: u32) -> Result<Self> {
        if p == 0 || beta < 2 {
            return Err(Error::InvalidSystem(format!("Z({p},{beta}) needs p ≥ 1 and β ≥ 2")));
        }
        Ok(IntSystem { p, beta })
    }

    /// Length of an encoded value.
    pub fn width(&self) -> usize {
        1 + self.p * self.beta as usize
    }

    /// Largest magnitude, `β^p − 1`.
    pub fn max_magnitude(&self) -> BigUint {
        BigUint::from(self.beta).pow(self.p as u32) - 1u32
    }

    pub fn from_bigint(&self, n: &BigInt) -> Result<IntValue> {
        let mag = n.magnitude();
        if *mag > self.max_magnitude() {
            return Err(Error::Domain(format!("{n} does not fit in Z({},{})", self.p, self.beta)));
        }
        let mut digits = mag.to_radix_be(self.beta);
        if mag.is_zero() {
            digits.clear();
        }
        let mut out = vec![0u32; self.p - digits.len()];
        out.extend(digits.into_iter().map(u32::from));
        Ok(IntValue { positive: n.sign() != Sign::Minus, digits: out })
    }

    pub fn from_i64(&self, n: i64) -> Result<IntValue> {
        self.from_bigint(&BigInt::from(n))
    }

    /// Sign bit (1 for `+`) followed by one one-hot block per digit. Zero is
    /// always encoded with sign `+`.
    pub fn encode(&self, v: &IntValue) -> Result<Vec<bool>> {
        self.check(v)?;
        let mut bits = Vec::with_capacity(self.width());
        bits.push(v.positive || v.is_zero());
        for &d in &v.digits {
            bits.extend(one_hot(d, self.beta));
        }
        Ok(bits)
    }

    /// Inverse of [`IntSystem::encode`]; a negative zero decodes to `+0`.
    pub fn decode(&self, bits: &[bool]) -> Result<IntValue> {
        if bits.len() != self.width() {
            return Err(Error::Encoding(format!("expected {} bits, got {}", self.width(), bits.len())));
        }
        let digits = decode_blocks(&bits[1..], self.beta)?;
        let mut v = IntValue { positive: bits[0], digits };
        if v.is_zero() {
            v.positive = true;
        }
        Ok(v)
    }

    fn check(&self, v: &IntValue) -> Result<()> {
        if v.digits.len() != self.p || v.digits.iter().any(|&d| d >= self.beta) {
            return Err(Error::Domain(format!("value is not in Z({},{})", self.p, self.beta)));
        }
        Ok(())
    }
}

impl IntValue {
    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }

    pub fn to_bigint(&self, beta: u32) -> BigInt {
        let mag = self.digits.iter().fold(BigUint::zero(), |acc, &d| acc * beta + d);
        let sign = if self.positive { Sign::Plus } else { Sign::Minus };
        BigInt::from_biguint(sign, mag)
    }

    pub fn to_i64(&self, beta: u32) -> Option<i64> {
        self.to_bigint(beta).to_i64()
    }
}

impl fmt::Display for IntValue {
    /// Digits above 9 are written as lower-case letters.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if self.positive { '+' } else { '-' })?;
        for &d in &self.digits {
            write!(f, "{}", digit_char(d))?;
        }
        Ok(())
    }
}

pub(crate) fn digit_char(d: u32) -> char {
    std::char::from_digit(d, 36).unwrap_or('?')
}

pub(crate) fn one_hot(d: u32, beta: u32) -> impl Iterator<Item = bool> {
    (0..beta).map(move |k| k == d)
}

/// Reads consecutive one-hot blocks of length `beta`.
pub(crate) fn decode_blocks(bits: &[bool], beta: u32) -> Result<Vec<u32>> {
    bits.chunks(beta as usize)
        .map(|block| {
            let ones: Vec<usize> = (0..block.len()).filter(|&k| block[k]).collect();
            match ones.as_slice() {
                [k] if block.len() == beta as usize => Ok(*k as u32),
                _ => Err(Error::Encoding(format!("block {:?} is not one-hot", bits_text(block)))),
            }
        })
        .collect()
}

pub(crate) fn bits_text(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}
