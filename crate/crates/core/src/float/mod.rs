//! Base-β floating-point systems `S(p, q, β)`: exact reference arithmetic,
//! one-hot codecs and text forms.

mod arith;
mod codec;
mod compile;
mod piecewise;

pub use arith::{fp_add, fp_compare, fp_mul, round_raw};
pub use codec::{RawFormat, RawValue};
pub use compile::{compile_fp_op, CompiledFp, FpOp};
pub(crate) use compile::{ge_sig, piecewise_sig, Arith, Evaluator, FloatSig, Val};
pub use piecewise::{Piecewise, PiecewiseFile};

use crate::error::{Error, Result};
use crate::int::digit_char;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Fraction precision `p`, exponent precision `q` and base `β`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FloatSystem {
    pub p: usize,
    pub q: usize,
    pub beta: u32,
}

/// A normalized value `±0.d_1⋯d_p × β^e`, stored as the integer mantissa
/// `d_1⋯d_p` and the exponent `e`. Zero is `+0.0⋯0 × β^{−(β^q − 1)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FloatValue {
    sys: FloatSystem,
    negative: bool,
    exponent: i64,
    mantissa: u128,
}

pub(crate) fn pow(beta: u32, k: usize) -> u128 {
    (beta as u128).pow(k as u32)
}

impl FloatSystem {
    /// Mantissas up to `β^{2p+3}` must fit in 128 bits and exponents up to
    /// `2β^q` in 40 bits.
    pub fn new(p: usize, q: usize, beta: u32) -> Result<Self> {
        let bad = |m: &str| Err(Error::InvalidSystem(format!("S({p},{q},{beta}): {m}")));
        if p == 0 || q == 0 || beta < 2 {
            return bad("needs p ≥ 1, q ≥ 1 and β ≥ 2");
        }
        if beta > 36 {
            return bad("bases above 36 have no digit characters");
        }
        let bits = (beta as f64).log2();
        if bits * (2 * p + 3) as f64 >= 127.0 {
            return bad("fraction too wide");
        }
        if bits * q as f64 >= 40.0 {
            return bad("exponent too wide");
        }
        Ok(FloatSystem { p, q, beta })
    }

    /// Largest exponent, `β^q − 1`.
    pub fn emax(&self) -> i64 {
        pow(self.beta, self.q) as i64 - 1
    }

    /// Mantissa bounds `β^{p−1}` and `β^p`.
    pub(crate) fn mantissa_range(&self) -> (u128, u128) {
        (pow(self.beta, self.p - 1), pow(self.beta, self.p))
    }

    pub fn zero(&self) -> FloatValue {
        FloatValue { sys: *self, negative: false, exponent: -self.emax(), mantissa: 0 }
    }

    /// Largest magnitude with the given sign.
    pub fn max_value(&self, negative: bool) -> FloatValue {
        FloatValue { sys: *self, negative, exponent: self.emax(), mantissa: self.mantissa_range().1 - 1 }
    }

    pub fn min_positive(&self) -> FloatValue {
        FloatValue { sys: *self, negative: false, exponent: -self.emax(), mantissa: self.mantissa_range().0 }
    }

    /// `+0.10⋯0 × β^1`.
    pub fn one(&self) -> FloatValue {
        FloatValue { sys: *self, negative: false, exponent: 1, mantissa: self.mantissa_range().0 }
    }

    /// Checks normalization.
    pub fn from_parts(&self, negative: bool, exponent: i64, mantissa: u128) -> Result<FloatValue> {
        let (lo, hi) = self.mantissa_range();
        let v = FloatValue { sys: *self, negative, exponent, mantissa };
        if mantissa == 0 {
            if negative || exponent != -self.emax() {
                return Err(Error::Domain("zero must be +0.0…0 with the smallest exponent".into()));
            }
        } else if mantissa < lo || mantissa >= hi || exponent.abs() > self.emax() {
            return Err(Error::Domain(format!("({negative}, {exponent}, {mantissa}) is not normalized in {self}")));
        }
        Ok(v)
    }

    /// From fraction digits `d_1 … d_p`.
    pub fn from_digits(&self, negative: bool, exponent: i64, digits: &[u32]) -> Result<FloatValue> {
        if digits.len() != self.p || digits.iter().any(|&d| d >= self.beta) {
            return Err(Error::Domain(format!("expected {} digits below {}", self.p, self.beta)));
        }
        let m = digits.iter().fold(0u128, |a, &d| a * self.beta as u128 + d as u128);
        self.from_parts(negative, exponent, m)
    }

    /// Every normalized value, in increasing order.
    pub fn values(&self) -> Vec<FloatValue> {
        let (lo, hi) = self.mantissa_range();
        let e = self.emax();
        let positives: Vec<FloatValue> = (-e..=e)
            .flat_map(|ex| (lo..hi).map(move |m| (ex, m)))
            .map(|(ex, m)| FloatValue { sys: *self, negative: false, exponent: ex, mantissa: m })
            .collect();
        let mut out: Vec<FloatValue> = positives.iter().rev().map(|v| v.neg()).collect();
        out.push(self.zero());
        out.extend(positives);
        out
    }

    /// Rounds `m · β^{e − n}` to the nearest value (ties to even), saturating
    /// above the largest magnitude and flushing to zero below the smallest.
    pub fn normalize_parts(&self, negative: bool, m: u128, e: i64, n: usize) -> FloatValue {
        if m == 0 {
            return self.zero();
        }
        let len = digit_count(m, self.beta);
        let p = self.p;
        let mut exp = e - n as i64 + len as i64;
        let mut mant = if len > p { round_div(m, pow(self.beta, len - p)) } else { m * pow(self.beta, p - len) };
        let (lo, hi) = self.mantissa_range();
        if mant == hi {
            mant = lo;
            exp += 1;
        }
        if exp > self.emax() {
            return self.max_value(negative);
        }
        if exp < -self.emax() {
            return self.zero();
        }
        FloatValue { sys: *self, negative, exponent: exp, mantissa: mant }
    }

    /// Nearest value to an integer.
    pub fn from_i64(&self, n: i64) -> FloatValue {
        self.normalize_parts(n < 0, n.unsigned_abs() as u128, 0, 0)
    }

    /// Parses `±0.d⋯d e±e⋯e`.
    pub fn parse(&self, text: &str) -> Result<FloatValue> {
        let bad = || Error::Encoding(format!("'{text}' is not a value of {self} (expected ±0.d…de±e…)"));
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let sign = |c: char| match c {
            '+' => Some(false),
            '-' => Some(true),
            _ => None,
        };
        let mut chars = t.chars();
        let negative = chars.next().and_then(sign).ok_or_else(bad)?;
        let rest: String = chars.collect();
        let rest = rest.strip_prefix("0.").ok_or_else(bad)?;
        let (frac, exp) = rest.split_once(['e', 'E']).ok_or_else(bad)?;
        let mut ec = exp.chars();
        let eneg = ec.next().and_then(sign).ok_or_else(bad)?;
        let digits = |s: &str, n: usize| -> Result<Vec<u32>> {
            let ds: Option<Vec<u32>> = s.chars().map(|c| c.to_digit(36).filter(|&d| d < self.beta)).collect();
            ds.filter(|d| d.len() == n).ok_or_else(bad)
        };
        let fd = digits(frac, self.p)?;
        let ed = digits(ec.as_str(), self.q)?;
        let e = ed.iter().fold(0i64, |a, &d| a * self.beta as i64 + d as i64);
        self.from_digits(negative, if eneg { -e } else { e }, &fd)
    }
}

impl fmt::Display for FloatSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S({},{},{})", self.p, self.q, self.beta)
    }
}

pub(crate) fn digit_count(m: u128, beta: u32) -> usize {
    let mut n = 0;
    let mut v = m;
    while v > 0 {
        v /= beta as u128;
        n += 1;
    }
    n
}

/// `m / d` rounded to nearest, ties to even.
pub(crate) fn round_div(m: u128, d: u128) -> u128 {
    let (q, r) = (m / d, m % d);
    match (2 * r).cmp(&d) {
        std::cmp::Ordering::Less => q,
        std::cmp::Ordering::Greater => q + 1,
        std::cmp::Ordering::Equal => q + (q & 1),
    }
}

pub(crate) fn to_digits(mut v: u128, beta: u32, n: usize) -> Vec<u32> {
    let mut out = vec![0u32; n];
    for slot in out.iter_mut().rev() {
        *slot = (v % beta as u128) as u32;
        v /= beta as u128;
    }
    out
}

impl FloatValue {
    pub fn system(&self) -> FloatSystem {
        self.sys
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn mantissa(&self) -> u128 {
        self.mantissa
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == 0
    }

    /// Negation; zero stays `+0`.
    pub fn neg(&self) -> FloatValue {
        FloatValue { negative: !self.negative && !self.is_zero(), ..*self }
    }

    /// `d_1 … d_p`.
    pub fn fraction_digits(&self) -> Vec<u32> {
        to_digits(self.mantissa, self.sys.beta, self.sys.p)
    }

    /// Exponent sign (true for `+`, also for exponent 0) and digits.
    pub fn exponent_digits(&self) -> (bool, Vec<u32>) {
        (self.exponent >= 0, to_digits(self.exponent.unsigned_abs() as u128, self.sys.beta, self.sys.q))
    }

    pub fn to_rational(&self) -> BigRational {
        let beta = BigInt::from(self.sys.beta);
        let m = BigInt::from(self.mantissa);
        let shift = self.exponent - self.sys.p as i64;
        let scale = BigRational::from_integer(num_traits::pow(beta, shift.unsigned_abs() as usize));
        let mut r = BigRational::from_integer(m);
        r = if shift >= 0 { r * scale } else { r / scale };
        if self.negative {
            -r
        } else {
            r
        }
    }

    /// Whether this is `1` or `0` exactly.
    pub fn as_bit(&self) -> Option<bool> {
        if self.is_zero() {
            Some(false)
        } else if *self == self.sys.one() {
            Some(true)
        } else {
            None
        }
    }

    pub fn from_bit(sys: FloatSystem, b: bool) -> FloatValue {
        if b {
            sys.one()
        } else {
            sys.zero()
        }
    }
}

impl fmt::Display for FloatValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (epos, ed) = self.exponent_digits();
        write!(f, "{}0.", if self.negative { '-' } else { '+' })?;
        for d in self.fraction_digits() {
            write!(f, "{}", digit_char(d))?;
        }
        write!(f, "e{}", if epos { '+' } else { '-' })?;
        for d in ed {
            write!(f, "{}", digit_char(d))?;
        }
        Ok(())
    }
}

impl PartialOrd for FloatValue {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        (self.sys == other.sys).then(|| fp_compare(self, other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_form_round_trips() {
        let s = FloatSystem::new(3, 2, 10).unwrap();
        let v = s.parse("-0.314e+02").unwrap();
        assert_eq!(v.to_string(), "-0.314e+02");
        assert_eq!(v.to_rational(), BigRational::new((-314).into(), 10.into()));
        assert_eq!(s.zero().to_string(), "+0.000e-99");
        assert!(s.parse("+0.031e+02").is_err());
        assert!(s.parse("+0.31e+02").is_err());
        for v in FloatSystem::new(2, 1, 3).unwrap().values() {
            assert_eq!(v.system().parse(&v.to_string()).unwrap(), v);
        }
    }

    #[test]
    fn values_are_sorted_and_counted() {
        let s = FloatSystem::new(2, 2, 2).unwrap();
        let vs = s.values();
        assert_eq!(vs.len(), 2 * 2 * 7 + 1);
        for w in vs.windows(2) {
            assert!(w[0].to_rational() < w[1].to_rational());
        }
    }

    #[test]
    fn normalization_rounds_and_saturates() {
        let s = FloatSystem::new(2, 1, 10).unwrap();
        // 101 = 0.101 × 10^3 rounds down to 0.10 × 10^3.
        assert_eq!(s.normalize_parts(false, 101, 3, 3).to_string(), "+0.10e+3");
        // Tie 0.125 × 10^1 goes to the even neighbour.
        assert_eq!(s.normalize_parts(false, 125, 1, 3).to_string(), "+0.12e+1");
        assert_eq!(s.normalize_parts(false, 135, 1, 3).to_string(), "+0.14e+1");
        assert_eq!(s.normalize_parts(true, 999, 9, 3), s.max_value(true));
        assert_eq!(s.normalize_parts(false, 1, -9, 3), s.zero());
        assert_eq!(s.normalize_parts(false, 995, 1, 3).to_string(), "+0.10e+2");
        assert_eq!(s.from_i64(-1).to_string(), "-0.10e+1");
        assert_eq!(s.one().to_rational(), BigRational::from_integer(1.into()));
    }

    #[test]
    fn invalid_systems() {
        assert!(FloatSystem::new(0, 1, 2).is_err());
        assert!(FloatSystem::new(30, 1, 10).is_err());
        assert!(FloatSystem::new(2, 50, 2).is_err());
    }
}
