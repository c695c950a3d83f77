use super::{pow, round_div, FloatValue, RawFormat};
use crate::error::{Error, Result};
use std::cmp::Ordering;

fn same_system(a: &FloatValue, b: &FloatValue) -> Result<()> {
    if a.sys != b.sys {
        return Err(Error::InvalidSystem(format!("operands from {} and {}", a.sys, b.sys)));
    }
    Ok(())
}

/// Rounded sum. When the exponents differ by more than `p + 2` the operand
/// with the larger exponent is returned unchanged; otherwise the operands
/// are aligned exactly, added as integers and normalized.
pub fn fp_add(a: &FloatValue, b: &FloatValue) -> Result<FloatValue> {
    same_system(a, b)?;
    let sys = a.sys;
    let (big, small) = if b.exponent > a.exponent { (b, a) } else { (a, b) };
    let diff = (big.exponent - small.exponent) as usize;
    if diff > sys.p + 2 {
        return Ok(*big);
    }
    let x = big.mantissa * pow(sys.beta, diff);
    let y = small.mantissa;
    let (negative, m) = if big.negative == small.negative {
        (big.negative, x + y)
    } else if x >= y {
        (big.negative, x - y)
    } else {
        (small.negative, y - x)
    };
    Ok(sys.normalize_parts(negative, m, small.exponent, sys.p))
}

/// Rounded product: exponents added, the `2p`-digit product of the
/// mantissas normalized.
pub fn fp_mul(a: &FloatValue, b: &FloatValue) -> Result<FloatValue> {
    same_system(a, b)?;
    let sys = a.sys;
    if a.is_zero() || b.is_zero() {
        return Ok(sys.zero());
    }
    let m = a.mantissa * b.mantissa;
    Ok(sys.normalize_parts(a.negative != b.negative, m, a.exponent + b.exponent, 2 * sys.p))
}

/// Order of the represented numbers.
pub fn fp_compare(a: &FloatValue, b: &FloatValue) -> Ordering {
    let key = |v: &FloatValue| -> (i8, i64, u128) {
        if v.is_zero() {
            (0, 0, 0)
        } else {
            (if v.negative { -1 } else { 1 }, v.exponent, v.mantissa)
        }
    };
    let (ka, kb) = (key(a), key(b));
    match ka.0.cmp(&kb.0) {
        Ordering::Equal if ka.0 < 0 => (kb.1, kb.2).cmp(&(ka.1, ka.2)),
        Ordering::Equal => (ka.1, ka.2).cmp(&(kb.1, kb.2)),
        o => o,
    }
}

/// Rounds a raw value with `d_0 = 0` to `p` fraction digits, ties to even.
/// A carry out of the fraction shifts right once and rounds again.
pub fn round_raw(raw: &RawFormat, digits: &[u32], exponent: i64, p: usize) -> Result<(Vec<u32>, i64)> {
    let beta = raw.beta;
    if digits.len() != raw.p + 1 || digits[0] != 0 || p > raw.p {
        return Err(Error::Domain("rounding needs d_0 = 0 and at least p fraction digits".into()));
    }
    let m = digits[1..].iter().fold(0u128, |a, &d| a * beta as u128 + d as u128);
    let mut r = round_div(m, pow(beta, raw.p - p));
    let mut e = exponent;
    if r == pow(beta, p) {
        r = round_div(r, beta as u128);
        e += 1;
    }
    let mut out = super::to_digits(r, beta, p + 1);
    out[0] = 0;
    Ok((out, e))
}

#[cfg(test)]
mod tests {
    use super::super::FloatSystem;
    use super::*;

    #[test]
    fn decimal_sum_rounds() {
        let s = FloatSystem::new(2, 1, 10).unwrap();
        let a = s.parse("+0.99e+2").unwrap();
        let b = s.parse("+0.20e+1").unwrap();
        assert_eq!(fp_add(&a, &b).unwrap().to_string(), "+0.10e+3");
        assert_eq!(fp_add(&a, &s.zero()).unwrap(), a);
        assert_eq!(fp_add(&a, &a.neg()).unwrap(), s.zero());
        assert_eq!(fp_mul(&a, &s.one()).unwrap(), a);
        assert_eq!(fp_mul(&a, &a).unwrap().to_string(), "+0.98e+4");
        assert_eq!(fp_mul(&s.max_value(true), &a).unwrap(), s.max_value(true));
    }

    #[test]
    fn rounding_raw_digits() {
        let raw = RawFormat::new(3, 1, 10).unwrap();
        assert_eq!(round_raw(&raw, &[0, 1, 0, 1], 3, 2).unwrap(), (vec![0, 1, 0], 3));
        assert_eq!(round_raw(&raw, &[0, 1, 2, 5], 1, 2).unwrap(), (vec![0, 1, 2], 1));
        assert_eq!(round_raw(&raw, &[0, 9, 9, 7], 1, 2).unwrap(), (vec![0, 1, 0], 2));
        assert_eq!(round_raw(&raw, &[0, 1, 2, 5], 1, 3).unwrap(), (vec![0, 1, 2, 5], 1));
    }

    #[test]
    fn ordering() {
        let s = FloatSystem::new(2, 2, 2).unwrap();
        let vs = s.values();
        for (i, a) in vs.iter().enumerate() {
            for (j, b) in vs.iter().enumerate() {
                assert_eq!(fp_compare(a, b), i.cmp(&j));
            }
        }
    }
}
