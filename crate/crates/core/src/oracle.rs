//! Independent reference results: exact integer and rational arithmetic,
//! brute-force parity and truth tables.

use crate::error::{Error, Result};
use crate::float::{FloatSystem, FloatValue, Piecewise};
use crate::formula::Formula;
use crate::int::IntOp;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

pub fn int_op(op: IntOp, x: &BigInt, y: &BigInt) -> BigInt {
    match op {
        IntOp::Compare => BigInt::from((x > y) as u8),
        IntOp::Add => x + y,
        IntOp::Mul => x * y,
    }
}

pub fn parity(bits: &[bool]) -> bool {
    bits.iter().filter(|&&b| b).count() % 2 == 1
}

/// Values of `f` under every assignment to `vars`, the first variable being
/// the most significant bit of the row index.
pub fn truth_table(f: &Formula, vars: &[usize]) -> Result<Vec<bool>> {
    if vars.len() > 20 {
        return Err(Error::Domain(format!("truth table over {} variables is too large", vars.len())));
    }
    let n = vars.len();
    Ok((0..1usize << n)
        .map(|row| {
            f.eval(&|v: &usize| {
                let i = vars.iter().position(|w| w == v).expect("variable outside the table");
                row >> (n - 1 - i) & 1 == 1
            })
        })
        .collect())
}

fn beta_pow(beta: u32, k: i64) -> BigRational {
    let b = BigRational::from_integer(BigInt::from(beta));
    if k >= 0 {
        num_traits::pow(b, k as usize)
    } else {
        num_traits::pow(b.recip(), (-k) as usize)
    }
}

/// Nearest value of `sys` to `r`, ties to even; magnitudes beyond the range
/// saturate and magnitudes that round below the smallest normalized value
/// become zero.
pub fn round_rational(sys: FloatSystem, r: &BigRational) -> FloatValue {
    if r.is_zero() {
        return sys.zero();
    }
    let negative = r.is_negative();
    let a = r.abs();
    let beta = sys.beta;
    // Estimate e with β^{e−1} ≤ a < β^e, then correct it.
    let bits = a.numer().bits() as f64 - a.denom().bits() as f64;
    let mut e = (bits / (beta as f64).log2()).floor() as i64;
    while a >= beta_pow(beta, e) {
        e += 1;
    }
    while a < beta_pow(beta, e - 1) {
        e -= 1;
    }
    let scaled = &a * beta_pow(beta, sys.p as i64 - e);
    let (mut m, rem): (BigInt, BigInt) = scaled.numer().div_rem(scaled.denom());
    let twice: BigInt = rem * 2;
    match twice.cmp(scaled.denom()) {
        Ordering::Greater => m += 1,
        Ordering::Equal if m.is_odd() => m += 1,
        _ => {}
    }
    if m == num_traits::pow(BigInt::from(beta), sys.p) {
        m = num_traits::pow(BigInt::from(beta), sys.p - 1);
        e += 1;
    }
    if e > sys.emax() {
        return sys.max_value(negative);
    }
    if e < -sys.emax() {
        return sys.zero();
    }
    sys.from_parts(negative, e, m.to_u128().expect("mantissa fits")).expect("rounded value is normalized")
}

pub fn fp_add(a: &FloatValue, b: &FloatValue) -> FloatValue {
    round_rational(a.system(), &(a.to_rational() + b.to_rational()))
}

pub fn fp_mul(a: &FloatValue, b: &FloatValue) -> FloatValue {
    round_rational(a.system(), &(a.to_rational() * b.to_rational()))
}

pub fn fp_compare(a: &FloatValue, b: &FloatValue) -> Ordering {
    a.to_rational().cmp(&b.to_rational())
}

/// Piece selected by exact comparison, then the canonical pairwise schedule
/// with every intermediate result rounded from its exact value.
pub fn piecewise(f: &Piecewise, x: &FloatValue) -> FloatValue {
    let xr = x.to_rational();
    let idx = f.breakpoints().iter().filter(|t| t.to_rational() <= xr).count();
    let coeffs = &f.pieces()[idx];
    let reduce = |items: Vec<FloatValue>, op: fn(&FloatValue, &FloatValue) -> FloatValue| {
        let mut items = items;
        while items.len() > 1 {
            items = items.chunks(2).map(|c| if c.len() == 2 { op(&c[0], &c[1]) } else { c[0] }).collect();
        }
        items[0]
    };
    let terms: Vec<FloatValue> = (0..coeffs.len())
        .rev()
        .map(|i| {
            let mut factors = vec![coeffs[i]];
            factors.extend(std::iter::repeat_n(*x, i));
            reduce(factors, fp_mul)
        })
        .collect();
    reduce(terms, fp_add)
}

/// `x` as an exact rational.
pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Whether `r` is an integer in `{-1, 0, 1, 2}`.
pub fn is_small_integer(r: &BigRational) -> bool {
    r.is_integer() && (-BigInt::one()..=BigInt::from(2)).contains(&r.to_integer())
}
