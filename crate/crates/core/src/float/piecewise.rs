use super::{fp_add, fp_compare, fp_mul, FloatSystem, FloatValue};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// A piecewise polynomial function. Piece `i` covers `[t_i, t_{i+1})` with
/// `t_0 = −∞` and `t_P = +∞`; coefficients are listed from `a_0` upwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piecewise {
    sys: FloatSystem,
    breakpoints: Vec<FloatValue>,
    pieces: Vec<Vec<FloatValue>>,
}

/// Text form of a piece table: values in the canonical `±0.d⋯de±e⋯` form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiecewiseFile {
    pub breakpoints: Vec<String>,
    pub pieces: Vec<Vec<String>>,
}

/// Balanced pairwise reduction; an unpaired last element is carried up.
pub(crate) fn pairwise<T: Clone>(mut items: Vec<T>, mut op: impl FnMut(&T, &T) -> Result<T>) -> Result<T> {
    if items.is_empty() {
        return Err(Error::Domain("nothing to combine".into()));
    }
    while items.len() > 1 {
        let mut next = Vec::with_capacity(items.len().div_ceil(2));
        for pair in items.chunks(2) {
            next.push(match pair {
                [a, b] => op(a, b)?,
                [a] => a.clone(),
                _ => unreachable!(),
            });
        }
        items = next;
    }
    Ok(items.pop().unwrap())
}

impl Piecewise {
    pub fn new(sys: FloatSystem, breakpoints: Vec<FloatValue>, pieces: Vec<Vec<FloatValue>>) -> Result<Self> {
        let bad = |m: String| Err(Error::Domain(m));
        if pieces.len() != breakpoints.len() + 1 {
            return bad(format!("{} pieces need {} breakpoints, got {}", pieces.len(), pieces.len().saturating_sub(1), breakpoints.len()));
        }
        if pieces.iter().any(|p| p.is_empty()) {
            return bad("every piece needs at least the coefficient a_0".into());
        }
        if breakpoints.iter().chain(pieces.iter().flatten()).any(|v| v.system() != sys) {
            return bad(format!("all constants must belong to {sys}"));
        }
        if breakpoints.windows(2).any(|w| fp_compare(&w[0], &w[1]) != Ordering::Less) {
            return bad("breakpoints must be strictly increasing".into());
        }
        Ok(Piecewise { sys, breakpoints, pieces })
    }

    /// A single polynomial on the whole line.
    pub fn polynomial(sys: FloatSystem, coefficients: Vec<FloatValue>) -> Result<Self> {
        Self::new(sys, vec![], vec![coefficients])
    }

    pub fn identity(sys: FloatSystem) -> Self {
        Self::polynomial(sys, vec![sys.zero(), sys.one()]).unwrap()
    }

    /// `max{0, x}`.
    pub fn relu(sys: FloatSystem) -> Self {
        Self::new(sys, vec![sys.zero()], vec![vec![sys.zero()], vec![sys.zero(), sys.one()]]).unwrap()
    }

    /// `1` for `x > 0`, else `0`; the breakpoint is the least positive value.
    pub fn heaviside(sys: FloatSystem) -> Self {
        Self::new(sys, vec![sys.min_positive()], vec![vec![sys.zero()], vec![sys.one()]]).unwrap()
    }

    pub fn system(&self) -> FloatSystem {
        self.sys
    }

    pub fn breakpoints(&self) -> &[FloatValue] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Vec<FloatValue>] {
        &self.pieces
    }

    pub fn num_pieces(&self) -> usize {
        self.pieces.len()
    }

    /// Highest polynomial degree.
    pub fn order(&self) -> usize {
        self.pieces.iter().map(|p| p.len() - 1).max().unwrap_or(0)
    }

    /// Index of the piece containing `x`.
    pub fn select(&self, x: &FloatValue) -> usize {
        self.breakpoints.iter().take_while(|t| fp_compare(t, x) != Ordering::Greater).count()
    }

    /// Evaluates with rounding after every operation: each term `a_i x^i` is
    /// the pairwise product of `[a_i, x, …, x]`, and the terms
    /// `[a_n x^n, …, a_1 x, a_0]` are summed pairwise.
    pub fn eval(&self, x: &FloatValue) -> Result<FloatValue> {
        if x.system() != self.sys {
            return Err(Error::InvalidSystem(format!("argument is not in {}", self.sys)));
        }
        let coeffs = &self.pieces[self.select(x)];
        let terms = (0..coeffs.len())
            .rev()
            .map(|i| {
                let mut factors = vec![coeffs[i]];
                factors.extend(std::iter::repeat_n(*x, i));
                pairwise(factors, fp_mul)
            })
            .collect::<Result<Vec<_>>>()?;
        pairwise(terms, fp_add)
    }

    pub fn from_file(sys: FloatSystem, f: &PiecewiseFile) -> Result<Self> {
        let parse = |s: &String| sys.parse(s);
        let breakpoints = f.breakpoints.iter().map(parse).collect::<Result<_>>()?;
        let pieces = f.pieces.iter().map(|p| p.iter().map(parse).collect::<Result<_>>()).collect::<Result<_>>()?;
        Self::new(sys, breakpoints, pieces)
    }

    pub fn to_file(&self) -> PiecewiseFile {
        PiecewiseFile {
            breakpoints: self.breakpoints.iter().map(|v| v.to_string()).collect(),
            pieces: self.pieces.iter().map(|p| p.iter().map(|v| v.to_string()).collect()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relu_and_heaviside() {
        let s = FloatSystem::new(2, 1, 2).unwrap();
        let relu = Piecewise::relu(s);
        let h = Piecewise::heaviside(s);
        for x in s.values() {
            let want = if x.is_negative() { s.zero() } else { x };
            assert_eq!(relu.eval(&x).unwrap(), want);
            let step = if !x.is_negative() && !x.is_zero() { s.one() } else { s.zero() };
            assert_eq!(h.eval(&x).unwrap(), step);
        }
        let x = s.parse("-0.10e+1").unwrap();
        assert_eq!(relu.eval(&x).unwrap(), s.zero());
        assert_eq!(h.eval(&s.parse("+0.10e+1").unwrap()).unwrap(), s.one());
    }

    #[test]
    fn rejects_bad_tables() {
        let s = FloatSystem::new(2, 1, 2).unwrap();
        assert!(Piecewise::new(s, vec![s.one(), s.zero()], vec![vec![s.zero()]; 3]).is_err());
        assert!(Piecewise::new(s, vec![s.one()], vec![vec![s.zero()]]).is_err());
        assert!(Piecewise::new(s, vec![], vec![vec![]]).is_err());
    }

    #[test]
    fn file_round_trip() {
        let s = FloatSystem::new(3, 2, 2).unwrap();
        let f = Piecewise::relu(s);
        assert_eq!(Piecewise::from_file(s, &f.to_file()).unwrap(), f);
    }
}
