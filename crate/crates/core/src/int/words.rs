//! Unsigned one-hot words built from latched signals.

use crate::formula::Formula;
use crate::logic::{Net, Sig};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::collections::HashMap;

/// One-hot digit: entry `k` holds "the digit is `k`".
pub(crate) type Digit = Vec<Sig>;

/// Digits least significant first, with an upper bound on the value that
/// fixes the number of digits kept.
#[derive(Clone, Debug)]
pub(crate) struct Word {
    pub beta: u32,
    pub digits: Vec<Digit>,
    pub bound: BigUint,
}

pub(crate) fn const_digit(d: u32, beta: u32) -> Digit {
    (0..beta).map(|k| Formula::constant(k == d)).collect()
}

/// Number of base-`beta` digits of `n` (at least one).
pub(crate) fn digits_for(n: &BigUint, beta: u32) -> usize {
    if n.is_zero() {
        1
    } else {
        n.to_radix_le(beta).len()
    }
}

impl Word {
    /// Word over the given digits (least significant first) with the bound
    /// `β^len − 1`.
    pub fn new(beta: u32, digits: Vec<Digit>) -> Word {
        let bound = BigUint::from(beta).pow(digits.len() as u32) - 1u32;
        Word { beta, digits, bound }
    }

    pub fn constant(value: u64, beta: u32, len: usize) -> Word {
        let mut v = value;
        let digits = (0..len)
            .map(|_| {
                let d = (v % beta as u64) as u32;
                v /= beta as u64;
                const_digit(d, beta)
            })
            .collect();
        Word { beta, digits, bound: BigUint::from(value) }
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    /// Digit `i`, or a constant zero beyond the stored digits.
    pub fn digit(&self, i: usize) -> Digit {
        self.digits.get(i).cloned().unwrap_or_else(|| const_digit(0, self.beta))
    }

    /// Multiplies by `β^k`.
    pub fn shifted(&self, k: usize) -> Word {
        let mut digits: Vec<Digit> = (0..k).map(|_| const_digit(0, self.beta)).collect();
        digits.extend(self.digits.iter().cloned());
        Word { beta: self.beta, digits, bound: &self.bound * BigUint::from(self.beta).pow(k as u32) }
    }

    /// Drops digits that the bound shows to be zero.
    pub fn trimmed(mut self) -> Word {
        let n = digits_for(&self.bound, self.beta);
        self.digits.truncate(n);
        self
    }

    /// Pads or cuts to exactly `len` digits.
    pub fn resized(&self, len: usize) -> Word {
        let digits: Vec<Digit> = (0..len).map(|i| self.digit(i)).collect();
        let cap = BigUint::from(self.beta).pow(len as u32) - 1u32;
        Word { beta: self.beta, digits, bound: self.bound.clone().min(cap) }
    }

    /// `β − 1 − d` in every digit, over `len` digits.
    pub fn complement(&self, len: usize) -> Word {
        let digits = (0..len).map(|i| self.digit(i).into_iter().rev().collect()).collect();
        Word::new(self.beta, digits)
    }

    pub fn is_zero(&self) -> Sig {
        Formula::all(self.digits.iter().map(|d| d[0].clone()))
    }

    pub fn latched(&self, net: &mut Net, name: &str) -> Word {
        let digits = self.digits.iter().enumerate().map(|(i, d)| net.latch_digit(&format!("{name}{i}"), d.clone())).collect();
        Word { beta: self.beta, digits, bound: self.bound.clone() }
    }
}

/// Entry `i` is the carry into position `i`; entry 0 is the carry-in.
pub(crate) type Carries = Vec<Sig>;

/// Carry-lookahead sum. Digit-pair sums and generate signals are latched,
/// then carries; the sum digits are returned as formulas over those latches,
/// so the result is valid two rounds after the operands.
pub(crate) fn add(net: &mut Net, a: &Word, b: &Word, cin: Sig, name: &str) -> (Word, Carries) {
    let beta = a.beta as usize;
    let n = a.len().max(b.len());
    let mut pair_sums: Vec<Vec<Sig>> = Vec::with_capacity(n);
    let mut gen = Vec::with_capacity(n);
    let mut prop = Vec::with_capacity(n);
    for i in 0..n {
        let (x, y) = (a.digit(i), b.digit(i));
        let pairs = |lo: usize, hi: usize| {
            let mut terms = Vec::new();
            for u in 0..beta {
                for v in 0..beta {
                    if (lo..=hi).contains(&(u + v)) {
                        terms.push(Formula::and_s(x[u].clone(), y[v].clone()));
                    }
                }
            }
            Formula::any(terms)
        };
        let d: Vec<Sig> = (0..2 * beta - 1).map(|m| net.latch(&format!("{name}_d{i}_{m}"), pairs(m, m))).collect();
        gen.push(net.latch(&format!("{name}_g{i}"), pairs(beta, 2 * beta - 2)));
        prop.push(d[beta - 1].clone());
        pair_sums.push(d);
    }
    let mut carries = vec![cin.clone()];
    for i in 1..=n {
        let mut terms: Vec<Sig> =
            (0..i).map(|j| Formula::all(std::iter::once(gen[j].clone()).chain(prop[j + 1..i].iter().cloned()))).collect();
        terms.push(Formula::all(std::iter::once(cin.clone()).chain(prop[..i].iter().cloned())));
        let c = net.latch(&format!("{name}_c{i}"), Formula::any(terms));
        carries.push(c);
    }
    let mut digits = Vec::with_capacity(n + 1);
    for (i, d) in pair_sums.iter().enumerate() {
        let at = |m: isize| if m >= 0 && (m as usize) < d.len() { d[m as usize].clone() } else { Formula::bot() };
        let digit = (0..beta as isize)
            .map(|k| {
                let without = Formula::or_s(at(k), at(k + beta as isize));
                let with = Formula::or_s(at(k - 1), at(k - 1 + beta as isize));
                Formula::ite(carries[i].clone(), with, without)
            })
            .collect();
        digits.push(digit);
    }
    let top = carries[n].clone();
    digits.push((0..beta).map(|k| match k {
        0 => Formula::not_s(top.clone()),
        1 => top.clone(),
        _ => Formula::bot(),
    }).collect());
    let extra = if cin.as_const() == Some(false) { BigUint::zero() } else { BigUint::one() };
    let bound = &a.bound + &b.bound + extra;
    (Word { beta: a.beta, digits, bound }.trimmed(), carries)
}

/// `a − b` for `a ≥ b`, over the digits of `a`.
pub(crate) fn sub(net: &mut Net, a: &Word, b: &Word, name: &str) -> Word {
    let n = a.len().max(b.len());
    let (s, _) = add(net, &a.resized(n), &b.complement(n), Formula::top(), name);
    let mut digits = s.digits;
    digits.resize_with(n, || const_digit(0, a.beta));
    digits.truncate(n);
    Word { beta: a.beta, digits, bound: a.bound.clone() }.trimmed()
}

/// Formulas for `a > b` and `a < b`, valid one round after the operands.
pub(crate) fn compare(net: &mut Net, a: &Word, b: &Word, name: &str) -> (Sig, Sig) {
    let beta = a.beta as usize;
    let n = a.len().max(b.len());
    let mut greater = Vec::with_capacity(n);
    let mut less = Vec::with_capacity(n);
    for i in 0..n {
        let (x, y) = (a.digit(i), b.digit(i));
        let mut gt = Vec::new();
        let mut lt = Vec::new();
        for u in 0..beta {
            for v in 0..beta {
                let t = Formula::and_s(x[u].clone(), y[v].clone());
                if u > v {
                    gt.push(t);
                } else if u < v {
                    lt.push(t);
                }
            }
        }
        greater.push(net.latch(&format!("{name}_z1_{i}"), Formula::any(gt)));
        less.push(net.latch(&format!("{name}_z2_{i}"), Formula::any(lt)));
    }
    let decide = |first: &[Sig], other: &[Sig]| {
        Formula::any((0..n).map(|i| {
            let equal_above = (i + 1..n).flat_map(|j| [Formula::not_s(first[j].clone()), Formula::not_s(other[j].clone())]);
            Formula::all(std::iter::once(first[i].clone()).chain(equal_above))
        }))
    };
    (decide(&greater, &less), decide(&less, &greater))
}

/// Multiplexer over mutually exclusive, exhaustive conditions.
pub(crate) fn select(cases: &[(Sig, &Word)]) -> Word {
    let beta = cases[0].1.beta;
    let n = cases.iter().map(|(_, w)| w.len()).max().unwrap_or(1);
    let digits = (0..n)
        .map(|i| {
            (0..beta as usize)
                .map(|k| Formula::any(cases.iter().map(|(c, w)| Formula::and_s(c.clone(), w.digit(i)[k].clone()))))
                .collect()
        })
        .collect();
    let bound = cases.iter().map(|(_, w)| w.bound.clone()).max().unwrap_or_default();
    Word { beta, digits, bound }
}

/// A sign (true for `+`) and a magnitude.
#[derive(Clone, Debug)]
pub(crate) struct SWord {
    pub positive: Sig,
    pub word: Word,
}

impl SWord {
    pub fn negated(&self) -> SWord {
        SWord { positive: Formula::not_s(self.positive.clone()), word: self.word.clone() }
    }
}

/// Sum of signed words. Returns the sum, whose magnitude digits are latched
/// three rounds after the operands and whose sign is `+` for a zero result,
/// and the carries of the same-sign adder.
pub(crate) fn signed_add(net: &mut Net, x: &SWord, y: &SWord, name: &str) -> (SWord, Carries) {
    let same = Formula::iff(x.positive.clone(), y.positive.clone());
    let (sum, carries) = add(net, &x.word, &y.word, Formula::bot(), name);
    let d1 = sub(net, &x.word, &y.word, &format!("{name}_xy"));
    let d2 = sub(net, &y.word, &x.word, &format!("{name}_yx"));
    let (gt, lt) = compare(net, &x.word, &y.word, &format!("{name}_cmp"));
    let gt = net.latch(&format!("{name}_gt"), gt);
    let lt = net.latch(&format!("{name}_lt"), lt);
    let zero = Word::constant(0, x.word.beta, 1);
    let differ = Formula::not_s(same.clone());
    let equal = Formula::and_s(Formula::not_s(gt.clone()), Formula::not_s(lt.clone()));
    let chosen = select(&[
        (same.clone(), &sum),
        (Formula::and_s(differ.clone(), gt.clone()), &d1),
        (Formula::and_s(differ.clone(), lt.clone()), &d2),
        (Formula::and_s(differ.clone(), equal.clone()), &zero),
    ]);
    let word = chosen.latched(net, &format!("{name}_s"));
    let both_zero = Formula::and_s(x.word.is_zero(), y.word.is_zero());
    let positive = Formula::or_s(
        Formula::and_s(same, Formula::or_s(x.positive.clone(), both_zero)),
        Formula::and_s(
            differ,
            Formula::any([Formula::and_s(gt, x.positive.clone()), Formula::and_s(lt, y.positive.clone()), equal]),
        ),
    );
    let positive = net.latch(&format!("{name}_sign"), positive);
    (SWord { positive, word }, carries)
}

/// Intermediate words of a product, for inspection.
pub(crate) struct ProductTrace {
    /// `levels[0]` are the shifted partial products, each later level the
    /// pairwise sums of the previous one.
    pub levels: Vec<Vec<Word>>,
}

/// Product of two words: digit multiples of `x` by balanced doubling,
/// partial products selected by the digits of `y`, then a balanced sum tree.
pub(crate) fn mul(net: &mut Net, x: &Word, y: &Word, name: &str) -> (Word, ProductTrace) {
    let beta = x.beta;
    let mut multiples: HashMap<u32, Word> = HashMap::new();
    multiples.insert(0, Word::constant(0, beta, 1));
    multiples.insert(1, x.clone());
    fn multiple(net: &mut Net, memo: &mut HashMap<u32, Word>, k: u32, name: &str) -> Word {
        if let Some(w) = memo.get(&k) {
            return w.clone();
        }
        let lo = multiple(net, memo, k / 2, name);
        let hi = multiple(net, memo, k - k / 2, name);
        let (w, _) = add(net, &lo, &hi, Formula::bot(), &format!("{name}_m{k}"));
        memo.insert(k, w.clone());
        w
    }
    let mults: Vec<Word> = (0..beta).map(|k| multiple(net, &mut multiples, k, name)).collect();
    let width = mults.iter().map(Word::len).max().unwrap_or(1);
    let leaves: Vec<Word> = y
        .digits
        .iter()
        .enumerate()
        .map(|(i, yd)| {
            let cases: Vec<(Sig, &Word)> = mults.iter().enumerate().map(|(k, w)| (yd[k].clone(), w)).collect();
            let mut z = select(&cases).resized(width);
            z.bound = &x.bound * (beta - 1);
            z.latched(net, &format!("{name}_z{i}_")).trimmed().shifted(i)
        })
        .collect();
    let mut levels = vec![leaves];
    while levels.last().unwrap().len() > 1 {
        let prev = levels.last().unwrap();
        let mut next = Vec::with_capacity(prev.len().div_ceil(2));
        for (j, pair) in prev.chunks(2).enumerate() {
            match pair {
                [a, b] => next.push(add(net, a, b, Formula::bot(), &format!("{name}_t{}_{j}", levels.len())).0),
                [a] => next.push(a.clone()),
                _ => unreachable!(),
            }
        }
        levels.push(next);
    }
    let mut product = levels.last().unwrap()[0].clone();
    product.bound = product.bound.clone().min(&x.bound * &y.bound);
    (product.trimmed(), ProductTrace { levels })
}
