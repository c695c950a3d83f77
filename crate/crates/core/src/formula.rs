//! Propositional formulas over `⊤`, atoms, `¬` and `∧`.
//!
//! `⊥`, `∨`, `→` and `↔` are provided as constructors that expand into the
//! four core shapes, so every stored formula is already desugared.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// A formula whose atoms are of type `A` (variable indices by default).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Formula<A = usize> {
    Top,
    Var(A),
    Not(Box<Formula<A>>),
    And(Box<Formula<A>>, Box<Formula<A>>),
}

impl<A> Formula<A> {
    pub fn top() -> Self {
        Formula::Top
    }

    /// `⊥`, stored as `¬⊤`.
    pub fn bot() -> Self {
        Formula::Not(Box::new(Formula::Top))
    }

    pub fn var(a: A) -> Self {
        Formula::Var(a)
    }

    pub fn not(f: Self) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Self, b: Self) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    /// `a ∨ b` as `¬(¬a ∧ ¬b)`.
    pub fn or(a: Self, b: Self) -> Self {
        Self::not(Self::and(Self::not(a), Self::not(b)))
    }

    /// `a → b` as `¬(a ∧ ¬b)`.
    pub fn implies(a: Self, b: Self) -> Self {
        Self::not(Self::and(a, Self::not(b)))
    }

    /// `a ↔ b` as `(a → b) ∧ (b → a)`.
    pub fn iff(a: Self, b: Self) -> Self
    where
        A: Clone,
    {
        Self::and(Self::implies(a.clone(), b.clone()), Self::implies(b, a))
    }

    pub fn is_top(&self) -> bool {
        matches!(self, Formula::Top)
    }

    pub fn is_bot(&self) -> bool {
        matches!(self, Formula::Not(inner) if inner.is_top())
    }

    /// Number of occurrences of `⊤`, atoms, `¬` and `∧`.
    pub fn size(&self) -> usize {
        match self {
            Formula::Top | Formula::Var(_) => 1,
            Formula::Not(f) => 1 + f.size(),
            Formula::And(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Nesting depth; `⊤` and atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Var(_) => 0,
            Formula::Not(f) => 1 + f.depth(),
            Formula::And(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn eval(&self, atom: &impl Fn(&A) -> bool) -> bool {
        match self {
            Formula::Top => true,
            Formula::Var(a) => atom(a),
            Formula::Not(f) => !f.eval(atom),
            Formula::And(a, b) => a.eval(atom) && b.eval(atom),
        }
    }

    /// Visits every atom occurrence in left-to-right order.
    pub fn for_each_atom(&self, f: &mut impl FnMut(&A)) {
        match self {
            Formula::Top => {}
            Formula::Var(a) => f(a),
            Formula::Not(g) => g.for_each_atom(f),
            Formula::And(a, b) => {
                a.for_each_atom(f);
                b.for_each_atom(f);
            }
        }
    }

    pub fn atoms(&self) -> BTreeSet<A>
    where
        A: Ord + Clone,
    {
        let mut out = BTreeSet::new();
        self.for_each_atom(&mut |a| {
            out.insert(a.clone());
        });
        out
    }

    pub fn map_atoms<B>(&self, f: &mut impl FnMut(&A) -> Formula<B>) -> Formula<B> {
        match self {
            Formula::Top => Formula::Top,
            Formula::Var(a) => f(a),
            Formula::Not(g) => Formula::Not(Box::new(g.map_atoms(f))),
            Formula::And(a, b) => Formula::And(Box::new(a.map_atoms(f)), Box::new(b.map_atoms(f))),
        }
    }

    /// Replaces atoms and folds the resulting constants.
    pub fn substitute<B: Clone>(&self, f: &mut impl FnMut(&A) -> Formula<B>) -> Formula<B> {
        match self {
            Formula::Top => Formula::Top,
            Formula::Var(a) => f(a),
            Formula::Not(g) => Formula::not_s(g.substitute(f)),
            Formula::And(a, b) => Formula::and_s(a.substitute(f), b.substitute(f)),
        }
    }

    /// Constant `Some(v)` if the formula is literally `⊤` or `⊥`.
    pub fn as_const(&self) -> Option<bool> {
        if self.is_top() {
            Some(true)
        } else if self.is_bot() {
            Some(false)
        } else {
            None
        }
    }

    pub fn constant(v: bool) -> Self {
        if v {
            Self::top()
        } else {
            Self::bot()
        }
    }

    /// `¬f` with double negation removed.
    pub fn not_s(f: Self) -> Self {
        match f {
            Formula::Not(inner) => *inner,
            other => Formula::Not(Box::new(other)),
        }
    }

    /// `a ∧ b` with constants folded.
    pub fn and_s(a: Self, b: Self) -> Self {
        match (a.as_const(), b.as_const()) {
            (Some(false), _) | (_, Some(false)) => Self::bot(),
            (Some(true), _) => b,
            (_, Some(true)) => a,
            _ => Self::and(a, b),
        }
    }

    /// `a ∨ b` with constants folded.
    pub fn or_s(a: Self, b: Self) -> Self {
        match (a.as_const(), b.as_const()) {
            (Some(true), _) | (_, Some(true)) => Self::top(),
            (Some(false), _) => b,
            (_, Some(false)) => a,
            _ => Self::not(Self::and(Self::not_s(a), Self::not_s(b))),
        }
    }

    /// Balanced conjunction with constant folding; `⊤` when empty.
    pub fn all(items: impl IntoIterator<Item = Self>) -> Self {
        let mut v: Vec<Self> = Vec::new();
        for f in items {
            match f.as_const() {
                Some(true) => {}
                Some(false) => return Self::bot(),
                None => v.push(f),
            }
        }
        balanced(v, Self::top(), Self::and)
    }

    /// Balanced disjunction with constant folding; `⊥` when empty.
    pub fn any(items: impl IntoIterator<Item = Self>) -> Self {
        let mut v: Vec<Self> = Vec::new();
        for f in items {
            match f.as_const() {
                Some(true) => return Self::top(),
                Some(false) => {}
                None => v.push(Self::not_s(f)),
            }
        }
        if v.is_empty() {
            return Self::bot();
        }
        Self::not_s(balanced(v, Self::top(), Self::and))
    }

    /// `(c ∧ t) ∨ (¬c ∧ e)` with constants folded.
    pub fn ite(c: Self, t: Self, e: Self) -> Self
    where
        A: Clone,
    {
        match c.as_const() {
            Some(true) => t,
            Some(false) => e,
            None => Self::or_s(Self::and_s(c.clone(), t), Self::and_s(Self::not_s(c), e)),
        }
    }
}

fn balanced<T>(mut v: Vec<T>, empty: T, join: fn(T, T) -> T) -> T {
    if v.is_empty() {
        return empty;
    }
    while v.len() > 1 {
        let mut next = Vec::with_capacity(v.len().div_ceil(2));
        let mut it = v.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(join(a, b)),
                None => next.push(a),
            }
        }
        v = next;
    }
    v.pop().unwrap()
}
