use super::{Circuit, CircuitBuilder, GateId, GateLabel};
use crate::error::Result;
use crate::formula::Formula;
use std::collections::HashMap;

/// Builds a bounded fan-in circuit of logarithmic depth computing `f`.
/// Inputs are the variables of `f` in increasing order.
pub fn balance_formula(f: &Formula) -> Result<Circuit> {
    let mut b = CircuitBuilder::new();
    let vars: Vec<usize> = f.atoms().into_iter().collect();
    let gates: HashMap<usize, GateId> = vars.iter().map(|&v| (v, b.input(&format!("v{v}")))).collect();
    let out = Balancer::new(&mut b, &|v| gates[&v]).build(f);
    b.finish(vec![out])
}

pub(super) struct Balancer<'a, 'b> {
    b: &'a mut CircuitBuilder,
    var: &'b dyn Fn(usize) -> GateId,
    memo: HashMap<Formula, GateId>,
    consts: [Option<GateId>; 2],
}

fn ceil_log2(n: usize) -> usize {
    n.next_power_of_two().trailing_zeros() as usize
}

impl<'a, 'b> Balancer<'a, 'b> {
    pub(super) fn new(b: &'a mut CircuitBuilder, var: &'b dyn Fn(usize) -> GateId) -> Self {
        Balancer { b, var, memo: HashMap::new(), consts: [None, None] }
    }

    fn constant(&mut self, v: bool) -> GateId {
        if let Some(g) = self.consts[v as usize] {
            return g;
        }
        let g = if v { self.b.gate("one", GateLabel::And, vec![]) } else { self.b.gate("zero", GateLabel::Or, vec![]) };
        self.consts[v as usize] = Some(g);
        g
    }

    fn gate(&mut self, label: GateLabel, inputs: Vec<GateId>) -> GateId {
        let name = format!("b{}", self.b.len());
        self.b.gate(&name, label, inputs)
    }

    /// Gate-for-node translation.
    pub(super) fn direct(&mut self, f: &Formula) -> GateId {
        if let Some(&g) = self.memo.get(f) {
            return g;
        }
        let g = match f {
            Formula::Top => self.constant(true),
            Formula::Var(v) => (self.var)(*v),
            Formula::Not(h) if h.is_top() => self.constant(false),
            Formula::Not(h) => {
                let x = self.direct(h);
                self.gate(GateLabel::Not, vec![x])
            }
            Formula::And(l, r) => {
                let x = self.direct(l);
                let y = self.direct(r);
                self.gate(GateLabel::And, vec![x, y])
            }
        };
        self.memo.insert(f.clone(), g);
        g
    }

    pub(super) fn build(&mut self, f: &Formula) -> GateId {
        if let Some(&g) = self.memo.get(f) {
            return g;
        }
        let n = f.size();
        if f.depth() <= 2 * ceil_log2(n + 1) + 2 {
            return self.direct(f);
        }
        let path = separator(f, n);
        let sep = subformula(f, &path).clone();
        let f1 = replace(f, &path, true);
        let f0 = replace(f, &path, false);
        let s = self.build(&sep);
        let g = match (f1.as_const(), f0.as_const()) {
            (Some(a), Some(b)) if a == b => self.constant(a),
            (Some(true), Some(false)) => s,
            (Some(false), Some(true)) => self.gate(GateLabel::Not, vec![s]),
            _ => {
                let ns = self.gate(GateLabel::Not, vec![s]);
                let hi = self.branch(s, &f1);
                let lo = self.branch(ns, &f0);
                match (hi, lo) {
                    (Some(h), Some(l)) => self.gate(GateLabel::Or, vec![h, l]),
                    (Some(h), None) => h,
                    (None, Some(l)) => l,
                    (None, None) => self.constant(false),
                }
            }
        };
        self.memo.insert(f.clone(), g);
        g
    }

    /// `guard ∧ f`, or `None` when it is constantly false.
    fn branch(&mut self, guard: GateId, f: &Formula) -> Option<GateId> {
        match f.as_const() {
            Some(false) => None,
            Some(true) => Some(guard),
            None => {
                let x = self.build(f);
                Some(self.gate(GateLabel::And, vec![guard, x]))
            }
        }
    }
}

/// Path to a proper subformula whose size is between a third and two thirds
/// of `n`.
fn separator(f: &Formula, n: usize) -> Vec<u8> {
    let mut path = Vec::new();
    let mut cur = f;
    loop {
        let (dir, child) = match cur {
            Formula::Not(g) => (0u8, &**g),
            Formula::And(a, b) => {
                if a.size() >= b.size() {
                    (0, &**a)
                } else {
                    (1, &**b)
                }
            }
            _ => return path,
        };
        path.push(dir);
        if 3 * child.size() <= 2 * n {
            return path;
        }
        cur = child;
    }
}

fn subformula<'f>(f: &'f Formula, path: &[u8]) -> &'f Formula {
    path.iter().fold(f, |g, &d| match g {
        Formula::Not(h) => h,
        Formula::And(a, b) => {
            if d == 0 {
                a
            } else {
                b
            }
        }
        _ => unreachable!(),
    })
}

fn replace(f: &Formula, path: &[u8], value: bool) -> Formula {
    if path.is_empty() {
        return Formula::constant(value);
    }
    match f {
        Formula::Not(g) => Formula::not_s(replace(g, &path[1..], value)),
        Formula::And(a, b) => {
            if path[0] == 0 {
                Formula::and_s(replace(a, &path[1..], value), (**b).clone())
            } else {
                Formula::and_s((**a).clone(), replace(b, &path[1..], value))
            }
        }
        _ => unreachable!(),
    }
}
