//! Bit-sliced formula evaluation: each `u64` word carries 64 independent lanes.

use crate::formula::Formula;
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Op {
    Atom(u32),
    One,
    Not(u32),
    And(u32, u32),
}

/// A list of formulas flattened into a shared instruction list.
#[derive(Clone, Debug)]
pub struct Tape {
    ops: Vec<Op>,
    roots: Vec<u32>,
    n_atoms: usize,
}

struct TapeBuilder {
    ops: Vec<Op>,
    memo: HashMap<Op, u32>,
}

impl TapeBuilder {
    fn push(&mut self, op: Op) -> u32 {
        if let Some(&i) = self.memo.get(&op) {
            return i;
        }
        let i = self.ops.len() as u32;
        self.ops.push(op);
        self.memo.insert(op, i);
        i
    }

    fn add<A>(&mut self, f: &Formula<A>, atom: &impl Fn(&A) -> usize) -> u32 {
        match f {
            Formula::Top => self.push(Op::One),
            Formula::Var(a) => atom(a) as u32,
            Formula::Not(g) => {
                let x = self.add(g, atom);
                if let Op::Not(y) = self.ops[x as usize] {
                    return y;
                }
                self.push(Op::Not(x))
            }
            Formula::And(a, b) => {
                let x = self.add(a, atom);
                let y = self.add(b, atom);
                if x == y {
                    return x;
                }
                self.push(Op::And(x.min(y), x.max(y)))
            }
        }
    }
}

impl Tape {
    /// Compiles `formulas`; atoms are mapped to lane-word indices `0..n_atoms`.
    pub fn compile<'a, A: 'a>(
        formulas: impl IntoIterator<Item = &'a Formula<A>>,
        n_atoms: usize,
        atom: impl Fn(&A) -> usize,
    ) -> Tape {
        let mut b = TapeBuilder { ops: Vec::new(), memo: HashMap::new() };
        for i in 0..n_atoms {
            b.ops.push(Op::Atom(i as u32));
        }
        let roots = formulas.into_iter().map(|f| b.add(f, &atom)).collect();
        Tape { ops: b.ops, roots, n_atoms }
    }

    pub fn n_outputs(&self) -> usize {
        self.roots.len()
    }

    /// Evaluates all formulas; `atoms` has one word per atom.
    pub fn eval(&self, atoms: &[u64], scratch: &mut Vec<u64>, out: &mut [u64]) {
        debug_assert_eq!(atoms.len(), self.n_atoms);
        scratch.clear();
        scratch.reserve(self.ops.len());
        for op in &self.ops {
            let v = match *op {
                Op::Atom(i) => atoms[i as usize],
                Op::One => !0,
                Op::Not(x) => !scratch[x as usize],
                Op::And(x, y) => scratch[x as usize] & scratch[y as usize],
            };
            scratch.push(v);
        }
        for (o, &r) in out.iter_mut().zip(&self.roots) {
            *o = scratch[r as usize];
        }
    }
}

/// Packs up to 64 bit strings of equal length into lane words.
pub fn pack(rows: &[Vec<bool>], width: usize) -> Vec<u64> {
    let mut words = vec![0u64; width];
    for (lane, row) in rows.iter().enumerate() {
        for (i, &b) in row.iter().enumerate() {
            if b {
                words[i] |= 1 << lane;
            }
        }
    }
    words
}

/// Reads the bits of one lane.
pub fn lane(words: &[u64], lane: usize) -> Vec<bool> {
    words.iter().map(|w| w >> lane & 1 == 1).collect()
}
