//! Seeded random programs and networks for testing.

use crate::bnl::{Attention, BnlProgram};
use crate::float::{FloatSystem, FloatValue, Piecewise};
use crate::formula::Formula;
use crate::nn::{Aggregation, Edge, NeuralNetwork, NnAttention, Node};
use crate::rounds::RoundMap;
use crate::sc::{ScAtom, ScProgram};
use rand::seq::SliceRandom;
use rand::Rng;

/// A random formula over `atoms` of depth at most `depth`.
pub fn random_formula<A: Clone, R: Rng>(rng: &mut R, atoms: &[A], depth: usize) -> Formula<A> {
    let leaf = |rng: &mut R| {
        if atoms.is_empty() || rng.gen_ratio(1, 10) {
            if rng.gen() {
                Formula::top()
            } else {
                Formula::bot()
            }
        } else {
            Formula::var(atoms.choose(rng).unwrap().clone())
        }
    };
    if depth == 0 || rng.gen_ratio(1, 4) {
        return leaf(rng);
    }
    match rng.gen_range(0..5) {
        0 => Formula::not(random_formula(rng, atoms, depth - 1)),
        1 | 2 => Formula::and(random_formula(rng, atoms, depth - 1), random_formula(rng, atoms, depth - 1)),
        _ => Formula::or(random_formula(rng, atoms, depth.saturating_sub(2)), random_formula(rng, atoms, depth.saturating_sub(2))),
    }
}

/// Parameters of [`random_bnl`].
#[derive(Clone, Copy, Debug)]
pub struct BnlShape {
    pub vars: usize,
    pub inputs: usize,
    pub depth: usize,
    /// Largest program size; rules are shrunk until it is met.
    pub max_size: usize,
}

fn random_attention<R: Rng>(rng: &mut R, n: usize) -> Attention {
    if n == 0 || rng.gen_ratio(1, 4) {
        let start = rng.gen_range(0..3);
        Attention::External(RoundMap::Arithmetic { start, step: rng.gen_range(1..4) })
    } else {
        let k = rng.gen_range(1..=n.min(2));
        let mut vs: Vec<usize> = (0..n).collect();
        vs.shuffle(rng);
        vs.truncate(k);
        vs.sort();
        Attention::Predicates(vs)
    }
}

/// A random program; the first `inputs` variables are input predicates.
pub fn random_bnl<R: Rng>(rng: &mut R, shape: BnlShape) -> BnlProgram {
    let n = shape.vars.max(1);
    let atoms: Vec<usize> = (0..n).collect();
    let names = (0..n).map(|i| format!("V{i}")).collect();
    let terminal = (0..n).map(|i| if i < shape.inputs { None } else { Some(rng.gen()) }).collect::<Vec<_>>();
    let term_size: usize = terminal.iter().map(|t: &Option<bool>| t.map_or(0, |b| if b { 1 } else { 2 })).sum();
    let budget = shape.max_size.saturating_sub(term_size).max(n);
    let mut depth = shape.depth;
    let rules = loop {
        let rules: Vec<Formula> = (0..n).map(|_| random_formula(rng, &atoms, depth)).collect();
        if rules.iter().map(Formula::size).sum::<usize>() <= budget || depth == 0 {
            break rules;
        }
        depth -= 1;
    };
    let print_len = rng.gen_range(1..=n.min(3));
    let print = (0..print_len).map(|_| rng.gen_range(0..n)).collect();
    let attention = random_attention(rng, n);
    BnlProgram::new(names, terminal, rules, print, attention).expect("well-formed random program")
}

/// A random SC program over propositions `p0 … p{props−1}`.
pub fn random_sc<R: Rng>(rng: &mut R, vars: usize, props: usize, depth: usize) -> ScProgram {
    let n = vars.max(1);
    let prop_atoms: Vec<usize> = (0..props).collect();
    let mut atoms: Vec<ScAtom> = (0..n).map(ScAtom::Var).collect();
    atoms.extend(prop_atoms.iter().map(|&i| ScAtom::Prop(i)));
    let names = (0..n).map(|i| format!("V{i}")).collect();
    let terminal = (0..n).map(|_| random_formula(rng, &prop_atoms, depth.min(2))).collect();
    let rules = (0..n).map(|_| random_formula(rng, &atoms, depth)).collect();
    let print = (0..rng.gen_range(1..=n.min(3))).map(|_| rng.gen_range(0..n)).collect();
    let attention = random_attention(rng, n);
    ScProgram::new(names, terminal, rules, print, attention).expect("well-formed random program")
}

/// A value of moderate magnitude, zero with probability 1/8.
pub fn random_value<R: Rng>(rng: &mut R, sys: FloatSystem, exp_range: i64) -> FloatValue {
    if rng.gen_ratio(1, 8) {
        return sys.zero();
    }
    let lo = (sys.beta as u128).pow(sys.p as u32 - 1);
    let hi = lo * sys.beta as u128;
    let r = exp_range.min(sys.emax());
    sys.from_parts(rng.gen(), rng.gen_range(-r..=r), rng.gen_range(lo..hi)).expect("in range")
}

/// A uniformly chosen value of `sys`, zero with probability 1/16.
pub fn random_any_value<R: Rng>(rng: &mut R, sys: FloatSystem) -> FloatValue {
    if rng.gen_ratio(1, 16) {
        return sys.zero();
    }
    random_value(rng, sys, sys.emax())
}

/// A random piecewise polynomial with `pieces` pieces of degree at most `order`.
pub fn random_piecewise<R: Rng>(rng: &mut R, sys: FloatSystem, pieces: usize, order: usize) -> Piecewise {
    loop {
        let mut bps: Vec<FloatValue> = (1..pieces).map(|_| random_value(rng, sys, 1)).collect();
        bps.sort_by(crate::float::fp_compare);
        bps.dedup();
        if bps.len() + 1 != pieces {
            continue;
        }
        let polys = (0..pieces).map(|_| (0..=rng.gen_range(order.min(1)..=order)).map(|_| random_value(rng, sys, 1)).collect()).collect();
        return Piecewise::new(sys, bps, polys).expect("sorted breakpoints");
    }
}

/// Parameters of [`random_nn`].
#[derive(Clone, Copy, Debug)]
pub struct NnShape {
    pub nodes: usize,
    pub inputs: usize,
    /// Largest in-degree.
    pub degree: usize,
    pub pieces: usize,
    pub order: usize,
    /// Use threshold attention instead of a round map.
    pub thresholds: bool,
}

/// A random network; the first `inputs` nodes are inputs.
pub fn random_nn<R: Rng>(rng: &mut R, sys: FloatSystem, shape: NnShape) -> NeuralNetwork {
    let n = shape.nodes.max(1);
    let nodes: Vec<Node> = (0..n)
        .map(|i| {
            let pieces = rng.gen_range(1..=shape.pieces.max(1));
            Node {
                id: format!("u{i}"),
                bias: random_value(rng, sys, 1),
                init: (i >= shape.inputs).then(|| random_value(rng, sys, 1)),
                activation: random_piecewise(rng, sys, pieces, shape.order),
            }
        })
        .collect();
    let mut edges = Vec::new();
    for to in 0..n {
        let mut from: Vec<usize> = (0..n).collect();
        from.shuffle(rng);
        from.truncate(rng.gen_range(0..=shape.degree.min(n)));
        edges.extend(from.into_iter().map(|f| Edge { from: f, to, weight: random_value(rng, sys, 1) }));
    }
    let outputs = (0..rng.gen_range(1..=n.min(2))).map(|_| rng.gen_range(0..n)).collect();
    let attention = if shape.thresholds {
        NnAttention::Thresholds(vec![(rng.gen_range(0..n), random_value(rng, sys, 1))])
    } else {
        NnAttention::External(RoundMap::Arithmetic { start: rng.gen_range(0..2), step: rng.gen_range(1..3) })
    };
    let aggregation = if rng.gen() { Aggregation::BalancedTree } else { Aggregation::LeftFold };
    NeuralNetwork::new(sys, nodes, edges, outputs, attention, aggregation).expect("well-formed random network")
}
