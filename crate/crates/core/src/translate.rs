//! Translations between recurrent neural networks and BNL programs.

use crate::bnl::{to_fully_open, Attention, BnlProgram};
use crate::error::{Error, Result};
use crate::float::{ge_sig, piecewise_sig, Arith, Evaluator, FloatSig, FloatSystem, FloatValue, Piecewise, Val};
use crate::formula::Formula;
use crate::logic::{var_of, Net, Sig};
use crate::nn::{Aggregation, Edge, NeuralNetwork, NnAttention, Node};
use serde::{Deserialize, Serialize};

/// A BNL program simulating a network. State `k` of the network is held in
/// the node registers during rounds `k·period … k·period + period − 1`.
#[derive(Clone, Debug)]
pub struct NnProgram {
    pub program: BnlProgram,
    pub system: FloatSystem,
    pub period: u64,
    /// Round within a period at which outputs are printed.
    pub offset: u64,
    pub num_inputs: usize,
    pub num_outputs: usize,
}

impl NnProgram {
    /// BNL input for the given network inputs.
    pub fn input_bits(&self, input: &[FloatValue]) -> Result<Vec<bool>> {
        if input.len() != self.num_inputs {
            return Err(Error::InputArity { expected: self.num_inputs, got: input.len() });
        }
        let mut bits = Vec::new();
        for v in input {
            if v.system() != self.system {
                return Err(Error::InvalidSystem(format!("inputs must belong to {}", self.system)));
            }
            bits.extend(self.system.encode(v));
        }
        Ok(bits)
    }

    /// Output node values from the print predicates.
    pub fn decode_output(&self, bits: &[bool]) -> Result<Vec<FloatValue>> {
        let w = self.system.width();
        if bits.len() != w * self.num_outputs {
            return Err(Error::Encoding(format!("expected {} printed bits, got {}", w * self.num_outputs, bits.len())));
        }
        bits.chunks(w).map(|c| self.system.decode(c)).collect()
    }

    /// Round at which the program prints network round `round`.
    pub fn bnl_round(&self, round: u64) -> u64 {
        self.period * round + self.offset
    }
}

/// Compiles a network into a BNL program.
pub fn nn_to_bnl(nn: &NeuralNetwork) -> Result<NnProgram> {
    let sys = nn.system();
    if let NnAttention::External(m) = nn.attention() {
        if m.table_len().is_some() {
            return Err(Error::Unsupported("per-input round tables cannot be carried to the encoded inputs".into()));
        }
    }
    let mut net = Net::new();
    let nodes = nn.nodes();
    let names: Vec<String> = nodes.iter().enumerate().map(|(i, _)| format!("n{i}")).collect();
    let mut registers: Vec<Vec<Sig>> = vec![Vec::new(); nodes.len()];
    // Input registers come first so that the input predicates follow node order.
    for pass in [true, false] {
        for (i, node) in nodes.iter().enumerate() {
            if node.init.is_none() != pass {
                continue;
            }
            let terminals: Vec<Option<bool>> = match &node.init {
                None => vec![None; sys.width()],
                Some(v) => sys.encode(v).into_iter().map(Some).collect(),
            };
            registers[i] = FloatSig::encoding_names(sys, &names[i])
                .iter()
                .zip(terminals)
                .map(|(n, t)| net.register(n, t))
                .collect();
        }
    }
    let state: Vec<FloatSig> = registers.iter().map(|r| FloatSig::from_bits(sys, r)).collect();

    let mut updates: Vec<FloatSig> = Vec::with_capacity(nodes.len());
    {
        let mut ev = Evaluator::new(&mut net, "nn");
        let leaves: Vec<Val> = state.iter().map(|s| ev.leaf(s.clone())).collect();
        for (v, node) in nodes.iter().enumerate() {
            let mut items = vec![Val::Const(node.bias)];
            for &e in nn.incoming(v) {
                let Edge { from, weight, .. } = nn.edges()[e];
                items.push(ev.combine(Arith::Mul, &leaves[from], &Val::Const(weight)));
            }
            let sum = match nn.aggregation() {
                Aggregation::LeftFold => {
                    let mut acc = items[0].clone();
                    for y in &items[1..] {
                        acc = ev.combine(Arith::Add, &acc, y);
                    }
                    acc
                }
                Aggregation::BalancedTree => ev.pairwise(Arith::Add, items),
            };
            let out = match &sum {
                Val::Const(c) => FloatSig::constant(&node.activation.eval(c)?),
                _ => {
                    let x = ev.sig(&sum);
                    piecewise_sig(ev.net, &node.activation, &x, &format!("{}_act", names[v]))
                }
            };
            updates.push(out);
        }
    }
    let new_bits: Vec<Vec<Sig>> = updates.iter().map(|u| u.bits("").into_iter().map(|(_, f)| f).collect()).collect();
    let level = net.level_of_all(new_bits.iter().flatten());

    let trigger = match nn.attention() {
        NnAttention::Thresholds(list) => {
            let exceeds: Vec<Sig> = list
                .iter()
                .enumerate()
                .map(|(i, (u, t))| Formula::not_s(ge_sig(&mut net, &FloatSig::constant(t), &state[*u], &format!("att{i}"))))
                .collect();
            Some(Formula::any(exceeds))
        }
        NnAttention::External(_) => None,
    };
    let cmp_level = trigger.as_ref().map(|f| net.level(f) + 2).unwrap_or(0);
    let period = (level + 1).max(cmp_level).max(2);
    let t = net.counter("_t", period);
    let update = t[period - 1].clone();
    for (reg, new) in registers.iter().zip(&new_bits) {
        for (b, f) in reg.iter().zip(new) {
            let rule = Formula::or_s(
                Formula::and_s(update.clone(), f.clone()),
                Formula::and_s(Formula::not_s(update.clone()), b.clone()),
            );
            net.set_rule(b, rule);
        }
    }
    let (attention, offset) = match (nn.attention(), trigger) {
        (NnAttention::External(m), _) => (Attention::External(m.scaled(period as u64, 0)), 0),
        (NnAttention::Thresholds(_), Some(f)) => {
            let att = net.register("_att", Some(false));
            net.set_rule(&att, Formula::and_s(t[period - 2].clone(), f));
            (Attention::Predicates(vec![var_of(&att)]), period as u64 - 1)
        }
        (NnAttention::Thresholds(_), None) => unreachable!(),
    };
    let print: Vec<Sig> = nn.outputs().iter().flat_map(|&o| registers[o].iter().cloned()).collect();
    let program = net.build(&print, attention)?;
    Ok(NnProgram {
        program,
        system: sys,
        period: period as u64,
        offset,
        num_inputs: nn.inputs().len(),
        num_outputs: nn.outputs().len(),
    })
}

/// A network simulating a BNL program. Node values are `0` and `1`; round
/// `r` of the program corresponds to round `period · r` of the network.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BnlNetworkInfo {
    pub period: u64,
    pub nodes: usize,
}

/// Activation used by [`bnl_to_nn`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BinaryActivation {
    Relu,
    Heaviside,
}

impl std::str::FromStr for BinaryActivation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "relu" => Ok(BinaryActivation::Relu),
            "heaviside" => Ok(BinaryActivation::Heaviside),
            _ => Err(Error::Unsupported(format!("unknown activation '{s}'"))),
        }
    }
}

/// Builds a network over `sys` with one node per predicate of the
/// fully-open form of `p`.
pub fn bnl_to_nn(p: &BnlProgram, activation: BinaryActivation, sys: FloatSystem) -> Result<(NeuralNetwork, BnlNetworkInfo)> {
    let act = match activation {
        BinaryActivation::Relu => Piecewise::relu(sys),
        BinaryActivation::Heaviside => Piecewise::heaviside(sys),
    };
    let open = to_fully_open(p)?;
    let one = sys.one();
    let minus = one.neg();
    let mut nodes = Vec::with_capacity(open.num_vars());
    let mut edges = Vec::new();
    for v in 0..open.num_vars() {
        let mut edge = |from: usize, weight: FloatValue| edges.push(Edge { from, to: v, weight });
        let bias = match open.rule(v) {
            Formula::Top => one,
            Formula::Var(y) => {
                edge(*y, one);
                sys.zero()
            }
            Formula::Not(g) => match &**g {
                Formula::Var(y) => {
                    edge(*y, minus);
                    one
                }
                Formula::Top => sys.zero(),
                _ => unreachable!("fully-open rule"),
            },
            Formula::And(a, b) => match (&**a, &**b) {
                (Formula::Var(y), Formula::Var(z)) if y == z => {
                    edge(*y, one);
                    sys.zero()
                }
                (Formula::Var(y), Formula::Var(z)) => {
                    edge(*y, one);
                    edge(*z, one);
                    minus
                }
                _ => unreachable!("fully-open rule"),
            },
        };
        nodes.push(Node {
            id: open.name(v).to_string(),
            bias,
            init: open.terminal(v).map(|b| FloatValue::from_bit(sys, b)),
            activation: act.clone(),
        });
    }
    let below_one = sys.from_parts(false, 0, (sys.beta as u128).pow(sys.p as u32) - 1)?;
    let attention = match open.attention() {
        Attention::Predicates(ps) => NnAttention::Thresholds(ps.iter().map(|&u| (u, below_one)).collect()),
        Attention::External(m) => NnAttention::External(m.clone()),
    };
    let n = nodes.len();
    let nn = NeuralNetwork::new(sys, nodes, edges, open.print().to_vec(), attention, Aggregation::BalancedTree)?;
    Ok((nn, BnlNetworkInfo { period: p.measure().depth as u64 + 1, nodes: n }))
}

/// Reads network outputs of a BNL-derived network as bits.
pub fn bits_of(values: &[FloatValue]) -> Result<Vec<bool>> {
    values
        .iter()
        .map(|v| v.as_bit().ok_or_else(|| Error::Domain(format!("{v} is not 0 or 1"))))
        .collect()
}
