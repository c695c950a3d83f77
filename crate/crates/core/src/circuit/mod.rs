//! Boolean circuits and self-feeding circuits.

mod balance;
mod file;
mod parity;
mod translate;

pub use balance::balance_formula;
pub use file::{parse_circuit_json, to_circuit_json};
pub use parity::parity_circuit;
pub use translate::{bnl_to_circuit, circuit_to_bnl, CircuitMode};

use crate::error::{Error, Result};
use crate::rounds::{input_index, Emission, OutputSequence, RoundMap};
use serde::{Deserialize, Serialize};

pub type GateId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateLabel {
    Input,
    And,
    Or,
    Not,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gate {
    pub name: String,
    pub label: GateLabel,
    pub inputs: Vec<GateId>,
}

/// A circuit whose gates are stored in topological order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Circuit {
    gates: Vec<Gate>,
    inputs: Vec<GateId>,
    outputs: Vec<GateId>,
}

impl Circuit {
    /// Gates must only reference earlier gates; `inputs` lists every input
    /// gate exactly once.
    pub fn new(gates: Vec<Gate>, inputs: Vec<GateId>, outputs: Vec<GateId>) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidCircuit(m));
        for (i, g) in gates.iter().enumerate() {
            for &j in &g.inputs {
                if j >= i {
                    return bad(format!("gate '{}' reads gate {j} which is not earlier in topological order", g.name));
                }
            }
            match g.label {
                GateLabel::Input if !g.inputs.is_empty() => return bad(format!("input gate '{}' has fan-in", g.name)),
                GateLabel::Not if g.inputs.len() != 1 => return bad(format!("negation gate '{}' needs fan-in 1", g.name)),
                _ => {}
            }
        }
        let n_input_gates = gates.iter().filter(|g| g.label == GateLabel::Input).count();
        let mut seen = vec![false; gates.len()];
        for &i in &inputs {
            if i >= gates.len() || gates[i].label != GateLabel::Input || seen[i] {
                return bad(format!("input list entry {i} is not a distinct input gate"));
            }
            seen[i] = true;
        }
        if inputs.len() != n_input_gates {
            return bad("every input gate must appear in the input order".into());
        }
        if let Some(&o) = outputs.iter().find(|&&o| o >= gates.len()) {
            return bad(format!("output {o} is not a gate"));
        }
        Ok(Circuit { gates, inputs, outputs })
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn inputs(&self) -> &[GateId] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[GateId] {
        &self.outputs
    }

    /// Number of gates.
    pub fn size(&self) -> usize {
        self.gates.len()
    }

    /// Number of wires.
    pub fn edges(&self) -> usize {
        self.gates.iter().map(|g| g.inputs.len()).sum()
    }

    /// Longest path from a fan-in-0 gate to each gate.
    pub fn heights(&self) -> Vec<usize> {
        let mut h = vec![0usize; self.gates.len()];
        for (i, g) in self.gates.iter().enumerate() {
            h[i] = g.inputs.iter().map(|&j| h[j] + 1).max().unwrap_or(0);
        }
        h
    }

    /// Largest height of an output gate.
    pub fn depth(&self) -> usize {
        let h = self.heights();
        self.outputs.iter().map(|&o| h[o]).max().unwrap_or(0)
    }

    /// Evaluates the gates on 64 lanes at once.
    pub fn eval_words(&self, inputs: &[u64]) -> Vec<u64> {
        let mut val = vec![0u64; self.gates.len()];
        for (k, &g) in self.inputs.iter().enumerate() {
            val[g] = inputs[k];
        }
        for (i, g) in self.gates.iter().enumerate() {
            val[i] = match g.label {
                GateLabel::Input => val[i],
                GateLabel::And => g.inputs.iter().fold(!0, |a, &j| a & val[j]),
                GateLabel::Or => g.inputs.iter().fold(0, |a, &j| a | val[j]),
                GateLabel::Not => !val[g.inputs[0]],
            };
        }
        self.outputs.iter().map(|&o| val[o]).collect()
    }

    pub fn eval(&self, inputs: &[bool]) -> Result<Vec<bool>> {
        if inputs.len() != self.inputs.len() {
            return Err(Error::InputArity { expected: self.inputs.len(), got: inputs.len() });
        }
        let words: Vec<u64> = inputs.iter().map(|&b| b as u64).collect();
        Ok(self.eval_words(&words).iter().map(|w| w & 1 == 1).collect())
    }
}

/// Incremental circuit construction.
#[derive(Default, Clone, Debug)]
pub struct CircuitBuilder {
    gates: Vec<Gate>,
    inputs: Vec<GateId>,
}

impl CircuitBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn input(&mut self, name: &str) -> GateId {
        let id = self.gate(name, GateLabel::Input, vec![]);
        self.inputs.push(id);
        id
    }

    pub fn gate(&mut self, name: &str, label: GateLabel, inputs: Vec<GateId>) -> GateId {
        self.gates.push(Gate { name: name.to_string(), label, inputs });
        self.gates.len() - 1
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn finish(self, outputs: Vec<GateId>) -> Result<Circuit> {
        Circuit::new(self.gates, self.inputs, outputs)
    }
}

/// Which rounds of a self-feeding circuit produce output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CircuitAttention {
    /// Output when any of these positions holds 1.
    Positions(Vec<usize>),
    External(RoundMap),
}

/// A circuit with as many inputs as outputs, iterated on its own output.
/// Positions are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfFeedingCircuit {
    circuit: Circuit,
    input_positions: Vec<usize>,
    init: Vec<Option<bool>>,
    print: Vec<usize>,
    attention: CircuitAttention,
}

impl SelfFeedingCircuit {
    /// `init[j]` is `None` exactly at the input positions.
    pub fn new(circuit: Circuit, init: Vec<Option<bool>>, print: Vec<usize>, attention: CircuitAttention) -> Result<Self> {
        let k = circuit.inputs().len();
        if circuit.outputs().len() != k {
            return Err(Error::InvalidCircuit(format!(
                "self-feeding circuit needs as many outputs as inputs ({} vs {k})",
                circuit.outputs().len()
            )));
        }
        if init.len() != k {
            return Err(Error::InvalidCircuit(format!("initial assignment covers {} of {k} positions", init.len())));
        }
        let positions = print.iter().chain(match &attention {
            CircuitAttention::Positions(p) => p.iter(),
            CircuitAttention::External(_) => [].iter(),
        });
        for &j in positions {
            if j >= k {
                return Err(Error::InvalidCircuit(format!("position {j} out of range")));
            }
        }
        let input_positions = (0..k).filter(|&j| init[j].is_none()).collect();
        Ok(SelfFeedingCircuit { circuit, input_positions, init, print, attention })
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn width(&self) -> usize {
        self.init.len()
    }

    pub fn input_positions(&self) -> &[usize] {
        &self.input_positions
    }

    pub fn init(&self) -> &[Option<bool>] {
        &self.init
    }

    pub fn print(&self) -> &[usize] {
        &self.print
    }

    pub fn attention(&self) -> &CircuitAttention {
        &self.attention
    }

    /// `g_0`: the input fills the input positions in order, the rest is the
    /// initial assignment.
    pub fn initial(&self, input: &[bool]) -> Result<Vec<bool>> {
        if input.len() != self.input_positions.len() {
            return Err(Error::InputArity { expected: self.input_positions.len(), got: input.len() });
        }
        let mut it = input.iter();
        Ok(self.init.iter().map(|b| b.unwrap_or_else(|| *it.next().unwrap())).collect())
    }

    fn attends(&self, round: u64, g: &[bool], idx: usize) -> bool {
        match &self.attention {
            CircuitAttention::Positions(p) => p.iter().any(|&j| g[j]),
            CircuitAttention::External(m) => m.contains(round, idx),
        }
    }

    /// Configurations `g_0 … g_horizon` and the emissions among them.
    pub fn run(&self, input: &[bool], horizon: u64) -> Result<(Vec<Vec<bool>>, OutputSequence)> {
        let idx = input_index(input);
        let mut g = self.initial(input)?;
        let mut configs = Vec::new();
        let mut outs = Vec::new();
        for round in 0..=horizon {
            if self.attends(round, &g, idx) {
                outs.push(Emission { round, value: self.print.iter().map(|&j| g[j]).collect() });
            }
            let next = self.circuit.eval(&g)?;
            configs.push(std::mem::replace(&mut g, next));
        }
        Ok((configs, outs))
    }

    /// Output sequences for many inputs, evaluated 64 at a time.
    pub fn outputs(&self, inputs: &[Vec<bool>], horizon: u64, max_outputs: Option<usize>) -> Result<Vec<OutputSequence>> {
        let mut result = Vec::new();
        for chunk in inputs.chunks(64) {
            let rows = chunk.iter().map(|i| self.initial(i)).collect::<Result<Vec<_>>>()?;
            let mut words = crate::sim::pack(&rows, self.width());
            let mut outs: Vec<OutputSequence> = vec![Vec::new(); chunk.len()];
            for round in 0..=horizon {
                for (l, out) in outs.iter_mut().enumerate() {
                    if max_outputs.is_some_and(|m| out.len() >= m) {
                        continue;
                    }
                    let g = crate::sim::lane(&words, l);
                    if self.attends(round, &g, input_index(&chunk[l])) {
                        out.push(Emission { round, value: self.print.iter().map(|&j| g[j]).collect() });
                    }
                }
                if max_outputs.is_some_and(|m| outs.iter().all(|o| o.len() >= m)) {
                    break;
                }
                words = self.circuit.eval_words(&words);
            }
            result.extend(outs);
        }
        Ok(result)
    }
}
