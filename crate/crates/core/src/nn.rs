//! General recurrent neural networks over a floating-point system and their
//! reference simulator.

use crate::error::{Error, Result};
use crate::float::{fp_add, fp_compare, fp_mul, FloatSystem, FloatValue, Piecewise, PiecewiseFile};
use crate::rounds::{input_index, Emission, OutputSequence, RoundMap};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;

/// Order in which the bias and the weighted inputs of a node are summed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Aggregation {
    /// `((b + y_1) + y_2) + ⋯`.
    LeftFold,
    /// Pairwise over `[b, y_1, …, y_k]`, an unpaired last element carried up.
    #[default]
    BalancedTree,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub id: String,
    pub bias: FloatValue,
    /// Initial value; `None` exactly for input nodes.
    pub init: Option<FloatValue>,
    pub activation: Piecewise,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub weight: FloatValue,
}

/// How output rounds are selected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NnAttention {
    /// Output when some listed node's value exceeds its threshold.
    Thresholds(Vec<(usize, FloatValue)>),
    External(RoundMap),
}

/// A network whose node list order is the node order. Inputs follow node
/// order; outputs are listed in the order they are printed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeuralNetwork {
    system: FloatSystem,
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    outputs: Vec<usize>,
    attention: NnAttention,
    aggregation: Aggregation,
    /// In-edges per node, sorted by source node.
    incoming: Vec<Vec<usize>>,
}

/// Structural parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NnShape {
    pub nodes: usize,
    /// Largest in-degree `Δ`.
    pub degree: usize,
    /// Largest number of pieces `P`.
    pub piece_size: usize,
    /// Largest polynomial order `Ω`, at least 1.
    pub order: usize,
}

impl NeuralNetwork {
    pub fn new(
        system: FloatSystem,
        nodes: Vec<Node>,
        edges: Vec<Edge>,
        outputs: Vec<usize>,
        attention: NnAttention,
        aggregation: Aggregation,
    ) -> Result<Self> {
        let n = nodes.len();
        let bad = |m: String| Err(Error::InvalidNetwork(m));
        let in_system = |v: &FloatValue| v.system() == system;
        for node in &nodes {
            if !in_system(&node.bias) || node.init.as_ref().is_some_and(|v| !in_system(v)) {
                return bad(format!("node '{}' has constants outside {system}", node.id));
            }
            if node.activation.system() != system {
                return bad(format!("node '{}' has an activation over another system", node.id));
            }
        }
        let mut seen = HashSet::new();
        for (i, e) in edges.iter().enumerate() {
            if e.from >= n || e.to >= n {
                return bad(format!("edge {i} refers to a missing node"));
            }
            if !in_system(&e.weight) {
                return bad(format!("edge {i} has a weight outside {system}"));
            }
            if !seen.insert((e.from, e.to)) {
                return bad(format!("edge {i} duplicates ({}, {})", nodes[e.from].id, nodes[e.to].id));
            }
        }
        if outputs.iter().any(|&o| o >= n) {
            return bad("an output refers to a missing node".into());
        }
        match &attention {
            NnAttention::Thresholds(list) => {
                if list.iter().any(|(u, t)| *u >= n || !in_system(t)) {
                    return bad("an attention entry refers to a missing node or a foreign threshold".into());
                }
            }
            NnAttention::External(_) => {}
        }
        let mut incoming = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            incoming[e.to].push(i);
        }
        for list in &mut incoming {
            list.sort_by_key(|&i| edges[i].from);
        }
        Ok(NeuralNetwork { system, nodes, edges, outputs, attention, aggregation, incoming })
    }

    pub fn system(&self) -> FloatSystem {
        self.system
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// In-edge indices of `v`, sorted by source node.
    pub fn incoming(&self, v: usize) -> &[usize] {
        &self.incoming[v]
    }

    pub fn inputs(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&v| self.nodes[v].init.is_none()).collect()
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    pub fn attention(&self) -> &NnAttention {
        &self.attention
    }

    pub fn aggregation(&self) -> Aggregation {
        self.aggregation
    }

    pub fn shape(&self) -> NnShape {
        NnShape {
            nodes: self.nodes.len(),
            degree: self.incoming.iter().map(Vec::len).max().unwrap_or(0),
            piece_size: self.nodes.iter().map(|v| v.activation.num_pieces()).max().unwrap_or(1),
            order: self.nodes.iter().map(|v| v.activation.order()).max().unwrap_or(0).max(1),
        }
    }

    /// Initial state for the given input values.
    pub fn initial_state(&self, input: &[FloatValue]) -> Result<Vec<FloatValue>> {
        let ins = self.inputs();
        if input.len() != ins.len() {
            return Err(Error::InputArity { expected: ins.len(), got: input.len() });
        }
        if input.iter().any(|v| v.system() != self.system) {
            return Err(Error::InvalidSystem(format!("inputs must belong to {}", self.system)));
        }
        let mut it = input.iter();
        Ok(self.nodes.iter().map(|n| n.init.unwrap_or_else(|| *it.next().unwrap())).collect())
    }

    /// Bias plus weighted inputs, rounded in the configured order.
    pub fn aggregate(&self, v: usize, state: &[FloatValue]) -> FloatValue {
        let mut items = vec![self.nodes[v].bias];
        for &i in &self.incoming[v] {
            let e = &self.edges[i];
            items.push(fp_mul(&state[e.from], &e.weight).expect("same system"));
        }
        let add = |a: &FloatValue, b: &FloatValue| fp_add(a, b).expect("same system");
        match self.aggregation {
            Aggregation::LeftFold => items[1..].iter().fold(items[0], |acc, y| add(&acc, y)),
            Aggregation::BalancedTree => {
                while items.len() > 1 {
                    items = items.chunks(2).map(|c| if c.len() == 2 { add(&c[0], &c[1]) } else { c[0] }).collect();
                }
                items[0]
            }
        }
    }

    pub fn step(&self, state: &[FloatValue]) -> Vec<FloatValue> {
        (0..self.nodes.len())
            .map(|v| self.nodes[v].activation.eval(&self.aggregate(v, state)).expect("same system"))
            .collect()
    }

    /// Index of an input for per-input round tables: inputs that are all
    /// `0` or `1` are read as a binary number, anything else is index 0.
    pub fn input_index(input: &[FloatValue]) -> usize {
        let bits: Option<Vec<bool>> = input.iter().map(FloatValue::as_bit).collect();
        bits.map(|b| input_index(&b)).unwrap_or(0)
    }

    pub fn is_output_round(&self, round: u64, state: &[FloatValue], input_idx: usize) -> bool {
        match &self.attention {
            NnAttention::Thresholds(list) => list.iter().any(|(u, t)| fp_compare(&state[*u], t) == Ordering::Greater),
            NnAttention::External(map) => map.contains(round, input_idx),
        }
    }

    /// States for rounds `0..=horizon` and the outputs among them.
    pub fn simulate(&self, input: &[FloatValue], horizon: u64) -> Result<(Vec<Vec<FloatValue>>, OutputSequence<Vec<FloatValue>>)> {
        let idx = Self::input_index(input);
        let mut state = self.initial_state(input)?;
        let mut states = Vec::with_capacity(horizon as usize + 1);
        let mut outputs = Vec::new();
        for round in 0..=horizon {
            if round > 0 {
                state = self.step(&state);
            }
            if self.is_output_round(round, &state, idx) {
                outputs.push(Emission { round, value: self.outputs.iter().map(|&u| state[u]).collect() });
            }
            states.push(state.clone());
        }
        Ok((states, outputs))
    }

    /// The first `max` outputs within the horizon.
    pub fn outputs_within(&self, input: &[FloatValue], horizon: u64, max: usize) -> Result<OutputSequence<Vec<FloatValue>>> {
        let idx = Self::input_index(input);
        let mut state = self.initial_state(input)?;
        let mut outputs = Vec::new();
        for round in 0..=horizon {
            if round > 0 {
                state = self.step(&state);
            }
            if self.is_output_round(round, &state, idx) {
                outputs.push(Emission { round, value: self.outputs.iter().map(|&u| state[u]).collect() });
                if outputs.len() == max {
                    break;
                }
            }
        }
        Ok(outputs)
    }
}

/// An activation given by name or as a piece table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ActivationSpec {
    /// `relu`, `heaviside` or `identity`.
    Named(String),
    Table(PiecewiseFile),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub id: String,
    pub bias: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub init: Option<String>,
    pub activation: ActivationSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub from: String,
    pub to: String,
    pub weight: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttentionRecord {
    /// Node id and threshold.
    Thresholds(Vec<(String, String)>),
    /// A round map in text form.
    Rounds(String),
}

/// The `.nn` file: a JSON document. Input nodes are the nodes without `init`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NnFile {
    pub system: FloatSystem,
    #[serde(default)]
    pub aggregation: Aggregation,
    pub nodes: Vec<NodeRecord>,
    #[serde(default)]
    pub edges: Vec<EdgeRecord>,
    #[serde(default)]
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub attention: AttentionRecord,
}

/// One problem found by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub location: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

fn activation(sys: FloatSystem, spec: &ActivationSpec) -> Result<Piecewise> {
    match spec {
        ActivationSpec::Named(n) => match n.as_str() {
            "relu" => Ok(Piecewise::relu(sys)),
            "heaviside" => Ok(Piecewise::heaviside(sys)),
            "identity" => Ok(Piecewise::identity(sys)),
            other => Err(Error::InvalidNetwork(format!("unknown activation '{other}'"))),
        },
        ActivationSpec::Table(t) => Piecewise::from_file(sys, t),
    }
}

fn activation_spec(f: &Piecewise) -> ActivationSpec {
    let sys = f.system();
    for (name, g) in [("relu", Piecewise::relu(sys)), ("heaviside", Piecewise::heaviside(sys)), ("identity", Piecewise::identity(sys))] {
        if *f == g {
            return ActivationSpec::Named(name.into());
        }
    }
    ActivationSpec::Table(f.to_file())
}

/// Every invariant violation of a network file; empty when it is well formed.
pub fn validate(file: &NnFile) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut diag = |location: String, message: String| out.push(Diagnostic { location, message });
    let sys = match FloatSystem::new(file.system.p, file.system.q, file.system.beta) {
        Ok(s) => s,
        Err(e) => {
            diag("system".into(), e.to_string());
            return out;
        }
    };
    let mut ids: HashMap<&str, usize> = HashMap::new();
    for (i, n) in file.nodes.iter().enumerate() {
        let at = format!("node '{}'", n.id);
        if ids.insert(n.id.as_str(), i).is_some() {
            diag(at.clone(), "duplicate node id".into());
        }
        if let Err(e) = sys.parse(&n.bias) {
            diag(at.clone(), format!("bias: {e}"));
        }
        let is_input = file.inputs.contains(&n.id);
        match (&n.init, is_input) {
            (Some(v), false) => {
                if let Err(e) = sys.parse(v) {
                    diag(at.clone(), format!("init: {e}"));
                }
            }
            (None, false) => diag(at.clone(), "non-input node without an initial value".into()),
            (Some(_), true) => diag(at.clone(), "input node with an initial value".into()),
            (None, true) => {}
        }
        if let Err(e) = activation(sys, &n.activation) {
            diag(at, format!("activation: {e}"));
        }
    }
    let mut pairs = HashSet::new();
    for (i, e) in file.edges.iter().enumerate() {
        let at = format!("edge {i} ({} -> {})", e.from, e.to);
        for end in [&e.from, &e.to] {
            if !ids.contains_key(end.as_str()) {
                diag(at.clone(), format!("unknown node '{end}'"));
            }
        }
        if let Err(err) = sys.parse(&e.weight) {
            diag(at.clone(), format!("weight: {err}"));
        }
        if !pairs.insert((&e.from, &e.to)) {
            diag(at, "duplicate edge".into());
        }
    }
    for (kind, list) in [("input", &file.inputs), ("output", &file.outputs)] {
        for id in list {
            if !ids.contains_key(id.as_str()) {
                diag(format!("{kind} '{id}'"), "unknown node".into());
            }
        }
    }
    match &file.attention {
        AttentionRecord::Thresholds(list) => {
            for (id, t) in list {
                if !ids.contains_key(id.as_str()) {
                    diag(format!("attention '{id}'"), "unknown node".into());
                }
                if let Err(e) = sys.parse(t) {
                    diag(format!("attention '{id}'"), format!("threshold: {e}"));
                }
            }
        }
        AttentionRecord::Rounds(text) => {
            if let Err(e) = RoundMap::parse(text) {
                diag("attention".into(), e.to_string());
            }
        }
    }
    out
}

impl NeuralNetwork {
    pub fn from_file(file: &NnFile) -> Result<Self> {
        let diags = validate(file);
        if !diags.is_empty() {
            let text: Vec<String> = diags.iter().map(|d| d.to_string()).collect();
            return Err(Error::InvalidNetwork(text.join("; ")));
        }
        let sys = file.system;
        let ids: HashMap<&str, usize> = file.nodes.iter().enumerate().map(|(i, n)| (n.id.as_str(), i)).collect();
        let nodes = file
            .nodes
            .iter()
            .map(|n| {
                Ok(Node {
                    id: n.id.clone(),
                    bias: sys.parse(&n.bias)?,
                    init: n.init.as_ref().map(|v| sys.parse(v)).transpose()?,
                    activation: activation(sys, &n.activation)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let edges = file
            .edges
            .iter()
            .map(|e| Ok(Edge { from: ids[e.from.as_str()], to: ids[e.to.as_str()], weight: sys.parse(&e.weight)? }))
            .collect::<Result<Vec<_>>>()?;
        let outputs = file.outputs.iter().map(|o| ids[o.as_str()]).collect();
        let attention = match &file.attention {
            AttentionRecord::Thresholds(list) => {
                NnAttention::Thresholds(list.iter().map(|(id, t)| Ok((ids[id.as_str()], sys.parse(t)?))).collect::<Result<_>>()?)
            }
            AttentionRecord::Rounds(text) => NnAttention::External(RoundMap::parse(text)?),
        };
        NeuralNetwork::new(sys, nodes, edges, outputs, attention, file.aggregation)
    }

    pub fn to_file(&self) -> NnFile {
        let id = |i: usize| self.nodes[i].id.clone();
        NnFile {
            system: self.system,
            aggregation: self.aggregation,
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeRecord {
                    id: n.id.clone(),
                    bias: n.bias.to_string(),
                    init: n.init.map(|v| v.to_string()),
                    activation: activation_spec(&n.activation),
                })
                .collect(),
            edges: self.edges.iter().map(|e| EdgeRecord { from: id(e.from), to: id(e.to), weight: e.weight.to_string() }).collect(),
            inputs: self.inputs().into_iter().map(id).collect(),
            outputs: self.outputs.iter().map(|&o| id(o)).collect(),
            attention: match &self.attention {
                NnAttention::Thresholds(list) => AttentionRecord::Thresholds(list.iter().map(|(u, t)| (id(*u), t.to_string())).collect()),
                NnAttention::External(map) => AttentionRecord::Rounds(map.to_string()),
            },
        }
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let file: NnFile = serde_json::from_str(text)?;
        Self::from_file(&file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable")
    }
}
