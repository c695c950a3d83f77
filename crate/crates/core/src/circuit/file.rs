//! JSON form of self-feeding circuits (`.circ`).
//!
//! ```json
//! {
//!   "gates": [{"id": "x1", "label": "input", "inputs": []},
//!             {"id": "n", "label": "not", "inputs": ["x1"]}],
//!   "inputs": ["x1"], "outputs": ["n"],
//!   "input_positions": [0], "init": {},
//!   "print": [0], "attention": {"rounds": "arith:0,1"}
//! }
//! ```
//! Positions are 0-based; gates may be listed in any order.

use super::{Circuit, CircuitAttention, Gate, GateLabel, SelfFeedingCircuit};
use crate::error::{Error, Result};
use crate::rounds::RoundMap;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, HashSet};

#[derive(Serialize, Deserialize)]
struct GateRecord {
    id: String,
    label: GateLabel,
    #[serde(default)]
    inputs: Vec<String>,
}

#[derive(Serialize, Deserialize, Default)]
struct AttentionRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    positions: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rounds: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct CircuitFile {
    gates: Vec<GateRecord>,
    inputs: Vec<String>,
    outputs: Vec<String>,
    input_positions: Vec<usize>,
    #[serde(default)]
    init: BTreeMap<usize, bool>,
    #[serde(default)]
    print: Vec<usize>,
    attention: AttentionRecord,
}

fn bad(m: impl Into<String>) -> Error {
    Error::InvalidCircuit(m.into())
}

pub fn parse_circuit_json(text: &str) -> Result<SelfFeedingCircuit> {
    let f: CircuitFile = serde_json::from_str(text)?;
    let mut index: HashMap<&str, usize> = HashMap::new();
    for (i, g) in f.gates.iter().enumerate() {
        if index.insert(g.id.as_str(), i).is_some() {
            return Err(bad(format!("duplicate gate id '{}'", g.id)));
        }
    }
    let lookup = |id: &str| index.get(id).copied().ok_or_else(|| bad(format!("unknown gate '{id}'")));
    let preds: Vec<Vec<usize>> =
        f.gates.iter().map(|g| g.inputs.iter().map(|i| lookup(i)).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
    // Kahn's algorithm, preferring file order among ready gates.
    let n = f.gates.len();
    let mut indeg: Vec<usize> = preds.iter().map(|p| p.len()).collect();
    let mut succ = vec![Vec::new(); n];
    for (i, p) in preds.iter().enumerate() {
        for &j in p {
            succ[j].push(i);
        }
    }
    let mut ready: std::collections::BTreeSet<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(&i) = ready.iter().next() {
        ready.remove(&i);
        order.push(i);
        for &s in &succ[i] {
            indeg[s] -= 1;
            if indeg[s] == 0 {
                ready.insert(s);
            }
        }
    }
    if order.len() != n {
        return Err(bad("the gates contain a cycle"));
    }
    let mut new_id = vec![0; n];
    for (k, &i) in order.iter().enumerate() {
        new_id[i] = k;
    }
    let gates = order
        .iter()
        .map(|&i| Gate {
            name: f.gates[i].id.clone(),
            label: f.gates[i].label,
            inputs: preds[i].iter().map(|&j| new_id[j]).collect(),
        })
        .collect();
    let inputs = f.inputs.iter().map(|i| lookup(i).map(|g| new_id[g])).collect::<Result<_>>()?;
    let outputs = f.outputs.iter().map(|i| lookup(i).map(|g| new_id[g])).collect::<Result<_>>()?;
    let circuit = Circuit::new(gates, inputs, outputs)?;
    let k = f.inputs.len();
    let ins: HashSet<usize> = f.input_positions.iter().copied().collect();
    let mut init = Vec::with_capacity(k);
    for j in 0..k {
        match (ins.contains(&j), f.init.get(&j)) {
            (true, None) => init.push(None),
            (false, Some(&v)) => init.push(Some(v)),
            (true, Some(_)) => return Err(bad(format!("position {j} is both an input and initialised"))),
            (false, None) => return Err(bad(format!("position {j} is neither an input nor initialised"))),
        }
    }
    if f.init.keys().any(|&j| j >= k) || f.input_positions.iter().any(|&j| j >= k) {
        return Err(bad("position out of range"));
    }
    let attention = match (f.attention.positions, f.attention.rounds) {
        (Some(p), None) => CircuitAttention::Positions(p),
        (None, Some(r)) => CircuitAttention::External(RoundMap::parse(&r)?),
        _ => return Err(bad("attention needs exactly one of 'positions' or 'rounds'")),
    };
    SelfFeedingCircuit::new(circuit, init, f.print, attention)
}

pub fn to_circuit_json(c: &SelfFeedingCircuit) -> String {
    let gates = c.circuit().gates();
    let mut used = HashSet::new();
    let ids: Vec<String> = gates
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let id = if used.contains(&g.name) { format!("{}#{i}", g.name) } else { g.name.clone() };
            used.insert(id.clone());
            id
        })
        .collect();
    let file = CircuitFile {
        gates: gates
            .iter()
            .enumerate()
            .map(|(i, g)| GateRecord {
                id: ids[i].clone(),
                label: g.label,
                inputs: g.inputs.iter().map(|&j| ids[j].clone()).collect(),
            })
            .collect(),
        inputs: c.circuit().inputs().iter().map(|&g| ids[g].clone()).collect(),
        outputs: c.circuit().outputs().iter().map(|&g| ids[g].clone()).collect(),
        input_positions: c.input_positions().to_vec(),
        init: c.init().iter().enumerate().filter_map(|(j, v)| v.map(|v| (j, v))).collect(),
        print: c.print().to_vec(),
        attention: match c.attention() {
            CircuitAttention::Positions(p) => AttentionRecord { positions: Some(p.clone()), rounds: None },
            CircuitAttention::External(m) => AttentionRecord { positions: None, rounds: Some(m.to_string()) },
        },
    };
    serde_json::to_string_pretty(&file).expect("circuit serialises")
}
