use super::{BnlProgram, Machine};
use crate::error::Result;
use crate::rounds::input_index;
use std::collections::HashMap;

/// The attractor reached from one initial configuration.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct DynamicsReport {
    /// First round whose configuration lies on the attractor.
    pub transient: u64,
    /// Length of the attractor cycle (1 for a fixed point).
    pub cycle_length: u64,
    /// Output rounds before the attractor is entered.
    pub transient_outputs: Vec<u64>,
    /// Output rounds within the first traversal of the attractor.
    pub attractor_outputs: Vec<u64>,
}

impl DynamicsReport {
    pub fn is_fixed_point(&self) -> bool {
        self.cycle_length == 1
    }

    /// Reaches a fixed point and outputs there and nowhere earlier.
    pub fn halts(&self) -> bool {
        self.is_fixed_point() && self.transient_outputs.is_empty() && !self.attractor_outputs.is_empty()
    }
}

fn key(words: &[u64], lane: usize) -> Vec<u64> {
    let mut k = vec![0u64; words.len().div_ceil(64)];
    for (i, w) in words.iter().enumerate() {
        if w >> lane & 1 == 1 {
            k[i / 64] |= 1 << (i % 64);
        }
    }
    k
}

/// Runs until a configuration repeats.
pub fn analyze_dynamics(program: &BnlProgram, input: &[bool]) -> Result<DynamicsReport> {
    let m = Machine::new(program);
    let idx = input_index(input);
    let mut s = m.initial_words(std::slice::from_ref(&input.to_vec()))?;
    let mut seen: HashMap<Vec<u64>, u64> = HashMap::new();
    let mut attends = Vec::new();
    let mut scratch = Vec::new();
    let mut round = 0u64;
    loop {
        let k = key(&s, 0);
        if let Some(&first) = seen.get(&k) {
            let transient_outputs = (0..first).filter(|&r| attends[r as usize]).collect();
            let attractor_outputs = (first..round).filter(|&r| attends[r as usize]).collect();
            return Ok(DynamicsReport { transient: first, cycle_length: round - first, transient_outputs, attractor_outputs });
        }
        seen.insert(k, round);
        let config: Vec<bool> = s.iter().map(|w| w & 1 == 1).collect();
        attends.push(program.attends(round, &config, idx));
        s = m.step_words(&s, &mut scratch);
        round += 1;
    }
}
