use super::{Attention, BnlProgram};
use crate::error::{Error, Result};
use crate::rounds::{input_index, Emission, OutputSequence};
use crate::sim::{lane, pack, Tape};

/// Configurations of rounds `0..=horizon` and the emissions among them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    pub configs: Vec<Vec<bool>>,
    pub outputs: OutputSequence,
}

impl BnlProgram {
    /// Round-0 configuration for an input assignment (one bit per input
    /// predicate, in variable order).
    pub fn initial_config(&self, input: &[bool]) -> Result<Vec<bool>> {
        let k = self.num_inputs();
        if input.len() != k {
            return Err(Error::InputArity { expected: k, got: input.len() });
        }
        let mut it = input.iter();
        Ok(self.terminals().iter().map(|t| t.unwrap_or_else(|| *it.next().unwrap())).collect())
    }

    /// One synchronous update.
    pub fn step(&self, config: &[bool]) -> Vec<bool> {
        self.rules().iter().map(|r| r.eval(&|&v| config[v])).collect()
    }

    /// Whether round `round` is an output round given its configuration.
    pub fn attends(&self, round: u64, config: &[bool], input_index: usize) -> bool {
        match self.attention() {
            Attention::Predicates(ps) => ps.iter().any(|&v| config[v]),
            Attention::External(m) => m.contains(round, input_index),
        }
    }

    pub fn printed(&self, config: &[bool]) -> Vec<bool> {
        self.print().iter().map(|&v| config[v]).collect()
    }

    /// Runs for `horizon` rounds, recording every configuration.
    pub fn run(&self, input: &[bool], horizon: u64) -> Result<Run> {
        let idx = input_index(input);
        let mut c = self.initial_config(input)?;
        let mut configs = Vec::with_capacity(horizon as usize + 1);
        let mut outputs = Vec::new();
        for round in 0..=horizon {
            if self.attends(round, &c, idx) {
                outputs.push(Emission { round, value: self.printed(&c) });
            }
            let next = if round < horizon { Some(self.step(&c)) } else { None };
            configs.push(c);
            match next {
                Some(n) => c = n,
                None => break,
            }
        }
        Ok(Run { configs, outputs })
    }
}

/// Up to 64 runs evaluated side by side; `states[t][v]` holds variable `v` at
/// round `t` for every lane.
#[derive(Clone, Debug)]
pub struct BatchRun {
    pub lanes: usize,
    pub states: Vec<Vec<u64>>,
}

impl BatchRun {
    pub fn config(&self, round: usize, lane_no: usize) -> Vec<bool> {
        lane(&self.states[round], lane_no)
    }
}

/// A program compiled for bit-parallel execution.
#[derive(Clone, Debug)]
pub struct Machine<'a> {
    program: &'a BnlProgram,
    tape: Tape,
}

impl<'a> Machine<'a> {
    pub fn new(program: &'a BnlProgram) -> Self {
        let tape = Tape::compile(program.rules().iter(), program.num_vars(), |&v| v);
        Machine { program, tape }
    }

    pub fn program(&self) -> &BnlProgram {
        self.program
    }

    /// Packed round-0 state for up to 64 inputs.
    pub fn initial_words(&self, inputs: &[Vec<bool>]) -> Result<Vec<u64>> {
        assert!(inputs.len() <= 64);
        let rows = inputs.iter().map(|i| self.program.initial_config(i)).collect::<Result<Vec<_>>>()?;
        Ok(pack(&rows, self.program.num_vars()))
    }

    pub fn step_words(&self, state: &[u64], scratch: &mut Vec<u64>) -> Vec<u64> {
        let mut next = vec![0u64; state.len()];
        self.tape.eval(state, scratch, &mut next);
        next
    }

    /// Lane mask of output rounds.
    fn attention_mask(&self, round: u64, state: &[u64], indices: &[usize]) -> u64 {
        let all = if indices.len() == 64 { !0 } else { (1u64 << indices.len()) - 1 };
        match self.program.attention() {
            Attention::Predicates(ps) => ps.iter().fold(0, |m, &v| m | state[v]) & all,
            Attention::External(m) => {
                if m.table_len().is_none() {
                    if m.contains(round, 0) {
                        all
                    } else {
                        0
                    }
                } else {
                    indices
                        .iter()
                        .enumerate()
                        .fold(0, |acc, (l, &i)| if m.contains(round, i) { acc | 1 << l } else { acc })
                }
            }
        }
    }

    /// Records every state of rounds `0..=rounds` for up to 64 inputs.
    pub fn trace(&self, inputs: &[Vec<bool>], rounds: u64) -> Result<BatchRun> {
        let mut s = self.initial_words(inputs)?;
        let mut scratch = Vec::new();
        let mut states = Vec::with_capacity(rounds as usize + 1);
        for _ in 0..rounds {
            let n = self.step_words(&s, &mut scratch);
            states.push(s);
            s = n;
        }
        states.push(s);
        Ok(BatchRun { lanes: inputs.len(), states })
    }

    /// Output sequences of every input, stopping once each run has produced
    /// `max_outputs` emissions or reached `horizon`.
    pub fn outputs(&self, inputs: &[Vec<bool>], horizon: u64, max_outputs: Option<usize>) -> Result<Vec<OutputSequence>> {
        let mut result = Vec::with_capacity(inputs.len());
        let mut scratch = Vec::new();
        for chunk in inputs.chunks(64) {
            let indices: Vec<usize> = chunk.iter().map(|i| input_index(i)).collect();
            let mut outs: Vec<OutputSequence> = vec![Vec::new(); chunk.len()];
            let mut s = self.initial_words(chunk)?;
            for round in 0..=horizon {
                let mask = self.attention_mask(round, &s, &indices);
                if mask != 0 {
                    for (l, out) in outs.iter_mut().enumerate() {
                        if mask >> l & 1 == 1 && max_outputs.map_or(true, |m| out.len() < m) {
                            let value = self.program.print().iter().map(|&v| s[v] >> l & 1 == 1).collect();
                            out.push(Emission { round, value });
                        }
                    }
                }
                if let Some(m) = max_outputs {
                    if outs.iter().all(|o| o.len() >= m) {
                        break;
                    }
                }
                if round < horizon {
                    s = self.step_words(&s, &mut scratch);
                }
            }
            result.extend(outs);
        }
        Ok(result)
    }
}
