//! Boolean network logic programs: syntax, execution, dynamics and the
//! fully-open normal form.

mod dynamics;
mod exec;
mod gadgets;
mod open;
mod text;

pub use dynamics::{analyze_dynamics, DynamicsReport};
pub use exec::{BatchRun, Machine, Run};
pub use gadgets::{add_flag, add_one_hot_counter, add_saturating_timer};
pub use open::{is_fully_open, to_fully_open, OpenNames};
pub use text::{format_formula, parse_bnl, pretty_bnl, parse_clauses, Clause, ClauseKind, Directives};

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::rounds::RoundMap;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

pub type VarId = usize;

/// How output rounds are selected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Attention {
    /// Output whenever at least one of these predicates is true.
    Predicates(Vec<VarId>),
    /// Output exactly at the rounds of the map.
    External(RoundMap),
}

/// A BNL program. Variables are kept in declaration order; a variable with no
/// terminal clause is an input predicate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BnlProgram {
    names: Vec<String>,
    terminal: Vec<Option<bool>>,
    rules: Vec<Formula>,
    print: Vec<VarId>,
    attention: Attention,
}

/// Size and depth of a program.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Measure {
    pub size: usize,
    pub depth: usize,
}

impl BnlProgram {
    pub fn new(
        names: Vec<String>,
        terminal: Vec<Option<bool>>,
        rules: Vec<Formula>,
        print: Vec<VarId>,
        attention: Attention,
    ) -> Result<Self> {
        let p = BnlProgram { names, terminal, rules, print, attention };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let n = self.names.len();
        if self.terminal.len() != n || self.rules.len() != n {
            return Err(Error::InvalidProgram("every variable needs exactly one iteration clause".into()));
        }
        let mut seen = HashMap::new();
        for (i, name) in self.names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::InvalidProgram(format!("variable {i} has an empty name")));
            }
            if let Some(j) = seen.insert(name.as_str(), i) {
                return Err(Error::InvalidProgram(format!("duplicate variable '{name}' ({j} and {i})")));
            }
        }
        for (i, r) in self.rules.iter().enumerate() {
            let mut bad = None;
            r.for_each_atom(&mut |&a| {
                if a >= n {
                    bad = Some(a);
                }
            });
            if let Some(a) = bad {
                return Err(Error::InvalidProgram(format!("rule of '{}' references unknown variable {a}", self.names[i])));
            }
        }
        for &v in &self.print {
            if v >= n {
                return Err(Error::InvalidProgram(format!("print predicate {v} is not a variable")));
            }
        }
        if let Attention::Predicates(ps) = &self.attention {
            for &v in ps {
                if v >= n {
                    return Err(Error::InvalidProgram(format!("attention predicate {v} is not a variable")));
                }
            }
        }
        if let Attention::External(m) = &self.attention {
            if let Some(len) = m.table_len() {
                let want = 1usize.checked_shl(self.num_inputs() as u32).unwrap_or(0);
                if len != want {
                    return Err(Error::InvalidProgram(format!(
                        "per-input round table has {len} entries, expected {want}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: VarId) -> &str {
        &self.names[v]
    }

    pub fn var_id(&self, name: &str) -> Option<VarId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn terminal(&self, v: VarId) -> Option<bool> {
        self.terminal[v]
    }

    pub fn terminals(&self) -> &[Option<bool>] {
        &self.terminal
    }

    pub fn rule(&self, v: VarId) -> &Formula {
        &self.rules[v]
    }

    pub fn rules(&self) -> &[Formula] {
        &self.rules
    }

    pub fn print(&self) -> &[VarId] {
        &self.print
    }

    pub fn attention(&self) -> &Attention {
        &self.attention
    }

    pub fn is_input(&self, v: VarId) -> bool {
        self.terminal[v].is_none()
    }

    /// Input predicates in variable order.
    pub fn inputs(&self) -> Vec<VarId> {
        (0..self.num_vars()).filter(|&v| self.is_input(v)).collect()
    }

    pub fn num_inputs(&self) -> usize {
        self.terminal.iter().filter(|t| t.is_none()).count()
    }

    pub fn measure(&self) -> Measure {
        let terminal: usize = self.terminal.iter().map(|t| match t {
            Some(true) => 1,
            Some(false) => 2,
            None => 0,
        }).sum();
        let rules: usize = self.rules.iter().map(|r| r.size()).sum();
        let depth = self.rules.iter().map(|r| r.depth()).max().unwrap_or(0);
        Measure { size: terminal + rules, depth }
    }

    /// Returns a copy with a different attention specification.
    pub fn with_attention(&self, attention: Attention) -> Result<Self> {
        let mut p = self.clone();
        p.attention = attention;
        p.validate()?;
        Ok(p)
    }

    /// Returns a copy with different print predicates.
    pub fn with_print(&self, print: Vec<VarId>) -> Result<Self> {
        let mut p = self.clone();
        p.print = print;
        p.validate()?;
        Ok(p)
    }
}

/// Incremental construction of a program by variable name.
#[derive(Default, Clone, Debug)]
pub struct ProgramBuilder {
    names: Vec<String>,
    index: HashMap<String, VarId>,
    terminal: Vec<Option<bool>>,
    rules: Vec<Option<Formula>>,
    print: Vec<VarId>,
    attention: Option<Attention>,
}

impl ProgramBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a variable (or returns the existing one with that name).
    pub fn var(&mut self, name: &str) -> VarId {
        if let Some(&v) = self.index.get(name) {
            return v;
        }
        let v = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), v);
        self.terminal.push(None);
        self.rules.push(None);
        v
    }

    /// Declares a variable under a fresh name derived from `base`.
    pub fn fresh(&mut self, base: &str) -> VarId {
        if !self.index.contains_key(base) {
            return self.var(base);
        }
        let mut k = 1usize;
        loop {
            let cand = format!("{base}_{k}");
            if !self.index.contains_key(&cand) {
                return self.var(&cand);
            }
            k += 1;
        }
    }

    pub fn lookup(&self, name: &str) -> Option<VarId> {
        self.index.get(name).copied()
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, v: VarId) -> &str {
        &self.names[v]
    }

    pub fn set_terminal(&mut self, v: VarId, value: Option<bool>) -> &mut Self {
        self.terminal[v] = value;
        self
    }

    pub fn set_rule(&mut self, v: VarId, rule: Formula) -> &mut Self {
        self.rules[v] = Some(rule);
        self
    }

    pub fn rule(&self, v: VarId) -> Option<&Formula> {
        self.rules[v].as_ref()
    }

    /// Declares `name` with terminal value and rule in one call.
    pub fn define(&mut self, name: &str, terminal: Option<bool>, rule: Formula) -> VarId {
        let v = self.var(name);
        self.terminal[v] = terminal;
        self.rules[v] = Some(rule);
        v
    }

    pub fn set_print(&mut self, print: Vec<VarId>) -> &mut Self {
        self.print = print;
        self
    }

    pub fn set_attention(&mut self, attention: Attention) -> &mut Self {
        self.attention = Some(attention);
        self
    }

    pub fn build(self) -> Result<BnlProgram> {
        let mut rules = Vec::with_capacity(self.rules.len());
        for (i, r) in self.rules.into_iter().enumerate() {
            match r {
                Some(r) => rules.push(r),
                None => {
                    return Err(Error::InvalidProgram(format!("variable '{}' has no iteration clause", self.names[i])))
                }
            }
        }
        let attention = self.attention.unwrap_or(Attention::Predicates(Vec::new()));
        BnlProgram::new(self.names, self.terminal, rules, self.print, attention)
    }
}
