//! Construction of halting programs from latched Boolean signals.
//!
//! A signal is a formula over program variables. Every variable carries a
//! level: inputs have level 0 and a latch `X :- φ` has level one more than
//! the largest level among the atoms of `φ`. Because inputs never change, a
//! variable of level `ℓ` holds its final value from round `ℓ` on, so a
//! program whose print predicates have maximal level `D` is at a fixed point
//! from round `D`. A saturating timer raises attention exactly then.

use crate::bnl::{add_saturating_timer, Attention, BnlProgram, ProgramBuilder, VarId};
use crate::error::{Error, Result};
use crate::formula::Formula;
use std::collections::{HashMap, HashSet};

pub type Sig = Formula;

/// Builder for latch networks.
#[derive(Default, Clone, Debug)]
pub struct Net {
    b: ProgramBuilder,
    level: Vec<usize>,
    counters: HashMap<String, usize>,
}

/// A halting program and the round of its first output.
#[derive(Clone, Debug)]
pub struct Compiled {
    pub program: BnlProgram,
    pub output_round: u64,
}

impl Net {
    pub fn new() -> Self {
        Self::default()
    }

    fn fresh(&mut self, base: &str) -> VarId {
        let k = self.counters.entry(base.to_string()).or_insert(0);
        loop {
            let name = if *k == 0 { base.to_string() } else { format!("{base}_{k}") };
            *k += 1;
            if self.b.lookup(&name).is_none() {
                let v = self.b.var(&name);
                self.level.push(0);
                return v;
            }
        }
    }

    /// Declares an input predicate.
    pub fn input(&mut self, name: &str) -> Sig {
        let v = self.fresh(name);
        self.b.set_terminal(v, None);
        self.b.set_rule(v, Formula::var(v));
        Formula::var(v)
    }

    pub fn num_vars(&self) -> usize {
        self.b.num_vars()
    }

    /// Round from which `f` holds its final value.
    pub fn level(&self, f: &Sig) -> usize {
        let mut l = 0;
        f.for_each_atom(&mut |&v| l = l.max(self.level[v]));
        l
    }

    pub fn level_of_all<'a>(&self, fs: impl IntoIterator<Item = &'a Sig>) -> usize {
        fs.into_iter().map(|f| self.level(f)).max().unwrap_or(0)
    }

    /// A variable holding `f` one round later. Constants and atoms are
    /// returned unchanged.
    pub fn latch(&mut self, name: &str, f: Sig) -> Sig {
        if f.as_const().is_some() || matches!(f, Formula::Var(_)) {
            return f;
        }
        self.keep(name, f)
    }

    /// Like [`Net::latch`] but always introduces a variable.
    pub fn keep(&mut self, name: &str, f: Sig) -> Sig {
        let v = self.fresh(name);
        match f.as_const() {
            Some(c) => {
                self.b.set_terminal(v, Some(c));
                self.b.set_rule(v, Formula::constant(c));
            }
            None => {
                self.level[v] = self.level(&f) + 1;
                self.b.set_terminal(v, Some(false));
                self.b.set_rule(v, f);
            }
        }
        Formula::var(v)
    }

    /// Latches a one-hot digit.
    pub fn latch_digit(&mut self, name: &str, d: Vec<Sig>) -> Vec<Sig> {
        d.into_iter().enumerate().map(|(k, f)| self.latch(&format!("{name}_{k}"), f)).collect()
    }

    /// A variable of level 0 whose rule is given later by [`Net::set_rule`].
    /// Signals derived from registers are valid as long as the registers
    /// have kept their values for as many rounds as the signal's level.
    pub fn register(&mut self, name: &str, terminal: Option<bool>) -> Sig {
        let v = self.fresh(name);
        self.b.set_terminal(v, terminal);
        self.b.set_rule(v, Formula::var(v));
        Formula::var(v)
    }

    /// Replaces the rule of a register.
    pub fn set_rule(&mut self, register: &Sig, rule: Sig) {
        self.b.set_rule(var_of(register), rule);
    }

    /// One-hot counter registers `T_0 … T_{n−1}` with period `n`; `T_0`
    /// holds at round 0.
    pub fn counter(&mut self, prefix: &str, n: usize) -> Vec<Sig> {
        let ts: Vec<Sig> = (0..n).map(|i| self.register(&format!("{prefix}{i}"), Some(i == 0))).collect();
        for i in 0..n {
            let prev = ts[(i + n - 1) % n].clone();
            self.set_rule(&ts[i], prev);
        }
        ts
    }

    /// Builds the program with the given print variables and attention.
    pub fn build(mut self, print: &[Sig], attention: Attention) -> Result<BnlProgram> {
        let vars = print
            .iter()
            .map(|s| match s {
                Formula::Var(v) => Ok(*v),
                _ => Err(Error::InvalidProgram("print signals must be variables".into())),
            })
            .collect::<Result<Vec<_>>>()?;
        self.b.set_print(vars);
        self.b.set_attention(attention);
        self.b.build()
    }

    /// Turns the print signals into distinct variables, adds the timer and
    /// builds the program. Returns the variables used for printing too.
    pub fn finish(mut self, print: Vec<(String, Sig)>) -> Result<(Compiled, Vec<VarId>)> {
        let mut used = HashSet::new();
        let mut vars = Vec::with_capacity(print.len());
        for (name, f) in print {
            let v = match f {
                Formula::Var(v) if !used.contains(&v) => v,
                other => match self.keep(&name, other) {
                    Formula::Var(v) => v,
                    _ => unreachable!(),
                },
            };
            used.insert(v);
            vars.push(v);
        }
        let d = vars.iter().map(|&v| self.level[v]).max().unwrap_or(0);
        let timer = add_saturating_timer(&mut self.b, "_halt", d);
        self.b.set_print(vars.clone());
        self.b.set_attention(Attention::Predicates(vec![timer[d]]));
        let program = self.b.build()?;
        Ok((Compiled { program, output_round: d as u64 }, vars))
    }
}

/// The variable of an atomic signal.
pub fn var_of(s: &Sig) -> VarId {
    match s {
        Formula::Var(v) => *v,
        _ => panic!("signal is not a variable"),
    }
}
