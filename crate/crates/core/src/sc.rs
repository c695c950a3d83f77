//! Schema-clause (SC) programs, where terminal clauses are formulas over
//! propositions, and their translations to and from BNL.
//!
//! The `.sc` text format is the `.bnl` format with propositions `p0, p1, …`
//! allowed in every clause body; every variable has one terminal and one
//! iteration clause.

use crate::bnl::{format_formula, parse_clauses, Attention, BnlProgram, ClauseKind, ProgramBuilder, VarId};
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::rounds::{input_index, Emission, OutputSequence, RoundMap};
use crate::sim::{lane, Tape};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ScAtom {
    Prop(usize),
    Var(VarId),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScProgram {
    names: Vec<String>,
    terminal: Vec<Formula<usize>>,
    rules: Vec<Formula<ScAtom>>,
    print: Vec<VarId>,
    attention: Attention,
    props: Vec<usize>,
}

impl ScProgram {
    pub fn new(
        names: Vec<String>,
        terminal: Vec<Formula<usize>>,
        rules: Vec<Formula<ScAtom>>,
        print: Vec<VarId>,
        attention: Attention,
    ) -> Result<Self> {
        let n = names.len();
        if terminal.len() != n || rules.len() != n {
            return Err(Error::InvalidProgram("every variable needs one terminal and one iteration clause".into()));
        }
        let mut props = BTreeSet::new();
        for t in &terminal {
            props.extend(t.atoms());
        }
        for r in &rules {
            for a in r.atoms() {
                match a {
                    ScAtom::Prop(i) => {
                        props.insert(i);
                    }
                    ScAtom::Var(v) if v >= n => {
                        return Err(Error::InvalidProgram(format!("unknown variable {v}")));
                    }
                    ScAtom::Var(_) => {}
                }
            }
        }
        let bad = print.iter().chain(match &attention {
            Attention::Predicates(a) => a.iter(),
            Attention::External(_) => [].iter(),
        });
        for &v in bad {
            if v >= n {
                return Err(Error::InvalidProgram(format!("unknown variable {v} in print/attention")));
            }
        }
        let mut seen = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if seen.insert(name.clone(), i).is_some() {
                return Err(Error::InvalidProgram(format!("duplicate variable '{name}'")));
            }
        }
        Ok(ScProgram { names, terminal, rules, print, attention, props: props.into_iter().collect() })
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, v: VarId) -> &str {
        &self.names[v]
    }

    pub fn terminal(&self, v: VarId) -> &Formula<usize> {
        &self.terminal[v]
    }

    pub fn rule(&self, v: VarId) -> &Formula<ScAtom> {
        &self.rules[v]
    }

    pub fn print(&self) -> &[VarId] {
        &self.print
    }

    pub fn attention(&self) -> &Attention {
        &self.attention
    }

    /// Indices of the propositions that occur, in increasing order; inputs
    /// assign them in this order.
    pub fn props(&self) -> &[usize] {
        &self.props
    }

    pub fn size(&self) -> usize {
        self.terminal.iter().map(|t| t.size()).sum::<usize>() + self.rules.iter().map(|r| r.size()).sum::<usize>()
    }

    fn prop_slot(&self) -> HashMap<usize, usize> {
        self.props.iter().enumerate().map(|(i, &p)| (p, i)).collect()
    }

    pub fn initial_config(&self, valuation: &[bool]) -> Result<Vec<bool>> {
        if valuation.len() != self.props.len() {
            return Err(Error::InputArity { expected: self.props.len(), got: valuation.len() });
        }
        let slot = self.prop_slot();
        Ok(self.terminal.iter().map(|t| t.eval(&|p| valuation[slot[p]])).collect())
    }

    pub fn step(&self, valuation: &[bool], config: &[bool]) -> Vec<bool> {
        let slot = self.prop_slot();
        self.rules
            .iter()
            .map(|r| {
                r.eval(&|a| match a {
                    ScAtom::Prop(p) => valuation[slot[p]],
                    ScAtom::Var(v) => config[*v],
                })
            })
            .collect()
    }

    fn attends(&self, round: u64, config: &[bool], idx: usize) -> bool {
        match &self.attention {
            Attention::Predicates(ps) => ps.iter().any(|&v| config[v]),
            Attention::External(m) => m.contains(round, idx),
        }
    }

    /// Configurations of rounds `0..=horizon` and the emissions among them.
    pub fn run(&self, valuation: &[bool], horizon: u64) -> Result<(Vec<Vec<bool>>, OutputSequence)> {
        let idx = input_index(valuation);
        let mut c = self.initial_config(valuation)?;
        let mut configs = Vec::new();
        let mut outs = Vec::new();
        for round in 0..=horizon {
            if self.attends(round, &c, idx) {
                outs.push(Emission { round, value: self.print.iter().map(|&v| c[v]).collect() });
            }
            let next = self.step(valuation, &c);
            configs.push(std::mem::replace(&mut c, next));
        }
        Ok((configs, outs))
    }

    /// Output sequences for many valuations, evaluated 64 at a time.
    pub fn outputs(&self, valuations: &[Vec<bool>], horizon: u64, max_outputs: Option<usize>) -> Result<Vec<OutputSequence>> {
        let n = self.num_vars();
        let slot = self.prop_slot();
        let tape = Tape::compile(self.rules.iter(), n + self.props.len(), |a| match a {
            ScAtom::Var(v) => *v,
            ScAtom::Prop(p) => n + slot[p],
        });
        let mut result = Vec::new();
        let mut scratch = Vec::new();
        for chunk in valuations.chunks(64) {
            let mut words = vec![0u64; n + self.props.len()];
            for (l, val) in chunk.iter().enumerate() {
                let c = self.initial_config(val)?;
                for (i, &b) in c.iter().chain(val.iter()).enumerate() {
                    if b {
                        words[i] |= 1 << l;
                    }
                }
            }
            let mut outs: Vec<OutputSequence> = vec![Vec::new(); chunk.len()];
            let mut next = vec![0u64; n];
            for round in 0..=horizon {
                for (l, out) in outs.iter_mut().enumerate() {
                    let c = lane(&words[..n], l);
                    if max_outputs.map_or(true, |m| out.len() < m) && self.attends(round, &c, input_index(&chunk[l])) {
                        out.push(Emission { round, value: self.print.iter().map(|&v| c[v]).collect() });
                    }
                }
                if max_outputs.is_some_and(|m| outs.iter().all(|o| o.len() >= m)) {
                    break;
                }
                tape.eval(&words, &mut scratch, &mut next);
                words[..n].copy_from_slice(&next);
            }
            result.extend(outs);
        }
        Ok(result)
    }

    /// Transient length and cycle length of the run on `valuation`.
    pub fn dynamics(&self, valuation: &[bool]) -> Result<(u64, u64)> {
        let mut seen = HashMap::new();
        let mut c = self.initial_config(valuation)?;
        let mut round = 0u64;
        loop {
            if let Some(&first) = seen.get(&c) {
                return Ok((first, round - first));
            }
            let next = self.step(valuation, &c);
            seen.insert(c, round);
            c = next;
            round += 1;
        }
    }
}

fn prop_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('p')?;
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

/// Parses an `.sc` program.
pub fn parse_sc(text: &str) -> Result<ScProgram> {
    let (clauses, dirs) = parse_clauses(text)?;
    let perr = |line, message: String| Error::Parse { line, message };
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    for c in &clauses {
        if prop_index(&c.head).is_some() {
            return Err(perr(c.line, format!("'{}' is a proposition and cannot head a clause", c.head)));
        }
        if !index.contains_key(&c.head) {
            index.insert(c.head.clone(), names.len());
            names.push(c.head.clone());
        }
    }
    let n = names.len();
    let mut terminal: Vec<Option<Formula<usize>>> = vec![None; n];
    let mut rules: Vec<Option<Formula<ScAtom>>> = vec![None; n];
    for c in &clauses {
        let v = index[&c.head];
        let mut missing = None;
        let body = c.body.map_atoms(&mut |name: &String| match (prop_index(name), index.get(name)) {
            (Some(p), _) => Formula::var(ScAtom::Prop(p)),
            (None, Some(&w)) => Formula::var(ScAtom::Var(w)),
            (None, None) => {
                missing = Some(name.clone());
                Formula::top()
            }
        });
        if let Some(m) = missing {
            return Err(perr(c.line, format!("undefined predicate '{m}'")));
        }
        match c.kind {
            ClauseKind::Terminal => {
                if terminal[v].is_some() {
                    return Err(perr(c.line, format!("duplicate terminal clause for '{}'", c.head)));
                }
                let mut bad = false;
                let t = body.map_atoms(&mut |a| match a {
                    ScAtom::Prop(p) => Formula::var(*p),
                    ScAtom::Var(_) => {
                        bad = true;
                        Formula::top()
                    }
                });
                if bad {
                    return Err(perr(c.line, format!("terminal clause of '{}' may only use propositions", c.head)));
                }
                terminal[v] = Some(t);
            }
            ClauseKind::Iteration => {
                if rules[v].is_some() {
                    return Err(perr(c.line, format!("duplicate iteration clause for '{}'", c.head)));
                }
                rules[v] = Some(body);
            }
        }
    }
    let terminal = terminal
        .into_iter()
        .enumerate()
        .map(|(v, t)| t.ok_or_else(|| perr(0, format!("'{}' has no terminal clause", names[v]))))
        .collect::<Result<Vec<_>>>()?;
    let rules = rules
        .into_iter()
        .enumerate()
        .map(|(v, r)| r.ok_or_else(|| perr(0, format!("'{}' has no iteration clause", names[v]))))
        .collect::<Result<Vec<_>>>()?;
    let resolve = |list: &[String]| -> Result<Vec<usize>> {
        list.iter().map(|n| index.get(n).copied().ok_or_else(|| perr(0, format!("undefined predicate '{n}'")))).collect()
    };
    let print = resolve(dirs.print.as_deref().unwrap_or(&[]))?;
    let attention = match (dirs.attention, dirs.rounds) {
        (Some(a), _) => Attention::Predicates(resolve(&a)?),
        (None, Some(m)) => Attention::External(m),
        (None, None) => return Err(perr(0, "missing #attention or #rounds".into())),
    };
    ScProgram::new(names, terminal, rules, print, attention)
}

/// Canonical text of an SC program.
pub fn pretty_sc(p: &ScProgram) -> String {
    let mut s = String::new();
    let atom = |a: &ScAtom| match a {
        ScAtom::Prop(i) => format!("p{i}"),
        ScAtom::Var(v) => p.name(*v).to_string(),
    };
    for v in 0..p.num_vars() {
        let _ = writeln!(s, "{}(0) :- {}.", p.name(v), format_formula(p.terminal(v), &|i: &usize| format!("p{i}")));
        let _ = writeln!(s, "{} :- {}.", p.name(v), format_formula(p.rule(v), &atom));
    }
    let list = |vs: &[usize]| vs.iter().map(|&v| p.name(v).to_string()).collect::<Vec<_>>().join(",");
    let _ = writeln!(s, "#print {}", list(p.print()));
    match p.attention() {
        Attention::Predicates(a) => {
            let _ = writeln!(s, "#attention {}", list(a));
        }
        Attention::External(m) => {
            let _ = writeln!(s, "#rounds {m}");
        }
    }
    s
}

/// Globally equivalent BNL program whose output rounds are those of `p`
/// shifted by one. Inputs are the occurring propositions in index order.
pub fn sc_to_bnl(p: &ScProgram) -> Result<BnlProgram> {
    let mut b = ProgramBuilder::new();
    let mut prop_var = HashMap::new();
    for &i in p.props() {
        let v = b.fresh(&format!("P{i}"));
        b.set_rule(v, Formula::var(v));
        prop_var.insert(i, v);
    }
    let vars: Vec<VarId> = (0..p.num_vars()).map(|v| b.fresh(p.name(v))).collect();
    let flag = b.fresh("_sc_flag");
    b.set_terminal(flag, Some(false));
    b.set_rule(flag, Formula::top());
    for v in 0..p.num_vars() {
        let iter = p.rule(v).map_atoms(&mut |a| match a {
            ScAtom::Prop(i) => Formula::var(prop_var[i]),
            ScAtom::Var(w) => Formula::var(vars[*w]),
        });
        let init = p.terminal(v).map_atoms(&mut |i| Formula::var(prop_var[i]));
        b.set_terminal(vars[v], Some(false));
        crate::bnl::add_flag(&mut b, vars[v], Formula::var(flag), iter, init);
    }
    b.set_print(p.print().iter().map(|&v| vars[v]).collect());
    b.set_attention(match p.attention() {
        Attention::Predicates(a) => Attention::Predicates(a.iter().map(|&v| vars[v]).collect()),
        Attention::External(m) => Attention::External(RoundMap::affine(1, 1, m.clone())),
    });
    b.build()
}

/// Globally equivalent SC program: input predicate number `i` receives the
/// terminal clause `p_i`.
pub fn bnl_to_sc(p: &BnlProgram) -> Result<ScProgram> {
    let mut k = 0;
    let terminal = (0..p.num_vars())
        .map(|v| match p.terminal(v) {
            Some(t) => Formula::constant(t),
            None => {
                k += 1;
                Formula::var(k - 1)
            }
        })
        .collect();
    let rules = p.rules().iter().map(|r| r.map_atoms(&mut |&v| Formula::var(ScAtom::Var(v)))).collect();
    ScProgram::new(p.names().to_vec(), terminal, rules, p.print().to_vec(), p.attention().clone())
}
