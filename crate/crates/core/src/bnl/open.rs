use super::{add_one_hot_counter, Attention, BnlProgram, ProgramBuilder, VarId};
use crate::error::Result;
use crate::formula::Formula;
use std::collections::HashMap;

/// Prefixes of the predicates introduced by [`to_fully_open`].
#[derive(Clone, Copy, Debug)]
pub struct OpenNames;

impl OpenNames {
    pub const SUBFORMULA: &'static str = "_open_s";
    pub const DELAY: &'static str = "_open_d";
    pub const TOP: &'static str = "_open_top";
    pub const COUNTER: &'static str = "_open_t";
}

/// Every rule body is `⊤`, `Y`, `¬Y` or `Y ∧ Z`.
pub fn is_fully_open(p: &BnlProgram) -> bool {
    p.rules().iter().all(|r| match r {
        Formula::Top | Formula::Var(_) => true,
        Formula::Not(g) => matches!(**g, Formula::Var(_)),
        Formula::And(a, b) => matches!((&**a, &**b), (Formula::Var(_), Formula::Var(_))),
    })
}

struct Opener {
    b: ProgramBuilder,
    nodes: HashMap<Formula, VarId>,
    delays: HashMap<(VarId, usize), VarId>,
    top: Option<VarId>,
}

/// Where a predicate's value becomes valid within one period.
#[derive(Clone, Copy)]
enum Stage {
    Always,
    At(usize),
}

impl Opener {
    fn top(&mut self) -> VarId {
        if let Some(t) = self.top {
            return t;
        }
        let t = self.b.fresh(OpenNames::TOP);
        self.b.set_terminal(t, Some(true));
        self.b.set_rule(t, Formula::var(t));
        self.top = Some(t);
        t
    }

    /// A predicate carrying `v` (valid at `from`) so that it is valid at `to`.
    fn delay(&mut self, v: VarId, from: Stage, to: usize) -> VarId {
        let from = match from {
            Stage::Always => return v,
            Stage::At(s) => s,
        };
        debug_assert!(from <= to);
        let mut cur = v;
        for s in from + 1..=to {
            cur = match self.delays.get(&(v, s)) {
                Some(&d) => d,
                None => {
                    let d = self.b.fresh(&format!("{}{}", OpenNames::DELAY, self.delays.len()));
                    self.b.set_terminal(d, Some(false));
                    self.b.set_rule(d, Formula::var(cur));
                    self.delays.insert((v, s), d);
                    d
                }
            };
        }
        cur
    }

    /// The predicate computing `f`, valid at stage `depth(f)`.
    fn node(&mut self, f: &Formula) -> (VarId, Stage) {
        match f {
            Formula::Top => (self.top(), Stage::Always),
            Formula::Var(v) => (*v, Stage::At(0)),
            _ => {
                if let Some(&v) = self.nodes.get(f) {
                    return (v, Stage::At(f.depth()));
                }
                let k = f.depth();
                let body = match f {
                    Formula::Not(g) => {
                        let (x, s) = self.node(g);
                        Formula::not(Formula::var(self.delay(x, s, k - 1)))
                    }
                    Formula::And(a, c) => {
                        let (x, sx) = self.node(a);
                        let (y, sy) = self.node(c);
                        let x = self.delay(x, sx, k - 1);
                        let y = self.delay(y, sy, k - 1);
                        Formula::and(Formula::var(x), Formula::var(y))
                    }
                    _ => unreachable!(),
                };
                let v = self.b.fresh(&format!("{}{}", OpenNames::SUBFORMULA, self.nodes.len()));
                self.b.set_terminal(v, Some(false));
                self.b.set_rule(v, body);
                self.nodes.insert(f.clone(), v);
                (v, Stage::At(k))
            }
        }
    }
}

/// Equivalent program in fully-open form whose output rounds are those of
/// `p` multiplied by `depth(p) + 1`.
pub fn to_fully_open(p: &BnlProgram) -> Result<BnlProgram> {
    let d = p.measure().depth;
    let mut b = ProgramBuilder::new();
    for v in 0..p.num_vars() {
        let id = b.var(p.name(v));
        b.set_terminal(id, p.terminal(v));
    }
    let mut o = Opener { b, nodes: HashMap::new(), delays: HashMap::new(), top: None };
    let attention_preds: Vec<VarId> = match p.attention() {
        Attention::Predicates(a) => a.clone(),
        Attention::External(_) => Vec::new(),
    };
    let counter = if attention_preds.is_empty() {
        None
    } else {
        Some(add_one_hot_counter(&mut o.b, OpenNames::COUNTER, d))
    };
    for v in 0..p.num_vars() {
        let rule = p.rule(v);
        let (x, s) = o.node(rule);
        let x = o.delay(x, s, d);
        let body = if let (true, Some(t)) = (attention_preds.contains(&v), &counter) {
            Formula::and(Formula::var(t[d]), Formula::var(x))
        } else if rule.is_top() {
            Formula::top()
        } else {
            Formula::var(x)
        };
        o.b.set_rule(v, body);
    }
    o.b.set_print(p.print().to_vec());
    o.b.set_attention(match p.attention() {
        Attention::Predicates(a) => Attention::Predicates(a.clone()),
        Attention::External(m) => Attention::External(m.scaled(d as u64 + 1, 0)),
    });
    o.b.build()
}
