use super::balance::Balancer;
use super::{CircuitAttention, CircuitBuilder, GateId, GateLabel, SelfFeedingCircuit};
use crate::bnl::{add_flag, add_one_hot_counter, Attention, BnlProgram, ProgramBuilder, VarId};
use crate::error::Result;
use crate::formula::Formula;
use std::collections::HashMap;

/// Gate-per-node or depth-balanced translation of rule bodies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CircuitMode {
    Direct,
    Balanced,
}

/// Self-feeding circuit with the same outputs at the same rounds. Position
/// `j` is variable `j`.
pub fn bnl_to_circuit(p: &BnlProgram, mode: CircuitMode) -> Result<SelfFeedingCircuit> {
    let mut b = CircuitBuilder::new();
    let inputs: Vec<GateId> = (0..p.num_vars()).map(|v| b.input(p.name(v))).collect();
    let mut outputs = Vec::with_capacity(p.num_vars());
    for v in 0..p.num_vars() {
        let var = |w: usize| inputs[w];
        let mut bal = Balancer::new(&mut b, &var);
        let g = match mode {
            CircuitMode::Direct => bal.direct(p.rule(v)),
            CircuitMode::Balanced => bal.build(p.rule(v)),
        };
        outputs.push(g);
    }
    let circuit = b.finish(outputs)?;
    let attention = match p.attention() {
        Attention::Predicates(a) => CircuitAttention::Positions(a.clone()),
        Attention::External(m) => CircuitAttention::External(m.clone()),
    };
    SelfFeedingCircuit::new(circuit, p.terminals().to_vec(), p.print().to_vec(), attention)
}

/// BNL program computing `c` with its output rounds multiplied by
/// `depth + 1` (unchanged when the depth is 0).
pub fn circuit_to_bnl(c: &SelfFeedingCircuit) -> Result<BnlProgram> {
    let circ = c.circuit();
    let k = c.width();
    let heights = circ.heights();
    let d = circ.depth();
    let mut b = ProgramBuilder::new();
    let out_vars: Vec<VarId> = (0..k).map(|j| b.fresh(&format!("out{j}"))).collect();
    for j in 0..k {
        b.set_terminal(out_vars[j], c.init()[j]);
    }
    let gates = circ.gates();
    if d == 0 {
        let pos_of_input: HashMap<GateId, usize> = circ.inputs().iter().enumerate().map(|(i, &g)| (g, i)).collect();
        for (j, &o) in circ.outputs().iter().enumerate() {
            let g = &gates[o];
            let rule = match g.label {
                GateLabel::Input => Formula::var(out_vars[pos_of_input[&o]]),
                GateLabel::And => Formula::top(),
                GateLabel::Or => Formula::bot(),
                GateLabel::Not => unreachable!("negation has height 1"),
            };
            b.set_rule(out_vars[j], rule);
        }
        finish(&mut b, c, &out_vars, None)?;
        return b.build();
    }
    let mut needed = vec![false; gates.len()];
    let mut stack: Vec<GateId> = circ.outputs().to_vec();
    while let Some(g) = stack.pop() {
        if !needed[g] {
            needed[g] = true;
            stack.extend(&gates[g].inputs);
        }
    }
    let gate_vars: Vec<Option<VarId>> = (0..gates.len())
        .map(|g| if needed[g] { Some(b.fresh(&format!("g_{}", gates[g].name))) } else { None })
        .collect();
    let t = add_one_hot_counter(&mut b, "_c", d);
    let body = |g: GateId| -> Formula {
        let kids = gates[g].inputs.iter().map(|&i| Formula::var(gate_vars[i].unwrap()));
        match gates[g].label {
            GateLabel::And => Formula::all(kids),
            GateLabel::Or => Formula::any(kids),
            GateLabel::Not => Formula::not(Formula::var(gate_vars[gates[g].inputs[0]].unwrap())),
            GateLabel::Input => unreachable!(),
        }
    };
    for (pos, &g) in circ.inputs().iter().enumerate() {
        if let Some(v) = gate_vars[g] {
            b.set_terminal(v, Some(false));
            add_flag(&mut b, v, Formula::var(t[0]), Formula::var(out_vars[pos]), Formula::var(v));
        }
    }
    for g in 0..gates.len() {
        let Some(v) = gate_vars[g] else { continue };
        if gates[g].label == GateLabel::Input {
            continue;
        }
        let f = body(g);
        b.set_terminal(v, Some(false));
        add_flag(&mut b, v, Formula::var(t[heights[g]]), f, Formula::var(v));
    }
    for (j, &o) in circ.outputs().iter().enumerate() {
        // Output predicates are computed at height d; shorter paths are
        // padded with single-input conjunctions.
        let mut src = Formula::var(gate_vars[o].unwrap());
        let h = heights[o];
        let top_body = if h == d { body(o) } else { src.clone() };
        let chain_start = if h == d { d } else { h + 1 };
        for level in chain_start..d {
            let pad = b.fresh(&format!("pad{j}_{level}"));
            b.set_terminal(pad, Some(false));
            add_flag(&mut b, pad, Formula::var(t[level]), src.clone(), Formula::var(pad));
            src = Formula::var(pad);
        }
        let last = if h == d { top_body } else { src };
        add_flag(&mut b, out_vars[j], Formula::var(t[d]), last, Formula::bot());
    }
    finish(&mut b, c, &out_vars, Some(d as u64 + 1))?;
    b.build()
}

fn finish(b: &mut ProgramBuilder, c: &SelfFeedingCircuit, out_vars: &[VarId], scale: Option<u64>) -> Result<()> {
    b.set_print(c.print().iter().map(|&j| out_vars[j]).collect());
    b.set_attention(match c.attention() {
        CircuitAttention::Positions(p) => Attention::Predicates(p.iter().map(|&j| out_vars[j]).collect()),
        CircuitAttention::External(m) => match scale {
            Some(s) => Attention::External(m.scaled(s, 0)),
            None => Attention::External(m.clone()),
        },
    });
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::parity_circuit;
    use super::*;
    use crate::bnl::parse_bnl;

    #[test]
    fn parity_program_outputs_at_scaled_rounds() {
        let c = parity_circuit(3).unwrap();
        let p = circuit_to_bnl(&c).unwrap();
        let d = c.circuit().depth() as u64;
        for m in 0..8u32 {
            let input: Vec<bool> = (0..3).map(|i| m >> i & 1 == 1).collect();
            let (_, o1) = c.run(&input, 6).unwrap();
            let o2 = p.run(&input, 6 * (d + 1)).unwrap().outputs;
            let scaled: Vec<_> = o1.iter().map(|e| (e.round * (d + 1), e.value.clone())).collect();
            let got: Vec<_> = o2.iter().map(|e| (e.round, e.value.clone())).collect();
            assert_eq!(scaled, got);
        }
    }

    #[test]
    fn program_to_circuit_and_back() {
        let p = parse_bnl("X(0) :- T.\nY :- Y & X.\nX :- !X.\n#print X,Y\n#attention X\n").unwrap();
        for mode in [CircuitMode::Direct, CircuitMode::Balanced] {
            let c = bnl_to_circuit(&p, mode).unwrap();
            assert_eq!(c.circuit().depth(), 1);
            for v in [false, true] {
                assert_eq!(c.run(&[v], 8).unwrap().1, p.run(&[v], 8).unwrap().outputs);
            }
        }
    }
}
