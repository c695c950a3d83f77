use super::{CircuitAttention, CircuitBuilder, GateId, GateLabel, SelfFeedingCircuit};
use crate::error::{Error, Result};

/// Self-feeding circuit that leaves the parity of its `n` input bits in
/// position 0 and raises position `n` when it has done so.
///
/// Each round XORs disjoint neighbouring pairs, halving the number of
/// significant bits; the auxiliary last position turns on once at most the
/// first bit can be non-zero.
pub fn parity_circuit(n: usize) -> Result<SelfFeedingCircuit> {
    if n == 0 {
        return Err(Error::InvalidCircuit("parity needs at least one input bit".into()));
    }
    let k = n.next_power_of_two().trailing_zeros() as usize;
    let width = 1usize << k;
    let mut b = CircuitBuilder::new();
    let x: Vec<GateId> = (1..=n).map(|i| b.input(&format!("x{i}"))).collect();
    let a = b.input("a");
    let mut padded = x.clone();
    for i in n + 1..=width {
        padded.push(b.gate(&format!("x{i}"), GateLabel::Or, vec![]));
    }
    let neg: Vec<GateId> = x.iter().enumerate().map(|(i, &g)| b.gate(&format!("not_x{}", i + 1), GateLabel::Not, vec![g])).collect();
    let mut neg_padded = neg.clone();
    for (i, &g) in padded.iter().enumerate().skip(n) {
        neg_padded.push(b.gate(&format!("not_x{}", i + 1), GateLabel::Not, vec![g]));
    }
    let mut outs = Vec::with_capacity(n + 1);
    for i in 1..=n {
        let o = if n == 1 {
            b.gate("o1", GateLabel::Or, vec![x[0]])
        } else if i <= width / 2 {
            let (l, r) = (2 * i - 2, 2 * i - 1);
            let p = b.gate(&format!("o{i}_l"), GateLabel::And, vec![padded[l], neg_padded[r]]);
            let q = b.gate(&format!("o{i}_r"), GateLabel::And, vec![neg_padded[l], padded[r]]);
            b.gate(&format!("o{i}"), GateLabel::Or, vec![p, q])
        } else {
            let z = b.gate(&format!("o{i}_zero"), GateLabel::Or, vec![]);
            b.gate(&format!("o{i}"), GateLabel::Or, vec![z])
        };
        outs.push(o);
    }
    let mut only_first = vec![x[0]];
    only_first.extend(&neg[1..]);
    let first = b.gate("o_first", GateLabel::And, only_first);
    let none = b.gate("o_none", GateLabel::And, neg.clone());
    let o = b.gate("o", GateLabel::Or, vec![a, first, none]);
    outs.push(o);
    let circuit = b.finish(outs)?;
    let mut init = vec![None; n];
    init.push(Some(false));
    SelfFeedingCircuit::new(circuit, init, vec![0], CircuitAttention::Positions(vec![n]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    #[test]
    fn traces_of_three_inputs() {
        let c = parity_circuit(3).unwrap();
        let (g, out) = c.run(&bits("010"), 3).unwrap();
        assert_eq!(g, vec![bits("0100"), bits("1000"), bits("1001"), bits("1001")]);
        assert_eq!(out[0].round, 2);
        assert_eq!(out[0].value, vec![true]);
        let (g, out) = c.run(&bits("011"), 3).unwrap();
        assert_eq!(g, vec![bits("0110"), bits("1100"), bits("0000"), bits("0001")]);
        assert_eq!(out[0].round, 3);
        assert_eq!(out[0].value, vec![false]);
    }

    #[test]
    fn single_bit() {
        let c = parity_circuit(1).unwrap();
        for v in [false, true] {
            let (_, out) = c.run(&[v], 3).unwrap();
            assert_eq!(out[0].round, 1);
            assert_eq!(out[0].value, vec![v]);
        }
    }
}
