use super::{ProgramBuilder, VarId};
use crate::formula::Formula;

/// Adds a one-hot counter `T_0 … T_n` with period `n + 1`; `T_0` starts true.
pub fn add_one_hot_counter(b: &mut ProgramBuilder, prefix: &str, n: usize) -> Vec<VarId> {
    let ids: Vec<VarId> = (0..=n).map(|i| b.fresh(&format!("{prefix}{i}"))).collect();
    for i in 0..=n {
        let prev = if i == 0 { ids[n] } else { ids[i - 1] };
        b.set_terminal(ids[i], Some(i == 0));
        b.set_rule(ids[i], Formula::var(prev));
    }
    ids
}

/// Adds a one-hot timer `T_0 … T_n` that advances once per round and then
/// stays at `T_n`.
pub fn add_saturating_timer(b: &mut ProgramBuilder, prefix: &str, n: usize) -> Vec<VarId> {
    let ids: Vec<VarId> = (0..=n).map(|i| b.fresh(&format!("{prefix}{i}"))).collect();
    for i in 0..=n {
        b.set_terminal(ids[i], Some(i == 0));
        let rule = if n == 0 {
            Formula::var(ids[0])
        } else if i == 0 {
            Formula::bot()
        } else if i == n {
            Formula::or(Formula::var(ids[n - 1]), Formula::var(ids[n]))
        } else {
            Formula::var(ids[i - 1])
        };
        b.set_rule(ids[i], rule);
    }
    ids
}

/// Sets the rule of `x` to `(φ ∧ ψ) ∨ (¬φ ∧ χ)`.
pub fn add_flag(b: &mut ProgramBuilder, x: VarId, phi: Formula, psi: Formula, chi: Formula) {
    let rule = Formula::or(Formula::and(phi.clone(), psi), Formula::and(Formula::not(phi), chi));
    b.set_rule(x, rule);
}

#[cfg(test)]
mod tests {
    use super::super::Attention;
    use super::*;

    #[test]
    fn counter_cycles_and_timer_saturates() {
        let mut b = ProgramBuilder::new();
        let t = add_one_hot_counter(&mut b, "T", 2);
        let s = add_saturating_timer(&mut b, "S", 2);
        b.set_attention(Attention::Predicates(vec![]));
        let p = b.build().unwrap();
        let r = p.run(&[], 6).unwrap();
        for (round, c) in r.configs.iter().enumerate() {
            let hot: Vec<usize> = t.iter().enumerate().filter(|(_, &v)| c[v]).map(|(i, _)| i).collect();
            assert_eq!(hot, vec![round % 3]);
            let hot: Vec<usize> = s.iter().enumerate().filter(|(_, &v)| c[v]).map(|(i, _)| i).collect();
            assert_eq!(hot, vec![round.min(2)]);
        }
    }

    #[test]
    fn flag_switches_between_branches() {
        let mut b = ProgramBuilder::new();
        let f = b.var("F");
        let x = b.var("X");
        b.set_rule(f, Formula::var(f));
        b.set_terminal(x, Some(false));
        add_flag(&mut b, x, Formula::var(f), Formula::top(), Formula::var(x));
        b.set_attention(Attention::Predicates(vec![]));
        let p = b.build().unwrap();
        assert_eq!(p.run(&[true], 1).unwrap().configs[1][x], true);
        assert_eq!(p.run(&[false], 1).unwrap().configs[1][x], false);
    }
}
