use super::words::{self, Digit, SWord, Word};
use super::{decode_blocks, IntSystem, IntValue};
use crate::bnl::BnlProgram;
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::logic::Net;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IntOp {
    /// `x > y`, answered as `+1` or `+0` in `Z(1, β)`.
    Compare,
    /// `x + y` in `Z(p + 1, β)`.
    Add,
    /// `x · y` in `Z(2p, β)`.
    Mul,
}

impl FromStr for IntOp {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cmp" | "compare" => Ok(IntOp::Compare),
            "add" => Ok(IntOp::Add),
            "mul" => Ok(IntOp::Mul),
            _ => Err(Error::Unsupported(format!("unknown integer operation '{s}'"))),
        }
    }
}

impl fmt::Display for IntOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IntOp::Compare => "cmp",
            IntOp::Add => "add",
            IntOp::Mul => "mul",
        })
    }
}

/// An internal signal exposed for instrumented runs.
#[derive(Clone, Debug)]
pub enum Probe {
    Bit(Formula),
    /// One-hot digits, most significant first.
    Digits(Vec<Vec<Formula>>),
}

/// A compiled integer operation. The input is the encoding of `x` followed
/// by that of `y`; the print predicates hold the encoded result.
#[derive(Clone, Debug)]
pub struct CompiledInt {
    pub op: IntOp,
    pub system: IntSystem,
    pub result_system: IntSystem,
    pub program: BnlProgram,
    pub output_round: u64,
    pub probes: BTreeMap<String, Probe>,
}

fn operand(net: &mut Net, s: IntSystem, name: &str) -> SWord {
    let positive = net.input(&format!("{name}s"));
    let mut digits: Vec<Digit> =
        (1..=s.p).map(|i| (0..s.beta).map(|k| net.input(&format!("{name}{i}_{k}"))).collect()).collect();
    digits.reverse();
    SWord { positive, word: Word::new(s.beta, digits) }
}

fn digits_probe(w: &Word, len: usize) -> Probe {
    Probe::Digits(w.resized(len).digits.into_iter().rev().collect())
}

pub fn compile_int_op(op: IntOp, p: usize, beta: u32) -> Result<CompiledInt> {
    let system = IntSystem::new(p, beta)?;
    let mut net = Net::new();
    let x = operand(&mut net, system, "x");
    let y = operand(&mut net, system, "y");
    let mut probes = BTreeMap::new();
    let (positive, result, result_p) = match op {
        IntOp::Compare => {
            let (gt, lt) = words::compare(&mut net, &x.word, &y.word, "cmp");
            let both_zero = Formula::and_s(x.word.is_zero(), y.word.is_zero());
            let xp = x.positive.clone();
            let yp = y.positive.clone();
            let answer = Formula::any([
                Formula::all([xp.clone(), yp.clone(), gt]),
                Formula::all([xp.clone(), Formula::not_s(yp.clone()), Formula::not_s(both_zero)]),
                Formula::all([Formula::not_s(xp), Formula::not_s(yp), lt]),
            ]);
            let digit = (0..beta).map(|k| match k {
                0 => Formula::not_s(answer.clone()),
                1 => answer.clone(),
                _ => Formula::bot(),
            });
            (Formula::top(), Word::new(beta, vec![digit.collect()]), 1)
        }
        IntOp::Add => {
            let (sum, carries) = words::signed_add(&mut net, &x, &y, "add");
            for (i, c) in carries.iter().enumerate().skip(1) {
                probes.insert(format!("c{i}"), Probe::Bit(c.clone()));
            }
            (sum.positive, sum.word, p + 1)
        }
        IntOp::Mul => {
            let (product, trace) = words::mul(&mut net, &x.word, &y.word, "mul");
            for (l, level) in trace.levels.iter().enumerate() {
                for (i, w) in level.iter().enumerate() {
                    probes.insert(format!("z{}_{}", l + 1, i + 1), digits_probe(w, 2 * p));
                }
            }
            let zero = Formula::or_s(x.word.is_zero(), y.word.is_zero());
            let same = Formula::iff(x.positive.clone(), y.positive.clone());
            let positive = net.latch("mul_sign", Formula::or_s(same, zero));
            (positive, product, 2 * p)
        }
    };
    let result_system = IntSystem::new(result_p, beta)?;
    let result = result.resized(result_p);
    let mut print = vec![("zs".to_string(), positive)];
    for (i, d) in result.digits.iter().rev().enumerate() {
        for (k, f) in d.iter().enumerate() {
            print.push((format!("z{}_{k}", i + 1), f.clone()));
        }
    }
    let (compiled, _) = net.finish(print)?;
    Ok(CompiledInt {
        op,
        system,
        result_system,
        program: compiled.program,
        output_round: compiled.output_round,
        probes,
    })
}

impl CompiledInt {
    pub fn input_bits(&self, x: &IntValue, y: &IntValue) -> Result<Vec<bool>> {
        let mut bits = self.system.encode(x)?;
        bits.extend(self.system.encode(y)?);
        Ok(bits)
    }

    pub fn decode_output(&self, bits: &[bool]) -> Result<IntValue> {
        self.result_system.decode(bits)
    }

    /// Runs the program to its first output.
    pub fn evaluate(&self, x: &IntValue, y: &IntValue) -> Result<IntValue> {
        let run = self.program.run(&self.input_bits(x, y)?, self.output_round)?;
        let e = run.outputs.first().ok_or_else(|| Error::Domain("program produced no output".into()))?;
        self.decode_output(&e.value)
    }

    /// Digits (most significant first) or a single 0/1 read from a
    /// configuration.
    pub fn read_probe(&self, name: &str, config: &[bool]) -> Result<Vec<u32>> {
        let at = |f: &Formula| f.eval(&|&v| config[v]);
        match self.probes.get(name) {
            None => Err(Error::Domain(format!("no probe named '{name}'"))),
            Some(Probe::Bit(f)) => Ok(vec![at(f) as u32]),
            Some(Probe::Digits(ds)) => {
                let bits: Vec<bool> = ds.iter().flatten().map(at).collect();
                decode_blocks(&bits, self.system.beta)
            }
        }
    }
}
