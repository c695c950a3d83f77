//! Equivalence checking between programs, circuits and networks.

use crate::bnl::{BnlProgram, Machine};
use crate::circuit::SelfFeedingCircuit;
use crate::error::{Error, Result};
use crate::float::{FloatSystem, FloatValue};
use crate::gen::random_any_value;
use crate::int::{IntSystem, IntValue};
use crate::nn::NeuralNetwork;
use crate::rounds::{Emission, OutputSequence};
use crate::sc::ScProgram;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Anything with inputs, a run and output sequences.
#[derive(Clone, Debug)]
pub enum Runnable {
    Bnl(BnlProgram),
    Sc(ScProgram),
    Circuit(SelfFeedingCircuit),
    Nn(NeuralNetwork),
}

/// Input given to one side.
#[derive(Clone, Debug, PartialEq, Eq)]
enum SideInput {
    Bits(Vec<bool>),
    Floats(Vec<FloatValue>),
}

/// Output value or configuration of one side.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Raw {
    Bits(Vec<bool>),
    Floats(Vec<FloatValue>),
}

impl Runnable {
    pub fn kind(&self) -> &'static str {
        match self {
            Runnable::Bnl(_) => "bnl",
            Runnable::Sc(_) => "sc",
            Runnable::Circuit(_) => "circ",
            Runnable::Nn(_) => "nn",
        }
    }

    /// Number of input bits, or of input values for a network.
    pub fn num_inputs(&self) -> usize {
        match self {
            Runnable::Bnl(p) => p.num_inputs(),
            Runnable::Sc(p) => p.props().len(),
            Runnable::Circuit(c) => c.input_positions().len(),
            Runnable::Nn(n) => n.inputs().len(),
        }
    }

    fn outputs(&self, inputs: &[SideInput], horizon: u64, m: usize) -> Result<Vec<OutputSequence<Raw>>> {
        let bits = || -> Result<Vec<Vec<bool>>> {
            inputs
                .iter()
                .map(|i| match i {
                    SideInput::Bits(b) => Ok(b.clone()),
                    SideInput::Floats(_) => Err(Error::Unsupported("binary side given float input".into())),
                })
                .collect()
        };
        let wrap = |seqs: Vec<OutputSequence>| -> Vec<OutputSequence<Raw>> {
            seqs.into_iter()
                .map(|s| s.into_iter().map(|e| Emission { round: e.round, value: Raw::Bits(e.value) }).collect())
                .collect()
        };
        match self {
            Runnable::Bnl(p) => Ok(wrap(Machine::new(p).outputs(&bits()?, horizon, Some(m))?)),
            Runnable::Sc(p) => Ok(wrap(p.outputs(&bits()?, horizon, Some(m))?)),
            Runnable::Circuit(c) => Ok(wrap(c.outputs(&bits()?, horizon, Some(m))?)),
            Runnable::Nn(n) => inputs
                .iter()
                .map(|i| {
                    let xs = match i {
                        SideInput::Floats(v) => v.clone(),
                        SideInput::Bits(b) => b.iter().map(|&x| FloatValue::from_bit(n.system(), x)).collect(),
                    };
                    let seq = n.outputs_within(&xs, horizon, m)?;
                    Ok(seq.into_iter().map(|e| Emission { round: e.round, value: Raw::Floats(e.value) }).collect())
                })
                .collect(),
        }
    }

    fn configs(&self, input: &SideInput, horizon: u64) -> Result<Vec<Raw>> {
        let bits = |i: &SideInput| match i {
            SideInput::Bits(b) => Ok(b.clone()),
            SideInput::Floats(_) => Err(Error::Unsupported("binary side given float input".into())),
        };
        let wrap = |cs: Vec<Vec<bool>>| cs.into_iter().map(Raw::Bits).collect();
        Ok(match self {
            Runnable::Bnl(p) => wrap(p.run(&bits(input)?, horizon)?.configs),
            Runnable::Sc(p) => wrap(p.run(&bits(input)?, horizon)?.0),
            Runnable::Circuit(c) => wrap(c.run(&bits(input)?, horizon)?.0),
            Runnable::Nn(n) => {
                let xs = match input {
                    SideInput::Floats(v) => v.clone(),
                    SideInput::Bits(b) => b.iter().map(|&x| FloatValue::from_bit(n.system(), x)).collect(),
                };
                n.simulate(&xs, horizon)?.0.into_iter().map(Raw::Floats).collect()
            }
        })
    }
}

/// How inputs are given to both sides and how outputs are compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Codec {
    /// Bit strings; network sides read and write `0`/`1` floats.
    Identity,
    /// Signed integers of `Z(p, β)` encoded one after another; the printed
    /// bits are read as one integer.
    Int { p: usize, beta: u32 },
    /// Floats of a system encoded one after another; networks use the
    /// values directly.
    Float { p: usize, q: usize, beta: u32 },
}

impl FromStr for Codec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Unsupported(format!("codec '{s}' is not id, int:P,B or float:P,Q,B"));
        let nums = |t: &str| -> Result<Vec<usize>> { t.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect() };
        if s == "id" || s == "identity" {
            return Ok(Codec::Identity);
        }
        if let Some(rest) = s.strip_prefix("int:") {
            if let [p, b] = nums(rest)?[..] {
                IntSystem::new(p, b as u32)?;
                return Ok(Codec::Int { p, beta: b as u32 });
            }
        }
        if let Some(rest) = s.strip_prefix("float:") {
            if let [p, q, b] = nums(rest)?[..] {
                FloatSystem::new(p, q, b as u32)?;
                return Ok(Codec::Float { p, q, beta: b as u32 });
            }
        }
        Err(bad())
    }
}

impl fmt::Display for Codec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Codec::Identity => write!(f, "id"),
            Codec::Int { p, beta } => write!(f, "int:{p},{beta}"),
            Codec::Float { p, q, beta } => write!(f, "float:{p},{q},{beta}"),
        }
    }
}

/// One test input in the codec's alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Case {
    Bits(Vec<bool>),
    Ints(Vec<IntValue>),
    Floats(Vec<FloatValue>),
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Case::Bits(b) => write!(f, "{}", bits_text(b)),
            Case::Ints(v) => write!(f, "{}", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")),
            Case::Floats(v) => write!(f, "{}", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")),
        }
    }
}

pub fn bits_text(b: &[bool]) -> String {
    b.iter().map(|&x| if x { '1' } else { '0' }).collect()
}

/// A decoded output, comparable across sides.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Datum {
    Bits(Vec<bool>),
    Int(BigInt),
    Floats(Vec<FloatValue>),
    Undecodable(String),
}

impl fmt::Display for Datum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Datum::Bits(b) => write!(f, "{}", bits_text(b)),
            Datum::Int(n) => write!(f, "{n}"),
            Datum::Floats(v) => write!(f, "{}", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")),
            Datum::Undecodable(s) => write!(f, "<{s}>"),
        }
    }
}

/// Which inputs are tested.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InputSuite {
    Exhaustive,
    Random { count: usize, seed: u64 },
}

impl FromStr for InputSuite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "exhaustive" {
            return Ok(InputSuite::Exhaustive);
        }
        s.strip_prefix("random:")
            .and_then(|n| n.parse().ok())
            .map(|count| InputSuite::Random { count, seed: 0 })
            .ok_or_else(|| Error::Unsupported(format!("input suite '{s}' is not exhaustive or random:N")))
    }
}

/// Options of [`check_equivalence`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOptions {
    pub codec: Codec,
    pub inputs: InputSuite,
    /// Number of output emissions compared per input.
    pub outputs: usize,
    /// Rounds simulated on each side; `None` picks `10 · delay · outputs`.
    pub horizon: Option<u64>,
    /// Also compare configurations and output rounds round by round.
    pub global: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { codec: Codec::Identity, inputs: InputSuite::Exhaustive, outputs: 10, horizon: None, global: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    EquivalentOnSuite,
    Counterexample,
}

/// A divergence found on one input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub input: String,
    /// Index of the first differing output, or of the first differing round
    /// for configuration mismatches.
    pub index: usize,
    pub reason: String,
    /// `round: value` for the compared emissions of each side.
    pub a: Vec<String>,
    pub b: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coverage {
    pub inputs_tested: usize,
    pub outputs_compared: usize,
    pub horizon: u64,
    /// Inputs on which some side printed fewer than the requested number of
    /// outputs within the horizon.
    pub short_inputs: usize,
    pub suite: InputSuite,
    pub global: bool,
}

/// Result of [`check_equivalence`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub a: String,
    pub b: String,
    pub codec: Codec,
    pub verdict: Verdict,
    pub counterexample: Option<Counterexample>,
    pub coverage: Coverage,
    /// Least `T ≥ 1` with `T · y_n ≥ x_n` for the compared output rounds
    /// `x_n` of `a` and `y_n` of `b`; `None` if no such `T` exists.
    pub delay: Option<u64>,
    /// The same with the sides swapped.
    pub inverse_delay: Option<u64>,
    /// `x_n − y_n` when it is the same for every compared output.
    pub shift: Option<i64>,
}

impl EquivalenceReport {
    pub fn is_equivalent(&self) -> bool {
        self.verdict == Verdict::EquivalentOnSuite
    }
}

impl fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |v: Option<u64>| v.map_or("unbounded".to_string(), |x| x.to_string());
        writeln!(f, "{} vs {} (codec {})", self.a, self.b, self.codec)?;
        match self.verdict {
            Verdict::EquivalentOnSuite => writeln!(f, "verdict: equivalent on suite")?,
            Verdict::Counterexample => writeln!(f, "verdict: counterexample")?,
        }
        let c = &self.coverage;
        writeln!(f, "inputs tested: {}, outputs compared: {}, horizon: {}", c.inputs_tested, c.outputs_compared, c.horizon)?;
        if let InputSuite::Random { count, seed } = c.suite {
            writeln!(f, "random inputs: {count}, seed {seed}")?;
        }
        if c.short_inputs > 0 {
            writeln!(f, "warning: {} input(s) printed fewer outputs than requested within the horizon", c.short_inputs)?;
        }
        writeln!(f, "delay: {}, inverse delay: {}", opt(self.delay), opt(self.inverse_delay))?;
        if let Some(s) = self.shift {
            writeln!(f, "round shift: {s:+}")?;
        }
        if let Some(cx) = &self.counterexample {
            writeln!(f, "input: {}", cx.input)?;
            writeln!(f, "{} at index {}", cx.reason, cx.index)?;
            writeln!(f, "a: {}", cx.a.join(", "))?;
            writeln!(f, "b: {}", cx.b.join(", "))?;
        }
        Ok(())
    }
}

/// How one side reads cases and how its outputs are decoded.
struct Side<'a> {
    r: &'a Runnable,
    codec: Codec,
}

impl Side<'_> {
    fn is_net(&self) -> bool {
        matches!(self.r, Runnable::Nn(_))
    }

    /// Number of codec values in one input.
    fn arity(&self) -> Result<usize> {
        let n = self.r.num_inputs();
        let per = match self.codec {
            Codec::Identity => 1,
            Codec::Int { p, beta } if !self.is_net() => IntSystem::new(p, beta)?.width(),
            Codec::Int { .. } => return Err(Error::Unsupported("networks take no integer inputs".into())),
            Codec::Float { .. } if self.is_net() => 1,
            Codec::Float { p, q, beta } => FloatSystem::new(p, q, beta)?.width(),
        };
        if n % per != 0 {
            return Err(Error::InputArity { expected: per * (n / per + 1), got: n });
        }
        Ok(n / per)
    }

    fn feed(&self, case: &Case) -> Result<SideInput> {
        Ok(match (case, self.codec) {
            (Case::Bits(b), _) => SideInput::Bits(b.clone()),
            (Case::Ints(v), Codec::Int { p, beta }) => {
                let s = IntSystem::new(p, beta)?;
                let mut bits = Vec::new();
                for x in v {
                    bits.extend(s.encode(x)?);
                }
                SideInput::Bits(bits)
            }
            (Case::Floats(v), Codec::Float { p, q, beta }) => {
                if self.is_net() {
                    SideInput::Floats(v.clone())
                } else {
                    let s = FloatSystem::new(p, q, beta)?;
                    SideInput::Bits(v.iter().flat_map(|x| s.encode(x)).collect())
                }
            }
            _ => return Err(Error::Unsupported("case does not match the codec".into())),
        })
    }

    fn decode(&self, raw: &Raw) -> Datum {
        let undecodable = |e: Error| Datum::Undecodable(e.to_string());
        match (raw, self.codec) {
            (Raw::Bits(b), Codec::Identity) => Datum::Bits(b.clone()),
            (Raw::Floats(v), Codec::Identity) => match v.iter().map(FloatValue::as_bit).collect::<Option<Vec<_>>>() {
                Some(b) => Datum::Bits(b),
                None => Datum::Floats(v.clone()),
            },
            (Raw::Bits(b), Codec::Int { beta, .. }) => {
                let w = b.len().saturating_sub(1);
                if b.is_empty() || w % beta as usize != 0 {
                    return Datum::Undecodable(format!("{} printed bits", b.len()));
                }
                match IntSystem::new(w / beta as usize, beta).and_then(|s| s.decode(b)) {
                    Ok(v) => Datum::Int(v.to_bigint(beta)),
                    Err(e) => undecodable(e),
                }
            }
            (Raw::Bits(b), Codec::Float { p, q, beta }) => {
                let decoded = FloatSystem::new(p, q, beta).and_then(|s| {
                    if b.len() % s.width() != 0 {
                        return Err(Error::Encoding(format!("{} printed bits", b.len())));
                    }
                    b.chunks(s.width()).map(|c| s.decode(c)).collect::<Result<Vec<_>>>()
                });
                decoded.map(Datum::Floats).unwrap_or_else(undecodable)
            }
            (Raw::Floats(v), _) => Datum::Floats(v.clone()),
        }
    }
}

fn enumerate_cases(codec: Codec, k: usize, suite: InputSuite) -> Result<Vec<Case>> {
    const LIMIT: u128 = 1 << 20;
    let too_many = |n: u128| Error::Unsupported(format!("exhaustive suite of {n} inputs is too large"));
    match suite {
        InputSuite::Exhaustive => match codec {
            Codec::Identity => {
                if k > 20 {
                    return Err(too_many(1u128 << k.min(127)));
                }
                Ok((0..1usize << k).map(|i| Case::Bits((0..k).map(|j| i >> (k - 1 - j) & 1 == 1).collect())).collect())
            }
            Codec::Int { p, beta } => {
                let s = IntSystem::new(p, beta)?;
                let m: i64 = s.max_magnitude().try_into().map_err(|_| too_many(u128::MAX))?;
                let vals: Vec<IntValue> = (-m..=m).map(|n| s.from_i64(n)).collect::<Result<_>>()?;
                product(&vals, k, LIMIT).map(|v| v.into_iter().map(Case::Ints).collect()).ok_or_else(|| too_many(u128::MAX))
            }
            Codec::Float { p, q, beta } => {
                let vals = FloatSystem::new(p, q, beta)?.values();
                product(&vals, k, LIMIT).map(|v| v.into_iter().map(Case::Floats).collect()).ok_or_else(|| too_many(u128::MAX))
            }
        },
        InputSuite::Random { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|_| {
                    Ok(match codec {
                        Codec::Identity => Case::Bits((0..k).map(|_| rng.gen()).collect()),
                        Codec::Int { p, beta } => Case::Ints(
                            (0..k).map(|_| IntValue { positive: rng.gen(), digits: (0..p).map(|_| rng.gen_range(0..beta)).collect() }).collect(),
                        ),
                        Codec::Float { p, q, beta } => {
                            let s = FloatSystem::new(p, q, beta)?;
                            Case::Floats((0..k).map(|_| random_any_value(&mut rng, s)).collect())
                        }
                    })
                })
                .collect()
        }
    }
}

fn product<T: Clone>(vals: &[T], k: usize, limit: u128) -> Option<Vec<Vec<T>>> {
    let total = (vals.len() as u128).checked_pow(k as u32)?;
    if total > limit {
        return None;
    }
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out.into_iter().flat_map(|prefix| vals.iter().map(move |v| [prefix.clone(), vec![v.clone()]].concat())).collect();
    }
    Some(out)
}

/// Least `T ≥ 1` with `T · y ≥ x` for all pairs.
fn delay_factor(pairs: &[(u64, u64)]) -> Option<u64> {
    let mut t = 1u64;
    for &(x, y) in pairs {
        if y == 0 {
            if x > 0 {
                return None;
            }
        } else {
            t = t.max(x.div_ceil(y));
        }
    }
    Some(t)
}

fn emissions_text(seq: &[Emission<Datum>]) -> Vec<String> {
    seq.iter().map(|e| format!("{}: {}", e.round, e.value)).collect()
}

/// Compares the first `outputs` emissions of both sides on every input of
/// the suite.
pub fn check_equivalence(a: &Runnable, b: &Runnable, opts: &CheckOptions) -> Result<EquivalenceReport> {
    let sa = Side { r: a, codec: opts.codec };
    let sb = Side { r: b, codec: opts.codec };
    let k = sa.arity()?;
    if sb.arity()? != k {
        return Err(Error::InputArity { expected: k, got: sb.arity()? });
    }
    if opts.global && (sa.is_net() != sb.is_net() || opts.codec != Codec::Identity && !sa.is_net()) {
        return Err(Error::Unsupported("global comparison needs two binary sides under the identity codec, or two networks".into()));
    }
    let cases = enumerate_cases(opts.codec, k, opts.inputs)?;
    let fa: Vec<SideInput> = cases.iter().map(|c| sa.feed(c)).collect::<Result<_>>()?;
    let fb: Vec<SideInput> = cases.iter().map(|c| sb.feed(c)).collect::<Result<_>>()?;
    let m = opts.outputs;
    let run = |h: u64| -> Result<(Vec<OutputSequence<Raw>>, Vec<OutputSequence<Raw>>)> {
        Ok((a.outputs(&fa, h, m)?, b.outputs(&fb, h, m)?))
    };
    let first = opts.horizon.unwrap_or(10 * m.max(1) as u64);
    let (mut oa, mut ob) = run(first)?;
    let mut horizon = first;
    let pairs: Vec<(u64, u64)> =
        oa.iter().zip(&ob).flat_map(|(x, y)| x.iter().zip(y).map(|(e, f)| (e.round, f.round))).collect();
    let swapped: Vec<(u64, u64)> = pairs.iter().map(|&(x, y)| (y, x)).collect();
    let t = delay_factor(&pairs).unwrap_or(1).max(delay_factor(&swapped).unwrap_or(1));
    if opts.horizon.is_none() {
        let short = oa.iter().zip(&ob).any(|(x, y)| x.len() < m || y.len() < m);
        if short && t > 1 {
            horizon = 10 * t * m.max(1) as u64;
            (oa, ob) = run(horizon)?;
        }
    }
    let mut report = EquivalenceReport {
        a: a.kind().into(),
        b: b.kind().into(),
        codec: opts.codec,
        verdict: Verdict::EquivalentOnSuite,
        counterexample: None,
        coverage: Coverage { inputs_tested: cases.len(), outputs_compared: 0, horizon, short_inputs: 0, suite: opts.inputs, global: opts.global },
        delay: Some(1),
        inverse_delay: Some(1),
        shift: None,
    };
    let mut pairs = Vec::new();
    for (i, case) in cases.iter().enumerate() {
        let da: Vec<Emission<Datum>> = oa[i].iter().map(|e| Emission { round: e.round, value: sa.decode(&e.value) }).collect();
        let db: Vec<Emission<Datum>> = ob[i].iter().map(|e| Emission { round: e.round, value: sb.decode(&e.value) }).collect();
        let n = da.len().min(db.len()).min(m);
        if n < m {
            report.coverage.short_inputs += 1;
        }
        let mut bad = (0..n).find(|&j| da[j].value != db[j].value).map(|j| (j, "outputs differ"));
        // An unmatched emission early enough that a delayed partner would have appeared.
        if bad.is_none() && n < m {
            let extra = da.get(n).or(db.get(n)).map(|e| e.round);
            if extra.is_some_and(|r| (r + 1).saturating_mul(t) <= horizon / 2) {
                bad = Some((n, "output counts differ"));
            }
        }
        if bad.is_none() && opts.global {
            bad = (0..n).find(|&j| da[j].round != db[j].round).map(|j| (j, "output rounds differ"));
            if bad.is_none() {
                let ca = a.configs(&fa[i], horizon)?;
                let cb = b.configs(&fb[i], horizon)?;
                bad = ca.iter().zip(&cb).position(|(x, y)| x != y).map(|r| (r, "configurations differ"));
            }
        }
        if let Some((index, reason)) = bad {
            report.verdict = Verdict::Counterexample;
            report.counterexample = Some(Counterexample {
                input: case.to_string(),
                index,
                reason: reason.into(),
                a: emissions_text(&da[..da.len().min(m)]),
                b: emissions_text(&db[..db.len().min(m)]),
            });
            break;
        }
        report.coverage.outputs_compared += n;
        pairs.extend((0..n).map(|j| (da[j].round, db[j].round)));
    }
    let swapped: Vec<(u64, u64)> = pairs.iter().map(|&(x, y)| (y, x)).collect();
    report.delay = delay_factor(&pairs);
    report.inverse_delay = delay_factor(&swapped);
    let diffs: Vec<i64> = pairs.iter().map(|&(x, y)| x as i64 - y as i64).collect();
    report.shift = diffs.first().filter(|d| diffs.iter().all(|x| x == *d)).copied();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bnl::parse_bnl;

    #[test]
    fn reflexive_and_counterexample() {
        let p = parse_bnl("X(0) :- F.\nX :- Y & !X.\nY :- Y.\n#print X\n#attention X\n").unwrap();
        let a = Runnable::Bnl(p.clone());
        let r = check_equivalence(&a, &a, &CheckOptions { global: true, ..Default::default() }).unwrap();
        assert!(r.is_equivalent());
        assert_eq!((r.delay, r.shift), (Some(1), Some(0)));
        let q = parse_bnl("X(0) :- F.\nX :- Y & !X.\nY :- Y.\nW(0) :- F.\nW :- X.\n#print W\n#attention X\n").unwrap();
        let r = check_equivalence(&a, &Runnable::Bnl(q), &CheckOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Counterexample);
        let cx = r.counterexample.unwrap();
        assert_eq!(cx.input, "1");
    }

    #[test]
    fn codec_text() {
        for s in ["id", "int:3,10", "float:3,2,2"] {
            assert_eq!(s.parse::<Codec>().unwrap().to_string(), s);
        }
        assert!("float:3,2".parse::<Codec>().is_err());
        assert_eq!("random:5".parse::<InputSuite>().unwrap(), InputSuite::Random { count: 5, seed: 0 });
    }

    #[test]
    fn delay_factors() {
        assert_eq!(delay_factor(&[(3, 1), (6, 2), (0, 0)]), Some(3));
        assert_eq!(delay_factor(&[(1, 0)]), None);
        assert_eq!(delay_factor(&[]), Some(1));
    }
}
