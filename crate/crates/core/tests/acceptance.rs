//! Runs every acceptance criterion and prints one line per criterion.

use boolnet::bnl::{analyze_dynamics, is_fully_open, to_fully_open, BnlProgram, Machine};
use boolnet::circuit::{bnl_to_circuit, circuit_to_bnl, parity_circuit, CircuitMode, SelfFeedingCircuit};
use boolnet::float::{self, compile_fp_op, FloatSystem, FloatValue, FpOp, Piecewise, RawFormat, RawValue};
use boolnet::gen::{random_any_value, random_bnl, random_nn, random_sc, random_value, BnlShape, NnShape};
use boolnet::harness::{check_equivalence, CheckOptions, Runnable};
use boolnet::int::{compile_int_op, CompiledInt, IntOp, IntSystem, IntValue};
use boolnet::nn::NeuralNetwork;
use boolnet::oracle;
use boolnet::rounds::OutputSequence;
use boolnet::sc::sc_to_bnl;
use boolnet::translate::{bits_of, bnl_to_nn, nn_to_bnl, BinaryActivation};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Inputs run through halting programs, and how many of them failed the
/// fixed-point contract.
static HALTING_INPUTS: AtomicUsize = AtomicUsize::new(0);
static HALTING_PROGRAMS: AtomicUsize = AtomicUsize::new(0);
static HALTING_VIOLATIONS: AtomicUsize = AtomicUsize::new(0);

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn all_inputs(k: usize) -> Vec<Vec<bool>> {
    (0..1usize << k).map(|m| (0..k).map(|j| m >> (k - 1 - j) & 1 == 1).collect()).collect()
}

fn bits(s: &str) -> Vec<bool> {
    s.chars().filter(|c| *c != '·').map(|c| c == '1').collect()
}

fn text(b: &[bool]) -> String {
    b.iter().map(|&x| if x { '1' } else { '0' }).collect()
}

/// Runs a compiled program that must halt at `output_round`. The output
/// configuration must be a fixed point, the first output must be printed
/// there and nowhere earlier, and the next round must repeat it. Returns
/// the printed bits.
fn run_halting(program: &BnlProgram, output_round: u64, inputs: &[Vec<bool>]) -> Result<Vec<Vec<bool>>, String> {
    HALTING_PROGRAMS.fetch_add(1, Ordering::Relaxed);
    let machine = Machine::new(program);
    let mut scratch = Vec::new();
    let mut printed = Vec::with_capacity(inputs.len());
    let violation = |msg: String| {
        HALTING_VIOLATIONS.fetch_add(1, Ordering::Relaxed);
        Err(msg)
    };
    for chunk in inputs.chunks(64) {
        let outs = machine.outputs(chunk, output_round + 1, Some(2)).map_err(|e| e.to_string())?;
        let trace = machine.trace(chunk, output_round).map_err(|e| e.to_string())?;
        let last = trace.states.last().expect("trace has a round");
        if &machine.step_words(last, &mut scratch) != last {
            return violation(format!("configuration at round {output_round} is not a fixed point"));
        }
        for seq in outs {
            if seq.len() != 2 || seq[0].round != output_round || seq[1].value != seq[0].value {
                return violation(format!("outputs {:?} do not start at the fixed point {output_round}", seq.iter().map(|e| e.round).collect::<Vec<_>>()));
            }
            printed.push(seq[0].value.clone());
        }
        HALTING_INPUTS.fetch_add(chunk.len(), Ordering::Relaxed);
    }
    if let Some(first) = inputs.first() {
        let d = analyze_dynamics(program, first).map_err(|e| e.to_string())?;
        if !d.halts() || d.attractor_outputs.first() != Some(&output_round) {
            return violation(format!("dynamics {d:?} do not halt at round {output_round}"));
        }
    }
    Ok(printed)
}

/// Constant `C` fitted on the lower half of `points` (ordered by bound),
/// and the first point of the upper half it fails to cover.
fn fit_lower_half(mut points: Vec<(f64, f64)>) -> (f64, Option<(f64, f64)>) {
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    let half = points.len().div_ceil(2);
    let c = points[..half].iter().map(|&(b, v)| v / b).fold(0.0, f64::max);
    let miss = points[half..].iter().copied().find(|&(b, v)| v > c * b + 1e-9);
    (c, miss)
}

// ---------------------------------------------------------------- 1

fn worked_examples() -> Outcome {
    let s = IntSystem::new(3, 10).map_err(|e| e.to_string())?;
    let add = compile_int_op(IntOp::Add, 3, 10).map_err(|e| e.to_string())?;
    let (x, y) = (s.from_i64(614).unwrap(), s.from_i64(187).unwrap());
    let run = add.program.run(&add.input_bits(&x, &y).unwrap(), add.output_round).map_err(|e| e.to_string())?;
    let sum = add.decode_output(&run.outputs[0].value).map_err(|e| e.to_string())?;
    ensure!(sum.to_string() == "+0801", "614 + 187 gave {sum}");
    let last = run.configs.last().unwrap();
    let carries: Vec<u32> = (1..=3).map(|i| add.read_probe(&format!("c{i}"), last).unwrap()[0]).collect();
    ensure!(carries == [1, 1, 0], "carries {carries:?}");

    let mul = compile_int_op(IntOp::Mul, 3, 10).map_err(|e| e.to_string())?;
    let (x, y) = (s.from_i64(187).unwrap(), s.from_i64(463).unwrap());
    let run = mul.program.run(&mul.input_bits(&x, &y).unwrap(), mul.output_round).map_err(|e| e.to_string())?;
    let prod = mul.decode_output(&run.outputs[0].value).map_err(|e| e.to_string())?;
    ensure!(prod.to_string() == "+086581", "187 · 463 gave {prod}");
    let last = run.configs.last().unwrap();
    let read = |name: &str| mul.read_probe(name, last).unwrap().iter().fold(0u64, |a, &d| a * 10 + d as u64);
    let partial = [("z1_1", 561), ("z1_2", 11220), ("z1_3", 74800), ("z2_1", 11781), ("z2_2", 74800), ("z3_1", 86581)];
    for (name, want) in partial {
        ensure!(read(name) == want, "partial product {name} = {}, expected {want}", read(name));
    }

    let c = parity_circuit(3).map_err(|e| e.to_string())?;
    let tables = [
        ("010", ["01000", "10000", "10001", "10001"]),
        ("011", ["01100", "11000", "00000", "00001"]),
    ];
    for (input, rows) in tables {
        let (configs, _) = c.run(&bits(input), 3).map_err(|e| e.to_string())?;
        for (r, (cfg, want)) in configs.iter().zip(rows).enumerate() {
            // Columns x1 x2 x3 x4 a; x4 is the constant padding gate.
            let row = format!("{}0{}", text(&cfg[..3]), text(&cfg[3..]));
            ensure!(row == want, "input {input}, round {r}: {row}, expected {want}");
        }
    }

    let f = FloatSystem::new(4, 3, 3).map_err(|e| e.to_string())?;
    let v = f.parse("-0.2001e+120").map_err(|e| e.to_string())?;
    let want = bits("1·0·010·001·100·001·100·100·010");
    ensure!(f.encode(&v) == want, "encoding {}", text(&f.encode(&v)));
    ensure!(f.decode(&want).map_err(|e| e.to_string())? == v, "decoding did not round-trip");
    Ok("add +0801 carries 110, mul +086581 with 6 partial products, C_3 tables 8 rows, S(4,3,3) string".into())
}

// ---------------------------------------------------------------- 2

fn random_int(rng: &mut ChaCha8Rng, p: usize, beta: u32) -> IntValue {
    IntValue { positive: rng.gen(), digits: (0..p).map(|_| rng.gen_range(0..beta)).collect() }
}

fn all_ints(s: IntSystem) -> Vec<IntValue> {
    let m: i64 = s.max_magnitude().try_into().unwrap();
    let mut out: Vec<IntValue> = (-m..=m).map(|n| s.from_i64(n).unwrap()).collect();
    out.push(IntValue { positive: false, digits: vec![0; s.p] });
    out
}

fn check_int(c: &CompiledInt, pairs: &[(IntValue, IntValue)]) -> Result<(), String> {
    let beta = c.system.beta;
    let inputs: Vec<Vec<bool>> = pairs.iter().map(|(x, y)| c.input_bits(x, y).unwrap()).collect();
    let printed = run_halting(&c.program, c.output_round, &inputs)?;
    for ((x, y), out) in pairs.iter().zip(printed) {
        let got = c.decode_output(&out).map_err(|e| e.to_string())?.to_bigint(beta);
        let want = oracle::int_op(c.op, &x.to_bigint(beta), &y.to_bigint(beta));
        ensure!(got == want, "{:?} on Z({}, {beta}): {x}, {y} gave {got}, expected {want}", c.op, c.system.p);
    }
    Ok(())
}

fn int_sweep() -> Outcome {
    let ops = [IntOp::Compare, IntOp::Add, IntOp::Mul];
    let mut total = 0;
    for beta in [2, 3] {
        let s = IntSystem::new(2, beta).unwrap();
        let vals = all_ints(s);
        let pairs: Vec<_> = vals.iter().flat_map(|x| vals.iter().map(move |y| (x.clone(), y.clone()))).collect();
        for op in ops {
            check_int(&compile_int_op(op, 2, beta).map_err(|e| e.to_string())?, &pairs)?;
            total += pairs.len();
        }
    }
    let mut r = rng(2);
    for (p, beta) in [(4usize, 2u32), (8, 10)] {
        let pairs: Vec<_> = (0..10_000).map(|_| (random_int(&mut r, p, beta), random_int(&mut r, p, beta))).collect();
        for op in ops {
            check_int(&compile_int_op(op, p, beta).map_err(|e| e.to_string())?, &pairs)?;
            total += pairs.len();
        }
    }
    Ok(format!("{total} operand pairs agree with the big-integer oracle"))
}

// ---------------------------------------------------------------- 3

fn round_laws() -> Outcome {
    let round = |op, p, beta| compile_int_op(op, p, beta).map(|c| c.output_round).map_err(|e| e.to_string());
    for beta in [2, 10] {
        for p in [2, 4, 8] {
            let r = round(IntOp::Compare, p, beta)?;
            ensure!(r == 2, "compare on Z({p}, {beta}) outputs at round {r}");
        }
        let adds: Vec<u64> = [2, 4, 8].into_iter().map(|p| round(IntOp::Add, p, beta)).collect::<Result<_, _>>()?;
        ensure!(adds.windows(2).all(|w| w[0] == w[1]), "add rounds vary with p at β = {beta}: {adds:?}");
    }
    let bound = |p: usize, beta: u32| (p as f64).log2() + (beta as f64).log2();
    let c = round(IntOp::Mul, 2, 2)? as f64 / bound(2, 2);
    let mut muls = Vec::new();
    for p in [4, 8, 16] {
        let r = round(IntOp::Mul, p, 2)?;
        ensure!(r as f64 <= c * bound(p, 2) + 1e-9, "mul on Z({p}, 2) outputs at round {r} > {c}·{}", bound(p, 2));
        muls.push(r);
    }
    Ok(format!("compare at round 2, add constant, mul rounds {muls:?} within C = {c:.2} fitted at (2, 2)"))
}

// ---------------------------------------------------------------- 4

fn check_fp_pairs(op: FpOp, s: FloatSystem, pairs: &[(FloatValue, FloatValue)]) -> Result<(), String> {
    let c = compile_fp_op(op.clone(), s).map_err(|e| e.to_string())?;
    let inputs: Vec<Vec<bool>> = pairs.iter().map(|(a, b)| c.input_bits(&[*a, *b]).unwrap()).collect();
    let printed = run_halting(&c.program, c.output_round, &inputs)?;
    for ((a, b), out) in pairs.iter().zip(printed) {
        let got = c.decode_output(&out).map_err(|e| e.to_string())?;
        let (reference, exact) = match op {
            FpOp::Add => (float::fp_add(a, b), oracle::fp_add(a, b)),
            FpOp::Mul => (float::fp_mul(a, b), oracle::fp_mul(a, b)),
            _ => unreachable!(),
        };
        let reference = reference.map_err(|e| e.to_string())?;
        ensure!(got == reference && got == exact, "{op} on {s}: {a}, {b} gave {got}, reference {reference}, exact {exact}");
    }
    Ok(())
}

fn random_raw(r: &mut ChaCha8Rng, raw: RawFormat) -> RawValue {
    let lead_zeros = r.gen_range(0..=raw.p + 1);
    let digits = (0..=raw.p).map(|i| if i < lead_zeros { 0 } else { r.gen_range(0..raw.beta) }).collect();
    RawValue { negative: r.gen(), digits, exponent: r.gen_range(-raw.emax()..=raw.emax()) }
}

fn beta_power(beta: u32, k: i64) -> BigRational {
    let b = oracle::rational(beta as i64, 1);
    if k >= 0 {
        num_traits::pow(b, k as usize)
    } else {
        num_traits::pow(num_traits::Inv::inv(b), k.unsigned_abs() as usize)
    }
}

fn fp_sweep() -> Outcome {
    let small = FloatSystem::new(2, 2, 2).unwrap();
    let vs = small.values();
    let all: Vec<_> = vs.iter().flat_map(|a| vs.iter().map(move |b| (*a, *b))).collect();
    let s = FloatSystem::new(3, 2, 2).unwrap();
    let mut r = rng(4);
    let random: Vec<_> = (0..1000).map(|_| (random_any_value(&mut r, s), random_any_value(&mut r, s))).collect();
    for op in [FpOp::Add, FpOp::Mul] {
        check_fp_pairs(op.clone(), small, &all)?;
        check_fp_pairs(op, s, &random)?;
    }
    let c = compile_fp_op(FpOp::Normalize, s).map_err(|e| e.to_string())?;
    let raw = c.raw_format().unwrap();
    let vals: Vec<RawValue> = (0..1000).map(|_| random_raw(&mut r, raw)).collect();
    let inputs: Vec<Vec<bool>> = vals.iter().map(|v| c.raw_input_bits(v).unwrap()).collect();
    let printed = run_halting(&c.program, c.output_round, &inputs)?;
    for (v, out) in vals.iter().zip(printed) {
        let got = c.decode_output(&out).map_err(|e| e.to_string())?;
        let m = v.digits.iter().fold(0i64, |a, &d| a * raw.beta as i64 + d as i64);
        let exact = oracle::rational(if v.negative { -m } else { m }, 1) * beta_power(raw.beta, v.exponent - raw.p as i64);
        let want = oracle::round_rational(s, &exact);
        let reference = raw.normalize(v, s).map_err(|e| e.to_string())?;
        ensure!(got == want && got == reference, "normalize {} gave {got}, expected {want}", raw.format(v));
    }
    Ok(format!("{} exhaustive and {} random add/mul pairs, {} raw values", 2 * all.len(), 2 * random.len(), vals.len()))
}

// ---------------------------------------------------------------- 5

fn check_piecewise(f: &Piecewise, n: usize, seed: u64) -> Result<u64, String> {
    let s = f.system();
    let c = compile_fp_op(FpOp::Piecewise(f.clone()), s).map_err(|e| e.to_string())?;
    let mut r = rng(seed);
    let xs: Vec<FloatValue> = (0..n).map(|_| random_any_value(&mut r, s)).collect();
    let inputs: Vec<Vec<bool>> = xs.iter().map(|x| c.input_bits(&[*x]).unwrap()).collect();
    let printed = run_halting(&c.program, c.output_round, &inputs)?;
    for (x, out) in xs.iter().zip(printed) {
        let got = c.decode_output(&out).map_err(|e| e.to_string())?;
        let want = oracle::piecewise(f, x);
        ensure!(got == want, "f({x}) gave {got}, expected {want}");
        ensure!(f.eval(x).map_err(|e| e.to_string())? == want, "reference evaluation of f({x}) disagrees");
    }
    Ok(c.output_round)
}

/// Two pieces split at 0, each a polynomial with exactly `order + 1`
/// non-zero coefficients.
fn order_family(s: FloatSystem, order: usize, seed: u64) -> Piecewise {
    let mut r = rng(seed);
    let coeff = |r: &mut ChaCha8Rng| loop {
        let v = random_value(r, s, 1);
        if !v.is_zero() {
            return v;
        }
    };
    let pieces = (0..2).map(|_| (0..=order).map(|_| coeff(&mut r)).collect()).collect();
    Piecewise::new(s, vec![s.zero()], pieces).expect("one breakpoint")
}

fn piecewise_suite() -> Outcome {
    let s = FloatSystem::new(3, 2, 2).unwrap();
    check_piecewise(&Piecewise::relu(s), 500, 51)?;
    check_piecewise(&Piecewise::heaviside(s), 500, 52)?;
    let half = s.parse("+0.100e-01").unwrap();
    let quad = Piecewise::new(
        s,
        vec![s.from_i64(-1), s.one()],
        vec![vec![s.from_i64(-1)], vec![half, s.one(), s.one()], vec![s.from_i64(2), s.from_i64(-1)]],
    )
    .map_err(|e| e.to_string())?;
    check_piecewise(&quad, 500, 53)?;
    let r = s.p.max(s.q) as f64;
    let law = |omega: usize| ((omega as f64).log2() + 1.0) * (r.log2() + (s.beta as f64).log2());
    let mut rounds = Vec::new();
    for omega in [1usize, 2, 4, 8] {
        let f = order_family(s, omega, 60 + omega as u64);
        rounds.push((omega, check_piecewise(&f, 500, 70 + omega as u64)?));
    }
    // One constant over the grid {1, 2, 4}; order 8 is held out.
    let c = rounds[..3].iter().map(|&(o, r)| r as f64 / law(o)).fold(0.0, f64::max);
    let (omega, round) = rounds[3];
    ensure!(round as f64 <= c * law(omega) + 1e-9, "held-out order {omega}: round {round} > {c:.2}·{:.2}", law(omega));
    Ok(format!("ReLU, Heaviside, quadratic on 500 inputs each; rounds by order {rounds:?} within C = {c:.2} fitted on orders 1, 2, 4"))
}

// ---------------------------------------------------------------- 6

fn sc_suite() -> Outcome {
    let mut r = rng(6);
    let mut sizes = Vec::new();
    for i in 0..200 {
        let vars = 1 + i % 10;
        let sc = random_sc(&mut r, vars, i % 4, 1 + i % 4);
        let b = sc_to_bnl(&sc).map_err(|e| e.to_string())?;
        for input in all_inputs(sc.props().len()) {
            let (_, a) = sc.run(&input, 32).map_err(|e| e.to_string())?;
            let got = b.run(&input, 33).map_err(|e| e.to_string())?.outputs;
            let shifted: Vec<_> = a.iter().map(|e| (e.round + 1, e.value.clone())).collect();
            let got: Vec<_> = got.iter().map(|e| (e.round, e.value.clone())).collect();
            ensure!(shifted == got, "program {i}, input {}: rounds not shifted by one", text(&input));
        }
        sizes.push((sc.size() as f64, b.measure().size as f64));
    }
    let (c, miss) = fit_lower_half(sizes);
    ensure!(miss.is_none(), "sc_to_bnl size {:?} exceeds C = {c:.2} times the source size", miss);
    let opts = CheckOptions { global: true, horizon: Some(32), ..Default::default() };
    for i in 0..200 {
        let p = random_bnl(&mut r, BnlShape { vars: 1 + i % 10, inputs: i % 4, depth: 1 + i % 4, max_size: 60 });
        let sc = boolnet::sc::bnl_to_sc(&p).map_err(|e| e.to_string())?;
        let rep = check_equivalence(&Runnable::Bnl(p), &Runnable::Sc(sc), &opts).map_err(|e| e.to_string())?;
        ensure!(rep.is_equivalent(), "bnl_to_sc program {i}: {rep}");
    }
    Ok(format!("200 SC programs shifted by +1 with size ≤ {c:.2}·s; 200 bnl_to_sc images globally equivalent to round 32"))
}

// ---------------------------------------------------------------- 7

fn scaled_outputs(a: &OutputSequence, scale: u64) -> Vec<(u64, Vec<bool>)> {
    a.iter().map(|e| (e.round * scale, e.value.clone())).collect()
}

fn plain(a: &OutputSequence) -> Vec<(u64, Vec<bool>)> {
    scaled_outputs(a, 1)
}

/// Largest `⌈y / x⌉` over paired output rounds with `x > 0`.
fn measured_delay(a: &OutputSequence, b: &OutputSequence) -> Option<u64> {
    a.iter().zip(b.iter()).filter(|(x, _)| x.round > 0).map(|(x, y)| y.round.div_ceil(x.round)).max()
}

fn open_suite() -> Outcome {
    let mut r = rng(7);
    let mut sizes = Vec::new();
    let mut delays_seen = 0;
    for i in 0..200 {
        let vars = 1 + i % 10;
        let p = random_bnl(&mut r, BnlShape { vars, inputs: (i % 9).min(vars), depth: 1 + i % 5, max_size: 60 });
        let q = to_fully_open(&p).map_err(|e| e.to_string())?;
        ensure!(is_fully_open(&q), "program {i} is not fully open");
        let d = p.measure().depth as u64;
        let inputs = all_inputs(p.num_inputs());
        let ma = Machine::new(&p);
        let mb = Machine::new(&q);
        for chunk in inputs.chunks(64) {
            let a = ma.outputs(chunk, 16, None).map_err(|e| e.to_string())?;
            let b = mb.outputs(chunk, 16 * (d + 1), None).map_err(|e| e.to_string())?;
            for (k, (x, y)) in a.iter().zip(&b).enumerate() {
                ensure!(scaled_outputs(x, d + 1) == plain(y), "program {i}, input {}: rounds not scaled by {}", text(&chunk[k]), d + 1);
                if let Some(t) = measured_delay(x, y) {
                    ensure!(t == d + 1, "program {i}: measured delay {t}, expected {}", d + 1);
                    delays_seen += 1;
                }
            }
        }
        let m = p.measure();
        sizes.push(((m.size * m.depth.max(1)) as f64, q.measure().size as f64));
    }
    let (c, miss) = fit_lower_half(sizes);
    ensure!(miss.is_none(), "fully-open size {:?} exceeds C = {c:.2} times s·d", miss);
    Ok(format!("200 programs fully open, rounds scaled by d′+1 ({delays_seen} runs measured), size ≤ {c:.2}·s·d"))
}

// ---------------------------------------------------------------- 8

fn circuit_scaling(c: &SelfFeedingCircuit, inputs: &[Vec<bool>]) -> Result<(), String> {
    let q = circuit_to_bnl(c).map_err(|e| e.to_string())?;
    let d = c.circuit().depth() as u64;
    let scale = if d == 0 { 1 } else { d + 1 };
    let mq = Machine::new(&q);
    for chunk in inputs.chunks(64) {
        let a = c.outputs(chunk, 16, None).map_err(|e| e.to_string())?;
        let b = mq.outputs(chunk, 16 * scale, None).map_err(|e| e.to_string())?;
        for (k, (x, y)) in a.iter().zip(&b).enumerate() {
            ensure!(scaled_outputs(x, scale) == plain(y), "input {}: rounds not scaled by depth + 1 = {scale}", text(&chunk[k]));
            if let Some(t) = measured_delay(x, y) {
                ensure!(t == scale, "measured delay {t}, expected {scale}");
            }
        }
    }
    Ok(())
}

fn circuit_suite() -> Outcome {
    let mut r = rng(8);
    let opts = CheckOptions { global: true, horizon: Some(24), ..Default::default() };
    let mut depths = Vec::new();
    for i in 0..200 {
        let vars = 1 + i % 8;
        let p = random_bnl(&mut r, BnlShape { vars, inputs: (i % 6).min(vars), depth: 1 + i % 6, max_size: 80 });
        for mode in [CircuitMode::Direct, CircuitMode::Balanced] {
            let c = bnl_to_circuit(&p, mode).map_err(|e| e.to_string())?;
            let rep = check_equivalence(&Runnable::Bnl(p.clone()), &Runnable::Circuit(c.clone()), &opts).map_err(|e| e.to_string())?;
            ensure!(rep.is_equivalent(), "program {i} ({mode:?}): {rep}");
            circuit_scaling(&c, &all_inputs(p.num_inputs())).map_err(|e| format!("program {i} ({mode:?}): {e}"))?;
            if mode == CircuitMode::Balanced {
                depths.push(((p.measure().size.max(2) as f64).log2(), c.circuit().depth() as f64));
            }
        }
    }
    let (cd, miss) = fit_lower_half(depths);
    ensure!(miss.is_none(), "balanced depth {:?} exceeds C = {cd:.2} times log₂ size", miss);

    let mut sizes = Vec::new();
    for n in 1..=64usize {
        let c = parity_circuit(n).map_err(|e| e.to_string())?;
        sizes.push((n as f64, c.circuit().size() as f64));
        if n <= 10 {
            let inputs = all_inputs(n);
            circuit_scaling(&c, &inputs).map_err(|e| format!("parity {n}: {e}"))?;
            let bound = n.next_power_of_two().trailing_zeros() as u64 + 1;
            let outs = c.outputs(&inputs, bound, Some(1)).map_err(|e| e.to_string())?;
            for (input, out) in inputs.iter().zip(outs) {
                ensure!(!out.is_empty(), "parity {n}, input {}: no output by round {bound}", text(input));
                ensure!(out[0].value == [oracle::parity(input)], "parity {n}, input {}: wrong output", text(input));
            }
        }
    }
    let (cs, miss) = fit_lower_half(sizes);
    ensure!(miss.is_none(), "parity size {:?} exceeds C = {cs:.2}·n", miss);
    Ok(format!("200 programs in both modes, balanced depth ≤ {cd:.2}·log₂ s, parity size ≤ {cs:.2}·n, PAR_n within ⌈log₂ n⌉ + 1 rounds"))
}

// ---------------------------------------------------------------- 9

fn bnl_to_nn_suite() -> Outcome {
    let sys = FloatSystem::new(2, 1, 2).unwrap();
    let mut r = rng(9);
    let (mut programs, mut largest_ratio) = (0, 0.0f64);
    while programs < 100 {
        let i = programs;
        let vars = 1 + i % 8;
        let p = random_bnl(&mut r, BnlShape { vars, inputs: (i % 9).min(vars), depth: 1 + i % 4, max_size: 40 });
        if p.measure().size > 40 {
            continue;
        }
        programs += 1;
        let open = to_fully_open(&p).map_err(|e| e.to_string())?;
        for act in [BinaryActivation::Relu, BinaryActivation::Heaviside] {
            let (nn, info) = bnl_to_nn(&p, act, sys).map_err(|e| e.to_string())?;
            let nodes = nn.nodes().len();
            ensure!(nodes <= open.measure().size, "program {i}: {nodes} nodes > size {} of its fully-open form", open.measure().size);
            largest_ratio = largest_ratio.max(nodes as f64 / p.measure().size as f64);
            ensure!(nn.shape().degree <= 2, "program {i}: degree {}", nn.shape().degree);
            for input in all_inputs(p.num_inputs()) {
                let want = p.run(&input, 40).map_err(|e| e.to_string())?.outputs;
                let want: Vec<_> = want.iter().take(10).map(|e| (e.round * info.period, e.value.clone())).collect();
                let x: Vec<FloatValue> = input.iter().map(|&b| FloatValue::from_bit(sys, b)).collect();
                let got = nn.outputs_within(&x, 40 * info.period, 10).map_err(|e| e.to_string())?;
                let got: Vec<_> = got.iter().map(|e| Ok((e.round, bits_of(&e.value)?))).collect::<boolnet::Result<_>>().map_err(|e| e.to_string())?;
                ensure!(got == want, "program {i} ({act:?}), input {}: network outputs differ", text(&input));
            }
        }
    }
    Ok(format!("100 programs, both activations, in-degree ≤ 2; nodes ≤ fully-open size (largest nodes/s = {largest_ratio:.2})"))
}

// ---------------------------------------------------------------- 10

fn nn_equivalence(nn: &NeuralNetwork, inputs: &[Vec<FloatValue>], m: usize) -> Result<usize, String> {
    let c = nn_to_bnl(nn).map_err(|e| e.to_string())?;
    let machine = Machine::new(&c.program);
    let horizon = 12;
    let mut compared = 0;
    for chunk in inputs.chunks(64) {
        let bits: Vec<Vec<bool>> = chunk.iter().map(|x| c.input_bits(x).unwrap()).collect();
        let outs = machine.outputs(&bits, c.bnl_round(horizon), Some(m)).map_err(|e| e.to_string())?;
        for (x, got) in chunk.iter().zip(outs) {
            let want = nn.outputs_within(x, horizon, m).map_err(|e| e.to_string())?;
            ensure!(got.len() == want.len(), "{} outputs, expected {}", got.len(), want.len());
            for (g, w) in got.iter().zip(&want) {
                ensure!(g.round == c.bnl_round(w.round), "output at round {}, expected {}", g.round, c.bnl_round(w.round));
                ensure!(c.decode_output(&g.value).map_err(|e| e.to_string())? == w.value, "output values differ");
                compared += 1;
            }
        }
    }
    Ok(compared)
}

fn nn_to_bnl_suite() -> Outcome {
    let s = FloatSystem::new(3, 2, 2).unwrap();
    let mut r = rng(10);
    let mut compared = 0;
    for i in 0..50 {
        let shape = NnShape { nodes: 1 + i % 6, inputs: 1 + i % 2, degree: 1 + i % 3, pieces: 1 + i % 2, order: i % 3, thresholds: i % 2 == 1 };
        let nn = random_nn(&mut r, s, shape);
        let inputs: Vec<Vec<FloatValue>> = (0..100).map(|_| (0..nn.inputs().len()).map(|_| random_any_value(&mut r, s)).collect()).collect();
        compared += nn_equivalence(&nn, &inputs, 3).map_err(|e| format!("network {i}: {e}"))?;
    }
    let rr = s.p.max(s.q) as f64;
    let beta = s.beta as f64;
    let arith = rr.powi(4) + rr.powi(3) * beta * beta + rr * beta.powi(4);
    let mut points = Vec::new();
    for n in [2, 4, 6] {
        for delta in [1, 2, 3] {
            for k in 0..2 {
                let shape = NnShape { nodes: n, inputs: 1, degree: delta, pieces: 2, order: 2, thresholds: k == 1 };
                let nn = random_nn(&mut r, s, shape);
                let sh = nn.shape();
                let (pp, om) = (sh.piece_size.max(1) as f64, sh.order.max(1) as f64);
                let bound = sh.nodes as f64 * (sh.degree.max(1) as f64 + pp * om * om) * arith;
                let size = nn_to_bnl(&nn).map_err(|e| e.to_string())?.program.measure().size;
                points.push((bound, size as f64));
            }
        }
    }
    let (c, miss) = fit_lower_half(points);
    ensure!(miss.is_none(), "program size {:?} exceeds C = {c:.3} times the bound", miss);
    Ok(format!("50 networks, {compared} outputs on 100 inputs each; grid sizes within C = {c:.3}"))
}

// ---------------------------------------------------------------- 11

fn dynamics_contract() -> Outcome {
    let (inputs, programs, bad) = (
        HALTING_INPUTS.load(Ordering::Relaxed),
        HALTING_PROGRAMS.load(Ordering::Relaxed),
        HALTING_VIOLATIONS.load(Ordering::Relaxed),
    );
    ensure!(bad == 0, "{bad} compiled programs left their fixed point or printed early");
    ensure!(inputs > 0, "no compiled program was run");
    Ok(format!("{programs} compiled programs halt at their output round on all {inputs} tested inputs"))
}

// ----------------------------------------------------------------

fn guarded(f: fn() -> Outcome) -> (Outcome, Duration) {
    let start = Instant::now();
    let out = std::panic::catch_unwind(f).unwrap_or_else(|e| {
        let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
        Err(format!("panicked: {}", msg.unwrap_or_default()))
    });
    (out, start.elapsed())
}

fn main() {
    let suites: [(u32, &str, fn() -> Outcome, u64); 10] = [
        (1, "worked examples", worked_examples, 5),
        (2, "integer oracle sweep", int_sweep, 120),
        (3, "round-count laws", round_laws, 120),
        (4, "floating-point oracle sweep", fp_sweep, 300),
        (5, "piecewise polynomials", piecewise_suite, 180),
        (6, "SC translations", sc_suite, 120),
        (7, "fully-open form", open_suite, 120),
        (8, "self-feeding circuits", circuit_suite, 180),
        (9, "BNL to network", bnl_to_nn_suite, 180),
        (10, "network to BNL", nn_to_bnl_suite, 600),
    ];
    let results: Vec<(u32, &str, Outcome, Duration, u64)> = std::thread::scope(|scope| {
        let handles: Vec<_> = suites
            .iter()
            .map(|&(n, name, f, limit)| (n, name, limit, scope.spawn(move || guarded(f))))
            .collect();
        handles.into_iter().map(|(n, name, limit, h)| {
            let (out, t) = h.join().expect("suite thread");
            (n, name, out, t, limit)
        }).collect()
    });
    let mut failed = 0;
    let mut report = |n: u32, name: &str, out: &Outcome, t: Duration, limit: Option<u64>| {
        let over = limit.is_some_and(|l| t.as_secs_f64() > l as f64);
        let ok = out.is_ok() && !over;
        if !ok {
            failed += 1;
        }
        let detail = match out {
            Ok(d) if over => format!("{d}; took longer than {}s", limit.unwrap()),
            Ok(d) => d.clone(),
            Err(e) => e.clone(),
        };
        println!("criterion {n:>2} {} {name} ({:.1}s): {detail}", if ok { "PASS" } else { "FAIL" }, t.as_secs_f64());
    };
    for (n, name, out, t, limit) in &results {
        report(*n, name, out, *t, Some(*limit));
    }
    let (out, t) = guarded(dynamics_contract);
    report(11, "dynamics contract", &out, t, None);
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
