use boolnet::bnl::Machine;
use boolnet::oracle;
use boolnet::int::{compile_int_op, CompiledInt, IntOp, IntSystem, IntValue};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn all_values(s: IntSystem) -> Vec<IntValue> {
    let m = s.max_magnitude();
    let m: i64 = m.try_into().unwrap();
    let mut out = Vec::new();
    for n in -m..=m {
        out.push(s.from_i64(n).unwrap());
    }
    // Negative zero is a valid encoding too.
    out.push(IntValue { positive: false, digits: vec![0; s.p] });
    out
}

/// Runs every pair through the program 64 at a time and checks the decoded
/// output, its round and that the output configuration is a fixed point.
fn check_pairs(c: &CompiledInt, pairs: &[(IntValue, IntValue)]) {
    let beta = c.system.beta;
    let machine = Machine::new(&c.program);
    let mut scratch = Vec::new();
    for chunk in pairs.chunks(64) {
        let inputs: Vec<Vec<bool>> = chunk.iter().map(|(x, y)| c.input_bits(x, y).unwrap()).collect();
        let outs = machine.outputs(&inputs, c.output_round + 1, Some(2)).unwrap();
        let trace = machine.trace(&inputs, c.output_round).unwrap();
        let last = trace.states.last().unwrap();
        assert_eq!(&machine.step_words(last, &mut scratch), last, "output round is not a fixed point");
        for ((x, y), out) in chunk.iter().zip(&outs) {
            assert_eq!(out[0].round, c.output_round);
            let got = c.decode_output(&out[0].value).unwrap().to_bigint(beta);
            let want = oracle::int_op(c.op, &x.to_bigint(beta), &y.to_bigint(beta));
            assert_eq!(got, want, "{:?} {x} {y}", c.op);
        }
    }
}

#[test]
fn exhaustive_small_systems() {
    for beta in [2, 3] {
        let s = IntSystem::new(2, beta).unwrap();
        let vals = all_values(s);
        let pairs: Vec<_> = vals.iter().flat_map(|x| vals.iter().map(move |y| (x.clone(), y.clone()))).collect();
        for op in [IntOp::Compare, IntOp::Add, IntOp::Mul] {
            check_pairs(&compile_int_op(op, 2, beta).unwrap(), &pairs);
        }
    }
}

#[test]
fn random_pairs_in_wider_systems() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (p, beta) in [(3usize, 4u32), (4, 2), (3, 10)] {
        let pick = |rng: &mut ChaCha8Rng| IntValue {
            positive: rng.gen(),
            digits: (0..p).map(|_| rng.gen_range(0..beta)).collect(),
        };
        let pairs: Vec<_> = (0..256).map(|_| (pick(&mut rng), pick(&mut rng))).collect();
        for op in [IntOp::Compare, IntOp::Add, IntOp::Mul] {
            check_pairs(&compile_int_op(op, p, beta).unwrap(), &pairs);
        }
    }
}

#[test]
fn decimal_examples() {
    let s = IntSystem::new(3, 10).unwrap();
    let add = compile_int_op(IntOp::Add, 3, 10).unwrap();
    let (x, y) = (s.from_i64(614).unwrap(), s.from_i64(187).unwrap());
    let run = add.program.run(&add.input_bits(&x, &y).unwrap(), add.output_round).unwrap();
    let out = add.decode_output(&run.outputs[0].value).unwrap();
    assert_eq!(out.to_string(), "+0801");
    let last = run.configs.last().unwrap();
    let carries: Vec<u32> = (1..=3).map(|i| add.read_probe(&format!("c{i}"), last).unwrap()[0]).collect();
    assert_eq!(carries, vec![1, 1, 0]);

    let mul = compile_int_op(IntOp::Mul, 3, 10).unwrap();
    let (x, y) = (s.from_i64(187).unwrap(), s.from_i64(463).unwrap());
    let run = mul.program.run(&mul.input_bits(&x, &y).unwrap(), mul.output_round).unwrap();
    assert_eq!(mul.decode_output(&run.outputs[0].value).unwrap().to_string(), "+086581");
    let last = run.configs.last().unwrap();
    let read = |name: &str| mul.read_probe(name, last).unwrap().iter().fold(0u64, |a, &d| a * 10 + d as u64);
    assert_eq!(read("z1_1"), 561);
    assert_eq!(read("z1_2"), 11220);
    assert_eq!(read("z1_3"), 74800);
    assert_eq!(read("z2_1"), 11781);
    assert_eq!(read("z2_2"), 74800);
    assert_eq!(read("z3_1"), 86581);
}

#[test]
fn round_counts() {
    for p in [2, 4, 8] {
        assert_eq!(compile_int_op(IntOp::Compare, p, 3).unwrap().output_round, 2);
        assert_eq!(compile_int_op(IntOp::Add, p, 3).unwrap().output_round, 3);
    }
    for p in [2usize, 4, 8, 16] {
        let r = compile_int_op(IntOp::Mul, p, 2).unwrap().output_round;
        assert_eq!(r, 2 * p.next_power_of_two().trailing_zeros() as u64 + 2);
    }
}
