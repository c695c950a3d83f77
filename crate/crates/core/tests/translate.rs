use boolnet::bnl::{parse_bnl, Machine};
use boolnet::float::{FloatSystem, FloatValue, Piecewise};
use boolnet::gen::{random_bnl, random_nn, random_value, BnlShape, NnShape};
use boolnet::nn::{Aggregation, Edge, NeuralNetwork, NnAttention, Node};
use boolnet::rounds::RoundMap;
use boolnet::translate::{bits_of, bnl_to_nn, nn_to_bnl, BinaryActivation};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Checks that the first `m` outputs of the compiled program decode to the
/// simulator's first `m` outputs, at rounds `period · r + offset`.
fn check_nn(nn: &NeuralNetwork, inputs: &[Vec<FloatValue>], m: usize) {
    let c = nn_to_bnl(nn).unwrap();
    let machine = Machine::new(&c.program);
    let horizon = 12;
    for chunk in inputs.chunks(64) {
        let bits: Vec<Vec<bool>> = chunk.iter().map(|x| c.input_bits(x).unwrap()).collect();
        let outs = machine.outputs(&bits, c.bnl_round(horizon), Some(m)).unwrap();
        for (x, got) in chunk.iter().zip(outs) {
            let want = nn.outputs_within(x, horizon, m).unwrap();
            assert_eq!(got.len(), want.len(), "output count for {x:?}");
            for (g, w) in got.iter().zip(&want) {
                assert_eq!(g.round, c.bnl_round(w.round));
                assert_eq!(c.decode_output(&g.value).unwrap(), w.value);
            }
        }
    }
}

fn gadget(sys: FloatSystem) -> NeuralNetwork {
    let node = |id: &str, init: Option<FloatValue>, bias: FloatValue| Node {
        id: id.into(),
        bias,
        init,
        activation: Piecewise::relu(sys),
    };
    NeuralNetwork::new(
        sys,
        vec![node("x", None, sys.zero()), node("y", None, sys.zero()), node("z", Some(sys.zero()), sys.from_i64(-1))],
        vec![Edge { from: 0, to: 2, weight: sys.one() }, Edge { from: 1, to: 2, weight: sys.one() }],
        vec![2],
        NnAttention::External(RoundMap::Explicit(vec![1])),
        Aggregation::BalancedTree,
    )
    .unwrap()
}

#[test]
fn gadget_network_compiles() {
    let s = FloatSystem::new(3, 2, 2).unwrap();
    let nn = gadget(s);
    let c = nn_to_bnl(&nn).unwrap();
    for (x, y, want) in [(1, 1, 1), (1, 0, 0), (0, 0, 0)] {
        let bits = c.input_bits(&[s.from_i64(x), s.from_i64(y)]).unwrap();
        let run = c.program.run(&bits, c.bnl_round(1)).unwrap();
        assert_eq!(run.outputs.len(), 1);
        assert_eq!(run.outputs[0].round, c.period);
        assert_eq!(c.decode_output(&run.outputs[0].value).unwrap(), vec![s.from_i64(want)]);
    }
}

#[test]
fn identity_node_repeats_its_value() {
    let s = FloatSystem::new(2, 1, 3).unwrap();
    let v = s.parse("+0.12e+1").unwrap();
    let node = Node { id: "v".into(), bias: v, init: Some(v), activation: Piecewise::identity(s) };
    let nn = NeuralNetwork::new(s, vec![node], vec![], vec![0], NnAttention::External(RoundMap::every_round()), Aggregation::LeftFold)
        .unwrap();
    let c = nn_to_bnl(&nn).unwrap();
    let run = c.program.run(&[], c.bnl_round(4)).unwrap();
    assert_eq!(run.outputs.len(), 5);
    for (k, e) in run.outputs.iter().enumerate() {
        assert_eq!(e.round, c.period * k as u64);
        assert_eq!(c.decode_output(&e.value).unwrap(), vec![v]);
    }
}

#[test]
fn random_networks_match_the_simulator() {
    let s = FloatSystem::new(3, 2, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for i in 0..8 {
        let shape = NnShape { nodes: 2 + i % 4, inputs: 1 + i % 2, degree: 1 + i % 3, pieces: 2, order: 2, thresholds: i % 2 == 1 };
        let nn = random_nn(&mut rng, s, shape);
        let inputs: Vec<Vec<FloatValue>> =
            (0..24).map(|_| (0..nn.inputs().len()).map(|_| random_value(&mut rng, s, 1)).collect()).collect();
        check_nn(&nn, &inputs, 3);
    }
}

#[test]
fn per_input_tables_are_rejected() {
    let s = FloatSystem::new(2, 1, 2).unwrap();
    let mut file = gadget(s).to_file();
    file.attention = boolnet::nn::AttentionRecord::Rounds("table(explicit:1;explicit:1;explicit:2;explicit:1)".into());
    let nn = NeuralNetwork::from_file(&file).unwrap();
    assert!(nn_to_bnl(&nn).is_err());
}

fn check_bnl_to_nn(p: &boolnet::bnl::BnlProgram, act: BinaryActivation, sys: FloatSystem, m: usize) {
    let (nn, info) = bnl_to_nn(p, act, sys).unwrap();
    assert!(nn.nodes().len() <= boolnet::bnl::to_fully_open(p).unwrap().num_vars());
    assert!(nn.shape().degree <= 2);
    let k = p.num_inputs();
    let horizon = 24 * info.period;
    for idx in 0..1usize << k {
        let bits: Vec<bool> = (0..k).map(|j| idx >> (k - 1 - j) & 1 == 1).collect();
        let want = p.run(&bits, 24).unwrap().outputs;
        let x: Vec<FloatValue> = bits.iter().map(|&b| FloatValue::from_bit(sys, b)).collect();
        let got = nn.outputs_within(&x, horizon, m).unwrap();
        let n = want.len().min(m);
        assert!(got.len() >= n, "{} < {n}", got.len());
        for (g, w) in got.iter().zip(&want[..n]) {
            assert_eq!(g.round, info.period * w.round);
            assert_eq!(bits_of(&g.value).unwrap(), w.value);
        }
    }
}

#[test]
fn bnl_programs_become_binary_networks() {
    let sys = FloatSystem::new(2, 1, 2).unwrap();
    let p = parse_bnl("X(0) :- F.\nX :- Y & !X.\nY :- Y.\n#print X\n#attention X\n").unwrap();
    for act in [BinaryActivation::Relu, BinaryActivation::Heaviside] {
        check_bnl_to_nn(&p, act, sys, 5);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..40 {
        let p = random_bnl(&mut rng, BnlShape { vars: 2 + i % 6, inputs: i % 4, depth: 1 + i % 4, max_size: 40 });
        for act in [BinaryActivation::Relu, BinaryActivation::Heaviside] {
            check_bnl_to_nn(&p, act, FloatSystem::new(3, 2, 3).unwrap(), 10);
        }
    }
}
