use boolnet::bnl::{analyze_dynamics, parse_bnl, pretty_bnl, to_fully_open, BnlProgram};
use boolnet::circuit::{bnl_to_circuit, circuit_to_bnl, parity_circuit, parse_circuit_json, to_circuit_json, CircuitMode, SelfFeedingCircuit};
use boolnet::float::{compile_fp_op, FloatSystem, FloatValue, FpOp, Piecewise, PiecewiseFile};
use boolnet::harness::{bits_text, check_equivalence, CheckOptions, Codec, InputSuite, Runnable};
use boolnet::int::{compile_int_op, IntOp};
use boolnet::nn::NeuralNetwork;
use boolnet::rounds::OutputSequence;
use boolnet::sc::{bnl_to_sc, parse_sc, pretty_sc, sc_to_bnl, ScProgram};
use boolnet::translate::{bnl_to_nn, nn_to_bnl, BinaryActivation};
use boolnet::{Error, Result};
use clap::{Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "boolnet", version, about = "Boolean network logic programs, circuits and neural networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Bnl,
    Sc,
    Circ,
    Nn,
}

#[derive(Clone, Copy, ValueEnum)]
enum Translation {
    Sc2bnl,
    Bnl2sc,
    Bnl2circ,
    Circ2bnl,
    Nn2bnl,
    Bnl2nn,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Direct,
    Balanced,
}

#[derive(Clone, Copy, ValueEnum)]
enum Activation {
    Relu,
    Heaviside,
}

#[derive(Clone, Copy, ValueEnum)]
enum IntOpArg {
    Cmp,
    Add,
    Mul,
}

#[derive(Clone, Copy, ValueEnum)]
enum FpOpArg {
    Norm,
    Add,
    Mul,
    Poly,
}

#[derive(Subcommand)]
enum Command {
    /// Run a program, circuit or network and print its outputs.
    Run {
        kind: Kind,
        file: PathBuf,
        /// Bit string, or float values separated by spaces or commas.
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long, default_value_t = 20)]
        horizon: u64,
        /// Write the emissions as JSON to this file.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Translate between formats.
    Translate {
        translation: Translation,
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Direct)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = Activation::Relu)]
        activation: Activation,
        /// Float system `P,Q,B` for bnl2nn.
        #[arg(long, default_value = "2,1,2")]
        system: String,
    },
    /// Rewrite a program into fully-open form.
    Open {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate programs and circuits.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
    /// Report the transient and attractor of a program on one input.
    Analyze {
        file: PathBuf,
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check two programs, circuits or networks for equivalence.
    Verify {
        a: PathBuf,
        b: PathBuf,
        /// `id`, `int:P,B` or `float:P,Q,B`.
        #[arg(long, default_value = "id")]
        codec: String,
        /// `exhaustive` or `random:N`.
        #[arg(long, default_value = "exhaustive")]
        inputs: String,
        #[arg(long, default_value_t = 10)]
        outputs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        horizon: Option<u64>,
        /// Also compare configurations round by round.
        #[arg(long)]
        global: bool,
        /// Write the report as JSON to this file.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// The parity circuit on N inputs.
    Parity {
        n: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// A compiled integer operation.
    Int {
        #[arg(long, value_enum)]
        op: IntOpArg,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        beta: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// A compiled floating-point operation.
    Fp {
        #[arg(long, value_enum)]
        op: FpOpArg,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        beta: u32,
        /// Piece table (JSON) for `poly`; ReLU when omitted.
        #[arg(long)]
        pieces: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_bnl(path: &Path) -> Result<BnlProgram> {
    parse_bnl(&read(path)?)
}

fn load_sc(path: &Path) -> Result<ScProgram> {
    parse_sc(&read(path)?)
}

fn load_circ(path: &Path) -> Result<SelfFeedingCircuit> {
    parse_circuit_json(&read(path)?)
}

fn load_nn(path: &Path) -> Result<NeuralNetwork> {
    NeuralNetwork::parse_json(&read(path)?)
}

fn load_runnable(path: &Path) -> Result<Runnable> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("bnl") => Ok(Runnable::Bnl(load_bnl(path)?)),
        Some("sc") => Ok(Runnable::Sc(load_sc(path)?)),
        Some("circ") => Ok(Runnable::Circuit(load_circ(path)?)),
        Some("nn") => Ok(Runnable::Nn(load_nn(path)?)),
        _ => Err(Error::Unsupported(format!("{}: expected a .bnl, .sc, .circ or .nn file", path.display()))),
    }
}

fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::Parse { line: 1, message: format!("'{c}' is not a bit") }),
        })
        .collect()
}

fn parse_floats(sys: FloatSystem, s: &str) -> Result<Vec<FloatValue>> {
    s.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()).map(|t| sys.parse(t)).collect()
}

fn parse_system(s: &str) -> Result<FloatSystem> {
    let nums: Vec<usize> = s
        .split(',')
        .map(|x| x.trim().parse().map_err(|_| Error::Unsupported(format!("system '{s}' is not P,Q,B"))))
        .collect::<Result<_>>()?;
    match nums[..] {
        [p, q, b] => FloatSystem::new(p, q, b as u32),
        _ => Err(Error::Unsupported(format!("system '{s}' is not P,Q,B"))),
    }
}

fn emissions_json<T>(seq: &OutputSequence<T>, show: impl Fn(&T) -> String) -> serde_json::Value {
    serde_json::Value::Array(seq.iter().map(|e| serde_json::json!({"round": e.round, "value": show(&e.value)})).collect())
}

fn cmd_run(kind: Kind, file: &Path, input: &str, horizon: u64, report: Option<&Path>) -> Result<()> {
    let json = match kind {
        Kind::Nn => {
            let nn = load_nn(file)?;
            let xs = parse_floats(nn.system(), input)?;
            let (_, out) = nn.simulate(&xs, horizon)?;
            let show = |v: &Vec<FloatValue>| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
            for e in &out {
                println!("{}: {}", e.round, show(&e.value));
            }
            emissions_json(&out, show)
        }
        _ => {
            let bits = parse_bits(input)?;
            let out = match kind {
                Kind::Bnl => load_bnl(file)?.run(&bits, horizon)?.outputs,
                Kind::Sc => load_sc(file)?.run(&bits, horizon)?.1,
                Kind::Circ => load_circ(file)?.run(&bits, horizon)?.1,
                Kind::Nn => unreachable!(),
            };
            for e in &out {
                println!("{}: {}", e.round, bits_text(&e.value));
            }
            emissions_json(&out, |v| bits_text(v))
        }
    };
    if let Some(p) = report {
        write_or_print(Some(p), &serde_json::to_string_pretty(&json).expect("json"))?;
    }
    Ok(())
}

fn cmd_translate(t: Translation, input: &Path, output: &Path, mode: Mode, act: Activation, system: &str) -> Result<()> {
    let text = match t {
        Translation::Sc2bnl => pretty_bnl(&sc_to_bnl(&load_sc(input)?)?),
        Translation::Bnl2sc => pretty_sc(&bnl_to_sc(&load_bnl(input)?)?),
        Translation::Bnl2circ => {
            let mode = match mode {
                Mode::Direct => CircuitMode::Direct,
                Mode::Balanced => CircuitMode::Balanced,
            };
            to_circuit_json(&bnl_to_circuit(&load_bnl(input)?, mode)?)
        }
        Translation::Circ2bnl => pretty_bnl(&circuit_to_bnl(&load_circ(input)?)?),
        Translation::Nn2bnl => {
            let c = nn_to_bnl(&load_nn(input)?)?;
            format!(
                "% compiled network over {}; state k is printed at round {}·k + {}\n% inputs: the input nodes in order, each encoded in {} bits\n{}",
                c.system,
                c.period,
                c.offset,
                c.system.width(),
                pretty_bnl(&c.program)
            )
        }
        Translation::Bnl2nn => {
            let act = match act {
                Activation::Relu => BinaryActivation::Relu,
                Activation::Heaviside => BinaryActivation::Heaviside,
            };
            let (nn, info) = bnl_to_nn(&load_bnl(input)?, act, parse_system(system)?)?;
            eprintln!("{} nodes; program round r is network round {}·r", info.nodes, info.period);
            nn.to_json()
        }
    };
    write_or_print(Some(output), &text)
}

fn int_header(op: IntOp, p: usize, beta: u32, out_p: usize) -> String {
    format!(
        "% integer {op} over Z({p}, {beta})\n\
         % input: x then y; each is a sign bit (1 = +) followed by {p} one-hot digits of {beta} bits, most significant first\n\
         % output: a sign bit and {out_p} one-hot digits of {beta} bits\n"
    )
}

fn fp_header(op: &FpOp, sys: FloatSystem) -> String {
    let operands = match op {
        FpOp::Normalize => format!(
            "one raw value: exponent sign, fraction sign, {} exponent digits, {} fraction digits d0 d1 ..",
            sys.q + 1,
            2 * sys.p + 2
        ),
        FpOp::Add | FpOp::Mul => "a then b".to_string(),
        FpOp::Piecewise(_) => "x".to_string(),
    };
    format!(
        "% floating-point {op} over {sys}\n\
         % input: {operands}\n\
         % a value is an exponent sign bit (1 = +), a sign bit (1 = +), {q} one-hot exponent digits and {p} one-hot fraction digits of {b} bits each, most significant first\n\
         % output: one value in the same layout\n",
        q = sys.q,
        p = sys.p,
        b = sys.beta
    )
}

fn cmd_gen(what: GenCommand) -> Result<()> {
    match what {
        GenCommand::Parity { n, output } => write_or_print(output.as_deref(), &to_circuit_json(&parity_circuit(n)?)),
        GenCommand::Int { op, p, beta, output } => {
            let op = match op {
                IntOpArg::Cmp => IntOp::Compare,
                IntOpArg::Add => IntOp::Add,
                IntOpArg::Mul => IntOp::Mul,
            };
            let c = compile_int_op(op, p, beta)?;
            let text = format!("{}% output round: {}\n{}", int_header(op, p, beta, c.result_system.p), c.output_round, pretty_bnl(&c.program));
            write_or_print(output.as_deref(), &text)
        }
        GenCommand::Fp { op, p, q, beta, pieces, output } => {
            let sys = FloatSystem::new(p, q, beta)?;
            let op = match op {
                FpOpArg::Norm => FpOp::Normalize,
                FpOpArg::Add => FpOp::Add,
                FpOpArg::Mul => FpOp::Mul,
                FpOpArg::Poly => {
                    let f = match pieces {
                        Some(path) => {
                            let file: PiecewiseFile = serde_json::from_str(&read(&path)?)?;
                            Piecewise::from_file(sys, &file)?
                        }
                        None => Piecewise::relu(sys),
                    };
                    FpOp::Piecewise(f)
                }
            };
            let c = compile_fp_op(op.clone(), sys)?;
            let text = format!("{}% output round: {}\n{}", fp_header(&op, sys), c.output_round, pretty_bnl(&c.program));
            write_or_print(output.as_deref(), &text)
        }
    }
}

fn cmd_analyze(file: &Path, input: &str, report: Option<&Path>) -> Result<()> {
    let p = load_bnl(file)?;
    let d = analyze_dynamics(&p, &parse_bits(input)?)?;
    println!("transient: {}", d.transient);
    println!("cycle length: {}", d.cycle_length);
    println!("fixed point: {}", d.is_fixed_point());
    println!("halts: {}", d.halts());
    println!("transient outputs: {:?}", d.transient_outputs);
    println!("attractor outputs: {:?}", d.attractor_outputs);
    if let Some(path) = report {
        write_or_print(Some(path), &serde_json::to_string_pretty(&d).expect("json"))?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    a: &Path,
    b: &Path,
    codec: &str,
    inputs: &str,
    outputs: usize,
    seed: u64,
    horizon: Option<u64>,
    global: bool,
    report: Option<&Path>,
) -> Result<bool> {
    let codec: Codec = codec.parse()?;
    let inputs = match inputs.parse()? {
        InputSuite::Random { count, .. } => InputSuite::Random { count, seed },
        s => s,
    };
    let opts = CheckOptions { codec, inputs, outputs, horizon, global };
    let r = check_equivalence(&load_runnable(a)?, &load_runnable(b)?, &opts)?;
    print!("{r}");
    if let Some(path) = report {
        write_or_print(Some(path), &serde_json::to_string_pretty(&r).expect("json"))?;
    }
    Ok(r.is_equivalent())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { kind, file, input, horizon, report } => cmd_run(kind, &file, &input, horizon, report.as_deref()).map(|_| true),
        Command::Translate { translation, input, output, mode, activation, system } => {
            cmd_translate(translation, &input, &output, mode, activation, &system).map(|_| true)
        }
        Command::Open { file, output } => {
            load_bnl(&file).and_then(|p| to_fully_open(&p)).and_then(|q| write_or_print(output.as_deref(), &pretty_bnl(&q))).map(|_| true)
        }
        Command::Gen { what } => cmd_gen(what).map(|_| true),
        Command::Analyze { file, input, report } => cmd_analyze(&file, &input, report.as_deref()).map(|_| true),
        Command::Verify { a, b, codec, inputs, outputs, seed, horizon, global, report } => {
            cmd_verify(&a, &b, &codec, &inputs, outputs, seed, horizon, global, report.as_deref())
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
