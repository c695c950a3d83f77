use std::path::Path;
use std::process::{Command, Output};

fn boolnet(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_boolnet")).current_dir(dir).args(args).output().expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

const LAG: &str = "X :- X.\nW(0) :- F.\nW :- X.\n#print W\n#attention W\n";
const COPY: &str = "X :- X.\nV(0) :- F.\nV :- X.\n#print V\n#attention V\n";

#[test]
fn parity_circuit_runs_and_matches_its_translation() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    assert!(boolnet(p, &["gen", "parity", "3", "-o", "p.circ"]).status.success());
    let o = boolnet(p, &["run", "circ", "p.circ", "--input", "011", "--horizon", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "3: 0\n");
    assert!(boolnet(p, &["translate", "circ2bnl", "p.circ", "-o", "p.bnl"]).status.success());
    let o = boolnet(p, &["verify", "p.circ", "p.bnl", "--report", "r.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(p.join("r.json")).unwrap()).unwrap();
    assert_eq!(report["verdict"], "equivalent-on-suite");
    assert_eq!(report["coverage"]["inputs_tested"], 8);
}

#[test]
fn verify_reports_counterexamples_with_exit_one() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    write(p, "a.bnl", LAG);
    write(p, "b.bnl", "X :- X.\nW(0) :- T.\nW :- X.\n#print W\n#attention W\n");
    let o = boolnet(p, &["verify", "a.bnl", "b.bnl", "--report", "r.json"]);
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(p.join("r.json")).unwrap()).unwrap();
    assert_eq!(report["verdict"], "counterexample");
    assert!(report["counterexample"]["input"].is_string());
    write(p, "c.bnl", COPY);
    assert_eq!(boolnet(p, &["verify", "a.bnl", "c.bnl", "--inputs", "random:5", "--seed", "3"]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_two() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    write(p, "a.bnl", LAG);
    write(p, "bad.bnl", "W :- ((.\n");
    assert_eq!(boolnet(p, &["run", "bnl", "bad.bnl"]).status.code(), Some(2));
    assert_eq!(boolnet(p, &["run", "bnl", "missing.bnl"]).status.code(), Some(2));
    assert_eq!(boolnet(p, &["run", "bnl", "a.bnl", "--input", "01"]).status.code(), Some(2));
    assert_eq!(boolnet(p, &["verify", "a.bnl", "a.bnl", "--codec", "nope"]).status.code(), Some(2));
    assert_eq!(boolnet(p, &["verify", "a.bnl", "a.txt"]).status.code(), Some(2));
    assert_eq!(boolnet(p, &["gen", "parity", "0"]).status.code(), Some(2));
}

#[test]
fn sc_round_trip_and_fully_open_form() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    write(p, "a.bnl", "X :- X.\nA(0) :- T.\nA :- !A & X.\n#print A\n#attention A\n");
    assert!(boolnet(p, &["translate", "bnl2sc", "a.bnl", "-o", "a.sc"]).status.success());
    assert!(boolnet(p, &["translate", "sc2bnl", "a.sc", "-o", "b.bnl"]).status.success());
    assert_eq!(boolnet(p, &["verify", "a.bnl", "a.sc"]).status.code(), Some(0));
    assert_eq!(boolnet(p, &["verify", "a.sc", "b.bnl"]).status.code(), Some(0));
    assert!(boolnet(p, &["open", "a.bnl", "-o", "open.bnl"]).status.success());
    let o = boolnet(p, &["verify", "a.bnl", "open.bnl"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn balanced_circuit_translation_is_equivalent() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    write(p, "a.bnl", "X :- X.\nA(0) :- F.\nB(0) :- T.\nA :- (X & B) | (!X & !A).\nB :- A | B.\n#print A,B\n#attention B\n");
    for mode in ["direct", "balanced"] {
        let out = format!("{mode}.circ");
        assert!(boolnet(p, &["translate", "bnl2circ", "a.bnl", "-o", &out, "--mode", mode]).status.success());
        let o = boolnet(p, &["verify", "a.bnl", &out]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
}

#[test]
fn analyze_prints_and_writes_dynamics() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    write(p, "a.bnl", "A(0) :- F.\nA :- !A.\n#print A\n#attention A\n");
    let o = boolnet(p, &["analyze", "a.bnl", "--report", "d.json"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("cycle length: 2"));
    let d: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(p.join("d.json")).unwrap()).unwrap();
    assert_eq!(d["transient"], 0);
    assert_eq!(d["cycle_length"], 2);
}

#[test]
fn generated_operations_document_their_operands() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    let o = boolnet(p, &["gen", "int", "--op", "mul", "--p", "2", "--beta", "2"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("% integer"));
    for op in ["norm", "add", "mul", "poly"] {
        let o = boolnet(p, &["gen", "fp", "--op", op, "--p", "2", "--q", "1", "--beta", "2"]);
        assert!(o.status.success(), "{op}");
        assert!(stdout(&o).contains("% output round:"));
    }
}

#[test]
fn networks_run_and_translate() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    write(p, "a.bnl", "X :- X.\nA(0) :- F.\nA :- X & !A.\n#print A\n#attention A\n");
    assert!(boolnet(p, &["translate", "bnl2nn", "a.bnl", "-o", "a.nn", "--system", "2,1,2"]).status.success());
    let o = boolnet(p, &["run", "nn", "a.nn", "--input", "+0.10e+1", "--horizon", "12"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(!stdout(&o).is_empty());
    assert!(boolnet(p, &["translate", "nn2bnl", "a.nn", "-o", "c.bnl"]).status.success());
    let text = std::fs::read_to_string(p.join("c.bnl")).unwrap();
    assert!(text.starts_with("% compiled network"));
}
