use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cantor-potential"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn capacity_of_a_half_space() {
    let o = run(&["capacity", "--kernel", &data("geo32.json"), "--set", &data("single0.txt")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1/7\n");
}

#[test]
fn capacity_of_the_empty_set() {
    let o = run(&["capacity", "--kernel", &data("geo32.json"), "--set", &data("empty.txt")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0\n");
}

#[test]
fn capacity_with_oracle() {
    let o = run(&["capacity", "--kernel", &data("geo32.json"), "--set", &data("pair.txt"), "--oracle"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1/7\noracle 1/7 PASS\n");
}

#[test]
fn oracle_depth_cap_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_cantor-potential"))
        .args(["capacity", "--kernel", &data("geo32.json"), "--set", &data("pair.txt"), "--oracle"])
        .env("CANTOR_POTENTIAL_MAX_DEPTH", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn enumerate_single_word() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let o = run(&[
        "enumerate",
        "--kernel",
        &data("geo32.json"),
        "--order",
        &data("zero.txt"),
        "--trace",
        trace.to_str().unwrap(),
        "--check",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("final_ww 1/7\n"), "{out}");
    assert!(out.contains("verdict PASS\n"), "{out}");
    let csv = std::fs::read_to_string(trace).unwrap();
    assert_eq!(
        csv,
        "stage,word,increment,ww,capacity,bound_A,ratio\n1,0,1/7,1/7,1/7,7/3,1\nsummary,PASS,,1/7,1/7,7/3,1\n"
    );
}

#[test]
fn enumerate_without_trace_file_prints_csv() {
    let o = run(&["enumerate", "--kernel", &data("geo32.json"), "--order", &data("pair.txt")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("stage,word,increment,ww,capacity,bound_A,ratio\n"));
    assert!(out.ends_with("summary,PASS,,359/2277,1/7,7/3,2513/2277\n"), "{out}");
}

#[test]
fn outputs_are_deterministic() {
    let args = ["enumerate", "--kernel", &data("geo32.json"), "--order", &data("pair.txt"), "--check"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stderr, b.stderr);
}

#[test]
fn realize_round_trips_through_energy_and_potential() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    let m = m.to_str().unwrap();
    let o = run(&["realize", "--kernel", &data("geo32.json"), "--set", &data("single0.txt"), "--out", m]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "capacity 1/7\nmass_on_set PASS\npotential_one_on_set PASS\npotential_at_most_one PASS max 1\n"
    );
    let on = run(&["potential", "--kernel", &data("geo32.json"), "--measure", m, "--point", ":0"]);
    assert_eq!(stdout(&on), "1\n");
    let off = run(&["potential", "--kernel", &data("geo32.json"), "--measure", m, "--point", ":1"]);
    assert_eq!(stdout(&off), "1/7\n");
    // E(μ) = ∫ P μ dμ = μ[λ] when the potential is 1 on the support.
    let e = run(&["energy", "--kernel", &data("geo32.json"), "--measure", m]);
    assert_eq!(stdout(&e), "1/7\n");
    let mutual = run(&["mutual", "--kernel", &data("geo32.json"), "--measure", m, "--measure2", m]);
    assert_eq!(stdout(&mutual), "1/7\n");
}

#[test]
fn riesz_energy_of_the_uniform_probability() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("u.json");
    std::fs::write(&m, r#"{"mass":"1","tail":"uniform"}"#).unwrap();
    let o = run(&["riesz-energy", "--ratio", "3/2", "--measure", m.to_str().unwrap()]);
    assert_eq!(stdout(&o), "2\n");
}

#[test]
fn atoms_have_infinite_energy() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("atom.json");
    std::fs::write(&m, r#"{"mass":"1","tail":{"point":{"head":"","period":"0"}}}"#).unwrap();
    let o = run(&["energy", "--kernel", &data("geo32.json"), "--measure", m.to_str().unwrap()]);
    assert_eq!(stdout(&o), "inf\n");
}

#[test]
fn cftest_passes_and_fails() {
    let ok = run(&["cftest", "--kernel", &data("geo32.json"), "--levels", &data("levels")]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("level 2 capacity 2/23 bound 1/4 PASS\n"));
    let bad = run(&["cftest", "--kernel", &data("geo32.json"), "--levels", &data("levels_fail")]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("level 3 capacity 1/7 bound 1/8 FAIL\n"));
}

#[test]
fn malformed_inputs_exit_with_2() {
    let bad_kernel = run(&["capacity", "--kernel", &data("bad_kernel.json"), "--set", &data("single0.txt")]);
    assert_eq!(bad_kernel.status.code(), Some(2));
    let bad_order = run(&["enumerate", "--kernel", &data("geo32.json"), "--order", &data("bad_order.txt")]);
    assert_eq!(bad_order.status.code(), Some(2));
    let err = String::from_utf8(bad_order.stderr).unwrap();
    assert!(err.contains("stage 3"), "{err}");
    let missing = run(&["energy", "--kernel", &data("geo32.json"), "--measure", "/nonexistent.json"]);
    assert_eq!(missing.status.code(), Some(2));
    let bad_point = run(&["potential", "--kernel", &data("geo32.json"), "--measure", &data("geo32.json"), "--point", "x"]);
    assert_eq!(bad_point.status.code(), Some(2));
}

#[test]
fn verify_measure_suite() {
    let o = run(&["verify", "--suite", "measure"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().all(|l| l.starts_with("PASS measure::") || l.ends_with("properties passed")), "{out}");
}
