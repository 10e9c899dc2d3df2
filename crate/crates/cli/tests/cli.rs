use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_polya-lab"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn polya_neumann_on_a_box() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "box.json", r#"{"type": "box", "bounds": [[-1, 1], [-1, 1]]}"#);
    let out = run(dir.path(), &["check", "polya-neumann", "--domain", "box.json", "--lambda", "1:1:100", "--out", "r.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&dir.path().join("r.json"));
    assert_eq!(r["pass"], true);
    assert_eq!(r["report"]["records"].as_array().unwrap().len(), 100);
    assert_eq!(r["provenance"]["counts"], "exact");
}

#[test]
fn malformed_domain_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bad.json", r#"{"type": "box", "bounds": [[-1, 1]"#);
    let out = run(dir.path(), &["check", "polya-neumann", "--domain", "bad.json", "--lambda", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot parse domain file"));
    write(dir.path(), "self.json", r#"{"type": "polygon", "vertices": [[0, 0], [1, 1], [1, 0], [0, 1]]}"#);
    let out = run(dir.path(), &["count", "--domain", "self.json", "--bc", "neumann", "--lambda", "10"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(dir.path(), &["count", "--domain", "bad.json", "--bc", "neumann", "--lambda", "1:0:5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn prove_writes_three_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["prove", "--tiling", "square", "--lambda", "100", "--L", "8,32,1024", "--out", "proof.json", "--plot", "proof.csv"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("proof.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "L,defect,lower_bound,weyl_term,N_self");
    assert_eq!(lines.len(), 4);
    assert!(lines[3].starts_with("1024,0.00828"));
    let r = json(&dir.path().join("proof.json"));
    assert_eq!(r["report"]["n_self"], 13);
    assert_eq!(r["report"]["n_inflated"], 39);
}

#[test]
fn violation_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "box.json", r#"{"type": "box", "bounds": [[-1, 1], [-1, 1]]}"#);
    let out = run(
        dir.path(),
        &["check", "weyl", "--domain", "box.json", "--bc", "neumann", "--lambda", "100", "--band", "2,3", "--out", "w.json"],
    );
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&dir.path().join("w.json"))["pass"], false);
}

#[test]
fn non_convergence_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "tri.json", r#"{"type": "polygon", "vertices": [[0, 0], [1, 0], [0, 1]]}"#);
    let out = run(
        dir.path(),
        &["spectrum", "--domain", "tri.json", "--bc", "neumann", "-k", "1", "--refine", "2", "--tol", "1e-300"],
    );
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn seeded_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = |name: &'static str| {
        vec!["extension", "check", "--d", "2", "--trials", "12", "--seed", "7", "--h", "0.0625", "--out", name]
    };
    assert_eq!(run(dir.path(), &args("a.json")).status.code(), Some(0));
    let seq = bin()
        .current_dir(dir.path())
        .env("POLYA_LAB_THREADS", "1")
        .args(args("b.json"))
        .output()
        .unwrap();
    assert_eq!(seq.status.code(), Some(0));
    let a = std::fs::read(dir.path().join("a.json")).unwrap();
    let b = std::fs::read(dir.path().join("b.json")).unwrap();
    assert_eq!(a, b);
    assert_eq!(json(&dir.path().join("a.json"))["seed"], 7);
}

#[test]
fn bad_thread_count_is_rejected() {
    let out = bin()
        .env("POLYA_LAB_THREADS", "zero")
        .args(["prove", "--tiling", "square", "--lambda", "10"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_runs_relative_to_itself() {
    let dir = tempfile::tempdir().unwrap();
    let sub = dir.path().join("cfg");
    std::fs::create_dir(&sub).unwrap();
    write(&sub, "box.json", r#"{"type": "box", "bounds": [[0, 1], [0, 1]]}"#);
    write(
        &sub,
        "run.toml",
        "command = \"check polya-dirichlet\"\ndomain = \"box.json\"\nlambda = \"log:1:1000:20\"\nout = \"report.json\"\n",
    );
    let out = run(dir.path(), &["run", "cfg/run.toml"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&sub.join("report.json"));
    assert_eq!(r["report"]["records"].as_array().unwrap().len(), 20);
    write(&sub, "broken.toml", "command = \"check polya-dirichlet\"\nbogus = 1\n");
    assert_eq!(run(dir.path(), &["run", "cfg/broken.toml"]).status.code(), Some(2));
}

#[test]
fn spectrum_csv_and_tiling_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "box.json", r#"{"type": "box", "bounds": [[0, 1], [0, 1]]}"#);
    let out = run(dir.path(), &["spectrum", "--domain", "box.json", "--bc", "dirichlet", "--lambda-max", "60", "--out", "s.csv"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("s.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("index,eigenvalue,error_bound"));
    assert_eq!(csv.lines().count(), 4);

    let gen = run(dir.path(), &["tile", "generate", "--shape", "l_tromino", "--window", "4", "--out", "t.json"]);
    assert_eq!(gen.status.code(), Some(0));
    let val = run(dir.path(), &["tile", "validate", "--tiling", "t.json", "--resolution", "256", "--out", "v.json"]);
    assert_eq!(val.status.code(), Some(0), "{}", String::from_utf8_lossy(&val.stderr));
    assert_eq!(json(&dir.path().join("v.json"))["pass"], true);
}

#[test]
fn fem_checks_carry_caveats() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "lshape.json",
        r#"{"type": "polygon", "vertices": [[-1, -1], [0, -1], [0, 0], [1, 0], [1, 1], [-1, 1]]}"#,
    );
    let out = run(dir.path(), &["check", "friedlander", "--domain", "lshape.json", "--k-max", "10", "--refine", "3", "--out", "f.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&dir.path().join("f.json"));
    assert_eq!(r["report"]["discretization_caveat"], true);
    assert!(r["provenance"]["dirichlet"].as_str().unwrap().starts_with("fem(level=3"));
    let out = run(dir.path(), &["convergence", "--domain", "lshape.json", "--bc", "dirichlet", "--levels", "2,3,4", "--csv", "c.csv"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("c.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("level,h,eig_1"));
}
