use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_siegelkit"))
}

struct Files(TempDir);

impl Files {
    fn new() -> Self {
        Files(tempfile::tempdir().unwrap())
    }

    fn put(&self, name: &str, body: &str) -> PathBuf {
        let p = self.0.path().join(name);
        std::fs::write(&p, body).unwrap();
        p
    }
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const SCALAR_3: &str = r#"{"n": 1, "entries": [["3"]]}"#;
const HYPERBOLIC: &str = r#"{"n": 2, "entries": [["0", "1/2"], ["1/2", "0"]]}"#;

#[test]
fn siegel_prints_both_polynomials() {
    let f = Files::new();
    let m = f.put("scalar_3.json", SCALAR_3);
    let o = run(&["siegel", "--prime", "3", "--matrix", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "F~ = X^{-1/2} + X^{1/2}\nF = 1 + 3*X\n");
}

#[test]
fn verify_reports_match() {
    let f = Files::new();
    let m = f.put("scalar_3.json", SCALAR_3);
    let o = run(&["verify", "--prime", "3", "--matrix", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "match");
    assert_eq!(v["f_interp"], serde_json::json!(["1", "3"]));
    assert_eq!(v["alphas"]["1"], "4/3");
}

#[test]
fn dyadic_egk_needs_certificate() {
    let f = Files::new();
    let m = f.put("hyperbolic.json", HYPERBOLIC);
    let m = m.to_str().unwrap();
    let o = run(&[
        "egk", "--prime", "2", "--matrix", m, "--gk", "0,0", "--sigma", "2,1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{\"n\":[2],\"m\":[0],\"zeta\":[1]}\n");
    let o = run(&["egk", "--prime", "2", "--matrix", m]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&[
        "egk", "--prime", "2", "--matrix", m, "--gk", "0,0", "--sigma", "1,2",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn egk_round_trip() {
    let f = Files::new();
    for (p, body) in [
        (
            "3",
            r#"{"n": 3, "entries": [["1","0","0"],["0","3","0"],["0","0","9"]]}"#,
        ),
        ("5", r#"{"n": 2, "entries": [["1","0"],["0","25"]]}"#),
        ("3", r#"{"n": 2, "entries": [["2","1/2"],["1/2","6"]]}"#),
    ] {
        let m = f.put("m.json", body);
        let m = m.to_str().unwrap();
        let g = run(&["egk", "--prime", p, "--matrix", m]);
        assert_eq!(g.status.code(), Some(0));
        let gpath = f.put("g.json", &stdout(&g));
        let via_egk = run(&["siegel", "--egk", gpath.to_str().unwrap(), "--q", p]);
        let direct = run(&["siegel", "--prime", p, "--matrix", m]);
        assert_eq!(via_egk.status.code(), Some(0));
        assert_eq!(stdout(&via_egk), stdout(&direct), "{body}");
    }
}

#[test]
fn output_is_deterministic() {
    let f = Files::new();
    let m = f.put("m.json", r#"{"n": 2, "entries": [["1","0"],["0","25"]]}"#);
    let args = [
        "siegel",
        "--prime",
        "5",
        "--matrix",
        m.to_str().unwrap(),
        "--json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(
        stdout(&a),
        "{\"e_b\":2,\"f\":[\"1\",\"-5\",\"125\"],\"f_tilde\":[[-2,0,\"1\"],[0,-2,\"-1\"],[2,0,\"1\"]]}\n"
    );
    let text = run(&["siegel", "--prime", "5", "--matrix", m.to_str().unwrap()]);
    assert_eq!(
        stdout(&text),
        "F~ = X^{-1} - 1/5*sqrt(5) + X\nF = 1 - 5*X + 125*X^{2}\n"
    );
}

#[test]
fn invariants_and_fpoly() {
    let f = Files::new();
    let m = f.put("m.json", r#"{"n": 2, "entries": [["1","0"],["0","9"]]}"#);
    let o = run(&[
        "invariants",
        "--prime",
        "3",
        "--matrix",
        m.to_str().unwrap(),
    ]);
    assert_eq!(
        stdout(&o),
        "D_B = -36\nord(D_B) = 2\nxi_B = -1\neps_B = 1\neta_B = 1\ne_B = 2\n"
    );
    let h = f.put("h.json", r#"{"a": [1], "eps": [1]}"#);
    let o = run(&["fpoly", "--naive-egk", h.to_str().unwrap()]);
    assert_eq!(stdout(&o), "X^{-1/2} + X^{1/2}\n");
    let bad = f.put("bad.json", r#"{"a": [2, 1], "eps": [1, 1]}"#);
    assert_eq!(
        run(&["fpoly", "--naive-egk", bad.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn validation_errors_exit_two() {
    let f = Files::new();
    let asym = f.put("a.json", r#"{"n": 2, "entries": [["1","1"],["0","1"]]}"#);
    assert_eq!(
        run(&["siegel", "--prime", "3", "--matrix", asym.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    let frac = f.put("f.json", r#"{"n": 1, "entries": [["1/3"]]}"#);
    assert_eq!(
        run(&[
            "invariants",
            "--prime",
            "3",
            "--matrix",
            frac.to_str().unwrap()
        ])
        .status
        .code(),
        Some(2)
    );
    let m = f.put("m.json", SCALAR_3);
    assert_eq!(
        run(&["siegel", "--prime", "4", "--matrix", m.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["siegel", "--prime", "3", "--matrix", "/nonexistent.json"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["siegel"]).status.code(), Some(2));
}

#[test]
fn resource_limits_exit_four() {
    let f = Files::new();
    let m = f.put("m.json", SCALAR_3);
    let m = m.to_str().unwrap();
    let o = run(&["verify", "--prime", "3", "--matrix", m, "--max-k", "1"]);
    assert_eq!(o.status.code(), Some(4));
    let o = bin()
        .args(["verify", "--prime", "3", "--matrix", m])
        .env("SIEGELKIT_MAX_STATES", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn threads_flag_does_not_change_results() {
    let f = Files::new();
    let m = f.put("m.json", r#"{"n": 2, "entries": [["1","0"],["0","3"]]}"#);
    let m = m.to_str().unwrap();
    let one = run(&["--threads", "1", "verify", "--prime", "3", "--matrix", m]);
    let two = run(&["--threads", "2", "verify", "--prime", "3", "--matrix", m]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, two.stdout);
}

#[test]
fn selftest_passes() {
    let o = run(&["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS")));
}
