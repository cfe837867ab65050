//! End-to-end CLI tests: golden-pinned reports, canonical document bytes,
//! exit codes, and determinism of seeded generation.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_jetmoduli")
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(golden_dir().join(name))
        .unwrap_or_else(|e| panic!("golden file {name}: {e}"))
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn census_reports_match_goldens() {
    assert_eq!(stdout_of(&["census", "--r", "5"]), golden("census_r5.txt"));
    assert_eq!(
        stdout_of(&["census", "--r", "5", "--json"]),
        golden("census_r5.json")
    );
}

#[test]
fn dim_report_matches_golden() {
    assert_eq!(
        stdout_of(&["dim", "--n", "2", "--r", "5", "--json"]),
        golden("dim_n2_r5.json")
    );
}

#[test]
fn make_is_canonical_and_deterministic() {
    let out = stdout_of(&[
        "make", "--preset", "pm", "--m", "2", "--r", "4", "--label", "p2",
    ]);
    assert_eq!(out, golden("p2.json"));
    // Seeded random generation is reproducible.
    let a = stdout_of(&["make", "--preset", "random", "--r", "4", "--seed", "7"]);
    let b = stdout_of(&["make", "--preset", "random", "--r", "4", "--seed", "7"]);
    assert_eq!(a, b);
    let c = stdout_of(&["make", "--preset", "random", "--r", "4", "--seed", "8"]);
    assert_ne!(a, c);
}

#[test]
fn equiv_reports_match_goldens() {
    let p2 = golden_dir().join("p2.json");
    let q2 = golden_dir().join("q2.json");
    let p2 = p2.to_str().unwrap();
    let q2 = q2.to_str().unwrap();
    assert_eq!(
        stdout_of(&["equiv", "-a", p2, "-b", q2]),
        golden("equiv_p2_q2.txt")
    );
    assert_eq!(
        stdout_of(&["equiv", "-a", p2, "-b", q2, "--json"]),
        golden("equiv_p2_q2.json")
    );
    // A jet is equivalent to itself.
    let self_eq = stdout_of(&["equiv", "-a", p2, "-b", p2]);
    assert!(self_eq.starts_with("equivalent"), "{self_eq}");
}

#[test]
fn invariants_report_matches_golden_and_decimal_mode_works() {
    let p2 = golden_dir().join("p2.json");
    let p2 = p2.to_str().unwrap();
    assert_eq!(
        stdout_of(&["invariants", "--order", "4", p2, "--json"]),
        golden("invariants_p2.json")
    );
    let text = stdout_of(&["invariants", "--order", "4", p2, "--decimal", "2"]);
    assert!(text.contains("p4 = -400.00"), "{text}");
}

#[test]
fn classify_keeps_input_order_and_accepts_hpoly() {
    let dir = tempdir("classify");
    let p3 = dir.join("p3.json");
    write_ok(&["make", "--preset", "pm", "--m", "3", "--r", "5", "--output", p3.to_str().unwrap()]);
    let xxy = dir.join("xxy.json");
    write_ok(&["make", "--preset", "xxy", "--r", "4", "--output", xxy.to_str().unwrap()]);
    let out = stdout_of(&["classify", p3.to_str().unwrap(), xxy.to_str().unwrap()]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].ends_with("D_3"), "{out}");
    assert!(lines[1].ends_with("K_1"), "{out}");
    // hpoly documents classify through the stabilizer directly.
    let hdoc = dir.join("h.json");
    std::fs::write(
        &hdoc,
        r#"{
  "format": "jetdoc/1",
  "kind": "hpoly",
  "dim": 2,
  "order": 3,
  "coeffs": {
    "3,0": "1",
    "1,2": "-3"
  }
}
"#,
    )
    .unwrap();
    let out = stdout_of(&["classify", hdoc.to_str().unwrap()]);
    assert!(out.ends_with("D_3\n"), "{out}");
}

#[test]
fn normalize_fixes_a_jet_and_is_idempotent_on_normal_forms() {
    let dir = tempdir("normalize");
    // A normal-form input passes through byte-identically.
    let p2 = golden_dir().join("p2.json");
    let out = stdout_of(&["normalize", p2.to_str().unwrap()]);
    assert_eq!(out, golden("p2.json"));
    // A non-normal input gets fixed; --output prints a summary line.
    let raw = dir.join("raw.json");
    std::fs::write(
        &raw,
        r#"{
  "format": "jetdoc/1",
  "kind": "metric",
  "dim": 2,
  "order": 3,
  "entries": {
    "1,1": {
      "0,0": "1",
      "1,0": "1/2"
    },
    "2,2": {
      "0,0": "1"
    }
  }
}
"#,
    )
    .unwrap();
    let fixed = dir.join("fixed.json");
    let summary = stdout_of(&[
        "normalize",
        raw.to_str().unwrap(),
        "--output",
        fixed.to_str().unwrap(),
    ]);
    assert!(summary.contains("gauss_check: true"), "{summary}");
    // Normalizing the output again changes nothing.
    let once = std::fs::read_to_string(&fixed).unwrap();
    let twice = stdout_of(&["normalize", fixed.to_str().unwrap()]);
    assert_eq!(once, twice);
}

#[test]
fn exit_codes_follow_the_contract() {
    // Usage errors: 2.
    assert_eq!(exit_code(&run(&["no-such-command"])), 2);
    assert_eq!(exit_code(&run(&["census"])), 2); // missing --r
    assert_eq!(exit_code(&run(&["invariants", "--order", "7", "x.json"])), 2);
    let missing_m = run(&["make", "--preset", "pm", "--r", "5"]);
    assert_eq!(exit_code(&missing_m), 2);
    assert!(
        String::from_utf8_lossy(&missing_m.stderr).contains("requires --m"),
        "{missing_m:?}"
    );

    // Domain errors: 1, with the module's message surfaced.
    let out = run(&["classify", "/nonexistent/file.json"]);
    assert_eq!(exit_code(&out), 1);
    let out = run(&["make", "--preset", "pm", "--m", "3", "--r", "4"]);
    assert_eq!(exit_code(&out), 1);
    assert!(
        String::from_utf8_lossy(&out.stderr).contains("requires order r >= 5"),
        "{out:?}"
    );

    let dir = tempdir("badparse");
    let bad = dir.join("bad.json");
    std::fs::write(
        &bad,
        r#"{
  "format": "jetdoc/1",
  "kind": "metric",
  "dim": 1,
  "order": 1,
  "entries": {
    "1,1": {
      "0": "2/4"
    }
  }
}
"#,
    )
    .unwrap();
    let out = run(&["classify", bad.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 1);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("entries[\"1,1\"][\"0\"]"), "{err}");
    assert!(err.contains("non-canonical"), "{err}");
}

#[test]
fn non_identity_frames_are_fixed_exactly_or_refused() {
    let dir = tempdir("frames");
    // diag(4, 9/4): exactly rescalable.
    let scalable = dir.join("scalable.json");
    std::fs::write(
        &scalable,
        r#"{
  "format": "jetdoc/1",
  "kind": "metric",
  "dim": 2,
  "order": 2,
  "entries": {
    "1,1": {
      "0,0": "4"
    },
    "2,2": {
      "0,0": "9/4"
    }
  }
}
"#,
    )
    .unwrap();
    let out = stdout_of(&["classify", scalable.to_str().unwrap()]);
    assert!(out.ends_with("O(2)\n"), "{out}");
    // diag(2, 1): pivot 2 is not a rational square; refused with guidance.
    let refused = dir.join("refused.json");
    std::fs::write(
        &refused,
        r#"{
  "format": "jetdoc/1",
  "kind": "metric",
  "dim": 2,
  "order": 2,
  "entries": {
    "1,1": {
      "0,0": "2"
    },
    "2,2": {
      "0,0": "1"
    }
  }
}
"#,
    )
    .unwrap();
    let out = run(&["classify", refused.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 1);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("linear change of frame"), "{err}");
}

fn write_ok(args: &[&str]) {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn tempdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("jetmoduli-cli-test-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
