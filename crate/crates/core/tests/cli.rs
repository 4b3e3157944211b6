//! End-to-end checks of the command-line surface: exit codes, emitted
//! certificate files, field round trips and byte determinism.

use std::path::Path;
use std::process::{Command, Output};

fn hesseq(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hesseq"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_problem(dir: &Path) {
    let text = r#"{
        "operator": {"kind": "sigma_root", "k": 2, "l": 0, "n": 2},
        "grid": {"shape": [17, 17], "lo": [0, 0], "hi": [1, 1]},
        "chi": "zero",
        "psi": {"constant": 1.0},
        "phi": {"poly": {"terms": [
            {"coef": 0.5, "powers": [2, 0]},
            {"coef": 0.5, "powers": [0, 2]}
        ]}},
        "ubar": {"poly": {"terms": [
            {"coef": 1.0, "powers": [2, 0]},
            {"coef": 1.0, "powers": [0, 2]},
            {"coef": -1.0, "powers": [0, 0]}
        ]}},
        "solver": {"method": "continuity", "steps": 4, "tol": 1e-10}
    }"#;
    std::fs::write(dir.join("prob.json"), text).unwrap();
}

const SIGMA_ROOT_2_3: &str = r#"{"kind":"sigma_root","k":2,"l":0,"n":3}"#;

#[test]
fn verify_operator_pass_and_fail_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = hesseq(
        dir.path(),
        &[
            "verify-operator",
            "--spec",
            SIGMA_ROOT_2_3,
            "--conditions",
            "1.4,1.5,1.11",
            "--samples",
            "2000",
            "--out",
            "certs.json",
        ],
    );
    assert_eq!(ok.status.code(), Some(0), "{ok:?}");
    let stdout = String::from_utf8_lossy(&ok.stdout);
    assert!(stdout.contains("Monotone14"), "{stdout}");
    let certs = std::fs::read_to_string(dir.path().join("certs.json")).unwrap();
    assert!(certs.contains("\"condition\":\"monotone_1_4\""));

    // plain sigma_2 fails concavity -> exit 1 with the witness eigenvalue 2
    let fail = hesseq(
        dir.path(),
        &[
            "verify-operator",
            "--spec",
            r#"{"kind":"sigma","k":2,"l":0,"n":3}"#,
            "--conditions",
            "1.5",
            "--samples",
            "500",
        ],
    );
    assert_eq!(fail.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&fail.stdout);
    assert!(stdout.contains("FAIL"), "{stdout}");
    assert!(stdout.contains("2.000000e0"), "{stdout}");
}

#[test]
fn broken_input_exits_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("empty.json"), "").unwrap();
    let out = hesseq(dir.path(), &["run", "--config", "empty.json"]);
    assert_eq!(out.status.code(), Some(2));

    let out = hesseq(
        dir.path(),
        &["verify-operator", "--spec", r#"{"kind":"nope","k":1,"l":0,"n":2}"#],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solve_sweep_and_barrier_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    write_problem(dir.path());
    let out = hesseq(
        dir.path(),
        &[
            "solve",
            "--problem",
            "prob.json",
            "--out",
            "report.json",
            "--field",
            "u.bin",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert!(dir.path().join("report.json").exists());
    assert!(dir.path().join("u.bin").exists());
    let report = std::fs::read_to_string(dir.path().join("report.json")).unwrap();
    assert!(report.contains("\"converged\":true"));

    let out = hesseq(
        dir.path(),
        &[
            "barrier-check",
            "--problem",
            "prob.json",
            "--solution",
            "u.bin",
            "--t",
            "0.5",
            "--n-coeff",
            "1.0",
            "--delta",
            "0.25",
            "--out",
            "barrier.json",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let cert = std::fs::read_to_string(dir.path().join("barrier.json")).unwrap();
    assert!(cert.contains("\"verdict\":\"pass\""), "{cert}");

    // barrier parameter gate: delta > 2t/N is a usage error
    let out = hesseq(
        dir.path(),
        &[
            "barrier-check",
            "--problem",
            "prob.json",
            "--solution",
            "u.bin",
            "--t",
            "0.1",
            "--n-coeff",
            "100.0",
            "--delta",
            "0.25",
        ],
    );
    assert_eq!(out.status.code(), Some(2));

    let out = hesseq(
        dir.path(),
        &[
            "sweep",
            "--problem",
            "prob.json",
            "--param",
            "psi_amp",
            "--range",
            "0:1:5",
            "--floor",
            "0.5",
            "--out",
            "sweep.csv",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "s,max_hess_interior,max_hess_boundary,max_grad,residual,iters"
    );
    assert_eq!(csv.lines().count(), 6);
}

#[test]
fn verify_cone_and_subsolution_commands() {
    let dir = tempfile::tempdir().unwrap();
    write_problem(dir.path());
    let out = hesseq(
        dir.path(),
        &[
            "verify-cone",
            "--spec",
            SIGMA_ROOT_2_3,
            "--sigma",
            "1.0",
            "--mu",
            "2,2,2",
            "--epsilon",
            "0.05",
            "--radius",
            "10",
            "--samples",
            "128",
            "--out",
            "cone.json",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");

    // on-plane point for the linear family fails
    let out = hesseq(
        dir.path(),
        &[
            "verify-cone",
            "--spec",
            r#"{"kind":"linear","k":1,"l":0,"n":3}"#,
            "--sigma",
            "3.0",
            "--mu",
            "1,1,1",
        ],
    );
    assert_eq!(out.status.code(), Some(1));

    let out = hesseq(
        dir.path(),
        &["verify-subsolution", "--problem", "prob.json", "--mode", "inequality"],
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
}

#[test]
fn certificate_files_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.json", "b.json"] {
        let out = hesseq(
            dir.path(),
            &[
                "verify-cone",
                "--spec",
                SIGMA_ROOT_2_3,
                "--sigma",
                "1.0",
                "--mu",
                "2,2,2",
                "--seed",
                "7",
                "--samples",
                "128",
                "--out",
                name,
            ],
        );
        assert_eq!(out.status.code(), Some(0));
    }
    let a = std::fs::read(dir.path().join("a.json")).unwrap();
    let b = std::fs::read(dir.path().join("b.json")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn nonconvergence_exits_with_code_3_and_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    // a genuinely nonlinear instance capped at one Newton iteration
    let text = r#"{
        "operator": {"kind": "sigma_root", "k": 2, "l": 0, "n": 2},
        "grid": {"shape": [9, 9], "lo": [0, 0], "hi": [1, 1]},
        "chi": "zero",
        "psi": {"poly": {"terms": [
            {"coef": 1.0, "powers": [0, 0]},
            {"coef": 2.0, "powers": [1, 1]}
        ]}},
        "phi": {"poly": {"terms": [
            {"coef": 0.5, "powers": [2, 0]},
            {"coef": 0.5, "powers": [0, 2]}
        ]}},
        "ubar": {"poly": {"terms": [
            {"coef": 2.0, "powers": [2, 0]},
            {"coef": 2.0, "powers": [0, 2]}
        ]}},
        "solver": {"method": "newton", "max_iters": 1, "tol": 1e-12}
    }"#;
    std::fs::write(dir.path().join("hard.json"), text).unwrap();
    let out = hesseq(
        dir.path(),
        &["solve", "--problem", "hard.json", "--out", "rep.json"],
    );
    assert_eq!(out.status.code(), Some(3), "{out:?}");
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("snapshot"), "{stderr}");
    assert!(dir.path().join("rep.snapshot.json").exists());
}

#[test]
fn run_config_dispatches() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.json"),
        r#"{
            "command": "verify-cone",
            "spec": {"kind": "sigma_root", "k": 2, "l": 0, "n": 3},
            "sigma": 1.0,
            "mu": [2.0, 2.0, 2.0],
            "samples": 128,
            "seed": 1
        }"#,
    )
    .unwrap();
    let out = hesseq(dir.path(), &["run", "--config", "run.json"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
}
