use std::process::Command;

use weaklab::cli::{self, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("weaklab").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn field(out: &str, key: &str) -> f64 {
    out.lines()
        .find_map(|l| {
            let mut it = l.split_whitespace();
            (it.next() == Some(key)).then(|| it.next().unwrap().parse().unwrap())
        })
        .unwrap_or_else(|| panic!("no `{key}` in {out}"))
}

#[test]
fn chi_example() {
    let (code, out, _) = run(&[
        "chi",
        "--pointer",
        "coherent",
        "--r",
        "1",
        "--phi-c",
        "0.7854",
        "--theta",
        "2.4435",
        "--phi",
        "0.7854",
        "--s",
        "1e-5",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!((field(&out, "chi") - 1.4618).abs() < 2e-3);
}

#[test]
fn shift_matches_gaussian_limit_at_zero_squeezing() {
    let (code, out, _) = run(&[
        "shift",
        "--pointer",
        "squeezed",
        "--eta",
        "0",
        "--theta",
        "1.1",
        "--phi",
        "0.4",
        "--s",
        "0.8",
    ]);
    assert_eq!(code, EXIT_OK);
    let sel = weaklab::SelectionPair::new(1.1, 0.4).unwrap();
    let cfg = weaklab::Coupling::from_strength(0.8, 1.0, 1).unwrap();
    let x = weaklab::pointers::gaussian_limit_mean_x(&sel, &cfg).unwrap();
    let p = weaklab::pointers::gaussian_limit_mean_p(&sel, &cfg).unwrap();
    assert!((field(&out, "mean_x") - x).abs() < 1e-12);
    assert!((field(&out, "mean_p") - p).abs() < 1e-12);
}

#[test]
fn g_and_sigma_flags() {
    let (_, a, _) = run(&["shift", "--g", "0.05", "--sigma", "0.5", "--theta", "1.0"]);
    let (_, b, _) = run(&["shift", "--s", "0.1", "--sigma", "0.5", "--theta", "1.0"]);
    assert_eq!(a, b);
    let (code, _, err) = run(&["shift", "--g", "0.05", "--s", "0.3"]);
    assert_eq!(code, EXIT_CONFIG);
    assert!(err.contains("`g`"));
}

#[test]
fn qfi_example() {
    let (code, out, _) = run(&[
        "qfi",
        "--theta",
        "1.5707963267948966",
        "--phi",
        "0",
        "--r",
        "2",
        "--s",
        "0.4",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!((field(&out, "qfi") - 1.0).abs() < 1e-6);
    assert!((field(&out, "cramer_rao_bound") - 2.0).abs() < 1e-5);
}

#[test]
fn error_exit_codes() {
    let (code, _, err) = run(&["sweep", "--config", "missing.cfg"]);
    assert_eq!(code, EXIT_CONFIG);
    assert!(err.contains("missing.cfg"));
    let (code, _, err) = run(&["chi", "--frobnicate", "3"]);
    assert_eq!(code, EXIT_CONFIG);
    assert!(err.contains("Usage"));
    assert_eq!(run(&["chi", "--theta", "3.141592653589793"]).0, EXIT_CONFIG);
    assert_eq!(run(&["chi", "--pointer", "thermal"]).0, EXIT_CONFIG);
    // cos φ = 0: no non-postselected signal
    assert_eq!(run(&["chi", "--phi", "1.5707963267948966"]).0, EXIT_NUMERICAL);
    assert_eq!(run(&["sweep"]).0, EXIT_CONFIG, "quantity is required");
}

#[test]
fn binary_runs() {
    let out = Command::new(env!("CARGO_BIN_EXE_weaklab"))
        .args([
            "snr",
            "--pointer",
            "cat",
            "--r",
            "1",
            "--theta",
            "1.5707963267948966",
            "--phi",
            "0",
            "--s",
            "0.5",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(field(&text, "snr_post") > 0.0);
    let bad = Command::new(env!("CARGO_BIN_EXE_weaklab"))
        .arg("nonsense")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_CONFIG));
}
