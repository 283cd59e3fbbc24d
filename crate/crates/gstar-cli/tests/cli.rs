//! End-to-end checks of the `gstar` binary: the documented command
//! surface, file round-trips, byte-for-byte determinism, and exit codes.

use std::process::{Command, Output};

fn gstar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gstar"))
        .args(args)
        .env_remove("GSTAR_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn compute_two_colors_exact() {
    let out = gstar(&["compute", "--r", "2", "--exact"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("value=3/2"));
    assert!(text.contains("mode=exact"));
}

#[test]
fn bounds_row_for_eight_colors() {
    let out = gstar(&["bounds", "--r", "8"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "r,lower_sq,upper,exact\n8,1/2,13/18,13/18\n");
}

#[test]
fn bounds_range() {
    let out = gstar(&["bounds", "--r", "9", "--through", "10"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "r,lower_sq,upper,exact\n9,4/9,2/3,2/3\n10,2/5,23/36,\n"
    );
}

#[test]
fn oracle_small() {
    let out = gstar(&["oracle", "--n", "2", "--r", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "3\n");
}

#[test]
fn emitted_files_roundtrip_and_verify_clean() {
    let dir = tempdir();
    let profile = dir.join("p.txt");
    let square = dir.join("s.csv");
    let extended = dir.join("s5.csv");
    let cert = dir.join("c.txt");

    for family in ["auto", "square", "universal", "catalog", "square-minus-one"] {
        let r = match family {
            "square" => "9",
            "square-minus-one" => "8",
            _ => "6",
        };
        let out = gstar(&[
            "construct",
            "--r",
            r,
            "--family",
            family,
            "--out",
            profile.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "construct {family}");
        // every constructed profile verifies with zero violations
        let verify = gstar(&["verify", "--profile", profile.to_str().unwrap()]);
        assert!(verify.status.success());
        assert!(stdout(&verify).starts_with("profile: valid\n"), "{family}");
    }

    let out = gstar(&["construct", "--r", "2", "--out", profile.to_str().unwrap()]);
    assert!(out.status.success());
    let out = gstar(&[
        "discretize",
        "--profile",
        profile.to_str().unwrap(),
        "--t",
        "2",
        "--out",
        square.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let square_text = std::fs::read_to_string(&square).unwrap();
    assert!(square_text.starts_with("n=4 r=2\n"));

    let out = gstar(&[
        "extend",
        "--square",
        square.to_str().unwrap(),
        "--n",
        "5",
        "--out",
        extended.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    // re-readable: verify parses what extend wrote
    let verify = gstar(&["verify", "--square", extended.to_str().unwrap()]);
    assert!(verify.status.success());
    assert!(stdout(&verify).contains("max_touched="));

    let out = gstar(&[
        "compute",
        "--r",
        "3",
        "--exact",
        "--out",
        cert.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = gstar(&["certify", "--certificate", cert.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "true\n");
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["compute", "--r", "2"],
        vec!["construct", "--r", "7"],
        vec!["bounds", "--r", "2", "--through", "12"],
    ] {
        let a = gstar(&args);
        let b = gstar(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    // identical at any job count
    let one = gstar(&["compute", "--r", "3", "--jobs", "1"]);
    let four = gstar(&["compute", "--r", "3", "--jobs", "4"]);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn exit_codes() {
    // domain error: catalog outside 2..=8
    let out = gstar(&["construct", "--r", "12", "--family", "catalog"]);
    assert_eq!(out.status.code(), Some(1));

    // budget exceeded
    let out = Command::new(env!("CARGO_BIN_EXE_gstar"))
        .args(["oracle", "--n", "4", "--r", "2"])
        .env("GSTAR_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // usage errors are domain errors, not budget errors
    let out = gstar(&["verify"]);
    assert_eq!(out.status.code(), Some(1));
    let out = gstar(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(1));

    // success
    let out = gstar(&["oracle", "--n", "2", "--r", "2"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn exactness_flag_rejects_unprovable_r() {
    let out = gstar(&["compute", "--r", "5", "--exact"]);
    assert_eq!(out.status.code(), Some(1));
    // without the flag the upper bound is reported
    let out = gstar(&["compute", "--r", "5"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("mode=upper-bound-only"));
    assert!(stdout(&out).contains("value=11/12"));
}

fn tempdir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("gstar-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
