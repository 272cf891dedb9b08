//! End-to-end tests against the built binary: the exit-code contract
//! (0 = checks passed, 1 = a check failed, 2 = usage or domain error) and
//! byte-identical output for fixed seed and configuration.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kleinteich"))
}

fn exit_code(args: &[&str]) -> i32 {
    bin()
        .args(args)
        .output()
        .expect("binary should run")
        .status
        .code()
        .expect("no exit code (killed by signal?)")
}

#[test]
fn exit_code_matrix() {
    // 0: checks pass
    assert_eq!(exit_code(&["verify", "--kind", "four", "--alpha", "0,2"]), 0);
    assert_eq!(
        exit_code(&[
            "verify", "--kind", "genus2", "--tau", "0.5,2", "0,2", "0.5,2",
        ]),
        0
    );
    assert_eq!(
        exit_code(&["sigma", "--kind", "four", "--alpha", "0.5,2", "--mu", "0.3,-0.1"]),
        0
    );
    assert_eq!(
        exit_code(&[
            "sigma", "--kind", "genus2", "--tau", "-0.5,2", "0,2", "0.5,2", "--mu", "0.1,0.1",
        ]),
        0
    );
    assert_eq!(
        exit_code(&[
            "locus", "check", "--kind", "genus2", "--tau", "0.5,2", "0,2", "0.5,2",
        ]),
        0
    );
    // off-locus and not fixed: a consistent observation, still exit 0
    assert_eq!(
        exit_code(&[
            "locus", "check", "--kind", "genus2", "--tau", "0.7,2", "0,2", "0.5,2",
        ]),
        0
    );
    assert_eq!(
        exit_code(&["signature", "--genus", "3", "--nonorientable"]),
        0
    );
    assert_eq!(
        exit_code(&["locus", "sample", "--kind", "four", "-n", "5"]),
        0
    );

    // 1: a check fails (the published C3 transcription breaks validation)
    assert_eq!(
        exit_code(&[
            "verify", "--kind", "genus2", "--tau", "0.5,2", "0,2", "0.5,2", "--c3", "printed",
        ]),
        1
    );

    // 2: domain errors
    assert_eq!(exit_code(&["verify", "--kind", "four", "--alpha", "0,0.5"]), 2);
    assert_eq!(
        exit_code(&[
            "limitset", "--kind", "four", "--alpha", "0,2", "--max-word-len", "20",
        ]),
        2
    );
    assert_eq!(exit_code(&["signature", "--genus", "0", "--nonorientable", "--ram", "1"]), 2);

    // 2: usage errors (clap, or a kind/coordinate mismatch)
    assert_eq!(exit_code(&["sigma", "--kind", "four"]), 2);
    assert_eq!(exit_code(&["sigma", "--kind", "genus2", "--alpha", "0,2"]), 2);
    assert_eq!(exit_code(&["frobnicate"]), 2);
}

#[test]
fn limitset_csv_is_byte_identical_across_runs() {
    let dir = std::env::temp_dir();
    let f1 = dir.join("kleinteich_cli_test_run1.csv");
    let f2 = dir.join("kleinteich_cli_test_run2.csv");
    for f in [&f1, &f2] {
        let status = bin()
            .args([
                "limitset",
                "--kind",
                "four",
                "--alpha",
                "0,2",
                "--max-word-len",
                "6",
                "--out",
                f.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert!(status.success());
    }
    let a = std::fs::read(&f1).unwrap();
    let b = std::fs::read(&f2).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b, "repeated limitset runs must be byte-identical");
    let _ = std::fs::remove_file(&f1);
    let _ = std::fs::remove_file(&f2);
}

#[test]
fn locus_sample_csv_is_byte_identical_for_fixed_seed() {
    let out = |seed: &str| {
        bin()
            .args([
                "locus", "sample", "--kind", "genus2", "-n", "8", "--seed", seed,
            ])
            .output()
            .unwrap()
    };
    let a = out("7");
    let b = out("7");
    let c = out("8");
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout, "different seeds should differ");
}
