use std::fs;

use triscord::xstate::XParams;
use triscord_cli::check::{run_check, CheckOptions};
use triscord_cli::{run, EXIT_CONSTRAINT, EXIT_IO, EXIT_OK, EXIT_USAGE};

fn exec(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("triscord").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn report_ghz_table() {
    let (code, out, _) = exec(&["report", "-3", "4", "0"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("d3      1.000000"));
    assert!(out.contains("n3      1.000000"));
    assert!(out.contains("branch  S1"));
}

#[test]
fn report_json_has_all_keys() {
    let (code, out, _) = exec(&["report", "0", "1", "-1", "--json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    for key in [
        "a1", "c1", "c2", "s_rho", "s_ab", "s_cond", "branch", "d3", "t3", "j3", "n3",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert!((v["d3"].as_f64().unwrap() - 0.600876).abs() < 1e-6);
}

#[test]
fn report_exit_codes() {
    let (code, _, err) = exec(&["report", "2", "0", "0"]);
    assert_eq!(code, EXIT_CONSTRAINT);
    assert!(err.contains("a1 out of [-3, 1]"));
    assert_eq!(exec(&["report", "zero", "0", "0"]).0, EXIT_USAGE);
    assert_eq!(exec(&["report", "0", "0"]).0, EXIT_USAGE);
    assert_eq!(exec(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(exec(&["--help"]).0, EXIT_OK);
}

#[test]
fn sweep_is_byte_identical_and_valid() {
    let dir = std::env::temp_dir().join(format!("triscord-sweep-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let (a, b) = (dir.join("a.csv"), dir.join("b.csv"));
    for path in [&a, &b] {
        let args = [
            "sweep",
            "--slice",
            "c1_eq_c2",
            "--n",
            "41",
            "--quantities",
            "d3,branch",
            "--output",
            path.to_str().unwrap(),
        ];
        let (code, out, _) = exec(&args);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("max d3"));
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("a1,c,d3,branch"));
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        let (a1, c): (f64, f64) = (cols[0].parse().unwrap(), cols[1].parse().unwrap());
        assert!(XParams::new(a1, c, c).is_valid(), "{line}");
        let d3: f64 = cols[2].parse().unwrap();
        if c == 0.0 || a1 == 0.0 {
            assert!(d3.abs() < 1e-12, "{line}");
        }
    }
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn sweep_errors() {
    let (code, _, _) = exec(&[
        "sweep",
        "--slice",
        "a1_zero",
        "--n",
        "5",
        "--output",
        "/nonexistent-dir/x.csv",
    ]);
    assert_eq!(code, EXIT_IO);
    assert_eq!(
        exec(&["sweep", "--slice", "diagonal", "--output", "x.csv"]).0,
        EXIT_USAGE
    );
    assert_eq!(
        exec(&["sweep", "--slice", "a1_zero", "--n", "1", "--output", "x.csv"]).0,
        EXIT_USAGE
    );
}

#[test]
fn stats_seed_precedence_and_determinism() {
    let (code, one, _) = exec(&["stats", "--samples", "1", "--seed", "3"]);
    assert_eq!(code, EXIT_OK);
    assert!(one.contains("seed    3"));
    assert!(one.contains("100.00%"));
    assert_eq!(
        exec(&["stats", "--samples", "500", "--seed", "11"]).1,
        exec(&["stats", "--samples", "500", "--seed", "11"]).1
    );

    // the only test in this binary touching the variable
    std::env::set_var("TRISCORD_SEED", "41");
    assert!(exec(&["stats", "--samples", "5"]).1.contains("seed    41"));
    assert!(exec(&["stats", "--samples", "5", "--seed", "9"])
        .1
        .contains("seed    9"));
    std::env::remove_var("TRISCORD_SEED");
    assert!(exec(&["stats", "--samples", "5"])
        .1
        .contains("seed    2024"));
    assert_eq!(exec(&["stats", "--samples", "0"]).0, EXIT_USAGE);
}

#[test]
fn check_benchmarks_only() {
    let (code, out, _) = exec(&["check", "--samples", "0", "--grid", "16", "--seed", "1"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("grid 16x16"));
    assert!(out.contains("5 passed, 0 failed"));
}

#[test]
fn check_catches_a_corrupted_branch_rule() {
    let opts = CheckOptions {
        samples: 0,
        grid: 16,
        phi_grid: 16,
        seed: 1,
    };
    // always reporting S1 is wrong wherever another branch wins
    let summary = run_check(&opts, |p| {
        triscord::correlations::s1(p).map(|v| (v, triscord::correlations::Branch::S1))
    })
    .unwrap();
    assert!(!summary.all_pass());
    let failing: Vec<XParams> = summary.failures().map(|r| r.params).collect();
    assert!(failing.contains(&XParams::new(0.0, 1.0, -1.0)));
}
