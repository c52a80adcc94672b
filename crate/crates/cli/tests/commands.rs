use std::path::PathBuf;
use std::process::{Command, Output};

use synergodic_cli::{run_suite, ExperimentConfig, LoadedConfig, Mutation, Verdict, CHECKS};

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_synergodic")).args(args).output().expect("binary runs")
}

fn run_config(cmd: &str, name: &str, extra: &[&str]) -> (i32, String) {
    let path = config(name);
    let mut args = vec![cmd, "--config", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = run(&args);
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).filter(|l| !l.starts_with('#')).map(|l| l.split(',').map(String::from).collect()).collect()
}

fn has_float(text: &str) -> bool {
    let b = text.as_bytes();
    (1..b.len().saturating_sub(1)).any(|i| b[i] == b'.' && b[i - 1].is_ascii_digit() && b[i + 1].is_ascii_digit())
}

#[test]
fn validate_exit_codes() {
    let (code, out) = run_config("validate", "local_product.json", &[]);
    assert_eq!(code, 0);
    assert!(out.contains("valid: true"));
    let (code, out) = run_config("validate", "broken_pair.json", &[]);
    assert_eq!(code, 2);
    assert!(out.contains("violation: left generator a1 and right generator a1 do not commute"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ \"pair\": ").unwrap();
    assert_eq!(run(&["validate", "--config", bad.to_str().unwrap()]).status.code(), Some(64));
    std::fs::write(
        &bad,
        r#"{ "pair": { "text": "space\natoms=2\n0 1/2\n1 1/2\nleft free(1)\n(0 5)\nright free(1)\n()\n" } }"#,
    )
    .unwrap();
    assert_eq!(run(&["validate", "--config", bad.to_str().unwrap()]).status.code(), Some(64));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(64));
}

#[test]
fn decompose_examples() {
    let (code, out) = run_config("decompose", "bernoulli_z2.json", &[]);
    assert_eq!(code, 0);
    assert!(out.contains("ergodic: false\nsynergodic: false\n"));
    assert!(out.contains("blocks: 3\n"));
    assert!(out.contains("E_A: {00} {01,10} {11}\n"));
    assert!(run_config("decompose", "flip_rotation.json", &[]).1.contains("synergodic: true\n"));
    assert!(run_config("decompose", "trivial_pair.json", &[]).1.contains("synergodic: false\n"));
}

#[test]
fn converge_constant_observable_has_zero_deviation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    std::fs::write(
        &path,
        r#"{ "action": { "rotation": { "atoms": 4 } }, "w": "lazy", "observable": ["3", "3", "3", "3"] }"#,
    )
    .unwrap();
    let out = run(&["converge", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&String::from_utf8(out.stdout).unwrap());
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r[4].parse::<f64>().unwrap() == 0.0));
}

#[test]
fn converge_rotation_walk_decreases_strictly() {
    let (code, out) = run_config("converge", "rotation_walk.json", &[]);
    assert_eq!(code, 0);
    assert!(out.starts_with("n,tau_n,support_size,p,deviation,wallclock_ms\n"));
    let rows = csv_rows(&out);
    for p in ["1", "2", "inf"] {
        let devs: Vec<f64> = rows.iter().filter(|r| r[3] == p).map(|r| r[4].parse().unwrap()).collect();
        assert_eq!(devs.len(), 20);
        assert!(devs.windows(2).all(|w| w[1] < w[0]), "p={p}: {devs:?}");
    }
    // eigenvalue 1/4 on the nonconstant characters, and psi is nonconstant with 2-norm sqrt(2)/3
    let two: Vec<f64> = rows.iter().filter(|r| r[3] == "2").map(|r| r[4].parse().unwrap()).collect();
    for (n, d) in two.iter().enumerate() {
        assert!((d - 0.25f64.powi(n as i32 + 1) * 2f64.sqrt() / 3.0).abs() < 1e-12);
    }
}

#[test]
fn converge_non_generating_walk_stalls_at_the_coset_deviation() {
    let (code, out) = run_config("converge", "non_generating.json", &[]);
    assert_eq!(code, 0);
    // the walk stays on the coset of <2> containing 0: psi = 1_{0} tends to
    // 1/3 on even atoms and 0 on odd ones, while the global mean is 1/6
    let coset_limit: Vec<f64> = (0..6).map(|x| if x % 2 == 0 { 1.0 / 3.0 } else { 0.0 }).collect();
    let residual: f64 = coset_limit.iter().map(|v| (v - 1.0 / 6.0).abs()).sum::<f64>() / 6.0;
    for p in ["1", "2", "inf"] {
        let line = out.lines().find(|l| l.starts_with(&format!("# p={p}: did not converge by n=40"))).unwrap();
        let got: f64 = line.rsplit_once("residual=").unwrap().1.parse().unwrap();
        assert!((got - residual).abs() < 1e-9, "{line}");
    }
}

#[test]
fn converge_eccentric_pair_reports_bound() {
    let (code, out) = run_config("converge", "eccentric.json", &[]);
    assert_eq!(code, 0);
    assert!(out.contains("# two-stage bound: holds\n"));
    assert!(out.lines().filter(|l| l.starts_with("# p=")).all(|l| l.contains("converged at")));
    assert!(csv_rows(&out).iter().all(|r| !r[1].is_empty() && r[4].parse::<f64>().unwrap() >= 0.0));
}

#[test]
fn converge_support_cap_exits_70() {
    let (code, out) = run_config("converge", "non_generating.json", &[]);
    assert_eq!(code, 0);
    assert!(!out.contains("support_cap_exceeded"));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    std::fs::write(
        &path,
        r#"{ "action": { "text": "group free(2)\nspace\natoms=2\n0 1/2\n1 1/2\ngenerators\n(0 1)\n()\n" },
             "w": "lazy", "support_cap": 50 }"#,
    )
    .unwrap();
    let out = run(&["converge", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(70));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains(",support_cap_exceeded,"));
    assert!(text.contains("support cap exceeded at n="));
}

#[test]
fn independence_and_koopman() {
    let (code, out) = run_config("independence", "random_pair.json", &[]);
    assert_eq!(code, 0);
    assert!(out.contains("ergodic: true\nindependent: true\n"));
    let (code, out) = run_config("independence", "bernoulli_z2.json", &[]);
    assert_eq!(code, 0);
    assert!(out.contains("witness: "));

    let (code, out) = run_config("koopman-norm", "koopman_rotation.json", &[]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["norm"].as_f64().unwrap() - 3f64.sqrt()).abs() < 1e-9);
    assert_eq!(v["converged"], true);
}

#[test]
fn verdict_commands_print_no_floats() {
    for (cmd, cfg) in [
        ("validate", "broken_pair.json"),
        ("decompose", "bernoulli_z2.json"),
        ("decompose", "random_pair.json"),
        ("independence", "bernoulli_z2.json"),
        ("suite", "suite.json"),
    ] {
        let (_, out) = run_config(cmd, cfg, &["--mode", "exact"]);
        let body: String = out.lines().filter(|l| !l.contains("\"version\"")).collect();
        assert!(!has_float(&body), "{cmd} {cfg}: {out}");
    }
}

#[test]
fn suite_verdicts() {
    let (code, out) = run_config("suite", "suite.json", &[]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["checks"].as_array().unwrap().len(), CHECKS.len());
    assert_eq!(v["config_hash"].as_str().unwrap().len(), 64);

    let loaded = LoadedConfig::read(&config("suite.json")).unwrap();
    let mutated = run_suite(&loaded.config, Some(Mutation::FlipPermutationEntry), false).unwrap();
    assert!(!mutated.passed());
    let failed: Vec<&str> =
        mutated.checks.iter().filter(|c| matches!(c.verdict, Verdict::Fail { .. })).map(|c| c.name.as_str()).collect();
    assert_eq!(failed, ["semi", "synerg", "prodd"]);

    let empty = ExperimentConfig { battery: Some(vec![]), ..Default::default() };
    let manifest = run_suite(&empty, None, false).unwrap();
    assert!(manifest.passed());
    assert!(manifest.checks.iter().all(|c| matches!(c.verdict, Verdict::Skipped { .. })));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    std::fs::write(&path, r#"{ "battery": [] }"#).unwrap();
    let out = run(&["suite", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("\"verdict\": \"skipped\""));
    std::fs::write(&path, r#"{ "battery": ["semi", "nope"] }"#).unwrap();
    assert_eq!(run(&["suite", "--config", path.to_str().unwrap()]).status.code(), Some(64));
}

#[test]
fn seed_selects_instances_and_subsets_keep_them() {
    let base = ExperimentConfig::default();
    let other = ExperimentConfig { seed: 43, ..Default::default() };
    let (a, b) = (run_suite(&base, None, false).unwrap(), run_suite(&other, None, false).unwrap());
    assert_ne!(a.config_hash, b.config_hash);
    let only = ExperimentConfig { battery: Some(vec!["synerg".into()]), ..Default::default() };
    let mutated_only = run_suite(&only, Some(Mutation::FlipPermutationEntry), false).unwrap();
    assert_eq!(
        mutated_only.checks[2],
        run_suite(&base, Some(Mutation::FlipPermutationEntry), false).unwrap().checks[2]
    );
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("manifest.json");
    let (code, stdout) = run_config("suite", "suite.json", &[]);
    let (code2, empty) = run_config("suite", "suite.json", &["--out", target.to_str().unwrap()]);
    assert_eq!((code, code2), (0, 0));
    assert!(empty.is_empty());
    assert_eq!(std::fs::read_to_string(&target).unwrap(), stdout);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}
