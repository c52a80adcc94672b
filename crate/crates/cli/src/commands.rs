use std::fmt::Write;

use synergodic::decomposition::{check_independence, ergodic_decomposition, synergodic_decomposition};
use synergodic::koopman::{evaluate, operator_norm_with, GroupRingElement, NormSettings};
use synergodic::operators::{eccentric_sweep, power_sweep, Arithmetic, Outcome, SweepReport, SweepSettings};
use synergodic::rational::{self, Rational};
use synergodic::spaces::{FiniteProbabilitySpace, Partition};

use crate::config::{LoadedConfig, Mode};
use crate::{suite, CliError, Report, EXIT_CAP, EXIT_PASS, EXIT_VIOLATION};

fn blocks(space: &FiniteProbabilitySpace, p: &Partition) -> String {
    p.blocks()
        .iter()
        .map(|b| format!("{{{}}}", b.iter().map(|&x| space.label(x)).collect::<Vec<_>>().join(",")))
        .collect::<Vec<_>>()
        .join(" ")
}

fn rationals(values: &[Rational]) -> String {
    values.iter().map(Rational::to_string).collect::<Vec<_>>().join(" ")
}

pub fn validate(c: &LoadedConfig) -> Result<Report, CliError> {
    let (kind, atoms, report) = if c.config.pair.is_some() {
        let pair = c.pair(false)?;
        ("pair", pair.atom_count(), pair.validate())
    } else {
        let action = c.action(false)?;
        ("action", action.atom_count(), action.validate())
    };
    let mut out = format!("kind: {kind}\natoms: {atoms}\nvalid: {}\n", report.is_valid());
    for v in &report.violations {
        writeln!(out, "violation: {v}").unwrap();
    }
    let code = if report.is_valid() { EXIT_PASS } else { EXIT_VIOLATION };
    Ok(Report { code, output: out })
}

pub fn decompose(c: &LoadedConfig) -> Result<Report, CliError> {
    let mut out = String::new();
    if c.config.pair.is_some() {
        let r = synergodic_decomposition(&c.pair(true)?);
        let space = r.pair.space();
        writeln!(out, "atoms: {}", space.atom_count()).unwrap();
        writeln!(out, "ergodic: {}", r.ergodic).unwrap();
        writeln!(out, "synergodic: {}", r.synergodic).unwrap();
        writeln!(out, "independent: {}", r.independence).unwrap();
        writeln!(out, "blocks: {}", r.join.block_count()).unwrap();
        writeln!(out, "E_A: {}", blocks(space, &r.part_a)).unwrap();
        writeln!(out, "E_B: {}", blocks(space, &r.part_b)).unwrap();
        writeln!(out, "join: {}", blocks(space, &r.join)).unwrap();
        writeln!(out, "eta_A: {}", rationals(&r.eta_a)).unwrap();
        writeln!(out, "eta_B: {}", rationals(&r.eta_b)).unwrap();
    } else {
        let d = ergodic_decomposition(&c.action(true)?);
        let space = d.source.space();
        writeln!(out, "atoms: {}", space.atom_count()).unwrap();
        writeln!(out, "ergodic: {}", d.partition.is_trivial()).unwrap();
        writeln!(out, "components: {}", d.partition.block_count()).unwrap();
        writeln!(out, "E: {}", blocks(space, &d.partition)).unwrap();
        writeln!(out, "eta: {}", rationals(d.quotient.weights())).unwrap();
    }
    Ok(Report { code: EXIT_PASS, output: out })
}

pub fn converge(c: &LoadedConfig, timings: bool) -> Result<Report, CliError> {
    let cfg = &c.config;
    let settings = SweepSettings {
        ps: cfg.ps.clone(),
        n_max: cfg.n_max,
        threshold: cfg.threshold,
        arithmetic: match cfg.mode {
            Mode::Exact => Arithmetic::Exact,
            Mode::Float => Arithmetic::Float,
        },
        support_cap: cfg.support_cap,
    };
    let report = if cfg.pair.is_some() {
        let pair = c.pair(true)?;
        let w = c.measure("w", pair.left().group())?;
        let u = c.measure("u", pair.right().group())?;
        let psi = floats(&c.observable(pair.atom_count())?);
        eccentric_sweep(&pair, &w, &u, &c.schedule()?, &psi, &settings)?
    } else {
        let action = c.action(true)?;
        let w = c.measure("w", action.group())?;
        let psi = floats(&c.observable(action.atom_count())?);
        power_sweep(&action, &w, &psi, &settings)?
    };
    Ok(render_sweep(&report, timings))
}

fn floats(values: &[Rational]) -> Vec<f64> {
    values.iter().map(rational::to_f64).collect()
}

fn render_sweep(report: &SweepReport, timings: bool) -> Report {
    let mut out = String::from("n,tau_n,support_size,p,deviation,wallclock_ms\n");
    for r in &report.rows {
        let tau = r.tau_n.map(|t| t.to_string()).unwrap_or_default();
        let dev = r.deviation.map(|d| format!("{d:e}")).unwrap_or_else(|| "support_cap_exceeded".into());
        let ms = if timings { r.elapsed.as_millis() } else { 0 };
        writeln!(out, "{},{tau},{},{},{dev},{ms}", r.n, r.support_size, r.p).unwrap();
    }
    let mut code = EXIT_PASS;
    for (p, outcome) in &report.outcomes {
        match outcome {
            Outcome::Converged(n) => writeln!(out, "# p={p}: converged at n={n}").unwrap(),
            Outcome::DidNotConverge(n) => {
                let residual =
                    report.rows.iter().rev().find(|r| r.p == *p).and_then(|r| r.deviation).unwrap_or(f64::NAN);
                writeln!(out, "# p={p}: did not converge by n={n}, residual={residual:e}").unwrap();
            }
            Outcome::SupportCapExceeded(n) => {
                writeln!(out, "# p={p}: support cap exceeded at n={n}").unwrap();
                code = EXIT_CAP;
            }
        }
    }
    if report.rows.iter().any(|r| r.bound.is_some()) {
        match report.rows.iter().find(|r| r.bound.is_some_and(|b| !b.holds)) {
            None => out.push_str("# two-stage bound: holds\n"),
            Some(r) => {
                writeln!(out, "# two-stage bound: violated at n={} p={}", r.n, r.p).unwrap();
                if code == EXIT_PASS {
                    code = EXIT_VIOLATION;
                }
            }
        }
    }
    Report { code, output: out }
}

pub fn independence(c: &LoadedConfig) -> Result<Report, CliError> {
    let pair = c.pair(true)?;
    let space = pair.space();
    let (pa, pb) = (pair.left().invariant_partition(), pair.right().invariant_partition());
    let independent = check_independence(space, &pa, &pb)?;
    let ergodic = pair.is_ergodic();
    let mut out = format!(
        "ergodic: {ergodic}\nindependent: {independent}\nE_A blocks: {}\nE_B blocks: {}\n",
        pa.block_count(),
        pb.block_count()
    );
    if !independent {
        let r = synergodic_decomposition(&pair);
        'search: for (i, row) in r.pushforward.iter().enumerate() {
            for (j, joint) in row.iter().enumerate() {
                let product = &r.eta_a[i] * &r.eta_b[j];
                if *joint != product {
                    writeln!(out, "witness: A-block {i}, B-block {j}: joint {}, product {}", joint, product).unwrap();
                    break 'search;
                }
            }
        }
    }
    let code = if ergodic && !independent { EXIT_VIOLATION } else { EXIT_PASS };
    Ok(Report { code, output: out })
}

#[derive(serde::Serialize)]
struct NormJson {
    norm: f64,
    iterations: usize,
    converged: bool,
}

pub fn koopman_norm(c: &LoadedConfig) -> Result<Report, CliError> {
    let action = c.action(true)?;
    let phi = GroupRingElement::parse_text(action.group(), &c.element_text()?)?;
    let est = operator_norm_with(&evaluate(&action, &phi)?, &NormSettings::default());
    let json = NormJson { norm: est.norm, iterations: est.iterations, converged: est.converged };
    let output = serde_json::to_string_pretty(&json).expect("plain values serialize") + "\n";
    Ok(Report { code: if est.converged { EXIT_PASS } else { EXIT_CAP }, output })
}

pub fn suite(c: &LoadedConfig, timings: bool) -> Result<Report, CliError> {
    let manifest = suite::run_suite(&c.config, None, timings)?;
    let code = if manifest.passed() { EXIT_PASS } else { EXIT_VIOLATION };
    let output = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    Ok(Report { code, output })
}
