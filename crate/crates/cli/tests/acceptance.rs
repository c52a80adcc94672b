//! End-to-end acceptance battery. Each test prints one PASS/FAIL line to the
//! real stdout, so the lines survive libtest's output capture.

use std::io::Write;
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;

use synergodic::actions::{bernoulli_pair, is_free, local_product, CommutingPair, PmpAction};
use synergodic::decomposition::{
    check_independence, synergodic_decomposition, verify_locprod_theorem, verify_synerg_theorem,
};
use synergodic::groups::{FiniteSupportMeasure, Group, GroupDescriptor, GroupKind, Verdict};
use synergodic::koopman::{conjugation_invariance_check, evaluate, operator_norm, tensor_check, GroupRingElement};
use synergodic::operators::{
    check_cube_expectations, check_prodd, eccentric_sweep, power_deviations, Arithmetic, EccentricitySchedule,
    SweepSettings,
};
use synergodic::random::{
    finite_catalog, random_action, random_element, random_ergodic_pair, random_free_action, random_measure,
    random_mixing_instance, random_space, random_transitive_action, random_weight_preserving, random_weights,
};
use synergodic::rational::ratio;
use synergodic::rng::InstanceRng;
use synergodic::spaces::{Automorphism, FiniteProbabilitySpace, Partition};

fn report(id: u32, title: &str, start: Instant, result: Result<String, String>) {
    let secs = start.elapsed().as_secs_f64();
    let line = match &result {
        Ok(detail) => format!("acceptance {id:>2} PASS  {title}: {detail} ({secs:.2}s)"),
        Err(why) => format!("acceptance {id:>2} FAIL  {title}: {why} ({secs:.2}s)"),
    };
    writeln!(std::io::stdout().lock(), "{line}").unwrap();
    if let Err(why) = result {
        panic!("{title}: {why}");
    }
}

fn ensure(ok: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

fn seeded_pairs(count: usize) -> Vec<CommutingPair> {
    let mut rng = InstanceRng::new(3_000);
    (0..count).map(|_| random_ergodic_pair(&mut rng, 8, 48)).collect()
}

fn finite_groups(max_order: usize) -> Vec<Group> {
    finite_catalog(max_order).into_iter().filter(|g| matches!(g.kind(), GroupKind::Finite(_))).collect()
}

#[test]
fn a01_powers_of_product_measures() {
    let start = Instant::now();
    let mut rng = InstanceRng::new(1_000);
    let groups = [GroupDescriptor::free(2).unwrap(), GroupDescriptor::cyclic(6).unwrap()];
    let result = (|| {
        for i in 0..50 {
            let (g, h) = (&groups[i % 2], &groups[(i / 2) % 2]);
            let w = random_measure(&mut rng, g, 3, 2);
            let u = random_measure(&mut rng, h, 3, 2);
            let joint = w.product(&u);
            for n in 1..=5 {
                let lhs = joint.autoconvolve(n).unwrap();
                let rhs = w.autoconvolve(n).unwrap().product(&u.autoconvolve(n).unwrap());
                ensure(lhs == rhs, || format!("instance {i}, n = {n}"))?;
            }
        }
        ensure(start.elapsed().as_secs_f64() < 10.0, || "slower than 10 s".into())?;
        Ok("50 instances, n = 1..5, exact".into())
    })();
    report(1, "convolution product law", start, result);
}

#[test]
fn a02_integer_walk_example() {
    let start = Instant::now();
    let z = GroupDescriptor::free(1).unwrap();
    let el = |s: &str| z.parse_element(s).unwrap();
    let result = (|| {
        let w = FiniteSupportMeasure::new(&z, [(el("a1'"), ratio(1, 2)), (el("a1"), ratio(1, 2))]).unwrap();
        let expected = FiniteSupportMeasure::new(
            &z,
            [(el("a1' a1'"), ratio(1, 4)), (el("e"), ratio(1, 2)), (el("a1 a1"), ratio(1, 4))],
        )
        .unwrap();
        ensure(w.autoconvolve(2).unwrap() == expected, || "second power differs".into())?;
        ensure(w.is_absolutely_generating() == Verdict::No, || {
            "two-point measure reported absolutely generating".into()
        })?;
        let lazy =
            FiniteSupportMeasure::new(&z, [(el("a1'"), ratio(1, 3)), (el("e"), ratio(1, 3)), (el("a1"), ratio(1, 3))])
                .unwrap();
        ensure(lazy.is_absolutely_generating() == Verdict::Yes, || "lazy measure not absolutely generating".into())?;
        Ok("w*w exact; No / Yes".into())
    })();
    report(2, "integer walk example", start, result);
}

#[test]
fn a03_invariant_partitions_are_independent() {
    let start = Instant::now();
    let pairs = seeded_pairs(100);
    let result = (|| {
        for (i, pair) in pairs.iter().enumerate() {
            ensure((8..=48).contains(&pair.atom_count()) && pair.is_ergodic(), || format!("instance {i} malformed"))?;
            let (pa, pb) = (pair.left().invariant_partition(), pair.right().invariant_partition());
            ensure(check_independence(pair.space(), &pa, &pb).unwrap(), || format!("instance {i} dependent"))?;
        }
        let synergodic = pairs.iter().filter(|p| synergodic_decomposition(p).synergodic).count();
        Ok(format!("100 pairs on 8..48 atoms ({synergodic} synergodic)"))
    })();
    report(3, "statistical independence", start, result);
}

#[test]
fn a04_synergodic_structure() {
    let start = Instant::now();
    let result = (|| {
        for (i, pair) in seeded_pairs(100).iter().enumerate() {
            let r = verify_synerg_theorem(pair).unwrap();
            ensure(r.pushforward_is_product, || format!("instance {i}: pushforward is not a product"))?;
            ensure(r.violations.is_empty(), || format!("instance {i}: {:?}", r.violations[0]))?;
        }
        Ok("100 pairs, exact".into())
    })();
    report(4, "synergodic structure", start, result);
}

#[test]
fn a05_local_products_of_ergodic_actions() {
    let start = Instant::now();
    let mut rng = InstanceRng::new(5_000);
    let result = (|| {
        for i in 0..100 {
            let (na, nb) = (rng.range(1, 16), rng.range(1, 16));
            let a = random_transitive_action(&mut rng, na);
            let b = random_transitive_action(&mut rng, nb);
            let r = verify_locprod_theorem(&a, &b).unwrap();
            ensure(r.synergodic, || format!("instance {i}: not synergodic"))?;
            ensure(r.left_fibers && r.right_fibers, || format!("instance {i}: invariant sets are not fibers"))?;
        }
        Ok("100 pairs, each side <= 16 atoms".into())
    })();
    report(5, "local products", start, result);
}

#[test]
fn a06_bernoulli_nonexample() {
    let start = Instant::now();
    let result = (|| {
        let z2 = GroupDescriptor::cyclic(2).unwrap();
        let (pair, j) = bernoulli_pair(&z2, &FiniteProbabilitySpace::uniform(2).unwrap()).unwrap();
        let space = pair.space();
        let index = |label: &str| (0..space.atom_count()).find(|&x| space.label(x) == label).unwrap();
        let expected =
            Partition::from_blocks(4, &[vec![index("00")], vec![index("11")], vec![index("01"), index("10")]]).unwrap();
        ensure(pair.left().invariant_partition() == expected, || "E_L differs".into())?;
        ensure(pair.right().invariant_partition() == expected, || "E_R differs".into())?;
        let r = synergodic_decomposition(&pair);
        ensure(!r.ergodic && !r.synergodic, || "reported ergodic or synergodic".into())?;
        for g in z2.elements().unwrap() {
            let l = pair.left().element_image(&g).unwrap();
            let conj = j.compose(&pair.right().element_image(&g).unwrap()).compose(&j);
            ensure(l == conj, || format!("L^{0} != J R^{0} J", z2.format_element(&g)))?;
        }
        Ok("E_L = E_R = {00}{11}{01,10}".into())
    })();
    report(6, "Bernoulli shift", start, result);
}

#[test]
fn a07_operator_identities() {
    let start = Instant::now();
    let mut rng = InstanceRng::new(7_000);
    let result = (|| {
        for (i, pair) in seeded_pairs(100).iter().enumerate() {
            ensure(check_prodd(pair).unwrap(), || format!("pair {i}: I_B I_A != E_X"))?;
        }
        for i in 0..20 {
            let sizes = [0; 3].map(|_| rng.range(1, 4));
            let [x1, x2, x3] = sizes.map(|n| FiniteProbabilitySpace::new(random_weights(&mut rng, n, 6)).unwrap());
            ensure(check_cube_expectations(&x1, &x2, &x3), || format!("triple {i} ({sizes:?})"))?;
        }
        Ok("100 pairs, 20 weight triples".into())
    })();
    report(7, "operator identities", start, result);
}

#[test]
fn a08_eccentric_convergence() {
    let start = Instant::now();
    let mut rng = InstanceRng::new(8_000);
    let schedules =
        [EccentricitySchedule::Identity, EccentricitySchedule::Power(2), EccentricitySchedule::CeilLog2PlusOne];
    let settings = SweepSettings { arithmetic: Arithmetic::Float, ..SweepSettings::default() };
    let result = (|| {
        let mut worst = 0;
        for i in 0..10 {
            let (pair, w, u) = random_mixing_instance(&mut rng, 64);
            ensure(pair.is_ergodic() && pair.atom_count() <= 64, || format!("instance {i} malformed"))?;
            for m in [&w, &u] {
                ensure(m.weight(&m.group().identity()) > ratio(0, 1), || format!("instance {i}: no mass at e"))?;
                ensure(m.is_absolutely_generating() == Verdict::Yes, || {
                    format!("instance {i}: not absolutely generating")
                })?;
            }
            let psi: Vec<f64> = (0..pair.atom_count()).map(|_| rng.unit_f64() * 2.0 - 1.0).collect();
            for s in &schedules {
                let r = eccentric_sweep(&pair, &w, &u, s, &psi, &settings).unwrap();
                ensure(r.all_converged(), || format!("instance {i}, schedule {s}: {:?}", r.outcomes))?;
                ensure(r.bound_holds(), || format!("instance {i}, schedule {s}: two-stage bound fails"))?;
                ensure(r.rows.iter().all(|row| row.bound.is_some()), || "bound not checked".into())?;
                worst = worst.max(r.rows.last().unwrap().n);
            }
        }
        ensure(start.elapsed().as_secs_f64() < 60.0, || "slower than 60 s".into())?;
        Ok(format!("10 pairs x 3 schedules, all p below 1e-6 by n = {worst}"))
    })();
    report(8, "eccentric convergence", start, result);
}

/// `||A(w^{*n}) psi - E psi||_2` for the rotation on Z/3 from the discrete
/// Fourier transform: characters are eigenvectors of every translation.
fn rotation_decay_oracle(w: &[(i64, f64)], psi: &[f64], n: u32) -> f64 {
    let omega = |k: i64| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 3.0);
    (1..3)
        .map(|k| {
            let coeff: Complex64 =
                psi.iter().enumerate().map(|(x, v)| omega(-k * x as i64) * v).sum::<Complex64>() / 3.0;
            let lambda: Complex64 = w.iter().map(|(s, p)| omega(k * s) * p).sum();
            lambda.norm().powi(2 * n as i32) * coeff.norm_sqr()
        })
        .sum::<f64>()
        .sqrt()
}

#[test]
fn a09_closed_form_decay() {
    let start = Instant::now();
    let result = (|| {
        let z = GroupDescriptor::free(1).unwrap();
        let space = FiniteProbabilitySpace::uniform(3).unwrap();
        let a = PmpAction::new(&z, &space, vec![Automorphism::new(vec![1, 2, 0]).unwrap()]).unwrap();
        let w = FiniteSupportMeasure::parse_text(&z, "a1' 1/2\na1 1/2\n").unwrap();
        let psi = [2.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0];
        let got = power_deviations(&a, &w, &psi, 2.0, 20, Arithmetic::Exact).unwrap();
        let mut worst: f64 = 0.0;
        for (i, d) in got.iter().enumerate() {
            let n = i as u32 + 1;
            let oracle = rotation_decay_oracle(&[(-1, 0.5), (1, 0.5)], &psi, n);
            let closed = 0.5f64.powi(n as i32) * 2f64.sqrt() / 3.0;
            ensure((oracle - closed).abs() < 1e-15, || format!("oracle disagrees with closed form at n = {n}"))?;
            worst = worst.max((d - closed).abs());
            ensure((d - closed).abs() < 1e-12, || format!("n = {n}: {d} vs {closed}"))?;
        }
        Ok(format!("n = 1..20, max error {worst:.1e}"))
    })();
    report(9, "closed-form decay", start, result);
}

fn random_element_of_ring(rng: &mut InstanceRng, g: &Group) -> GroupRingElement {
    let k = rng.range(1, 4);
    let entries: Vec<_> = (0..k)
        .map(|_| (random_element(rng, g, 2), Complex64::new(rng.unit_f64() * 2.0 - 1.0, rng.unit_f64() * 2.0 - 1.0)))
        .collect();
    GroupRingElement::new(g, entries).unwrap()
}

#[test]
fn a10_koopman_norms() {
    let start = Instant::now();
    let mut rng = InstanceRng::new(10_000);
    let result = (|| {
        let z = GroupDescriptor::free(1).unwrap();
        let space = FiniteProbabilitySpace::uniform(3).unwrap();
        let rot = PmpAction::new(&z, &space, vec![Automorphism::new(vec![1, 2, 0]).unwrap()]).unwrap();
        let phi = GroupRingElement::parse_text(&z, "e 1 0\na1 -1 0\n").unwrap();
        let norm = operator_norm(&evaluate(&rot, &phi).unwrap()).unwrap().norm;
        // circulant: eigenvalues 1 - omega^k
        let oracle = (0..3)
            .map(|k| {
                (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 3.0))
                    .norm()
            })
            .fold(0.0, f64::max);
        ensure((norm - oracle).abs() < 1e-9, || format!("norm {norm} vs {oracle}"))?;

        let mut largest = 0;
        for i in 0..20 {
            let (nc, nd) = (rng.range(1, 32), rng.range(1, 32));
            let (yc, yd) = (random_space(&mut rng, nc), random_space(&mut rng, nd));
            let c = random_action(&mut rng, &yc);
            let d = random_action(&mut rng, &yd);
            let g = GroupDescriptor::product(c.group(), d.group());
            let phi = random_element_of_ring(&mut rng, &g);
            let r = tensor_check(&c, &d, &phi).unwrap();
            ensure((r.pair_norm - r.tensor_norm).abs() < 1e-9, || format!("tensor instance {i}: {r:?}"))?;
            largest = largest.max(nc * nd);
        }
        for i in 0..20 {
            let n = rng.range(2, 24);
            let space = random_space(&mut rng, n);
            let a = random_action(&mut rng, &space);
            let phi = random_element_of_ring(&mut rng, a.group());
            let u = random_weight_preserving(&mut rng, &space);
            let r = conjugation_invariance_check(&a, &phi, &u).unwrap();
            ensure((r.norm - r.conjugated_norm).abs() < 1e-9, || format!("conjugation instance {i}: {r:?}"))?;
        }
        Ok(format!("sqrt(3) within 1e-9; 20 tensor checks up to dimension {largest}; 20 conjugations"))
    })();
    report(10, "Koopman norms", start, result);
}

#[test]
fn a11_freeness() {
    let start = Instant::now();
    let mut rng = InstanceRng::new(11_000);
    let catalog = finite_groups(8);
    let result = (|| {
        for i in 0..50 {
            let (g, h) = (rng.choose(&catalog).clone(), rng.choose(&catalog).clone());
            let (cg, ch) = (rng.range(1, 3), rng.range(1, 3));
            let a = random_free_action(&mut rng, &g, cg);
            let b = random_free_action(&mut rng, &h, ch);
            ensure(is_free(&a).free && is_free(&b).free, || format!("instance {i}: factor not free"))?;
            let lp = local_product(&a, &b).to_product_action();
            ensure(is_free(&lp).free, || format!("instance {i}: local product not free"))?;
        }
        for i in 0..50 {
            let n = rng.range(1, 12);
            let space = random_space(&mut rng, n);
            let a = random_action(&mut rng, &space);
            let r = is_free(&a);
            let (el, _) = r.witness.clone().ok_or_else(|| format!("free-group action {i}: no witness"))?;
            ensure(!r.free && !a.group().is_identity(&el), || format!("free-group action {i}: bad verdict"))?;
            ensure(a.element_image(&el).unwrap().is_identity(), || {
                format!("free-group action {i}: witness moves atoms")
            })?;
        }
        Ok("50 local products free; 50 free-group actions with witnesses".into())
    })();
    report(11, "freeness", start, result);
}

fn run_cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_synergodic")).args(args).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{args:?}");
    out.stdout
}

#[test]
fn a12_cli_determinism() {
    let start = Instant::now();
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let configs = root.join("../../configs");
    let golden = root.join("tests/golden");
    let result = (|| {
        let cases = [
            (vec!["suite", "--seed", "42"], "suite.json", "suite_seed42.json"),
            (vec!["converge"], "rotation_walk.json", "rotation_walk.csv"),
            (vec!["converge"], "non_generating.json", "non_generating.csv"),
            (vec!["converge"], "eccentric.json", "eccentric.csv"),
        ];
        for (cmd, config, expected) in cases {
            let path = configs.join(config);
            let mut args = cmd.clone();
            args.extend(["--config", path.to_str().unwrap()]);
            let (first, second) = (run_cli(&args), run_cli(&args));
            ensure(first == second, || format!("{config}: runs differ"))?;
            let want = std::fs::read(golden.join(expected)).map_err(|e| format!("{expected}: {e}"))?;
            ensure(first == want, || format!("{config}: differs from {expected}"))?;
        }
        Ok("suite --seed 42 and 3 converge configs byte-identical to golden files".into())
    })();
    report(12, "CLI determinism", start, result);
}
