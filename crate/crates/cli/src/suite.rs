//! Seeded battery of exact checks and the run manifest.

use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use synergodic::actions::{is_free, local_product, CommutingPair, PmpAction};
use synergodic::decomposition::{check_independence, verify_locprod_theorem, verify_synerg_theorem};
use synergodic::groups::{Group, GroupDescriptor, GroupKind};
use synergodic::operators::{check_cube_expectations, check_prodd};
use synergodic::random::{
    finite_catalog, random_action, random_ergodic_pair, random_free_action, random_measure, random_space,
    random_transitive_action,
};
use synergodic::rng::InstanceRng;
use synergodic::spaces::Automorphism;

use crate::{CliError, ExperimentConfig};

pub const CHECKS: [&str; 7] = ["ind-conv", "semi", "synerg", "locprod", "prodd", "cube", "free"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail { witness: String },
    Skipped { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    #[serde(flatten)]
    pub verdict: Verdict,
    pub instances: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wallclock_ms: Option<u128>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunManifest {
    pub version: String,
    /// SHA-256 of the effective config, output path excluded.
    pub config_hash: String,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wallclock_ms: Option<u128>,
}

impl RunManifest {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| !matches!(c.verdict, Verdict::Fail { .. }))
    }
}

/// Deliberate corruption of the battery's instances, for testing that
/// failures surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// Swap two entries of one generator permutation in the first pair
    /// of every pair-based check.
    FlipPermutationEntry,
}

pub fn config_hash(config: &ExperimentConfig) -> String {
    let mut c = config.clone();
    c.out = None;
    let bytes = serde_json::to_vec(&c).expect("config serializes");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Each check draws from its own stream forked off `config.seed` in the
/// fixed order of [`CHECKS`], so selecting a subset does not change the
/// instances of the others.
pub fn run_suite(
    config: &ExperimentConfig,
    mutation: Option<Mutation>,
    timings: bool,
) -> Result<RunManifest, CliError> {
    let selected: Vec<String> = match &config.battery {
        None => CHECKS.iter().map(|s| s.to_string()).collect(),
        Some(list) => list.clone(),
    };
    if let Some(bad) = selected.iter().find(|s| !CHECKS.contains(&s.as_str())) {
        return Err(CliError::Config(format!("unknown check {bad:?}; known: {}", CHECKS.join(", "))));
    }
    let start = Instant::now();
    let mut root = InstanceRng::new(config.seed);
    let mut checks = Vec::new();
    for name in CHECKS {
        let mut rng = root.fork();
        if !selected.iter().any(|s| s == name) {
            let verdict = Verdict::Skipped { reason: "not selected".into() };
            checks.push(CheckResult { name: name.into(), verdict, instances: 0, wallclock_ms: None });
            continue;
        }
        let t = Instant::now();
        let battery = Battery { rng: &mut rng, size: config.battery_size, mutation };
        let verdict = battery.run(name)?;
        let wallclock_ms = timings.then(|| t.elapsed().as_millis());
        checks.push(CheckResult { name: name.into(), verdict, instances: config.battery_size, wallclock_ms });
    }
    Ok(RunManifest {
        version: env!("CARGO_PKG_VERSION").into(),
        config_hash: config_hash(config),
        seed: config.seed,
        checks,
        wallclock_ms: timings.then(|| start.elapsed().as_millis()),
    })
}

struct Battery<'a> {
    rng: &'a mut InstanceRng,
    size: usize,
    mutation: Option<Mutation>,
}

type Check = Result<Verdict, CliError>;

fn fail(witness: String) -> Check {
    Ok(Verdict::Fail { witness })
}

impl Battery<'_> {
    fn run(self, name: &str) -> Check {
        match name {
            "ind-conv" => self.ind_conv(),
            "semi" => self.pairs(|pair| {
                let (pa, pb) = (pair.left().invariant_partition(), pair.right().invariant_partition());
                let independent = check_independence(pair.space(), &pa, &pb)?;
                Ok(independent.then_some(()).ok_or_else(|| "invariant partitions are dependent".to_string()))
            }),
            "synerg" => self.pairs(|pair| {
                let r = verify_synerg_theorem(pair)?;
                Ok(if !r.pushforward_is_product {
                    Err("pushforward is not the product of the component measures".into())
                } else if let Some(v) = r.violations.first() {
                    Err(format!("{:?} generator {} fails to intertwine at atom {}", v.side, v.generator, v.atom))
                } else {
                    Ok(())
                })
            }),
            "prodd" => self.pairs(|pair| {
                Ok(check_prodd(pair)?.then_some(()).ok_or_else(|| "I_B I_A differs from integration".to_string()))
            }),
            "locprod" => self.locprod(),
            "cube" => self.cube(),
            "free" => self.free(),
            _ => unreachable!("names are checked against CHECKS"),
        }
    }

    fn ind_conv(self) -> Check {
        let groups = [GroupDescriptor::free(2)?, GroupDescriptor::cyclic(6)?];
        for i in 0..self.size {
            let (g, h) = (&groups[i % 2], &groups[(i / 2) % 2]);
            let w = random_measure(self.rng, g, 3, 2);
            let u = random_measure(self.rng, h, 3, 2);
            let joint = w.product(&u);
            for n in 1..=4 {
                if joint.autoconvolve(n)? != w.autoconvolve(n)?.product(&u.autoconvolve(n)?) {
                    return fail(format!(
                        "instance {i}: power {n} of the product measure is not the product of powers"
                    ));
                }
            }
        }
        Ok(Verdict::Pass)
    }

    /// Runs `check` on seeded ergodic pairs after validating them.
    fn pairs(self, check: impl Fn(&CommutingPair) -> Result<Result<(), String>, CliError>) -> Check {
        for i in 0..self.size {
            let mut pair = random_ergodic_pair(self.rng, 8, 24);
            if i == 0 && self.mutation == Some(Mutation::FlipPermutationEntry) {
                pair = flip_entry(&pair);
            }
            let report = pair.validate();
            if let Some(v) = report.violations.first() {
                return fail(format!("instance {i}: {v}"));
            }
            if !pair.is_ergodic() {
                return fail(format!("instance {i}: pair is not ergodic"));
            }
            if let Err(w) = check(&pair)? {
                return fail(format!("instance {i}: {w}"));
            }
        }
        Ok(Verdict::Pass)
    }

    fn locprod(self) -> Check {
        for i in 0..self.size {
            let (na, nb) = (self.rng.range(1, 6), self.rng.range(1, 6));
            let a = random_transitive_action(self.rng, na);
            let b = random_transitive_action(self.rng, nb);
            if !verify_locprod_theorem(&a, &b)?.passed() {
                return fail(format!("instance {i}: local product on {na}x{nb} atoms"));
            }
        }
        Ok(Verdict::Pass)
    }

    fn cube(self) -> Check {
        for i in 0..self.size {
            let sizes = [0; 3].map(|_| self.rng.range(1, 3));
            let [x1, x2, x3] = sizes.map(|n| random_space(self.rng, n));
            if !check_cube_expectations(&x1, &x2, &x3) {
                return fail(format!("instance {i}: coordinate expectations on {sizes:?}"));
            }
        }
        Ok(Verdict::Pass)
    }

    fn free(self) -> Check {
        let catalog: Vec<Group> =
            finite_catalog(6).into_iter().filter(|g| matches!(g.kind(), GroupKind::Finite(_))).collect();
        for i in 0..self.size {
            let g = self.rng.choose(&catalog).clone();
            let h = self.rng.choose(&catalog).clone();
            let (cg, ch) = (self.rng.range(1, 2), self.rng.range(1, 2));
            let lp = local_product(&random_free_action(self.rng, &g, cg), &random_free_action(self.rng, &h, ch));
            if let Some((el, x)) = is_free(&lp.to_product_action()).witness {
                let group = lp.to_product_action().group().clone();
                return fail(format!("instance {i}: {} fixes atom {x}", group.format_element(&el)));
            }
            let n = self.rng.range(1, 8);
            let space = random_space(self.rng, n);
            let a = random_action(self.rng, &space);
            if let Some(w) = trivial_witness_problem(&a) {
                return fail(format!("instance {i}: {w}"));
            }
        }
        Ok(Verdict::Pass)
    }
}

/// A free-group action on a finite space must be reported non-free with a
/// nontrivial element acting as the identity.
fn trivial_witness_problem(a: &PmpAction) -> Option<String> {
    let report = is_free(a);
    let Some((g, _)) = report.witness.filter(|_| !report.free) else {
        return Some("free-group action reported free".into());
    };
    let label = a.group().format_element(&g);
    if a.group().is_identity(&g) {
        return Some("witness is the identity".into());
    }
    match a.element_image(&g) {
        Ok(t) if t.is_identity() => None,
        _ => Some(format!("witness {label} moves some atom")),
    }
}

/// Swaps two image entries of a generator so that validation fails.
fn flip_entry(pair: &CommutingPair) -> CommutingPair {
    let n = pair.atom_count();
    for left_side in [true, false] {
        let side = if left_side { pair.left() } else { pair.right() };
        for gen in 0..side.generator_images().len() {
            for x in 0..n {
                for y in x + 1..n {
                    let mut images = side.generator_images().to_vec();
                    let mut entries = images[gen].images().to_vec();
                    entries.swap(x, y);
                    images[gen] = Automorphism::new_unchecked(entries);
                    let Ok(mutated) = PmpAction::new_unchecked(side.group(), pair.space(), images) else { continue };
                    let candidate = if left_side {
                        CommutingPair::new_unchecked(mutated, pair.right().clone())
                    } else {
                        CommutingPair::new_unchecked(pair.left().clone(), mutated)
                    };
                    if let Some(c) = candidate.ok().filter(|c| !c.validate().is_valid()) {
                        return c;
                    }
                }
            }
        }
    }
    pair.clone()
}
