//! JSON experiment configuration.
//!
//! ```json
//! {
//!   "seed": 42,
//!   "mode": "exact",
//!   "pair": { "local_product": { "left": { "rotation": { "atoms": 3 } },
//!                                "right": { "regular": { "group": "cyclic(2)" } } } },
//!   "w": "lazy",
//!   "u": { "nearly_uniform": { "eps": "1/8" } },
//!   "schedule": "log2"
//! }
//! ```
//!
//! Randomized instances come from a SplitMix64 stream seeded with `seed`.
//! File paths are resolved against the directory holding the config.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use synergodic::actions::{
    bernoulli_pair, local_product, parse_action, parse_action_unchecked, parse_pair, parse_pair_unchecked,
    CommutingPair, PmpAction,
};
use synergodic::groups::{FiniteSupportMeasure, Group, GroupDescriptor};
use synergodic::operators::EccentricitySchedule;
use synergodic::random::{lazy_generating_measure, nearly_uniform, random_ergodic_pair, regular_action};
use synergodic::rational::{self, Rational};
use synergodic::rng::InstanceRng;
use synergodic::spaces::{Automorphism, FiniteProbabilitySpace};

use crate::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    #[default]
    Float,
}

/// Inline text or a path to a file holding it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TextSource {
    Text(String),
    File(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionSpec {
    Text(String),
    File(String),
    /// The integers acting on uniform `Z/atoms` by `x -> x + 1`.
    Rotation {
        atoms: usize,
    },
    /// Left translation of a finite group on itself.
    Regular {
        group: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairSpec {
    Text(String),
    File(String),
    LocalProduct {
        left: ActionSpec,
        right: ActionSpec,
    },
    /// Left and right shifts of a finite group on `base^G`.
    Bernoulli {
        group: String,
        base: Vec<String>,
    },
    RandomErgodic {
        min_atoms: usize,
        max_atoms: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureSpec {
    Text(String),
    File(String),
    /// Uniform on the identity, the generators and their inverses.
    Lazy,
    /// `eps delta_e + (1 - eps) uniform` on a finite group.
    NearlyUniform {
        eps: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<PairSpec>,
    /// Measure on the action's group, or on the left group of a pair.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<MeasureSpec>,
    /// Measure on the right group of a pair.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<MeasureSpec>,
    #[serde(default = "default_schedule")]
    pub schedule: String,
    /// Test function as rationals, one per atom; defaults to the indicator
    /// of atom 0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observable: Option<Vec<String>>,
    #[serde(default = "default_ps", with = "p_values")]
    pub ps: Vec<f64>,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    #[serde(default = "default_support_cap")]
    pub support_cap: usize,
    /// Group-ring element for `koopman-norm`, `<element> <re> <im>` lines.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element: Option<TextSource>,
    /// Checks run by `suite`; absent means all of them.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub battery: Option<Vec<String>>,
    #[serde(default = "default_battery_size")]
    pub battery_size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

fn default_seed() -> u64 {
    42
}

fn default_schedule() -> String {
    "identity".into()
}

fn default_ps() -> Vec<f64> {
    vec![1.0, 2.0, f64::INFINITY]
}

fn default_n_max() -> usize {
    60
}

fn default_threshold() -> f64 {
    1e-6
}

fn default_support_cap() -> usize {
    synergodic::groups::DEFAULT_SUPPORT_CAP
}

fn default_battery_size() -> usize {
    20
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("every field has a default")
    }
}

/// `p` values as JSON numbers, with `"inf"` for the sup norm.
mod p_values {
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum P {
        Finite(f64),
        Named(String),
    }

    pub fn serialize<S: Serializer>(ps: &[f64], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<P> =
            ps.iter().map(|&p| if p.is_infinite() { P::Named("inf".into()) } else { P::Finite(p) }).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Vec::<P>::deserialize(d)?
            .into_iter()
            .map(|p| match p {
                P::Finite(p) => Ok(p),
                P::Named(s) if s == "inf" => Ok(f64::INFINITY),
                P::Named(s) => Err(D::Error::custom(format!("bad p value {s:?}"))),
            })
            .collect()
    }
}

/// A parsed config together with the directory its paths are relative to.
#[derive(Clone, Debug)]
pub struct LoadedConfig {
    pub config: ExperimentConfig,
    pub base: PathBuf,
}

impl LoadedConfig {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let config = serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(Self { config, base })
    }

    fn text(&self, src: &TextSource) -> Result<String, CliError> {
        match src {
            TextSource::Text(t) => Ok(t.clone()),
            TextSource::File(p) => {
                let path = self.base.join(p);
                std::fs::read_to_string(&path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
            }
        }
    }

    pub fn element_text(&self) -> Result<String, CliError> {
        let src = self.config.element.as_ref().ok_or_else(|| missing("element"))?;
        self.text(src)
    }

    pub fn action(&self, checked: bool) -> Result<PmpAction, CliError> {
        let spec = self.config.action.as_ref().ok_or_else(|| missing("action"))?;
        self.build_action(spec, checked)
    }

    fn build_action(&self, spec: &ActionSpec, checked: bool) -> Result<PmpAction, CliError> {
        let parse = if checked { parse_action } else { parse_action_unchecked };
        Ok(match spec {
            ActionSpec::Text(t) => parse(t)?,
            ActionSpec::File(p) => parse(&self.text(&TextSource::File(p.clone()))?)?,
            ActionSpec::Rotation { atoms } => {
                let space = FiniteProbabilitySpace::uniform(*atoms)?;
                let shift = Automorphism::new((0..*atoms).map(|x| (x + 1) % atoms).collect())?;
                PmpAction::new(&GroupDescriptor::free(1)?, &space, vec![shift])?
            }
            ActionSpec::Regular { group } => regular_action(&finite_group(group)?),
        })
    }

    pub fn pair(&self, checked: bool) -> Result<CommutingPair, CliError> {
        let spec = self.config.pair.as_ref().ok_or_else(|| missing("pair"))?;
        let parse = if checked { parse_pair } else { parse_pair_unchecked };
        Ok(match spec {
            PairSpec::Text(t) => parse(t)?,
            PairSpec::File(p) => parse(&self.text(&TextSource::File(p.clone()))?)?,
            PairSpec::LocalProduct { left, right } => {
                local_product(&self.build_action(left, true)?, &self.build_action(right, true)?)
            }
            PairSpec::Bernoulli { group, base } => {
                let weights = base.iter().map(|w| parse_rational(w)).collect::<Result<Vec<_>, _>>()?;
                bernoulli_pair(&finite_group(group)?, &FiniteProbabilitySpace::new(weights)?)?.0
            }
            PairSpec::RandomErgodic { min_atoms, max_atoms } => {
                if !(2 <= *min_atoms && min_atoms <= max_atoms) {
                    return Err(CliError::Config("random_ergodic needs 2 <= min_atoms <= max_atoms".into()));
                }
                random_ergodic_pair(&mut InstanceRng::new(self.config.seed), *min_atoms, *max_atoms)
            }
        })
    }

    pub fn measure(&self, which: &str, group: &Group) -> Result<FiniteSupportMeasure, CliError> {
        let spec = match which {
            "w" => self.config.w.as_ref(),
            _ => self.config.u.as_ref(),
        }
        .ok_or_else(|| missing(which))?;
        Ok(match spec {
            MeasureSpec::Text(t) => FiniteSupportMeasure::parse_text(group, t)?,
            MeasureSpec::File(p) => FiniteSupportMeasure::parse_text(group, &self.text(&TextSource::File(p.clone()))?)?,
            MeasureSpec::Lazy => lazy_generating_measure(group, group.generators()),
            MeasureSpec::NearlyUniform { eps } => {
                if !group.is_finite() {
                    return Err(CliError::Config("nearly_uniform needs a finite group".into()));
                }
                nearly_uniform(group, &parse_rational(eps)?)
            }
        })
    }

    pub fn schedule(&self) -> Result<EccentricitySchedule, CliError> {
        self.config.schedule.parse().map_err(|_| CliError::Config(format!("bad schedule {:?}", self.config.schedule)))
    }

    pub fn observable(&self, atoms: usize) -> Result<Vec<Rational>, CliError> {
        match &self.config.observable {
            None => Ok((0..atoms).map(|x| if x == 0 { rational::one() } else { rational::zero() }).collect()),
            Some(values) if values.len() == atoms => values.iter().map(|v| parse_rational(v)).collect(),
            Some(values) => Err(CliError::Config(format!("observable has {} values for {atoms} atoms", values.len()))),
        }
    }
}

fn missing(field: &str) -> CliError {
    CliError::Config(format!("config has no `{field}`"))
}

fn finite_group(expr: &str) -> Result<Group, CliError> {
    let g = GroupDescriptor::parse_expr(expr)?;
    if g.is_finite() {
        Ok(g)
    } else {
        Err(CliError::Config(format!("{expr} is not a finite group")))
    }
}

fn parse_rational(text: &str) -> Result<Rational, CliError> {
    rational::parse(text).ok_or_else(|| CliError::Config(format!("bad rational {text:?}")))
}
