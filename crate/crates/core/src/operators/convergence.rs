use std::time::{Duration, Instant};

use super::{expectation_apply, markov_operator_float, p_norm, EccentricitySchedule};
use crate::actions::{CommutingPair, PmpAction};
use crate::groups::{FiniteSupportMeasure, FloatMeasure, DEFAULT_SUPPORT_CAP};
use crate::rational::to_f64;
use crate::{Error, Result};

/// How convolution powers are accumulated. Operators are always applied
/// in binary64.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arithmetic {
    Exact,
    Float,
}

/// Running convolution power `w^{*k}`.
#[derive(Clone, Debug)]
enum Power {
    Exact { w: FiniteSupportMeasure, acc: FiniteSupportMeasure, k: usize },
    Float { w: FloatMeasure, acc: FloatMeasure, k: usize },
}

impl Power {
    fn new(w: &FiniteSupportMeasure, arithmetic: Arithmetic) -> Self {
        match arithmetic {
            Arithmetic::Exact => Power::Exact { w: w.clone(), acc: w.clone(), k: 1 },
            Arithmetic::Float => Power::Float { w: w.to_float(), acc: w.to_float(), k: 1 },
        }
    }

    fn exponent(&self) -> usize {
        match self {
            Power::Exact { k, .. } | Power::Float { k, .. } => *k,
        }
    }

    /// Moves to `w^{*target}`, restarting if `target` is below the current
    /// exponent.
    fn advance_to(&mut self, target: usize, cap: usize) -> Result<()> {
        assert!(target >= 1);
        if target < self.exponent() {
            *self = match self {
                Power::Exact { w, .. } => Power::Exact { w: w.clone(), acc: w.clone(), k: 1 },
                Power::Float { w, .. } => Power::Float { w: w.clone(), acc: w.clone(), k: 1 },
            };
        }
        while self.exponent() < target {
            match self {
                Power::Exact { w, acc, k } => {
                    *acc = w.convolve_capped(acc, cap)?;
                    *k += 1;
                }
                Power::Float { w, acc, k } => {
                    *acc = w.convolve_capped(acc, cap)?;
                    *k += 1;
                }
            }
        }
        Ok(())
    }

    fn float(&self) -> FloatMeasure {
        match self {
            Power::Exact { acc, .. } => acc.to_float(),
            Power::Float { acc, .. } => acc.clone(),
        }
    }

    fn support_size(&self) -> usize {
        match self {
            Power::Exact { acc, .. } => acc.support_size(),
            Power::Float { acc, .. } => acc.support_size(),
        }
    }
}

fn check_ps(ps: &[f64]) -> Result<()> {
    match ps.iter().find(|p| p.is_nan() || **p < 1.0) {
        Some(&p) => Err(Error::BadExponent(p)),
        None => Ok(()),
    }
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `||(A(m) - I_A) psi||_p` for each measure `m` in the sequence.
pub fn ergodic_deviation(
    action: &PmpAction,
    measures: &[FiniteSupportMeasure],
    psi: &[f64],
    p: f64,
) -> Result<Vec<f64>> {
    check_ps(&[p])?;
    let space = action.space();
    let target = expectation_apply(space, &action.invariant_partition(), psi)?;
    measures
        .iter()
        .map(|m| {
            let op = markov_operator_float(action, &m.to_float())?;
            p_norm(space, &sub(&op.apply(psi), &target), p)
        })
        .collect()
}

/// [`ergodic_deviation`] along `w^{*1}, ..., w^{*n_max}`.
pub fn power_deviations(
    action: &PmpAction,
    w: &FiniteSupportMeasure,
    psi: &[f64],
    p: f64,
    n_max: usize,
    arithmetic: Arithmetic,
) -> Result<Vec<f64>> {
    check_ps(&[p])?;
    let space = action.space();
    let target = expectation_apply(space, &action.invariant_partition(), psi)?;
    let mut power = Power::new(w, arithmetic);
    (1..=n_max)
        .map(|n| {
            power.advance_to(n, DEFAULT_SUPPORT_CAP)?;
            let op = markov_operator_float(action, &power.float())?;
            p_norm(space, &sub(&op.apply(psi), &target), p)
        })
        .collect()
}

/// `||mu(D) - A(w^{*n}) 1_D||_p` for `n = 1..n_max`, where `D` is a union
/// of blocks of the right action's invariant partition and the pair is
/// ergodic.
pub fn onside_deviation(
    pair: &CommutingPair,
    w: &FiniteSupportMeasure,
    d: &[bool],
    p: f64,
    n_max: usize,
) -> Result<Vec<f64>> {
    check_ps(&[p])?;
    let space = pair.space();
    if d.len() != space.atom_count() {
        return Err(Error::SizeMismatch { left: space.atom_count(), right: d.len() });
    }
    if !pair.right().invariant_partition().is_measurable(d) {
        return Err(Error::NotInvariant);
    }
    if !pair.is_ergodic() {
        return Err(Error::NotErgodic);
    }
    let mass = to_f64(&space.measure_of(d));
    let indicator: Vec<f64> = d.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
    let mut power = Power::new(w, Arithmetic::Float);
    (1..=n_max)
        .map(|n| {
            power.advance_to(n, DEFAULT_SUPPORT_CAP)?;
            let op = markov_operator_float(pair.left(), &power.float())?;
            let diff: Vec<f64> = op.apply(&indicator).iter().map(|v| mass - v).collect();
            p_norm(space, &diff, p)
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct SweepSettings {
    pub ps: Vec<f64>,
    pub n_max: usize,
    pub threshold: f64,
    pub arithmetic: Arithmetic,
    pub support_cap: usize,
}

impl Default for SweepSettings {
    fn default() -> Self {
        Self {
            ps: vec![1.0, 2.0, f64::INFINITY],
            n_max: 60,
            threshold: 1e-6,
            arithmetic: Arithmetic::Float,
            support_cap: DEFAULT_SUPPORT_CAP,
        }
    }
}

/// Allowance for rounding when comparing a deviation to its two-stage bound.
pub const BOUND_SLACK: f64 = 1e-12;

/// The two terms bounding a pair deviation:
/// `||(A(w_n) - I_A) psi||_p + ||(B(u_m) - I_B) I_A psi||_p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundCheck {
    pub first_stage: f64,
    pub second_stage: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    /// Second exponent; `None` for single-action sweeps.
    pub tau_n: Option<usize>,
    pub support_size: usize,
    pub p: f64,
    /// `None` when the support cap was hit at this `n`.
    pub deviation: Option<f64>,
    pub bound: Option<BoundCheck>,
    pub elapsed: Duration,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// First `n` with deviation at most the threshold.
    Converged(usize),
    DidNotConverge(usize),
    SupportCapExceeded(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub outcomes: Vec<(f64, Outcome)>,
}

impl SweepReport {
    pub fn all_converged(&self) -> bool {
        self.outcomes.iter().all(|(_, o)| matches!(o, Outcome::Converged(_)))
    }

    /// Every checked bound held. Vacuously true for single actions and
    /// non-ergodic pairs, where no bound is checked.
    pub fn bound_holds(&self) -> bool {
        self.rows.iter().all(|r| r.bound.is_none_or(|b| b.holds))
    }
}

struct Tracker {
    threshold: f64,
    outcomes: Vec<(f64, Option<Outcome>)>,
}

impl Tracker {
    fn new(ps: &[f64], threshold: f64) -> Self {
        Self { threshold, outcomes: ps.iter().map(|&p| (p, None)).collect() }
    }

    fn record(&mut self, i: usize, n: usize, deviation: f64) {
        if self.outcomes[i].1.is_none() && deviation <= self.threshold {
            self.outcomes[i].1 = Some(Outcome::Converged(n));
        }
    }

    fn done(&self) -> bool {
        self.outcomes.iter().all(|(_, o)| o.is_some())
    }

    fn finish(self, fallback: Outcome) -> Vec<(f64, Outcome)> {
        self.outcomes.into_iter().map(|(p, o)| (p, o.unwrap_or(fallback))).collect()
    }
}

/// Deviations of `A(w^{*n}) B(u^{*tau(n)}) psi` from the invariant
/// conditional expectation, for `n = 1, 2, ...` until every `p` has
/// crossed the threshold or `n_max` is reached. For ergodic pairs each
/// row also carries the two-stage bound.
pub fn eccentric_sweep(
    pair: &CommutingPair,
    w: &FiniteSupportMeasure,
    u: &FiniteSupportMeasure,
    schedule: &EccentricitySchedule,
    psi: &[f64],
    settings: &SweepSettings,
) -> Result<SweepReport> {
    check_ps(&settings.ps)?;
    let space = pair.space();
    let part_a = pair.left().invariant_partition();
    let part_b = pair.right().invariant_partition();
    let joint = pair.joint_invariant_partition();
    let target = expectation_apply(space, &joint, psi)?;
    let ia_psi = expectation_apply(space, &part_a, psi)?;
    let ib_ia_psi = expectation_apply(space, &part_b, &ia_psi)?;
    let ergodic = joint.is_trivial();

    let mut wp = Power::new(w, settings.arithmetic);
    let mut up = Power::new(u, settings.arithmetic);
    let mut rows = Vec::new();
    let mut tracker = Tracker::new(&settings.ps, settings.threshold);
    for n in 1..=settings.n_max {
        let start = Instant::now();
        let tau = schedule.tau(n)?;
        let advanced = wp.advance_to(n, settings.support_cap).and_then(|_| up.advance_to(tau, settings.support_cap));
        if let Err(Error::SupportCapExceeded { size, .. }) = advanced {
            for &p in &settings.ps {
                rows.push(SweepRow {
                    n,
                    tau_n: Some(tau),
                    support_size: size,
                    p,
                    deviation: None,
                    bound: None,
                    elapsed: start.elapsed(),
                });
            }
            return Ok(SweepReport { rows, outcomes: tracker.finish(Outcome::SupportCapExceeded(n)) });
        }
        advanced?;
        let ma = markov_operator_float(pair.left(), &wp.float())?;
        let mb = markov_operator_float(pair.right(), &up.float())?;
        let pair_dev = sub(&ma.apply(&mb.apply(psi)), &target);
        let first = sub(&ma.apply(psi), &ia_psi);
        let second = sub(&mb.apply(&ia_psi), &ib_ia_psi);
        let support_size = wp.support_size() * up.support_size();
        let elapsed = start.elapsed();
        for (i, &p) in settings.ps.iter().enumerate() {
            let deviation = p_norm(space, &pair_dev, p)?;
            let bound = if ergodic {
                let (f, s) = (p_norm(space, &first, p)?, p_norm(space, &second, p)?);
                Some(BoundCheck { first_stage: f, second_stage: s, holds: deviation <= f + s + BOUND_SLACK })
            } else {
                None
            };
            tracker.record(i, n, deviation);
            rows.push(SweepRow { n, tau_n: Some(tau), support_size, p, deviation: Some(deviation), bound, elapsed });
        }
        if tracker.done() {
            break;
        }
    }
    Ok(SweepReport { rows, outcomes: tracker.finish(Outcome::DidNotConverge(settings.n_max)) })
}

/// Single-action sweep of `||(A(w^{*n}) - I_A) psi||_p`.
pub fn power_sweep(
    action: &PmpAction,
    w: &FiniteSupportMeasure,
    psi: &[f64],
    settings: &SweepSettings,
) -> Result<SweepReport> {
    check_ps(&settings.ps)?;
    let space = action.space();
    let target = expectation_apply(space, &action.invariant_partition(), psi)?;
    let mut power = Power::new(w, settings.arithmetic);
    let mut rows = Vec::new();
    let mut tracker = Tracker::new(&settings.ps, settings.threshold);
    for n in 1..=settings.n_max {
        let start = Instant::now();
        match power.advance_to(n, settings.support_cap) {
            Err(Error::SupportCapExceeded { size, .. }) => {
                for &p in &settings.ps {
                    rows.push(SweepRow {
                        n,
                        tau_n: None,
                        support_size: size,
                        p,
                        deviation: None,
                        bound: None,
                        elapsed: start.elapsed(),
                    });
                }
                return Ok(SweepReport { rows, outcomes: tracker.finish(Outcome::SupportCapExceeded(n)) });
            }
            other => other?,
        }
        let op = markov_operator_float(action, &power.float())?;
        let dev = sub(&op.apply(psi), &target);
        let elapsed = start.elapsed();
        for (i, &p) in settings.ps.iter().enumerate() {
            let deviation = p_norm(space, &dev, p)?;
            tracker.record(i, n, deviation);
            rows.push(SweepRow {
                n,
                tau_n: None,
                support_size: power.support_size(),
                p,
                deviation: Some(deviation),
                bound: None,
                elapsed,
            });
        }
        if tracker.done() {
            break;
        }
    }
    Ok(SweepReport { rows, outcomes: tracker.finish(Outcome::DidNotConverge(settings.n_max)) })
}
