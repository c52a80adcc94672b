//! Averaging operators of measures on groups, conditional expectations,
//! p-norms and convergence sweeps.

mod convergence;
mod identities;
mod matrix;
mod schedule;

pub use convergence::{
    eccentric_sweep, ergodic_deviation, onside_deviation, power_deviations, power_sweep, Arithmetic, BoundCheck,
    Outcome, SweepReport, SweepRow, SweepSettings,
};
pub use identities::{check_cube_expectations, check_prodd};
pub use matrix::{MarkovMatrix, Scalar, DENSE_LIMIT};
pub use schedule::{eccentric_measures, EccentricitySchedule};

use crate::actions::{CommutingPair, PmpAction};
use crate::groups::{FiniteSupportMeasure, FloatMeasure, GroupDescriptor, GroupElement};
use crate::rational::Rational;
use crate::spaces::{FiniteProbabilitySpace, Partition, Space};
use crate::{Error, Result};

/// A function on the atoms of a space.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable<T = f64> {
    space: Space,
    values: Vec<T>,
}

impl<T: Scalar> Observable<T> {
    pub fn new(space: &Space, values: Vec<T>) -> Result<Self> {
        if values.len() != space.atom_count() {
            return Err(Error::SizeMismatch { left: space.atom_count(), right: values.len() });
        }
        Ok(Self { space: space.clone(), values })
    }

    pub fn constant(space: &Space, c: T) -> Self {
        Self { space: space.clone(), values: vec![c; space.atom_count()] }
    }

    pub fn indicator(space: &Space, set: &[bool]) -> Result<Self> {
        Self::new(space, set.iter().map(|&b| if b { T::one() } else { T::zero() }).collect())
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }
}

/// `sum_x mu(x) psi(x)`.
pub fn integrate<T: Scalar>(space: &FiniteProbabilitySpace, psi: &[T]) -> T {
    space.weights().iter().zip(psi).fold(T::zero(), |acc, (w, v)| acc + T::from_rational(w) * v.clone())
}

/// `(sum_x mu(x) |psi(x)|^p)^(1/p)`, and `max |psi(x)|` for `p = inf`.
pub fn p_norm<T: Scalar>(space: &FiniteProbabilitySpace, psi: &[T], p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::BadExponent(p));
    }
    let abs = psi.iter().map(|v| v.to_f64().abs());
    if p.is_infinite() {
        return Ok(abs.fold(0.0, f64::max));
    }
    let sum: f64 = space.float_weights().iter().zip(abs).map(|(w, a)| w * a.powf(p)).sum();
    Ok(sum.powf(1.0 / p))
}

/// Matrix of the conditional expectation onto the blocks of `p`:
/// `E[x][y] = mu(y) / mu(block(x))` for `y` in the block of `x`.
pub fn conditional_expectation<T: Scalar>(space: &FiniteProbabilitySpace, p: &Partition) -> Result<MarkovMatrix<T>> {
    let masses = space.block_measures(p)?;
    let blocks = p.blocks();
    let rows = (0..space.atom_count())
        .map(|x| {
            let b = p.block_of(x);
            blocks[b].iter().map(|&y| (y, T::from_rational(&(space.weight(y) / &masses[b])))).collect()
        })
        .collect();
    Ok(MarkovMatrix::from_entries(space.atom_count(), rows))
}

/// Block averages of `psi` without materializing the matrix.
pub fn expectation_apply<T: Scalar>(space: &FiniteProbabilitySpace, p: &Partition, psi: &[T]) -> Result<Vec<T>> {
    if p.len() != space.atom_count() || psi.len() != space.atom_count() {
        return Err(Error::SizeMismatch { left: space.atom_count(), right: p.len().min(psi.len()) });
    }
    let mut num = vec![T::zero(); p.block_count()];
    let mut den = vec![T::zero(); p.block_count()];
    for (x, v) in psi.iter().enumerate() {
        let w = T::from_rational(space.weight(x));
        let b = p.block_of(x);
        num[b] = num[b].clone() + w.clone() * v.clone();
        den[b] = den[b].clone() + w;
    }
    Ok((0..space.atom_count()).map(|x| num[p.block_of(x)].clone() / den[p.block_of(x)].clone()).collect())
}

/// Rank-one matrix of `psi -> (integral of psi) 1`.
pub fn integration_matrix<T: Scalar>(space: &FiniteProbabilitySpace) -> MarkovMatrix<T> {
    conditional_expectation(space, &Partition::trivial(space.atom_count())).expect("trivial partition fits")
}

fn same_group(a: &GroupDescriptor, b: &GroupDescriptor) -> bool {
    a == b
}

fn build<'a, T: Scalar + 'a>(
    action: &PmpAction,
    entries: impl Iterator<Item = (&'a GroupElement, T)>,
) -> MarkovMatrix<T> {
    let n = action.atom_count();
    let mut rows: Vec<Vec<(usize, T)>> = vec![Vec::new(); n];
    for (g, w) in entries {
        let img = action.image_unchecked(g);
        for (x, row) in rows.iter_mut().enumerate() {
            row.push((img.apply(x), w.clone()));
        }
    }
    MarkovMatrix::from_entries(n, rows)
}

/// `M[x][y] = sum { w(g) : A^g x = y }`, so that
/// `(M psi)(x) = sum_g w(g) psi(A^g x)`. Exact.
pub fn markov_operator(action: &PmpAction, w: &FiniteSupportMeasure) -> Result<MarkovMatrix<Rational>> {
    if !same_group(action.group(), w.group()) {
        return Err(Error::DescriptorMismatch);
    }
    Ok(build(action, w.iter().map(|(g, v)| (g, v.clone()))))
}

/// Floating-point [`markov_operator`].
pub fn markov_operator_float(action: &PmpAction, w: &FloatMeasure) -> Result<MarkovMatrix<f64>> {
    if !same_group(action.group(), w.group()) {
        return Err(Error::DescriptorMismatch);
    }
    Ok(build(action, w.iter()))
}

/// `M[x][y] = sum { m(g, h) : B^h A^g x = y }` for a measure on `G x H`.
pub fn pair_markov(pair: &CommutingPair, m: &FiniteSupportMeasure) -> Result<MarkovMatrix<Rational>> {
    let product = GroupDescriptor::product(pair.left().group(), pair.right().group());
    if !same_group(&product, m.group()) {
        return Err(Error::DescriptorMismatch);
    }
    let n = pair.atom_count();
    let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); n];
    for (gh, w) in m.iter() {
        let (g, h) = gh.as_pair().expect("product element");
        let a = pair.left().image_unchecked(g);
        let b = pair.right().image_unchecked(h);
        for (x, row) in rows.iter_mut().enumerate() {
            row.push((b.apply(a.apply(x)), w.clone()));
        }
    }
    Ok(MarkovMatrix::from_entries(n, rows))
}
