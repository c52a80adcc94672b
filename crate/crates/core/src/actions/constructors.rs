use super::{CommutingPair, Evaluator, PmpAction, Violation};
use crate::groups::{Group, GroupElement, GroupKind};
use crate::rational::{one, Rational};
use crate::spaces::{Automorphism, FiniteProbabilitySpace, Space};
use crate::{Error, Result};

/// Largest configuration space `bernoulli_pair` will enumerate.
pub const DEFAULT_ATOM_CAP: usize = 1_000_000;

/// Every generator acts as the identity.
pub fn trivial_action(group: &Group, space: &Space) -> PmpAction {
    let images = vec![Automorphism::identity(space.atom_count()); group.generators().len()];
    PmpAction::new_unchecked(group, space, images).expect("shapes match")
}

fn pair_index(x: usize, y: usize, ny: usize) -> usize {
    x * ny + y
}

/// `(x, y) -> (A^g x, B^g y)` on `X x Y`.
pub fn diagonal(a: &PmpAction, b: &PmpAction) -> Result<PmpAction> {
    if a.group() != b.group() {
        return Err(Error::GroupMismatch);
    }
    let (nx, ny) = (a.atom_count(), b.atom_count());
    let images = a
        .generator_images()
        .iter()
        .zip(b.generator_images())
        .map(|(s, t)| {
            let mut img = vec![0; nx * ny];
            for x in 0..nx {
                for y in 0..ny {
                    img[pair_index(x, y, ny)] = pair_index(s.apply(x), t.apply(y), ny);
                }
            }
            Automorphism::new_unchecked(img)
        })
        .collect();
    PmpAction::new(a.group(), &a.space().product(b.space()), images)
}

/// `G` moves the first coordinate of `X x Y`, `H` the second.
pub fn local_product(a: &PmpAction, b: &PmpAction) -> CommutingPair {
    let (nx, ny) = (a.atom_count(), b.atom_count());
    let space = a.space().product(b.space());
    let lift = |t: &Automorphism, first: bool| {
        let mut img = vec![0; nx * ny];
        for x in 0..nx {
            for y in 0..ny {
                img[pair_index(x, y, ny)] =
                    if first { pair_index(t.apply(x), y, ny) } else { pair_index(x, t.apply(y), ny) };
            }
        }
        Automorphism::new_unchecked(img)
    };
    let left = a.generator_images().iter().map(|t| lift(t, true)).collect();
    let right = b.generator_images().iter().map(|t| lift(t, false)).collect();
    let left = PmpAction::new(a.group(), &space, left).expect("lift of an action is an action");
    let right = PmpAction::new(b.group(), &space, right).expect("lift of an action is an action");
    CommutingPair::new(left, right).expect("coordinates commute")
}

/// Left and right shifts on `base^G` together with the flip `J`, where
/// `(L^h xi)(g) = xi(h^-1 g)`, `(R^h xi)(g) = xi(g h)`, `(J xi)(g) = xi(g^-1)`.
///
/// Configuration `xi` sits at index `sum_g xi(g) b^(m-1-g)`, so its label
/// reads `xi(0) xi(1) ...` from left to right.
pub fn bernoulli_pair(group: &Group, base: &Space) -> Result<(CommutingPair, Automorphism)> {
    bernoulli_pair_capped(group, base, DEFAULT_ATOM_CAP)
}

pub fn bernoulli_pair_capped(group: &Group, base: &Space, cap: usize) -> Result<(CommutingPair, Automorphism)> {
    let GroupKind::Finite(table) = group.kind() else {
        return Err(Error::InvalidGroup("Bernoulli shifts need a finite group".into()));
    };
    let m = table.order();
    let b = base.atom_count();
    let atoms = (0..m).try_fold(1usize, |acc, _| acc.checked_mul(b).filter(|&n| n <= cap));
    let Some(atoms) = atoms else {
        return Err(Error::SizeCapExceeded { atoms: b.checked_pow(m as u32).unwrap_or(usize::MAX), cap });
    };

    let decode = |mut idx: usize| {
        let mut digits = vec![0; m];
        for g in (0..m).rev() {
            digits[g] = idx % b;
            idx /= b;
        }
        digits
    };
    let encode = |digits: &[usize]| digits.iter().fold(0, |acc, d| acc * b + d);
    let configs: Vec<Vec<usize>> = (0..atoms).map(decode).collect();
    let transform = |f: &dyn Fn(usize) -> usize| {
        let img = configs.iter().map(|xi| encode(&(0..m).map(|g| xi[f(g)]).collect::<Vec<_>>())).collect();
        Automorphism::new_unchecked(img)
    };

    let weights: Vec<Rational> =
        configs.iter().map(|xi| xi.iter().fold(one(), |acc, &d| acc * base.weight(d))).collect();
    let base_labels: Vec<String> = (0..b).map(|d| base.label(d)).collect();
    let sep = if base_labels.iter().all(|l| l.chars().count() == 1) { "" } else { "," };
    let labels =
        configs.iter().map(|xi| xi.iter().map(|&d| base_labels[d].as_str()).collect::<Vec<_>>().join(sep)).collect();
    let space = FiniteProbabilitySpace::with_labels(weights, labels)?;

    let left: Vec<Automorphism> = (0..m).map(|h| transform(&|g| table.mul(table.inv(h), g))).collect();
    let right: Vec<Automorphism> = (0..m).map(|h| transform(&|g| table.mul(g, h))).collect();
    let j = transform(&|g| table.inv(g));

    if !j.compose(&j).is_identity() {
        return Err(Error::InvalidAction("J is not an involution".into()));
    }
    if let Some(g) = (0..m).find(|&g| left[g] != j.compose(&right[g]).compose(&j)) {
        return Err(Error::InvalidAction(format!("L^{g} differs from J R^{g} J")));
    }
    let l = PmpAction::from_images_unchecked(group, &space, left);
    let r = PmpAction::from_images_unchecked(group, &space, right);
    Ok((CommutingPair::new(l, r)?, j))
}

impl PmpAction {
    pub(crate) fn from_images_unchecked(group: &Group, space: &Space, images: Vec<Automorphism>) -> PmpAction {
        let generator_images = group
            .generators()
            .iter()
            .map(|g| match g {
                GroupElement::Finite(i) => images[*i].clone(),
                _ => unreachable!("finite group"),
            })
            .collect();
        PmpAction { group: group.clone(), space: space.clone(), generator_images, eval: Evaluator::Finite(images) }
    }
}

/// A map `(generator, base atom) -> fiber automorphism`, extended to the
/// whole group by `alpha(gh, x) = alpha(g, hx) alpha(h, x)`.
#[derive(Clone, Debug)]
pub struct Cocycle {
    base: PmpAction,
    fiber: Space,
    values: Vec<Vec<Automorphism>>,
}

impl Cocycle {
    /// `values[s][x]` is `alpha(s, x)` for the `s`-th generator.
    pub fn new(base: &PmpAction, fiber: &Space, values: Vec<Vec<Automorphism>>) -> Result<Self> {
        if values.len() != base.generator_images().len() {
            return Err(Error::InvalidAction(format!(
                "cocycle has {} generator rows, group has {} generators",
                values.len(),
                base.generator_images().len()
            )));
        }
        for row in &values {
            if row.len() != base.atom_count() {
                return Err(Error::SizeMismatch { left: base.atom_count(), right: row.len() });
            }
            for t in row {
                if t.len() != fiber.atom_count() {
                    return Err(Error::SizeMismatch { left: fiber.atom_count(), right: t.len() });
                }
                if let Err(atom) = fiber.check_preserved(t) {
                    return Err(Error::InvalidAction(format!("cocycle value moves fiber atom {atom} across weights")));
                }
            }
        }
        Ok(Self { base: base.clone(), fiber: fiber.clone(), values })
    }

    pub fn identity(base: &PmpAction, fiber: &Space) -> Self {
        let row = vec![Automorphism::identity(fiber.atom_count()); base.atom_count()];
        Self { base: base.clone(), fiber: fiber.clone(), values: vec![row; base.generator_images().len()] }
    }

    /// `alpha(g, x) = phi^g`, independent of `x`.
    pub fn constant(base: &PmpAction, phi: &PmpAction) -> Result<Self> {
        if base.group() != phi.group() {
            return Err(Error::GroupMismatch);
        }
        let values = phi.generator_images().iter().map(|t| vec![t.clone(); base.atom_count()]).collect();
        Ok(Self { base: base.clone(), fiber: phi.space().clone(), values })
    }

    pub fn base(&self) -> &PmpAction {
        &self.base
    }

    pub fn fiber(&self) -> &Space {
        &self.fiber
    }

    pub fn value(&self, generator: usize, x: usize) -> &Automorphism {
        &self.values[generator][x]
    }

    fn skew_images(&self) -> Vec<Automorphism> {
        let nz = self.fiber.atom_count();
        self.base
            .generator_images()
            .iter()
            .zip(&self.values)
            .map(|(s, row)| {
                let mut img = vec![0; self.base.atom_count() * nz];
                for (x, alpha) in row.iter().enumerate() {
                    for z in 0..nz {
                        img[pair_index(x, z, nz)] = pair_index(s.apply(x), alpha.apply(z), nz);
                    }
                }
                Automorphism::new_unchecked(img)
            })
            .collect()
    }

    fn skew_unchecked(&self) -> PmpAction {
        let space = self.base.space().product(&self.fiber);
        PmpAction::new_unchecked(self.base.group(), &space, self.skew_images()).expect("shapes match")
    }

    /// `alpha(g, x)` for any group element.
    pub fn evaluate(&self, g: &GroupElement, x: usize) -> Result<Automorphism> {
        let skew = self.skew_unchecked();
        let img = skew.element_image(g)?;
        let nz = self.fiber.atom_count();
        Ok(Automorphism::new_unchecked((0..nz).map(|z| img.apply(pair_index(x, z, nz)) % nz).collect()))
    }
}

/// `g` acts on `Y x Z` by `(x, z) -> (B^g x, alpha(g, x) z)`.
pub fn skew_product(cocycle: &Cocycle) -> Result<PmpAction> {
    let skew = cocycle.skew_unchecked();
    let nz = cocycle.fiber.atom_count();
    match skew.validate().violations.into_iter().next() {
        None => Ok(skew),
        Some(Violation::NotHomomorphism { g, h, atom }) => {
            Err(Error::CocycleEquationViolated { g, h, atom: atom / nz })
        }
        Some(Violation::NotCommuting { left, right, atom }) => {
            Err(Error::CocycleEquationViolated { g: left, h: right, atom: atom / nz })
        }
        Some(v @ Violation::WeightNotPreserved { .. }) => Err(Error::InvalidAction(v.to_string())),
    }
}
