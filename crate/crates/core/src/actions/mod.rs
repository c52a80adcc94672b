//! Probability-measure-preserving actions of the supported groups on finite
//! spaces, commuting pairs (actions of product groups), and constructors.

mod constructors;
mod freeness;
mod text;
mod validate;

use std::collections::VecDeque;

pub use constructors::{
    bernoulli_pair, bernoulli_pair_capped, diagonal, local_product, skew_product, trivial_action, Cocycle,
    DEFAULT_ATOM_CAP,
};
pub use freeness::{is_free, FreenessReport};
pub use text::{parse_action, parse_action_unchecked, parse_pair, parse_pair_unchecked, write_action, write_pair};
pub use validate::{ValidationReport, Violation};

use crate::groups::{Group, GroupDescriptor, GroupElement, GroupKind, Letter};
use crate::spaces::{Automorphism, Partition, Space};
use crate::{Error, Result};

/// An action of a finitely generated group on a finite probability space,
/// given by the images of the group's generators.
#[derive(Clone, Debug)]
pub struct PmpAction {
    group: Group,
    space: Space,
    generator_images: Vec<Automorphism>,
    eval: Evaluator,
}

#[derive(Clone, Debug)]
enum Evaluator {
    /// Image of every element, indexed by table index.
    Finite(Vec<Automorphism>),
    /// Inverses of the letter images.
    Free(Vec<Automorphism>),
    Product(Box<PmpAction>, Box<PmpAction>),
}

impl PmpAction {
    /// Builds and validates; any invariant violation is an error.
    pub fn new(group: &Group, space: &Space, generator_images: Vec<Automorphism>) -> Result<Self> {
        let action = Self::new_unchecked(group, space, generator_images)?;
        action.ensure_valid()?;
        Ok(action)
    }

    /// Builds without checking weight preservation, homomorphism or
    /// commutation; shapes are still checked. Use [`PmpAction::validate`]
    /// to list violations.
    pub fn new_unchecked(group: &Group, space: &Space, generator_images: Vec<Automorphism>) -> Result<Self> {
        let n = space.atom_count();
        if generator_images.len() != group.generators().len() {
            return Err(Error::InvalidAction(format!(
                "{} generator images for {} generators",
                generator_images.len(),
                group.generators().len()
            )));
        }
        if let Some(p) = generator_images.iter().find(|p| p.len() != n) {
            return Err(Error::SizeMismatch { left: n, right: p.len() });
        }
        let eval = match group.kind() {
            GroupKind::Finite(table) => {
                let gens: Vec<usize> = group
                    .generators()
                    .iter()
                    .map(|g| match g {
                        GroupElement::Finite(i) => *i,
                        _ => unreachable!(),
                    })
                    .collect();
                let mut images: Vec<Option<Automorphism>> = vec![None; table.order()];
                images[table.identity()] = Some(Automorphism::identity(n));
                let mut queue = VecDeque::from([table.identity()]);
                while let Some(g) = queue.pop_front() {
                    for (s, img_s) in gens.iter().zip(&generator_images) {
                        let sg = table.mul(*s, g);
                        if images[sg].is_none() {
                            images[sg] = Some(img_s.compose(images[g].as_ref().expect("visited")));
                            queue.push_back(sg);
                        }
                    }
                }
                Evaluator::Finite(images.into_iter().map(|i| i.expect("generators generate")).collect())
            }
            GroupKind::Free { .. } => Evaluator::Free(generator_images.iter().map(Automorphism::inverse).collect()),
            GroupKind::Product(l, r) => {
                let k = l.generators().len();
                let left = PmpAction::new_unchecked(l, space, generator_images[..k].to_vec())?;
                let right = PmpAction::new_unchecked(r, space, generator_images[k..].to_vec())?;
                Evaluator::Product(Box::new(left), Box::new(right))
            }
        };
        Ok(Self { group: group.clone(), space: space.clone(), generator_images, eval })
    }

    /// Finite groups only: images of all elements, indexed by table index.
    pub fn from_element_images(group: &Group, space: &Space, images: Vec<Automorphism>) -> Result<Self> {
        let GroupKind::Finite(table) = group.kind() else {
            return Err(Error::InvalidAction("element images are only accepted for finite groups".into()));
        };
        if images.len() != table.order() {
            return Err(Error::InvalidAction(format!(
                "{} images for a group of order {}",
                images.len(),
                table.order()
            )));
        }
        let generator_images = group
            .generators()
            .iter()
            .map(|g| match g {
                GroupElement::Finite(i) => images[*i].clone(),
                _ => unreachable!(),
            })
            .collect();
        let action =
            Self { group: group.clone(), space: space.clone(), generator_images, eval: Evaluator::Finite(images) };
        if let Some(p) = action.element_images_finite().iter().find(|p| p.len() != space.atom_count()) {
            return Err(Error::SizeMismatch { left: space.atom_count(), right: p.len() });
        }
        action.ensure_valid()?;
        Ok(action)
    }

    fn element_images_finite(&self) -> &[Automorphism] {
        match &self.eval {
            Evaluator::Finite(images) => images,
            _ => &[],
        }
    }

    pub(crate) fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidAction(report.to_string()))
        }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn atom_count(&self) -> usize {
        self.space.atom_count()
    }

    pub fn generator_images(&self) -> &[Automorphism] {
        &self.generator_images
    }

    /// Factor sub-actions of a product-group action.
    pub fn components(&self) -> Option<(&PmpAction, &PmpAction)> {
        match &self.eval {
            Evaluator::Product(l, r) => Some((l, r)),
            _ => None,
        }
    }

    pub fn act(&self, g: &GroupElement, x: usize) -> Result<usize> {
        if !self.group.contains(g) {
            return Err(Error::DescriptorMismatch);
        }
        Ok(self.act_unchecked(g, x))
    }

    /// Word `l_1 ... l_k` acts as `A^{l_1} ∘ ... ∘ A^{l_k}`.
    pub(crate) fn act_unchecked(&self, g: &GroupElement, x: usize) -> usize {
        match (&self.eval, g) {
            (Evaluator::Finite(images), GroupElement::Finite(i)) => images[*i].apply(x),
            (Evaluator::Free(inverses), GroupElement::Free(w)) => {
                w.letters().iter().rev().fold(x, |y, l| self.letter_image(inverses, *l).apply(y))
            }
            (Evaluator::Product(l, r), GroupElement::Pair(a, b)) => l.act_unchecked(a, r.act_unchecked(b, x)),
            _ => unreachable!("element kind checked by contains"),
        }
    }

    fn letter_image<'a>(&'a self, inverses: &'a [Automorphism], l: Letter) -> &'a Automorphism {
        if l.inverse {
            &inverses[l.index]
        } else {
            &self.generator_images[l.index]
        }
    }

    /// The permutation `A^g`.
    pub fn element_image(&self, g: &GroupElement) -> Result<Automorphism> {
        if !self.group.contains(g) {
            return Err(Error::DescriptorMismatch);
        }
        Ok(self.image_unchecked(g))
    }

    pub(crate) fn image_unchecked(&self, g: &GroupElement) -> Automorphism {
        match (&self.eval, g) {
            (Evaluator::Finite(images), GroupElement::Finite(i)) => images[*i].clone(),
            (Evaluator::Free(inverses), GroupElement::Free(w)) => w
                .letters()
                .iter()
                .fold(Automorphism::identity(self.atom_count()), |acc, l| acc.compose(self.letter_image(inverses, *l))),
            (Evaluator::Product(l, r), GroupElement::Pair(a, b)) => l.image_unchecked(a).compose(&r.image_unchecked(b)),
            _ => unreachable!("element kind checked by contains"),
        }
    }

    /// The sigma-algebra of invariant sets, as the orbit partition.
    pub fn invariant_partition(&self) -> Partition {
        Partition::orbits(self.atom_count(), &self.generator_images).expect("images match the space")
    }

    pub fn is_ergodic(&self) -> bool {
        self.invariant_partition().is_trivial()
    }

    pub fn validate(&self) -> ValidationReport {
        validate::validate_action(self)
    }

    /// Conjugate by a relabeling `s`: the result acts on the transported
    /// space by `s ∘ A^g ∘ s^-1`.
    pub fn relabel(&self, s: &Automorphism, space: &Space) -> Result<Self> {
        let inv = s.inverse();
        let images = self.generator_images.iter().map(|t| s.compose(t).compose(&inv)).collect();
        Self::new(&self.group, space, images)
    }
}

/// Two actions of `G` and `H` on one space whose generator images commute,
/// i.e. an action of `G x H`.
#[derive(Clone, Debug)]
pub struct CommutingPair {
    left: PmpAction,
    right: PmpAction,
}

impl CommutingPair {
    pub fn new(left: PmpAction, right: PmpAction) -> Result<Self> {
        let pair = Self::new_unchecked(left, right)?;
        let report = pair.validate();
        if !report.is_valid() {
            return Err(Error::InvalidAction(report.to_string()));
        }
        Ok(pair)
    }

    pub fn new_unchecked(left: PmpAction, right: PmpAction) -> Result<Self> {
        if left.space != right.space {
            return Err(Error::SizeMismatch { left: left.atom_count(), right: right.atom_count() });
        }
        Ok(Self { left, right })
    }

    pub fn left(&self) -> &PmpAction {
        &self.left
    }

    pub fn right(&self) -> &PmpAction {
        &self.right
    }

    pub fn space(&self) -> &Space {
        &self.left.space
    }

    pub fn atom_count(&self) -> usize {
        self.left.atom_count()
    }

    pub fn swapped(&self) -> CommutingPair {
        CommutingPair { left: self.right.clone(), right: self.left.clone() }
    }

    /// The same data as one action of the product group.
    pub fn to_product_action(&self) -> PmpAction {
        let group = GroupDescriptor::product(&self.left.group, &self.right.group);
        let generator_images = self.left.generator_images.iter().chain(&self.right.generator_images).cloned().collect();
        PmpAction {
            group,
            space: self.left.space.clone(),
            generator_images,
            eval: Evaluator::Product(Box::new(self.left.clone()), Box::new(self.right.clone())),
        }
    }

    /// Orbit partition of all generators of both actions.
    pub fn joint_invariant_partition(&self) -> Partition {
        Partition::orbits(self.atom_count(), self.left.generator_images.iter().chain(&self.right.generator_images))
            .expect("images match the space")
    }

    pub fn is_ergodic(&self) -> bool {
        self.joint_invariant_partition().is_trivial()
    }

    pub fn validate(&self) -> ValidationReport {
        validate::validate_pair(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::FiniteProbabilitySpace;

    pub(crate) fn rotation(n: usize) -> PmpAction {
        let z = GroupDescriptor::free(1).unwrap();
        let x = FiniteProbabilitySpace::uniform(n).unwrap();
        PmpAction::new(&z, &x, vec![Automorphism::new((0..n).map(|i| (i + 1) % n).collect()).unwrap()]).unwrap()
    }

    #[test]
    fn act_examples() {
        let a = rotation(3);
        let g = a.group().clone();
        for x in 0..3 {
            assert_eq!(a.act(&g.identity(), x).unwrap(), x);
        }
        assert_eq!(a.act(&g.parse_element("a1 a1").unwrap(), 0).unwrap(), 2);
        assert_eq!(a.act(&g.parse_element("a1'").unwrap(), 0).unwrap(), 2);
        assert_eq!(a.act(&GroupElement::Finite(0), 0), Err(Error::DescriptorMismatch));
    }

    #[test]
    fn words_compose_right_to_left() {
        let f = GroupDescriptor::free(2).unwrap();
        let x = FiniteProbabilitySpace::uniform(3).unwrap();
        let s = Automorphism::from_cycles(3, &[vec![0, 1]]).unwrap();
        let t = Automorphism::from_cycles(3, &[vec![1, 2]]).unwrap();
        let a = PmpAction::new(&f, &x, vec![s.clone(), t.clone()]).unwrap();
        let ab = f.parse_element("a1 a2").unwrap();
        // (a1 a2) x = a1(a2(x))
        assert_eq!(a.act(&ab, 1).unwrap(), s.apply(t.apply(1)));
        assert_eq!(a.element_image(&ab).unwrap(), s.compose(&t));
    }

    #[test]
    fn finite_action_rejects_non_homomorphism() {
        let z2 = GroupDescriptor::cyclic(2).unwrap();
        let x = FiniteProbabilitySpace::uniform(3).unwrap();
        // a 3-cycle cannot be the image of an element of order 2
        let c = Automorphism::from_cycles(3, &[vec![0, 1, 2]]).unwrap();
        assert!(PmpAction::new(&z2, &x, vec![c]).is_err());
        let f = Automorphism::from_cycles(3, &[vec![0, 2]]).unwrap();
        assert!(PmpAction::new(&z2, &x, vec![f]).is_ok());
    }

    #[test]
    fn invariant_partition_examples() {
        let z = GroupDescriptor::free(1).unwrap();
        let x = FiniteProbabilitySpace::uniform(3).unwrap();
        assert!(trivial_action(&z, &x).invariant_partition().is_discrete());
        assert!(rotation(3).invariant_partition().is_trivial());
        let swap = PmpAction::new(&z, &x, vec![Automorphism::from_cycles(3, &[vec![0, 1]]).unwrap()]).unwrap();
        assert_eq!(swap.invariant_partition(), Partition::from_labels(&[0, 0, 1]));
    }

    #[test]
    fn ergodicity_examples() {
        assert!(rotation(5).is_ergodic());
        let z = GroupDescriptor::free(1).unwrap();
        let x = FiniteProbabilitySpace::uniform(2).unwrap();
        assert!(!trivial_action(&z, &x).is_ergodic());
    }

    #[test]
    fn product_action_acts_componentwise() {
        let a = rotation(2);
        let b = rotation(3);
        let pair = local_product(&a, &b);
        let pa = pair.to_product_action();
        let g = pa.group().clone();
        let e = g.parse_element("(a1|a1 a1)").unwrap();
        // (x, y) = (1, 0) at index 3 goes to (0, 2) at index 2
        assert_eq!(pa.act(&e, 3).unwrap(), 2);
        assert!(pa.validate().is_valid());
    }
}
