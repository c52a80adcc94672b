use super::{Evaluator, PmpAction};
use crate::groups::{GroupElement, Letter, Word};

/// Outcome of a freeness check. A non-free action comes with a nontrivial
/// element and an atom it fixes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreenessReport {
    pub free: bool,
    pub witness: Option<(GroupElement, usize)>,
}

/// Every atom has positive weight, so an action is free exactly when no
/// nontrivial element fixes an atom. For infinite groups a free factor's
/// first generator `a1` has an image of finite order `m`, and `a1^m` fixes
/// everything.
pub fn is_free(action: &PmpAction) -> FreenessReport {
    let witness = match action.group().elements() {
        Some(elements) => elements.into_iter().filter(|g| !action.group().is_identity(g)).find_map(|g| {
            let img = action.image_unchecked(&g);
            (0..img.len()).find(|&x| img.apply(x) == x).map(|x| (g, x))
        }),
        None => Some((trivially_acting(action), 0)),
    };
    FreenessReport { free: witness.is_none(), witness }
}

/// A nontrivial element of an infinite group acting as the identity.
fn trivially_acting(action: &PmpAction) -> GroupElement {
    match &action.eval {
        Evaluator::Free(_) => {
            let m = action.generator_images()[0].order();
            GroupElement::Free(Word::letter(Letter::new(0, false)).power(m))
        }
        Evaluator::Product(l, r) => {
            if l.group().is_finite() {
                GroupElement::pair(l.group().identity(), trivially_acting(r))
            } else {
                GroupElement::pair(trivially_acting(l), r.group().identity())
            }
        }
        Evaluator::Finite(_) => unreachable!("finite groups are enumerated"),
    }
}
