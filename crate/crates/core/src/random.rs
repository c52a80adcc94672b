//! Seeded random instances: measures, spaces, actions and commuting pairs.
//!
//! Every generator draws only from [`InstanceRng`], so an instance is a
//! pure function of the seed.

use num_integer::Integer;

use crate::actions::{local_product, CommutingPair, PmpAction};
use crate::groups::{FiniteSupportMeasure, Group, GroupDescriptor, GroupElement, GroupKind, Letter, Word};
use crate::rational::{ratio, Rational};
use crate::rng::InstanceRng;
use crate::spaces::{Automorphism, FiniteProbabilitySpace, Partition, Space};

/// `n` positive weights with numerators in `1..=max_numerator`, normalized.
pub fn random_weights(rng: &mut InstanceRng, n: usize, max_numerator: usize) -> Vec<Rational> {
    let raw: Vec<usize> = (0..n).map(|_| rng.range(1, max_numerator)).collect();
    let total: usize = raw.iter().sum();
    raw.into_iter().map(|k| ratio(k as i64, total as i64)).collect()
}

pub fn random_space(rng: &mut InstanceRng, n: usize) -> Space {
    FiniteProbabilitySpace::new(random_weights(rng, n, 4)).expect("weights are normalized")
}

pub fn random_relabeling(rng: &mut InstanceRng, n: usize) -> Automorphism {
    let mut images: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut images);
    Automorphism::new_unchecked(images)
}

/// Shuffles atoms within each class of equal weight, so the result
/// preserves the measure by construction.
pub fn random_weight_preserving(rng: &mut InstanceRng, space: &Space) -> Automorphism {
    let classes = Partition::from_labels(space.weights());
    let mut images = vec![0; space.atom_count()];
    for block in classes.blocks() {
        let mut shuffled = block.clone();
        rng.shuffle(&mut shuffled);
        for (x, y) in block.into_iter().zip(shuffled) {
            images[x] = y;
        }
    }
    Automorphism::new_unchecked(images)
}

/// Reduced word of length at most `max_len`, built letter by letter
/// without cancellation.
pub fn random_word(rng: &mut InstanceRng, rank: usize, max_len: usize) -> Word {
    let len = rng.range(0, max_len);
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let l = Letter::new(rng.below(rank), rng.coin());
        if letters.last() != Some(&l.inv()) {
            letters.push(l);
        }
    }
    Word::reduce(&letters, rank).expect("letters in range")
}

pub fn random_element(rng: &mut InstanceRng, group: &Group, max_len: usize) -> GroupElement {
    match group.kind() {
        GroupKind::Finite(t) => GroupElement::Finite(rng.below(t.order())),
        GroupKind::Free { rank } => GroupElement::Free(random_word(rng, *rank, max_len)),
        GroupKind::Product(l, r) => {
            let a = random_element(rng, l, max_len);
            GroupElement::pair(a, random_element(rng, r, max_len))
        }
    }
}

/// Measure with up to `support` distinct atoms of word length at most
/// `max_len` and random rational weights.
pub fn random_measure(rng: &mut InstanceRng, group: &Group, support: usize, max_len: usize) -> FiniteSupportMeasure {
    let mut elements: Vec<GroupElement> = Vec::new();
    for _ in 0..support {
        let g = random_element(rng, group, max_len);
        if !elements.contains(&g) {
            elements.push(g);
        }
    }
    let weights = random_weights(rng, elements.len(), 5);
    FiniteSupportMeasure::new(group, elements.into_iter().zip(weights)).expect("valid measure")
}

/// Uniform measure on `{e} ∪ S ∪ S^-1`: symmetric, charges the identity,
/// and absolutely generating whenever `S` generates.
pub fn lazy_generating_measure(group: &Group, gens: &[GroupElement]) -> FiniteSupportMeasure {
    let mut support = vec![group.identity()];
    for s in gens {
        for g in [s.clone(), group.inverse(s)] {
            if !support.contains(&g) {
                support.push(g);
            }
        }
    }
    FiniteSupportMeasure::uniform(group, &support).expect("nonempty support")
}

/// Small finite groups used for generated instances: cyclic groups,
/// Klein four, dihedral, symmetric and a few products.
pub fn finite_catalog(max_order: usize) -> Vec<Group> {
    let exprs = [
        "cyclic(2)",
        "cyclic(3)",
        "cyclic(4)",
        "cyclic(5)",
        "cyclic(6)",
        "cyclic(7)",
        "cyclic(8)",
        "product(cyclic(2), cyclic(2))",
        "symmetric(3)",
        "dihedral(4)",
        "dihedral(5)",
        "product(cyclic(2), cyclic(4))",
        "product(cyclic(3), cyclic(3))",
        "dihedral(6)",
        "product(cyclic(2), symmetric(3))",
        "product(cyclic(2), product(cyclic(2), cyclic(2)))",
        "product(cyclic(3), cyclic(4))",
        "symmetric(4)",
        "product(cyclic(2), dihedral(6))",
        "product(cyclic(2), symmetric(4))",
    ];
    exprs
        .iter()
        .map(|e| GroupDescriptor::parse_expr(e).expect("catalog expressions parse"))
        .filter(|g| g.order().is_some_and(|o| o <= max_order))
        .collect()
}

fn elements(group: &Group) -> Vec<GroupElement> {
    group.elements().expect("finite group")
}

fn index_of(elements: &[GroupElement], g: &GroupElement) -> usize {
    elements.binary_search(g).expect("element of the group")
}

/// Left translation `x -> g x` on the uniform space of a finite group.
pub fn regular_action(group: &Group) -> PmpAction {
    translation_action(group, true)
}

/// Right translation `x -> x g^-1`, a left action commuting with
/// [`regular_action`].
pub fn right_regular_action(group: &Group) -> PmpAction {
    translation_action(group, false)
}

fn translation_action(group: &Group, left: bool) -> PmpAction {
    let els = elements(group);
    let space = FiniteProbabilitySpace::uniform(els.len()).expect("nonempty group");
    let images = group
        .generators()
        .iter()
        .map(|g| {
            let gi = group.inverse(g);
            Automorphism::new_unchecked(
                els.iter()
                    .map(|x| {
                        let y = if left { group.multiply(g, x) } else { group.multiply(x, &gi) };
                        index_of(&els, &y.expect("same group"))
                    })
                    .collect(),
            )
        })
        .collect();
    PmpAction::new(group, &space, images).expect("translations form an action")
}

/// `G` acting on the left cosets of the subgroup generated by `subgroup`.
pub fn coset_action(group: &Group, subgroup: &[GroupElement]) -> PmpAction {
    let els = elements(group);
    let mut k = vec![group.identity()];
    let mut i = 0;
    while i < k.len() {
        for s in subgroup {
            let y = group.multiply(&k[i], s).expect("same group");
            if !k.contains(&y) {
                k.push(y);
            }
        }
        i += 1;
    }
    let rep = |x: &GroupElement| k.iter().map(|h| group.multiply(x, h).expect("same group")).min().expect("nonempty");
    let mut reps: Vec<GroupElement> = els.iter().map(rep).collect();
    reps.sort();
    reps.dedup();
    let space = FiniteProbabilitySpace::uniform(reps.len()).expect("nonempty");
    let images = group
        .generators()
        .iter()
        .map(|g| {
            Automorphism::new_unchecked(
                reps.iter().map(|r| index_of(&reps, &rep(&group.multiply(g, r).expect("same group")))).collect(),
            )
        })
        .collect();
    PmpAction::new(group, &space, images).expect("coset translations form an action")
}

fn relabeled(rng: &mut InstanceRng, action: &PmpAction) -> PmpAction {
    let s = random_relabeling(rng, action.atom_count());
    action.relabel(&s, action.space()).expect("uniform spaces are relabeling invariant")
}

/// Uniformly weighted transitive action on exactly `n` atoms: a free group
/// with a random `n`-cycle among its generators, a cyclic group by
/// translation, or a catalog group on cosets of a cyclic subgroup.
pub fn random_transitive_action(rng: &mut InstanceRng, n: usize) -> PmpAction {
    let mut finite: Vec<(Group, GroupElement)> = Vec::new();
    for g in finite_catalog(48) {
        for k in elements(&g) {
            if coset_index(&g, &k) == n {
                finite.push((g.clone(), k));
            }
        }
    }
    let choice = rng.below(3);
    let action = if choice == 2 && !finite.is_empty() {
        let (g, k) = rng.choose(&finite).clone();
        coset_action(&g, &[k])
    } else if choice == 1 {
        regular_action(&GroupDescriptor::cyclic(n).expect("n >= 1"))
    } else {
        let rank = rng.range(1, 2);
        let space = FiniteProbabilitySpace::uniform(n).expect("n >= 1");
        let mut order: Vec<usize> = (0..n).collect();
        rng.shuffle(&mut order);
        let mut cycle = vec![0; n];
        for i in 0..n {
            cycle[order[i]] = order[(i + 1) % n];
        }
        let mut images = vec![Automorphism::new_unchecked(cycle)];
        for _ in 1..rank {
            images.push(random_relabeling(rng, n));
        }
        let lead = rng.below(rank);
        images.swap(0, lead);
        return PmpAction::new(&GroupDescriptor::free(rank).expect("rank >= 1"), &space, images).expect("valid");
    };
    relabeled(rng, &action)
}

fn coset_index(group: &Group, k: &GroupElement) -> usize {
    let order = group.order().expect("finite");
    let mut power = k.clone();
    let mut m = 1;
    while !group.is_identity(&power) {
        power = group.multiply(&power, k).expect("same group");
        m += 1;
    }
    order / m
}

/// Measure-preserving action of a random free group on `space`, not
/// necessarily ergodic.
pub fn random_action(rng: &mut InstanceRng, space: &Space) -> PmpAction {
    let rank = rng.range(1, 2);
    let images = (0..rank).map(|_| random_weight_preserving(rng, space)).collect();
    PmpAction::new(&GroupDescriptor::free(rank).expect("rank >= 1"), space, images).expect("valid")
}

/// Ergodic commuting pair on `min_atoms..=max_atoms` uniformly weighted
/// atoms, drawn from local products, commuting cyclic translations, left
/// and right translations by subgroups of a catalog group, and diagonal
/// sums of translation pairs, then relabeled at random.
pub fn random_ergodic_pair(rng: &mut InstanceRng, min_atoms: usize, max_atoms: usize) -> CommutingPair {
    assert!(2 <= min_atoms && min_atoms <= max_atoms);
    loop {
        let candidate = match rng.below(4) {
            0 => random_local_product(rng, min_atoms, max_atoms),
            1 => Some(random_cyclic_translations(rng, min_atoms, max_atoms)),
            2 => random_left_right(rng, min_atoms, max_atoms),
            _ => random_diagonal_sum(rng, min_atoms, max_atoms),
        };
        if let Some(pair) = candidate.filter(CommutingPair::is_ergodic) {
            return relabel_pair(rng, &pair);
        }
    }
}

/// Conjugates both actions by one random relabeling of a uniform space.
pub fn relabel_pair(rng: &mut InstanceRng, pair: &CommutingPair) -> CommutingPair {
    let s = random_relabeling(rng, pair.atom_count());
    let l = pair.left().relabel(&s, pair.space()).expect("uniform");
    let r = pair.right().relabel(&s, pair.space()).expect("uniform");
    CommutingPair::new(l, r).expect("conjugation preserves commutation")
}

fn random_local_product(rng: &mut InstanceRng, min_atoms: usize, max_atoms: usize) -> Option<CommutingPair> {
    let n1 = rng.range(1, (max_atoms / 2).max(1));
    let lo = min_atoms.div_ceil(n1).max(1);
    let hi = max_atoms / n1;
    if lo > hi {
        return None;
    }
    let n2 = rng.range(lo, hi);
    let a = random_transitive_action(rng, n1);
    let b = random_transitive_action(rng, n2);
    Some(local_product(&a, &b))
}

fn translation(n: usize, k: usize) -> Automorphism {
    Automorphism::new_unchecked((0..n).map(|x| (x + k) % n).collect())
}

/// Translation by `k` on `Z/n`, as an action of `Z` or of the cyclic group
/// of the order of `k`.
fn cyclic_translation(rng: &mut InstanceRng, space: &Space, k: usize) -> PmpAction {
    let n = space.atom_count();
    let order = n / k.gcd(&n);
    if rng.coin() {
        PmpAction::new(&GroupDescriptor::free(1).expect("rank 1"), space, vec![translation(n, k)]).expect("valid")
    } else {
        let g = GroupDescriptor::cyclic(order).expect("order >= 1");
        let images = if order == 1 { vec![] } else { vec![translation(n, k)] };
        PmpAction::new(&g, space, images).expect("valid")
    }
}

fn random_cyclic_translations(rng: &mut InstanceRng, min_atoms: usize, max_atoms: usize) -> CommutingPair {
    let n = rng.range(min_atoms, max_atoms);
    let space = FiniteProbabilitySpace::uniform(n).expect("n >= 1");
    let (k1, k2) = loop {
        let (k1, k2) = (rng.below(n), rng.below(n));
        if k1.gcd(&k2).gcd(&n) == 1 {
            break (k1, k2);
        }
    };
    let a = cyclic_translation(rng, &space, k1);
    let b = cyclic_translation(rng, &space, k2);
    CommutingPair::new(a, b).expect("translations commute")
}

/// Left translations by one subgroup and right translations by another;
/// each acting group is realized as the permutation group it generates.
fn random_left_right(rng: &mut InstanceRng, min_atoms: usize, max_atoms: usize) -> Option<CommutingPair> {
    let options: Vec<Group> =
        finite_catalog(max_atoms).into_iter().filter(|g| g.order().is_some_and(|o| o >= min_atoms)).collect();
    if options.is_empty() {
        return None;
    }
    let k = rng.choose(&options).clone();
    let els = elements(&k);
    let n = els.len();
    let space = FiniteProbabilitySpace::uniform(n).expect("n >= 1");
    let mut side = |left: bool| {
        let count = rng.range(1, 2);
        let perms: Vec<Vec<usize>> = (0..count)
            .map(|_| {
                let g = rng.choose(&els).clone();
                let gi = k.inverse(&g);
                els.iter()
                    .map(|x| {
                        let y = if left { k.multiply(&g, x) } else { k.multiply(x, &gi) };
                        index_of(&els, &y.expect("same group"))
                    })
                    .collect()
            })
            .collect();
        let (group, _) = GroupDescriptor::from_permutations(n, &perms).expect("permutations of the group");
        let images = perms.into_iter().map(Automorphism::new_unchecked).collect();
        PmpAction::new(&group, &space, images).expect("permutation group acts naturally")
    };
    let a = side(true);
    let b = side(false);
    Some(CommutingPair::new(a, b).expect("left and right translations commute"))
}

/// `(A ∥ C, B ∥ D)` for translation pairs `(A, B)` on `Z/n1` and `(C, D)`
/// on `Z/n2`, all actions of `Z`.
fn random_diagonal_sum(rng: &mut InstanceRng, min_atoms: usize, max_atoms: usize) -> Option<CommutingPair> {
    let n1 = rng.range(2, (max_atoms / 2).max(2));
    let lo = min_atoms.div_ceil(n1).max(2);
    let hi = max_atoms / n1;
    if lo > hi {
        return None;
    }
    let n2 = rng.range(lo, hi);
    let z = GroupDescriptor::free(1).expect("rank 1");
    let n = n1 * n2;
    let space = FiniteProbabilitySpace::uniform(n).expect("n >= 1");
    let mut side = || {
        let (k1, k2) = (rng.below(n1), rng.below(n2));
        let img = (0..n).map(|x| ((x / n2 + k1) % n1) * n2 + (x % n2 + k2) % n2).collect();
        PmpAction::new(&z, &space, vec![Automorphism::new_unchecked(img)]).expect("valid")
    };
    let a = side();
    let b = side();
    Some(CommutingPair::new(a, b).expect("translations commute"))
}

/// Free action of a finite group: left translation on `copies` copies of
/// the group, copy `c` carrying total weight proportional to a random
/// integer, then relabeled with the weights transported.
pub fn random_free_action(rng: &mut InstanceRng, group: &Group, copies: usize) -> PmpAction {
    let els = elements(group);
    let m = els.len();
    let copy_weights = random_weights(rng, copies, 3);
    let s = random_relabeling(rng, copies * m);
    let mut weights = vec![ratio(0, 1); copies * m];
    for c in 0..copies {
        for i in 0..m {
            weights[s.apply(c * m + i)] = &copy_weights[c] * ratio(1, m as i64);
        }
    }
    let space = FiniteProbabilitySpace::new(weights).expect("normalized");
    let inv = s.inverse();
    let images = group
        .generators()
        .iter()
        .map(|g| {
            let base: Vec<usize> = (0..copies * m)
                .map(|x| {
                    let (c, i) = (x / m, x % m);
                    c * m + index_of(&els, &group.multiply(g, &els[i]).expect("same group"))
                })
                .collect();
            s.compose(&Automorphism::new_unchecked(base)).compose(&inv)
        })
        .collect();
    PmpAction::new(group, &space, images).expect("translations preserve the transported weights")
}

/// Random ergodic pair with small acting groups, sized for convergence
/// sweeps, together with measures `w` on the left group and `u` on the
/// right group.
///
/// `w` is a lazy generating measure. `u` is `eps delta_e + (1 - eps)` times
/// the uniform measure with `eps <= 1/8`, so `B(u)` contracts nonconstant
/// directions by at least 8: slow schedules such as `ceil(log2 n) + 1`
/// reach only `tau = 7` by `n = 60`.
pub fn random_mixing_instance(
    rng: &mut InstanceRng,
    max_atoms: usize,
) -> (CommutingPair, FiniteSupportMeasure, FiniteSupportMeasure) {
    let small = finite_catalog(6);
    loop {
        let g = rng.choose(&small).clone();
        let h = rng.choose(&small).clone();
        let (go, ho) = (g.order().expect("finite"), h.order().expect("finite"));
        let pair = match rng.below(3) {
            0 if go * ho <= max_atoms => local_product(&regular_action(&g), &regular_action(&h)),
            1 if go <= max_atoms => CommutingPair::new(regular_action(&g), right_regular_action(&g)).expect("commute"),
            2 => {
                let a = go.lcm(&ho);
                if go.gcd(&ho) != 1 || !is_cyclic(&g) || !is_cyclic(&h) || a > max_atoms {
                    continue;
                }
                let space = FiniteProbabilitySpace::uniform(a).expect("a >= 1");
                let act = |grp: &Group, o: usize| {
                    PmpAction::new(grp, &space, vec![translation(a, a / o)])
                        .expect("translation by an element of order o")
                };
                CommutingPair::new(act(&g, go), act(&h, ho)).expect("translations commute")
            }
            _ => continue,
        };
        if !pair.is_ergodic() {
            continue;
        }
        let pair = relabel_pair(rng, &pair);
        let left = pair.left().group().clone();
        let mut gens = left.generators().to_vec();
        if rng.coin() {
            gens.push(random_element(rng, &left, 1));
        }
        let w = lazy_generating_measure(&left, &gens);
        let right = pair.right().group().clone();
        let eps = ratio(1, *rng.choose(&[8, 10, 16]) as i64);
        let u = nearly_uniform(&right, &eps);
        return (pair, w, u);
    }
}

/// `eps delta_e + (1 - eps) uniform` on a finite group.
pub fn nearly_uniform(group: &Group, eps: &Rational) -> FiniteSupportMeasure {
    let els = elements(group);
    let share = (ratio(1, 1) - eps) * ratio(1, els.len() as i64);
    let entries = els.into_iter().map(|g| {
        let w = if group.is_identity(&g) { eps + &share } else { share.clone() };
        (g, w)
    });
    FiniteSupportMeasure::new(group, entries).expect("positive weights summing to one")
}

fn is_cyclic(g: &Group) -> bool {
    matches!(g.kind(), GroupKind::Finite(_)) && g.generators().len() == 1
}
