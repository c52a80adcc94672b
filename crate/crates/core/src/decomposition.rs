//! Ergodic and synergodic decompositions, and exact checks of the two
//! structure theorems for commuting pairs.

use crate::actions::{local_product, trivial_action, CommutingPair, PmpAction};
use crate::rational::{zero, Rational};
use crate::spaces::{Automorphism, FiniteProbabilitySpace, Partition, Space};
use crate::{Error, Result};

/// The factor of an action onto its space of ergodic components.
#[derive(Clone, Debug)]
pub struct ErgodicDecomposition {
    pub source: PmpAction,
    pub partition: Partition,
    pub quotient: Space,
    pub factor_map: Vec<usize>,
}

impl ErgodicDecomposition {
    /// The source action seen on its components, which is trivial.
    pub fn induced(&self) -> PmpAction {
        trivial_action(self.source.group(), &self.quotient)
    }

    /// `factor_map ∘ A^s = factor_map` for every generator `s`.
    pub fn intertwines(&self) -> bool {
        self.source
            .generator_images()
            .iter()
            .all(|t| (0..t.len()).all(|x| self.factor_map[t.apply(x)] == self.factor_map[x]))
    }
}

pub fn ergodic_decomposition(action: &PmpAction) -> ErgodicDecomposition {
    let partition = action.invariant_partition();
    let (quotient, factor_map) = action.space().quotient(&partition).expect("partition matches the space");
    ErgodicDecomposition { source: action.clone(), partition, quotient, factor_map }
}

/// The action of the right group on the ergodic components of the left
/// action: `h` sends the block of `x` to the block of `B^h x`.
pub fn induced_action(pair: &CommutingPair) -> Result<PmpAction> {
    let decomposition = ergodic_decomposition(pair.left());
    let blocks = &decomposition.factor_map;
    let count = decomposition.partition.block_count();
    let mut images = Vec::with_capacity(pair.right().generator_images().len());
    for (generator, t) in pair.right().generator_images().iter().enumerate() {
        let mut img = vec![usize::MAX; count];
        for x in 0..t.len() {
            let target = blocks[t.apply(x)];
            let slot = &mut img[blocks[x]];
            if *slot == usize::MAX {
                *slot = target;
            } else if *slot != target {
                return Err(Error::OrbitNotPermuted { generator, atom: x });
            }
        }
        let img = Automorphism::new(img).map_err(|_| Error::OrbitNotPermuted { generator, atom: 0 })?;
        images.push(img);
    }
    PmpAction::new(pair.right().group(), &decomposition.quotient, images)
}

/// Whether `mu(C ∩ D) = mu(C) mu(D)` for every block `C` of `p` and `D` of
/// `q`. Blocks generate both sigma-algebras, so this decides independence.
pub fn check_independence(space: &FiniteProbabilitySpace, p: &Partition, q: &Partition) -> Result<bool> {
    let pq = joint_measure(space, p, q)?;
    let mp = space.block_measures(p)?;
    let mq = space.block_measures(q)?;
    Ok(pq.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, w)| *w == &mp[i] * &mq[j])))
}

/// `m[i][j] = mu(block i of p ∩ block j of q)`.
fn joint_measure(space: &FiniteProbabilitySpace, p: &Partition, q: &Partition) -> Result<Vec<Vec<Rational>>> {
    for part in [p, q] {
        if part.len() != space.atom_count() {
            return Err(Error::SizeMismatch { left: space.atom_count(), right: part.len() });
        }
    }
    let mut m = vec![vec![zero(); q.block_count()]; p.block_count()];
    for x in 0..space.atom_count() {
        m[p.block_of(x)][q.block_of(x)] += space.weight(x);
    }
    Ok(m)
}

/// Everything the synergodic decomposition of a pair determines.
#[derive(Clone, Debug)]
pub struct SynergodicReport {
    pub pair: CommutingPair,
    pub part_a: Partition,
    pub part_b: Partition,
    /// Join of the two invariant partitions.
    pub join: Partition,
    pub ergodic: bool,
    /// `x -> (block of x in part_a, block of x in part_b)`.
    pub canonical_map: Vec<(usize, usize)>,
    pub independence: bool,
    pub synergodic: bool,
    /// Image of the measure under the canonical map, indexed `[a][b]`.
    pub pushforward: Vec<Vec<Rational>>,
    pub eta_a: Vec<Rational>,
    pub eta_b: Vec<Rational>,
}

pub fn synergodic_decomposition(pair: &CommutingPair) -> SynergodicReport {
    let space = pair.space();
    let part_a = pair.left().invariant_partition();
    let part_b = pair.right().invariant_partition();
    let join = part_a.refine(&part_b).expect("same space");
    let ergodic = pair.is_ergodic();
    let canonical_map = (0..space.atom_count()).map(|x| (part_a.block_of(x), part_b.block_of(x))).collect();
    let pushforward = joint_measure(space, &part_a, &part_b).expect("same space");
    let eta_a = space.block_measures(&part_a).expect("same space");
    let eta_b = space.block_measures(&part_b).expect("same space");
    let independence =
        pushforward.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, w)| *w == &eta_a[i] * &eta_b[j]));
    let synergodic = ergodic && join.is_discrete();
    SynergodicReport {
        pair: pair.clone(),
        part_a,
        part_b,
        join,
        ergodic,
        canonical_map,
        independence,
        synergodic,
        pushforward,
        eta_a,
        eta_b,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A generator and atom where the canonical map fails to intertwine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntertwiningViolation {
    pub side: Side,
    pub generator: usize,
    pub atom: usize,
}

#[derive(Clone, Debug)]
pub struct SynergTheoremReport {
    pub pushforward_is_product: bool,
    pub violations: Vec<IntertwiningViolation>,
    /// Local product of the left group on `E_B` and the right group on `E_A`.
    pub model: CommutingPair,
    pub components_a: usize,
    pub components_b: usize,
}

impl SynergTheoremReport {
    pub fn passed(&self) -> bool {
        self.pushforward_is_product && self.violations.is_empty()
    }
}

/// For an ergodic pair `(A, B)` of `G x H`, checks that the canonical map
/// carries `mu` to `eta_A x eta_B` and intertwines `(A, B)` with the local
/// product of `G` on `E_B` and `H` on `E_A`. The model lives on
/// `E_B x E_A`, so atom `x` maps to index `block_B(x) |E_A| + block_A(x)`.
pub fn verify_synerg_theorem(pair: &CommutingPair) -> Result<SynergTheoremReport> {
    if !pair.is_ergodic() {
        return Err(Error::NotErgodic);
    }
    let report = synergodic_decomposition(pair);
    let g_on_eb = induced_action(&pair.swapped())?;
    let h_on_ea = induced_action(pair)?;
    let model = local_product(&g_on_eb, &h_on_ea);
    let na = report.part_a.block_count();
    let phi: Vec<usize> = report.canonical_map.iter().map(|&(a, b)| b * na + a).collect();

    let mut violations = Vec::new();
    for (side, source, target) in [(Side::Left, pair.left(), model.left()), (Side::Right, pair.right(), model.right())]
    {
        for (generator, (s, t)) in source.generator_images().iter().zip(target.generator_images()).enumerate() {
            if let Some(atom) = (0..s.len()).find(|&x| phi[s.apply(x)] != t.apply(phi[x])) {
                violations.push(IntertwiningViolation { side, generator, atom });
            }
        }
    }
    Ok(SynergTheoremReport {
        pushforward_is_product: report.independence,
        violations,
        model,
        components_a: na,
        components_b: report.part_b.block_count(),
    })
}

#[derive(Clone, Debug)]
pub struct LocprodTheoremReport {
    pub pair: CommutingPair,
    pub synergodic: bool,
    /// Invariant sets of the first coordinate's action are the sets `X x D`.
    pub left_fibers: bool,
    /// Invariant sets of the second coordinate's action are the sets `C x Y`.
    pub right_fibers: bool,
}

impl LocprodTheoremReport {
    pub fn passed(&self) -> bool {
        self.synergodic && self.left_fibers && self.right_fibers
    }
}

/// For ergodic `A` on `X` and `B` on `Y`, checks that their local product is
/// synergodic and that the invariant partitions of its two restrictions
/// are exactly the fiber partitions.
pub fn verify_locprod_theorem(a: &PmpAction, b: &PmpAction) -> Result<LocprodTheoremReport> {
    if !a.is_ergodic() || !b.is_ergodic() {
        return Err(Error::NotErgodic);
    }
    let pair = local_product(a, b);
    let ny = b.atom_count();
    let n = pair.atom_count();
    let by_y = Partition::from_labels(&(0..n).map(|i| i % ny).collect::<Vec<_>>());
    let by_x = Partition::from_labels(&(0..n).map(|i| i / ny).collect::<Vec<_>>());
    Ok(LocprodTheoremReport {
        synergodic: synergodic_decomposition(&pair).synergodic,
        left_fibers: pair.left().invariant_partition() == by_y,
        right_fibers: pair.right().invariant_partition() == by_x,
        pair,
    })
}
