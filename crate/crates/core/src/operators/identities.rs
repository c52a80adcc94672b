use super::{conditional_expectation, integration_matrix, MarkovMatrix};
use crate::actions::CommutingPair;
use crate::rational::Rational;
use crate::spaces::{FiniteProbabilitySpace, Partition};
use crate::{Error, Result};

/// For an ergodic pair, whether `I_B I_A` and `I_A I_B` both equal the
/// integration operator, exactly.
pub fn check_prodd(pair: &CommutingPair) -> Result<bool> {
    if !pair.is_ergodic() {
        return Err(Error::NotErgodic);
    }
    let space = pair.space();
    let ea: MarkovMatrix<Rational> = conditional_expectation(space, &pair.left().invariant_partition())?;
    let eb: MarkovMatrix<Rational> = conditional_expectation(space, &pair.right().invariant_partition())?;
    let ex: MarkovMatrix<Rational> = integration_matrix(space);
    Ok(eb.mul(&ea) == ex && ea.mul(&eb) == ex)
}

/// Partitions of `X1 x X2 x X3` by each coordinate, with atoms at
/// `(x1 |X2| + x2) |X3| + x3`.
pub fn coordinate_partitions(sizes: [usize; 3]) -> [Partition; 3] {
    let n = sizes.iter().product();
    let coord = |j: usize| -> Partition {
        let labels: Vec<usize> = (0..n)
            .map(|i| match j {
                0 => i / (sizes[1] * sizes[2]),
                1 => (i / sizes[2]) % sizes[1],
                _ => i % sizes[2],
            })
            .collect();
        Partition::from_labels(&labels)
    };
    [coord(0), coord(1), coord(2)]
}

/// On `Y = X1 x X2 x X3` with the product measure, whether `P_j P_k` equals
/// integration for all `j != k`, where `P_j` is the conditional expectation
/// onto functions of coordinate `j`.
pub fn check_cube_expectations(
    x1: &FiniteProbabilitySpace,
    x2: &FiniteProbabilitySpace,
    x3: &FiniteProbabilitySpace,
) -> bool {
    let y = x1.product(x2).product(x3);
    let parts = coordinate_partitions([x1.atom_count(), x2.atom_count(), x3.atom_count()]);
    let ps: Vec<MarkovMatrix<Rational>> =
        parts.iter().map(|p| conditional_expectation(&y, p).expect("partition fits")).collect();
    let ey: MarkovMatrix<Rational> = integration_matrix(&y);
    (0..3).all(|j| (0..3).filter(|&k| k != j).all(|k| ps[j].mul(&ps[k]) == ey))
}
