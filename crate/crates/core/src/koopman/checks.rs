use num_complex::Complex64;

use super::{evaluate, koopman, operator_norm, GroupRingElement, KoopmanOperator};
use crate::actions::{local_product, PmpAction};
use crate::groups::{GroupDescriptor, GroupElement};
use crate::spaces::Automorphism;
use crate::{Error, Result};

pub const TENSOR_DIMENSION_CAP: usize = 4096;

const AGREEMENT: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TensorReport {
    /// Norm of `phi` evaluated on the local product as a `G x H` action.
    pub pair_norm: f64,
    /// Norm of `sum phi(g, h) k_C(g) ⊗ k_D(h)` assembled directly.
    pub tensor_norm: f64,
    pub agree: bool,
}

/// Evaluates `phi` on `C □ D` in two independent ways. The common value is
/// a lower bound for the minimal tensor norm of `phi`.
pub fn tensor_check(c: &PmpAction, d: &PmpAction, phi: &GroupRingElement) -> Result<TensorReport> {
    let (ny, nz) = (c.atom_count(), d.atom_count());
    let dim = ny.saturating_mul(nz);
    if dim > TENSOR_DIMENSION_CAP {
        return Err(Error::DimensionOverflow { dim, cap: TENSOR_DIMENSION_CAP });
    }
    if **phi.group() != *GroupDescriptor::product(c.group(), d.group()) {
        return Err(Error::DescriptorMismatch);
    }
    let pair = local_product(c, d).to_product_action();
    let pair_norm = operator_norm(&evaluate(&pair, phi)?)?.norm;

    let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); dim];
    for (el, coeff) in phi.iter() {
        let GroupElement::Pair(g, h) = el else {
            return Err(Error::DescriptorMismatch);
        };
        let kc = koopman(&c.element_image(g)?, c.space())?;
        let kd = koopman(&d.element_image(h)?, d.space())?;
        for (y, crow) in kc.rows().iter().enumerate() {
            for (z, drow) in kd.rows().iter().enumerate() {
                let row = &mut rows[y * nz + z];
                for (y2, a) in crow {
                    for (z2, b) in drow {
                        row.push((y2 * nz + z2, coeff * a * b));
                    }
                }
            }
        }
    }
    let tensor = KoopmanOperator::from_rows(pair.space(), rows)?;
    let tensor_norm = operator_norm(&tensor)?.norm;
    Ok(TensorReport { pair_norm, tensor_norm, agree: (pair_norm - tensor_norm).abs() <= AGREEMENT })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConjugationReport {
    pub norm: f64,
    pub conjugated_norm: f64,
    pub agree: bool,
}

/// Compares the norm of `evaluate(action, phi)` with that of
/// `k_U^-1 evaluate(action, phi) k_U`.
pub fn conjugation_invariance_check(
    action: &PmpAction,
    phi: &GroupRingElement,
    u: &Automorphism,
) -> Result<ConjugationReport> {
    let op = evaluate(action, phi)?;
    let ku = koopman(u, action.space())?;
    let ku_inv = koopman(&u.inverse(), action.space())?;
    let conjugated = ku_inv.mul(&op)?.mul(&ku)?;
    let norm = operator_norm(&op)?.norm;
    let conjugated_norm = operator_norm(&conjugated)?.norm;
    Ok(ConjugationReport { norm, conjugated_norm, agree: (norm - conjugated_norm).abs() <= AGREEMENT })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::spaces::FiniteProbabilitySpace;

    fn rotation(n: usize) -> PmpAction {
        let z = GroupDescriptor::free(1).unwrap();
        let x = FiniteProbabilitySpace::uniform(n).unwrap();
        PmpAction::new(&z, &x, vec![Automorphism::new((0..n).map(|i| (i + 1) % n).collect()).unwrap()]).unwrap()
    }

    #[test]
    fn tensor_deltas_have_norm_one() {
        let (c, d) = (rotation(3), rotation(4));
        let g = GroupDescriptor::product(c.group(), d.group());
        let e = GroupRingElement::delta(&g, g.identity()).unwrap();
        let r = tensor_check(&c, &d, &e).unwrap();
        assert!((r.pair_norm - 1.0).abs() < 1e-12 && (r.tensor_norm - 1.0).abs() < 1e-12);
        let gh = g.parse_element("(a1 a1|a1')").unwrap();
        let r = tensor_check(&c, &d, &GroupRingElement::delta(&g, gh).unwrap()).unwrap();
        assert!(r.agree && (r.pair_norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tensor_mixed_element_agrees() {
        let (c, d) = (rotation(5), rotation(3));
        let g = GroupDescriptor::product(c.group(), d.group());
        let phi =
            GroupRingElement::parse_text(&g, "(e|e) 1 0\n(a1|e) -0.5 0.25\n(e|a1 a1) 0 1\n(a1'|a1) 2 -1\n").unwrap();
        let r = tensor_check(&c, &d, &phi).unwrap();
        assert!(r.agree, "{r:?}");
        assert!(r.pair_norm > 1.0);
    }

    #[test]
    fn tensor_errors() {
        let (c, d) = (rotation(65), rotation(65));
        let g = GroupDescriptor::product(c.group(), d.group());
        let e = GroupRingElement::delta(&g, g.identity()).unwrap();
        assert_eq!(tensor_check(&c, &d, &e).unwrap_err(), Error::DimensionOverflow { dim: 4225, cap: 4096 });
        let e = GroupRingElement::delta(c.group(), c.group().identity()).unwrap();
        assert_eq!(tensor_check(&rotation(2), &rotation(2), &e).unwrap_err(), Error::DescriptorMismatch);
    }

    #[test]
    fn conjugation_examples() {
        let a = rotation(3);
        let g = a.group().clone();
        let phi = GroupRingElement::parse_text(&g, "e 1 0\na1 -1 0\n").unwrap();
        let r = conjugation_invariance_check(&a, &phi, &Automorphism::identity(3)).unwrap();
        assert_eq!(r.norm, r.conjugated_norm);
        let u = Automorphism::from_cycles(3, &[vec![0, 2]]).unwrap();
        let r = conjugation_invariance_check(&a, &phi, &u).unwrap();
        assert!(r.agree && (r.norm - 3f64.sqrt()).abs() < 1e-9);
        let d = GroupRingElement::delta(&g, g.parse_element("a1").unwrap()).unwrap();
        let r = conjugation_invariance_check(&a, &d, &u).unwrap();
        assert!((r.norm - 1.0).abs() < 1e-12 && (r.conjugated_norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn conjugation_with_weights() {
        let z = GroupDescriptor::free(1).unwrap();
        let x = FiniteProbabilitySpace::new(vec![ratio(1, 6), ratio(1, 6), ratio(1, 3), ratio(1, 3)]).unwrap();
        let a = PmpAction::new(&z, &x, vec![Automorphism::from_cycles(4, &[vec![0, 1], vec![2, 3]]).unwrap()]).unwrap();
        let phi = GroupRingElement::parse_text(&z, "e 1 0\na1 0 2\n").unwrap();
        let u = Automorphism::from_cycles(4, &[vec![2, 3]]).unwrap();
        assert!(conjugation_invariance_check(&a, &phi, &u).unwrap().agree);
    }
}
