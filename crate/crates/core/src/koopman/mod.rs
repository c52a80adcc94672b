//! Koopman operators on weighted L², group-ring evaluation and operator
//! norms.

mod checks;
mod group_ring;
mod norm;

pub use checks::{conjugation_invariance_check, tensor_check, ConjugationReport, TensorReport, TENSOR_DIMENSION_CAP};
pub use group_ring::GroupRingElement;
pub use norm::{operator_norm, operator_norm_with, NormEstimate, NormSettings, DENSE_NORM_LIMIT};

use num_complex::Complex64;

use crate::actions::PmpAction;
use crate::spaces::{Automorphism, Space};
use crate::{Error, Result};

/// Complex operator on functions of a finite probability space, stored as
/// sorted sparse rows: `(K psi)(x) = sum_y K[x][y] psi(y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct KoopmanOperator {
    space: Space,
    rows: Vec<Vec<(usize, Complex64)>>,
}

impl KoopmanOperator {
    /// Duplicate entries in a row are summed and zeros dropped.
    pub fn from_rows(space: &Space, rows: Vec<Vec<(usize, Complex64)>>) -> Result<Self> {
        let n = space.atom_count();
        if rows.len() != n {
            return Err(Error::SizeMismatch { left: n, right: rows.len() });
        }
        let rows = rows
            .into_iter()
            .map(|mut row| {
                row.sort_by_key(|(y, _)| *y);
                let mut merged: Vec<(usize, Complex64)> = Vec::with_capacity(row.len());
                for (y, v) in row {
                    match merged.last_mut() {
                        Some((last, acc)) if *last == y => *acc += v,
                        _ => merged.push((y, v)),
                    }
                }
                merged.retain(|(_, v)| *v != Complex64::new(0.0, 0.0));
                merged
            })
            .collect::<Vec<_>>();
        if let Some(&(y, _)) = rows.iter().flatten().find(|(y, _)| *y >= n) {
            return Err(Error::SizeMismatch { left: n, right: y + 1 });
        }
        Ok(Self { space: space.clone(), rows })
    }

    pub fn identity(space: &Space) -> Self {
        let rows = (0..space.atom_count()).map(|x| vec![(x, Complex64::new(1.0, 0.0))]).collect();
        Self { space: space.clone(), rows }
    }

    pub fn zero(space: &Space) -> Self {
        Self { space: space.clone(), rows: vec![Vec::new(); space.atom_count()] }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<(usize, Complex64)>] {
        &self.rows
    }

    pub fn entry(&self, x: usize, y: usize) -> Complex64 {
        match self.rows[x].binary_search_by_key(&y, |(c, _)| *c) {
            Ok(i) => self.rows[x][i].1,
            Err(_) => Complex64::default(),
        }
    }

    pub fn apply(&self, psi: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(psi.len(), self.dim(), "vector length");
        self.rows.iter().map(|row| row.iter().map(|(y, v)| v * psi[*y]).sum()).collect()
    }

    /// `(self · other) psi = self (other psi)`.
    pub fn mul(&self, other: &KoopmanOperator) -> Result<KoopmanOperator> {
        self.same_space(other)?;
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().flat_map(|(y, a)| other.rows[*y].iter().map(move |(z, b)| (*z, a * b))).collect())
            .collect();
        Self::from_rows(&self.space, rows)
    }

    pub fn add(&self, other: &KoopmanOperator) -> Result<KoopmanOperator> {
        self.same_space(other)?;
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| a.iter().chain(b).copied().collect()).collect();
        Self::from_rows(&self.space, rows)
    }

    pub fn scale(&self, s: Complex64) -> KoopmanOperator {
        let rows = self.rows.iter().map(|row| row.iter().map(|(y, v)| (*y, v * s)).collect()).collect();
        Self::from_rows(&self.space, rows).expect("same shape")
    }

    fn same_space(&self, other: &KoopmanOperator) -> Result<()> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(Error::SizeMismatch { left: self.dim(), right: other.dim() })
        }
    }

    /// Adjoint for `<psi, chi> = sum_x mu(x) psi(x) conj(chi(x))`:
    /// `K†[x][y] = mu(y) conj(K[y][x]) / mu(x)`.
    pub fn adjoint(&self) -> KoopmanOperator {
        let mu = self.space.float_weights();
        let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); self.dim()];
        for (y, row) in self.rows.iter().enumerate() {
            for (x, v) in row {
                rows[*x].push((y, v.conj() * (mu[y] / mu[*x])));
            }
        }
        Self::from_rows(&self.space, rows).expect("same shape")
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_difference(&self, other: &KoopmanOperator) -> f64 {
        let mut worst: f64 = 0.0;
        for x in 0..self.dim() {
            let cols = self.rows[x].iter().chain(&other.rows[x]).map(|(y, _)| *y);
            for y in cols {
                worst = worst.max((self.entry(x, y) - other.entry(x, y)).norm());
            }
        }
        worst
    }
}

/// `[k_T psi](x) = psi(T^-1 x)`.
pub fn koopman(t: &Automorphism, space: &Space) -> Result<KoopmanOperator> {
    if t.len() != space.atom_count() {
        return Err(Error::SizeMismatch { left: space.atom_count(), right: t.len() });
    }
    let inv = t.inverse();
    let rows = (0..t.len()).map(|x| vec![(inv.apply(x), Complex64::new(1.0, 0.0))]).collect();
    KoopmanOperator::from_rows(space, rows)
}

/// `sum_g phi(g) k(A^g)`.
pub fn evaluate(action: &PmpAction, phi: &GroupRingElement) -> Result<KoopmanOperator> {
    if action.group() != phi.group() {
        return Err(Error::DescriptorMismatch);
    }
    let n = action.atom_count();
    let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); n];
    for (g, c) in phi.iter() {
        let inv = action.image_unchecked(g).inverse();
        for (x, row) in rows.iter_mut().enumerate() {
            row.push((inv.apply(x), *c));
        }
    }
    KoopmanOperator::from_rows(action.space(), rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::GroupDescriptor;
    use crate::rational::ratio;
    use crate::spaces::FiniteProbabilitySpace;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn rotation3() -> PmpAction {
        let z = GroupDescriptor::free(1).unwrap();
        let x = FiniteProbabilitySpace::uniform(3).unwrap();
        PmpAction::new(&z, &x, vec![Automorphism::from_cycles(3, &[vec![0, 1, 2]]).unwrap()]).unwrap()
    }

    #[test]
    fn koopman_examples() {
        let x = FiniteProbabilitySpace::uniform(3).unwrap();
        assert_eq!(koopman(&Automorphism::identity(3), &x).unwrap(), KoopmanOperator::identity(&x));
        let t = Automorphism::from_cycles(3, &[vec![0, 1, 2]]).unwrap();
        let k = koopman(&t, &x).unwrap();
        // psi(T^-1 x): row x has its 1 in column x - 1
        for row in 0..3 {
            assert_eq!(k.entry(row, (row + 2) % 3), c(1.0));
        }
        let s = Automorphism::from_cycles(3, &[vec![0, 1]]).unwrap();
        let ks = koopman(&s, &x).unwrap();
        assert_eq!(k.mul(&ks).unwrap(), koopman(&t.compose(&s), &x).unwrap());
        assert_ne!(k.mul(&ks).unwrap(), koopman(&s.compose(&t), &x).unwrap());
    }

    #[test]
    fn koopman_is_weighted_unitary() {
        let x = FiniteProbabilitySpace::new(vec![ratio(1, 6), ratio(1, 6), ratio(2, 3)]).unwrap();
        let k = koopman(&Automorphism::from_cycles(3, &[vec![0, 1]]).unwrap(), &x).unwrap();
        assert!(k.adjoint().mul(&k).unwrap().max_difference(&KoopmanOperator::identity(&x)) < 1e-15);
    }

    #[test]
    fn evaluate_examples() {
        let a = rotation3();
        let g = a.group().clone();
        let e = GroupRingElement::delta(&g, g.identity()).unwrap();
        assert_eq!(evaluate(&a, &e).unwrap(), KoopmanOperator::identity(a.space()));
        let gen = g.parse_element("a1 a1").unwrap();
        let d = GroupRingElement::delta(&g, gen.clone()).unwrap();
        assert_eq!(evaluate(&a, &d).unwrap(), koopman(&a.element_image(&gen).unwrap(), a.space()).unwrap());
        let z2 = GroupDescriptor::cyclic(2).unwrap();
        assert_eq!(evaluate(&a, &GroupRingElement::zero(&z2)).unwrap_err(), Error::DescriptorMismatch);
    }

    #[test]
    fn difference_operator_eigenvalues() {
        // characters chi_k(x) = w^{kx} are eigenvectors with eigenvalue 1 - w^{-k}
        let a = rotation3();
        let g = a.group().clone();
        let phi =
            GroupRingElement::new(&g, [(g.identity(), c(1.0)), (g.parse_element("a1").unwrap(), c(-1.0))]).unwrap();
        let k = evaluate(&a, &phi).unwrap();
        let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        for j in 0..3 {
            let chi: Vec<Complex64> = (0..3).map(|x| w.powu((j * x) as u32)).collect();
            let lambda = c(1.0) - w.powi(-j);
            for (got, v) in k.apply(&chi).iter().zip(&chi) {
                assert!((got - lambda * v).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn evaluate_is_multiplicative_and_star_preserving() {
        let f2 = GroupDescriptor::free(2).unwrap();
        let x = FiniteProbabilitySpace::new(vec![ratio(1, 6), ratio(1, 6), ratio(1, 3), ratio(1, 3)]).unwrap();
        let s = Automorphism::from_cycles(4, &[vec![0, 1]]).unwrap();
        let t = Automorphism::from_cycles(4, &[vec![2, 3]]).unwrap().compose(&s);
        let a = PmpAction::new(&f2, &x, vec![s, t]).unwrap();
        let phi = GroupRingElement::parse_text(&f2, "a1 1 2\na2 a1' 0.5 -1\ne 3 0\n").unwrap();
        let psi = GroupRingElement::parse_text(&f2, "a2 2 0\na1 a1 0 1\n").unwrap();
        let lhs = evaluate(&a, &phi.mul(&psi).unwrap()).unwrap();
        let rhs = evaluate(&a, &phi).unwrap().mul(&evaluate(&a, &psi).unwrap()).unwrap();
        assert!(lhs.max_difference(&rhs) < 1e-12);
        let adj = evaluate(&a, &phi).unwrap().adjoint();
        assert!(adj.max_difference(&evaluate(&a, &phi.star()).unwrap()) < 1e-12);
    }
}
