use std::fmt;

use num_traits::{Num, Signed};

use crate::rational::Rational;

/// Entry type of operator matrices: exact rationals or binary64.
pub trait Scalar: Num + Signed + Clone + fmt::Debug {
    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        crate::rational::to_f64(self)
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        crate::rational::to_f64(r)
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

/// Matrices up to this dimension are stored densely.
pub const DENSE_LIMIT: usize = 512;

/// Square matrix acting on functions by `(M psi)(x) = sum_y M[x][y] psi(y)`.
/// Dense below [`DENSE_LIMIT`], sorted sparse rows otherwise.
#[derive(Clone, Debug)]
pub struct MarkovMatrix<T> {
    n: usize,
    storage: Storage<T>,
}

#[derive(Clone, Debug)]
enum Storage<T> {
    Dense(Vec<T>),
    Sparse(Vec<Vec<(usize, T)>>),
}

impl<T: Scalar> MarkovMatrix<T> {
    /// Duplicate entries within a row are summed.
    pub fn from_entries(n: usize, rows: Vec<Vec<(usize, T)>>) -> Self {
        assert_eq!(rows.len(), n, "one entry list per row");
        if n < DENSE_LIMIT {
            let mut dense = vec![T::zero(); n * n];
            for (x, row) in rows.into_iter().enumerate() {
                for (y, v) in row {
                    let cell = &mut dense[x * n + y];
                    *cell = cell.clone() + v;
                }
            }
            Self { n, storage: Storage::Dense(dense) }
        } else {
            let rows = rows
                .into_iter()
                .map(|mut row| {
                    row.sort_by_key(|(y, _)| *y);
                    let mut merged: Vec<(usize, T)> = Vec::with_capacity(row.len());
                    for (y, v) in row {
                        match merged.last_mut() {
                            Some((last, acc)) if *last == y => *acc = acc.clone() + v,
                            _ => merged.push((y, v)),
                        }
                    }
                    merged.retain(|(_, v)| !v.is_zero());
                    merged
                })
                .collect();
            Self { n, storage: Storage::Sparse(rows) }
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_entries(n, (0..n).map(|x| vec![(x, T::one())]).collect())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.storage, Storage::Sparse(_))
    }

    pub fn get(&self, x: usize, y: usize) -> T {
        match &self.storage {
            Storage::Dense(d) => d[x * self.n + y].clone(),
            Storage::Sparse(rows) => match rows[x].binary_search_by_key(&y, |(c, _)| *c) {
                Ok(i) => rows[x][i].1.clone(),
                Err(_) => T::zero(),
            },
        }
    }

    /// Nonzero entries of row `x`, by column.
    pub fn row(&self, x: usize) -> Vec<(usize, T)> {
        match &self.storage {
            Storage::Dense(d) => d[x * self.n..(x + 1) * self.n]
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(y, v)| (y, v.clone()))
                .collect(),
            Storage::Sparse(rows) => rows[x].clone(),
        }
    }

    pub fn apply(&self, psi: &[T]) -> Vec<T> {
        assert_eq!(psi.len(), self.n, "observable length");
        match &self.storage {
            Storage::Dense(d) => (0..self.n)
                .map(|x| {
                    d[x * self.n..(x + 1) * self.n]
                        .iter()
                        .zip(psi)
                        .filter(|(m, _)| !m.is_zero())
                        .fold(T::zero(), |acc, (m, v)| acc + m.clone() * v.clone())
                })
                .collect(),
            Storage::Sparse(rows) => rows
                .iter()
                .map(|row| row.iter().fold(T::zero(), |acc, (y, m)| acc + m.clone() * psi[*y].clone()))
                .collect(),
        }
    }

    /// Matrix product: `(self · other) psi = self (other psi)`.
    pub fn mul(&self, other: &MarkovMatrix<T>) -> MarkovMatrix<T> {
        assert_eq!(self.n, other.n, "dimensions");
        let other_rows: Vec<Vec<(usize, T)>> = (0..other.n).map(|y| other.row(y)).collect();
        let rows = (0..self.n)
            .map(|x| {
                let mut acc: Vec<(usize, T)> = Vec::new();
                for (y, a) in self.row(x) {
                    for (z, b) in &other_rows[y] {
                        acc.push((*z, a.clone() * b.clone()));
                    }
                }
                acc
            })
            .collect();
        MarkovMatrix::from_entries(self.n, rows)
    }

    pub fn row_sums(&self) -> Vec<T> {
        (0..self.n).map(|x| self.row(x).into_iter().fold(T::zero(), |acc, (_, v)| acc + v)).collect()
    }

    /// Every row sums to one within `tol` (use 0 for exact arithmetic).
    pub fn is_stochastic(&self, tol: f64) -> bool {
        self.row_sums().iter().all(|s| (s.to_f64() - 1.0).abs() <= tol)
            && (0..self.n).all(|x| self.row(x).iter().all(|(_, v)| !v.is_negative()))
    }

    pub fn to_f64(&self) -> MarkovMatrix<f64> {
        MarkovMatrix::from_entries(
            self.n,
            (0..self.n).map(|x| self.row(x).into_iter().map(|(y, v)| (y, v.to_f64())).collect()).collect(),
        )
    }
}

impl<T: Scalar> PartialEq for MarkovMatrix<T> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && (0..self.n).all(|x| self.row(x) == other.row(x))
    }
}
