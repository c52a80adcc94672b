//! Finite standard probability spaces, their measure-preserving
//! automorphisms, and sigma-algebras represented as canonical partitions.
//!
//! Atoms carry strictly positive rational weights, so "invariant up to a
//! null set" and "exactly invariant" coincide and every statement about
//! sub-sigma-algebras becomes a statement about partitions.

mod partition;
mod union_find;

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

pub use partition::Partition;
pub use union_find::UnionFind;

use crate::groups::is_permutation;
use crate::rational::{self, Rational};
use crate::{Error, Result};

pub type Space = Arc<FiniteProbabilitySpace>;

#[derive(Clone, Debug)]
pub struct FiniteProbabilitySpace {
    weights: Vec<Rational>,
    float_weights: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl PartialEq for FiniteProbabilitySpace {
    fn eq(&self, other: &Self) -> bool {
        self.weights == other.weights && self.labels == other.labels
    }
}

impl Eq for FiniteProbabilitySpace {}

impl FiniteProbabilitySpace {
    pub fn new(weights: Vec<Rational>) -> Result<Space> {
        Ok(Arc::new(Self::build(weights, None)?))
    }

    pub fn with_labels(weights: Vec<Rational>, labels: Vec<String>) -> Result<Space> {
        if labels.len() != weights.len() {
            return Err(Error::InvalidSpace(format!("{} labels for {} atoms", labels.len(), weights.len())));
        }
        Ok(Arc::new(Self::build(weights, Some(labels))?))
    }

    fn build(weights: Vec<Rational>, labels: Option<Vec<String>>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidSpace("a space needs at least one atom".into()));
        }
        if let Some((x, w)) = weights.iter().enumerate().find(|(_, w)| !w.is_positive()) {
            return Err(Error::InvalidSpace(format!("atom {x} has non-positive weight {}", rational::format(w))));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidSpace(format!("weights sum to {}", rational::format(&total))));
        }
        let float_weights = weights.iter().map(rational::to_f64).collect();
        Ok(Self { weights, float_weights, labels })
    }

    pub fn uniform(n: usize) -> Result<Space> {
        if n == 0 {
            return Err(Error::InvalidSpace("a space needs at least one atom".into()));
        }
        Self::new(vec![rational::ratio(1, n as i64); n])
    }

    pub fn atom_count(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, x: usize) -> &Rational {
        &self.weights[x]
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn float_weights(&self) -> &[f64] {
        &self.float_weights
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }

    /// Atoms `(x, y)` at index `x * |Y| + y` with weight `mu(x) nu(y)`.
    pub fn product(&self, other: &FiniteProbabilitySpace) -> Space {
        let ny = other.atom_count();
        let mut weights = Vec::with_capacity(self.atom_count() * ny);
        for wx in &self.weights {
            for wy in &other.weights {
                weights.push(wx * wy);
            }
        }
        let labels = match (&self.labels, &other.labels) {
            (None, None) => None,
            _ => Some(
                (0..self.atom_count())
                    .flat_map(|x| (0..ny).map(move |y| (x, y)))
                    .map(|(x, y)| format!("({},{})", self.label(x), other.label(y)))
                    .collect(),
            ),
        };
        Arc::new(Self::build(weights, labels).expect("product of probability spaces is a probability space"))
    }

    fn check_partition(&self, p: &Partition) -> Result<()> {
        if p.len() != self.atom_count() {
            return Err(Error::SizeMismatch { left: self.atom_count(), right: p.len() });
        }
        Ok(())
    }

    pub fn block_measure(&self, p: &Partition, block: usize) -> Result<Rational> {
        self.check_partition(p)?;
        if block >= p.block_count() {
            return Err(Error::BlockOutOfRange { block, blocks: p.block_count() });
        }
        Ok((0..self.atom_count()).filter(|&x| p.block_of(x) == block).map(|x| &self.weights[x]).sum())
    }

    pub fn block_measures(&self, p: &Partition) -> Result<Vec<Rational>> {
        self.check_partition(p)?;
        let mut out = vec![Rational::zero(); p.block_count()];
        for (x, w) in self.weights.iter().enumerate() {
            out[p.block_of(x)] += w;
        }
        Ok(out)
    }

    /// Quotient space of blocks and the factor map `atom -> block`.
    pub fn quotient(&self, p: &Partition) -> Result<(Space, Vec<usize>)> {
        let weights = self.block_measures(p)?;
        Ok((Self::new(weights)?, p.block_ids().to_vec()))
    }

    pub fn measure_of(&self, set: &[bool]) -> Rational {
        set.iter().zip(&self.weights).filter(|(b, _)| **b).map(|(_, w)| w).sum()
    }

    /// `Ok(())` or the first atom whose weight is not preserved.
    pub fn check_preserved(&self, t: &Automorphism) -> std::result::Result<(), usize> {
        if t.len() != self.atom_count() {
            return Err(0);
        }
        match (0..self.atom_count()).find(|&x| self.weights[t.apply(x)] != self.weights[x]) {
            Some(x) => Err(x),
            None => Ok(()),
        }
    }

    /// `atoms=N` header followed by `index weight [label]` lines.
    pub fn to_text(&self) -> String {
        let mut s = format!("atoms={}\n", self.atom_count());
        for (x, w) in self.weights.iter().enumerate() {
            s.push_str(&format!("{x} {}", rational::format(w)));
            if let Some(l) = &self.labels {
                s.push(' ');
                s.push_str(&l[x]);
            }
            s.push('\n');
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Space> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.trim().starts_with('#'));
        let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "missing `atoms=N` header"))?;
        let n: usize = header
            .trim()
            .strip_prefix("atoms=")
            .and_then(|n| n.trim().parse().ok())
            .ok_or_else(|| Error::parse(hl + 1, "expected `atoms=N`"))?;
        let mut weights = vec![None; n];
        let mut labels = vec![None; n];
        for (i, line) in lines {
            let mut parts = line.split_whitespace();
            let idx: usize = parts
                .next()
                .and_then(|t| t.parse().ok())
                .filter(|&x| x < n)
                .ok_or_else(|| Error::parse(i + 1, "bad atom index"))?;
            let w = parts.next().and_then(rational::parse).ok_or_else(|| Error::parse(i + 1, "bad weight"))?;
            if weights[idx].is_some() {
                return Err(Error::parse(i + 1, format!("atom {idx} listed twice")));
            }
            weights[idx] = Some(w);
            let rest: Vec<&str> = parts.collect();
            if !rest.is_empty() {
                labels[idx] = Some(rest.join(" "));
            }
        }
        let weights: Option<Vec<Rational>> = weights.into_iter().collect();
        let weights = weights.ok_or_else(|| Error::parse(hl + 1, "not every atom has a weight"))?;
        if labels.iter().any(Option::is_some) {
            let labels = labels.into_iter().enumerate().map(|(x, l)| l.unwrap_or_else(|| x.to_string())).collect();
            Self::with_labels(weights, labels)
        } else {
            Self::new(weights)
        }
    }
}

/// A bijection of atom indices. Measure preservation is relative to a space
/// and checked by [`FiniteProbabilitySpace::check_preserved`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Automorphism(Vec<usize>);

impl Automorphism {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        if !is_permutation(&images) {
            return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
        }
        Ok(Self(images))
    }

    /// Skips the bijection check; for deliberately broken test fixtures and
    /// hot paths that construct permutations by composition.
    pub fn new_unchecked(images: Vec<usize>) -> Self {
        Self(images)
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x >= n || touched[x] {
                    return Err(Error::InvalidPermutation(format!("atom {x} out of range or repeated in cycles")));
                }
                touched[x] = true;
                images[x] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Self(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism(other.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn inverse(&self) -> Automorphism {
        let mut inv = vec![0; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y] = x;
        }
        Automorphism(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(x, &y)| x == y)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.0[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.0[x];
            }
            out.push(cycle);
        }
        out
    }

    /// Order of the permutation (lcm of cycle lengths).
    pub fn order(&self) -> usize {
        self.cycles().iter().fold(1, |acc, c| num_integer::lcm(acc, c.len()))
    }

    pub fn power(&self, k: usize) -> Automorphism {
        (0..k).fold(Automorphism::identity(self.len()), |acc, _| self.compose(&acc))
    }

    /// Cycle notation without fixed points, `()` for the identity.
    pub fn to_cycle_notation(&self) -> String {
        let cycles: Vec<String> = self
            .cycles()
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|c| format!("({})", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")))
            .collect();
        if cycles.is_empty() {
            "()".to_string()
        } else {
            cycles.concat()
        }
    }

    pub fn parse_cycle_notation(n: usize, text: &str) -> Result<Self> {
        let mut cycles = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(|| Error::parse(0, format!("expected '(' in {text:?}")))?;
            let close = body.find(')').ok_or_else(|| Error::parse(0, format!("unclosed cycle in {text:?}")))?;
            let atoms: std::result::Result<Vec<usize>, _> = body[..close]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(str::parse)
                .collect();
            let atoms = atoms.map_err(|_| Error::parse(0, format!("bad atom in {text:?}")))?;
            if !atoms.is_empty() {
                cycles.push(atoms);
            }
            rest = body[close + 1..].trim_start();
        }
        Self::from_cycles(n, &cycles)
    }
}

impl fmt::Display for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_notation())
    }
}
