use std::fmt;

use super::union_find::UnionFind;
use super::Automorphism;
use crate::{Error, Result};

/// A partition of `0..n`, blocks numbered by their smallest atom.
///
/// On a finite space with positive weights every sub-sigma-algebra is
/// generated by exactly one such partition.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Partition {
    block_of: Vec<usize>,
    blocks: usize,
}

impl Partition {
    /// Canonicalizes arbitrary block labels.
    pub fn from_labels<T: Eq + std::hash::Hash + Clone>(labels: &[T]) -> Self {
        let mut seen = std::collections::HashMap::new();
        let block_of = labels
            .iter()
            .map(|l| {
                let next = seen.len();
                *seen.entry(l.clone()).or_insert(next)
            })
            .collect();
        Self { block_of, blocks: seen.len() }
    }

    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut label = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            for &x in block {
                if x >= n || label[x] != usize::MAX {
                    return Err(Error::InvalidSpace(format!("atom {x} missing from range or repeated")));
                }
                label[x] = b;
            }
        }
        if label.contains(&usize::MAX) {
            return Err(Error::InvalidSpace("blocks do not cover every atom".into()));
        }
        Ok(Self::from_labels(&label))
    }

    pub fn discrete(n: usize) -> Self {
        Self { block_of: (0..n).collect(), blocks: n }
    }

    pub fn trivial(n: usize) -> Self {
        Self { block_of: vec![0; n], blocks: usize::from(n > 0) }
    }

    /// Connected components of the graph with edges `{x, s(x)}`.
    pub fn orbits<'a>(n: usize, perms: impl IntoIterator<Item = &'a Automorphism>) -> Result<Self> {
        let mut uf = UnionFind::new(n);
        for p in perms {
            if p.len() != n {
                return Err(Error::SizeMismatch { left: n, right: p.len() });
            }
            for x in 0..n {
                uf.union(x, p.apply(x));
            }
        }
        let roots: Vec<usize> = (0..n).map(|x| uf.find(x)).collect();
        Ok(Self::from_labels(&roots))
    }

    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_of.is_empty()
    }

    pub fn block_count(&self) -> usize {
        self.blocks
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    pub fn block_ids(&self) -> &[usize] {
        &self.block_of
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.blocks];
        for (x, &b) in self.block_of.iter().enumerate() {
            out[b].push(x);
        }
        out
    }

    /// Common refinement: nonempty intersections of blocks.
    pub fn refine(&self, other: &Partition) -> Result<Partition> {
        if self.len() != other.len() {
            return Err(Error::SizeMismatch { left: self.len(), right: other.len() });
        }
        let pairs: Vec<(usize, usize)> = self.block_of.iter().copied().zip(other.block_of.iter().copied()).collect();
        Ok(Self::from_labels(&pairs))
    }

    pub fn is_trivial(&self) -> bool {
        self.blocks <= 1
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks == self.len()
    }

    /// True if every block of `finer` lies inside a block of `self`.
    pub fn is_coarsening_of(&self, finer: &Partition) -> bool {
        if self.len() != finer.len() {
            return false;
        }
        let mut image = vec![usize::MAX; finer.blocks];
        for x in 0..self.len() {
            let fb = finer.block_of[x];
            if image[fb] == usize::MAX {
                image[fb] = self.block_of[x];
            } else if image[fb] != self.block_of[x] {
                return false;
            }
        }
        true
    }

    /// Whether the set of atoms is a union of blocks.
    pub fn is_measurable(&self, set: &[bool]) -> bool {
        let mut value = vec![None; self.blocks];
        for (x, &inside) in set.iter().enumerate() {
            let b = self.block_of[x];
            match value[b] {
                None => value[b] = Some(inside),
                Some(v) if v != inside => return false,
                _ => {}
            }
        }
        true
    }

    /// Space-separated block ids, the partition file format.
    pub fn to_text(&self) -> String {
        let ids: Vec<String> = self.block_of.iter().map(|b| b.to_string()).collect();
        ids.join(" ")
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let ids: std::result::Result<Vec<usize>, _> = text.split_whitespace().map(str::parse).collect();
        let ids = ids.map_err(|_| Error::parse(1, "partition must be a list of integers"))?;
        Ok(Self::from_labels(&ids))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, block) in self.blocks().iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let atoms: Vec<String> = block.iter().map(|x| x.to_string()).collect();
            write!(f, "{{{}}}", atoms.join(","))?;
        }
        Ok(())
    }
}
