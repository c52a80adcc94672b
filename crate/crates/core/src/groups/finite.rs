use std::collections::HashMap;

use crate::{Error, Result};

/// Multiplication table of a finite group over indices `0..order`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteTable {
    order: usize,
    identity: usize,
    table: Vec<usize>,
    inverses: Vec<usize>,
}

impl FiniteTable {
    /// Validates closure, associativity, identity and inverses.
    pub fn new(rows: Vec<Vec<usize>>, identity: usize) -> Result<Self> {
        let order = rows.len();
        if order == 0 {
            return Err(Error::InvalidGroup("empty multiplication table".into()));
        }
        if identity >= order {
            return Err(Error::InvalidGroup(format!("identity {identity} out of range")));
        }
        let mut table = Vec::with_capacity(order * order);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::InvalidGroup(format!("row {i} has length {}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&v| v >= order) {
                return Err(Error::InvalidGroup(format!("entry {bad} out of range in row {i}")));
            }
            table.extend_from_slice(row);
        }
        let mul = |a: usize, b: usize| table[a * order + b];
        for a in 0..order {
            if mul(identity, a) != a || mul(a, identity) != a {
                return Err(Error::InvalidGroup(format!("{identity} is not an identity for {a}")));
            }
        }
        let inverses = (0..order)
            .map(|a| {
                (0..order)
                    .find(|&b| mul(a, b) == identity && mul(b, a) == identity)
                    .ok_or_else(|| Error::InvalidGroup(format!("{a} has no inverse")))
            })
            .collect::<Result<Vec<_>>>()?;
        for a in 0..order {
            for b in 0..order {
                let ab = mul(a, b);
                for c in 0..order {
                    if mul(ab, c) != mul(a, mul(b, c)) {
                        return Err(Error::InvalidGroup(format!("not associative at ({a},{b},{c})")));
                    }
                }
            }
        }
        Ok(Self { order, identity, table, inverses })
    }

    pub fn cyclic(n: usize) -> Self {
        let rows = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        // cyclic tables are groups by construction; skip the cubic check
        let table: Vec<Vec<usize>> = rows;
        let inverses = (0..n).map(|i| (n - i) % n).collect();
        Self { order: n, identity: 0, table: table.concat(), inverses }
    }

    /// Closure of a set of permutations under composition; element 0 is the
    /// identity and `g * h` is the permutation `x -> g(h(x))`.
    pub fn from_permutations(degree: usize, gens: &[Vec<usize>]) -> Result<(Self, Vec<usize>, Vec<Vec<usize>>)> {
        for g in gens {
            if g.len() != degree || !is_permutation(g) {
                return Err(Error::InvalidPermutation(format!("{g:?} is not a permutation of {degree}")));
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut elements = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut cursor = 0;
        while cursor < elements.len() {
            for g in gens {
                let prod: Vec<usize> = elements[cursor].iter().map(|&x| g[x]).collect();
                if !index.contains_key(&prod) {
                    index.insert(prod.clone(), elements.len());
                    elements.push(prod);
                }
            }
            cursor += 1;
        }
        let order = elements.len();
        let mut table = vec![0; order * order];
        for (a, pa) in elements.iter().enumerate() {
            for (b, pb) in elements.iter().enumerate() {
                let prod: Vec<usize> = pb.iter().map(|&x| pa[x]).collect();
                table[a * order + b] = index[&prod];
            }
        }
        let inverses = (0..order)
            .map(|a| (0..order).find(|&b| table[a * order + b] == 0).expect("group element has an inverse"))
            .collect();
        let gen_idx = gens.iter().map(|g| index[g]).collect();
        Ok((Self { order, identity: 0, table, inverses }, gen_idx, elements))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn row(&self, a: usize) -> &[usize] {
        &self.table[a * self.order..(a + 1) * self.order]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// Subgroup generated by `set`, as a membership mask.
    pub fn closure(&self, set: &[usize]) -> Vec<bool> {
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut stack = vec![self.identity];
        while let Some(x) = stack.pop() {
            for &s in set {
                let y = self.mul(s, x);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }
}

pub(crate) fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &x in p {
        if x >= p.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}
