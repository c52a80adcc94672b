//! Reduced words in free groups and Stallings folding.

use std::cmp::Ordering;
use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use crate::{Error, Result};

/// A standard generator `a_{index+1}` or its inverse.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Letter {
    pub index: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(index: usize, inverse: bool) -> Self {
        Self { index, inverse }
    }

    pub fn inv(self) -> Self {
        Self { index: self.index, inverse: !self.inverse }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}{}", self.index + 1, if self.inverse { "'" } else { "" })
    }
}

/// A freely reduced word. Ordered shortlex, letters by (index, sign).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Free reduction with a stack; validates letters against `rank`.
    pub fn reduce(letters: &[Letter], rank: usize) -> Result<Word> {
        let mut stack: Vec<Letter> = Vec::with_capacity(letters.len());
        for &l in letters {
            if l.index >= rank {
                return Err(Error::LetterOutOfRange { letter: l.index, rank });
            }
            if stack.last() == Some(&l.inv()) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        Ok(Word(stack))
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].inv())
    }

    pub fn multiply(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        for &l in &other.0 {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn power(&self, n: usize) -> Word {
        (0..n).fold(Word::identity(), |acc, _| acc.multiply(self))
    }

    pub fn max_letter(&self) -> Option<usize> {
        self.0.iter().map(|l| l.index).max()
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Folded Stallings graph of the subgroup generated by a set of words.
///
/// Vertex 0 is the base point. After folding, every vertex has at most one
/// outgoing edge per signed letter, so membership is a single walk.
#[derive(Debug)]
pub struct StallingsGraph {
    parent: Vec<usize>,
    edges: Vec<BTreeMap<Letter, usize>>,
}

impl StallingsGraph {
    pub fn new(words: &[Word]) -> Self {
        let mut g = StallingsGraph { parent: vec![0], edges: vec![BTreeMap::new()] };
        let mut pending = VecDeque::new();
        for w in words {
            if w.is_empty() {
                continue;
            }
            let mut at = 0;
            let n = w.len();
            for (i, &l) in w.letters().iter().enumerate() {
                let next = if i + 1 == n { 0 } else { g.add_vertex() };
                g.add_edge(at, l, next, &mut pending);
                at = next;
            }
        }
        g.fold(&mut pending);
        g
    }

    fn add_vertex(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.edges.push(BTreeMap::new());
        self.parent.len() - 1
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn insert_half(&mut self, from: usize, l: Letter, to: usize, pending: &mut VecDeque<(usize, usize)>) {
        match self.edges[from].get(&l) {
            Some(&existing) => pending.push_back((existing, to)),
            None => {
                self.edges[from].insert(l, to);
            }
        }
    }

    fn add_edge(&mut self, from: usize, l: Letter, to: usize, pending: &mut VecDeque<(usize, usize)>) {
        self.insert_half(from, l, to, pending);
        self.insert_half(to, l.inv(), from, pending);
    }

    fn fold(&mut self, pending: &mut VecDeque<(usize, usize)>) {
        while let Some((a, b)) = pending.pop_front() {
            let (a, b) = (self.find(a), self.find(b));
            if a == b {
                continue;
            }
            // keep the smaller id so the base point survives as 0
            let (keep, gone) = if a < b { (a, b) } else { (b, a) };
            self.parent[gone] = keep;
            let moved = std::mem::take(&mut self.edges[gone]);
            for (l, t) in moved {
                self.insert_half(keep, l, t, pending);
            }
        }
    }

    pub fn contains(&mut self, w: &Word) -> bool {
        let mut at = self.find(0);
        for &l in w.letters() {
            match self.edges[at].get(&l).copied() {
                Some(t) => at = self.find(t),
                None => return false,
            }
        }
        at == self.find(0)
    }

    pub fn vertex_count(&mut self) -> usize {
        (0..self.parent.len()).filter(|&v| self.find(v) == v).count()
    }
}

/// Exact test whether `words` generate the whole free group of `rank`.
pub fn generates_free(words: &[Word], rank: usize) -> bool {
    let mut g = StallingsGraph::new(words);
    (0..rank).all(|i| g.contains(&Word::letter(Letter::new(i, false))))
}
