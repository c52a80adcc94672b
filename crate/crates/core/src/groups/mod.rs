//! Finitely generated groups and the exact convolution algebra of
//! finite-support probability measures on them.
//!
//! Three kinds of group are supported: finite groups given by a
//! multiplication table, free groups of finite rank (elements are reduced
//! words) and direct products of supported groups.

mod expr;
mod finite;
mod free;
mod measure;

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

pub(crate) use finite::is_permutation;
pub use finite::FiniteTable;
pub use free::{generates_free, Letter, StallingsGraph, Word};
pub use measure::{FiniteSupportMeasure, FloatMeasure, DEFAULT_SUPPORT_CAP};

use crate::{Error, Result};

/// Shared handle to a group descriptor.
pub type Group = Arc<GroupDescriptor>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GroupKind {
    Finite(FiniteTable),
    Free { rank: usize },
    Product(Group, Group),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupDescriptor {
    kind: GroupKind,
    generators: Vec<GroupElement>,
}

/// An element of a supported group. Which group it belongs to is only known
/// relative to a descriptor; see [`GroupDescriptor::contains`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum GroupElement {
    Finite(usize),
    Free(Word),
    Pair(Box<GroupElement>, Box<GroupElement>),
}

impl GroupElement {
    pub fn pair(left: GroupElement, right: GroupElement) -> Self {
        GroupElement::Pair(Box::new(left), Box::new(right))
    }

    pub fn as_pair(&self) -> Option<(&GroupElement, &GroupElement)> {
        match self {
            GroupElement::Pair(l, r) => Some((l, r)),
            _ => None,
        }
    }
}

/// Three-valued answer for questions that are only semi-decidable in the
/// supported generality.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }

    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::No, _) | (_, Verdict::No) => Verdict::No,
            (Verdict::Yes, Verdict::Yes) => Verdict::Yes,
            _ => Verdict::Unknown,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Unknown => "unknown",
        })
    }
}

impl GroupDescriptor {
    /// Finite group from a validated table; generators default to all elements.
    pub fn finite(rows: Vec<Vec<usize>>, identity: usize) -> Result<Group> {
        let table = FiniteTable::new(rows, identity)?;
        let generators = (0..table.order()).map(GroupElement::Finite).collect();
        Ok(Arc::new(Self { kind: GroupKind::Finite(table), generators }))
    }

    /// Finite group with a chosen generating list, checked by Cayley closure.
    pub fn finite_with_generators(rows: Vec<Vec<usize>>, identity: usize, generators: Vec<usize>) -> Result<Group> {
        let table = FiniteTable::new(rows, identity)?;
        Self::from_table(table, generators)
    }

    fn from_table(table: FiniteTable, generators: Vec<usize>) -> Result<Group> {
        if let Some(&g) = generators.iter().find(|&&g| g >= table.order()) {
            return Err(Error::InvalidGroup(format!("generator {g} out of range")));
        }
        if !table.closure(&generators).iter().all(|&b| b) {
            return Err(Error::InvalidGroup("generator list does not generate the group".into()));
        }
        let generators = generators.into_iter().map(GroupElement::Finite).collect();
        Ok(Arc::new(Self { kind: GroupKind::Finite(table), generators }))
    }

    /// Z/n with residues as indices and generator 1 (no generators for n = 1).
    pub fn cyclic(n: usize) -> Result<Group> {
        if n == 0 {
            return Err(Error::InvalidGroup("cyclic group of order 0".into()));
        }
        let gens = if n == 1 { vec![] } else { vec![1] };
        Self::from_table(FiniteTable::cyclic(n), gens)
    }

    /// Finite group generated by permutations; generators are the given
    /// permutations. Returns the group and the permutation of each element.
    pub fn from_permutations(degree: usize, gens: &[Vec<usize>]) -> Result<(Group, Vec<Vec<usize>>)> {
        let (table, gen_idx, elements) = FiniteTable::from_permutations(degree, gens)?;
        Ok((Self::from_table(table, gen_idx)?, elements))
    }

    pub fn free(rank: usize) -> Result<Group> {
        if rank == 0 {
            return Err(Error::InvalidGroup("free group rank must be at least 1".into()));
        }
        let generators = (0..rank).map(|i| GroupElement::Free(Word::letter(Letter::new(i, false)))).collect();
        Ok(Arc::new(Self { kind: GroupKind::Free { rank }, generators }))
    }

    pub fn product(left: &Group, right: &Group) -> Group {
        let el = left.identity();
        let er = right.identity();
        let generators = left
            .generators
            .iter()
            .map(|g| GroupElement::pair(g.clone(), er.clone()))
            .chain(right.generators.iter().map(|h| GroupElement::pair(el.clone(), h.clone())))
            .collect();
        Arc::new(Self { kind: GroupKind::Product(left.clone(), right.clone()), generators })
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn factors(&self) -> Option<(&Group, &Group)> {
        match &self.kind {
            GroupKind::Product(l, r) => Some((l, r)),
            _ => None,
        }
    }

    pub fn identity(&self) -> GroupElement {
        match &self.kind {
            GroupKind::Finite(t) => GroupElement::Finite(t.identity()),
            GroupKind::Free { .. } => GroupElement::Free(Word::identity()),
            GroupKind::Product(l, r) => GroupElement::pair(l.identity(), r.identity()),
        }
    }

    pub fn is_identity(&self, g: &GroupElement) -> bool {
        *g == self.identity()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        match (&self.kind, g) {
            (GroupKind::Finite(t), GroupElement::Finite(i)) => *i < t.order(),
            (GroupKind::Free { rank }, GroupElement::Free(w)) => {
                w.max_letter().is_none_or(|m| m < *rank) && w.is_reduced()
            }
            (GroupKind::Product(l, r), GroupElement::Pair(a, b)) => l.contains(a) && r.contains(b),
            _ => false,
        }
    }

    fn check(&self, g: &GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch)
        }
    }

    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.mul_unchecked(g, h))
    }

    pub(crate) fn mul_unchecked(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        match (&self.kind, g, h) {
            (GroupKind::Finite(t), GroupElement::Finite(a), GroupElement::Finite(b)) => {
                GroupElement::Finite(t.mul(*a, *b))
            }
            (GroupKind::Free { .. }, GroupElement::Free(a), GroupElement::Free(b)) => GroupElement::Free(a.multiply(b)),
            (GroupKind::Product(l, r), GroupElement::Pair(a1, b1), GroupElement::Pair(a2, b2)) => {
                GroupElement::pair(l.mul_unchecked(a1, a2), r.mul_unchecked(b1, b2))
            }
            _ => unreachable!("mul_unchecked on foreign elements"),
        }
    }

    /// Inverse of a member element.
    pub fn inverse(&self, g: &GroupElement) -> GroupElement {
        match (&self.kind, g) {
            (GroupKind::Finite(t), GroupElement::Finite(a)) => GroupElement::Finite(t.inv(*a)),
            (GroupKind::Free { .. }, GroupElement::Free(w)) => GroupElement::Free(w.inverse()),
            (GroupKind::Product(l, r), GroupElement::Pair(a, b)) => GroupElement::pair(l.inverse(a), r.inverse(b)),
            _ => panic!("inverse of an element outside the group"),
        }
    }

    pub fn reduce_word(&self, letters: &[Letter]) -> Result<GroupElement> {
        match self.kind {
            GroupKind::Free { rank } => Ok(GroupElement::Free(Word::reduce(letters, rank)?)),
            _ => Err(Error::DescriptorMismatch),
        }
    }

    pub fn order(&self) -> Option<usize> {
        match &self.kind {
            GroupKind::Finite(t) => Some(t.order()),
            GroupKind::Free { .. } => None,
            GroupKind::Product(l, r) => Some(l.order()?.checked_mul(r.order()?)?),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    /// All elements of a finite group in canonical order.
    pub fn elements(&self) -> Option<Vec<GroupElement>> {
        match &self.kind {
            GroupKind::Finite(t) => Some((0..t.order()).map(GroupElement::Finite).collect()),
            GroupKind::Free { .. } => None,
            GroupKind::Product(l, r) => {
                let le = l.elements()?;
                let re = r.elements()?;
                Some(le.iter().flat_map(|a| re.iter().map(move |b| GroupElement::pair(a.clone(), b.clone()))).collect())
            }
        }
    }

    /// Whether the subgroup generated by `set` is the whole group.
    ///
    /// Exact for finite groups (closure), free groups (Stallings folding)
    /// and finite products. Products with an infinite factor answer `No`
    /// when a projection fails to generate, `Yes` when a projection
    /// generates and the kernel elements `g g'^-1` (same other coordinate)
    /// generate the opposite factor, and `Unknown` otherwise.
    pub fn generates(&self, set: &[GroupElement]) -> Verdict {
        if set.iter().any(|g| !self.contains(g)) {
            return Verdict::No;
        }
        match &self.kind {
            GroupKind::Finite(t) => {
                let idx: Vec<usize> = set
                    .iter()
                    .map(|g| match g {
                        GroupElement::Finite(i) => *i,
                        _ => unreachable!(),
                    })
                    .collect();
                Verdict::from_bool(t.closure(&idx).iter().all(|&b| b))
            }
            GroupKind::Free { rank } => {
                let words: Vec<Word> = set
                    .iter()
                    .map(|g| match g {
                        GroupElement::Free(w) => w.clone(),
                        _ => unreachable!(),
                    })
                    .collect();
                Verdict::from_bool(generates_free(&words, *rank))
            }
            GroupKind::Product(l, r) => {
                if let Some(order) = self.order() {
                    return Verdict::from_bool(self.closure_size(set) == order);
                }
                let pairs: Vec<(&GroupElement, &GroupElement)> = set.iter().filter_map(|g| g.as_pair()).collect();
                let left_proj: Vec<GroupElement> = pairs.iter().map(|p| p.0.clone()).collect();
                let right_proj: Vec<GroupElement> = pairs.iter().map(|p| p.1.clone()).collect();
                let vl = l.generates(&left_proj);
                let vr = r.generates(&right_proj);
                if vl == Verdict::No || vr == Verdict::No {
                    return Verdict::No;
                }
                let left_kernel = kernel_elements(l, pairs.iter().map(|p| (p.0, p.1)));
                let right_kernel = kernel_elements(r, pairs.iter().map(|p| (p.1, p.0)));
                if (vr == Verdict::Yes && l.generates(&left_kernel) == Verdict::Yes)
                    || (vl == Verdict::Yes && r.generates(&right_kernel) == Verdict::Yes)
                {
                    Verdict::Yes
                } else {
                    Verdict::Unknown
                }
            }
        }
    }

    fn closure_size(&self, set: &[GroupElement]) -> usize {
        let e = self.identity();
        let mut seen: HashSet<GroupElement> = HashSet::from([e.clone()]);
        let mut stack = vec![e];
        while let Some(x) = stack.pop() {
            for s in set {
                let y = self.mul_unchecked(s, &x);
                if seen.insert(y.clone()) {
                    stack.push(y);
                }
            }
        }
        seen.len()
    }

    pub fn format_element(&self, g: &GroupElement) -> String {
        match g {
            GroupElement::Finite(i) => i.to_string(),
            GroupElement::Free(w) => w.to_string(),
            GroupElement::Pair(a, b) => match &self.kind {
                GroupKind::Product(l, r) => format!("({}|{})", l.format_element(a), r.format_element(b)),
                _ => format!("({a:?}|{b:?})"),
            },
        }
    }

    /// Parses an element literal: indices for finite groups, `e` or
    /// space-separated letters `a1 a2'` for free groups, `(<left>|<right>)`
    /// for products.
    pub fn parse_element(&self, text: &str) -> Result<GroupElement> {
        let text = text.trim();
        let bad = |m: String| Error::parse(0, m);
        let g = match &self.kind {
            GroupKind::Finite(_) => {
                GroupElement::Finite(text.parse().map_err(|_| bad(format!("bad finite element literal {text:?}")))?)
            }
            GroupKind::Free { rank } => {
                let mut letters = Vec::new();
                for tok in text.split_whitespace() {
                    if tok == "e" {
                        continue;
                    }
                    let (body, inverse) = match tok.strip_suffix('\'') {
                        Some(b) => (b, true),
                        None => (tok, false),
                    };
                    let index: usize = body
                        .strip_prefix('a')
                        .and_then(|n| n.parse().ok())
                        .filter(|&n: &usize| n >= 1)
                        .ok_or_else(|| bad(format!("bad letter {tok:?}")))?;
                    letters.push(Letter::new(index - 1, inverse));
                }
                GroupElement::Free(Word::reduce(&letters, *rank)?)
            }
            GroupKind::Product(l, r) => {
                let inner = text
                    .strip_prefix('(')
                    .and_then(|t| t.strip_suffix(')'))
                    .ok_or_else(|| bad(format!("product literal {text:?} must be parenthesized")))?;
                let split = top_level_bar(inner).ok_or_else(|| bad(format!("product literal {text:?} lacks '|'")))?;
                GroupElement::pair(l.parse_element(&inner[..split])?, r.parse_element(&inner[split + 1..])?)
            }
        };
        self.check(&g)?;
        Ok(g)
    }
}

fn kernel_elements<'a>(
    group: &Group,
    pairs: impl Iterator<Item = (&'a GroupElement, &'a GroupElement)> + Clone,
) -> Vec<GroupElement> {
    let items: Vec<_> = pairs.collect();
    let mut out = Vec::new();
    for (i, (g, h)) in items.iter().enumerate() {
        for (g2, h2) in &items[i..] {
            if h == h2 && g != g2 {
                out.push(group.mul_unchecked(g, &group.inverse(g2)));
            }
        }
    }
    out
}

fn top_level_bar(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '|' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free2() -> Group {
        GroupDescriptor::free(2).unwrap()
    }

    fn el(g: &Group, s: &str) -> GroupElement {
        g.parse_element(s).unwrap()
    }

    #[test]
    fn multiply_examples() {
        let f = free2();
        assert_eq!(f.multiply(&el(&f, "a1"), &el(&f, "a1'")).unwrap(), f.identity());
        assert_eq!(f.multiply(&el(&f, "a1 a2"), &el(&f, "a2' a1")).unwrap(), el(&f, "a1 a1"));
        let z3 = GroupDescriptor::cyclic(3).unwrap();
        assert_eq!(z3.multiply(&GroupElement::Finite(1), &GroupElement::Finite(2)).unwrap(), GroupElement::Finite(0));
    }

    #[test]
    fn inverse_examples() {
        let f = free2();
        assert_eq!(f.inverse(&f.identity()), f.identity());
        assert_eq!(f.inverse(&el(&f, "a1 a2'")), el(&f, "a2 a1'"));
        let z3 = GroupDescriptor::cyclic(3).unwrap();
        assert_eq!(z3.inverse(&GroupElement::Finite(1)), GroupElement::Finite(2));
    }

    #[test]
    fn cross_descriptor_is_error() {
        let f = free2();
        let z3 = GroupDescriptor::cyclic(3).unwrap();
        assert_eq!(f.multiply(&GroupElement::Finite(0), &f.identity()), Err(Error::DescriptorMismatch));
        assert_eq!(z3.multiply(&GroupElement::Finite(3), &GroupElement::Finite(0)), Err(Error::DescriptorMismatch));
        let f1 = GroupDescriptor::free(1).unwrap();
        assert!(f1.multiply(&el(&f, "a2"), &f1.identity()).is_err());
    }

    #[test]
    fn literal_round_trip() {
        let f = free2();
        let z6 = GroupDescriptor::cyclic(6).unwrap();
        let p = GroupDescriptor::product(&f, &z6);
        let pp = GroupDescriptor::product(&p, &f);
        for (g, s) in [(&f, "a1 a2'"), (&f, "e"), (&p, "(a1|5)"), (&pp, "((e|0)|a2 a2)")] {
            let x = el(g, s);
            assert_eq!(g.format_element(&x), s);
        }
        assert!(p.parse_element("a1|5").is_err());
        assert!(f.parse_element("a3").is_err());
        assert!(f.parse_element("b1").is_err());
    }

    #[test]
    fn generating_examples() {
        let z6 = GroupDescriptor::cyclic(6).unwrap();
        let f = |v: &[usize]| v.iter().map(|&i| GroupElement::Finite(i)).collect::<Vec<_>>();
        assert_eq!(z6.generates(&f(&[2, 3])), Verdict::Yes);
        assert_eq!(z6.generates(&f(&[2, 4])), Verdict::No);
        let f2 = free2();
        assert_eq!(f2.generates(&[el(&f2, "a1")]), Verdict::No);
        assert_eq!(f2.generates(&[el(&f2, "a1 a2"), el(&f2, "a2")]), Verdict::Yes);
    }

    #[test]
    fn product_generation() {
        let z = GroupDescriptor::free(1).unwrap();
        let z2 = GroupDescriptor::cyclic(2).unwrap();
        let z3 = GroupDescriptor::cyclic(3).unwrap();
        let p = GroupDescriptor::product(&z2, &z2);
        // diagonal element only
        assert_eq!(p.generates(&[el(&p, "(1|1)")]), Verdict::No);
        assert_eq!(p.generates(&[el(&p, "(1|1)"), el(&p, "(1|0)")]), Verdict::Yes);
        let q = GroupDescriptor::product(&z, &z3);
        let s: Vec<_> = ["(a1|1)", "(a1|2)", "(a1'|1)", "(a1'|2)"].iter().map(|s| el(&q, s)).collect();
        assert_eq!(q.generates(&s), Verdict::Yes);
        // projection onto Z misses a1
        assert_eq!(q.generates(&[el(&q, "(a1 a1|1)")]), Verdict::No);
        // Z x Z diagonal plus (a1^2, e)... still not everything, undecided here
        let zz = GroupDescriptor::product(&z, &z);
        assert_eq!(zz.generates(&[el(&zz, "(a1|a1)"), el(&zz, "(a1 a1|e)")]), Verdict::Unknown);
        assert_eq!(zz.generates(&[el(&zz, "(a1|a1)"), el(&zz, "(a1|e)")]), Verdict::Yes);
    }

    #[test]
    fn product_generators_and_elements() {
        let z2 = GroupDescriptor::cyclic(2).unwrap();
        let z3 = GroupDescriptor::cyclic(3).unwrap();
        let p = GroupDescriptor::product(&z2, &z3);
        assert_eq!(p.generators(), &[el(&p, "(1|0)"), el(&p, "(0|1)")]);
        assert_eq!(p.order(), Some(6));
        assert_eq!(p.elements().unwrap().len(), 6);
        assert_eq!(p.generates(p.generators()), Verdict::Yes);
    }
}
