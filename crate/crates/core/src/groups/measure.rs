use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::{Group, GroupDescriptor, GroupElement, Verdict};
use crate::rational::{self, Rational};
use crate::{Error, Result};

/// Default cap on the support size of a convolution result.
pub const DEFAULT_SUPPORT_CAP: usize = 1_000_000;

/// Probability measure with finite support and exact rational weights.
#[derive(Clone, PartialEq, Debug)]
pub struct FiniteSupportMeasure {
    group: Group,
    weights: BTreeMap<GroupElement, Rational>,
}

fn same_group(a: &Group, b: &Group) -> bool {
    std::sync::Arc::ptr_eq(a, b) || a == b
}

impl FiniteSupportMeasure {
    /// Duplicate elements are summed. Weights must be positive and sum to 1.
    pub fn new(group: &Group, entries: impl IntoIterator<Item = (GroupElement, Rational)>) -> Result<Self> {
        let mut weights: BTreeMap<GroupElement, Rational> = BTreeMap::new();
        for (g, w) in entries {
            if !group.contains(&g) {
                return Err(Error::DescriptorMismatch);
            }
            if !w.is_positive() {
                return Err(Error::InvalidMeasure(format!("non-positive weight {}", rational::format(&w))));
            }
            *weights.entry(g).or_insert_with(Rational::zero) += w;
        }
        let total: Rational = weights.values().sum();
        if !total.is_one() {
            return Err(Error::InvalidMeasure(format!("total mass {} != 1", rational::format(&total))));
        }
        Ok(Self { group: group.clone(), weights })
    }

    pub fn point_mass(group: &Group, g: GroupElement) -> Result<Self> {
        Self::new(group, [(g, rational::one())])
    }

    /// Uniform on the listed (distinct or repeated) elements.
    pub fn uniform(group: &Group, elements: &[GroupElement]) -> Result<Self> {
        let w = rational::ratio(1, elements.len() as i64);
        Self::new(group, elements.iter().map(|g| (g.clone(), w.clone())))
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroupElement, &Rational)> {
        self.weights.iter()
    }

    pub fn weight(&self, g: &GroupElement) -> Rational {
        self.weights.get(g).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> Vec<GroupElement> {
        self.weights.keys().cloned().collect()
    }

    pub fn support_size(&self) -> usize {
        self.weights.len()
    }

    pub fn total_mass(&self) -> Rational {
        self.weights.values().sum()
    }

    /// `[w * u](g) = sum over hk = g of w(h) u(k)`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.convolve_capped(other, DEFAULT_SUPPORT_CAP)
    }

    pub fn convolve_capped(&self, other: &Self, cap: usize) -> Result<Self> {
        if !same_group(&self.group, &other.group) {
            return Err(Error::DescriptorMismatch);
        }
        let mut out: BTreeMap<GroupElement, Rational> = BTreeMap::new();
        for (h, wh) in &self.weights {
            for (k, uk) in &other.weights {
                let hk = self.group.mul_unchecked(h, k);
                let w = wh * uk;
                match out.get_mut(&hk) {
                    Some(acc) => *acc += w,
                    None => {
                        out.insert(hk, w);
                        if out.len() > cap {
                            return Err(Error::SupportCapExceeded { size: out.len(), cap });
                        }
                    }
                }
            }
        }
        Ok(Self { group: self.group.clone(), weights: out })
    }

    /// `w^{*1} = w`, `w^{*n} = w * w^{*(n-1)}`.
    pub fn autoconvolve(&self, n: usize) -> Result<Self> {
        self.autoconvolve_capped(n, DEFAULT_SUPPORT_CAP)
    }

    pub fn autoconvolve_capped(&self, n: usize, cap: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMeasure("autoconvolution power must be at least 1".into()));
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = self.convolve_capped(&acc, cap)?;
        }
        Ok(acc)
    }

    /// Product measure on `G x H`.
    pub fn product(&self, other: &Self) -> Self {
        let group = GroupDescriptor::product(&self.group, &other.group);
        self.product_on(other, &group)
    }

    /// Product measure on an existing descriptor for `G x H`; the caller
    /// guarantees the factors match.
    pub fn product_on(&self, other: &Self, group: &Group) -> Self {
        debug_assert!(group.factors().is_some_and(|(l, r)| same_group(l, &self.group) && same_group(r, &other.group)));
        let weights = self
            .weights
            .iter()
            .flat_map(|(g, wg)| {
                other.weights.iter().map(move |(h, uh)| (GroupElement::pair(g.clone(), h.clone()), wg * uh))
            })
            .collect();
        Self { group: group.clone(), weights }
    }

    pub fn is_symmetric(&self) -> bool {
        self.weights.iter().all(|(g, w)| self.weights.get(&self.group.inverse(g)) == Some(w))
    }

    pub fn is_generating(&self) -> Verdict {
        self.group.generates(&self.support())
    }

    /// Symmetric and `w * w` generating; when `w(e) > 0` this reduces to
    /// symmetric and generating.
    pub fn is_absolutely_generating(&self) -> Verdict {
        if !self.is_symmetric() {
            return Verdict::No;
        }
        if self.weights.contains_key(&self.group.identity()) {
            return self.is_generating();
        }
        match self.convolve(self) {
            Ok(sq) => sq.is_generating(),
            Err(_) => Verdict::Unknown,
        }
    }

    /// One line per support element: `<element-literal> <num>/<den>`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (g, w) in &self.weights {
            s.push_str(&self.group.format_element(g));
            s.push(' ');
            s.push_str(&rational::format(w));
            s.push('\n');
        }
        s
    }

    pub fn parse_text(group: &Group, text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (lit, w) = line
                .rsplit_once(char::is_whitespace)
                .ok_or_else(|| Error::parse(i + 1, "expected `<element> <weight>`"))?;
            let g = group.parse_element(lit).map_err(|e| relocate(e, i + 1))?;
            let w = rational::parse(w).ok_or_else(|| Error::parse(i + 1, format!("bad weight {w:?}")))?;
            entries.push((g, w));
        }
        Self::new(group, entries)
    }

    pub fn to_float(&self) -> FloatMeasure {
        FloatMeasure {
            group: self.group.clone(),
            weights: self.weights.iter().map(|(g, w)| (g.clone(), rational::to_f64(w))).collect(),
        }
    }
}

fn relocate(e: Error, line: usize) -> Error {
    match e {
        Error::Parse { message, .. } => Error::Parse { line, message },
        other => other,
    }
}

/// Binary64 counterpart of [`FiniteSupportMeasure`] for fast sweeps.
#[derive(Clone, PartialEq, Debug)]
pub struct FloatMeasure {
    group: Group,
    weights: BTreeMap<GroupElement, f64>,
}

impl FloatMeasure {
    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroupElement, f64)> {
        self.weights.iter().map(|(g, &w)| (g, w))
    }

    pub fn support_size(&self) -> usize {
        self.weights.len()
    }

    pub fn convolve_capped(&self, other: &Self, cap: usize) -> Result<Self> {
        if !same_group(&self.group, &other.group) {
            return Err(Error::DescriptorMismatch);
        }
        let mut out: BTreeMap<GroupElement, f64> = BTreeMap::new();
        for (h, &wh) in &self.weights {
            for (k, &uk) in &other.weights {
                *out.entry(self.group.mul_unchecked(h, k)).or_insert(0.0) += wh * uk;
                if out.len() > cap {
                    return Err(Error::SupportCapExceeded { size: out.len(), cap });
                }
            }
        }
        Ok(Self { group: self.group.clone(), weights: out })
    }

    pub fn product_on(&self, other: &Self, group: &Group) -> Self {
        let weights = self
            .weights
            .iter()
            .flat_map(|(g, &wg)| {
                other.weights.iter().map(move |(h, &uh)| (GroupElement::pair(g.clone(), h.clone()), wg * uh))
            })
            .collect();
        Self { group: group.clone(), weights }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn z() -> Group {
        GroupDescriptor::free(1).unwrap()
    }

    fn m(g: &Group, entries: &[(&str, i64, i64)]) -> FiniteSupportMeasure {
        FiniteSupportMeasure::new(g, entries.iter().map(|(s, n, d)| (g.parse_element(s).unwrap(), ratio(*n, *d))))
            .unwrap()
    }

    #[test]
    fn rejects_bad_weights() {
        let g = z();
        let e = g.identity();
        assert!(FiniteSupportMeasure::new(&g, [(e.clone(), ratio(1, 2))]).is_err());
        assert!(FiniteSupportMeasure::new(&g, [(e.clone(), ratio(3, 2)), (e.clone(), ratio(-1, 2))]).is_err());
        assert!(FiniteSupportMeasure::new(&g, [(GroupElement::Finite(0), ratio(1, 1))]).is_err());
        // duplicates merge
        let d = FiniteSupportMeasure::new(&g, [(e.clone(), ratio(1, 2)), (e.clone(), ratio(1, 2))]).unwrap();
        assert_eq!(d.support_size(), 1);
    }

    #[test]
    fn point_masses_convolve_to_product() {
        let f = GroupDescriptor::free(2).unwrap();
        let a = f.parse_element("a1").unwrap();
        let b = f.parse_element("a2'").unwrap();
        let c = FiniteSupportMeasure::point_mass(&f, a.clone())
            .unwrap()
            .convolve(&FiniteSupportMeasure::point_mass(&f, b.clone()).unwrap())
            .unwrap();
        assert_eq!(c, FiniteSupportMeasure::point_mass(&f, f.multiply(&a, &b).unwrap()).unwrap());
    }

    #[test]
    fn free_two_letters_no_cancellation() {
        let f = GroupDescriptor::free(2).unwrap();
        let w = m(&f, &[("a1", 1, 2), ("a2", 1, 2)]);
        let expected = m(&f, &[("a1 a1", 1, 4), ("a1 a2", 1, 4), ("a2 a1", 1, 4), ("a2 a2", 1, 4)]);
        assert_eq!(w.convolve(&w).unwrap(), expected);
    }

    #[test]
    fn integer_walk_powers() {
        let g = z();
        let w = m(&g, &[("a1'", 1, 2), ("a1", 1, 2)]);
        assert_eq!(w.autoconvolve(1).unwrap(), w);
        assert_eq!(w.autoconvolve(2).unwrap(), m(&g, &[("a1' a1'", 1, 4), ("e", 1, 2), ("a1 a1", 1, 4)]));
        // binomial(3, k) / 8 at odd positions
        assert_eq!(
            w.autoconvolve(3).unwrap(),
            m(&g, &[("a1' a1' a1'", 1, 8), ("a1'", 3, 8), ("a1", 3, 8), ("a1 a1 a1", 1, 8)])
        );
        assert!(w.autoconvolve(0).is_err());
    }

    #[test]
    fn support_cap_is_hard_error() {
        let f = GroupDescriptor::free(2).unwrap();
        let w = m(&f, &[("a1", 1, 4), ("a1'", 1, 4), ("a2", 1, 4), ("a2'", 1, 4)]);
        assert_eq!(w.autoconvolve_capped(3, 20), Err(Error::SupportCapExceeded { size: 21, cap: 20 }));
        assert!(w.autoconvolve_capped(2, 20).is_ok());
    }

    #[test]
    fn product_examples() {
        let z2 = GroupDescriptor::cyclic(2).unwrap();
        let z3 = GroupDescriptor::cyclic(3).unwrap();
        let w = FiniteSupportMeasure::uniform(&z2, &[GroupElement::Finite(0), GroupElement::Finite(1)]).unwrap();
        let u = m(&z3, &[("1", 1, 3), ("2", 2, 3)]);
        let p = w.product(&u);
        assert_eq!(p.support_size(), 4);
        let pg = p.group().clone();
        assert_eq!(p.weight(&pg.parse_element("(0|1)").unwrap()), ratio(1, 6));
        assert_eq!(p.weight(&pg.parse_element("(1|2)").unwrap()), ratio(1, 3));
        let u6 = FiniteSupportMeasure::uniform(&z3, &z3.elements().unwrap()).unwrap();
        let full = w.product(&u6);
        assert!(full.iter().all(|(_, q)| *q == ratio(1, 6)));
        assert_eq!(full.support_size(), 6);
    }

    #[test]
    fn symmetry_and_generation() {
        let g = z();
        assert!(FiniteSupportMeasure::point_mass(&g, g.identity()).unwrap().is_symmetric());
        let w = m(&g, &[("a1'", 1, 2), ("a1", 1, 2)]);
        assert!(w.is_symmetric());
        assert_eq!(w.is_generating(), Verdict::Yes);
        assert_eq!(w.is_absolutely_generating(), Verdict::No);
        let lazy = m(&g, &[("a1'", 1, 3), ("e", 1, 3), ("a1", 1, 3)]);
        assert_eq!(lazy.is_absolutely_generating(), Verdict::Yes);
        let f = GroupDescriptor::free(2).unwrap();
        let nonsym = m(&f, &[("a1", 1, 2), ("a2", 1, 2)]);
        assert!(!nonsym.is_symmetric());
        assert_eq!(nonsym.is_absolutely_generating(), Verdict::No);
    }

    #[test]
    fn text_round_trip() {
        let f = GroupDescriptor::free(2).unwrap();
        let w = m(&f, &[("a1 a2'", 1, 3), ("e", 2, 3)]);
        let text = w.to_text();
        assert_eq!(text, "e 2/3\na1 a2' 1/3\n");
        assert_eq!(FiniteSupportMeasure::parse_text(&f, &text).unwrap(), w);
        assert!(matches!(FiniteSupportMeasure::parse_text(&f, "a1 x\n"), Err(Error::Parse { line: 1, .. })));
    }
}
