use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::groups::{Group, GroupElement};
use crate::{Error, Result};

/// Finitely supported complex function on a group, multiplied by
/// convolution.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupRingElement {
    group: Group,
    coefficients: BTreeMap<GroupElement, Complex64>,
}

impl GroupRingElement {
    /// Repeated elements are summed; zero coefficients are dropped.
    pub fn new(group: &Group, entries: impl IntoIterator<Item = (GroupElement, Complex64)>) -> Result<Self> {
        let mut coefficients: BTreeMap<GroupElement, Complex64> = BTreeMap::new();
        for (g, c) in entries {
            if !group.contains(&g) {
                return Err(Error::DescriptorMismatch);
            }
            *coefficients.entry(g).or_default() += c;
        }
        coefficients.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        Ok(Self { group: group.clone(), coefficients })
    }

    pub fn zero(group: &Group) -> Self {
        Self { group: group.clone(), coefficients: BTreeMap::new() }
    }

    pub fn delta(group: &Group, g: GroupElement) -> Result<Self> {
        Self::new(group, [(g, Complex64::new(1.0, 0.0))])
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroupElement, &Complex64)> {
        self.coefficients.iter()
    }

    pub fn coefficient(&self, g: &GroupElement) -> Complex64 {
        self.coefficients.get(g).copied().unwrap_or_default()
    }

    pub fn support_size(&self) -> usize {
        self.coefficients.len()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.group == other.group {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Self::new(&self.group, self.iter().chain(other.iter()).map(|(g, c)| (g.clone(), *c)))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(&self.group, self.iter().map(|(g, c)| (g.clone(), c * s))).expect("same group")
    }

    /// `(phi psi)(g) = sum_{hk = g} phi(h) psi(k)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut entries = Vec::with_capacity(self.support_size() * other.support_size());
        for (h, a) in self.iter() {
            for (k, b) in other.iter() {
                entries.push((self.group.multiply(h, k)?, a * b));
            }
        }
        Self::new(&self.group, entries)
    }

    /// `phi*(g) = conj(phi(g^-1))`.
    pub fn star(&self) -> Self {
        Self::new(&self.group, self.iter().map(|(g, c)| (self.group.inverse(g), c.conj()))).expect("same group")
    }

    /// One `<element-literal> <re> <im>` line per support element.
    pub fn to_text(&self) -> String {
        self.iter().map(|(g, c)| format!("{} {} {}\n", self.group.format_element(g), c.re, c.im)).collect()
    }

    /// Inverse of [`GroupRingElement::to_text`]; blank lines and `#`
    /// comments are skipped.
    pub fn parse_text(group: &Group, text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() < 3 {
                return Err(Error::parse(i + 1, "expected `<element> <re> <im>`"));
            }
            let (lit, re, im) =
                (tokens[..tokens.len() - 2].join(" "), tokens[tokens.len() - 2], tokens[tokens.len() - 1]);
            let num = |s: &str| s.parse::<f64>().map_err(|_| Error::parse(i + 1, format!("bad number {s:?}")));
            let g = group.parse_element(&lit).map_err(|e| Error::parse(i + 1, e.to_string()))?;
            entries.push((g, Complex64::new(num(re)?, num(im)?)));
        }
        Self::new(group, entries)
    }
}
