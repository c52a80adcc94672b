use std::fmt;

use super::{CommutingPair, Evaluator, PmpAction};
use crate::groups::GroupKind;

/// One way in which supplied data fails to be a measure-preserving action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    WeightNotPreserved { generator: String, atom: usize },
    NotHomomorphism { g: String, h: String, atom: usize },
    NotCommuting { left: String, right: String, atom: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WeightNotPreserved { generator, atom } => {
                write!(f, "generator {generator} moves atom {atom} to an atom of different weight")
            }
            Violation::NotHomomorphism { g, h, atom } => {
                write!(f, "image of {g}*{h} differs from the composite at atom {atom}")
            }
            Violation::NotCommuting { left, right, atom } => {
                write!(f, "left generator {left} and right generator {right} do not commute at atom {atom}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("; "))
    }
}

pub(super) fn validate_action(action: &PmpAction) -> ValidationReport {
    let mut report = ValidationReport::default();
    collect(action, &mut report);
    report
}

fn collect(action: &PmpAction, report: &mut ValidationReport) {
    let group = &action.group;
    for (s, img) in group.generators().iter().zip(&action.generator_images) {
        if let Err(atom) = action.space.check_preserved(img) {
            report.violations.push(Violation::WeightNotPreserved { generator: group.format_element(s), atom });
        }
    }
    match (&action.eval, group.kind()) {
        (Evaluator::Finite(images), GroupKind::Finite(table)) => {
            'outer: for a in 0..table.order() {
                for b in 0..table.order() {
                    let ab = &images[table.mul(a, b)];
                    let (ia, ib) = (&images[a], &images[b]);
                    if let Some(x) = (0..ab.len()).find(|&x| ab.apply(x) != ia.apply(ib.apply(x))) {
                        report.violations.push(Violation::NotHomomorphism {
                            g: a.to_string(),
                            h: b.to_string(),
                            atom: x,
                        });
                        break 'outer;
                    }
                }
            }
        }
        (Evaluator::Product(l, r), _) => {
            collect(l, report);
            collect(r, report);
            let lg = l.group.generators();
            let rg = r.group.generators();
            for (s, ls) in lg.iter().zip(&l.generator_images) {
                for (t, rt) in rg.iter().zip(&r.generator_images) {
                    if let Some(atom) = non_commuting(ls, rt) {
                        report.violations.push(Violation::NotCommuting {
                            left: l.group.format_element(s),
                            right: r.group.format_element(t),
                            atom,
                        });
                    }
                }
            }
        }
        _ => {}
    }
}

fn non_commuting(a: &crate::spaces::Automorphism, b: &crate::spaces::Automorphism) -> Option<usize> {
    (0..a.len()).find(|&x| a.apply(b.apply(x)) != b.apply(a.apply(x)))
}

pub(super) fn validate_pair(pair: &CommutingPair) -> ValidationReport {
    let mut report = ValidationReport::default();
    collect(&pair.left, &mut report);
    collect(&pair.right, &mut report);
    let (l, r) = (&pair.left, &pair.right);
    for (s, ls) in l.group.generators().iter().zip(&l.generator_images) {
        for (t, rt) in r.group.generators().iter().zip(&r.generator_images) {
            if let Some(atom) = non_commuting(ls, rt) {
                report.violations.push(Violation::NotCommuting {
                    left: l.group.format_element(s),
                    right: r.group.format_element(t),
                    atom,
                });
            }
        }
    }
    report
}
