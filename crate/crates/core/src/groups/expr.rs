//! One-line group descriptor expressions:
//! `free(2)`, `cyclic(6)`, `symmetric(3)`, `dihedral(4)`,
//! `perms(3; 1 0 2; 1 2 0)`, `finite(e=0; gens=1; 0 1; 1 0)`,
//! `product(<expr>, <expr>)`.

use super::{FiniteTable, Group, GroupDescriptor, GroupElement, GroupKind};
use crate::{Error, Result};

impl GroupDescriptor {
    /// Expression that [`GroupDescriptor::parse_expr`] maps back to an
    /// equal descriptor.
    pub fn to_expr(&self) -> String {
        match &self.kind {
            GroupKind::Free { rank } => format!("free({rank})"),
            GroupKind::Product(l, r) => format!("product({}, {})", l.to_expr(), r.to_expr()),
            GroupKind::Finite(t) => {
                let gens: Vec<usize> = self
                    .generators
                    .iter()
                    .map(|g| match g {
                        GroupElement::Finite(i) => *i,
                        _ => unreachable!(),
                    })
                    .collect();
                let n = t.order();
                let cyclic_gens: &[usize] = if n == 1 { &[] } else { &[1] };
                if *t == FiniteTable::cyclic(n) && gens == cyclic_gens {
                    return format!("cyclic({n})");
                }
                let mut parts = vec![format!("e={}", t.identity()), format!("gens={}", join(&gens))];
                parts.extend((0..n).map(|a| join(t.row(a))));
                format!("finite({})", parts.join("; "))
            }
        }
    }

    pub fn parse_expr(text: &str) -> Result<Group> {
        let text = text.trim();
        let bad = |m: String| Error::parse(0, m);
        let (head, body) = text
            .split_once('(')
            .and_then(|(h, rest)| rest.strip_suffix(')').map(|b| (h.trim(), b)))
            .ok_or_else(|| bad(format!("group expression {text:?} must look like name(...)")))?;
        let int = |s: &str| -> Result<usize> { s.trim().parse().map_err(|_| bad(format!("bad integer {s:?}"))) };
        match head {
            "free" => GroupDescriptor::free(int(body)?),
            "cyclic" => GroupDescriptor::cyclic(int(body)?),
            "symmetric" => {
                let n = int(body)?;
                if n <= 1 {
                    return GroupDescriptor::cyclic(1);
                }
                let swap = (0..n).map(|i| [1, 0].get(i).copied().unwrap_or(i)).collect();
                let cycle = (0..n).map(|i| (i + 1) % n).collect();
                Ok(GroupDescriptor::from_permutations(n, &[swap, cycle])?.0)
            }
            "dihedral" => {
                let n = int(body)?;
                if n < 3 {
                    return Err(bad(format!("dihedral({n}) needs at least 3 points")));
                }
                let rot = (0..n).map(|i| (i + 1) % n).collect();
                let refl = (0..n).map(|i| (n - i) % n).collect();
                Ok(GroupDescriptor::from_permutations(n, &[rot, refl])?.0)
            }
            "perms" => {
                let mut items = body.split(';');
                let degree = int(items.next().unwrap_or(""))?;
                let gens = items.map(ints).collect::<Result<Vec<_>>>()?;
                Ok(GroupDescriptor::from_permutations(degree, &gens)?.0)
            }
            "finite" => {
                let mut identity = 0;
                let mut gens = None;
                let mut rows = Vec::new();
                for item in body.split(';') {
                    let item = item.trim();
                    if let Some(v) = item.strip_prefix("e=") {
                        identity = int(v)?;
                    } else if let Some(v) = item.strip_prefix("gens=") {
                        gens = Some(ints(v)?);
                    } else {
                        rows.push(ints(item)?);
                    }
                }
                match gens {
                    Some(g) => GroupDescriptor::finite_with_generators(rows, identity, g),
                    None => GroupDescriptor::finite(rows, identity),
                }
            }
            "product" => {
                let split = top_level_comma(body).ok_or_else(|| bad(format!("product needs two factors: {text:?}")))?;
                let l = GroupDescriptor::parse_expr(&body[..split])?;
                let r = GroupDescriptor::parse_expr(&body[split + 1..])?;
                Ok(GroupDescriptor::product(&l, &r))
            }
            _ => Err(bad(format!("unknown group constructor {head:?}"))),
        }
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn ints(s: &str) -> Result<Vec<usize>> {
    s.split_whitespace().map(|t| t.parse().map_err(|_| Error::parse(0, format!("bad integer {t:?}")))).collect()
}

fn top_level_comma(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}
