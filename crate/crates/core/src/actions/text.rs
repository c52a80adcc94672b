//! Action files:
//!
//! ```text
//! group free(1)
//! space
//! atoms=3
//! 0 1/3
//! 1 1/3
//! 2 1/3
//! generators
//! (0 1 2)
//! ```
//!
//! Pair files share one `space` block and carry `left <group>` and
//! `right <group>` sections, each followed by its generator lines.

use super::{CommutingPair, PmpAction};
use crate::groups::{Group, GroupDescriptor};
use crate::spaces::{Automorphism, FiniteProbabilitySpace, Space};
use crate::{Error, Result};

pub fn write_action(action: &PmpAction) -> String {
    let mut out = format!("group {}\nspace\n{}", action.group().to_expr(), action.space().to_text());
    out.push_str("generators\n");
    push_generators(&mut out, action);
    out
}

pub fn write_pair(pair: &CommutingPair) -> String {
    let mut out = format!("space\n{}", pair.space().to_text());
    out.push_str(&format!("left {}\n", pair.left().group().to_expr()));
    push_generators(&mut out, pair.left());
    out.push_str(&format!("right {}\n", pair.right().group().to_expr()));
    push_generators(&mut out, pair.right());
    out
}

fn push_generators(out: &mut String, action: &PmpAction) {
    for t in action.generator_images() {
        out.push_str(&t.to_cycle_notation());
        out.push('\n');
    }
}

/// Section keyword, its line, the group, and numbered permutation lines.
type Section = (String, usize, Group, Vec<(usize, String)>);

#[derive(Default)]
struct Sections {
    space: Option<(usize, String)>,
    actions: Vec<Section>,
}

fn split_sections(text: &str) -> Result<Sections> {
    let mut s = Sections::default();
    let mut in_space = false;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (word, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match word {
            "space" => {
                if s.space.is_some() {
                    return Err(Error::parse(line_no, "second space block"));
                }
                s.space = Some((line_no, String::new()));
                in_space = true;
            }
            "group" | "left" | "right" => {
                in_space = false;
                let g = GroupDescriptor::parse_expr(rest).map_err(|e| Error::parse(line_no, e.to_string()))?;
                s.actions.push((word.to_string(), line_no, g, Vec::new()));
            }
            "generators" => {
                in_space = false;
                if s.actions.last().map(|a| a.0.as_str()) != Some("group") {
                    return Err(Error::parse(line_no, "generators section without a group line"));
                }
            }
            _ if in_space => {
                let (_, body) = s.space.as_mut().expect("in space block");
                body.push_str(line);
                body.push('\n');
            }
            _ if line.starts_with('(') => match s.actions.last_mut() {
                Some(a) => a.3.push((line_no, line.to_string())),
                None => return Err(Error::parse(line_no, "permutation before any group line")),
            },
            _ => return Err(Error::parse(line_no, format!("unexpected line {line:?}"))),
        }
    }
    Ok(s)
}

fn build(space: &Space, line_no: usize, group: &Group, lines: &[(usize, String)], check: bool) -> Result<PmpAction> {
    if lines.len() != group.generators().len() {
        return Err(Error::parse(
            line_no,
            format!("{} generator lines for {} generators", lines.len(), group.generators().len()),
        ));
    }
    let images = lines
        .iter()
        .map(|(n, l)| {
            Automorphism::parse_cycle_notation(space.atom_count(), l).map_err(|e| Error::parse(*n, e.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    if check {
        PmpAction::new(group, space, images)
    } else {
        PmpAction::new_unchecked(group, space, images)
    }
}

fn parse_space(s: &Sections) -> Result<Space> {
    let (line_no, body) = s.space.as_ref().ok_or_else(|| Error::parse(0, "missing space block"))?;
    FiniteProbabilitySpace::parse_text(body).map_err(|e| match e {
        Error::Parse { line, message } => Error::parse(line_no + line, message),
        other => other,
    })
}

pub fn parse_action(text: &str) -> Result<PmpAction> {
    read_action(text, true)
}

/// Like [`parse_action`] but skips measure and homomorphism checks, so a
/// broken action can be loaded and handed to `validate`.
pub fn parse_action_unchecked(text: &str) -> Result<PmpAction> {
    read_action(text, false)
}

pub fn parse_pair(text: &str) -> Result<CommutingPair> {
    read_pair(text, true)
}

/// Like [`parse_pair`] but skips validation of both sides and of
/// commutation.
pub fn parse_pair_unchecked(text: &str) -> Result<CommutingPair> {
    read_pair(text, false)
}

fn read_action(text: &str, check: bool) -> Result<PmpAction> {
    let s = split_sections(text)?;
    let space = parse_space(&s)?;
    match s.actions.as_slice() {
        [(kind, line_no, g, lines)] if kind == "group" => build(&space, *line_no, g, lines, check),
        _ => Err(Error::parse(0, "an action file holds exactly one group section")),
    }
}

fn read_pair(text: &str, check: bool) -> Result<CommutingPair> {
    let s = split_sections(text)?;
    let space = parse_space(&s)?;
    match s.actions.as_slice() {
        [(l, ln, lg, llines), (r, rn, rg, rlines)] if l == "left" && r == "right" => {
            let left = build(&space, *ln, lg, llines, check)?;
            let right = build(&space, *rn, rg, rlines, check)?;
            if check {
                CommutingPair::new(left, right)
            } else {
                CommutingPair::new_unchecked(left, right)
            }
        }
        _ => Err(Error::parse(0, "a pair file holds a left section followed by a right section")),
    }
}
