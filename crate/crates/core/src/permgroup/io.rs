//! Text format for generator sets.
//!
//! ```text
//! # comments and blank lines are ignored
//! degree 8
//! (0 1)(2 3)
//! 1 0 3 2 5 4 7 6
//! ```
//!
//! Each remaining line is one permutation, either in cycle notation or as a
//! full image list. The `degree` line is required unless some image list fixes it.
//! [`write_group`] always emits the `degree` line and cycle notation.

use super::group::FiniteGroup;
use super::perm::Permutation;
use crate::error::{Error, Result};
use crate::gfspace::PointIndex;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

enum Line {
    Cycles(Vec<Vec<PointIndex>>),
    Images(Vec<PointIndex>),
}

fn parse_cycles(s: &str, line: usize) -> Result<Vec<Vec<PointIndex>>> {
    let mut cycles = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| parse_err(line, "expected '('"))?;
        let close = body
            .find(')')
            .ok_or_else(|| parse_err(line, "unclosed cycle"))?;
        let cycle = body[..close]
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<PointIndex>()
                    .map_err(|_| parse_err(line, format!("bad point '{t}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
        rest = body[close + 1..].trim_start();
    }
    Ok(cycles)
}

pub fn parse_group(text: &str) -> Result<FiniteGroup> {
    let mut degree: Option<u32> = None;
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let s = raw.split('#').next().unwrap().trim();
        if s.is_empty() {
            continue;
        }
        if let Some(rest) = s.strip_prefix("degree") {
            let d = rest
                .trim()
                .parse::<u32>()
                .map_err(|_| parse_err(n, "bad degree"))?;
            if degree.is_some_and(|old| old != d) {
                return Err(parse_err(n, "conflicting degree"));
            }
            degree = Some(d);
        } else if s.starts_with('(') {
            lines.push((n, Line::Cycles(parse_cycles(s, n)?)));
        } else {
            let images = s
                .split_whitespace()
                .map(|t| {
                    t.parse::<PointIndex>()
                        .map_err(|_| parse_err(n, format!("bad image '{t}'")))
                })
                .collect::<Result<Vec<_>>>()?;
            let len = images.len() as u32;
            if degree.is_some_and(|d| d != len) {
                return Err(parse_err(n, format!("image list of length {len} disagrees with degree")));
            }
            degree = Some(len);
            lines.push((n, Line::Images(images)));
        }
    }
    let v = degree.ok_or_else(|| parse_err(1, "missing 'degree' line"))?;
    let mut gens = Vec::with_capacity(lines.len());
    for (n, line) in lines {
        let g = match line {
            Line::Cycles(c) => Permutation::from_cycles(v, &c),
            Line::Images(im) => {
                if im.len() as u32 != v {
                    return Err(parse_err(n, "image list disagrees with degree"));
                }
                Permutation::from_images(im)
            }
        }
        .map_err(|e| parse_err(n, e.to_string()))?;
        gens.push(g);
    }
    FiniteGroup::new(v, gens)
}

pub fn write_group(g: &FiniteGroup) -> String {
    let mut out = format!("degree {}\n", g.degree());
    for s in g.generators() {
        out.push_str(&s.to_string());
        out.push('\n');
    }
    out
}
