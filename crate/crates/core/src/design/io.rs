//! Design files.
//!
//! Text: a header line `t v k lambda`, then one block per line as
//! space-separated ascending point indices. JSON carries the same fields.
//! Both writers are canonical, so parse-then-write reproduces a canonical
//! file byte for byte.

use serde::{Deserialize, Serialize};

use super::blocks::Design;
use super::params::DesignParams;
use crate::error::{Error, Result};
use crate::gfspace::PointIndex;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignFile {
    pub t: u64,
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub blocks: Vec<Vec<PointIndex>>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn ints<T: std::str::FromStr>(s: &str, line: usize) -> Result<Vec<T>> {
    s.split_whitespace()
        .map(|tok| {
            tok.parse::<T>()
                .map_err(|_| parse_err(line, format!("bad integer '{tok}'")))
        })
        .collect()
}

impl DesignFile {
    pub fn new(params: DesignParams, design: &Design) -> Self {
        DesignFile {
            t: params.t,
            v: params.v,
            k: params.k,
            lambda: params.lambda,
            blocks: design.blocks().to_vec(),
        }
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
        let h: Vec<u64> = ints(header, 1)?;
        let [t, v, k, lambda] = h[..] else {
            return Err(parse_err(1, "header must be 't v k lambda'"));
        };
        let mut blocks = Vec::new();
        let mut trailing_blank = false;
        for (i, line) in lines {
            let n = i + 1;
            if line.trim().is_empty() {
                trailing_blank = true;
                continue;
            }
            if trailing_blank {
                return Err(parse_err(n, "blank line inside block list"));
            }
            let block: Vec<PointIndex> = ints(line, n)?;
            if block.len() as u64 != k {
                return Err(parse_err(n, format!("block has {} points, expected {k}", block.len())));
            }
            if block.windows(2).any(|w| w[0] >= w[1]) {
                return Err(parse_err(n, "block is not strictly increasing"));
            }
            if block.iter().any(|&x| x as u64 >= v) {
                return Err(parse_err(n, format!("point out of range [0, {v})")));
            }
            blocks.push(block);
        }
        Ok(DesignFile {
            t,
            v,
            k,
            lambda,
            blocks,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {} {}\n", self.t, self.v, self.k, self.lambda);
        for b in &self.blocks {
            let line: Vec<String> = b.iter().map(|x| x.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("design file serializes");
        s.push('\n');
        s
    }

    /// Detects JSON by a leading `{`.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::parse_json(text)
        } else {
            Self::parse_text(text)
        }
    }

    pub fn params(&self) -> Result<DesignParams> {
        DesignParams::new(self.t, self.v, self.k, self.lambda)
    }

    pub fn design(&self) -> Result<Design> {
        let v = u32::try_from(self.v).map_err(|_| parse_err(1, "v too large"))?;
        Design::new(v, self.k as u32, self.blocks.clone())
    }
}
