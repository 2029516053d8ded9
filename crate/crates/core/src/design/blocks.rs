use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::combin::{binomial_u64, for_each_subset, next_combination, BinomTable};
use crate::error::{usage, Result};
use crate::gfspace::PointIndex;
use crate::guard::Guard;

/// Points `[0, v)` with a family of `k`-subsets, each stored ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Design {
    v: u32,
    k: u32,
    blocks: Vec<Vec<PointIndex>>,
    simple: bool,
}

/// An incident point-block pair; the block is referenced by position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Flag {
    pub point: PointIndex,
    pub block: usize,
}

/// Outcome of exhaustive coverage counting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub t: u32,
    pub holds: bool,
    /// The expected lambda, or the inferred one.
    pub lambda: u64,
    /// First t-subset (in colex order) whose count differs, and its count.
    pub counterexample: Option<(Vec<PointIndex>, u64)>,
}

impl Design {
    /// Blocks must be strictly increasing `k`-tuples over `[0, v)`. Repeated
    /// blocks are accepted and make the design non-simple.
    pub fn new(v: u32, k: u32, blocks: Vec<Vec<PointIndex>>) -> Result<Self> {
        for b in &blocks {
            if b.len() != k as usize {
                return Err(usage(format!("block {b:?} does not have {k} points")));
            }
            if b.windows(2).any(|w| w[0] >= w[1]) {
                return Err(usage(format!("block {b:?} is not strictly increasing")));
            }
            if b.last().is_some_and(|&x| x >= v) {
                return Err(usage(format!("block {b:?} leaves [0, {v})")));
            }
        }
        let mut seen = HashSet::with_capacity(blocks.len());
        let simple = blocks.iter().all(|b| seen.insert(b));
        Ok(Design {
            v,
            k,
            blocks,
            simple,
        })
    }

    /// All `k`-subsets of `[0, v)`.
    pub fn complete(v: u32, k: u32, guard: &Guard) -> Result<Self> {
        guard.check("complete design", binomial_u64(v as u64, k as u64))?;
        let mut blocks = Vec::new();
        let mut c: Vec<PointIndex> = (0..k).collect();
        if k <= v {
            loop {
                blocks.push(c.clone());
                if !next_combination(&mut c, v) {
                    break;
                }
            }
        }
        Design::new(v, k, blocks)
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn b(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<PointIndex>] {
        &self.blocks
    }

    pub fn is_simple(&self) -> bool {
        self.simple
    }

    pub(crate) fn require_simple(&self) -> Result<()> {
        if !self.simple {
            return Err(usage("design repeats a block; only simple designs are supported here"));
        }
        Ok(())
    }

    pub fn without_block(&self, i: usize) -> Design {
        let mut blocks = self.blocks.clone();
        blocks.remove(i);
        Design::new(self.v, self.k, blocks).unwrap()
    }

    pub fn flags(&self) -> impl Iterator<Item = Flag> + '_ {
        self.blocks.iter().enumerate().flat_map(|(i, b)| {
            b.iter().map(move |&x| Flag { point: x, block: i })
        })
    }

    /// Number of blocks containing every point of `set`.
    pub fn blocks_through(&self, set: &[PointIndex]) -> usize {
        self.blocks
            .iter()
            .filter(|b| set.iter().all(|x| b.binary_search(x).is_ok()))
            .count()
    }

    /// Counts, for every `t`-subset (indexed by colex rank), the blocks containing it.
    pub fn coverage_counts(&self, t: u32, guard: &Guard) -> Result<Vec<u32>> {
        let n = binomial_u64(self.v as u64, t as u64);
        guard.check("t-subset count array", n)?;
        let mut counts = vec![0u32; n.unwrap() as usize];
        if t > self.k {
            return Ok(counts);
        }
        let table = BinomTable::new(self.v as usize, t as usize);
        for b in &self.blocks {
            for_each_subset(b, t as usize, |s| counts[table.rank(s) as usize] += 1);
        }
        Ok(counts)
    }

    /// Checks that every `t`-subset lies in exactly `lambda` blocks. With
    /// `lambda = None` the count of the first `t`-subset is taken as lambda.
    pub fn verify(&self, t: u32, lambda: Option<u64>, guard: &Guard) -> Result<Verification> {
        self.require_simple()?;
        if t > self.v {
            return Err(usage(format!("t = {t} exceeds v = {}", self.v)));
        }
        let counts = self.coverage_counts(t, guard)?;
        let lambda = lambda.unwrap_or_else(|| counts.first().copied().unwrap_or(0) as u64);
        let bad = counts.iter().position(|&c| c as u64 != lambda);
        let counterexample = bad.map(|r| {
            let table = BinomTable::new(self.v as usize, t as usize);
            (table.unrank(r as u64, self.v as usize, t as usize), counts[r] as u64)
        });
        Ok(Verification {
            t,
            holds: counterexample.is_none() && lambda > 0,
            lambda,
            counterexample,
        })
    }
}
