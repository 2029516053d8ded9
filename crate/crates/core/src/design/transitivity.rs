//! Links between a design and a group acting on its points.

use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::blocks::Design;
use crate::error::{usage, Error, Result};
use crate::gfspace::PointIndex;
use crate::permgroup::FiniteGroup;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomogeneityReport {
    pub t: u32,
    pub flag_transitive: bool,
    /// `floor(t/2)`, or `floor((t+1)/2)` when flag-transitive.
    pub required_degree: u32,
    /// Largest `h <= required_degree` such that the group is `j`-homogeneous for all `j <= h`.
    pub verified_degree: u32,
    pub holds: bool,
}

/// `b |G_B| = v |G_x| = |G|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderEquation {
    pub b: u64,
    pub block_stabilizer: BigUint,
    pub v: u64,
    pub point_stabilizer: BigUint,
    pub group_order: BigUint,
    pub holds: bool,
}

fn check_degree(d: &Design, g: &FiniteGroup) -> Result<()> {
    if d.v() != g.degree() {
        return Err(usage(format!(
            "design has {} points, group acts on {}",
            d.v(),
            g.degree()
        )));
    }
    if d.b() == 0 {
        return Err(usage("design has no blocks"));
    }
    d.require_simple()
}

/// Fails unless every generator maps every block to a block.
pub fn check_automorphisms(d: &Design, g: &FiniteGroup) -> Result<()> {
    check_degree(d, g)?;
    let blocks: HashSet<&[PointIndex]> = d.blocks().iter().map(|b| b.as_slice()).collect();
    for (i, s) in g.generators().iter().enumerate() {
        for b in d.blocks() {
            if !blocks.contains(s.apply_set(b).as_slice()) {
                return Err(Error::NotAutomorphism {
                    generator: i,
                    block: b.clone(),
                });
            }
        }
    }
    Ok(())
}

/// The group is transitive on blocks iff the orbit of one block has size `b`.
pub fn is_block_transitive(d: &Design, g: &FiniteGroup) -> Result<bool> {
    check_automorphisms(d, g)?;
    Ok(g.orbit_of_set(&d.blocks()[0])?.len() == d.b())
}

/// Transitive on flags. Equivalent to block-transitivity together with the
/// block stabilizer being transitive on the block; computed as a single orbit
/// of incident pairs compared against `b k`.
pub fn is_flag_transitive(d: &Design, g: &FiniteGroup) -> Result<bool> {
    if !is_block_transitive(d, g)? {
        return Ok(false);
    }
    let index: HashMap<&[PointIndex], usize> = d
        .blocks()
        .iter()
        .enumerate()
        .map(|(i, b)| (b.as_slice(), i))
        .collect();
    let start = (d.blocks()[0][0], 0usize);
    let mut seen = HashSet::from([start]);
    let mut queue = vec![start];
    while let Some((x, bi)) = queue.pop() {
        for s in g.generators() {
            let img = s.apply_set(&d.blocks()[bi]);
            let next = (s.apply(x), index[img.as_slice()]);
            if seen.insert(next) {
                queue.push(next);
            }
        }
    }
    Ok(seen.len() == d.b() * d.k() as usize)
}

/// For a block-transitive pair, confirms the group is `floor(t/2)`-homogeneous
/// on points, and `floor((t+1)/2)`-homogeneous when it is also flag-transitive.
pub fn homogeneity_implication_check(
    d: &Design,
    g: &FiniteGroup,
    t: u32,
) -> Result<HomogeneityReport> {
    if !is_block_transitive(d, g)? {
        return Err(usage("homogeneity check needs a block-transitive group"));
    }
    let flag_transitive = is_flag_transitive(d, g)?;
    let required_degree = if flag_transitive { t.div_ceil(2) } else { t / 2 };
    let mut verified_degree = 0;
    for h in 1..=required_degree {
        if !g.is_t_homogeneous(h)? {
            break;
        }
        verified_degree = h;
    }
    Ok(HomogeneityReport {
        t,
        flag_transitive,
        required_degree,
        verified_degree,
        holds: verified_degree == required_degree,
    })
}

/// Evaluates `b |G_B| = v |G_x| = |G|` on the first block and point 0.
pub fn order_equation(d: &Design, g: &FiniteGroup) -> Result<OrderEquation> {
    check_degree(d, g)?;
    let group_order = g.order()?;
    let block_stabilizer = g.stabilizer_order_of_set(&d.blocks()[0])?;
    let point_stabilizer = g.stabilizer_order_of_set(&[0])?;
    let (b, v) = (d.b() as u64, d.v() as u64);
    let holds = &block_stabilizer * b == group_order && &point_stabilizer * v == group_order;
    Ok(OrderEquation {
        b,
        block_stabilizer,
        v,
        point_stabilizer,
        group_order,
        holds,
    })
}
