//! Designs arising as orbits of a group on `k`-subsets.
//!
//! Subsets are handled as `u64` bit masks when `v <= 64` and as sorted tuples
//! otherwise. Every orbit is reported by its lexicographically least member.

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::combin::{binomial_u64, for_each_subset, mask_of, next_combination, points_of_mask, BinomTable};
use crate::design::Design;
use crate::error::{usage, Result};
use crate::gfspace::PointIndex;
use crate::guard::Guard;
use crate::permgroup::FiniteGroup;

/// Coverage of `s`-subsets by the blocks of one orbit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrengthEntry {
    pub s: u32,
    pub uniform: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lambda: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub min: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max: Option<u64>,
}

impl StrengthEntry {
    /// Uniform with a positive count.
    pub fn is_design(&self) -> bool {
        self.uniform && self.lambda.is_some_and(|l| l > 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Members {
    Masks(Vec<u64>),
    Tuples(Vec<Vec<PointIndex>>),
}

/// One orbit of a group on `k`-subsets, viewed as a block design.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitDesign {
    pub v: u32,
    pub k: u32,
    pub representative: Vec<PointIndex>,
    pub size: u64,
    /// `coverage[s - 1]` describes `s`-subsets, for `s` up to the requested maximum.
    pub coverage: Vec<StrengthEntry>,
    members: Members,
}

impl OrbitDesign {
    /// Members as sorted tuples, in lexicographic order.
    pub fn blocks(&self) -> Vec<Vec<PointIndex>> {
        let mut out = match &self.members {
            Members::Masks(m) => m.iter().map(|&x| points_of_mask(x)).collect(),
            Members::Tuples(t) => t.clone(),
        };
        out.sort_unstable();
        out
    }

    pub fn to_design(&self) -> Design {
        Design::new(self.v, self.k, self.blocks()).expect("orbit members are valid blocks")
    }

    /// Coverage entry for `s`, if it was computed.
    pub fn strength_at(&self, s: u32) -> Option<&StrengthEntry> {
        self.coverage.get((s as usize).checked_sub(1)?)
    }

    /// Largest `s` at which coverage is uniform and positive, among computed levels.
    pub fn strength(&self) -> u32 {
        self.coverage
            .iter()
            .take_while(|e| e.is_design())
            .map(|e| e.s)
            .last()
            .unwrap_or(0)
    }
}

/// Incremental per-orbit `s`-subset counters for `s = 1..=s_max`.
struct Coverage {
    v: u32,
    tables: Vec<BinomTable>,
    counts: Vec<Vec<u32>>,
    touched: Vec<Vec<u64>>,
    totals: Vec<u64>,
    scratch: Vec<PointIndex>,
}

impl Coverage {
    fn new(v: u32, s_max: u32, guard: &Guard) -> Result<Self> {
        let mut tables = Vec::new();
        let mut counts = Vec::new();
        let mut totals = Vec::new();
        for s in 1..=s_max {
            let n = binomial_u64(v as u64, s as u64);
            guard.check("s-subset counters", n)?;
            let n = n.unwrap();
            tables.push(BinomTable::new(v as usize, s as usize));
            counts.push(vec![0u32; n as usize]);
            totals.push(n);
        }
        Ok(Coverage {
            v,
            tables,
            touched: vec![Vec::new(); s_max as usize],
            counts,
            totals,
            scratch: Vec::new(),
        })
    }

    fn add(&mut self, block: &[PointIndex]) {
        for (i, table) in self.tables.iter().enumerate() {
            let counts = &mut self.counts[i];
            let touched = &mut self.touched[i];
            for_each_subset(block, i + 1, |sub| {
                let r = table.rank(sub);
                let c = &mut counts[r as usize];
                if *c == 0 {
                    touched.push(r);
                }
                *c += 1;
            });
        }
    }

    fn add_mask(&mut self, mask: u64) {
        let mut pts = std::mem::take(&mut self.scratch);
        pts.clear();
        let mut m = mask;
        while m != 0 {
            pts.push(m.trailing_zeros());
            m &= m - 1;
        }
        self.add(&pts);
        self.scratch = pts;
    }

    /// Summarizes and clears the counters.
    fn finish(&mut self) -> Vec<StrengthEntry> {
        let mut out = Vec::with_capacity(self.tables.len());
        for i in 0..self.tables.len() {
            let touched = std::mem::take(&mut self.touched[i]);
            let counts = &mut self.counts[i];
            let mut min = u64::MAX;
            let mut max = 0u64;
            for &r in &touched {
                let c = counts[r as usize] as u64;
                min = min.min(c);
                max = max.max(c);
                counts[r as usize] = 0;
            }
            if (touched.len() as u64) < self.totals[i] {
                min = 0;
            }
            if touched.is_empty() {
                max = 0;
            }
            let s = i as u32 + 1;
            out.push(if min == max {
                StrengthEntry {
                    s,
                    uniform: true,
                    lambda: Some(min),
                    min: None,
                    max: None,
                }
            } else {
                StrengthEntry {
                    s,
                    uniform: false,
                    lambda: None,
                    min: Some(min),
                    max: Some(max),
                }
            });
        }
        debug_assert!(self.v > 0);
        out
    }
}

/// Partitions all `k`-subsets into orbits of `g`, computing coverage up to
/// `s_max` (0 for none) while each orbit is closed. Orbits come out ordered by
/// representative.
pub fn enumerate_orbits_with_strength(
    g: &FiniteGroup,
    k: u32,
    s_max: u32,
    guard: &Guard,
) -> Result<Vec<OrbitDesign>> {
    let v = g.degree();
    if k > v {
        return Err(usage(format!("k = {k} exceeds v = {v}")));
    }
    if s_max > k {
        return Err(usage(format!("s_max = {s_max} exceeds k = {k}")));
    }
    let total = binomial_u64(v as u64, k as u64);
    guard.check("k-subsets", total)?;
    let total = total.unwrap();
    let g = g.clone().with_guard(*guard);
    let table = BinomTable::new(v as usize, k as usize);
    let mut visited = vec![0u64; (total as usize).div_ceil(64)];
    let is_set = |bits: &Vec<u64>, r: u64| bits[(r / 64) as usize] >> (r % 64) & 1 == 1;
    let set = |bits: &mut Vec<u64>, r: u64| bits[(r / 64) as usize] |= 1 << (r % 64);
    let mut coverage = Coverage::new(v, s_max, guard)?;
    let mut out = Vec::new();
    let mut c: Vec<PointIndex> = (0..k).collect();
    loop {
        if !is_set(&visited, table.rank(&c)) {
            let (members, size) = if v <= 64 {
                let masks = g.set_orbit_masks_with(mask_of(&c), |m| coverage.add_mask(m))?;
                for &m in &masks {
                    set(&mut visited, table.rank_mask(m));
                }
                let n = masks.len() as u64;
                (Members::Masks(masks), n)
            } else {
                let tuples = g.set_orbit_tuples_with(&c, |t| coverage.add(t))?;
                for t in &tuples {
                    set(&mut visited, table.rank(t));
                }
                let n = tuples.len() as u64;
                (Members::Tuples(tuples), n)
            };
            out.push(OrbitDesign {
                v,
                k,
                representative: c.clone(),
                size,
                coverage: coverage.finish(),
                members,
            });
        }
        if !next_combination(&mut c, v) {
            break;
        }
    }
    Ok(out)
}

/// Partitions all `k`-subsets into orbits of `g`.
pub fn enumerate_orbits(g: &FiniteGroup, k: u32, guard: &Guard) -> Result<Vec<OrbitDesign>> {
    enumerate_orbits_with_strength(g, k, 0, guard)
}

/// Coverage of `s`-subsets for `s = 1..=s_max`, counted from the stored members.
pub fn design_strength(o: &OrbitDesign, s_max: u32, guard: &Guard) -> Result<Vec<StrengthEntry>> {
    if s_max > o.k {
        return Err(usage(format!("s_max = {s_max} exceeds k = {}", o.k)));
    }
    let mut cov = Coverage::new(o.v, s_max, guard)?;
    match &o.members {
        Members::Masks(m) => m.iter().for_each(|&x| cov.add_mask(x)),
        Members::Tuples(t) => t.iter().for_each(|b| cov.add(b)),
    }
    Ok(cov.finish())
}

/// Which groups `alltop_scan` accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum AlltopScope {
    /// 3-transitive groups of affine maps of `V(d, 2)`.
    #[default]
    AffineGf2,
    /// Any 3-transitive group. The 4-implies-5 statement is not claimed for
    /// these; the scan only reports what it finds.
    AnyThreeTransitive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlltopRecord {
    pub k: u32,
    pub representative: Vec<PointIndex>,
    pub size: u64,
    pub four_design: bool,
    pub five_design: bool,
    pub lambda4: Option<u64>,
    pub lambda5: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlltopReport {
    pub v: u32,
    pub scope: AlltopScope,
    pub records: Vec<AlltopRecord>,
    /// Orbits that are 4-designs without being 5-designs.
    pub violations: Vec<AlltopRecord>,
}

impl AlltopReport {
    pub fn implication_holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Whether every generator is an affine map of `V(d, 2)` under the binary point coding.
pub fn is_affine_over_gf2(g: &FiniteGroup) -> bool {
    let v = g.degree();
    if !v.is_power_of_two() || v < 2 {
        return false;
    }
    let d = v.trailing_zeros();
    g.generators().iter().all(|s| {
        let shift = s.apply(0);
        let cols: Vec<u32> = (0..d).map(|i| s.apply(1 << i) ^ shift).collect();
        (0..v).all(|x| {
            let lin = (0..d)
                .filter(|i| x >> i & 1 == 1)
                .fold(0, |acc, i| acc ^ cols[i as usize]);
            s.apply(x) == lin ^ shift
        })
    })
}

/// For each `k` in range and each orbit on `k`-subsets, records whether it is a
/// 4-design and a 5-design, and lists every orbit that is the former but not the latter.
pub fn alltop_scan(
    g: &FiniteGroup,
    k_range: RangeInclusive<u32>,
    scope: AlltopScope,
    guard: &Guard,
) -> Result<AlltopReport> {
    let v = g.degree();
    if scope == AlltopScope::AffineGf2 && !is_affine_over_gf2(g) {
        return Err(usage("alltop_scan needs a group of affine maps of V(d, 2)"));
    }
    if !g.clone().with_guard(*guard).is_t_transitive(3)? {
        return Err(usage("alltop_scan needs a 3-transitive group"));
    }
    let mut records = Vec::new();
    for k in k_range {
        if k > v {
            return Err(usage(format!("k = {k} exceeds v = {v}")));
        }
        let s_max = k.min(5);
        for o in enumerate_orbits_with_strength(g, k, s_max, guard)? {
            let at = |s: u32| o.strength_at(s).filter(|e| e.is_design());
            records.push(AlltopRecord {
                k,
                representative: o.representative.clone(),
                size: o.size,
                four_design: at(4).is_some(),
                five_design: at(5).is_some(),
                lambda4: at(4).and_then(|e| e.lambda),
                lambda5: at(5).and_then(|e| e.lambda),
            });
        }
    }
    let violations = records
        .iter()
        .filter(|r| r.four_design && !r.five_design)
        .cloned()
        .collect();
    Ok(AlltopReport {
        v,
        scope,
        records,
        violations,
    })
}

/// Orbits on `k`-subsets that are Steiner `t`-designs.
pub fn steiner_orbit_search(
    g: &FiniteGroup,
    t: u32,
    k: u32,
    guard: &Guard,
) -> Result<Vec<OrbitDesign>> {
    if t > k {
        return Err(usage(format!("t = {t} exceeds k = {k}")));
    }
    Ok(enumerate_orbits_with_strength(g, k, t, guard)?
        .into_iter()
        .filter(|o| o.strength_at(t).is_some_and(|e| e.uniform && e.lambda == Some(1)))
        .collect())
}

/// Serializable orbit listing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub v: u32,
    pub k: u32,
    pub group: String,
    pub orbits: Vec<OrbitEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitEntry {
    pub representative: Vec<PointIndex>,
    pub size: u64,
    pub strength: Vec<StrengthEntry>,
}

impl OrbitReport {
    pub fn new(group: impl Into<String>, v: u32, k: u32, orbits: &[OrbitDesign]) -> Self {
        OrbitReport {
            v,
            k,
            group: group.into(),
            orbits: orbits
                .iter()
                .map(|o| OrbitEntry {
                    representative: o.representative.clone(),
                    size: o.size,
                    strength: o.coverage.clone(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("orbit report serializes");
        s.push('\n');
        s
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| crate::error::Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })
    }
}
