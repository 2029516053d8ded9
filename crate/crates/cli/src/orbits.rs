use std::io::Write;
use std::path::PathBuf;

use affdes_core::design::{DesignFile, DesignParams};
use affdes_core::orbits::{alltop_scan, enumerate_orbits_with_strength, AlltopScope, OrbitDesign, OrbitReport};
use affdes_core::permgroup::io::{parse_group, write_group};
use affdes_core::{FiniteGroup, Guard};
use anyhow::Result;
use clap::Args;

use crate::common::{parse_range, read_file, usage, FamilyArgs, Format, GlobalArgs, EXIT_OK, EXIT_VERIFY};

#[derive(Args, Debug)]
pub struct OrbitsArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Degree, used to fill in p and d.
    #[arg(long)]
    pub v: Option<u64>,
    /// Read generators from a group file instead of a family.
    #[arg(long, conflicts_with = "family")]
    pub group: Option<PathBuf>,
    /// Block size, or an inclusive range such as 5..8 with --alltop.
    #[arg(long, value_parser = parse_range)]
    pub k: std::ops::RangeInclusive<u64>,
    /// Largest s for coverage counts (default min(k-1, 7)).
    #[arg(long)]
    pub strength: Option<u32>,
    /// Report whether every orbit that is a 4-design is also a 5-design.
    #[arg(long)]
    pub alltop: bool,
    /// With --alltop, accept any 3-transitive group rather than affine maps over GF(2).
    #[arg(long, requires = "alltop")]
    pub any_group: bool,
    /// Keep only orbits forming a Steiner design of this strength.
    #[arg(long)]
    pub steiner: Option<u32>,
    /// Index of the orbit to export as a design file.
    #[arg(long, requires = "export")]
    pub export_orbit: Option<usize>,
    /// Design file path for --export-orbit; JSON when it ends in .json.
    #[arg(long, requires = "export_orbit")]
    pub export: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GroupArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Degree, used to fill in p and d.
    #[arg(long)]
    pub v: Option<u64>,
}

fn load_group(family: &FamilyArgs, v: Option<u64>, file: Option<&PathBuf>, guard: Guard) -> Result<(String, FiniteGroup)> {
    let (name, g) = match file {
        Some(p) => (p.display().to_string(), parse_group(&read_file(p)?)?),
        None => {
            let fam = family.instance(v)?;
            (fam.descriptor(), fam.build()?)
        }
    };
    Ok((name, g.with_guard(guard)))
}

pub fn run_group(g: &GlobalArgs, a: &GroupArgs) -> Result<u8> {
    let (_, group) = load_group(&a.family, a.v, None, g.guard()?)?;
    let mut out = g.writer()?;
    out.write_all(write_group(&group).as_bytes())?;
    out.flush()?;
    Ok(EXIT_OK)
}

fn to_u32(x: u64) -> Result<u32> {
    u32::try_from(x).map_err(|_| usage(format!("{x} is out of range")))
}

pub fn run(g: &GlobalArgs, a: &OrbitsArgs) -> Result<u8> {
    let guard = g.guard()?;
    let (name, group) = load_group(&a.family, a.v, a.group.as_ref(), guard)?;
    let format = g.format_or(Format::Json);
    if format == Format::Csv {
        return Err(usage("orbit reports are available as json or text"));
    }
    let (k_lo, k_hi) = (to_u32(*a.k.start())?, to_u32(*a.k.end())?);

    if a.alltop {
        let scope = if a.any_group {
            AlltopScope::AnyThreeTransitive
        } else {
            AlltopScope::AffineGf2
        };
        let rep = alltop_scan(&group, k_lo..=k_hi, scope, &guard)?;
        let mut out = g.writer()?;
        match format {
            Format::Text => {
                writeln!(out, "{name}: {} orbits checked for k in {k_lo}..={k_hi}", rep.records.len())?;
                let fours = rep.records.iter().filter(|r| r.four_design).count();
                writeln!(out, "{fours} are 4-designs, {} violations", rep.violations.len())?;
                for r in &rep.violations {
                    writeln!(out, "violation: k={} representative {:?} size {}", r.k, r.representative, r.size)?;
                }
            }
            _ => {
                serde_json::to_writer_pretty(&mut out, &rep)?;
                writeln!(out)?;
            }
        }
        out.flush()?;
        return Ok(if rep.implication_holds() { EXIT_OK } else { EXIT_VERIFY });
    }

    if k_lo != k_hi {
        return Err(usage("a range of k needs --alltop; give a single block size"));
    }
    let k = k_lo;
    let s_max = a.strength.unwrap_or(k.saturating_sub(1).min(7)).max(a.steiner.unwrap_or(0));
    if s_max > k {
        return Err(usage(format!("strength {s_max} exceeds k = {k}")));
    }
    let mut orbits = enumerate_orbits_with_strength(&group, k, s_max, &guard)?;
    if let Some(t) = a.steiner {
        orbits.retain(|o| o.strength_at(t).is_some_and(|e| e.uniform && e.lambda == Some(1)));
    }
    if let (Some(i), Some(path)) = (a.export_orbit, &a.export) {
        export(orbits.get(i).ok_or_else(|| usage(format!("no orbit with index {i}")))?, path)?;
    }
    let report = OrbitReport::new(name, group.degree(), k, &orbits);
    let mut out = g.writer()?;
    match format {
        Format::Text => {
            writeln!(out, "{}: {} orbits on {k}-subsets of {} points", report.group, orbits.len(), report.v)?;
            for (i, o) in orbits.iter().enumerate() {
                let t = o.strength();
                let tag = match o.strength_at(t).and_then(|e| e.lambda) {
                    Some(l) if t > 0 => format!("{t}-design lambda={l}"),
                    _ => "not a 1-design".to_string(),
                };
                writeln!(out, "[{i}] size {} representative {:?} {tag}", o.size, o.representative)?;
            }
        }
        _ => out.write_all(report.to_json().as_bytes())?,
    }
    out.flush()?;
    Ok(EXIT_OK)
}

fn export(o: &OrbitDesign, path: &PathBuf) -> Result<()> {
    let t = o.strength();
    let lambda = o
        .strength_at(t)
        .and_then(|e| e.lambda)
        .filter(|_| t > 0)
        .ok_or_else(|| usage("the orbit is not a 1-design; nothing to export"))?;
    let params = DesignParams::new(t as u64, o.v as u64, o.k as u64, lambda)?;
    let file = DesignFile::new(params, &o.to_design());
    let text = if path.extension().is_some_and(|e| e == "json") {
        file.to_json()
    } else {
        file.to_text()
    };
    std::fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}
