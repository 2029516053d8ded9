use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;

use affdes_core::gfspace::prime_power;
use affdes_core::{FamilyTag, Guard, GroupFamily, DEFAULT_MAX_STATES};
use anyhow::{anyhow, bail, Result};
use clap::{Args, ValueEnum};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_RESOURCE: u8 = 2;
pub const EXIT_SURVIVOR: u8 = 3;
pub const EXIT_VERIFY: u8 = 4;

/// Overrides the default state budget.
pub const GUARD_ENV: &str = "AFFDES_MAX_STATES";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug)]
pub struct GlobalArgs {
    /// Output format. JSON and CSV are stable; text is for people.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// State budget for exhaustive enumerations.
    #[arg(long, global = true)]
    pub guard: Option<u64>,
    /// Allow --guard above the default budget.
    #[arg(long, global = true)]
    pub force: bool,
}

#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

pub fn exit_code_for(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<affdes_core::Error>() {
        Some(affdes_core::Error::Resource { .. }) => EXIT_RESOURCE,
        Some(affdes_core::Error::NotAutomorphism { .. }) => EXIT_VERIFY,
        _ => EXIT_USAGE,
    }
}

impl GlobalArgs {
    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    pub fn guard(&self) -> Result<Guard> {
        let default = match std::env::var(GUARD_ENV) {
            Ok(s) => s
                .trim()
                .parse::<u64>()
                .map_err(|_| usage(format!("{GUARD_ENV} must be a non-negative integer, got {s:?}")))?,
            Err(_) => DEFAULT_MAX_STATES,
        };
        match self.guard {
            Some(g) if g > default && !self.force => Err(usage(format!(
                "--guard {g} exceeds the default budget {default}; pass --force to raise it"
            ))),
            Some(g) => Ok(Guard::new(g)),
            None => Ok(Guard::new(default)),
        }
    }

    pub fn thread_pool(&self) -> Result<rayon::ThreadPool> {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = self.threads {
            if n == 0 {
                return Err(usage("--threads must be at least 1"));
            }
            b = b.num_threads(n);
        }
        b.build().map_err(|e| anyhow!("thread pool: {e}"))
    }

    pub fn writer(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.output {
            Some(p) => Box::new(BufWriter::new(
                File::create(p).map_err(|e| anyhow!("cannot create {}: {e}", p.display()))?,
            )),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

/// Family selection shared by the subcommands.
#[derive(Args, Debug, Default)]
pub struct FamilyArgs {
    /// Group family: AGL, AGammaL1, ASL, ASp, AG2, Case5, Case6, Case7, Case8.
    #[arg(long)]
    pub family: Option<String>,
    /// Dimension of the underlying vector space.
    #[arg(long)]
    pub d: Option<u32>,
    /// Characteristic.
    #[arg(long)]
    pub p: Option<u32>,
    /// Field degree; the field has p^a elements.
    #[arg(long)]
    pub a: Option<u32>,
}

pub fn family_list() -> String {
    let mut s = String::from("known families:\n");
    for t in FamilyTag::ALL {
        s.push_str(&format!("  {:<9} {}\n", t.name(), t.summary()));
    }
    s
}

impl FamilyArgs {
    pub fn tag(&self) -> Result<Option<FamilyTag>> {
        match &self.family {
            None => Ok(None),
            Some(name) => FamilyTag::parse(name)
                .map(Some)
                .ok_or_else(|| usage(format!("unknown family {name:?}\n{}", family_list()))),
        }
    }

    /// One concrete family instance; `v` fills in `p` and `d` when given.
    pub fn instance(&self, v: Option<u64>) -> Result<GroupFamily> {
        let tag = self.tag()?.ok_or_else(|| usage("--family is required"))?;
        let (mut d, mut p) = (self.d, self.p);
        if let Some(v) = v {
            if tag == FamilyTag::Case6 {
                return Ok(GroupFamily::case6(v)?);
            }
            let (pp, dd) = prime_power(v).ok_or_else(|| usage(format!("v = {v} is not a prime power")))?;
            let dd = if tag == FamilyTag::ASp {
                if dd % 2 != 0 {
                    bail!(usage(format!("ASp needs v = p^(2d), got {v}")));
                }
                dd / 2
            } else {
                dd
            };
            p = p.or(Some(pp as u32));
            d = d.or(Some(dd));
        }
        let fam = match tag {
            FamilyTag::Case5 | FamilyTag::Case7 | FamilyTag::Case8 => GroupFamily::case(tag),
            FamilyTag::Case6 => bail!(usage("Case6 needs --v")),
            FamilyTag::AG2 => GroupFamily::new(tag, 6 * self.need(self.a, "a")?, 2, self.need(self.a, "a")?)?,
            _ => GroupFamily::new(tag, self.need(d, "d")?, self.need(p, "p")?, self.a.unwrap_or(1))?,
        };
        Ok(fam)
    }

    fn need(&self, x: Option<u32>, name: &str) -> Result<u32> {
        x.ok_or_else(|| usage(format!("--{name} is required for this family")))
    }
}

/// `N`, `A..B` or `A..=B`, all inclusive.
pub fn parse_range(s: &str) -> Result<RangeInclusive<u64>, String> {
    let num = |x: &str| x.trim().parse::<u64>().map_err(|_| format!("bad number {x:?} in {s:?}"));
    let r = if let Some((a, b)) = s.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        num(a)?..=num(b)?
    } else {
        let n = num(s)?;
        n..=n
    };
    if r.is_empty() {
        return Err(format!("empty range {s:?}"));
    }
    Ok(r)
}

pub fn read_file(p: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(p).map_err(|e| usage(format!("cannot read {}: {e}", p.display())))
}
