use std::io::Write;

use affdes_core::design::{k_max, DesignParams, CAMERON_EQUALITY_CASES};
use anyhow::Result;
use clap::Args;
use serde::Serialize;

use crate::common::{usage, Format, GlobalArgs, EXIT_OK};

#[derive(Args, Debug)]
pub struct BoundArgs {
    /// Strength, 4 or 5.
    #[arg(long)]
    pub t: u64,
    #[arg(long, conflicts_with_all = ["v_min", "v_max"])]
    pub v: Option<u64>,
    #[arg(long)]
    pub v_min: Option<u64>,
    #[arg(long)]
    pub v_max: Option<u64>,
}

#[derive(Serialize)]
struct Row {
    t: u64,
    v: u64,
    k_max: u64,
    /// `v >= (t+1)(k_max-t+1)`
    lower_holds: bool,
    /// `v-t+1 >= (k_max-t+2)(k_max-t+1)`
    upper_holds: bool,
    upper_equality: bool,
    equality_case: Option<String>,
}

fn row(t: u64, v: u64) -> Result<Row> {
    let km = k_max(t, v)?;
    let (lower_holds, upper_holds, upper_equality) = match DesignParams::steiner(t, v, km.max(t).min(v)) {
        Ok(p) => {
            let c = p.cameron_bounds()?;
            let up = c.upper.expect("t > 2");
            (c.lower.holds, up.holds, c.equality)
        }
        Err(_) => (false, false, false),
    };
    let equality_case = CAMERON_EQUALITY_CASES
        .contains(&(t, km, v))
        .then(|| format!("({t},{km},{v})"));
    Ok(Row {
        t,
        v,
        k_max: km,
        lower_holds,
        upper_holds,
        upper_equality,
        equality_case,
    })
}

pub fn run(g: &GlobalArgs, a: &BoundArgs) -> Result<u8> {
    if a.t != 4 && a.t != 5 {
        return Err(usage(format!("bound is defined for t = 4 or 5, got {}", a.t)));
    }
    let range = match (a.v, a.v_min, a.v_max) {
        (Some(v), _, _) => v..=v,
        (None, lo, Some(hi)) => lo.unwrap_or(a.t + 2)..=hi,
        _ => return Err(usage("give --v or --v-max")),
    };
    if range.is_empty() {
        return Err(usage("empty v range"));
    }
    if *range.start() < a.t + 2 {
        return Err(usage(format!("v must be at least {} for t = {}", a.t + 2, a.t)));
    }
    let rows = range.map(|v| row(a.t, v)).collect::<Result<Vec<_>>>()?;
    let mut out = g.writer()?;
    match g.format_or(Format::Text) {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &rows)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            for r in &rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Text => {
            if rows.len() == 1 {
                let r = &rows[0];
                writeln!(out, "{}", r.k_max)?;
                writeln!(out, "lower bound v >= (t+1)(k-t+1): {}", if r.lower_holds { "holds" } else { "fails" })?;
                writeln!(
                    out,
                    "upper bound v-t+1 >= (k-t+2)(k-t+1): {}{}",
                    if r.upper_holds { "holds" } else { "fails" },
                    if r.upper_equality { " with equality" } else { "" }
                )?;
                if let Some(e) = &r.equality_case {
                    writeln!(out, "equality case {e}")?;
                }
            } else {
                for r in &rows {
                    let eq = r.equality_case.as_deref().map(|e| format!("  equality {e}")).unwrap_or_default();
                    writeln!(out, "t={} v={} k_max={}{eq}", r.t, r.v, r.k_max)?;
                }
            }
        }
    }
    out.flush()?;
    Ok(EXIT_OK)
}
