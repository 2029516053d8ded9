use std::io::Write;
use std::path::PathBuf;

use affdes_core::design::{
    check_automorphisms, homogeneity_implication_check, is_block_transitive, is_flag_transitive, order_equation,
    DesignFile,
};
use affdes_core::permgroup::io::parse_group;
use anyhow::Result;
use clap::Args;
use serde::Serialize;

use crate::common::{read_file, Format, GlobalArgs, EXIT_OK, EXIT_VERIFY};

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Design file, text or JSON.
    #[arg(long)]
    pub design: PathBuf,
    /// Group file whose generators should act on the design.
    #[arg(long)]
    pub group: Option<PathBuf>,
}

#[derive(Serialize)]
struct Check {
    name: String,
    passed: bool,
    /// Informational checks do not affect the exit code.
    required: bool,
    detail: String,
}

fn check(name: impl Into<String>, passed: bool, required: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        passed,
        required,
        detail: detail.into(),
    }
}

pub fn run(g: &GlobalArgs, a: &VerifyArgs) -> Result<u8> {
    let guard = g.guard()?;
    let file = DesignFile::parse(&read_file(&a.design)?)?;
    let params = file.params()?;
    let design = file.design()?;
    let mut checks = Vec::new();

    let ver = design.verify(params.t as u32, Some(params.lambda), &guard)?;
    let detail = match &ver.counterexample {
        Some((set, n)) => format!("{set:?} lies in {n} blocks"),
        None => format!("every {}-subset lies in {} blocks", params.t, params.lambda),
    };
    checks.push(check(format!("verify {params}"), ver.holds, true, detail));
    for id in params.check_identities() {
        checks.push(check(id.name, id.holds, true, format!("{} = {}", id.lhs, id.rhs)));
    }
    for d in params.divisibility_conditions() {
        checks.push(check(
            format!("lambda_{} integral", d.s),
            d.passes,
            true,
            format!("{} / {}", d.numerator, d.denominator),
        ));
    }

    if let Some(path) = &a.group {
        let group = parse_group(&read_file(path)?)?.with_guard(guard);
        check_automorphisms(&design, &group)?;
        checks.push(check("automorphisms", true, true, "every generator maps blocks to blocks"));
        let bt = is_block_transitive(&design, &group)?;
        checks.push(check("block-transitive", bt, false, ""));
        checks.push(check("flag-transitive", is_flag_transitive(&design, &group)?, false, ""));
        if bt {
            let h = homogeneity_implication_check(&design, &group, params.t as u32)?;
            checks.push(check(
                "homogeneity implication",
                h.holds,
                true,
                format!("needs degree {}, verified {}", h.required_degree, h.verified_degree),
            ));
            let eq = order_equation(&design, &group)?;
            checks.push(check(
                "order equation",
                eq.holds,
                true,
                format!(
                    "b|G_B| = {}*{}, v|G_x| = {}*{}, |G| = {}",
                    eq.b, eq.block_stabilizer, eq.v, eq.point_stabilizer, eq.group_order
                ),
            ));
        }
    }

    let ok = checks.iter().all(|c| c.passed || !c.required);
    let mut out = g.writer()?;
    match g.format_or(Format::Text) {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &checks)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            for c in &checks {
                w.serialize(c)?;
            }
            w.flush()?;
        }
        Format::Text => {
            for c in &checks {
                let status = match (c.passed, c.required) {
                    (true, _) => "pass",
                    (false, true) => "FAIL",
                    (false, false) => "no",
                };
                writeln!(out, "{status:<5} {:<28} {}", c.name, c.detail)?;
            }
        }
    }
    out.flush()?;
    Ok(if ok { EXIT_OK } else { EXIT_VERIFY })
}
