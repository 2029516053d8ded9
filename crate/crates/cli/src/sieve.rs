use std::io::Write;

use affdes_core::design::DesignParams;
use affdes_core::sieve::{
    admissible, family_instances, CellEvaluator, CsvReportWriter, DegreeSummary, EliminationReport,
    FamilySelector, CSV_HEADER,
};
use anyhow::Result;
use clap::Args;
use rayon::prelude::*;

use crate::common::{family_list, parse_range, usage, FamilyArgs, Format, GlobalArgs, EXIT_OK, EXIT_SURVIVOR};

/// Default upper end of the degree range for family scans.
const DEFAULT_V_MAX: u64 = 4096;

/// Families evaluated per parallel batch; bounds memory held for ordered output.
const BATCH: usize = 256;

#[derive(Args, Debug)]
pub struct SieveArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Strength; family scans need 4 or 5.
    #[arg(long)]
    pub t: u64,
    /// Exact degree.
    #[arg(long, conflicts_with_all = ["v_min", "v_max"])]
    pub v: Option<u64>,
    /// Lower end of the degree range.
    #[arg(long)]
    pub v_min: Option<u64>,
    /// Upper end of the degree range (default 4096).
    #[arg(long)]
    pub v_max: Option<u64>,
    /// Block size or inclusive range such as 5..10; restricts family scans.
    #[arg(long, value_parser = parse_range)]
    pub k: Option<std::ops::RangeInclusive<u64>>,
    /// Only for a single parameter set without a family.
    #[arg(long, default_value_t = 1)]
    pub lambda: u64,
}

struct Sink<'a> {
    out: Box<dyn Write + 'a>,
    format: Format,
    first: bool,
    cells: u64,
    survivors: u64,
}

impl Sink<'_> {
    fn begin(&mut self) -> Result<()> {
        match self.format {
            Format::Json => write!(self.out, "[")?,
            Format::Csv => writeln!(self.out, "{}", CSV_HEADER.join(","))?,
            Format::Text => {}
        }
        Ok(())
    }

    fn chunk(&mut self, body: &str, summary: Option<&DegreeSummary>) -> Result<()> {
        match self.format {
            Format::Json if !body.is_empty() => {
                self.out.write_all(if self.first { b"\n" } else { b",\n" })?;
                self.out.write_all(body.as_bytes())?;
                self.first = false;
            }
            Format::Text => {
                if let Some(s) = summary {
                    writeln!(self.out, "{}", s.text_line())?;
                }
            }
            _ => self.out.write_all(body.as_bytes())?,
        }
        Ok(())
    }

    fn end(&mut self) -> Result<()> {
        match self.format {
            Format::Json => writeln!(self.out, "{}]", if self.first { "" } else { "\n" })?,
            Format::Text => writeln!(
                self.out,
                "{} cells, {} eliminated, {} arithmetic survivors",
                self.cells,
                self.cells - self.survivors,
                self.survivors
            )?,
            Format::Csv => {}
        }
        self.out.flush()?;
        Ok(())
    }
}

fn render(reports: &[EliminationReport], format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => reports
            .iter()
            .map(serde_json::to_string)
            .collect::<Result<Vec<_>, _>>()?
            .join(",\n"),
        Format::Csv => {
            let mut w = CsvReportWriter::without_header(Vec::new());
            for r in reports {
                w.write(r)?;
            }
            String::from_utf8(w.finish()?)?
        }
        Format::Text => String::new(),
    })
}

fn text_line(r: &EliminationReport) -> String {
    let name = format!("{}-({},{},{})", r.t, r.v, r.k.unwrap_or(0), r.lambda);
    if !r.is_eliminated() {
        return format!("{name}: survives every rule");
    }
    let fired: Vec<String> = r
        .rules_fired
        .iter()
        .map(|f| format!("{} ({} vs {})", f.rule, f.lhs, f.rhs))
        .collect();
    format!("{name}: eliminated by {}", fired.join(", "))
}

pub fn run(g: &GlobalArgs, a: &SieveArgs) -> Result<u8> {
    let format = g.format_or(Format::Text);
    let tag = a.family.tag()?;
    let mut sink = Sink {
        out: g.writer()?,
        format,
        first: true,
        cells: 0,
        survivors: 0,
    };

    let Some(tag) = tag else {
        let (Some(v), Some(ks)) = (a.v, a.k.clone()) else {
            return Err(usage(format!("give --family, or --v and --k for one parameter set\n{}", family_list())));
        };
        let reports = ks
            .map(|k| Ok(admissible(&DesignParams::new(a.t, v, k, a.lambda)?)))
            .collect::<Result<Vec<_>>>()?;
        sink.begin()?;
        for r in &reports {
            sink.cells += 1;
            sink.survivors += u64::from(!r.is_eliminated());
            if format == Format::Text {
                writeln!(sink.out, "{}", text_line(r))?;
            } else {
                sink.chunk(&render(std::slice::from_ref(r), format)?, None)?;
            }
        }
        sink.end()?;
        return Ok(if sink.survivors > 0 { EXIT_SURVIVOR } else { EXIT_OK });
    };

    if a.lambda != 1 {
        return Err(usage("family scans are for Steiner systems; --lambda applies to single parameter sets"));
    }
    if a.t != 4 && a.t != 5 {
        return Err(usage(format!("family scans run at t = 4 or 5, got {}", a.t)));
    }
    let sel = FamilySelector {
        tag,
        d: a.family.d,
        p: a.family.p,
        a: a.family.a,
    };
    let range = match a.v {
        Some(v) => v..=v,
        None => a.v_min.unwrap_or(1)..=a.v_max.unwrap_or(DEFAULT_V_MAX),
    };
    let instances = family_instances(&sel, range)?;
    let pool = g.thread_pool()?;
    sink.begin()?;
    for batch in instances.chunks(BATCH) {
        let rendered: Vec<(String, DegreeSummary)> = pool.install(|| {
            batch
                .par_iter()
                .map(|f| {
                    let ev = CellEvaluator::new(*f, a.t);
                    let mut summary = DegreeSummary::new(f);
                    let mut reports = Vec::new();
                    for k in ev.k_range().filter(|k| a.k.as_ref().is_none_or(|r| r.contains(k))) {
                        if format == Format::Text {
                            summary.add_verdict(k, ev.is_eliminated(k)?);
                        } else {
                            let r = ev.evaluate(k)?;
                            summary.add(&r);
                            reports.push(r);
                        }
                    }
                    Ok((render(&reports, format)?, summary))
                })
                .collect::<Result<Vec<_>>>()
        })?;
        for (body, summary) in &rendered {
            sink.cells += summary.cells;
            sink.survivors += summary.survivors.len() as u64;
            sink.chunk(body, Some(summary))?;
        }
    }
    sink.end()?;
    Ok(if sink.survivors > 0 { EXIT_SURVIVOR } else { EXIT_OK })
}
