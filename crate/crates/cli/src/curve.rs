use std::path::PathBuf;

use capax::fourdim::{c0_ell, c0_poly_piecewise, c0_poly_piecewise_to, DEFAULT_DEPTH};
use capax::rescaled::{convergence_csv, convergence_report, deviation_samples, c_infinity};
use capax::{Rational, Real, Status};
use clap::Subcommand;
use rayon::prelude::*;

use crate::input::{emit, grid, Input};
use crate::plot::{line_plot, Point};
use crate::CliError;

#[derive(clap::Args)]
pub struct Args {
    #[command(subcommand)]
    which: Which,
}

#[derive(clap::Args)]
struct Range {
    #[arg(long)]
    from: Option<String>,
    #[arg(long)]
    to: String,
    #[arg(long, default_value = "1/8")]
    step: String,
    /// Also write an SVG plot here.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// CSV destination (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Which {
    /// Four-dimensional ellipsoid-into-polydisc function for integer b >= 2.
    C0Poly {
        #[arg(long)]
        b: u64,
        #[command(flatten)]
        range: Range,
    },
    /// Four-dimensional ellipsoid-into-ellipsoid function via lattice dominance.
    C0Ell {
        #[arg(long)]
        b: String,
        #[arg(long, env = "CAPAX_DEPTH", default_value_t = DEFAULT_DEPTH)]
        depth: u64,
        #[command(flatten)]
        range: Range,
    },
    /// Rescaled polydisc function against the limit staircase.
    Rescaled {
        /// One or more integer b >= 2, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        b: Vec<u64>,
        /// Only the supremum of the deviation per b.
        #[arg(long)]
        summary: bool,
        #[command(flatten)]
        range: Range,
    },
    /// The limit staircase.
    CInfinity {
        #[command(flatten)]
        range: Range,
    },
}

struct Row {
    a: Rational,
    value: Real,
    status: Status,
}

fn csv_err(e: impl std::fmt::Display) -> CliError {
    CliError::Failed(e.to_string())
}

fn write_rows(rows: &[Row]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["a_num", "a_den", "value_repr", "status"]).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.a.numer().to_string(),
            r.a.denom().to_string(),
            r.value.to_string(),
            format!("{:?}", r.status),
        ])
        .map_err(csv_err)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(csv_err)?).expect("utf-8"))
}

fn points(rows: &[Row]) -> Vec<Point> {
    rows.iter()
        .map(|r| Point {
            x: r.a.to_f64(),
            y: r.value.to_f64(),
            exact: r.status == Status::Exact,
        })
        .collect()
}

fn finish(range: &Range, csv: &str, title: &str, x_label: &str, pts: &[Point]) -> Result<u8, CliError> {
    if let Some(path) = &range.svg {
        emit(Some(path), &line_plot(title, x_label, pts))?;
    }
    emit(range.out.as_deref(), csv)?;
    Ok(0)
}

fn bounds(range: &Range, input: &Input, default_from: i64) -> Result<Vec<Rational>, CliError> {
    let from = match &range.from {
        Some(s) => input.rational("from", s)?,
        None => Rational::from(default_from),
    };
    let to = input.rational("to", &range.to)?;
    let step = input.rational("step", &range.step)?;
    grid(&from, &to, &step)
}

pub fn run(args: &Args, input: &Input) -> Result<u8, CliError> {
    match &args.which {
        Which::C0Poly { b, range } => {
            let bq = Rational::from(*b);
            let xs = bounds(range, input, 1)?;
            let to = xs.last().expect("grid is nonempty");
            let usage = |e: capax::FourDimError| CliError::Usage(e.to_string());
            let default = c0_poly_piecewise(&bq).map_err(usage)?;
            let end = Real::from(to);
            let curve = if end > *default.domain().1 {
                c0_poly_piecewise_to(&bq, to).map_err(usage)?
            } else {
                default
            };
            let rows = xs
                .iter()
                .map(|a| {
                    let v = curve.eval(a).map_err(|e| CliError::Usage(e.to_string()))?;
                    Ok(Row {
                        a: a.clone(),
                        value: v.value,
                        status: v.status,
                    })
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            finish(range, &write_rows(&rows)?, &format!("c0 poly, b = {b}"), "a", &points(&rows))
        }
        Which::C0Ell { b, depth, range } => {
            let bq = input.rational("b", b)?;
            let xs = bounds(range, input, 1)?;
            let rows = xs
                .par_iter()
                .map(|a| {
                    let v = c0_ell(a, &bq, *depth).map_err(|e| CliError::Usage(e.to_string()))?;
                    Ok(Row {
                        a: a.clone(),
                        value: v.value,
                        status: v.status,
                    })
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            finish(range, &write_rows(&rows)?, &format!("c0 ell, b = {bq}"), "a", &points(&rows))
        }
        Which::Rescaled { b, summary, range } => {
            let to = input.rational("to", &range.to)?;
            let step = input.rational("step", &range.step)?;
            let usage = |e: capax::rescaled::RescaledError| CliError::Usage(e.to_string());
            if *summary {
                let rows = convergence_report(b, &to, &step).map_err(usage)?;
                emit(range.out.as_deref(), &convergence_csv(&rows))?;
                return Ok(0);
            }
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["b", "a_num", "a_den", "value_repr", "status", "limit", "deviation"])
                .map_err(csv_err)?;
            let mut pts = Vec::new();
            for &bv in b {
                for s in deviation_samples(bv, &to, &step).map_err(usage)? {
                    w.write_record([
                        bv.to_string(),
                        s.a_hat.numer().to_string(),
                        s.a_hat.denom().to_string(),
                        s.value.to_string(),
                        format!("{:?}", s.status),
                        s.limit.to_string(),
                        s.deviation.to_string(),
                    ])
                    .map_err(csv_err)?;
                    if bv == b[0] {
                        pts.push(Point {
                            x: s.a_hat.to_f64(),
                            y: s.value.to_f64(),
                            exact: s.status == Status::Exact,
                        });
                    }
                }
            }
            let csv = String::from_utf8(w.into_inner().map_err(csv_err)?).expect("utf-8");
            finish(range, &csv, &format!("rescaled c0 poly, b = {}", b[0]), "a hat", &pts)
        }
        Which::CInfinity { range } => {
            let xs = bounds(range, input, 0)?;
            if xs[0].is_negative() {
                return Err(CliError::Usage("--from must be at least 0".into()));
            }
            let rows: Vec<Row> = xs
                .iter()
                .map(|a| Row {
                    a: a.clone(),
                    value: Real::from(c_infinity(a)),
                    status: Status::Exact,
                })
                .collect();
            finish(range, &write_rows(&rows)?, "limit staircase", "a", &points(&rows))
        }
    }
}
