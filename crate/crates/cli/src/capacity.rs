use capax::capacities::{ech_n_prefix, eh_prefix, gk_ellipsoid, gk_polydisc, weight_sequence, CapacityValue};
use capax::{CapacityError, Rational};
use clap::Subcommand;

use crate::input::{emit, Input};
use crate::CliError;

#[derive(clap::Args)]
pub struct Args {
    #[command(subcommand)]
    which: Which,
}

#[derive(Subcommand)]
enum Which {
    /// g_k(E(1, a)).
    GkEll {
        #[arg(long)]
        a: String,
        #[arg(long, required_unless_present = "table")]
        k: Option<u64>,
        /// Index range `k1..k2`, printed as CSV (k, value, branch).
        #[arg(long)]
        table: Option<String>,
    },
    /// g_k(P(1, a)) for odd k.
    GkPoly {
        #[arg(long)]
        a: String,
        #[arg(long, required_unless_present = "table")]
        k: Option<u64>,
        #[arg(long)]
        table: Option<String>,
        /// Also evaluate even k; those values are tagged conjectural.
        #[arg(long)]
        allow_even: bool,
    },
    /// Ekeland–Hofer capacities c_1, …, c_count of E(x, y).
    Eh {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        count: u64,
    },
    /// The lattice sequence N_0, …, N_{count-1} of E(x, y).
    Ech {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        count: u64,
    },
    /// Weight sequence of E(1, a).
    Weights {
        #[arg(long)]
        a: String,
    },
}

fn parse_range(s: &str) -> Result<(u64, u64), CliError> {
    let bad = || CliError::Usage(format!("--table expects k1..k2, got '{s}'"));
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
    if lo == 0 || hi < lo {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn usage(e: CapacityError) -> CliError {
    CliError::Usage(e.to_string())
}

fn join(values: &[Rational]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

fn gk_output(
    eval: impl Fn(u64) -> Result<CapacityValue, CapacityError>,
    k: Option<u64>,
    table: Option<&str>,
) -> Result<String, CliError> {
    match table {
        Some(t) => {
            let (lo, hi) = parse_range(t)?;
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["k", "value", "branch"]).map_err(|e| CliError::Failed(e.to_string()))?;
            for k in lo..=hi {
                let v = eval(k).map_err(usage)?;
                w.write_record([k.to_string(), v.value.to_string(), v.branch.name().to_string()])
                    .map_err(|e| CliError::Failed(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Failed(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
        None => {
            let v = eval(k.expect("clap requires k without a table")).map_err(usage)?;
            Ok(format!("{}\n", v.value))
        }
    }
}

pub fn run(args: &Args, input: &Input) -> Result<u8, CliError> {
    let out = match &args.which {
        Which::GkEll { a, k, table } => {
            let a = input.rational("a", a)?;
            gk_output(|k| gk_ellipsoid(&a, k), *k, table.as_deref())?
        }
        Which::GkPoly {
            a,
            k,
            table,
            allow_even,
        } => {
            let a = input.rational("a", a)?;
            gk_output(|k| gk_polydisc(&a, k, *allow_even), *k, table.as_deref())?
        }
        Which::Eh { x, y, count } => {
            let (x, y) = (input.positive("x", x)?, input.positive("y", y)?);
            format!("{}\n", join(&eh_prefix(&x, &y, *count as usize)))
        }
        Which::Ech { x, y, count } => {
            let (x, y) = (input.positive("x", x)?, input.positive("y", y)?);
            format!("{}\n", join(&ech_n_prefix(&x, &y, *count as usize)))
        }
        Which::Weights { a } => {
            let a = input.rational("a", a)?;
            format!("{}\n", join(&weight_sequence(&a).map_err(usage)?.weights))
        }
    };
    emit(None, &out)?;
    Ok(0)
}
