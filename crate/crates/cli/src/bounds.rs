use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use capax::certify::parse_certificates;
use capax::fourdim::DEFAULT_DEPTH;
use capax::{
    reconcile, BoundsError, DomainKind, EmbeddingProblem, ReconcileError, ReconcileOptions,
    ToricDomain, Verdict,
};
use clap::ValueEnum;

use crate::input::{emit, Input};
use crate::record::OutputRecord;
use crate::CliError;

#[derive(Clone, Copy, ValueEnum)]
pub enum TargetKind {
    Ell,
    Poly,
}

impl From<TargetKind> for DomainKind {
    fn from(t: TargetKind) -> DomainKind {
        match t {
            TargetKind::Ell => DomainKind::Ellipsoid,
            TargetKind::Poly => DomainKind::Polydisc,
        }
    }
}

#[derive(clap::Args)]
pub struct Args {
    /// Domain E(x, x·a).
    #[arg(long)]
    domain_a: String,
    #[arg(long, default_value = "1")]
    domain_x: String,
    #[arg(long, value_enum)]
    target: TargetKind,
    /// Target T(x, x·b).
    #[arg(long)]
    target_b: String,
    #[arg(long, default_value = "1")]
    target_x: String,
    /// Number of stabilizing C factors.
    #[arg(long)]
    n: u32,
    /// Term budget for the four-dimensional lattice scan.
    #[arg(long, env = "CAPAX_DEPTH", default_value_t = DEFAULT_DEPTH)]
    depth: u64,
    #[arg(long)]
    k_max: Option<u64>,
    #[arg(long)]
    l_max: Option<u64>,
    /// JSON file with one certificate or an array of them.
    #[arg(long)]
    certificates: Option<PathBuf>,
    /// Only capacity ratios and constructions.
    #[arg(long)]
    capacity_only: bool,
    /// Leave closed-form theorem values out of the bounds.
    #[arg(long)]
    no_theorems: bool,
    /// Force the four-dimensional scan on or off (default: on for n = 0).
    #[arg(long)]
    fourdim: Option<bool>,
    /// Include wall-clock time in the output.
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn problem(args: &Args, input: &Input) -> Result<EmbeddingProblem, CliError> {
    let a = input.rational("domain-a", &args.domain_a)?;
    let b = input.rational("target-b", &args.target_b)?;
    let (dx, tx) = (
        input.positive("domain-x", &args.domain_x)?,
        input.positive("target-x", &args.target_x)?,
    );
    if a < capax::Rational::one() || b < capax::Rational::one() {
        return Err(CliError::Usage(format!("need a, b >= 1, got a = {a}, b = {b}")));
    }
    let domain = ToricDomain::ellipsoid(dx.clone(), &dx * &a).map_err(|e| CliError::Usage(e.to_string()))?;
    let target = ToricDomain::new(args.target.into(), tx.clone(), &tx * &b)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    EmbeddingProblem::new(domain, target, args.n).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn run(args: &Args, input: &Input) -> Result<u8, CliError> {
    let p = problem(args, input)?;
    let certificates = match &args.certificates {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            parse_certificates(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
        None => Vec::new(),
    };
    let opts = ReconcileOptions {
        k_max: args.k_max,
        l_max: args.l_max,
        depth: args.depth,
        fourdim: args.fourdim,
        theorems: !args.no_theorems,
        certificates,
        capacity_only: args.capacity_only,
    };
    let start = Instant::now();
    let report = reconcile(&p, &opts).map_err(|e| match e {
        ReconcileError::Bounds(BoundsError::InvalidParameter(m)) => CliError::Usage(m),
        e => CliError::Inconsistent(e.to_string()),
    })?;
    let timing = args.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    let record = OutputRecord::new(&report, timing);
    let json = serde_json::to_string_pretty(&record).map_err(|e| CliError::Failed(e.to_string()))?;
    emit(args.out.as_deref(), &format!("{json}\n"))?;
    Ok(match report.verdict {
        Verdict::Determined { .. } => 0,
        Verdict::Gap { .. } => 10,
    })
}
