use std::fs;
use std::path::PathBuf;

use capax::certify::{
    action, all_family_certificates, certificate_bound, eh_index, family_certificate,
    parse_certificates, FamilyKind,
};
use capax::{Real, ToricDomain};
use clap::{Subcommand, ValueEnum};
use serde::Serialize;

use crate::input::{emit, Input};
use crate::CliError;

#[derive(clap::Args)]
pub struct Args {
    #[command(subcommand)]
    which: Which,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Poly,
    Ell,
}

#[derive(Subcommand)]
enum Which {
    /// Lower bound implied by each certificate in a JSON file.
    Check {
        #[arg(long)]
        file: PathBuf,
    },
    /// The verified certificate for one even a in [6, 100].
    Family {
        #[arg(long)]
        a: String,
        #[arg(long, value_enum)]
        kind: Kind,
    },
    /// Every verified family certificate, as one JSON array.
    Families,
}

#[derive(Serialize)]
struct Evaluation {
    domain_a: capax::Rational,
    target: ToricDomain,
    word: String,
    eh_index: u64,
    action: capax::Rational,
    lower_bound: Real,
}

fn json<T: Serialize>(v: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(v)
        .map(|s| s + "\n")
        .map_err(|e| CliError::Failed(e.to_string()))
}

pub fn run(args: &Args, input: &Input) -> Result<u8, CliError> {
    let out = match &args.which {
        Which::Check { file } => {
            let text = fs::read_to_string(file)
                .map_err(|e| CliError::Usage(format!("{}: {e}", file.display())))?;
            let certs = parse_certificates(&text).map_err(|e| CliError::Usage(e.to_string()))?;
            let evals = certs
                .iter()
                .map(|c| {
                    let bound = certificate_bound(c).map_err(|e| CliError::Usage(e.to_string()))?;
                    Ok(Evaluation {
                        domain_a: c.domain_a.clone(),
                        target: c.target.clone(),
                        word: c.word.to_string(),
                        eh_index: eh_index(&c.word),
                        action: action(&c.word, &c.target),
                        lower_bound: bound.value,
                    })
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            json(&evals)?
        }
        Which::Family { a, kind } => {
            let a = input.rational("a", a)?;
            let kind = match kind {
                Kind::Poly => FamilyKind::PolyTarget,
                Kind::Ell => FamilyKind::EllTarget,
            };
            json(&family_certificate(&a, kind).map_err(|e| CliError::Usage(e.to_string()))?)?
        }
        Which::Families => json(&all_family_certificates())?,
    };
    emit(None, &out)?;
    Ok(0)
}
