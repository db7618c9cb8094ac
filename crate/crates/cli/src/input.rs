use std::fs;
use std::io::Write;
use std::path::Path;

use capax::Rational;

use crate::CliError;

/// Largest denominator produced for `--approx` inputs.
pub const APPROX_MAX_DEN: u64 = 1_000_000;

pub struct Input {
    pub approx: bool,
}

impl Input {
    /// `p/q`, an integer or a finite decimal; with `--approx` also any
    /// floating-point literal.
    pub fn rational(&self, flag: &str, s: &str) -> Result<Rational, CliError> {
        match s.parse::<Rational>() {
            Ok(r) => Ok(r),
            Err(e) if self.approx => s
                .trim()
                .parse::<f64>()
                .ok()
                .and_then(|x| Rational::from_f64_approx(x, APPROX_MAX_DEN))
                .ok_or_else(|| CliError::Usage(format!("--{flag}: {e}"))),
            Err(e) => Err(CliError::Usage(format!("--{flag}: {e} (use p/q, or --approx for floats)"))),
        }
    }

    pub fn positive(&self, flag: &str, s: &str) -> Result<Rational, CliError> {
        let r = self.rational(flag, s)?;
        if !r.is_positive() {
            return Err(CliError::Usage(format!("--{flag} must be positive, got {r}")));
        }
        Ok(r)
    }
}

/// `from, from + step, …` up to and including `to`.
pub fn grid(from: &Rational, to: &Rational, step: &Rational) -> Result<Vec<Rational>, CliError> {
    if !step.is_positive() {
        return Err(CliError::Usage(format!("--step must be positive, got {step}")));
    }
    if to < from {
        return Err(CliError::Usage(format!("empty range [{from}, {to}]")));
    }
    let n = Rational::from(((to - from) / step).floor())
        .to_u64()
        .filter(|n| *n <= 10_000_000)
        .ok_or_else(|| CliError::Usage("grid too large".into()))?;
    Ok((0..=n).map(|i| from + step * Rational::from(i)).collect())
}

/// Writes to `path`, or to stdout.
pub fn emit(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, content)?,
        None => std::io::stdout().lock().write_all(content.as_bytes())?,
    }
    Ok(())
}
