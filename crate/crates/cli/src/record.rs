use capax::bounds::Flag;
use capax::{BoundReport, Direction, EmbeddingProblem, Provenance, Real, TheoremValue, Verdict};
use serde::{Deserialize, Serialize};

use crate::suites::describe;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub direction: Direction,
    pub value: Real,
    pub provenance: String,
    pub source: Provenance,
}

/// JSON document printed by `capax bounds`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub problem: String,
    pub parameters: EmbeddingProblem,
    pub bounds: Vec<BoundEntry>,
    pub verdict: Verdict,
    pub flags: Vec<Flag>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem: Option<TheoremValue>,
    /// Wall-clock milliseconds; only with `--timing`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl OutputRecord {
    pub fn new(report: &BoundReport, timing_ms: Option<f64>) -> OutputRecord {
        let bounds = report
            .lowers
            .iter()
            .chain(&report.uppers)
            .map(|b| BoundEntry {
                direction: b.direction,
                value: b.value.clone(),
                provenance: b.provenance.to_string(),
                source: b.provenance.clone(),
            })
            .collect();
        OutputRecord {
            problem: describe(&report.problem),
            parameters: report.problem.clone(),
            bounds,
            verdict: report.verdict.clone(),
            flags: report.flags.clone(),
            theorem: report.theorem.clone(),
            timing_ms,
        }
    }
}
