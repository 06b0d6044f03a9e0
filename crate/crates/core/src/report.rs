//! Machine-readable reports shared by the library suites and the CLI.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use crate::bimodule::checks::Failure;

/// Outcome of an exhaustive or sampled grid of exact identities.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridReport {
    pub check: String,
    pub algebra: String,
    /// The module the identities act on, if not the algebra itself.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub module: Option<String>,
    pub cases: usize,
    pub passed: usize,
    pub failures: Vec<Failure>,
}

impl GridReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty() && self.passed == self.cases
    }

    /// Counts one case per outcome; `Some` marks a failure.
    pub fn collect(check: &str, algebra: String, module: Option<String>, outcomes: Vec<Option<Failure>>) -> Self {
        let cases = outcomes.len();
        let failures: Vec<Failure> = outcomes.into_iter().flatten().collect();
        Self { check: check.into(), algebra, module, cases, passed: cases - failures.len(), failures }
    }
}

/// Envelope written by every CLI run.
///
/// Everything except `timings` is a function of the command, its
/// parameters and the seed, so two runs with the same inputs serialize to the
/// same bytes once timings are removed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebra: Option<String>,
    pub params: Value,
    pub passed: bool,
    pub result: Value,
    /// Wall-clock seconds per phase.
    pub timings: BTreeMap<String, f64>,
}

impl RunReport {
    pub fn new(command: &str, params: Value) -> Self {
        Self {
            tool: "bimod".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            seed: None,
            algebra: None,
            params,
            passed: true,
            result: Value::Null,
            timings: BTreeMap::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// The report with timings cleared, for reproducibility comparisons.
    pub fn without_timings(&self) -> Self {
        Self { timings: BTreeMap::new(), ..self.clone() }
    }
}
