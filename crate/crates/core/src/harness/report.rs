use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::exact::{fmt_scalar, Scalar};
use crate::poisson::{OmegaMatrix, Violation};

pub fn ser_scalar<S: Serializer>(s: &Scalar, ser: S) -> Result<S::Ok, S::Error> {
    ser.serialize_str(&fmt_scalar(s))
}

pub fn ser_opt_scalar<S: Serializer>(s: &Option<Scalar>, ser: S) -> Result<S::Ok, S::Error> {
    match s {
        Some(v) => ser.serialize_str(&fmt_scalar(v)),
        None => ser.serialize_none(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Probabilistic support (divisibility); no counterexample found.
    Evidence,
    /// Recorded measurement, not a pass/fail criterion.
    Info,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status, detail: Value) -> Self {
        Self {
            name: name.into(),
            status,
            detail,
        }
    }

    pub fn pass_if(name: impl Into<String>, ok: bool, detail: Value) -> Self {
        Self::new(name, if ok { Status::Pass } else { Status::Fail }, detail)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Timing {
    pub elapsed_ms: u128,
}

/// Outcome of one CLI invocation. Everything except `timing` is a pure
/// function of the command line.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: Vec<String>,
    pub n: usize,
    pub seed: u64,
    pub status: Status,
    pub checks: Vec<Check>,
    pub timing: Timing,
}

impl Report {
    pub fn new(command: Vec<String>, n: usize, seed: u64, mut checks: Vec<Check>) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        let failed = checks.iter().any(|c| c.status == Status::Fail);
        Self {
            schema: 1,
            command,
            n,
            seed,
            status: if failed { Status::Fail } else { Status::Pass },
            checks,
            timing: Timing { elapsed_ms: 0 },
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn scalars(v: &[Scalar]) -> Vec<String> {
    v.iter().map(fmt_scalar).collect()
}

pub fn omega_json(o: &OmegaMatrix) -> Value {
    json!({
        "labels": o.labels,
        "entries": o.entries.iter().map(|r| scalars(r)).collect::<Vec<_>>(),
        "integral": o.is_integral(),
    })
}

pub fn violation_json(v: &Violation) -> Value {
    json!({
        "pair": [v.labels.0, v.labels.1],
        "point": v.point,
        "reference": fmt_scalar(&v.reference),
        "observed": fmt_scalar(&v.observed),
    })
}
