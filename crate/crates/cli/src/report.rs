//! The JSON report document written by every subcommand.

use quasirandom::{Error, Limits, Result};
use serde::Serialize;
use serde_json::Value;

/// Version tag of the report layout; bumped on incompatible changes.
pub const SCHEMA: &str = "qrg-report/1";

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub caps: Limits,
}

/// Everything needed to re-run the experiment, plus its results. The worker
/// count is deliberately absent: reports do not depend on it.
#[derive(Clone, Debug, Serialize)]
pub struct ReportDoc {
    pub schema: &'static str,
    pub subcommand: String,
    pub inputs: Value,
    pub results: Value,
    pub provenance: Provenance,
}

impl ReportDoc {
    pub fn new(subcommand: impl Into<String>, inputs: Value, results: Value, seed: u64, caps: Limits) -> Self {
        ReportDoc {
            schema: SCHEMA,
            subcommand: subcommand.into(),
            inputs,
            results,
            provenance: Provenance {
                tool: "qrg",
                version: env!("CARGO_PKG_VERSION"),
                seed,
                caps,
            },
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

pub fn to_value<T: Serialize>(value: &T) -> Result<Value> {
    serde_json::to_value(value).map_err(|e| Error::Invalid(format!("cannot serialize report: {e}")))
}

/// Process exit code for an error: 2 for bad input, 3 for exceeded caps,
/// 4 for a failed guaranteed bound, 1 for anything else.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::CapExceeded { .. } => 3,
        Error::TheoremViolation(_) => 4,
        Error::SplittingFailure { .. } | Error::NonConvergence { .. } => 1,
        _ => 2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Invalid("x".into())), 2);
        assert_eq!(exit_code(&Error::NotPrimePower(6)), 2);
        assert_eq!(
            exit_code(&Error::CapExceeded {
                what: "group order",
                value: 2,
                cap: 1
            }),
            3
        );
        assert_eq!(exit_code(&Error::TheoremViolation("x".into())), 4);
    }

    #[test]
    fn document_layout() {
        let doc = ReportDoc::new("k", serde_json::json!({"group": "C(3)"}), serde_json::json!({"k": 1}), 7, Limits::default());
        let v: Value = serde_json::from_str(&doc.to_json()).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["provenance"]["seed"], 7);
        assert_eq!(v["results"]["k"], 1);
        assert!(v["provenance"].get("workers").is_none());
    }
}
