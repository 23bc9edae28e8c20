//! Suite execution: run the registered checks, collect records and curves,
//! write the report.

use serde_json::Value;

use crate::config::ResolvedConfig;
use crate::registry::REGISTRY;
use crate::report::{CheckRecord, Curve, RunReport, Status};

pub struct SuiteRun {
    pub report: RunReport,
    pub curves: Vec<Curve>,
}

/// Run every check of the configured suite in registry order. A check that
/// errors out (evaluation failure, domain error, failed search) is recorded
/// as a failure carrying the error text.
pub fn run_suite(config: &ResolvedConfig) -> SuiteRun {
    let mut records = Vec::new();
    let mut curves = Vec::new();
    for def in REGISTRY.iter().filter(|d| d.in_suite(config.suite)) {
        let record = match (def.run)(config) {
            Ok(outcome) => {
                curves.extend(outcome.curves);
                CheckRecord {
                    name: def.name,
                    anchor: def.anchor,
                    status: if outcome.passed { Status::Pass } else { Status::Fail },
                    margin: outcome.margin,
                    witness: outcome.witness,
                }
            }
            Err(err) => CheckRecord {
                name: def.name,
                anchor: def.anchor,
                status: Status::Fail,
                margin: f64::NEG_INFINITY,
                witness: Some(Value::String(err.to_string())),
            },
        };
        records.push(record);
    }
    SuiteRun {
        report: RunReport::new(config.clone(), records),
        curves,
    }
}
