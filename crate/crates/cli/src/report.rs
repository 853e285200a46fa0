//! The JSON run report: output formulas plus every certificate, written
//! so that a consumer can re-check the certificates with nothing but a
//! formula evaluator.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use indep_core::pipelines::Certification;
use indep_core::Theory;

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct RunReport {
    pub version: String,
    pub mode: String,
    pub input_path: String,
    pub output: Vec<String>,
    pub fallback_used: bool,
    pub certificates: Certificates,
    pub stats: Stats,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct Certificates {
    pub equivalence: EquivalenceSection,
    pub independence: Vec<IndependenceRecord>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceSection {
    /// One record per output formula: the input entails it.
    pub input_entails_output: Vec<EntailmentRecord>,
    /// One record per input formula: the output entails it.
    pub output_entails_input: Vec<EntailmentRecord>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct EntailmentRecord {
    pub formula: String,
    pub status: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct IndependenceRecord {
    pub formula: String,
    pub independent: bool,
    /// Model of the other output members plus this member's negation.
    pub witness: BTreeMap<String, bool>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct Stats {
    pub oracle_calls: u64,
    pub symbols: usize,
    /// Present only when timing was requested; omitted by default so
    /// repeated runs stay byte-identical.
    pub elapsed_ms: Option<u128>,
}

pub fn build_report(
    mode: &str,
    input_path: &str,
    input: &Theory,
    output: &Theory,
    certification: &Certification,
    fallback_used: bool,
    stats: Stats,
) -> RunReport {
    let input_entails_output = output
        .iter()
        .map(|f| EntailmentRecord {
            formula: f.to_string(),
            status: "entailed".into(),
        })
        .collect();
    let output_entails_input = input
        .iter()
        .map(|f| EntailmentRecord {
            formula: f.to_string(),
            status: "entailed".into(),
        })
        .collect();
    let independence = output
        .iter()
        .zip(&certification.independence_witnesses)
        .map(|(f, witness)| IndependenceRecord {
            formula: f.to_string(),
            independent: true,
            witness: witness
                .iter()
                .map(|(s, b)| (s.to_string(), b))
                .collect(),
        })
        .collect();
    RunReport {
        version: env!("CARGO_PKG_VERSION").into(),
        mode: mode.into(),
        input_path: input_path.into(),
        output: output.iter().map(|f| f.to_string()).collect(),
        fallback_used,
        certificates: Certificates {
            equivalence: EquivalenceSection {
                input_entails_output,
                output_entails_input,
            },
            independence,
        },
        stats,
    }
}

pub fn to_json(report: &RunReport) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("report serialization is total");
    text.push('\n');
    text
}
