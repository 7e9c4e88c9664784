use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Ok,
    Pass,
    Fail,
    Witness,
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Ok | Outcome::Pass | Outcome::Witness => 0,
            Outcome::Fail => 1,
        }
    }
}

/// Everything a command reports. No wall time: reports are byte-identical
/// across runs with the same arguments and seed.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub outcome: Outcome,
    pub counters: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            outcome: Outcome::Ok,
            counters: BTreeMap::new(),
            details: Value::Null,
            counterexample: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.parameters
            .insert(key.to_string(), serde_json::to_value(value).expect("serializable parameter"));
        self
    }

    pub fn count(&mut self, key: &str, value: u64) {
        self.counters.insert(key.to_string(), value);
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Counters of a report as CSV: `command,outcome,counter,value`.
pub fn report_csv(report: &Value) -> flipkit::Result<String> {
    let command = report["command"].as_str().unwrap_or_default().to_string();
    let outcome = report["outcome"].as_str().unwrap_or_default().to_string();
    let rows: Vec<Vec<String>> = report["counters"]
        .as_object()
        .map(|m| {
            m.iter()
                .map(|(k, v)| vec![command.clone(), outcome.clone(), k.clone(), v.to_string()])
                .collect()
        })
        .unwrap_or_default();
    flipkit::io::csv_string(&["command", "outcome", "counter", "value"], &rows)
}
