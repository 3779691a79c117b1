use std::time::Instant;

use serde::Serialize;
use serde_json::Value;
use unital_core::FieldTower;

#[derive(Debug, Serialize)]
pub struct TowerInfo {
    pub p: u32,
    pub r: u32,
    pub q: u32,
    pub modulus: Vec<u32>,
}

impl From<&FieldTower> for TowerInfo {
    fn from(t: &FieldTower) -> Self {
        TowerInfo {
            p: t.p(),
            r: t.r(),
            q: t.q(),
            modulus: t.modulus().to_vec(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct Timing {
    pub elapsed_ms: u128,
}

/// Top-level JSON document every command prints. Everything except
/// `timing` is a function of the invocation.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub version: &'static str,
    pub tower: TowerInfo,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub data: Value,
    pub timing: Timing,
}

pub struct ReportBuilder {
    command: String,
    tower: TowerInfo,
    checks: Vec<Check>,
    data: serde_json::Map<String, Value>,
    start: Instant,
}

impl ReportBuilder {
    pub fn new(command: String, t: &FieldTower) -> Self {
        ReportBuilder {
            command,
            tower: t.into(),
            checks: Vec::new(),
            data: serde_json::Map::new(),
            start: Instant::now(),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, witness: Option<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            witness: if passed { None } else { witness },
        });
    }

    pub fn data(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("report data serialises");
        self.data.insert(key.to_string(), v);
    }

    pub fn finish(self) -> RunReport {
        RunReport {
            command: self.command,
            version: env!("CARGO_PKG_VERSION"),
            tower: self.tower,
            passed: self.checks.iter().all(|c| c.passed),
            checks: self.checks,
            data: Value::Object(self.data),
            timing: Timing {
                elapsed_ms: self.start.elapsed().as_millis(),
            },
        }
    }
}
