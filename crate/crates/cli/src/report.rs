use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};
use crate::io::{csv_files, Format};

/// Everything one command produced. Apart from `timings_ms` the report is
/// a function of the inputs and the seed.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub args: serde_json::Value,
    pub inputs: Vec<InputDigest>,
    pub output: serde_json::Value,
    pub timings_ms: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub kind: &'static str,
    pub path: Option<String>,
    pub sha256: String,
}

pub fn digest_text(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Hash of a JSON file, or of a directory's CSV files taken in name order
/// as `name NUL contents NUL`.
pub fn digest_database(path: &Path) -> CliResult<String> {
    let read = |p: &Path| fs::read(p).map_err(|e| CliError::io(p, e));
    match Format::of(path) {
        Format::Json => Ok(hex::encode(Sha256::digest(read(path)?))),
        Format::CsvDir => {
            let mut h = Sha256::new();
            for f in csv_files(path)? {
                let name = f.file_name().and_then(|n| n.to_str()).unwrap_or_default();
                h.update(name.as_bytes());
                h.update([0]);
                h.update(read(&f)?);
                h.update([0]);
            }
            Ok(hex::encode(h.finalize()))
        }
    }
}

impl RunReport {
    pub fn new(command: &'static str, args: &impl Serialize) -> Self {
        RunReport {
            tool: "ijoin",
            version: env!("CARGO_PKG_VERSION"),
            command,
            args: serde_json::to_value(args).expect("arguments serialize"),
            inputs: Vec::new(),
            output: serde_json::Value::Null,
            timings_ms: BTreeMap::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// The report with timings cleared, for comparing runs.
    pub fn without_timings(&self) -> RunReport {
        RunReport { timings_ms: BTreeMap::new(), ..self.clone() }
    }
}
