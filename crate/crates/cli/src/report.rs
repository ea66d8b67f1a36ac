//! JSON envelopes, run manifests and file output.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;

/// Bumped whenever any report's field layout changes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub schema: String,
    pub schema_version: u32,
    pub report: &'a T,
}

pub fn envelope<T: Serialize>(command: &str, report: &T) -> Value {
    serde_json::to_value(Envelope {
        schema: format!("raqm.{command}"),
        schema_version: SCHEMA_VERSION,
        report,
    })
    .expect("reports serialise")
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialise");
    s.push('\n');
    s
}

/// Everything needed to repeat a run. Reports carry no timestamps, so the
/// same `args` give byte-identical reports.
#[derive(Serialize)]
pub struct RunManifest {
    pub command: String,
    pub args: Vec<String>,
    pub config: Value,
    pub seed: Option<u64>,
    pub tool_version: String,
    pub timestamp_unix: u64,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn new(command: &str, args: Vec<String>, config: Value, seed: Option<u64>, outputs: Vec<PathBuf>) -> Self {
        RunManifest {
            command: command.into(),
            args,
            config,
            seed,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            timestamp_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
            outputs,
        }
    }
}

pub fn write_file(path: &Path, contents: &[u8]) -> Result<(), String> {
    fs::write(path, contents).map_err(|e| format!("cannot write {}: {e}", path.display()))
}
