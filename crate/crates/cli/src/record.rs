//! Versioned JSON run records.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: &str = "vsep/1";

/// Everything needed to replay a run, plus its outputs.
#[derive(Debug, Serialize)]
pub struct RunRecord {
    pub schema: &'static str,
    pub command: String,
    pub seed: Option<u64>,
    pub parameters: Value,
    /// SHA-256 of the canonical text serialization of the input instance.
    pub instance_digest: Option<String>,
    pub output_sizes: BTreeMap<String, usize>,
    pub timings_ms: BTreeMap<String, f64>,
    pub verdicts: BTreeMap<String, bool>,
    pub result: Value,
}

impl RunRecord {
    pub fn new(command: &str, seed: Option<u64>, parameters: Value) -> Self {
        RunRecord {
            schema: SCHEMA,
            command: command.to_string(),
            seed,
            parameters,
            instance_digest: None,
            output_sizes: BTreeMap::new(),
            timings_ms: BTreeMap::new(),
            verdicts: BTreeMap::new(),
            result: Value::Null,
        }
    }

    /// Runs `f` and records its wall-clock time under `phase`.
    pub fn time<T>(&mut self, phase: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings_ms.insert(phase.to_string(), start.elapsed().as_secs_f64() * 1e3);
        out
    }

    pub fn size(&mut self, name: &str, n: usize) {
        self.output_sizes.insert(name.to_string(), n);
    }

    pub fn verdict(&mut self, name: &str, ok: bool) {
        self.verdicts.insert(name.to_string(), ok);
    }
}
