use std::time::Duration;

use nbw_core::Error;
use serde::Serialize;
use serde_json::{json, Value};

/// Output document of every command. Field order is part of the format.
#[derive(Serialize)]
pub struct CommandResult {
    pub command: &'static str,
    pub engine_version: &'static str,
    pub inputs: Value,
    pub outputs: Value,
    /// `null` unless `--timing` was given, so outputs stay byte-stable.
    pub timing: Option<Value>,
}

impl CommandResult {
    pub fn new(command: &'static str, inputs: Value, outputs: Value, elapsed: Option<Duration>) -> Self {
        CommandResult {
            command,
            engine_version: nbw_core::VERSION,
            inputs,
            outputs,
            timing: elapsed.map(|d| json!({ "elapsed_ms": d.as_secs_f64() * 1e3 })),
        }
    }
}

pub fn error_document(command: &'static str, err: &Error) -> Value {
    json!({
        "command": command,
        "engine_version": nbw_core::VERSION,
        "error": { "kind": err.kind(), "message": err.to_string() },
    })
}

pub fn render<T: Serialize>(value: &T, pretty: bool) -> String {
    let out = if pretty { serde_json::to_string_pretty(value) } else { serde_json::to_string(value) };
    out.expect("JSON values always serialize")
}
