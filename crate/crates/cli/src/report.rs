//! Run reports and their JSON and text renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::scenario::Command;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize, clap::ValueEnum, Default)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct CommandReport {
    pub command: Command,
    pub status: Status,
    /// SHA-256 of the canonical JSON of the inputs this command read.
    pub inputs_digest: String,
    pub outcome: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario: String,
    /// SHA-256 of the canonical JSON of the scenario after overrides.
    pub inputs_digest: String,
    pub order: u32,
    pub seed: Option<u64>,
    pub commands: Vec<CommandReport>,
    /// Commands not run because an earlier one failed.
    pub skipped: Vec<Command>,
    pub status: Status,
    pub exit_code: i32,
    /// Wall-clock milliseconds per command; the only nondeterministic field.
    pub timings: BTreeMap<String, f64>,
}

impl RunReport {
    /// Fail beats inconclusive beats pass; an empty run passes.
    pub fn aggregate(commands: &[CommandReport]) -> (Status, i32) {
        if commands.iter().any(|c| c.status == Status::Fail) {
            (Status::Fail, 1)
        } else if commands.iter().any(|c| c.status == Status::Inconclusive) {
            (Status::Inconclusive, 3)
        } else {
            (Status::Pass, 0)
        }
    }

    pub fn command(&self, c: Command) -> Option<&CommandReport> {
        self.commands.iter().find(|r| r.command == c)
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("reports serialize")
    }

    /// The report with `timings` removed; identical across replays.
    pub fn content(&self) -> Value {
        let mut v = self.to_value();
        if let Value::Object(m) = &mut v {
            m.remove("timings");
        }
        v
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => render_json(&self.to_value()),
            Format::Text => render_text(&self.to_value()),
        }
    }
}

/// Pretty JSON with keys in sorted order.
pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

pub fn digest<T: Serialize + ?Sized>(x: &T) -> String {
    let canonical = serde_json::to_value(x).expect("inputs serialize").to_string();
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|x| !x.is_array() && !x.is_object()),
        Value::Object(_) => false,
        _ => true,
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(m) if !m.is_empty() => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(items) if !is_flat(v) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        _ => {
            let _ = writeln!(out, "    {prefix} = {}", scalar_text(v));
        }
    }
}

/// Line-oriented rendering of a report value.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    let field = |k: &str| v.get(k).map(scalar_text).unwrap_or_default();
    let _ = writeln!(out, "scenario {}", field("scenario"));
    let _ = writeln!(out, "  order {}, seed {}", field("order"), field("seed"));
    let _ = writeln!(out, "  inputs {}", field("inputs_digest"));
    if let Some(Value::Array(cmds)) = v.get("commands") {
        for c in cmds {
            let get = |k: &str| c.get(k).map(scalar_text).unwrap_or_default();
            let _ = writeln!(out, "[{}] {}", get("status"), get("command"));
            let _ = writeln!(out, "    inputs = {}", get("inputs_digest"));
            if let Some(w) = c.get("witness") {
                let _ = writeln!(out, "    witness = {}", scalar_text(w));
            }
            if let Some(o) = c.get("outcome") {
                flatten("", o, &mut out);
            }
        }
    }
    if let Some(Value::Array(s)) = v.get("skipped") {
        if !s.is_empty() {
            let names: Vec<String> = s.iter().map(scalar_text).collect();
            let _ = writeln!(out, "skipped {}", names.join(", "));
        }
    }
    let _ = writeln!(out, "status {} (exit {})", field("status"), field("exit_code"));
    if let Some(Value::Object(t)) = v.get("timings") {
        for (k, ms) in t {
            let _ = writeln!(out, "  time {k} {} ms", scalar_text(ms));
        }
    }
    out
}
