use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// The command line as typed, with the program name normalized.
pub fn invocation() -> Vec<String> {
    std::iter::once("psic".to_string()).chain(std::env::args().skip(1)).collect()
}

/// `report` as a JSON object with `tool_version`, `invocation` and `seed` added at the top level.
pub fn with_provenance<T: Serialize>(report: &T, seed: u64) -> Result<Value> {
    let mut v = serde_json::to_value(report)?;
    let obj = match v.as_object_mut() {
        Some(o) => o,
        None => {
            v = json!({ "result": v });
            v.as_object_mut().expect("just built an object")
        }
    };
    obj.insert("tool_version".into(), json!(TOOL_VERSION));
    obj.insert("invocation".into(), json!(invocation()));
    obj.insert("seed".into(), json!(seed));
    Ok(v)
}

/// JSON to `out` (summary to stdout), or JSON to stdout (summary to stderr).
pub fn emit<T: Serialize + ?Sized>(out: Option<&Path>, doc: &T, summary: &str) -> Result<()> {
    let text = psic_core::json::to_string(doc)?;
    match out {
        Some(path) => {
            fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
            print!("{summary}");
        }
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            eprint!("{summary}");
        }
    }
    Ok(())
}
