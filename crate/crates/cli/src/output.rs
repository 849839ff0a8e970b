use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::{json, Value};

use crate::config::RunConfig;

pub fn meta(cfg: &RunConfig, command: &str) -> Value {
    json!({
        "command": command,
        "version": ghcs::VERSION,
        "config": cfg.to_json(),
    })
}

fn write_to(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

/// CSV goes to `--out` (with a `<out>.meta.json` sidecar) or stdout.
pub fn emit_csv(cfg: &RunConfig, command: &str, csv: &str) -> Result<()> {
    write_to(cfg.out.as_deref(), csv)?;
    if let Some(p) = &cfg.out {
        let side = format!("{}.meta.json", p.display());
        write_to(Some(Path::new(&side)), &pretty(&meta(cfg, command))?)?;
    }
    Ok(())
}

/// JSON documents carry the metadata inline next to `result`.
pub fn emit_json(cfg: &RunConfig, command: &str, result: Value) -> Result<()> {
    let mut doc = meta(cfg, command);
    doc["result"] = result;
    write_to(cfg.out.as_deref(), &pretty(&doc)?)
}
