//! Output sinks and the provenance header written at the top of every result.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

/// Resolved configuration of one run, echoed into its outputs.
#[derive(Debug, Clone)]
pub struct Provenance {
    pub command: &'static str,
    pub entries: Vec<(String, String)>,
    pub timestamp: bool,
}

impl Provenance {
    pub fn new(command: &'static str, timestamp: bool) -> Self {
        Provenance {
            command,
            entries: Vec::new(),
            timestamp,
        }
    }

    pub fn push(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.entries.push((key.to_string(), value.to_string()));
        self
    }

    pub fn write_csv_header(&self, w: &mut dyn Write) -> io::Result<()> {
        writeln!(w, "# nvdamage {}", env!("CARGO_PKG_VERSION"))?;
        writeln!(w, "# command={}", self.command)?;
        for (k, v) in &self.entries {
            writeln!(w, "# {k}={v}")?;
        }
        if self.timestamp {
            writeln!(w, "# generated_unix={}", unix_now())?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut config = serde_json::Map::new();
        for (k, v) in &self.entries {
            config.insert(k.clone(), serde_json::Value::String(v.clone()));
        }
        let mut obj = serde_json::json!({
            "tool": "nvdamage",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "config": config,
        });
        if self.timestamp {
            obj["generated_unix"] = serde_json::json!(unix_now());
        }
        obj
    }
}

fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Standard output when `path` is `None` or `-`.
pub fn open_sink(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    match path {
        Some(p) if p.as_os_str() != "-" => Ok(Box::new(BufWriter::new(File::create(p)?))),
        _ => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}
