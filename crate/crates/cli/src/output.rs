use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Seed, version and flags of a run, written ahead of the rows.
#[derive(Debug, Clone)]
pub struct Meta {
    pub command: &'static str,
    pub seed: u64,
    pub config: Map<String, Value>,
}

impl Meta {
    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("tool".into(), json!("quadbound"));
        m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        m.insert("schema".into(), json!(1));
        m.insert("command".into(), json!(self.command));
        m.insert("seed".into(), json!(self.seed));
        m.insert("config".into(), Value::Object(self.config.clone()));
        Value::Object(m)
    }

    fn csv_preamble(&self) -> String {
        let config = serde_json::to_string(&self.config).expect("config serializes");
        format!(
            "# quadbound {} schema=1 command={} seed={}\n# config {config}\n",
            env!("CARGO_PKG_VERSION"),
            self.command,
            self.seed
        )
    }
}

pub fn render<T: Serialize>(meta: &Meta, rows: &[T], format: Format) -> io::Result<Vec<u8>> {
    match format {
        Format::Json => {
            let mut all = vec![meta.to_json()];
            for r in rows {
                all.push(serde_json::to_value(r).map_err(io::Error::other)?);
            }
            let mut out = serde_json::to_vec_pretty(&all).map_err(io::Error::other)?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut out = meta.csv_preamble().into_bytes();
            {
                let mut w = csv::Writer::from_writer(&mut out);
                for r in rows {
                    w.serialize(r).map_err(io::Error::other)?;
                }
                w.flush()?;
            }
            Ok(out)
        }
    }
}

pub fn emit(bytes: &[u8], out: Option<&Path>) -> io::Result<()> {
    match out {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            w.write_all(bytes)?;
            w.flush()
        }
        None => io::stdout().lock().write_all(bytes),
    }
}
