//! Reports: a header that replays the run, then a table (CSV) or a JSON value.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::ExperimentConfig;
use crate::seeds::PRNG_ID;
use crate::LabResult;

pub const TOOL: &str = "ismr-lab";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub config: ExperimentConfig,
    pub config_sha256: String,
    pub seed: u64,
    pub prng: String,
}

impl Header {
    pub fn new(config: &ExperimentConfig) -> Self {
        let mut config = config.clone();
        config.out = None;
        Header {
            tool: TOOL.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config_sha256: config.hash(),
            seed: config.seed,
            prng: PRNG_ID.into(),
            config,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    Table { columns: Vec<String>, rows: Vec<Vec<String>> },
    Json(Value),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub header: Header,
    pub body: Body,
}

impl Report {
    pub fn table(config: &ExperimentConfig, columns: &[&str], rows: Vec<Vec<String>>) -> Self {
        Report {
            header: Header::new(config),
            body: Body::Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows },
        }
    }

    pub fn json(config: &ExperimentConfig, value: Value) -> Self {
        Report { header: Header::new(config), body: Body::Json(value) }
    }

    /// Tables render as CSV unless `as_json`; JSON bodies always render as JSON.
    pub fn render(&self, as_json: bool) -> LabResult<String> {
        match (&self.body, as_json) {
            (Body::Table { columns, rows }, false) => {
                let mut out = format!("#{}\n", serde_json::to_string(&self.header)?);
                let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
                w.write_record(columns)?;
                for r in rows {
                    w.write_record(r)?;
                }
                out.push_str(&String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv is utf-8"));
                Ok(out)
            }
            (Body::Table { columns, rows }, true) => self.render_json(serde_json::json!({ "columns": columns, "rows": rows })),
            (Body::Json(v), _) => self.render_json(v.clone()),
        }
    }

    fn render_json(&self, result: Value) -> LabResult<String> {
        let mut s = serde_json::to_string_pretty(&serde_json::json!({ "header": self.header, "result": result }))?;
        s.push('\n');
        Ok(s)
    }

    /// Writes to the configured path, choosing JSON for `.json` paths and
    /// JSON bodies; returns the rendered text.
    pub fn write(&self, path: Option<&str>) -> LabResult<String> {
        let as_json = path.is_some_and(|p| p.ends_with(".json"));
        let text = self.render(as_json)?;
        if let Some(p) = path {
            std::fs::write(p, &text)?;
        }
        Ok(text)
    }
}

/// Shortest round-trip decimal form.
pub fn num(v: f64) -> String {
    format!("{v}")
}
