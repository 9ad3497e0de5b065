use std::io::Write;

use serde::Serialize;
use serde_json::{Map, Value};

/// Where a number came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Toeplitz,
    Fredholm,
    RhModel,
    Painleve,
    Constants,
}

#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub outputs: Map<String, Value>,
    pub provenance: Map<String, Value>,
}

impl Record {
    pub fn new(command: &str) -> Self {
        Record {
            command: command.to_string(),
            inputs: Map::new(),
            outputs: Map::new(),
            provenance: Map::new(),
        }
    }

    pub fn input(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.inputs.insert(key.to_string(), v.into());
        self
    }

    pub fn output(mut self, key: &str, v: impl Into<Value>, route: Route) -> Self {
        self.outputs.insert(key.to_string(), v.into());
        self.provenance.insert(key.to_string(), serde_json::to_value(route).expect("unit variant"));
        self
    }

    fn flatten(&self) -> Vec<(String, String)> {
        let mut out = vec![("command".to_string(), self.command.clone())];
        for (section, map) in
            [("inputs", &self.inputs), ("outputs", &self.outputs), ("provenance", &self.provenance)]
        {
            for (k, v) in map {
                let cell = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                out.push((format!("{section}.{k}"), cell));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Writes the records in order. CSV takes the union of the flattened keys,
/// in first-seen order, as its header.
pub fn write_records(records: &[Record], format: Format, out: &mut impl Write) -> std::io::Result<()> {
    match format {
        Format::Json => {
            for r in records {
                serde_json::to_writer(&mut *out, r)?;
                out.write_all(b"\n")?;
            }
        }
        Format::Csv => {
            let flat: Vec<Vec<(String, String)>> = records.iter().map(Record::flatten).collect();
            let mut header: Vec<String> = Vec::new();
            for row in &flat {
                for (k, _) in row {
                    if !header.contains(k) {
                        header.push(k.clone());
                    }
                }
            }
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(&header)?;
            for row in &flat {
                let cells = header
                    .iter()
                    .map(|h| row.iter().find(|(k, _)| k == h).map(|(_, v)| v.as_str()).unwrap_or(""));
                w.write_record(cells)?;
            }
            w.flush()?;
        }
    }
    out.flush()
}
