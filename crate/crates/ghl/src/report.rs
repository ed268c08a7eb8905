//! Command reports: one ordered list of fields rendered either as text
//! lines or as a JSON object, so the two formats mirror each other field for
//! field.

use serde_json::{Map, Value};

use crate::config::OutputFormat;

#[derive(Debug, Clone)]
pub struct Report {
    title: String,
    fields: Vec<(String, Value)>,
}

impl Report {
    pub fn new(title: &str) -> Self {
        Report {
            title: title.to_string(),
            fields: Vec::new(),
        }
    }

    pub fn field(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.fields.push((key.to_string(), value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v)
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Text => {
                let mut out = String::new();
                out.push_str(&format!("[{}]\n", self.title));
                for (k, v) in &self.fields {
                    let shown = match v {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    out.push_str(&format!("{k}: {shown}\n"));
                }
                out
            }
            OutputFormat::Json => {
                let mut map = Map::new();
                map.insert("report".into(), Value::String(self.title.clone()));
                for (k, v) in &self.fields {
                    map.insert(k.clone(), v.clone());
                }
                let mut s = serde_json::to_string_pretty(&Value::Object(map))
                    .expect("serializable");
                s.push('\n');
                s
            }
        }
    }
}

/// Renders an exact rational for reports.
pub fn rat_string(r: &ghl_core::Rat) -> String {
    if r.denom() == &num_bigint::BigInt::from(1) {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
