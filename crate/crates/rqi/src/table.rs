//! Ordered sweep results with named columns, serializable as CSV or JSON
//! with deterministic formatting (12 significant digits, '.' decimal
//! separator, '\n' line endings).

use serde::Serialize;

use crate::error::{Result, RqiError};

#[derive(Debug, Clone, Serialize)]
pub struct CurveTable {
    pub x_name: String,
    pub x_values: Vec<f64>,
    pub columns: Vec<Column>,
    pub metadata: Vec<(String, String)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Column {
    pub name: String,
    pub values: Vec<f64>,
}

impl CurveTable {
    pub fn new(x_name: &str, x_values: Vec<f64>) -> Self {
        Self {
            x_name: x_name.to_string(),
            x_values,
            columns: Vec::new(),
            metadata: Vec::new(),
        }
    }

    pub fn push_column(&mut self, name: &str, values: Vec<f64>) -> Result<()> {
        if values.len() != self.x_values.len() {
            return Err(RqiError::BadShape(format!(
                "column `{name}` has {} entries, expected {}",
                values.len(),
                self.x_values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(RqiError::BadShape(format!(
                "column `{name}` contains a non-finite entry {v}"
            )));
        }
        self.columns.push(Column {
            name: name.to_string(),
            values,
        });
        Ok(())
    }

    pub fn add_metadata(&mut self, key: &str, value: impl ToString) {
        self.metadata.push((key.to_string(), value.to_string()));
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.values.as_slice())
    }

    /// `# key=value` metadata comments, a header row, then data rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            out.push_str(&format!("# {k}={v}\n"));
        }
        out.push_str(&self.x_name);
        for c in &self.columns {
            out.push(',');
            out.push_str(&c.name);
        }
        out.push('\n');
        for i in 0..self.x_values.len() {
            out.push_str(&fmt_sig(self.x_values[i]));
            for c in &self.columns {
                out.push(',');
                out.push_str(&fmt_sig(c.values[i]));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

/// 12 significant digits, scientific notation, deterministic.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    format!("{v:.11e}")
}
