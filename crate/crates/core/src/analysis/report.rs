use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A reported value: a finite number or a text marker such as
/// `"identical"` (PSNR of two equal images).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Number(f64),
    Text(String),
}

impl Value {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Number(v) => Some(*v),
            Value::Text(_) => None,
        }
    }

    fn to_field(&self) -> String {
        match self {
            Value::Number(v) => v.to_string(),
            Value::Text(s) => s.clone(),
        }
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_owned())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

/// Rectangular result table (one row per experiment cell).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::InvalidArgument(format!(
                "row has {} values for {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        for v in &row {
            check_finite(v)?;
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Value>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }
}

fn check_finite(v: &Value) -> Result<()> {
    match v {
        Value::Number(x) if !x.is_finite() => {
            Err(Error::InvalidArgument(format!("non-finite value {x} in report")))
        }
        _ => Ok(()),
    }
}

/// Result of any metric or experiment. Maps are ordered so serialized
/// output is stable.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub metric: String,
    pub scalars: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_channel: Option<BTreeMap<String, f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Table>,
    pub metadata: BTreeMap<String, String>,
}

impl AnalysisReport {
    pub fn new(metric: impl Into<String>) -> Self {
        AnalysisReport { metric: metric.into(), ..Default::default() }
    }

    pub fn scalar(mut self, name: impl Into<String>, value: impl Into<Value>) -> Result<Self> {
        let value = value.into();
        check_finite(&value)?;
        self.scalars.insert(name.into(), value);
        Ok(self)
    }

    pub fn channel(mut self, name: impl Into<String>, value: f64) -> Result<Self> {
        check_finite(&Value::Number(value))?;
        self.per_channel.get_or_insert_with(BTreeMap::new).insert(name.into(), value);
        Ok(self)
    }

    pub fn meta(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.metadata.insert(key.into(), value.to_string());
        self
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.scalars.get(name).and_then(Value::as_f64)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is always serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidArgument(format!("bad report JSON: {e}")))
    }

    /// A report with a table serializes as that table; otherwise as
    /// `name,value` rows (scalars, then `channel.<name>` entries).
    pub fn to_csv(&self) -> Result<String> {
        if let Some(t) = &self.table {
            let cols: Vec<&str> = t.columns.iter().map(String::as_str).collect();
            return crate::maps::write_csv(&cols, t.rows.iter().map(|r| r.iter().map(Value::to_field).collect()));
        }
        let scalars = self.scalars.iter().map(|(k, v)| vec![k.clone(), v.to_field()]);
        let channels = self
            .per_channel
            .iter()
            .flatten()
            .map(|(k, v)| vec![format!("channel.{k}"), v.to_string()]);
        crate::maps::write_csv(&["name", "value"], scalars.chain(channels))
    }

    /// Human-readable `name: value` lines.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.metric);
        for (k, v) in &self.scalars {
            out.push_str(&format!("  {k}: {}\n", v.to_field()));
        }
        for (k, v) in self.per_channel.iter().flatten() {
            out.push_str(&format!("  channel {k}: {v}\n"));
        }
        if let Some(t) = &self.table {
            out.push_str(&format!("  {}\n", t.columns.join("\t")));
            for r in &t.rows {
                let cells: Vec<String> = r.iter().map(Value::to_field).collect();
                out.push_str(&format!("  {}\n", cells.join("\t")));
            }
        }
        out
    }
}
