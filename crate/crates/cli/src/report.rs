use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use crate::HarnessError;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// A flat table, the only shape exported as CSV.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<S: ToString>(&mut self, row: impl IntoIterator<Item = S>) {
        let row: Vec<String> = row.into_iter().map(|c| c.to_string()).collect();
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Everything a run produced. Contains no wall-clock data, so equal
/// configurations serialize to equal bytes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub versions: BTreeMap<String, String>,
    pub seed: u64,
    pub config: Value,
    pub passed: bool,
    pub assertions: Vec<Assertion>,
    pub results: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Table>,
}

impl Report {
    pub fn new(command: &str, seed: u64, config: &impl Serialize) -> Self {
        let versions = [
            ("listcolour-cli", env!("CARGO_PKG_VERSION")),
            ("listcolour-core", listcolour::VERSION),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
        Report {
            command: command.to_string(),
            versions,
            seed,
            config: serde_json::to_value(config).expect("configs serialize"),
            passed: true,
            assertions: Vec::new(),
            results: Value::Null,
            table: None,
        }
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) -> bool {
        self.passed &= passed;
        self.assertions.push(Assertion {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
        passed
    }

    pub fn results(&mut self, results: &impl Serialize) {
        self.results = serde_json::to_value(results).expect("results serialize");
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Result<String, HarnessError> {
        let table = self
            .table
            .as_ref()
            .ok_or_else(|| HarnessError::Config(format!("`{}` has no tabular summary; use --format json", self.command)))?;
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&table.columns).and_then(|_| {
            table.rows.iter().try_for_each(|r| w.write_record(r))
        })?;
        Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv output is UTF-8"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failed_check_fails_report() {
        let mut r = Report::new("t", 3, &serde_json::json!({"a": 1}));
        assert!(r.check("one", true, ""));
        assert!(!r.check("two", false, "x"));
        assert!(!r.passed);
        assert!(r.to_json().contains("\"seed\": 3"));
        assert!(r.to_csv().is_err());
    }

    #[test]
    fn csv_quotes_fields() {
        let mut r = Report::new("t", 0, &());
        let mut t = Table::new(["k", "v"]);
        t.push(["a,b", "1"]);
        r.table = Some(t);
        assert_eq!(r.to_csv().unwrap(), "k,v\n\"a,b\",1\n");
    }
}
