//! Line-oriented text reports.
//!
//! A report is a versioned header line followed by records, one per line,
//! each a space-separated list of `key=value` fields.

use std::fmt::{self, Display};

pub const HEADER: &str = "# slitcarpet-report v1";

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    kind: String,
    records: Vec<Vec<(String, String)>>,
}

impl Report {
    pub fn new(kind: &str) -> Report {
        Report {
            kind: kind.to_string(),
            records: Vec::new(),
        }
    }

    /// Starts a new record.
    pub fn record(&mut self) -> &mut Report {
        self.records.push(Vec::new());
        self
    }

    /// Adds a field to the current record, starting one if needed. Spaces
    /// in values become underscores so records stay splittable.
    pub fn field(&mut self, key: &str, value: impl Display) -> &mut Report {
        if self.records.is_empty() {
            self.records.push(Vec::new());
        }
        let value = value.to_string().replace(char::is_whitespace, "_");
        self.records
            .last_mut()
            .expect("a record exists")
            .push((key.to_string(), value));
        self
    }

    pub fn records(&self) -> &[Vec<(String, String)>] {
        &self.records
    }

    /// Looks up a field in a record.
    pub fn get(&self, record: usize, key: &str) -> Option<&str> {
        self.records
            .get(record)?
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn parse(text: &str) -> Option<Report> {
        let mut lines = text.lines();
        if lines.next()? != HEADER {
            return None;
        }
        let kind = lines.next()?.strip_prefix("kind=")?.to_string();
        let mut records = Vec::new();
        for line in lines.filter(|l| !l.is_empty()) {
            let fields = line
                .split(' ')
                .map(|f| {
                    f.split_once('=')
                        .map(|(k, v)| (k.to_string(), v.to_string()))
                })
                .collect::<Option<Vec<_>>>()?;
            records.push(fields);
        }
        Some(Report { kind, records })
    }
}

impl Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{HEADER}")?;
        writeln!(f, "kind={}", self.kind)?;
        for r in &self.records {
            let line: Vec<String> = r.iter().map(|(k, v)| format!("{k}={v}")).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}
