//! JSON check reports and fixed-precision CSV tables.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliResult;

/// One numeric claim and the tolerance it was tested at. Passes iff
/// `value <= tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub check: String,
    pub params: BTreeMap<String, Value>,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn at_most(check: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check {
            check: check.into(),
            params: BTreeMap::new(),
            value,
            tolerance,
            pass: value <= tolerance,
        }
    }

    /// `|value - target| <= tolerance`, reported as the deviation.
    pub fn near(check: impl Into<String>, value: f64, target: f64, tolerance: f64) -> Self {
        Check::at_most(check, (value - target).abs(), tolerance)
            .with("target", target)
            .with("observed", value)
    }

    /// A yes/no claim: value 0 when it holds, 1 otherwise.
    pub fn holds(check: impl Into<String>, ok: bool) -> Self {
        Check::at_most(check, if ok { 0.0 } else { 1.0 }, 0.0)
    }

    pub fn with(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.params.insert(key.into(), v.into());
        self
    }
}

/// Checks of one run. `notes` are reported but never fail the run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub notes: Vec<Check>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.into(),
            pass: true,
            ..Default::default()
        }
    }

    pub fn push(&mut self, c: Check) {
        self.pass &= c.pass;
        self.checks.push(c);
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = Check>) {
        cs.into_iter().for_each(|c| self.push(c));
    }

    pub fn note(&mut self, c: Check) {
        self.notes.push(c);
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports are always serializable")
    }
}

/// Twelve significant digits in scientific notation.
pub fn fmt12(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.11e}")
    } else {
        v.to_string()
    }
}

/// A CSV table with fixed column names.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&'static str]) -> Self {
        Table {
            name: name.into(),
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn push_numbers(&mut self, row: &[f64]) {
        self.push(row.iter().map(|&v| fmt12(v)).collect());
    }

    pub fn write_to<W: Write>(&self, w: W) -> CliResult<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.header)?;
        for r in &self.rows {
            out.write_record(r)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| *h == name)?;
        self.rows.iter().map(|r| r[i].parse().ok()).collect()
    }
}

/// Result of one subcommand.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Report,
    pub tables: Vec<Table>,
}

impl Outcome {
    /// Writes `<dir>/<table>.csv` and `<dir>/<command>.json`; returns the paths.
    pub fn write(&self, dir: &Path) -> CliResult<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut paths = Vec::new();
        for t in &self.tables {
            let p = dir.join(format!("{}.csv", t.name));
            t.write_to(std::fs::File::create(&p)?)?;
            paths.push(p);
        }
        let p = dir.join(format!("{}.json", self.report.command));
        std::fs::write(&p, self.report.to_json())?;
        paths.push(p);
        Ok(paths)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(fmt12(1.0), "1.00000000000e0");
        assert_eq!(fmt12(-0.1234567890123456), "-1.23456789012e-1");
        assert_eq!(fmt12(f64::INFINITY), "inf");
    }

    #[test]
    fn report_pass_tracks_checks() {
        let mut r = Report::new("x");
        r.push(Check::at_most("a", 1e-10, 1e-9));
        r.note(Check::at_most("literal", 2.0, 1e-9));
        assert!(r.pass);
        r.push(Check::near("b", 5.1, 5.0, 0.02));
        assert!(!r.pass);
        assert_eq!(r.failures().len(), 1);
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn check_schema() {
        let c = Check::holds("monotone", true).with("points", 20);
        let v: Value = serde_json::to_value(&c).unwrap();
        let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        keys.sort_unstable();
        assert_eq!(keys, ["check", "params", "pass", "tolerance", "value"]);
        assert!(!Check::at_most("nan", f64::NAN, 1.0).pass);
    }

    #[test]
    fn table_csv() {
        let mut t = Table::new("t", &["x", "y"]);
        t.push_numbers(&[1.0, 0.5]);
        assert_eq!(t.to_csv(), "x,y\n1.00000000000e0,5.00000000000e-1\n");
        assert_eq!(t.column("y"), Some(vec![0.5]));
    }
}
