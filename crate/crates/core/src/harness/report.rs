use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};

use super::Pipeline;

/// One checked quantity. `passed` is `None` for values reported without a
/// verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub passed: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Assertion {
    pub fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            value,
            bound,
            passed: Some(value <= bound),
            note: None,
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            value,
            bound,
            passed: Some(value >= bound),
            note: None,
        }
    }

    pub fn info(name: impl Into<String>, value: f64, note: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            value,
            bound: f64::NAN,
            passed: None,
            note: Some(note.into()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Drop the verdict, keeping the value.
    pub fn without_verdict(mut self, note: impl Into<String>) -> Self {
        self.passed = None;
        self.note = Some(note.into());
        self
    }

    pub fn verdict(&self) -> &'static str {
        match self.passed {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "INFO",
        }
    }
}

/// Everything a pipeline run produced.
#[derive(Debug, Clone, Serialize)]
pub struct ReportBundle {
    pub pipeline: Pipeline,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub assertions: Vec<Assertion>,
    pub outputs: Vec<PathBuf>,
    pub summary: serde_json::Value,
}

impl ReportBundle {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed != Some(false))
    }

    pub fn failures(&self) -> impl Iterator<Item = &Assertion> {
        self.assertions.iter().filter(|a| a.passed == Some(false))
    }

    pub fn render(&self) -> String {
        let mut s = format!("{}", self.pipeline);
        if let Some(l) = &self.label {
            s += &format!(" [{l}]");
        }
        s.push('\n');
        for a in &self.assertions {
            s += &format!("  {} {:<28} {:>12.4e}", a.verdict(), a.name, a.value);
            if a.bound.is_finite() {
                s += &format!("  bound {:.4e}", a.bound);
            }
            if let Some(n) = &a.note {
                s += &format!("  ({n})");
            }
            s.push('\n');
        }
        s
    }
}

pub(crate) fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

pub(crate) fn write_csv<R: Serialize>(path: &Path, header: &[&str], rows: impl IntoIterator<Item = R>) -> Result<()> {
    let fail = |e: csv::Error| Error::Format {
        path: path.to_path_buf(),
        reason: e.to_string(),
    };
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(fail)?;
    w.write_record(header).map_err(fail)?;
    for r in rows {
        w.serialize(r).map_err(fail)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
