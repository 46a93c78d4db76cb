//! Verdict records: one line per check, as JSON or CSV.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::io::Write;

use serde::Serialize;

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A flagged discrepancy that does not count as a failure.
    Anomaly,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Anomaly => "anomaly",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerdictRecord {
    pub check: String,
    pub params: BTreeMap<String, String>,
    pub status: Status,
    /// `"0"` for a passing exact check; a number otherwise.
    pub residual: String,
    /// Wall time of the check group that produced this record.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl VerdictRecord {
    pub fn new(check: impl Into<String>, status: Status, residual: impl Into<String>) -> Self {
        VerdictRecord { check: check.into(), params: BTreeMap::new(), status, residual: residual.into(), runtime_ms: None }
    }

    /// Exact check: passes iff the number of nonzero residual entries is 0.
    pub fn exact(check: impl Into<String>, nonzero: usize) -> Self {
        let status = if nonzero == 0 { Status::Pass } else { Status::Fail };
        Self::new(check, status, nonzero.to_string())
    }

    /// Boolean property with a numeric witness.
    pub fn property(check: impl Into<String>, ok: bool, witness: f64) -> Self {
        Self::new(check, if ok { Status::Pass } else { Status::Fail }, format_float(witness))
    }

    /// Float check: passes iff `value <= tol`.
    pub fn within(check: impl Into<String>, value: f64, tol: f64) -> Self {
        let rec = Self::property(check, value <= tol, value);
        rec.param("tol", format_float(tol))
    }

    pub fn param(mut self, key: &str, value: impl Display) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn to_csv(&self) -> String {
        let params = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";");
        let mut line = format!("{},{},{},{}", self.check, self.status.as_str(), self.residual, params);
        if let Some(ms) = self.runtime_ms {
            line.push_str(&format!(",{ms}"));
        }
        line
    }
}

/// Shortest round-trip representation, so output is byte-stable.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x:e}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

pub fn emit(records: &[VerdictRecord], format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Json => {
            for r in records {
                writeln!(out, "{}", r.to_json()?)?;
            }
        }
        Format::Csv => {
            let timed = records.iter().any(|r| r.runtime_ms.is_some());
            writeln!(out, "check,status,residual,params{}", if timed { ",runtime_ms" } else { "" })?;
            for r in records {
                writeln!(out, "{}", r.to_csv())?;
            }
        }
    }
    Ok(())
}

pub fn all_passed(records: &[VerdictRecord]) -> bool {
    records.iter().all(VerdictRecord::passed)
}
