use std::fmt::Write as _;
use std::time::Duration;

use clap::ValueEnum;
use serde_json::{Map, Value};
use sptinv_core::io::to_canonical_json;
use sptinv_core::Error;

/// Outcome class of a command; fixes the exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Violation,
    BudgetExceeded,
    InputError,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Violation => 1,
            Status::BudgetExceeded => 2,
            Status::InputError => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Violation => "violation",
            Status::BudgetExceeded => "budget_exceeded",
            Status::InputError => "input_error",
        }
    }

    pub fn of_error(e: &Error) -> Status {
        match e {
            Error::Rejected(_) | Error::InternalInconsistency { .. } | Error::ConventionDiscrepancy(_) => {
                Status::Violation
            }
            Error::BudgetExceeded(_) | Error::Overflow => Status::BudgetExceeded,
            Error::InvalidArgument(_) | Error::Parse { .. } | Error::InvalidGroup(_) | Error::Io { .. } => {
                Status::InputError
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub fields: Map<String, Value>,
    /// Human-oriented lines for the text format.
    pub lines: Vec<String>,
    pub elapsed: Option<Duration>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.into(), status: Status::Ok, fields: Map::new(), lines: Vec::new(), elapsed: None }
    }

    pub fn error(command: &str, e: &Error) -> Self {
        let kind = match e {
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Parse { .. } => "parse",
            Error::InvalidGroup(_) => "invalid_group",
            Error::Overflow => "overflow",
            Error::Rejected(_) => "rejected",
            Error::InternalInconsistency { .. } => "internal_inconsistency",
            Error::ConventionDiscrepancy(_) => "convention_discrepancy",
            Error::BudgetExceeded(_) => "budget_exceeded",
            Error::Io { .. } => "io",
        };
        let mut r = Report::new(command).with_status(Status::of_error(e));
        let mut err = Map::new();
        err.insert("kind".into(), kind.into());
        err.insert("message".into(), e.to_string().into());
        if let Error::Parse { location, .. } = e {
            err.insert("location".into(), location.clone().into());
        }
        r.fields.insert("error".into(), Value::Object(err));
        r.line(format!("error: {e}"));
        r
    }

    pub fn with_status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.fields.insert(key.into(), value.into());
    }

    pub fn line(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn to_json(&self, timing: bool) -> Value {
        let mut v = self.fields.clone();
        v.insert("command".into(), self.command.clone().into());
        v.insert("status".into(), self.status.as_str().into());
        v.insert("version".into(), env!("CARGO_PKG_VERSION").into());
        if let (true, Some(t)) = (timing, self.elapsed) {
            v.insert("elapsedMs".into(), (t.as_millis() as u64).into());
        }
        Value::Object(v)
    }
}

/// Renders a report. JSON output has sorted keys and omits timing unless
/// asked for, so repeated runs are byte-identical.
pub fn emit_report(report: &Report, format: Format, timing: bool) -> String {
    match format {
        Format::Json => to_canonical_json(&report.to_json(timing)),
        Format::Text => {
            let mut out = format!("{}: {}\n", report.command, report.status.as_str());
            for l in &report.lines {
                let _ = writeln!(out, "  {l}");
            }
            if let Some(t) = report.elapsed {
                let _ = writeln!(out, "  elapsed: {:.3} s", t.as_secs_f64());
            }
            out
        }
    }
}
