use serde_json::{json, Value};

use rdt_core::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Invalid,
    Error,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Invalid => "invalid",
            Status::Error => "error",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Invalid => 1,
            Status::Error => 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub status: Status,
    pub payload: Value,
    pub diagnostics: Vec<String>,
}

impl Report {
    pub fn ok(payload: Value) -> Self {
        Report {
            status: Status::Ok,
            payload,
            diagnostics: Vec::new(),
        }
    }

    pub fn invalid(payload: Value, diagnostic: impl Into<String>) -> Self {
        Report {
            status: Status::Invalid,
            payload,
            diagnostics: vec![diagnostic.into()],
        }
    }

    pub fn error(diagnostic: impl Into<String>) -> Self {
        Report {
            status: Status::Error,
            payload: Value::Null,
            diagnostics: vec![diagnostic.into()],
        }
    }

    pub fn with_warning(mut self, warning: impl Into<String>) -> Self {
        self.diagnostics.push(format!("warning: {}", warning.into()));
        self
    }

    pub fn to_json(&self) -> Value {
        json!({
            "status": self.status.as_str(),
            "payload": self.payload,
            "diagnostics": self.diagnostics,
        })
    }
}

/// Input problems: bad files, bad flags, malformed data.
#[derive(Debug)]
pub struct InputError(pub String);

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError(e.to_string())
    }
}

pub type CmdResult = std::result::Result<Report, InputError>;
