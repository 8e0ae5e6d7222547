//! Machine-readable report wrapper shared by the command line front end.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use crate::constraints::{DecReport, DecayReport};
use crate::datasets::DatasetDescriptor;
use crate::mass::{EinsteinCrosscheck, MassInequalityReport, MassReport};

pub const TOOL_NAME: &str = "ncb";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub elapsed_seconds: f64,
}

/// Everything except `timing` is a deterministic function of the descriptor, flags and seeds.
#[derive(Debug, Clone, Serialize)]
pub struct ReportEnvelope<T: Serialize> {
    pub tool: String,
    pub version: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub descriptor: Option<DatasetDescriptor>,
    pub flags: BTreeMap<String, Value>,
    pub payload: T,
    pub pass: bool,
    pub exit_code: i32,
    pub timing: Timing,
}

impl<T: Serialize> ReportEnvelope<T> {
    pub fn new(command: &str, descriptor: Option<DatasetDescriptor>, flags: BTreeMap<String, Value>, payload: T, pass: bool, exit_code: i32) -> Self {
        Self {
            tool: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
            command: command.into(),
            descriptor,
            flags,
            payload,
            pass,
            exit_code,
            timing: Timing { elapsed_seconds: 0.0 },
        }
    }

    pub fn with_elapsed(mut self, seconds: f64) -> Self {
        self.timing.elapsed_seconds = seconds;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// The envelope without its timing block.
    pub fn deterministic_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("reports serialize");
        if let Value::Object(m) = &mut v {
            m.remove("timing");
        }
        serde_json::to_string_pretty(&v).expect("reports serialize")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditPayload {
    pub dec: DecReport,
    pub decay: DecayReport,
    pub interior_samples: usize,
    pub boundary_samples: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct MassPayload {
    pub report: MassReport,
    pub inequality: MassInequalityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub einstein: Option<EinsteinCrosscheck>,
}
