//! Serializable result records.

use std::time::Duration;

use serde::Serialize;

use crate::format::Instance;
use crate::models::Query;
use crate::poly::UniPoly;
use crate::rational::{to_fraction_string, Rational};

pub const SCHEMA_VERSION: u32 = 1;

/// One computed probability or polynomial for one instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRecord {
    pub schema: u32,
    pub instance: String,
    pub model: String,
    pub query: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    /// Coefficients in increasing degree.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub polynomial: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl ReportRecord {
    pub fn new(instance: &Instance, model: impl Into<String>, query: impl Into<String>) -> Self {
        ReportRecord {
            schema: SCHEMA_VERSION,
            instance: instance.hash(),
            model: model.into(),
            query: query.into(),
            value: None,
            polynomial: None,
            timing_ms: None,
        }
    }

    pub fn with_value(mut self, value: &Rational) -> Self {
        self.value = Some(to_fraction_string(value));
        self
    }

    pub fn with_polynomial(mut self, poly: &UniPoly) -> Self {
        self.polynomial = Some(poly.to_strings());
        self
    }

    pub fn with_timing(mut self, elapsed: Duration) -> Self {
        self.timing_ms = Some(elapsed.as_secs_f64() * 1e3);
        self
    }
}

/// Versioned wrapper for any other report body.
#[derive(Clone, Debug, Serialize)]
pub struct Envelope<T: Serialize> {
    pub schema: u32,
    pub command: String,
    #[serde(flatten)]
    pub body: T,
}

impl<T: Serialize> Envelope<T> {
    pub fn new(command: impl Into<String>, body: T) -> Self {
        Envelope {
            schema: SCHEMA_VERSION,
            command: command.into(),
            body,
        }
    }
}

/// `u0->v1`-style label using the instance's vertex names; numeric names get a dot (`0.0->2.1`).
pub fn query_label(instance: &Instance, q: &Query) -> String {
    let side = |points: &[crate::reach::Endpoint]| {
        points
            .iter()
            .map(|p| {
                let name = instance.label(p.vertex);
                if name.ends_with(|c: char| c.is_ascii_digit()) {
                    format!("{name}.{}", p.layer)
                } else {
                    format!("{name}{}", p.layer)
                }
            })
            .collect::<Vec<_>>()
            .join(",")
    };
    format!("{}->{}", side(&q.sources), side(&q.targets))
}
