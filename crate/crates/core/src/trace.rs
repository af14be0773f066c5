//! Audit trail for witness transforms.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::ring::literal::to_literal;
use crate::ring::Elem;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub name: String,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub data: Map<String, Value>,
}

/// Ordered record of the transform steps taken while answering one query.
/// A disabled trace drops everything and costs nothing.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PipelineTrace {
    #[serde(skip)]
    enabled: bool,
    steps: Vec<TraceStep>,
}

impl PipelineTrace {
    pub fn new() -> Self {
        PipelineTrace {
            enabled: true,
            steps: Vec::new(),
        }
    }

    pub fn disabled() -> Self {
        PipelineTrace::default()
    }

    pub fn is_enabled(&self) -> bool {
        self.enabled
    }

    pub fn steps(&self) -> &[TraceStep] {
        &self.steps
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Records a step; `data` is only evaluated when the trace is enabled.
    pub fn record<F>(&mut self, name: &str, data: F)
    where
        F: FnOnce() -> Vec<(&'static str, Value)>,
    {
        if !self.enabled {
            return;
        }
        let data = data().into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        self.steps.push(TraceStep {
            name: name.to_string(),
            data,
        });
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(&self.steps).expect("trace serializes")
    }
}

/// Element literal for trace payloads.
pub fn lit(e: &Elem) -> Value {
    to_literal(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disabled_trace_skips_payloads() {
        let mut t = PipelineTrace::disabled();
        t.record("shift", || panic!("evaluated"));
        assert!(t.is_empty());
        let mut t = PipelineTrace::new();
        t.record("shift", || vec![("c", lit(&Elem::Res(1)))]);
        assert_eq!(
            t.to_json(),
            serde_json::json!([{"name": "shift", "data": {"c": 1}}])
        );
    }
}
