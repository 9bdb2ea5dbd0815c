//! Check reports shared by every verification routine.
//!
//! A report carries a signed margin: positive means the checked inequality
//! holds with room to spare, negative means it is violated. The verdict is
//! always `pass == (worst_margin >= -tolerance)`.

use serde::{Serialize, Serializer};
use serde_json::Value;
use std::time::Instant;

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub pass: bool,
    #[serde(serialize_with = "ser_extended")]
    pub worst_margin: f64,
    pub tolerance: f64,
    pub witness: Value,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<CheckReport>,
    /// Wall-clock time. Not serialized so reports stay byte-identical across runs.
    #[serde(skip)]
    pub runtime_ms: f64,
}

/// JSON has no infinities; they are written as the strings `"+inf"` / `"-inf"`.
fn ser_extended<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v + 0.0)
    } else if v.is_nan() {
        s.serialize_str("nan")
    } else if *v > 0.0 {
        s.serialize_str("+inf")
    } else {
        s.serialize_str("-inf")
    }
}

impl CheckReport {
    pub fn from_margin(check: impl Into<String>, worst_margin: f64, tolerance: f64, witness: Value) -> Self {
        CheckReport {
            check: check.into(),
            pass: worst_margin >= -tolerance,
            worst_margin,
            tolerance,
            witness,
            notes: Vec::new(),
            parts: Vec::new(),
            runtime_ms: 0.0,
        }
    }

    /// Report for a check that had nothing to test.
    pub fn vacuous(check: impl Into<String>, tolerance: f64) -> Self {
        let mut r = Self::from_margin(check, f64::INFINITY, tolerance, Value::Null);
        r.notes.push("no configurations to check".into());
        r
    }

    /// Combines sub-reports; the bundle passes iff every part passes.
    pub fn bundle(check: impl Into<String>, parts: Vec<CheckReport>) -> Self {
        // Each part's margin is shifted by its own tolerance so that the bundle
        // invariant holds with tolerance zero.
        let mut worst = f64::INFINITY;
        let mut witness = Value::Null;
        for p in &parts {
            let shifted = p.worst_margin + p.tolerance;
            if shifted < worst || witness.is_null() && shifted <= worst {
                worst = shifted;
                witness = Value::String(p.check.clone());
            }
        }
        let runtime_ms = parts.iter().map(|p| p.runtime_ms).sum();
        let mut r = Self::from_margin(check, worst, 0.0, witness);
        debug_assert_eq!(r.pass, parts.iter().all(|p| p.pass));
        r.parts = parts;
        r.runtime_ms = runtime_ms;
        r
    }

    /// Turns a check that is expected to fail into one that passes exactly when
    /// the inner check fails.
    pub fn expect_failure(inner: CheckReport) -> Self {
        let flipped = -(inner.worst_margin + inner.tolerance);
        let margin = if inner.pass {
            flipped.min(-f64::MIN_POSITIVE)
        } else {
            flipped
        };
        let mut r = Self::from_margin(format!("expect_failure({})", inner.check), margin, 0.0, inner.witness.clone());
        r.runtime_ms = inner.runtime_ms;
        r.parts = vec![inner];
        r
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }

    /// One-line human summary.
    pub fn summary_line(&self) -> String {
        format!(
            "[{}] {} (worst margin {:.3e}, tol {:.1e})",
            if self.pass { "PASS" } else { "FAIL" },
            self.check,
            self.worst_margin + 0.0,
            self.tolerance
        )
    }
}

/// Tracks the minimum margin and the witness where it occurred.
#[derive(Debug, Clone)]
pub(crate) struct Worst {
    pub margin: f64,
    pub witness: Value,
}

impl Worst {
    pub fn new() -> Self {
        Worst { margin: f64::INFINITY, witness: Value::Null }
    }

    /// Keeps the first witness on ties.
    pub fn offer(&mut self, margin: f64, witness: impl FnOnce() -> Value) {
        if margin < self.margin || (self.witness.is_null() && margin <= self.margin) {
            self.margin = margin;
            self.witness = witness();
        }
    }

    pub fn into_report(self, check: &str, tolerance: f64) -> CheckReport {
        if self.witness.is_null() && self.margin == f64::INFINITY {
            return CheckReport::vacuous(check, tolerance);
        }
        CheckReport::from_margin(check, self.margin, tolerance, self.witness)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn pass_iff_margin_within_tolerance() {
        assert!(CheckReport::from_margin("a", -1e-3, 1e-3, Value::Null).pass);
        assert!(!CheckReport::from_margin("a", -1.1e-3, 1e-3, Value::Null).pass);
        assert!(!CheckReport::from_margin("a", f64::NEG_INFINITY, 1.0, Value::Null).pass);
    }

    #[test]
    fn infinite_margin_serializes_as_string() {
        let r = CheckReport::from_margin("x", f64::NEG_INFINITY, 0.0, json!({"t": 0.5}));
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"worst_margin\":\"-inf\""), "{s}");
        assert!(!s.contains("runtime"));
    }

    #[test]
    fn expect_failure_flips_verdict() {
        let failing = CheckReport::from_margin("x", -2.0, 0.1, Value::Null);
        let passing = CheckReport::from_margin("x", -0.1, 0.1, Value::Null);
        assert!(CheckReport::expect_failure(failing).pass);
        assert!(!CheckReport::expect_failure(passing).pass);
    }

    #[test]
    fn bundle_passes_iff_all_parts_pass() {
        let a = CheckReport::from_margin("a", -0.05, 0.1, Value::Null);
        let b = CheckReport::from_margin("b", 3.0, 0.0, Value::Null);
        let c = CheckReport::from_margin("c", -0.2, 0.1, Value::Null);
        assert!(CheckReport::bundle("ab", vec![a.clone(), b.clone()]).pass);
        let abc = CheckReport::bundle("abc", vec![a, b, c]);
        assert!(!abc.pass);
        assert_eq!(abc.witness, json!("c"));
    }
}
