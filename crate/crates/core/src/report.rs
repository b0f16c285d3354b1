//! Deterministic JSON reports.
//!
//! Schema (keys sorted):
//!
//! ```text
//! {
//!   "certificates": { ... command specific ... },
//!   "command": "verify",
//!   "holds": true,
//!   "input_sha256": "<hex digest of the input bytes>",
//!   "tool": { "name": "btt", "version": "<crate version>" },
//!   "verdicts": [ { "holds": true, "name": "...", "witness": null }, ... ]
//! }
//! ```
//!
//! Scalars are strings (`"-3/2"`, or the residue over `F_p`); vectors are
//! arrays of scalars, so every certificate can be re-checked externally.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::bv::VerificationReport;
use crate::field::Scalar;
use crate::linalg::{SparseMatrix, Subspace};

pub const TOOL_NAME: &str = "btt";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq)]
pub struct VerdictLine {
    pub name: String,
    pub holds: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub input_sha256: String,
    pub verdicts: Vec<VerdictLine>,
    pub certificates: Map<String, Value>,
}

pub fn digest(input: &[u8]) -> String {
    hex::encode(Sha256::digest(input))
}

impl Report {
    pub fn new(command: &str, input: &[u8]) -> Self {
        Report {
            command: command.into(),
            input_sha256: digest(input),
            verdicts: Vec::new(),
            certificates: Map::new(),
        }
    }

    pub fn verdict(&mut self, name: impl Into<String>, holds: bool, witness: Option<String>) {
        self.verdicts.push(VerdictLine {
            name: name.into(),
            holds,
            witness,
        });
    }

    /// One verdict per check of `r`, names prefixed by `prefix`.
    pub fn extend_from(&mut self, prefix: &str, r: &VerificationReport) {
        for c in &r.checks {
            let name = if prefix.is_empty() {
                c.name.clone()
            } else {
                format!("{prefix}: {}", c.name)
            };
            self.verdict(name, c.holds, c.witness.clone());
        }
    }

    pub fn certificate(&mut self, key: &str, value: Value) {
        self.certificates.insert(key.into(), value);
    }

    pub fn holds(&self) -> bool {
        self.verdicts.iter().all(|v| v.holds)
    }

    /// First failing verdict, as `name: witness`.
    pub fn first_failure(&self) -> Option<String> {
        self.verdicts.iter().find(|v| !v.holds).map(|v| match &v.witness {
            Some(w) => format!("{}: {w}", v.name),
            None => v.name.clone(),
        })
    }

    pub fn to_json(&self) -> Value {
        let verdicts: Vec<Value> = self
            .verdicts
            .iter()
            .map(|v| json!({"name": v.name, "holds": v.holds, "witness": v.witness}))
            .collect();
        json!({
            "command": self.command,
            "input_sha256": self.input_sha256,
            "holds": self.holds(),
            "verdicts": verdicts,
            "certificates": Value::Object(self.certificates.clone()),
            "tool": {"name": TOOL_NAME, "version": TOOL_VERSION},
        })
    }

    /// Pretty JSON with a trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("reports serialize");
        s.push('\n');
        s
    }
}

pub fn scalar(c: &Scalar) -> Value {
    Value::String(c.to_string())
}

pub fn vector(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(scalar).collect())
}

pub fn vectors(vs: &[Vec<Scalar>]) -> Value {
    Value::Array(vs.iter().map(|v| vector(v)).collect())
}

/// Dense rows.
pub fn matrix(m: &SparseMatrix) -> Value {
    vectors(&m.to_dense())
}

pub fn subspace(s: &Subspace) -> Value {
    json!({"ambient": s.ambient_dim(), "basis": vectors(&s.basis())})
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rendering_is_deterministic() {
        let mut r = Report::new("verify", b"field Q\n");
        r.verdict("b", true, None);
        r.verdict("a", false, Some("w".into()));
        r.certificate("z", json!(1));
        r.certificate("y", json!([1, 2]));
        assert_eq!(r.render(), r.clone().render());
        assert!(!r.holds());
        assert_eq!(r.first_failure().as_deref(), Some("a: w"));
        let v: Value = serde_json::from_str(&r.render()).unwrap();
        assert_eq!(v["input_sha256"].as_str().unwrap().len(), 64);
    }
}
