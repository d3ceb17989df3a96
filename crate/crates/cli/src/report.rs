//! Verification report records and number formatting.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use ssr_core::CMatrix;

/// Rounds to 12 significant digits so printed values are stable.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// Short hex digest of a matrix rounded to 12 decimal places.
pub fn matrix_digest(m: &CMatrix) -> String {
    let mut hasher = Sha256::new();
    hasher.update(format!("{}x{}", m.nrows(), m.ncols()).as_bytes());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            for v in [z.re, z.im] {
                let r = format!("{v:.12}");
                // "-0.000000000000" and "0.000000000000" are the same entry.
                let r = if r.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
                    "0".to_string()
                } else {
                    r
                };
                hasher.update(r.as_bytes());
                hasher.update(b";");
            }
        }
    }
    hex::encode(&hasher.finalize()[..8])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Number(f64),
    Digest(String),
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Number(x) => f.write_str(&crate::table::format_number(*x)),
            Value::Digest(d) => write!(f, "#{d}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClaimRecord {
    pub claim_id: String,
    pub description: String,
    pub paper_anchor: String,
    pub computed: Value,
    pub expected: Value,
    pub tolerance: f64,
    pub status: Status,
    pub runtime_ms: u64,
}

impl ClaimRecord {
    /// Scalar claim: passes iff `|computed - expected| <= tolerance`.
    pub fn number(id: &str, description: &str, anchor: &str, computed: f64, expected: f64, tolerance: f64) -> Self {
        let pass = (computed - expected).abs() <= tolerance;
        Self::build(id, description, anchor, Value::Number(sig12(computed)), Value::Number(sig12(expected)), tolerance, pass)
    }

    /// Matrix claim: passes iff the digests agree and the max-abs entry
    /// difference is within `tolerance`.
    pub fn matrix(id: &str, description: &str, anchor: &str, computed: &CMatrix, expected: &CMatrix, tolerance: f64) -> Self {
        let (dc, de) = (matrix_digest(computed), matrix_digest(expected));
        let close = computed.shape() == expected.shape()
            && (computed - expected).iter().all(|z| z.norm() <= tolerance);
        let pass = close && dc == de;
        Self::build(id, description, anchor, Value::Digest(dc), Value::Digest(de), tolerance, pass)
    }

    fn build(id: &str, description: &str, anchor: &str, computed: Value, expected: Value, tolerance: f64, pass: bool) -> Self {
        ClaimRecord {
            claim_id: id.to_string(),
            description: description.to_string(),
            paper_anchor: anchor.to_string(),
            computed,
            expected,
            tolerance,
            status: if pass { Status::Pass } else { Status::Fail },
            runtime_ms: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerificationReport {
    pub claims: Vec<ClaimRecord>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.claims.iter().all(|c| c.status == Status::Pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.claims {
            let status = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            };
            out.push_str(&format!(
                "{status} {:<28} computed={} expected={} tol={:e} ({} ms)  {}\n",
                c.claim_id, c.computed, c.expected, c.tolerance, c.runtime_ms, c.description
            ));
        }
        let passed = self.claims.iter().filter(|c| c.status == Status::Pass).count();
        out.push_str(&format!("{passed}/{} claims pass\n", self.claims.len()));
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("claim_id,status,computed,expected,tolerance,runtime_ms\n");
        for c in &self.claims {
            let status = if c.status == Status::Pass { "pass" } else { "fail" };
            out.push_str(&format!(
                "{},{status},{},{},{:e},{}\n",
                c.claim_id, c.computed, c.expected, c.tolerance, c.runtime_ms
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ssr_core::C64;

    #[test]
    fn sig12_rounds() {
        assert_eq!(sig12(0.1 + 0.2), 0.3);
        assert_eq!(sig12(2.0 / 3.0), 0.666666666667);
        assert_eq!(sig12(-0.0), 0.0);
    }

    #[test]
    fn digest_ignores_noise_and_sign_of_zero() {
        let a = CMatrix::from_element(2, 2, C64::new(0.25, 0.0));
        let b = a.map(|z| z + C64::new(1e-15, -1e-17));
        assert_eq!(matrix_digest(&a), matrix_digest(&b));
        assert_ne!(matrix_digest(&a), matrix_digest(&CMatrix::zeros(2, 2)));
        assert_eq!(matrix_digest(&a).len(), 16);
    }

    #[test]
    fn claim_status() {
        assert_eq!(ClaimRecord::number("x", "", "", 0.5, 0.5 + 1e-13, 1e-12).status, Status::Pass);
        assert_eq!(ClaimRecord::number("x", "", "", 0.5, 0.6, 1e-12).status, Status::Fail);
    }

    #[test]
    fn report_round_trips_and_rejects_unknown_fields() {
        let report = VerificationReport {
            claims: vec![ClaimRecord::number("c", "d", "a", 1.0, 1.0, 0.0)],
        };
        let back: VerificationReport = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(back, report);
        let extra = report.to_json().replacen("\"claim_id\"", "\"bogus\": 1, \"claim_id\"", 1);
        assert!(serde_json::from_str::<VerificationReport>(&extra).is_err());
    }
}
