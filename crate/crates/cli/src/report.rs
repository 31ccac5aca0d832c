//! JSON report with stable key order (serde struct field order) and
//! order-stable check records.

use serde::Serialize;

#[derive(Serialize)]
pub struct Report {
    pub format: &'static str,
    pub scenario: String,
    pub bound: u32,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

#[derive(Serialize, Clone)]
pub struct CheckRecord {
    pub index: usize,
    pub id: String,
    pub inputs: String,
    pub verdict: String,
    pub detail: String,
    pub witnesses: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

#[derive(Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
    pub errors: usize,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// 0 if everything passed, 1 on any failure or check error, 2 if the
    /// only blemishes are inconclusive verdicts.
    pub fn exit_code(&self) -> i32 {
        if self.summary.failed > 0 || self.summary.errors > 0 {
            1
        } else if self.summary.inconclusive > 0 {
            2
        } else {
            0
        }
    }
}

pub fn summarize(checks: &[CheckRecord]) -> Summary {
    let mut s = Summary { passed: 0, failed: 0, inconclusive: 0, errors: 0 };
    for c in checks {
        match c.verdict.as_str() {
            "verified" => s.passed += 1,
            "failed" => s.failed += 1,
            "inconclusive" => s.inconclusive += 1,
            _ => s.errors += 1,
        }
    }
    s
}
