//! Run reports: the structured result of every `verify` invocation.
//!
//! Reports are deterministic — failures sorted by check identifier, maps
//! in key order — except for `wall_time_ms`, which is the one field
//! consumers must mask when comparing runs byte-for-byte.

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub range: Option<(u32, u32)>,
    pub checks_run: u64,
    pub failures: Vec<Failure>,
    pub wall_time_ms: u128,
    /// Verb-specific fields (e.g. `quadruples_checked` for WDVV scans,
    /// the coefficient list for generating-identity checks).
    #[serde(flatten)]
    pub extra: serde_json::Map<String, serde_json::Value>,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        RunReport {
            command: command.into(),
            family: None,
            n: None,
            range: None,
            checks_run: 0,
            failures: Vec::new(),
            wall_time_ms: 0,
            extra: serde_json::Map::new(),
        }
    }

    pub fn fail(&mut self, check: impl Into<String>, detail: Option<String>) {
        self.failures.push(Failure {
            check: check.into(),
            detail,
        });
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Sort failures by identifier; call once after all checks ran.
    pub fn finalize(&mut self) {
        self.failures.sort_by(|a, b| a.check.cmp(&b.check));
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        if let Some(f) = &self.family {
            out.push_str(&format!("family: {f}\n"));
        }
        if let Some(n) = self.n {
            out.push_str(&format!("N: {n}\n"));
        }
        if let Some((lo, hi)) = self.range {
            out.push_str(&format!("range: {lo}..={hi}\n"));
        }
        out.push_str(&format!("checks_run: {}\n", self.checks_run));
        for f in &self.failures {
            match &f.detail {
                Some(d) => out.push_str(&format!("FAIL {}: {d}\n", f.check)),
                None => out.push_str(&format!("FAIL {}\n", f.check)),
            }
        }
        out.push_str(&format!(
            "result: {}\n",
            if self.passed() { "PASS" } else { "FAIL" }
        ));
        out
    }
}
