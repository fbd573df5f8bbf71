//! Report envelopes and output writing. The payload is the deterministic
//! part: two runs of the same job with the same seed serialize to the same
//! bytes. Timing lives outside the payload for exactly that reason.

use crate::job::JobSpec;
use serde::Serialize;
use std::io::Write;
use std::path::Path;

#[derive(Debug, Serialize)]
pub struct ReportEnvelope {
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub command: &'static str,
    /// The job exactly as it ran, defaults resolved.
    pub job: JobSpec,
    /// Per-command report object; byte-deterministic for a fixed job.
    pub payload: serde_json::Value,
    /// Wall-clock milliseconds; informational only, not deterministic.
    pub elapsed_ms: f64,
}

impl ReportEnvelope {
    pub fn new(job: JobSpec, payload: serde_json::Value, elapsed_ms: f64) -> Self {
        ReportEnvelope {
            tool: "subbergman",
            tool_version: env!("CARGO_PKG_VERSION"),
            command: job.command_name(),
            job,
            payload,
            elapsed_ms,
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("envelope serializes");
        text.push('\n');
        text
    }
}

/// Flat table of sampled values for plotting, written as CSV on request.
#[derive(Debug, Clone)]
pub struct ValueTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl ValueTable {
    pub fn new(header: &[&str]) -> Self {
        ValueTable {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn write_text(path: Option<&Path>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())
        }
    }
}

/// Formats a float for CSV cells; full round-trip precision so plots and
/// re-parses see the same number the JSON payload carries.
pub fn cell(x: f64) -> String {
    format!("{x}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn envelope_embeds_payload_and_job() {
        let job = JobSpec::KernelEval {
            s: Some(2.0),
            alpha: None,
            symbol: None,
            z: Complex64::new(0.5, 0.0),
            w: Complex64::new(0.5, 0.0),
            series_terms: 120,
        };
        let env = ReportEnvelope::new(job, serde_json::json!({"value": 1.0}), 3.25);
        let text = env.to_json();
        assert!(text.contains(r#""command": "kernel-eval""#));
        assert!(text.contains(r#""tool": "subbergman""#));
        assert!(text.contains(r#""value": 1.0"#));
    }

    #[test]
    fn csv_rows_line_up_with_the_header() {
        let mut t = ValueTable::new(&["degree", "residual"]);
        t.push_row(vec!["0".into(), cell(1.5)]);
        t.push_row(vec!["5".into(), cell(0.25)]);
        assert_eq!(t.to_csv(), "degree,residual\n0,1.5\n5,0.25\n");
    }
}
