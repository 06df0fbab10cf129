//! Verification reports.  The JSON rendering is canonical and carries no
//! timing, so a fixed seed produces byte-identical bytes run after run;
//! wall-clock times appear only in the human-readable text rendering.

use std::fmt::Write as _;

use crate::io::fmt_f64;

/// Outcome of one verified statement across its random instances.
#[derive(Debug, Clone)]
pub struct CheckRecord {
    /// Stable kebab-case identifier, used by the --only filter.
    pub id: &'static str,
    /// One-line description of the verified property.
    pub statement: &'static str,
    pub instances: usize,
    pub failures: usize,
    /// Largest residual (or bound slack) observed across instances.
    pub worst_residual: f64,
    /// Wall time; excluded from JSON to keep reports deterministic.
    pub runtime_ms: u128,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub seed: u64,
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn failures(&self) -> usize {
        self.records.iter().map(|r| r.failures).sum()
    }

    pub fn instances(&self) -> usize {
        self.records.iter().map(|r| r.instances).sum()
    }

    /// Canonical JSON: sorted keys, 17-significant-digit floats, no timing.
    pub fn to_json(&self) -> String {
        let mut out = String::from("{\"records\":[");
        for (i, rec) in self.records.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(
                out,
                "{{\"failures\":{},\"id\":\"{}\",\"instances\":{},\"statement\":\"{}\",\"worst_residual\":{}}}",
                rec.failures,
                rec.id,
                rec.instances,
                rec.statement,
                fmt_f64(rec.worst_residual)
            );
        }
        let _ = write!(out, "],\"seed\":{}}}", self.seed);
        out.push('\n');
        out
    }

    /// Human-readable rendering with timings and a verdict line.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let id_width = self
            .records
            .iter()
            .map(|r| r.id.len())
            .max()
            .unwrap_or(8)
            .max(8);
        for rec in &self.records {
            let verdict = if rec.failures == 0 { "ok " } else { "FAIL" };
            let _ = writeln!(
                out,
                "{verdict} {:id_width$}  {:>4} instances  {:>2} failures  worst {:>12.4e}  {:>6} ms  {}",
                rec.id, rec.instances, rec.failures, rec.worst_residual, rec.runtime_ms, rec.statement
            );
        }
        let _ = writeln!(
            out,
            "{} checks, {} instances, {} failures (seed {})",
            self.records.len(),
            self.instances(),
            self.failures(),
            self.seed
        );
        out
    }
}
