//! Machine-readable verification reports.
//!
//! The JSON schema is part of the CLI contract:
//! `{version, config, checks: [{id, anchor, geometry, samples,
//! max_residual, tolerance, pass}], summary: {passed, failed}, seed}`.
//! Reports are deterministic for a fixed (config, seed): checks are sorted
//! by suite, id and geometry, and wall time is kept out of the payload.

use serde::Serialize;

use crate::verify::config::RunConfig;

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub anchor: String,
    pub geometry: String,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Coordinates of the worst sample; text output only.
    #[serde(skip)]
    pub worst_point: Option<Vec<f64>>,
    /// Failure diagnostics; text output only.
    #[serde(skip)]
    pub note: Option<String>,
}

impl CheckRecord {
    pub fn new(
        suite: &str,
        check: &str,
        anchor: &str,
        geometry: &str,
        samples: usize,
        max_residual: f64,
        tolerance: f64,
    ) -> Self {
        CheckRecord {
            id: format!("{suite}/{check}"),
            anchor: anchor.to_string(),
            geometry: geometry.to_string(),
            samples,
            max_residual,
            tolerance,
            pass: max_residual <= tolerance,
            worst_point: None,
            note: None,
        }
    }

    pub fn with_worst(mut self, point: Option<Vec<f64>>) -> Self {
        self.worst_point = point;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub version: String,
    pub config: RunConfig,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
    pub seed: u64,
    #[serde(skip)]
    pub wall_seconds: f64,
}

impl Report {
    pub fn new(config: RunConfig, mut checks: Vec<CheckRecord>, wall_seconds: f64) -> Self {
        checks.sort_by(|a, b| {
            a.id.cmp(&b.id)
                .then_with(|| a.geometry.cmp(&b.geometry))
        });
        let passed = checks.iter().filter(|c| c.pass).count();
        let failed = checks.len() - passed;
        Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: config.seed,
            config,
            checks,
            summary: Summary { passed, failed },
            wall_seconds,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for check in &self.checks {
            let status = if check.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "[{status}] {id} geometry={geometry} samples={samples} max_residual={residual:.3e} tolerance={tol:.1e} anchor=\"{anchor}\"",
                id = check.id,
                geometry = check.geometry,
                samples = check.samples,
                residual = check.max_residual,
                tol = check.tolerance,
                anchor = check.anchor,
            ));
            if !check.pass {
                if let Some(point) = &check.worst_point {
                    out.push_str(&format!(" worst={point:?}"));
                }
                if let Some(note) = &check.note {
                    out.push_str(&format!(" note=\"{note}\""));
                }
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "summary: {} passed, {} failed (seed {})\n",
            self.summary.passed, self.summary.failed, self.seed
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_report() -> Report {
        let checks = vec![
            CheckRecord::new("b_suite", "z_check", "Eq. (0.0)", "g1", 5, 1e-7, 1e-5),
            CheckRecord::new("a_suite", "a_check", "Eq. (0.1)", "g2", 5, 2e-5, 1e-5)
                .with_worst(Some(vec![0.1, 0.2])),
        ];
        Report::new(RunConfig::default(), checks, 1.25)
    }

    #[test]
    fn checks_are_sorted_and_counted() {
        let report = sample_report();
        assert!(report.checks[0].id.starts_with("a_suite"));
        assert_eq!(report.summary.passed, 1);
        assert_eq!(report.summary.failed, 1);
        assert!(!report.all_passed());
    }

    #[test]
    fn json_round_trips_and_omits_wall_time() {
        let report = sample_report();
        let json = report.to_json();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["summary"]["passed"], 1);
        assert_eq!(value["summary"]["failed"], 1);
        assert_eq!(value["checks"].as_array().unwrap().len(), 2);
        assert!(value.get("wall_seconds").is_none());
        assert!(value["checks"][0].get("worst_point").is_none());
    }

    #[test]
    fn text_lists_one_line_per_check_and_worst_points() {
        let report = sample_report();
        let text = report.to_text();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].contains("FAIL") && lines[0].contains("worst=[0.1, 0.2]"));
        assert!(lines[1].contains("PASS"));
    }
}
