//! Named verification suites over the geometry catalog, with
//! deterministic sampling and machine-readable reports.
//!
//! Every suite aggregates per-check residuals against pinned tolerances;
//! the registry order is stable and reports sort checks by id, so a fixed
//! `(config, seed)` reproduces its report byte for byte.

pub mod config;
pub mod context;
pub mod geometries;
pub mod report;
mod suites_spin;
mod suites_warped;

use std::time::Instant;

use crate::error::{Error, Result};
use config::RunConfig;
use context::SuiteCtx;
use report::{CheckRecord, Report};

type SuiteFn = fn(&SuiteCtx) -> Result<Vec<CheckRecord>>;

pub struct SuiteDef {
    pub name: &'static str,
    pub anchor: &'static str,
    pub run: SuiteFn,
}

/// The suite registry. Names and order are part of the CLI contract.
pub const SUITES: &[SuiteDef] = &[
    SuiteDef {
        name: "clifford_relations",
        anchor: "§2.1",
        run: suites_spin::clifford_relations,
    },
    SuiteDef {
        name: "identification_eq21",
        anchor: "Prop. 2.1, Eq. (2.1)",
        run: suites_spin::identification_eq21,
    },
    SuiteDef {
        name: "gauss_formula_eq22",
        anchor: "Eq. (2.2)",
        run: suites_spin::gauss_formula_eq22,
    },
    SuiteDef {
        name: "em_tensor_prop24",
        anchor: "Prop. 2.4",
        run: suites_spin::em_tensor_prop24,
    },
    SuiteDef {
        name: "tkilling_traces_eq24_25",
        anchor: "Eqs. (2.4)-(2.5)",
        run: suites_spin::tkilling_traces_eq24_25,
    },
    SuiteDef {
        name: "curvature_ids_eq29_210",
        anchor: "Eqs. (2.9)-(2.10)",
        run: suites_spin::curvature_ids_eq29_210,
    },
    SuiteDef {
        name: "killing_vector_prop27",
        anchor: "Prop. 2.7",
        run: suites_spin::killing_vector_prop27,
    },
    SuiteDef {
        name: "oneill_prop33",
        anchor: "Prop. 3.3",
        run: suites_warped::oneill_prop33,
    },
    SuiteDef {
        name: "oneill_prop34",
        anchor: "Prop. 3.4",
        run: suites_warped::oneill_prop34,
    },
    SuiteDef {
        name: "oneill_prop35",
        anchor: "Prop. 3.5",
        run: suites_warped::oneill_prop35,
    },
    SuiteDef {
        name: "cone_extrinsic_s3",
        anchor: "end of §3",
        run: suites_warped::cone_extrinsic_s3,
    },
    SuiteDef {
        name: "bt_gt_s4",
        anchor: "§4",
        run: suites_warped::bt_gt_s4,
    },
    SuiteDef {
        name: "ricci_cor42",
        anchor: "Cor. 4.2",
        run: suites_warped::ricci_cor42,
    },
    SuiteDef {
        name: "ricci_flat_remark43",
        anchor: "Remark 4.3",
        run: suites_warped::ricci_flat_remark43,
    },
    SuiteDef {
        name: "ricci_flat_thm51",
        anchor: "Thm. 5.1",
        run: suites_warped::ricci_flat_thm51,
    },
    SuiteDef {
        name: "hijazi_integrand_eq23",
        anchor: "Thm. 2.2, Eq. (2.3)",
        run: suites_spin::hijazi_integrand_eq23,
    },
];

/// Registered suite names, in registry order.
pub fn list_suites() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.name).collect()
}

fn find_suite(name: &str) -> Result<&'static SuiteDef> {
    SUITES.iter().find(|s| s.name == name).ok_or_else(|| {
        let names: Vec<&'static str> = list_suites();
        Error::UnknownSuite {
            name: name.to_string(),
            suggestion: geometries::nearest(name, &names),
        }
    })
}

/// Evaluation errors inside a suite become failing checks instead of
/// aborting the report; usage and configuration errors still propagate.
fn run_checked(suite: &SuiteDef, ctx: &SuiteCtx) -> Vec<CheckRecord> {
    match (suite.run)(ctx) {
        Ok(checks) => checks,
        Err(e) => vec![CheckRecord::new(
            suite.name,
            "suite_evaluation",
            suite.anchor,
            "-",
            0,
            f64::INFINITY,
            0.0,
        )
        .with_note(e.to_string())],
    }
}

/// Run one named suite under a configuration.
pub fn run_suite(name: &str, config: &RunConfig) -> Result<Report> {
    config.validate()?;
    let suite = find_suite(name)?;
    let started = Instant::now();
    let ctx = SuiteCtx::new(config.clone());
    let checks = run_checked(suite, &ctx);
    Ok(Report::new(
        config.clone(),
        checks,
        started.elapsed().as_secs_f64(),
    ))
}

/// Run the configured suites (all registered ones when unset).
pub fn run_all(config: &RunConfig) -> Result<Report> {
    config.validate()?;
    let selected: Vec<&SuiteDef> = match &config.suites {
        None => SUITES.iter().collect(),
        Some(names) => names
            .iter()
            .map(|n| find_suite(n))
            .collect::<Result<Vec<_>>>()?,
    };
    let started = Instant::now();
    let ctx = SuiteCtx::new(config.clone());
    let mut checks = Vec::new();
    for suite in selected {
        checks.extend(run_checked(suite, &ctx));
    }
    Ok(Report::new(
        config.clone(),
        checks,
        started.elapsed().as_secs_f64(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_has_the_sixteen_stable_names() {
        let names = list_suites();
        assert_eq!(names.len(), 16);
        assert_eq!(names[0], "clifford_relations");
        assert!(names.contains(&"ricci_flat_thm51"));
        assert!(names.contains(&"hijazi_integrand_eq23"));
        // stable across calls
        assert_eq!(names, list_suites());
    }

    #[test]
    fn unknown_suite_suggests_nearest_name() {
        match run_suite("oneill_prop36", &RunConfig::default()) {
            Err(Error::UnknownSuite { suggestion, .. }) => {
                assert!(suggestion.starts_with("oneill_prop"));
            }
            _ => panic!("expected unknown-suite error"),
        }
    }

    #[test]
    fn clifford_suite_passes_and_reports() {
        let report = run_suite("clifford_relations", &RunConfig::default()).unwrap();
        assert!(report.all_passed(), "failures: {}", report.to_text());
        assert!(report.checks.iter().all(|c| !c.anchor.is_empty()));
    }

    #[test]
    fn identification_suite_passes() {
        let report = run_suite("identification_eq21", &RunConfig::default()).unwrap();
        assert!(report.all_passed(), "failures: {}", report.to_text());
    }

    #[test]
    fn suite_reports_are_deterministic() {
        let config = RunConfig {
            seed: 7,
            sample_count: Some(5),
            ..RunConfig::default()
        };
        let a = run_suite("gauss_formula_eq22", &config).unwrap().to_json();
        let b = run_suite("gauss_formula_eq22", &config).unwrap().to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn geometry_filter_restricts_checks() {
        let config = RunConfig {
            sample_count: Some(3),
            geometries: Some(vec!["plane2".into()]),
            ..RunConfig::default()
        };
        let report = run_suite("gauss_formula_eq22", &config).unwrap();
        assert_eq!(report.checks.len(), 1);
        assert_eq!(report.checks[0].geometry, "plane2");
    }

    #[test]
    fn rejection_geometry_fails_ricci_cor42() {
        let config = RunConfig {
            sample_count: Some(3),
            geometries: Some(vec!["sphere_r2_h_eq_g".into()]),
            ..RunConfig::default()
        };
        let report = run_suite("ricci_cor42", &config).unwrap();
        assert!(!report.all_passed());
        let check = &report.checks[0];
        assert!(check.id.ends_with("hypotheses_rejected"));
        assert!(check.note.as_ref().unwrap().contains("Prop. 4.1"));
        assert!((check.max_residual - 0.75).abs() < 1e-3);
    }
}
