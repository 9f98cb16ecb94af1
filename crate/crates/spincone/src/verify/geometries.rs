//! Named geometry catalog for the verification suites.
//!
//! Spin geometries pair a chart with its closed-form second fundamental
//! form and a restricted (or constant) spinor field; warped cases are
//! generalized cones and products built over catalog bases. Names are part
//! of the CLI contract.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::catalog::{builtin_chart, BuiltinChart};
use crate::chart::SymTensorField;
use crate::clifford::{clifford_algebra, CVector};
use crate::error::{Error, Result};
use crate::spin::{restrict_parallel_spinor, SpinorField};
use crate::tensorcalc::DiffEngine;
use crate::warped::cone::projector_cone;
use crate::warped::{make_warped, WarpFunction, WarpedGeometry};

/// A chart with metric, closed-form `h`, and a distinguished spinor field.
pub struct SpinGeometry {
    pub name: &'static str,
    pub builtin: BuiltinChart,
    pub h: SymTensorField,
    pub psi: SpinorField,
}

pub const SPIN_GEOMETRIES: [&str; 7] = [
    "plane2",
    "torus2",
    "unit_s2_polar",
    "unit_s2_stereo",
    "unit_s3",
    "unit_s4",
    "cylinder_s2xr",
];

/// The uniform ambient constant spinor, normalized.
fn uniform_phi(dim: usize) -> CVector {
    CVector::from_element(dim, Complex64::new(1.0, 0.0)) / Complex64::new((dim as f64).sqrt(), 0.0)
}

fn restricted(name: &'static str, builtin: BuiltinChart, engine: &DiffEngine) -> Result<SpinGeometry> {
    let imm = builtin
        .immersion
        .clone()
        .expect("catalog geometry with immersion");
    let ambient_dim = clifford_algebra(imm.dim() + 1)?.spinor_dim();
    let psi = restrict_parallel_spinor(&imm, &builtin.metric, &uniform_phi(ambient_dim), engine)?;
    let h = crate::catalog::second_fundamental_form(&imm, engine);
    Ok(SpinGeometry {
        name,
        builtin,
        h,
        psi,
    })
}

/// Build a named spin geometry. Curved entries carry the restricted
/// spinor of the uniform ambient constant spinor and their closed-form
/// second fundamental form; flat entries carry a constant spinor and
/// `h = 0`.
pub fn spin_geometry(name: &str, engine: &DiffEngine) -> Result<SpinGeometry> {
    match name {
        "plane2" => {
            let b = builtin_chart("flat", &[2.0])?;
            restricted("plane2", b, engine)
        }
        "torus2" => {
            let b = builtin_chart("torus", &[2.0])?;
            let alg = std::sync::Arc::new(clifford_algebra(2)?);
            let psi = SpinorField::constant(b.chart.clone(), alg, uniform_phi(2));
            Ok(SpinGeometry {
                name: "torus2",
                h: SymTensorField::zero(b.chart.clone()),
                builtin: b,
                psi,
            })
        }
        "unit_s2_polar" => {
            let b = builtin_chart("sphere_polar", &[1.0])?;
            let mut geo = restricted("unit_s2_polar", b, engine)?;
            geo.h = closed_h_sphere(&geo.builtin, 1.0);
            Ok(geo)
        }
        "unit_s2_stereo" => {
            let b = builtin_chart("sphere_stereo", &[1.0])?;
            let mut geo = restricted("unit_s2_stereo", b, engine)?;
            geo.h = closed_h_sphere(&geo.builtin, 1.0);
            Ok(geo)
        }
        "unit_s3" => {
            let b = builtin_chart("sphere_polar", &[1.0, 3.0])?;
            let mut geo = restricted("unit_s3", b, engine)?;
            geo.h = closed_h_sphere(&geo.builtin, 1.0);
            Ok(geo)
        }
        "unit_s4" => {
            let b = builtin_chart("sphere_polar", &[1.0, 4.0])?;
            let mut geo = restricted("unit_s4", b, engine)?;
            geo.h = closed_h_sphere(&geo.builtin, 1.0);
            Ok(geo)
        }
        "cylinder_s2xr" => {
            let b = builtin_chart("cylinder_product", &[2.0, 1.0])?;
            let mut geo = restricted("cylinder_s2xr", b, engine)?;
            geo.h = block_h(&geo.builtin, &[2]);
            Ok(geo)
        }
        "product_r1xs2" => {
            let b = builtin_chart("product", &[1.0, 2.0])?;
            let mut geo = restricted("product_r1xs2", b, engine)?;
            geo.h = block_h(&geo.builtin, &[0]);
            Ok(geo)
        }
        other => Err(Error::UnknownGeometry {
            name: other.to_string(),
            suggestion: nearest(other, &SPIN_GEOMETRIES),
        }),
    }
}

/// Closed-form sphere second fundamental form `h = g / r`.
fn closed_h_sphere(builtin: &BuiltinChart, radius: f64) -> SymTensorField {
    let g = builtin.metric.clone();
    SymTensorField::new(builtin.chart.clone(), move |x| g.eval_raw(x) / radius)
}

/// `h` equal to the metric with the given coordinate rows/columns zeroed
/// (the metric block of the curved factor of a product).
fn block_h(builtin: &BuiltinChart, zeroed: &[usize]) -> SymTensorField {
    let g = builtin.metric.clone();
    let zeroed = zeroed.to_vec();
    SymTensorField::new(builtin.chart.clone(), move |x| {
        let mut m = g.eval_raw(x);
        for &a in &zeroed {
            for b in 0..m.nrows() {
                m[(a, b)] = 0.0;
                m[(b, a)] = 0.0;
            }
        }
        m
    })
}

/// A named generalized warped product with its oracle tolerance.
pub struct WarpedCase {
    pub name: &'static str,
    pub geometry: WarpedGeometry,
    /// Whether `h` is parallel (tightens the oracle tolerance).
    pub parallel: bool,
    pub tolerance: f64,
}

pub const WARPED_CASES: [&str; 8] = [
    "product_cone_s2_h0",
    "sphere_cone_s2",
    "sphere_cone_s3",
    "torus_cone_hsin",
    "flat2_cone_hx2",
    "cylinder_proj_cone",
    "proj_cone_r1xs2",
    "sphere_r2_h_eq_g",
];

pub fn warped_case(name: &str, engine: &DiffEngine) -> Result<WarpedCase> {
    match name {
        "product_cone_s2_h0" => {
            let b = builtin_chart("sphere_polar", &[1.0])?;
            let h = SymTensorField::zero(b.chart.clone());
            Ok(WarpedCase {
                name: "product_cone_s2_h0",
                geometry: make_warped(&b.metric, &h, WarpFunction::cone(), 0.2)?,
                parallel: true,
                tolerance: 1e-5,
            })
        }
        "sphere_cone_s2" => {
            let b = builtin_chart("sphere_polar", &[1.0])?;
            let h = metric_as_h(&b);
            Ok(WarpedCase {
                name: "sphere_cone_s2",
                geometry: make_warped(&b.metric, &h, WarpFunction::cone(), 0.2)?,
                parallel: true,
                tolerance: 1e-5,
            })
        }
        "sphere_cone_s3" => {
            let b = builtin_chart("sphere_polar", &[1.0, 3.0])?;
            let h = metric_as_h(&b);
            Ok(WarpedCase {
                name: "sphere_cone_s3",
                geometry: make_warped(&b.metric, &h, WarpFunction::cone(), 0.2)?,
                parallel: true,
                tolerance: 1e-5,
            })
        }
        "torus_cone_hsin" => {
            let b = builtin_chart("torus", &[2.0])?;
            let h = SymTensorField::new(b.chart.clone(), {
                let g = b.metric.clone();
                move |x| g.eval_raw(x) * (1.0 + 0.5 * x[0].sin())
            });
            Ok(WarpedCase {
                name: "torus_cone_hsin",
                geometry: make_warped(&b.metric, &h, WarpFunction::cone(), 0.2)?,
                parallel: false,
                tolerance: 1e-4,
            })
        }
        "flat2_cone_hx2" => {
            let b = builtin_chart("flat", &[2.0])?;
            let h = SymTensorField::new(b.chart.clone(), |x| {
                let mut m = DMatrix::zeros(2, 2);
                m[(0, 0)] = x[1];
                m
            });
            Ok(WarpedCase {
                name: "flat2_cone_hx2",
                geometry: make_warped(&b.metric, &h, WarpFunction::cone(), 0.2)?,
                parallel: false,
                tolerance: 1e-4,
            })
        }
        "cylinder_proj_cone" => {
            // sphere factor block of S²(1) x R as h (coordinates: sphere first)
            let b = builtin_chart("cylinder_product", &[2.0, 1.0])?;
            let h = SymTensorField::new(b.chart.clone(), {
                let g = b.metric.clone();
                move |x| {
                    let mut m = g.eval_raw(x);
                    m[(2, 2)] = 0.0;
                    m
                }
            });
            Ok(WarpedCase {
                name: "cylinder_proj_cone",
                geometry: make_warped(&b.metric, &h, WarpFunction::cone(), 0.2)?,
                parallel: true,
                tolerance: 1e-5,
            })
        }
        "proj_cone_r1xs2" => {
            let b = builtin_chart("product", &[1.0, 2.0])?;
            Ok(WarpedCase {
                name: "proj_cone_r1xs2",
                geometry: projector_cone(&b.metric, 1, 0.2, engine)?,
                parallel: true,
                tolerance: 1e-5,
            })
        }
        "sphere_r2_h_eq_g" => {
            let b = builtin_chart("sphere_polar", &[2.0])?;
            let h = metric_as_h(&b);
            Ok(WarpedCase {
                name: "sphere_r2_h_eq_g",
                geometry: make_warped(&b.metric, &h, WarpFunction::cone(), 0.2)?,
                parallel: true,
                tolerance: 1e-5,
            })
        }
        other => Err(Error::UnknownGeometry {
            name: other.to_string(),
            suggestion: nearest(other, &WARPED_CASES),
        }),
    }
}

fn metric_as_h(builtin: &BuiltinChart) -> SymTensorField {
    let g = builtin.metric.clone();
    SymTensorField::new(builtin.chart.clone(), move |x| g.eval_raw(x))
}

/// Nearest name by edit distance, for error suggestions.
pub fn nearest(query: &str, names: &[&'static str]) -> String {
    names
        .iter()
        .min_by_key(|candidate| edit_distance(query, candidate))
        .unwrap_or(&"")
        .to_string()
}

pub fn edit_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut row: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.iter().enumerate() {
        let mut prev = row[0];
        row[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let cost = if ca == cb { prev } else { prev + 1 };
            prev = row[j + 1];
            row[j + 1] = cost.min(row[j] + 1).min(prev + 1);
        }
    }
    row[b.len()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_catalog_name_builds() {
        let engine = DiffEngine::default();
        for name in SPIN_GEOMETRIES {
            assert!(spin_geometry(name, &engine).is_ok(), "{name} fails to build");
        }
        assert!(spin_geometry("product_r1xs2", &engine).is_ok());
        for name in WARPED_CASES {
            assert!(warped_case(name, &engine).is_ok(), "{name} fails to build");
        }
    }

    #[test]
    fn unknown_names_suggest_nearest() {
        let engine = DiffEngine::default();
        match spin_geometry("unit_s2_polaris", &engine) {
            Err(Error::UnknownGeometry { suggestion, .. }) => {
                assert_eq!(suggestion, "unit_s2_polar")
            }
            _ => panic!("expected suggestion"),
        }
    }
}
