//! Built-in example geometries and the fundamental forms of immersions.
//!
//! Every curved chart in the catalog arises as a hypersurface of flat
//! `R^{n+1}` with an explicit outward unit normal; this is what makes the
//! spinor restriction machinery exact. Coordinate orders are fixed so that
//! the adapted frame `(dF e_1, ..., dF e_n, ν)` is positively oriented,
//! which the restriction of ambient spinors requires.
//!
//! Sign convention: the second fundamental form is
//! `h_ij = <∂_i F, ∂_j ν> = -<∂_i ∂_j F, ν>`, so the unit sphere with the
//! outward normal has `h = g` (shape operator `+Id`).

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::chart::{BoxDomain, Chart, Immersion, MetricField, SymTensorField};
use crate::error::{Error, Result};
use crate::tensorcalc::DiffEngine;

/// Width of the excluded band around polar coordinate singularities.
pub const POLAR_BAND: f64 = 0.1;

/// A catalog entry: chart, metric, and (when the geometry is realized as a
/// hypersurface of flat space) the canonical immersion.
#[derive(Clone)]
pub struct BuiltinChart {
    pub chart: Arc<Chart>,
    pub metric: MetricField,
    pub immersion: Option<Immersion>,
}

pub const BUILTIN_NAMES: [&str; 6] = [
    "flat",
    "torus",
    "sphere_polar",
    "sphere_stereo",
    "cylinder_product",
    "product",
];

/// Build a named chart from the catalog.
///
/// * `flat [n]` — Euclidean box, identity metric, hyperplane immersion.
/// * `torus [n]` — flat box of circumference `2π` per axis, no immersion.
/// * `sphere_polar [r]` or `[r, m]` — round m-sphere of radius `r` in
///   hyperspherical angles, poles excluded.
/// * `sphere_stereo [r]` or `[r, m]` — the same sphere in stereographic
///   coordinates (projection from the pole opposite the chart center).
/// * `cylinder_product [m, k]` — `S^m(1) x R^k` immersed in `R^{m+k+1}`,
///   sphere coordinates first.
/// * `product [k, m]` or `[k, m, r]` — `R^k x S^m(r)` immersed in
///   `R^{k+m+1}`, flat coordinates first (the parallel-splitting base with
///   the flat block leading).
pub fn builtin_chart(name: &str, params: &[f64]) -> Result<BuiltinChart> {
    match name {
        "flat" => flat(params),
        "torus" => torus(params),
        "sphere_polar" => sphere_polar(params),
        "sphere_stereo" => sphere_stereo(params),
        "cylinder_product" => cylinder_product(params),
        "product" => product(params),
        _ => Err(Error::UnknownChart {
            name: name.to_string(),
            available: BUILTIN_NAMES.join(", "),
        }),
    }
}

fn param_dim(name: &str, value: f64) -> Result<usize> {
    if value.fract() != 0.0 || value < 1.0 || value > 8.0 {
        return Err(Error::InvalidParams {
            name: name.to_string(),
            reason: format!("dimension parameter {value} must be an integer in 1..=8"),
        });
    }
    Ok(value as usize)
}

fn param_radius(name: &str, value: f64) -> Result<f64> {
    if !(value > 0.0) || !value.is_finite() {
        return Err(Error::InvalidParams {
            name: name.to_string(),
            reason: format!("radius {value} must be positive"),
        });
    }
    Ok(value)
}

fn flat(params: &[f64]) -> Result<BuiltinChart> {
    if params.len() != 1 {
        return Err(Error::InvalidParams {
            name: "flat".into(),
            reason: "expected [dim]".into(),
        });
    }
    let n = param_dim("flat", params[0])?;
    let chart = Arc::new(Chart::new(
        BoxDomain::new(vec![(-2.0, 2.0); n])?,
        format!("flat R^{n}"),
    )?);
    let metric = MetricField::new(chart.clone(), move |_| DMatrix::identity(n, n));
    let ambient = n + 1;
    let immersion = Immersion::new(
        chart.clone(),
        move |x| {
            let mut f = DVector::zeros(ambient);
            for (i, &xi) in x.iter().enumerate() {
                f[i] = xi;
            }
            f
        },
        move |_| {
            let mut nu = DVector::zeros(ambient);
            nu[ambient - 1] = 1.0;
            nu
        },
    );
    Ok(BuiltinChart {
        chart,
        metric,
        immersion: Some(immersion),
    })
}

fn torus(params: &[f64]) -> Result<BuiltinChart> {
    if params.len() != 1 {
        return Err(Error::InvalidParams {
            name: "torus".into(),
            reason: "expected [dim]".into(),
        });
    }
    let n = param_dim("torus", params[0])?;
    let chart = Arc::new(Chart::new(
        BoxDomain::new(vec![(0.0, 2.0 * PI); n])?,
        format!("flat torus chart T^{n}"),
    )?);
    let metric = MetricField::new(chart.clone(), move |_| DMatrix::identity(n, n));
    Ok(BuiltinChart {
        chart,
        metric,
        immersion: None,
    })
}

/// Coordinate-to-angle permutation for the m-sphere chart. For odd `m >= 3`
/// the last two angles are swapped so the adapted frame with the outward
/// normal is positively oriented.
fn sphere_coordinate_order(m: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..m).collect();
    if m % 2 == 1 && m >= 3 {
        perm.swap(m - 2, m - 1);
    }
    perm
}

/// Hyperspherical position on `S^m(r)` from angles
/// `a_0..a_{m-2}` polar, `a_{m-1}` azimuthal.
fn sphere_position(r: f64, angles: &[f64]) -> DVector<f64> {
    let m = angles.len();
    let mut f = DVector::zeros(m + 1);
    let mut sin_prod = 1.0;
    for (i, &a) in angles.iter().enumerate() {
        f[i] = r * sin_prod * a.cos();
        sin_prod *= a.sin();
    }
    f[m] = r * sin_prod;
    f
}

fn sphere_angles(m: usize, perm: &[usize], x: &[f64]) -> Vec<f64> {
    let mut angles = vec![0.0; m];
    for (coord, &angle_idx) in perm.iter().enumerate() {
        angles[angle_idx] = x[coord];
    }
    angles
}

fn sphere_metric_diag(r: f64, m: usize, perm: &[usize], x: &[f64]) -> DMatrix<f64> {
    let angles = sphere_angles(m, perm, x);
    let mut diag_by_angle = vec![0.0; m];
    let mut sin_prod2 = 1.0;
    for i in 0..m {
        diag_by_angle[i] = r * r * sin_prod2;
        sin_prod2 *= angles[i].sin().powi(2);
    }
    let mut g = DMatrix::zeros(m, m);
    for coord in 0..m {
        g[(coord, coord)] = diag_by_angle[perm[coord]];
    }
    g
}

fn sphere_params(name: &str, params: &[f64]) -> Result<(f64, usize)> {
    match params {
        [r] => Ok((param_radius(name, *r)?, 2)),
        [r, m] => Ok((param_radius(name, *r)?, param_dim(name, *m)?)),
        _ => Err(Error::InvalidParams {
            name: name.into(),
            reason: "expected [radius] or [radius, dim]".into(),
        }),
    }
}

fn sphere_polar(params: &[f64]) -> Result<BuiltinChart> {
    let (r, m) = sphere_params("sphere_polar", params)?;
    let perm = sphere_coordinate_order(m);
    let mut bounds = vec![(0.0, 0.0); m];
    for coord in 0..m {
        bounds[coord] = if perm[coord] == m - 1 {
            (-PI + POLAR_BAND, PI - POLAR_BAND) // azimuth
        } else {
            (POLAR_BAND, PI - POLAR_BAND)
        };
    }
    let chart = Arc::new(Chart::new(
        BoxDomain::new(bounds)?,
        format!("S^{m}({r}) polar"),
    )?);
    let metric = {
        let perm = perm.clone();
        MetricField::new(chart.clone(), move |x| sphere_metric_diag(r, m, &perm, x))
    };
    let immersion = {
        let perm_f = perm.clone();
        let perm_n = perm;
        Immersion::new(
            chart.clone(),
            move |x| sphere_position(r, &sphere_angles(m, &perm_f, x)),
            move |x| sphere_position(1.0, &sphere_angles(m, &perm_n, x)),
        )
    };
    Ok(BuiltinChart {
        chart,
        metric,
        immersion: Some(immersion),
    })
}

fn sphere_stereo(params: &[f64]) -> Result<BuiltinChart> {
    let (r, m) = sphere_params("sphere_stereo", params)?;
    let chart = Arc::new(Chart::new(
        BoxDomain::new(vec![(-0.8, 0.8); m])?,
        format!("S^{m}({r}) stereographic"),
    )?);
    let metric = MetricField::new(chart.clone(), move |x| {
        let s = 1.0 + x.iter().map(|u| u * u).sum::<f64>();
        DMatrix::identity(m, m) * (4.0 * r * r / (s * s))
    });
    let position = move |x: &[f64]| {
        let norm2 = x.iter().map(|u| u * u).sum::<f64>();
        let s = 1.0 + norm2;
        let mut f = DVector::zeros(m + 1);
        for (i, &u) in x.iter().enumerate() {
            f[i] = 2.0 * r * u / s;
        }
        f[m] = r * (1.0 - norm2) / s;
        f
    };
    let immersion = Immersion::new(chart.clone(), position, move |x| position(x) / r);
    Ok(BuiltinChart {
        chart,
        metric,
        immersion: Some(immersion),
    })
}

fn cylinder_product(params: &[f64]) -> Result<BuiltinChart> {
    let (m, k) = match params {
        [m, k] => (
            param_dim("cylinder_product", *m)?,
            param_dim("cylinder_product", *k)?,
        ),
        _ => {
            return Err(Error::InvalidParams {
                name: "cylinder_product".into(),
                reason: "expected [sphere_dim, flat_dim]".into(),
            })
        }
    };
    let perm = sphere_coordinate_order(m);
    let mut bounds = Vec::with_capacity(m + k);
    for coord in 0..m {
        bounds.push(if perm[coord] == m - 1 {
            (-PI + POLAR_BAND, PI - POLAR_BAND)
        } else {
            (POLAR_BAND, PI - POLAR_BAND)
        });
    }
    bounds.extend(std::iter::repeat((-2.0, 2.0)).take(k));
    let chart = Arc::new(Chart::new(
        BoxDomain::new(bounds)?,
        format!("S^{m}(1) x R^{k}"),
    )?);
    let metric = {
        let perm = perm.clone();
        MetricField::new(chart.clone(), move |x| {
            let mut g = DMatrix::identity(m + k, m + k);
            let gs = sphere_metric_diag(1.0, m, &perm, &x[..m]);
            g.view_mut((0, 0), (m, m)).copy_from(&gs);
            g
        })
    };
    // Ambient layout: flat coordinates first, then the sphere vector. With
    // the sphere chart's orientation fix this keeps the adapted frame
    // positively oriented for even m.
    let immersion = {
        let perm_f = perm.clone();
        let perm_n = perm;
        let position = move |x: &[f64], perm: &[usize]| {
            let mut f = DVector::zeros(m + k + 1);
            for j in 0..k {
                f[j] = x[m + j];
            }
            let s = sphere_position(1.0, &sphere_angles(m, perm, &x[..m]));
            for i in 0..=m {
                f[k + i] = s[i];
            }
            f
        };
        Immersion::new(
            chart.clone(),
            move |x| position(x, &perm_f),
            move |x| {
                let mut nu = DVector::zeros(m + k + 1);
                let s = sphere_position(1.0, &sphere_angles(m, &perm_n, &x[..m]));
                for i in 0..=m {
                    nu[k + i] = s[i];
                }
                nu
            },
        )
    };
    Ok(BuiltinChart {
        chart,
        metric,
        immersion: Some(immersion),
    })
}

fn product(params: &[f64]) -> Result<BuiltinChart> {
    let (k, m, r) = match params {
        [k, m] => (param_dim("product", *k)?, param_dim("product", *m)?, 1.0),
        [k, m, r] => (
            param_dim("product", *k)?,
            param_dim("product", *m)?,
            param_radius("product", *r)?,
        ),
        _ => {
            return Err(Error::InvalidParams {
                name: "product".into(),
                reason: "expected [flat_dim, sphere_dim] or [flat_dim, sphere_dim, radius]".into(),
            })
        }
    };
    let perm = sphere_coordinate_order(m);
    let mut bounds = vec![(-2.0, 2.0); k];
    for coord in 0..m {
        bounds.push(if perm[coord] == m - 1 {
            (-PI + POLAR_BAND, PI - POLAR_BAND)
        } else {
            (POLAR_BAND, PI - POLAR_BAND)
        });
    }
    let chart = Arc::new(Chart::new(
        BoxDomain::new(bounds)?,
        format!("R^{k} x S^{m}({r})"),
    )?);
    let metric = {
        let perm = perm.clone();
        MetricField::new(chart.clone(), move |x| {
            let mut g = DMatrix::identity(k + m, k + m);
            let gs = sphere_metric_diag(r, m, &perm, &x[k..]);
            g.view_mut((k, k), (m, m)).copy_from(&gs);
            g
        })
    };
    let immersion = {
        let perm_f = perm.clone();
        let perm_n = perm;
        Immersion::new(
            chart.clone(),
            move |x| {
                let mut f = DVector::zeros(k + m + 1);
                for j in 0..k {
                    f[j] = x[j];
                }
                let s = sphere_position(r, &sphere_angles(m, &perm_f, &x[k..]));
                for i in 0..=m {
                    f[k + i] = s[i];
                }
                f
            },
            move |x| {
                let mut nu = DVector::zeros(k + m + 1);
                let s = sphere_position(1.0, &sphere_angles(m, &perm_n, &x[k..]));
                for i in 0..=m {
                    nu[k + i] = s[i];
                }
                nu
            },
        )
    };
    Ok(BuiltinChart {
        chart,
        metric,
        immersion: Some(immersion),
    })
}

/// Jacobian of the immersion, columns `∂_j F`, via the engine.
pub fn immersion_jacobian(imm: &Immersion, x: &[f64], engine: &DiffEngine) -> DMatrix<f64> {
    let n = imm.dim();
    let ambient = imm.ambient_dim();
    let mut jac = DMatrix::zeros(ambient, n);
    for j in 0..n {
        let col: DVector<f64> = engine.partial_raw(|y| imm.position(y), x, j);
        jac.set_column(j, &col);
    }
    jac
}

/// First fundamental form `g_ij = <∂_i F, ∂_j F>` as a metric field.
pub fn induced_metric(imm: &Immersion, engine: &DiffEngine) -> MetricField {
    let imm = imm.clone();
    let engine = *engine;
    MetricField::new(imm.chart().clone(), move |x| {
        let jac = immersion_jacobian(&imm, x, &engine);
        jac.transpose() * jac
    })
}

/// Second fundamental form `h_ij = <∂_i F, ∂_j ν>` as a bilinear form,
/// symmetrized.
pub fn second_fundamental_form(imm: &Immersion, engine: &DiffEngine) -> SymTensorField {
    let imm = imm.clone();
    let engine = *engine;
    SymTensorField::new(imm.chart().clone(), move |x| {
        second_fundamental_form_raw(&imm, x, &engine)
    })
}

fn second_fundamental_form_raw(imm: &Immersion, x: &[f64], engine: &DiffEngine) -> DMatrix<f64> {
    let n = imm.dim();
    let jac = immersion_jacobian(imm, x, engine);
    let mut dnu = DMatrix::zeros(imm.ambient_dim(), n);
    for j in 0..n {
        let col: DVector<f64> = engine.partial_raw(|y| imm.unit_normal(y), x, j);
        dnu.set_column(j, &col);
    }
    let raw = jac.transpose() * dnu;
    0.5 * (&raw + raw.transpose())
}

/// Pointwise second fundamental form with normal validation.
pub fn second_fundamental_form_at(
    imm: &Immersion,
    x: &[f64],
    engine: &DiffEngine,
) -> Result<DMatrix<f64>> {
    imm.chart().require_inside(x, engine.reach())?;
    let nu = imm.unit_normal(x);
    if (nu.norm() - 1.0).abs() > 1e-8 {
        return Err(Error::BadNormal {
            point: x.to_vec(),
            reason: format!("|nu| = {} is not 1", nu.norm()),
        });
    }
    let jac = immersion_jacobian(imm, x, engine);
    let ortho = (jac.transpose() * &nu).amax();
    if ortho > 1e-6 {
        return Err(Error::BadNormal {
            point: x.to_vec(),
            reason: format!("<nu, dF> = {ortho:.3e} is not 0"),
        });
    }
    Ok(second_fundamental_form_raw(imm, x, engine))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::{gram_schmidt_frame, orthonormalize_columns};
    use rand::Rng;

    fn engine() -> DiffEngine {
        DiffEngine::default()
    }

    #[test]
    fn unknown_chart_is_rejected() {
        assert!(matches!(
            builtin_chart("moebius", &[1.0]),
            Err(Error::UnknownChart { .. })
        ));
        assert!(builtin_chart("sphere_polar", &[-1.0]).is_err());
        assert!(builtin_chart("flat", &[2.5]).is_err());
    }

    #[test]
    fn flat_chart_is_euclidean() {
        let b = builtin_chart("flat", &[2.0]).unwrap();
        let g = b.metric.at(&[0.3, -0.8]).unwrap();
        assert_eq!(g, DMatrix::identity(2, 2));
        let induced = induced_metric(b.immersion.as_ref().unwrap(), &engine());
        let gi = induced.eval_raw(&[0.3, -0.8]);
        assert!((gi - DMatrix::identity(2, 2)).norm() < 1e-9);
    }

    #[test]
    fn sphere_polar_metric_value() {
        // diag(1, sin² π/4) = diag(1, 0.5) on the unit 2-sphere.
        let b = builtin_chart("sphere_polar", &[1.0]).unwrap();
        let g = b.metric.at(&[std::f64::consts::FRAC_PI_4, 0.0]).unwrap();
        assert!((g[(0, 0)] - 1.0).abs() < 1e-15);
        assert!((g[(1, 1)] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn induced_metrics_match_closed_forms() {
        let mut rng = crate::testutil::rng(11);
        for (name, params) in [
            ("sphere_polar", vec![1.0]),
            ("sphere_polar", vec![2.0, 3.0]),
            ("sphere_stereo", vec![1.0, 2.0]),
            ("cylinder_product", vec![2.0, 1.0]),
            ("product", vec![1.0, 2.0]),
        ] {
            let b = builtin_chart(name, &params).unwrap();
            let imm = b.immersion.as_ref().unwrap();
            let induced = induced_metric(imm, &engine());
            for _ in 0..20 {
                let x = b.chart.domain().sample(&mut rng, 0.1);
                let dev = (induced.eval_raw(&x) - b.metric.eval_raw(&x)).norm();
                assert!(dev < 1e-7, "{name}: induced metric deviates by {dev}");
            }
        }
    }

    #[test]
    fn normals_are_unit_and_orthogonal() {
        let mut rng = crate::testutil::rng(12);
        // fine step: the 1e-9 tolerance is about the geometry, not the
        // default engine's truncation
        let fine = DiffEngine::richardson(2e-3);
        for (name, params) in [
            ("flat", vec![2.0]),
            ("sphere_polar", vec![1.0, 4.0]),
            ("sphere_stereo", vec![2.0]),
            ("cylinder_product", vec![2.0, 1.0]),
            ("product", vec![1.0, 2.0]),
        ] {
            let b = builtin_chart(name, &params).unwrap();
            let imm = b.immersion.as_ref().unwrap();
            for _ in 0..100 {
                let x = b.chart.domain().sample(&mut rng, 0.1);
                let nu = imm.unit_normal(&x);
                assert!((nu.norm() - 1.0).abs() < 1e-9);
                let jac = immersion_jacobian(imm, &x, &fine);
                assert!((jac.transpose() * &nu).amax() < 1e-9);
                // frame orthonormality against the closed-form metric
                let e = gram_schmidt_frame(&b.metric.eval_raw(&x), &x).unwrap();
                let gram = e.transpose() * b.metric.eval_raw(&x) * &e;
                assert!((gram - DMatrix::identity(b.chart.dim(), b.chart.dim())).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn adapted_frames_are_positively_oriented() {
        let mut rng = crate::testutil::rng(13);
        for (name, params) in [
            ("flat", vec![2.0]),
            ("flat", vec![3.0]),
            ("sphere_polar", vec![1.0, 2.0]),
            ("sphere_polar", vec![1.0, 3.0]),
            ("sphere_polar", vec![1.0, 4.0]),
            ("sphere_stereo", vec![1.0, 2.0]),
            ("cylinder_product", vec![2.0, 1.0]),
            ("product", vec![1.0, 2.0]),
        ] {
            let b = builtin_chart(name, &params).unwrap();
            let imm = b.immersion.as_ref().unwrap();
            for _ in 0..10 {
                let x = b.chart.domain().sample(&mut rng, 0.15);
                let e = gram_schmidt_frame(&b.metric.eval_raw(&x), &x).unwrap();
                let jac = immersion_jacobian(imm, &x, &engine());
                let mut r = DMatrix::zeros(imm.ambient_dim(), imm.ambient_dim());
                let pushed = &jac * &e;
                for i in 0..imm.dim() {
                    r.set_column(i, &pushed.column(i));
                }
                r.set_column(imm.dim(), &imm.unit_normal(&x));
                let r = orthonormalize_columns(&r);
                let det = r.determinant();
                assert!(
                    det > 0.99,
                    "{name} {params:?}: adapted frame det = {det}"
                );
            }
        }
    }

    #[test]
    fn plane_has_vanishing_second_fundamental_form() {
        let b = builtin_chart("flat", &[2.0]).unwrap();
        let h = second_fundamental_form(b.immersion.as_ref().unwrap(), &engine());
        assert!(h.eval_raw(&[0.4, 0.9]).norm() < 1e-12);
    }

    #[test]
    fn unit_sphere_shape_operator_is_identity() {
        let b = builtin_chart("sphere_polar", &[1.0]).unwrap();
        let imm = b.immersion.as_ref().unwrap();
        let mut rng = crate::testutil::rng(14);
        for _ in 0..20 {
            let x = b.chart.domain().sample(&mut rng, 0.1);
            let h = second_fundamental_form_at(imm, &x, &engine()).unwrap();
            let g = b.metric.eval_raw(&x);
            assert!((&h - &g).norm() < 1e-7, "h != g on unit sphere");
            let shape = g.try_inverse().unwrap() * h;
            assert!((shape - DMatrix::identity(2, 2)).norm() < 1e-7);
        }
    }

    #[test]
    fn sphere_radius_scales_shape_operator() {
        let b = builtin_chart("sphere_polar", &[2.0, 3.0]).unwrap();
        let imm = b.immersion.as_ref().unwrap();
        let x = [1.0, 0.4, 1.2];
        let h = second_fundamental_form_at(imm, &x, &engine()).unwrap();
        let g = b.metric.eval_raw(&x);
        let shape = g.try_inverse().unwrap() * h;
        assert!((shape - DMatrix::identity(3, 3) * 0.5).norm() < 1e-7);
    }

    #[test]
    fn cylinder_shape_operator_is_sphere_projector() {
        let b = builtin_chart("cylinder_product", &[2.0, 1.0]).unwrap();
        let imm = b.immersion.as_ref().unwrap();
        let x = [1.1, 0.4, 0.3];
        let h = second_fundamental_form_at(imm, &x, &engine()).unwrap();
        let g = b.metric.eval_raw(&x);
        let shape = g.try_inverse().unwrap() * h;
        let expected = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0, 0.0]));
        assert!((shape - expected).norm() < 1e-7);
    }

    #[test]
    fn second_fundamental_form_is_symmetric() {
        let b = builtin_chart("sphere_stereo", &[1.0, 3.0]).unwrap();
        let imm = b.immersion.as_ref().unwrap();
        let mut rng = crate::testutil::rng(15);
        for _ in 0..20 {
            let x = b.chart.domain().sample(&mut rng, 0.1);
            // raw, unsymmetrized comparison of the two mixed derivatives
            let jac = immersion_jacobian(imm, &x, &engine());
            let mut dnu = DMatrix::zeros(imm.ambient_dim(), imm.dim());
            for j in 0..imm.dim() {
                let col: DVector<f64> = engine().partial_raw(|y| imm.unit_normal(y), &x, j);
                dnu.set_column(j, &col);
            }
            let raw = jac.transpose() * dnu;
            let asym = (&raw - raw.transpose()).amax();
            assert!(asym < 1e-10, "raw h asymmetry {asym}");
        }
    }

    #[test]
    fn stereo_and_polar_spheres_share_curvature() {
        let polar = builtin_chart("sphere_polar", &[1.5]).unwrap();
        let stereo = builtin_chart("sphere_stereo", &[1.5]).unwrap();
        let e = engine();
        let sp = crate::tensorcalc::scalar_curvature(&polar.metric, &[1.0, 0.5], &e).unwrap();
        let ss = crate::tensorcalc::scalar_curvature(&stereo.metric, &[0.2, -0.3], &e).unwrap();
        assert!((sp - ss).abs() < 1e-6);
        assert!((sp - 2.0 / 2.25).abs() < 1e-6);
    }

    #[test]
    fn domain_sampler_respects_margin() {
        let b = builtin_chart("sphere_polar", &[1.0]).unwrap();
        let mut rng = crate::testutil::rng(16);
        for _ in 0..200 {
            let x = b.chart.domain().sample(&mut rng, 0.05);
            assert!(b.chart.domain().contains_with_reach(&x, 0.049));
        }
        let _ = rng.random_range(0.0..1.0);
    }
}
