//! Suites exercising the algebraic layer and the hypersurface spinor
//! identities: Clifford relations, the identification, the derivative
//! identity of restricted spinors, the energy-momentum tensor, T-Killing
//! traces, curvature identities, the Killing vector, and the eigenvalue
//! bound integrands.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::chart::gram_schmidt_frame;
use crate::clifford::{clifford_algebra, hypersurface_identification, CMatrix, CVector};
use crate::error::Result;
use crate::spin::curvature::{
    curvature_action_residual, ricci_identity_residual, sphere_ricci_closed_form,
};
use crate::spin::em::{
    energy_momentum, friedrich_integrand, hijazi_integrand, killing_defect, killing_vector,
    t_killing_residual, trace_identities,
};
use crate::spin::gauss_formula_residual_with;
use crate::verify::context::{max_over, spread_over, SuiteCtx};
use crate::verify::geometries::spin_geometry;
use crate::verify::report::CheckRecord;

const EXACT: f64 = 1e-13;

pub fn clifford_relations(ctx: &SuiteCtx) -> Result<Vec<CheckRecord>> {
    let suite = "clifford_relations";
    let anchor = "Prop. 2.1 context (Clifford relations)";
    let mut checks = Vec::new();
    for n in 1..=8usize {
        let geometry = format!("Cl({n})");
        if !ctx.geometry_selected(&geometry, true) {
            continue;
        }
        let alg = clifford_algebra(n)?;
        let d = alg.spinor_dim();

        let mut relation_dev: f64 = 0.0;
        let mut skew_dev: f64 = 0.0;
        for i in 0..n {
            skew_dev = skew_dev.max((alg.gamma(i).adjoint() + alg.gamma(i)).camax());
            for j in 0..n {
                let anti = alg.gamma(i) * alg.gamma(j) + alg.gamma(j) * alg.gamma(i);
                let expected = if i == j {
                    CMatrix::identity(d, d) * Complex64::new(-2.0, 0.0)
                } else {
                    CMatrix::zeros(d, d)
                };
                relation_dev = relation_dev.max((anti - expected).camax());
            }
        }
        checks.push(CheckRecord::new(
            suite,
            "defining_relations",
            anchor,
            &geometry,
            n * n,
            relation_dev,
            EXACT,
        ));
        checks.push(CheckRecord::new(
            suite,
            "skew_hermitian",
            anchor,
            &geometry,
            n,
            skew_dev,
            EXACT,
        ));

        let vol = crate::clifford::volume_element(&alg);
        if n % 2 == 0 {
            let square_dev = (&vol.matrix * &vol.matrix - CMatrix::identity(d, d)).camax();
            checks.push(CheckRecord::new(
                suite,
                "volume_square",
                anchor,
                &geometry,
                1,
                square_dev,
                EXACT,
            ));
            let (p, q) = vol.projectors.as_ref().expect("even split");
            let algebra_dev = ((p + q) - CMatrix::identity(d, d))
                .camax()
                .max((p * q).camax())
                .max((p * p - p).camax())
                .max((p.trace().re - d as f64 / 2.0).abs());
            checks.push(CheckRecord::new(
                suite,
                "chirality_projectors",
                anchor,
                &geometry,
                1,
                algebra_dev,
                EXACT,
            ));
        } else {
            let mut central_dev: f64 = 0.0;
            for i in 0..n {
                central_dev = central_dev
                    .max((&vol.matrix * alg.gamma(i) - alg.gamma(i) * &vol.matrix).camax());
            }
            checks.push(CheckRecord::new(
                suite,
                "volume_central",
                anchor,
                &geometry,
                n,
                central_dev,
                EXACT,
            ));
        }
    }
    Ok(checks)
}

pub fn identification_eq21(ctx: &SuiteCtx) -> Result<Vec<CheckRecord>> {
    let suite = "identification_eq21";
    let anchor = "Prop. 2.1, Eq. (2.1)";
    let mut checks = Vec::new();
    for ambient_dim in 2..=9usize {
        let geometry = format!("ambient_dim_{ambient_dim}");
        if !ctx.geometry_selected(&geometry, true) {
            continue;
        }
        let ambient = Arc::new(clifford_algebra(ambient_dim)?);
        let ident = hypersurface_identification(&ambient)?;
        let n = ambient_dim - 1;

        checks.push(CheckRecord::new(
            suite,
            "intertwining",
            anchor,
            &geometry,
            n * ambient.spinor_dim(),
            ident.intertwining_residual(),
            EXACT,
        ));

        let d_m = ident.intrinsic.spinor_dim();
        let mut isometry_dev =
            (&ident.map * ident.map.adjoint() - CMatrix::identity(d_m, d_m)).camax();
        // random spinors keep their norm through the identification
        use rand::Rng;
        let mut rng = ctx.rng(suite, &geometry);
        for _ in 0..100 {
            let raw = CVector::from_fn(ambient.spinor_dim(), |_, _| {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            let psi = match &ident.chirality {
                Some((p, _)) => p * raw,
                None => raw,
            };
            let restricted = ident.restrict(&psi);
            isometry_dev = isometry_dev
                .max((crate::clifford::norm(&restricted) - crate::clifford::norm(&psi)).abs());
        }
        checks.push(CheckRecord::new(
            suite,
            "isometry",
            anchor,
            &geometry,
            100,
            isometry_dev,
            EXACT,
        ));

        if n % 2 == 1 {
            let (p_plus, _) = ident.chirality.as_ref().expect("odd n splits");
            let dim_dev = (p_plus.trace().re - d_m as f64).abs();
            checks.push(CheckRecord::new(
                suite,
                "half_spinor_dimension",
                anchor,
                &geometry,
                1,
                dim_dev,
                EXACT,
            ));
        }
    }
    Ok(checks)
}

pub fn gauss_formula_eq22(ctx: &SuiteCtx) -> Result<Vec<CheckRecord>> {
    let suite = "gauss_formula_eq22";
    let anchor = "Eq. (2.2), Eq. (2.7)";
    let engine = ctx.engine();
    let mut checks = Vec::new();
    for name in ["plane2", "unit_s2_polar", "unit_s4", "cylinder_s2xr"] {
        if !ctx.geometry_selected(name, true) {
            continue;
        }
        let geo = spin_geometry(name, &engine)?;
        let samples = ctx.samples(suite, name, &geo.builtin.chart, ctx.count(100));
        let (residual, worst) = max_over(&samples, |x| {
            gauss_formula_residual_with(&geo.psi, &geo.builtin.metric, &geo.h, x, &engine)
        })?;
        checks.push(
            CheckRecord::new(suite, "derivative_identity", anchor, name, samples.len(), residual, 1e-5)
                .with_worst(worst),
        );
    }
    Ok(checks)
}

pub fn em_tensor_prop24(ctx: &SuiteCtx) -> Result<Vec<CheckRecord>> {
    let suite = "em_tensor_prop24";
    let anchor = "Prop. 2.4";
    let engine = ctx.engine();
    let mut checks = Vec::new();
    for name in ["plane2", "unit_s2_polar", "unit_s4", "cylinder_s2xr"] {
        if !ctx.geometry_selected(name, true) {
            continue;
        }
        let geo = spin_geometry(name, &engine)?;
        let g = &geo.builtin.metric;
        let samples = ctx.samples(suite, name, &geo.builtin.chart, ctx.count(100));
        let n = geo.builtin.chart.dim();

        // 2T = h in frame components
        let (dev, worst) = max_over(&samples, |x| {
            let em = energy_momentum(&geo.psi, g, x, &engine)?;
            let frame = gram_schmidt_frame(&g.eval_raw(x), x)?;
            let h_frame = frame.transpose() * geo.h.eval_raw(x) * frame;
            Ok((em.tensor.clone() * 2.0 - h_frame).amax())
        })?;
        checks.push(
            CheckRecord::new(suite, "twice_t_equals_h", anchor, name, samples.len(), dev, 1e-5)
                .with_worst(worst),
        );

        let length_spread = spread_over(&samples, |x| Ok(geo.psi.eval_raw(x).norm()))?;
        checks.push(CheckRecord::new(
            suite,
            "constant_length",
            anchor,
            name,
            samples.len(),
            length_spread,
            1e-6,
        ));

        let trace_spread = spread_over(&samples, |x| {
            Ok(energy_momentum(&geo.psi, g, x, &engine)?.trace)
        })?;
        checks.push(CheckRecord::new(
            suite,
            "constant_trace",
            anchor,
            name,
            samples.len(),
            trace_spread,
            1e-6,
        ));

        if name == "unit_s2_polar" {
            let (dev, worst) = max_over(&samples, |x| {
                let em = energy_momentum(&geo.psi, g, x, &engine)?;
                Ok((em.tensor.clone() - DMatrix::identity(n, n) * 0.5).amax())
            })?;
            checks.push(
                CheckRecord::new(suite, "half_identity_on_sphere", anchor, name, samples.len(), dev, 1e-5)
                    .with_worst(worst),
            );
        }
    }
    Ok(checks)
}

pub fn tkilling_traces_eq24_25(ctx: &SuiteCtx) -> Result<Vec<CheckRecord>> {
    let suite = "tkilling_traces_eq24_25";
    let anchor = "Eqs. (2.4)-(2.5), Eq. (2.8)";
    let engine = ctx.engine();
    let mut checks = Vec::new();
    for name in ["unit_s2_polar", "cylinder_s2xr"] {
        if !ctx.geometry_selected(name, true) {
            continue;
        }
        let geo = spin_geometry(name, &engine)?;
        let g = &geo.builtin.metric;
        let samples = ctx.samples(suite, name, &geo.builtin.chart, ctx.count(50));

        let (tk, worst) = max_over(&samples, |x| t_killing_residual(&geo.psi, g, x, &engine))?;
        checks.push(
            CheckRecord::new(suite, "t_killing_equation", anchor, name, samples.len(), tk, 1e-5)
                .with_worst(worst),
        );

        let report = trace_identities(&geo.psi, g, &samples, &engine)?;
        checks.push(CheckRecord::new(
            suite,
            "trace_identity",
            anchor,
            name,
            samples.len(),
            report.max_identity_deviation,
            1e-5,
        ));
        checks.push(CheckRecord::new(
            suite,
            "trace_sq_constant",
            anchor,
            name,
            samples.len(),
            report.trace_sq_spread,
            1e-6,
        ));
        checks.push(CheckRecord::new(
            suite,
            "divergence_free",
            anchor,
            name,
            samples.len(),
            report.max_divergence,
            1e-5,
        ));
    }
    Ok(checks)
}

pub fn curvature_ids_eq29_210(ctx: &SuiteCtx) -> Result<Vec<CheckRecord>> {
    let suite = "curvature_ids_eq29_210";
    let anchor = "Eqs. (2.9)-(2.10)";
    let engine = ctx.engine();
    let mut checks = Vec::new();
    for name in ["unit_s2_polar", "cylinder_s2xr"] {
        if !ctx.geometry_selected(name, true) {
            continue;
        }
        let geo = spin_geometry(name, &engine)?;
        let g = &geo.builtin.metric;
        // nested spinor second derivatives are the costly oracle; a modest
        // sample count keeps the default run inside its time budget
        let samples = ctx.samples(suite, name, &geo.builtin.chart, ctx.count(12));

        let mut route_gap: f64 = 0.0;
        let mut eq29: f64 = 0.0;
        let mut worst29: Option<Vec<f64>> = None;
        for x in &samples {
            let id = curvature_action_residual(&geo.psi, g, x, &engine)?;
            route_gap = route_gap.max(id.route_gap);
            if id.residual >= eq29 {
                eq29 = id.residual;
                worst29 = Some(x.clone());
            }
        }
        checks.push(CheckRecord::new(
            suite,
            "curvature_two_routes",
            anchor,
            name,
            samples.len(),
            route_gap,
            1e-4,
        ));
        checks.push(
            CheckRecord::new(suite, "curvature_commutator", anchor, name, samples.len(), eq29, 1e-4)
                .with_worst(worst29),
        );

        let (eq210, worst) = max_over(&samples, |x| ricci_identity_residual(&geo.psi, g, x, &engine))?;
        checks.push(
            CheckRecord::new(suite, "ricci_action", anchor, name, samples.len(), eq210, 1e-4)
                .with_worst(worst),
        );
    }
    for name in ["unit_s2_polar", "unit_s3", "unit_s4"] {
        if !ctx.geometry_selected(name, true) {
            continue;
        }
        let geo = spin_geometry(name, &engine)?;
        let g = &geo.builtin.metric;
        let samples = ctx.samples(suite, name, &geo.builtin.chart, ctx.count(8));
        let (dev, worst) = max_over(&samples, |x| {
            sphere_ricci_closed_form(&geo.psi, g, x, &engine)
        })?;
        checks.push(
            CheckRecord::new(suite, "sphere_ricci_closed_form", anchor, name, samples.len(), dev, 1e-5)
                .with_worst(worst),
        );
    }
    Ok(checks)
}

pub fn killing_vector_prop27(ctx: &SuiteCtx) -> Result<Vec<CheckRecord>> {
    let suite = "killing_vector_prop27";
    let anchor = "Prop. 2.7";
    let engine = ctx.engine();
    let mut checks = Vec::new();

    if ctx.geometry_selected("unit_s2_polar", true) {
        let geo = spin_geometry("unit_s2_polar", &engine)?;
        let g = &geo.builtin.metric;
        let samples = ctx.samples(suite, "unit_s2_polar", &geo.builtin.chart, ctx.count(25));
        let (defect, worst) = max_over(&samples, |x| {
            Ok(killing_defect(&geo.psi, g, x, &engine)?.amax())
        })?;
        checks.push(
            CheckRecord::new(
                suite,
                "symmetrized_derivative",
                anchor,
                "unit_s2_polar",
                samples.len(),
                defect,
                1e-5,
            )
            .with_worst(worst),
        );
        let (imag, _) = max_over(&samples, |x| {
            let (_, imag) = killing_vector(&geo.psi, g, x, &engine)?;
            Ok(imag)
        })?;
        checks.push(CheckRecord::new(
            suite,
            "vector_is_real",
            anchor,
            "unit_s2_polar",
            samples.len(),
            imag,
            1e-12,
        ));
    }

    if ctx.geometry_selected("plane2", true) {
        let geo = spin_geometry("plane2", &engine)?;
        let g = &geo.builtin.metric;
        let samples = ctx.samples(suite, "plane2", &geo.builtin.chart, ctx.count(10));
        let (norm, _) = max_over(&samples, |x| {
            let (v, _) = killing_vector(&geo.psi, g, x, &engine)?;
            Ok(v.norm())
        })?;
        checks.push(CheckRecord::new(
            suite,
            "flat_vector_vanishes",
            anchor,
            "plane2",
            samples.len(),
            norm,
            1e-10,
        ));
    }
    Ok(checks)
}

pub fn hijazi_integrand_eq23(ctx: &SuiteCtx) -> Result<Vec<CheckRecord>> {
    let suite = "hijazi_integrand_eq23";
    let anchor = "Thm. 2.2, Eq. (2.3)";
    let engine = ctx.engine();
    let mut checks = Vec::new();

    if ctx.geometry_selected("unit_s2_polar", true) {
        let geo = spin_geometry("unit_s2_polar", &engine)?;
        let g = &geo.builtin.metric;
        let samples = ctx.samples(suite, "unit_s2_polar", &geo.builtin.chart, ctx.count(50));

        // λ² = (tr T)² = 1 throughout the equality case
        let (lambda_dev, _) = max_over(&samples, |x| {
            let em = energy_momentum(&geo.psi, g, x, &engine)?;
            Ok((em.trace * em.trace - 1.0).abs())
        })?;
        checks.push(CheckRecord::new(
            suite,
            "lambda_sq_is_one",
            anchor,
            "unit_s2_polar",
            samples.len(),
            lambda_dev,
            1e-5,
        ));

        // sampled minimum of the integrand equals λ²
        let mut min_integrand = f64::MAX;
        for x in &samples {
            min_integrand = min_integrand.min(hijazi_integrand(&geo.psi, g, x, &engine)?);
        }
        checks.push(CheckRecord::new(
            suite,
            "integrand_min_is_one",
            anchor,
            "unit_s2_polar",
            samples.len(),
            (min_integrand - 1.0).abs(),
            1e-5,
        ));

        let (friedrich_dev, _) = max_over(&samples, |x| {
            Ok((friedrich_integrand(g, x, &engine)? - 1.0).abs())
        })?;
        checks.push(CheckRecord::new(
            suite,
            "scalar_comparison_is_one",
            anchor,
            "unit_s2_polar",
            samples.len(),
            friedrich_dev,
            1e-6,
        ));
    }

    if ctx.geometry_selected("torus2", true) {
        let geo = spin_geometry("torus2", &engine)?;
        let g = &geo.builtin.metric;
        let samples = ctx.samples(suite, "torus2", &geo.builtin.chart, ctx.count(10));
        let (dev, _) = max_over(&samples, |x| {
            let both = hijazi_integrand(&geo.psi, g, x, &engine)?
                .abs()
                .max(friedrich_integrand(g, x, &engine)?.abs());
            Ok(both)
        })?;
        checks.push(CheckRecord::new(
            suite,
            "flat_integrands_vanish",
            anchor,
            "torus2",
            samples.len(),
            dev,
            1e-10,
        ));
    }

    // |T|² >= (tr T)²/n pointwise (exact linear algebra, not the unproven
    // pointwise bound comparison)
    for name in ["unit_s2_polar", "cylinder_s2xr"] {
        if !ctx.geometry_selected(name, true) {
            continue;
        }
        let geo = spin_geometry(name, &engine)?;
        let g = &geo.builtin.metric;
        let n = geo.builtin.chart.dim() as f64;
        let samples = ctx.samples(suite, name, &geo.builtin.chart, ctx.count(25));
        let (violation, worst) = max_over(&samples, |x| {
            let em = energy_momentum(&geo.psi, g, x, &engine)?;
            Ok((em.trace * em.trace / n - em.norm_squared).max(0.0))
        })?;
        checks.push(
            CheckRecord::new(suite, "cauchy_schwarz", anchor, name, samples.len(), violation, 1e-12)
                .with_worst(worst),
        );
    }
    Ok(checks)
}
