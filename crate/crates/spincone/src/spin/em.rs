//! The energy-momentum tensor of a spinor field and the T-Killing
//! machinery: trace and divergence identities, eigenvalue bound integrands
//! and the associated Killing vector field.
//!
//! `T(X, Y) = ½ Re(X·∇_Y ψ + Y·∇_X ψ, ψ) / |ψ|²` is defined off the zero
//! set of `ψ`; evaluations below a relative threshold of `1e-8` error out
//! instead of extrapolating.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::chart::{gram_schmidt_frame, MetricField, SymTensorField, VectorField};
use crate::clifford::hermitian;
use crate::error::Result;
use crate::spin::{require_nonzero, spinor_covariant_derivatives, SpinorField};
use crate::tensorcalc::{self, DiffEngine};

/// Energy-momentum data at a point, in orthonormal-frame components.
#[derive(Clone, Debug)]
pub struct EnergyMomentum {
    /// Symmetric `n x n` matrix `T_{ij} = T(e_i, e_j)`.
    pub tensor: DMatrix<f64>,
    /// `tr T`.
    pub trace: f64,
    /// `|T|² = Σ_{ij} T_{ij}²`.
    pub norm_squared: f64,
}

/// Energy-momentum tensor of `ψ` at `x`.
pub fn energy_momentum(
    psi: &SpinorField,
    g: &MetricField,
    x: &[f64],
    engine: &DiffEngine,
) -> Result<EnergyMomentum> {
    let n = g.dim();
    let psix = psi.eval_raw(x);
    require_nonzero(psi, x, &psix)?;
    let norm2 = psix.norm_squared();
    let derivs = spinor_covariant_derivatives(psi, g, x, engine)?;
    let mut tensor = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let gi_dj = psi.algebra().gamma(i) * &derivs[j];
            let gj_di = psi.algebra().gamma(j) * &derivs[i];
            let value = 0.5 * hermitian(&(gi_dj + gj_di), &psix).re / norm2;
            tensor[(i, j)] = value;
            tensor[(j, i)] = value;
        }
    }
    let trace = tensor.trace();
    let norm_squared = tensor.iter().map(|v| v * v).sum();
    Ok(EnergyMomentum {
        tensor,
        trace,
        norm_squared,
    })
}

/// The energy-momentum tensor as a coordinate-expressed symmetric 2-tensor
/// field, ready for the tensor-calculus oracle.
pub fn em_coordinate_field(
    psi: &SpinorField,
    g: &MetricField,
    engine: &DiffEngine,
) -> SymTensorField {
    let psi = psi.clone();
    let g = g.clone();
    let engine = *engine;
    SymTensorField::new(psi.chart().clone(), move |x| {
        let em = energy_momentum(&psi, &g, x, &engine).expect("em field evaluation");
        let frame = gram_schmidt_frame(&g.eval_raw(x), x).expect("frame");
        let inv = frame.clone().try_inverse().expect("frame invertible");
        inv.transpose() * em.tensor * inv
    })
}

/// Residual of the T-Killing equation `∇_X ψ = -T(X)·ψ`, normalized by
/// `|ψ|`, maximized over frame directions.
pub fn t_killing_residual(
    psi: &SpinorField,
    g: &MetricField,
    x: &[f64],
    engine: &DiffEngine,
) -> Result<f64> {
    let n = g.dim();
    let psix = psi.eval_raw(x);
    require_nonzero(psi, x, &psix)?;
    let em = energy_momentum(psi, g, x, engine)?;
    let derivs = spinor_covariant_derivatives(psi, g, x, engine)?;
    let mut worst: f64 = 0.0;
    for k in 0..n {
        let row: Vec<f64> = (0..n).map(|j| em.tensor[(k, j)]).collect();
        let residual = &derivs[k] + psi.algebra().multiply(&row, &psix);
        worst = worst.max(residual.norm());
    }
    Ok(worst / psix.norm())
}

/// `¼ S + |T^ψ|²`, the pointwise integrand of the eigenvalue bound.
pub fn hijazi_integrand(
    psi: &SpinorField,
    g: &MetricField,
    x: &[f64],
    engine: &DiffEngine,
) -> Result<f64> {
    let em = energy_momentum(psi, g, x, engine)?;
    let s = tensorcalc::scalar_curvature(g, x, engine)?;
    Ok(0.25 * s + em.norm_squared)
}

/// `n S / (4(n-1))`, the scalar-curvature-only comparison integrand.
pub fn friedrich_integrand(g: &MetricField, x: &[f64], engine: &DiffEngine) -> Result<f64> {
    let n = g.dim() as f64;
    let s = tensorcalc::scalar_curvature(g, x, engine)?;
    Ok(n * s / (4.0 * (n - 1.0)))
}

/// Aggregate report of the trace and divergence identities over a sample
/// set.
#[derive(Clone, Debug)]
pub struct TraceIdentities {
    /// `max |(tr T)² - (¼ S + |T|²)|`.
    pub max_identity_deviation: f64,
    /// Spread of `(tr T)²` across the samples.
    pub trace_sq_spread: f64,
    /// Spread of `tr T` across the samples.
    pub trace_spread: f64,
    /// `max ‖div T‖` across the samples.
    pub max_divergence: f64,
    /// Spread of `|ψ|` across the samples.
    pub length_spread: f64,
    /// Smallest sampled value of `¼ S + |T|²`.
    pub min_integrand: f64,
}

pub fn trace_identities(
    psi: &SpinorField,
    g: &MetricField,
    samples: &[Vec<f64>],
    engine: &DiffEngine,
) -> Result<TraceIdentities> {
    let t_field = em_coordinate_field(psi, g, engine);
    let mut max_identity: f64 = 0.0;
    let mut max_divergence: f64 = 0.0;
    let mut tr2 = (f64::MAX, f64::MIN);
    let mut tr = (f64::MAX, f64::MIN);
    let mut len = (f64::MAX, f64::MIN);
    let mut min_integrand = f64::MAX;
    for x in samples {
        let em = energy_momentum(psi, g, x, engine)?;
        let s = tensorcalc::scalar_curvature(g, x, engine)?;
        let integrand = 0.25 * s + em.norm_squared;
        max_identity = max_identity.max((em.trace * em.trace - integrand).abs());
        min_integrand = min_integrand.min(integrand);
        tr2 = (tr2.0.min(em.trace * em.trace), tr2.1.max(em.trace * em.trace));
        tr = (tr.0.min(em.trace), tr.1.max(em.trace));
        let norm = psi.eval_raw(x).norm();
        len = (len.0.min(norm), len.1.max(norm));
        let div = tensorcalc::divergence_symtensor(&t_field, g, x, engine)?;
        max_divergence = max_divergence.max(div.norm());
    }
    Ok(TraceIdentities {
        max_identity_deviation: max_identity,
        trace_sq_spread: tr2.1 - tr2.0,
        trace_spread: tr.1 - tr.0,
        max_divergence,
        length_spread: len.1 - len.0,
        min_integrand,
    })
}

/// Killing vector candidate `g(V, X) = i (ψ, T(X)·ψ)` in frame components,
/// together with the largest imaginary contamination (zero in exact
/// arithmetic by skew-symmetry of Clifford multiplication).
pub fn killing_vector(
    psi: &SpinorField,
    g: &MetricField,
    x: &[f64],
    engine: &DiffEngine,
) -> Result<(DVector<f64>, f64)> {
    let n = g.dim();
    let psix = psi.eval_raw(x);
    require_nonzero(psi, x, &psix)?;
    let em = energy_momentum(psi, g, x, engine)?;
    let mut v = DVector::zeros(n);
    let mut max_imag: f64 = 0.0;
    for k in 0..n {
        let row: Vec<f64> = (0..n).map(|j| em.tensor[(k, j)]).collect();
        let value = hermitian(&psix, &psi.algebra().multiply(&row, &psix))
            * Complex64::new(0.0, 1.0);
        v[k] = value.re;
        max_imag = max_imag.max(value.im.abs());
    }
    Ok((v, max_imag))
}

/// Symmetrized covariant derivative of the Killing candidate,
/// `½ (g(∇_i V, e_j) + g(∇_j V, e_i))` in frame components; zero for a
/// Killing field.
pub fn killing_defect(
    psi: &SpinorField,
    g: &MetricField,
    x: &[f64],
    engine: &DiffEngine,
) -> Result<DMatrix<f64>> {
    let v_field = VectorField::new(psi.chart().clone(), {
        let psi = psi.clone();
        let g = g.clone();
        let engine = *engine;
        move |y| {
            let (v_frame, _) = killing_vector(&psi, &g, y, &engine).expect("killing vector");
            let frame = gram_schmidt_frame(&g.eval_raw(y), y).expect("frame");
            frame * v_frame
        }
    });
    let nabla = tensorcalc::covariant_derivative_vector(&v_field, g, x, engine)?;
    let gx = g.eval_raw(x);
    let frame = gram_schmidt_frame(&gx, x)?;
    // lower the derivative index pair: D_{ab} = g((∇_a V), ∂_b)
    let lowered = nabla * &gx; // (a, b) slot: Σ_k (∇_a V)^k g_{kb}
    let sym = 0.5 * (&lowered + lowered.transpose());
    Ok(frame.transpose() * sym * frame)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin_chart;
    use crate::clifford::{clifford_algebra, CVector};
    use crate::spin::restrict_parallel_spinor;
    use std::sync::Arc;

    fn uniform_phi(dim: usize) -> CVector {
        CVector::from_element(dim, Complex64::new(1.0, 0.0))
            / Complex64::new((dim as f64).sqrt(), 0.0)
    }

    #[test]
    fn flat_constant_spinor_has_zero_energy_momentum() {
        let b = builtin_chart("flat", &[2.0]).unwrap();
        let alg = Arc::new(clifford_algebra(2).unwrap());
        let psi = crate::spin::SpinorField::constant(b.chart.clone(), alg, uniform_phi(2));
        let engine = DiffEngine::default();
        let em = energy_momentum(&psi, &b.metric, &[0.3, 0.3], &engine).unwrap();
        assert!(em.tensor.norm() < 1e-10);
        let res = t_killing_residual(&psi, &b.metric, &[0.3, 0.3], &engine).unwrap();
        assert!(res < 1e-10);
        let (v, imag) = killing_vector(&psi, &b.metric, &[0.3, 0.3], &engine).unwrap();
        assert!(v.norm() < 1e-10 && imag < 1e-12);
    }

    #[test]
    fn unit_sphere_energy_momentum_is_half_identity() {
        let b = builtin_chart("sphere_polar", &[1.0]).unwrap();
        let imm = b.immersion.as_ref().unwrap();
        let engine = DiffEngine::default();
        let psi = restrict_parallel_spinor(imm, &b.metric, &uniform_phi(2), &engine).unwrap();
        let mut rng = crate::testutil::rng(41);
        for _ in 0..5 {
            let x = b.chart.domain().sample(&mut rng, 0.15);
            let em = energy_momentum(&psi, &b.metric, &x, &engine).unwrap();
            let dev = (&em.tensor - DMatrix::identity(2, 2) * 0.5).amax();
            assert!(dev < 1e-6, "T != Id/2 on the unit sphere: {dev}");
            assert!((em.trace - 1.0).abs() < 1e-6);
            assert!((em.norm_squared - 0.5).abs() < 1e-6);
        }
    }

    #[test]
    fn zero_spinor_is_rejected() {
        let b = builtin_chart("flat", &[2.0]).unwrap();
        let alg = Arc::new(clifford_algebra(2).unwrap());
        let psi = crate::spin::SpinorField::new(
            b.chart.clone(),
            alg,
            |x| {
                CVector::from_vec(vec![
                    Complex64::new(x[0], 0.0),
                    Complex64::new(0.0, 0.0),
                ])
            },
            crate::spin::SpinorOrigin::Explicit,
            1.0,
        );
        let err = energy_momentum(&psi, &b.metric, &[1e-12, 0.0], &DiffEngine::default());
        assert!(matches!(err, Err(crate::error::Error::ZeroSet { .. })));
    }

    #[test]
    fn cauchy_schwarz_between_trace_and_norm() {
        let b = builtin_chart("cylinder_product", &[2.0, 1.0]).unwrap();
        let imm = b.immersion.as_ref().unwrap();
        let engine = DiffEngine::default();
        let psi = restrict_parallel_spinor(imm, &b.metric, &uniform_phi(4), &engine).unwrap();
        let mut rng = crate::testutil::rng(43);
        for _ in 0..5 {
            let x = b.chart.domain().sample(&mut rng, 0.15);
            let em = energy_momentum(&psi, &b.metric, &x, &engine).unwrap();
            let n = 3.0;
            assert!(em.norm_squared + 1e-12 >= em.trace * em.trace / n);
        }
    }
}
