//! Spinor fields on charts, the spin connection, the Dirac operator, and
//! the restriction of ambient parallel spinors to hypersurfaces.
//!
//! Spinor components are always expressed in the chart's Gram-Schmidt frame
//! gauge (see [`crate::chart::orthonormal_frame`]); gauge covariance is
//! exercised only through tensorial outputs such as the energy-momentum
//! tensor, which are gauge independent.

pub mod curvature;
pub mod em;
pub mod restriction;

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::chart::{gram_schmidt_frame, Chart, Immersion, MetricField, SymTensorField};
use crate::clifford::{CliffordAlgebra, CVector};
use crate::error::{Error, Result};
use crate::tensorcalc::{christoffel, DiffEngine, Tensor3};

pub use restriction::restrict_parallel_spinor;

/// How a spinor field was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinorOrigin {
    /// Components supplied directly.
    Explicit,
    /// Restriction of an ambient constant spinor along an immersion.
    Restricted,
}

type SpinorFn = dyn Fn(&[f64]) -> CVector + Send + Sync;

/// A chart-local spinor field in the Gram-Schmidt frame gauge.
#[derive(Clone)]
pub struct SpinorField {
    chart: Arc<Chart>,
    algebra: Arc<CliffordAlgebra>,
    eval: Arc<SpinorFn>,
    origin: SpinorOrigin,
    /// Scale used by the zero-set threshold of the energy-momentum tensor.
    reference_norm: f64,
}

impl SpinorField {
    pub fn new(
        chart: Arc<Chart>,
        algebra: Arc<CliffordAlgebra>,
        eval: impl Fn(&[f64]) -> CVector + Send + Sync + 'static,
        origin: SpinorOrigin,
        reference_norm: f64,
    ) -> Self {
        Self {
            chart,
            algebra,
            eval: Arc::new(eval),
            origin,
            reference_norm,
        }
    }

    /// A constant spinor field (meaningful on flat charts, where the
    /// Gram-Schmidt gauge is constant too).
    pub fn constant(chart: Arc<Chart>, algebra: Arc<CliffordAlgebra>, value: CVector) -> Self {
        let reference = crate::clifford::norm(&value);
        Self::new(
            chart,
            algebra,
            move |_| value.clone(),
            SpinorOrigin::Explicit,
            reference,
        )
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn algebra(&self) -> &Arc<CliffordAlgebra> {
        &self.algebra
    }

    pub fn origin(&self) -> SpinorOrigin {
        self.origin
    }

    pub fn reference_norm(&self) -> f64 {
        self.reference_norm
    }

    pub fn eval_raw(&self, x: &[f64]) -> CVector {
        (self.eval)(x)
    }

    pub fn at(&self, x: &[f64]) -> Result<CVector> {
        self.chart.require_inside(x, 0.0)?;
        Ok(self.eval_raw(x))
    }
}

/// Connection coefficients `ω_{ij}(∂_a) = g(∇_{∂_a} e_i, e_j)` of the
/// Gram-Schmidt frame along coordinate directions, indexed `[a][i][j]` and
/// antisymmetrized in `(i, j)`.
pub fn spin_connection_coord(
    g: &MetricField,
    x: &[f64],
    engine: &DiffEngine,
) -> Result<Tensor3> {
    let n = g.dim();
    g.chart().require_inside(x, engine.reach())?;
    let gx = g.eval_raw(x);
    let frame = gram_schmidt_frame(&gx, x)?;
    let gamma = christoffel(g, x, engine)?;
    let mut omega = Tensor3::zeros(n);
    for a in 0..n {
        let dframe: DMatrix<f64> = engine.partial_raw(
            |y| gram_schmidt_frame(&g.eval_raw(y), y).expect("frame on stencil"),
            x,
            a,
        );
        // ∇_{∂_a} e_i, coordinate components
        let mut nabla = DMatrix::zeros(n, n);
        for i in 0..n {
            for b in 0..n {
                let mut value = dframe[(b, i)];
                for c in 0..n {
                    value += gamma.get(b, a, c) * frame[(c, i)];
                }
                nabla[(b, i)] = value;
            }
        }
        let lowered = frame.transpose() * &gx * nabla; // (j, i) slot order
        for i in 0..n {
            for j in (i + 1)..n {
                let value = 0.5 * (lowered[(j, i)] - lowered[(i, j)]);
                omega.set(a, i, j, value);
                omega.set(a, j, i, -value);
            }
        }
    }
    Ok(omega)
}

/// Frame-direction connection coefficients `ω_{ij}(e_k)`, indexed
/// `[k][i][j]`.
pub fn spin_connection(g: &MetricField, x: &[f64], engine: &DiffEngine) -> Result<Tensor3> {
    let n = g.dim();
    let coord = spin_connection_coord(g, x, engine)?;
    let frame = gram_schmidt_frame(&g.eval_raw(x), x)?;
    let mut omega = Tensor3::zeros(n);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut value = 0.0;
                for a in 0..n {
                    value += frame[(a, k)] * coord.get(a, i, j);
                }
                omega.set(k, i, j, value);
            }
        }
    }
    Ok(omega)
}

/// Independent Koszul-formula path for the same coefficients, using only
/// frame brackets: `2 ω_{ij}(e_k) = g([e_k,e_i],e_j) - g([e_k,e_j],e_i)
/// - g([e_i,e_j],e_k)`.
pub fn spin_connection_koszul(
    g: &MetricField,
    x: &[f64],
    engine: &DiffEngine,
) -> Result<Tensor3> {
    let n = g.dim();
    g.chart().require_inside(x, engine.reach())?;
    let gx = g.eval_raw(x);
    let frame = gram_schmidt_frame(&gx, x)?;
    let dframe: Vec<DMatrix<f64>> = (0..n)
        .map(|a| {
            engine.partial_raw(
                |y| gram_schmidt_frame(&g.eval_raw(y), y).expect("frame on stencil"),
                x,
                a,
            )
        })
        .collect();
    // [e_a, e_b]^c = e_a^m ∂_m e_b^c - e_b^m ∂_m e_a^c
    let bracket = |a: usize, b: usize| -> nalgebra::DVector<f64> {
        let mut out = nalgebra::DVector::zeros(n);
        for c in 0..n {
            let mut value = 0.0;
            for m in 0..n {
                value += frame[(m, a)] * dframe[m][(c, b)] - frame[(m, b)] * dframe[m][(c, a)];
            }
            out[c] = value;
        }
        out
    };
    let pair = |v: &nalgebra::DVector<f64>, j: usize| -> f64 {
        let mut value = 0.0;
        for p in 0..n {
            for q in 0..n {
                value += v[p] * gx[(p, q)] * frame[(q, j)];
            }
        }
        value
    };
    let mut omega = Tensor3::zeros(n);
    for k in 0..n {
        for i in 0..n {
            for j in (i + 1)..n {
                let value = 0.5
                    * (pair(&bracket(k, i), j) - pair(&bracket(k, j), i)
                        - pair(&bracket(i, j), k));
                omega.set(k, i, j, value);
                omega.set(k, j, i, -value);
            }
        }
    }
    Ok(omega)
}

/// `∇_{∂_a} ψ = ∂_a ψ + ¼ Σ_{ij} ω_{ij}(∂_a) γ_i γ_j ψ` in the frame gauge.
pub fn spinor_covariant_derivative_coord(
    psi: &SpinorField,
    g: &MetricField,
    x: &[f64],
    axis: usize,
    engine: &DiffEngine,
) -> Result<CVector> {
    let omega = spin_connection_coord(g, x, engine)?;
    let dpsi: CVector = engine.partial_raw(|y| psi.eval_raw(y), x, axis);
    let psix = psi.eval_raw(x);
    Ok(dpsi + connection_term(psi.algebra(), &omega, axis, &psix))
}

fn connection_term(
    algebra: &CliffordAlgebra,
    omega: &Tensor3,
    slot: usize,
    psi: &CVector,
) -> CVector {
    let n = omega.dim();
    let mut w = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            w[(i, j)] = omega.get(slot, i, j);
        }
    }
    // ¼ Σ ω_{ij} γ_i γ_j = -τ(ω) with τ the bivector representation.
    let term = algebra.bivector_rep(&w) * Complex64::new(-1.0, 0.0);
    term * psi
}

/// Covariant derivatives `∇_{e_k} ψ` along all frame directions at once.
pub fn spinor_covariant_derivatives(
    psi: &SpinorField,
    g: &MetricField,
    x: &[f64],
    engine: &DiffEngine,
) -> Result<Vec<CVector>> {
    let n = g.dim();
    let gx = g.eval_raw(x);
    let frame = gram_schmidt_frame(&gx, x)?;
    let omega = spin_connection_coord(g, x, engine)?;
    let psix = psi.eval_raw(x);
    let coord_derivs: Vec<CVector> = (0..n)
        .map(|a| {
            let dpsi: CVector = engine.partial_raw(|y| psi.eval_raw(y), x, a);
            dpsi + connection_term(psi.algebra(), &omega, a, &psix)
        })
        .collect();
    Ok((0..n)
        .map(|k| {
            let mut out = CVector::zeros(psi.algebra().spinor_dim());
            for a in 0..n {
                out += &coord_derivs[a] * Complex64::new(frame[(a, k)], 0.0);
            }
            out
        })
        .collect())
}

/// Dirac operator `D ψ = Σ_k γ_k ∇_{e_k} ψ` in the frame gauge.
pub fn dirac(psi: &SpinorField, g: &MetricField, x: &[f64], engine: &DiffEngine) -> Result<CVector> {
    let n = g.dim();
    let derivs = spinor_covariant_derivatives(psi, g, x, engine)?;
    let mut out = CVector::zeros(psi.algebra().spinor_dim());
    for k in 0..n {
        out += psi.algebra().gamma(k) * &derivs[k];
    }
    Ok(out)
}

/// Residual of `∇_{e_k} ψ + ½ h(e_k) · ψ = 0` over all frame directions,
/// with `∇` the intrinsic spin connection. Near zero this certifies that
/// the restricted field satisfies the hypersurface derivative identity.
pub fn gauss_formula_residual_with(
    psi: &SpinorField,
    g: &MetricField,
    h: &SymTensorField,
    x: &[f64],
    engine: &DiffEngine,
) -> Result<f64> {
    let n = g.dim();
    let gx = g.eval_raw(x);
    let frame = gram_schmidt_frame(&gx, x)?;
    let h_frame = frame.transpose() * h.eval_raw(x) * &frame;
    let derivs = spinor_covariant_derivatives(psi, g, x, engine)?;
    let psix = psi.eval_raw(x);
    let mut worst: f64 = 0.0;
    for k in 0..n {
        let hk: Vec<f64> = (0..n).map(|j| h_frame[(k, j)]).collect();
        let residual = &derivs[k]
            + psi.algebra().multiply(&hk, &psix) * Complex64::new(0.5, 0.0);
        worst = worst.max(crate::clifford::norm(&residual));
    }
    Ok(worst / psix.norm().max(1e-300))
}

/// Self-contained form of the residual: restricts the ambient constant
/// spinor along the immersion and differentiates the induced data.
pub fn gauss_formula_residual(
    imm: &Immersion,
    phi: &CVector,
    x: &[f64],
    engine: &DiffEngine,
) -> Result<f64> {
    let g = crate::catalog::induced_metric(imm, engine);
    let h = crate::catalog::second_fundamental_form(imm, engine);
    let psi = restrict_parallel_spinor(imm, &g, phi, engine)?;
    gauss_formula_residual_with(&psi, &g, &h, x, engine)
}

/// Checks `D(X·ψ) = (∇ X)·ψ + X·Dψ`-type compatibility indirectly through
/// linearity of the Dirac operator; used by module tests.
pub fn dirac_is_linear(
    psi: &SpinorField,
    phi: &SpinorField,
    g: &MetricField,
    x: &[f64],
    engine: &DiffEngine,
    a: Complex64,
    b: Complex64,
) -> Result<f64> {
    let combo = SpinorField::new(
        psi.chart().clone(),
        psi.algebra().clone(),
        {
            let psi = psi.clone();
            let phi = phi.clone();
            move |y| psi.eval_raw(y) * a + phi.eval_raw(y) * b
        },
        SpinorOrigin::Explicit,
        psi.reference_norm(),
    );
    let lhs = dirac(&combo, g, x, engine)?;
    let rhs = dirac(psi, g, x, engine)? * a + dirac(phi, g, x, engine)? * b;
    Ok((lhs - rhs).camax())
}

/// Error if the field is below the zero-set threshold at `x`.
pub(crate) fn require_nonzero(psi: &SpinorField, x: &[f64], value: &CVector) -> Result<()> {
    let threshold = 1e-8 * psi.reference_norm();
    let norm = value.norm();
    if norm < threshold {
        return Err(Error::ZeroSet {
            point: x.to_vec(),
            norm,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin_chart;
    use crate::clifford::clifford_algebra;

    #[test]
    fn flat_spin_connection_vanishes() {
        let b = builtin_chart("flat", &[2.0]).unwrap();
        let omega = spin_connection(&b.metric, &[0.4, -0.2], &DiffEngine::default()).unwrap();
        assert!(omega.max_abs() < 1e-12);
    }

    #[test]
    fn sphere_connection_dual_paths_agree() {
        let b = builtin_chart("sphere_polar", &[1.0]).unwrap();
        let engine = DiffEngine::default();
        let x = [std::f64::consts::FRAC_PI_4, 0.3];
        let direct = spin_connection(&b.metric, &x, &engine).unwrap();
        let koszul = spin_connection_koszul(&b.metric, &x, &engine).unwrap();
        let mut gap: f64 = 0.0;
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    gap = gap.max((direct.get(k, i, j) - koszul.get(k, i, j)).abs());
                }
            }
        }
        assert!(gap < 1e-6, "paths disagree by {gap}");
        // classical magnitude: |ω_{12}(e_2)| = cot θ = 1 at θ = π/4
        assert!((direct.get(1, 0, 1).abs() - 1.0).abs() < 1e-6);
        // exact antisymmetry by construction
        assert_eq!(direct.get(1, 0, 1), -direct.get(1, 1, 0));
    }

    #[test]
    fn constant_spinor_flat_derivative_vanishes() {
        let b = builtin_chart("flat", &[2.0]).unwrap();
        let alg = Arc::new(clifford_algebra(2).unwrap());
        let value = CVector::from_vec(vec![
            Complex64::new(0.6, 0.1),
            Complex64::new(-0.3, 0.8),
        ]);
        let psi = SpinorField::constant(b.chart.clone(), alg, value);
        let engine = DiffEngine::default();
        let x = [0.3, 0.3];
        for axis in 0..2 {
            let d = spinor_covariant_derivative_coord(&psi, &b.metric, &x, axis, &engine).unwrap();
            assert!(d.camax() < 1e-12);
        }
        let dpsi = dirac(&psi, &b.metric, &x, &engine).unwrap();
        assert!(dpsi.camax() < 1e-12);
    }

    #[test]
    fn dirac_linearity() {
        let b = builtin_chart("flat", &[2.0]).unwrap();
        let alg = Arc::new(clifford_algebra(2).unwrap());
        let psi = SpinorField::constant(
            b.chart.clone(),
            alg.clone(),
            CVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]),
        );
        let phi = SpinorField::new(
            b.chart.clone(),
            alg,
            |x| {
                CVector::from_vec(vec![
                    Complex64::new(x[0], x[1]),
                    Complex64::new(x[1] * x[1], -x[0]),
                ])
            },
            SpinorOrigin::Explicit,
            1.0,
        );
        let gap = dirac_is_linear(
            &psi,
            &phi,
            &b.metric,
            &[0.2, -0.5],
            &DiffEngine::default(),
            Complex64::new(1.3, -0.4),
            Complex64::new(-0.2, 2.0),
        )
        .unwrap();
        assert!(gap < 1e-9, "Dirac nonlinear by {gap}");
    }
}
