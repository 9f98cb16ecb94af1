//! Numeric differentiation and classical tensor calculus.
//!
//! Everything here is an oracle: Christoffel symbols, curvature tensors and
//! covariant derivatives are produced purely by finite differences of metric
//! components, so closed-form identities elsewhere in the crate can be
//! checked against an independent computation path.
//!
//! Index conventions (the executable arbiter is the round-sphere test
//! `Ric = (n-1) g`, `S = n(n-1)`):
//!
//! * `christoffel` returns `Γ^k_{ij}` indexed `[k][i][j]`, symmetric in
//!   `(i, j)`.
//! * `riemann` returns `R^l_{kij}` indexed `[l][k][i][j]`, the component of
//!   `R(∂_i, ∂_j) ∂_k` along `∂_l`, with
//!   `R(X, Y) = ∇_X ∇_Y - ∇_Y ∇_X - ∇_{[X,Y]}`.
//! * `ricci` contracts `Ric_{kj} = R^i_{kij}` and `scalar_curvature` traces
//!   with the inverse metric.
//!
//! Second derivatives are nested first differences with the same scheme;
//! there is no dedicated Hessian stencil.

use nalgebra::{Cholesky, DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chart::{MetricField, SymTensorField, VectorField};
use crate::error::{Error, Result};

/// Finite-difference scheme.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Two-point central difference, `O(h^2)`.
    Central2nd,
    /// Four-point central difference, `O(h^4)`.
    Central4th,
    /// Richardson combination of central differences at `h` and `h/2`,
    /// `O(h^4)` with a shorter reach than the four-point stencil.
    Richardson,
}

/// A differentiation engine: scheme plus step size.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiffEngine {
    pub scheme: Scheme,
    pub step: f64,
}

impl DiffEngine {
    pub fn central_2nd(step: f64) -> Self {
        Self {
            scheme: Scheme::Central2nd,
            step,
        }
    }

    pub fn central_4th(step: f64) -> Self {
        Self {
            scheme: Scheme::Central4th,
            step,
        }
    }

    pub fn richardson(step: f64) -> Self {
        Self {
            scheme: Scheme::Richardson,
            step,
        }
    }

    /// Farthest stencil offset from the base point.
    pub fn reach(&self) -> f64 {
        match self.scheme {
            Scheme::Central2nd | Scheme::Richardson => self.step,
            Scheme::Central4th => 2.0 * self.step,
        }
    }

    /// Antisymmetric stencil pairs `(offset multiple of step, weight)`:
    /// the derivative is `Σ weight · (f(x + o·h) - f(x - o·h)) / h`.
    /// Evaluating in pairs makes constant fields differentiate to exactly
    /// zero.
    fn stencil_pairs(&self) -> &'static [(f64, f64)] {
        match self.scheme {
            Scheme::Central2nd => &[(1.0, 0.5)],
            Scheme::Central4th => &[(1.0, 8.0 / 12.0), (2.0, -1.0 / 12.0)],
            // (4 D(h/2) - D(h)) / 3 with D the two-point stencil.
            Scheme::Richardson => &[(0.5, 4.0 / 3.0), (1.0, -1.0 / 6.0)],
        }
    }

    /// Directional partial along a coordinate axis, no domain check.
    pub fn partial_raw<T, F>(&self, f: F, x: &[f64], axis: usize) -> T
    where
        T: LinearCombine,
        F: Fn(&[f64]) -> T,
    {
        let mut shifted = x.to_vec();
        let mut acc: Option<T> = None;
        for &(offset, weight) in self.stencil_pairs() {
            shifted[axis] = x[axis] + offset * self.step;
            let plus = f(&shifted);
            shifted[axis] = x[axis] - offset * self.step;
            let minus = f(&shifted);
            let pair = plus.added(&minus.scaled(-1.0)).scaled(weight / self.step);
            acc = Some(match acc {
                None => pair,
                Some(a) => a.added(&pair),
            });
        }
        acc.expect("stencil non-empty")
    }

    /// Like [`partial_raw`](Self::partial_raw) for fallible fields.
    pub fn partial_fallible<T, F>(&self, f: F, x: &[f64], axis: usize) -> Result<T>
    where
        T: LinearCombine,
        F: Fn(&[f64]) -> Result<T>,
    {
        let mut shifted = x.to_vec();
        let mut acc: Option<T> = None;
        for &(offset, weight) in self.stencil_pairs() {
            shifted[axis] = x[axis] + offset * self.step;
            let plus = f(&shifted)?;
            shifted[axis] = x[axis] - offset * self.step;
            let minus = f(&shifted)?;
            let pair = plus.added(&minus.scaled(-1.0)).scaled(weight / self.step);
            acc = Some(match acc {
                None => pair,
                Some(a) => a.added(&pair),
            });
        }
        Ok(acc.expect("stencil non-empty"))
    }
}

impl Default for DiffEngine {
    /// The workhorse: Richardson with step `1e-2`.
    fn default() -> Self {
        Self::richardson(1e-2)
    }
}

/// Values that finite-difference stencils can combine linearly.
pub trait LinearCombine: Clone {
    fn scaled(&self, a: f64) -> Self;
    fn added(&self, other: &Self) -> Self;
}

impl LinearCombine for f64 {
    fn scaled(&self, a: f64) -> Self {
        self * a
    }
    fn added(&self, other: &Self) -> Self {
        self + other
    }
}

impl LinearCombine for DVector<f64> {
    fn scaled(&self, a: f64) -> Self {
        self * a
    }
    fn added(&self, other: &Self) -> Self {
        self + other
    }
}

impl LinearCombine for DMatrix<f64> {
    fn scaled(&self, a: f64) -> Self {
        self * a
    }
    fn added(&self, other: &Self) -> Self {
        self + other
    }
}

impl LinearCombine for DVector<Complex64> {
    fn scaled(&self, a: f64) -> Self {
        self * Complex64::new(a, 0.0)
    }
    fn added(&self, other: &Self) -> Self {
        self + other
    }
}

impl LinearCombine for DMatrix<Complex64> {
    fn scaled(&self, a: f64) -> Self {
        self * Complex64::new(a, 0.0)
    }
    fn added(&self, other: &Self) -> Self {
        self + other
    }
}

impl LinearCombine for Tensor3 {
    fn scaled(&self, a: f64) -> Self {
        Tensor3 {
            n: self.n,
            data: self.data.iter().map(|v| v * a).collect(),
        }
    }
    fn added(&self, other: &Self) -> Self {
        Tensor3 {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

/// Rank-3 tensor with all slots of the chart dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3 {
    n: usize,
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.data[(a * self.n + b) * self.n + c]
    }

    #[inline]
    pub fn set(&mut self, a: usize, b: usize, c: usize, value: f64) {
        self.data[(a * self.n + b) * self.n + c] = value;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Rank-4 tensor with all slots of the chart dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor4 {
    n: usize,
    data: Vec<f64>,
}

impl Tensor4 {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n * n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.data[((a * self.n + b) * self.n + c) * self.n + d]
    }

    #[inline]
    pub fn set(&mut self, a: usize, b: usize, c: usize, d: usize, value: f64) {
        self.data[((a * self.n + b) * self.n + c) * self.n + d] = value;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Domain-checked partial derivative of a matrix-valued field.
pub fn partial_derivative<T, F>(
    f: F,
    chart: &crate::chart::Chart,
    x: &[f64],
    axis: usize,
    engine: &DiffEngine,
) -> Result<T>
where
    T: LinearCombine,
    F: Fn(&[f64]) -> T,
{
    if axis >= chart.dim() {
        return Err(Error::DimensionMismatch {
            expected: chart.dim(),
            got: axis + 1,
        });
    }
    chart.require_inside(x, engine.reach())?;
    Ok(engine.partial_raw(f, x, axis))
}

fn spd_inverse(g: &DMatrix<f64>, point: &[f64]) -> Result<DMatrix<f64>> {
    Cholesky::new(g.clone())
        .map(|c| c.inverse())
        .ok_or_else(|| Error::NotPositiveDefinite {
            point: point.to_vec(),
            detail: String::new(),
        })
}

/// Christoffel symbols `Γ^k_{ij} = g^{kl}(∂_i g_{jl} + ∂_j g_{il} - ∂_l g_{ij})/2`.
pub fn christoffel(g: &MetricField, x: &[f64], engine: &DiffEngine) -> Result<Tensor3> {
    let n = g.dim();
    g.chart().require_inside(x, engine.reach())?;
    let gx = g.eval_raw(x);
    let ginv = spd_inverse(&gx, x)?;
    let dg: Vec<DMatrix<f64>> = (0..n)
        .map(|axis| engine.partial_raw(|y| g.eval_raw(y), x, axis))
        .collect();
    let mut gamma = Tensor3::zeros(n);
    for k in 0..n {
        for i in 0..n {
            for j in i..n {
                let mut sum = 0.0;
                for l in 0..n {
                    sum += ginv[(k, l)] * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]);
                }
                let value = 0.5 * sum;
                gamma.set(k, i, j, value);
                gamma.set(k, j, i, value);
            }
        }
    }
    Ok(gamma)
}

/// Riemann tensor `R^l_{kij}` from `Γ` and its first differences.
pub fn riemann(g: &MetricField, x: &[f64], engine: &DiffEngine) -> Result<Tensor4> {
    let n = g.dim();
    g.chart().require_inside(x, 2.0 * engine.reach())?;
    let gamma = christoffel(g, x, engine)?;
    let dgamma: Vec<Tensor3> = (0..n)
        .map(|axis| engine.partial_fallible(|y| christoffel(g, y, engine), x, axis))
        .collect::<Result<_>>()?;
    let mut r = Tensor4::zeros(n);
    for l in 0..n {
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut value = dgamma[i].get(l, j, k) - dgamma[j].get(l, i, k);
                    for m in 0..n {
                        value += gamma.get(l, i, m) * gamma.get(m, j, k)
                            - gamma.get(l, j, m) * gamma.get(m, i, k);
                    }
                    r.set(l, k, i, j, value);
                }
            }
        }
    }
    Ok(r)
}

/// Ricci tensor `Ric_{kj} = R^i_{kij}`; on the unit sphere `Ric = (n-1) g`.
pub fn ricci(g: &MetricField, x: &[f64], engine: &DiffEngine) -> Result<DMatrix<f64>> {
    let n = g.dim();
    let r = riemann(g, x, engine)?;
    let mut ric = DMatrix::zeros(n, n);
    for k in 0..n {
        for j in 0..n {
            let mut sum = 0.0;
            for i in 0..n {
                sum += r.get(i, k, i, j);
            }
            ric[(k, j)] = sum;
        }
    }
    Ok(ric)
}

/// Scalar curvature `S = g^{kj} Ric_{kj}`.
pub fn scalar_curvature(g: &MetricField, x: &[f64], engine: &DiffEngine) -> Result<f64> {
    let ric = ricci(g, x, engine)?;
    let ginv = spd_inverse(&g.eval_raw(x), x)?;
    Ok((ginv * ric).trace())
}

/// All curvature data of a metric at one point.
#[derive(Clone, Debug)]
pub struct CurvatureAt {
    pub point: Vec<f64>,
    pub christoffel: Tensor3,
    pub riemann: Tensor4,
    pub ricci: DMatrix<f64>,
    pub scalar: f64,
}

pub fn curvature_at(g: &MetricField, x: &[f64], engine: &DiffEngine) -> Result<CurvatureAt> {
    let christoffel = christoffel(g, x, engine)?;
    let riemann = riemann(g, x, engine)?;
    let n = g.dim();
    let mut ric = DMatrix::zeros(n, n);
    for k in 0..n {
        for j in 0..n {
            let mut sum = 0.0;
            for i in 0..n {
                sum += riemann.get(i, k, i, j);
            }
            ric[(k, j)] = sum;
        }
    }
    let ginv = spd_inverse(&g.eval_raw(x), x)?;
    let scalar = (&ginv * &ric).trace();
    Ok(CurvatureAt {
        point: x.to_vec(),
        christoffel,
        riemann,
        ricci: ric,
        scalar,
    })
}

/// Covariant derivative of a symmetric 2-tensor:
/// `(∇_k T)_{ij} = ∂_k T_{ij} - Γ^l_{ki} T_{lj} - Γ^l_{kj} T_{il}`,
/// indexed `[k][i][j]`.
pub fn covariant_derivative_symtensor(
    t: &SymTensorField,
    g: &MetricField,
    x: &[f64],
    engine: &DiffEngine,
) -> Result<Tensor3> {
    let n = g.dim();
    g.chart().require_inside(x, engine.reach())?;
    let gamma = christoffel(g, x, engine)?;
    let tx = t.eval_raw(x);
    let dt: Vec<DMatrix<f64>> = (0..n)
        .map(|axis| engine.partial_raw(|y| t.eval_raw(y), x, axis))
        .collect();
    let mut nabla = Tensor3::zeros(n);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut value = dt[k][(i, j)];
                for l in 0..n {
                    value -= gamma.get(l, k, i) * tx[(l, j)] + gamma.get(l, k, j) * tx[(i, l)];
                }
                nabla.set(k, i, j, value);
            }
        }
    }
    Ok(nabla)
}

/// Divergence `(div T)_j = g^{ik} (∇_i T)_{kj}` as a covector.
pub fn divergence_symtensor(
    t: &SymTensorField,
    g: &MetricField,
    x: &[f64],
    engine: &DiffEngine,
) -> Result<DVector<f64>> {
    let n = g.dim();
    let nabla = covariant_derivative_symtensor(t, g, x, engine)?;
    let ginv = spd_inverse(&g.eval_raw(x), x)?;
    let mut div = DVector::zeros(n);
    for j in 0..n {
        let mut sum = 0.0;
        for i in 0..n {
            for k in 0..n {
                sum += ginv[(i, k)] * nabla.get(i, k, j);
            }
        }
        div[j] = sum;
    }
    Ok(div)
}

/// Codazzi defect `D_{kij} = (∇_i T)_{jk} - (∇_j T)_{ik}`; `T` is a Codazzi
/// tensor at `x` iff this vanishes.
pub fn codazzi_defect(
    t: &SymTensorField,
    g: &MetricField,
    x: &[f64],
    engine: &DiffEngine,
) -> Result<Tensor3> {
    let n = g.dim();
    let nabla = covariant_derivative_symtensor(t, g, x, engine)?;
    let mut defect = Tensor3::zeros(n);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                defect.set(k, i, j, nabla.get(i, j, k) - nabla.get(j, i, k));
            }
        }
    }
    Ok(defect)
}

/// Covariant derivative of a vector field, `M[(i, k)] = (∇_i V)^k`.
pub fn covariant_derivative_vector(
    v: &VectorField,
    g: &MetricField,
    x: &[f64],
    engine: &DiffEngine,
) -> Result<DMatrix<f64>> {
    let n = g.dim();
    g.chart().require_inside(x, engine.reach())?;
    let gamma = christoffel(g, x, engine)?;
    let vx = v.eval_raw(x);
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        let dv: DVector<f64> = engine.partial_raw(|y| v.eval_raw(y), x, i);
        for k in 0..n {
            let mut value = dv[k];
            for l in 0..n {
                value += gamma.get(k, i, l) * vx[l];
            }
            out[(i, k)] = value;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::{BoxDomain, Chart};
    use std::sync::Arc;

    fn flat_chart(n: usize, half_width: f64) -> Arc<Chart> {
        let bounds = vec![(-half_width, half_width); n];
        Arc::new(Chart::new(BoxDomain::new(bounds).unwrap(), "flat test chart").unwrap())
    }

    /// Polar chart of the round sphere of radius `r`, away from the poles.
    fn sphere_metric(r: f64) -> MetricField {
        let chart = Arc::new(
            Chart::new(
                BoxDomain::new(vec![(0.1, std::f64::consts::PI - 0.1), (-1.0, 1.0)]).unwrap(),
                "sphere test chart",
            )
            .unwrap(),
        );
        MetricField::new(chart, move |x| {
            DMatrix::from_diagonal(&DVector::from_vec(vec![
                r * r,
                r * r * x[0].sin().powi(2),
            ]))
        })
    }

    #[test]
    fn derivative_of_quadratic_is_exact() {
        let engine = DiffEngine::central_2nd(1e-4);
        let d = engine.partial_raw(|x: &[f64]| x[0] * x[0], &[3.0], 0);
        assert!((d - 6.0).abs() < 1e-8);
    }

    #[test]
    fn derivative_of_sin_squared() {
        // d/dθ sin²θ = 2 sinθ cosθ = 1 at θ = π/4.
        let engine = DiffEngine::default();
        let d = engine.partial_raw(|x: &[f64]| x[0].sin().powi(2), &[std::f64::consts::FRAC_PI_4], 0);
        assert!((d - 1.0).abs() < 1e-7, "got {d}");
    }

    #[test]
    fn derivative_of_constant_vanishes() {
        for engine in [
            DiffEngine::central_2nd(1e-4),
            DiffEngine::central_4th(1e-3),
            DiffEngine::default(),
        ] {
            let d = engine.partial_raw(|_: &[f64]| 4.25, &[0.3], 0);
            assert_eq!(d, 0.0);
        }
    }

    #[test]
    fn schemes_agree_within_expected_error() {
        // Second-order and Richardson estimates agree within 10x the coarser
        // scheme's truncation error.
        let f = |x: &[f64]| (2.0 * x[0]).sin() * x[0].exp();
        let coarse = DiffEngine::central_2nd(1e-4);
        let fine = DiffEngine::default();
        let x = [0.4];
        let d2 = coarse.partial_raw(f, &x, 0);
        let dr = fine.partial_raw(f, &x, 0);
        // truncation of central2 at h=1e-4 on this f is ~1e-8
        assert!((d2 - dr).abs() < 1e-7, "disagreement {}", (d2 - dr).abs());
    }

    #[test]
    fn partial_derivative_checks_domain() {
        let chart = flat_chart(1, 1.0);
        let engine = DiffEngine::default();
        let err = partial_derivative(|x: &[f64]| x[0], &chart, &[0.995], 0, &engine);
        assert!(err.is_err());
    }

    #[test]
    fn euclidean_christoffel_vanishes() {
        let chart = flat_chart(2, 2.0);
        let g = MetricField::new(chart, |_| DMatrix::identity(2, 2));
        let gamma = christoffel(&g, &[0.3, -0.4], &DiffEngine::default()).unwrap();
        assert!(gamma.max_abs() < 1e-10);
    }

    #[test]
    fn sphere_christoffel_classical_values() {
        let g = sphere_metric(1.0);
        let x = [std::f64::consts::FRAC_PI_4, 0.2];
        let gamma = christoffel(&g, &x, &DiffEngine::default()).unwrap();
        // Γ^θ_{φφ} = -sinθ cosθ = -1/2, Γ^φ_{θφ} = cotθ = 1 at θ = π/4.
        assert!((gamma.get(0, 1, 1) + 0.5).abs() < 1e-8);
        assert!((gamma.get(1, 0, 1) - 1.0).abs() < 1e-8);
        assert!(gamma.get(1, 1, 0) == gamma.get(1, 0, 1));
    }

    #[test]
    fn polar_like_metric_log_derivative() {
        // diag(1, x₁²) on x₁ > 0: Γ^2_{12} = ∂₁ log(x₁²) / 2 = 1/x₁.
        let chart = Arc::new(
            Chart::new(
                BoxDomain::new(vec![(0.5, 4.0), (-1.0, 1.0)]).unwrap(),
                "polar-like",
            )
            .unwrap(),
        );
        let g = MetricField::new(chart, |x| {
            DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, x[0] * x[0]]))
        });
        let gamma = christoffel(&g, &[2.0, 0.0], &DiffEngine::default()).unwrap();
        assert!((gamma.get(1, 0, 1) - 0.5).abs() < 1e-9);
    }

    #[test]
    fn flat_torus_curvature_vanishes() {
        let chart = flat_chart(2, 3.0);
        let g = MetricField::new(chart, |_| DMatrix::identity(2, 2));
        let c = curvature_at(&g, &[0.7, 0.7], &DiffEngine::default()).unwrap();
        assert!(c.riemann.max_abs() < 1e-8);
        assert!(c.scalar.abs() < 1e-8);
    }

    #[test]
    fn unit_sphere_normalization() {
        let g = sphere_metric(1.0);
        let x = [1.0, 0.3];
        let c = curvature_at(&g, &x, &DiffEngine::default()).unwrap();
        assert!((c.scalar - 2.0).abs() < 1e-6, "S = {}", c.scalar);
        // Ric = (n-1) g
        let diff = &c.ricci - g.eval_raw(&x);
        assert!(diff.norm() < 1e-6);
    }

    #[test]
    fn radius_two_sphere_scalar_curvature() {
        let g = sphere_metric(2.0);
        let s = scalar_curvature(&g, &[0.9, -0.2], &DiffEngine::default()).unwrap();
        assert!((s - 0.5).abs() < 1e-6, "S = {s}");
    }

    #[test]
    fn riemann_symmetries_on_sphere() {
        let g = sphere_metric(1.0);
        let x = [0.8, 0.5];
        let engine = DiffEngine::default();
        let r = riemann(&g, &x, &engine).unwrap();
        let gx = g.eval_raw(&x);
        let n = 2;
        // lowered tensor R_{mkij} = g_{ml} R^l_{kij}
        let mut low = Tensor4::zeros(n);
        for m in 0..n {
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        let mut v = 0.0;
                        for l in 0..n {
                            v += gx[(m, l)] * r.get(l, k, i, j);
                        }
                        low.set(m, k, i, j, v);
                    }
                }
            }
        }
        for m in 0..n {
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        let v = low.get(m, k, i, j);
                        assert!((v + low.get(m, k, j, i)).abs() < 1e-6);
                        assert!((v + low.get(k, m, i, j)).abs() < 1e-6);
                        assert!((v - low.get(i, j, m, k)).abs() < 1e-6);
                    }
                }
            }
        }
    }

    #[test]
    fn first_bianchi_on_sphere() {
        let g = sphere_metric(1.0);
        let engine = DiffEngine::default();
        let mut rng = crate::testutil::rng(7);
        for _ in 0..50 {
            let x = g.chart().domain().sample(&mut rng, 0.1);
            let r = riemann(&g, &x, &engine).unwrap();
            let n = 2;
            for l in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            let cyclic = r.get(l, k, i, j) + r.get(l, i, j, k) + r.get(l, j, k, i);
                            assert!(cyclic.abs() < 1e-6);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn metric_is_parallel() {
        let g = sphere_metric(1.0);
        let t = SymTensorField::new(g.chart().clone(), {
            let g = g.clone();
            move |x| g.eval_raw(x)
        });
        let nabla =
            covariant_derivative_symtensor(&t, &g, &[0.9, 0.1], &DiffEngine::default()).unwrap();
        assert!(nabla.max_abs() < 1e-8);
    }

    #[test]
    fn scaled_metric_is_parallel() {
        let g = sphere_metric(1.0);
        let t = SymTensorField::new(g.chart().clone(), {
            let g = g.clone();
            move |x| 0.5 * g.eval_raw(x)
        });
        let x = [1.1, -0.3];
        let nabla = covariant_derivative_symtensor(&t, &g, &x, &DiffEngine::default()).unwrap();
        assert!(nabla.max_abs() < 1e-8);
        let div = divergence_symtensor(&t, &g, &x, &DiffEngine::default()).unwrap();
        assert!(div.norm() < 1e-7);
    }

    #[test]
    fn flat_tensor_derivative_and_divergence() {
        let chart = flat_chart(2, 2.0);
        let g = MetricField::new(chart.clone(), |_| DMatrix::identity(2, 2));
        let engine = DiffEngine::default();

        // T₁₁ = x₂, rest zero: (∇₂T)₁₁ = 1 is the only entry.
        let t = SymTensorField::new(chart.clone(), |x| {
            let mut m = DMatrix::zeros(2, 2);
            m[(0, 0)] = x[1];
            m
        });
        let nabla = covariant_derivative_symtensor(&t, &g, &[0.2, 0.4], &engine).unwrap();
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    let expected = if (k, i, j) == (1, 0, 0) { 1.0 } else { 0.0 };
                    assert!((nabla.get(k, i, j) - expected).abs() < 1e-9);
                }
            }
        }
        // Codazzi defect: (∇₂T)₁₁ - (∇₁T)₂₁ = 1 in slot D_{1 2 1} (k=0,i=1,j=0).
        let defect = codazzi_defect(&t, &g, &[0.2, 0.4], &engine).unwrap();
        assert!((defect.get(0, 1, 0) - 1.0).abs() < 1e-9);
        assert!((defect.get(0, 0, 1) + 1.0).abs() < 1e-9);

        // T₁₁ = x₁: (div T)₁ = 1.
        let t = SymTensorField::new(chart, |x| {
            let mut m = DMatrix::zeros(2, 2);
            m[(0, 0)] = x[0];
            m
        });
        let div = divergence_symtensor(&t, &g, &[0.2, 0.4], &engine).unwrap();
        assert!((div[0] - 1.0).abs() < 1e-9);
        assert!(div[1].abs() < 1e-9);
    }

    #[test]
    fn vector_covariant_derivative_flat() {
        let chart = flat_chart(2, 2.0);
        let g = MetricField::new(chart.clone(), |_| DMatrix::identity(2, 2));
        let v = VectorField::new(chart, |x| DVector::from_vec(vec![x[1], 0.0]));
        let m = covariant_derivative_vector(&v, &g, &[0.1, 0.2], &DiffEngine::default()).unwrap();
        assert!((m[(1, 0)] - 1.0).abs() < 1e-9);
        assert!(m[(0, 0)].abs() + m[(0, 1)].abs() + m[(1, 1)].abs() < 1e-9);
    }
}
