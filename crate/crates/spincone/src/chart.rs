//! Coordinate charts and the point-indexed fields living on them.
//!
//! A [`Chart`] is an open axis-aligned box in `R^n`. All geometry in this
//! crate is chart-local: fields are plain functions of the coordinates, and
//! every evaluation happens strictly inside the box. Charts carry no
//! transition functions and no global topology.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};

/// Open axis-aligned box domain.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxDomain {
    bounds: Vec<(f64, f64)>,
}

impl BoxDomain {
    pub fn new(bounds: Vec<(f64, f64)>) -> Result<Self> {
        for (axis, &(lo, hi)) in bounds.iter().enumerate() {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::EmptyInterval { axis, lo, hi });
            }
        }
        Ok(Self { bounds })
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    /// Strict interior test with a safety reach on every axis.
    pub fn contains_with_reach(&self, x: &[f64], reach: f64) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(&self.bounds)
                .all(|(&xi, &(lo, hi))| xi - reach > lo && xi + reach < hi)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.contains_with_reach(x, 0.0)
    }

    pub fn center(&self) -> Vec<f64> {
        self.bounds.iter().map(|&(lo, hi)| 0.5 * (lo + hi)).collect()
    }

    /// Uniform sample at least `margin` away from every face.
    pub fn sample<R: Rng>(&self, rng: &mut R, margin: f64) -> Vec<f64> {
        self.bounds
            .iter()
            .map(|&(lo, hi)| {
                let a = lo + margin;
                let b = hi - margin;
                debug_assert!(a < b, "margin {margin} too large for [{lo}, {hi}]");
                rng.random_range(a..b)
            })
            .collect()
    }

    /// Uniform sample with a per-axis margin of `frac` times the axis
    /// extent, floored at `min_abs`. Keeps difference stencils both inside
    /// the box and away from coordinate degeneracy at its faces.
    pub fn sample_fraction<R: Rng>(&self, rng: &mut R, frac: f64, min_abs: f64) -> Vec<f64> {
        self.bounds
            .iter()
            .map(|&(lo, hi)| {
                let margin = (frac * (hi - lo)).max(min_abs);
                rng.random_range((lo + margin)..(hi - margin))
            })
            .collect()
    }
}

/// A coordinate patch: dimension, open box domain and a display label.
#[derive(Clone, Debug)]
pub struct Chart {
    dim: usize,
    domain: BoxDomain,
    label: String,
}

impl Chart {
    pub fn new(domain: BoxDomain, label: impl Into<String>) -> Result<Self> {
        let dim = domain.dim();
        if dim == 0 {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        Ok(Self {
            dim,
            domain,
            label: label.into(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn center(&self) -> Vec<f64> {
        self.domain.center()
    }

    /// Errors unless `x` (with a reach of `reach` on every axis) stays inside.
    pub fn require_inside(&self, x: &[f64], reach: f64) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        for (axis, (&xi, &(lo, hi))) in x.iter().zip(self.domain.bounds()).enumerate() {
            if !(xi - reach > lo && xi + reach < hi) {
                return Err(Error::OutsideDomain {
                    label: self.label.clone(),
                    point: x.to_vec(),
                    axis,
                    reach,
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (dim {})", self.label, self.dim)
    }
}

type MatrixFn = dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync;
type VectorFn = dyn Fn(&[f64]) -> DVector<f64> + Send + Sync;

/// Point-indexed symmetric positive definite metric `g(x)`.
#[derive(Clone)]
pub struct MetricField {
    chart: Arc<Chart>,
    eval: Arc<MatrixFn>,
}

impl MetricField {
    pub fn new(
        chart: Arc<Chart>,
        eval: impl Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            chart,
            eval: Arc::new(eval),
        }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    /// Evaluate without a domain check. The closure must be total on (a
    /// neighbourhood of) the open box; stencil evaluations rely on this.
    pub fn eval_raw(&self, x: &[f64]) -> DMatrix<f64> {
        (self.eval)(x)
    }

    pub fn at(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        self.chart.require_inside(x, 0.0)?;
        Ok(self.eval_raw(x))
    }
}

/// Point-indexed symmetric 2-tensor (a bilinear form in coordinates).
#[derive(Clone)]
pub struct SymTensorField {
    chart: Arc<Chart>,
    eval: Arc<MatrixFn>,
}

impl SymTensorField {
    pub fn new(
        chart: Arc<Chart>,
        eval: impl Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            chart,
            eval: Arc::new(eval),
        }
    }

    pub fn zero(chart: Arc<Chart>) -> Self {
        let n = chart.dim();
        Self::new(chart, move |_| DMatrix::zeros(n, n))
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn eval_raw(&self, x: &[f64]) -> DMatrix<f64> {
        (self.eval)(x)
    }

    pub fn at(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        self.chart.require_inside(x, 0.0)?;
        Ok(self.eval_raw(x))
    }
}

/// Point-indexed endomorphism of the tangent space (a matrix acting on
/// coordinate components).
#[derive(Clone)]
pub struct EndoField {
    chart: Arc<Chart>,
    eval: Arc<MatrixFn>,
}

impl EndoField {
    pub fn new(
        chart: Arc<Chart>,
        eval: impl Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            chart,
            eval: Arc::new(eval),
        }
    }

    /// The endomorphism metrically equivalent to a symmetric 2-tensor:
    /// `E = g^{-1} T`, so that `g(E(X), Y) = T(X, Y)`.
    pub fn from_sym_tensor(tensor: &SymTensorField, metric: &MetricField) -> Self {
        let t = tensor.clone();
        let g = metric.clone();
        Self::new(tensor.chart.clone(), move |x| {
            let gx = g.eval_raw(x);
            let tx = t.eval_raw(x);
            gx.try_inverse().expect("metric invertible on its chart") * tx
        })
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn eval_raw(&self, x: &[f64]) -> DMatrix<f64> {
        (self.eval)(x)
    }

    pub fn at(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        self.chart.require_inside(x, 0.0)?;
        Ok(self.eval_raw(x))
    }
}

/// Point-indexed tangent vector field in coordinate components.
#[derive(Clone)]
pub struct VectorField {
    chart: Arc<Chart>,
    eval: Arc<VectorFn>,
}

impl VectorField {
    pub fn new(
        chart: Arc<Chart>,
        eval: impl Fn(&[f64]) -> DVector<f64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            chart,
            eval: Arc::new(eval),
        }
    }

    /// The coordinate field `∂_axis`.
    pub fn coordinate(chart: Arc<Chart>, axis: usize) -> Self {
        let n = chart.dim();
        assert!(axis < n);
        Self::new(chart, move |_| {
            let mut v = DVector::zeros(n);
            v[axis] = 1.0;
            v
        })
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn eval_raw(&self, x: &[f64]) -> DVector<f64> {
        (self.eval)(x)
    }

    pub fn at(&self, x: &[f64]) -> Result<DVector<f64>> {
        self.chart.require_inside(x, 0.0)?;
        Ok(self.eval_raw(x))
    }
}

/// Isometric immersion of a chart into flat `R^{n+1}` with a unit normal.
#[derive(Clone)]
pub struct Immersion {
    chart: Arc<Chart>,
    ambient_dim: usize,
    eval: Arc<VectorFn>,
    normal: Arc<VectorFn>,
}

impl Immersion {
    pub fn new(
        chart: Arc<Chart>,
        eval: impl Fn(&[f64]) -> DVector<f64> + Send + Sync + 'static,
        normal: impl Fn(&[f64]) -> DVector<f64> + Send + Sync + 'static,
    ) -> Self {
        let ambient_dim = chart.dim() + 1;
        Self {
            chart,
            ambient_dim,
            eval: Arc::new(eval),
            normal: Arc::new(normal),
        }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn position(&self, x: &[f64]) -> DVector<f64> {
        (self.eval)(x)
    }

    pub fn unit_normal(&self, x: &[f64]) -> DVector<f64> {
        (self.normal)(x)
    }
}

/// Gram-Schmidt of the coordinate basis against a metric value, in fixed
/// index order. This is the one frame gauge of the crate: columns `e_1..e_n`
/// satisfy `E^T g E = I`, and orientation follows the coordinate order.
pub fn gram_schmidt_frame(g: &DMatrix<f64>, point: &[f64]) -> Result<DMatrix<f64>> {
    let n = g.nrows();
    let mut frame = DMatrix::<f64>::identity(n, n);
    for k in 0..n {
        let mut w = frame.column(k).clone_owned();
        for i in 0..k {
            let ei = frame.column(i).clone_owned();
            let proj = (ei.transpose() * g * &w)[(0, 0)];
            w -= proj * &ei;
        }
        let norm2 = (w.transpose() * g * &w)[(0, 0)];
        if !(norm2 > 1e-14) {
            return Err(Error::NotPositiveDefinite {
                point: point.to_vec(),
                detail: format!(" (Gram-Schmidt breakdown at column {k})"),
            });
        }
        w /= norm2.sqrt();
        frame.set_column(k, &w);
    }
    Ok(frame)
}

/// Positively oriented orthonormal frame of `g` at `x`, columns in
/// coordinate components.
pub fn orthonormal_frame(g: &MetricField, x: &[f64]) -> Result<DMatrix<f64>> {
    g.chart().require_inside(x, 0.0)?;
    gram_schmidt_frame(&g.eval_raw(x), x)
}

/// Euclidean Gram-Schmidt on the columns of a nearly orthogonal matrix.
/// Used to clean up frames assembled from finite-difference Jacobians.
pub fn orthonormalize_columns(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.ncols();
    let mut out = m.clone();
    for k in 0..n {
        let mut w = out.column(k).clone_owned();
        for i in 0..k {
            let ei = out.column(i).clone_owned();
            let proj = ei.dot(&w);
            w -= proj * &ei;
        }
        let norm = w.norm();
        w /= norm;
        out.set_column(k, &w);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn box_domain_rejects_empty_interval() {
        assert!(BoxDomain::new(vec![(0.0, 0.0)]).is_err());
        assert!(BoxDomain::new(vec![(1.0, -1.0)]).is_err());
    }

    #[test]
    fn require_inside_honours_reach() {
        let chart = Chart::new(BoxDomain::new(vec![(0.0, 1.0)]).unwrap(), "line").unwrap();
        assert!(chart.require_inside(&[0.5], 0.4).is_ok());
        assert!(chart.require_inside(&[0.5], 0.6).is_err());
        assert!(chart.require_inside(&[1.5], 0.0).is_err());
    }

    #[test]
    fn frame_of_identity_metric_is_identity() {
        let g = DMatrix::<f64>::identity(3, 3);
        let e = gram_schmidt_frame(&g, &[0.0; 3]).unwrap();
        assert!((e - DMatrix::<f64>::identity(3, 3)).norm() < 1e-15);
    }

    #[test]
    fn frame_of_diagonal_metric_rescales() {
        let g = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 0.5]));
        let e = gram_schmidt_frame(&g, &[0.0; 2]).unwrap();
        assert!((e[(0, 0)] - 1.0).abs() < 1e-15);
        assert!((e[(1, 1)] - 2.0_f64.sqrt()).abs() < 1e-15);
        assert!(e[(0, 1)].abs() < 1e-15 && e[(1, 0)].abs() < 1e-15);
    }

    proptest! {
        /// E^T g E = I for random SPD metrics.
        #[test]
        fn frame_orthonormalizes_random_spd(entries in proptest::collection::vec(-1.0f64..1.0, 9)) {
            let a = DMatrix::from_row_slice(3, 3, &entries);
            let g = &a.transpose() * &a + DMatrix::identity(3, 3) * 0.1;
            let e = gram_schmidt_frame(&g, &[0.0; 3]).unwrap();
            let gram = e.transpose() * &g * &e;
            prop_assert!((gram - DMatrix::identity(3, 3)).norm() < 1e-12);
        }
    }
}
