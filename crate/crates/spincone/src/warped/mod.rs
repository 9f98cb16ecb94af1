//! The generalized warped product `(M x I, g_t ⊕ dt²)` with
//! `g_t = g + f(t) h`, its cone specialization `f(t) = t² - 1`, and the
//! closed-form connection and curvature identities, each checked against
//! the differentiation oracle applied to the ambient metric.
//!
//! The ambient metric is an ordinary [`MetricField`] on the product chart,
//! so every tensor-calculus operation applies to it unchanged — that is
//! the oracle path. `t` is a coordinate of the ambient chart but only a
//! parameter for base quantities: the connection `∇^t` of `(M, g_t)` is computed
//! by freezing `t` and differentiating in `x` alone.

pub mod cone;
pub mod oneill;

use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::chart::{
    gram_schmidt_frame, BoxDomain, Chart, MetricField, SymTensorField, VectorField,
};
use crate::error::{Error, Result};
use crate::tensorcalc::DiffEngine;

/// Warp profile `f` on `I = (1-ε, 1+ε)` with `f(1) = 0`.
#[derive(Clone)]
pub enum WarpFunction {
    /// `f(t) = t² - 1`, the generalized cone.
    Cone,
    /// `f(t) = q(t)² - 1` for a supplied positive `q`, the classic warped
    /// product.
    Classic {
        q: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        dq: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        ddq: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
    /// Arbitrary profile with supplied derivatives.
    Custom {
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        df: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        ddf: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
}

impl WarpFunction {
    pub fn cone() -> Self {
        WarpFunction::Cone
    }

    pub fn classic(
        q: impl Fn(f64) -> f64 + Send + Sync + 'static,
        dq: impl Fn(f64) -> f64 + Send + Sync + 'static,
        ddq: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        WarpFunction::Classic {
            q: Arc::new(q),
            dq: Arc::new(dq),
            ddq: Arc::new(ddq),
        }
    }

    pub fn custom(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        df: impl Fn(f64) -> f64 + Send + Sync + 'static,
        ddf: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        WarpFunction::Custom {
            f: Arc::new(f),
            df: Arc::new(df),
            ddf: Arc::new(ddf),
        }
    }

    pub fn is_cone(&self) -> bool {
        matches!(self, WarpFunction::Cone)
    }

    pub fn tag(&self) -> &'static str {
        match self {
            WarpFunction::Cone => "cone",
            WarpFunction::Classic { .. } => "classic",
            WarpFunction::Custom { .. } => "custom",
        }
    }

    pub fn f(&self, t: f64) -> f64 {
        match self {
            WarpFunction::Cone => t * t - 1.0,
            WarpFunction::Classic { q, .. } => q(t) * q(t) - 1.0,
            WarpFunction::Custom { f, .. } => f(t),
        }
    }

    pub fn df(&self, t: f64) -> f64 {
        match self {
            WarpFunction::Cone => 2.0 * t,
            WarpFunction::Classic { q, dq, .. } => 2.0 * q(t) * dq(t),
            WarpFunction::Custom { df, .. } => df(t),
        }
    }

    pub fn ddf(&self, t: f64) -> f64 {
        match self {
            WarpFunction::Cone => 2.0,
            WarpFunction::Classic { q, dq, ddq } => 2.0 * (q(t) * ddq(t) + dq(t) * dq(t)),
            WarpFunction::Custom { ddf, .. } => ddf(t),
        }
    }
}

/// The generalized warped product geometry over a base chart.
#[derive(Clone)]
pub struct WarpedGeometry {
    base_metric: MetricField,
    h: SymTensorField,
    warp: WarpFunction,
    eps: f64,
    ambient_chart: Arc<Chart>,
}

/// Positivity margin demanded of `g + f(t) h` over the certification grid.
pub const SPD_MARGIN: f64 = 1e-3;

/// Build the geometry, certifying that `g_t` stays positive definite over
/// a `(point, t)` grid. Rejects with the worst grid point otherwise.
pub fn make_warped(
    base_metric: &MetricField,
    h: &SymTensorField,
    warp: WarpFunction,
    eps: f64,
) -> Result<WarpedGeometry> {
    let chart = base_metric.chart();
    let n = chart.dim();
    if h.chart().dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: h.chart().dim(),
        });
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Config(format!(
            "interval half-width {eps} must lie in (0, 1)"
        )));
    }
    let anchored = warp.f(1.0);
    if anchored.abs() > 1e-12 {
        return Err(Error::WarpNotAnchored(anchored));
    }
    // derivative consistency over a t-grid
    let fd = 1e-5;
    for step in 0..9 {
        let t = 1.0 - eps + (2.0 * eps) * (step as f64 + 0.5) / 9.0;
        let num_df = (warp.f(t + fd) - warp.f(t - fd)) / (2.0 * fd);
        if (num_df - warp.df(t)).abs() > 1e-5 * (1.0 + num_df.abs()) {
            return Err(Error::WarpDerivativeInconsistent {
                t,
                which: "f'".into(),
                dev: (num_df - warp.df(t)).abs(),
            });
        }
        let num_ddf = (warp.df(t + fd) - warp.df(t - fd)) / (2.0 * fd);
        if (num_ddf - warp.ddf(t)).abs() > 1e-5 * (1.0 + num_ddf.abs()) {
            return Err(Error::WarpDerivativeInconsistent {
                t,
                which: "f''".into(),
                dev: (num_ddf - warp.ddf(t)).abs(),
            });
        }
    }

    // SPD certification grid
    let axis_nodes = 4usize;
    let t_nodes = 9usize;
    let bounds = chart.domain().bounds().to_vec();
    let mut worst: Option<(Vec<f64>, f64, f64)> = None;
    let mut grid_index = vec![0usize; n];
    loop {
        let x: Vec<f64> = grid_index
            .iter()
            .zip(&bounds)
            .map(|(&i, &(lo, hi))| lo + (hi - lo) * (i as f64 + 0.5) / axis_nodes as f64)
            .collect();
        let gx = base_metric.eval_raw(&x);
        let hx = h.eval_raw(&x);
        for s in 0..=t_nodes {
            let t = 1.0 - eps + 2.0 * eps * (s as f64) / t_nodes as f64;
            let gt = &gx + &hx * warp.f(t);
            let eig = SymmetricEigen::new(gt).eigenvalues;
            let min_eig = eig.iter().cloned().fold(f64::MAX, f64::min);
            if worst.as_ref().map_or(true, |w| min_eig < w.2) {
                worst = Some((x.clone(), t, min_eig));
            }
        }
        // advance the mixed-radix grid index
        let mut axis = 0;
        loop {
            if axis == n {
                break;
            }
            grid_index[axis] += 1;
            if grid_index[axis] < axis_nodes {
                break;
            }
            grid_index[axis] = 0;
            axis += 1;
        }
        if axis == n {
            break;
        }
    }
    let (wx, wt, weig) = worst.expect("grid non-empty");
    if weig < SPD_MARGIN {
        return Err(Error::WarpNotSpd {
            point: wx,
            t: wt,
            eig: weig,
            margin: SPD_MARGIN,
        });
    }

    let mut ambient_bounds = bounds;
    ambient_bounds.push((1.0 - eps, 1.0 + eps));
    let ambient_chart = Arc::new(Chart::new(
        BoxDomain::new(ambient_bounds)?,
        format!("{} x I", chart.label()),
    )?);
    Ok(WarpedGeometry {
        base_metric: base_metric.clone(),
        h: h.clone(),
        warp,
        eps,
        ambient_chart,
    })
}

impl WarpedGeometry {
    pub fn base_chart(&self) -> &Arc<Chart> {
        self.base_metric.chart()
    }

    pub fn base_metric(&self) -> &MetricField {
        &self.base_metric
    }

    pub fn h(&self) -> &SymTensorField {
        &self.h
    }

    pub fn warp(&self) -> &WarpFunction {
        &self.warp
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn dim(&self) -> usize {
        self.base_metric.dim()
    }

    pub fn ambient_chart(&self) -> &Arc<Chart> {
        &self.ambient_chart
    }

    /// The block metric `[g + f(t) h, 0; 0, 1]` on the product chart; the
    /// oracle path for every closed-form identity.
    pub fn ambient_metric(&self) -> MetricField {
        let n = self.dim();
        let g = self.base_metric.clone();
        let h = self.h.clone();
        let warp = self.warp.clone();
        MetricField::new(self.ambient_chart.clone(), move |y| {
            let (x, t) = (&y[..n], y[n]);
            let mut out = DMatrix::zeros(n + 1, n + 1);
            let gt = g.eval_raw(x) + h.eval_raw(x) * warp.f(t);
            out.view_mut((0, 0), (n, n)).copy_from(&gt);
            out[(n, n)] = 1.0;
            out
        })
    }

    /// The metric `g_t` on the base chart at frozen `t`.
    pub fn metric_at(&self, t: f64) -> MetricField {
        let g = self.base_metric.clone();
        let h = self.h.clone();
        let f = self.warp.f(t);
        MetricField::new(self.base_metric.chart().clone(), move |x| {
            g.eval_raw(x) + h.eval_raw(x) * f
        })
    }

    /// The shape endomorphism `H = g^{-1} h`.
    pub fn endo_shape(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        let gx = self.base_metric.at(x)?;
        let hx = self.h.eval_raw(x);
        gx.try_inverse()
            .map(|inv| inv * hx)
            .ok_or_else(|| Error::NotPositiveDefinite {
                point: x.to_vec(),
                detail: String::new(),
            })
    }

    /// `G_t = Id + f(t) H`, the endomorphism carrying `g` to `g_t`.
    pub fn endo_g_t(&self, x: &[f64], t: f64) -> Result<DMatrix<f64>> {
        let n = self.dim();
        Ok(DMatrix::identity(n, n) + self.endo_shape(x)? * self.warp.f(t))
    }

    /// `H_t = G_t^{-1} H`, so that `g_t(H_t X, Y) = h(X, Y)`.
    pub fn endo_h_t(&self, x: &[f64], t: f64) -> Result<DMatrix<f64>> {
        let g_t = self.endo_g_t(x, t)?;
        let h = self.endo_shape(x)?;
        g_t.try_inverse()
            .map(|inv| inv * h)
            .ok_or_else(|| Error::NotPositiveDefinite {
                point: x.to_vec(),
                detail: " (G_t singular)".into(),
            })
    }

    /// Adapted orthonormal frame `(e_1^t, ..., e_n^t, ∂_t)` of the ambient
    /// metric: `e_i^t = G_t^{-1/2} e_i` over the base Gram-Schmidt frame,
    /// returned as `(n+1)` coordinate columns.
    pub fn adapted_frame(&self, x: &[f64], t: f64) -> Result<DMatrix<f64>> {
        let n = self.dim();
        let gx = self.base_metric.at(x)?;
        let frame = gram_schmidt_frame(&gx, x)?;
        // G_t in the orthonormal frame is symmetric: I + f(t) E^T h E
        let g_t_sym = DMatrix::identity(n, n)
            + frame.transpose() * self.h.eval_raw(x) * &frame * self.warp.f(t);
        let eig = SymmetricEigen::new(g_t_sym);
        for value in eig.eigenvalues.iter() {
            if *value <= 0.0 {
                return Err(Error::NotPositiveDefinite {
                    point: x.to_vec(),
                    detail: format!(" (G_t eigenvalue {value} at t = {t})"),
                });
            }
        }
        let inv_sqrt = DMatrix::from_diagonal(&eig.eigenvalues.map(|v| 1.0 / v.sqrt()));
        let root = &eig.eigenvectors * inv_sqrt * eig.eigenvectors.transpose();
        let base_cols = frame * root;
        let mut out = DMatrix::zeros(n + 1, n + 1);
        for i in 0..n {
            for a in 0..n {
                out[(a, i)] = base_cols[(a, i)];
            }
        }
        out[(n, n)] = 1.0;
        Ok(out)
    }
}

/// Residuals of the lift identities: `[X̃, Ỹ] = [X, Y]~` and `[X̃, ∂t] = 0`
/// for base fields lifted to the product, via oracle directional
/// derivatives of the lifted components.
pub fn lift_bracket_residual(
    wg: &WarpedGeometry,
    x_field: &VectorField,
    y_field: &VectorField,
    x: &[f64],
    t: f64,
    engine: &DiffEngine,
) -> Result<f64> {
    let n = wg.dim();
    let mut point = x.to_vec();
    point.push(t);
    wg.ambient_chart().require_inside(&point, engine.reach())?;

    let lift = |field: &VectorField| -> Arc<dyn Fn(&[f64]) -> DVector<f64> + Send + Sync> {
        let field = field.clone();
        Arc::new(move |y: &[f64]| {
            let mut v = DVector::zeros(n + 1);
            let base = field.eval_raw(&y[..n]);
            for a in 0..n {
                v[a] = base[a];
            }
            v
        })
    };
    let xf = lift(x_field);
    let yf = lift(y_field);

    let bracket_ambient = |f: &Arc<dyn Fn(&[f64]) -> DVector<f64> + Send + Sync>,
                           g: &Arc<dyn Fn(&[f64]) -> DVector<f64> + Send + Sync>|
     -> DVector<f64> {
        let fx = f(&point);
        let gx = g(&point);
        let mut out = DVector::zeros(n + 1);
        for b in 0..=n {
            let dg: DVector<f64> = engine.partial_raw(|y| g(y), &point, b);
            let df: DVector<f64> = engine.partial_raw(|y| f(y), &point, b);
            for a in 0..=n {
                out[a] += fx[b] * dg[a] - gx[b] * df[a];
            }
        }
        out
    };

    // [X̃, Ỹ] against the lifted base bracket
    let ambient_bracket = bracket_ambient(&xf, &yf);
    let mut base_bracket = DVector::zeros(n + 1);
    {
        let fx = x_field.eval_raw(x);
        let gx = y_field.eval_raw(x);
        for b in 0..n {
            let dg: DVector<f64> = engine.partial_raw(|y| y_field.eval_raw(y), x, b);
            let df: DVector<f64> = engine.partial_raw(|y| x_field.eval_raw(y), x, b);
            for a in 0..n {
                base_bracket[a] += fx[b] * dg[a] - gx[b] * df[a];
            }
        }
    }
    let mut residual = (ambient_bracket - base_bracket).amax();

    // [X̃, ∂t] = -∂_t X̃ = 0
    let dt_of_x: DVector<f64> = engine.partial_raw(|y| xf(y), &point, n);
    residual = residual.max(dt_of_x.amax());
    Ok(residual)
}
