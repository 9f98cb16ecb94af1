//! Closed-form connection and curvature of the generalized warped product,
//! evaluated on coordinate lifts, with companion verifiers that compute
//! the same objects from the differentiation oracle applied to the ambient
//! metric.
//!
//! Conventions: records are coordinate components on the product chart,
//! horizontal slots first and the `t`-slot last. `X, Y, Z` range over the
//! base coordinate fields `∂_1..∂_n`, whose lifts are the ambient
//! coordinate fields, so all brackets vanish.

use nalgebra::{DMatrix, DVector};

use crate::chart::VectorField;
use crate::error::Result;
use crate::tensorcalc::{
    christoffel, covariant_derivative_symtensor, covariant_derivative_vector, riemann, DiffEngine,
    Tensor3,
};
use crate::warped::WarpedGeometry;

/// First covariant derivatives: `𝛁_{∂t}∂t`, `𝛁_{X̃}∂t` and `𝛁_{X̃}Ỹ`.
#[derive(Clone, Debug)]
pub struct ConnectionForms {
    pub dt_dt: DVector<f64>,
    pub x_dt: Vec<DVector<f64>>,
    pub x_y: Vec<Vec<DVector<f64>>>,
}

impl ConnectionForms {
    pub fn max_deviation(&self, other: &ConnectionForms) -> f64 {
        let mut worst = (&self.dt_dt - &other.dt_dt).amax();
        for (a, b) in self.x_dt.iter().zip(&other.x_dt) {
            worst = worst.max((a - b).amax());
        }
        for (row_a, row_b) in self.x_y.iter().zip(&other.x_y) {
            for (a, b) in row_a.iter().zip(row_b) {
                worst = worst.max((a - b).amax());
            }
        }
        worst
    }
}

fn lift(v: &DVector<f64>, n: usize) -> DVector<f64> {
    let mut out = DVector::zeros(n + 1);
    for a in 0..n {
        out[a] = v[a];
    }
    out
}

fn vertical(value: f64, n: usize) -> DVector<f64> {
    let mut out = DVector::zeros(n + 1);
    out[n] = value;
    out
}

/// `∇^t_{∂_i}∂_j` as coordinate vectors, from the Christoffel symbols of
/// the frozen metric `g_t`.
fn frozen_connection(wg: &WarpedGeometry, x: &[f64], t: f64, engine: &DiffEngine) -> Result<Tensor3> {
    christoffel(&wg.metric_at(t), x, engine)
}

fn gamma_column(gamma: &Tensor3, i: usize, j: usize) -> DVector<f64> {
    let n = gamma.dim();
    DVector::from_fn(n, |k, _| gamma.get(k, i, j))
}

/// Generalized O'Neill first-derivative formulas:
/// `𝛁_{∂t}∂t = 0`, `𝛁_{X̃}∂t = (f'/2) H_t(X)~`,
/// `𝛁_{X̃}Ỹ = (∇^t_X Y)~ - (f'/2) h(X,Y) ∂t`.
pub fn connection_closed_form(
    wg: &WarpedGeometry,
    x: &[f64],
    t: f64,
    engine: &DiffEngine,
) -> Result<ConnectionForms> {
    let n = wg.dim();
    let df = wg.warp().df(t);
    let h_t = wg.endo_h_t(x, t)?;
    let hx = wg.h().eval_raw(x);
    let gamma_t = frozen_connection(wg, x, t, engine)?;
    let x_dt = (0..n)
        .map(|i| lift(&(h_t.column(i).clone_owned() * (0.5 * df)), n))
        .collect();
    let x_y = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    lift(&gamma_column(&gamma_t, i, j), n)
                        + vertical(-0.5 * df * hx[(i, j)], n)
                })
                .collect()
        })
        .collect();
    Ok(ConnectionForms {
        dt_dt: DVector::zeros(n + 1),
        x_dt,
        x_y,
    })
}

/// The same objects from the ambient Christoffel symbols.
pub fn connection_oracle(
    wg: &WarpedGeometry,
    x: &[f64],
    t: f64,
    engine: &DiffEngine,
) -> Result<ConnectionForms> {
    let n = wg.dim();
    let mut point = x.to_vec();
    point.push(t);
    let gamma = christoffel(&wg.ambient_metric(), &point, engine)?;
    let column = |b: usize, c: usize| DVector::from_fn(n + 1, |a, _| gamma.get(a, b, c));
    Ok(ConnectionForms {
        dt_dt: column(n, n),
        x_dt: (0..n).map(|i| column(i, n)).collect(),
        x_y: (0..n)
            .map(|i| (0..n).map(|j| column(i, j)).collect())
            .collect(),
    })
}

pub fn connection_deviation(
    wg: &WarpedGeometry,
    x: &[f64],
    t: f64,
    engine: &DiffEngine,
) -> Result<f64> {
    Ok(connection_closed_form(wg, x, t, engine)?
        .max_deviation(&connection_oracle(wg, x, t, engine)?))
}

/// `A_t(X, Y)` for coordinate fields: solves
/// `g_t(A_t, ∂_k) = ∂_i h_{jk} + ∂_j h_{ki} - ∂_k h_{ij}`.
pub fn a_t_coord(
    wg: &WarpedGeometry,
    i: usize,
    j: usize,
    x: &[f64],
    t: f64,
    engine: &DiffEngine,
) -> Result<DVector<f64>> {
    let n = wg.dim();
    let dh: Vec<DMatrix<f64>> = (0..n)
        .map(|axis| engine.partial_raw(|y| wg.h().eval_raw(y), x, axis))
        .collect();
    let rhs = DVector::from_fn(n, |k, _| dh[i][(j, k)] + dh[j][(k, i)] - dh[k][(i, j)]);
    let gt = wg.metric_at(t).at(x)?;
    Ok(gt.try_inverse().expect("certified SPD") * rhs)
}

/// `A_t(X, Y)` for general vector fields, bracket terms included:
/// `g_t(A_t(X,Y), Z) = X h(Y,Z) + Y h(Z,X) - Z h(X,Y)
///                    - h(X,[Y,Z]) + h(Y,[Z,X]) + h(Z,[X,Y])`.
pub fn a_t(
    wg: &WarpedGeometry,
    x_field: &VectorField,
    y_field: &VectorField,
    x: &[f64],
    t: f64,
    engine: &DiffEngine,
) -> Result<DVector<f64>> {
    let n = wg.dim();
    let h = wg.h();
    let pair = |u: &DVector<f64>, v: &DVector<f64>, y: &[f64]| -> f64 {
        (u.transpose() * h.eval_raw(y) * v)[(0, 0)]
    };
    let bracket = |f: &VectorField, g: &VectorField| -> DVector<f64> {
        let fx = f.eval_raw(x);
        let gx = g.eval_raw(x);
        let mut out = DVector::zeros(n);
        for b in 0..n {
            let dg: DVector<f64> = engine.partial_raw(|y| g.eval_raw(y), x, b);
            let df: DVector<f64> = engine.partial_raw(|y| f.eval_raw(y), x, b);
            for a in 0..n {
                out[a] += fx[b] * dg[a] - gx[b] * df[a];
            }
        }
        out
    };
    let xx = x_field.eval_raw(x);
    let yx = y_field.eval_raw(x);
    let bracket_xy = bracket(x_field, y_field);
    let mut rhs = DVector::zeros(n);
    for k in 0..n {
        let zk = VectorField::coordinate(wg.base_chart().clone(), k);
        let ek = zk.eval_raw(x);
        // directional derivatives of the scalar pairings
        let d_x: f64 = {
            let xf = x_field.clone();
            let yf = y_field.clone();
            let mut acc = 0.0;
            for b in 0..n {
                let d: f64 = engine.partial_raw(
                    |y| pair(&yf.eval_raw(y), &DVector::from_fn(n, |q, _| if q == k { 1.0 } else { 0.0 }), y),
                    x,
                    b,
                );
                acc += xf.eval_raw(x)[b] * d;
            }
            acc
        };
        let d_y: f64 = {
            let yf = y_field.clone();
            let xf = x_field.clone();
            let mut acc = 0.0;
            for b in 0..n {
                let d: f64 = engine.partial_raw(
                    |y| pair(&DVector::from_fn(n, |q, _| if q == k { 1.0 } else { 0.0 }), &xf.eval_raw(y), y),
                    x,
                    b,
                );
                acc += yf.eval_raw(x)[b] * d;
            }
            acc
        };
        let d_z: f64 = engine.partial_raw(|y| pair(&x_field.eval_raw(y), &y_field.eval_raw(y), y), x, k);
        let bracket_yz = bracket(y_field, &zk);
        let bracket_zx = bracket(&zk, x_field);
        rhs[k] = d_x + d_y - d_z - pair(&xx, &bracket_yz, x) + pair(&yx, &bracket_zx, x)
            + pair(&ek, &bracket_xy, x);
    }
    let gt = wg.metric_at(t).at(x)?;
    Ok(gt.try_inverse().expect("certified SPD") * rhs)
}

/// Second covariant derivatives along coordinate lifts.
#[derive(Clone, Debug)]
pub struct SecondCovForms {
    /// `𝛁_{∂t}𝛁_{∂t}∂t` (zero).
    pub dt_dt_dt: DVector<f64>,
    /// `𝛁_{X̃}𝛁_{∂t}∂t` (zero).
    pub x_dt_dt: Vec<DVector<f64>>,
    /// `𝛁_{∂t}𝛁_{X̃}∂t`.
    pub dt_x_dt: Vec<DVector<f64>>,
    /// `𝛁_{X̃}𝛁_{∂t}Ỹ`.
    pub x_dt_y: Vec<Vec<DVector<f64>>>,
    /// `𝛁_{∂t}𝛁_{X̃}Ỹ`.
    pub dt_x_y: Vec<Vec<DVector<f64>>>,
    /// `𝛁_{X̃}𝛁_{Ỹ}Z̃`.
    pub x_y_z: Vec<Vec<Vec<DVector<f64>>>>,
}

impl SecondCovForms {
    pub fn max_deviation(&self, other: &SecondCovForms) -> f64 {
        let mut worst = (&self.dt_dt_dt - &other.dt_dt_dt).amax();
        for (a, b) in self.x_dt_dt.iter().zip(&other.x_dt_dt) {
            worst = worst.max((a - b).amax());
        }
        for (a, b) in self.dt_x_dt.iter().zip(&other.dt_x_dt) {
            worst = worst.max((a - b).amax());
        }
        for (ra, rb) in self.x_dt_y.iter().zip(&other.x_dt_y) {
            for (a, b) in ra.iter().zip(rb) {
                worst = worst.max((a - b).amax());
            }
        }
        for (ra, rb) in self.dt_x_y.iter().zip(&other.dt_x_y) {
            for (a, b) in ra.iter().zip(rb) {
                worst = worst.max((a - b).amax());
            }
        }
        for (pa, pb) in self.x_y_z.iter().zip(&other.x_y_z) {
            for (ra, rb) in pa.iter().zip(pb) {
                for (a, b) in ra.iter().zip(rb) {
                    worst = worst.max((a - b).amax());
                }
            }
        }
        worst
    }
}

/// `∇^t_{∂_i} (H_t(∂_j))`: covariant derivative (w.r.t. `g_t`) of the
/// column fields of `H_t` at frozen `t`; slot `[i][j]` is a base vector.
fn frozen_h_t_derivative(
    wg: &WarpedGeometry,
    x: &[f64],
    t: f64,
    engine: &DiffEngine,
) -> Result<Vec<Vec<DVector<f64>>>> {
    let n = wg.dim();
    let g_t = wg.metric_at(t);
    let mut out = vec![vec![DVector::zeros(n); n]; n];
    for j in 0..n {
        let field = VectorField::new(wg.base_chart().clone(), {
            let wg = wg.clone();
            move |y| {
                wg.endo_h_t(y, t)
                    .expect("H_t on certified region")
                    .column(j)
                    .clone_owned()
            }
        });
        let deriv = covariant_derivative_vector(&field, &g_t, x, engine)?;
        for i in 0..n {
            out[i][j] = deriv.row(i).transpose();
        }
    }
    Ok(out)
}

/// The five second-derivative formulas of the generalized warped product.
pub fn second_cov_closed_form(
    wg: &WarpedGeometry,
    x: &[f64],
    t: f64,
    engine: &DiffEngine,
) -> Result<SecondCovForms> {
    let n = wg.dim();
    let (f1, f2) = (wg.warp().df(t), wg.warp().ddf(t));
    let h_t = wg.endo_h_t(x, t)?;
    let hx = wg.h().eval_raw(x);
    let gamma_t = frozen_connection(wg, x, t, engine)?;
    let dh_t = frozen_h_t_derivative(wg, x, t, engine)?;
    let dh: Vec<DMatrix<f64>> = (0..n)
        .map(|axis| engine.partial_raw(|y| wg.h().eval_raw(y), x, axis))
        .collect();

    // 𝛁_{∂t}𝛁_{X̃}∂t = (f''/2) H_t(X)~ - (f'²/4) H_t(H_t(X))~
    let dt_x_dt = (0..n)
        .map(|i| {
            let hti = h_t.column(i).clone_owned();
            lift(&(&hti * (0.5 * f2) - &h_t * hti * (0.25 * f1 * f1)), n)
        })
        .collect();

    // 𝛁_{X̃}𝛁_{∂t}Ỹ = (f'/2) (∇^t_X H_t(Y))~ - (f'²/4) h(X, H_t(Y)) ∂t
    let x_dt_y = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let h_of = |u: &DVector<f64>, v: &DVector<f64>| (u.transpose() * &hx * v)[(0, 0)];
                    let e_i = DVector::from_fn(n, |q, _| if q == i { 1.0 } else { 0.0 });
                    let ht_j = h_t.column(j).clone_owned();
                    lift(&(&dh_t[i][j] * (0.5 * f1)), n)
                        + vertical(-0.25 * f1 * f1 * h_of(&e_i, &ht_j), n)
                })
                .collect()
        })
        .collect();

    // 𝛁_{∂t}𝛁_{X̃}Ỹ = (f'/2) A_t(X,Y)~ - (f'/2) H_t(∇^t_XY)~ - (f''/2) h(X,Y) ∂t
    let mut dt_x_y = vec![vec![DVector::zeros(n + 1); n]; n];
    for i in 0..n {
        for j in 0..n {
            let a_t = a_t_coord(wg, i, j, x, t, engine)?;
            let nabla_t = gamma_column(&gamma_t, i, j);
            dt_x_y[i][j] = lift(&((a_t - &h_t * nabla_t) * (0.5 * f1)), n)
                + vertical(-0.5 * f2 * hx[(i, j)], n);
        }
    }

    // 𝛁_{X̃}𝛁_{Ỹ}Z̃ = (∇^t_X ∇^t_Y Z)~ - (f'/2) h(X, ∇^t_YZ) ∂t
    //               - (f'/2) X h(Y,Z) ∂t - (f'²/4) h(Y,Z) H_t(X)~
    let g_t = wg.metric_at(t);
    let mut x_y_z = vec![vec![vec![DVector::zeros(n + 1); n]; n]; n];
    for j in 0..n {
        for k in 0..n {
            // the field y ↦ ∇^t_{∂_j}∂_k, then one more derivative
            let field = VectorField::new(wg.base_chart().clone(), {
                let g_t = g_t.clone();
                let engine = *engine;
                move |y| {
                    let gamma = christoffel(&g_t, y, &engine).expect("frozen connection");
                    gamma_column(&gamma, j, k)
                }
            });
            let second = covariant_derivative_vector(&field, &g_t, x, engine)?;
            for i in 0..n {
                let nabla_jk = gamma_column(&gamma_t, j, k);
                let h_x_nabla = {
                    let e_i = DVector::from_fn(n, |q, _| if q == i { 1.0 } else { 0.0 });
                    (e_i.transpose() * &hx * &nabla_jk)[(0, 0)]
                };
                x_y_z[i][j][k] = lift(&second.row(i).transpose(), n)
                    + vertical(-0.5 * f1 * (h_x_nabla + dh[i][(j, k)]), n)
                    + lift(
                        &(h_t.column(i).clone_owned() * (-0.25 * f1 * f1 * hx[(j, k)])),
                        n,
                    );
            }
        }
    }

    Ok(SecondCovForms {
        dt_dt_dt: DVector::zeros(n + 1),
        x_dt_dt: vec![DVector::zeros(n + 1); n],
        dt_x_dt,
        x_dt_y,
        dt_x_y,
        x_y_z,
    })
}

/// Nested oracle covariant derivatives of the ambient metric.
pub fn second_cov_oracle(
    wg: &WarpedGeometry,
    x: &[f64],
    t: f64,
    engine: &DiffEngine,
) -> Result<SecondCovForms> {
    let n = wg.dim();
    let mut point = x.to_vec();
    point.push(t);
    let ambient = wg.ambient_metric();
    let second = |outer: usize, mid: usize, inner: usize| -> Result<DVector<f64>> {
        let field = VectorField::new(wg.ambient_chart().clone(), {
            let ambient = ambient.clone();
            let engine = *engine;
            move |y| {
                let gamma = christoffel(&ambient, y, &engine).expect("ambient connection");
                DVector::from_fn(gamma.dim(), |a, _| gamma.get(a, mid, inner))
            }
        });
        let deriv = covariant_derivative_vector(&field, &ambient, &point, engine)?;
        Ok(deriv.row(outer).transpose())
    };
    Ok(SecondCovForms {
        dt_dt_dt: second(n, n, n)?,
        x_dt_dt: (0..n).map(|i| second(i, n, n)).collect::<Result<_>>()?,
        dt_x_dt: (0..n).map(|i| second(n, i, n)).collect::<Result<_>>()?,
        x_dt_y: (0..n)
            .map(|i| (0..n).map(|j| second(i, n, j)).collect::<Result<_>>())
            .collect::<Result<_>>()?,
        dt_x_y: (0..n)
            .map(|i| (0..n).map(|j| second(n, i, j)).collect::<Result<_>>())
            .collect::<Result<_>>()?,
        x_y_z: (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| second(i, j, k)).collect::<Result<_>>())
                    .collect::<Result<_>>()
            })
            .collect::<Result<_>>()?,
    })
}

pub fn second_cov_deviation(
    wg: &WarpedGeometry,
    x: &[f64],
    t: f64,
    engine: &DiffEngine,
) -> Result<f64> {
    Ok(second_cov_closed_form(wg, x, t, engine)?
        .max_deviation(&second_cov_oracle(wg, x, t, engine)?))
}

/// Curvature records `𝐑(·,·)·` along coordinate lifts.
#[derive(Clone, Debug)]
pub struct CurvatureForms {
    /// `𝐑(X̃, ∂t)∂t`.
    pub x_dt_dt: Vec<DVector<f64>>,
    /// `𝐑(X̃, ∂t)Ỹ`.
    pub x_dt_y: Vec<Vec<DVector<f64>>>,
    /// `𝐑(X̃, Ỹ)∂t`.
    pub x_y_dt: Vec<Vec<DVector<f64>>>,
    /// `𝐑(X̃, Ỹ)Z̃`.
    pub x_y_z: Vec<Vec<Vec<DVector<f64>>>>,
}

impl CurvatureForms {
    pub fn max_deviation(&self, other: &CurvatureForms) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, b) in self.x_dt_dt.iter().zip(&other.x_dt_dt) {
            worst = worst.max((a - b).amax());
        }
        for (ra, rb) in self.x_dt_y.iter().zip(&other.x_dt_y) {
            for (a, b) in ra.iter().zip(rb) {
                worst = worst.max((a - b).amax());
            }
        }
        for (ra, rb) in self.x_y_dt.iter().zip(&other.x_y_dt) {
            for (a, b) in ra.iter().zip(rb) {
                worst = worst.max((a - b).amax());
            }
        }
        for (pa, pb) in self.x_y_z.iter().zip(&other.x_y_z) {
            for (ra, rb) in pa.iter().zip(pb) {
                for (a, b) in ra.iter().zip(rb) {
                    worst = worst.max((a - b).amax());
                }
            }
        }
        worst
    }
}

/// The six curvature formulas of the generalized warped product. The
/// `∇h` terms in the horizontal display use the frozen connection `∇^t`.
pub fn curvature_closed_form(
    wg: &WarpedGeometry,
    x: &[f64],
    t: f64,
    engine: &DiffEngine,
) -> Result<CurvatureForms> {
    let n = wg.dim();
    let (f1, f2) = (wg.warp().df(t), wg.warp().ddf(t));
    let h_t = wg.endo_h_t(x, t)?;
    let hx = wg.h().eval_raw(x);
    let g_t = wg.metric_at(t);
    let gamma_t = frozen_connection(wg, x, t, engine)?;
    let dh_t = frozen_h_t_derivative(wg, x, t, engine)?;
    let r_t = riemann(&g_t, x, engine)?;
    let nabla_t_h = covariant_derivative_symtensor(wg.h(), &g_t, x, engine)?;

    // 𝐑(X̃,∂t)∂t = -(f''/2) H_t(X)~ + (f'²/4) H_t(H_t(X))~
    let x_dt_dt = (0..n)
        .map(|i| {
            let hti = h_t.column(i).clone_owned();
            lift(&(&h_t * &hti * (0.25 * f1 * f1) - &hti * (0.5 * f2)), n)
        })
        .collect();

    // 𝐑(X̃,∂t)Ỹ = (f'/2)(∇^t_X(H_t(Y)) + H_t(∇^t_XY) - A_t(X,Y))~
    //           + ((f''/2) h(X,Y) - (f'²/4) h(X, H_t(Y))) ∂t
    let mut x_dt_y = vec![vec![DVector::zeros(n + 1); n]; n];
    for i in 0..n {
        for j in 0..n {
            let a_t = a_t_coord(wg, i, j, x, t, engine)?;
            let nabla_xy = gamma_column(&gamma_t, i, j);
            let horizontal = (&dh_t[i][j] + &h_t * nabla_xy - a_t) * (0.5 * f1);
            let e_i = DVector::from_fn(n, |q, _| if q == i { 1.0 } else { 0.0 });
            let h_x_hty = (e_i.transpose() * &hx * h_t.column(j).clone_owned())[(0, 0)];
            x_dt_y[i][j] = lift(&horizontal, n)
                + vertical(0.5 * f2 * hx[(i, j)] - 0.25 * f1 * f1 * h_x_hty, n);
        }
    }

    // 𝐑(X̃,Ỹ)∂t = (f'/2)((∇^t_X H_t)(Y) - (∇^t_Y H_t)(X))~
    let mut x_y_dt = vec![vec![DVector::zeros(n + 1); n]; n];
    for i in 0..n {
        for j in 0..n {
            // (∇^t_X H_t)(Y) = ∇^t_X(H_t(Y)) - H_t(∇^t_XY)
            let cov_i_j = &dh_t[i][j] - &h_t * gamma_column(&gamma_t, i, j);
            let cov_j_i = &dh_t[j][i] - &h_t * gamma_column(&gamma_t, j, i);
            x_y_dt[i][j] = lift(&((cov_i_j - cov_j_i) * (0.5 * f1)), n);
        }
    }

    // 𝐑(X̃,Ỹ)Z̃ = (R^t(X,Y)Z)~ + (f'/2)((∇^t_Yh)(X,Z) - (∇^t_Xh)(Y,Z)) ∂t
    //           + (f'²/4)(h(X,Z) H_t(Y)~ - h(Y,Z) H_t(X)~)
    let mut x_y_z = vec![vec![vec![DVector::zeros(n + 1); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let r_vec = DVector::from_fn(n, |l, _| r_t.get(l, k, i, j));
                let vertical_term =
                    0.5 * f1 * (nabla_t_h.get(j, i, k) - nabla_t_h.get(i, j, k));
                let horizontal = h_t.column(j).clone_owned() * (0.25 * f1 * f1 * hx[(i, k)])
                    - h_t.column(i).clone_owned() * (0.25 * f1 * f1 * hx[(j, k)]);
                x_y_z[i][j][k] =
                    lift(&(r_vec + horizontal), n) + vertical(vertical_term, n);
            }
        }
    }

    Ok(CurvatureForms {
        x_dt_dt,
        x_dt_y,
        x_y_dt,
        x_y_z,
    })
}

/// The same records from the oracle Riemann tensor of the ambient metric.
pub fn curvature_oracle(
    wg: &WarpedGeometry,
    x: &[f64],
    t: f64,
    engine: &DiffEngine,
) -> Result<CurvatureForms> {
    let n = wg.dim();
    let mut point = x.to_vec();
    point.push(t);
    let r = riemann(&wg.ambient_metric(), &point, engine)?;
    let entry = |arg: usize, b: usize, c: usize| {
        DVector::from_fn(n + 1, |a, _| r.get(a, arg, b, c))
    };
    Ok(CurvatureForms {
        x_dt_dt: (0..n).map(|i| entry(n, i, n)).collect(),
        x_dt_y: (0..n)
            .map(|i| (0..n).map(|j| entry(j, i, n)).collect())
            .collect(),
        x_y_dt: (0..n)
            .map(|i| (0..n).map(|j| entry(n, i, j)).collect())
            .collect(),
        x_y_z: (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| entry(k, i, j)).collect())
                    .collect()
            })
            .collect(),
    })
}

pub fn curvature_deviation(
    wg: &WarpedGeometry,
    x: &[f64],
    t: f64,
    engine: &DiffEngine,
) -> Result<f64> {
    Ok(curvature_closed_form(wg, x, t, engine)?
        .max_deviation(&curvature_oracle(wg, x, t, engine)?))
}
