//! Restriction of ambient constant spinors to immersed charts.
//!
//! Flat ambient space has parallel spinors: the constant fields. Along an
//! immersed chart the constant spinor is re-expressed in the adapted frame
//! `(dF e_1, ..., dF e_n, ν)`; the frame rotation acts on spinor components
//! through a smooth lift assembled from matrix exponentials of bivectors
//! along a straight path from the chart center. The ambient value is then
//! carried to the intrinsic spinor space by Clifford multiplication with
//! the unit normal followed by the hypersurface identification, which is
//! the combination that makes the restricted field satisfy
//! `∇_X ψ = -½ h(X)·ψ` with the catalog's outward-normal convention.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::catalog::immersion_jacobian;
use crate::chart::{gram_schmidt_frame, orthonormalize_columns, Immersion, MetricField};
use crate::clifford::{
    clifford_algebra, hypersurface_identification, CMatrix, CVector, CliffordAlgebra,
    Identification,
};
use crate::error::{Error, Result};
use crate::spin::{SpinorField, SpinorOrigin};
use crate::tensorcalc::DiffEngine;

/// Number of subdivision steps of the lift path. Fixed so that the lift is
/// a smooth function of the endpoint.
const PATH_STEPS: usize = 48;

/// Matrix exponential of a complex matrix by scaling and squaring with a
/// Taylor kernel.
pub fn complex_exp(a: &CMatrix) -> CMatrix {
    let d = a.nrows();
    let norm = a.camax() * d as f64;
    let squarings = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a * Complex64::new(0.5f64.powi(squarings as i32), 0.0);
    let mut term = CMatrix::identity(d, d);
    let mut sum = CMatrix::identity(d, d);
    for k in 1..=20 {
        term = &term * &scaled / Complex64::new(k as f64, 0.0);
        sum += &term;
    }
    let mut out = sum;
    for _ in 0..squarings {
        out = &out * &out;
    }
    out
}

/// Logarithm of a rotation close to the identity, by the Mercator series.
/// Result is exactly skew.
pub fn rotation_log(q: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let d = q.nrows();
    let e = q - DMatrix::<f64>::identity(d, d);
    let defect = e.norm();
    if defect > 0.7 {
        return Err(Error::PathStepTooLarge {
            step: 0.0,
            defect,
        });
    }
    let mut power = e.clone();
    let mut log = DMatrix::<f64>::zeros(d, d);
    for k in 1..=48 {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        log += &power * (sign / k as f64);
        if power.norm() < 1e-18 {
            break;
        }
        power = &power * &e;
    }
    Ok(0.5 * (&log - log.transpose()))
}

/// The adapted ambient rotation at `x`: columns are the pushed-forward
/// Gram-Schmidt frame followed by the unit normal, re-orthonormalized.
pub fn adapted_rotation(
    imm: &Immersion,
    g: &MetricField,
    x: &[f64],
    engine: &DiffEngine,
) -> Result<DMatrix<f64>> {
    let n = imm.dim();
    let ambient = imm.ambient_dim();
    let frame = gram_schmidt_frame(&g.eval_raw(x), x)?;
    let jac = immersion_jacobian(imm, x, engine);
    let pushed = &jac * &frame;
    let mut r = DMatrix::zeros(ambient, ambient);
    for i in 0..n {
        r.set_column(i, &pushed.column(i));
    }
    r.set_column(n, &imm.unit_normal(x));
    Ok(orthonormalize_columns(&r))
}

/// Factor a special orthogonal matrix into plane rotations (Givens sweep in
/// fixed order) and return the corresponding spin lift.
fn givens_lift(alg: &CliffordAlgebra, r: &DMatrix<f64>) -> CMatrix {
    let d = r.nrows();
    let dim = alg.spinor_dim();
    let mut work = r.clone();
    let mut lift = CMatrix::identity(dim, dim);
    for j in 0..d {
        for i in (j + 1)..d {
            let (a, b) = (work[(j, j)], work[(i, j)]);
            if b.abs() < 1e-300 {
                continue;
            }
            let theta = b.atan2(a);
            let (c, s) = (theta.cos(), theta.sin());
            // rotate rows j and i
            for col in 0..d {
                let (rj, ri) = (work[(j, col)], work[(i, col)]);
                work[(j, col)] = c * rj + s * ri;
                work[(i, col)] = -s * rj + c * ri;
            }
            // lift of G^T: exp(θ/2 γ_j γ_i) = cos(θ/2) + sin(θ/2) γ_j γ_i
            let half = 0.5 * theta;
            let factor = CMatrix::identity(dim, dim) * Complex64::new(half.cos(), 0.0)
                + alg.gamma(j) * alg.gamma(i) * Complex64::new(half.sin(), 0.0);
            lift = &lift * factor;
        }
    }
    // The sweep leaves a ±1 diagonal when entries were already zero (signed
    // permutations do this). det = +1 pairs the -1 entries; each pair is a
    // π-rotation whose lift is γ_p γ_q.
    let negatives: Vec<usize> = (0..d).filter(|&j| work[(j, j)] < 0.0).collect();
    debug_assert!(negatives.len() % 2 == 0, "orientation-reversing frame");
    for pair in negatives.chunks_exact(2) {
        lift = &lift * (alg.gamma(pair[0]) * alg.gamma(pair[1]));
    }
    lift
}

struct RestrictionData {
    imm: Immersion,
    metric: MetricField,
    ambient_alg: Arc<CliffordAlgebra>,
    ident: Identification,
    phi: CVector,
    engine: DiffEngine,
    base_point: Vec<f64>,
    base_lift: CMatrix,
}

impl RestrictionData {
    /// Smooth spin lift `L(x) ≈ ρ(R(x))` along the straight segment from
    /// the base point.
    fn path_lift(&self, x: &[f64]) -> Result<CMatrix> {
        let base = &self.base_point;
        let mut lift = self.base_lift.clone();
        let mut prev = adapted_rotation(&self.imm, &self.metric, base, &self.engine)?;
        for s in 1..=PATH_STEPS {
            let frac = s as f64 / PATH_STEPS as f64;
            let node: Vec<f64> = base
                .iter()
                .zip(x)
                .map(|(b, xi)| b + frac * (xi - b))
                .collect();
            let next = adapted_rotation(&self.imm, &self.metric, &node, &self.engine)?;
            let step = &next * prev.transpose();
            let generator = rotation_log(&step)?;
            lift = complex_exp(&self.ambient_alg.bivector_rep(&generator)) * lift;
            prev = next;
        }
        Ok(lift)
    }

    fn eval(&self, x: &[f64]) -> CVector {
        let lift = self
            .path_lift(x)
            .expect("spin lift along an interior segment");
        let gauge = lift.adjoint() * &self.phi;
        let twisted = self.ambient_alg.gamma(self.imm.dim()) * gauge;
        self.ident.restrict(&twisted)
    }
}

/// Restrict an ambient constant spinor `Φ` along the immersion, producing
/// the intrinsic spinor field in the Gram-Schmidt frame gauge.
///
/// The chart must have a positively oriented adapted frame, and for odd
/// hypersurface dimension `Φ` must have a nonzero component in the
/// chirality half the identification carries.
pub fn restrict_parallel_spinor(
    imm: &Immersion,
    g: &MetricField,
    phi: &CVector,
    engine: &DiffEngine,
) -> Result<SpinorField> {
    let n = imm.dim();
    let ambient_alg = Arc::new(clifford_algebra(n + 1)?);
    if phi.len() != ambient_alg.spinor_dim() {
        return Err(Error::DimensionMismatch {
            expected: ambient_alg.spinor_dim(),
            got: phi.len(),
        });
    }
    if phi.norm() < 1e-14 {
        return Err(Error::ChiralityProjectionVanishes);
    }
    let ident = hypersurface_identification(&ambient_alg)?;
    if let Some((_, p_minus)) = &ident.chirality {
        // the normal twist maps the -1 half onto the identification's domain
        if (p_minus * phi).norm() < 1e-12 * phi.norm() {
            return Err(Error::ChiralityProjectionVanishes);
        }
    }

    let base_point = imm.chart().center();
    let base_rotation = adapted_rotation(imm, g, &base_point, engine)?;
    let det = base_rotation.determinant();
    if det < 0.0 {
        return Err(Error::FrameNotOriented { det });
    }
    let base_lift = givens_lift(&ambient_alg, &base_rotation);

    let data = Arc::new(RestrictionData {
        imm: imm.clone(),
        metric: g.clone(),
        ambient_alg: ambient_alg.clone(),
        ident,
        phi: phi.clone(),
        engine: *engine,
        base_point,
        base_lift,
    });
    let reference = data.eval(&data.base_point).norm();
    if reference < 1e-12 * phi.norm() {
        return Err(Error::ChiralityProjectionVanishes);
    }
    let chart = imm.chart().clone();
    let eval_data = data.clone();
    Ok(SpinorField::new(
        chart,
        data.ident.intrinsic.clone(),
        move |x| eval_data.eval(x),
        SpinorOrigin::Restricted,
        reference,
    ))
}
