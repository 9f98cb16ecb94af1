//! Gamma-matrix Clifford algebras, the complex volume element and the
//! hypersurface spinor identification.
//!
//! Conventions:
//!
//! * Generators satisfy `γ_i γ_j + γ_j γ_i = -2 δ_ij` and are
//!   skew-Hermitian, so Clifford multiplication by unit vectors is
//!   skew-symmetric for the Hermitian product.
//! * The Hermitian product is conjugate-linear in the **second** slot:
//!   `<ψ, φ> = Σ ψ_a conj(φ_a)`.
//! * The spin representation of a skew matrix `A` is
//!   `τ(A) = -¼ Σ A_{ab} γ_a γ_b`, normalized so that
//!   `exp(τ(A)) γ(v) exp(-τ(A)) = γ(exp(A) v)`.
//!
//! The construction is a Jordan-Wigner tensor product of Pauli matrices;
//! entries stay in `{0, ±1, ±i}` so the defining relations hold exactly in
//! floating point. In odd dimensions the last generator is negated, which
//! places the representation in the equivalence class for which the
//! identification below lives on the `+1` chirality half of an
//! even-dimensional ambient algebra.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[Complex64::ZERO, ONE, ONE, Complex64::ZERO])
}

fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[Complex64::ZERO, -I, I, Complex64::ZERO])
}

fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ONE, Complex64::ZERO, Complex64::ZERO, -ONE])
}

fn kron_chain(factors: &[CMatrix]) -> CMatrix {
    let mut out = CMatrix::identity(1, 1);
    for f in factors {
        out = out.kronecker(f);
    }
    out
}

/// Hermitian inner product, conjugate-linear in the second argument.
pub fn hermitian(a: &CVector, b: &CVector) -> Complex64 {
    b.dotc(a)
}

pub fn norm(a: &CVector) -> f64 {
    hermitian(a, a).re.sqrt()
}

/// A dimension-n gamma-matrix representation of the Clifford algebra
/// `Cl(n)` with the negative-definite relation.
#[derive(Clone, Debug)]
pub struct CliffordAlgebra {
    n: usize,
    spinor_dim: usize,
    gammas: Vec<CMatrix>,
}

/// Deterministic gamma-matrix construction; `1 <= n <= 9` (an ambient
/// algebra one dimension above the largest intrinsic one).
pub fn clifford_algebra(n: usize) -> Result<CliffordAlgebra> {
    if n == 0 || n > 9 {
        return Err(Error::AlgebraDimension(n));
    }
    let m = n / 2;
    let spinor_dim = 1 << m;
    let id2 = CMatrix::identity(2, 2);
    let mut gammas = Vec::with_capacity(n);
    for idx in 1..=n {
        let e = if idx <= 2 * m {
            // Jordan-Wigner pair: σ_z ... σ_z (σ_x|σ_y) 1 ... 1
            let j = (idx + 1) / 2;
            let mid = if idx % 2 == 1 { pauli_x() } else { pauli_y() };
            let mut factors = vec![pauli_z(); j - 1];
            factors.push(mid);
            factors.extend(std::iter::repeat(id2.clone()).take(m - j));
            kron_chain(&factors)
        } else {
            // odd n: negated σ_z chain
            -kron_chain(&vec![pauli_z(); m])
        };
        gammas.push(e * I);
    }
    Ok(CliffordAlgebra {
        n,
        spinor_dim,
        gammas,
    })
}

impl CliffordAlgebra {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn spinor_dim(&self) -> usize {
        self.spinor_dim
    }

    pub fn gamma(&self, i: usize) -> &CMatrix {
        &self.gammas[i]
    }

    /// Clifford action of a vector given by orthonormal-frame components.
    pub fn vector_matrix(&self, v: &[f64]) -> CMatrix {
        assert_eq!(v.len(), self.n);
        let mut out = CMatrix::zeros(self.spinor_dim, self.spinor_dim);
        for (vi, gamma) in v.iter().zip(&self.gammas) {
            if *vi != 0.0 {
                out += gamma * Complex64::new(*vi, 0.0);
            }
        }
        out
    }

    /// `(Σ v_i γ_i) ψ`.
    pub fn multiply(&self, v: &[f64], psi: &CVector) -> CVector {
        let mut out = CVector::zeros(self.spinor_dim);
        for (vi, gamma) in v.iter().zip(&self.gammas) {
            if *vi != 0.0 {
                out += gamma * psi * Complex64::new(*vi, 0.0);
            }
        }
        out
    }

    /// Spin representation `τ(A) = -¼ Σ A_{ab} γ_a γ_b` of a skew matrix.
    pub fn bivector_rep(&self, a: &DMatrix<f64>) -> CMatrix {
        let mut out = CMatrix::zeros(self.spinor_dim, self.spinor_dim);
        for p in 0..self.n {
            for q in 0..self.n {
                if p == q || a[(p, q)] == 0.0 {
                    continue;
                }
                let coeff = Complex64::new(-0.25 * a[(p, q)], 0.0);
                out += &self.gammas[p] * &self.gammas[q] * coeff;
            }
        }
        out
    }
}

/// The complex volume element `ω_c = i^{⌊n/2⌋} γ_1 ⋯ γ_n` of a dimension-n
/// algebra. For even n it squares to the identity and splits the spinor
/// space into the ±1 chirality halves; for odd n it is central and is
/// returned flagged, without projectors.
#[derive(Clone, Debug)]
pub struct VolumeElement {
    pub matrix: CMatrix,
    /// Set for odd-dimensional algebras, where ω_c commutes with the whole
    /// algebra and does not split the spinor space.
    pub central: bool,
    /// Eigenprojectors `P± = (Id ± ω_c)/2` when `ω_c² = Id` (even n).
    pub projectors: Option<(CMatrix, CMatrix)>,
}

pub fn volume_element(alg: &CliffordAlgebra) -> VolumeElement {
    let d = alg.spinor_dim();
    let mut omega = CMatrix::identity(d, d);
    for gamma in &alg.gammas {
        omega = &omega * gamma;
    }
    let power = (alg.dim() / 2) % 4;
    let phase = match power {
        0 => ONE,
        1 => I,
        2 => -ONE,
        _ => -I,
    };
    omega *= phase;
    let central = alg.dim() % 2 == 1;
    let projectors = if central {
        None
    } else {
        let id = CMatrix::identity(d, d);
        let half = Complex64::new(0.5, 0.0);
        Some(((&id + &omega) * half, (&id - &omega) * half))
    };
    VolumeElement {
        matrix: omega,
        central,
        projectors,
    }
}

/// The hypersurface identification of an (n+1)-dimensional ambient spinor
/// space (its `+1` chirality half when n is odd) with the intrinsic
/// dimension-n spinor space.
///
/// `map` satisfies the intertwining relation
/// `map (γ^N_i γ^N_ν ψ) = γ^M_i (map ψ)` for `i = 1..n`, with `ν` the last
/// ambient index, and is a co-isometry (`map map† = Id`); for odd n it
/// annihilates the `-1` chirality half.
#[derive(Clone)]
pub struct Identification {
    pub ambient: Arc<CliffordAlgebra>,
    pub intrinsic: Arc<CliffordAlgebra>,
    pub map: CMatrix,
    /// Chirality projectors of the ambient algebra when n is odd.
    pub chirality: Option<(CMatrix, CMatrix)>,
}

impl Identification {
    pub fn intrinsic_dim(&self) -> usize {
        self.intrinsic.dim()
    }

    /// Apply the identification to an ambient spinor.
    pub fn restrict(&self, psi: &CVector) -> CVector {
        &self.map * psi
    }

    /// Largest deviation of the intertwining relation over all generators
    /// and ambient basis spinors.
    pub fn intertwining_residual(&self) -> f64 {
        let n = self.intrinsic.dim();
        let nu = self.ambient.gamma(n);
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let lhs = &self.map * (self.ambient.gamma(i) * nu);
            let rhs = self.intrinsic.gamma(i) * &self.map;
            worst = worst.max((lhs - rhs).camax());
        }
        worst
    }
}

/// Construct the identification for an ambient algebra of dimension
/// `n + 1 <= 9` by solving the intertwining constraints and freezing a
/// deterministic unitary scaling.
pub fn hypersurface_identification(ambient: &Arc<CliffordAlgebra>) -> Result<Identification> {
    let ambient_dim = ambient.dim();
    if ambient_dim < 2 {
        return Err(Error::AlgebraDimension(ambient_dim));
    }
    let n = ambient_dim - 1;
    let intrinsic = Arc::new(clifford_algebra(n)?);
    let d_n = ambient.spinor_dim();
    let d_m = intrinsic.spinor_dim();
    let odd = n % 2 == 1;

    let chirality = if odd {
        let vol = volume_element(ambient);
        Some(vol.projectors.expect("even ambient algebra splits"))
    } else {
        None
    };
    let projector = chirality
        .as_ref()
        .map(|(p, _)| p.clone())
        .unwrap_or_else(|| CMatrix::identity(d_n, d_n));

    // Stack the constraints ι (A_i P) - B_i ι P = 0 (and ι P₋ = 0 for odd
    // n) as a linear system on vec(ι), column-major.
    let unknowns = d_m * d_n;
    let mut rows: Vec<CMatrix> = Vec::new();
    let nu = ambient.gamma(n);
    let id_m = CMatrix::identity(d_m, d_m);
    for i in 0..n {
        let a_i = ambient.gamma(i) * nu;
        let ap = &a_i * &projector;
        let block = ap.transpose().kronecker(&id_m)
            - projector.transpose().kronecker(intrinsic.gamma(i));
        rows.push(block);
    }
    if let Some((_, p_minus)) = &chirality {
        rows.push(p_minus.transpose().kronecker(&id_m));
    }
    let total_rows: usize = rows.iter().map(|r| r.nrows()).sum();
    let mut system = CMatrix::zeros(total_rows, unknowns);
    let mut offset = 0;
    for block in rows {
        system
            .view_mut((offset, 0), (block.nrows(), unknowns))
            .copy_from(&block);
        offset += block.nrows();
    }

    let svd = system.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    // Smallest singular direction spans the intertwiner.
    let mut smallest = 0;
    for (k, s) in svd.singular_values.iter().enumerate() {
        if *s < svd.singular_values[smallest] {
            smallest = k;
        }
    }
    let null_vec = v_t.row(smallest).transpose().conjugate();
    let mut map = CMatrix::zeros(d_m, d_n);
    for col in 0..d_n {
        for row in 0..d_m {
            map[(row, col)] = null_vec[col * d_m + row];
        }
    }

    // Scale to a co-isometry and fix the global phase deterministically.
    let gram = &map * map.adjoint();
    let scale = (gram.trace().re / d_m as f64).sqrt();
    if scale < 1e-12 {
        return Err(Error::IdentificationFailed {
            index: 0,
            residual: f64::INFINITY,
        });
    }
    map /= Complex64::new(scale, 0.0);
    let phase = map
        .iter()
        .find(|z| z.norm() > 0.5 / (d_n as f64))
        .map(|z| z / z.norm())
        .unwrap_or(ONE);
    map *= phase.conj();

    let ident = Identification {
        ambient: ambient.clone(),
        intrinsic,
        map,
        chirality,
    };

    let residual = ident.intertwining_residual();
    if residual > 1e-13 {
        // locate the worst generator for the report
        let mut worst = (0, 0.0f64);
        for i in 0..n {
            let lhs = &ident.map * (ident.ambient.gamma(i) * ident.ambient.gamma(n));
            let rhs = ident.intrinsic.gamma(i) * &ident.map;
            let dev = (lhs - rhs).camax();
            if dev > worst.1 {
                worst = (i, dev);
            }
        }
        return Err(Error::IdentificationFailed {
            index: worst.0,
            residual: worst.1,
        });
    }
    let gram_dev = (&ident.map * ident.map.adjoint() - CMatrix::identity(d_m, d_m)).camax();
    if gram_dev > 1e-13 {
        return Err(Error::IdentificationFailed {
            index: 0,
            residual: gram_dev,
        });
    }
    Ok(ident)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_spinor(alg: &CliffordAlgebra, seed: u64) -> CVector {
        use rand::Rng;
        let mut rng = crate::testutil::rng(seed);
        CVector::from_fn(alg.spinor_dim(), |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    }

    #[test]
    fn defining_relations_exact_up_to_dim_nine() {
        for n in 1..=9 {
            let alg = clifford_algebra(n).unwrap();
            assert_eq!(alg.spinor_dim(), 1 << (n / 2));
            let d = alg.spinor_dim();
            for i in 0..n {
                let gi = alg.gamma(i);
                assert_eq!((gi.adjoint() + gi).camax(), 0.0, "γ_{i} not skew-Hermitian");
                for j in 0..n {
                    let gj = alg.gamma(j);
                    let anti = gi * gj + gj * gi;
                    let expected = if i == j {
                        CMatrix::identity(d, d) * Complex64::new(-2.0, 0.0)
                    } else {
                        CMatrix::zeros(d, d)
                    };
                    assert_eq!((anti - expected).camax(), 0.0, "relation failed at ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn rejects_out_of_range_dimension() {
        assert!(clifford_algebra(0).is_err());
        assert!(clifford_algebra(10).is_err());
    }

    #[test]
    fn volume_element_squares_to_identity_in_even_dims() {
        for n in [2, 4, 6, 8] {
            let alg = clifford_algebra(n).unwrap();
            let vol = volume_element(&alg);
            assert!(!vol.central);
            let d = alg.spinor_dim();
            let sq = &vol.matrix * &vol.matrix;
            assert!((sq - CMatrix::identity(d, d)).camax() < 1e-14);
            // equal ±1 multiplicities and projector algebra
            let (p, q) = vol.projectors.as_ref().unwrap();
            assert!((p.trace().re - d as f64 / 2.0).abs() < 1e-13);
            assert!(((p + q) - CMatrix::identity(d, d)).camax() < 1e-14);
            assert!((p * q).camax() < 1e-14);
            assert!((p * p - p).camax() < 1e-14);
        }
    }

    #[test]
    fn volume_element_is_central_in_odd_dims() {
        for n in [3, 5, 7] {
            let alg = clifford_algebra(n).unwrap();
            let vol = volume_element(&alg);
            assert!(vol.central);
            assert!(vol.projectors.is_none());
            for i in 0..n {
                let commutator = &vol.matrix * alg.gamma(i) - alg.gamma(i) * &vol.matrix;
                assert!(commutator.camax() < 1e-14);
            }
        }
    }

    #[test]
    fn two_dimensional_volume_has_split_spectrum() {
        let alg = clifford_algebra(2).unwrap();
        let vol = volume_element(&alg);
        // ω_c = i γ₁γ₂ = σ_z here: eigenvalues +1 and -1.
        let m = &vol.matrix;
        assert!((m[(0, 0)] - ONE).norm() < 1e-15);
        assert!((m[(1, 1)] + ONE).norm() < 1e-15);
        assert!(m[(0, 1)].norm() < 1e-15 && m[(1, 0)].norm() < 1e-15);
    }

    #[test]
    fn clifford_square_is_minus_norm() {
        let alg = clifford_algebra(3).unwrap();
        let psi = random_spinor(&alg, 3);
        let v = [0.3, -1.2, 0.4];
        let vv = alg.multiply(&v, &alg.multiply(&v, &psi));
        let norm2: f64 = v.iter().map(|x| x * x).sum();
        let dev = (vv + &psi * Complex64::new(norm2, 0.0)).camax();
        assert!(dev < 1e-13);
    }

    #[test]
    fn clifford_multiplication_is_skew_symmetric() {
        for n in [2, 3, 4, 5] {
            let alg = clifford_algebra(n).unwrap();
            let psi = random_spinor(&alg, n as u64);
            for i in 0..n {
                let e_i: Vec<f64> = (0..n).map(|k| if k == i { 1.0 } else { 0.0 }).collect();
                let gpsi = alg.multiply(&e_i, &psi);
                assert!(hermitian(&gpsi, &psi).re.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn bivector_rep_generates_rotations() {
        // exp(τ(A)) γ(v) exp(-τ(A)) = γ(exp(A) v) for a plane rotation.
        let alg = clifford_algebra(3).unwrap();
        let theta = 0.7;
        let mut a = DMatrix::zeros(3, 3);
        a[(1, 0)] = theta;
        a[(0, 1)] = -theta;
        let lift = crate::spin::restriction::complex_exp(&alg.bivector_rep(&a));
        let lift_inv = crate::spin::restriction::complex_exp(&alg.bivector_rep(&(-&a)));
        let v = [1.0, 0.0, 0.0];
        let rotated = [theta.cos(), theta.sin(), 0.0];
        let lhs = &lift * alg.vector_matrix(&v) * &lift_inv;
        let rhs = alg.vector_matrix(&rotated);
        assert!((lhs - rhs).camax() < 1e-12);
    }

    #[test]
    fn identification_exists_for_all_supported_dimensions() {
        for ambient_dim in 2..=9 {
            let ambient = Arc::new(clifford_algebra(ambient_dim).unwrap());
            let ident = hypersurface_identification(&ambient).unwrap();
            let n = ambient_dim - 1;
            assert_eq!(ident.intrinsic.dim(), n);
            let residual = ident.intertwining_residual();
            assert!(
                residual < 1e-13,
                "dim {ambient_dim}: intertwining residual {residual}"
            );
            if n % 2 == 1 {
                // ι lives on the +1 half: dim Σ⁺ equals the intrinsic dim
                let (p, m) = ident.chirality.as_ref().unwrap();
                assert_eq!(p.trace().re.round() as usize, ident.intrinsic.spinor_dim());
                assert!((&ident.map * m).camax() < 1e-13);
            }
        }
    }

    #[test]
    fn identification_is_an_isometry() {
        for ambient_dim in [3, 4, 5] {
            let ambient = Arc::new(clifford_algebra(ambient_dim).unwrap());
            let ident = hypersurface_identification(&ambient).unwrap();
            for seed in 0..100 {
                let psi = random_spinor(&ambient, 100 + seed);
                // project to the domain half when n is odd
                let psi = match &ident.chirality {
                    Some((p, _)) => p * psi,
                    None => psi,
                };
                let restricted = ident.restrict(&psi);
                assert!((norm(&restricted) - norm(&psi)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn induced_multiplication_satisfies_clifford_relation() {
        // (X ·_N ν ·_N)² ψ = -|X|² ψ for X ⟂ ν.
        let ambient = Arc::new(clifford_algebra(4).unwrap());
        let psi = random_spinor(&ambient, 77);
        let x = [0.4, -0.7, 1.1, 0.0];
        let nu = [0.0, 0.0, 0.0, 1.0];
        let act = |p: &CVector| ambient.multiply(&x, &ambient.multiply(&nu, p));
        let twice = act(&act(&psi));
        let norm2: f64 = x.iter().map(|v| v * v).sum();
        assert!((twice + psi * Complex64::new(norm2, 0.0)).camax() < 1e-13);
    }

    #[test]
    fn identification_is_deterministic() {
        let ambient = Arc::new(clifford_algebra(5).unwrap());
        let a = hypersurface_identification(&ambient).unwrap();
        let b = hypersurface_identification(&ambient).unwrap();
        assert_eq!((a.map - b.map).camax(), 0.0);
    }

    proptest! {
        #[test]
        fn multiply_is_bilinear(c1 in -2.0f64..2.0, c2 in -2.0f64..2.0) {
            let alg = clifford_algebra(2).unwrap();
            let psi = random_spinor(&alg, 5);
            let phi = random_spinor(&alg, 6);
            let v = [c1, c2];
            let lhs = alg.multiply(&v, &(&psi + &phi));
            let rhs = alg.multiply(&v, &psi) + alg.multiply(&v, &phi);
            prop_assert!((lhs - rhs).camax() < 1e-12);
        }
    }
}
