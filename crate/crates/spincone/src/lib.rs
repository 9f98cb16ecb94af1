//! Chart-local verification engine for spin geometry.
//!
//! The crate builds coordinate-chart manifolds, spinor fields on them and
//! generalized warped products/cones, then machine-checks closed-form
//! connection, curvature and energy-momentum identities against an
//! independent finite-difference oracle.
//!
//! The layers, bottom to top:
//!
//! * [`chart`] — open-box charts and the point-indexed fields on them.
//! * [`catalog`] — built-in example geometries (spheres, cylinders,
//!   products, flat charts) with their immersions into flat space.
//! * [`tensorcalc`] — the numeric differentiation engine and classical
//!   tensor calculus: Christoffel symbols, curvature, covariant
//!   derivatives. This is the oracle everything else is checked against.
//! * [`clifford`] — gamma-matrix Clifford algebras, the complex volume
//!   element and the hypersurface spinor identification.
//! * [`spin`] — spinor fields, the spin connection, restriction of ambient
//!   constant spinors, the energy-momentum tensor and the T-Killing
//!   machinery.
//! * [`warped`] — the generalized warped product `(M x I, g + f(t) h + dt²)`
//!   and its cone specialization, with closed-form connection and curvature
//!   checked against the oracle applied to the ambient metric.
//! * [`verify`] — named verification suites, deterministic sampling and
//!   machine-readable reports; the `spincone` binary drives these.

pub mod catalog;
pub mod chart;
pub mod clifford;
pub mod error;
pub mod spin;
pub mod tensorcalc;
pub mod verify;
pub mod warped;

pub use chart::{
    BoxDomain, Chart, EndoField, Immersion, MetricField, SymTensorField, VectorField,
    orthonormal_frame,
};
pub use error::{Error, Result};
pub use tensorcalc::{DiffEngine, Scheme};

#[cfg(test)]
pub(crate) mod testutil {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }
}
