use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown chart `{name}`; available: {available}")]
    UnknownChart { name: String, available: String },

    #[error("invalid parameters for `{name}`: {reason}")]
    InvalidParams { name: String, reason: String },

    #[error("empty interval on axis {axis}: [{lo}, {hi}]")]
    EmptyInterval { axis: usize, lo: f64, hi: f64 },

    #[error("point {point:?} leaves chart `{label}` on axis {axis} (reach {reach:.3e})")]
    OutsideDomain {
        label: String,
        point: Vec<f64>,
        axis: usize,
        reach: f64,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("metric not positive definite at {point:?}{detail}")]
    NotPositiveDefinite { point: Vec<f64>, detail: String },

    #[error("immersion normal invalid at {point:?}: {reason}")]
    BadNormal { point: Vec<f64>, reason: String },

    #[error("adapted frame of the immersion is negatively oriented (det {det:.3}); restriction needs a positively oriented chart")]
    FrameNotOriented { det: f64 },

    #[error("spinor algebra dimension {0} outside the supported range 1..=9")]
    AlgebraDimension(usize),

    #[error("identification intertwining check failed for basis index {index} (residual {residual:.3e})")]
    IdentificationFailed { index: usize, residual: f64 },

    #[error("ambient spinor has no component in the chirality half used by the restriction")]
    ChiralityProjectionVanishes,

    #[error("spinor field below the zero-set threshold at {point:?} (|psi| = {norm:.3e})")]
    ZeroSet { point: Vec<f64>, norm: f64 },

    #[error("step {step:.3e} too large for rotation logarithm (|Q - I| = {defect:.3})")]
    PathStepTooLarge { step: f64, defect: f64 },

    #[error("warp function must vanish at t = 1 (f(1) = {0:.3e})")]
    WarpNotAnchored(f64),

    #[error("warp derivative inconsistent with f at t = {t}: |{which} - finite difference| = {dev:.3e}")]
    WarpDerivativeInconsistent { t: f64, which: String, dev: f64 },

    #[error("g + f(t)h loses positivity: min eigenvalue {eig:.3e} < {margin:.1e} at point {point:?}, t = {t}")]
    WarpNotSpd {
        point: Vec<f64>,
        t: f64,
        eig: f64,
        margin: f64,
    },

    #[error("hypotheses of Prop. 4.1 not met: {0}")]
    HypothesesNotMet(String),

    #[error("base metric is not block-diagonal with a flat leading {k}x{k} block (deviation {dev:.3e} at {point:?})")]
    NotASplitting { k: usize, dev: f64, point: Vec<f64> },

    #[error("unknown suite `{name}`; did you mean `{suggestion}`?")]
    UnknownSuite { name: String, suggestion: String },

    #[error("unknown geometry `{name}`; did you mean `{suggestion}`?")]
    UnknownGeometry { name: String, suggestion: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
