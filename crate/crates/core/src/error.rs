//! Error type shared by all modules.

use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("leading coefficient vanishes on edge {edge} at s = {s}")]
    EllipticityViolation { edge: usize, s: f64 },

    #[error("leading coefficient is zero at endpoint {endpoint} of vertex {vertex}")]
    ZeroLeadingCoefficient { vertex: usize, endpoint: usize },

    #[error("{context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("delta-type parameters (nu, c') are all zero")]
    AllZeroParameters,

    #[error("lambda = {lambda} lies on a background ray; no root with positive real part")]
    OnBackgroundRay { lambda: Complex64 },

    #[error("invalid sector: {reason}")]
    InvalidSector { reason: String },

    #[error("sector index {index} out of range (vertex has {count} background sectors)")]
    UnknownSector { index: usize, count: usize },

    #[error("target of {requested} sectors is too large for a vertex with k = {k}")]
    TargetTooLarge { requested: usize, k: usize },

    #[error("constructed coupling failed self-verification: {details}")]
    VerificationFailed { details: String },

    #[error("dilation parameter must be positive, got {rho}")]
    NonpositiveRho { rho: f64 },

    #[error("row reduction produced a rank-deficient limiting domain")]
    RankDeficient,

    #[error("background ray at angle {ray_angle} rad meets the sector")]
    SectorHitsBackgroundSpectrum { ray_angle: f64 },

    #[error("edge {edge} has a nonzero Coulomb term; graph discretization supports c ≡ 0 only")]
    SingularPotentialUnsupported { edge: usize },

    #[error("grid size {n} is below the minimum of {min} points")]
    GridTooCoarse { n: usize, min: usize },

    #[error("half-line length must be positive, got {l}")]
    NonpositiveLength { l: f64 },

    #[error("radii must be strictly increasing and positive")]
    InvalidRadii,

    #[error("too few samples: at least two decades of |lambda| are required")]
    TooFewSamples,

    #[error("invalid input: {}", problems.join("; "))]
    InvalidInput { problems: Vec<String> },
}
