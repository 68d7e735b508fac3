use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("point {z} lies in the compact set E (|Φ| = {level})")]
    PointInsideSet { z: Complex64, level: f64 },

    #[error("|w| = {modulus} must exceed 1")]
    InsideUnitDisk { modulus: f64 },

    #[error("level-curve index ρ = {0} must exceed 1")]
    InvalidRadius(f64),

    #[error("{nodes} quadrature nodes cannot resolve {coefficients} coefficients (need at least {required})")]
    TooFewNodes {
        nodes: usize,
        coefficients: usize,
        required: usize,
    },

    #[error("non-finite sample {value} of the integrand at node {index} (t = {t})")]
    NonFiniteSample {
        index: usize,
        t: Complex64,
        value: Complex64,
    },

    #[error("indeterminate rate: no coefficient in the window rises above the noise floor {floor:e}")]
    IndeterminateRate { floor: f64 },

    #[error("invalid multi-index: {0}")]
    InvalidMultiIndex(String),

    #[error("invalid function specification: {0}")]
    InvalidFunction(String),

    #[error("the vector function has no poles")]
    PoleFree,

    #[error("root finding failed for degree {degree}: {reason} (worst relative residual {residual:e})")]
    RootFinding {
        degree: usize,
        reason: String,
        residual: f64,
    },

    #[error("evaluation at {z}, a zero of the denominator")]
    PoleEvaluation { z: Complex64 },

    #[error("insufficient data for a rate fit: {available} usable points, at least {required} required")]
    InsufficientData { available: usize, required: usize },

    #[error("pole matching supports at most 8 roots, got {0}")]
    TooManyPoles(usize),

    #[error("Cauchy circles of radius {eps} around {a} and {b} overlap")]
    OverlappingCircles {
        eps: f64,
        a: Complex64,
        b: Complex64,
    },

    #[error("{0}")]
    InvalidArgument(String),
}
