//! Simultaneous Padé-Faber approximants of vectors of meromorphic functions.
//!
//! For a compact set E with a closed-form exterior map Φ (disk, segment or
//! ellipse), a vector `F = (F_1, …, F_d)` of functions holomorphic on E and a
//! multi-index `m`, the approximant is a common denominator `Q_{n,m}` of
//! degree at most `|m|` and numerators `P_{n,m,α}` of degree at most `n − m_α`
//! such that the Faber expansion of `Q F_α − P_α` starts at index `n + 1`.
//!
//! * [`geometry`]: Φ, Ψ = Φ⁻¹, Φ' and level curves.
//! * [`faber`]: Faber polynomials and coefficients.
//! * [`simpade`]: the defect system, its solution and normalization.
//! * [`analysis`]: row sequences, rate fits and diagnostics.

pub mod analysis;
pub mod error;
pub mod faber;
pub mod function;
pub mod geometry;
pub mod linalg;
pub mod polynomial;
pub mod precision;
pub mod simpade;

pub use analysis::{
    classify_fit, fit_rate, match_poles, polewise_independence_delta, run_row_sequence,
    theoretical_bounds, CompactGrid, DeltaReport, FitOutcome, FitSettings, GridKind, RateFit,
    RowEnd, RowRecord, RowSequenceReport, RowSettings, TheoreticalBounds,
};
pub use error::{Error, Result};
pub use faber::{
    estimate_rho0, evaluate_faber_series, faber_basis, faber_coefficients, FaberBasis,
    FaberCoefficients,
};
pub use function::{ComplexFunction, ComponentFunction, FnFunction, PrincipalPart, VectorFunctionSpec};
pub use geometry::{Geometry, GeometryKind};
pub use polynomial::{polynomial_roots, ComplexPolynomial};
pub use precision::{DoubleDouble, Precision};
pub use simpade::{
    defect_matrix, evaluate_approximant, normalize_denominator, numerators, pole_profile,
    simultaneous_pade, solve_denominator, ApproximantResult, MultiIndex, PoleProfile,
    QuadratureSettings, Tolerances,
};
