//! Exact computation with finite-order jets of Riemannian metrics at a point.
//!
//! Everything is carried out over arbitrary-precision rationals, so every
//! downstream decision (normal-form checks, stabilizer groups, orbit
//! equivalence) is exact rather than approximate. The pieces:
//!
//! - [`jet`] — truncated multivariate power series and jets of
//!   origin-preserving diffeomorphisms, including composition and inversion.
//! - [`metric`] — metric jets, pullback, Christoffel symbols and the
//!   Gaussian-curvature pipeline for surfaces.
//! - [`normal_form`] — the formal exponential map, reduction to Gauss-Lemma
//!   normal form, normal tensors and the dimension formulas for normal-tensor
//!   and moduli spaces.
//! - [`strata2d`] — the dimension-2 classification: exact O(2) stabilizers of
//!   h-jets, orbit equivalence with witnesses, curvature invariant vectors and
//!   the stratum census.
//! - [`sample`] — seeded, reproducible generators used by the test suites and
//!   by the CLI's sampling preset.

// Index loops mirror the tensor notation here; iterator rewrites would not.
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod jet;
pub mod linalg;
pub mod metric;
pub mod normal_form;
pub mod rational;
pub mod sample;
pub mod strata2d;

pub use error::Error;
pub use rational::Rational;
