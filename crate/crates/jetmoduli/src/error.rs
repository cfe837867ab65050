//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("jet orders differ: {0} vs {1}")]
    OrderMismatch(u32, u32),
    #[error("variable index {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },
    #[error("multi-index {index} has degree {degree}, above the jet order {order}")]
    DegreeAboveOrder { index: String, degree: u32, order: u32 },
    #[error("substitution target must have vanishing constant terms")]
    NonzeroConstantTerm,
    #[error("linear part is singular over the rationals")]
    SingularLinearPart,
    #[error("diffeomorphism jet of order {have} is too short: pullback of an order-{need} metric needs order {need_tau}")]
    PullbackOrder { have: u32, need: u32, need_tau: u32 },
    #[error("metric constant term is not symmetric positive definite")]
    NotPositiveDefinite,
    #[error("metric constant term is not the identity: {0}; apply a linear change of frame first (the exact LDL^T rescaling applies only when every pivot is the square of a rational)")]
    NotIdentityFrame(String),
    #[error("operation is only defined in dimension 2 (got {0})")]
    NotDimensionTwo(usize),
    #[error("jet order {have} too small: need at least {need}")]
    OrderTooSmall { have: u32, need: u32 },
    #[error("metric is not in normal form: the Gauss identity fails")]
    NotNormalForm,
    #[error("normal tensor violates a symmetry: {0}")]
    TensorSymmetry(String),
    #[error("h-representation extraction failed: {0}")]
    HFormInconsistent(String),
    #[error("constraint value is not of unit modulus: {0}")]
    NotUnitModulus(String),
    #[error("preset `{preset}` requires order r >= {min} (got r = {got})")]
    PresetOrder {
        preset: String,
        min: u32,
        got: u32,
    },
    #[error("invariant vector has order tag {0}; this operation needs order 4")]
    InvariantOrder(u8),
}
