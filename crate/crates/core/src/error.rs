use alloc::boxed::Box;
use alloc::string::String;

use crate::lattice::PartialEnumeration;

/// Which inner-product or weight condition a neighbor transform rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformCondition {
    /// `<x,x> = 0`
    XSelfOrthogonal,
    /// `<y,y> = 0`
    YSelfOrthogonal,
    /// `<x,y> = 0`
    XYOrthogonal,
    /// `wt_E(x) = 0 (mod 4k)`
    XWeight,
    /// `wt_E(y) = 0 (mod 4k)`
    YWeight,
    /// Base code is not self-dual.
    BaseSelfDual,
    /// Base code is not Type II.
    BaseTypeII,
}

impl core::fmt::Display for TransformCondition {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let s = match self {
            Self::XSelfOrthogonal => "<x,x> != 0",
            Self::YSelfOrthogonal => "<y,y> != 0",
            Self::XYOrthogonal => "<x,y> != 0",
            Self::XWeight => "wt_E(x) != 0 mod 4k",
            Self::YWeight => "wt_E(y) != 0 mod 4k",
            Self::BaseSelfDual => "base code is not self-dual",
            Self::BaseTypeII => "base code is not Type II",
        };
        f.write_str(s)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u32),
    #[error("{op} requires an even modulus, got Z_{m}")]
    OddModulus { op: &'static str, m: u32 },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("modulus mismatch: Z_{left} vs Z_{right}")]
    ModulusMismatch { left: u32, right: u32 },
    #[error("residue {value} out of range for Z_{m}")]
    ResidueOutOfRange { value: u32, m: u32 },
    #[error("dimension must be positive")]
    EmptyDimension,
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("code is not self-dual (A*A^T != -I)")]
    NotSelfDual,
    #[error("code is not Type II")]
    NotTypeII,
    #[error("transform precondition failed: {0}")]
    Transform(TransformCondition),
    #[error("instance too large: {what} ({size} > {limit})")]
    TooLarge { what: &'static str, size: u128, limit: u128 },
    #[error("rows are linearly dependent")]
    DependentRows,
    #[error("gram matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("parameters outside the regime of {check}: {detail}")]
    OutOfRegime { check: &'static str, detail: String },
    #[error("enumeration node budget exhausted after {} nodes", .0.nodes)]
    NodeBudgetExhausted(Box<PartialEnumeration>),
    #[error("cross-check mismatch between two enumeration runs")]
    CrossCheckMismatch,
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("signature configs differ")]
    ConfigMismatch,
}

pub type Result<T> = core::result::Result<T, Error>;
