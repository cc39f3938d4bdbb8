//! Exact computations in Veronese subrings of q-skew polynomial rings at
//! roots of unity: centers, quasi-bases, regular traces, discriminants and
//! automorphism-group ingredients.
//!
//! All arithmetic is exact (arbitrary-precision rationals over the m-th
//! cyclotomic field); there is no floating point anywhere. The ambient ring
//! is k_q[x_1, ..., x_n] with x_j x_i = q x_i x_j for i < j, q a primitive
//! m-th root of unity, and the objects of study are its v-th Veronese
//! subrings.

pub mod autos;
pub mod basis;
pub mod center;
pub mod cyclo;
pub mod discriminant;
pub mod skew_ring;

pub use autos::{AutoKind, AutoSpec, Derivation};
pub use basis::QuasiBasis;
pub use center::CenterLattice;
pub use cyclo::CycScalar;
pub use discriminant::{CentralElement, GcdResult};
pub use skew_ring::{Monomial, RingParams, SkewElement};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QvError {
    #[error("cyclotomic order mismatch: {left} vs {right}")]
    OrderMismatch { left: u32, right: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid ring parameters: {0}")]
    InvalidParams(String),
    #[error("element is not in the Veronese subring (degree not a multiple of v)")]
    NotInVeronese,
    #[error("exponent vector is not in H_v (coordinate sum not a multiple of v)")]
    NotInLattice,
    #[error("empty input")]
    EmptyInput,
    #[error("index {0} out of range")]
    OutOfRange(i64),
    #[error("automorphism family not applicable: {0}")]
    Inapplicable(String),
    #[error("derivation invariant failed: {0}")]
    DerivationInvariant(String),
    #[error("dense determinant of size {0} exceeds the supported bound")]
    DenseDeterminant(usize),
}
