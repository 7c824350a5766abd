//! Exact computation of Adams operations on twisted K-theory of simple,
//! simply-connected compact Lie groups.
//!
//! The twisted equivariant K-theory of such a group acting on itself by
//! conjugation is the Verlinde (fusion) algebra of the corresponding level;
//! Adams operations act on it by an affine scaling of highest weights.  The
//! nonequivariant theory is an exterior algebra over a cyclic group, reached
//! through a Koszul resolution of the fusion algebra over the representation
//! ring.  Everything here is integer-exact: weights are Dynkin-label vectors,
//! coefficients are arbitrary-precision integers, inner products are exact
//! rationals.
//!
//! Module layout mirrors the mathematical pipeline:
//! - [`intlin`]: Hermite/Smith normal forms, kernel bases, sparse echelon.
//! - [`rootsys`]: root systems, Weyl primitives, the basic inner product.
//! - [`repring`]: representation ring of G (dimensions, weight
//!   multiplicities, tensor products, classical Adams operations).
//! - [`verlinde`]: fusion algebras at a twist level, alcove reduction,
//!   pushforward, the fusion ideal.
//! - [`torus`]: restriction to the maximal torus, an independent model used
//!   as a cross-check oracle.
//! - [`adams`]: equivariant Adams operations and the induced coefficient
//!   action.
//! - [`koszul`]: chain-level lifts and the action on exterior-algebra
//!   generators of the nonequivariant theory.

pub mod adams;
pub mod intlin;
pub mod koszul;
pub mod repring;
pub mod rootsys;
pub mod torus;
pub mod verlinde;

use thiserror::Error;

/// Errors surfaced by fallible operations; internal invariant violations
/// panic instead.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Lie type `{0}`: {1}")]
    InvalidLieType(String, String),
    #[error("twist must be nonzero")]
    ZeroTwist,
    #[error("weight has {got} labels, expected {want}")]
    RankMismatch { got: usize, want: usize },
    #[error("weight {0:?} is not dominant")]
    NonDominant(Vec<i64>),
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("ideal membership not found within support bound {0}")]
    SupportBoundExceeded(i64),
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
