//! Invariant polynomials of symbols and the `sp(2n)` action on them.

mod operator;
mod signature;
mod sp_action;

use thiserror::Error;

pub use operator::{transvectant_operator_matrix, OperatorMode, TransvectantOperatorMatrix};
pub(crate) use operator::generic_power_traces;
pub use signature::{
    evaluate_labels, float_signature, invariant_signature, is_nondegenerate, pairing_form, trace_invariant_value, trace_invariant_values,
    trace_invariants, InvariantLabel, InvariantSignature, SignatureConfig, StructureKind,
};
pub use sp_action::{
    generator_images, hamiltonian_field, hamiltonian_matrix, hamiltonian_traces, infinitesimal_action, linear_derivation,
    sp_orbit_dimension, sp_stabilizer_dimension, SpBasisAction, SpGenerator,
};

use crate::error::PolyError;
use crate::transvect::TransvectError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvarError {
    #[error(transparent)]
    Transvect(#[from] TransvectError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("even-mode operator needs an even degree, got {0}")]
    OddDegree(usize),
    #[error("operator mode {mode:?} is out of range for degree {degree}")]
    OutOfRange { mode: OperatorMode, degree: usize },
    #[error("invariant {label} is not admissible for dimension {dim} and degree {degree}")]
    Inadmissible { label: InvariantLabel, dim: usize, degree: usize },
    #[error("invariant {0} is not a polynomial in the symbol")]
    NotPolynomial(InvariantLabel),
    #[error("signature configuration selects no invariants")]
    EmptyLabelSet,
    #[error("Hamiltonian matrix needs a quadratic symbol, got degree {0}")]
    NotQuadratic(usize),
    #[error("symbol has a non-finite coefficient")]
    NonFinite,
    #[error("internal: {0}")]
    Internal(String),
}
