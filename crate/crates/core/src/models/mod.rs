//! Coefficient invariants, model surfaces and model comparison.
//!
//! Given `n` scalar invariants `I_1..I_n` of an operator `A` on an
//! `n`-dimensional base, `y = I(x)` is a coordinate system in which the
//! coefficients of `A` are again invariants. The map
//! `x ↦ (y, I_α(x))` sampled on a grid is the model surface of `A`; two
//! operators are equivalent only if their model surfaces coincide and
//! the induced point map preserves the symplectic form.

mod compare;
mod field;
mod surface;

use thiserror::Error;

pub use compare::{model_compare, EquivalenceVerdict, PsiSample, Witness, DEFAULT_MODEL_TOL};
pub use field::{apply_operator, jacobian_determinant, model_coefficients, symbol_invariant_field, InvariantField};
pub use surface::{model_surface, ModelSample, ModelSurface};

use crate::connect::ConnectError;
use crate::invar::{InvarError, InvariantLabel};
use crate::scalar::{format_rational, Rational};

fn fmt_point(p: &[Rational]) -> String {
    let parts: Vec<String> = p.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

fn fmt_opt_point(p: &Option<Vec<Rational>>) -> String {
    match p {
        Some(p) => format!(" at {}", fmt_point(p)),
        None => " identically".into(),
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Invar(#[from] InvarError),
    #[error(transparent)]
    Connect(#[from] ConnectError),
    #[error("label {label} is not a polynomial invariant admissible for dimension {dim}, order {order}")]
    Inadmissible { label: InvariantLabel, dim: usize, order: usize },
    #[error("chart needs {expected} invariant fields, got {found}")]
    ChartSize { expected: usize, found: usize },
    #[error("chart Jacobian is degenerate{}", fmt_opt_point(.point))]
    NotAdjusted { point: Option<Vec<Rational>> },
    #[error("sample grid is empty")]
    EmptyGrid,
    #[error("grid point has {found} coordinates, expected {expected}")]
    PointArity { expected: usize, found: usize },
    #[error("chart values coincide at {} and {}", fmt_point(.a), fmt_point(.b))]
    ChartCollision { a: Vec<Rational>, b: Vec<Rational> },
    #[error("surfaces are not comparable: {0}")]
    ChartMismatch(String),
}
