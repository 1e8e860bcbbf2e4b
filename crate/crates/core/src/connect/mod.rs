//! Affine connections, quantization of symbols and the splitting of an
//! operator into its total symbol.
//!
//! Symmetric tensors are stored as polynomials in the fiber variables `ξ`
//! with coefficients polynomial in the base point. A covariant tensor
//! `T = Σ t_α ξ^α` pairs with a contravariant one `H = Σ h_α ξ^α` through
//! `⟨H, T⟩ = Σ α! h_α t_α`.

mod connection;
mod levi_civita;
mod operator;
mod quantize;
mod wagner;

use thiserror::Error;

pub use connection::{is_curvature_free, is_torsion_free, torsion_curvature, Connection, Curvature, Torsion};
pub use levi_civita::{levi_civita_at, levi_civita_from_second_order_symbol, ExpQuadraticSymbol};
pub use operator::DiffOperator;
pub use quantize::{quantize, symmetrized_covariant_derivative, total_symbol, TotalSymbol};
pub use wagner::{
    wagner_connection, wagner_connection_grid, GridConnection, WagnerOptions, WagnerSolution, GRID_RESIDUAL_TOL,
};

use crate::polyalg::{HomogeneousPoly, LinearMap, Poly, SymbolField};
use crate::scalar::{Coeff, Rational};

/// Fiber-homogeneous tensor field with polynomial coefficients.
pub type TensorField = HomogeneousPoly<Poly>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConnectError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("multi-index {alpha} exceeds the declared order {order}")]
    OrderExceeded { alpha: String, order: usize },
    #[error("affine map is singular")]
    SingularMap,
    #[error("Wagner connection needs a symbol of order at least 3, got {0}")]
    OrderTooLow(usize),
    #[error("symplectic structure needs an even dimension, got {0}")]
    OddDimension(usize),
    #[error("symbol is not of constant type: derivative in direction {direction} is not tangent to the orbit at {point:?}")]
    NotConstantType { point: Vec<Rational>, direction: usize },
    #[error("symbol is not regular at {point:?}: stabilizer has dimension {kernel_dim}")]
    NonRegular { point: Vec<Rational>, kernel_dim: usize },
    #[error("no polynomial Christoffel symbols up to degree {max_degree}; use grid mode")]
    NoPolynomialSolution { max_degree: usize },
    #[error("evaluation grid is empty")]
    EmptyGrid,
    #[error("quadratic symbol is degenerate")]
    DegenerateSymbol,
    #[error("symbol matrix has non-constant determinant, so its inverse is not polynomial")]
    NonPolynomialInverse,
    #[error("internal: {0}")]
    Internal(String),
}

/// Symbol field in coordinates `b = g a`: `σ'(b)(η) = σ(g⁻¹b)(gᵀη)`.
pub fn transport_symbol_field(field: &SymbolField, g: &LinearMap<Rational>) -> Result<SymbolField, ConnectError> {
    let d = field.fiber_dim();
    if g.dim() != d || field.base_dim() != d {
        return Err(ConnectError::Shape("transport needs matching base and fiber dimensions".into()));
    }
    let ginv = g.inverse().map_err(|_| ConnectError::SingularMap)?;
    let zero = vec![Rational::from_int(0); d];
    let gt = g.transpose().map(|c| Poly::constant(c.clone()));
    let moved = field.symbol().compose_linear(&gt).map_coeffs(|c| c.compose_affine(&ginv, &zero));
    SymbolField::new(d, moved).map_err(|e| ConnectError::Shape(e.to_string()))
}
