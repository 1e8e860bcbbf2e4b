//! Exact polynomial kernel: multi-indices, homogeneous symbols, base
//! polynomials, linear maps and symbol fields.

mod base;
mod homogeneous;
mod linear;
mod multi_index;
mod symbol_field;

pub use base::{eval_at, Poly};
pub use homogeneous::HomogeneousPoly;
pub use linear::LinearMap;
pub use multi_index::{indices_up_to, monomial_basis, MultiIndex};
pub use symbol_field::{eval_matrix_f64, to_f64_point, SymbolField};

use crate::error::PolyError;
use crate::scalar::{Coeff, Field};

/// Product of two symbols over the same space.
pub fn poly_mul<R: Coeff>(p: &HomogeneousPoly<R>, q: &HomogeneousPoly<R>) -> Result<HomogeneousPoly<R>, PolyError> {
    p.mul(q)
}

/// `∂P/∂ξ_i` with zero-based `i`.
pub fn partial_derivative<R: Coeff>(p: &HomogeneousPoly<R>, i: usize) -> Result<HomogeneousPoly<R>, PolyError> {
    p.partial(i)
}

/// `(g·P)(ξ) = P(g⁻¹ξ)`.
pub fn linear_substitute<R: Field>(p: &HomogeneousPoly<R>, g: &LinearMap<R>) -> Result<HomogeneousPoly<R>, PolyError> {
    p.linear_substitute(g)
}
