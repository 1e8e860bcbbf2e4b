use num_traits::Zero;

use super::base::Poly;
use super::homogeneous::HomogeneousPoly;
use super::linear::LinearMap;
use crate::error::PolyError;
use crate::scalar::{Rational, rational_to_f64};

/// A symbol whose coefficients depend polynomially on a base point:
/// `σ(a)(ξ) = Σ_α s_α(a) ξ^α` with `|α| = k`.
#[derive(Clone, PartialEq, Debug)]
pub struct SymbolField {
    base_dim: usize,
    symbol: HomogeneousPoly<Poly>,
}

impl SymbolField {
    pub fn new(base_dim: usize, symbol: HomogeneousPoly<Poly>) -> Result<Self, PolyError> {
        for (e, c) in symbol.terms() {
            if c.num_vars() > base_dim {
                return Err(PolyError::WrongArity { term: e.to_string(), expected: base_dim, found: c.num_vars() });
            }
        }
        Ok(SymbolField { base_dim, symbol })
    }

    /// The same symbol at every base point.
    pub fn constant(base_dim: usize, p: &HomogeneousPoly) -> Self {
        SymbolField { base_dim, symbol: p.map_coeffs(|c| Poly::constant(c.clone())) }
    }

    /// `σ(a) = g(a)·σ₀`, given the pointwise inverse frame `g(a)⁻¹` with
    /// polynomial entries.
    pub fn from_inverse_frame(base_dim: usize, sigma0: &HomogeneousPoly, frame_inverse: &LinearMap<Poly>) -> Self {
        let lifted = sigma0.map_coeffs(|c| Poly::constant(c.clone()));
        SymbolField { base_dim, symbol: lifted.compose_linear(frame_inverse) }
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn fiber_dim(&self) -> usize {
        self.symbol.dim()
    }

    pub fn degree(&self) -> usize {
        self.symbol.degree()
    }

    pub fn symbol(&self) -> &HomogeneousPoly<Poly> {
        &self.symbol
    }

    pub fn eval(&self, point: &[Rational]) -> HomogeneousPoly {
        self.symbol.map_coeffs(|c| c.eval(point))
    }

    pub fn eval_f64(&self, point: &[f64]) -> HomogeneousPoly<f64> {
        self.symbol.map_coeffs(|c| c.eval_f64(point))
    }

    /// Derivative of the coefficients in base direction `i`.
    pub fn partial_base(&self, i: usize) -> HomogeneousPoly<Poly> {
        self.symbol.map_coeffs(|c| c.partial(i))
    }

    pub fn is_base_constant(&self) -> bool {
        self.symbol.terms().all(|(_, c)| c.is_constant())
    }

    pub fn is_zero(&self) -> bool {
        self.symbol.terms().all(|(_, c)| c.is_zero())
    }
}

/// Evaluates a base-polynomial matrix at a rational point as floats.
pub fn eval_matrix_f64(m: &LinearMap<Poly>, point: &[f64]) -> LinearMap<f64> {
    m.map(|p| p.eval_f64(point))
}

pub fn to_f64_point(point: &[Rational]) -> Vec<f64> {
    point.iter().map(rational_to_f64).collect()
}
