use std::collections::BTreeMap;

use num_traits::Zero;

use super::{ConnectError, TensorField};
use crate::polyalg::{indices_up_to, HomogeneousPoly, LinearMap, MultiIndex, Poly};
use crate::scalar::Rational;

/// Scalar linear differential operator `A = Σ_{|α| ≤ k} a_α(x) ∂^α` with
/// polynomial coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffOperator {
    dim: usize,
    order: usize,
    coeffs: BTreeMap<MultiIndex, Poly>,
}

impl DiffOperator {
    pub fn zero(dim: usize, order: usize) -> Self {
        DiffOperator { dim, order, coeffs: BTreeMap::new() }
    }

    pub fn from_terms(
        dim: usize,
        order: usize,
        terms: impl IntoIterator<Item = (MultiIndex, Poly)>,
    ) -> Result<Self, ConnectError> {
        let mut op = Self::zero(dim, order);
        for (alpha, c) in terms {
            op.add_term(alpha, c)?;
        }
        Ok(op)
    }

    pub fn add_term(&mut self, alpha: MultiIndex, c: Poly) -> Result<(), ConnectError> {
        if alpha.len() != self.dim {
            return Err(ConnectError::Shape(format!("multi-index {alpha} in dimension {}", self.dim)));
        }
        if alpha.degree() > self.order {
            return Err(ConnectError::OrderExceeded { alpha: alpha.to_string(), order: self.order });
        }
        if c.num_vars() > self.dim {
            return Err(ConnectError::Shape(format!("coefficient of {alpha} uses {} base variables", c.num_vars())));
        }
        self.add_unchecked(alpha, c);
        Ok(())
    }

    fn add_unchecked(&mut self, alpha: MultiIndex, c: Poly) {
        if c.is_zero() {
            return;
        }
        let sum = match self.coeffs.remove(&alpha) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.coeffs.insert(alpha, sum);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Declared order.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Largest `|α|` with a nonzero coefficient.
    pub fn effective_order(&self) -> Option<usize> {
        self.coeffs.keys().map(MultiIndex::degree).max()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Poly {
        self.coeffs.get(alpha).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Poly)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// All multi-indices with `|α| ≤ order`, in graded order.
    pub fn index_set(&self) -> Vec<MultiIndex> {
        indices_up_to(self.dim, self.order)
    }

    /// `Σ_{|α|=m} a_α ξ^α`.
    pub fn homogeneous_part(&self, m: usize) -> TensorField {
        let mut p = HomogeneousPoly::zero(self.dim, m);
        for (alpha, c) in self.coeffs.iter().filter(|(a, _)| a.degree() == m) {
            p = p + HomogeneousPoly::monomial(self.dim, alpha.clone(), c.clone());
        }
        p
    }

    /// Principal symbol, the homogeneous part of the declared order.
    pub fn symbol(&self) -> TensorField {
        self.homogeneous_part(self.order)
    }

    /// `Σ h_α ∂^α` read off a fiber-homogeneous field.
    pub fn from_tensor(h: &TensorField) -> Self {
        let mut op = Self::zero(h.dim(), h.degree());
        for (alpha, c) in h.terms() {
            op.add_unchecked(alpha.clone(), c.clone());
        }
        op
    }

    pub fn with_order(&self, order: usize) -> Result<Self, ConnectError> {
        Self::from_terms(self.dim, order, self.coeffs.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "operator dimension mismatch");
        let mut out = DiffOperator { dim: self.dim, order: self.order.max(other.order), coeffs: self.coeffs.clone() };
        for (a, c) in &other.coeffs {
            out.add_unchecked(a.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let neg = DiffOperator {
            dim: other.dim,
            order: other.order,
            coeffs: other.coeffs.iter().map(|(a, c)| (a.clone(), -c.clone())).collect(),
        };
        self.add(&neg)
    }

    /// `A f = Σ a_α ∂^α f`.
    pub fn apply(&self, f: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for (alpha, c) in &self.coeffs {
            let df = f.derivative(alpha);
            if !df.is_zero() {
                acc = acc + c * &df;
            }
        }
        acc
    }

    /// Operator `B` with `(B f)(φ(a)) = A(f ∘ φ)(a)` for the affine map
    /// `φ(a) = g a + c`.
    pub fn affine_transport(&self, g: &LinearMap<Rational>, c: &[Rational]) -> Result<Self, ConnectError> {
        let d = self.dim;
        if g.dim() != d || c.len() != d {
            return Err(ConnectError::Shape(format!("affine map of size {} for operator in dimension {d}", g.dim())));
        }
        let ginv = g.inverse().map_err(|_| ConnectError::SingularMap)?;
        let shift: Vec<Rational> = ginv.apply(c).into_iter().map(|v| -v).collect();
        let gt = g.transpose().map(|v| Poly::constant(v.clone()));
        let mut out = Self::zero(d, self.order);
        // ∂_a = gᵀ ∂_b, so ξ^α becomes (gᵀη)^α with constant coefficients.
        for m in 0..=self.order {
            let part = self.homogeneous_part(m);
            if part.is_zero() {
                continue;
            }
            let moved = part.compose_linear(&gt);
            for (alpha, coef) in moved.terms() {
                out.add_unchecked(alpha.clone(), coef.compose_affine(&ginv, &shift));
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn x(i: usize) -> Poly {
        Poly::var(i)
    }

    #[test]
    fn apply_examples() {
        // ∂₁² + 5 on x₁²
        let a = DiffOperator::from_terms(
            1,
            2,
            [(MultiIndex::from([2]), Poly::constant(int(1))), (MultiIndex::from([0]), Poly::constant(int(5)))],
        )
        .unwrap();
        let f = x(0).pow(2);
        assert_eq!(a.apply(&f), Poly::constant(int(2)) + x(0).pow(2).scale(&int(5)));
        assert_eq!(a.apply(&Poly::constant(int(1))), Poly::constant(int(5)));
    }

    #[test]
    fn order_is_enforced() {
        let err = DiffOperator::from_terms(2, 1, [(MultiIndex::from([1, 1]), Poly::constant(int(1)))]).unwrap_err();
        assert!(matches!(err, ConnectError::OrderExceeded { .. }));
    }

    #[test]
    fn transport_by_translation_and_shear() {
        // A = x₂ ∂₁ + ∂₂², φ(a) = g a + c
        let a = DiffOperator::from_terms(
            2,
            2,
            [(MultiIndex::from([1, 0]), x(1)), (MultiIndex::from([0, 2]), Poly::constant(int(1)))],
        )
        .unwrap();
        let g = LinearMap::from_rows(vec![vec![int(1), int(2)], vec![int(0), int(1)]]).unwrap();
        let c = [int(3), int(-1)];
        let b = a.affine_transport(&g, &c).unwrap();
        // Check (B f)(φ(a)) = A(f∘φ)(a) on a few polynomials.
        let phi: Vec<Poly> = (0..2)
            .map(|i| Poly::constant(c[i].clone()) + x(0).scale(&g.get(i, 0)) + x(1).scale(&g.get(i, 1)))
            .collect();
        for f in [x(0).pow(2) * x(1), x(1).pow(3), x(0) * x(1) + x(0)] {
            let lhs = b.apply(&f).substitute(&phi);
            let rhs = a.apply(&f.substitute(&phi));
            assert_eq!(lhs, rhs);
        }
    }
}
