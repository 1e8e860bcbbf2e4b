use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::ModelError;
use crate::connect::DiffOperator;
use crate::invar::{trace_invariant_value, InvariantLabel};
use crate::polyalg::{indices_up_to, LinearMap, MultiIndex, Poly};
use crate::scalar::{binomial, Rational};

/// A scalar function on the base used as one coordinate of a chart.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantField {
    pub label: String,
    pub value: Poly,
}

impl InvariantField {
    /// A chart function given directly as a polynomial.
    pub fn custom(label: impl Into<String>, value: Poly) -> Self {
        InvariantField { label: label.into(), value }
    }

    /// Composition with an affine map of the base: `x ↦ f(Mx + c)`.
    pub fn compose_affine(&self, m: &LinearMap<Rational>, c: &[Rational]) -> Self {
        InvariantField { label: self.label.clone(), value: self.value.compose_affine(m, c) }
    }
}

/// Evaluates a polynomial trace invariant on the symbol of `A` at every
/// base point at once.
pub fn symbol_invariant_field(a: &DiffOperator, label: InvariantLabel) -> Result<InvariantField, ModelError> {
    let sigma = a.symbol();
    if !label.is_polynomial() || !label.admissible(a.dim(), a.order()) {
        return Err(ModelError::Inadmissible { label, dim: a.dim(), order: a.order() });
    }
    let value = trace_invariant_value(&sigma, label)?;
    Ok(InvariantField { label: label.to_string(), value })
}

pub fn apply_operator(a: &DiffOperator, f: &Poly) -> Poly {
    a.apply(f)
}

/// `det(∂I_i/∂x_j)` as a polynomial.
pub fn jacobian_determinant(charts: &[InvariantField]) -> Poly {
    let m: Vec<Vec<Poly>> = charts.iter().map(|c| (0..charts.len()).map(|j| c.value.partial(j)).collect()).collect();
    det(&m)
}

fn det(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one();
    }
    let mut acc = Poly::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly>> =
            m[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect()).collect();
        let t = &m[0][j] * &det(&minor);
        acc = if j % 2 == 0 { acc + t } else { acc - t };
    }
    acc
}

pub(crate) fn check_charts(a: &DiffOperator, charts: &[InvariantField]) -> Result<(), ModelError> {
    if charts.len() != a.dim() {
        return Err(ModelError::ChartSize { expected: a.dim(), found: charts.len() });
    }
    if jacobian_determinant(charts).is_zero() {
        return Err(ModelError::NotAdjusted { point: None });
    }
    Ok(())
}

/// Coefficient invariants `I_α` for `|α| ≤ order(A)`:
/// `I_α = (1/α!) Σ_{γ ≤ α} C(α,γ) (−I)^{α−γ} A(I^γ)`,
/// i.e. `(1/α!) A((I − I(x))^α)` evaluated at `x`. These are the
/// coefficients of `A` written in the coordinates `y = I(x)`.
pub fn model_coefficients(a: &DiffOperator, charts: &[InvariantField]) -> Result<BTreeMap<MultiIndex, Poly>, ModelError> {
    check_charts(a, charts)?;
    let n = a.dim();
    let alphas = indices_up_to(n, a.order());
    let mut images: BTreeMap<MultiIndex, Poly> = BTreeMap::new();
    let power = |g: &MultiIndex| -> Poly {
        g.entries().iter().enumerate().fold(Poly::one(), |acc, (i, &k)| &acc * &charts[i].value.pow(k))
    };
    let mut out = BTreeMap::new();
    for alpha in &alphas {
        let mut acc = Poly::zero();
        for gamma in alphas.iter().filter(|g| g.divides(alpha)) {
            let img = images.entry(gamma.clone()).or_insert_with(|| a.apply(&power(gamma))).clone();
            if img.is_zero() {
                continue;
            }
            let rest = alpha.checked_sub(gamma).expect("γ ≤ α");
            let mut weight = Poly::constant(Rational::from_integer(
                alpha.entries().iter().zip(gamma.entries()).map(|(&a, &g)| binomial(a as usize, g as usize)).product(),
            ));
            if rest.degree() % 2 == 1 {
                weight = -weight;
            }
            acc = acc + &(&weight * &power(&rest)) * &img;
        }
        let inv = Rational::new(1.into(), alpha.factorial());
        out.insert(alpha.clone(), acc.scale(&inv));
    }
    Ok(out)
}
