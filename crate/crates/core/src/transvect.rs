//! Symplectic and metric transvectants.
//!
//! For a symplectic space with canonical coordinates `(x_1..x_n, y_1..y_n)`
//! the order-`r` transvectant is
//!
//! ```text
//! [P,Q]_r = 2^{-r} Σ_{l=0}^{r} Σ_{|λ|=l} Σ_{|μ|=r-l} (-1)^{r-l} C(r,l) C(l;λ) C(r-l;μ)
//!           · ∂x^λ ∂y^μ P · ∂x^μ ∂y^λ Q
//! ```
//!
//! With this normalization `[P,Q]_1` is half the Poisson bracket; both are
//! exposed. The metric transvectant in orthonormal coordinates is
//! `(P,Q)_m = Σ_{|μ|=m} C(m;μ) ∂^μ P ∂^μ Q`.

use thiserror::Error;

use crate::error::PolyError;
use crate::polyalg::{monomial_basis, HomogeneousPoly, MultiIndex};
use num_bigint::BigInt;
use num_traits::One;

use crate::scalar::{binomial, multinomial, Coeff, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransvectError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("symplectic structure needs an even number of variables, got {0}")]
    OddDimension(usize),
    #[error("negative transvectant order {0}")]
    NegativeOrder(i64),
}

/// Canonical symplectic structure `ω = Σ e_i ∧ f_i` on a space of
/// dimension `2n`, variables ordered `(x_1..x_n, y_1..y_n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymplecticStructure {
    n: usize,
}

impl SymplecticStructure {
    pub fn new(n: usize) -> Self {
        SymplecticStructure { n }
    }

    pub fn for_dim(dim: usize) -> Result<Self, TransvectError> {
        if !dim.is_multiple_of(2) || dim == 0 {
            return Err(TransvectError::OddDimension(dim));
        }
        Ok(SymplecticStructure { n: dim / 2 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    /// `dim sp(2n) = n(2n+1)`.
    pub fn algebra_dim(&self) -> usize {
        self.n * (2 * self.n + 1)
    }
}

/// Euclidean structure `g = Σ e_i ⊗ e_i` in orthonormal coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MetricStructure {
    dim: usize,
}

impl MetricStructure {
    pub fn new(dim: usize) -> Self {
        MetricStructure { dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

fn concat(a: &MultiIndex, b: &MultiIndex) -> MultiIndex {
    MultiIndex::new(a.entries().iter().chain(b.entries()).copied())
}

fn result_degree(p: usize, q: usize, r: usize) -> usize {
    (p + q).saturating_sub(2 * r)
}

/// The first argument's half of a transvectant: pairs `(c·∂^a P, b)` with
/// the transvectant equal to `Σ c·∂^a P · ∂^b Q`. Operators that contract a
/// fixed kernel against many arguments build this once.
pub(crate) struct LeftFactors<R> {
    dim: usize,
    terms: Vec<(HomogeneousPoly<R>, MultiIndex)>,
}

impl<R: Coeff> LeftFactors<R> {
    pub(crate) fn symplectic(p: &HomogeneousPoly<R>, r: usize) -> Result<Self, TransvectError> {
        let sp = SymplecticStructure::for_dim(p.dim())?;
        let n = sp.n();
        let mut terms = Vec::new();
        if r <= p.degree() {
            let denom = BigInt::one() << r;
            for l in 0..=r {
                let sign: i64 = if (r - l).is_multiple_of(2) { 1 } else { -1 };
                let outer = binomial(r, l) * sign;
                for lam in monomial_basis(n, l) {
                    for mu in monomial_basis(n, r - l) {
                        let dp = p.derivative(&concat(&lam, &mu));
                        if dp.is_zero() {
                            continue;
                        }
                        let c = &outer * multinomial(lam.entries()) * multinomial(mu.entries());
                        let c = R::from_rational(&Rational::new(c, denom.clone()));
                        terms.push((dp.scale(&c), concat(&mu, &lam)));
                    }
                }
            }
        }
        Ok(LeftFactors { dim: p.dim(), terms })
    }

    pub(crate) fn metric(p: &HomogeneousPoly<R>, m: usize) -> Self {
        let mut terms = Vec::new();
        if m <= p.degree() {
            for mu in monomial_basis(p.dim(), m) {
                let dp = p.derivative(&mu);
                if !dp.is_zero() {
                    terms.push((dp.scale(&R::from_bigint(&multinomial(mu.entries()))), mu));
                }
            }
        }
        LeftFactors { dim: p.dim(), terms }
    }

    /// Contracts against `q`; `out_degree` is used when the result is zero.
    pub(crate) fn apply(&self, q: &HomogeneousPoly<R>, out_degree: usize) -> HomogeneousPoly<R> {
        let mut acc = HomogeneousPoly::zero(self.dim, out_degree);
        for (dp, b) in &self.terms {
            let dq = q.derivative(b);
            if !dq.is_zero() {
                acc = acc + dp.mul_unchecked(&dq);
            }
        }
        acc
    }
}

pub fn symplectic_transvectant<R: Coeff>(
    p: &HomogeneousPoly<R>,
    q: &HomogeneousPoly<R>,
    r: usize,
) -> Result<HomogeneousPoly<R>, TransvectError> {
    p.assert_same_space(q)?;
    let out_degree = result_degree(p.degree(), q.degree(), r);
    let left = LeftFactors::symplectic(p, r)?;
    if r > q.degree() {
        return Ok(HomogeneousPoly::zero(p.dim(), out_degree));
    }
    Ok(left.apply(q, out_degree))
}

/// `{P,Q} = Σ_i (∂P/∂x_i ∂Q/∂y_i − ∂P/∂y_i ∂Q/∂x_i)`, equal to
/// `2·[P,Q]_1`.
pub fn poisson_bracket<R: Coeff>(p: &HomogeneousPoly<R>, q: &HomogeneousPoly<R>) -> Result<HomogeneousPoly<R>, TransvectError> {
    p.assert_same_space(q)?;
    let sp = SymplecticStructure::for_dim(p.dim())?;
    let n = sp.n();
    let d = sp.dim();
    let mut acc = HomogeneousPoly::zero(d, result_degree(p.degree(), q.degree(), 1));
    if p.degree() == 0 || q.degree() == 0 {
        return Ok(acc);
    }
    for i in 0..n {
        let px = p.derivative(&MultiIndex::unit(d, i));
        let py = p.derivative(&MultiIndex::unit(d, n + i));
        let qx = q.derivative(&MultiIndex::unit(d, i));
        let qy = q.derivative(&MultiIndex::unit(d, n + i));
        acc = acc + px.mul_unchecked(&qy) - py.mul_unchecked(&qx);
    }
    Ok(acc)
}

pub fn metric_transvectant<R: Coeff>(
    p: &HomogeneousPoly<R>,
    q: &HomogeneousPoly<R>,
    m: usize,
) -> Result<HomogeneousPoly<R>, TransvectError> {
    p.assert_same_space(q)?;
    let out_degree = result_degree(p.degree(), q.degree(), m);
    if m > q.degree() {
        return Ok(HomogeneousPoly::zero(p.dim(), out_degree));
    }
    Ok(LeftFactors::metric(p, m).apply(q, out_degree))
}

/// Signed-order entry point used by front ends that accept user input.
pub fn checked_order(r: i64) -> Result<usize, TransvectError> {
    usize::try_from(r).map_err(|_| TransvectError::NegativeOrder(r))
}
