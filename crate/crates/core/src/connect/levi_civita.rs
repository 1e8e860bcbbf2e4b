use num_traits::Zero;

use super::connection::Connection;
use super::{ConnectError, TensorField};
use crate::polyalg::{LinearMap, MultiIndex, Poly, SymbolField};
use crate::scalar::{Coeff, Rational};

/// Fiber-quadratic symbol `σ₂(x, ξ) = e^{λ·x} Σ_ij S^{ij}(x) ξ_i ξ_j`.
///
/// The exponential factor cancels from the Christoffel symbols apart from
/// its logarithmic derivative `λ`, so fields such as `e^{x₁} Σ ξ_i²` are
/// handled exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpQuadraticSymbol {
    pub lambda: Vec<Rational>,
    pub quadratic: SymbolField,
}

impl ExpQuadraticSymbol {
    pub fn polynomial(quadratic: SymbolField) -> Self {
        let d = quadratic.fiber_dim();
        ExpQuadraticSymbol { lambda: vec![Rational::zero(); d], quadratic }
    }

    fn validate(&self) -> Result<usize, ConnectError> {
        let d = self.quadratic.fiber_dim();
        if self.quadratic.degree() != 2 {
            return Err(ConnectError::Shape(format!("expected a quadratic symbol, got degree {}", self.quadratic.degree())));
        }
        if self.quadratic.base_dim() != d || self.lambda.len() != d {
            return Err(ConnectError::Shape("base, fiber and exponent dimensions differ".into()));
        }
        Ok(d)
    }

    /// Symmetric matrix `S^{ij}` of the polynomial factor.
    pub fn matrix(&self) -> Vec<Vec<Poly>> {
        let d = self.quadratic.fiber_dim();
        let half = Rational::new(1.into(), 2.into());
        let q = self.quadratic.symbol();
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let e = MultiIndex::unit(d, i).add(&MultiIndex::unit(d, j));
                        let c = q.coeff(&e);
                        if i == j {
                            c
                        } else {
                            c.scale(&half)
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// `e^{−λ·x} ∇_i σ₂ = λ_i S + ∂_i S + D_{Γ_iᵀ} S`.
    pub fn reduced_covariant_derivative(&self, conn: &Connection, i: usize) -> TensorField {
        let s = self.quadratic.symbol();
        let lam = s.scale(&Poly::constant(self.lambda[i].clone()));
        lam + conn.covariant_derivative_symbol(s, i)
    }

    /// `∇σ₂ = 0` exactly.
    pub fn is_parallel(&self, conn: &Connection) -> bool {
        (0..conn.dim()).all(|i| self.reduced_covariant_derivative(conn, i).is_zero())
    }
}

fn det<R: Coeff>(m: &[Vec<R>]) -> R {
    let n = m.len();
    if n == 0 {
        return R::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = R::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<R>> = m[1..].iter().map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect()).collect();
        let term = m[0][j].clone() * det(&minor);
        acc = if j % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

/// Adjugate: `adj(M)[i][j] = (−1)^{i+j} det(M without row j, column i)`.
fn adjugate<R: Coeff>(m: &[Vec<R>]) -> Vec<Vec<R>> {
    let n = m.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let minor: Vec<Vec<R>> = m
                        .iter()
                        .enumerate()
                        .filter(|(r, _)| *r != j)
                        .map(|(_, row)| row.iter().enumerate().filter(|(c, _)| *c != i).map(|(_, v)| v.clone()).collect())
                        .collect();
                    let v = det(&minor);
                    if (i + j) % 2 == 0 {
                        v
                    } else {
                        -v
                    }
                })
                .collect()
        })
        .collect()
}

/// `Γ^k_ij = ½ S^{kl}(∂_iW_lj + ∂_jW_li − ∂_lW_ij − λ_iW_lj − λ_jW_li + λ_lW_ij)`
/// with `W = S⁻¹` and `dw[l]` the derivative of `W` in direction `l`.
fn christoffel<R: Coeff>(s: &[Vec<R>], w: &[Vec<R>], dw: &[Vec<Vec<R>>], lambda: &[R]) -> Vec<LinearMap<R>> {
    let d = s.len();
    let half = R::from_rational(&Rational::new(1.into(), 2.into()));
    (0..d)
        .map(|i| {
            let mut g = LinearMap::zero(d);
            for k in 0..d {
                for j in 0..d {
                    let mut acc = R::zero();
                    for l in 0..d {
                        if s[k][l].is_zero() {
                            continue;
                        }
                        let inner = dw[i][l][j].clone() + dw[j][l][i].clone() - dw[l][i][j].clone()
                            - lambda[i].clone() * w[l][j].clone()
                            - lambda[j].clone() * w[l][i].clone()
                            + lambda[l].clone() * w[i][j].clone();
                        acc = acc + s[k][l].clone() * inner;
                    }
                    g.set(k, j, half.clone() * acc);
                }
            }
            g
        })
        .collect()
}

/// Levi-Civita connection of the metric inverse to `σ₂`, with polynomial
/// Christoffel symbols. Requires `det S` to be a nonzero constant so that
/// `S⁻¹` is polynomial; otherwise use [`levi_civita_at`].
pub fn levi_civita_from_second_order_symbol(sigma: &ExpQuadraticSymbol) -> Result<Connection, ConnectError> {
    let d = sigma.validate()?;
    let s = sigma.matrix();
    let det_s = det(&s);
    if det_s.is_zero() {
        return Err(ConnectError::DegenerateSymbol);
    }
    if !det_s.is_constant() {
        return Err(ConnectError::NonPolynomialInverse);
    }
    let inv_det = Rational::from_int(1) / det_s.constant_term();
    let w: Vec<Vec<Poly>> = adjugate(&s).into_iter().map(|row| row.into_iter().map(|p| p.scale(&inv_det)).collect()).collect();
    let dw: Vec<Vec<Vec<Poly>>> = (0..d).map(|l| w.iter().map(|row| row.iter().map(|p| p.partial(l)).collect()).collect()).collect();
    let lambda: Vec<Poly> = sigma.lambda.iter().map(|v| Poly::constant(v.clone())).collect();
    Connection::new(christoffel(&s, &w, &dw, &lambda))
}

/// Christoffel symbols at one point, exact for any polynomial `S` that is
/// invertible there.
pub fn levi_civita_at(sigma: &ExpQuadraticSymbol, point: &[Rational]) -> Result<Vec<LinearMap<Rational>>, ConnectError> {
    let d = sigma.validate()?;
    if point.len() != d {
        return Err(ConnectError::Shape(format!("point with {} coordinates in dimension {d}", point.len())));
    }
    let sp = sigma.matrix();
    let s: Vec<Vec<Rational>> = sp.iter().map(|row| row.iter().map(|p| p.eval(point)).collect()).collect();
    let w = crate::linalg::inverse(&s).ok_or(ConnectError::DegenerateSymbol)?;
    let w_map = LinearMap::from_rows(w.clone()).expect("square");
    // ∂_l W = −W (∂_l S) W
    let dw: Vec<Vec<Vec<Rational>>> = (0..d)
        .map(|l| {
            let ds = LinearMap::from_rows(sp.iter().map(|row| row.iter().map(|p| p.partial(l).eval(point)).collect()).collect())
                .expect("square");
            let prod = w_map.mul(&ds).mul(&w_map);
            prod.rows().iter().map(|r| r.iter().map(|v| -v.clone()).collect()).collect()
        })
        .collect();
    Ok(christoffel(&s, &w, &dw, &sigma.lambda))
}
