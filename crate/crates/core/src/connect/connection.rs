use num_traits::Zero;

use super::{ConnectError, TensorField};
use crate::invar::linear_derivation;
use crate::polyalg::{HomogeneousPoly, LinearMap, MultiIndex, Poly};
use crate::scalar::Rational;

/// Affine connection given by Christoffel symbols with polynomial entries.
///
/// `gamma[i]` is the matrix `Γ_i` with `Γ_i[k][j] = Γ^k_ij`. On 1-forms
/// `(∇θ)_ij = ∂_i θ_j − Γ^k_ij θ_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Connection {
    dim: usize,
    gamma: Vec<LinearMap<Poly>>,
}

impl Connection {
    pub fn flat(dim: usize) -> Self {
        Connection { dim, gamma: vec![LinearMap::zero(dim); dim] }
    }

    pub fn new(gamma: Vec<LinearMap<Poly>>) -> Result<Self, ConnectError> {
        let dim = gamma.len();
        if let Some(g) = gamma.iter().find(|g| g.dim() != dim) {
            return Err(ConnectError::Shape(format!("Christoffel matrix of size {} in dimension {dim}", g.dim())));
        }
        Ok(Connection { dim, gamma })
    }

    /// From nested components indexed `[i][k][j]`.
    pub fn from_components(c: Vec<Vec<Vec<Poly>>>) -> Result<Self, ConnectError> {
        let gamma = c
            .into_iter()
            .map(|rows| LinearMap::from_rows(rows).map_err(|e| ConnectError::Shape(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(gamma)
    }

    /// Constant Christoffel symbols.
    pub fn constant(gamma: Vec<LinearMap<Rational>>) -> Result<Self, ConnectError> {
        Self::new(gamma.iter().map(|g| g.map(|c| Poly::constant(c.clone()))).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gamma(&self, i: usize) -> &LinearMap<Poly> {
        &self.gamma[i]
    }

    pub fn matrices(&self) -> &[LinearMap<Poly>] {
        &self.gamma
    }

    /// `Γ^k_ij`.
    pub fn christoffel(&self, i: usize, k: usize, j: usize) -> &Poly {
        self.gamma[i].entry(k, j)
    }

    pub fn is_flat(&self) -> bool {
        self.gamma.iter().all(|g| g.rows().iter().flatten().all(Poly::is_zero))
    }

    pub fn eval(&self, point: &[Rational]) -> Vec<LinearMap<Rational>> {
        self.gamma.iter().map(|g| g.map(|p| p.eval(point))).collect()
    }

    pub fn eval_f64(&self, point: &[f64]) -> Vec<LinearMap<f64>> {
        self.gamma.iter().map(|g| g.map(|p| p.eval_f64(point))).collect()
    }

    /// `G_k(ξ) = Σ_ij Γ^k_ij ξ_i ξ_j`, the quadratic forms entering the
    /// symmetrized covariant differential.
    pub(crate) fn contracted_quadratics(&self) -> Vec<TensorField> {
        let d = self.dim;
        (0..d)
            .map(|k| {
                let mut g = HomogeneousPoly::zero(d, 2);
                for i in 0..d {
                    for j in 0..d {
                        let c = self.christoffel(i, k, j);
                        if !c.is_zero() {
                            let e = MultiIndex::unit(d, i).add(&MultiIndex::unit(d, j));
                            g = g + HomogeneousPoly::monomial(d, e, c.clone());
                        }
                    }
                }
                g
            })
            .collect()
    }

    /// Covariant derivative `∇_i σ = ∂_i σ + D_{Γ_iᵀ} σ` of a contravariant
    /// symmetric tensor written as a polynomial in the fiber variables.
    pub fn covariant_derivative_symbol(&self, sigma: &TensorField, i: usize) -> TensorField {
        let base = sigma.map_coeffs(|c| c.partial(i));
        base + linear_derivation(&self.gamma[i].transpose(), sigma)
    }

    /// Whether `∇_i σ = 0` in every direction.
    pub fn preserves_symbol(&self, sigma: &TensorField) -> bool {
        (0..self.dim).all(|i| self.covariant_derivative_symbol(sigma, i).is_zero())
    }

    /// The same connection in coordinates `b = g a`:
    /// `Γ'_i(b) = Σ_p (g⁻¹)_{pi} g Γ_p(g⁻¹b) g⁻¹`.
    pub fn linear_transport(&self, g: &LinearMap<Rational>) -> Result<Self, ConnectError> {
        let d = self.dim;
        if g.dim() != d {
            return Err(ConnectError::Shape(format!("map of size {} for connection in dimension {d}", g.dim())));
        }
        let ginv = g.inverse().map_err(|_| ConnectError::SingularMap)?;
        let zero = vec![Rational::zero(); d];
        let lift = |m: &LinearMap<Rational>| m.map(|c| Poly::constant(c.clone()));
        let (gp, ginvp) = (lift(g), lift(&ginv));
        let pulled: Vec<LinearMap<Poly>> =
            self.gamma.iter().map(|m| gp.mul(&m.map(|p| p.compose_affine(&ginv, &zero))).mul(&ginvp)).collect();
        let gamma = (0..d)
            .map(|i| {
                let mut acc = LinearMap::zero(d);
                for (p, m) in pulled.iter().enumerate() {
                    acc = acc.add(&m.scale(&Poly::constant(ginv.get(p, i))));
                }
                acc
            })
            .collect();
        Self::new(gamma)
    }

    /// `Γ_iᵀ J + J Γ_i = 0` for every direction, i.e. `∇ω = 0` for the
    /// canonical symplectic form.
    pub fn preserves_symplectic_form(&self) -> bool {
        if !self.dim.is_multiple_of(2) {
            return false;
        }
        let j = LinearMap::<Poly>::canonical_symplectic(self.dim / 2);
        self.gamma.iter().all(|g| g.transpose().mul(&j).add(&j.mul(g)).rows().iter().flatten().all(Poly::is_zero))
    }
}

/// `T^k_ij = Γ^k_ij − Γ^k_ji`, indexed `[i][j][k]`.
pub type Torsion = Vec<Vec<Vec<Poly>>>;

/// `R_ij = ∂_i Γ_j − ∂_j Γ_i + [Γ_i, Γ_j]`, indexed `[i][j]`.
pub type Curvature = Vec<Vec<LinearMap<Poly>>>;

pub fn torsion_curvature(conn: &Connection) -> (Torsion, Curvature) {
    let d = conn.dim();
    let torsion = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| (0..d).map(|k| conn.christoffel(i, k, j).clone() - conn.christoffel(j, k, i).clone()).collect())
                .collect()
        })
        .collect();
    let curvature = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let gi = conn.gamma(i);
                    let gj = conn.gamma(j);
                    let di_gj = gj.map(|p| p.partial(i));
                    let dj_gi = gi.map(|p| p.partial(j));
                    di_gj.sub(&dj_gi).add(&gi.mul(gj)).sub(&gj.mul(gi))
                })
                .collect()
        })
        .collect();
    (torsion, curvature)
}

pub fn is_torsion_free(t: &Torsion) -> bool {
    t.iter().flatten().flatten().all(Poly::is_zero)
}

pub fn is_curvature_free(r: &Curvature) -> bool {
    r.iter().flatten().all(|m| m.rows().iter().flatten().all(Poly::is_zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn flat_is_torsion_and_curvature_free() {
        let (t, r) = torsion_curvature(&Connection::flat(3));
        assert!(is_torsion_free(&t));
        assert!(is_curvature_free(&r));
    }

    #[test]
    fn constant_nonsymmetric() {
        // Γ^1_12 = 1, all other symbols zero.
        let mut g0 = LinearMap::zero(2);
        g0.set(0, 1, int(1));
        let conn = Connection::constant(vec![g0.clone(), LinearMap::zero(2)]).unwrap();
        let (t, r) = torsion_curvature(&conn);
        assert_eq!(t[0][1][0], Poly::constant(int(1)));
        assert_eq!(t[1][0][0], Poly::constant(int(-1)));
        assert!(t[0][0].iter().all(Poly::is_zero));
        // Γ_1 Γ_2 − Γ_2 Γ_1 = 0 here since Γ_2 = 0.
        assert!(is_curvature_free(&r));

        let mut g1 = LinearMap::zero(2);
        g1.set(1, 0, int(1));
        let conn = Connection::constant(vec![g0.clone(), g1.clone()]).unwrap();
        let (_, r) = torsion_curvature(&conn);
        let comm = g0.mul(&g1).sub(&g1.mul(&g0)).map(|c| Poly::constant(c.clone()));
        assert_eq!(r[0][1], comm);
        assert_eq!(r[1][0], comm.scale(&Poly::constant(int(-1))));
    }

    #[test]
    fn shape_checks() {
        assert!(Connection::new(vec![LinearMap::zero(3), LinearMap::zero(3)]).is_err());
        assert!(Connection::flat(2).preserves_symplectic_form());
    }
}
