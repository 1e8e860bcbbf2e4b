use super::operator::{endomorphism_matrix, power_traces};
use super::InvarError;
use crate::linalg;
use crate::polyalg::{monomial_basis, HomogeneousPoly, LinearMap, MultiIndex};
use crate::scalar::{Coeff, Field, Rational};
use crate::transvect::SymplecticStructure;

/// One basis element of `sp(2n)`, stored as the matrix `M` of the linear
/// vector field `ξ ↦ Mξ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpGenerator {
    pub label: String,
    pub matrix: LinearMap<Rational>,
}

/// The basis `b⁺_ij`, `b⁻_ij` (`i ≤ j`) and `c_ij` of `sp(2n)` acting on
/// `(x_1..x_n, y_1..y_n)`:
///
/// * `b⁺_ij = y_i ∂x_j + y_j ∂x_i`
/// * `b⁻_ij = −x_i ∂y_j − x_j ∂y_i`
/// * `c_ij  = x_i ∂x_j − y_j ∂y_i`
#[derive(Debug, Clone, PartialEq)]
pub struct SpBasisAction {
    n: usize,
    generators: Vec<SpGenerator>,
}

impl SpBasisAction {
    pub fn new(n: usize) -> Self {
        let d = 2 * n;
        let (x, y) = (|i: usize| i, |i: usize| n + i);
        let one = Rational::from_int(1);
        let mut generators = Vec::with_capacity(n * (2 * n + 1));
        for i in 0..n {
            for j in i..n {
                let mut m = LinearMap::zero(d);
                // The ∂x_j component is y_i, the ∂x_i component is y_j.
                bump(&mut m, x(j), y(i), &one);
                bump(&mut m, x(i), y(j), &one);
                generators.push(SpGenerator { label: format!("b+({},{})", i + 1, j + 1), matrix: m });
            }
        }
        for i in 0..n {
            for j in i..n {
                let mut m = LinearMap::zero(d);
                bump(&mut m, y(j), x(i), &-one.clone());
                bump(&mut m, y(i), x(j), &-one.clone());
                generators.push(SpGenerator { label: format!("b-({},{})", i + 1, j + 1), matrix: m });
            }
        }
        for i in 0..n {
            for j in 0..n {
                let mut m = LinearMap::zero(d);
                bump(&mut m, x(j), x(i), &one);
                bump(&mut m, y(i), y(j), &-one.clone());
                generators.push(SpGenerator { label: format!("c({},{})", i + 1, j + 1), matrix: m });
            }
        }
        SpBasisAction { n, generators }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[SpGenerator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// `Σ t_a M_a`.
    pub fn combine<R: Coeff>(&self, t: &[R]) -> LinearMap<R> {
        let d = 2 * self.n;
        let mut m = LinearMap::zero(d);
        for (g, ta) in self.generators.iter().zip(t) {
            m = m.add(&g.matrix.map(|c| R::from_rational(c)).scale(ta));
        }
        m
    }

    /// Coordinates of an `sp(2n)` matrix in this basis, or `None` when the
    /// matrix is not in `sp(2n)`.
    pub fn coordinates<R: Field>(&self, m: &LinearMap<R>) -> Option<Vec<R>> {
        let d = 2 * self.n;
        let cols: Vec<Vec<R>> = self
            .generators
            .iter()
            .map(|g| g.matrix.rows().iter().flatten().map(R::from_rational).collect())
            .collect();
        let a = transpose(&cols, d * d);
        let b: Vec<R> = m.rows().iter().flatten().cloned().collect();
        match linalg::solve(&a, &b) {
            linalg::Solution::Unique(x) => Some(x),
            _ => None,
        }
    }
}

fn bump(m: &mut LinearMap<Rational>, i: usize, j: usize, v: &Rational) {
    let cur = m.get(i, j);
    m.set(i, j, cur + v.clone());
}

fn transpose<R: Clone>(cols: &[Vec<R>], nrows: usize) -> Vec<Vec<R>> {
    (0..nrows).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
}

/// `D_M P = Σ_a (Mξ)_a ∂_a P`, the derivation of the linear vector field
/// `ξ ↦ Mξ`.
pub fn linear_derivation<R: Coeff>(m: &LinearMap<R>, p: &HomogeneousPoly<R>) -> HomogeneousPoly<R> {
    let d = p.dim();
    let mut acc = HomogeneousPoly::zero(d, p.degree());
    if p.degree() == 0 {
        return acc;
    }
    for a in 0..d {
        let da = p.derivative(&MultiIndex::unit(d, a));
        if da.is_zero() {
            continue;
        }
        let mut form = HomogeneousPoly::zero(d, 1);
        for b in 0..d {
            let c = m.get(a, b);
            if !c.is_zero() {
                form = form + HomogeneousPoly::monomial(d, MultiIndex::unit(d, b), c);
            }
        }
        if !form.is_zero() {
            acc = acc + form.mul_unchecked(&da);
        }
    }
    acc
}

/// Infinitesimal action `ρ(M)P = d/dt (exp(tM)·P)|_{t=0} = −D_M P` of the
/// left action `(g·P)(ξ) = P(g⁻¹ξ)`.
pub fn infinitesimal_action<R: Coeff>(m: &LinearMap<R>, p: &HomogeneousPoly<R>) -> HomogeneousPoly<R> {
    -linear_derivation(m, p)
}

/// Columns `D_{M_a} P` of the generator images in `monomial_basis(d, deg P)`.
pub fn generator_images<R: Field>(p: &HomogeneousPoly<R>) -> Result<Vec<Vec<R>>, InvarError> {
    let sp = SymplecticStructure::for_dim(p.dim())?;
    let action = SpBasisAction::new(sp.n());
    let basis = monomial_basis(p.dim(), p.degree());
    Ok(action
        .generators()
        .iter()
        .map(|g| {
            let img = linear_derivation(&g.matrix.map(R::from_rational), p);
            basis.iter().map(|b| img.coeff(b)).collect()
        })
        .collect())
}

/// Dimension of the infinitesimal `sp(2n)`-orbit through `P`.
pub fn sp_orbit_dimension<R: Field>(p: &HomogeneousPoly<R>) -> Result<usize, InvarError> {
    let cols = generator_images(p)?;
    if p.is_zero() {
        return Ok(0);
    }
    Ok(linalg::column_rank(&cols))
}

/// Dimension of the stabilizer subalgebra of `P` in `sp(2n)`.
pub fn sp_stabilizer_dimension<R: Field>(p: &HomogeneousPoly<R>) -> Result<usize, InvarError> {
    let sp = SymplecticStructure::for_dim(p.dim())?;
    Ok(sp.algebra_dim() - sp_orbit_dimension(p)?)
}

/// Matrix on `S^q` of the Hamiltonian field
/// `X_Q = Σ_i (∂Q/∂y_i ∂x_i − ∂Q/∂x_i ∂y_i)` of a quadratic `Q`.
pub fn hamiltonian_matrix<R: Coeff>(q2: &HomogeneousPoly<R>, q: usize) -> Result<Vec<Vec<R>>, InvarError> {
    if q2.degree() != 2 && !q2.is_zero() {
        return Err(InvarError::NotQuadratic(q2.degree()));
    }
    let sp = SymplecticStructure::for_dim(q2.dim())?;
    let m = hamiltonian_field(q2, sp.n());
    let (_, matrix) = endomorphism_matrix(q2.dim(), q, |b| Ok(linear_derivation(&m, b)))?;
    Ok(matrix)
}

/// Linear vector field of `X_Q` as a matrix.
pub fn hamiltonian_field<R: Coeff>(q2: &HomogeneousPoly<R>, n: usize) -> LinearMap<R> {
    let d = 2 * n;
    let mut m = LinearMap::zero(d);
    for i in 0..n {
        let qy = q2.derivative(&MultiIndex::unit(d, n + i));
        let qx = q2.derivative(&MultiIndex::unit(d, i));
        for b in 0..d {
            let e = MultiIndex::unit(d, b);
            m.set(i, b, qy.coeff(&e));
            m.set(n + i, b, -qx.coeff(&e));
        }
    }
    m
}

/// `Tr(X_Q^k)` on `S^1` for `k = 1..=kmax`.
pub fn hamiltonian_traces<R: Coeff>(q2: &HomogeneousPoly<R>, kmax: usize) -> Result<Vec<R>, InvarError> {
    Ok(power_traces(&hamiltonian_matrix(q2, 1)?, kmax))
}
