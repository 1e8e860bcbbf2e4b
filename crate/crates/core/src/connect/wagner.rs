use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::connection::Connection;
use super::{ConnectError, TensorField};
use crate::invar::{infinitesimal_action, SpBasisAction};
use crate::linalg::{self, Solution};
use crate::polyalg::{indices_up_to, monomial_basis, LinearMap, MultiIndex, Poly, SymbolField};
use crate::scalar::{rational_to_f64, Coeff, Rational};
use crate::transvect::SymplecticStructure;

#[derive(Debug, Clone, PartialEq)]
pub struct WagnerOptions {
    /// Largest base degree tried for the Christoffel polynomials.
    pub max_degree: usize,
    /// Points where consistency and uniqueness are checked exactly. Defaults
    /// to the cube `{−1, 0, 1, 2}^d`.
    pub sample_points: Option<Vec<Vec<Rational>>>,
}

impl Default for WagnerOptions {
    fn default() -> Self {
        WagnerOptions { max_degree: 3, sample_points: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WagnerSolution {
    pub connection: Connection,
    /// Base degree of the polynomial ansatz that succeeded.
    pub ansatz_degree: usize,
    /// Dimension of the stabilizer kernel at the sample points (always zero
    /// for a returned solution).
    pub kernel_dim: usize,
    pub sample_points: usize,
}

fn check_field(field: &SymbolField) -> Result<SpBasisAction, ConnectError> {
    let d = field.fiber_dim();
    if field.base_dim() != d {
        return Err(ConnectError::Shape(format!("symbol field with base dimension {} and fiber dimension {d}", field.base_dim())));
    }
    if field.degree() < 3 {
        return Err(ConnectError::OrderTooLow(field.degree()));
    }
    let sp = SymplecticStructure::for_dim(d).map_err(|_| ConnectError::OddDimension(d))?;
    Ok(SpBasisAction::new(sp.n()))
}

fn default_samples(d: usize) -> Vec<Vec<Rational>> {
    let vals = [-1i64, 0, 1, 2];
    let mut pts = vec![Vec::new()];
    for _ in 0..d {
        pts = pts.into_iter().flat_map(|p| vals.iter().map(move |&v| [p.clone(), vec![Rational::from_int(v)]].concat())).collect();
    }
    pts
}

/// Exact pointwise check: solves `ρ(N_i)σ(a) = ∂_iσ(a)` at one point.
fn check_point(field: &SymbolField, action: &SpBasisAction, point: &[Rational]) -> Result<(), ConnectError> {
    let d = field.fiber_dim();
    let sigma = field.eval(point);
    let basis = monomial_basis(d, sigma.degree());
    let cols: Vec<Vec<Rational>> = action
        .generators()
        .iter()
        .map(|g| {
            let img = infinitesimal_action(&g.matrix, &sigma);
            basis.iter().map(|b| img.coeff(b)).collect()
        })
        .collect();
    let a: Vec<Vec<Rational>> = (0..basis.len()).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    let mut kernel = 0;
    for i in 0..d {
        let di = field.partial_base(i).map_coeffs(|c| c.eval(point));
        let rhs: Vec<Rational> = basis.iter().map(|b| di.coeff(b)).collect();
        match linalg::solve(&a, &rhs) {
            Solution::Inconsistent => {
                return Err(ConnectError::NotConstantType { point: point.to_vec(), direction: i });
            }
            Solution::Underdetermined { kernel_dim, .. } => kernel = kernel_dim,
            Solution::Unique(_) => {}
        }
    }
    if kernel > 0 {
        return Err(ConnectError::NonRegular { point: point.to_vec(), kernel_dim: kernel });
    }
    Ok(())
}

/// Solves for the connection with `Γ_i ∈ sp(2n)` and `∇σ = 0`, with
/// Christoffel symbols polynomial in the base point.
pub fn wagner_connection(field: &SymbolField, opts: &WagnerOptions) -> Result<WagnerSolution, ConnectError> {
    let action = check_field(field)?;
    let d = field.fiber_dim();
    let samples = opts.sample_points.clone().unwrap_or_else(|| default_samples(d));
    if samples.is_empty() {
        return Err(ConnectError::EmptyGrid);
    }
    for pt in &samples {
        if pt.len() != d {
            return Err(ConnectError::Shape(format!("sample point with {} coordinates in dimension {d}", pt.len())));
        }
        check_point(field, &action, pt)?;
    }
    let images: Vec<TensorField> =
        action.generators().iter().map(|g| infinitesimal_action(&g.matrix.map(|c| Poly::constant(c.clone())), field.symbol())).collect();
    for deg in 0..=opts.max_degree {
        if let Some(coeffs) = solve_ansatz(field, &images, deg)? {
            let gamma = coeffs.iter().map(|t| action.combine(t).transpose()).collect();
            let connection = Connection::new(gamma)?;
            if !connection.preserves_symbol(field.symbol()) {
                return Err(ConnectError::Internal("recovered connection does not preserve the symbol".into()));
            }
            return Ok(WagnerSolution { connection, ansatz_degree: deg, kernel_dim: 0, sample_points: samples.len() });
        }
    }
    Err(ConnectError::NoPolynomialSolution { max_degree: opts.max_degree })
}

/// Tries `t_{i,a}(x) = Σ_{|γ| ≤ deg} c_{i,a,γ} x^γ`; returns the generator
/// coefficients per direction, or `None` when no such solution exists.
fn solve_ansatz(field: &SymbolField, images: &[TensorField], deg: usize) -> Result<Option<Vec<Vec<Poly>>>, ConnectError> {
    let d = field.fiber_dim();
    let gammas = indices_up_to(d, deg);
    let mut columns: Vec<HashMap<(MultiIndex, MultiIndex), Rational>> = Vec::new();
    for img in images {
        for g in &gammas {
            let mut col = HashMap::new();
            for (beta, c) in img.terms() {
                for (delta, v) in c.terms() {
                    col.insert((beta.clone(), delta.add(g).trimmed()), v.clone());
                }
            }
            columns.push(col);
        }
    }
    let rhs: Vec<HashMap<(MultiIndex, MultiIndex), Rational>> = (0..d)
        .map(|i| {
            let di = field.partial_base(i);
            let mut m = HashMap::new();
            for (beta, c) in di.terms() {
                for (delta, v) in c.terms() {
                    m.insert((beta.clone(), delta.trimmed()), v.clone());
                }
            }
            m
        })
        .collect();
    let mut keys: Vec<(MultiIndex, MultiIndex)> =
        columns.iter().chain(rhs.iter()).flat_map(|m| m.keys().cloned()).collect();
    keys.sort();
    keys.dedup();
    let zero = Rational::from_int(0);
    let a: Vec<Vec<Rational>> =
        keys.iter().map(|k| columns.iter().map(|c| c.get(k).cloned().unwrap_or_else(|| zero.clone())).collect()).collect();
    let mut out = Vec::with_capacity(d);
    for b in &rhs {
        let bv: Vec<Rational> = keys.iter().map(|k| b.get(k).cloned().unwrap_or_else(|| zero.clone())).collect();
        let x = match linalg::solve(&a, &bv) {
            Solution::Unique(x) => x,
            Solution::Underdetermined { .. } => {
                return Err(ConnectError::Internal("polynomial ansatz is underdetermined at a regular symbol".into()))
            }
            Solution::Inconsistent => return Ok(None),
        };
        let t: Vec<Poly> = x
            .chunks(gammas.len())
            .map(|cs| Poly::from_terms(gammas.iter().cloned().zip(cs.iter().cloned())))
            .collect();
        out.push(t);
    }
    Ok(Some(out))
}

/// Pointwise float solution on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridConnection {
    pub points: Vec<Vec<Rational>>,
    /// `gamma[p][i]` is `Γ_i` at `points[p]`.
    pub gamma: Vec<Vec<LinearMap<f64>>>,
    /// Largest `‖ρ(N_i)σ − ∂_iσ‖` over points and directions.
    pub max_residual: f64,
    /// Smallest relative singular value of the generator-image matrix.
    pub min_relative_singular_value: f64,
}

/// Consistency threshold for the grid solve.
pub const GRID_RESIDUAL_TOL: f64 = 1e-8;
const GRID_RANK_TOL: f64 = 1e-10;

struct PointSolve {
    gamma: Vec<LinearMap<f64>>,
    residual: f64,
    rel_sv: f64,
}

fn solve_point_f64(field: &SymbolField, action: &SpBasisAction, point: &[Rational]) -> Result<PointSolve, ConnectError> {
    let d = field.fiber_dim();
    let pf: Vec<f64> = point.iter().map(rational_to_f64).collect();
    let sigma = field.eval_f64(&pf);
    let basis = monomial_basis(d, sigma.degree());
    let m = action.len();
    let mut a = DMatrix::zeros(basis.len(), m);
    for (c, g) in action.generators().iter().enumerate() {
        let img = infinitesimal_action(&g.matrix.map(f64::from_rational), &sigma);
        for (r, b) in basis.iter().enumerate() {
            a[(r, c)] = img.coeff(b);
        }
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let rel_sv = if smax > 0.0 { smin / smax } else { 0.0 };
    if rel_sv <= GRID_RANK_TOL {
        let kernel = svd.singular_values.iter().filter(|s| **s <= GRID_RANK_TOL * smax.max(1e-300)).count();
        return Err(ConnectError::NonRegular { point: point.to_vec(), kernel_dim: kernel.max(1) });
    }
    let mut gamma = Vec::with_capacity(d);
    let mut residual: f64 = 0.0;
    for i in 0..d {
        let di = field.partial_base(i).map_coeffs(|c| c.eval_f64(&pf));
        let b = DVector::from_iterator(basis.len(), basis.iter().map(|e| di.coeff(e)));
        let t = svd.solve(&b, 0.0).map_err(|e| ConnectError::Internal(e.to_string()))?;
        let r = (&a * &t - &b).norm();
        if r > GRID_RESIDUAL_TOL * (1.0 + b.norm()) {
            return Err(ConnectError::NotConstantType { point: point.to_vec(), direction: i });
        }
        residual = residual.max(r);
        gamma.push(action.combine(t.as_slice()).transpose());
    }
    Ok(PointSolve { gamma, residual, rel_sv })
}

/// Grid mode: solves the same system in floating point at every point,
/// independently and in parallel.
pub fn wagner_connection_grid(field: &SymbolField, points: &[Vec<Rational>]) -> Result<GridConnection, ConnectError> {
    let action = check_field(field)?;
    if points.is_empty() {
        return Err(ConnectError::EmptyGrid);
    }
    let d = field.fiber_dim();
    if let Some(p) = points.iter().find(|p| p.len() != d) {
        return Err(ConnectError::Shape(format!("grid point with {} coordinates in dimension {d}", p.len())));
    }
    let solves: Vec<PointSolve> =
        points.par_iter().map(|p| solve_point_f64(field, &action, p)).collect::<Result<_, _>>()?;
    let max_residual = solves.iter().map(|s| s.residual).fold(0.0, f64::max);
    let min_rel = solves.iter().map(|s| s.rel_sv).fold(f64::INFINITY, f64::min);
    Ok(GridConnection {
        points: points.to_vec(),
        gamma: solves.into_iter().map(|s| s.gamma).collect(),
        max_residual,
        min_relative_singular_value: min_rel,
    })
}
