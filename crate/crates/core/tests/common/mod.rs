//! Shared generators and oracles for integration tests.
#![allow(dead_code)]

pub mod oracles;

use num_traits::Zero;
use opinv_core::connect::DiffOperator;
use opinv_core::polyalg::{indices_up_to, monomial_basis};
use opinv_core::scalar::int;
use opinv_core::{HomogeneousPoly, LinearMap, MultiIndex, Poly, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random homogeneous polynomial with integer coefficients in `-c..=c`,
/// each monomial kept with probability `density`.
pub fn random_poly(rng: &mut ChaCha8Rng, dim: usize, degree: usize, c: i64, density: f64) -> HomogeneousPoly {
    let terms = monomial_basis(dim, degree)
        .into_iter()
        .filter_map(|e| {
            if !rng.random_bool(density) {
                return None;
            }
            let v = rng.random_range(-c..=c);
            (v != 0).then(|| (e, int(v)))
        })
        .collect::<Vec<_>>();
    HomogeneousPoly::from_terms(dim, degree, terms).unwrap()
}

/// Dense random polynomial whose coefficients are all nonzero.
pub fn dense_poly(rng: &mut ChaCha8Rng, dim: usize, degree: usize, c: i64) -> HomogeneousPoly {
    let terms = monomial_basis(dim, degree)
        .into_iter()
        .map(|e| {
            let mut v = 0;
            while v == 0 {
                v = rng.random_range(-c..=c);
            }
            (e, int(v))
        })
        .collect::<Vec<_>>();
    HomogeneousPoly::from_terms(dim, degree, terms).unwrap()
}

pub fn to_oracle(p: &HomogeneousPoly) -> oracles::OPoly {
    p.terms().map(|(e, c)| (e.entries().to_vec(), c.clone())).collect()
}

pub fn from_oracle(dim: usize, degree: usize, p: &oracles::OPoly) -> HomogeneousPoly {
    HomogeneousPoly::from_terms(dim, degree, p.iter().map(|(e, c)| (MultiIndex::new(e.iter().copied()), c.clone()))).unwrap()
}

fn block(n: usize, a: &[Vec<Rational>], b: &[Vec<Rational>], c: &[Vec<Rational>], d: &[Vec<Rational>]) -> LinearMap<Rational> {
    let mut rows = Vec::with_capacity(2 * n);
    for i in 0..n {
        rows.push(a[i].iter().chain(&b[i]).cloned().collect());
    }
    for i in 0..n {
        rows.push(c[i].iter().chain(&d[i]).cloned().collect());
    }
    LinearMap::from_rows(rows).unwrap()
}

fn eye(n: usize) -> Vec<Vec<Rational>> {
    (0..n).map(|i| (0..n).map(|j| int((i == j) as i64)).collect()).collect()
}

fn zeros(n: usize) -> Vec<Vec<Rational>> {
    vec![vec![Rational::zero(); n]; n]
}

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize, c: i64) -> Vec<Vec<Rational>> {
    let mut s = zeros(n);
    for i in 0..n {
        for j in i..n {
            let v = int(rng.random_range(-c..=c));
            s[i][j] = v.clone();
            s[j][i] = v;
        }
    }
    s
}

/// Upper shear `[[I, S], [0, I]]` with integer symmetric `S`.
pub fn upper_shear(rng: &mut ChaCha8Rng, n: usize, c: i64) -> LinearMap<Rational> {
    block(n, &eye(n), &random_symmetric(rng, n, c), &zeros(n), &eye(n))
}

/// Lower shear `[[I, 0], [S, I]]`.
pub fn lower_shear(rng: &mut ChaCha8Rng, n: usize, c: i64) -> LinearMap<Rational> {
    block(n, &eye(n), &zeros(n), &random_symmetric(rng, n, c), &eye(n))
}

/// `[[A, 0], [0, A^{-T}]]` with `A` a product of elementary integer matrices.
pub fn block_diagonal(rng: &mut ChaCha8Rng, n: usize) -> LinearMap<Rational> {
    let mut a = LinearMap::identity(n);
    if n > 1 {
        for _ in 0..3 {
            let i = rng.random_range(0..n);
            let mut j = rng.random_range(0..n);
            while j == i {
                j = rng.random_range(0..n);
            }
            let mut e = LinearMap::identity(n);
            e.set(i, j, int(rng.random_range(-2..=2)));
            a = a.mul(&e);
        }
    } else {
        a = LinearMap::from_rows(vec![vec![int(if rng.random_bool(0.5) { 2 } else { -1 })]]).unwrap();
    }
    let ait = a.inverse().unwrap().transpose();
    block(n, a.rows(), &zeros(n), &zeros(n), ait.rows())
}

/// Random exact symplectic map in dimension `2n`.
pub fn random_symplectic(rng: &mut ChaCha8Rng, n: usize) -> LinearMap<Rational> {
    let mut g = LinearMap::identity(2 * n);
    for _ in 0..2 {
        g = g.mul(&upper_shear(rng, n, 1)).mul(&lower_shear(rng, n, 1));
    }
    g.mul(&block_diagonal(rng, n))
}

/// The swap `(x, y) ↦ (y, −x)`.
pub fn swap(n: usize) -> LinearMap<Rational> {
    let mut neg = eye(n);
    for row in &mut neg {
        for v in row.iter_mut() {
            *v = -v.clone();
        }
    }
    block(n, &zeros(n), &eye(n), &neg, &zeros(n))
}

pub fn random_base_poly(rng: &mut ChaCha8Rng, dim: usize, max_degree: usize, c: i64) -> Poly {
    let mut p = Poly::zero();
    for e in indices_up_to(dim, max_degree) {
        if rng.random_bool(0.5) {
            p.add_term(e, int(rng.random_range(-c..=c)));
        }
    }
    p
}

/// Random operator with polynomial coefficients of degree ≤ `coeff_degree`.
pub fn random_operator(rng: &mut ChaCha8Rng, dim: usize, order: usize, coeff_degree: usize) -> DiffOperator {
    let terms: Vec<(MultiIndex, Poly)> =
        indices_up_to(dim, order).into_iter().map(|a| (a, random_base_poly(rng, dim, coeff_degree, 3))).collect();
    let mut op = DiffOperator::from_terms(dim, order, terms).unwrap();
    // Keep the declared order meaningful.
    let top = monomial_basis(dim, order)[0].clone();
    if op.coeff(&top).is_zero() {
        op.add_term(top, Poly::constant(int(1))).unwrap();
    }
    op
}

pub fn max_rel_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs() / (1.0 + x.abs().max(y.abs()))).fold(0.0, f64::max)
}

/// Planted orbit pair for the matching harness: a dense integer symbol `P`
/// and `Q = exp(M)·P` with `M ∈ sp(2n)` of Frobenius norm at most one,
/// lifted exactly from the float result.
pub struct PlantedPair {
    pub p: HomogeneousPoly,
    pub q: HomogeneousPoly,
    pub g: LinearMap<f64>,
}

pub fn planted_pair(seed: u64, n: usize, degree: usize) -> PlantedPair {
    use opinv_core::equiv::sp_exp;
    use opinv_core::invar::SpBasisAction;
    let mut r = rng(seed);
    let p = dense_poly(&mut r, 2 * n, degree, 3);
    let action = SpBasisAction::new(n);
    let t: Vec<f64> = (0..action.len()).map(|_| r.random_range(-1.0..1.0)).collect();
    let norm = action.combine(&t).rows().iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
    let target = r.random_range(0.2..1.0);
    let t: Vec<f64> = t.iter().map(|v| v * target / norm).collect();
    let g = sp_exp(&action, &t);
    let moved = p.to_f64().linear_substitute(&g).unwrap();
    let q = moved.map_coeffs(|c| Rational::from_float(*c).unwrap());
    PlantedPair { p, q, g }
}

/// `max |P(g⁻¹ξ) − Q(ξ)|` over a few fixed points on the unit sphere, by
/// direct evaluation. Independent of the coefficient-space residual.
pub fn pointwise_defect(p: &HomogeneousPoly, q: &HomogeneousPoly, g: &LinearMap<f64>) -> f64 {
    let ginv = g.to_nalgebra().try_inverse().unwrap();
    let pf = p.to_f64();
    let qf = q.to_f64();
    let d = p.dim();
    let mut r = rng(99);
    (0..16)
        .map(|_| {
            let v: Vec<f64> = (0..d).map(|_| r.random_range(-1.0..1.0)).collect();
            let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            let xi = nalgebra::DVector::from_iterator(d, v.iter().map(|x| x / len));
            let pre = &ginv * &xi;
            (pf.eval(pre.as_slice()) - qf.eval(xi.as_slice())).abs()
        })
        .fold(0.0, f64::max)
}
