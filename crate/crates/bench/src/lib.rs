//! Fixed inputs shared by the benchmarks.

use opinv_core::connect::{Connection, DiffOperator};
use opinv_core::polyalg::{indices_up_to, monomial_basis};
use opinv_core::scalar::int;
use opinv_core::{HomogeneousPoly, LinearMap, MultiIndex, Poly};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Dense symbol with nonzero integer coefficients in `-3..=3`.
pub fn dense_symbol(seed: u64, dim: usize, degree: usize) -> HomogeneousPoly {
    let mut r = rng(seed);
    let terms = monomial_basis(dim, degree).into_iter().map(|e| {
        let mut v = 0;
        while v == 0 {
            v = r.random_range(-3..=3i64);
        }
        (e, int(v))
    });
    HomogeneousPoly::from_terms(dim, degree, terms.collect::<Vec<_>>()).unwrap()
}

fn base_poly(r: &mut ChaCha8Rng, dim: usize, degree: usize) -> Poly {
    let mut p = Poly::zero();
    for e in indices_up_to(dim, degree) {
        p.add_term(e, int(r.random_range(-3..=3)));
    }
    p
}

/// Operator with every coefficient a random polynomial of degree `coeff_degree`.
pub fn operator(seed: u64, dim: usize, order: usize, coeff_degree: usize) -> DiffOperator {
    let mut r = rng(seed);
    let terms: Vec<(MultiIndex, Poly)> =
        indices_up_to(dim, order).into_iter().map(|a| (a, base_poly(&mut r, dim, coeff_degree))).collect();
    DiffOperator::from_terms(dim, order, terms).unwrap()
}

/// Connection with affine Christoffel symbols.
pub fn connection(seed: u64, dim: usize) -> Connection {
    let mut r = rng(seed);
    let comps = (0..dim).map(|_| (0..dim).map(|_| (0..dim).map(|_| base_poly(&mut r, dim, 1)).collect()).collect()).collect();
    Connection::from_components(comps).unwrap()
}

/// Inverse of the frame `[[1, x1], [0, 1]]·[[1, 0], [x2, 1]]`.
pub fn inverse_frame() -> LinearMap<Poly> {
    let (x, y) = (Poly::var(0), Poly::var(1));
    let one = || Poly::constant(int(1));
    let lower = LinearMap::from_rows(vec![vec![one(), Poly::zero()], vec![y.scale(&int(-1)), one()]]).unwrap();
    let upper = LinearMap::from_rows(vec![vec![one(), x.scale(&int(-1))], vec![Poly::zero(), one()]]).unwrap();
    lower.mul(&upper)
}
