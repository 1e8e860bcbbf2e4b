mod common;

use common::{random_poly, random_symplectic, rng};
use num_traits::Zero;
use opinv_core::polyalg::{linear_substitute, monomial_basis, partial_derivative, poly_mul};
use opinv_core::{HomogeneousPoly, LinearMap, Rational};
use proptest::prelude::*;

fn substitute_sum(dim: usize, parts: Vec<HomogeneousPoly>, degree: usize) -> HomogeneousPoly {
    parts.into_iter().fold(HomogeneousPoly::zero(dim, degree), |a, b| a + b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_distributes(seed in any::<u64>(), dim in 1usize..4, a in 0usize..4, b in 0usize..4) {
        let mut r = rng(seed);
        let p = random_poly(&mut r, dim, a, 4, 0.6);
        let q1 = random_poly(&mut r, dim, b, 4, 0.6);
        let q2 = random_poly(&mut r, dim, b, 4, 0.6);
        let lhs = poly_mul(&p, &(q1.clone() + q2.clone())).unwrap();
        let rhs = poly_mul(&p, &q1).unwrap() + poly_mul(&p, &q2).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitution_is_multiplicative(seed in any::<u64>(), n in 1usize..3, a in 0usize..4, b in 0usize..3) {
        let mut r = rng(seed);
        let dim = 2 * n;
        let g = random_symplectic(&mut r, n);
        let p = random_poly(&mut r, dim, a, 3, 0.5);
        let q = random_poly(&mut r, dim, b, 3, 0.5);
        let lhs = linear_substitute(&poly_mul(&p, &q).unwrap(), &g).unwrap();
        let rhs = poly_mul(&linear_substitute(&p, &g).unwrap(), &linear_substitute(&q, &g).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    /// `∂_i(P∘g⁻¹) = Σ_j (g⁻¹)_{ji} (∂_j P)∘g⁻¹`.
    #[test]
    fn chain_rule(seed in any::<u64>(), n in 1usize..3, deg in 1usize..5) {
        let mut r = rng(seed);
        let dim = 2 * n;
        let g = random_symplectic(&mut r, n);
        let ginv = g.inverse().unwrap();
        let p = random_poly(&mut r, dim, deg, 3, 0.6);
        let moved = linear_substitute(&p, &g).unwrap();
        for i in 0..dim {
            let lhs = partial_derivative(&moved, i).unwrap();
            let parts = (0..dim)
                .map(|j| linear_substitute(&partial_derivative(&p, j).unwrap(), &g).unwrap().scale(&ginv.get(j, i)))
                .collect();
            prop_assert_eq!(lhs, substitute_sum(dim, parts, deg - 1));
        }
    }
}

#[test]
fn monomial_basis_sizes() {
    for d in 1..=6usize {
        for k in 0..=6usize {
            let choose = (0..k).fold(1usize, |acc, i| acc * (d + k - 1 - i) / (i + 1));
            assert_eq!(monomial_basis(d, k).len(), choose, "d={d} k={k}");
        }
    }
}

#[test]
fn non_square_or_singular_maps_are_rejected() {
    assert!(LinearMap::<Rational>::from_rows(vec![vec![Rational::zero(); 2]; 1]).is_err());
    let p: HomogeneousPoly = HomogeneousPoly::var(2, 0);
    assert!(linear_substitute(&p, &LinearMap::zero(2)).is_err());
}
