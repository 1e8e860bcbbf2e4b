mod common;

use common::*;
use num_traits::{One, Zero};
use opinv_core::equiv::{
    constant_type_test, orbit_match, signature_match, ConstantTypeVerdict, MatchConfig, MatchVerdict, SignatureVerdict,
    SYMPLECTIC_TOL,
};
use opinv_core::invar::{invariant_signature, InvariantLabel, SignatureConfig};
use opinv_core::scalar::int;
use opinv_core::{HomogeneousPoly, LinearMap, MultiIndex, Poly, Rational, SymbolField};
use proptest::prelude::*;

fn binary(terms: &[([u32; 2], i64)]) -> HomogeneousPoly {
    let deg = terms[0].0.iter().sum::<u32>() as usize;
    HomogeneousPoly::from_terms(2, deg, terms.iter().map(|(e, c)| (MultiIndex::from(*e), int(*c)))).unwrap()
}

/// Rank over the rationals by plain elimination.
fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, piv);
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone() / rows[r][c].clone();
                for j in 0..cols {
                    let v = rows[r][j].clone() * f.clone();
                    rows[i][j] = rows[i][j].clone() - v;
                }
            }
        }
        r += 1;
    }
    r
}

/// Orbit dimension of a binary form from the three Hamiltonian fields
/// `x∂_y`, `y∂_x`, `x∂_x − y∂_y`, computed on the oracle representation.
fn binary_orbit_dim(p: &HomogeneousPoly) -> usize {
    let deg = p.degree() as u32;
    let basis = oracles::monomials(2, deg as usize);
    let op = to_oracle(p);
    let image = |f: &dyn Fn(&[u32], &Rational) -> Option<(Vec<u32>, Rational)>| -> Vec<Rational> {
        let mut out = std::collections::BTreeMap::<Vec<u32>, Rational>::new();
        for (e, c) in &op {
            if let Some((e2, c2)) = f(e, c) {
                *out.entry(e2).or_insert_with(Rational::zero) += c2;
            }
        }
        basis.iter().map(|b| out.get(b).cloned().unwrap_or_else(Rational::zero)).collect()
    };
    let x_dy = image(&|e, c| (e[1] > 0).then(|| (vec![e[0] + 1, e[1] - 1], c * int(e[1] as i64))));
    let y_dx = image(&|e, c| (e[0] > 0).then(|| (vec![e[0] - 1, e[1] + 1], c * int(e[0] as i64))));
    let euler = image(&|e, c| Some((e.to_vec(), c * int(e[0] as i64 - e[1] as i64))));
    rank(vec![x_dy, y_dx, euler])
}

#[test]
fn refutation_example_uses_orbit_dimension() {
    let p = binary(&[([3, 0], 1), ([0, 3], 1)]);
    let q = binary(&[([3, 0], 1)]);
    assert_eq!(binary_orbit_dim(&p), 3);
    assert!(binary_orbit_dim(&q) < 3);
    let sp = invariant_signature(&p).unwrap();
    let sq = invariant_signature(&q).unwrap();
    assert_eq!(sp.get(&InvariantLabel::OrbitDimension), Some(&int(binary_orbit_dim(&p) as i64)));
    assert_eq!(sq.get(&InvariantLabel::OrbitDimension), Some(&int(binary_orbit_dim(&q) as i64)));
    assert!(matches!(signature_match(&sp, &sq, 0.0).unwrap(), SignatureVerdict::Distinct { .. }));
    let res = orbit_match(&p, &q, &MatchConfig::default()).unwrap();
    assert!(matches!(res.verdict, MatchVerdict::SignatureMismatch { .. }));
    assert!(res.runs.is_empty());
}

#[test]
fn planted_matches_are_recovered() {
    let mut matched = 0;
    for seed in 0..50 {
        let pair = planted_pair(seed, 1, 3);
        let cfg = MatchConfig { seed, ..MatchConfig::default() };
        let res = orbit_match(&pair.p, &pair.q, &cfg).unwrap();
        for run in &res.runs {
            assert!(run.history.windows(2).all(|w| w[1] <= w[0]), "seed {seed}: residual increased");
        }
        if let MatchVerdict::Matched { g, residual } = &res.verdict {
            assert!(*residual <= 1e-6);
            assert!(g.symplectic_defect() <= SYMPLECTIC_TOL);
            assert!(pointwise_defect(&pair.p, &pair.q, g) <= 1e-5, "seed {seed}");
            matched += 1;
        }
    }
    assert!(matched >= 45, "only {matched}/50 planted pairs matched");
}

#[test]
fn matching_is_deterministic() {
    let pair = planted_pair(7, 1, 3);
    let cfg = MatchConfig { seed: 3, restarts: 6, ..MatchConfig::default() };
    let a = orbit_match(&pair.p, &pair.q, &cfg).unwrap();
    let b = orbit_match(&pair.p, &pair.q, &cfg).unwrap();
    assert_eq!(a, b);
}

#[test]
fn identity_target_matches_at_the_identity() {
    let p = dense_poly(&mut rng(5), 2, 4, 3);
    let res = orbit_match(&p, &p, &MatchConfig::default()).unwrap();
    match res.verdict {
        MatchVerdict::Matched { g, residual } => {
            assert_eq!(residual, 0.0);
            assert!(g.sub(&LinearMap::identity(2)).max_abs() == 0.0);
        }
        other => panic!("expected a match, got {other:?}"),
    }
}

#[test]
fn failed_search_is_reported_as_inconclusive() {
    // Equal signatures but a single cheap restart with no iterations.
    let pair = planted_pair(11, 1, 3);
    let cfg = MatchConfig { restarts: 1, max_iters: 0, ..MatchConfig::default() };
    let res = orbit_match(&pair.p, &pair.q, &cfg).unwrap();
    assert!(matches!(res.verdict, MatchVerdict::NoMatchFound { .. }));
}

#[test]
fn constant_type_on_symplectic_frames() {
    // σ(a) = g(a)·σ₀ with g(a) = [[1, a], [0, 1]]; its inverse is a polynomial too.
    let sigma0 = binary(&[([3, 0], 1), ([1, 2], 2), ([0, 3], -1)]);
    let a = Poly::var(0);
    let inv = LinearMap::from_rows(vec![vec![Poly::one(), -a], vec![Poly::zero(), Poly::one()]]).unwrap();
    let field = SymbolField::from_inverse_frame(1, &sigma0, &inv);
    let grid: Vec<Vec<Rational>> = (-2..=2).map(|v| vec![int(v)]).collect();
    let cfg = SignatureConfig::default();
    match constant_type_test(&field, &grid, &cfg).unwrap() {
        ConstantTypeVerdict::ConstantTypeEvidence { points, signature } => {
            assert_eq!(points, 5);
            assert_eq!(signature, invariant_signature(&sigma0).unwrap());
        }
        other => panic!("{other:?}"),
    }

    // x³ + a·y³ drops orbit dimension at a = 0.
    let sym = HomogeneousPoly::from_terms(
        2,
        3,
        [(MultiIndex::from([3, 0]), Poly::one()), (MultiIndex::from([0, 3]), Poly::var(0))],
    )
    .unwrap();
    let field = SymbolField::new(1, sym).unwrap();
    let at = |v: i64| binary_orbit_dim(&field.eval(&[int(v)]));
    assert_ne!(at(0), at(1));
    match constant_type_test(&field, &[vec![int(0)], vec![int(1)]], &cfg).unwrap() {
        ConstantTypeVerdict::TypeVaries { a, b, .. } => {
            assert_eq!(a, vec![int(0)]);
            assert_eq!(b, vec![int(1)]);
        }
        other => panic!("{other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // Refutation soundness in assertable form: the harness never separates
    // a symbol from an exact symplectic image of itself.
    #[test]
    fn signatures_never_separate_orbit_pairs(seed in 0u64..10_000, n in 1usize..=2, deg in 2usize..=4) {
        let mut r = rng(seed);
        let p = random_poly(&mut r, 2 * n, deg, 3, 0.7);
        let g = random_symplectic(&mut r, n);
        let q = p.linear_substitute(&g).unwrap();
        let sp = invariant_signature(&p).unwrap();
        let sq = invariant_signature(&q).unwrap();
        prop_assert_eq!(&sp, &sq);
        prop_assert_eq!(signature_match(&sp, &sq, 0.0).unwrap(), SignatureVerdict::Indistinguishable);
    }

    #[test]
    fn binary_orbit_dimension_agrees_with_oracle(seed in 0u64..10_000, deg in 1usize..=5) {
        let p = random_poly(&mut rng(seed), 2, deg, 2, 0.5);
        let sig = invariant_signature(&p).unwrap();
        prop_assert_eq!(sig.get(&InvariantLabel::OrbitDimension), Some(&int(binary_orbit_dim(&p) as i64)));
    }
}
