//! Reference computations that share no code with the library.
//!
//! Polynomials are plain maps from exponent vectors to rationals. The
//! transvectants are built from their structural definition: the
//! bi-derivation is applied term by term to a formal tensor product and
//! the result is multiplied out at the end.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;
pub type OPoly = BTreeMap<Vec<u32>, Q>;
/// Formal sums of `m_a ⊗ m_b`.
type Tensor = BTreeMap<(Vec<u32>, Vec<u32>), Q>;

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn push(t: &mut Tensor, key: (Vec<u32>, Vec<u32>), c: Q) {
    if c.is_zero() {
        return;
    }
    let e = t.entry(key.clone()).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        t.remove(&key);
    }
}

fn tensor(p: &OPoly, r: &OPoly) -> Tensor {
    let mut t = Tensor::new();
    for (a, ca) in p {
        for (b, cb) in r {
            push(&mut t, (a.clone(), b.clone()), ca * cb);
        }
    }
    t
}

/// `∂_i ⊗ ∂_j` applied to a formal tensor.
fn bi_derivative(t: &Tensor, i: usize, j: usize) -> Tensor {
    let mut out = Tensor::new();
    for ((a, b), c) in t {
        if a[i] == 0 || b[j] == 0 {
            continue;
        }
        let mut a2 = a.clone();
        let mut b2 = b.clone();
        a2[i] -= 1;
        b2[j] -= 1;
        push(&mut out, (a2, b2), c * q(a[i] as i64) * q(b[j] as i64));
    }
    out
}

fn add_scaled(acc: &mut Tensor, t: &Tensor, s: &Q) {
    for (k, c) in t {
        push(acc, k.clone(), c * s);
    }
}

fn multiply_out(t: &Tensor) -> OPoly {
    let mut out = OPoly::new();
    for ((a, b), c) in t {
        let e: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        let slot = out.entry(e.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            out.remove(&e);
        }
    }
    out
}

/// `μ(ω̂^r(P ⊗ R))` with `ω̂ = ½ Σ_i (∂x_i ⊗ ∂y_i − ∂y_i ⊗ ∂x_i)`,
/// variables ordered `(x_1..x_n, y_1..y_n)`.
pub fn symplectic(p: &OPoly, r_poly: &OPoly, n: usize, r: usize) -> OPoly {
    let half = Q::new(BigInt::one(), BigInt::from(2));
    let mut t = tensor(p, r_poly);
    for _ in 0..r {
        let mut next = Tensor::new();
        for i in 0..n {
            add_scaled(&mut next, &bi_derivative(&t, i, n + i), &half);
            add_scaled(&mut next, &bi_derivative(&t, n + i, i), &-half.clone());
        }
        t = next;
    }
    multiply_out(&t)
}

/// `μ(ĝ^m(P ⊗ R))` with `ĝ = Σ_i ∂_i ⊗ ∂_i`.
pub fn metric(p: &OPoly, r_poly: &OPoly, dim: usize, m: usize) -> OPoly {
    let mut t = tensor(p, r_poly);
    for _ in 0..m {
        let mut next = Tensor::new();
        for i in 0..dim {
            add_scaled(&mut next, &bi_derivative(&t, i, i), &Q::one());
        }
        t = next;
    }
    multiply_out(&t)
}

/// All exponent vectors of length `dim` and total degree `k`.
pub fn monomials(dim: usize, k: usize) -> Vec<Vec<u32>> {
    if dim == 0 {
        return if k == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=k).rev() {
        for mut rest in monomials(dim - 1, k - first) {
            rest.insert(0, first as u32);
            out.push(rest);
        }
    }
    out
}

/// Matrix of `R ↦ [P, R]_r` on degree-`deg` monomials, column `j` the image
/// of the `j`-th monomial, in the order of [`monomials`].
pub fn symplectic_operator(p: &OPoly, n: usize, r: usize, deg: usize) -> Vec<Vec<Q>> {
    let basis = monomials(2 * n, deg);
    let mut m = vec![vec![Q::zero(); basis.len()]; basis.len()];
    for (j, b) in basis.iter().enumerate() {
        let img = symplectic(p, &OPoly::from([(b.clone(), Q::one())]), n, r);
        for (e, c) in img {
            let i = basis.iter().position(|x| *x == e).expect("image stays in degree");
            m[i][j] = c;
        }
    }
    m
}

/// `Tr(M^k)` for `k = 1..=kmax` by repeated multiplication.
pub fn power_traces(m: &[Vec<Q>], kmax: usize) -> Vec<Q> {
    let n = m.len();
    let mut pow = m.to_vec();
    let mut out = Vec::new();
    for _ in 0..kmax {
        out.push((0..n).map(|i| pow[i][i].clone()).fold(Q::zero(), |a, b| a + b));
        pow = (0..n).map(|i| (0..n).map(|j| (0..n).map(|l| &pow[i][l] * &m[l][j]).fold(Q::zero(), |a, b| a + b)).collect()).collect();
    }
    out
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Size of the default symplectic label set for a degree-`p` symbol in
/// dimension `d`, counted from the admissibility rules directly.
pub fn default_label_count(d: usize, p: usize) -> usize {
    let kcap = |q: usize| binom(d + q - 1, q).min(8);
    let qs: Vec<usize> = if p.div_ceil(2) == p { vec![p] } else { vec![p.div_ceil(2), p] };
    let mut count = 0;
    if p.is_multiple_of(2) {
        count += qs.iter().filter(|&&q| 2 * q >= p).map(|&q| kcap(q)).sum::<usize>();
    }
    for &q in &qs {
        for l in 0..p {
            if 2 * l < p && q + 2 * l >= p {
                count += kcap(q);
            }
        }
    }
    if p == 2 {
        count += (2..=d.max(4)).filter(|k| k % 2 == 0).count();
    }
    if p.is_multiple_of(2) {
        count += 1;
    }
    count + 1
}

/// Tensor field: `(fiber exponent, base exponent) → coefficient`.
pub type OField = BTreeMap<(Vec<u32>, Vec<u32>), Q>;

/// `∇_i σ = ∂_i σ + Σ_{j,l} Γ^j_{il} ξ_j ∂σ/∂ξ_l` for a contravariant
/// symmetric tensor, with `gamma[i][j][l] = Γ^j_{il}` given as base
/// polynomials.
pub fn covariant_derivative(sigma: &OField, gamma: &[Vec<Vec<OPoly>>], i: usize) -> OField {
    let mut out = Tensor::new();
    for ((f, b), c) in sigma {
        if b[i] > 0 {
            let mut b2 = b.clone();
            b2[i] -= 1;
            push(&mut out, (f.clone(), b2), c * q(b[i] as i64));
        }
        for (j, row) in gamma[i].iter().enumerate() {
            for (l, g) in row.iter().enumerate() {
                if f[l] == 0 {
                    continue;
                }
                let mut f2 = f.clone();
                f2[l] -= 1;
                f2[j] += 1;
                for (gb, gc) in g {
                    let b2: Vec<u32> = b.iter().zip(gb).map(|(x, y)| x + y).collect();
                    push(&mut out, (f2.clone(), b2), c * gc * q(f[l] as i64));
                }
            }
        }
    }
    out
}
