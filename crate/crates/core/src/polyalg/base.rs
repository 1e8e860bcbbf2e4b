//! Sparse multivariate polynomials without a fixed degree.
//!
//! These carry the base-point dependence of operator coefficients,
//! Christoffel symbols and symbol fields. Monomials are stored with trailing
//! zero exponents trimmed, so a polynomial does not need to know its number
//! of variables and can itself serve as a [`Coeff`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::multi_index::MultiIndex;
use super::linear::LinearMap;
use crate::scalar::{format_rational, Coeff, Field, Rational};

#[derive(Clone, PartialEq)]
pub struct Poly<R = Rational> {
    terms: BTreeMap<MultiIndex, R>,
}

impl<R: Coeff> Poly<R> {
    pub fn constant(c: R) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(MultiIndex::default(), c);
        }
        Poly { terms }
    }

    /// The coordinate function `x_i` (zero-based).
    pub fn var(i: usize) -> Self {
        Self::monomial(MultiIndex::unit(i + 1, i), R::one())
    }

    pub fn monomial(exp: MultiIndex, c: R) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp.trimmed(), c);
        }
        Poly { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (MultiIndex, R)>) -> Self {
        let mut p = Poly::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: MultiIndex, c: R) {
        if c.is_zero() {
            return;
        }
        let key = exp.trimmed();
        match self.terms.remove(&key) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(key, s);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &R)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: &MultiIndex) -> R {
        self.terms.get(exp).cloned().unwrap_or_else(R::zero)
    }

    /// Highest total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|e| e.degree()).max()
    }

    /// Number of variables actually used.
    pub fn num_vars(&self) -> usize {
        self.terms.keys().map(|e| e.support_len()).max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.support_len() == 0)
    }

    pub fn constant_term(&self) -> R {
        self.coeff(&MultiIndex::default())
    }

    pub fn scale(&self, c: &R) -> Self {
        Poly::from_terms(self.terms.iter().map(|(e, v)| (e.clone(), v.clone() * c.clone())))
    }

    pub fn map_coeffs<S: Coeff>(&self, f: impl Fn(&R) -> S) -> Poly<S> {
        Poly::from_terms(self.terms.iter().map(|(e, v)| (e.clone(), f(v))))
    }

    /// `∂/∂x_i`.
    pub fn partial(&self, i: usize) -> Self {
        Poly::from_terms(self.terms.iter().filter_map(|(e, c)| {
            let k = e.get(i);
            (k > 0).then(|| (e.with_decrement(i).unwrap(), c.clone() * R::from_int(k as i64)))
        }))
    }

    /// `∂^α`.
    pub fn derivative(&self, alpha: &MultiIndex) -> Self {
        Poly::from_terms(self.terms.iter().filter_map(|(e, c)| {
            let rest = e.checked_sub(alpha)?;
            let factor = MultiIndex::falling_factor(e, alpha);
            Some((rest, c.clone() * R::from_bigint(&factor)))
        }))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, point: &[R]) -> R {
        let mut acc = R::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.entries().iter().enumerate() {
                for _ in 0..k {
                    t = t * point[i].clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// `p(M x + c)`: substitutes the affine map into the variables.
    pub fn compose_affine(&self, m: &LinearMap<R>, shift: &[R]) -> Self {
        let d = m.dim();
        let images: Vec<Poly<R>> = (0..d)
            .map(|i| {
                let mut p = Poly::constant(shift[i].clone());
                for j in 0..d {
                    p = p + Poly::var(j).scale(m.entry(i, j));
                }
                p
            })
            .collect();
        self.substitute(&images)
    }

    /// Replaces `x_i` by `images[i]`.
    pub fn substitute(&self, images: &[Poly<R>]) -> Self {
        let mut cache: BTreeMap<(usize, u32), Poly<R>> = BTreeMap::new();
        let mut acc = Poly::zero();
        for (e, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            for (i, &k) in e.entries().iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let pw = cache.entry((i, k)).or_insert_with(|| images[i].pow(k)).clone();
                t = &t * &pw;
            }
            acc = acc + t;
        }
        acc
    }
}

impl Poly<Rational> {
    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = c.to_f64();
                for (i, &k) in e.entries().iter().enumerate() {
                    t *= point[i].powi(k as i32);
                }
                t
            })
            .sum()
    }

    pub fn to_f64(&self) -> Poly<f64> {
        self.map_coeffs(|c| c.to_f64())
    }
}

impl<R: Coeff> Zero for Poly<R> {
    fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<R: Coeff> One for Poly<R> {
    fn one() -> Self {
        Poly::constant(R::one())
    }
}

impl<R: Coeff> Add for Poly<R> {
    type Output = Poly<R>;
    fn add(mut self, rhs: Self) -> Self {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl<R: Coeff> Sub for Poly<R> {
    type Output = Poly<R>;
    fn sub(mut self, rhs: Self) -> Self {
        for (e, c) in rhs.terms {
            self.add_term(e, -c);
        }
        self
    }
}

impl<R: Coeff> Neg for Poly<R> {
    type Output = Poly<R>;
    fn neg(self) -> Self {
        Poly { terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect() }
    }
}

impl<R: Coeff> Mul for Poly<R> {
    type Output = Poly<R>;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<R: Coeff> Mul<&Poly<R>> for &Poly<R> {
    type Output = Poly<R>;
    fn mul(self, rhs: &Poly<R>) -> Poly<R> {
        let mut out = Poly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea.add(eb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<R: Coeff> Coeff for Poly<R> {
    fn from_rational(r: &Rational) -> Self {
        Poly::constant(R::from_rational(r))
    }

    fn fmt_coeff(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self:?})")
    }
}

/// Ring evaluation shared by exact and float callers.
pub fn eval_at<R: Field>(p: &Poly<Rational>, point: &[R]) -> R {
    p.map_coeffs(|c| R::from_rational(c)).eval(point)
}

impl<R: Coeff> fmt::Debug for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            c.fmt_coeff(f)?;
            if e.degree() > 0 {
                write!(f, "*a^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Poly<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .entries()
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| if k == 1 { format!("a{}", i + 1) } else { format!("a{}^{}", i + 1, k) })
                    .collect();
                if mono.is_empty() {
                    format_rational(c)
                } else {
                    format!("{}*{}", format_rational(c), mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn x(i: usize) -> Poly {
        Poly::var(i)
    }

    #[test]
    fn ring_operations() {
        let p = x(0) + Poly::constant(int(1));
        let q = x(0) - Poly::constant(int(1));
        assert_eq!(&p * &q, x(0).pow(2) - Poly::one());
        assert!((p.clone() - p).is_zero());
    }

    #[test]
    fn derivatives() {
        let p = x(0).pow(3) * x(1);
        assert_eq!(p.partial(0), x(0).pow(2) * x(1) * Poly::constant(int(3)));
        assert_eq!(p.derivative(&MultiIndex::from([2, 1])), x(0) * Poly::constant(int(6)));
        assert!(p.partial(2).is_zero());
    }

    #[test]
    fn affine_composition() {
        // p = a1 * a2; substitute a -> (a1 + a2 + 1, 2 a2)
        let p = x(0) * x(1);
        let m = LinearMap::from_rows(vec![vec![int(1), int(1)], vec![int(0), int(2)]]).unwrap();
        let c = vec![int(1), int(0)];
        let q = p.compose_affine(&m, &c);
        let pt = [rat(1, 3), int(2)];
        let expected = (rat(1, 3) + int(2) + int(1)) * int(4);
        assert_eq!(q.eval(&pt), expected);
    }

    #[test]
    fn nested_coefficients() {
        // polynomials with polynomial coefficients form a ring
        let a: Poly<Poly> = Poly::var(0).scale(&Poly::var(1));
        let b = &a * &a;
        assert_eq!(b.coeff(&MultiIndex::from([2])), x(1).pow(2));
    }
}
