use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use super::linear::LinearMap;
use super::multi_index::{monomial_basis, MultiIndex};
use crate::error::PolyError;
use crate::scalar::{format_rational, Coeff, Field, Rational};

/// Homogeneous polynomial of fixed degree in `dim` variables.
///
/// Symbols at a point live here: a symbol of order `k` is a homogeneous
/// polynomial of degree `k` in the fiber variables. Zero coefficients are
/// never stored, so structural equality is polynomial equality.
#[derive(Clone, PartialEq)]
pub struct HomogeneousPoly<R = Rational> {
    dim: usize,
    degree: usize,
    terms: BTreeMap<MultiIndex, R>,
}

impl<R: Coeff> HomogeneousPoly<R> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        HomogeneousPoly { dim, degree, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: R) -> Self {
        let mut p = Self::zero(dim, 0);
        p.add_term_unchecked(MultiIndex::zeros(dim), c);
        p
    }

    /// The coordinate `ξ_i` (zero-based).
    pub fn var(dim: usize, i: usize) -> Self {
        Self::monomial(dim, MultiIndex::unit(dim, i), R::one())
    }

    pub fn monomial(dim: usize, exp: MultiIndex, c: R) -> Self {
        let mut p = Self::zero(dim, exp.degree());
        p.add_term_unchecked(exp.resized(dim), c);
        p
    }

    /// Builds a polynomial, rejecting exponents of the wrong length or degree.
    pub fn from_terms(
        dim: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (MultiIndex, R)>,
    ) -> Result<Self, PolyError> {
        let mut p = Self::zero(dim, degree);
        for (e, c) in terms {
            if e.len() != dim {
                return Err(PolyError::WrongArity { term: e.to_string(), expected: dim, found: e.len() });
            }
            if e.degree() != degree {
                return Err(PolyError::NotHomogeneous { term: e.to_string(), expected: degree, found: e.degree() });
            }
            p.add_term_unchecked(e, c);
        }
        Ok(p)
    }

    pub(crate) fn add_term_unchecked(&mut self, exp: MultiIndex, c: R) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(exp.degree(), self.degree);
        match self.terms.remove(&exp) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(exp, s);
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
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

    /// Coefficients against `monomial_basis(dim, degree)`.
    pub fn coeff_vector(&self) -> Vec<R> {
        monomial_basis(self.dim, self.degree).iter().map(|e| self.coeff(e)).collect()
    }

    pub fn from_coeff_vector(dim: usize, degree: usize, v: &[R]) -> Self {
        let mut p = Self::zero(dim, degree);
        for (e, c) in monomial_basis(dim, degree).into_iter().zip(v) {
            p.add_term_unchecked(e, c.clone());
        }
        p
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut p = Self::zero(self.dim, self.degree);
        for (e, v) in &self.terms {
            p.add_term_unchecked(e.clone(), v.clone() * c.clone());
        }
        p
    }

    pub fn map_coeffs<S: Coeff>(&self, f: impl Fn(&R) -> S) -> HomogeneousPoly<S> {
        let mut p = HomogeneousPoly::zero(self.dim, self.degree);
        for (e, v) in &self.terms {
            p.add_term_unchecked(e.clone(), f(v));
        }
        p
    }

    /// Product; degrees add.
    pub fn mul(&self, other: &Self) -> Result<Self, PolyError> {
        if self.dim != other.dim {
            return Err(PolyError::DimensionMismatch { left: self.dim, right: other.dim });
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let mut p = Self::zero(self.dim, self.degree + other.degree);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                p.add_term_unchecked(ea.add(eb), ca.clone() * cb.clone());
            }
        }
        p
    }

    /// `∂/∂ξ_i`. Differentiating a constant yields the zero polynomial of
    /// degree zero.
    pub fn partial(&self, i: usize) -> Result<Self, PolyError> {
        if i >= self.dim {
            return Err(PolyError::IndexOutOfRange { index: i, dim: self.dim });
        }
        Ok(self.derivative(&MultiIndex::unit(self.dim, i)))
    }

    /// `∂^α`. Result has degree `deg − |α|`, or is the zero polynomial of
    /// degree zero when `|α| > deg`.
    pub fn derivative(&self, alpha: &MultiIndex) -> Self {
        let k = alpha.degree();
        if k > self.degree {
            return Self::zero(self.dim, 0);
        }
        let mut p = Self::zero(self.dim, self.degree - k);
        for (e, c) in &self.terms {
            if let Some(rest) = e.checked_sub(alpha) {
                let factor = MultiIndex::falling_factor(e, alpha);
                p.add_term_unchecked(rest, c.clone() * R::from_bigint(&factor));
            }
        }
        p
    }

    /// `P(M ξ)`: plain substitution of a linear change of variables.
    pub fn compose_linear(&self, m: &LinearMap<R>) -> Self {
        let d = self.dim;
        assert_eq!(m.dim(), d, "dimension mismatch in compose_linear");
        let forms: Vec<Self> = (0..d)
            .map(|i| {
                let mut f = Self::zero(d, 1);
                for j in 0..d {
                    f.add_term_unchecked(MultiIndex::unit(d, j), m.get(i, j));
                }
                f
            })
            .collect();
        let mut powers: BTreeMap<(usize, u32), Self> = BTreeMap::new();
        let mut out = Self::zero(d, self.degree);
        for (e, c) in &self.terms {
            let mut t = Self::constant(d, c.clone());
            for (i, &k) in e.entries().iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let pw = powers.entry((i, k)).or_insert_with(|| {
                    (0..k).fold(Self::constant(d, R::one()), |acc, _| acc.mul_unchecked(&forms[i]))
                });
                t = t.mul_unchecked(pw);
            }
            out = out + t;
        }
        out
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

    fn assert_compatible(&self, other: &Self) {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        assert!(
            self.degree == other.degree || self.is_zero() || other.is_zero(),
            "degree mismatch: {} vs {}",
            self.degree,
            other.degree
        );
    }
}

impl<R: Field> HomogeneousPoly<R> {
    /// Left action `(g·P)(ξ) = P(g⁻¹ξ)`, so that `(gh)·P = g·(h·P)`.
    pub fn linear_substitute(&self, g: &LinearMap<R>) -> Result<Self, PolyError> {
        if g.dim() != self.dim {
            return Err(PolyError::DimensionMismatch { left: self.dim, right: g.dim() });
        }
        let inv = g.inverse()?;
        Ok(self.compose_linear(&inv))
    }

    /// Euclidean norm of the plain coefficient vector.
    pub fn coeff_norm(&self) -> f64 {
        self.terms.values().map(|c| c.to_f64().powi(2)).sum::<f64>().sqrt()
    }
}

impl HomogeneousPoly<Rational> {
    pub fn to_f64(&self) -> HomogeneousPoly<f64> {
        self.map_coeffs(crate::scalar::rational_to_f64)
    }
}

impl<R: Coeff> Add for HomogeneousPoly<R> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self.assert_compatible(&rhs);
        if self.is_zero() && !rhs.is_zero() {
            return HomogeneousPoly { dim: rhs.dim, degree: rhs.degree, terms: rhs.terms };
        }
        for (e, c) in rhs.terms {
            self.add_term_unchecked(e, c);
        }
        self
    }
}

impl<R: Coeff> Sub for HomogeneousPoly<R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<R: Coeff> Neg for HomogeneousPoly<R> {
    type Output = Self;
    fn neg(self) -> Self {
        HomogeneousPoly { dim: self.dim, degree: self.degree, terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect() }
    }
}

fn var_name(dim: usize, i: usize) -> String {
    if dim.is_multiple_of(2) && dim > 0 {
        let n = dim / 2;
        match (n, i < n) {
            (1, true) => "x".into(),
            (1, false) => "y".into(),
            (_, true) => format!("x{}", i + 1),
            (_, false) => format!("y{}", i - n + 1),
        }
    } else {
        format!("z{}", i + 1)
    }
}

fn fmt_monomial(dim: usize, e: &MultiIndex) -> String {
    e.entries()
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| if k == 1 { var_name(dim, i) } else { format!("{}^{}", var_name(dim, i), k) })
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for HomogeneousPoly<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let m = fmt_monomial(self.dim, e);
                if m.is_empty() {
                    format_rational(c)
                } else {
                    format!("{}*{}", format_rational(c), m)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<R: Coeff> fmt::Debug for HomogeneousPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomogeneousPoly(dim={}, degree={}, ", self.dim, self.degree)?;
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            c.fmt_coeff(f)?;
            write!(f, "*ξ^{e}")?;
        }
        write!(f, ")")
    }
}

impl<R: Coeff> HomogeneousPoly<R> {
    pub(crate) fn assert_same_space(&self, other: &Self) -> Result<(), PolyError> {
        if self.dim != other.dim {
            return Err(PolyError::DimensionMismatch { left: self.dim, right: other.dim });
        }
        Ok(())
    }
}
