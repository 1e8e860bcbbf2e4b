//! Coefficient rings used throughout the crate.
//!
//! Everything polynomial is generic over [`Coeff`], a commutative ring with a
//! canonical embedding of the rationals. Three instances matter in practice:
//! exact [`Rational`], `f64` for group elements coming out of matrix
//! exponentials, and [`Poly<Rational>`](crate::Poly) for symbols whose
//! coefficients depend polynomially on a base point.

use std::fmt::{self, Debug};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ParseError;

/// Exact rational number.
pub type Rational = BigRational;

pub trait Coeff:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(r: &Rational) -> Self;

    fn from_int(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(v)))
    }

    fn from_bigint(v: &BigInt) -> Self {
        Self::from_rational(&Rational::from_integer(v.clone()))
    }

    /// Compact rendering used by `Debug` impls of containers.
    fn fmt_coeff(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }

    /// `Tr(A^k)` for `k = 1..=kmax` of a square matrix.
    fn power_traces(a: &[Vec<Self>], kmax: usize) -> Vec<Self> {
        crate::invar::generic_power_traces(a, kmax)
    }
}

/// A coefficient ring that is also a field, so elimination is possible.
pub trait Field: Coeff + Div<Output = Self> {
    /// Arithmetic is exact, so zero tests need no tolerance.
    const EXACT: bool;

    /// Whether the value counts as zero when pivoting, given the largest
    /// magnitude present in the data. Exact fields ignore `scale`.
    fn is_negligible(&self, scale: f64) -> bool;

    fn to_f64(&self) -> f64;

    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }
}

impl Coeff for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn fmt_coeff(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_rational(self))
    }

    // Clearing the common denominator first keeps every product integral,
    // which avoids a gcd per entry update.
    fn power_traces(a: &[Vec<Self>], kmax: usize) -> Vec<Self> {
        let denom = a
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
        let b: Vec<Vec<BigInt>> =
            a.iter().map(|row| row.iter().map(|c| c.numer() * (&denom / c.denom())).collect()).collect();
        let n = b.len();
        let mut out = Vec::with_capacity(kmax);
        let mut pw = b.clone();
        let mut dk = denom.clone();
        for k in 1..=kmax {
            if k > 1 {
                let mut next = vec![vec![BigInt::zero(); n]; n];
                for (i, row) in pw.iter().enumerate() {
                    for (l, pil) in row.iter().enumerate() {
                        if pil.is_zero() {
                            continue;
                        }
                        for (j, blj) in b[l].iter().enumerate() {
                            if !blj.is_zero() {
                                next[i][j] += pil * blj;
                            }
                        }
                    }
                }
                pw = next;
                dk *= &denom;
            }
            let tr: BigInt = (0..n).map(|i| &pw[i][i]).sum();
            out.push(Rational::new(tr, dk.clone()));
        }
        out
    }
}

impl Field for Rational {
    const EXACT: bool = true;

    fn is_negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
}

impl Coeff for f64 {
    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r)
    }

    fn from_int(v: i64) -> Self {
        v as f64
    }
}

impl Field for f64 {
    const EXACT: bool = false;

    fn is_negligible(&self, scale: f64) -> bool {
        self.abs() <= 1e-11 * scale.max(1.0)
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Huge numerator or denominator: shift both down before dividing.
            let bits = r.numer().bits().max(r.denom().bits());
            let shift = bits.saturating_sub(1000) as usize;
            let n = (r.numer() >> shift).to_f64().unwrap_or(f64::INFINITY);
            let d = (r.denom() >> shift).to_f64().unwrap_or(f64::INFINITY);
            n / d
        }
    }
}

/// Best rational approximation is not attempted; this is the exact value of
/// the binary float.
pub fn f64_to_rational(v: f64) -> Option<Rational> {
    Rational::from_float(v)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p"`, `"p/q"` or a plain decimal such as `"-0.125"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational, ParseError> {
    let s = s.trim();
    let bad = || ParseError::Rational(s.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all = format!("{whole}{frac}");
    let n = BigInt::from_str(if all.is_empty() { "0" } else { &all }).map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        Rational::from_integer(n * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(n, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

/// `"p/q"` or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_abs(r: &Rational) -> Rational {
    r.abs()
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `m! / (m_1! ... m_r!)` where `m = Σ m_i`.
pub fn multinomial(parts: &[u32]) -> BigInt {
    let total: usize = parts.iter().map(|&p| p as usize).sum();
    let mut acc = factorial(total);
    for &p in parts {
        acc /= factorial(p as usize);
    }
    acc
}
