use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use smallvec::SmallVec;

use crate::scalar::factorial;

/// Exponent vector of a monomial.
///
/// Two indices compare equal when they agree after padding the shorter one
/// with zeros, so base polynomials can store trimmed indices while symbols
/// keep the full ambient length. The order is graded lexicographic with the
/// first variable largest: `x² < xy < y²` within a degree, and lower degrees
/// first.
#[derive(Clone, Default)]
pub struct MultiIndex(SmallVec<[u32; 6]>);

impl MultiIndex {
    pub fn new(entries: impl IntoIterator<Item = u32>) -> Self {
        MultiIndex(entries.into_iter().collect())
    }

    pub fn zeros(dim: usize) -> Self {
        MultiIndex(SmallVec::from_elem(0, dim))
    }

    /// The unit index `e_i` in dimension `dim`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut m = Self::zeros(dim);
        m.0[i] = 1;
        m
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Total degree `|α|`.
    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    /// Number of meaningful positions (index of last nonzero entry plus one).
    pub fn support_len(&self) -> usize {
        self.0.iter().rposition(|&e| e != 0).map_or(0, |p| p + 1)
    }

    pub fn trimmed(&self) -> Self {
        MultiIndex(self.0[..self.support_len()].iter().copied().collect())
    }

    /// Pads or trims to exactly `dim` entries. Trailing entries beyond `dim`
    /// must be zero.
    pub fn resized(&self, dim: usize) -> Self {
        debug_assert!(self.support_len() <= dim);
        MultiIndex((0..dim).map(|i| self.get(i)).collect())
    }

    pub fn add(&self, other: &MultiIndex) -> Self {
        let n = self.len().max(other.len());
        MultiIndex((0..n).map(|i| self.get(i) + other.get(i)).collect())
    }

    /// `self - other`, or `None` when some entry would go negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<Self> {
        let n = self.len().max(other.len());
        let mut out = SmallVec::with_capacity(n);
        for i in 0..n {
            out.push(self.get(i).checked_sub(other.get(i))?);
        }
        Some(MultiIndex(out))
    }

    pub fn with_increment(&self, i: usize) -> Self {
        let mut m = self.resized(self.len().max(i + 1));
        m.0[i] += 1;
        m
    }

    pub fn with_decrement(&self, i: usize) -> Option<Self> {
        if self.get(i) == 0 {
            return None;
        }
        let mut m = self.clone();
        m.0[i] -= 1;
        Some(m)
    }

    /// Componentwise `self ≤ other`.
    pub fn divides(&self, other: &MultiIndex) -> bool {
        let n = self.len().max(other.len());
        (0..n).all(|i| self.get(i) <= other.get(i))
    }

    /// `α! = Π α_i!`.
    pub fn factorial(&self) -> BigInt {
        self.0.iter().map(|&e| factorial(e as usize)).product()
    }

    /// `β! / (β − α)!` for `α ≤ β`, the coefficient picked up by `∂^α x^β`.
    pub fn falling_factor(beta: &MultiIndex, alpha: &MultiIndex) -> BigInt {
        let n = beta.len().max(alpha.len());
        let mut acc = BigInt::from(1);
        for i in 0..n {
            let (b, a) = (beta.get(i), alpha.get(i));
            for t in 0..a {
                acc *= BigInt::from(b - t);
            }
        }
        acc
    }

    fn cmp_padded(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let n = self.len().max(other.len());
            for i in 0..n {
                match other.get(i).cmp(&self.get(i)) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialEq for MultiIndex {
    fn eq(&self, other: &Self) -> bool {
        let n = self.len().max(other.len());
        (0..n).all(|i| self.get(i) == other.get(i))
    }
}

impl Eq for MultiIndex {}

impl Hash for MultiIndex {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0[..self.support_len()].hash(state);
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_padded(other)
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v.into_iter().collect())
    }
}

impl<const N: usize> From<[u32; N]> for MultiIndex {
    fn from(v: [u32; N]) -> Self {
        MultiIndex(v.into_iter().collect())
    }
}

/// All exponent vectors of length `dim` and total degree `degree`, in
/// graded-lex order. Has `C(dim + degree − 1, degree)` entries.
pub fn monomial_basis(dim: usize, degree: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    if dim == 0 {
        if degree == 0 {
            out.push(MultiIndex::zeros(0));
        }
        return out;
    }
    let mut current = vec![0u32; dim];
    fill(&mut current, 0, degree as u32, &mut out);
    out
}

fn fill(current: &mut [u32], pos: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(MultiIndex::new(current.iter().copied()));
        return;
    }
    for e in (0..=remaining).rev() {
        current[pos] = e;
        fill(current, pos + 1, remaining - e, out);
    }
    current[pos] = 0;
}

/// Every multi-index of length `dim` with `|α| ≤ max_degree`, graded order.
pub fn indices_up_to(dim: usize, max_degree: usize) -> Vec<MultiIndex> {
    (0..=max_degree).flat_map(|k| monomial_basis(dim, k)).collect()
}
