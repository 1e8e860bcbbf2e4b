use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::operator::{operator_from_kernel, power_traces, OperatorMode};
use super::sp_action::{hamiltonian_traces, sp_orbit_dimension};
use super::InvarError;
use crate::error::ParseError;
use crate::linalg;
use crate::polyalg::{monomial_basis, HomogeneousPoly};
use crate::scalar::{binomial, f64_to_rational, rational_to_f64, Coeff, Field, Rational};
use crate::transvect::{metric_transvectant, symplectic_transvectant};

/// Name of one invariant in a signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InvariantLabel {
    /// `Tr(A_{P,l}^k)` on `S^q`.
    SymplecticGeneral { l: usize, k: usize, q: usize },
    /// `Tr(A_{P,q}^k)`.
    SymplecticEven { k: usize, q: usize },
    /// `Tr(B_{P,l}^k)` on `S^q`.
    MetricGeneral { l: usize, k: usize, q: usize },
    /// `Tr(B_{P,q}^k)`.
    MetricEven { k: usize, q: usize },
    /// `[P,P]_p`.
    SymplecticPairing { p: usize },
    /// `(P,P)_p`.
    MetricPairing { p: usize },
    /// `Tr(X_P^k)` on `S^1` for a quadratic `P`.
    HamiltonianTrace { k: usize },
    /// Dimension of the `sp(2n)`-orbit.
    OrbitDimension,
}

impl InvariantLabel {
    /// Degree of the invariant as a polynomial in the symbol's coefficients.
    pub fn homogeneity(&self) -> usize {
        match *self {
            InvariantLabel::SymplecticEven { k, .. } | InvariantLabel::MetricEven { k, .. } => k,
            InvariantLabel::SymplecticGeneral { k, .. } | InvariantLabel::MetricGeneral { k, .. } => 2 * k,
            InvariantLabel::SymplecticPairing { .. } | InvariantLabel::MetricPairing { .. } => 2,
            InvariantLabel::HamiltonianTrace { k } => k,
            InvariantLabel::OrbitDimension => 0,
        }
    }

    /// Whether the value is a polynomial in the coefficients of `P`.
    pub fn is_polynomial(&self) -> bool {
        !matches!(self, InvariantLabel::OrbitDimension)
    }

    pub fn is_metric(&self) -> bool {
        matches!(
            self,
            InvariantLabel::MetricGeneral { .. } | InvariantLabel::MetricEven { .. } | InvariantLabel::MetricPairing { .. }
        )
    }

    fn mode(&self) -> Option<(OperatorMode, usize)> {
        match *self {
            InvariantLabel::SymplecticGeneral { l, k, q } => Some((OperatorMode::General { l, q }, k)),
            InvariantLabel::SymplecticEven { k, q } => Some((OperatorMode::Even { q }, k)),
            InvariantLabel::MetricGeneral { l, k, q } => Some((OperatorMode::MetricGeneral { l, q }, k)),
            InvariantLabel::MetricEven { k, q } => Some((OperatorMode::MetricEven { q }, k)),
            _ => None,
        }
    }

    /// Checks that the label makes sense for a symbol of degree `p` in
    /// dimension `d`.
    pub fn admissible(&self, d: usize, p: usize) -> bool {
        if !self.is_metric() && !d.is_multiple_of(2) {
            return false;
        }
        match *self {
            InvariantLabel::SymplecticPairing { p: r } | InvariantLabel::MetricPairing { p: r } => r == p,
            InvariantLabel::HamiltonianTrace { k } => p == 2 && k >= 1,
            InvariantLabel::OrbitDimension => true,
            _ => {
                let (mode, k) = self.mode().expect("trace label");
                k >= 1 && k <= trace_bound(d, mode.q()) && mode.validate(p).is_ok()
            }
        }
    }
}

/// `binom(d+q−1, q)`, the dimension of `S^q` and the largest useful power.
fn trace_bound(d: usize, q: usize) -> usize {
    usize::try_from(binomial(d + q - 1, q)).unwrap_or(usize::MAX)
}

impl fmt::Display for InvariantLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            InvariantLabel::SymplecticGeneral { l, k, q } => write!(f, "I(l={l},k={k},q={q})"),
            InvariantLabel::SymplecticEven { k, q } => write!(f, "J(k={k},q={q})"),
            InvariantLabel::MetricGeneral { l, k, q } => write!(f, "M(l={l},k={k},q={q})"),
            InvariantLabel::MetricEven { k, q } => write!(f, "N(k={k},q={q})"),
            InvariantLabel::SymplecticPairing { p } => write!(f, "Sp(p={p})"),
            InvariantLabel::MetricPairing { p } => write!(f, "K(p={p})"),
            InvariantLabel::HamiltonianTrace { k } => write!(f, "TrX(k={k})"),
            InvariantLabel::OrbitDimension => write!(f, "orbit_dim"),
        }
    }
}

impl FromStr for InvariantLabel {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseError::Label(s.to_string());
        let s = s.trim();
        if s == "orbit_dim" {
            return Ok(InvariantLabel::OrbitDimension);
        }
        let open = s.find('(').ok_or_else(bad)?;
        let inner = s[open..].strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let mut args: Vec<(&str, usize)> = Vec::new();
        for part in inner.split(',') {
            let (k, v) = part.split_once('=').ok_or_else(bad)?;
            args.push((k.trim(), v.trim().parse().map_err(|_| bad())?));
        }
        let keys: Vec<&str> = args.iter().map(|(k, _)| *k).collect();
        let v = |i: usize| args[i].1;
        let label = match (&s[..open], keys.as_slice()) {
            ("I", ["l", "k", "q"]) => InvariantLabel::SymplecticGeneral { l: v(0), k: v(1), q: v(2) },
            ("J", ["k", "q"]) => InvariantLabel::SymplecticEven { k: v(0), q: v(1) },
            ("M", ["l", "k", "q"]) => InvariantLabel::MetricGeneral { l: v(0), k: v(1), q: v(2) },
            ("N", ["k", "q"]) => InvariantLabel::MetricEven { k: v(0), q: v(1) },
            ("Sp", ["p"]) => InvariantLabel::SymplecticPairing { p: v(0) },
            ("K", ["p"]) => InvariantLabel::MetricPairing { p: v(0) },
            ("TrX", ["k"]) => InvariantLabel::HamiltonianTrace { k: v(0) },
            _ => return Err(bad()),
        };
        Ok(label)
    }
}

impl Serialize for InvariantLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for InvariantLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum StructureKind {
    #[default]
    Symplectic,
    Metric,
}

/// Which invariants a signature contains.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SignatureConfig {
    pub kind: StructureKind,
    /// Largest trace power.
    pub k_cap: usize,
    /// Target degrees; defaults to `⌈p/2⌉` and `p`.
    pub q_values: Option<Vec<usize>>,
    pub include_pairing: bool,
    pub include_orbit_dim: bool,
    /// Explicit label list, overriding everything above.
    pub labels: Option<Vec<InvariantLabel>>,
}

impl Default for SignatureConfig {
    fn default() -> Self {
        SignatureConfig {
            kind: StructureKind::Symplectic,
            k_cap: 8,
            q_values: None,
            include_pairing: true,
            include_orbit_dim: true,
            labels: None,
        }
    }
}

impl SignatureConfig {
    pub fn metric() -> Self {
        SignatureConfig { kind: StructureKind::Metric, include_orbit_dim: false, ..Self::default() }
    }

    /// Ordered label set for symbols of degree `p` in dimension `d`.
    pub fn labels(&self, d: usize, p: usize) -> Result<Vec<InvariantLabel>, InvarError> {
        let labels = match &self.labels {
            Some(explicit) => {
                if let Some(bad) = explicit.iter().find(|l| !l.admissible(d, p)) {
                    return Err(InvarError::Inadmissible { label: *bad, dim: d, degree: p });
                }
                explicit.clone()
            }
            None => self.default_labels(d, p),
        };
        if labels.is_empty() {
            return Err(InvarError::EmptyLabelSet);
        }
        Ok(labels)
    }

    fn default_labels(&self, d: usize, p: usize) -> Vec<InvariantLabel> {
        let metric = self.kind == StructureKind::Metric;
        if !metric && !d.is_multiple_of(2) {
            return Vec::new();
        }
        let mut qs = self.q_values.clone().unwrap_or_else(|| vec![p.div_ceil(2), p]);
        qs.retain(|&q| q > 0);
        qs.dedup();
        let kmax = |q: usize| self.k_cap.min(trace_bound(d, q));
        let mut out = Vec::new();
        if p.is_multiple_of(2) {
            for &q in &qs {
                if 2 * q < p {
                    continue;
                }
                for k in 1..=kmax(q) {
                    out.push(if metric { InvariantLabel::MetricEven { k, q } } else { InvariantLabel::SymplecticEven { k, q } });
                }
            }
        }
        for &q in &qs {
            if metric {
                for l in p.saturating_sub(q)..p {
                    for k in 1..=kmax(q) {
                        out.push(InvariantLabel::MetricGeneral { l, k, q });
                    }
                }
            } else {
                for l in (0..p).filter(|l| 2 * l + q >= p && 2 * l < p) {
                    for k in 1..=kmax(q) {
                        out.push(InvariantLabel::SymplecticGeneral { l, k, q });
                    }
                }
            }
        }
        if !metric && p == 2 {
            let top = (d).max(4);
            for k in (2..=top).step_by(2) {
                out.push(InvariantLabel::HamiltonianTrace { k });
            }
        }
        if self.include_pairing && p > 0 {
            if metric {
                out.push(InvariantLabel::MetricPairing { p });
            } else if p.is_multiple_of(2) {
                out.push(InvariantLabel::SymplecticPairing { p });
            }
        }
        if self.include_orbit_dim && !metric {
            out.push(InvariantLabel::OrbitDimension);
        }
        out
    }
}

/// Ordered list of invariant values.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantSignature<R = Rational> {
    pub entries: Vec<(InvariantLabel, R)>,
}

impl<R: Clone> InvariantSignature<R> {
    pub fn labels(&self) -> Vec<InvariantLabel> {
        self.entries.iter().map(|(l, _)| *l).collect()
    }

    pub fn values(&self) -> Vec<R> {
        self.entries.iter().map(|(_, v)| v.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, label: &InvariantLabel) -> Option<&R> {
        self.entries.iter().find(|(l, _)| l == label).map(|(_, v)| v)
    }
}

impl<R: Field> InvariantSignature<R> {
    pub fn to_f64(&self) -> InvariantSignature<f64> {
        InvariantSignature { entries: self.entries.iter().map(|(l, v)| (*l, v.to_f64())).collect() }
    }
}

/// Evaluates the polynomial invariants in `labels`, sharing operator
/// matrices between labels that use the same mode.
pub fn trace_invariant_values<R: Coeff>(p: &HomogeneousPoly<R>, labels: &[InvariantLabel]) -> Result<Vec<R>, InvarError> {
    let d = p.dim();
    let deg = p.degree();
    let mut cache: Vec<(OperatorMode, Vec<R>)> = Vec::new();
    let mut ham: Option<Vec<R>> = None;
    let mut out = Vec::with_capacity(labels.len());
    for label in labels {
        if !label.admissible(d, deg) {
            return Err(InvarError::Inadmissible { label: *label, dim: d, degree: deg });
        }
        let value = match *label {
            InvariantLabel::OrbitDimension => return Err(InvarError::NotPolynomial(*label)),
            InvariantLabel::SymplecticPairing { p: r } => scalar_part(&symplectic_transvectant(p, p, r)?),
            InvariantLabel::MetricPairing { p: r } => scalar_part(&metric_transvectant(p, p, r)?),
            InvariantLabel::HamiltonianTrace { k } => {
                let kmax = labels
                    .iter()
                    .filter_map(|l| match l {
                        InvariantLabel::HamiltonianTrace { k } => Some(*k),
                        _ => None,
                    })
                    .max()
                    .unwrap_or(k);
                let traces = match &ham {
                    Some(t) => t,
                    None => ham.insert(hamiltonian_traces(p, kmax)?),
                };
                traces[k - 1].clone()
            }
            _ => {
                let (mode, k) = label.mode().expect("trace label");
                let idx = match cache.iter().position(|(m, _)| *m == mode) {
                    Some(i) => i,
                    None => {
                        let kmax = labels
                            .iter()
                            .filter_map(|l| l.mode())
                            .filter(|(m, _)| *m == mode)
                            .map(|(_, k)| k)
                            .max()
                            .unwrap_or(k);
                        let (kernel, order) = super::operator::mode_kernel(p, mode)?;
                        let a = operator_from_kernel(&kernel, order, mode, d)?;
                        cache.push((mode, power_traces(&a.matrix, kmax)));
                        cache.len() - 1
                    }
                };
                cache[idx].1[k - 1].clone()
            }
        };
        out.push(value);
    }
    Ok(out)
}

/// Single polynomial invariant; works over any coefficient ring, including
/// base-dependent coefficients.
pub fn trace_invariant_value<R: Coeff>(p: &HomogeneousPoly<R>, label: InvariantLabel) -> Result<R, InvarError> {
    Ok(trace_invariant_values(p, &[label])?.remove(0))
}

fn scalar_part<R: Coeff>(p: &HomogeneousPoly<R>) -> R {
    p.terms().next().map(|(_, c)| c.clone()).unwrap_or_else(R::zero)
}

/// Signature for an explicit configuration.
pub fn trace_invariants<R: Field>(p: &HomogeneousPoly<R>, config: &SignatureConfig) -> Result<InvariantSignature<R>, InvarError> {
    let labels = config.labels(p.dim(), p.degree())?;
    evaluate_labels(p, &labels)
}

pub fn evaluate_labels<R: Field>(p: &HomogeneousPoly<R>, labels: &[InvariantLabel]) -> Result<InvariantSignature<R>, InvarError> {
    let poly_labels: Vec<InvariantLabel> = labels.iter().copied().filter(InvariantLabel::is_polynomial).collect();
    let mut poly_values = trace_invariant_values(p, &poly_labels)?.into_iter();
    let mut entries = Vec::with_capacity(labels.len());
    for label in labels {
        let v = if label.is_polynomial() {
            poly_values.next().expect("value per label")
        } else {
            R::from_int(sp_orbit_dimension(p)? as i64)
        };
        entries.push((*label, v));
    }
    Ok(InvariantSignature { entries })
}

/// Signature of a float symbol. Polynomial entries are evaluated exactly on
/// the binary values of the coefficients and rounded once at the end, so
/// entries that vanish identically come out as exact zeros; the orbit
/// dimension uses the tolerance-based float rank.
pub fn float_signature(p: &HomogeneousPoly<f64>, config: &SignatureConfig) -> Result<InvariantSignature<f64>, InvarError> {
    if p.terms().any(|(_, c)| !c.is_finite()) {
        return Err(InvarError::NonFinite);
    }
    // Scale by a common power of two so the arithmetic stays integral;
    // each entry is homogeneous in P, so the scale is divided out at the end.
    let lifted = p.map_coeffs(|c| f64_to_rational(*c).expect("finite coefficient"));
    let shift = lifted.terms().map(|(_, c)| c.denom().bits().saturating_sub(1)).max().unwrap_or(0);
    let scale = Rational::from_integer(BigInt::one() << shift);
    let exact = lifted.scale(&scale);
    let labels = config.labels(p.dim(), p.degree())?;
    let poly_labels: Vec<InvariantLabel> = labels.iter().copied().filter(InvariantLabel::is_polynomial).collect();
    let mut values = trace_invariant_values(&exact, &poly_labels)?.into_iter();
    let mut entries = Vec::with_capacity(labels.len());
    for label in labels {
        let v = if label.is_polynomial() {
            let v = values.next().expect("value per label");
            let unscale = Rational::from_integer(BigInt::one() << (shift * label.homogeneity() as u64));
            rational_to_f64(&(v / unscale))
        } else {
            sp_orbit_dimension(p)? as f64
        };
        entries.push((label, v));
    }
    Ok(InvariantSignature { entries })
}

/// Default signature: symplectic kind, traces up to `k = 8`.
pub fn invariant_signature<R: Field>(p: &HomogeneousPoly<R>) -> Result<InvariantSignature<R>, InvarError> {
    trace_invariants(p, &SignatureConfig::default())
}

/// Gram matrix of `[·,·]_p` (or `(·,·)_p`) on `monomial_basis(d, p)`.
pub fn pairing_form(d: usize, p: usize, kind: StructureKind) -> Result<Vec<Vec<Rational>>, InvarError> {
    let basis = monomial_basis(d, p);
    let polys: Vec<HomogeneousPoly> = basis.iter().map(|b| HomogeneousPoly::monomial(d, b.clone(), Rational::from_int(1))).collect();
    let mut gram = Vec::with_capacity(polys.len());
    for a in &polys {
        let mut row = Vec::with_capacity(polys.len());
        for b in &polys {
            let v = match kind {
                StructureKind::Symplectic => symplectic_transvectant(a, b, p)?,
                StructureKind::Metric => metric_transvectant(a, b, p)?,
            };
            row.push(scalar_part(&v));
        }
        gram.push(row);
    }
    Ok(gram)
}

pub fn is_nondegenerate(gram: &[Vec<Rational>]) -> bool {
    !linalg::determinant(gram).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::MultiIndex;
    use crate::scalar::{int, rat};

    #[test]
    fn label_strings_roundtrip() {
        let labels = [
            InvariantLabel::SymplecticGeneral { l: 1, k: 3, q: 2 },
            InvariantLabel::SymplecticEven { k: 2, q: 2 },
            InvariantLabel::MetricGeneral { l: 0, k: 1, q: 4 },
            InvariantLabel::MetricEven { k: 5, q: 3 },
            InvariantLabel::SymplecticPairing { p: 4 },
            InvariantLabel::MetricPairing { p: 3 },
            InvariantLabel::HamiltonianTrace { k: 2 },
            InvariantLabel::OrbitDimension,
        ];
        for l in labels {
            assert_eq!(l.to_string().parse::<InvariantLabel>().unwrap(), l);
        }
        assert!("J(q=2,k=2)".parse::<InvariantLabel>().is_err());
        assert!("X(k=1)".parse::<InvariantLabel>().is_err());
    }

    #[test]
    fn x2y2_even_traces() {
        let p = HomogeneousPoly::monomial(2, MultiIndex::from([2, 2]), int(1));
        let labels = [InvariantLabel::SymplecticEven { k: 1, q: 2 }, InvariantLabel::SymplecticEven { k: 2, q: 2 }];
        assert_eq!(trace_invariant_values(&p, &labels).unwrap(), vec![int(0), int(6)]);
    }

    #[test]
    fn quadric_signature_has_even_hamiltonian_traces() {
        let p = HomogeneousPoly::from_terms(2, 2, [(MultiIndex::from([1, 1]), int(1))]).unwrap();
        let sig = invariant_signature(&p).unwrap();
        assert_eq!(sig.get(&InvariantLabel::HamiltonianTrace { k: 2 }), Some(&int(2)));
        assert_eq!(sig.get(&InvariantLabel::HamiltonianTrace { k: 4 }), Some(&int(2)));
        assert_eq!(sig.get(&InvariantLabel::OrbitDimension), Some(&int(2)));
    }

    #[test]
    fn zero_symbol_signature() {
        let sig = invariant_signature(&HomogeneousPoly::<Rational>::zero(2, 3)).unwrap();
        assert!(sig.values().iter().all(|v| v.is_zero()));
    }

    #[test]
    fn explicit_labels_are_checked() {
        let cfg = SignatureConfig { labels: Some(vec![InvariantLabel::SymplecticEven { k: 1, q: 2 }]), ..Default::default() };
        assert!(matches!(cfg.labels(2, 3), Err(InvarError::Inadmissible { .. })));
        let empty = SignatureConfig { labels: Some(vec![]), ..Default::default() };
        assert_eq!(empty.labels(2, 3), Err(InvarError::EmptyLabelSet));
    }

    #[test]
    fn pairing_p1() {
        let g = pairing_form(2, 1, StructureKind::Symplectic).unwrap();
        assert_eq!(g, vec![vec![int(0), rat(1, 2)], vec![rat(-1, 2), int(0)]]);
        assert!(is_nondegenerate(&g));
    }
}
