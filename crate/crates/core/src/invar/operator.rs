use std::collections::HashMap;

use super::InvarError;
use crate::polyalg::{monomial_basis, HomogeneousPoly, MultiIndex};
use crate::scalar::{Coeff, Rational};
use crate::transvect::{metric_transvectant, symplectic_transvectant, LeftFactors};

/// Which transvectant operator to build on `S^q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorMode {
    /// `Q ↦ [P,Q]_{p/2}`.
    Even { q: usize },
    /// `Q ↦ [P_{2l}, Q]_{p−2l}` with `P_{2l} = [P,P]_{2l}`.
    General { l: usize, q: usize },
    /// `Q ↦ (P,Q)_{p/2}`.
    MetricEven { q: usize },
    /// `Q ↦ (P_l, Q)_{p−l}` with `P_l = (P,P)_l`.
    MetricGeneral { l: usize, q: usize },
}

impl OperatorMode {
    pub fn q(&self) -> usize {
        match *self {
            OperatorMode::Even { q }
            | OperatorMode::General { q, .. }
            | OperatorMode::MetricEven { q }
            | OperatorMode::MetricGeneral { q, .. } => q,
        }
    }

    pub fn is_metric(&self) -> bool {
        matches!(self, OperatorMode::MetricEven { .. } | OperatorMode::MetricGeneral { .. })
    }

    /// Checks the parity and range conditions for a symbol of degree `p`.
    pub fn validate(&self, p: usize) -> Result<(), InvarError> {
        let ok = match *self {
            OperatorMode::Even { q } | OperatorMode::MetricEven { q } => {
                if !p.is_multiple_of(2) {
                    return Err(InvarError::OddDegree(p));
                }
                2 * q >= p
            }
            OperatorMode::General { l, q } => 2 * l < p && q + 2 * l >= p,
            OperatorMode::MetricGeneral { l, q } => l < p && q + l >= p,
        };
        if ok {
            Ok(())
        } else {
            Err(InvarError::OutOfRange { mode: *self, degree: p })
        }
    }
}

/// Matrix of a transvectant operator on the monomial basis of `S^q`.
///
/// Entry `(i, j)` is the coefficient of `basis[i]` in the image of
/// `basis[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransvectantOperatorMatrix<R = Rational> {
    pub mode: OperatorMode,
    pub basis: Vec<MultiIndex>,
    pub matrix: Vec<Vec<R>>,
}

impl<R: Coeff> TransvectantOperatorMatrix<R> {
    pub fn size(&self) -> usize {
        self.basis.len()
    }

    pub fn trace(&self) -> R {
        matrix_trace(&self.matrix)
    }

    /// `Tr(A^k)` for `k = 1..=kmax`.
    pub fn power_traces(&self, kmax: usize) -> Vec<R> {
        power_traces(&self.matrix, kmax)
    }
}

pub(crate) fn matrix_trace<R: Coeff>(m: &[Vec<R>]) -> R {
    m.iter().enumerate().fold(R::zero(), |acc, (i, row)| acc + row[i].clone())
}

pub(crate) fn mat_mul<R: Coeff>(a: &[Vec<R>], b: &[Vec<R>]) -> Vec<Vec<R>> {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![R::zero(); m]; n];
    for (i, row) in a.iter().enumerate() {
        for (k, aik) in row.iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            for (j, bkj) in b[k].iter().enumerate() {
                if !bkj.is_zero() {
                    out[i][j] = out[i][j].clone() + aik.clone() * bkj.clone();
                }
            }
        }
    }
    out
}

pub(crate) fn power_traces<R: Coeff>(a: &[Vec<R>], kmax: usize) -> Vec<R> {
    R::power_traces(a, kmax)
}

/// Repeated multiplication over any ring; the default for
/// [`Coeff::power_traces`].
pub(crate) fn generic_power_traces<R: Coeff>(a: &[Vec<R>], kmax: usize) -> Vec<R> {
    let mut out = Vec::with_capacity(kmax);
    if kmax == 0 {
        return out;
    }
    let mut pw = a.to_vec();
    out.push(matrix_trace(&pw));
    for _ in 1..kmax {
        pw = mat_mul(&pw, a);
        out.push(matrix_trace(&pw));
    }
    out
}

/// Matrix of a linear endomorphism of `S^q` given as a closure.
pub(crate) fn endomorphism_matrix<R: Coeff>(
    dim: usize,
    q: usize,
    mut image: impl FnMut(&HomogeneousPoly<R>) -> Result<HomogeneousPoly<R>, InvarError>,
) -> Result<(Vec<MultiIndex>, Vec<Vec<R>>), InvarError> {
    let basis = monomial_basis(dim, q);
    let index: HashMap<&MultiIndex, usize> = basis.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let n = basis.len();
    let mut matrix = vec![vec![R::zero(); n]; n];
    for (j, b) in basis.iter().enumerate() {
        let img = image(&HomogeneousPoly::monomial(dim, b.clone(), R::one()))?;
        if img.is_zero() {
            continue;
        }
        if img.degree() != q {
            return Err(InvarError::Internal(format!("operator image has degree {} on S^{q}", img.degree())));
        }
        for (e, c) in img.terms() {
            matrix[index[e]][j] = c.clone();
        }
    }
    Ok((basis, matrix))
}

/// The auxiliary symbol `P_{2l}` or `P_l` a mode contracts against, together
/// with the contraction order.
pub(crate) fn mode_kernel<R: Coeff>(
    p: &HomogeneousPoly<R>,
    mode: OperatorMode,
) -> Result<(HomogeneousPoly<R>, usize), InvarError> {
    let deg = p.degree();
    Ok(match mode {
        OperatorMode::Even { .. } | OperatorMode::MetricEven { .. } => (p.clone(), deg / 2),
        OperatorMode::General { l, .. } => (symplectic_transvectant(p, p, 2 * l)?, deg - 2 * l),
        OperatorMode::MetricGeneral { l, .. } => (metric_transvectant(p, p, l)?, deg - l),
    })
}

pub fn transvectant_operator_matrix<R: Coeff>(
    p: &HomogeneousPoly<R>,
    mode: OperatorMode,
) -> Result<TransvectantOperatorMatrix<R>, InvarError> {
    mode.validate(p.degree())?;
    let (kernel, order) = mode_kernel(p, mode)?;
    operator_from_kernel(&kernel, order, mode, p.dim())
}

pub(crate) fn operator_from_kernel<R: Coeff>(
    kernel: &HomogeneousPoly<R>,
    order: usize,
    mode: OperatorMode,
    dim: usize,
) -> Result<TransvectantOperatorMatrix<R>, InvarError> {
    let q = mode.q();
    let left = if mode.is_metric() { LeftFactors::metric(kernel, order) } else { LeftFactors::symplectic(kernel, order)? };
    let out_degree = (kernel.degree() + q).saturating_sub(2 * order);
    let (basis, matrix) = endomorphism_matrix(dim, q, |b| Ok(left.apply(b, out_degree)))?;
    Ok(TransvectantOperatorMatrix { mode, basis, matrix })
}
