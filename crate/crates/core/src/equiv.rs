//! Deciding or refuting symplectic equivalence of symbols.
//!
//! Signatures give proofs of non-equivalence. Orbit matching searches
//! `Sp(2n)` numerically and can only ever produce positive evidence.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::PolyError;
use crate::invar::{trace_invariants, InvarError, InvariantLabel, InvariantSignature, SignatureConfig, SpBasisAction};
use crate::polyalg::{monomial_basis, HomogeneousPoly, LinearMap, SymbolField};
use crate::scalar::{Field, Rational};
use crate::transvect::SymplecticStructure;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EquivError {
    #[error(transparent)]
    Invar(#[from] InvarError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("signatures have different label sets")]
    LabelMismatch,
    #[error("symbols live in different spaces: dim {0} deg {1} vs dim {2} deg {3}")]
    SpaceMismatch(usize, usize, usize, usize),
    #[error("invalid match configuration: {0}")]
    Config(String),
    #[error("constant-type test needs at least one grid point")]
    EmptyGrid,
    #[error("grid point has {found} coordinates, field has base dimension {expected}")]
    PointArity { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum SignatureVerdict {
    /// Some invariant differs: the symbols are not equivalent.
    Distinct { label: InvariantLabel, a: f64, b: f64 },
    /// All invariants agree; says nothing about equivalence.
    Indistinguishable,
}

/// Compares two signatures entry by entry. An entry differs when
/// `|a − b| > tol·(1 + max(|a|, |b|))`; exact signatures with `tol = 0`
/// compare exactly.
pub fn signature_match<R: Field>(
    a: &InvariantSignature<R>,
    b: &InvariantSignature<R>,
    tol: f64,
) -> Result<SignatureVerdict, EquivError> {
    if a.labels() != b.labels() {
        return Err(EquivError::LabelMismatch);
    }
    for ((label, va), (_, vb)) in a.entries.iter().zip(&b.entries) {
        let diff = (va.clone() - vb.clone()).magnitude();
        let mag = va.magnitude().max(vb.magnitude());
        let differs = if R::EXACT && tol == 0.0 { va != vb } else { diff > tol * (1.0 + mag) };
        if differs {
            return Ok(SignatureVerdict::Distinct { label: *label, a: va.to_f64(), b: vb.to_f64() });
        }
    }
    Ok(SignatureVerdict::Indistinguishable)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MatchConfig {
    pub restarts: usize,
    pub max_iters: usize,
    /// Initial Levenberg–Marquardt damping.
    pub damping: f64,
    /// Residual `‖g·P − Q‖` accepted as a match.
    pub tol: f64,
    pub seed: u64,
    /// Standard deviation of random starting coefficients.
    pub init_scale: f64,
    /// Relative tolerance of the signature pre-filter.
    pub signature_tol: f64,
    pub prefilter: bool,
}

impl Default for MatchConfig {
    fn default() -> Self {
        MatchConfig {
            restarts: 20,
            max_iters: 200,
            damping: 1e-3,
            tol: 1e-6,
            seed: 0,
            init_scale: 1.0,
            signature_tol: 1e-6,
            prefilter: true,
        }
    }
}

impl MatchConfig {
    fn validate(&self) -> Result<(), EquivError> {
        if self.restarts == 0 {
            return Err(EquivError::Config("restarts must be at least 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(EquivError::Config("tolerance must be positive".into()));
        }
        if !(self.damping > 0.0) || !(self.init_scale >= 0.0) {
            return Err(EquivError::Config("damping must be positive and init_scale non-negative".into()));
        }
        Ok(())
    }
}

/// Largest tolerated `‖gᵀJg − J‖` for a reported match.
pub const SYMPLECTIC_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum MatchVerdict {
    Matched { g: LinearMap<f64>, residual: f64 },
    SignatureMismatch { label: InvariantLabel, a: f64, b: f64 },
    /// Inconclusive: the search failed, which proves nothing.
    NoMatchFound { best_residual: f64 },
}

/// One optimizer run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub restart: usize,
    /// Residual norm after each accepted step, starting with the initial one.
    pub history: Vec<f64>,
    pub params: Vec<f64>,
}

impl RunTrace {
    pub fn residual(&self) -> f64 {
        *self.history.last().expect("history is never empty")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult {
    pub verdict: MatchVerdict,
    pub runs: Vec<RunTrace>,
}

/// Group element `exp(Σ t_a M_a)`.
pub fn sp_exp(action: &SpBasisAction, t: &[f64]) -> LinearMap<f64> {
    LinearMap::from_nalgebra(&action.combine(t).to_nalgebra().exp())
}

struct Problem {
    action: SpBasisAction,
    p: HomogeneousPoly<f64>,
    target: Vec<f64>,
    basis: Vec<crate::polyalg::MultiIndex>,
}

impl Problem {
    fn residual(&self, t: &[f64]) -> DVector<f64> {
        let neg: Vec<f64> = t.iter().map(|x| -x).collect();
        let ginv = sp_exp(&self.action, &neg);
        let moved = self.p.compose_linear(&ginv);
        DVector::from_iterator(self.basis.len(), self.basis.iter().zip(&self.target).map(|(b, q)| moved.coeff(b) - q))
    }

    fn jacobian(&self, t: &[f64]) -> DMatrix<f64> {
        let m = t.len();
        let h = 1e-6;
        let mut jac = DMatrix::zeros(self.basis.len(), m);
        let mut tp = t.to_vec();
        for a in 0..m {
            tp[a] = t[a] + h;
            let rp = self.residual(&tp);
            tp[a] = t[a] - h;
            let rm = self.residual(&tp);
            tp[a] = t[a];
            jac.set_column(a, &((rp - rm) / (2.0 * h)));
        }
        jac
    }

    fn run(&self, restart: usize, start: Vec<f64>, cfg: &MatchConfig) -> RunTrace {
        let mut t = start;
        let mut r = self.residual(&t);
        let mut cost = r.norm();
        let mut history = vec![cost];
        let mut lambda = cfg.damping;
        let stop = cfg.tol * 1e-3;
        for _ in 0..cfg.max_iters {
            if cost <= stop || !cost.is_finite() {
                break;
            }
            let jac = self.jacobian(&t);
            let jtj = jac.transpose() * &jac;
            let g = jac.transpose() * &r;
            let mut accepted = false;
            for _ in 0..30 {
                let mut a = jtj.clone();
                for i in 0..a.nrows() {
                    a[(i, i)] += lambda * (1.0 + jtj[(i, i)]);
                }
                let Some(step) = a.cholesky().map(|c| c.solve(&(-&g))) else {
                    lambda *= 10.0;
                    continue;
                };
                let cand: Vec<f64> = t.iter().zip(step.iter()).map(|(x, s)| x + s).collect();
                let rc = self.residual(&cand);
                let cc = rc.norm();
                if cc.is_finite() && cc < cost {
                    t = cand;
                    r = rc;
                    cost = cc;
                    history.push(cost);
                    lambda = (lambda / 3.0).max(1e-15);
                    accepted = true;
                    break;
                }
                lambda *= 4.0;
            }
            if !accepted {
                break;
            }
        }
        RunTrace { restart, history, params: t }
    }
}

/// Starting point of restart `idx`: zero for the first, Gaussian otherwise.
fn start_point(cfg: &MatchConfig, idx: usize, m: usize) -> Vec<f64> {
    if idx == 0 || cfg.init_scale == 0.0 {
        return vec![0.0; m];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(idx as u64);
    let normal = Normal::new(0.0, cfg.init_scale).expect("finite scale");
    (0..m).map(|_| normal.sample(&mut rng)).collect()
}

/// Searches for `g ∈ Sp(2n)` with `g·P = Q`.
pub fn orbit_match(p: &HomogeneousPoly, q: &HomogeneousPoly, cfg: &MatchConfig) -> Result<MatchResult, EquivError> {
    cfg.validate()?;
    if p.dim() != q.dim() || p.degree() != q.degree() {
        return Err(EquivError::SpaceMismatch(p.dim(), p.degree(), q.dim(), q.degree()));
    }
    let sp = SymplecticStructure::for_dim(p.dim()).map_err(InvarError::from)?;
    if cfg.prefilter {
        let sig_cfg = SignatureConfig::default();
        let sa = trace_invariants(p, &sig_cfg)?;
        let sb = trace_invariants(q, &sig_cfg)?;
        if let SignatureVerdict::Distinct { label, a, b } = signature_match(&sa, &sb, cfg.signature_tol)? {
            return Ok(MatchResult { verdict: MatchVerdict::SignatureMismatch { label, a, b }, runs: Vec::new() });
        }
    }
    let basis = monomial_basis(p.dim(), p.degree());
    let qf = q.to_f64();
    let problem = Problem {
        action: SpBasisAction::new(sp.n()),
        p: p.to_f64(),
        target: basis.iter().map(|b| qf.coeff(b)).collect(),
        basis,
    };
    let m = problem.action.len();
    let runs: Vec<RunTrace> = (0..cfg.restarts)
        .into_par_iter()
        .map(|idx| problem.run(idx, start_point(cfg, idx, m), cfg))
        .collect();
    let best = runs
        .iter()
        .min_by(|a, b| a.residual().total_cmp(&b.residual()).then(a.restart.cmp(&b.restart)))
        .expect("at least one restart");
    let g = sp_exp(&problem.action, &best.params);
    let residual = best.residual();
    let verdict = if residual <= cfg.tol && g.symplectic_defect() <= SYMPLECTIC_TOL {
        MatchVerdict::Matched { g, residual }
    } else {
        MatchVerdict::NoMatchFound { best_residual: residual }
    };
    Ok(MatchResult { verdict, runs })
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConstantTypeVerdict {
    /// The signature agrees at every grid point; necessary evidence only.
    ConstantTypeEvidence { points: usize, signature: InvariantSignature<Rational> },
    /// The signature differs between two points, so the type varies.
    TypeVaries { a: Vec<Rational>, b: Vec<Rational>, label: InvariantLabel, value_a: Rational, value_b: Rational },
}

/// Evaluates the default signature of `σ(a)` at every grid point and reports
/// the first pair of points where it differs.
pub fn constant_type_test(
    field: &SymbolField,
    grid: &[Vec<Rational>],
    config: &SignatureConfig,
) -> Result<ConstantTypeVerdict, EquivError> {
    if grid.is_empty() {
        return Err(EquivError::EmptyGrid);
    }
    if let Some(pt) = grid.iter().find(|pt| pt.len() != field.base_dim()) {
        return Err(EquivError::PointArity { expected: field.base_dim(), found: pt.len() });
    }
    let sigs: Vec<InvariantSignature<Rational>> = grid
        .par_iter()
        .map(|pt| trace_invariants(&field.eval(pt), config))
        .collect::<Result<_, _>>()?;
    let first = &sigs[0];
    for (pt, sig) in grid.iter().zip(&sigs).skip(1) {
        for ((label, va), (_, vb)) in first.entries.iter().zip(&sig.entries) {
            if va != vb {
                return Ok(ConstantTypeVerdict::TypeVaries {
                    a: grid[0].clone(),
                    b: pt.clone(),
                    label: *label,
                    value_a: va.clone(),
                    value_b: vb.clone(),
                });
            }
        }
    }
    Ok(ConstantTypeVerdict::ConstantTypeEvidence { points: grid.len(), signature: first.clone() })
}
