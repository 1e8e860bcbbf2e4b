use rayon::prelude::*;

use super::surface::{ModelSample, ModelSurface};
use super::ModelError;
use crate::linalg;
use crate::polyalg::MultiIndex;
use crate::scalar::{rational_to_f64, Rational};

pub const DEFAULT_MODEL_TOL: f64 = 1e-6;

/// Evidence that two model surfaces differ.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// `Y_α` differs at chart value `y`.
    Coefficient { y: Vec<f64>, alpha: MultiIndex, a: f64, b: f64 },
    /// The matched point map fails `ψ*ω = ω` at the first surface's base point `x`.
    LieCondition { x: Vec<Rational>, residual: f64 },
}

/// One sample of `ψ = φ_B⁻¹ ∘ φ_A`: base points with equal chart values.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiSample {
    pub x_a: Vec<Rational>,
    pub x_b: Vec<Rational>,
    pub y: Vec<Rational>,
    /// `Dψ(x_a) = (∂y/∂x)_B(x_b)⁻¹ (∂y/∂x)_A(x_a)`.
    pub jacobian: Vec<Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EquivalenceVerdict {
    ModelsCoincide { psi: Vec<PsiSample>, omega_residual: f64, max_deviation: f64, compared: usize },
    ModelsDistinct { witness: Witness },
    Inconclusive { reason: String },
}

impl EquivalenceVerdict {
    pub fn status(&self) -> &'static str {
        match self {
            EquivalenceVerdict::ModelsCoincide { .. } => "models_coincide",
            EquivalenceVerdict::ModelsDistinct { .. } => "models_distinct",
            EquivalenceVerdict::Inconclusive { .. } => "inconclusive",
        }
    }
}

struct Prepared<'a> {
    surface: &'a ModelSurface,
    y: Vec<Vec<f64>>,
    /// Rows over the common index list.
    values: Vec<Vec<f64>>,
    /// `dY/dy` per sample, `None` where the chart Jacobian is singular in floats.
    slopes: Vec<Option<Vec<Vec<f64>>>>,
    lo: Vec<f64>,
    hi: Vec<f64>,
}

fn to_f64_vec(v: &[Rational]) -> Vec<f64> {
    v.iter().map(rational_to_f64).collect()
}

fn project(s: &ModelSample, own: &[MultiIndex], common: &[MultiIndex]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = s.x.len();
    let mut vals = vec![0.0; common.len()];
    let mut grads = vec![vec![0.0; n]; common.len()];
    for (k, alpha) in common.iter().enumerate() {
        if let Some(j) = own.iter().position(|a| a == alpha) {
            vals[k] = rational_to_f64(&s.values[j]);
            grads[k] = to_f64_vec(&s.value_gradients[j]);
        }
    }
    (vals, grads)
}

impl<'a> Prepared<'a> {
    fn new(surface: &'a ModelSurface, common: &[MultiIndex]) -> Self {
        let n = surface.n;
        let mut y = Vec::new();
        let mut values = Vec::new();
        let mut slopes = Vec::new();
        for s in &surface.samples {
            let (v, g) = project(s, &surface.alphas, common);
            let jac: Vec<Vec<f64>> = s.jacobian.iter().map(|r| to_f64_vec(r)).collect();
            // dY/dy = dY/dx · (dy/dx)⁻¹
            let slope = linalg::inverse(&jac).map(|inv| {
                g.iter().map(|row| (0..n).map(|j| (0..n).map(|k| row[k] * inv[k][j]).sum()).collect()).collect()
            });
            y.push(to_f64_vec(&s.y));
            values.push(v);
            slopes.push(slope);
        }
        let lo = (0..n).map(|i| y.iter().map(|p| p[i]).fold(f64::INFINITY, f64::min)).collect();
        let hi = (0..n).map(|i| y.iter().map(|p| p[i]).fold(f64::NEG_INFINITY, f64::max)).collect();
        Prepared { surface, y, values, slopes, lo, hi }
    }

    fn covers(&self, y: &[f64]) -> bool {
        y.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (l, h))| *v >= *l && *v <= *h)
    }

    fn exact(&self, y: &[Rational]) -> Option<usize> {
        self.surface.samples.binary_search_by(|s| s.y.as_slice().cmp(y)).ok()
    }

    fn transfer(&self, j: usize, y: &[f64]) -> Option<Vec<f64>> {
        let slope = self.slopes[j].as_ref()?;
        let dy: Vec<f64> = y.iter().zip(&self.y[j]).map(|(a, b)| a - b).collect();
        Some(self.values[j].iter().zip(slope).map(|(v, row)| v + row.iter().zip(&dy).map(|(s, d)| s * d).sum::<f64>()).collect())
    }

    /// Model value at `y` with a per-component uncertainty estimate.
    fn estimate(&self, y_exact: &[Rational], y: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
        if let Some(j) = self.exact(y_exact) {
            return Some((self.values[j].clone(), vec![0.0; self.values[j].len()]));
        }
        if !self.covers(y) {
            return None;
        }
        let width: Vec<f64> = self.lo.iter().zip(&self.hi).map(|(l, h)| (h - l).max(f64::MIN_POSITIVE)).collect();
        let mut order: Vec<(f64, usize)> = self
            .y
            .iter()
            .enumerate()
            .map(|(j, p)| (p.iter().zip(y).zip(&width).map(|((a, b), w)| ((a - b) / w).powi(2)).sum::<f64>(), j))
            .collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let dist = |p: &[f64], q: &[f64]| -> f64 {
            p.iter().zip(q).zip(&width).map(|((a, b), w)| ((a - b) / w).powi(2)).sum::<f64>().sqrt()
        };
        let near: Vec<usize> = order.iter().map(|&(_, j)| j).filter(|&j| self.slopes[j].is_some()).take(2 * y.len() + 2).collect();
        if near.len() < 2 {
            return None;
        }
        let preds: Vec<Vec<f64>> = near.iter().map(|&j| self.transfer(j, y).expect("slope present")).collect();
        let first = near[0];
        let reach = dist(y, &self.y[first]);
        let width_k = preds[0].len();
        let mut err = vec![0.0f64; width_k];
        for (m, &j) in near.iter().enumerate().skip(1) {
            // Neighbour spread, and how well the nearest linear model predicts
            // each neighbour, rescaled quadratically to the target distance.
            let check = self.transfer(first, &self.y[j]).expect("slope present");
            let ratio = (reach / dist(&self.y[j], &self.y[first]).max(f64::MIN_POSITIVE)).powi(2);
            for k in 0..width_k {
                let spread = (preds[m][k] - preds[0][k]).abs();
                let miss = (check[k] - self.values[j][k]).abs() * ratio;
                err[k] = err[k].max(2.0 * spread.max(miss));
            }
        }
        Some((preds[0].clone(), err))
    }
}

enum Direction {
    Deviates(Witness),
    Agrees { max_deviation: f64, compared: usize },
}

fn one_way(from: &Prepared, to: &Prepared, common: &[MultiIndex], tol: f64, swap: bool) -> Direction {
    let results: Vec<Option<(f64, Option<Witness>)>> = from
        .surface
        .samples
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            let (other, err) = to.estimate(&s.y, &from.y[i])?;
            let own = &from.values[i];
            let mut worst = 0.0f64;
            let mut witness = None;
            for (k, (a, b)) in own.iter().zip(&other).enumerate() {
                let scale = 1.0 + a.abs().max(b.abs());
                let dev = (a - b).abs();
                worst = worst.max(dev / scale);
                if witness.is_none() && dev > tol * scale + err[k] {
                    let (a, b) = if swap { (*b, *a) } else { (*a, *b) };
                    witness = Some(Witness::Coefficient { y: from.y[i].clone(), alpha: common[k].clone(), a, b });
                }
            }
            Some((worst, witness))
        })
        .collect();
    let mut compared = 0;
    let mut max_deviation = 0.0f64;
    for (worst, witness) in results.into_iter().flatten() {
        if let Some(w) = witness {
            return Direction::Deviates(w);
        }
        compared += 1;
        max_deviation = max_deviation.max(worst);
    }
    Direction::Agrees { max_deviation, compared }
}

fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|r| (0..n).map(|j| r.iter().zip(b).fold(Rational::from_integer(0.into()), |acc, (x, row)| acc + x * &row[j])).collect())
        .collect()
}

fn omega(n: usize) -> Vec<Vec<Rational>> {
    let h = n / 2;
    let mut m = vec![vec![Rational::from_integer(0.into()); n]; n];
    for i in 0..h {
        m[i][h + i] = Rational::from_integer(1.into());
        m[h + i][i] = Rational::from_integer((-1).into());
    }
    m
}

/// `max |DψᵀΩDψ − Ω|`.
fn lie_residual(dpsi: &[Vec<Rational>]) -> f64 {
    let n = dpsi.len();
    let w = omega(n);
    let t: Vec<Vec<Rational>> = (0..n).map(|i| (0..n).map(|j| dpsi[j][i].clone()).collect()).collect();
    let pull = mat_mul(&mat_mul(&t, &w), dpsi);
    pull.iter().zip(&w).flat_map(|(r, s)| r.iter().zip(s).map(|(a, b)| rational_to_f64(&(a - b)).abs())).fold(0.0, f64::max)
}

/// Compares two model surfaces.
///
/// Coefficient invariants are compared at every sample of either surface
/// that falls inside the other's chart range: exactly when the chart
/// value was sampled on both sides, otherwise by first-order transfer
/// from the nearest sample with the spread between the two nearest
/// transfers as an error allowance. If the models agree, `ψ` is read off
/// from exactly matched samples and checked against `ψ*ω = ω` with exact
/// Jacobians.
pub fn model_compare(a: &ModelSurface, b: &ModelSurface, tol: f64) -> Result<EquivalenceVerdict, ModelError> {
    if a.n != b.n {
        return Err(ModelError::ChartMismatch(format!("base dimensions {} and {}", a.n, b.n)));
    }
    if a.chart != b.chart {
        return Err(ModelError::ChartMismatch(format!("chart labels {:?} and {:?}", a.chart, b.chart)));
    }
    if a.is_empty() || b.is_empty() {
        return Ok(EquivalenceVerdict::Inconclusive { reason: "a surface has no samples".into() });
    }
    let mut common: Vec<MultiIndex> = a.alphas.iter().chain(&b.alphas).cloned().collect();
    common.sort_by(|x, y| x.degree().cmp(&y.degree()).then_with(|| y.cmp(x)));
    common.dedup();
    let pa = Prepared::new(a, &common);
    let pb = Prepared::new(b, &common);
    let (dev_ab, n_ab) = match one_way(&pa, &pb, &common, tol, false) {
        Direction::Deviates(w) => return Ok(EquivalenceVerdict::ModelsDistinct { witness: w }),
        Direction::Agrees { max_deviation, compared } => (max_deviation, compared),
    };
    let (dev_ba, n_ba) = match one_way(&pb, &pa, &common, tol, true) {
        Direction::Deviates(w) => return Ok(EquivalenceVerdict::ModelsDistinct { witness: w }),
        Direction::Agrees { max_deviation, compared } => (max_deviation, compared),
    };
    if n_ab + n_ba == 0 {
        return Ok(EquivalenceVerdict::Inconclusive { reason: "chart ranges do not overlap".into() });
    }
    if !a.n.is_multiple_of(2) {
        return Ok(EquivalenceVerdict::Inconclusive {
            reason: format!("models agree but the symplectic check needs an even base dimension, got {}", a.n),
        });
    }
    let psi: Vec<PsiSample> = a
        .samples
        .iter()
        .filter_map(|s| {
            let t = &b.samples[pb.exact(&s.y)?];
            let inv = linalg::inverse(&t.jacobian)?;
            Some(PsiSample { x_a: s.x.clone(), x_b: t.x.clone(), y: s.y.clone(), jacobian: mat_mul(&inv, &s.jacobian) })
        })
        .collect();
    if psi.is_empty() {
        return Ok(EquivalenceVerdict::Inconclusive {
            reason: "models agree but no chart value was sampled on both surfaces, so ψ is not available".into(),
        });
    }
    let residuals: Vec<f64> = psi.par_iter().map(|p| lie_residual(&p.jacobian)).collect();
    let (worst, omega_residual) =
        residuals.iter().copied().enumerate().fold((0, 0.0f64), |acc, (i, r)| if r > acc.1 { (i, r) } else { acc });
    if omega_residual > tol {
        return Ok(EquivalenceVerdict::ModelsDistinct {
            witness: Witness::LieCondition { x: psi[worst].x_a.clone(), residual: omega_residual },
        });
    }
    Ok(EquivalenceVerdict::ModelsCoincide { psi, omega_residual, max_deviation: dev_ab.max(dev_ba), compared: n_ab + n_ba })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connect::DiffOperator;
    use crate::models::{model_surface, symbol_invariant_field, InvariantField};
    use crate::polyalg::{LinearMap, Poly};
    use crate::scalar::{int, rat};

    fn c(v: i64) -> Poly {
        Poly::constant(int(v))
    }

    fn quartic() -> DiffOperator {
        let x = Poly::var;
        DiffOperator::from_terms(
            2,
            4,
            [
                (MultiIndex::from([4, 0]), c(2) + x(0)),
                (MultiIndex::from([0, 4]), c(1)),
                (MultiIndex::from([2, 2]), (c(1) + x(1)).scale(&int(6))),
                (MultiIndex::from([1, 0]), x(0) * x(1)),
                (MultiIndex::from([0, 0]), x(1).pow(2)),
            ],
        )
        .unwrap()
    }

    fn charts(a: &DiffOperator) -> Vec<InvariantField> {
        ["J(k=2,q=2)", "J(k=3,q=2)"].iter().map(|l| symbol_invariant_field(a, l.parse().unwrap()).unwrap()).collect()
    }

    fn grid() -> Vec<Vec<Rational>> {
        (0..4).flat_map(|a| (0..4).map(move |b| vec![int(a), int(b)])).collect()
    }

    fn affine(g: &LinearMap<Rational>, c: &[Rational], p: &[Rational]) -> Vec<Rational> {
        g.apply(p).into_iter().zip(c).map(|(v, s)| v + s).collect()
    }

    #[test]
    fn planted_symplectic_transport_coincides() {
        let a = quartic();
        let g = LinearMap::from_rows(vec![vec![int(2), int(1)], vec![int(1), int(1)]]).unwrap();
        let shift = vec![rat(1, 2), int(-3)];
        let b = a.affine_transport(&g, &shift).unwrap();
        let sa = model_surface(&a, &charts(&a), &grid()).unwrap();
        let grid_b: Vec<_> = grid().iter().map(|p| affine(&g, &shift, p)).collect();
        let sb = model_surface(&b, &charts(&b), &grid_b).unwrap();
        let v = model_compare(&sa, &sb, DEFAULT_MODEL_TOL).unwrap();
        let EquivalenceVerdict::ModelsCoincide { psi, omega_residual, .. } = &v else { panic!("{v:?}") };
        assert_eq!(*omega_residual, 0.0);
        assert_eq!(psi.len(), 16);
        for p in psi {
            assert_eq!(p.x_b, affine(&g, &shift, &p.x_a));
        }
        assert_eq!(model_compare(&sb, &sa, DEFAULT_MODEL_TOL).unwrap().status(), "models_coincide");
    }

    #[test]
    fn zero_order_shift_is_detected() {
        let a = quartic();
        let mut b = a.clone();
        b.add_term(MultiIndex::zeros(2), c(1)).unwrap();
        let sa = model_surface(&a, &charts(&a), &grid()).unwrap();
        let sb = model_surface(&b, &charts(&b), &grid()).unwrap();
        for (s, t) in [(&sa, &sb), (&sb, &sa)] {
            let v = model_compare(s, t, DEFAULT_MODEL_TOL).unwrap();
            let EquivalenceVerdict::ModelsDistinct { witness: Witness::Coefficient { alpha, a, b, .. } } = v else {
                panic!("{v:?}")
            };
            assert_eq!(alpha, MultiIndex::zeros(2));
            assert_eq!((a - b).abs(), 1.0);
        }
    }

    #[test]
    fn non_symplectic_transport_fails_lie_check() {
        // Volume-preserving but not symplectic; charts moved along with the operator.
        let x = Poly::var;
        let a = DiffOperator::from_terms(
            4,
            2,
            [
                (MultiIndex::from([2, 0, 0, 0]), c(1) + x(2)),
                (MultiIndex::from([0, 1, 1, 0]), x(0)),
                (MultiIndex::from([0, 0, 0, 2]), c(3)),
                (MultiIndex::from([0, 0, 0, 0]), x(1) * x(3)),
            ],
        )
        .unwrap();
        let chart_a: Vec<InvariantField> = (0..4).map(|i| InvariantField::custom(format!("c{i}"), x(i) + x((i + 1) % 4).pow(2))).collect();
        let g = LinearMap::from_rows(vec![
            vec![int(2), int(0), int(0), int(0)],
            vec![int(0), rat(1, 2), int(0), int(0)],
            vec![int(0), int(0), int(1), int(0)],
            vec![int(0), int(0), int(0), int(1)],
        ])
        .unwrap();
        let zero = vec![int(0); 4];
        let ginv = g.inverse().unwrap();
        let b = a.affine_transport(&g, &zero).unwrap();
        let chart_b: Vec<InvariantField> = chart_a.iter().map(|f| f.compose_affine(&ginv, &zero)).collect();
        let grid_a: Vec<Vec<Rational>> =
            (0..16).map(|k| (0..4).map(|i| int(((k >> i) & 1) as i64 + i as i64)).collect()).collect();
        let grid_b: Vec<_> = grid_a.iter().map(|p| g.apply(p)).collect();
        let sa = model_surface(&a, &chart_a, &grid_a).unwrap();
        let sb = model_surface(&b, &chart_b, &grid_b).unwrap();
        for (s, t) in [(&sa, &sb), (&sb, &sa)] {
            let v = model_compare(s, t, DEFAULT_MODEL_TOL).unwrap();
            let EquivalenceVerdict::ModelsDistinct { witness: Witness::LieCondition { residual, .. } } = v else {
                panic!("{v:?}")
            };
            assert!(residual > 0.1);
        }
    }

    #[test]
    fn interpolated_comparison_and_errors() {
        let a = quartic();
        let sa = model_surface(&a, &charts(&a), &grid()).unwrap();
        let fine: Vec<Vec<Rational>> = (0..7)
            .flat_map(|i| (0..7).map(move |j| vec![rat(i, 2), rat(j, 2)]))
            .filter(|p| !(p[0].is_integer() && p[1].is_integer()))
            .collect();
        let sf = model_surface(&a, &charts(&a), &fine).unwrap();
        // Half-integer grid: every comparison goes through interpolation.
        let v = model_compare(&sa, &sf, 1e-2).unwrap();
        assert!(matches!(v, EquivalenceVerdict::Inconclusive { .. } | EquivalenceVerdict::ModelsCoincide { .. }), "{v:?}");
        let mut shifted = a.clone();
        shifted.add_term(MultiIndex::zeros(2), c(10)).unwrap();
        let ss = model_surface(&shifted, &charts(&shifted), &fine).unwrap();
        assert_eq!(model_compare(&sa, &ss, 1e-2).unwrap().status(), "models_distinct");
        assert_eq!(model_compare(&ss, &sa, 1e-2).unwrap().status(), "models_distinct");
        let mut other = sa.clone();
        other.chart = vec!["a".into(), "b".into()];
        assert!(matches!(model_compare(&sa, &other, 1e-6), Err(ModelError::ChartMismatch(_))));
    }
}
