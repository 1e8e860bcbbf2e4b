use rayon::prelude::*;

use super::field::{check_charts, model_coefficients, InvariantField};
use super::ModelError;
use crate::connect::DiffOperator;
use crate::linalg;
use crate::polyalg::{indices_up_to, MultiIndex, Poly};
use crate::scalar::Rational;

/// One point of a model surface, with exact derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSample {
    /// Base point.
    pub x: Vec<Rational>,
    /// Chart values `y = I(x)`.
    pub y: Vec<Rational>,
    /// Coefficient invariants `Y_α = I_α(x)` in the order of `alphas`.
    pub values: Vec<Rational>,
    /// `∂y_i/∂x_j`.
    pub jacobian: Vec<Vec<Rational>>,
    /// `∂Y_α/∂x_j`.
    pub value_gradients: Vec<Vec<Rational>>,
}

/// Sampled image of `x ↦ (I(x), I_α(x))`, sorted by `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSurface {
    pub n: usize,
    pub order: usize,
    pub chart: Vec<String>,
    pub alphas: Vec<MultiIndex>,
    pub samples: Vec<ModelSample>,
}

impl ModelSurface {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

fn eval_all(ps: &[Poly], x: &[Rational]) -> Vec<Rational> {
    ps.iter().map(|p| p.eval(x)).collect()
}

pub fn model_surface(a: &DiffOperator, charts: &[InvariantField], grid: &[Vec<Rational>]) -> Result<ModelSurface, ModelError> {
    if grid.is_empty() {
        return Err(ModelError::EmptyGrid);
    }
    let n = a.dim();
    if let Some(p) = grid.iter().find(|p| p.len() != n) {
        return Err(ModelError::PointArity { expected: n, found: p.len() });
    }
    check_charts(a, charts)?;
    let coeffs = model_coefficients(a, charts)?;
    let alphas = indices_up_to(n, a.order());
    let y_polys: Vec<Poly> = charts.iter().map(|c| c.value.clone()).collect();
    let y_grads: Vec<Vec<Poly>> = y_polys.iter().map(|p| (0..n).map(|j| p.partial(j)).collect()).collect();
    let v_polys: Vec<Poly> = alphas.iter().map(|al| coeffs[al].clone()).collect();
    let v_grads: Vec<Vec<Poly>> = v_polys.iter().map(|p| (0..n).map(|j| p.partial(j)).collect()).collect();
    let mut samples: Vec<ModelSample> = grid
        .par_iter()
        .map(|x| {
            let jacobian: Vec<Vec<Rational>> = y_grads.iter().map(|g| eval_all(g, x)).collect();
            if linalg::determinant(&jacobian) == Rational::from_integer(0.into()) {
                return Err(ModelError::NotAdjusted { point: Some(x.clone()) });
            }
            Ok(ModelSample {
                x: x.clone(),
                y: eval_all(&y_polys, x),
                values: eval_all(&v_polys, x),
                jacobian,
                value_gradients: v_grads.iter().map(|g| eval_all(g, x)).collect(),
            })
        })
        .collect::<Result<_, _>>()?;
    samples.sort_by(|a, b| a.y.cmp(&b.y).then_with(|| a.x.cmp(&b.x)));
    if let Some(w) = samples.windows(2).find(|w| w[0].y == w[1].y) {
        return Err(ModelError::ChartCollision { a: w[0].x.clone(), b: w[1].x.clone() });
    }
    Ok(ModelSurface { n, order: a.order(), chart: charts.iter().map(|c| c.label.clone()).collect(), alphas, samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn grid() -> Vec<Vec<Rational>> {
        let mut g = Vec::new();
        for a in -1..=2 {
            for b in -1..=2 {
                g.push(vec![int(a), int(b)]);
            }
        }
        g
    }

    fn operator() -> DiffOperator {
        DiffOperator::from_terms(
            2,
            1,
            [(MultiIndex::from([1, 0]), Poly::var(1)), (MultiIndex::from([0, 0]), Poly::var(0).pow(2))],
        )
        .unwrap()
    }

    fn identity() -> Vec<InvariantField> {
        vec![InvariantField::custom("x1", Poly::var(0)), InvariantField::custom("x2", Poly::var(1))]
    }

    #[test]
    fn identity_chart_surface_is_a_graph() {
        let a = operator();
        let s = model_surface(&a, &identity(), &grid()).unwrap();
        assert_eq!(s.len(), 16);
        assert_eq!(s.chart, vec!["x1", "x2"]);
        for sample in &s.samples {
            assert_eq!(sample.x, sample.y);
            for (alpha, v) in s.alphas.iter().zip(&sample.values) {
                assert_eq!(v, &a.coeff(alpha).eval(&sample.x));
            }
        }
        assert!(s.samples.windows(2).all(|w| w[0].y < w[1].y));
    }

    #[test]
    fn surfaces_agree_on_shared_points() {
        let a = operator();
        let g = grid();
        let s1 = model_surface(&a, &identity(), &g).unwrap();
        let s2 = model_surface(&a, &identity(), &g[4..9]).unwrap();
        for p in &s2.samples {
            assert!(s1.samples.contains(p));
        }
    }

    #[test]
    fn rejects_bad_grids() {
        let a = operator();
        assert_eq!(model_surface(&a, &identity(), &[]), Err(ModelError::EmptyGrid));
        assert_eq!(
            model_surface(&a, &identity(), &[vec![int(1)]]),
            Err(ModelError::PointArity { expected: 2, found: 1 })
        );
        // y = (x1², x2): singular Jacobian on x1 = 0, collisions on ±x1.
        let folded = vec![InvariantField::custom("u", Poly::var(0).pow(2)), InvariantField::custom("v", Poly::var(1))];
        assert_eq!(
            model_surface(&a, &folded, &[vec![int(0), int(1)]]),
            Err(ModelError::NotAdjusted { point: Some(vec![int(0), int(1)]) })
        );
        assert!(matches!(
            model_surface(&a, &folded, &[vec![int(1), int(1)], vec![int(-1), int(1)]]),
            Err(ModelError::ChartCollision { .. })
        ));
    }
}
