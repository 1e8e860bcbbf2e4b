use std::collections::BTreeMap;

use num_traits::Zero;

use super::connection::Connection;
use super::operator::DiffOperator;
use super::{ConnectError, TensorField};
use crate::polyalg::{HomogeneousPoly, MultiIndex, Poly};
use crate::scalar::{factorial, Coeff, Rational};

fn check_dims(t: &TensorField, conn: &Connection) -> Result<(), ConnectError> {
    if t.dim() != conn.dim() {
        return Err(ConnectError::Shape(format!("tensor in dimension {} with connection in dimension {}", t.dim(), conn.dim())));
    }
    Ok(())
}

fn step(t: &TensorField, quads: &[TensorField]) -> TensorField {
    let d = t.dim();
    let mut out = HomogeneousPoly::zero(d, t.degree() + 1);
    for i in 0..d {
        let xi = HomogeneousPoly::var(d, i);
        let dt = t.map_coeffs(|c| c.partial(i));
        if !dt.is_zero() {
            out = out + xi.mul_unchecked(&dt);
        }
    }
    if t.degree() > 0 {
        for (k, g) in quads.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            let dk = t.derivative(&MultiIndex::unit(d, k));
            if !dk.is_zero() {
                out = out - g.mul_unchecked(&dk);
            }
        }
    }
    out
}

/// `d^s_∇ T = Σ_i ξ_i ∂_{x_i} T − Σ_{ijk} Γ^k_ij ξ_i ξ_j ∂T/∂ξ_k` for a
/// covariant symmetric tensor written as a polynomial in `ξ = dx`.
pub fn symmetrized_covariant_derivative(t: &TensorField, conn: &Connection) -> Result<TensorField, ConnectError> {
    check_dims(t, conn)?;
    Ok(step(t, &conn.contracted_quadratics()))
}

/// `(d^s_∇)^k f = Σ_β T_β ∂^β f`: the tensors `T_β` for every `β` with
/// `|β| ≤ k`.
fn iterated_jets(dim: usize, k: usize, conn: &Connection) -> BTreeMap<MultiIndex, TensorField> {
    let quads = conn.contracted_quadratics();
    let mut jets: BTreeMap<MultiIndex, TensorField> = BTreeMap::new();
    jets.insert(MultiIndex::zeros(dim), HomogeneousPoly::constant(dim, Poly::constant(Rational::from_int(1))));
    for _ in 0..k {
        let mut next: BTreeMap<MultiIndex, TensorField> = BTreeMap::new();
        for (beta, t) in &jets {
            let dt = step(t, &quads);
            if !dt.is_zero() {
                push(&mut next, beta.clone(), dt);
            }
            for i in 0..dim {
                let lifted = HomogeneousPoly::var(dim, i).mul_unchecked(t);
                push(&mut next, beta.with_increment(i), lifted);
            }
        }
        jets = next;
    }
    jets
}

fn push(map: &mut BTreeMap<MultiIndex, TensorField>, key: MultiIndex, t: TensorField) {
    match map.remove(&key) {
        Some(old) => {
            let s = old + t;
            map.insert(key, s);
        }
        None => {
            map.insert(key, t);
        }
    }
}

/// `⟨h, t⟩ = Σ_α α! h_α t_α`, the pairing that makes flat quantization
/// send `ξ^α` to `∂^α`.
fn pairing(h: &TensorField, t: &TensorField) -> Poly {
    let mut acc = Poly::zero();
    for (alpha, hc) in h.terms() {
        let tc = t.coeff(alpha);
        if !tc.is_zero() {
            acc = acc + (hc * &tc).scale(&Rational::from_bigint(&alpha.factorial()));
        }
    }
    acc
}

/// `Q(H) f = (1/k!) ⟨H, (d^s_∇)^k f⟩`.
pub fn quantize(h: &TensorField, conn: &Connection) -> Result<DiffOperator, ConnectError> {
    check_dims(h, conn)?;
    let d = h.dim();
    let k = h.degree();
    let inv_k = Rational::new(1.into(), factorial(k));
    let mut op = DiffOperator::zero(d, k);
    if h.is_zero() {
        return Ok(op);
    }
    for (beta, t) in iterated_jets(d, k, conn) {
        let c = pairing(h, &t).scale(&inv_k);
        op.add_term(beta.resized(d), c)?;
    }
    Ok(op)
}

/// Subsymbols `[σ_k, σ_{k−1}, …, σ_0]` with `A = Σ_i Q(σ_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TotalSymbol {
    pub parts: Vec<TensorField>,
}

impl TotalSymbol {
    pub fn principal(&self) -> &TensorField {
        &self.parts[0]
    }

    /// `Σ_i Q(σ_i)`.
    pub fn reconstruct(&self, conn: &Connection) -> Result<DiffOperator, ConnectError> {
        let order = self.parts[0].degree();
        let mut acc = DiffOperator::zero(conn.dim(), order);
        for s in &self.parts {
            acc = acc.add(&quantize(s, conn)?);
        }
        Ok(acc)
    }
}

/// Peels off `Q(σ_m)` degree by degree, starting from the declared order.
pub fn total_symbol(a: &DiffOperator, conn: &Connection) -> Result<TotalSymbol, ConnectError> {
    if a.dim() != conn.dim() {
        return Err(ConnectError::Shape(format!("operator in dimension {} with connection in dimension {}", a.dim(), conn.dim())));
    }
    let mut rest = a.clone();
    let mut parts = Vec::with_capacity(a.order() + 1);
    for m in (0..=a.order()).rev() {
        let s = rest.homogeneous_part(m);
        if !s.is_zero() {
            rest = rest.sub(&quantize(&s, conn)?);
        }
        parts.push(s);
    }
    if !rest.is_zero() {
        return Err(ConnectError::Internal("splitting left a nonzero remainder".into()));
    }
    Ok(TotalSymbol { parts })
}
