//! JSON input and output for the crate's value types.
//!
//! Rationals travel as strings (`"3/4"`, `"-2"`, `"0.125"`); plain JSON
//! integers are accepted on input. Every validation error carries a
//! JSONPath-like location such as `$.terms[2].exp`.
//!
//! | value | shape |
//! |---|---|
//! | symbol | `{"dim", "degree"?, "terms": [{"exp": [..], "coef": r}]}` |
//! | base polynomial | `r` or `{"terms": [{"exp": [..], "coef": r}]}` |
//! | symbol field | `{"base_dim", "dim", "degree"?, "terms": [{"exp", "coef": base}]}` |
//! | operator | `{"dim", "order", "coeffs": [{"alpha": [..], "coef": base}]}` |
//! | connection | `{"dim", "gamma": [i][k][j] of base}` with `gamma[i][k][j] = Γ^k_ij` |
//! | linear map | `[[r, ..], ..]` by rows |

use serde_json::{json, Map, Value};

use crate::connect::{Connection, DiffOperator};
use crate::error::ParseError;
use crate::invar::{InvariantLabel, InvariantSignature};
use crate::models::{ModelSample, ModelSurface};
use crate::polyalg::{HomogeneousPoly, LinearMap, MultiIndex, Poly, SymbolField};
use crate::scalar::{format_rational, parse_rational, Rational};

/// Parses JSON text, reporting line and column on syntax errors.
pub fn parse_text(text: &str) -> Result<Value, ParseError> {
    serde_json::from_str(text).map_err(|e| ParseError::Json(format!("line {}, column {}: {e}", e.line(), e.column())))
}

/// Stable pretty rendering used for all reports.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable value");
    s.push('\n');
    s
}

fn err(path: &str, msg: impl Into<String>) -> ParseError {
    ParseError::schema(path, msg)
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, ParseError> {
    v.as_object().ok_or_else(|| err(path, "expected an object"))
}

fn field<'a>(o: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value, ParseError> {
    o.get(key).ok_or_else(|| err(path, format!("missing field `{key}`")))
}

fn no_extra(o: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<(), ParseError> {
    match o.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(err(path, format!("unknown field `{k}`"))),
        None => Ok(()),
    }
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, ParseError> {
    v.as_array().ok_or_else(|| err(path, "expected an array"))
}

fn usize_of(v: &Value, path: &str) -> Result<usize, ParseError> {
    v.as_u64().map(|n| n as usize).ok_or_else(|| err(path, "expected a non-negative integer"))
}

pub fn rational_from_json(v: &Value, path: &str) -> Result<Rational, ParseError> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|_| err(path, format!("invalid rational `{s}`"))),
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_rational(&n.to_string()).map_err(|e| err(path, e.to_string())),
        Value::Number(_) => Err(err(path, "floats are not accepted; write rationals as strings such as \"1/3\"")),
        _ => Err(err(path, "expected a rational string")),
    }
}

pub fn rational_to_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

fn exponent(v: &Value, dim: usize, path: &str) -> Result<MultiIndex, ParseError> {
    let a = array(v, path)?;
    if a.len() != dim {
        return Err(err(path, format!("exponent has length {}, expected {dim}", a.len())));
    }
    let mut out = Vec::with_capacity(dim);
    for (i, e) in a.iter().enumerate() {
        let p = format!("{path}[{i}]");
        let n = e.as_u64().filter(|n| *n <= u32::MAX as u64).ok_or_else(|| err(&p, "expected a non-negative integer"))?;
        out.push(n as u32);
    }
    Ok(MultiIndex::new(out))
}

pub fn exponent_to_json(e: &MultiIndex) -> Value {
    Value::Array(e.entries().iter().map(|&v| json!(v)).collect())
}

fn terms_array<'a>(o: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Vec<Value>, ParseError> {
    array(field(o, key, path)?, &format!("{path}.{key}"))
}

/// Generic term list `[{"<exp_key>": [..], "coef": ..}]`.
fn parse_terms<C>(
    list: &[Value],
    dim: usize,
    exp_key: &str,
    path: &str,
    coef: impl Fn(&Value, &str) -> Result<C, ParseError>,
) -> Result<Vec<(MultiIndex, C, String)>, ParseError> {
    let mut out = Vec::with_capacity(list.len());
    for (i, t) in list.iter().enumerate() {
        let p = format!("{path}[{i}]");
        let o = object(t, &p)?;
        no_extra(o, &[exp_key, "coef"], &p)?;
        let e = exponent(field(o, exp_key, &p)?, dim, &format!("{p}.{exp_key}"))?;
        let c = coef(field(o, "coef", &p)?, &format!("{p}.coef"))?;
        out.push((e, c, p));
    }
    Ok(out)
}

fn homogeneous_from_terms<C: crate::scalar::Coeff>(
    dim: usize,
    degree: Option<usize>,
    terms: Vec<(MultiIndex, C, String)>,
    path: &str,
) -> Result<HomogeneousPoly<C>, ParseError> {
    let degree = match (degree, terms.first()) {
        (Some(d), _) => d,
        (None, Some((e, _, _))) => e.degree(),
        (None, None) => return Err(err(path, "empty polynomial needs an explicit `degree`")),
    };
    for (e, _, p) in &terms {
        if e.degree() != degree {
            return Err(err(p, format!("term {e} has degree {}, expected {degree}", e.degree())));
        }
    }
    HomogeneousPoly::from_terms(dim, degree, terms.into_iter().map(|(e, c, _)| (e, c))).map_err(|e| err(path, e.to_string()))
}

pub fn poly_from_json(v: &Value) -> Result<HomogeneousPoly, ParseError> {
    poly_at(v, "$")
}

fn poly_at(v: &Value, path: &str) -> Result<HomogeneousPoly, ParseError> {
    let o = object(v, path)?;
    no_extra(o, &["dim", "degree", "terms"], path)?;
    let dim = usize_of(field(o, "dim", path)?, &format!("{path}.dim"))?;
    let degree = o.get("degree").map(|d| usize_of(d, &format!("{path}.degree"))).transpose()?;
    let terms = parse_terms(terms_array(o, "terms", path)?, dim, "exp", &format!("{path}.terms"), rational_from_json)?;
    homogeneous_from_terms(dim, degree, terms, path)
}

pub fn poly_to_json(p: &HomogeneousPoly) -> Value {
    json!({
        "dim": p.dim(),
        "degree": p.degree(),
        "terms": p.terms().map(|(e, c)| json!({"exp": exponent_to_json(e), "coef": rational_to_json(c)})).collect::<Vec<_>>(),
    })
}

pub fn poly_f64_to_json(p: &HomogeneousPoly<f64>) -> Value {
    json!({
        "dim": p.dim(),
        "degree": p.degree(),
        "terms": p.terms().map(|(e, c)| json!({"exp": exponent_to_json(e), "coef": c})).collect::<Vec<_>>(),
    })
}

/// A base polynomial in `dim` variables: a rational constant or a term list.
pub fn base_poly_from_json(v: &Value, dim: usize, path: &str) -> Result<Poly, ParseError> {
    match v {
        Value::String(_) | Value::Number(_) => Ok(Poly::constant(rational_from_json(v, path)?)),
        Value::Object(o) => {
            no_extra(o, &["terms"], path)?;
            let terms = parse_terms(terms_array(o, "terms", path)?, dim, "exp", &format!("{path}.terms"), rational_from_json)?;
            Ok(Poly::from_terms(terms.into_iter().map(|(e, c, _)| (e, c))))
        }
        _ => Err(err(path, "expected a rational string or a polynomial object")),
    }
}

/// Constants collapse to a bare string.
pub fn base_poly_to_json(p: &Poly, dim: usize) -> Value {
    if p.is_constant() {
        return rational_to_json(&p.constant_term());
    }
    json!({
        "terms": p.terms().map(|(e, c)| json!({"exp": exponent_to_json(&e.resized(dim)), "coef": rational_to_json(c)})).collect::<Vec<_>>(),
    })
}

pub fn symbol_field_from_json(v: &Value) -> Result<SymbolField, ParseError> {
    let path = "$";
    let o = object(v, path)?;
    no_extra(o, &["base_dim", "dim", "degree", "terms"], path)?;
    let base_dim = usize_of(field(o, "base_dim", path)?, "$.base_dim")?;
    let dim = usize_of(field(o, "dim", path)?, "$.dim")?;
    let degree = o.get("degree").map(|d| usize_of(d, "$.degree")).transpose()?;
    let terms = parse_terms(terms_array(o, "terms", path)?, dim, "exp", "$.terms", |c, p| base_poly_from_json(c, base_dim, p))?;
    let symbol = homogeneous_from_terms(dim, degree, terms, path)?;
    SymbolField::new(base_dim, symbol).map_err(|e| err(path, e.to_string()))
}

pub fn symbol_field_to_json(f: &SymbolField) -> Value {
    let s = f.symbol();
    json!({
        "base_dim": f.base_dim(),
        "dim": s.dim(),
        "degree": s.degree(),
        "terms": s.terms().map(|(e, c)| json!({"exp": exponent_to_json(e), "coef": base_poly_to_json(c, f.base_dim())})).collect::<Vec<_>>(),
    })
}

pub fn operator_from_json(v: &Value) -> Result<DiffOperator, ParseError> {
    let path = "$";
    let o = object(v, path)?;
    no_extra(o, &["dim", "order", "coeffs"], path)?;
    let dim = usize_of(field(o, "dim", path)?, "$.dim")?;
    let order = usize_of(field(o, "order", path)?, "$.order")?;
    let terms = parse_terms(terms_array(o, "coeffs", path)?, dim, "alpha", "$.coeffs", |c, p| base_poly_from_json(c, dim, p))?;
    let mut op = DiffOperator::zero(dim, order);
    for (alpha, c, p) in terms {
        if alpha.degree() > order {
            return Err(err(&format!("{p}.alpha"), format!("|{alpha}| = {} exceeds the declared order {order}", alpha.degree())));
        }
        op.add_term(alpha, c).map_err(|e| err(&p, e.to_string()))?;
    }
    Ok(op)
}

pub fn operator_to_json(a: &DiffOperator) -> Value {
    json!({
        "dim": a.dim(),
        "order": a.order(),
        "coeffs": a.terms().map(|(al, c)| json!({"alpha": exponent_to_json(al), "coef": base_poly_to_json(c, a.dim())})).collect::<Vec<_>>(),
    })
}

pub fn connection_from_json(v: &Value) -> Result<Connection, ParseError> {
    let path = "$";
    let o = object(v, path)?;
    no_extra(o, &["dim", "gamma"], path)?;
    let dim = usize_of(field(o, "dim", path)?, "$.dim")?;
    let g = array(field(o, "gamma", path)?, "$.gamma")?;
    let sized = |a: &Vec<Value>, p: &str| {
        if a.len() == dim {
            Ok(())
        } else {
            Err(err(p, format!("expected {dim} entries, found {}", a.len())))
        }
    };
    sized(g, "$.gamma")?;
    let mut comps = Vec::with_capacity(dim);
    for (i, gi) in g.iter().enumerate() {
        let pi = format!("$.gamma[{i}]");
        let rows = array(gi, &pi)?;
        sized(rows, &pi)?;
        let mut mat = Vec::with_capacity(dim);
        for (k, row) in rows.iter().enumerate() {
            let pk = format!("{pi}[{k}]");
            let entries = array(row, &pk)?;
            sized(entries, &pk)?;
            mat.push(
                entries
                    .iter()
                    .enumerate()
                    .map(|(j, e)| base_poly_from_json(e, dim, &format!("{pk}[{j}]")))
                    .collect::<Result<Vec<_>, _>>()?,
            );
        }
        comps.push(mat);
    }
    Connection::from_components(comps).map_err(|e| err(path, e.to_string()))
}

pub fn connection_to_json(c: &Connection) -> Value {
    let d = c.dim();
    let gamma: Vec<Value> = (0..d)
        .map(|i| {
            Value::Array(
                (0..d).map(|k| Value::Array((0..d).map(|j| base_poly_to_json(c.christoffel(i, k, j), d)).collect())).collect(),
            )
        })
        .collect();
    json!({"dim": d, "gamma": gamma})
}

pub fn linear_map_from_json(v: &Value, path: &str) -> Result<LinearMap<Rational>, ParseError> {
    let rows = array(v, path)?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, r) in rows.iter().enumerate() {
        let p = format!("{path}[{i}]");
        let entries = array(r, &p)?;
        if entries.len() != rows.len() {
            return Err(err(&p, format!("row has {} entries, expected {}", entries.len(), rows.len())));
        }
        out.push(entries.iter().enumerate().map(|(j, e)| rational_from_json(e, &format!("{p}[{j}]"))).collect::<Result<Vec<_>, _>>()?);
    }
    LinearMap::from_rows(out).map_err(|e| err(path, e.to_string()))
}

pub fn linear_map_to_json(m: &LinearMap<Rational>) -> Value {
    Value::Array(m.rows().iter().map(|r| Value::Array(r.iter().map(rational_to_json).collect())).collect())
}

pub fn linear_map_f64_to_json(m: &LinearMap<f64>) -> Value {
    Value::Array(m.rows().iter().map(|r| json!(r)).collect())
}

pub fn point_to_json(p: &[Rational]) -> Value {
    Value::Array(p.iter().map(rational_to_json).collect())
}

pub fn point_from_json(v: &Value, path: &str) -> Result<Vec<Rational>, ParseError> {
    array(v, path)?.iter().enumerate().map(|(i, e)| rational_from_json(e, &format!("{path}[{i}]"))).collect()
}

pub fn matrix_to_json(m: &[Vec<Rational>]) -> Value {
    Value::Array(m.iter().map(|r| point_to_json(r)).collect())
}

fn matrix_from_json(v: &Value, rows: usize, cols: usize, path: &str) -> Result<Vec<Vec<Rational>>, ParseError> {
    let a = array(v, path)?;
    if a.len() != rows {
        return Err(err(path, format!("expected {rows} rows, found {}", a.len())));
    }
    a.iter()
        .enumerate()
        .map(|(i, r)| {
            let p = format!("{path}[{i}]");
            let row = point_from_json(r, &p)?;
            if row.len() != cols {
                return Err(err(&p, format!("expected {cols} entries, found {}", row.len())));
            }
            Ok(row)
        })
        .collect()
}

pub fn signature_to_json(s: &InvariantSignature) -> Value {
    Value::Array(s.entries.iter().map(|(l, v)| json!({"label": l.to_string(), "value": rational_to_json(v)})).collect())
}

pub fn signature_f64_to_json(s: &InvariantSignature<f64>) -> Value {
    Value::Array(s.entries.iter().map(|(l, v)| json!({"label": l.to_string(), "value": v})).collect())
}

pub fn signature_from_json(v: &Value, path: &str) -> Result<InvariantSignature, ParseError> {
    let entries = array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let p = format!("{path}[{i}]");
            let o = object(e, &p)?;
            no_extra(o, &["label", "value"], &p)?;
            let label: InvariantLabel = field(o, "label", &p)?
                .as_str()
                .ok_or_else(|| err(&format!("{p}.label"), "expected a string"))?
                .parse()
                .map_err(|e: ParseError| err(&format!("{p}.label"), e.to_string()))?;
            Ok((label, rational_from_json(field(o, "value", &p)?, &format!("{p}.value"))?))
        })
        .collect::<Result<_, ParseError>>()?;
    Ok(InvariantSignature { entries })
}

pub fn surface_to_json(s: &ModelSurface) -> Value {
    json!({
        "n": s.n,
        "order": s.order,
        "chart": s.chart,
        "alphas": s.alphas.iter().map(exponent_to_json).collect::<Vec<_>>(),
        "samples": s.samples.iter().map(|p| json!({
            "x": point_to_json(&p.x),
            "y": point_to_json(&p.y),
            "values": point_to_json(&p.values),
            "jacobian": matrix_to_json(&p.jacobian),
            "value_gradients": matrix_to_json(&p.value_gradients),
        })).collect::<Vec<_>>(),
    })
}

pub fn surface_from_json(v: &Value) -> Result<ModelSurface, ParseError> {
    let path = "$";
    let o = object(v, path)?;
    no_extra(o, &["n", "order", "chart", "alphas", "samples"], path)?;
    let n = usize_of(field(o, "n", path)?, "$.n")?;
    let order = usize_of(field(o, "order", path)?, "$.order")?;
    let chart = array(field(o, "chart", path)?, "$.chart")?
        .iter()
        .enumerate()
        .map(|(i, c)| c.as_str().map(str::to_string).ok_or_else(|| err(&format!("$.chart[{i}]"), "expected a string")))
        .collect::<Result<Vec<_>, _>>()?;
    if chart.len() != n {
        return Err(err("$.chart", format!("expected {n} labels, found {}", chart.len())));
    }
    let alphas = array(field(o, "alphas", path)?, "$.alphas")?
        .iter()
        .enumerate()
        .map(|(i, a)| exponent(a, n, &format!("$.alphas[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let m = alphas.len();
    let mut samples = Vec::new();
    for (i, s) in array(field(o, "samples", path)?, "$.samples")?.iter().enumerate() {
        let p = format!("$.samples[{i}]");
        let so = object(s, &p)?;
        no_extra(so, &["x", "y", "values", "jacobian", "value_gradients"], &p)?;
        let vec_n = |key: &str, len: usize| -> Result<Vec<Rational>, ParseError> {
            let kp = format!("{p}.{key}");
            let v = point_from_json(field(so, key, &p)?, &kp)?;
            if v.len() != len {
                return Err(err(&kp, format!("expected {len} entries, found {}", v.len())));
            }
            Ok(v)
        };
        samples.push(ModelSample {
            x: vec_n("x", n)?,
            y: vec_n("y", n)?,
            values: vec_n("values", m)?,
            jacobian: matrix_from_json(field(so, "jacobian", &p)?, n, n, &format!("{p}.jacobian"))?,
            value_gradients: matrix_from_json(field(so, "value_gradients", &p)?, m, n, &format!("{p}.value_gradients"))?,
        });
    }
    if let Some(i) = samples.windows(2).position(|w| w[0].y >= w[1].y) {
        return Err(err(&format!("$.samples[{}].y", i + 1), "samples must be strictly increasing in y"));
    }
    Ok(ModelSurface { n, order, chart, alphas, samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::scalar::{int, rat};

    #[test]
    fn symbol_roundtrip_and_inferred_degree() {
        let v = parse_text(r#"{"dim": 2, "terms": [{"exp": [2, 0], "coef": "1/2"}, {"exp": [1, 1], "coef": -3}]}"#).unwrap();
        let p = poly_from_json(&v).unwrap();
        assert_eq!(p.degree(), 2);
        assert_eq!(p.coeff(&MultiIndex::from([2, 0])), rat(1, 2));
        assert_eq!(poly_from_json(&poly_to_json(&p)).unwrap(), p);
    }

    #[test]
    fn errors_name_the_offending_term() {
        let v = parse_text(r#"{"dim": 2, "terms": [{"exp": [2, 0], "coef": "1"}, {"exp": [1, 0], "coef": "1"}]}"#).unwrap();
        let e = poly_from_json(&v).unwrap_err().to_string();
        assert!(e.starts_with("$.terms[1]:"), "{e}");
        assert!(e.contains("degree 1"), "{e}");
        let v = parse_text(r#"{"dim": 2, "terms": [{"exp": [2], "coef": "1"}]}"#).unwrap();
        assert!(poly_from_json(&v).unwrap_err().to_string().starts_with("$.terms[0].exp:"));
        let v = parse_text(r#"{"dim": 2, "terms": [{"exp": [2, 0], "coef": 0.5}]}"#).unwrap();
        assert!(poly_from_json(&v).unwrap_err().to_string().starts_with("$.terms[0].coef:"));
        let e = parse_text("{\n  \"dim\": 2,\n  oops\n}").unwrap_err().to_string();
        assert!(e.contains("line 3"), "{e}");
    }

    #[test]
    fn operator_order_is_enforced() {
        let v = parse_text(r#"{"dim": 1, "order": 1, "coeffs": [{"alpha": [2], "coef": "1"}]}"#).unwrap();
        let e = operator_from_json(&v).unwrap_err().to_string();
        assert!(e.starts_with("$.coeffs[0].alpha:"), "{e}");
        let v = parse_text(
            r#"{"dim": 2, "order": 2, "coeffs": [{"alpha": [2, 0], "coef": {"terms": [{"exp": [0, 1], "coef": "2"}]}}, {"alpha": [0, 0], "coef": "5"}]}"#,
        )
        .unwrap();
        let a = operator_from_json(&v).unwrap();
        assert_eq!(a.coeff(&MultiIndex::from([2, 0])), Poly::var(1).scale(&int(2)));
        assert_eq!(operator_from_json(&operator_to_json(&a)).unwrap(), a);
    }

    #[test]
    fn field_and_connection_roundtrip() {
        let v = parse_text(
            r#"{"base_dim": 2, "dim": 2, "terms": [{"exp": [3, 0], "coef": "1"}, {"exp": [0, 3], "coef": {"terms": [{"exp": [1, 0], "coef": "1"}]}}]}"#,
        )
        .unwrap();
        let f = symbol_field_from_json(&v).unwrap();
        assert_eq!(symbol_field_from_json(&symbol_field_to_json(&f)).unwrap(), f);
        let c = Connection::from_components(vec![
            vec![vec![Poly::var(0), Poly::zero()], vec![Poly::zero(), Poly::constant(int(1))]],
            vec![vec![Poly::zero(), Poly::zero()], vec![Poly::zero(), Poly::zero()]],
        ])
        .unwrap();
        assert_eq!(connection_from_json(&connection_to_json(&c)).unwrap(), c);
        let bad = parse_text(r#"{"dim": 2, "gamma": [[["0","0"],["0"]],[["0","0"],["0","0"]]]}"#).unwrap();
        assert!(connection_from_json(&bad).unwrap_err().to_string().starts_with("$.gamma[0][1]:"));
    }

    #[test]
    fn signature_roundtrip() {
        let s = InvariantSignature { entries: vec![("J(k=2,q=2)".parse().unwrap(), rat(-7, 3)), (InvariantLabel::OrbitDimension, int(3))] };
        assert_eq!(signature_from_json(&signature_to_json(&s), "$").unwrap(), s);
    }
}
