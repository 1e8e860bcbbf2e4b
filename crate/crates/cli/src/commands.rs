//! One function per subcommand. Each returns a status string, an exit code
//! and the JSON result body; [`execute`] wraps them into the report.

use std::collections::BTreeMap;

use opinv_core::connect::{
    is_curvature_free, is_torsion_free, torsion_curvature, total_symbol, wagner_connection, wagner_connection_grid,
    ConnectError, Connection, WagnerOptions,
};
use opinv_core::equiv::{orbit_match, signature_match, MatchConfig, MatchVerdict, SignatureVerdict};
use opinv_core::invar::{sp_orbit_dimension, sp_stabilizer_dimension, trace_invariants, InvariantLabel, SignatureConfig};
use opinv_core::json::{
    connection_to_json, exponent_to_json, linear_map_f64_to_json, matrix_to_json, point_to_json, poly_to_json,
    signature_to_json, surface_to_json, symbol_field_to_json,
};
use opinv_core::models::{
    model_compare, model_surface, symbol_invariant_field, EquivalenceVerdict, InvariantField, Witness, DEFAULT_MODEL_TOL,
};
use opinv_core::transvect::{metric_transvectant, poisson_bracket, symplectic_transvectant};
use opinv_core::{monomial_basis, Poly, SymbolField};
use serde_json::{json, Value};

use crate::config::{grid_points, parse_grid, GridAxis, RunConfig};
use crate::error::{exit, CliError};
use crate::inputs::Inputs;
use crate::{Cli, Command, TransvectKind};

pub struct Report {
    pub json: Value,
    pub exit: u8,
}

struct Outcome {
    status: &'static str,
    exit: u8,
    result: Value,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Outcome { status: "ok", exit: exit::OK, result }
    }
}

struct Ctx {
    inputs: Inputs,
    config: RunConfig,
    grid: Option<Vec<GridAxis>>,
}

impl Ctx {
    fn tol(&mut self, name: &str, default: f64) -> Result<f64, CliError> {
        let t = self.config.tolerances.get(name).copied().unwrap_or(default);
        if !(t >= 0.0) || !t.is_finite() {
            return Err(CliError::Usage(format!("--tol must be a finite non-negative number, got {t}")));
        }
        self.config.tolerances.insert(name.to_string(), t);
        Ok(t)
    }

    fn option(&mut self, key: &str, v: Value) {
        self.config.options.insert(key.to_string(), v);
    }

    fn signature_config(&self) -> SignatureConfig {
        self.config.signature_config.clone().unwrap_or_default()
    }

    fn grid(&self) -> Option<Vec<Vec<opinv_core::Rational>>> {
        self.grid.as_ref().map(|g| grid_points(g))
    }
}

pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let g = &cli.global;
    let grid = g.grid.as_deref().map(parse_grid).transpose()?;
    let mut inputs = Inputs::default();
    let signature_config = g.signature_config.as_deref().map(|p| inputs.signature_config(p)).transpose()?;
    let mut tolerances = BTreeMap::new();
    if let Some(t) = g.tol {
        tolerances.insert(tol_name(&cli.command).to_string(), t);
    }
    let config = RunConfig {
        seed: g.seed,
        tolerances,
        grid: grid.clone(),
        signature_config,
        output: g.output.as_ref().map(|p| p.display().to_string()),
        format: g.format,
        options: BTreeMap::new(),
    };
    let mut ctx = Ctx { inputs, config, grid };
    let outcome = match &cli.command {
        Command::Transvect { p, q, order, kind } => transvect(&mut ctx, p, q, *order, *kind)?,
        Command::Invariants { symbol } => invariants(&mut ctx, symbol)?,
        Command::Signature { a, b } => signature(&mut ctx, a, b)?,
        Command::OrbitDim { symbol } => orbit_dim(&mut ctx, symbol)?,
        Command::Match { p, q, restarts, max_iters } => matching(&mut ctx, p, q, *restarts, *max_iters)?,
        Command::Wagner { field, max_degree } => wagner(&mut ctx, field, *max_degree)?,
        Command::Split { operator, connection } => split(&mut ctx, operator, connection.as_deref())?,
        Command::Model { operator, charts } => model(&mut ctx, operator, charts)?,
        Command::ModelCompare { a, b } => compare(&mut ctx, a, b)?,
    };
    let json = json!({
        "tool": "opinv",
        "version": env!("CARGO_PKG_VERSION"),
        "command": cli.command.name(),
        "config": serde_json::to_value(&ctx.config).expect("serializable config"),
        "inputs": serde_json::to_value(&ctx.inputs.records).expect("serializable inputs"),
        "status": outcome.status,
        "result": outcome.result,
    });
    Ok(Report { json, exit: outcome.exit })
}

fn tol_name(c: &Command) -> &'static str {
    match c {
        Command::Signature { .. } => "signature",
        Command::Match { .. } => "match",
        Command::ModelCompare { .. } => "model",
        _ => "tol",
    }
}

fn transvect(ctx: &mut Ctx, p: &std::path::Path, q: &std::path::Path, order: usize, kind: TransvectKind) -> Result<Outcome, CliError> {
    let p = ctx.inputs.symbol(p)?;
    let q = ctx.inputs.symbol(q)?;
    ctx.option("kind", json!(format!("{kind:?}").to_lowercase()));
    let value = match kind {
        TransvectKind::Symplectic => symplectic_transvectant(&p, &q, order)?,
        TransvectKind::Metric => metric_transvectant(&p, &q, order)?,
        TransvectKind::Poisson => poisson_bracket(&p, &q)?,
    };
    if kind != TransvectKind::Poisson {
        ctx.option("order", json!(order));
    }
    Ok(Outcome::ok(json!({ "value": poly_to_json(&value) })))
}

fn invariants(ctx: &mut Ctx, path: &std::path::Path) -> Result<Outcome, CliError> {
    let p = ctx.inputs.symbol(path)?;
    let sig = trace_invariants(&p, &ctx.signature_config())?;
    Ok(Outcome::ok(json!({
        "dim": p.dim(),
        "degree": p.degree(),
        "signature": signature_to_json(&sig),
    })))
}

fn signature(ctx: &mut Ctx, a: &std::path::Path, b: &std::path::Path) -> Result<Outcome, CliError> {
    let pa = ctx.inputs.symbol(a)?;
    let pb = ctx.inputs.symbol(b)?;
    let tol = ctx.tol("signature", 0.0)?;
    let cfg = ctx.signature_config();
    if (pa.dim(), pa.degree()) != (pb.dim(), pb.degree()) {
        return Err(CliError::Usage(format!(
            "symbols live in different spaces: dim {} degree {} vs dim {} degree {}",
            pa.dim(),
            pa.degree(),
            pb.dim(),
            pb.degree()
        )));
    }
    let sa = trace_invariants(&pa, &cfg)?;
    let sb = trace_invariants(&pb, &cfg)?;
    let sigs = json!({ "a": signature_to_json(&sa), "b": signature_to_json(&sb) });
    Ok(match signature_match(&sa, &sb, tol)? {
        SignatureVerdict::Distinct { label, a, b } => Outcome {
            status: "distinct",
            exit: exit::DISTINCT,
            result: json!({ "witness": { "label": label.to_string(), "a": a, "b": b }, "signatures": sigs }),
        },
        SignatureVerdict::Indistinguishable => {
            Outcome { status: "indistinguishable", exit: exit::INCONCLUSIVE, result: json!({ "signatures": sigs }) }
        }
    })
}

fn orbit_dim(ctx: &mut Ctx, path: &std::path::Path) -> Result<Outcome, CliError> {
    let p = ctx.inputs.symbol(path)?;
    let orbit = sp_orbit_dimension(&p)?;
    let stab = sp_stabilizer_dimension(&p)?;
    let space = monomial_basis(p.dim(), p.degree()).len();
    Ok(Outcome::ok(json!({
        "dim": p.dim(),
        "degree": p.degree(),
        "space_dim": space,
        "orbit_dim": orbit,
        "stabilizer_dim": stab,
        "codimension": space - orbit,
    })))
}

fn matching(ctx: &mut Ctx, p: &std::path::Path, q: &std::path::Path, restarts: usize, max_iters: usize) -> Result<Outcome, CliError> {
    let pp = ctx.inputs.symbol(p)?;
    let qq = ctx.inputs.symbol(q)?;
    let defaults = MatchConfig::default();
    let tol = ctx.tol("match", defaults.tol)?;
    let cfg = MatchConfig { restarts, max_iters, tol, seed: ctx.config.seed, ..defaults };
    ctx.option("restarts", json!(restarts));
    ctx.option("max_iters", json!(max_iters));
    ctx.config.tolerances.insert("signature".into(), cfg.signature_tol);
    let res = orbit_match(&pp, &qq, &cfg)?;
    let runs: Vec<Value> = res
        .runs
        .iter()
        .map(|r| json!({ "restart": r.restart, "accepted_steps": r.history.len() - 1, "residual": r.residual() }))
        .collect();
    Ok(match res.verdict {
        MatchVerdict::Matched { g, residual } => Outcome {
            status: "matched",
            exit: exit::OK,
            result: json!({
                "g": linear_map_f64_to_json(&g),
                "residual": residual,
                "symplectic_defect": g.symplectic_defect(),
                "runs": runs,
            }),
        },
        MatchVerdict::SignatureMismatch { label, a, b } => Outcome {
            status: "signature_mismatch",
            exit: exit::DISTINCT,
            result: json!({ "witness": { "label": label.to_string(), "a": a, "b": b } }),
        },
        MatchVerdict::NoMatchFound { best_residual } => Outcome {
            status: "no_match_found",
            exit: exit::INCONCLUSIVE,
            result: json!({ "best_residual": best_residual, "runs": runs }),
        },
    })
}

fn wagner(ctx: &mut Ctx, path: &std::path::Path, max_degree: usize) -> Result<Outcome, CliError> {
    let field = ctx.inputs.symbol_field(path)?;
    let solved = match ctx.grid() {
        Some(points) => {
            if let Some(p) = points.first().filter(|p| p.len() != field.base_dim()) {
                return Err(CliError::Usage(format!("--grid has {} axes, field has base dimension {}", p.len(), field.base_dim())));
            }
            ctx.option("mode", json!("grid"));
            wagner_connection_grid(&field, &points).map(|g| {
                let gamma: Vec<Value> =
                    g.gamma.iter().map(|per| Value::Array(per.iter().map(linear_map_f64_to_json).collect())).collect();
                json!({
                    "mode": "grid",
                    "points": g.points.iter().map(|p| point_to_json(p)).collect::<Vec<_>>(),
                    "gamma": gamma,
                    "max_residual": g.max_residual,
                    "min_relative_singular_value": g.min_relative_singular_value,
                })
            })
        }
        None => {
            ctx.option("mode", json!("symbolic"));
            ctx.option("max_degree", json!(max_degree));
            let opts = WagnerOptions { max_degree, sample_points: None };
            wagner_connection(&field, &opts).map(|s| {
                let (torsion, curvature) = torsion_curvature(&s.connection);
                json!({
                    "mode": "symbolic",
                    "connection": connection_to_json(&s.connection),
                    "ansatz_degree": s.ansatz_degree,
                    "kernel_dim": s.kernel_dim,
                    "sample_points": s.sample_points,
                    "torsion_free": is_torsion_free(&torsion),
                    "curvature_free": is_curvature_free(&curvature),
                })
            })
        }
    };
    Ok(match solved {
        Ok(result) => Outcome { status: "solved", exit: exit::OK, result },
        Err(ConnectError::NotConstantType { point, direction }) => Outcome {
            status: "not_constant_type",
            exit: exit::DISTINCT,
            result: json!({ "witness": { "point": point_to_json(&point), "direction": direction } }),
        },
        Err(ConnectError::NonRegular { point, kernel_dim }) => Outcome {
            status: "non_regular",
            exit: exit::INCONCLUSIVE,
            result: json!({ "witness": { "point": point_to_json(&point), "kernel_dim": kernel_dim } }),
        },
        Err(ConnectError::NoPolynomialSolution { max_degree }) => Outcome {
            status: "no_polynomial_solution",
            exit: exit::INCONCLUSIVE,
            result: json!({ "max_degree": max_degree, "hint": "rerun with --grid for pointwise solutions" }),
        },
        Err(e) => return Err(e.into()),
    })
}

fn split(ctx: &mut Ctx, path: &std::path::Path, conn: Option<&std::path::Path>) -> Result<Outcome, CliError> {
    let a = ctx.inputs.operator(path)?;
    let conn = match conn {
        Some(c) => ctx.inputs.connection(c)?,
        None => Connection::flat(a.dim()),
    };
    ctx.option("connection", json!(if conn.is_flat() { "flat" } else { "given" }));
    let ts = total_symbol(&a, &conn)?;
    let order = a.order();
    let parts: Vec<Value> = ts
        .parts
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let field = SymbolField::new(a.dim(), s.clone()).expect("tensor over the operator's base");
            json!({ "order": order - i, "symbol": symbol_field_to_json(&field) })
        })
        .collect();
    Ok(Outcome::ok(json!({ "order": order, "parts": parts })))
}

fn chart(a: &opinv_core::connect::DiffOperator, label: &str) -> Result<InvariantField, CliError> {
    if let Some(i) = label.strip_prefix('x').and_then(|s| s.parse::<usize>().ok()) {
        if i == 0 || i > a.dim() {
            return Err(CliError::Usage(format!("coordinate chart `{label}` out of range for dimension {}", a.dim())));
        }
        return Ok(InvariantField::custom(label, Poly::var(i - 1)));
    }
    let parsed: InvariantLabel = label.parse().map_err(|e: opinv_core::ParseError| CliError::Usage(e.to_string()))?;
    Ok(symbol_invariant_field(a, parsed)?)
}

fn model(ctx: &mut Ctx, path: &std::path::Path, labels: &[String]) -> Result<Outcome, CliError> {
    let a = ctx.inputs.operator(path)?;
    let Some(points) = ctx.grid() else {
        return Err(CliError::Usage("model needs --grid".into()));
    };
    ctx.option("charts", json!(labels));
    let charts = labels.iter().map(|l| chart(&a, l)).collect::<Result<Vec<_>, _>>()?;
    let surface = model_surface(&a, &charts, &points)?;
    Ok(Outcome::ok(surface_to_json(&surface)))
}

fn compare(ctx: &mut Ctx, a: &std::path::Path, b: &std::path::Path) -> Result<Outcome, CliError> {
    let sa = ctx.inputs.surface(a)?;
    let sb = ctx.inputs.surface(b)?;
    let tol = ctx.tol("model", DEFAULT_MODEL_TOL)?;
    let verdict = model_compare(&sa, &sb, tol)?;
    let status = verdict.status();
    Ok(match verdict {
        EquivalenceVerdict::ModelsCoincide { psi, omega_residual, max_deviation, compared } => Outcome {
            status,
            exit: exit::OK,
            result: json!({
                "omega_residual": omega_residual,
                "max_deviation": max_deviation,
                "compared": compared,
                "psi": psi.iter().map(|s| json!({
                    "x_a": point_to_json(&s.x_a),
                    "x_b": point_to_json(&s.x_b),
                    "y": point_to_json(&s.y),
                    "jacobian": matrix_to_json(&s.jacobian),
                })).collect::<Vec<_>>(),
            }),
        },
        EquivalenceVerdict::ModelsDistinct { witness } => Outcome {
            status,
            exit: exit::DISTINCT,
            result: json!({ "witness": match witness {
                Witness::Coefficient { y, alpha, a, b } => json!({
                    "kind": "coefficient", "y": y, "alpha": exponent_to_json(&alpha), "a": a, "b": b,
                }),
                Witness::LieCondition { x, residual } => json!({
                    "kind": "lie_condition", "x": point_to_json(&x), "residual": residual,
                }),
            }}),
        },
        EquivalenceVerdict::Inconclusive { reason } => {
            Outcome { status, exit: exit::INCONCLUSIVE, result: json!({ "reason": reason }) }
        }
    })
}
