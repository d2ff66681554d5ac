use serde_json::{json, Value};

use northcott_lab::curve::{Curve, Endomorphism, Point};
use northcott_lab::dynamics::{back_chain, classify_preperiodic, decay_check, orbit, DEFAULT_ORBIT_BITS};
use northcott_lab::galois::{kernel_test, trace_map, transfer_inverse, twist_transfer, ExtensionSpec};
use northcott_lab::heights::{canonical_run, naive_height, EstimatorConfig, HeightContext};
use northcott_lab::literal::{parse_curve, parse_endo, parse_field, parse_point, parse_rational};
use northcott_lab::nf::{AlgNumber, FieldSpec, NfError};
use northcott_lab::northcott::{cc_points_demo, default_conductors, enumerate_bounded, kab_min_k, kab_sides, mult_dep_test, qtr_family};
use rug::Rational;

use crate::cli::*;
use crate::error::CliError;
use crate::report::{format_cell, Table};
use crate::suite;

/// Result payload, verdict and optional CSV table of one command.
pub struct Outcome {
    pub result: Value,
    pub pass: Option<bool>,
    pub table: Option<Table>,
}

fn flag_err(flag: &str) -> impl Fn(NfError) -> CliError + '_ {
    move |e| match e {
        NfError::Parse { .. } => CliError::Usage(format!("--{flag}: {e}")),
        other => CliError::from(other),
    }
}

fn curve_arg(s: &str) -> Result<Curve, CliError> {
    parse_curve(s).map_err(flag_err("curve"))
}

fn point_arg(s: &str, curve: &Curve) -> Result<Point, CliError> {
    parse_point(s, curve).map_err(flag_err("point"))
}

fn rational_arg(s: &str, flag: &str) -> Result<Rational, CliError> {
    parse_rational(s.trim(), 0).map_err(flag_err(flag))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("records serialize")
}

fn height_cmd(a: &PointArgs) -> Result<Outcome, CliError> {
    let curve = curve_arg(&a.curve)?;
    let p = point_arg(&a.point, &curve)?;
    let h = naive_height(&curve, &p)?;
    Ok(Outcome {
        result: json!({"point": p.to_string(), "h": h.value, "radius": h.radius, "exact": h.exact}),
        pass: None,
        table: None,
    })
}

fn canonical_cmd(a: &PointArgs, tol: f64) -> Result<Outcome, CliError> {
    let curve = curve_arg(&a.curve)?;
    let p = point_arg(&a.point, &curve)?;
    let run = canonical_run(&curve, &p, tol, &EstimatorConfig::default())?;
    Ok(Outcome {
        result: json!({
            "point": p.to_string(),
            "h_hat": to_value(&run.estimate),
            "doublings": run.doublings,
            "path": to_value(&run.path),
        }),
        pass: None,
        table: None,
    })
}

/// Twist parameter: the flag, or d of a quadratic top field.
fn twist_parameter(ext: &ExtensionSpec, d: Option<i64>) -> Option<AlgNumber> {
    let d = d.or(match ext.top().spec() {
        FieldSpec::Quadratic { d } => Some(*d),
        _ => None,
    })?;
    Some(AlgNumber::from_int(ext.top(), d))
}

fn trace_cmd(a: &TraceArgs) -> Result<Outcome, CliError> {
    let ext: ExtensionSpec = a.ext.parse()?;
    let curve = curve_arg(&a.curve)?.lift(ext.top())?;
    let p = point_arg(&a.point, &curve)?;
    let trace = trace_map(&ext, &curve, &p)?;
    let in_kernel = trace.is_infinity();
    let transfer = match (in_kernel && ext.degree() == 2, twist_parameter(&ext, a.d)) {
        (true, Some(d)) => {
            let img = twist_transfer(&ext, &curve, &d, &p)?;
            json!({"twist": img.twist.to_string(), "point": img.point.to_string()})
        }
        _ => Value::Null,
    };
    Ok(Outcome {
        result: json!({
            "input": p.to_string(),
            "extension": ext.to_string(),
            "trace": trace.to_string(),
            "in_kernel": in_kernel,
            "transfer": transfer,
        }),
        pass: None,
        table: None,
    })
}

fn transfer_cmd(a: &TransferArgs) -> Result<Outcome, CliError> {
    let ext = match &a.ext {
        Some(s) => s.parse()?,
        None => ExtensionSpec::quadratic(a.d)?,
    };
    let base = curve_arg(&a.curve)?;
    let curve = base.lift(ext.top())?;
    let d = AlgNumber::from_int(ext.top(), a.d);
    if a.inverse {
        let twist = base.twist(&AlgNumber::from_int(base.field(), a.d))?;
        let q = point_arg(&a.point, &twist)?;
        let p = transfer_inverse(&ext, &curve, &d, &q)?;
        let in_kernel = kernel_test(&ext, &curve, &p)?;
        return Ok(Outcome {
            result: json!({"input": q.to_string(), "d": a.d, "image": p.to_string(), "in_kernel": in_kernel}),
            pass: Some(in_kernel),
            table: None,
        });
    }
    let p = point_arg(&a.point, &curve)?;
    let img = twist_transfer(&ext, &curve, &d, &p)?;
    let back = transfer_inverse(&ext, &curve, &d, &img.point)?;
    let round_trip = back == p;
    Ok(Outcome {
        result: json!({
            "input": p.to_string(),
            "d": a.d,
            "twist": img.twist.to_string(),
            "image": img.point.to_string(),
            "round_trip": round_trip,
        }),
        pass: Some(round_trip),
        table: None,
    })
}

fn enumerate_cmd(a: &EnumerateArgs) -> Result<Outcome, CliError> {
    let curve = curve_arg(&a.curve)?;
    let field = parse_field(&a.field).map_err(flag_err("field"))?;
    let found = enumerate_bounded(&curve, &field, a.t)?;
    let mut table = Table::new(&["point", "x", "y", "h", "radius"]);
    for p in &found.points {
        let (x, y) = match &p.point {
            Point::Infinity => (String::new(), String::new()),
            Point::Affine { x, y } => (x.to_string(), y.to_string()),
        };
        table.push(vec![p.point.to_string(), x, y, format_cell(&json!(p.height.value)), format_cell(&json!(p.height.radius))]);
    }
    Ok(Outcome { result: to_value(&found), pass: None, table: Some(table) })
}

fn family_cmd(a: &FamilyArgs) -> Result<Outcome, CliError> {
    let (ra, rb) = (rational_arg(&a.a, "a")?, rational_arg(&a.b, "b")?);
    let rec = qtr_family(&ra, &rb, a.k, &default_conductors(a.n))?;
    let mut table = Table::new(&["n", "x_minpoly", "h", "bound_ok"]);
    for p in &rec.points {
        table.push(vec![p.conductor.to_string(), p.x_minpoly.to_string(), format_cell(&json!(p.height.value)), p.bound_ok.to_string()]);
    }
    let pass = rec.distinct && rec.points.iter().all(|p| p.bound_ok && p.totally_positive);
    Ok(Outcome { result: to_value(&rec), pass: Some(pass), table: Some(table) })
}

fn kab_cmd(a: &KabArgs) -> Result<Outcome, CliError> {
    let (ra, rb) = (rational_arg(&a.a, "a")?, rational_arg(&a.b, "b")?);
    let k = kab_min_k(&ra, &rb)?;
    let (lhs, rhs) = kab_sides(&ra, &rb, k);
    let (plhs, prhs) = kab_sides(&ra, &rb, k - 1);
    Ok(Outcome {
        result: json!({
            "k_min": k,
            "lhs": lhs.to_string(),
            "rhs": rhs.to_string(),
            "previous": {"k": k - 1, "lhs": plhs.to_string(), "rhs": prhs.to_string()},
        }),
        pass: None,
        table: None,
    })
}

fn orbit_cmd(a: &OrbitArgs) -> Result<Outcome, CliError> {
    let curve = curve_arg(&a.curve)?;
    let form = parse_endo(&a.map).map_err(flag_err("map"))?;
    let f = Endomorphism::new(&curve, form)?;
    let p = point_arg(&a.point, &curve)?;
    let rec = orbit(&f, &p, a.max, DEFAULT_ORBIT_BITS)?;
    let classification = if f.degree() >= 2 { to_value(&classify_preperiodic(&f, &p)?) } else { Value::Null };
    let mut table = Table::new(&["step", "point", "h", "radius"]);
    for (i, (q, h)) in rec.iterates.iter().zip(&rec.heights).enumerate() {
        table.push(vec![i.to_string(), q.to_string(), format_cell(&json!(h.value)), format_cell(&json!(h.radius))]);
    }
    let mut result = to_value(&rec);
    result["classification"] = classification;
    Ok(Outcome { result, pass: None, table: Some(table) })
}

fn back_chain_cmd(a: &BackChainArgs, tol: f64) -> Result<Outcome, CliError> {
    let curve = curve_arg(&a.curve)?;
    let p = point_arg(&a.point, &curve)?;
    let f = Endomorphism::scalar(&curve, 2);
    let ctx = HeightContext::new(&curve, tol);
    let chain = back_chain(&f, &p, a.depth, &ctx)?;
    let decay = decay_check(&f, &chain, tol)?;
    let mut table = Table::new(&["j", "point", "h_hat", "radius", "expected", "pass"]);
    for (q, row) in chain.chain.iter().zip(&decay.rows) {
        table.push(vec![
            row.index.to_string(),
            q.to_string(),
            format_cell(&json!(row.height.value)),
            format_cell(&json!(row.height.radius)),
            format_cell(&json!(row.expected)),
            row.pass.to_string(),
        ]);
    }
    Ok(Outcome { result: json!({"chain": to_value(&chain), "decay": to_value(&decay)}), pass: Some(decay.pass), table: Some(table) })
}

fn mult_dep_cmd(a: &MultDepArgs) -> Result<Outcome, CliError> {
    let (x, y) = (rational_arg(&a.x, "x")?, rational_arg(&a.y, "y")?);
    let r = mult_dep_test(&x, &y)?;
    Ok(Outcome { result: json!({"x": x.to_string(), "y": y.to_string(), "dependent": r.dependent, "witness": r.witness}), pass: None, table: None })
}

fn cc_cmd(a: &CcArgs) -> Result<Outcome, CliError> {
    let rows = cc_points_demo(&a.primes)?;
    let mut table = Table::new(&["p", "x", "y", "field", "on_curve", "h"]);
    for r in &rows {
        table.push(vec![
            r.p.to_string(),
            r.x.to_string(),
            r.y.to_string(),
            r.field.to_string(),
            r.on_curve.to_string(),
            format_cell(&json!(r.height.value)),
        ]);
    }
    let pass = rows.iter().all(|r| r.on_curve);
    Ok(Outcome { result: json!({"points": to_value(&rows)}), pass: Some(pass), table: Some(table) })
}

pub fn run(command: &Command, global: &GlobalOpts) -> Result<Outcome, CliError> {
    if !(global.tol.is_finite() && global.tol > 0.0) {
        return Err(CliError::Usage(format!("--tol must be positive, got {}", global.tol)));
    }
    match command {
        Command::Height(a) => height_cmd(a),
        Command::CanonicalHeight(a) => canonical_cmd(a, global.tol),
        Command::Trace(a) => trace_cmd(a),
        Command::TwistTransfer(a) => transfer_cmd(a),
        Command::Enumerate(a) => enumerate_cmd(a),
        Command::QtrFamily(a) => family_cmd(a),
        Command::Kab(a) => kab_cmd(a),
        Command::Orbit(a) => orbit_cmd(a),
        Command::BackChain(a) => back_chain_cmd(a, global.tol),
        Command::VerifySuite => suite::run(global.tol),
        Command::MultDep(a) => mult_dep_cmd(a),
        Command::CcDemo(a) => cc_cmd(a),
    }
}
