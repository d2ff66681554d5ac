//! `verify-suite`: every module invariant on small fixtures, one verdict per check.

use serde_json::{json, Value};

use northcott_lab::curve::{endo_eval, geometric_torsion_count, torsion_test, Curve, EndoForm, Endomorphism, Point, TorsionVerdict, DEFAULT_NMAX};
use northcott_lab::dynamics::{decay_check, height_growth_check, orbit, preimages_double, BackChain, DEFAULT_ORBIT_BITS};
use northcott_lab::galois::{kernel_iso_check, kernel_test, trace_map, ExtensionSpec};
use northcott_lab::heights::{check_parallelogram_in, endo_height_check, gram_lower_bound, gram_spot_check, EndoVerdict, HeightContext};
use northcott_lab::nf::{sqrt_in_field, AlgNumber, Field, FieldSpec, SqrtBranch};
use northcott_lab::northcott::{default_conductors, enumerate_bounded, kab_min_k, kab_sides, mult_dep_test, qtr_family};
use rug::Rational;

use crate::commands::Outcome;
use crate::error::CliError;

type Check = Result<(bool, Value), CliError>;

fn parallelogram(tol: f64) -> Check {
    let c = Curve::over_q(0, -1, 1)?;
    let ctx = HeightContext::new(&c, tol);
    let p = c.point_q(1, 1)?;
    let mut worst = 0.0f64;
    let mut pass = true;
    for (i, j) in [(1, 1), (1, 2), (2, 3), (-1, 3)] {
        let r = check_parallelogram_in(&ctx, &c.mul(i, &p), &c.mul(j, &p))?;
        pass &= r.pass;
        worst = worst.max(r.residual);
    }
    Ok((pass, json!({"pairs": 4, "max_residual": worst})))
}

fn homogeneity(tol: f64) -> Check {
    let c = Curve::over_q(0, -1, 1)?;
    let p = c.point_q(1, 1)?;
    let mut pass = true;
    for m in 2..=6 {
        let r = endo_height_check(&Endomorphism::scalar(&c, m), &p, tol)?;
        pass &= r.verdict == EndoVerdict::Pass;
    }
    Ok((pass, json!({"multipliers": [2, 3, 4, 5, 6]})))
}

/// P = (4/3, (10/9)√3) on y² = x³ + x over Q(ζ₁₂), the image of (4, 10) on y² = x³ + 9x.
fn cm_point() -> Result<(Curve, Point), CliError> {
    let f = Field::new(FieldSpec::Cyclotomic { n: 12 });
    let c = Curve::from_rationals(&f, 0, 1, 0)?;
    let s3 = sqrt_in_field(&AlgNumber::from_int(&f, 3), SqrtBranch::Principal)?.expect("3 is a square in Q(zeta12)");
    let p = c.point(AlgNumber::from_rational(&f, (4, 3)), s3.scale(&Rational::from((10, 9))))?;
    Ok((c, p))
}

fn cm_scaling(tol: f64) -> Check {
    let (c, p) = cm_point()?;
    let mut rows = Vec::new();
    let mut pass = true;
    for form in [EndoForm::Cm { re: 1, im: 1 }, EndoForm::Scalar(3)] {
        let r = endo_height_check(&Endomorphism::new(&c, form)?, &p, tol)?;
        pass &= r.verdict == EndoVerdict::Pass;
        rows.push(json!({"map": form.to_string(), "degree": r.degree, "ratio": r.ratio.map(|e| e.value)}));
    }
    Ok((pass, json!(rows)))
}

fn torsion_zero(tol: f64) -> Check {
    let c = Curve::over_q(0, 1, 0)?;
    let t = c.point_q(0, 0)?;
    let ctx = HeightContext::new(&c, tol);
    let h = ctx.canonical(&t)?;
    let f = Field::new(FieldSpec::quadratic(10)?);
    let c10 = c.lift(&f)?;
    let p = c10.point(AlgNumber::from_int(&f, 2), AlgNumber::generator(&f))?;
    let verdict = torsion_test(&c10, &p, DEFAULT_NMAX);
    let pass = h.exact && h.value == 0.0 && verdict == TorsionVerdict::NonTorsionCertified;
    Ok((pass, json!({"torsion_height": h.value, "sqrt10_point": format!("{verdict:?}")})))
}

fn twist_kernel() -> Check {
    let ext = ExtensionSpec::quadratic(10)?;
    let f = ext.top().clone();
    let c = Curve::from_rationals(&f, 0, 1, 0)?;
    let p = c.point(AlgNumber::from_int(&f, 2), AlgNumber::generator(&f))?;
    let sample = [Point::Infinity, c.point_q(0, 0)?, p.clone(), p.neg(), c.double(&p), c.mul(3, &p)];
    let mut traces_zero = true;
    for q in &sample {
        traces_zero &= trace_map(&ext, &c, q)?.is_infinity();
    }
    let v = kernel_iso_check(&ext, &c, &AlgNumber::from_int(&f, 10), &sample)?;
    let e = Curve::over_q(0, -7, 10)?;
    let base_point = kernel_test(&ext, &e, &e.point_q(1, 2)?)?;
    Ok((traces_zero && v.pass && !base_point, json!({"sample": sample.len(), "pairs": v.pairs_checked, "traces_zero": traces_zero})))
}

fn family() -> Check {
    let (a, b) = (Rational::from(0), Rational::from(1));
    let k = kab_min_k(&a, &b)?;
    let (pl, pr) = kab_sides(&a, &b, k - 1);
    let rec = qtr_family(&a, &b, k, &default_conductors(8))?;
    let pass = k == 8 && pl <= pr && rec.distinct && rec.points.iter().all(|p| p.bound_ok && p.totally_positive);
    Ok((pass, json!({"k_min": k, "points": rec.points.len()})))
}

fn enumeration() -> Check {
    // every rational point of y² = x³ − x is 2-torsion, so any box returns exactly those
    let c = Curve::over_q(0, -1, 0)?;
    let r = enumerate_bounded(&c, &FieldSpec::Rational, 6f64.ln())?;
    let got: Vec<String> = r.points.iter().map(|p| p.point.to_string()).collect();
    let two = Endomorphism::scalar(&c, 2);
    let mut preperiodic = true;
    for p in &r.points {
        preperiodic &= orbit(&two, &p.point, 8, DEFAULT_ORBIT_BITS)?.is_preperiodic();
    }
    Ok((got == ["inf", "(-1,0)", "(0,0)", "(1,0)"] && preperiodic, json!({"points": got})))
}

fn torsion_counts() -> Check {
    let mut pass = true;
    let mut rows = Vec::new();
    for (a, b, c) in [(0, 1, 0), (0, -1, 0), (0, 0, 1)] {
        let e = Curve::over_q(a, b, c)?;
        let (n2, n3) = (geometric_torsion_count(&e, 2)?, geometric_torsion_count(&e, 3)?);
        pass &= n2 == 4 && n3 == 9;
        rows.push(json!({"curve": e.to_string(), "m2": n2, "m3": n3}));
    }
    Ok((pass, json!(rows)))
}

fn decay(tol: f64) -> Check {
    let e = Curve::over_q(0, -1, 1)?;
    let two = Endomorphism::scalar(&e, 2);
    let ctx = HeightContext::new(&e, tol);
    let q = e.point_q(1, 1)?;
    let chain = BackChain::from_points(&two, vec![e.mul(8, &q), e.mul(4, &q), e.mul(2, &q), q.clone()], &ctx)?;
    let v = decay_check(&two, &chain, tol)?;
    let halves_ok = preimages_double(&e, &e.double(&q))?.points.contains(&q);
    Ok((v.pass && halves_ok, json!({"steps": chain.len()})))
}

fn growth() -> Check {
    let (c, p) = cm_point()?;
    let sample: Vec<Point> = (1..=4).map(|m| c.mul(m, &p)).collect();
    let f = Endomorphism::new(&c, EndoForm::Cm { re: 1, im: 1 })?;
    let r = height_growth_check(&f, &sample, &sample, 3)?;
    let iota = Endomorphism::new(&c, EndoForm::Cm { re: 0, im: 1 })?;
    let ip = endo_eval(&iota, &p)?;
    Ok((r.pass, json!({"b_est": r.b_est, "qualifying": r.qualifying, "iota_on_curve": c.on_curve(&ip)?})))
}

fn gram(tol: f64) -> Check {
    let c = Curve::over_q(0, -7, 10)?;
    let ctx = HeightContext::new(&c, tol);
    let g = gram_lower_bound(&ctx, &[c.point_q(1, 2)?, c.point_q(2, 2)?])?;
    let spot = gram_spot_check(&ctx, &g, 1)?;
    Ok((g.independence_certified() && spot.all_pass, json!({"bound": g.min_eigenvalue_lower_bound, "combinations": spot.rows.len()})))
}

fn mult_dep() -> Check {
    let q = |v: i64| Rational::from(v);
    let pass = mult_dep_test(&q(4), &q(8))?.dependent && !mult_dep_test(&q(2), &q(3))?.dependent && mult_dep_test(&q(-1), &q(1))?.dependent;
    Ok((pass, Value::Null))
}

pub fn run(tol: f64) -> Result<Outcome, CliError> {
    let checks: Vec<(&str, Check)> = vec![
        ("parallelogram", parallelogram(tol)),
        ("homogeneity", homogeneity(tol)),
        ("endomorphism_scaling", cm_scaling(tol)),
        ("torsion_zero_height", torsion_zero(tol)),
        ("twist_kernel", twist_kernel()),
        ("bounded_family", family()),
        ("enumeration", enumeration()),
        ("torsion_counts", torsion_counts()),
        ("backward_decay", decay(tol)),
        ("height_growth", growth()),
        ("gram_bound", gram(tol)),
        ("mult_dep", mult_dep()),
    ];
    let mut rows = Vec::new();
    let mut all = true;
    for (name, c) in checks {
        let (pass, detail) = match c {
            Ok(v) => v,
            Err(e) => (false, json!({"error": e.to_string()})),
        };
        all &= pass;
        rows.push(json!({"check": name, "pass": pass, "detail": detail}));
    }
    let mut table = crate::report::Table::new(&["check", "pass"]);
    for r in &rows {
        table.push(vec![r["check"].as_str().unwrap_or_default().to_string(), r["pass"].to_string()]);
    }
    Ok(Outcome { result: json!({"checks": rows}), pass: Some(all), table: Some(table) })
}
