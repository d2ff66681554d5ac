//! Acceptance suite: one PASS/FAIL line per criterion, with wall-clock limits.
//!
//! Runs as a plain binary (`harness = false`) so the lines always reach the terminal.

use std::error::Error;
use std::f64::consts::{LN_2, PI};
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rug::{Integer, Rational};

use northcott_lab::curve::{
    endo_eval, geometric_torsion_count, torsion_points, torsion_test, Curve, EndoForm, Endomorphism, Point, TorsionVerdict, DEFAULT_NMAX,
};
use northcott_lab::dynamics::{decay_check, height_growth_check, preimages_double, BackChain};
use northcott_lab::galois::{kernel_iso_check, trace_map, transfer_inverse, twist_transfer, ExtensionSpec};
use northcott_lab::heights::{canonical_height, check_parallelogram_in, endo_height_check, gram_lower_bound, EndoVerdict, HeightContext};
use northcott_lab::nf::{sqrt_in_field, AlgNumber, Field, FieldSpec, SqrtBranch};
use northcott_lab::northcott::{default_conductors, enumerate_bounded, kab_min_k, kab_sides, qtr_family};

/// Target radius handed to the canonical-height estimator.
const TOL: f64 = 1e-6;
/// Doublings used by the exact x-only oracle for ĥ over Q.
const ORACLE_DOUBLINGS: u32 = 8;
/// Widening applied to the oracle's observed doubling defect.
const ORACLE_SAFETY: f64 = 2.0;
/// Slack for float evaluations of 2cos(2πj/n).
const COS_TOL: f64 = 1e-9;
/// Roots of a division polynomial closer than this count as repeated.
const ROOT_SEPARATION: f64 = 1e-6;
const PARALLELOGRAM_PAIRS: usize = 100;
const RNG_SEED: u64 = 0x6e6f_7274_6863;

type Outcome = Result<(bool, String), Box<dyn Error>>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

// ---------------------------------------------------------------- fixtures

/// Curves over Q with known independent points: rank 1, rank 2, rank 2.
fn q_fixtures() -> Vec<(Curve, Vec<Point>)> {
    let e1 = Curve::over_q(0, -1, 1).unwrap();
    let e2 = Curve::over_q(0, -7, 10).unwrap();
    let e3 = Curve::over_q(0, 0, 17).unwrap();
    vec![
        (e1.clone(), vec![e1.point_q(1, 1).unwrap()]),
        (e2.clone(), vec![e2.point_q(1, 2).unwrap(), e2.point_q(2, 2).unwrap()]),
        (e3.clone(), vec![e3.point_q(-2, 3).unwrap(), e3.point_q(-1, 4).unwrap()]),
    ]
}

fn combine(curve: &Curve, gens: &[Point], k: &[i64]) -> Point {
    gens.iter().zip(k).fold(Point::Infinity, |acc, (g, &m)| curve.add(&acc, &curve.mul(m, g)))
}

/// P = (4/3, (10/9)√3) on y² = x³ + x over Q(ζ₁₂).
fn cm_fixture() -> (Curve, Point) {
    let f = Field::new(FieldSpec::cyclotomic(12).unwrap());
    let c = Curve::from_rationals(&f, 0, 1, 0).unwrap();
    let s3 = sqrt_in_field(&AlgNumber::from_int(&f, 3), SqrtBranch::Principal).unwrap().unwrap();
    let p = c.point(AlgNumber::from_rational(&f, (4, 3)), s3.scale(&Rational::from((10, 9)))).unwrap();
    (c, p)
}

/// (m + n·ι)P.
fn gaussian_multiple(c: &Curve, p: &Point, m: i64, n: i64) -> Point {
    let iota = Endomorphism::new(c, EndoForm::Cm { re: 0, im: 1 }).unwrap();
    let ip = endo_eval(&iota, p).unwrap();
    c.add(&c.mul(m, p), &c.mul(n, &ip))
}

fn sqrt10_fixture() -> (Curve, Point) {
    let f = Field::new(FieldSpec::quadratic(10).unwrap());
    let c = Curve::from_rationals(&f, 0, 1, 0).unwrap();
    let p = c.point(AlgNumber::from_int(&f, 2), AlgNumber::generator(&f)).unwrap();
    (c, p)
}

// ---------------------------------------------------------------- oracles

fn ln_integer(n: &Integer) -> f64 {
    let (m, e) = n.to_f64_exp();
    m.abs().ln() + e as f64 * LN_2
}

fn log_height(x: &Rational) -> f64 {
    let num = Integer::from(x.numer().abs_ref());
    ln_integer(if num > *x.denom() { &num } else { x.denom() })
}

/// Naive heights h(x(2ᵏP)) for k = 0..=ORACLE_DOUBLINGS, with exact x-only doubling
/// x ↦ f'(x)²/(4f(x)) − a − 2x.
fn oracle_orbit(coeffs: &[Rational; 3], x0: &Rational) -> Vec<f64> {
    let [a, b, c] = coeffs;
    let mut x = x0.clone();
    let mut hs = vec![log_height(&x)];
    for _ in 0..ORACLE_DOUBLINGS {
        let x2 = Rational::from(&x * &x);
        let f = Rational::from(&x2 * &x) + Rational::from(a * &x2) + Rational::from(b * &x) + c;
        let df = Rational::from(3 * x2) + Rational::from(2 * Rational::from(a * &x)) + b;
        assert!(f != 0, "oracle reached a 2-torsion point");
        x = Rational::from(&df * &df) / (4 * f) - a - Rational::from(2 * &x);
        hs.push(log_height(&x));
    }
    hs
}

fn max_defect(hs: &[f64]) -> f64 {
    hs.windows(2).map(|w| (w[1] - 4.0 * w[0]).abs()).fold(0.0, f64::max)
}

/// ĥ(P) over Q as h(x(2ⁿP))/4ⁿ. The doubling defect |h(2Q) − 4h(Q)| is bounded by a
/// constant of the curve, so it is observed on the orbits of P and of every reference
/// point on the same curve, then widened by ORACLE_SAFETY.
fn oracle_canonical(coeffs: &[Rational; 3], x0: &Rational, reference: &[Rational]) -> (f64, f64) {
    let hs = oracle_orbit(coeffs, x0);
    let c_obs = reference.iter().map(|r| max_defect(&oracle_orbit(coeffs, r))).fold(max_defect(&hs), f64::max);
    let scale = 4f64.powi(ORACLE_DOUBLINGS as i32);
    (hs[ORACLE_DOUBLINGS as usize] / scale, ORACLE_SAFETY * c_obs / (3.0 * scale))
}

fn agrees_with_oracle(ctx: &HeightContext, p: &Point, reference: &[Point]) -> Result<bool, Box<dyn Error>> {
    let coeffs = ctx.curve().rational_coeffs().ok_or("oracle needs a curve over Q")?;
    let rational_x = |q: &Point| q.x().and_then(|x| x.as_rational()).cloned();
    let x = rational_x(p).ok_or("oracle needs an affine rational point")?;
    let refs: Vec<Rational> = reference.iter().filter_map(rational_x).collect();
    let (v, r) = oracle_canonical(&coeffs, &x, &refs);
    let est = ctx.canonical(p)?;
    Ok((est.value - v).abs() <= est.radius + r)
}

fn poly_roots(coeffs_low_first: &[f64]) -> Vec<(f64, f64)> {
    let n = coeffs_low_first.len() - 1;
    let lead = coeffs_low_first[n];
    let m = DMatrix::from_fn(n, n, |i, j| {
        if i == 0 {
            -coeffs_low_first[n - 1 - j] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    m.complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect()
}

fn separated(roots: &[(f64, f64)]) -> bool {
    roots.iter().enumerate().all(|(i, r)| roots[i + 1..].iter().all(|s| (r.0 - s.0).hypot(r.1 - s.1) > ROOT_SEPARATION))
}

fn eval_complex(coeffs_low_first: &[f64], z: (f64, f64)) -> (f64, f64) {
    coeffs_low_first.iter().rev().fold((0.0, 0.0), |acc, &c| (acc.0 * z.0 - acc.1 * z.1 + c, acc.0 * z.1 + acc.1 * z.0))
}

/// |E[m](Q̄)| from companion-matrix roots of ψ₂ and ψ₃ for y² = x³ + ax² + bx + c.
fn oracle_torsion_count(a: f64, b: f64, c: f64, m: u32) -> Option<u64> {
    let cubic = [c, b, a, 1.0];
    let cubic_roots = poly_roots(&cubic);
    match m {
        2 => separated(&cubic_roots).then_some(1 + cubic_roots.len() as u64),
        3 => {
            let psi3 = [4.0 * a * c - b * b, 12.0 * c, 6.0 * b, 4.0 * a, 3.0];
            let roots = poly_roots(&psi3);
            let off_cubic = roots.iter().all(|&z| {
                let v = eval_complex(&cubic, z);
                v.0.hypot(v.1) > ROOT_SEPARATION
            });
            (separated(&roots) && off_cubic).then_some(1 + 2 * roots.len() as u64)
        }
        _ => None,
    }
}

/// Rational points with max(|p|, q) ≤ h on y² = x³ + bx, by direct search, sorted by
/// (max(|p|,q), x, y).
fn oracle_enumerate(b: i64, h: i64) -> Vec<String> {
    let mut found: Vec<(i64, Rational, Rational)> = Vec::new();
    for q in 1..=h {
        for p in -h..=h {
            if Integer::from(p).gcd(&Integer::from(q)) != 1 {
                continue;
            }
            let x = Rational::from((p, q));
            let v = Rational::from(&x * &x) * &x + Rational::from(b * &x);
            let mut ys = Vec::new();
            if v == 0 {
                ys.push(Rational::new());
            } else if v > 0 && v.numer().is_perfect_square() && v.denom().is_perfect_square() {
                let y = Rational::from((v.numer().clone().sqrt(), v.denom().clone().sqrt()));
                ys.push(Rational::from(-&y));
                ys.push(y);
            }
            for y in ys {
                found.push((p.abs().max(q), x.clone(), y));
            }
        }
    }
    found.sort();
    std::iter::once("inf".to_string()).chain(found.into_iter().map(|(_, x, y)| format!("({x},{y})"))).collect()
}

// ---------------------------------------------------------------- criteria

fn c1_parallelogram() -> Outcome {
    let fixtures = q_fixtures();
    let ctxs: Vec<HeightContext> = fixtures.iter().map(|(c, _)| HeightContext::new(c, TOL)).collect();
    let mut rng = StdRng::seed_from_u64(RNG_SEED);
    let mut pass = true;
    let mut worst = 0.0f64;
    for i in 0..PARALLELOGRAM_PAIRS {
        let (c, gens) = &fixtures[i % fixtures.len()];
        let mut draw = || combine(c, gens, &gens.iter().map(|_| rng.gen_range(-3..=3)).collect::<Vec<_>>());
        let (p, q) = (draw(), draw());
        let r = check_parallelogram_in(&ctxs[i % fixtures.len()], &p, &q)?;
        pass &= r.pass;
        worst = worst.max(r.residual);
    }
    let mut oracle_ok = true;
    for ((_, gens), ctx) in fixtures.iter().zip(&ctxs) {
        for g in gens {
            oracle_ok &= agrees_with_oracle(ctx, g, gens)?;
        }
    }
    Ok((pass && oracle_ok, format!("{PARALLELOGRAM_PAIRS} pairs, max residual {worst:.3e}, generators match doubling oracle: {oracle_ok}")))
}

fn homogeneity_samples() -> Vec<(usize, Point)> {
    let fx = q_fixtures();
    let mut out = Vec::new();
    let picks: [&[&[i64]]; 3] = [
        &[&[1], &[2], &[3], &[5]],
        &[&[1, 0], &[0, 1], &[1, 1], &[1, -1], &[2, 1], &[1, 2], &[2, -1], &[3, 0]],
        &[&[1, 0], &[0, 1], &[1, 1], &[1, -1], &[2, 1], &[1, 2], &[1, -2], &[0, 3]],
    ];
    for (i, ks) in picks.iter().enumerate() {
        for k in ks.iter() {
            out.push((i, combine(&fx[i].0, &fx[i].1, k)));
        }
    }
    out
}

fn c2_homogeneity() -> Outcome {
    let fx = q_fixtures();
    let ctxs: Vec<HeightContext> = fx.iter().map(|(c, _)| HeightContext::new(c, TOL)).collect();
    let samples = homogeneity_samples();
    let (mut non_torsion, mut oracle, mut ratios, mut checks) = (0, 0, 0, 0);
    for (i, p) in &samples {
        let (c, ctx) = (&fx[*i].0, &ctxs[*i]);
        non_torsion += usize::from(torsion_test(c, p, DEFAULT_NMAX) == TorsionVerdict::NonTorsionCertified);
        let same_curve: Vec<Point> = samples.iter().filter(|(j, _)| j == i).map(|(_, q)| q.clone()).collect();
        oracle += usize::from(agrees_with_oracle(ctx, p, &same_curve)?);
        let h = ctx.canonical(p)?;
        for m in -6i64..=6 {
            let mp = c.mul(m, p);
            let hm = ctx.canonical(&mp)?;
            let ok = if m == 0 {
                mp.is_infinity() && hm.exact && hm.value == 0.0
            } else {
                hm.ratio(&h).is_some_and(|r| r.contains((m * m) as f64))
            };
            ratios += usize::from(ok);
            checks += 1;
        }
    }
    let n = samples.len();
    let pass = n == 20 && non_torsion == n && oracle == n && ratios == checks;
    Ok((pass, format!("{n} points: {non_torsion} certified non-torsion, {oracle} match doubling oracle, {ratios}/{checks} multipliers in range")))
}

const CM_SAMPLE: [(i64, i64); 10] = [(1, 0), (0, 1), (1, 1), (1, -1), (2, 0), (2, 1), (1, 2), (2, -1), (3, 0), (2, 2)];

fn c3_endomorphisms() -> Outcome {
    let (c, p) = cm_fixture();
    let one_plus_i = Endomorphism::new(&c, EndoForm::Cm { re: 1, im: 1 })?;
    let three = Endomorphism::scalar(&c, 3);
    let ctx = HeightContext::new(&c, TOL);
    let hp = ctx.canonical(&p)?;
    let (mut norm_ok, mut maps_ok, mut worst) = (0, 0, 0.0f64);
    for (m, n) in CM_SAMPLE {
        let q = gaussian_multiple(&c, &p, m, n);
        // ĥ((m + nι)P) = (m² + n²)ĥ(P)
        norm_ok += usize::from(ctx.canonical(&q)?.ratio(&hp).is_some_and(|r| r.contains((m * m + n * n) as f64)));
        for (f, deg) in [(&one_plus_i, 2.0), (&three, 9.0)] {
            let r = endo_height_check(f, &q, TOL)?;
            maps_ok += usize::from(r.verdict == EndoVerdict::Pass);
            if let Some(ratio) = r.ratio {
                worst = worst.max((ratio.value - deg).abs());
            }
        }
    }
    let n = CM_SAMPLE.len();
    let pass = norm_ok == n && maps_ok == 2 * n;
    Ok((pass, format!("{n} samples over Q(zeta12): {norm_ok}/{n} norm ratios, {maps_ok}/{} map ratios, max |ratio - deg| {worst:.3e}", 2 * n)))
}

fn psi3(c: &Curve, x: &AlgNumber) -> AlgNumber {
    let f = x.field();
    let k = |v: i64| AlgNumber::from_int(f, v);
    let (a, b, cc) = (c.a(), c.b(), c.c());
    let x2 = x * x;
    let terms = [
        &k(3) * &(&x2 * &x2),
        &(&k(4) * a) * &(&x2 * x),
        &(&k(6) * b) * &x2,
        &(&k(12) * cc) * x,
        &(&k(4) * a) * cc,
    ];
    let sum = terms.iter().fold(AlgNumber::zero(f), |acc, t| &acc + t);
    &sum - &(b * b)
}

fn c4_torsion_zero() -> Outcome {
    let fields = [Field::rational(), Field::new(FieldSpec::cyclotomic(12)?)];
    let mut pass = true;
    let mut summary = Vec::new();
    for (a, b, cc) in [(0, 1, 0), (0, -1, 0), (0, 0, 1)] {
        for field in &fields {
            let curve = Curve::over_q(a, b, cc)?.lift(field)?;
            let ctx = HeightContext::new(&curve, TOL);
            for m in [2u32, 3] {
                let ts = torsion_points(&curve, m, field)?;
                pass &= ts.complete;
                for p in &ts.points {
                    let h = ctx.canonical(p)?;
                    pass &= h.exact && h.value == 0.0;
                    if let Point::Affine { x, y } = p {
                        pass &= if m == 2 { y.is_zero() && curve.rhs(x).is_zero() } else { psi3(&curve, x).is_zero() };
                    }
                }
                summary.push(ts.points.len().to_string());
            }
        }
    }
    // over Q: {O,(0,0)}, {O}, {O,(±1,0),(0,0)}, {O}, {O,(−1,0)}, {O,(0,±1)}
    pass &= summary[0] == "2" && summary[1] == "1" && summary[4] == "4" && summary[5] == "1" && summary[8] == "2" && summary[9] == "3";
    let (c, p) = sqrt10_fixture();
    let h = canonical_height(&c, &p, TOL)?;
    pass &= h.lower() > 0.0;
    Ok((pass, format!("torsion set sizes (Q, Q(zeta12)) per curve and m: [{}]; h(2,sqrt10) >= {:.6}", summary.join(","), h.lower())))
}

fn c5_twist_kernel() -> Outcome {
    let ext = ExtensionSpec::quadratic(10)?;
    let (c, p) = sqrt10_fixture();
    let d = AlgNumber::from_int(ext.top(), 10);
    let sample = [Point::Infinity, c.point_q(0, 0)?, p.clone(), p.neg(), c.double(&p), c.mul(3, &p)];
    let mut pass = true;
    for q in &sample {
        pass &= trace_map(&ext, &c, q)?.is_infinity();
        let img = twist_transfer(&ext, &c, &d, q)?;
        pass &= transfer_inverse(&ext, &c, &d, &img.point)? == *q;
        // image lies on y² = x³ + 100x, checked in Q
        if let Point::Affine { x, y } = &img.point {
            let (x, y) = (x.as_rational().ok_or("image not rational")?, y.as_rational().ok_or("image not rational")?);
            pass &= Rational::from(y * y) == Rational::from(x * x) * x + Rational::from(100 * x);
        }
    }
    let img = twist_transfer(&ext, &c, &d, &p)?;
    pass &= img.point.to_string() == "(20,100)";
    let v = kernel_iso_check(&ext, &c, &d, &sample)?;
    pass &= v.pass && v.injective && v.homomorphism;
    Ok((pass, format!("{} points, {} pairs, (2,sqrt10) -> {}", sample.len(), v.pairs_checked, img.point)))
}

fn kab_holds(a: i64, b: i64, k: i64) -> bool {
    k * k * k + k * a + b > 8 + 12 * k + 2 * (3 * k * k + a.abs())
}

fn c6_family() -> Outcome {
    let (a, b) = (Rational::from(0), Rational::from(1));
    let k = kab_min_k(&a, &b)?;
    let oracle_k = (0..).find(|&k| kab_holds(0, 1, k)).unwrap();
    let (pl, pr) = kab_sides(&a, &b, k - 1);
    let mut pass = k == 8 && oracle_k == 8 && pl <= pr;
    let conductors = default_conductors(50);
    let rec = qtr_family(&a, &b, 8, &conductors)?;
    pass &= rec.points.len() == 50 && rec.distinct;
    let mut worst = 0.0f64;
    for fp in &rec.points {
        let n = fp.conductor;
        let half = (n - 1) / 2;
        pass &= fp.bound_ok && fp.totally_positive && fp.x_minpoly.degree() == half as usize;
        let xs: Vec<f64> = (1..=half).map(|j| 2.0 * (2.0 * PI * j as f64 / n as f64).cos()).collect();
        let h = xs.iter().map(|x| x.abs().max(1.0).ln()).sum::<f64>() / half as f64;
        pass &= h <= LN_2 + COS_TOL && (fp.height.value - h).abs() <= fp.height.radius + COS_TOL;
        // y² = (x + 8)³ + 1 at every real conjugate
        pass &= xs.iter().all(|x| (x + 8.0).powi(3) + 1.0 > COS_TOL);
        worst = worst.max(fp.height.upper());
    }
    Ok((pass, format!("k_min = {k}, {} distinct points, max h(x) {worst:.6} <= log 2", rec.points.len())))
}

fn c7_enumeration() -> Outcome {
    let t = 6f64.ln();
    let mut pass = true;
    let mut counts = Vec::new();
    for b in [1i64, -1] {
        let c = Curve::over_q(0, b, 0)?;
        let lib: Vec<String> = enumerate_bounded(&c, &FieldSpec::Rational, t)?.points.iter().map(|p| p.point.to_string()).collect();
        let oracle = oracle_enumerate(b, 6);
        pass &= lib.join("\n") == oracle.join("\n");
        counts.push(lib.len());
    }
    Ok((pass, format!("T = log 6: {} and {} points, identical to brute force", counts[0], counts[1])))
}

fn c8_torsion_counts() -> Outcome {
    let mut pass = true;
    let mut rows = Vec::new();
    for (a, b, c) in [(0, 1, 0), (0, -1, 0), (0, 0, 1)] {
        let e = Curve::over_q(a, b, c)?;
        for m in [2u32, 3] {
            let n = geometric_torsion_count(&e, m)?;
            pass &= n == u64::from(m * m) && oracle_torsion_count(a as f64, b as f64, c as f64, m) == Some(n);
            rows.push(n.to_string());
        }
    }
    Ok((pass, format!("counts [{}]", rows.join(","))))
}

fn c9_decay() -> Outcome {
    let mut fixtures: Vec<(Curve, Point, bool)> = q_fixtures().into_iter().map(|(c, g)| (c, g[0].clone(), true)).collect();
    let (c10, p10) = sqrt10_fixture();
    fixtures.push((c10, p10, false));
    let mut pass = true;
    let mut worst = 0.0f64;
    for (e, q, over_q) in &fixtures {
        let two = Endomorphism::scalar(e, 2);
        let ctx = HeightContext::new(e, TOL);
        let chain = BackChain::from_points(&two, vec![e.mul(8, q), e.mul(4, q), e.mul(2, q), q.clone()], &ctx)?;
        let v = decay_check(&two, &chain, TOL)?;
        pass &= v.pass;
        for row in v.rows.iter().skip(1) {
            let r = row.step_ratio.ok_or("missing step ratio")?;
            pass &= r.contains(0.25);
            worst = worst.max((r.value - 0.25).abs());
        }
        if *over_q {
            pass &= preimages_double(e, &e.double(q))?.points.contains(q);
        }
    }
    Ok((pass, format!("{} chains of length 4, max |ratio - 1/4| {worst:.3e}", fixtures.len())))
}

fn c10_growth() -> Outcome {
    let (c, p) = cm_fixture();
    let mut gauss: Vec<(i64, i64)> = (-4i64..=4).flat_map(|m| (-4i64..=4).map(move |n| (m, n))).filter(|&(m, n)| (m, n) != (0, 0)).collect();
    gauss.sort_by_key(|&(m, n)| (m * m + n * n, m, n));
    let calibration: Vec<Point> = gauss[..30].iter().map(|&(m, n)| gaussian_multiple(&c, &p, m, n)).collect();
    let mut pass = true;
    let mut lines = Vec::new();
    let mut reports = Vec::new();
    for form in [EndoForm::Cm { re: 1, im: 1 }, EndoForm::Scalar(2)] {
        let f = Endomorphism::new(&c, form)?;
        let r = height_growth_check(&f, &calibration, &calibration, 3)?;
        pass &= r.pass && r.calibration_size == 30;
        lines.push(format!("{form}: g = {}, B_est = {:.4}, {} qualifying", r.g, r.b_est, r.qualifying));
        reports.push(serde_json::to_value(&r)?);
    }
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("growth_report.json");
    std::fs::write(&path, serde_json::to_string_pretty(&reports)? + "\n")?;
    Ok((pass, format!("{}; report {}", lines.join("; "), path.display())))
}

fn c11_gram() -> Outcome {
    let c = Curve::over_q(0, -7, 10)?;
    let ctx = HeightContext::new(&c, TOL);
    let gens = [c.point_q(1, 2)?, c.point_q(2, 2)?];
    let g = gram_lower_bound(&ctx, &gens)?;
    let bound = g.min_eigenvalue_lower_bound;
    let mut pass = g.independence_certified();
    let mut combos = 0;
    for k1 in -3i64..=3 {
        for k2 in -3i64..=3 {
            let h = ctx.canonical(&combine(&c, &gens, &[k1, k2]))?;
            let kmax2 = (k1 * k1).max(k2 * k2) as f64;
            pass &= h.lower() >= bound * kmax2;
            // bilinearity: ĥ(k₁P₁ + k₂P₂) = kᵀGk
            let k = [k1 as f64, k2 as f64];
            let (mut form, mut rad) = (0.0, h.radius);
            for i in 0..2 {
                for j in 0..2 {
                    form += k[i] * k[j] * g.matrix[i][j].value;
                    rad += (k[i] * k[j]).abs() * g.matrix[i][j].radius;
                }
            }
            pass &= (h.value - form).abs() <= rad;
            combos += 1;
        }
    }
    Ok((pass && combos == 49, format!("c = {bound:.6}, {combos} combinations")))
}

fn main() {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { id: 1, name: "parallelogram law", limit: secs(60), run: c1_parallelogram },
        Criterion { id: 2, name: "homogeneity", limit: secs(60), run: c2_homogeneity },
        Criterion { id: 3, name: "endomorphism scaling", limit: secs(120), run: c3_endomorphisms },
        Criterion { id: 4, name: "torsion iff zero height", limit: secs(30), run: c4_torsion_zero },
        Criterion { id: 5, name: "twist-kernel isomorphism", limit: secs(10), run: c5_twist_kernel },
        Criterion { id: 6, name: "bounded-height family", limit: secs(60), run: c6_family },
        Criterion { id: 7, name: "enumeration oracle", limit: secs(30), run: c7_enumeration },
        Criterion { id: 8, name: "m-torsion counts", limit: secs(10), run: c8_torsion_counts },
        Criterion { id: 9, name: "backward-orbit decay", limit: secs(60), run: c9_decay },
        Criterion { id: 10, name: "height growth", limit: secs(120), run: c10_growth },
        Criterion { id: 11, name: "Gram lower bound", limit: secs(120), run: c11_gram },
    ];
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok((ok, detail)) => (ok, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let in_time = elapsed <= c.limit;
        let pass = ok && in_time;
        failures += usize::from(!pass);
        let timing = format!("{:.2} s of {} s", elapsed.as_secs_f64(), c.limit.as_secs());
        println!("{} criterion {:>2} {:<26} [{timing}{}] {detail}", if pass { "PASS" } else { "FAIL" }, c.id, c.name, if in_time { "" } else { ", over limit" });
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
