//! Doubling and CM dynamics on points: forward orbits with exact cycle detection,
//! preperiodic classification through torsion, rational halving and backward chains, and
//! the height relations along them.

use rayon::prelude::*;
use rug::Rational;
use serde::Serialize;
use thiserror::Error;

use crate::curve::{endo_eval, torsion_test, Curve, CurveError, EndoForm, Endomorphism, Point, TorsionVerdict, DEFAULT_NMAX};
use crate::estimate::{ulp_slack, HeightEstimate};
use crate::heights::{naive_height, HeightContext, HeightError};
use crate::nf::roots::small_factors;
use crate::nf::{qpoly, sqrt_rational, AlgNumber, NfError};
use crate::serde_fmt;

#[derive(Debug, Error, PartialEq)]
pub enum DynamicsError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Height(#[from] HeightError),
    #[error(transparent)]
    Nf(#[from] NfError),
    #[error("{0} has degree {1}; the classification needs degree at least 2")]
    DegreeTooSmall(EndoForm, u64),
    #[error("backward steps are only available for [2] on curves over Q, not {0}")]
    UnsupportedMap(String),
    #[error("{0} is not a rational point")]
    NotRational(String),
    #[error("f(Q{index}) differs from Q{prev}", prev = .index - 1)]
    BrokenChain { index: usize },
    #[error("calibration sample is empty")]
    EmptyCalibration,
}

/// Default cap on coordinate size while iterating forward.
pub const DEFAULT_ORBIT_BITS: u32 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrbitOutcome {
    /// f(last iterate) = iterates[entry]; the cycle has `period` points.
    Cycle { entry: usize, period: usize },
    /// No repeat before the iteration or coordinate-size budget ran out.
    Truncated { by_size: bool },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitRecord {
    pub map: EndoForm,
    #[serde(serialize_with = "serde_fmt::display_seq")]
    pub iterates: Vec<Point>,
    /// Naive heights h(x) of the iterates.
    pub heights: Vec<HeightEstimate>,
    pub outcome: OrbitOutcome,
    /// Each height interval lies strictly above the previous one.
    pub heights_increasing: bool,
}

impl OrbitRecord {
    pub fn start(&self) -> &Point {
        &self.iterates[0]
    }

    pub fn is_preperiodic(&self) -> bool {
        matches!(self.outcome, OrbitOutcome::Cycle { .. })
    }
}

fn point_bits(p: &Point) -> u32 {
    match p {
        Point::Infinity => 0,
        Point::Affine { x, y } => x.max_bits().max(y.max_bits()),
    }
}

/// P, f(P), f(f(P)), … until an exact repeat, `max_iter` applications of f, or coordinates
/// beyond `max_bits`.
pub fn orbit(f: &Endomorphism, p: &Point, max_iter: usize, max_bits: u32) -> Result<OrbitRecord, DynamicsError> {
    let curve = f.curve();
    let mut iterates = vec![p.clone()];
    let mut outcome = OrbitOutcome::Truncated { by_size: false };
    for _ in 0..max_iter {
        let last = iterates.last().unwrap();
        if point_bits(last) > max_bits {
            outcome = OrbitOutcome::Truncated { by_size: true };
            break;
        }
        let next = endo_eval(f, last)?;
        if let Some(entry) = iterates.iter().position(|q| *q == next) {
            outcome = OrbitOutcome::Cycle { entry, period: iterates.len() - entry };
            break;
        }
        iterates.push(next);
    }
    let heights: Vec<HeightEstimate> = iterates.iter().map(|q| naive_height(curve, q)).collect::<Result<_, _>>()?;
    let heights_increasing = heights.windows(2).all(|w| w[1].lower() > w[0].upper());
    Ok(OrbitRecord { map: f.form(), iterates, heights, outcome, heights_increasing })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Preperiodicity {
    Preperiodic,
    Wandering,
    Unknown,
}

/// For deg f ≥ 2, ĥ(f(P)) = deg f · ĥ(P), so P is preperiodic exactly when ĥ(P) = 0, i.e.
/// when P is torsion.
pub fn classify_preperiodic(f: &Endomorphism, p: &Point) -> Result<Preperiodicity, DynamicsError> {
    if f.degree() < 2 {
        return Err(DynamicsError::DegreeTooSmall(f.form(), f.degree()));
    }
    if !f.curve().on_curve(p)? {
        return Err(CurveError::NotOnCurve(p.to_string()).into());
    }
    Ok(match torsion_test(f.curve(), p, DEFAULT_NMAX) {
        TorsionVerdict::Torsion(_) => Preperiodicity::Preperiodic,
        TorsionVerdict::NonTorsionCertified => Preperiodicity::Wandering,
        TorsionVerdict::Unknown => Preperiodicity::Unknown,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Halves {
    /// Every rational Q with 2Q = P, ordered by x then y (O first).
    #[serde(serialize_with = "serde_fmt::display_seq")]
    pub points: Vec<Point>,
    /// The rational-root search on the duplication quartic is exhaustive.
    pub complete: bool,
}

fn rational_point_coords(p: &Point) -> Result<Option<(Rational, Rational)>, DynamicsError> {
    match p {
        Point::Infinity => Ok(None),
        Point::Affine { x, y } => match (x.as_rational(), y.as_rational()) {
            (Some(x), Some(y)) => Ok(Some((x.clone(), y.clone()))),
            _ => Err(DynamicsError::NotRational(p.to_string())),
        },
    }
}

/// All rational Q with 2Q = P on a curve over Q.
pub fn preimages_double(curve: &Curve, p: &Point) -> Result<Halves, DynamicsError> {
    let [a, b, c] = curve.rational_coeffs().ok_or_else(|| DynamicsError::UnsupportedMap(format!("curve {curve}")))?;
    if !curve.on_curve(p)? {
        return Err(CurveError::NotOnCurve(p.to_string()).into());
    }
    let field = curve.field();
    let cubic = vec![c.clone(), b.clone(), a.clone(), Rational::from(1)];
    let mut points = Vec::new();
    let target = rational_point_coords(p)?;
    let poly = match &target {
        // the halves of O are O and the points with y = 0
        None => {
            points.push(Point::Infinity);
            cubic.clone()
        }
        // x(2Q) = (x⁴ − 2bx² − 8cx + b² − 4ac) / (4(x³ + ax² + bx + c))
        Some((xp, _)) => {
            let num = vec![
                Rational::from(&b * &b) - Rational::from(4 * Rational::from(&a * &c)),
                Rational::from(-8 * c.clone()),
                Rational::from(-2 * b.clone()),
                Rational::new(),
                Rational::from(1),
            ];
            qpoly::sub(&num, &qpoly::scale(&cubic, &Rational::from(4 * xp.clone())))
        }
    };
    let factors = small_factors(&poly)?;
    for x0 in &factors.rational_roots {
        let f0 = qpoly::eval(&cubic, x0);
        let Some(y0) = sqrt_rational(&f0) else { continue };
        let x = AlgNumber::from_rational(field, x0.clone());
        for y in [Rational::from(-&y0), y0.clone()] {
            let q = Point::affine(x.clone(), AlgNumber::from_rational(field, y.clone()));
            if curve.double(&q) == *p && !points.contains(&q) {
                points.push(q);
            }
            if y0 == 0 {
                break;
            }
        }
    }
    Ok(Halves { points, complete: true })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BackChain {
    pub map: EndoForm,
    /// Q₀ = P₀ and f(Qⱼ) = Qⱼ₋₁; the points are pairwise distinct.
    #[serde(serialize_with = "serde_fmt::display_seq")]
    pub chain: Vec<Point>,
    /// ĥ(Qⱼ).
    pub heights: Vec<HeightEstimate>,
    pub depth_requested: usize,
    /// The chain stopped before the requested depth because no new rational preimage exists.
    pub halted: bool,
}

impl BackChain {
    /// Wraps a given chain after checking f(Qⱼ) = Qⱼ₋₁ exactly.
    pub fn from_points(f: &Endomorphism, chain: Vec<Point>, ctx: &HeightContext) -> Result<BackChain, DynamicsError> {
        for j in 1..chain.len() {
            if endo_eval(f, &chain[j])? != chain[j - 1] {
                return Err(DynamicsError::BrokenChain { index: j });
            }
        }
        let heights = chain.iter().map(|q| ctx.canonical(q)).collect::<Result<_, _>>()?;
        let depth = chain.len().saturating_sub(1);
        Ok(BackChain { map: f.form(), chain, heights, depth_requested: depth, halted: false })
    }

    pub fn len(&self) -> usize {
        self.chain.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Longest chain of new rational points below `chain`, at most `depth` further steps.
fn longest_from(curve: &Curve, chain: &mut Vec<Point>, depth: usize) -> Result<Vec<Point>, DynamicsError> {
    let mut best = chain.clone();
    if depth == 0 {
        return Ok(best);
    }
    let halves = preimages_double(curve, chain.last().unwrap())?;
    for q in halves.points {
        if chain.contains(&q) {
            continue;
        }
        chain.push(q);
        let cand = longest_from(curve, chain, depth - 1)?;
        chain.pop();
        if cand.len() > best.len() {
            best = cand;
            if best.len() == chain.len() + depth {
                break;
            }
        }
    }
    Ok(best)
}

/// Backward orbit under [2] over Q: the longest chain of distinct rational points up to
/// `depth` steps.
pub fn back_chain(f: &Endomorphism, p0: &Point, depth: usize, ctx: &HeightContext) -> Result<BackChain, DynamicsError> {
    if f.form() != EndoForm::Scalar(2) || f.curve().rational_coeffs().is_none() {
        return Err(DynamicsError::UnsupportedMap(format!("{} on {}", f.form(), f.curve())));
    }
    rational_point_coords(p0)?;
    let chain = longest_from(f.curve(), &mut vec![p0.clone()], depth)?;
    let mut out = BackChain::from_points(f, chain, ctx)?;
    out.depth_requested = depth;
    out.halted = out.len() < depth;
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayRow {
    pub index: usize,
    pub height: HeightEstimate,
    /// ĥ(Q₀)/dʲ.
    pub expected: f64,
    /// dʲ·ĥ(Qⱼ) − ĥ(Q₀).
    pub residual: f64,
    /// dʲ·rⱼ + r₀.
    pub allowed: f64,
    /// ĥ(Qⱼ)/ĥ(Qⱼ₋₁) when the previous height is certified nonzero.
    pub step_ratio: Option<HeightEstimate>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayVerdict {
    pub degree: u64,
    pub rows: Vec<DecayRow>,
    pub pass: bool,
}

/// ĥ(Qⱼ) = ĥ(Q₀)/dʲ along the chain, with heights recomputed at `tol`.
pub fn decay_check(f: &Endomorphism, chain: &BackChain, tol: f64) -> Result<DecayVerdict, DynamicsError> {
    let ctx = HeightContext::new(f.curve(), tol);
    let d = f.degree();
    let hs: Vec<HeightEstimate> = chain.chain.iter().map(|q| ctx.canonical(q)).collect::<Result<_, _>>()?;
    let mut rows = Vec::with_capacity(hs.len());
    for (j, h) in hs.iter().enumerate() {
        let dj = (d as f64).powi(j as i32);
        let residual = dj * h.value - hs[0].value;
        let allowed = dj * h.radius + hs[0].radius + ulp_slack(dj * h.value);
        let step_ratio = if j == 0 { None } else { h.ratio(&hs[j - 1]) };
        rows.push(DecayRow {
            index: j,
            height: *h,
            expected: hs[0].value / dj,
            residual,
            allowed,
            step_ratio,
            pass: residual.abs() <= allowed,
        });
    }
    let pass = rows.iter().all(|r| r.pass);
    Ok(DecayVerdict { degree: d, rows, pass })
}

/// B_est = max over the sample of |h(f(Q)) − d·h(Q)|, widened by the height radii.
pub fn calibrate_growth_constant(f: &Endomorphism, sample: &[Point]) -> Result<f64, DynamicsError> {
    if sample.is_empty() {
        return Err(DynamicsError::EmptyCalibration);
    }
    let d = f.degree() as f64;
    let curve = f.curve();
    let per: Vec<f64> = sample
        .par_iter()
        .map(|q| -> Result<f64, DynamicsError> {
            let h0 = naive_height(curve, q)?;
            let h1 = naive_height(curve, &endo_eval(f, q)?)?;
            Ok((h1.value - d * h0.value).abs() + h1.radius + d * h0.radius)
        })
        .collect::<Result<_, _>>()?;
    Ok(per.into_iter().fold(0.0, f64::max))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthStep {
    pub step: u32,
    /// h(f⁽ⁿ⁾(P)).
    pub height: HeightEstimate,
    /// gⁿ·h(P).
    pub bound: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthRow {
    #[serde(serialize_with = "serde_fmt::display")]
    pub point: Point,
    pub height: HeightEstimate,
    /// h(P) ≥ 2·B_est, so the chained inequality is claimed.
    pub qualifies: bool,
    pub steps: Vec<GrowthStep>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthReport {
    pub map: EndoForm,
    pub degree: u64,
    /// d − 1/2.
    pub g: f64,
    pub b_est: f64,
    pub calibration_size: usize,
    pub rows: Vec<GrowthRow>,
    pub qualifying: usize,
    /// Every qualifying point satisfies h(f⁽ⁿ⁾(P)) > gⁿ·h(P) for n = 1..steps.
    pub pass: bool,
}

/// Calibrates B_est on `calibration`, then checks h(f⁽ⁿ⁾(P)) > gⁿ·h(P) with g = d − 1/2 for
/// n = 1..steps on each target with h(P) ≥ 2·B_est (others pass vacuously).
pub fn height_growth_check(f: &Endomorphism, calibration: &[Point], targets: &[Point], steps: u32) -> Result<GrowthReport, DynamicsError> {
    let d = f.degree();
    if d < 2 {
        return Err(DynamicsError::DegreeTooSmall(f.form(), d));
    }
    let b_est = calibrate_growth_constant(f, calibration)?;
    let g = d as f64 - 0.5;
    let curve = f.curve();
    let rows: Vec<GrowthRow> = targets
        .par_iter()
        .map(|p| -> Result<GrowthRow, DynamicsError> {
            let h0 = naive_height(curve, p)?;
            let qualifies = h0.lower() >= 2.0 * b_est;
            let mut step_rows = Vec::new();
            if qualifies {
                let mut q = p.clone();
                for n in 1..=steps {
                    q = endo_eval(f, &q)?;
                    let h = naive_height(curve, &q)?;
                    let bound = g.powi(n as i32) * h0.upper();
                    step_rows.push(GrowthStep { step: n, height: h, bound, holds: h.lower() > bound });
                }
            }
            let pass = step_rows.iter().all(|s| s.holds);
            Ok(GrowthRow { point: p.clone(), height: h0, qualifies, steps: step_rows, pass })
        })
        .collect::<Result<_, _>>()?;
    let qualifying = rows.iter().filter(|r| r.qualifies).count();
    let pass = rows.iter().all(|r| r.pass);
    Ok(GrowthReport { map: f.form(), degree: d, g, b_est, calibration_size: calibration.len(), rows, qualifying, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nf::{Field, FieldSpec};

    fn sqrt10() -> (Curve, Point) {
        let f = Field::new(FieldSpec::quadratic(10).unwrap());
        let c = Curve::from_rationals(&f, 0, 1, 0).unwrap();
        let p = c.point(AlgNumber::from_int(&f, 2), AlgNumber::generator(&f)).unwrap();
        (c, p)
    }

    #[test]
    fn orbits() {
        let c = Curve::over_q(0, 1, 0).unwrap();
        let two = Endomorphism::scalar(&c, 2);
        let o = orbit(&two, &c.point_q(0, 0).unwrap(), 50, DEFAULT_ORBIT_BITS).unwrap();
        assert_eq!(o.iterates, vec![c.point_q(0, 0).unwrap(), Point::Infinity]);
        assert_eq!(o.outcome, OrbitOutcome::Cycle { entry: 1, period: 1 });
        let e = Curve::over_q(0, 0, 1).unwrap();
        let o = orbit(&Endomorphism::scalar(&e, 2), &e.point_q(0, 1).unwrap(), 50, DEFAULT_ORBIT_BITS).unwrap();
        assert_eq!(o.outcome, OrbitOutcome::Cycle { entry: 0, period: 2 });
        assert_eq!(o.iterates[1], e.point_q(0, -1).unwrap());
        let (c, p) = sqrt10();
        let o = orbit(&Endomorphism::scalar(&c, 2), &p, 50, 4096).unwrap();
        assert_eq!(o.outcome, OrbitOutcome::Truncated { by_size: true });
        assert!(o.heights_increasing && o.iterates.len() > 3);
    }

    #[test]
    fn classification() {
        let c = Curve::over_q(0, 1, 0).unwrap();
        let two = Endomorphism::scalar(&c, 2);
        assert_eq!(classify_preperiodic(&two, &c.point_q(0, 0).unwrap()).unwrap(), Preperiodicity::Preperiodic);
        let (c10, p) = sqrt10();
        assert_eq!(classify_preperiodic(&Endomorphism::scalar(&c10, 2), &p).unwrap(), Preperiodicity::Wandering);
        let e = Curve::over_q(0, 0, 1).unwrap();
        assert_eq!(
            classify_preperiodic(&Endomorphism::scalar(&e, 2), &e.point_q(0, 1).unwrap()).unwrap(),
            Preperiodicity::Preperiodic
        );
        assert!(matches!(classify_preperiodic(&Endomorphism::scalar(&c, -1), &Point::Infinity), Err(DynamicsError::DegreeTooSmall(..))));
    }

    #[test]
    fn halving() {
        let c = Curve::over_q(0, -1, 0).unwrap();
        let h = preimages_double(&c, &Point::Infinity).unwrap();
        let s: Vec<String> = h.points.iter().map(|p| p.to_string()).collect();
        assert_eq!(s, ["inf", "(-1,0)", "(0,0)", "(1,0)"]);
        assert!(preimages_double(&c, &c.point_q(0, 0).unwrap()).unwrap().points.is_empty());
        let e = Curve::over_q(0, -1, 1).unwrap();
        let q = e.point_q(1, 1).unwrap();
        for p in [q.clone(), e.mul(3, &q), e.mul(-2, &q)] {
            let halves = preimages_double(&e, &e.double(&p)).unwrap();
            assert!(halves.points.contains(&p));
            assert!(halves.points.iter().all(|h| e.double(h) == e.double(&p)));
        }
    }

    #[test]
    fn chains_and_decay() {
        let c = Curve::over_q(0, -1, 0).unwrap();
        let two = Endomorphism::scalar(&c, 2);
        let ctx = HeightContext::new(&c, 1e-6);
        let ch = back_chain(&two, &Point::Infinity, 2, &ctx).unwrap();
        assert_eq!(ch.len(), 1);
        assert!(ch.halted && ch.heights.iter().all(|h| h.exact && h.value == 0.0));
        assert!(decay_check(&two, &ch, 1e-6).unwrap().pass);

        let e = Curve::over_q(0, -1, 1).unwrap();
        let two = Endomorphism::scalar(&e, 2);
        let ctx = HeightContext::new(&e, 1e-6);
        let q = e.point_q(1, 1).unwrap();
        let ch = back_chain(&two, &e.mul(8, &q), 5, &ctx).unwrap();
        assert!(ch.len() >= 3);
        assert_eq!(ch.chain[3], q);
        let v = decay_check(&two, &ch, 1e-6).unwrap();
        assert!(v.pass, "{v:?}");
        let r = v.rows[1].step_ratio.unwrap();
        assert!(r.contains(0.25) || (r.value - 0.25).abs() <= r.radius + 1e-9);
        let fixture = BackChain::from_points(&two, vec![e.mul(8, &q), e.mul(4, &q), e.mul(2, &q), q.clone()], &ctx).unwrap();
        assert!(decay_check(&two, &fixture, 1e-6).unwrap().pass);
        assert!(matches!(
            BackChain::from_points(&two, vec![q.clone(), q.clone()], &ctx),
            Err(DynamicsError::BrokenChain { index: 1 })
        ));
    }

    #[test]
    fn growth() {
        let (c, p) = sqrt10();
        let two = Endomorphism::scalar(&c, 2);
        let r = height_growth_check(&two, &[p.clone(), c.mul(3, &p)], &[p.clone(), c.mul(5, &p), c.point_q(0, 0).unwrap()], 3).unwrap();
        assert_eq!(r.g, 3.5);
        assert!(r.pass);
        let torsion_row = &r.rows[2];
        assert!(!torsion_row.qualifies && torsion_row.pass);
        assert!(matches!(height_growth_check(&two, &[], &[p], 3), Err(DynamicsError::EmptyCalibration)));
    }
}
