//! Bounded-height experiments: point enumeration in a height box, the totally real family
//! of bounded height on the shifted curves E_k, the inequality that picks k, multiplicative
//! dependence of rational coordinates, and the points (±p, √(±p(p²+1))).

use std::cmp::Ordering;

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::Serialize;
use thiserror::Error;

use crate::curve::{Curve, CurveError, Point};
use crate::estimate::HeightEstimate;
use crate::nf::{
    embeddings, house, real_cyclotomic_minpoly, sqrt_in_field, weil_height, AlgNumber, Field, FieldSpec, IntPoly, NfError,
    SqrtBranch,
};
use crate::serde_fmt;

#[derive(Debug, Error, PartialEq)]
pub enum NorthcottError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Nf(#[from] NfError),
    #[error("box enumeration is only available over Q and quadratic fields, not {0}")]
    UnsupportedField(FieldSpec),
    #[error("height bound must be finite and nonnegative, got {0}")]
    InvalidBound(f64),
    #[error("y² = x³ + ({a})x + ({b}) is singular")]
    Singular { a: Rational, b: Rational },
    #[error("k = {k} fails k³ + ka + b > 8 + 12k + 2(3k² + |a|): {lhs} ≤ {rhs}")]
    KabFails { k: i64, lhs: Rational, rhs: Rational },
    #[error("coordinates must be nonzero")]
    ZeroInput,
    #[error("{0}")]
    Invalid(String),
}

/// Candidate region for h ≤ T: x = u (over Q) or x = u + v√d with u, v rationals whose
/// numerator and denominator are bounded by H in absolute value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchBox {
    pub t: f64,
    /// H = ⌈exp T⌉ ≥ 1.
    pub h: u64,
    pub field: FieldSpec,
}

impl SearchBox {
    pub fn new(field: &FieldSpec, t: f64) -> Result<SearchBox, NorthcottError> {
        if !t.is_finite() || t < 0.0 {
            return Err(NorthcottError::InvalidBound(t));
        }
        if field.degree() > 2 {
            return Err(NorthcottError::UnsupportedField(field.clone()));
        }
        // exp(log n) may land a hair above n
        let e = t.exp();
        let h = if (e - e.round()).abs() <= 1e-9 * e { e.round() } else { e.ceil() };
        if h > 1e6 {
            return Err(NorthcottError::InvalidBound(t));
        }
        Ok(SearchBox { t, h: (h as u64).max(1), field: field.clone() })
    }

    /// Reduced p/q with |p| ≤ H, 1 ≤ q ≤ H, in ascending order.
    pub fn rationals(&self) -> Vec<Rational> {
        let h = self.h as i64;
        let mut out: Vec<Rational> = Vec::new();
        for q in 1..=h {
            for p in -h..=h {
                if Integer::from(p).gcd(&Integer::from(q)) == 1 {
                    out.push(Rational::from((p, q)));
                }
            }
        }
        out.sort();
        out
    }

    /// Every x-candidate in the box.
    pub fn candidates(&self, field: &Field) -> Vec<AlgNumber> {
        let rs = self.rationals();
        match field.degree() {
            1 => rs.into_iter().map(|r| AlgNumber::from_rational(field, r)).collect(),
            _ => {
                let mut out = Vec::with_capacity(rs.len() * rs.len());
                for u in &rs {
                    for v in &rs {
                        out.push(AlgNumber::from_coords(field, vec![u.clone(), v.clone()]));
                    }
                }
                out
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundedPoint {
    #[serde(serialize_with = "serde_fmt::display")]
    pub point: Point,
    pub height: HeightEstimate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundedSearch {
    pub search_box: SearchBox,
    pub candidates: usize,
    /// Ordered by height, then x and y coordinates; O comes first.
    pub points: Vec<BoundedPoint>,
}

fn coord_cmp(a: &AlgNumber, b: &AlgNumber) -> Ordering {
    a.coords().cmp(b.coords())
}

fn point_cmp(a: &BoundedPoint, b: &BoundedPoint) -> Ordering {
    a.height.value.total_cmp(&b.height.value).then_with(|| match (&a.point, &b.point) {
        (Point::Infinity, Point::Infinity) => Ordering::Equal,
        (Point::Infinity, _) => Ordering::Less,
        (_, Point::Infinity) => Ordering::Greater,
        (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => coord_cmp(x1, x2).then_with(|| coord_cmp(y1, y2)),
    })
}

/// All F-points with h(x) ≤ T and x in the search box; complete within the box.
pub fn enumerate_bounded(curve: &Curve, field: &FieldSpec, t: f64) -> Result<BoundedSearch, NorthcottError> {
    let search_box = SearchBox::new(field, t)?;
    let f = Field::new(field.clone());
    let c = curve.lift(&f)?;
    let cands = search_box.candidates(&f);
    let bound = t.exp() * (1.0 + 1e-12);
    let found: Vec<Vec<BoundedPoint>> = cands
        .par_iter()
        .map(|x| -> Result<Vec<BoundedPoint>, NorthcottError> {
            let height = match x.as_rational() {
                Some(r) => {
                    let m = Integer::from(r.numer().abs_ref()).max(r.denom().clone());
                    if m.to_f64() > bound {
                        return Ok(Vec::new());
                    }
                    weil_height(x)
                }
                None => {
                    let h = weil_height(x);
                    if h.lower() > t {
                        return Ok(Vec::new());
                    }
                    h
                }
            };
            let Some(y) = sqrt_in_field(&c.rhs(x), SqrtBranch::Principal)? else { return Ok(Vec::new()) };
            let mut out = vec![BoundedPoint { point: Point::affine(x.clone(), y.clone()), height }];
            if !y.is_zero() {
                out.push(BoundedPoint { point: Point::affine(x.clone(), -y), height });
            }
            Ok(out)
        })
        .collect::<Result<_, _>>()?;
    let mut points = vec![BoundedPoint { point: Point::Infinity, height: HeightEstimate::exact(0.0) }];
    points.extend(found.into_iter().flatten());
    points.sort_by(point_cmp);
    Ok(BoundedSearch { search_box, candidates: cands.len(), points })
}

/// Both sides of k³ + ka + b > 8 + 12k + 2(3k² + |a|).
pub fn kab_sides(a: &Rational, b: &Rational, k: i64) -> (Rational, Rational) {
    let kq = Rational::from(k);
    let lhs = Rational::from(&kq * &kq) * &kq + Rational::from(&kq * a) + b;
    let rhs = Rational::from(8 + 12 * k + 6 * k * k) + Rational::from(2 * Rational::from(a.abs_ref()));
    (lhs, rhs)
}

/// Least k ≥ 1 satisfying the inequality above.
pub fn kab_min_k(a: &Rational, b: &Rational) -> Result<i64, NorthcottError> {
    let disc = Rational::from(4 * Rational::from(a * a) * a) + Rational::from(27 * Rational::from(b * b));
    if disc == 0 {
        return Err(NorthcottError::Singular { a: a.clone(), b: b.clone() });
    }
    // For k ≥ M = 13 + |a| + |b|: k²(k − 6) ≥ 7k² + k²|a| + k²|b| beats 12k − ka + 8 + 2|a| − b,
    // so the scan below always stops by M.
    let m = Rational::from(13) + Rational::from(a.abs_ref()) + Rational::from(b.abs_ref());
    let limit = m.ceil().numer().to_i64().ok_or_else(|| NorthcottError::Invalid("coefficients too large".into()))?;
    for k in 1..=limit {
        let (lhs, rhs) = kab_sides(a, b, k);
        if lhs > rhs {
            return Ok(k);
        }
    }
    unreachable!("the inequality holds at k = {limit}")
}

/// A family point (ζₙ + ζₙ⁻¹, β) on E_k: y² = x³ + 3kx² + (3k² + a)x + (k³ + ak + b). β is
/// kept symbolically as the designated square root of `y_squared` in a quadratic extension of
/// Q(ζₙ); heights only use x.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyPoint {
    pub conductor: u32,
    #[serde(serialize_with = "serde_fmt::display")]
    pub x: AlgNumber,
    #[serde(serialize_with = "serde_fmt::display")]
    pub x_minpoly: IntPoly,
    #[serde(serialize_with = "serde_fmt::display")]
    pub y_squared: AlgNumber,
    /// h(x).
    pub height: HeightEstimate,
    /// Upper bound on the largest conjugate of x.
    pub house: HeightEstimate,
    /// x is an algebraic integer with house ≤ 2, which forces h(x) ≤ log 2.
    pub bound_ok: bool,
    /// Every real embedding of `y_squared` is certified positive.
    pub totally_positive: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyRecord {
    pub k: i64,
    #[serde(serialize_with = "serde_fmt::display")]
    pub a: Rational,
    #[serde(serialize_with = "serde_fmt::display")]
    pub b: Rational,
    pub conductors: Vec<u32>,
    pub points: Vec<FamilyPoint>,
    /// log 2.
    pub height_bound: f64,
    /// Pairwise distinct minimal polynomials of the x-coordinates.
    pub distinct: bool,
}

/// The first `count` primes ≥ 5.
pub fn default_conductors(count: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(count);
    let mut n = 5u32;
    while out.len() < count {
        if Integer::from(n).is_probably_prime(30) != rug::integer::IsPrime::No {
            out.push(n);
        }
        n += 2;
    }
    out
}

/// Embeddings are certified to this absolute precision.
const EMBED_TOL: f64 = 1e-9;

fn family_point(a: &Rational, b: &Rational, k: i64, n: u32) -> Result<FamilyPoint, NorthcottError> {
    let f = Field::new(FieldSpec::cyclotomic(n)?);
    let z = AlgNumber::generator(&f);
    let x = &z + &z.inv()?;
    let kq = Rational::from(k);
    let c2 = Rational::from(3 * k);
    let c1 = Rational::from(3 * k * k) + a;
    let c0 = Rational::from(&kq * &kq) * &kq + Rational::from(a * &kq) + b;
    let y_squared = &(&(&x.pow(3) + &x.pow(2).scale(&c2)) + &x.scale(&c1)) + &AlgNumber::from_rational(&f, c0);
    let totally_positive = embeddings(&y_squared, EMBED_TOL)?.iter().all(|e| e.re - e.radius > 0.0 && e.im.abs() <= e.radius);
    let x_minpoly = real_cyclotomic_minpoly(n);
    let hs = house(&x)?;
    let integral = x_minpoly.leading() == &1;
    Ok(FamilyPoint {
        conductor: n,
        height: weil_height(&x),
        house: hs,
        bound_ok: integral && hs.upper() <= 2.0,
        totally_positive,
        x,
        x_minpoly,
        y_squared,
    })
}

/// N points of bounded height on E_k with x = ζₙ + ζₙ⁻¹ for distinct conductors.
pub fn qtr_family(a: &Rational, b: &Rational, k: i64, conductors: &[u32]) -> Result<FamilyRecord, NorthcottError> {
    kab_min_k(a, b)?;
    let (lhs, rhs) = kab_sides(a, b, k);
    if lhs <= rhs {
        return Err(NorthcottError::KabFails { k, lhs, rhs });
    }
    if conductors.is_empty() {
        return Err(NorthcottError::Invalid("at least one conductor is needed".into()));
    }
    let points: Vec<FamilyPoint> =
        conductors.par_iter().map(|&n| family_point(a, b, k, n)).collect::<Result<_, _>>()?;
    let mut minpolys: Vec<&IntPoly> = points.iter().map(|p| &p.x_minpoly).collect();
    minpolys.sort_by(|p, q| p.coeffs().cmp(q.coeffs()));
    let distinct = minpolys.windows(2).all(|w| w[0] != w[1]);
    Ok(FamilyRecord {
        k,
        a: a.clone(),
        b: b.clone(),
        conductors: conductors.to_vec(),
        points,
        height_bound: std::f64::consts::LN_2,
        distinct,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultDep {
    pub dependent: bool,
    /// (m, n) ≠ (0, 0) with xᵐyⁿ = 1, m > 0 or (m = 0 and n > 0), smallest multiple.
    pub witness: Option<(i64, i64)>,
}

/// Pairwise coprime integers > 1 whose products give every input, by gcd refinement.
fn coprime_base(inputs: &[Integer]) -> Vec<Integer> {
    let mut base: Vec<Integer> = inputs.iter().filter(|v| **v > 1).cloned().collect();
    'outer: loop {
        for i in 0..base.len() {
            for j in i + 1..base.len() {
                let g = Integer::from(base[i].gcd_ref(&base[j]));
                if g > 1 {
                    let bi = Integer::from(&base[i] / &g);
                    let bj = Integer::from(&base[j] / &g);
                    base.swap_remove(j);
                    base.swap_remove(i);
                    base.extend([bi, bj, g].into_iter().filter(|v| *v > 1));
                    continue 'outer;
                }
            }
        }
        break;
    }
    base.sort();
    base.dedup();
    base
}

fn valuation(n: &Integer, p: &Integer) -> i64 {
    let mut n = n.clone();
    let mut e = 0;
    while n.is_divisible(p) {
        n /= p;
        e += 1;
    }
    e
}

/// Whether xᵐyⁿ = 1 for some (m, n) ≠ (0, 0), from exponent vectors over a coprime base.
pub fn mult_dep_test(x: &Rational, y: &Rational) -> Result<MultDep, NorthcottError> {
    if *x == 0 || *y == 0 {
        return Err(NorthcottError::ZeroInput);
    }
    let base = coprime_base(&[
        Integer::from(x.numer().abs_ref()),
        x.denom().clone(),
        Integer::from(y.numer().abs_ref()),
        y.denom().clone(),
    ]);
    let exps = |r: &Rational| -> Vec<i64> {
        let num = Integer::from(r.numer().abs_ref());
        base.iter().map(|p| valuation(&num, p) - valuation(r.denom(), p)).collect()
    };
    let (ex, ey) = (exps(x), exps(y));
    let (m, n) = if ex.iter().all(|&e| e == 0) {
        (1, 0)
    } else if ey.iter().all(|&e| e == 0) {
        (0, 1)
    } else {
        let i = ex.iter().position(|&e| e != 0).unwrap();
        let g = Integer::from(ex[i]).gcd(&Integer::from(ey[i])).to_i64().unwrap();
        let (m, n) = (ey[i] / g, -ex[i] / g);
        if ex.iter().zip(&ey).any(|(a, b)| m * a + n * b != 0) {
            return Ok(MultDep { dependent: false, witness: None });
        }
        if m < 0 {
            (-m, -n)
        } else {
            (m, n)
        }
    };
    // |x|ᵐ|y|ⁿ = 1; doubling fixes the sign
    let negative = (*x < 0 && m % 2 != 0) != (*y < 0 && n % 2 != 0);
    let (m, n) = if negative { (2 * m, 2 * n) } else { (m, n) };
    Ok(MultDep { dependent: true, witness: Some((m, n)) })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CcPoint {
    pub p: u64,
    #[serde(serialize_with = "serde_fmt::display")]
    pub x: Rational,
    /// y² = x³ + x.
    #[serde(serialize_with = "serde_fmt::display")]
    pub y_squared: Rational,
    pub field: FieldSpec,
    #[serde(serialize_with = "serde_fmt::display")]
    pub y: AlgNumber,
    pub on_curve: bool,
    /// h(x) = log p.
    pub height: HeightEstimate,
}

/// n = s²·d with d squarefree, by trial division; None when a cofactor cannot be classified.
fn square_split(n: &Integer) -> Option<(Integer, Integer)> {
    const LIMIT: u32 = 1_000_000;
    let mut rest = Integer::from(n.abs_ref());
    let mut s = Integer::from(1);
    let mut d = Integer::from(1);
    let mut p = 2u32;
    while p < LIMIT && Integer::from(p) * p <= rest {
        let mut e = 0;
        while rest.is_divisible_u(p) {
            rest /= p;
            e += 1;
        }
        s *= Integer::from(p).pow(e / 2);
        if e % 2 == 1 {
            d *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        // rest has no factor below LIMIT, so if rest < LIMIT² it is prime
        if rest.is_perfect_square() {
            s *= rest.sqrt();
        } else if rest < Integer::from(LIMIT) * LIMIT {
            d *= rest;
        } else {
            return None;
        }
    }
    Some((s, d))
}

/// For each prime p, the points (p, √(p(p²+1))) and (−p, √(−p(p²+1))) on y² = x³ + x over
/// their quadratic fields.
pub fn cc_points_demo(primes: &[u64]) -> Result<Vec<CcPoint>, NorthcottError> {
    let mut out = Vec::new();
    for &p in primes {
        if Integer::from(p).is_probably_prime(30) == rug::integer::IsPrime::No {
            return Err(NorthcottError::Invalid(format!("{p} is not prime")));
        }
        for sign in [1i64, -1] {
            let x = Rational::from(Integer::from(p) * sign);
            let y_squared = Rational::from(&x * &x) * &x + &x;
            let (s, d) = square_split(y_squared.numer())
                .ok_or_else(|| NorthcottError::Invalid(format!("cannot factor {y_squared}")))?;
            let d = d.to_i64().ok_or_else(|| NorthcottError::Invalid("field discriminant too large".into()))? * sign;
            let field = Field::new(FieldSpec::quadratic(d)?);
            // √(s²d) = s·√d
            let y = AlgNumber::from_coords(&field, vec![Rational::new(), Rational::from(s)]);
            let curve = Curve::from_rationals(&field, 0, 1, 0)?;
            let xf = AlgNumber::from_rational(&field, x.clone());
            let on_curve = curve.on_curve(&Point::affine(xf.clone(), y.clone()))?;
            out.push(CcPoint { p, height: weil_height(&xf), field: field.spec().clone(), x, y_squared, y, on_curve });
        }
    }
    Ok(out)
}
