//! Galois action on points, the trace map to a fixed field, and the transfer between the
//! trace kernel of a quadratic extension and the quadratic twist.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{Curve, CurveError, Point};
use crate::literal::parse_field;
use crate::nf::{apply_auto, galois_group, sqrt_in_field, AlgNumber, Automorphism, Field, FieldSpec, NfError, SqrtBranch};

#[derive(Debug, Error, PartialEq)]
pub enum GaloisError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Nf(#[from] NfError),
    #[error("the curve is not stable under {0}")]
    CurveNotStable(String),
    #[error("the curve is not defined over the base field {0}")]
    CurveNotOverBase(String),
    #[error("exponents {0:?} do not form a subgroup of the Galois group")]
    NotASubgroup(Vec<i64>),
    #[error("transfer needs a quadratic extension; this one has relative degree {0}")]
    NotQuadratic(usize),
    #[error("point {0} does not have zero trace")]
    NotInKernel(String),
    #[error("point {0} is not on the twist")]
    NotOnTwist(String),
    #[error("{0}")]
    Invalid(String),
}

/// L together with the subgroup H ≤ Gal(L/Q) whose fixed field is the base F.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionSpec {
    top: Field,
    group: Vec<Automorphism>,
    base: BaseField,
}

/// How the base field was described.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BaseField {
    Spec(FieldSpec),
    /// Fixed field of the listed exponents.
    Fixed { exponents: Vec<i64> },
}

impl ExtensionSpec {
    /// L/Q with the full Galois group.
    pub fn over_q(top: &Field) -> Result<ExtensionSpec, GaloisError> {
        let group = galois_group(top.spec())?;
        Ok(ExtensionSpec { top: top.clone(), group, base: BaseField::Spec(FieldSpec::Rational) })
    }

    /// Q(√d)/Q.
    pub fn quadratic(d: i64) -> Result<ExtensionSpec, GaloisError> {
        ExtensionSpec::over_q(&Field::new(FieldSpec::quadratic(d)?))
    }

    /// Fixed field of the automorphisms with the given exponents; the identity is added and
    /// closure under composition is checked.
    pub fn fixed_by(top: &Field, exponents: &[i64]) -> Result<ExtensionSpec, GaloisError> {
        let mut group = vec![Automorphism::identity(top.spec().clone())];
        for &k in exponents {
            let s = Automorphism::new(top.spec().clone(), k)?;
            if !group.contains(&s) {
                group.push(s);
            }
        }
        for s in &group {
            for t in &group {
                if !group.contains(&s.compose(t)?) {
                    return Err(GaloisError::NotASubgroup(exponents.to_vec()));
                }
            }
        }
        group.sort_by_key(|s| s.exponent() != 1);
        let mut exps: Vec<i64> = group.iter().map(|s| s.exponent()).collect();
        exps.sort_unstable();
        Ok(ExtensionSpec { top: top.clone(), group, base: BaseField::Fixed { exponents: exps } })
    }

    /// L/F for a subfield F named by its own spec: Q, Q(√d) inside L, or Q(ζₘ) with m | n.
    pub fn with_base(top: &Field, base: &FieldSpec) -> Result<ExtensionSpec, GaloisError> {
        let full = galois_group(top.spec())?;
        let group: Vec<Automorphism> = match base {
            FieldSpec::Rational => full,
            b if b == top.spec() => vec![Automorphism::identity(top.spec().clone())],
            FieldSpec::Quadratic { d } => {
                let s = sqrt_in_field(&AlgNumber::from_int(top, *d), SqrtBranch::Principal)?
                    .ok_or_else(|| GaloisError::Invalid(format!("{base} is not a subfield of {}", top.spec())))?;
                let mut g = Vec::new();
                for sigma in full {
                    if apply_auto(&sigma, &s)? == s {
                        g.push(sigma);
                    }
                }
                g
            }
            FieldSpec::Cyclotomic { n: m } => match top.spec() {
                FieldSpec::Cyclotomic { n } if n % m == 0 => {
                    full.into_iter().filter(|s| s.exponent().rem_euclid(*m as i64) == 1).collect()
                }
                _ => return Err(GaloisError::Invalid(format!("{base} is not a subfield of {}", top.spec()))),
            },
        };
        Ok(ExtensionSpec { top: top.clone(), group, base: BaseField::Spec(base.clone()) })
    }

    pub fn top(&self) -> &Field {
        &self.top
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    /// Gal(L/F), identity first.
    pub fn group(&self) -> &[Automorphism] {
        &self.group
    }

    /// [L:F].
    pub fn degree(&self) -> usize {
        self.group.len()
    }

    pub fn base_is_rational(&self) -> bool {
        self.degree() == self.top.degree()
    }

    /// a ∈ F, i.e. fixed by every automorphism of the group.
    pub fn contains(&self, a: &AlgNumber) -> Result<bool, GaloisError> {
        let a = a.lift(&self.top)?;
        for s in &self.group[1..] {
            if apply_auto(s, &a)? != a {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn contains_point(&self, p: &Point) -> Result<bool, GaloisError> {
        Ok(match p {
            Point::Infinity => true,
            Point::Affine { x, y } => self.contains(x)? && self.contains(y)?,
        })
    }

    /// The curve lifted to L, after checking its coefficients lie in F.
    fn curve_over_top(&self, curve: &Curve) -> Result<Curve, GaloisError> {
        let c = curve.lift(&self.top)?;
        for coeff in [c.a(), c.b(), c.c()] {
            if !self.contains(coeff)? {
                return Err(GaloisError::CurveNotOverBase(self.base.to_string()));
            }
        }
        Ok(c)
    }

    /// The nontrivial automorphism of a quadratic extension.
    fn involution(&self) -> Result<&Automorphism, GaloisError> {
        if self.degree() != 2 {
            return Err(GaloisError::NotQuadratic(self.degree()));
        }
        Ok(&self.group[1])
    }
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseField::Spec(s) => write!(f, "{s}"),
            BaseField::Fixed { exponents } => {
                let parts: Vec<String> = exponents.iter().map(|k| k.to_string()).collect();
                write!(f, "<{}>", parts.join(","))
            }
        }
    }
}

impl fmt::Display for ExtensionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.top.spec(), self.base)
    }
}

/// `L/F` where F is a field literal or `<k1,k2,...>` listing automorphism exponents.
impl FromStr for ExtensionSpec {
    type Err = GaloisError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        // the field literals contain no '/', so the last one separates L from F
        let cut = s
            .rfind('/')
            .ok_or_else(|| NfError::Parse { pos: 0, msg: "expected L/F".into() })?;
        let top = Field::new(parse_field(&s[..cut])?);
        let rest = s[cut + 1..].trim();
        if let Some(inner) = rest.strip_prefix('<').and_then(|r| r.strip_suffix('>')) {
            let mut exps = Vec::new();
            for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                let k = part
                    .parse::<i64>()
                    .map_err(|_| NfError::Parse { pos: cut + 1, msg: format!("bad exponent {part:?}") })?;
                exps.push(k);
            }
            return ExtensionSpec::fixed_by(&top, &exps);
        }
        let base = parse_field(rest).map_err(|e| match e {
            NfError::Parse { pos, msg } => NfError::Parse { pos: pos + cut + 1, msg },
            other => other,
        })?;
        ExtensionSpec::with_base(&top, &base)
    }
}

/// P^σ = (σ(x), σ(y)) on a σ-stable curve.
pub fn conjugate_point(curve: &Curve, p: &Point, sigma: &Automorphism) -> Result<Point, GaloisError> {
    let field = curve.field();
    if sigma.field() != field.spec() {
        return Err(NfError::FieldMismatch { left: sigma.field().clone(), right: field.spec().clone() }.into());
    }
    for coeff in [curve.a(), curve.b(), curve.c()] {
        if apply_auto(sigma, coeff)? != *coeff {
            return Err(GaloisError::CurveNotStable(sigma.to_string()));
        }
    }
    if !curve.on_curve(p)? {
        return Err(CurveError::NotOnCurve(p.to_string()).into());
    }
    Ok(match p {
        Point::Infinity => Point::Infinity,
        Point::Affine { x, y } => Point::Affine { x: apply_auto(sigma, x)?, y: apply_auto(sigma, y)? },
    })
}

/// T_{L/F}(P) = Σ_σ P^σ over Gal(L/F); the result is checked to be F-rational.
pub fn trace_map(ext: &ExtensionSpec, curve: &Curve, p: &Point) -> Result<Point, GaloisError> {
    let c = ext.curve_over_top(curve)?;
    let p = p.lift(ext.top())?;
    if !c.on_curve(&p)? {
        return Err(CurveError::NotOnCurve(p.to_string()).into());
    }
    let mut sum = Point::Infinity;
    for sigma in ext.group() {
        sum = c.add(&sum, &conjugate_point(&c, &p, sigma)?);
    }
    if !ext.contains_point(&sum)? {
        return Err(GaloisError::Invalid(format!("trace {sum} is not fixed by Gal(L/F)")));
    }
    Ok(sum)
}

pub fn kernel_test(ext: &ExtensionSpec, curve: &Curve, p: &Point) -> Result<bool, GaloisError> {
    Ok(trace_map(ext, curve, p)?.is_infinity())
}

/// Image of the transfer: the twist E_d and a point on it with coordinates in F. When F = Q
/// both are returned over Q, otherwise they stay in L's representation.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistImage {
    pub twist: Curve,
    pub point: Point,
}

/// The designated √d in L, which the nontrivial automorphism must negate.
fn designated_root(ext: &ExtensionSpec, d: &AlgNumber) -> Result<AlgNumber, GaloisError> {
    let sigma = ext.involution()?;
    let d = d.lift(ext.top())?;
    if d.is_zero() {
        return Err(CurveError::ZeroTwist.into());
    }
    if !ext.contains(&d)? {
        return Err(GaloisError::Invalid(format!("d = {d} is not in the base field")));
    }
    let s = sqrt_in_field(&d, SqrtBranch::Principal)?.ok_or_else(|| CurveError::SqrtUnavailable {
        d: d.to_string(),
        field: ext.top().spec().clone(),
    })?;
    if apply_auto(sigma, &s)? != -s.clone() {
        return Err(GaloisError::Invalid(format!("L is not F(sqrt({d}))")));
    }
    Ok(s)
}

/// Descends a curve and point with rational coordinates to Q when the base is Q.
fn descend(ext: &ExtensionSpec, twist: Curve, point: Point) -> Result<TwistImage, GaloisError> {
    if !ext.base_is_rational() {
        return Ok(TwistImage { twist, point });
    }
    let q = Field::rational();
    let down = |a: &AlgNumber| -> Result<AlgNumber, GaloisError> {
        let r = a.as_rational().ok_or_else(|| GaloisError::Invalid(format!("{a} is not rational")))?;
        Ok(AlgNumber::from_rational(&q, r.clone()))
    };
    let twist = Curve::new(down(twist.a())?, down(twist.b())?, down(twist.c())?)?;
    let point = match &point {
        Point::Infinity => Point::Infinity,
        Point::Affine { x, y } => Point::Affine { x: down(x)?, y: down(y)? },
    };
    Ok(TwistImage { twist, point })
}

/// Zero-trace P = (α, γ√d) with α, γ ∈ F goes to (dα, d²γ) on y² = x³ + da x² + d²b x + d³c.
pub fn twist_transfer(ext: &ExtensionSpec, curve: &Curve, d: &AlgNumber, p: &Point) -> Result<TwistImage, GaloisError> {
    let s = designated_root(ext, d)?;
    let d = d.lift(ext.top())?;
    let c = ext.curve_over_top(curve)?;
    let p = p.lift(ext.top())?;
    if !kernel_test(ext, &c, &p)? {
        return Err(GaloisError::NotInKernel(p.to_string()));
    }
    let twist = c.twist(&d)?;
    let image = match &p {
        Point::Infinity => Point::Infinity,
        Point::Affine { x, y } => {
            let gamma = y.checked_div(&s)?;
            // zero trace forces x ∈ F and y ∈ F·√d
            if !ext.contains(x)? || !ext.contains(&gamma)? {
                return Err(GaloisError::Invalid(format!("zero-trace point {p} is not of the form (α, γ√d)")));
            }
            Point::Affine { x: &d * x, y: &(&d * &d) * &gamma }
        }
    };
    if !twist.on_curve(&image)? || !ext.contains_point(&image)? {
        return Err(GaloisError::Invalid(format!("transfer image {image} is not an F-point of the twist")));
    }
    descend(ext, twist, image)
}

/// (x, y) on E_d(F) goes to (x/d, (y/d²)·√d), a zero-trace point of E(L).
pub fn transfer_inverse(ext: &ExtensionSpec, curve: &Curve, d: &AlgNumber, q: &Point) -> Result<Point, GaloisError> {
    let s = designated_root(ext, d)?;
    let d = d.lift(ext.top())?;
    let c = ext.curve_over_top(curve)?;
    let twist = c.twist(&d)?;
    let q = q.lift(ext.top())?;
    if !twist.on_curve(&q)? {
        return Err(GaloisError::NotOnTwist(q.to_string()));
    }
    if !ext.contains_point(&q)? {
        return Err(GaloisError::Invalid(format!("{q} is not an F-point")));
    }
    let p = match &q {
        Point::Infinity => Point::Infinity,
        Point::Affine { x, y } => {
            let d2 = &d * &d;
            Point::Affine { x: x.checked_div(&d)?, y: &y.checked_div(&d2)? * &s }
        }
    };
    debug_assert!(c.on_curve(&p).unwrap_or(false));
    Ok(p)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelIsoVerdict {
    pub sample_size: usize,
    pub pairs_checked: usize,
    /// Distinct sample points have distinct images.
    pub injective: bool,
    /// transfer(P + Q) = transfer(P) + transfer(Q) for every ordered pair.
    pub homomorphism: bool,
    pub pass: bool,
}

/// Exact injectivity and additivity of the transfer on a zero-trace sample.
pub fn kernel_iso_check(ext: &ExtensionSpec, curve: &Curve, d: &AlgNumber, sample: &[Point]) -> Result<KernelIsoVerdict, GaloisError> {
    let c = ext.curve_over_top(curve)?;
    let pts: Vec<Point> = sample.iter().map(|p| p.lift(ext.top())).collect::<Result<_, _>>()?;
    let images: Vec<TwistImage> = pts.iter().map(|p| twist_transfer(ext, &c, d, p)).collect::<Result<_, _>>()?;
    let mut injective = true;
    let mut homomorphism = true;
    let mut pairs_checked = 0;
    for i in 0..pts.len() {
        for j in 0..pts.len() {
            if i < j && pts[i] != pts[j] && images[i].point == images[j].point {
                injective = false;
            }
            let sum = twist_transfer(ext, &c, d, &c.add(&pts[i], &pts[j]))?;
            let twist = &images[i].twist;
            if sum.point != twist.add(&images[i].point, &images[j].point) {
                homomorphism = false;
            }
            pairs_checked += 1;
        }
    }
    Ok(KernelIsoVerdict {
        sample_size: pts.len(),
        pairs_checked,
        injective,
        homomorphism,
        pass: injective && homomorphism,
    })
}
