//! Elliptic curves y² = x³ + ax² + bx + c over the supported fields.

mod divpoly;
mod endo;
mod torsion;

use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::nf::{sqrt_in_field, AlgNumber, Field, FieldSpec, NfError, SqrtBranch};

pub use divpoly::{division_polynomial, geometric_torsion_count, torsion_points, DivisionPolynomial, TorsionSearch};
pub use endo::{endo_eval, EndoForm, Endomorphism};
pub use torsion::{torsion_order, torsion_test, TorsionVerdict, DEFAULT_NMAX};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CurveError {
    #[error(transparent)]
    Nf(#[from] NfError),
    #[error("singular model: the cubic has a repeated root")]
    Singular,
    #[error("point {0} is not on the curve")]
    NotOnCurve(String),
    #[error("twist parameter must be nonzero")]
    ZeroTwist,
    #[error("no square root of {d} in {field}")]
    SqrtUnavailable { d: String, field: FieldSpec },
    #[error("CM endomorphisms need a = c = 0 over a field containing i")]
    NotCmShape,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// y² = x³ + ax² + bx + c with nonzero discriminant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Curve {
    a: AlgNumber,
    b: AlgNumber,
    c: AlgNumber,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Point {
    Infinity,
    Affine { x: AlgNumber, y: AlgNumber },
}

impl Point {
    pub fn affine(x: AlgNumber, y: AlgNumber) -> Point {
        Point::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn x(&self) -> Option<&AlgNumber> {
        match self {
            Point::Infinity => None,
            Point::Affine { x, .. } => Some(x),
        }
    }

    pub fn y(&self) -> Option<&AlgNumber> {
        match self {
            Point::Infinity => None,
            Point::Affine { y, .. } => Some(y),
        }
    }

    pub fn neg(&self) -> Point {
        match self {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::Affine { x: x.clone(), y: -y },
        }
    }

    /// Re-embeds both coordinates into `field` (they must be rational there or already in it).
    pub fn lift(&self, field: &Field) -> Result<Point, NfError> {
        Ok(match self {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::Affine { x: x.lift(field)?, y: y.lift(field)? },
        })
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => write!(f, "inf"),
            Point::Affine { x, y } => write!(f, "({x},{y})"),
        }
    }
}

/// Discriminant of x³ + ax² + bx + c: a²b² − 4b³ − 4a³c − 27c² + 18abc.
fn cubic_discriminant(a: &AlgNumber, b: &AlgNumber, c: &AlgNumber) -> AlgNumber {
    let f = a.field();
    let k = |v: i64| AlgNumber::from_int(f, v);
    let ab = a * b;
    let terms = [
        &ab * &ab,
        &k(-4) * &(b * &(b * b)),
        &k(-4) * &(&(a * &(a * a)) * c),
        &k(-27) * &(c * c),
        &k(18) * &(&ab * c),
    ];
    terms.iter().fold(AlgNumber::zero(f), |acc, t| &acc + t)
}

impl Curve {
    pub fn new(a: AlgNumber, b: AlgNumber, c: AlgNumber) -> Result<Curve, CurveError> {
        if a.field() != b.field() || a.field() != c.field() {
            let other = if a.field() != b.field() { &b } else { &c };
            return Err(NfError::FieldMismatch { left: a.spec().clone(), right: other.spec().clone() }.into());
        }
        if cubic_discriminant(&a, &b, &c).is_zero() {
            return Err(CurveError::Singular);
        }
        Ok(Curve { a, b, c })
    }

    /// Curve with rational coefficients over `field`.
    pub fn from_rationals(field: &Field, a: impl Into<Rational>, b: impl Into<Rational>, c: impl Into<Rational>) -> Result<Curve, CurveError> {
        Curve::new(AlgNumber::from_rational(field, a), AlgNumber::from_rational(field, b), AlgNumber::from_rational(field, c))
    }

    /// Curve with integer coefficients over Q.
    pub fn over_q(a: i64, b: i64, c: i64) -> Result<Curve, CurveError> {
        Curve::from_rationals(&Field::rational(), a, b, c)
    }

    pub fn field(&self) -> &Field {
        self.a.field()
    }

    pub fn a(&self) -> &AlgNumber {
        &self.a
    }

    pub fn b(&self) -> &AlgNumber {
        &self.b
    }

    pub fn c(&self) -> &AlgNumber {
        &self.c
    }

    pub fn discriminant(&self) -> AlgNumber {
        cubic_discriminant(&self.a, &self.b, &self.c)
    }

    /// Coefficients when all three are rational.
    pub fn rational_coeffs(&self) -> Option<[Rational; 3]> {
        Some([self.a.as_rational()?.clone(), self.b.as_rational()?.clone(), self.c.as_rational()?.clone()])
    }

    /// The same model over a larger field (coefficients must be rational or already there).
    pub fn lift(&self, field: &Field) -> Result<Curve, CurveError> {
        Ok(Curve { a: self.a.lift(field)?, b: self.b.lift(field)?, c: self.c.lift(field)? })
    }

    /// x³ + ax² + bx + c.
    pub fn rhs(&self, x: &AlgNumber) -> AlgNumber {
        let t = &(&(x + &self.a) * x) + &self.b;
        &(&t * x) + &self.c
    }

    pub fn point(&self, x: AlgNumber, y: AlgNumber) -> Result<Point, CurveError> {
        let p = Point::Affine { x, y };
        if !self.on_curve(&p)? {
            return Err(CurveError::NotOnCurve(p.to_string()));
        }
        Ok(p)
    }

    /// Affine point from rational coordinates over the curve's field.
    pub fn point_q(&self, x: impl Into<Rational>, y: impl Into<Rational>) -> Result<Point, CurveError> {
        let f = self.field();
        self.point(AlgNumber::from_rational(f, x), AlgNumber::from_rational(f, y))
    }

    pub fn on_curve(&self, p: &Point) -> Result<bool, CurveError> {
        match p {
            Point::Infinity => Ok(true),
            Point::Affine { x, y } => {
                for v in [x, y] {
                    if v.field() != self.field() {
                        return Err(NfError::FieldMismatch { left: self.field().spec().clone(), right: v.spec().clone() }.into());
                    }
                }
                Ok(&(y * y) == &self.rhs(x))
            }
        }
    }

    pub fn add(&self, p: &Point, q: &Point) -> Point {
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Infinity, _) => return q.clone(),
            (_, Point::Infinity) => return p.clone(),
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let lambda = if x1 == x2 {
            if y1 != y2 || y1.is_zero() {
                return Point::Infinity;
            }
            // tangent slope (3x² + 2ax + b) / 2y
            let f = self.field();
            let num = &(&(&AlgNumber::from_int(f, 3) * &(x1 * x1)) + &(&AlgNumber::from_int(f, 2) * &(&self.a * x1))) + &self.b;
            let den = y1 + y1;
            num.checked_div(&den).expect("2y is nonzero")
        } else {
            (y2 - y1).checked_div(&(x2 - x1)).expect("x1 != x2")
        };
        let x3 = &(&(&(&lambda * &lambda) - &self.a) - x1) - x2;
        let y3 = &(&lambda * &(x1 - &x3)) - y1;
        Point::Affine { x: x3, y: y3 }
    }

    pub fn sub(&self, p: &Point, q: &Point) -> Point {
        self.add(p, &q.neg())
    }

    pub fn double(&self, p: &Point) -> Point {
        self.add(p, p)
    }

    /// m·P by double-and-add; negative m uses −P.
    pub fn mul(&self, m: i64, p: &Point) -> Point {
        let base = if m < 0 { p.neg() } else { p.clone() };
        let mut k = m.unsigned_abs();
        let mut acc = Point::Infinity;
        let mut pow = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &pow);
            }
            k >>= 1;
            if k > 0 {
                pow = self.double(&pow);
            }
        }
        acc
    }

    /// Quadratic twist y² = x³ + dax² + d²bx + d³c.
    pub fn twist(&self, d: &AlgNumber) -> Result<Curve, CurveError> {
        let d = d.lift(self.field())?;
        if d.is_zero() {
            return Err(CurveError::ZeroTwist);
        }
        let d2 = &d * &d;
        let d3 = &d2 * &d;
        Curve::new(&d * &self.a, &d2 * &self.b, &d3 * &self.c)
    }

    /// Shift isomorphism x ↦ x − k for a model with a = 0: y² = x³ + bx + c becomes
    /// y² = x³ + 3kx² + (3k² + b)x + (k³ + bk + c).
    pub fn shift_curve(&self, k: i64) -> Result<(Curve, ShiftMap), CurveError> {
        if !self.a.is_zero() {
            return Err(CurveError::InvalidArgument("shift needs a model with a = 0".into()));
        }
        let f = self.field();
        let kk = AlgNumber::from_int(f, k);
        let a = AlgNumber::from_int(f, 3 * k);
        let b = &AlgNumber::from_int(f, 3 * k * k) + &self.b;
        let c = &(&AlgNumber::from_rational(f, Integer::from(k).pow(3u32)) + &(&self.b * &kk)) + &self.c;
        Ok((Curve::new(a, b, c)?, ShiftMap { k: kk }))
    }
}

/// The isomorphism (x, y) ↦ (x − k, y) onto the shifted model.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftMap {
    k: AlgNumber,
}

impl ShiftMap {
    pub fn map(&self, p: &Point) -> Point {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::Affine { x: x - &self.k, y: y.clone() },
        }
    }

    pub fn unmap(&self, p: &Point) -> Point {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::Affine { x: x + &self.k, y: y.clone() },
        }
    }
}

/// The twist isomorphism (x, y) ↦ (dx, d·s·y) from `curve` to its twist by d, with s the
/// designated square root of d in `target`. Returns the twisted curve (over `target`) and
/// the image point.
pub fn twist_map(curve: &Curve, d: &AlgNumber, p: &Point, target: &Field, branch: SqrtBranch) -> Result<(Curve, Point), CurveError> {
    let c = curve.lift(target)?;
    let p = p.lift(target)?;
    if !c.on_curve(&p)? {
        return Err(CurveError::NotOnCurve(p.to_string()));
    }
    let d = d.lift(target)?;
    let twisted = c.twist(&d)?;
    let s = sqrt_in_field(&d, branch)?
        .ok_or_else(|| CurveError::SqrtUnavailable { d: d.to_string(), field: target.spec().clone() })?;
    let image = match &p {
        Point::Infinity => Point::Infinity,
        Point::Affine { x, y } => Point::Affine { x: &d * x, y: &(&d * &s) * y },
    };
    debug_assert!(twisted.on_curve(&image).unwrap_or(false));
    Ok((twisted, image))
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{} over {}", self.a, self.b, self.c, self.field().spec())
    }
}

impl FromStr for Curve {
    type Err = CurveError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        crate::literal::parse_curve(s).map_err(CurveError::Nf)
    }
}
