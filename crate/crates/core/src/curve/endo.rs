//! Endomorphisms [m] and Gaussian-integer combinations [re] + [im]∘ι on y² = x³ + bx,
//! where ι(x, y) = (−x, i·y).

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Curve, CurveError, Point};
use crate::nf::AlgNumber;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndoForm {
    Scalar(i64),
    /// [re] + [im]∘ι.
    Cm { re: i64, im: i64 },
}

impl EndoForm {
    /// Gaussian integer (re, im) of the form.
    fn gaussian(self) -> (i64, i64) {
        match self {
            EndoForm::Scalar(m) => (m, 0),
            EndoForm::Cm { re, im } => (re, im),
        }
    }

    pub fn degree(self) -> u64 {
        let (re, im) = self.gaussian();
        (re as i128 * re as i128 + im as i128 * im as i128) as u64
    }
}

impl fmt::Display for EndoForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            EndoForm::Scalar(m) => write!(f, "[{m}]"),
            EndoForm::Cm { re, im } => match (re, im) {
                (0, 1) => write!(f, "i"),
                (0, -1) => write!(f, "-i"),
                (0, _) => write!(f, "{im}i"),
                (_, 1) => write!(f, "{re}+i"),
                (_, -1) => write!(f, "{re}-i"),
                (_, _) if im < 0 => write!(f, "{re}{im}i"),
                _ => write!(f, "{re}+{im}i"),
            },
        }
    }
}

/// An endomorphism bound to its curve. CM forms exist only on curves with a = c = 0 over a
/// field containing i.
#[derive(Clone, Debug, PartialEq)]
pub struct Endomorphism {
    curve: Curve,
    form: EndoForm,
    iota_unit: Option<AlgNumber>,
}

impl Endomorphism {
    pub fn new(curve: &Curve, form: EndoForm) -> Result<Endomorphism, CurveError> {
        let iota_unit = match form {
            EndoForm::Scalar(_) => None,
            EndoForm::Cm { .. } => {
                if !curve.a().is_zero() || !curve.c().is_zero() {
                    return Err(CurveError::NotCmShape);
                }
                Some(AlgNumber::imaginary_unit(curve.field()).ok_or(CurveError::NotCmShape)?)
            }
        };
        Ok(Endomorphism { curve: curve.clone(), form, iota_unit })
    }

    pub fn scalar(curve: &Curve, m: i64) -> Endomorphism {
        Endomorphism { curve: curve.clone(), form: EndoForm::Scalar(m), iota_unit: None }
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn form(&self) -> EndoForm {
        self.form
    }

    /// m² for [m], re² + im² for CM forms.
    pub fn degree(&self) -> u64 {
        self.form.degree()
    }

    pub fn is_automorphism(&self) -> bool {
        self.degree() == 1
    }

    /// self ∘ other (the endomorphism ring here is commutative).
    pub fn compose(&self, other: &Endomorphism) -> Result<Endomorphism, CurveError> {
        if self.curve != other.curve {
            return Err(CurveError::InvalidArgument("endomorphisms of different curves".into()));
        }
        let form = match (self.form, other.form) {
            (EndoForm::Scalar(m), EndoForm::Scalar(n)) => EndoForm::Scalar(m * n),
            (f, g) => {
                let ((a, b), (c, d)) = (f.gaussian(), g.gaussian());
                EndoForm::Cm { re: a * c - b * d, im: a * d + b * c }
            }
        };
        Endomorphism::new(&self.curve, form)
    }

    /// The n-th iterate f^(n); f^(0) is the identity.
    pub fn iterate(&self, n: u32) -> Result<Endomorphism, CurveError> {
        let mut acc = Endomorphism::scalar(&self.curve, 1);
        for _ in 0..n {
            acc = acc.compose(self)?;
        }
        Ok(acc)
    }

    fn iota(&self, p: &Point) -> Point {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => {
                let i = self.iota_unit.as_ref().expect("CM form carries i");
                Point::Affine { x: -x, y: i * y }
            }
        }
    }
}

impl fmt::Display for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.form)
    }
}

/// f(P).
pub fn endo_eval(f: &Endomorphism, p: &Point) -> Result<Point, CurveError> {
    if !f.curve.on_curve(p)? {
        return Err(CurveError::NotOnCurve(p.to_string()));
    }
    Ok(match f.form {
        EndoForm::Scalar(m) => f.curve.mul(m, p),
        EndoForm::Cm { re, im } => {
            let a = f.curve.mul(re, p);
            let b = f.iota(&f.curve.mul(im, p));
            f.curve.add(&a, &b)
        }
    })
}
