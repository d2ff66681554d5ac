use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Integer, Rational};

use super::field::{Field, FieldSpec};
use super::{qpoly, NfError};

/// Exact element of a supported field, stored on the power basis
/// (1 | 1, √d | 1, ζ, …, ζ^{φ(n)−1}).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgNumber {
    field: Field,
    coords: Vec<Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl AlgNumber {
    pub fn zero(field: &Field) -> Self {
        AlgNumber { field: field.clone(), coords: vec![Rational::new(); field.degree()] }
    }

    pub fn one(field: &Field) -> Self {
        Self::from_rational(field, Rational::from(1))
    }

    pub fn from_rational(field: &Field, r: impl Into<Rational>) -> Self {
        let mut z = Self::zero(field);
        z.coords[0] = r.into();
        z
    }

    pub fn from_int(field: &Field, v: i64) -> Self {
        Self::from_rational(field, Rational::from(v))
    }

    /// Builds an element from coefficients on 1, g, g², … (any length), reducing modulo
    /// the defining polynomial of the generator g.
    pub fn from_coords(field: &Field, coords: Vec<Rational>) -> Self {
        AlgNumber { field: field.clone(), coords: reduce(field, coords) }
    }

    /// √d for quadratic fields, ζₙ for cyclotomic fields, 1 for Q.
    pub fn generator(field: &Field) -> Self {
        let mut c = vec![Rational::new(); field.degree().max(2)];
        if field.degree() == 1 {
            c[0] = Rational::from(1);
        } else {
            c[1] = Rational::from(1);
        }
        Self::from_coords(field, c)
    }

    /// ζₙ^k in a cyclotomic field (any integer k).
    pub fn zeta_power(field: &Field, k: i64) -> Result<Self, NfError> {
        match field.spec() {
            FieldSpec::Cyclotomic { n } => {
                let j = k.rem_euclid(*n as i64) as usize;
                let coords = field.0.zeta_powers[j].iter().map(|c| Rational::from(c.clone())).collect();
                Ok(AlgNumber { field: field.clone(), coords })
            }
            other => Err(NfError::Unsupported(format!("roots of unity of {other} beyond ±1"))),
        }
    }

    /// A square root of −1, when the field has one (ζ₄ convention: ζₙ^{n/4}).
    pub fn imaginary_unit(field: &Field) -> Option<Self> {
        match field.spec() {
            FieldSpec::Quadratic { d: -1 } => Some(Self::generator(field)),
            FieldSpec::Cyclotomic { n } if n % 4 == 0 => Self::zeta_power(field, (*n / 4) as i64).ok(),
            _ => None,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn spec(&self) -> &FieldSpec {
        self.field.spec()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| *c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0] == 1 && self.coords[1..].iter().all(|c| *c == 0)
    }

    /// The rational value when the element lies in Q.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coords[1..].iter().all(|c| *c == 0) {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    /// Coordinates lie in Z (for cyclotomic fields this is exactly integrality).
    pub fn has_integral_coords(&self) -> bool {
        self.coords.iter().all(|c| *c.denom() == 1)
    }

    /// Re-embeds a rational element into another field.
    pub fn lift(&self, target: &Field) -> Result<Self, NfError> {
        if self.field == *target {
            return Ok(self.clone());
        }
        match self.as_rational() {
            Some(r) => Ok(Self::from_rational(target, r.clone())),
            None => Err(NfError::FieldMismatch { left: self.spec().clone(), right: target.spec().clone() }),
        }
    }

    fn check_same(&self, other: &Self) -> Result<(), NfError> {
        if self.field != other.field {
            return Err(NfError::FieldMismatch { left: self.spec().clone(), right: other.spec().clone() });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, NfError> {
        self.check_same(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| Rational::from(a + b)).collect();
        Ok(AlgNumber { field: self.field.clone(), coords })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, NfError> {
        self.check_same(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| Rational::from(a - b)).collect();
        Ok(AlgNumber { field: self.field.clone(), coords })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, NfError> {
        self.check_same(other)?;
        if let Some(r) = self.as_rational() {
            return Ok(other.scale(r));
        }
        if let Some(r) = other.as_rational() {
            return Ok(self.scale(r));
        }
        let prod = qpoly::mul(&self.coords, &other.coords);
        Ok(AlgNumber { field: self.field.clone(), coords: reduce(&self.field, prod) })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, NfError> {
        self.check_same(other)?;
        self.checked_mul(&other.inv()?)
    }

    pub fn arith(a: &Self, b: &Self, op: ArithOp) -> Result<Self, NfError> {
        match op {
            ArithOp::Add => a.checked_add(b),
            ArithOp::Sub => a.checked_sub(b),
            ArithOp::Mul => a.checked_mul(b),
            ArithOp::Div => a.checked_div(b),
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let coords = self.coords.iter().map(|c| Rational::from(c * r)).collect();
        AlgNumber { field: self.field.clone(), coords }
    }

    pub fn inv(&self) -> Result<Self, NfError> {
        if self.is_zero() {
            return Err(NfError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(&self.field, Rational::from(r.recip_ref())));
        }
        if let FieldSpec::Quadratic { d } = self.spec() {
            // (u + v√d)⁻¹ = (u − v√d) / (u² − d v²)
            let (u, v) = (&self.coords[0], &self.coords[1]);
            let norm = Rational::from(u * u) - Rational::from(v * v) * Integer::from(*d);
            let ninv = norm.recip();
            let coords = vec![Rational::from(u * &ninv), -Rational::from(v * &ninv)];
            return Ok(AlgNumber { field: self.field.clone(), coords });
        }
        let m: Vec<Rational> = self.field.modulus().iter().map(|c| Rational::from(c.clone())).collect();
        let (g, s) = qpoly::half_ext_gcd(&self.coords, &m);
        debug_assert_eq!(g.len(), 1, "defining polynomial is irreducible");
        Ok(Self::from_coords(&self.field, s))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn powi(&self, e: i64) -> Result<Self, NfError> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    /// Largest bit length among coordinate numerators and denominators.
    pub fn max_bits(&self) -> u32 {
        self.coords
            .iter()
            .map(|c| c.numer().significant_bits().max(c.denom().significant_bits()))
            .max()
            .unwrap_or(0)
    }
}

fn reduce(field: &Field, mut coords: Vec<Rational>) -> Vec<Rational> {
    let modulus = field.modulus();
    let deg = modulus.len() - 1;
    if coords.len() > deg {
        for i in (deg..coords.len()).rev() {
            let c = std::mem::take(&mut coords[i]);
            if c == 0 {
                continue;
            }
            for (j, mj) in modulus.iter().enumerate().take(deg) {
                if *mj != 0 {
                    coords[i - deg + j] -= Rational::from(&c * mj);
                }
            }
        }
        coords.truncate(deg);
    }
    coords.resize(deg, Rational::new());
    coords
}

impl Add for &AlgNumber {
    type Output = AlgNumber;
    /// Panics on a field mismatch; use `checked_add` for fallible addition.
    fn add(self, rhs: &AlgNumber) -> AlgNumber {
        self.checked_add(rhs).expect("field mismatch in addition")
    }
}

impl Sub for &AlgNumber {
    type Output = AlgNumber;
    fn sub(self, rhs: &AlgNumber) -> AlgNumber {
        self.checked_sub(rhs).expect("field mismatch in subtraction")
    }
}

impl Mul for &AlgNumber {
    type Output = AlgNumber;
    fn mul(self, rhs: &AlgNumber) -> AlgNumber {
        self.checked_mul(rhs).expect("field mismatch in multiplication")
    }
}

impl Neg for &AlgNumber {
    type Output = AlgNumber;
    fn neg(self) -> AlgNumber {
        AlgNumber { field: self.field.clone(), coords: self.coords.iter().map(|c| Rational::from(-c)).collect() }
    }
}

impl Neg for AlgNumber {
    type Output = AlgNumber;
    fn neg(mut self) -> AlgNumber {
        for c in self.coords.iter_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

/// Literal form accepted by the parser: `p/q`, `p/q+r/s*sqrt`, `[c0,c1,...]`.
impl fmt::Display for AlgNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.spec() {
            FieldSpec::Rational => write!(f, "{}", self.coords[0]),
            FieldSpec::Quadratic { .. } => {
                let (u, v) = (&self.coords[0], &self.coords[1]);
                if *v == 0 {
                    write!(f, "{u}")
                } else if *u == 0 {
                    write!(f, "{v}*sqrt")
                } else if *v < 0 {
                    write!(f, "{u}-{}*sqrt", Rational::from(-v))
                } else {
                    write!(f, "{u}+{v}*sqrt")
                }
            }
            FieldSpec::Cyclotomic { .. } => {
                write!(f, "[")?;
                for (i, c) in self.coords.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "]")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad(d: i64) -> Field {
        Field::new(FieldSpec::quadratic(d).unwrap())
    }

    fn q(u: i64, v: i64, f: &Field) -> AlgNumber {
        AlgNumber::from_coords(f, vec![Rational::from(u), Rational::from(v)])
    }

    #[test]
    fn difference_of_squares() {
        let f = quad(2);
        let p = &q(1, 1, &f) * &q(1, -1, &f);
        assert_eq!(p, AlgNumber::from_int(&f, -1));
    }

    #[test]
    fn i_squared() {
        let f = Field::new(FieldSpec::Cyclotomic { n: 4 });
        let z = AlgNumber::generator(&f);
        assert_eq!(&z * &z, AlgNumber::from_int(&f, -1));
    }

    #[test]
    fn rational_inverse() {
        let f = Field::rational();
        let third = AlgNumber::from_rational(&f, Rational::from((1, 3)));
        assert_eq!(third.inv().unwrap(), AlgNumber::from_int(&f, 3));
    }

    #[test]
    fn cyclotomic_inverse_and_errors() {
        let f = Field::new(FieldSpec::Cyclotomic { n: 5 });
        let a = &AlgNumber::generator(&f) + &AlgNumber::from_int(&f, 2);
        let b = a.inv().unwrap();
        assert!((&a * &b).is_one());
        assert_eq!(AlgNumber::zero(&f).inv(), Err(NfError::DivisionByZero));
        let g = quad(3);
        assert!(matches!(a.checked_add(&AlgNumber::one(&g)), Err(NfError::FieldMismatch { .. })));
    }

    #[test]
    fn zeta_power_wraps_negative() {
        let f = Field::new(FieldSpec::Cyclotomic { n: 7 });
        let z = AlgNumber::generator(&f);
        assert_eq!(AlgNumber::zeta_power(&f, -1).unwrap(), z.pow(6));
        assert!(z.pow(7).is_one());
    }
}
