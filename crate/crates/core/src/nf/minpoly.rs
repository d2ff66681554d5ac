use std::fmt;

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use super::element::AlgNumber;
use super::field::FieldSpec;
use super::qpoly;

/// Primitive integer polynomial with positive leading coefficient, low degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<Integer>,
}

impl IntPoly {
    /// Normalises any nonzero rational polynomial (content removed, leading coefficient > 0).
    pub fn from_rational(p: &[Rational]) -> Self {
        IntPoly { coeffs: qpoly::to_primitive_integer(p) }
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> &Integer {
        self.coeffs.last().expect("nonzero polynomial")
    }

    pub fn to_qpoly(&self) -> qpoly::QPoly {
        self.coeffs.iter().map(|c| Rational::from(c.clone())).collect()
    }

    /// Evaluates at an element of any supported field, exactly.
    pub fn eval_alg(&self, a: &AlgNumber) -> AlgNumber {
        let mut acc = AlgNumber::zero(a.field());
        for c in self.coeffs.iter().rev() {
            acc = &acc * a;
            acc = &acc + &AlgNumber::from_rational(a.field(), Rational::from(c.clone()));
        }
        acc
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let neg = *c < 0;
            let abs = Integer::from(c.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = abs != 1 || i == 0;
            if show_coeff {
                write!(f, "{abs}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}x", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}x^{i}", if show_coeff { "*" } else { "" })?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for IntPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        // Only the coefficient-list form round-trips; reports carry the display string.
        let v: Vec<String> = Vec::deserialize(d)?;
        let coeffs = v
            .iter()
            .map(|s| s.parse::<Integer>().map_err(serde::de::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IntPoly { coeffs })
    }
}

/// Minimal polynomial over Q, as a primitive integer polynomial.
///
/// Found as the first linear dependence among 1, a, a², … in the power basis.
pub fn minimal_polynomial(a: &AlgNumber) -> IntPoly {
    if let Some(r) = a.as_rational() {
        return IntPoly::from_rational(&[-r.clone(), Rational::from(1)]);
    }
    if let FieldSpec::Quadratic { d } = a.spec() {
        // x² − 2u x + (u² − d v²)
        let (u, v) = (&a.coords()[0], &a.coords()[1]);
        let c0 = Rational::from(u * u) - Rational::from(v * v) * Integer::from(*d);
        return IntPoly::from_rational(&[c0, Rational::from(u * -2), Rational::from(1)]);
    }
    let deg = a.field().degree();
    // rows of an echelon basis: (pivot, vector, combination of powers)
    let mut rows: Vec<(usize, Vec<Rational>, Vec<Rational>)> = Vec::new();
    let mut power = AlgNumber::one(a.field());
    for k in 0..=deg {
        let mut v = power.coords().to_vec();
        let mut comb = vec![Rational::new(); k + 1];
        comb[k] = Rational::from(1);
        for (pivot, rv, rc) in &rows {
            if v[*pivot] != 0 {
                let f = Rational::from(&v[*pivot] / &rv[*pivot]);
                for (x, y) in v.iter_mut().zip(rv) {
                    if *y != 0 {
                        *x -= Rational::from(&f * y);
                    }
                }
                for (x, y) in comb.iter_mut().zip(rc) {
                    if *y != 0 {
                        *x -= Rational::from(&f * y);
                    }
                }
            }
        }
        match v.iter().position(|x| *x != 0) {
            None => return IntPoly::from_rational(&comb),
            Some(p) => rows.push((p, v, comb)),
        }
        power = &power * a;
    }
    unreachable!("an element of a degree-{deg} field satisfies a relation of degree ≤ {deg}")
}

/// Minimal polynomial of ζₙ + ζₙ⁻¹ built from Φₙ through x = z + 1/z.
pub fn real_cyclotomic_minpoly(n: u32) -> IntPoly {
    let phi = super::field::cyclotomic_polynomial(n);
    let m = (phi.len() - 1) / 2;
    // Φₙ(z)/z^m = c_m + Σ_{j≥1} c_{m+j} (z^j + z^{-j}); z^j + z^{-j} = D_j(x)
    let mut dickson: Vec<Vec<Integer>> = vec![vec![Integer::from(2)], vec![Integer::ZERO, Integer::from(1)]];
    for j in 2..=m {
        let prev = &dickson[j - 1];
        let prev2 = &dickson[j - 2];
        let mut next = vec![Integer::ZERO; j + 1];
        for (i, c) in prev.iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, c) in prev2.iter().enumerate() {
            next[i] -= c;
        }
        dickson.push(next);
    }
    let mut out = vec![Integer::ZERO; m + 1];
    out[0] += &phi[m];
    for j in 1..=m {
        for (i, c) in dickson[j].iter().enumerate() {
            out[i] += Integer::from(c * &phi[m + j]);
        }
    }
    let q: Vec<Rational> = out.into_iter().map(Rational::from).collect();
    IntPoly::from_rational(&q)
}
