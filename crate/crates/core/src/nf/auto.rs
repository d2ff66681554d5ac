use std::fmt;

use rug::Rational;
use serde::{Deserialize, Serialize};

use super::element::AlgNumber;
use super::field::{gcd_u64, Field, FieldSpec};
use super::NfError;

/// Field automorphism. Quadratic fields: `k = 1` fixes √d, `k = −1` negates it.
/// Cyclotomic fields: ζ ↦ ζ^k with gcd(k, n) = 1, normalised to 1 ≤ k < n.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Automorphism {
    field: FieldSpec,
    k: i64,
}

impl Automorphism {
    pub fn new(field: FieldSpec, k: i64) -> Result<Self, NfError> {
        let k = match &field {
            FieldSpec::Rational if k == 1 => 1,
            FieldSpec::Quadratic { .. } if k == 1 || k == -1 => k,
            FieldSpec::Cyclotomic { n } => {
                let r = k.rem_euclid(*n as i64);
                if gcd_u64(r as u64, *n as u64) != 1 {
                    return Err(NfError::InvalidArgument(format!("exponent {k} is not a unit modulo {n}")));
                }
                r
            }
            _ => return Err(NfError::InvalidArgument(format!("no automorphism with exponent {k} on {field}"))),
        };
        Ok(Automorphism { field, k })
    }

    pub fn identity(field: FieldSpec) -> Self {
        Automorphism { field, k: 1 }
    }

    /// Complex conjugation (ζ ↦ ζ⁻¹; on Q(√d) it negates √d only when d < 0).
    pub fn conjugation(field: FieldSpec) -> Self {
        let k = match &field {
            FieldSpec::Rational => 1,
            FieldSpec::Quadratic { d } => {
                if *d < 0 {
                    -1
                } else {
                    1
                }
            }
            FieldSpec::Cyclotomic { n } => *n as i64 - 1,
        };
        Automorphism { field, k }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn exponent(&self) -> i64 {
        self.k
    }

    pub fn is_identity(&self) -> bool {
        self.k == 1
    }

    pub fn compose(&self, other: &Automorphism) -> Result<Automorphism, NfError> {
        if self.field != other.field {
            return Err(NfError::FieldMismatch { left: self.field.clone(), right: other.field.clone() });
        }
        let k = match self.field {
            FieldSpec::Cyclotomic { n } => (self.k * other.k).rem_euclid(n as i64),
            _ => self.k * other.k,
        };
        Ok(Automorphism { field: self.field.clone(), k })
    }

    pub fn inverse(&self) -> Automorphism {
        let k = match self.field {
            FieldSpec::Cyclotomic { n } => (1..n as i64).find(|j| (j * self.k) % n as i64 == 1).unwrap(),
            _ => self.k,
        };
        Automorphism { field: self.field.clone(), k }
    }
}

impl fmt::Display for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.field {
            FieldSpec::Rational => write!(f, "id"),
            FieldSpec::Quadratic { d } => {
                if self.k == 1 {
                    write!(f, "id")
                } else {
                    write!(f, "sqrt({d}) -> -sqrt({d})")
                }
            }
            FieldSpec::Cyclotomic { n } => write!(f, "zeta{n} -> zeta{n}^{}", self.k),
        }
    }
}

/// Exact image σ(a).
pub fn apply_auto(sigma: &Automorphism, a: &AlgNumber) -> Result<AlgNumber, NfError> {
    if sigma.field != *a.spec() {
        return Err(NfError::FieldMismatch { left: sigma.field.clone(), right: a.spec().clone() });
    }
    if sigma.is_identity() || a.as_rational().is_some() {
        return Ok(a.clone());
    }
    let c = a.coords();
    match &sigma.field {
        FieldSpec::Rational => Ok(a.clone()),
        FieldSpec::Quadratic { .. } => Ok(AlgNumber::from_coords(a.field(), vec![c[0].clone(), -c[1].clone()])),
        FieldSpec::Cyclotomic { n } => {
            let field = a.field();
            let mut out = vec![Rational::new(); field.degree()];
            for (j, cj) in c.iter().enumerate() {
                if *cj == 0 {
                    continue;
                }
                let e = (j as i64 * sigma.k).rem_euclid(*n as i64);
                let zp = AlgNumber::zeta_power(field, e)?;
                for (o, z) in out.iter_mut().zip(zp.coords()) {
                    if *z != 0 {
                        *o += Rational::from(cj * z);
                    }
                }
            }
            Ok(AlgNumber::from_coords(field, out))
        }
    }
}

/// All automorphisms of a quadratic or cyclotomic field, identity first.
pub fn galois_group(field: &FieldSpec) -> Result<Vec<Automorphism>, NfError> {
    match field {
        FieldSpec::Rational => Err(NfError::Unsupported("Galois group of Q as an extension".into())),
        FieldSpec::Quadratic { .. } => {
            Ok(vec![Automorphism::identity(field.clone()), Automorphism { field: field.clone(), k: -1 }])
        }
        FieldSpec::Cyclotomic { n } => Ok((1..*n as i64)
            .filter(|k| gcd_u64(*k as u64, *n as u64) == 1)
            .map(|k| Automorphism { field: field.clone(), k })
            .collect()),
    }
}

/// Norm to Q of a polynomial with coefficients in a field: Π_σ σ(f), which has rational
/// coefficients.
pub fn norm_polynomial(f: &[AlgNumber], field: &Field) -> Result<Vec<Rational>, NfError> {
    if f.iter().all(|c| c.as_rational().is_some()) {
        return Ok(f.iter().map(|c| c.as_rational().unwrap().clone()).collect());
    }
    let mut acc: Vec<AlgNumber> = vec![AlgNumber::one(field)];
    for sigma in galois_group(field.spec())? {
        let g: Vec<AlgNumber> = f.iter().map(|c| apply_auto(&sigma, c)).collect::<Result<_, _>>()?;
        let mut next = vec![AlgNumber::zero(field); acc.len() + g.len() - 1];
        for (i, x) in acc.iter().enumerate() {
            for (j, y) in g.iter().enumerate() {
                next[i + j] = &next[i + j] + &(x * y);
            }
        }
        acc = next;
    }
    acc.iter()
        .map(|c| c.as_rational().cloned().ok_or_else(|| NfError::Unsupported("norm not rational".into())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta3_squared() {
        let f = Field::new(FieldSpec::Cyclotomic { n: 3 });
        let z = AlgNumber::generator(&f);
        let s = Automorphism::new(f.spec().clone(), 2).unwrap();
        assert_eq!(apply_auto(&s, &z).unwrap(), z.pow(2));
    }

    #[test]
    fn conjugation_fixes_real_element() {
        let f = Field::new(FieldSpec::Cyclotomic { n: 5 });
        let z = AlgNumber::generator(&f);
        let x = &z + &z.inv().unwrap();
        let c = Automorphism::conjugation(f.spec().clone());
        assert_eq!(apply_auto(&c, &x).unwrap(), x);
        assert_eq!(apply_auto(&c, &apply_auto(&c, &z).unwrap()).unwrap(), z);
    }

    #[test]
    fn quadratic_conjugate() {
        let f = Field::new(FieldSpec::quadratic(7).unwrap());
        let a = AlgNumber::from_coords(&f, vec![Rational::from(2), Rational::from(3)]);
        let s = Automorphism::new(f.spec().clone(), -1).unwrap();
        assert_eq!(apply_auto(&s, &a).unwrap().coords()[1], -3);
    }

    #[test]
    fn group_sizes_and_closure() {
        let g5 = galois_group(&FieldSpec::Cyclotomic { n: 5 }).unwrap();
        assert_eq!(g5.iter().map(|s| s.exponent()).collect::<Vec<_>>(), vec![1, 2, 3, 4]);
        let g8 = galois_group(&FieldSpec::Cyclotomic { n: 8 }).unwrap();
        assert_eq!(g8.iter().map(|s| s.exponent()).collect::<Vec<_>>(), vec![1, 3, 5, 7]);
        for a in &g8 {
            for b in &g8 {
                assert!(g8.contains(&a.compose(b).unwrap()));
            }
            assert!(a.compose(&a.inverse()).unwrap().is_identity());
        }
        assert_eq!(galois_group(&FieldSpec::quadratic(10).unwrap()).unwrap().len(), 2);
        assert!(galois_group(&FieldSpec::Rational).is_err());
    }

    #[test]
    fn norm_of_linear_polynomial() {
        // N(x − √2) = x² − 2
        let f = Field::new(FieldSpec::quadratic(2).unwrap());
        let p = vec![-AlgNumber::generator(&f), AlgNumber::one(&f)];
        let n = norm_polynomial(&p, &f).unwrap();
        assert_eq!(n, vec![Rational::from(-2), Rational::new(), Rational::from(1)]);
    }
}
