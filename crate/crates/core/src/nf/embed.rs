use rug::ops::DivRounding;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use super::element::AlgNumber;
use super::field::{gcd_u64, FieldSpec};
use super::fixed::{self, FixedComplex};
use super::NfError;
use crate::estimate::HeightEstimate;

/// Working-precision doublings allowed before an approximation request fails.
pub const MAX_PRECISION_RETRIES: u32 = 10;

/// Complex approximation of one conjugate, within `radius` of the true value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Embedding {
    pub re: f64,
    pub im: f64,
    pub radius: f64,
}

impl Embedding {
    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// Embedding values at a fixed binary precision; all share one absolute error radius.
#[derive(Clone, Debug)]
pub(crate) struct FixedEmbeddings {
    pub prec: u32,
    pub values: Vec<FixedComplex>,
    pub radius: f64,
}

impl FixedEmbeddings {
    /// Interval for ln⁺|σ(a)| of one embedding.
    pub fn log_plus(&self, i: usize) -> (f64, f64) {
        log_plus_interval(self.values[i].ln_abs(self.prec), self.radius)
    }

    /// Interval for |σ(a)|.
    pub fn abs_interval(&self, i: usize) -> (f64, f64) {
        match self.values[i].ln_abs(self.prec) {
            None => (0.0, self.radius),
            Some(l) => {
                let m = l.exp();
                let slack = 4.0 * f64::EPSILON * m * (1.0 + l.abs());
                ((m - self.radius - slack).max(0.0), m + self.radius + slack)
            }
        }
    }
}

/// Exponents k (ascending) with gcd(k, n) = 1: σ_k sends ζ ↦ ζ^k.
pub(crate) fn unit_exponents(n: u32) -> Vec<u32> {
    (1..n).filter(|k| gcd_u64(*k as u64, n as u64) == 1).collect()
}

/// Evaluates every embedding at binary precision `prec`.
///
/// Embedding order: Q → the value itself; Q(√d) → √d ↦ +√d, then −√d (with √d = i√|d| for
/// d < 0); Q(ζₙ) → ζ ↦ e^{2πik/n} for k coprime to n, ascending.
pub(crate) fn fixed_embeddings(a: &AlgNumber, prec: u32) -> FixedEmbeddings {
    let ulp = (-(prec as f64)).exp2();
    let c = a.coords();
    match a.spec() {
        FieldSpec::Rational => {
            let v = FixedComplex { re: fixed::from_rational(&c[0], prec), im: Integer::ZERO };
            FixedEmbeddings { prec, values: vec![v], radius: ulp }
        }
        FieldSpec::Quadratic { d } => {
            let u = fixed::from_rational(&c[0], prec);
            let s = fixed::sqrt_int(d.unsigned_abs(), prec);
            let vs = Integer::from(c[1].numer() * &s).div_floor(c[1].denom());
            let radius = ulp * (fixed::abs_upper(&c[1]) + 3.0);
            let values = if *d > 0 {
                vec![
                    FixedComplex { re: Integer::from(&u + &vs), im: Integer::ZERO },
                    FixedComplex { re: Integer::from(&u - &vs), im: Integer::ZERO },
                ]
            } else {
                vec![FixedComplex { re: u.clone(), im: vs.clone() }, FixedComplex { re: u, im: -vs }]
            };
            FixedEmbeddings { prec, values, radius }
        }
        FieldSpec::Cyclotomic { n } => {
            let n = *n;
            let table = fixed::roots_of_unity(n, prec);
            let mut values = Vec::new();
            let nonzero: Vec<(usize, &Rational)> = c.iter().enumerate().filter(|(_, x)| **x != 0).collect();
            for k in unit_exponents(n) {
                let mut acc = FixedComplex::zero();
                for (j, cj) in &nonzero {
                    let z = &table[(*j as u64 * k as u64 % n as u64) as usize];
                    acc.re += Integer::from(cj.numer() * &z.re).div_floor(cj.denom());
                    acc.im += Integer::from(cj.numer() * &z.im).div_floor(cj.denom());
                }
                values.push(acc);
            }
            let sum_abs: f64 = nonzero.iter().map(|(_, cj)| 3.0 * fixed::abs_upper(cj) + 2.0).sum();
            FixedEmbeddings { prec, values, radius: ulp * sum_abs.max(1.0) }
        }
    }
}

/// Fixed embeddings whose shared radius is at most `precision`, doubling the working
/// precision on failure.
pub(crate) fn fixed_embeddings_within(a: &AlgNumber, precision: f64) -> Result<FixedEmbeddings, NfError> {
    let mut prec = 64 + a.max_bits() + (-precision.log2()).max(0.0).ceil() as u32;
    for _ in 0..=MAX_PRECISION_RETRIES {
        let e = fixed_embeddings(a, prec);
        if e.radius <= precision {
            return Ok(e);
        }
        prec *= 2;
    }
    Err(NfError::PrecisionExhausted { requested: precision })
}

/// One approximation per complex embedding, each within `precision` of the true conjugate.
pub fn embeddings(a: &AlgNumber, precision: f64) -> Result<Vec<Embedding>, NfError> {
    if !(precision > 0.0) {
        return Err(NfError::InvalidArgument("precision must be positive".into()));
    }
    // leave half the budget for the final rounding to f64
    let mut target = precision / 2.0;
    for _ in 0..=MAX_PRECISION_RETRIES {
        let fe = fixed_embeddings_within(a, target)?;
        let out: Vec<Embedding> = fe
            .values
            .iter()
            .map(|v| {
                let (re, im) = v.to_f64(fe.prec);
                let rounding = 2.0 * f64::EPSILON * (re.abs() + im.abs());
                Embedding { re, im, radius: fe.radius + rounding }
            })
            .collect();
        if out.iter().all(|e| e.radius <= precision && e.re.is_finite() && e.im.is_finite()) {
            return Ok(out);
        }
        if out.iter().any(|e| !e.re.is_finite() || !e.im.is_finite() || 2.0 * f64::EPSILON * e.abs() > precision) {
            // f64 output cannot represent the conjugates at this precision
            break;
        }
        target /= 2.0;
    }
    Err(NfError::PrecisionExhausted { requested: precision })
}

/// House: the maximum modulus over all conjugates.
pub fn house(a: &AlgNumber) -> Result<HeightEstimate, NfError> {
    house_within(a, 1e-12)
}

pub fn house_within(a: &AlgNumber, tol: f64) -> Result<HeightEstimate, NfError> {
    if let Some(r) = a.as_rational() {
        let v = r.to_f64().abs();
        let exact = Rational::from_f64(v).is_some_and(|x| x == Rational::from(r.abs_ref()));
        return Ok(if exact {
            HeightEstimate::exact(v)
        } else {
            HeightEstimate::approx(v, f64::EPSILON * v)
        });
    }
    let fe = fixed_embeddings_within(a, tol / 4.0)?;
    let (mut lo, mut hi) = (0.0f64, 0.0f64);
    for i in 0..fe.values.len() {
        let (l, h) = fe.abs_interval(i);
        lo = lo.max(l);
        hi = hi.max(h);
    }
    Ok(HeightEstimate::from_interval(lo, hi))
}

/// Interval for ln⁺ of a modulus m (given as ln m, or None for a zero centre) with
/// absolute uncertainty r.
pub(crate) fn log_plus_interval(ln_m: Option<f64>, r: f64) -> (f64, f64) {
    let Some(l) = ln_m else {
        return (0.0, r.max(1.0).ln());
    };
    let slack = 4.0 * f64::EPSILON * (l.abs() + 1.0);
    if l > 700.0 {
        // relative uncertainty r/m is far below f64 resolution
        return (l - slack, l + slack);
    }
    let m = l.exp();
    let lo = if m - r > 1.0 { (m - r).ln() - slack } else { 0.0 };
    let hi = if m + r > 1.0 { (m + r).ln() + slack } else { 0.0 };
    (lo.max(0.0), hi)
}
