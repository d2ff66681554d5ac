use rug::Integer;

use super::element::AlgNumber;
use super::embed::{fixed_embeddings_within, MAX_PRECISION_RETRIES};
use super::field::FieldSpec;
use super::fixed;
use super::minpoly::minimal_polynomial;
use super::NfError;
use crate::estimate::HeightEstimate;

/// Default radius for Weil heights when no tolerance is supplied.
pub const DEFAULT_HEIGHT_TOL: f64 = 1e-12;

/// Exponent N with a^N = 1 for every root of unity a in the field.
fn unity_exponent(spec: &FieldSpec) -> u64 {
    match spec {
        FieldSpec::Rational => 2,
        FieldSpec::Quadratic { .. } => 12,
        FieldSpec::Cyclotomic { n } => {
            let n = *n as u64;
            if n % 2 == 0 {
                n
            } else {
                2 * n
            }
        }
    }
}

/// Exact root-of-unity test. Roots of unity are algebraic integers, so a cheap
/// denominator check filters first (quadratic coordinates of integers may be halves).
pub fn is_root_of_unity(a: &AlgNumber) -> bool {
    if a.is_zero() {
        return false;
    }
    let denom_ok = match a.spec() {
        FieldSpec::Quadratic { .. } => a.coords().iter().all(|c| *c.denom() == 1 || *c.denom() == 2),
        _ => a.has_integral_coords(),
    };
    denom_ok && a.pow(unity_exponent(a.spec())).is_one()
}

/// Absolute logarithmic Weil height with the default tolerance.
pub fn weil_height(a: &AlgNumber) -> HeightEstimate {
    weil_height_within(a, DEFAULT_HEIGHT_TOL).expect("default height tolerance is reachable")
}

/// Absolute logarithmic Weil height h(a) = (1/k)·log|lead m_a| + (1/D)·Σ_σ log⁺|σ(a)|,
/// k = deg m_a, D = field degree (the conjugates over all D embeddings repeat each root of
/// m_a exactly D/k times). Zero and roots of unity give an exact 0.
///
/// The returned radius is at most max(tol, 16ε·(|h| + 1)); the second term is the floor set
/// by f64 output.
pub fn weil_height_within(a: &AlgNumber, tol: f64) -> Result<HeightEstimate, NfError> {
    if !(tol > 0.0) {
        return Err(NfError::InvalidArgument("height tolerance must be positive".into()));
    }
    if a.is_zero() || is_root_of_unity(a) {
        return Ok(HeightEstimate::exact(0.0));
    }
    if let Some(r) = a.as_rational() {
        let v = fixed::ln_max_num_den(r);
        return Ok(HeightEstimate::approx(v, 4.0 * f64::EPSILON * v.abs()));
    }
    let lead_part = if a.has_integral_coords() {
        0.0
    } else {
        let m = minimal_polynomial(a);
        let lead: &Integer = m.leading();
        fixed::ln_integer(lead) / m.degree() as f64
    };
    let deg = a.field().degree() as f64;
    let mut r = tol / 4.0;
    for _ in 0..=MAX_PRECISION_RETRIES {
        let fe = fixed_embeddings_within(a, r)?;
        let (mut lo, mut hi) = (0.0, 0.0);
        for i in 0..fe.values.len() {
            let (l, h) = fe.log_plus(i);
            lo += l;
            hi += h;
        }
        let est = HeightEstimate::from_interval(lo / deg + lead_part, hi / deg + lead_part);
        let est = HeightEstimate::approx(est.value, est.radius + 4.0 * f64::EPSILON * est.value.abs());
        // below ~ε·h only the f64 rounding of the sum remains, so more bits cannot help
        if est.radius <= tol.max(16.0 * f64::EPSILON * (est.value.abs() + 1.0)) {
            return Ok(est);
        }
        r /= 4.0;
    }
    Err(NfError::PrecisionExhausted { requested: tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nf::field::Field;
    use rug::Rational;

    #[test]
    fn rational_heights() {
        let q = Field::rational();
        assert!(weil_height(&AlgNumber::from_int(&q, 2)).contains(2f64.ln()));
        let x = AlgNumber::from_rational(&q, Rational::from((9, 40)));
        assert!(weil_height(&x).contains(40f64.ln()));
        assert_eq!(weil_height(&AlgNumber::zero(&q)), HeightEstimate::exact(0.0));
        assert_eq!(weil_height(&AlgNumber::from_int(&q, -1)), HeightEstimate::exact(0.0));
    }

    #[test]
    fn roots_of_unity_are_exactly_zero() {
        let f7 = Field::new(FieldSpec::Cyclotomic { n: 7 });
        assert_eq!(weil_height(&AlgNumber::generator(&f7)), HeightEstimate::exact(0.0));
        assert_eq!(weil_height(&-AlgNumber::generator(&f7)), HeightEstimate::exact(0.0));
        // ζ₃ = (−1 + √−3)/2 has half-integral coordinates in Q(√−3)
        let f = Field::new(FieldSpec::quadratic(-3).unwrap());
        let z3 = AlgNumber::from_coords(&f, vec![Rational::from((-1, 2)), Rational::from((1, 2))]);
        assert_eq!(weil_height(&z3), HeightEstimate::exact(0.0));
        let g = Field::new(FieldSpec::quadratic(-1).unwrap());
        assert_eq!(weil_height(&AlgNumber::generator(&g)), HeightEstimate::exact(0.0));
    }

    #[test]
    fn golden_ratio() {
        let f = Field::new(FieldSpec::quadratic(5).unwrap());
        let phi = AlgNumber::from_coords(&f, vec![Rational::from((1, 2)), Rational::from((1, 2))]);
        let expect = 0.5 * ((1.0 + 5f64.sqrt()) / 2.0).ln();
        let h = weil_height(&phi);
        assert!(h.contains(expect), "{h:?} vs {expect}");
        assert!(h.radius <= DEFAULT_HEIGHT_TOL);
    }

    #[test]
    fn non_integral_quadratic() {
        // a = √2/3: minimal polynomial 9x² − 2, Mahler measure 9·max(1,√2/3)² = 9
        let f = Field::new(FieldSpec::quadratic(2).unwrap());
        let a = AlgNumber::from_coords(&f, vec![Rational::new(), Rational::from((1, 3))]);
        assert!(weil_height(&a).contains(0.5 * 9f64.ln()));
        // i·r in Q(ζ₁₂) has the height of r
        let g = Field::new(FieldSpec::Cyclotomic { n: 12 });
        let i = AlgNumber::imaginary_unit(&g).unwrap();
        let x = i.scale(&Rational::from((7, 5)));
        let h = weil_height(&x);
        assert!(h.contains(7f64.ln()), "{h:?} vs {}", 7f64.ln());
    }
}
