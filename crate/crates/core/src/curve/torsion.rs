use serde::{Deserialize, Serialize};

use super::{Curve, Point};
use crate::heights::{canonical_height_with, EstimatorConfig, HeightError};

/// Largest order searched by default when testing for torsion.
pub const DEFAULT_NMAX: u32 = 24;

/// Tolerance used when a canonical height is only needed to be bounded away from zero.
const CERTIFY_TOL: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict", content = "order")]
pub enum TorsionVerdict {
    /// kP = O for this minimal k ≤ Nmax.
    Torsion(u32),
    /// No order ≤ Nmax and the canonical-height interval excludes 0.
    NonTorsionCertified,
    Unknown,
}

/// Minimal k ≤ nmax with kP = O.
///
/// Only jP for j ≤ ⌈nmax/2⌉ are formed: if the order is k then ⌊k/2⌋P = −⌈k/2⌉P, and the
/// first j at which some iP = −jP (i ≤ j) occurs is ⌈k/2⌉, with i + j = k the least such sum.
pub fn torsion_order(curve: &Curve, p: &Point, nmax: u32) -> Option<u32> {
    if p.is_infinity() {
        return Some(1);
    }
    let half = nmax.div_ceil(2) as usize;
    let mut multiples: Vec<Point> = Vec::with_capacity(half);
    let mut q = p.clone();
    for j in 1..=half {
        multiples.push(q.clone());
        let neg = q.neg();
        if let Some(i) = multiples.iter().position(|m| *m == neg) {
            let k = (i + 1 + j) as u32;
            return (k <= nmax).then_some(k);
        }
        if j == half {
            break;
        }
        q = curve.add(&q, p);
        // any (j + 1)P = O was already caught as a collision at ⌈(j + 1)/2⌉
        debug_assert!(!q.is_infinity());
    }
    None
}

pub fn torsion_test(curve: &Curve, p: &Point, nmax: u32) -> TorsionVerdict {
    if let Some(k) = torsion_order(curve, p, nmax) {
        return TorsionVerdict::Torsion(k);
    }
    // the order search above already ran, so the estimator skips its own
    let cfg = EstimatorConfig { torsion_nmax: 0, ..EstimatorConfig::default() };
    let est = match canonical_height_with(curve, p, CERTIFY_TOL, &cfg) {
        Ok(e) => e,
        Err(HeightError::BudgetExhausted { best, .. }) => best,
        Err(_) => return TorsionVerdict::Unknown,
    };
    if est.lower() > 0.0 {
        TorsionVerdict::NonTorsionCertified
    } else {
        TorsionVerdict::Unknown
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nf::{AlgNumber, Field, FieldSpec};

    #[test]
    fn small_orders() {
        let c = Curve::over_q(0, 1, 0).unwrap();
        assert_eq!(torsion_test(&c, &c.point_q(0, 0).unwrap(), DEFAULT_NMAX), TorsionVerdict::Torsion(2));
        assert_eq!(torsion_test(&c, &Point::Infinity, DEFAULT_NMAX), TorsionVerdict::Torsion(1));
        let e = Curve::over_q(0, 0, 1).unwrap();
        assert_eq!(torsion_test(&e, &e.point_q(0, 1).unwrap(), DEFAULT_NMAX), TorsionVerdict::Torsion(3));
        assert_eq!(torsion_order(&e, &e.point_q(2, 3).unwrap(), DEFAULT_NMAX), Some(6));
    }

    #[test]
    fn sqrt10_point_is_certified_non_torsion() {
        let f = Field::new(FieldSpec::quadratic(10).unwrap());
        let c = Curve::from_rationals(&f, 0, 1, 0).unwrap();
        let p = c.point(AlgNumber::from_int(&f, 2), AlgNumber::generator(&f)).unwrap();
        assert_eq!(torsion_test(&c, &p, 20), TorsionVerdict::NonTorsionCertified);
    }
}
