//! Division polynomials ψ_m for y² = F(x) = x³ + ax² + bx + c.
//!
//! ψ_m = f_m(x) for odd m and ψ_m = 2y·f_m(x) for even m. With R = (2y)² = 4F the
//! recursion closes on the f_m:
//!   f_{2k+1} = R²·f_{k+2}f_k³ − f_{k−1}f_{k+1}³   (k even)
//!   f_{2k+1} = f_{k+2}f_k³ − R²·f_{k−1}f_{k+1}³   (k odd)
//!   f_{2k}   = f_k·(f_{k+2}f_{k−1}² − f_{k−2}f_{k+1}²)

use std::collections::BTreeMap;
use std::fmt;

use super::{Curve, CurveError, Point};
use crate::nf::kpoly::{self, KPoly};
use crate::nf::{roots_in_field, sqrt_in_field, AlgNumber, Field, NfError, SqrtBranch};

/// ψ_m split as (2y)^{[m even]}·x_part(x).
#[derive(Clone, Debug, PartialEq)]
pub struct DivisionPolynomial {
    m: u32,
    x_part: KPoly,
    y_factor: bool,
}

impl DivisionPolynomial {
    pub fn index(&self) -> u32 {
        self.m
    }

    /// Coefficients of the x-part, low degree first.
    pub fn x_part(&self) -> &[AlgNumber] {
        &self.x_part
    }

    /// True for even m, where ψ_m carries the factor 2y.
    pub fn has_y_factor(&self) -> bool {
        self.y_factor
    }

    pub fn x_degree(&self) -> usize {
        kpoly::degree(&self.x_part).unwrap_or(0)
    }

    /// (m² − 1)/2 for odd m, (m² − 4)/2 for even m.
    pub fn expected_x_degree(m: u32) -> usize {
        let m2 = (m as usize) * (m as usize);
        if m % 2 == 1 {
            (m2 - 1) / 2
        } else {
            (m2 - 4) / 2
        }
    }
}

impl fmt::Display for DivisionPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y_factor {
            write!(f, "2y*(")?;
        }
        let mut first = true;
        for (i, c) in self.x_part.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        if self.y_factor {
            write!(f, ")")?;
        }
        Ok(())
    }
}

struct Builder {
    r2: KPoly,
    memo: BTreeMap<u32, KPoly>,
}

impl Builder {
    fn f(&mut self, m: u32) -> KPoly {
        if let Some(p) = self.memo.get(&m) {
            return p.clone();
        }
        let k = m / 2;
        let p = if m % 2 == 1 {
            let (a, b, c, d) = (self.f(k + 2), self.f(k), self.f(k - 1), self.f(k + 1));
            let left = kpoly::mul(&a, &kpoly::mul(&b, &kpoly::mul(&b, &b)));
            let right = kpoly::mul(&c, &kpoly::mul(&d, &kpoly::mul(&d, &d)));
            if k % 2 == 0 {
                kpoly::sub(&kpoly::mul(&self.r2, &left), &right)
            } else {
                kpoly::sub(&left, &kpoly::mul(&self.r2, &right))
            }
        } else {
            let (a, b, c, d, e) = (self.f(k + 2), self.f(k - 1), self.f(k - 2), self.f(k + 1), self.f(k));
            let inner = kpoly::sub(&kpoly::mul(&a, &kpoly::mul(&b, &b)), &kpoly::mul(&c, &kpoly::mul(&d, &d)));
            kpoly::mul(&e, &inner)
        };
        self.memo.insert(m, p.clone());
        p
    }
}

/// ψ_m for m ≥ 1.
pub fn division_polynomial(curve: &Curve, m: u32) -> Result<DivisionPolynomial, CurveError> {
    if m == 0 {
        return Err(CurveError::InvalidArgument("division polynomial index must be at least 1".into()));
    }
    let field = curve.field();
    let k = |v: i64| AlgNumber::from_int(field, v);
    let (a, b, c) = (curve.a(), curve.b(), curve.c());
    // b2 = 4a, b4 = 2b, b6 = 4c, b8 = 4ac − b²
    let b2 = &k(4) * a;
    let b4 = &k(2) * b;
    let b6 = &k(4) * c;
    let b8 = &(&k(4) * &(a * c)) - &(b * b);
    let psi3 = vec![b8.clone(), &k(3) * &b6, &k(3) * &b4, b2.clone(), k(3)];
    let psi4 = vec![
        &(&b4 * &b8) - &(&b6 * &b6),
        &(&b2 * &b8) - &(&b4 * &b6),
        &k(10) * &b8,
        &k(10) * &b6,
        &k(5) * &b4,
        b2.clone(),
        k(2),
    ];
    let r = vec![&k(4) * c, &k(4) * b, &k(4) * a, k(4)];
    let mut memo = BTreeMap::new();
    memo.insert(0, Vec::new());
    memo.insert(1, kpoly::constant(field, 1));
    memo.insert(2, kpoly::constant(field, 1));
    memo.insert(3, psi3);
    memo.insert(4, psi4);
    let mut builder = Builder { r2: kpoly::mul(&r, &r), memo };
    let x_part = builder.f(m);
    Ok(DivisionPolynomial { m, x_part, y_factor: m % 2 == 0 })
}

fn cubic(curve: &Curve) -> KPoly {
    vec![curve.c().clone(), curve.b().clone(), curve.a().clone(), AlgNumber::one(curve.field())]
}

/// Number of points P over the algebraic closure with mP = O, computed from the division
/// data: distinct roots of f_m not shared with F give two points each, roots of F give one
/// (even m only), plus O. Distinctness is decided by exact gcds over the curve's field.
pub fn geometric_torsion_count(curve: &Curve, m: u32) -> Result<u64, CurveError> {
    let dp = division_polynomial(curve, m)?;
    let f = dp.x_part();
    let distinct = |p: &[AlgNumber]| -> usize {
        let d = kpoly::degree(p).unwrap_or(0);
        d - kpoly::degree(&kpoly::gcd(p, &kpoly::derivative(p))).unwrap_or(0)
    };
    let cub = cubic(curve);
    let rad_f = {
        let g = kpoly::gcd(f, &kpoly::derivative(f));
        if g.is_empty() {
            f.to_vec()
        } else {
            kpoly::divrem(f, &g).0
        }
    };
    let shared = kpoly::degree(&kpoly::gcd(&rad_f, &cub)).unwrap_or(0);
    let f_roots = distinct(f);
    let mut count = 2 * (f_roots - shared) as u64 + 1;
    if m % 2 == 0 {
        count += distinct(&cub) as u64;
    } else {
        count += shared as u64;
    }
    Ok(count)
}

/// Result of searching for F-rational m-torsion.
#[derive(Clone, Debug, PartialEq)]
pub struct TorsionSearch {
    /// O first, then affine points in discovery order; each satisfies mP = O exactly.
    pub points: Vec<Point>,
    /// False when some factor of the division data could not be searched in F.
    pub complete: bool,
}

/// All points of the curve over `field` with mP = O.
pub fn torsion_points(curve: &Curve, m: u32, field: &Field) -> Result<TorsionSearch, CurveError> {
    let curve = curve.lift(field)?;
    let dp = division_polynomial(&curve, m)?;
    let mut complete = true;
    let mut xs: Vec<AlgNumber> = Vec::new();
    let mut sources: Vec<KPoly> = Vec::new();
    if kpoly::degree(dp.x_part()).is_some_and(|d| d > 0) {
        sources.push(dp.x_part().to_vec());
    }
    if m % 2 == 0 {
        sources.push(cubic(&curve));
    }
    for poly in &sources {
        let found = roots_in_field(poly, field)?;
        complete &= found.complete;
        for x in found.roots {
            if !xs.contains(&x) {
                xs.push(x);
            }
        }
    }
    let mut points = vec![Point::Infinity];
    for x in xs {
        let y2 = curve.rhs(&x);
        let y = match sqrt_in_field(&y2, SqrtBranch::Principal) {
            Ok(Some(y)) => y,
            Ok(None) => continue,
            Err(NfError::Unsupported(_)) => {
                complete = false;
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let candidates = if y.is_zero() { vec![y] } else { vec![y.clone(), -y] };
        for y in candidates {
            let p = Point::Affine { x: x.clone(), y };
            if curve.mul(m as i64, &p).is_infinity() && !points.contains(&p) {
                points.push(p);
            }
        }
    }
    Ok(TorsionSearch { points, complete })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nf::roots::count_distinct_roots;
    use crate::nf::FieldSpec;
    use rug::Rational;

    fn rational_coeffs(p: &[AlgNumber]) -> Vec<Rational> {
        p.iter().map(|c| c.as_rational().unwrap().clone()).collect()
    }

    #[test]
    fn small_indices() {
        let c = Curve::over_q(0, 1, 0).unwrap();
        let d2 = division_polynomial(&c, 2).unwrap();
        assert!(d2.has_y_factor());
        assert_eq!(d2.x_degree(), 0);
        let d3 = division_polynomial(&c, 3).unwrap();
        assert_eq!(d3.x_degree(), 4);
        // ψ₃ = 3x⁴ + 6bx² + 12cx − b² with b = 1, c = 0
        assert_eq!(rational_coeffs(d3.x_part()), crate::nf::qpoly::from_ints(&[-1, 0, 6, 0, 3]));
    }

    #[test]
    fn degrees_match_formula() {
        let c = Curve::over_q(2, -1, 3).unwrap();
        for m in 1..=9 {
            let d = division_polynomial(&c, m).unwrap();
            assert_eq!(d.x_degree(), DivisionPolynomial::expected_x_degree(m), "m = {m}");
        }
    }

    #[test]
    fn geometric_counts_are_squares() {
        for c in [Curve::over_q(0, 1, 0).unwrap(), Curve::over_q(0, -1, 1).unwrap(), Curve::over_q(1, 0, 1).unwrap()] {
            for m in 1..=5u32 {
                assert_eq!(geometric_torsion_count(&c, m).unwrap(), (m * m) as u64, "m = {m} on {c}");
            }
        }
    }

    #[test]
    fn numeric_root_count_agrees() {
        let c = Curve::over_q(0, 1, 0).unwrap();
        let d3 = division_polynomial(&c, 3).unwrap();
        assert_eq!(count_distinct_roots(&rational_coeffs(d3.x_part())).unwrap(), 4);
    }

    #[test]
    fn rational_torsion() {
        let q = Field::rational();
        let c = Curve::over_q(0, 1, 0).unwrap();
        let t = torsion_points(&c, 2, &q).unwrap();
        assert_eq!(t.points, vec![Point::Infinity, c.point_q(0, 0).unwrap()]);
        assert!(t.complete);
        let c = Curve::over_q(0, -1, 0).unwrap();
        assert_eq!(torsion_points(&c, 2, &q).unwrap().points.len(), 4);
        let c = Curve::over_q(0, 0, 1).unwrap();
        let mut t = torsion_points(&c, 3, &q).unwrap().points;
        t.sort_by_key(|p| p.to_string());
        assert_eq!(t, vec![c.point_q(0, -1).unwrap(), c.point_q(0, 1).unwrap(), Point::Infinity]);
    }

    #[test]
    fn gaussian_two_torsion() {
        let g = Field::new(FieldSpec::Cyclotomic { n: 4 });
        let c = Curve::over_q(0, 1, 0).unwrap();
        assert_eq!(torsion_points(&c, 2, &g).unwrap().points.len(), 4);
    }
}
