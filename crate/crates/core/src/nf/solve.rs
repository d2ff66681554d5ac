//! Roots of polynomials inside a supported field, through linear and quadratic factors
//! over Q of the norm, plus a certified integer-lattice search for what is left.

use nalgebra::{Complex, DMatrix, DVector};
use rug::{Integer, Rational};

use super::auto::norm_polynomial;
use super::element::AlgNumber;
use super::embed::unit_exponents;
use super::field::{Field, FieldSpec};
use super::kpoly::eval;
use super::qpoly::{self, QPoly};
use super::roots::{isolate_roots, small_factors, SmallFactors};
use super::sqrt::{sqrt_in_field, SqrtBranch};
use super::NfError;

/// Roots found in a field; `complete` is false when some factor could not be searched.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldRoots {
    pub roots: Vec<AlgNumber>,
    pub complete: bool,
}

/// Distinct roots in `field` of f = Σ f_i xⁱ (coefficients in `field`, not all zero).
///
/// A root of f is a root of its norm to Q, so only factors of the norm over Q matter.
/// Factors of degree ≤ 2 are always found. A leftover factor of higher degree can only
/// contribute roots when the field has degree ≥ 3; cyclotomic fields then get a certified
/// search (see `residual_roots`), and the result is incomplete only if that search is too
/// large or its error bound too wide.
pub fn roots_in_field(f: &[AlgNumber], field: &Field) -> Result<FieldRoots, NfError> {
    let f: Vec<AlgNumber> = f.iter().map(|c| c.lift(field)).collect::<Result<_, _>>()?;
    if f.iter().all(AlgNumber::is_zero) {
        return Err(NfError::InvalidArgument("roots of the zero polynomial".into()));
    }
    let norm = norm_polynomial(&f, field)?;
    let sf = small_factors(&norm)?;
    let mut roots: Vec<AlgNumber> = Vec::new();
    let push = |r: AlgNumber, roots: &mut Vec<AlgNumber>| {
        if eval(&f, &r).is_zero() && !roots.contains(&r) {
            roots.push(r);
        }
    };
    for r in &sf.rational_roots {
        push(AlgNumber::from_rational(field, r.clone()), &mut roots);
    }
    let mut complete = sf.residual_degree == 0 || field.degree() <= 2;
    if !complete {
        if let Some(found) = residual_roots(&norm, &sf, field)? {
            complete = true;
            for r in found {
                push(r, &mut roots);
            }
        }
    }
    for [c0, c1, c2] in &sf.quadratics {
        let disc = Rational::from(c1 * c1) - Rational::from(c0 * c2) * 4u32;
        let s = match sqrt_in_field(&AlgNumber::from_rational(field, disc), SqrtBranch::Principal) {
            Ok(Some(s)) => s,
            Ok(None) => continue,
            Err(NfError::Unsupported(_)) => {
                complete = false;
                continue;
            }
            Err(e) => return Err(e),
        };
        let den = Rational::from((1, c2.clone() * 2u32));
        let minus_b = AlgNumber::from_rational(field, Rational::from(-c1));
        push((&minus_b + &s).scale(&den), &mut roots);
        push((&minus_b - &s).scale(&den), &mut roots);
    }
    Ok(FieldRoots { roots, complete })
}

/// Largest number of conjugate assignments tried by `residual_roots`.
const MAX_ASSIGNMENTS: usize = 1 << 12;

/// Rounding is trusted only when the propagated error stays below this.
const ROUNDING_MARGIN: f64 = 0.25;

/// The squarefree part of `norm` with its linear and quadratic factors over Q removed.
fn residual_factor(norm: &[Rational], sf: &SmallFactors) -> QPoly {
    let mut g = qpoly::squarefree_part(norm);
    for r in &sf.rational_roots {
        g = qpoly::divrem(&g, &[Rational::from(-r), Rational::from(1)]).0;
    }
    for q in &sf.quadratics {
        let q: Vec<Rational> = q.iter().map(|c| Rational::from(c.clone())).collect();
        g = qpoly::divrem(&g, &q).0;
    }
    g
}

/// Every root in Q(ζₙ) of the residual factor g, or None when the search cannot be certified.
///
/// With ℓ the leading coefficient of g as a primitive integer polynomial, β = ℓα is an
/// algebraic integer, so its coordinates in the power basis of Z[ζₙ] are integers. Each
/// embedding sends α to a root of g; conjugate embeddings take conjugate roots, so
/// assigning roots to the embeddings ζ ↦ e^{2πik/n} with k < n/2 fixes all of them. Each
/// assignment gives a Vandermonde system for the coordinates, which is solved in floating
/// point and rounded; the rounding is certified when the propagated error stays below 1/4,
/// and every candidate is then checked exactly.
fn residual_roots(norm: &[Rational], sf: &SmallFactors, field: &Field) -> Result<Option<Vec<AlgNumber>>, NfError> {
    let FieldSpec::Cyclotomic { n } = *field.spec() else { return Ok(None) };
    let g = residual_factor(norm, sf);
    let gi = qpoly::to_primitive_integer(&g);
    let lead = gi.last().cloned().unwrap_or_default();
    let ks = unit_exponents(n);
    let dim = ks.len();
    let half: Vec<usize> = (0..dim).filter(|&i| 2 * ks[i] < n).collect();
    let roots = isolate_roots(&gi, Some(&Rational::from((1, Integer::from(1) << 60))))?;
    let m = roots.len();
    let Some(count) = m.checked_pow(half.len() as u32).filter(|c| *c <= MAX_ASSIGNMENTS) else { return Ok(None) };
    let v = DMatrix::from_fn(dim, dim, |i, j| {
        let t = 2.0 * std::f64::consts::PI * (ks[i] as u64 * j as u64 % n as u64) as f64 / n as f64;
        Complex::new(t.cos(), t.sin())
    });
    let Some(vinv) = v.clone().lu().try_inverse() else { return Ok(None) };
    let vinv_norm = (0..dim).map(|i| vinv.row(i).iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max);
    let l = lead.to_f64();
    let pts: Vec<Complex<f64>> = roots.iter().map(|d| Complex::new(d.re.to_f64() * l, d.im.to_f64() * l)).collect();
    let max_rad = roots.iter().map(|d| d.radius.to_f64()).fold(0.0, f64::max) * l.abs();
    let max_w = pts.iter().map(|z| z.norm()).fold(0.0, f64::max);
    // disc radii, f64 rounding of the right-hand side, and the solve itself
    let err = vinv_norm * (max_rad + 8.0 * f64::EPSILON * max_w) * 4.0 + 64.0 * f64::EPSILON * vinv_norm * max_w * dim as f64;
    if !(err < ROUNDING_MARGIN) {
        return Ok(None);
    }
    let pos = |k: u32| ks.iter().position(|&x| x == k).expect("unit exponent");
    let mut found = Vec::new();
    for mut code in 0..count {
        let mut w = DVector::from_element(dim, Complex::new(0.0, 0.0));
        for &i in &half {
            let z = pts[code % m];
            code /= m;
            w[i] = z;
            w[pos(n - ks[i])] = z.conj();
        }
        let c = &vinv * w;
        let coords: Option<Vec<Rational>> = c
            .iter()
            .map(|z| {
                let r = z.re.round();
                ((z.re - r).abs() <= ROUNDING_MARGIN && z.im.abs() <= ROUNDING_MARGIN).then(|| Rational::from((Integer::from(r as i64), lead.clone())))
            })
            .collect();
        let Some(coords) = coords else { continue };
        let alpha = AlgNumber::from_coords(field, coords);
        let gk: Vec<AlgNumber> = g.iter().map(|c| AlgNumber::from_rational(field, c.clone())).collect();
        if eval(&gk, &alpha).is_zero() && !found.contains(&alpha) {
            found.push(alpha);
        }
    }
    Ok(Some(found))
}
