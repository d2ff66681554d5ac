//! Exact square roots inside the supported fields, with a designated branch.

use rug::integer::IsPrime;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use super::element::AlgNumber;
use super::embed::fixed_embeddings;
use super::field::{Field, FieldSpec};
use super::NfError;

/// Which of the two square roots is designated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SqrtBranch {
    /// The root whose first embedding has positive real part (positive imaginary part when
    /// the real part vanishes). For positive rationals this is the positive root.
    #[default]
    Principal,
    Negated,
}

/// Nonnegative rational square root, when r is a rational square.
pub fn sqrt_rational(r: &Rational) -> Option<Rational> {
    if *r < 0 {
        return None;
    }
    let (n, d) = (r.numer(), r.denom());
    if n.is_perfect_square() && d.is_perfect_square() {
        Some(Rational::from((n.clone().sqrt(), d.clone().sqrt())))
    } else {
        None
    }
}

/// Designated square root of a in its own field: Ok(None) when a is not a square there.
///
/// Errors with `Unsupported` for non-rational elements of cyclotomic fields of degree ≥ 4,
/// where squareness is not decided.
pub fn sqrt_in_field(a: &AlgNumber, branch: SqrtBranch) -> Result<Option<AlgNumber>, NfError> {
    if a.is_zero() {
        return Ok(Some(a.clone()));
    }
    let root = match a.field().degree() {
        1 => sqrt_rational(a.as_rational().unwrap()).map(|s| AlgNumber::from_rational(a.field(), s)),
        2 => sqrt_degree_two(a),
        _ => match a.as_rational() {
            Some(r) => sqrt_rational_in_cyclotomic(a.field(), r)?,
            None => {
                return Err(NfError::Unsupported(format!(
                    "square roots of non-rational elements of {}",
                    a.spec()
                )))
            }
        },
    };
    let Some(root) = root else { return Ok(None) };
    debug_assert_eq!(&(&root * &root), a);
    let principal = if is_principal(&root) { root } else { -root };
    Ok(Some(match branch {
        SqrtBranch::Principal => principal,
        SqrtBranch::Negated => -principal,
    }))
}

fn is_principal(s: &AlgNumber) -> bool {
    let fe = fixed_embeddings(s, 96 + s.max_bits());
    let lim = Integer::from(Integer::from_f64((fe.radius * 2f64.powi(fe.prec as i32)).ceil()).unwrap() + 1u32);
    let v = &fe.values[0];
    if Integer::from(v.re.abs_ref()) > lim {
        v.re > 0
    } else {
        v.im > 0
    }
}

/// Fields of degree 2: write the field as Q(w) with w² = D rational and solve
/// (x + y w)² = u + v w.
fn sqrt_degree_two(a: &AlgNumber) -> Option<AlgNumber> {
    let field = a.field();
    // w = 2g + m1 where g² + m1 g + m0 = 0 (for Q(√d), g = √d and m1 = 0)
    let m = field.modulus();
    let m1 = Rational::from(m[1].clone());
    let w2 = Rational::from(m[1].clone() * &m[1]) - Rational::from(m[0].clone() * 4u32);
    let (c0, c1) = (&a.coords()[0], &a.coords()[1]);
    let u = Rational::from(c0 - Rational::from(c1 * &m1) / 2u32);
    let v = Rational::from(c1 / 2u32);
    let to_field = |x: Rational, y: Rational| {
        let c0 = x + Rational::from(&y * &m1);
        let c1 = y * 2u32;
        AlgNumber::from_coords(field, vec![c0, c1])
    };
    if v == 0 {
        if let Some(s) = sqrt_rational(&u) {
            return Some(to_field(s, Rational::new()));
        }
        return sqrt_rational(&Rational::from(&u / &w2)).map(|y| to_field(Rational::new(), y));
    }
    let norm = Rational::from(u.square_ref()) - Rational::from(v.square_ref()) * &w2;
    let t = sqrt_rational(&norm)?;
    for cand in [Rational::from(&u + &t) / 2u32, Rational::from(&u - &t) / 2u32] {
        if cand == 0 {
            continue;
        }
        if let Some(x) = sqrt_rational(&cand) {
            let y = Rational::from(&v / &x) / 2u32;
            return Some(to_field(x, y));
        }
    }
    None
}

/// Primes dividing n to an odd power, or None if n cannot be fully factored cheaply.
fn odd_exponent_primes(n: &Integer) -> Option<Vec<u64>> {
    let mut rest = Integer::from(n.abs_ref());
    let mut out = Vec::new();
    let mut p: u64 = 2;
    while p <= 1_000_000 && rest > 1 {
        if Integer::from(p) * p > rest {
            break;
        }
        let mut e = 0;
        while rest.is_divisible_u(p as u32) {
            rest /= p;
            e += 1;
        }
        if e % 2 == 1 {
            out.push(p);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        if rest.is_perfect_square() {
            // remaining square part contributes nothing
        } else if rest.is_probably_prime(40) != IsPrime::No {
            out.push(rest.to_u64()?);
        } else {
            return None;
        }
    }
    out.sort_unstable();
    Some(out)
}

/// √r in Q(ζₙ) for rational r, built from quadratic Gauss sums: for odd p | n,
/// g_p = Σ (a/p) ζ_p^a squares to (−1)^{(p−1)/2} p; √2 = ζ₈ + ζ₈⁻¹; i = ζ₄.
fn sqrt_rational_in_cyclotomic(field: &Field, r: &Rational) -> Result<Option<AlgNumber>, NfError> {
    let FieldSpec::Cyclotomic { n } = field.spec() else { unreachable!() };
    let n = *n as u64;
    let prod = Integer::from(r.numer() * r.denom());
    let primes = odd_exponent_primes(&prod)
        .ok_or_else(|| NfError::Unsupported(format!("factoring {prod} to decide squareness")))?;
    let mut s = AlgNumber::one(field);
    let mut sign = 1i64;
    let mut squarefree = Integer::from(1);
    for &p in &primes {
        squarefree *= p;
        if p == 2 {
            if n % 8 != 0 {
                return Ok(None);
            }
            let z8 = AlgNumber::zeta_power(field, (n / 8) as i64)?;
            s = &s * &(&z8 + &z8.inv()?);
        } else {
            if n % p != 0 {
                return Ok(None);
            }
            let step = (n / p) as i64;
            let mut g = AlgNumber::zero(field);
            let pz = Integer::from(p);
            for a in 1..p {
                let chi = Integer::from(a).legendre(&pz);
                let term = AlgNumber::zeta_power(field, step * a as i64)?;
                g = if chi == 1 { &g + &term } else { &g - &term };
            }
            s = &s * &g;
            if p % 4 == 3 {
                sign = -sign;
            }
        }
    }
    let target_sign = if *r < 0 { -1 } else { 1 };
    if sign != target_sign {
        if n % 4 != 0 {
            return Ok(None);
        }
        s = &s * &AlgNumber::zeta_power(field, (n / 4) as i64)?;
    }
    // r = ±squarefree · q² with q rational
    let q2 = Rational::from(r.abs_ref()) / Rational::from(squarefree);
    let Some(q) = sqrt_rational(&q2) else { return Ok(None) };
    let root = s.scale(&q);
    if &(&root * &root) != &AlgNumber::from_rational(field, r.clone()) {
        return Ok(None);
    }
    Ok(Some(root))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(field: FieldSpec, r: i64, expect: bool) {
        let f = Field::new(field);
        let a = AlgNumber::from_int(&f, r);
        let s = sqrt_in_field(&a, SqrtBranch::Principal).unwrap();
        assert_eq!(s.is_some(), expect, "{r} in {}", f.spec());
        if let Some(s) = s {
            assert_eq!(&s * &s, a);
        }
    }

    #[test]
    fn rational_and_quadratic() {
        check(FieldSpec::Rational, 9, true);
        check(FieldSpec::Rational, 8, false);
        check(FieldSpec::quadratic(10).unwrap(), 10, true);
        check(FieldSpec::quadratic(10).unwrap(), 40, true);
        check(FieldSpec::quadratic(10).unwrap(), -10, false);
        let f = Field::new(FieldSpec::quadratic(2).unwrap());
        // (1 + √2)² = 3 + 2√2
        let a = AlgNumber::from_coords(&f, vec![Rational::from(3), Rational::from(2)]);
        let s = sqrt_in_field(&a, SqrtBranch::Principal).unwrap().unwrap();
        assert_eq!(s, AlgNumber::from_coords(&f, vec![Rational::from(1), Rational::from(1)]));
    }

    #[test]
    fn small_cyclotomic_fields() {
        check(FieldSpec::Cyclotomic { n: 3 }, -3, true);
        check(FieldSpec::Cyclotomic { n: 4 }, -1, true);
        check(FieldSpec::Cyclotomic { n: 4 }, 2, false);
        check(FieldSpec::Cyclotomic { n: 8 }, 2, true);
        check(FieldSpec::Cyclotomic { n: 8 }, -2, true);
        check(FieldSpec::Cyclotomic { n: 5 }, 5, true);
        check(FieldSpec::Cyclotomic { n: 5 }, -5, false);
        check(FieldSpec::Cyclotomic { n: 12 }, 3, true);
        check(FieldSpec::Cyclotomic { n: 12 }, -3, true);
        check(FieldSpec::Cyclotomic { n: 12 }, 12, true);
        check(FieldSpec::Cyclotomic { n: 12 }, 6, false);
        check(FieldSpec::Cyclotomic { n: 7 }, -63, true);
    }

    #[test]
    fn principal_branch_is_positive() {
        let f = Field::new(FieldSpec::Cyclotomic { n: 12 });
        let s = sqrt_in_field(&AlgNumber::from_int(&f, 3), SqrtBranch::Principal).unwrap().unwrap();
        let e = crate::nf::embeddings(&s, 1e-12).unwrap();
        assert!(e.iter().all(|e| (e.re.abs() - 3f64.sqrt()).abs() < 1e-9));
        assert!(e[0].re > 0.0);
        let n = sqrt_in_field(&AlgNumber::from_int(&f, 3), SqrtBranch::Negated).unwrap().unwrap();
        assert_eq!(n, -s);
    }

    #[test]
    fn cube_root_of_unity_is_a_square() {
        // ζ₃ = (ζ₃²)²
        let f = Field::new(FieldSpec::Cyclotomic { n: 3 });
        let z = AlgNumber::generator(&f);
        let s = sqrt_in_field(&z, SqrtBranch::Principal).unwrap().unwrap();
        assert_eq!(&s * &s, z);
    }
}
