//! Dense univariate polynomials over Q, low degree first. Trailing zeros are trimmed.

use rug::{Integer, Rational};

pub type QPoly = Vec<Rational>;

pub fn trim(p: &mut QPoly) {
    while p.last().is_some_and(|c| *c == 0) {
        p.pop();
    }
}

pub fn degree(p: &[Rational]) -> Option<usize> {
    p.iter().rposition(|c| *c != 0)
}

pub fn from_ints(c: &[i64]) -> QPoly {
    let mut p: QPoly = c.iter().map(|&v| Rational::from(v)).collect();
    trim(&mut p);
    p
}

pub fn add(a: &[Rational], b: &[Rational]) -> QPoly {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut c = a.get(i).cloned().unwrap_or_default();
        if let Some(bi) = b.get(i) {
            c += bi;
        }
        out.push(c);
    }
    trim(&mut out);
    out
}

pub fn sub(a: &[Rational], b: &[Rational]) -> QPoly {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut c = a.get(i).cloned().unwrap_or_default();
        if let Some(bi) = b.get(i) {
            c -= bi;
        }
        out.push(c);
    }
    trim(&mut out);
    out
}

pub fn mul(a: &[Rational], b: &[Rational]) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::new(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if *ai == 0 {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if *bj != 0 {
                out[i + j] += Rational::from(ai * bj);
            }
        }
    }
    trim(&mut out);
    out
}

pub fn scale(a: &[Rational], s: &Rational) -> QPoly {
    let mut out: QPoly = a.iter().map(|c| Rational::from(c * s)).collect();
    trim(&mut out);
    out
}

/// Quotient and remainder; panics on a zero divisor.
pub fn divrem(a: &[Rational], b: &[Rational]) -> (QPoly, QPoly) {
    let db = degree(b).expect("division by the zero polynomial");
    let mut rem: QPoly = a.to_vec();
    trim(&mut rem);
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let lead_inv = Rational::from(b[db].recip_ref());
    let mut quot = vec![Rational::new(); rem.len() - db];
    for i in (0..quot.len()).rev() {
        let c = Rational::from(&rem[i + db] * &lead_inv);
        if c != 0 {
            for (j, bj) in b.iter().enumerate().take(db + 1) {
                rem[i + j] -= Rational::from(&c * bj);
            }
        }
        quot[i] = c;
    }
    trim(&mut rem);
    trim(&mut quot);
    (quot, rem)
}

pub fn monic(a: &[Rational]) -> QPoly {
    match degree(a) {
        None => Vec::new(),
        Some(d) => {
            let inv = Rational::from(a[d].recip_ref());
            scale(a, &inv)
        }
    }
}

/// Monic greatest common divisor.
pub fn gcd(a: &[Rational], b: &[Rational]) -> QPoly {
    let mut x: QPoly = a.to_vec();
    let mut y: QPoly = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = monic(&r);
    }
    monic(&x)
}

/// Returns (g, s) with s·a ≡ g (mod m), g = gcd(a, m) monic.
pub fn half_ext_gcd(a: &[Rational], m: &[Rational]) -> (QPoly, QPoly) {
    let mut r0: QPoly = m.to_vec();
    let mut r1: QPoly = a.to_vec();
    trim(&mut r0);
    trim(&mut r1);
    let mut s0: QPoly = Vec::new();
    let mut s1: QPoly = vec![Rational::from(1)];
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1);
        let s = sub(&s0, &mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    let d = degree(&r0).expect("gcd of nonzero polynomials");
    let inv = Rational::from(r0[d].recip_ref());
    (scale(&r0, &inv), scale(&s0, &inv))
}

pub fn derivative(a: &[Rational]) -> QPoly {
    let mut out: QPoly = a.iter().enumerate().skip(1).map(|(i, c)| Rational::from(c * i as u32)).collect();
    trim(&mut out);
    out
}

pub fn eval(a: &[Rational], x: &Rational) -> Rational {
    let mut acc = Rational::new();
    for c in a.iter().rev() {
        acc *= x;
        acc += c;
    }
    acc
}

/// The monic squarefree part a / gcd(a, a').
pub fn squarefree_part(a: &[Rational]) -> QPoly {
    let g = gcd(a, &derivative(a));
    let (q, _) = divrem(a, &g);
    monic(&q)
}

/// Scale to a primitive integer polynomial with positive leading coefficient.
pub fn to_primitive_integer(a: &[Rational]) -> Vec<Integer> {
    let mut den = Integer::from(1);
    for c in a {
        den.lcm_mut(c.denom());
    }
    let mut out: Vec<Integer> = a.iter().map(|c| Integer::from(c.numer() * Integer::from(&den / c.denom()))).collect();
    let mut content = Integer::ZERO;
    for c in &out {
        content.gcd_mut(c);
    }
    if content != 0 {
        let neg = out.iter().rev().find(|c| **c != 0).is_some_and(|c| *c < 0);
        if neg {
            content = -content;
        }
        for c in out.iter_mut() {
            c.div_exact_mut(&content);
        }
    }
    while out.last().is_some_and(|c| *c == 0) {
        out.pop();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_reconstructs() {
        let a = from_ints(&[1, 0, 0, 1]); // x³ + 1
        let b = from_ints(&[1, 1]); // x + 1
        let (q, r) = divrem(&a, &b);
        assert_eq!(q, from_ints(&[1, -1, 1]));
        assert!(r.is_empty());
    }

    #[test]
    fn inverse_modulo() {
        // (x)^{-1} mod x² − 2 is x/2
        let (g, s) = half_ext_gcd(&from_ints(&[0, 1]), &from_ints(&[-2, 0, 1]));
        assert_eq!(g, from_ints(&[1]));
        assert_eq!(s, vec![Rational::new(), Rational::from((1, 2))]);
    }

    #[test]
    fn squarefree_and_primitive() {
        let p = mul(&from_ints(&[-1, 1]), &from_ints(&[-1, 1])); // (x−1)²
        assert_eq!(squarefree_part(&p), from_ints(&[-1, 1]));
        let q = vec![Rational::from((-1, 2)), Rational::from((1, 3))];
        let ints: Vec<i64> = to_primitive_integer(&q).iter().map(|c| c.to_i64().unwrap()).collect();
        assert_eq!(ints, vec![-3, 2]);
    }
}
