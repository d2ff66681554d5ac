//! Dense univariate polynomials with coefficients in one field, low degree first.
//! The zero polynomial is the empty vector.

use super::element::AlgNumber;
use super::field::Field;

pub type KPoly = Vec<AlgNumber>;

pub fn trim(p: &mut KPoly) {
    while p.last().is_some_and(AlgNumber::is_zero) {
        p.pop();
    }
}

pub fn constant(field: &Field, v: i64) -> KPoly {
    let mut p = vec![AlgNumber::from_int(field, v)];
    trim(&mut p);
    p
}

pub fn add(a: &[AlgNumber], b: &[AlgNumber]) -> KPoly {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out: KPoly = long.to_vec();
    for (o, s) in out.iter_mut().zip(short) {
        *o = &*o + s;
    }
    trim(&mut out);
    out
}

pub fn neg(a: &[AlgNumber]) -> KPoly {
    a.iter().map(|c| -c).collect()
}

pub fn sub(a: &[AlgNumber], b: &[AlgNumber]) -> KPoly {
    add(a, &neg(b))
}

pub fn mul(a: &[AlgNumber], b: &[AlgNumber]) -> KPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![AlgNumber::zero(a[0].field()); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
    }
    trim(&mut out);
    out
}

pub fn scale(a: &[AlgNumber], s: &AlgNumber) -> KPoly {
    let mut out: KPoly = a.iter().map(|c| c * s).collect();
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(a: &[AlgNumber], b: &[AlgNumber]) -> (KPoly, KPoly) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut r: KPoly = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead_inv = b.last().unwrap().inv().expect("trimmed leading coefficient is nonzero");
    let mut q = vec![AlgNumber::zero(b[0].field()); r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() * &lead_inv;
        for (k, bk) in b.iter().enumerate() {
            r[shift + k] = &r[shift + k] - &(&c * bk);
        }
        q[shift] = c;
        r.pop();
        trim(&mut r);
    }
    (q, r)
}

pub fn monic(a: &[AlgNumber]) -> KPoly {
    match a.last() {
        None => Vec::new(),
        Some(l) => scale(a, &l.inv().expect("nonzero leading coefficient")),
    }
}

/// Monic gcd (empty when both inputs are zero).
pub fn gcd(a: &[AlgNumber], b: &[AlgNumber]) -> KPoly {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    monic(&x)
}

pub fn derivative(a: &[AlgNumber]) -> KPoly {
    let mut out: KPoly = a.iter().enumerate().skip(1).map(|(i, c)| c.scale(&rug::Rational::from(i))).collect();
    trim(&mut out);
    out
}

pub fn eval(a: &[AlgNumber], x: &AlgNumber) -> AlgNumber {
    a.iter().rev().fold(AlgNumber::zero(x.field()), |acc, c| &(&acc * x) + c)
}

pub fn degree(a: &[AlgNumber]) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}
