//! Fixed-point real and complex arithmetic on GMP integers.
//!
//! A value at precision `p` is an integer mantissa `m` standing for `m / 2^p`.
//! Every routine here documents its rounding error in units of `2^-p` (ulps).

use rug::ops::DivRounding;
use rug::{Integer, Rational};

/// Natural log of |n| as f64; n must be nonzero. Relative accuracy ~1e-16.
pub fn ln_integer(n: &Integer) -> f64 {
    debug_assert!(*n != 0);
    let bits = n.significant_bits();
    if bits <= 1000 {
        return n.to_f64().abs().ln();
    }
    let shift = bits - 64;
    let top = Integer::from(n.abs_ref()) >> shift;
    top.to_f64().ln() + shift as f64 * std::f64::consts::LN_2
}

/// log max(|p|, |q|) for a reduced fraction p/q, the height of a rational number.
pub fn ln_max_num_den(r: &Rational) -> f64 {
    if *r == 0 {
        return 0.0;
    }
    let (n, d) = (r.numer(), r.denom());
    if Integer::from(n.abs_ref()) >= *d {
        ln_integer(n)
    } else {
        ln_integer(d)
    }
}

/// Upper bound on |r| as f64 (may be +inf for astronomically large values).
pub fn abs_upper(r: &Rational) -> f64 {
    if *r == 0 {
        return 0.0;
    }
    let e = r.numer().significant_bits() as i64 - r.denom().significant_bits() as i64 + 1;
    (e as f64).exp2()
}

/// Rounds r·2^p to the nearest-below integer (error < 1 ulp).
pub fn from_rational(r: &Rational, p: u32) -> Integer {
    let scaled = Integer::from(r.numer() << p);
    scaled.div_floor(r.denom())
}

/// Fixed product, error ≤ 1 ulp.
pub fn mul(a: &Integer, b: &Integer, p: u32) -> Integer {
    Integer::from(a * b) >> p
}

/// π at precision p, error ≤ 1 ulp for p ≥ 8 (computed with 32 guard bits, Machin's formula).
pub fn pi(p: u32) -> Integer {
    let q = p + 32;
    let a = atan_inv(5, q);
    let b = atan_inv(239, q);
    let v = Integer::from(&a * 16u32) - Integer::from(&b * 4u32);
    v >> 32
}

/// atan(1/k) at precision q; error ≤ (number of terms + 1) ulps.
fn atan_inv(k: u32, q: u32) -> Integer {
    let k2 = Integer::from(k) * k;
    let mut power = (Integer::from(1) << q).div_floor(Integer::from(k)); // 1/k
    let mut sum = Integer::ZERO;
    let mut i: u32 = 0;
    while power != 0 {
        let term = Integer::from(&power).div_floor(Integer::from(2 * i + 1));
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power = power.div_floor(&k2);
        i += 1;
    }
    sum
}

/// (cos θ, sin θ) at precision p for a fixed-point angle |θ| ≤ 4 given at precision p + 32.
/// Error ≤ 1 ulp at precision p.
fn cos_sin_guarded(theta: &Integer, p: u32) -> (Integer, Integer) {
    let q = p + 32;
    let one = Integer::from(1) << q;
    let mut cos = one.clone();
    let mut sin = Integer::ZERO;
    let mut term = one;
    let mut k: u32 = 1;
    loop {
        term = mul(&term, theta, q).div_floor(Integer::from(k));
        if term == 0 {
            break;
        }
        match k % 4 {
            1 => sin += &term,
            2 => cos -= &term,
            3 => sin -= &term,
            _ => cos += &term,
        }
        k += 1;
    }
    (cos >> 32, sin >> 32)
}

/// Complex number at fixed precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedComplex {
    pub re: Integer,
    pub im: Integer,
}

impl FixedComplex {
    pub fn zero() -> Self {
        FixedComplex { re: Integer::ZERO, im: Integer::ZERO }
    }

    /// Product with a single truncation per component (error ≤ 1 ulp each).
    pub fn mul(&self, other: &FixedComplex, p: u32) -> FixedComplex {
        let re = (Integer::from(&self.re * &other.re) - Integer::from(&self.im * &other.im)) >> p;
        let im = (Integer::from(&self.re * &other.im) + Integer::from(&self.im * &other.re)) >> p;
        FixedComplex { re, im }
    }

    pub fn to_f64(&self, p: u32) -> (f64, f64) {
        (fixed_to_f64(&self.re, p), fixed_to_f64(&self.im, p))
    }

    /// ln |z| from the mantissas; None when z is exactly zero.
    pub fn ln_abs(&self, p: u32) -> Option<f64> {
        let n2 = Integer::from(self.re.square_ref()) + Integer::from(self.im.square_ref());
        if n2 == 0 {
            return None;
        }
        // n2 = m·2^e with m ∈ [1, 2); ln|z| = (ln m + (e − 2p)·ln 2)/2 avoids cancellation
        let bits = n2.significant_bits();
        let m = if bits > 64 {
            Integer::from(&n2 >> (bits - 64)).to_f64() / 2f64.powi(63)
        } else {
            n2.to_f64() / 2f64.powi(bits as i32 - 1)
        };
        let e = bits as i64 - 1 - 2 * p as i64;
        Some(0.5 * (m.ln() + e as f64 * std::f64::consts::LN_2))
    }
}

pub fn fixed_to_f64(m: &Integer, p: u32) -> f64 {
    if *m == 0 {
        return 0.0;
    }
    let bits = m.significant_bits();
    if bits <= 1000 {
        return m.to_f64() * (-(p as f64)).exp2();
    }
    let shift = bits - 64;
    let top = Integer::from(m >> shift);
    top.to_f64() * ((shift as f64) - p as f64).exp2()
}

/// Table of e^{2πij/n} for 0 ≤ j < n at precision p. Each entry is within 2 ulps.
pub fn roots_of_unity(n: u32, p: u32) -> Vec<FixedComplex> {
    let q = p + 32;
    let r = q + 32;
    let two_pi = pi(r) << 1u32;
    let pi_r = pi(r);
    let step_angle = Integer::from(&two_pi).div_floor(Integer::from(n));
    let (c, s) = cos_sin_guarded(&step_angle, q);
    let step = FixedComplex { re: c, im: s };
    let mut cur = FixedComplex { re: Integer::from(1) << q, im: Integer::ZERO };
    let mut table = Vec::with_capacity(n as usize);
    for j in 0..n {
        // restart from an exact angle every 64 steps so multiplicative drift stays tiny
        if j > 0 && j % 64 == 0 {
            let mut ang = Integer::from(&step_angle * j);
            ang %= &two_pi;
            if ang > pi_r {
                ang -= &two_pi;
            }
            let (c, s) = cos_sin_guarded(&ang, q);
            cur = FixedComplex { re: c, im: s };
        }
        table.push(FixedComplex { re: Integer::from(&cur.re >> 32u32), im: Integer::from(&cur.im >> 32u32) });
        cur = cur.mul(&step, q);
    }
    table
}

/// ⌊√(|d|)·2^p⌋ (error < 1 ulp).
pub fn sqrt_int(d: u64, p: u32) -> Integer {
    (Integer::from(d) << (2 * p)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_digits() {
        let v = fixed_to_f64(&pi(80), 80);
        assert!((v - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn unity_table() {
        let t = roots_of_unity(200, 90);
        for (j, z) in t.iter().enumerate() {
            let (re, im) = z.to_f64(90);
            let ang = 2.0 * std::f64::consts::PI * j as f64 / 200.0;
            assert!((re - ang.cos()).abs() < 1e-14 && (im - ang.sin()).abs() < 1e-14, "j={j}");
        }
    }

    #[test]
    fn logs_of_huge_integers() {
        let n = Integer::from(3).pow_mod(&Integer::from(1), &Integer::from(10)).unwrap();
        assert!((ln_integer(&n) - 3f64.ln()).abs() < 1e-15);
        let big = Integer::from(Integer::u_pow_u(2, 5000));
        assert!((ln_integer(&big) - 5000.0 * std::f64::consts::LN_2).abs() < 1e-9);
    }
}
