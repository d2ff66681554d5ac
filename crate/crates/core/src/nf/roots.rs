//! Certified complex root isolation for squarefree integer polynomials, and extraction of
//! linear and quadratic factors over Q.
//!
//! Approximations come from Durand–Kerner iterations on fixed-point Gaussian mantissas.
//! Certification is exact: with Weierstrass corrections W_i = f(z_i) / (a_n Π_{j≠i}(z_i − z_j)),
//! pairwise disjoint discs D(z_i, n·|W_i|) each contain exactly one root.

use rug::ops::DivRounding;
use rug::{Complete, Integer, Rational};

use super::embed::MAX_PRECISION_RETRIES;
use super::qpoly::{self, QPoly};
use super::NfError;

/// Disc of radius `radius` around `re + i·im` containing exactly one root.
#[derive(Clone, Debug, PartialEq)]
pub struct RootDisc {
    pub re: Rational,
    pub im: Rational,
    pub radius: Rational,
}

#[derive(Clone, Debug)]
struct Gauss {
    re: Integer,
    im: Integer,
}

impl Gauss {
    fn zero() -> Self {
        Gauss { re: Integer::ZERO, im: Integer::ZERO }
    }
    fn sub(&self, o: &Gauss) -> Gauss {
        Gauss { re: (&self.re - &o.re).complete(), im: (&self.im - &o.im).complete() }
    }
    fn mul(&self, o: &Gauss) -> Gauss {
        Gauss {
            re: (&self.re * &o.re).complete() - (&self.im * &o.im).complete(),
            im: (&self.re * &o.im).complete() + (&self.im * &o.re).complete(),
        }
    }
    fn norm(&self) -> Integer {
        self.re.square_ref().complete() + self.im.square_ref().complete()
    }
    fn shr(&self, p: u32) -> Gauss {
        Gauss { re: (&self.re >> p).complete(), im: (&self.im >> p).complete() }
    }
}

/// Upper bound 2^e on the moduli of all roots (Cauchy bound rounded up to a power of two).
fn root_bound_exp(f: &[Integer]) -> u32 {
    let lead_bits = f.last().unwrap().significant_bits() as i64;
    let mut e: i64 = 0;
    for c in &f[..f.len() - 1] {
        if *c != 0 {
            e = e.max(c.significant_bits() as i64 - lead_bits + 1);
        }
    }
    (e.max(0) + 1) as u32
}

/// Fixed-point f(z) at precision p (z = m/2^p); returns the mantissa of f(z) at precision p.
fn eval_fixed(f: &[Integer], z: &Gauss, p: u32) -> Gauss {
    let mut acc = Gauss::zero();
    for c in f.iter().rev() {
        acc = acc.mul(z).shr(p);
        acc.re += (c << p).complete();
    }
    acc
}

/// Complex quotient of two fixed-point values at precision p (truncated).
fn div_fixed(num: &Gauss, den: &Gauss, p: u32) -> Option<Gauss> {
    let n2 = den.norm();
    if n2 == 0 {
        return None;
    }
    let conj = Gauss { re: den.re.clone(), im: (-&den.im).complete() };
    let t = num.mul(&conj);
    Some(Gauss { re: (t.re << p).div_floor(&n2), im: (t.im << p).div_floor(&n2) })
}

fn initial_guesses(n: usize, bound_exp: u32, p: u32) -> Vec<Gauss> {
    (0..n)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            let scale = |v: f64| {
                let m = Integer::from_f64((v * 2f64.powi(52)).round()).unwrap();
                if p + bound_exp >= 52 {
                    m << (p + bound_exp - 52)
                } else {
                    m >> (52 - p - bound_exp)
                }
            };
            Gauss { re: scale(0.9 * theta.cos()), im: scale(0.9 * theta.sin()) }
        })
        .collect()
}

/// One Gauss–Seidel sweep of Durand–Kerner; returns the largest correction mantissa bit length.
fn dk_sweep(f: &[Integer], z: &mut [Gauss], p: u32) -> u32 {
    let lead = f.last().unwrap();
    let one_lead = Gauss { re: (lead << p).complete(), im: Integer::ZERO };
    let mut worst = 0;
    for i in 0..z.len() {
        let num = eval_fixed(f, &z[i], p);
        let mut den = one_lead.clone();
        for j in 0..z.len() {
            if j != i {
                den = den.mul(&z[i].sub(&z[j])).shr(p);
            }
        }
        let w = match div_fixed(&num, &den, p) {
            Some(w) => w,
            // coincident iterates: nudge apart
            None => Gauss { re: Integer::from(1) << (p / 2).max(1), im: Integer::from(1) << (p / 2).max(1) },
        };
        worst = worst.max(w.re.significant_bits().max(w.im.significant_bits()));
        z[i] = z[i].sub(&w);
    }
    worst
}

/// Exact certification of the current iterates; returns squared radii upper bounds if the
/// Weierstrass discs are pairwise disjoint.
fn certify(f: &[Integer], z: &[Gauss], p: u32) -> Option<Vec<Rational>> {
    let n = z.len();
    let lead = f.last().unwrap();
    // Σ c_k m^k 2^{p(n−k)} = 2^{pn}·f(m/2^p), exactly
    let exact_eval = |m: &Gauss| {
        let mut acc = Gauss::zero();
        for (k, c) in f.iter().enumerate().rev() {
            acc = acc.mul(m);
            acc.re += (c << (p * (n - k) as u32)).complete();
        }
        acc
    };
    let mut radii = Vec::with_capacity(n);
    for i in 0..n {
        let pv = exact_eval(&z[i]);
        let mut prod = Gauss { re: lead.clone(), im: Integer::ZERO };
        for j in 0..n {
            if j != i {
                prod = prod.mul(&z[i].sub(&z[j]));
            }
        }
        let pn = prod.norm();
        if pn == 0 {
            return None;
        }
        // |W|² = |pv|² / (4^p · |prod|²); radius² = n² |W|²
        let w2 = Rational::from((pv.norm() * (n * n) as u64, pn << (2 * p)));
        radii.push(w2);
    }
    let scale = 2 * p + 64;
    let rad: Vec<Rational> = radii.iter().map(|r2| sqrt_upper(r2, scale)).collect();
    for i in 0..n {
        for j in i + 1..n {
            let d = z[i].sub(&z[j]);
            let dist2 = Rational::from((d.norm(), Integer::from(1) << (2 * p)));
            let s = Rational::from(&rad[i] + &rad[j]);
            if Rational::from(s.square_ref()) >= dist2 {
                return None;
            }
        }
    }
    Some(rad)
}

/// Rational upper bound on √r with about `s` fractional bits.
fn sqrt_upper(r: &Rational, s: u32) -> Rational {
    if *r == 0 {
        return Rational::new();
    }
    let scaled = (r.numer() << (2 * s)).complete().div_ceil(r.denom());
    let mut root = scaled.clone().sqrt();
    if Integer::from(root.square_ref()) < scaled {
        root += 1;
    }
    Rational::from((root, Integer::from(1) << s))
}

/// Isolates every complex root of a squarefree integer polynomial; radii are at most
/// `target` when given.
pub fn isolate_roots(f: &[Integer], target: Option<&Rational>) -> Result<Vec<RootDisc>, NfError> {
    let mut f: Vec<Integer> = f.to_vec();
    while f.last().is_some_and(|c| *c == 0) {
        f.pop();
    }
    if f.len() <= 1 {
        return Ok(Vec::new());
    }
    let n = f.len() - 1;
    if n == 1 {
        let r = Rational::from((-f[0].clone(), f[1].clone()));
        return Ok(vec![RootDisc { re: r, im: Rational::new(), radius: Rational::new() }]);
    }
    let bound_exp = root_bound_exp(&f);
    let coeff_bits = f.iter().map(|c| c.significant_bits()).max().unwrap();
    let mut p = 64 + coeff_bits + bound_exp;
    if let Some(t) = target {
        let tbits = (t.denom().significant_bits() as i64 - t.numer().significant_bits() as i64).max(0) as u32;
        p = p.max(tbits + 32);
    }
    let mut z = initial_guesses(n, bound_exp, p);
    let max_iter = 200 + 20 * n as u32 + 4 * (coeff_bits + bound_exp);
    for attempt in 0..=MAX_PRECISION_RETRIES {
        for _ in 0..max_iter {
            if dk_sweep(&f, &mut z, p) <= 4 {
                break;
            }
        }
        if let Some(rad) = certify(&f, &z, p) {
            let ok = target.map_or(true, |t| rad.iter().all(|r| r <= t));
            if ok {
                let den = Integer::from(1) << p;
                return Ok(z
                    .iter()
                    .zip(rad)
                    .map(|(m, radius)| RootDisc {
                        re: Rational::from((m.re.clone(), den.clone())),
                        im: Rational::from((m.im.clone(), den.clone())),
                        radius,
                    })
                    .collect());
            }
        }
        if attempt < MAX_PRECISION_RETRIES {
            for m in z.iter_mut() {
                m.re <<= p;
                m.im <<= p;
            }
            p *= 2;
        }
    }
    Err(NfError::PrecisionExhausted { requested: target.map_or(0.0, |t| t.to_f64()) })
}

/// Number of distinct complex roots of a nonzero rational polynomial, certified by isolation.
pub fn count_distinct_roots(f: &[Rational]) -> Result<usize, NfError> {
    let sf = qpoly::squarefree_part(f);
    Ok(isolate_roots(&qpoly::to_primitive_integer(&sf), None)?.len())
}

/// Linear and quadratic factors over Q of a nonzero rational polynomial.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SmallFactors {
    /// Distinct rational roots, ascending.
    pub rational_roots: Vec<Rational>,
    /// Distinct irreducible quadratic factors as primitive integer [c0, c1, c2] with c2 > 0.
    pub quadratics: Vec<[Integer; 3]>,
    /// Degree of the squarefree part not accounted for by the factors above.
    pub residual_degree: usize,
}

/// All rational roots and irreducible quadratic factors of f over Q (complete: every such
/// factor of the squarefree part is found).
pub fn small_factors(f: &[Rational]) -> Result<SmallFactors, NfError> {
    let sf = qpoly::squarefree_part(f);
    let g = qpoly::to_primitive_integer(&sf);
    let deg = g.len().saturating_sub(1);
    if deg == 0 {
        return Ok(SmallFactors::default());
    }
    let lead = g.last().unwrap().clone();
    // roots of a factor with leading coefficient A | lead satisfy: lead·r, lead·(r1+r2) and
    // lead·r1·r2 are integers; radii below 1/(8·lead·(2R+2)) pin them by rounding
    let bound = Integer::from(1) << root_bound_exp(&g);
    let target = Rational::from((1, Integer::from(&lead * 8u32) * (Integer::from(&bound * 2u32) + 2u32)));
    let discs = isolate_roots(&g, Some(&target))?;
    let l = Rational::from(lead.clone());
    let half = Rational::from((1, 2));
    let mut used = vec![false; discs.len()];
    let mut out = SmallFactors::default();
    for (i, d) in discs.iter().enumerate() {
        if Rational::from(&d.im * &l).abs() >= half {
            continue;
        }
        let cand = Rational::from((Rational::from(&d.re * &l).round().into_numer_denom().0, lead.clone()));
        let dre = Rational::from(&cand - &d.re);
        let inside = Rational::from(dre.square_ref()) + Rational::from(d.im.square_ref()) <= Rational::from(d.radius.square_ref());
        if inside && qpoly::eval(&sf, &cand) == 0 {
            used[i] = true;
            out.rational_roots.push(cand);
        }
    }
    for i in 0..discs.len() {
        for j in i + 1..discs.len() {
            if used[i] || used[j] {
                continue;
            }
            let (a, b) = (&discs[i], &discs[j]);
            let s_re = Rational::from(&a.re + &b.re);
            let s_im = Rational::from(&a.im + &b.im);
            let t_re = Rational::from(&a.re * &b.re) - Rational::from(&a.im * &b.im);
            let t_im = Rational::from(&a.re * &b.im) + Rational::from(&a.im * &b.re);
            if Rational::from(&s_im * &l).abs() >= half || Rational::from(&t_im * &l).abs() >= half {
                continue;
            }
            let s = Rational::from(&s_re * &l).round();
            let t = Rational::from(&t_re * &l).round();
            let q: QPoly = vec![t, -s, l.clone()];
            let (_, rem) = qpoly::divrem(&sf, &q);
            if rem.is_empty() {
                let c = qpoly::to_primitive_integer(&q);
                let c = [c[0].clone(), c[1].clone(), c[2].clone()];
                if !out.quadratics.contains(&c) {
                    out.quadratics.push(c);
                }
            }
        }
    }
    out.rational_roots.sort();
    out.quadratics.sort();
    out.residual_degree = deg - out.rational_roots.len() - 2 * out.quadratics.len();
    Ok(out)
}
