//! The canonical height as the limit of h(x(2ⁿP))/4ⁿ.
//!
//! Every path produces the same data: h₀ = h(x(P)) and the doubling defects
//! Dₖ = h(x(2ᵏP)) − 4·h(x(2ᵏ⁻¹P)), each with an error radius. Then eₙ = h₀ + Σ Dₖ/4ᵏ is
//! h(x(2ⁿP))/4ⁿ, and with C*ₙ = max_{k≤n} |Dₖ| the tail bound gives
//!   |ĥ(P) − eₙ| ≤ 2·C*ₙ/(3·4ⁿ)   (factor 2 is a safety margin on the empirical constant).
//! The reported interval is the intersection of these intervals over all computed n, all
//! taken with the final C*.

use rug::ops::Pow;
use rug::{Integer, Rational};

use super::HeightError;
use crate::curve::{torsion_order, Curve, Point};
use crate::estimate::{ulp_slack, HeightEstimate};
use crate::nf::{apply_auto, fixed, galois_group, weil_height_within, AlgNumber, MAX_PRECISION_RETRIES};

/// Limits on the doubling iteration.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EstimatorConfig {
    /// Largest n for which 2ⁿP is computed.
    pub max_doublings: u32,
    /// Coordinate size cap (bits) for the exact number-field path.
    pub max_bits: u64,
    /// Orders up to this are tested exactly before iterating; 0 skips the test.
    pub torsion_nmax: u32,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig { max_doublings: 32, max_bits: 1 << 20, torsion_nmax: crate::curve::DEFAULT_NMAX }
    }
}

/// How the doubling sequence was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorPath {
    Torsion,
    /// Rational curve and rational x: exact gcd tracking plus fixed-point archimedean part.
    Rational,
    /// x = λ with a/λ, b/λ², c/λ³ rational: the rational path on the rescaled model.
    ScaledRational,
    /// Rational curve over a field with Galois group of exponent 2: the rational path on
    /// the Galois-isotypic components of P.
    Descent,
    /// Exact doubling in the number field.
    Field,
}

/// A canonical height together with the run that produced it.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CanonicalRun {
    pub estimate: HeightEstimate,
    pub doublings: u32,
    /// Largest observed doubling defect C*.
    pub defect_constant: f64,
    pub path: EstimatorPath,
}

/// Produces (Dₖ, radius of Dₖ) for k = 1, 2, …; None when the budget is spent.
trait DefectSource {
    fn h0(&self) -> HeightEstimate;
    fn next_defect(&mut self) -> Result<Option<(f64, f64)>, HeightError>;
}

/// Doublings always performed before the tolerance test: a few early defects can vanish by
/// coincidence (x(2P) = −1 from x(P) = 1), which would make C* meaninglessly small.
const MIN_DOUBLINGS: u32 = 6;

fn run(source: &mut dyn DefectSource, tol: f64, cfg: &EstimatorConfig, path: EstimatorPath) -> Result<CanonicalRun, HeightError> {
    let h0 = source.h0();
    let mut e = h0.value;
    let mut e_rad = h0.radius;
    let mut cstar: f64 = 0.0;
    let mut scale = 1.0f64;
    // (eₙ, its radius, 4⁻ⁿ) for every n so far
    let mut partial: Vec<(f64, f64, f64)> = Vec::new();
    // every interval uses the current C*: an earlier, smaller C* can exclude ĥ
    let intersect = |partial: &[(f64, f64, f64)], cstar: f64| {
        partial.iter().fold((f64::NEG_INFINITY, f64::INFINITY), |(lo, hi), &(e, e_rad, s)| {
            let r = 2.0 * cstar * s / 3.0 + e_rad;
            (lo.max(e - r), hi.min(e + r))
        })
    };
    let best = |partial: &[(f64, f64, f64)], cstar: f64| {
        let (lo, hi) = intersect(partial, cstar);
        if lo <= hi {
            HeightEstimate::from_interval(lo, hi)
        } else {
            // inconsistent with the observed C*: fall back to the last interval
            let &(e, e_rad, s) = partial.last().expect("at least one step");
            HeightEstimate::approx(e, 2.0 * cstar * s / 3.0 + e_rad)
        }
    };
    for n in 1..=cfg.max_doublings {
        let Some((d, d_rad)) = source.next_defect()? else {
            let est = if partial.is_empty() { h0 } else { best(&partial, cstar) };
            return Err(HeightError::BudgetExhausted { best: est, doublings: n - 1 });
        };
        scale *= 0.25;
        e += d * scale;
        e_rad += d_rad * scale + ulp_slack(e);
        cstar = cstar.max(d.abs() + d_rad);
        partial.push((e, e_rad, scale));
        let est = best(&partial, cstar);
        if n >= MIN_DOUBLINGS.min(cfg.max_doublings) && est.radius <= tol {
            return Ok(CanonicalRun { estimate: est, doublings: n, defect_constant: cstar, path });
        }
    }
    let est = if partial.is_empty() { h0 } else { best(&partial, cstar) };
    Err(HeightError::BudgetExhausted { best: est, doublings: cfg.max_doublings })
}

/// ĥ(P) to within `tol`, with details of the run.
pub fn canonical_run(curve: &Curve, p: &Point, tol: f64, cfg: &EstimatorConfig) -> Result<CanonicalRun, HeightError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(HeightError::InvalidTolerance(tol));
    }
    if !curve.on_curve(p)? {
        return Err(crate::curve::CurveError::NotOnCurve(p.to_string()).into());
    }
    let torsion = |doublings| CanonicalRun { estimate: HeightEstimate::exact(0.0), doublings, defect_constant: 0.0, path: EstimatorPath::Torsion };
    let Some(x0) = p.x() else { return Ok(torsion(0)) };
    if cfg.torsion_nmax > 0 && torsion_order(curve, p, cfg.torsion_nmax).is_some() {
        return Ok(torsion(0));
    }
    if let (Some([a, b, c]), Some(x)) = (curve.rational_coeffs(), x0.as_rational()) {
        let mut src = RationalSource::new(&a, &b, &c, x, cfg.max_doublings)?;
        return run(&mut src, tol, cfg, EstimatorPath::Rational);
    }
    if let Some([a, b, c]) = scaled_model(curve, x0) {
        let mut src = RationalSource::new(&a, &b, &c, &Rational::from(1), cfg.max_doublings)?;
        // x = λ·x̃ changes each h(x(2ᵏP)) by a bounded amount, so the limit is the same
        return run(&mut src, tol, cfg, EstimatorPath::ScaledRational);
    }
    if let Some([a, b, c]) = curve.rational_coeffs() {
        if let Some(r) = descent_run(curve, [&a, &b, &c], p, tol, cfg)? {
            return Ok(r);
        }
    }
    let mut src = FieldSource::new(curve, x0, cfg.max_bits)?;
    run(&mut src, tol, cfg, EstimatorPath::Field)
}

/// Characters of an exponent-2 group as sign vectors over `group`'s order.
fn sign_characters(group: &[crate::nf::Automorphism]) -> Option<Vec<Vec<bool>>> {
    let m = group.len();
    if m > 16 {
        return None;
    }
    let index = |s: &crate::nf::Automorphism| group.iter().position(|g| g == s);
    let mut table = vec![vec![0usize; m]; m];
    for i in 0..m {
        for j in 0..m {
            table[i][j] = index(&group[i].compose(&group[j]).ok()?)?;
        }
        if !group[table[i][i]].is_identity() {
            return None;
        }
    }
    let chars: Vec<Vec<bool>> = (0u32..1 << m)
        .map(|mask| (0..m).map(|i| mask >> i & 1 == 1).collect::<Vec<bool>>())
        .filter(|neg| (0..m).all(|i| (0..m).all(|j| neg[table[i][j]] == (neg[i] != neg[j]))))
        .collect();
    (chars.len() == m).then_some(chars)
}

/// Galois descent for a curve over Q. When every σ in G = Gal(K/Q) has order ≤ 2, each
/// character χ: G → {±1} gives Q_χ = Σ_σ χ(σ)·σ(P) with τ(Q_χ) = χ(τ)·Q_χ, so x(Q_χ) is
/// rational. The pairing is Galois-invariant, which makes distinct isotypic parts
/// orthogonal, and |G|²·ĥ(P) = Σ_χ ĥ(Q_χ). Returns None when the field does not qualify.
fn descent_run(curve: &Curve, [a, b, c]: [&Rational; 3], p: &Point, tol: f64, cfg: &EstimatorConfig) -> Result<Option<CanonicalRun>, HeightError> {
    let Ok(group) = galois_group(curve.field().spec()) else { return Ok(None) };
    let Some(chars) = sign_characters(&group) else { return Ok(None) };
    let Point::Affine { x, y } = p else { return Ok(None) };
    let conj: Vec<Point> = group
        .iter()
        .map(|s| Ok(Point::Affine { x: apply_auto(s, x)?, y: apply_auto(s, y)? }))
        .collect::<Result<_, crate::nf::NfError>>()?;
    let mut parts = Vec::with_capacity(chars.len());
    for neg in &chars {
        let q = conj.iter().zip(neg).fold(Point::Infinity, |acc, (s, &n)| if n { curve.sub(&acc, s) } else { curve.add(&acc, s) });
        let xq = match q.x() {
            None => None,
            Some(xq) => match xq.as_rational() {
                Some(r) => Some(r.clone()),
                None => return Ok(None),
            },
        };
        parts.push((q, xq));
    }
    let mut total = HeightEstimate::exact(0.0);
    let (mut doublings, mut cstar) = (0, 0.0f64);
    for (q, xq) in parts {
        let Some(xq) = xq else { continue };
        if cfg.torsion_nmax > 0 && torsion_order(curve, &q, cfg.torsion_nmax).is_some() {
            continue;
        }
        let mut src = RationalSource::new(a, b, c, &xq, cfg.max_doublings)?;
        let r = run(&mut src, tol, cfg, EstimatorPath::Rational)?;
        total = total.add(&r.estimate);
        doublings = doublings.max(r.doublings);
        cstar = cstar.max(r.defect_constant);
    }
    let m = group.len() as f64;
    Ok(Some(CanonicalRun { estimate: total.scale(1.0 / (m * m)), doublings, defect_constant: cstar, path: EstimatorPath::Descent }))
}

/// (a/λ, b/λ², c/λ³) when all three are rational, with λ = x(P) ≠ 0.
fn scaled_model(curve: &Curve, lambda: &AlgNumber) -> Option<[Rational; 3]> {
    if lambda.is_zero() {
        return None;
    }
    let inv = lambda.inv().ok()?;
    let a = curve.a() * &inv;
    let b = &(curve.b() * &inv) * &inv;
    let c = &(&(curve.c() * &inv) * &inv) * &inv;
    Some([a.as_rational()?.clone(), b.as_rational()?.clone(), c.as_rational()?.clone()])
}

/// Sylvester resultant by fraction-free (Bareiss) elimination.
fn resultant(f: &[Integer], g: &[Integer]) -> Integer {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    let mut a = vec![vec![Integer::ZERO; size]; size];
    // rows hold coefficients from the leading term down
    for i in 0..n {
        for (j, c) in f.iter().rev().enumerate() {
            a[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in g.iter().rev().enumerate() {
            a[n + i][i + j] = c.clone();
        }
    }
    let mut sign = 1i32;
    let mut prev = Integer::from(1);
    for k in 0..size {
        if a[k][k] == 0 {
            let Some(r) = (k + 1..size).find(|&r| a[r][k] != 0) else { return Integer::ZERO };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let v = Integer::from(&a[i][j] * &a[k][k]) - Integer::from(&a[i][k] * &a[k][j]);
                a[i][j] = v.div_exact(&prev);
            }
            a[i][k] = Integer::ZERO;
        }
        prev = a[k][k].clone();
    }
    let det = a[size - 1][size - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Integral model y² = x³ + Ax² + Bx + C with A = u²a, B = u⁴b, C = u⁶c.
struct IntegralModel {
    a: Integer,
    b: Integer,
    c: Integer,
    /// B² − 4AC.
    k4: Integer,
}

impl IntegralModel {
    /// φ(X, Z) = X⁴ − 2BX²Z² − 8CXZ³ + (B² − 4AC)Z⁴.
    fn phi(&self, x: &Integer, z: &Integer) -> Integer {
        let x2 = Integer::from(x.square_ref());
        let z2 = Integer::from(z.square_ref());
        let xz = Integer::from(x * z);
        let mut v = Integer::from(x2.square_ref());
        v -= Integer::from(&self.b * 2u32) * Integer::from(&x2 * &z2);
        v -= Integer::from(&self.c * 8u32) * Integer::from(&xz * &z2);
        v += Integer::from(&self.k4 * Integer::from(z2.square_ref()));
        v
    }

    /// ψ(X, Z) = 4Z(X³ + AX²Z + BXZ² + CZ³).
    fn psi(&self, x: &Integer, z: &Integer) -> Integer {
        // ((X + AZ)X + BZ²)X + CZ³
        let z2 = Integer::from(z.square_ref());
        let mut v = Integer::from(x + Integer::from(&self.a * z));
        v = v * x + Integer::from(&self.b * &z2);
        v = v * x + Integer::from(&self.c * Integer::from(&z2 * z));
        v * z * 4u32
    }
}

/// Projective state (U, V)/2^p with max(|U|, |V|) ∈ [2^(p−1), 2^p).
#[derive(Clone)]
struct Trajectory {
    p: u32,
    u: Integer,
    v: Integer,
    ln_t: f64,
}

fn ln_top(m: &Integer, p: u32) -> f64 {
    // m ∈ [2^(p−1), 2^p): ln(m/2^p) from the leading 53 bits
    let bits = m.significant_bits();
    let top = if bits > 53 { Integer::from(m >> (bits - 53)).to_f64() } else { m.to_f64() * 2f64.powi(53 - bits as i32) };
    (top / 2f64.powi(53)).ln() + (bits as f64 - p as f64) * std::f64::consts::LN_2
}

impl Trajectory {
    fn new(x: &Integer, z: &Integer, p: u32) -> Trajectory {
        let s = x.significant_bits().max(z.significant_bits());
        let shift = |n: &Integer| if s <= p { Integer::from(n << (p - s)) } else { Integer::from(n >> (s - p)) };
        let (u, v) = (shift(x), shift(z));
        let ln_t = ln_top(&Integer::from(u.abs_ref()).max(Integer::from(v.abs_ref())), p);
        Trajectory { p, u, v, ln_t }
    }

    /// Significant bits of the smaller coordinate. The state is fixed-point relative to the
    /// larger one, so a coordinate far below it is truncated (possibly to 0) at every
    /// precision, and agreement between precisions proves nothing.
    fn spare_bits(&self) -> u32 {
        self.u.significant_bits().min(self.v.significant_bits())
    }

    /// Advances one doubling; returns s·ln 2 + ln t' − 4 ln t (the archimedean defect).
    fn step(&mut self, model: &IntegralModel) -> f64 {
        let phi = model.phi(&self.u, &self.v);
        let psi = model.psi(&self.u, &self.v);
        let bits = phi.significant_bits().max(psi.significant_bits());
        let p = self.p;
        let r = bits as i64 - p as i64;
        let sh = |n: Integer| if r >= 0 { n >> r as u32 } else { n << (-r) as u32 };
        self.u = sh(phi);
        self.v = sh(psi);
        let s = r - 3 * p as i64;
        let ln_t_new = ln_top(&Integer::from(self.u.abs_ref()).max(Integer::from(self.v.abs_ref())), p);
        let d = s as f64 * std::f64::consts::LN_2 + ln_t_new - 4.0 * self.ln_t;
        self.ln_t = ln_t_new;
        d
    }
}

fn modp(x: Integer, m: &Integer) -> Integer {
    let mut r = x % m;
    if r < 0 {
        r += m;
    }
    r
}

/// Drift between two precisions above which the low-precision run is restarted.
const DRIFT_LIMIT: f64 = 1e-20;
/// Bits the smaller projective coordinate must keep at the low precision.
const MIN_SPARE_BITS: u32 = 64;
const BASE_PRECISION: u32 = 256;

/// The rational path: exact gcds are tracked modulo a power of the resultant, while the
/// real size of (X, Z) follows a fixed-point projective trajectory computed at two
/// precisions; their disagreement is the reported error of each defect.
struct RationalSource {
    model: IntegralModel,
    res: Integer,
    modulus: Integer,
    xm: Integer,
    zm: Integer,
    x0: Integer,
    z0: Integer,
    lo: Trajectory,
    hi: Trajectory,
    history: Vec<f64>,
    h0: HeightEstimate,
    remaining: u32,
}

impl RationalSource {
    fn new(a: &Rational, b: &Rational, c: &Rational, x: &Rational, max_doublings: u32) -> Result<Self, HeightError> {
        let mut u = Integer::from(1);
        for r in [a, b, c] {
            u.lcm_mut(r.denom());
        }
        let u2 = Integer::from(u.square_ref());
        let u4 = Integer::from(u2.square_ref());
        let u6 = Integer::from(&u4 * &u2);
        let int = |r: &Rational, s: &Integer| -> Integer { (Rational::from(r * s)).into_numer_denom().0 };
        let (ai, bi, ci) = (int(a, &u2), int(b, &u4), int(c, &u6));
        let k4 = Integer::from(bi.square_ref()) - Integer::from(&ai * &ci) * 4u32;
        let model = IntegralModel { a: ai.clone(), b: bi.clone(), c: ci.clone(), k4: k4.clone() };
        let phi1 = vec![k4, Integer::from(&ci * -8i32), Integer::from(&bi * -2i32), Integer::ZERO, Integer::from(1)];
        let psi1 = vec![Integer::from(&ci * 4u32), Integer::from(&bi * 4u32), Integer::from(&ai * 4u32), Integer::from(4)];
        let res = resultant(&phi1, &psi1).abs();
        if res == 0 {
            return Err(crate::curve::CurveError::Singular.into());
        }
        let xt = Rational::from(x * &u2);
        let (x0, z0) = xt.into_numer_denom();
        let modulus = res.clone().pow(max_doublings + 2);
        let h0v = fixed::ln_integer(&Integer::from(x0.abs_ref()).max(z0.clone()));
        let spread = x0.significant_bits().abs_diff(z0.significant_bits());
        let p = BASE_PRECISION + spread.next_multiple_of(64);
        Ok(RationalSource {
            xm: modp(x0.clone(), &modulus),
            zm: modp(z0.clone(), &modulus),
            lo: Trajectory::new(&x0, &z0, p),
            hi: Trajectory::new(&x0, &z0, 2 * p),
            x0,
            z0,
            model,
            res,
            modulus,
            history: Vec::new(),
            h0: HeightEstimate::approx(h0v, ulp_slack(h0v)),
            remaining: max_doublings,
        })
    }

    /// Replays the archimedean trajectories from the start at doubled precisions.
    fn refine(&mut self) {
        let p = self.hi.p;
        let mut lo = Trajectory::new(&self.x0, &self.z0, p);
        let mut hi = Trajectory::new(&self.x0, &self.z0, 2 * p);
        for _ in 0..self.history.len() {
            lo.step(&self.model);
            hi.step(&self.model);
        }
        self.lo = lo;
        self.hi = hi;
    }
}

impl DefectSource for RationalSource {
    fn h0(&self) -> HeightEstimate {
        self.h0
    }

    fn next_defect(&mut self) -> Result<Option<(f64, f64)>, HeightError> {
        if self.remaining == 0 {
            return Ok(None);
        }
        self.remaining -= 1;
        let phim = modp(self.model.phi(&self.xm, &self.zm), &self.modulus);
        let psim = modp(self.model.psi(&self.xm, &self.zm), &self.modulus);
        let g = Integer::from(phim.gcd_ref(&psim)).gcd(&self.res);
        self.modulus.div_exact_mut(&g);
        self.xm = modp(Integer::from(phim.div_exact_ref(&g)), &self.modulus);
        self.zm = modp(Integer::from(psim.div_exact_ref(&g)), &self.modulus);
        let ln_g = if g == 1 { 0.0 } else { fixed::ln_integer(&g) };
        for attempt in 0..=MAX_PRECISION_RETRIES {
            let (mut lo, mut hi) = (self.lo.clone(), self.hi.clone());
            let dl = lo.step(&self.model);
            let dh = hi.step(&self.model);
            let drift = (dl - dh).abs();
            let resolved = lo.spare_bits() >= MIN_SPARE_BITS;
            if attempt == MAX_PRECISION_RETRIES && !resolved {
                return Ok(None);
            }
            if (drift <= DRIFT_LIMIT && resolved) || attempt == MAX_PRECISION_RETRIES {
                self.lo = lo;
                self.hi = hi;
                let d = dh - ln_g;
                self.history.push(d);
                let rad = drift + ulp_slack(dh.abs() + ln_g.abs() + 8.0);
                return Ok(Some((d, rad)));
            }
            self.refine();
        }
        unreachable!()
    }
}

/// The number-field path: exact x-only doubling x ↦ φ(x)/ψ(x) with Weil heights.
struct FieldSource {
    curve: Curve,
    x: Option<AlgNumber>,
    prev: HeightEstimate,
    h0: HeightEstimate,
    max_bits: u64,
}

/// Tolerance of each Weil height along the field path; independent of the requested tol so
/// that the run is deterministic.
const FIELD_HEIGHT_TOL: f64 = 1e-13;

impl FieldSource {
    fn new(curve: &Curve, x0: &AlgNumber, max_bits: u64) -> Result<Self, HeightError> {
        let h0 = weil_height_within(x0, FIELD_HEIGHT_TOL)?;
        Ok(FieldSource { curve: curve.clone(), x: Some(x0.clone()), prev: h0, h0, max_bits })
    }

    fn double_x(&self, x: &AlgNumber) -> Option<AlgNumber> {
        let f = self.curve.field();
        let k = |v: i64| AlgNumber::from_int(f, v);
        let (a, b, c) = (self.curve.a(), self.curve.b(), self.curve.c());
        let x2 = x * x;
        let num = &(&(&(&x2 * &x2) - &(&k(2) * &(b * &x2))) - &(&k(8) * &(c * x))) + &(&(b * b) - &(&k(4) * &(a * c)));
        let den = &k(4) * &self.curve.rhs(x);
        if den.is_zero() {
            None
        } else {
            Some(num.checked_div(&den).expect("nonzero denominator"))
        }
    }
}

impl DefectSource for FieldSource {
    fn h0(&self) -> HeightEstimate {
        self.h0
    }

    fn next_defect(&mut self) -> Result<Option<(f64, f64)>, HeightError> {
        let next = match &self.x {
            // 2ᵏP = O: every later height is 0
            None => None,
            Some(x) => {
                if x.max_bits() as u64 > self.max_bits {
                    return Ok(None);
                }
                self.double_x(x)
            }
        };
        let h = match &next {
            None => HeightEstimate::exact(0.0),
            Some(x) => weil_height_within(x, FIELD_HEIGHT_TOL)?,
        };
        let d = h.value - 4.0 * self.prev.value;
        let rad = h.radius + 4.0 * self.prev.radius + ulp_slack(h.value);
        self.x = next;
        self.prev = h;
        Ok(Some((d, rad)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resultant_small() {
        // Res(x − 2, x² − 4) = 0; Res(x, x² + 1) = 1
        let i = |v: &[i64]| v.iter().map(|&c| Integer::from(c)).collect::<Vec<_>>();
        assert_eq!(resultant(&i(&[-2, 1]), &i(&[-4, 0, 1])), 0);
        assert_eq!(resultant(&i(&[0, 1]), &i(&[1, 0, 1])).abs(), 1);
        assert_eq!(resultant(&i(&[-1, 0, 1]), &i(&[-4, 0, 1])).abs(), 9);
    }

    #[test]
    fn descent_matches_field_doubling() {
        use crate::nf::{sqrt_in_field, Field, FieldSpec, SqrtBranch};
        // P = (4/3, (10/9)√3) on y² = x³ + x over Q(ζ₁₂), then 2P + ιP to leave Q·√d shapes
        let f = Field::new(FieldSpec::Cyclotomic { n: 12 });
        let c = Curve::from_rationals(&f, 0, 1, 0).unwrap();
        let s3 = sqrt_in_field(&AlgNumber::from_int(&f, 3), SqrtBranch::Principal).unwrap().unwrap();
        let p = c.point(AlgNumber::from_rational(&f, (4, 3)), s3.scale(&Rational::from((10, 9)))).unwrap();
        let i = AlgNumber::imaginary_unit(&f).unwrap();
        let ip = Point::Affine { x: -p.x().unwrap().clone(), y: &i * p.y().unwrap() };
        let q = c.add(&c.double(&p), &ip);
        let cfg = EstimatorConfig::default();
        let d = canonical_run(&c, &q, 1e-6, &cfg).unwrap();
        assert_eq!(d.path, EstimatorPath::Descent);
        let mut src = FieldSource::new(&c, q.x().unwrap(), cfg.max_bits).unwrap();
        let fld = run(&mut src, 1e-3, &cfg, EstimatorPath::Field).unwrap();
        assert!((d.estimate.value - fld.estimate.value).abs() <= d.estimate.radius + fld.estimate.radius);
        // ĥ((2 + i)P) = 5ĥ(P)
        let hp = canonical_run(&c, &p, 1e-6, &cfg).unwrap().estimate;
        assert!(d.estimate.ratio(&hp).unwrap().contains(5.0));
    }

    #[test]
    fn rational_defects_match_exact_doubling() {
        // y² = x³ − x + 1 from x = 1: compare against exact rational doubling for 6 steps
        let mut src = RationalSource::new(&Rational::new(), &Rational::from(-1), &Rational::from(1), &Rational::from(1), 10).unwrap();
        let mut x = Rational::from(1);
        let mut h_prev = 0.0;
        for _ in 0..6 {
            let num = Rational::from(x.square_ref()).square() + Rational::from(x.square_ref()) * 2u32 - Rational::from(&x * 8u32) + 1u32;
            let den = (Rational::from(x.square_ref()) * &x - &x + 1u32) * 4u32;
            x = num / den;
            let h = fixed::ln_max_num_den(&x);
            let (d, rad) = src.next_defect().unwrap().unwrap();
            let exact = h - 4.0 * h_prev;
            assert!((d - exact).abs() <= rad + 1e-9 * h.max(1.0), "{d} vs {exact}");
            h_prev = h;
        }
    }
}
