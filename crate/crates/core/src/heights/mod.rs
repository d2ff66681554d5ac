//! Naive and canonical heights of points, the height pairing and the identities they obey.

mod estimator;
mod gram;

use std::collections::HashMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::curve::{endo_eval, Curve, CurveError, Endomorphism, Point};
use crate::estimate::{ulp_slack, HeightEstimate};
use crate::nf::{weil_height, AlgNumber, NfError};

pub use estimator::{canonical_run, CanonicalRun, EstimatorConfig, EstimatorPath};
pub use gram::{gram_lower_bound, gram_spot_check, GramData, GramSpotCheck, GramSpotRow};

/// Default canonical-height tolerance.
pub const DEFAULT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HeightError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("doubling budget exhausted after {doublings} steps; best estimate {} ± {}", best.value, best.radius)]
    BudgetExhausted { best: HeightEstimate, doublings: u32 },
}

impl From<NfError> for HeightError {
    fn from(e: NfError) -> Self {
        HeightError::Curve(CurveError::Nf(e))
    }
}

/// h(x(P)), with h(O) = 0.
pub fn naive_height(curve: &Curve, p: &Point) -> Result<HeightEstimate, HeightError> {
    if !curve.on_curve(p)? {
        return Err(CurveError::NotOnCurve(p.to_string()).into());
    }
    Ok(match p.x() {
        None => HeightEstimate::exact(0.0),
        Some(x) => weil_height(x),
    })
}

pub fn canonical_height(curve: &Curve, p: &Point, tol: f64) -> Result<HeightEstimate, HeightError> {
    canonical_height_with(curve, p, tol, &EstimatorConfig::default())
}

pub fn canonical_height_with(curve: &Curve, p: &Point, tol: f64, cfg: &EstimatorConfig) -> Result<HeightEstimate, HeightError> {
    canonical_run(curve, p, tol, cfg).map(|r| r.estimate)
}

/// Canonical heights on one curve at one tolerance, memoised by x-coordinate
/// (ĥ(−P) = ĥ(P)). Safe to share between threads.
pub struct HeightContext {
    curve: Curve,
    tol: f64,
    config: EstimatorConfig,
    cache: Mutex<HashMap<Option<AlgNumber>, HeightEstimate>>,
}

impl HeightContext {
    pub fn new(curve: &Curve, tol: f64) -> Self {
        Self::with_config(curve, tol, EstimatorConfig::default())
    }

    pub fn with_config(curve: &Curve, tol: f64, config: EstimatorConfig) -> Self {
        HeightContext { curve: curve.clone(), tol, config, cache: Mutex::new(HashMap::new()) }
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn canonical(&self, p: &Point) -> Result<HeightEstimate, HeightError> {
        let key = p.x().cloned();
        if let Some(h) = self.cache.lock().unwrap().get(&key) {
            return Ok(*h);
        }
        let h = canonical_height_with(&self.curve, p, self.tol, &self.config)?;
        self.cache.lock().unwrap().insert(key, h);
        Ok(h)
    }

    /// ⟨P, Q⟩ = (ĥ(P+Q) − ĥ(P) − ĥ(Q))/2.
    pub fn pairing(&self, p: &Point, q: &Point) -> Result<HeightEstimate, HeightError> {
        let s = self.canonical(&self.curve.add(p, q))?;
        let hp = self.canonical(p)?;
        let hq = self.canonical(q)?;
        Ok(s.sub(&hp).sub(&hq).scale(0.5))
    }
}

pub fn height_pairing(curve: &Curve, p: &Point, q: &Point, tol: f64) -> Result<HeightEstimate, HeightError> {
    HeightContext::new(curve, tol).pairing(p, q)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParallelogramCheck {
    /// |ĥ(P+Q) + ĥ(P−Q) − 2ĥ(P) − 2ĥ(Q)|.
    pub residual: f64,
    /// Sum of the radii of the four terms (with their coefficients).
    pub combined_radius: f64,
    pub pass: bool,
}

pub fn check_parallelogram_in(ctx: &HeightContext, p: &Point, q: &Point) -> Result<ParallelogramCheck, HeightError> {
    let c = ctx.curve();
    let s = ctx.canonical(&c.add(p, q))?;
    let d = ctx.canonical(&c.sub(p, q))?;
    let hp = ctx.canonical(p)?;
    let hq = ctx.canonical(q)?;
    let residual = (s.value + d.value - 2.0 * hp.value - 2.0 * hq.value).abs();
    let combined = s.radius + d.radius + 2.0 * hp.radius + 2.0 * hq.radius + ulp_slack(s.value + d.value + 2.0 * (hp.value + hq.value));
    Ok(ParallelogramCheck { residual, combined_radius: combined, pass: residual <= combined })
}

pub fn check_parallelogram(curve: &Curve, p: &Point, q: &Point, tol: f64) -> Result<ParallelogramCheck, HeightError> {
    check_parallelogram_in(&HeightContext::new(curve, tol), p, q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndoVerdict {
    /// deg f lies in the propagated interval of ĥ(f(P))/ĥ(P).
    Pass,
    Fail,
    /// ĥ(P) = 0 exactly and ĥ(f(P)) = 0 exactly.
    TorsionPreserved,
    /// ĥ(P) is not bounded away from 0, so no ratio can be formed.
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EndoHeightCheck {
    pub degree: u64,
    pub ratio: Option<HeightEstimate>,
    pub verdict: EndoVerdict,
}

/// ĥ(f(P)) = deg f · ĥ(P).
pub fn endo_height_check(f: &Endomorphism, p: &Point, tol: f64) -> Result<EndoHeightCheck, HeightError> {
    let ctx = HeightContext::new(f.curve(), tol);
    let fp = endo_eval(f, p)?;
    let h = ctx.canonical(p)?;
    let hf = ctx.canonical(&fp)?;
    let degree = f.degree();
    if h.exact && h.value == 0.0 {
        let verdict = if hf.exact && hf.value == 0.0 { EndoVerdict::TorsionPreserved } else { EndoVerdict::Fail };
        return Ok(EndoHeightCheck { degree, ratio: None, verdict });
    }
    let Some(ratio) = hf.ratio(&h) else {
        return Ok(EndoHeightCheck { degree, ratio: None, verdict: EndoVerdict::Inconclusive });
    };
    let verdict = if ratio.contains(degree as f64) { EndoVerdict::Pass } else { EndoVerdict::Fail };
    Ok(EndoHeightCheck { degree, ratio: Some(ratio), verdict })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundedDiffRow {
    pub point: String,
    pub naive: HeightEstimate,
    pub canonical: HeightEstimate,
    /// |ĥ(P) − h(P)| (midpoints).
    pub diff: f64,
    /// |4h(P) − h(2P)| (midpoints).
    pub doubling_defect: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundedDiffReport {
    pub rows: Vec<BoundedDiffRow>,
    pub max_diff: Option<f64>,
    pub max_doubling_defect: Option<f64>,
}

/// Per-point |ĥ − h| and |4h(P) − h(2P)| with their maxima; no threshold is applied.
pub fn bounded_diff_report(curve: &Curve, sample: &[Point], tol: f64) -> Result<BoundedDiffReport, HeightError> {
    let ctx = HeightContext::new(curve, tol);
    let mut report = BoundedDiffReport::default();
    for p in sample {
        let naive = naive_height(curve, p)?;
        let canonical = ctx.canonical(p)?;
        let h2 = naive_height(curve, &curve.double(p))?;
        let row = BoundedDiffRow {
            point: p.to_string(),
            naive,
            canonical,
            diff: (canonical.value - naive.value).abs(),
            doubling_defect: (4.0 * naive.value - h2.value).abs(),
        };
        report.max_diff = Some(report.max_diff.map_or(row.diff, |m: f64| m.max(row.diff)));
        report.max_doubling_defect = Some(report.max_doubling_defect.map_or(row.doubling_defect, |m: f64| m.max(row.doubling_defect)));
        report.rows.push(row);
    }
    Ok(report)
}
