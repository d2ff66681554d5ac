use serde::{Deserialize, Serialize};

/// A real value with a certified error radius: |value − true| ≤ radius.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeightEstimate {
    pub value: f64,
    pub radius: f64,
    /// Set when the value is known exactly (radius 0), e.g. the height of a torsion point.
    pub exact: bool,
}

impl HeightEstimate {
    pub fn exact(value: f64) -> Self {
        HeightEstimate { value, radius: 0.0, exact: true }
    }

    pub fn approx(value: f64, radius: f64) -> Self {
        debug_assert!(radius >= 0.0 && radius.is_finite());
        HeightEstimate { value, radius, exact: false }
    }

    /// Midpoint/half-width of the interval [lo, hi].
    pub fn from_interval(lo: f64, hi: f64) -> Self {
        if lo == hi {
            return Self::approx(lo, 0.0);
        }
        Self::approx(0.5 * (lo + hi), 0.5 * (hi - lo) * (1.0 + 4.0 * f64::EPSILON))
    }

    pub fn lower(&self) -> f64 {
        self.value - self.radius
    }

    pub fn upper(&self) -> f64 {
        self.value + self.radius
    }

    pub fn contains(&self, x: f64) -> bool {
        (x - self.value).abs() <= self.radius
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.exact && other.exact {
            return Self::exact(self.value + other.value);
        }
        Self::approx(self.value + other.value, self.radius + other.radius + ulp_slack(self.value + other.value))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        HeightEstimate { value: self.value * s, radius: self.radius * s.abs(), exact: self.exact }
    }

    /// Quotient with radius propagated to first order plus the denominator's worst case.
    /// Requires the denominator interval to exclude 0.
    pub fn ratio(&self, den: &Self) -> Option<Self> {
        let lo = den.lower();
        let hi = den.upper();
        if lo <= 0.0 && hi >= 0.0 {
            return None;
        }
        let v = self.value / den.value;
        let dmin = lo.abs().min(hi.abs());
        let r = (self.radius + v.abs() * den.radius) / dmin;
        Some(Self::approx(v, r + ulp_slack(v)))
    }
}

pub(crate) fn ulp_slack(v: f64) -> f64 {
    4.0 * f64::EPSILON * v.abs()
}
