use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{HeightContext, HeightError};
use crate::curve::Point;
use crate::estimate::HeightEstimate;

/// Pairing matrix of a set of points with a certified lower bound on its least eigenvalue.
#[derive(Clone, Debug, PartialEq)]
pub struct GramData {
    pub points: Vec<Point>,
    /// ⟨Pᵢ, Pⱼ⟩; the diagonal holds ĥ(Pᵢ).
    pub matrix: Vec<Vec<HeightEstimate>>,
    /// Larger of the two bounds below.
    pub min_eigenvalue_lower_bound: f64,
    /// min_i (Gᵢᵢ − rᵢᵢ − Σ_{j≠i} (|Gᵢⱼ| + rᵢⱼ)).
    pub gershgorin_bound: f64,
    /// λ_min of the midpoint matrix minus the Frobenius norm of the radius matrix.
    pub weyl_bound: f64,
}

impl GramData {
    /// A positive bound certifies that the points are independent modulo torsion.
    pub fn independence_certified(&self) -> bool {
        self.min_eigenvalue_lower_bound > 0.0
    }
}

pub fn gram_lower_bound(ctx: &HeightContext, points: &[Point]) -> Result<GramData, HeightError> {
    let n = points.len();
    let mut matrix = vec![vec![HeightEstimate::exact(0.0); n]; n];
    for i in 0..n {
        matrix[i][i] = ctx.canonical(&points[i])?;
        for j in i + 1..n {
            let v = ctx.pairing(&points[i], &points[j])?;
            matrix[i][j] = v;
            matrix[j][i] = v;
        }
    }
    let gershgorin_bound = (0..n)
        .map(|i| {
            let off: f64 = (0..n).filter(|&j| j != i).map(|j| matrix[i][j].value.abs() + matrix[i][j].radius).sum();
            matrix[i][i].value - matrix[i][i].radius - off
        })
        .fold(f64::INFINITY, f64::min);
    let weyl_bound = if n == 0 {
        f64::INFINITY
    } else {
        let mid = DMatrix::from_fn(n, n, |i, j| matrix[i][j].value);
        let frob_r: f64 = matrix.iter().flatten().map(|e| e.radius * e.radius).sum::<f64>().sqrt();
        let eig = mid.clone().symmetric_eigen();
        let lmin = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        // floating eigen-solver error is a small multiple of ε·‖G‖
        lmin - frob_r - 64.0 * f64::EPSILON * mid.norm() * n as f64
    };
    Ok(GramData {
        points: points.to_vec(),
        matrix,
        min_eigenvalue_lower_bound: gershgorin_bound.max(weyl_bound),
        gershgorin_bound,
        weyl_bound,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GramSpotRow {
    pub coefficients: Vec<i64>,
    pub height: HeightEstimate,
    /// c·max kᵢ².
    pub bound: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GramSpotCheck {
    pub rows: Vec<GramSpotRow>,
    pub all_pass: bool,
}

/// Checks ĥ(Σ kᵢPᵢ) ≥ c·max kᵢ² (up to the estimate's radius) for every integer vector with
/// |kᵢ| ≤ kmax, where c is the certified eigenvalue bound.
pub fn gram_spot_check(ctx: &HeightContext, gram: &GramData, kmax: i64) -> Result<GramSpotCheck, HeightError> {
    let n = gram.points.len();
    let c = gram.min_eigenvalue_lower_bound;
    let curve = ctx.curve();
    let mut rows = Vec::new();
    let mut k = vec![-kmax; n];
    loop {
        let mut sum = Point::Infinity;
        for (ki, p) in k.iter().zip(&gram.points) {
            sum = curve.add(&sum, &curve.mul(*ki, p));
        }
        let height = ctx.canonical(&sum)?;
        let kmax2 = k.iter().map(|v| v * v).max().unwrap_or(0) as f64;
        let bound = c * kmax2;
        rows.push(GramSpotRow { coefficients: k.clone(), height, bound, pass: height.upper() >= bound });
        // odometer over [−kmax, kmax]ⁿ
        let mut i = 0;
        while i < n {
            if k[i] < kmax {
                k[i] += 1;
                break;
            }
            k[i] = -kmax;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    let all_pass = rows.iter().all(|r| r.pass);
    Ok(GramSpotCheck { rows, all_pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Curve;

    #[test]
    fn rank_two_curve() {
        let c = Curve::over_q(0, -7, 10).unwrap();
        let ctx = HeightContext::new(&c, 1e-6);
        let pts = [c.point_q(1, 2).unwrap(), c.point_q(2, 2).unwrap()];
        let g = gram_lower_bound(&ctx, &pts).unwrap();
        assert!(g.independence_certified(), "{g:?}");
        let dep = gram_lower_bound(&ctx, &[pts[0].clone(), c.double(&pts[0])]).unwrap();
        assert!(!dep.independence_certified());
        let single = gram_lower_bound(&ctx, &pts[..1]).unwrap();
        let h = ctx.canonical(&pts[0]).unwrap();
        assert!((single.gershgorin_bound - (h.value - h.radius)).abs() < 1e-12);
    }
}
