//! Weight-to-RSSI calibration curves and their inversion.
//!
//! A calibration set pairs cumulative waste weight with the median RSSI seen
//! at that weight. Up to four points are interpolated exactly (cubic at
//! most); larger sets get a least-squares cubic. Estimating an unknown weight
//! solves `p(w) = observed median` on the calibrated weight range.

mod fit;
mod invert;

pub use fit::{divided_differences, horner, interpolate, least_squares, newton_to_monomial};
pub use invert::{find_roots, ROOT_SCAN_STEP_LB};

use serde::{Deserialize, Serialize};

use crate::stats::{summarize, ReadingSession};
use crate::{Error, Result};

/// Largest point count that is interpolated exactly.
pub const MAX_INTERPOLATION_POINTS: usize = 4;

/// Degree of the least-squares fit used above [`MAX_INTERPOLATION_POINTS`].
pub const LEAST_SQUARES_DEGREE: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationPoint {
    pub weight_lb: f64,
    pub median_rssi_dbm: f64,
}

impl CalibrationPoint {
    pub fn new(weight_lb: f64, median_rssi_dbm: f64) -> Self {
        CalibrationPoint {
            weight_lb,
            median_rssi_dbm,
        }
    }
}

/// Polynomial from cumulative weight (lb) to expected median RSSI (dBm).
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationModel {
    coefficients: Vec<f64>,
    weight_range: (f64, f64),
}

impl CalibrationModel {
    /// Builds a model from ascending-degree coefficients and the weight range
    /// it is valid on.
    pub fn new(coefficients: Vec<f64>, weight_range: (f64, f64)) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::Domain("model needs at least one coefficient".into()));
        }
        if let Some(c) = coefficients.iter().find(|c| !c.is_finite()) {
            return Err(Error::Domain(format!("non-finite coefficient {c}")));
        }
        let (lo, hi) = weight_range;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::Domain(format!(
                "invalid weight range [{lo}, {hi}]"
            )));
        }
        Ok(CalibrationModel {
            coefficients,
            weight_range,
        })
    }

    /// Ascending order: `c0 + c1 x + c2 x^2 + ...`.
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn weight_range(&self) -> (f64, f64) {
        self.weight_range
    }

    /// Model value at zero weight.
    pub fn empty_rssi_dbm(&self) -> f64 {
        self.coefficients[0]
    }

    pub fn evaluate(&self, weight_lb: f64) -> f64 {
        horner(&self.coefficients, weight_lb)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightEstimate {
    pub weight_lb: f64,
    pub observed_median_dbm: f64,
    /// No root inside the weight range; `weight_lb` is the closest endpoint.
    pub extrapolated: bool,
    /// Every root found inside the weight range, ascending.
    pub all_roots_in_range: Vec<f64>,
}

/// Fits a calibration curve through the points.
///
/// Up to four points give the exact interpolant of degree `n - 1`, built from
/// Newton divided differences. More points give a least-squares cubic. The
/// model is valid between the lightest and heaviest point.
pub fn fit_interpolating_polynomial(points: &[CalibrationPoint]) -> Result<CalibrationModel> {
    if points.len() < 2 {
        return Err(Error::TooFewPoints(points.len()));
    }
    for p in points {
        if !(p.weight_lb.is_finite() && p.weight_lb >= 0.0) {
            return Err(Error::Domain(format!(
                "calibration weight must be a non-negative number, got {}",
                p.weight_lb
            )));
        }
        if !p.median_rssi_dbm.is_finite() {
            return Err(Error::Domain(format!(
                "calibration RSSI must be finite, got {}",
                p.median_rssi_dbm
            )));
        }
    }

    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.weight_lb.total_cmp(&b.weight_lb));
    if let Some(w) = sorted.windows(2).find(|w| w[0].weight_lb == w[1].weight_lb) {
        return Err(Error::DuplicateWeight(w[0].weight_lb));
    }

    let xs: Vec<f64> = sorted.iter().map(|p| p.weight_lb).collect();
    let ys: Vec<f64> = sorted.iter().map(|p| p.median_rssi_dbm).collect();
    let coefficients = if sorted.len() <= MAX_INTERPOLATION_POINTS {
        interpolate(&xs, &ys)
    } else {
        least_squares(&xs, &ys, LEAST_SQUARES_DEGREE)?
    };
    CalibrationModel::new(coefficients, (xs[0], xs[xs.len() - 1]))
}

pub fn evaluate_polynomial(model: &CalibrationModel, weight_lb: f64) -> f64 {
    model.evaluate(weight_lb)
}

/// Solves `model(w) = target` on the model's weight range.
///
/// Roots are located by a sign-change scan at [`ROOT_SCAN_STEP_LB`] and
/// refined by bisection. The smallest root wins: it lies on the branch where
/// added weight lowers the signal. With no root in range, the endpoint whose
/// model value is closest to the target is returned and flagged.
pub fn invert_for_weight(model: &CalibrationModel, target_rssi_dbm: f64) -> WeightEstimate {
    let (lo, hi) = model.weight_range();
    let roots = find_roots(|w| model.evaluate(w) - target_rssi_dbm, lo, hi, ROOT_SCAN_STEP_LB);
    match roots.first() {
        Some(&w) => WeightEstimate {
            weight_lb: w,
            observed_median_dbm: target_rssi_dbm,
            extrapolated: false,
            all_roots_in_range: roots,
        },
        None => {
            let miss_lo = (model.evaluate(lo) - target_rssi_dbm).abs();
            let miss_hi = (model.evaluate(hi) - target_rssi_dbm).abs();
            WeightEstimate {
                weight_lb: if miss_lo <= miss_hi { lo } else { hi },
                observed_median_dbm: target_rssi_dbm,
                extrapolated: true,
                all_roots_in_range: roots,
            }
        }
    }
}

/// Estimates the weight behind a session from its median RSSI.
pub fn estimate_weight(model: &CalibrationModel, session: &ReadingSession) -> Result<WeightEstimate> {
    let summary = summarize(session)?;
    Ok(invert_for_weight(model, summary.median_dbm))
}

/// `100 |predicted - actual| / actual`.
pub fn relative_error_percent(predicted_lb: f64, actual_lb: f64) -> Result<f64> {
    if !(actual_lb > 0.0) {
        return Err(Error::Domain(format!(
            "actual weight must be positive, got {actual_lb}"
        )));
    }
    Ok(100.0 * (predicted_lb - actual_lb).abs() / actual_lb)
}
