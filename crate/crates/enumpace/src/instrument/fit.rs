//! Least-squares recovery of a polynomial growth exponent from delays.
//!
//! If delays follow `d_i ~ scale * i^a`, then `ln d_i` is linear in
//! `ln i` with slope `a` and intercept `ln scale`. [`fit_exponent`] fits
//! that line over a window of delay indices and reports slope, intercept
//! and goodness of fit.

use serde::{Deserialize, Serialize};

use super::InstrumentError;
use crate::trace::DelayTrace;

/// Fewest usable points a fit window may hold. Below this, slope estimates
/// say more about noise than about growth.
pub const MIN_FIT_POINTS: usize = 8;

/// Outcome of a log-log fit over a delay window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    /// Fitted slope: the estimated growth exponent.
    pub exponent_hat: f64,
    /// Exponentiated intercept: the estimated scale factor.
    pub scale_hat: f64,
    /// Coefficient of determination in log space. A constant window fits
    /// its own mean exactly and reports 1.
    pub r_squared: f64,
    /// Window actually used, after clamping to the trace, inclusive.
    pub index_range: (u64, u64),
    /// Zero delays inside the window, skipped because their logarithm is
    /// undefined.
    pub excluded_zero_delays: usize,
}

/// Fit `d_i = scale * i^exponent` over delay indices `[i_min, i_max]`.
///
/// Index 0 is outside the model (there is no growth at the origin) and the
/// window is clamped to `[max(i_min, 1), last delay index]`. Zero delays
/// are skipped. Fewer than [`MIN_FIT_POINTS`] surviving points is an
/// error: [`InstrumentError::DegenerateTrace`] when skipped zeros made the
/// difference, [`InstrumentError::InsufficientData`] otherwise.
pub fn fit_exponent(
    trace: &DelayTrace,
    i_min: u64,
    i_max: u64,
) -> Result<FitResult, InstrumentError> {
    let delays = trace.delays();
    if delays.len() < 2 {
        return Err(InstrumentError::InsufficientData);
    }
    let lo = i_min.max(1);
    let hi = i_max.min((delays.len() - 1) as u64);
    if lo > hi {
        return Err(InstrumentError::InsufficientData);
    }

    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut zeros = 0usize;
    for i in lo..=hi {
        let d = delays[i as usize];
        if d == 0 {
            zeros += 1;
            continue;
        }
        xs.push((i as f64).ln());
        ys.push((d as f64).ln());
    }
    if xs.len() < MIN_FIT_POINTS {
        let window = (hi - lo + 1) as usize;
        return Err(if window >= MIN_FIT_POINTS {
            InstrumentError::DegenerateTrace { zeros }
        } else {
            InstrumentError::InsufficientData
        });
    }

    let count = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / count;
    let y_mean = ys.iter().sum::<f64>() / count;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - x_mean) * (x - x_mean);
        sxy += (x - x_mean) * (y - y_mean);
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;

    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        let predicted = intercept + slope * x;
        ss_res += (y - predicted) * (y - predicted);
        ss_tot += (y - y_mean) * (y - y_mean);
    }
    // A constant window has no variance to explain; ss_tot then sits at
    // rounding-noise level rather than exactly 0.
    let noise_floor = f64::EPSILON * count * (1.0 + y_mean * y_mean);
    let r_squared = if ss_tot <= noise_floor {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };

    Ok(FitResult {
        exponent_hat: slope,
        scale_hat: intercept.exp(),
        r_squared,
        index_range: (lo, hi),
        excluded_zero_delays: zeros,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace_of(delays: Vec<u64>) -> DelayTrace {
        DelayTrace::from_delays(delays)
    }

    #[test]
    fn exact_quadratic_delays_recover_exponent_and_scale() {
        let delays: Vec<u64> = (0..=1000).map(|i| 7 * i * i).collect();
        let fit = fit_exponent(&trace_of(delays), 1, 1000).unwrap();
        assert!((fit.exponent_hat - 2.0).abs() < 1e-9, "{}", fit.exponent_hat);
        assert!((fit.scale_hat - 7.0).abs() < 1e-6, "{}", fit.scale_hat);
        assert!(fit.r_squared > 1.0 - 1e-12);
        assert_eq!(fit.index_range, (1, 1000));
        assert_eq!(fit.excluded_zero_delays, 0);
    }

    #[test]
    fn constant_delays_fit_exponent_zero_with_perfect_r_squared() {
        let delays = vec![5u64; 101];
        let fit = fit_exponent(&trace_of(delays), 1, 100).unwrap();
        assert!(fit.exponent_hat.abs() < 1e-9);
        assert!((fit.scale_hat - 5.0).abs() < 1e-9);
        assert_eq!(fit.r_squared, 1.0);
    }

    #[test]
    fn bounded_noise_keeps_the_exponent_near_zero() {
        // Delays alternating 10% below and above a constant.
        let delays: Vec<u64> = (0..=200).map(|i| if i % 2 == 0 { 9 } else { 11 }).collect();
        let fit = fit_exponent(&trace_of(delays), 1, 200).unwrap();
        assert!(fit.exponent_hat.abs() < 0.1, "{}", fit.exponent_hat);
    }

    #[test]
    fn window_is_clamped_to_the_trace() {
        let delays: Vec<u64> = (0..=50).map(|i| 3 * i).collect();
        let fit = fit_exponent(&trace_of(delays), 0, 10_000).unwrap();
        assert_eq!(fit.index_range, (1, 50));
        assert!((fit.exponent_hat - 1.0).abs() < 1e-9);
    }

    #[test]
    fn zero_delays_are_excluded_and_counted() {
        // Even indices are zero; enough odd points remain.
        let delays: Vec<u64> = (0..=40).map(|i| if i % 2 == 0 { 0 } else { 4 * i }).collect();
        let fit = fit_exponent(&trace_of(delays), 1, 40).unwrap();
        assert_eq!(fit.excluded_zero_delays, 20);
        assert!((fit.exponent_hat - 1.0).abs() < 1e-9);
    }

    #[test]
    fn all_zero_windows_report_a_degenerate_trace() {
        let delays = vec![0u64; 20];
        let err = fit_exponent(&trace_of(delays), 1, 19).unwrap_err();
        assert_eq!(err, InstrumentError::DegenerateTrace { zeros: 19 });
    }

    #[test]
    fn short_windows_report_insufficient_data() {
        let delays: Vec<u64> = (0..=20).map(|i| i + 1).collect();
        let err = fit_exponent(&trace_of(delays), 1, 5).unwrap_err();
        assert_eq!(err, InstrumentError::InsufficientData);
        let err = fit_exponent(&trace_of(vec![1]), 1, 100).unwrap_err();
        assert_eq!(err, InstrumentError::InsufficientData);
        let err = fit_exponent(&trace_of(vec![1, 2, 3]), 5, 2).unwrap_err();
        assert_eq!(err, InstrumentError::InsufficientData);
    }
}
