//! Integer-exact verification of declared delay and cumulative bounds,
//! plus queue memory profiles.

use serde::{Deserialize, Serialize};

use super::InstrumentError;
use crate::regularize::QueueSample;
use crate::schedule::ipow;
use crate::trace::DelayTrace;

/// Which recorded quantity a bound constrains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// Per-delay bound: `d_0 <= scale` and `d_i <= scale * i^exponent`.
    Delay,
    /// Cumulative bound: the `i`-th emission lands within
    /// `scale * i^exponent` total ticks.
    CapTotal,
}

/// Verdict of one bound check. Comparisons are exact on integers;
/// `max_ratio` is a lossy diagnostic of how close the run came.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub exponent: u32,
    pub scale: u128,
    pub pass: bool,
    /// Index of the first violated comparison: a delay index for
    /// [`BoundKind::Delay`], a 1-based emission index for
    /// [`BoundKind::CapTotal`].
    pub first_violation: Option<u64>,
    /// Largest observed value over its bound, 0 when nothing was compared.
    pub max_ratio: f64,
}

struct Comparison {
    first_violation: Option<u64>,
    max_ratio: f64,
}

impl Comparison {
    fn new() -> Self {
        Comparison {
            first_violation: None,
            max_ratio: 0.0,
        }
    }

    fn observe(&mut self, index: u64, value: u128, bound: u128) {
        let ratio = if bound == 0 {
            if value == 0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            value as f64 / bound as f64
        };
        self.max_ratio = self.max_ratio.max(ratio);
        if value > bound && self.first_violation.is_none() {
            self.first_violation = Some(index);
        }
    }

    fn report(self, kind: BoundKind, exponent: u32, scale: u128) -> BoundReport {
        BoundReport {
            kind,
            exponent,
            scale,
            pass: self.first_violation.is_none(),
            first_violation: self.first_violation,
            max_ratio: self.max_ratio,
        }
    }
}

/// Check every delay against `scale * i^exponent` (index 0 against plain
/// `scale`). An empty trace passes vacuously.
pub fn check_delay_bound(trace: &DelayTrace, scale: u128, exponent: u32) -> BoundReport {
    let mut cmp = Comparison::new();
    for (i, &delay) in trace.delays().iter().enumerate() {
        let bound = if i == 0 {
            scale
        } else {
            scale.saturating_mul(ipow(i as u128, exponent as u64))
        };
        cmp.observe(i as u64, delay as u128, bound);
    }
    cmp.report(BoundKind::Delay, exponent, scale)
}

/// Check every emission's cumulative cost against `scale * i^exponent`,
/// with `i` the 1-based emission index. A trace without emissions passes
/// vacuously.
pub fn check_cap_bound(trace: &DelayTrace, scale: u128, exponent: u32) -> BoundReport {
    let mut cmp = Comparison::new();
    for (idx, &cost) in trace.emit_costs().iter().enumerate() {
        let i = idx as u64 + 1;
        let bound = scale.saturating_mul(ipow(i as u128, exponent as u64));
        cmp.observe(i, cost as u128, bound);
    }
    cmp.report(BoundKind::CapTotal, exponent, scale)
}

/// Queue usage summary of a regularized run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemoryProfile {
    /// Largest queue size observed at any release.
    pub max_queue: usize,
    /// Number of samples the profile is based on.
    pub samples: usize,
}

/// Summarize queue samples; fails with [`InstrumentError::NoSamples`] when
/// none were recorded.
pub fn memory_profile(samples: &[QueueSample]) -> Result<MemoryProfile, InstrumentError> {
    if samples.is_empty() {
        return Err(InstrumentError::NoSamples);
    }
    Ok(MemoryProfile {
        max_queue: samples.iter().map(|s| s.queue_size).max().unwrap_or(0),
        samples: samples.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::synthetic::{Profile, SyntheticSpec};
    use crate::process::SteppedEnumerator;
    use crate::schedule::{ParamCost, Polynomial};
    use crate::trace::run_to_completion;

    fn spec(profile: Profile, scale: u64, m: u64, a: u32) -> SyntheticSpec {
        SyntheticSpec {
            n: 1,
            k: 1,
            a,
            m,
            profile,
            t: ParamCost::Const(scale),
            p: Polynomial(vec![1]),
        }
    }

    fn run_trace(spec: &SyntheticSpec) -> DelayTrace {
        let mut e = SteppedEnumerator::from_process(spec.process());
        run_to_completion(&mut e, 1_000_000).unwrap().trace
    }

    #[test]
    fn tight_constant_delays_pass_at_ratio_one() {
        let trace = DelayTrace::from_delays(vec![5, 5, 5, 5]);
        let report = check_delay_bound(&trace, 5, 0);
        assert!(report.pass);
        assert_eq!(report.first_violation, None);
        assert_eq!(report.max_ratio, 1.0);
    }

    #[test]
    fn first_offending_delay_is_reported() {
        let trace = DelayTrace::from_delays(vec![5, 5, 6, 7]);
        let report = check_delay_bound(&trace, 5, 0);
        assert!(!report.pass);
        assert_eq!(report.first_violation, Some(2));
        assert!((report.max_ratio - 1.4).abs() < 1e-12);
    }

    #[test]
    fn growing_delays_pass_under_a_matching_exponent() {
        // d_i = 3 * i^2 exactly.
        let delays: Vec<u64> = (0..=20).map(|i| 3 * i * i).collect();
        let trace = DelayTrace::from_delays(delays);
        assert!(check_delay_bound(&trace, 3, 2).pass);
        assert!(!check_delay_bound(&trace, 3, 1).pass);
    }

    #[test]
    fn front_loaded_emissions_fit_a_linear_cap() {
        // Emissions at 11, 12, 13, 14 against 13 * i.
        let trace = run_trace(&spec(Profile::FrontLoaded, 10, 4, 0));
        assert_eq!(trace.emit_costs(), &[11, 12, 13, 14]);
        let report = check_cap_bound(&trace, 13, 1);
        assert!(report.pass);
        assert_eq!(report.max_ratio, 11.0 / 13.0);
    }

    #[test]
    fn structured_emissions_fit_the_doubled_squared_cap() {
        // Emission i at 3 * i * (i + 1) / 2, which stays within 6 * i^2.
        let trace = run_trace(&spec(Profile::Structured, 3, 10, 1));
        assert!(check_cap_bound(&trace, 6, 2).pass);
    }

    #[test]
    fn the_first_late_emission_is_reported_one_based() {
        let trace = DelayTrace::from_run(vec![2, 4, 50], 50);
        let report = check_cap_bound(&trace, 4, 1);
        assert!(!report.pass);
        assert_eq!(report.first_violation, Some(3));
    }

    #[test]
    fn empty_traces_pass_vacuously() {
        let trace = DelayTrace::from_delays(vec![]);
        assert!(check_delay_bound(&trace, 1, 0).pass);
        assert!(check_cap_bound(&trace, 1, 0).pass);
        assert_eq!(check_delay_bound(&trace, 1, 0).max_ratio, 0.0);
    }

    #[test]
    fn memory_profile_takes_the_sample_maximum() {
        let samples = vec![
            QueueSample {
                emission_index: 1,
                queue_size: 5,
            },
            QueueSample {
                emission_index: 2,
                queue_size: 9,
            },
            QueueSample {
                emission_index: 3,
                queue_size: 2,
            },
        ];
        let profile = memory_profile(&samples).unwrap();
        assert_eq!(
            profile,
            MemoryProfile {
                max_queue: 9,
                samples: 3
            }
        );
    }

    #[test]
    fn missing_samples_are_an_error() {
        assert_eq!(memory_profile(&[]).unwrap_err(), InstrumentError::NoSamples);
    }
}
