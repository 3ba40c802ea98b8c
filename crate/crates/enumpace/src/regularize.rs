//! Delay regularization via a buffering priority queue.
//!
//! [`cap_to_inc`] wraps an enumerator whose declared guarantee is only
//! cumulative (`i` emissions within `scale * i^exponent` ticks) and paces
//! its output so every single delay is bounded: solutions are buffered in a
//! min-ordered queue and released one per threshold crossing of the wrapped
//! enumerator's step counter, in canonical byte order. Once the wrapped
//! enumerator finishes, the queue drains at one solution per extraction.
//!
//! Accounting: each tick fed to the wrapped enumerator costs one tick of
//! the regularized run; inserting a buffered solution is charged to the
//! producing tick; each release pays [`EXTRACT_TICKS`] more. If the step
//! counter reaches the threshold for the next release and nothing is
//! buffered while the wrapped enumerator keeps running, its declared bound
//! is broken and the run fails with `BoundViolation`, unless
//! [`RegularizeOptions::continue_on_violation`] is set.
//!
//! [`inc_to_cap_bound`] checks the converse direction on recorded traces:
//! per-delay compliance at exponent `a` forces cumulative compliance at
//! exponent `a + 1` with a doubled scale.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::sync::{Arc, Mutex};

use crate::error::EnumError;
use crate::problem::Solution;
use crate::process::{Burst, EnumProcess, EnumeratorEvent, SteppedEnumerator};
use crate::schedule::{ipow, BudgetSchedule};
use crate::trace::DelayTrace;

/// Ticks charged for releasing one buffered solution (queue extraction plus
/// the write).
pub const EXTRACT_TICKS: u64 = 2;

/// Queue size observed at a release, taken just before the solution leaves
/// the queue. `emission_index` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueueSample {
    pub emission_index: u64,
    pub queue_size: usize,
}

/// Shared handle to the samples a regularized run records.
pub type QueueSamples = Arc<Mutex<Vec<QueueSample>>>;

/// Behaviour switches for [`cap_to_inc`].
#[derive(Debug, Clone, Copy, Default)]
pub struct RegularizeOptions {
    /// Keep running across broken thresholds instead of failing with
    /// `BoundViolation`. Pacing guarantees are void afterwards, but the
    /// solution set is still delivered in full.
    pub continue_on_violation: bool,
}

/// A paced enumerator together with its queue-size observations.
pub struct Regularized {
    pub enumerator: SteppedEnumerator,
    pub queue_samples: QueueSamples,
}

/// Wrap `inner` so its emissions are released on the schedule's thresholds
/// `scale * i^exponent`. `inner` must be fresh (no ticks consumed yet).
///
/// For an inner enumerator that honours the cumulative bound at exponent
/// `a + 1`, the wrapped run's delays are bounded by consecutive threshold
/// gaps plus [`EXTRACT_TICKS`], which is the per-delay guarantee at
/// exponent `a` up to a constant factor.
pub fn cap_to_inc(
    inner: SteppedEnumerator,
    schedule: &BudgetSchedule,
    k: u64,
    n: u64,
    options: RegularizeOptions,
) -> Result<Regularized, EnumError> {
    if schedule.scale(k, n) == 0 {
        return Err(EnumError::InvalidSchedule(format!(
            "t(k) * p(n) evaluates to 0 at k = {k}, n = {n}"
        )));
    }
    assert_eq!(
        inner.cost_consumed(),
        0,
        "regularization must start from a fresh enumerator"
    );
    let queue_samples: QueueSamples = Arc::new(Mutex::new(Vec::new()));
    let process = RegularizerProcess {
        inner,
        schedule: schedule.clone(),
        k,
        n,
        continue_on_violation: options.continue_on_violation,
        steps: 0,
        out_index: 0,
        queue: BinaryHeap::new(),
        extract_progress: 0,
        samples: Arc::clone(&queue_samples),
        finished: false,
    };
    Ok(Regularized {
        enumerator: SteppedEnumerator::from_process(process),
        queue_samples,
    })
}

struct RegularizerProcess {
    inner: SteppedEnumerator,
    schedule: BudgetSchedule,
    k: u64,
    n: u64,
    continue_on_violation: bool,
    /// Ticks fed to the wrapped enumerator so far.
    steps: u64,
    /// Releases completed so far; the next release is number `out_index + 1`.
    out_index: u64,
    queue: BinaryHeap<Reverse<Solution>>,
    /// Ticks already paid toward the current release.
    extract_progress: u64,
    samples: QueueSamples,
    finished: bool,
}

impl RegularizerProcess {
    fn next_threshold(&self) -> u128 {
        self.schedule.bound(self.k, self.n, self.out_index + 1)
    }
}

impl EnumProcess for RegularizerProcess {
    fn run(&mut self, budget: u64) -> Result<Burst, EnumError> {
        if self.finished {
            return Ok(Burst {
                consumed: 0,
                emitted: None,
                finished: true,
            });
        }
        let mut consumed: u64 = 0;
        while consumed < budget {
            let remaining = budget - consumed;
            let release_due = !self.queue.is_empty()
                && (self.inner.is_finished() || self.steps as u128 >= self.next_threshold());
            if release_due {
                let pay = (EXTRACT_TICKS - self.extract_progress).min(remaining);
                consumed += pay;
                self.extract_progress += pay;
                if self.extract_progress < EXTRACT_TICKS {
                    return Ok(Burst::progress(consumed));
                }
                self.extract_progress = 0;
                self.out_index += 1;
                self.samples.lock().unwrap().push(QueueSample {
                    emission_index: self.out_index,
                    queue_size: self.queue.len(),
                });
                let Reverse(solution) = self.queue.pop().expect("queue checked non-empty");
                self.finished = self.inner.is_finished() && self.queue.is_empty();
                return Ok(Burst {
                    consumed,
                    emitted: Some(solution),
                    finished: self.finished,
                });
            }
            if self.inner.is_finished() {
                self.finished = true;
                return Ok(Burst {
                    consumed,
                    emitted: None,
                    finished: true,
                });
            }
            // Feed the wrapped enumerator, never past the next unmet
            // threshold so a due release is never overrun.
            let headroom = self.next_threshold().saturating_sub(self.steps as u128);
            let chunk = if headroom == 0 {
                if !self.continue_on_violation {
                    return Err(EnumError::BoundViolation {
                        index: self.out_index + 1,
                    });
                }
                remaining
            } else {
                remaining.min(u64::try_from(headroom).unwrap_or(u64::MAX))
            };
            let events = self.inner.advance(chunk)?;
            consumed += self.inner.cost_consumed() - self.steps;
            self.steps = self.inner.cost_consumed();
            for event in events {
                if let EnumeratorEvent::Emitted { solution, .. } = event {
                    self.queue.push(Reverse(solution));
                }
            }
        }
        Ok(Burst::progress(consumed))
    }
}

/// Outcome of [`inc_to_cap_bound`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CapVerdict {
    Pass,
    /// Delay `index` (0-based, postcomputation included) exceeds its
    /// per-delay bound.
    PremiseFailed { index: u64 },
    /// The running delay total through delay `index` exceeds the cumulative
    /// bound. A passing premise makes this unreachable; it is reported so
    /// the implication itself is checked rather than assumed.
    ConclusionFailed { index: u64 },
}

/// Check the summation direction on a recorded trace.
///
/// Premise (per-delay form at the schedule's exponent `a`): delay 0 is at
/// most `scale`, and delay `j` is at most `scale * j^a` for `j >= 1`.
/// Conclusion (cumulative form at exponent `a + 1`): for every `i >= 1`,
/// the delays through index `i` sum to at most `2 * scale * i^(a+1)`.
/// The premise is scanned first, both in ascending index order.
pub fn inc_to_cap_bound(
    trace: &DelayTrace,
    schedule: &BudgetSchedule,
    k: u64,
    n: u64,
) -> CapVerdict {
    let scale = schedule.scale(k, n);
    let a = schedule.exponent as u64;
    for (j, &d) in trace.delays().iter().enumerate() {
        let bound = if j == 0 {
            scale
        } else {
            scale.saturating_mul(ipow(j as u128, a))
        };
        if d as u128 > bound {
            return CapVerdict::PremiseFailed { index: j as u64 };
        }
    }
    let mut running: u128 = trace.delays().first().copied().unwrap_or(0) as u128;
    for (i, &d) in trace.delays().iter().enumerate().skip(1) {
        running += d as u128;
        let bound = 2u128
            .saturating_mul(scale)
            .saturating_mul(ipow(i as u128, a + 1));
        if running > bound {
            return CapVerdict::ConclusionFailed { index: i as u64 };
        }
    }
    CapVerdict::Pass
}

/// Headroom of each delay against its consecutive-threshold gap: entry `j`
/// is `(bound(j+1) - bound(j)) - delay_j`. Negative entries mark delays
/// that overran their gap.
pub fn delay_slack(trace: &DelayTrace, schedule: &BudgetSchedule, k: u64, n: u64) -> Vec<i128> {
    trace
        .delays()
        .iter()
        .enumerate()
        .map(|(j, &d)| {
            let gap = schedule
                .bound(k, n, j as u64 + 1)
                .saturating_sub(schedule.bound(k, n, j as u64));
            i128::try_from(gap).unwrap_or(i128::MAX) - d as i128
        })
        .collect()
}
