use thiserror::Error;

use crate::error::EnumError;
use crate::problem::Solution;
use crate::process::{EnumeratorEvent, SteppedEnumerator};

/// The delay profile of one completed run.
///
/// For a run with n emissions the trace holds n+1 delays: `delays[0]` is the
/// precomputation (ticks before the first emission), `delays[i]` the gap
/// between emissions i and i+1, and `delays[n]` the postcomputation (ticks
/// from the last emission to termination). A run with no emissions has the
/// single delay `[total_cost]`. The delays always sum to `total_cost`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DelayTrace {
    delays: Vec<u64>,
    emit_costs: Vec<u64>,
    total_cost: u64,
}

impl DelayTrace {
    /// Build a trace from the cumulative cost of each emission and the total
    /// cost at termination.
    ///
    /// Panics if `emit_costs` is not strictly increasing or exceeds
    /// `total_cost`; runs produced by the harness always satisfy both.
    pub fn from_run(emit_costs: Vec<u64>, total_cost: u64) -> Self {
        let mut prev = 0;
        let mut delays = Vec::with_capacity(emit_costs.len() + 1);
        for (i, &cost) in emit_costs.iter().enumerate() {
            assert!(
                cost > prev || (i == 0 && cost == 0),
                "emission costs must be strictly increasing"
            );
            assert!(cost <= total_cost, "emission cost past total cost");
            delays.push(cost - prev);
            prev = cost;
        }
        delays.push(total_cost - prev);
        DelayTrace {
            delays,
            emit_costs,
            total_cost,
        }
    }

    /// Build a trace from a delay list; emission costs become the prefix
    /// sums. An empty list is the empty trace (no run at all).
    pub fn from_delays(delays: Vec<u64>) -> Self {
        let mut emit_costs = Vec::new();
        let mut cum: u64 = 0;
        for &d in delays.iter().take(delays.len().saturating_sub(1)) {
            cum += d;
            emit_costs.push(cum);
        }
        let total_cost = cum + delays.last().copied().unwrap_or(0);
        DelayTrace {
            delays,
            emit_costs,
            total_cost,
        }
    }

    pub fn delays(&self) -> &[u64] {
        &self.delays
    }

    /// Cumulative cost at each emission, in emission order.
    pub fn emit_costs(&self) -> &[u64] {
        &self.emit_costs
    }

    pub fn total_cost(&self) -> u64 {
        self.total_cost
    }

    pub fn emission_count(&self) -> usize {
        self.emit_costs.len()
    }

    /// CSV interchange form: header `i,delay,cum_cost`, one row per delay,
    /// `cum_cost` the running sum through that delay.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,delay,cum_cost\n");
        let mut cum: u64 = 0;
        for (i, &d) in self.delays.iter().enumerate() {
            cum += d;
            out.push_str(&format!("{i},{d},{cum}\n"));
        }
        out
    }

    /// Parse the CSV form written by [`DelayTrace::to_csv`].
    pub fn from_csv(text: &str) -> Result<Self, TraceCsvError> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, header)) if header.trim() == "i,delay,cum_cost" => {}
            _ => {
                return Err(TraceCsvError {
                    line: 1,
                    msg: "expected header i,delay,cum_cost".into(),
                })
            }
        }
        let mut delays = Vec::new();
        let mut cum: u64 = 0;
        for (idx, line) in lines {
            let line_no = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.trim().split(',').collect();
            if fields.len() != 3 {
                return Err(TraceCsvError {
                    line: line_no,
                    msg: format!("expected 3 fields, found {}", fields.len()),
                });
            }
            let parse = |s: &str| -> Result<u64, TraceCsvError> {
                s.parse().map_err(|_| TraceCsvError {
                    line: line_no,
                    msg: format!("not an unsigned integer: {s:?}"),
                })
            };
            let i = parse(fields[0])?;
            let delay = parse(fields[1])?;
            let listed_cum = parse(fields[2])?;
            if i != delays.len() as u64 {
                return Err(TraceCsvError {
                    line: line_no,
                    msg: format!("row index {i} out of order, expected {}", delays.len()),
                });
            }
            cum += delay;
            if listed_cum != cum {
                return Err(TraceCsvError {
                    line: line_no,
                    msg: format!("cum_cost {listed_cum} disagrees with running sum {cum}"),
                });
            }
            delays.push(delay);
        }
        Ok(DelayTrace::from_delays(delays))
    }
}

/// A malformed delay-trace CSV file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("trace csv line {line}: {msg}")]
pub struct TraceCsvError {
    pub line: usize,
    pub msg: String,
}

/// Everything a finished run produced.
#[derive(Debug)]
pub struct CompletedRun {
    /// Solutions in emission order.
    pub solutions: Vec<Solution>,
    pub trace: DelayTrace,
}

/// Drive an enumerator until it finishes, or fail with `BudgetExhausted`
/// once `cost_cap` ticks have been consumed without termination.
pub fn run_to_completion(
    enumerator: &mut SteppedEnumerator,
    cost_cap: u64,
) -> Result<CompletedRun, EnumError> {
    let mut solutions = Vec::new();
    let mut emit_costs = Vec::new();
    loop {
        if enumerator.is_finished() {
            break;
        }
        let remaining = cost_cap.saturating_sub(enumerator.cost_consumed());
        if remaining == 0 {
            return Err(EnumError::BudgetExhausted { cap: cost_cap });
        }
        for event in enumerator.advance(remaining)? {
            match event {
                EnumeratorEvent::Emitted { solution, at_cost } => {
                    solutions.push(solution);
                    emit_costs.push(at_cost);
                }
                EnumeratorEvent::Finished { .. } => {}
            }
        }
    }
    let trace = DelayTrace::from_run(emit_costs, enumerator.cost_consumed());
    Ok(CompletedRun { solutions, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::ScriptedProcess;

    fn sol(s: &str) -> Solution {
        Solution::new(s.as_bytes().to_vec())
    }

    #[test]
    fn delays_cover_pre_gaps_and_post() {
        // Emissions at 10, 20, 30; termination at 32.
        let mut e = SteppedEnumerator::from_process(ScriptedProcess::new(
            vec![(10, sol("s1")), (20, sol("s2")), (30, sol("s3"))],
            32,
        ));
        let run = run_to_completion(&mut e, 1_000).unwrap();
        assert_eq!(run.trace.delays(), &[10, 10, 10, 2]);
        assert_eq!(run.trace.emit_costs(), &[10, 20, 30]);
        assert_eq!(run.trace.total_cost(), 32);
        assert_eq!(run.solutions, vec![sol("s1"), sol("s2"), sol("s3")]);
    }

    #[test]
    fn empty_solution_set_yields_a_single_delay() {
        let mut e = SteppedEnumerator::from_process(ScriptedProcess::new(vec![], 5));
        let run = run_to_completion(&mut e, 1_000).unwrap();
        assert_eq!(run.trace.delays(), &[5]);
        assert_eq!(run.trace.emission_count(), 0);
    }

    #[test]
    fn single_emission_at_termination_has_zero_postcomputation() {
        let mut e = SteppedEnumerator::from_process(ScriptedProcess::new(vec![(1, sol("y"))], 1));
        let run = run_to_completion(&mut e, 1_000).unwrap();
        assert_eq!(run.trace.delays(), &[1, 0]);
    }

    #[test]
    fn cap_exhaustion_is_reported() {
        let mut e = SteppedEnumerator::from_process(ScriptedProcess::new(vec![], 100));
        let err = run_to_completion(&mut e, 40).unwrap_err();
        assert!(matches!(err, EnumError::BudgetExhausted { cap: 40 }));
    }

    #[test]
    fn delays_always_sum_to_total_cost() {
        let trace = DelayTrace::from_run(vec![3, 7, 19], 25);
        assert_eq!(trace.delays().iter().sum::<u64>(), trace.total_cost());
        assert_eq!(trace.delays(), &[3, 4, 12, 6]);
    }

    #[test]
    fn csv_round_trips() {
        let trace = DelayTrace::from_run(vec![10, 20, 30], 32);
        let csv = trace.to_csv();
        assert_eq!(csv, "i,delay,cum_cost\n0,10,10\n1,10,20\n2,10,30\n3,2,32\n");
        assert_eq!(DelayTrace::from_csv(&csv).unwrap(), trace);
    }

    #[test]
    fn csv_rejects_inconsistent_running_sums() {
        let err = DelayTrace::from_csv("i,delay,cum_cost\n0,10,11\n").unwrap_err();
        assert_eq!(err.line, 2);
    }

    #[test]
    fn from_delays_inverts_the_delay_view() {
        let trace = DelayTrace::from_delays(vec![10, 10, 10, 2]);
        assert_eq!(trace.emit_costs(), &[10, 20, 30]);
        assert_eq!(trace.total_cost(), 32);
    }
}
