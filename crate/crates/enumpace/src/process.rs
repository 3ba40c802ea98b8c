use std::collections::HashSet;

use crate::error::EnumError;
use crate::problem::Solution;

/// Outcome of one bounded slice of work from an [`EnumProcess`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Burst {
    /// Ticks actually consumed, at most the requested budget.
    pub consumed: u64,
    /// A solution whose emission landed on the last consumed tick. An
    /// emission always ends the call, so a burst carries at most one.
    pub emitted: Option<Solution>,
    /// The process has terminated; no further ticks or emissions follow.
    pub finished: bool,
}

impl Burst {
    pub fn progress(consumed: u64) -> Self {
        Burst {
            consumed,
            emitted: None,
            finished: false,
        }
    }
}

/// A resumable enumeration process that accounts for its own work in integer
/// ticks.
///
/// `run(budget)` advances the process by at most `budget` ticks (`budget` is
/// never 0) and reports what happened. The contract the harness enforces:
///
/// * `consumed ≤ budget`;
/// * an unfinished process must make progress: `consumed == 0` is only legal
///   together with `finished` (observing an already-finished state is free);
/// * an emission rides a tick: `emitted` requires `consumed ≥ 1`;
/// * behaviour depends only on accumulated ticks, never on how they were
///   split into budgets, so any budget sequences with equal totals replay
///   the same emissions at the same cumulative costs.
pub trait EnumProcess {
    fn run(&mut self, budget: u64) -> Result<Burst, EnumError>;
}

/// One observable event from [`SteppedEnumerator::advance`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnumeratorEvent {
    /// `solution` was emitted when cumulative cost reached `at_cost`.
    /// Across a run, emission costs are strictly increasing.
    Emitted { solution: Solution, at_cost: u64 },
    /// The process terminated at cumulative cost `at_cost`.
    Finished { at_cost: u64 },
}

/// Execution harness around an [`EnumProcess`]: tracks cumulative cost,
/// detects duplicate emissions and accounting violations, and becomes
/// poisoned after the first error.
pub struct SteppedEnumerator {
    process: Box<dyn EnumProcess>,
    cost_consumed: u64,
    finished: bool,
    poisoned: bool,
    emitted: HashSet<Solution>,
}

impl SteppedEnumerator {
    pub fn new(process: Box<dyn EnumProcess>) -> Self {
        SteppedEnumerator {
            process,
            cost_consumed: 0,
            finished: false,
            poisoned: false,
            emitted: HashSet::new(),
        }
    }

    pub fn from_process(process: impl EnumProcess + 'static) -> Self {
        Self::new(Box::new(process))
    }

    /// Total ticks consumed so far.
    pub fn cost_consumed(&self) -> u64 {
        self.cost_consumed
    }

    pub fn is_finished(&self) -> bool {
        self.finished
    }

    pub fn emitted_count(&self) -> u64 {
        self.emitted.len() as u64
    }

    /// Run for at most `budget` ticks and return the events that occurred.
    ///
    /// Consumes the full budget unless the process finishes first. Once
    /// finished, further calls emit nothing and consume nothing. A returned
    /// error poisons the enumerator; later calls fail with
    /// [`EnumError::Poisoned`].
    pub fn advance(&mut self, budget: u64) -> Result<Vec<EnumeratorEvent>, EnumError> {
        if self.poisoned {
            return Err(EnumError::Poisoned);
        }
        if budget == 0 {
            return Err(EnumError::InvalidBudget);
        }
        let mut events = Vec::new();
        let mut remaining = budget;
        while remaining > 0 && !self.finished {
            let burst = match self.process.run(remaining) {
                Ok(burst) => burst,
                Err(err) => {
                    self.poisoned = true;
                    return Err(err);
                }
            };
            if burst.consumed > remaining {
                self.poisoned = true;
                return Err(EnumError::CostAccountingViolation(
                    "process consumed more than the offered budget",
                ));
            }
            if burst.consumed == 0 && !burst.finished {
                self.poisoned = true;
                return Err(EnumError::CostAccountingViolation(
                    "process reported zero cost while unfinished",
                ));
            }
            if burst.emitted.is_some() && burst.consumed == 0 {
                self.poisoned = true;
                return Err(EnumError::CostAccountingViolation(
                    "emission reported without a tick to carry it",
                ));
            }
            self.cost_consumed += burst.consumed;
            remaining -= burst.consumed;
            if let Some(solution) = burst.emitted {
                if !self.emitted.insert(solution.clone()) {
                    self.poisoned = true;
                    return Err(EnumError::DuplicateEmission(solution));
                }
                events.push(EnumeratorEvent::Emitted {
                    solution,
                    at_cost: self.cost_consumed,
                });
            }
            if burst.finished {
                self.finished = true;
                events.push(EnumeratorEvent::Finished {
                    at_cost: self.cost_consumed,
                });
            }
        }
        Ok(events)
    }
}

impl std::fmt::Debug for SteppedEnumerator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SteppedEnumerator")
            .field("cost_consumed", &self.cost_consumed)
            .field("finished", &self.finished)
            .field("poisoned", &self.poisoned)
            .field("emitted", &self.emitted.len())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::ScriptedProcess;

    fn sol(s: &str) -> Solution {
        Solution::new(s.as_bytes().to_vec())
    }

    #[test]
    fn empty_run_reports_only_the_finish() {
        // No solutions, precomputation cost 3.
        let mut e = SteppedEnumerator::from_process(ScriptedProcess::new(vec![], 3));
        let events = e.advance(10).unwrap();
        assert_eq!(events, vec![EnumeratorEvent::Finished { at_cost: 3 }]);
        assert_eq!(e.cost_consumed(), 3);
        assert!(e.is_finished());
    }

    #[test]
    fn emissions_land_at_their_scripted_costs() {
        let mut e = SteppedEnumerator::from_process(ScriptedProcess::new(
            vec![(10, sol("s1")), (20, sol("s2"))],
            20,
        ));
        let first = e.advance(15).unwrap();
        assert_eq!(
            first,
            vec![EnumeratorEvent::Emitted {
                solution: sol("s1"),
                at_cost: 10
            }]
        );
        assert_eq!(e.cost_consumed(), 15);

        let second = e.advance(15).unwrap();
        assert_eq!(
            second,
            vec![
                EnumeratorEvent::Emitted {
                    solution: sol("s2"),
                    at_cost: 20
                },
                EnumeratorEvent::Finished { at_cost: 20 },
            ]
        );
        assert_eq!(e.cost_consumed(), 20);
    }

    #[test]
    fn finished_enumerators_emit_nothing_and_consume_nothing() {
        let mut e = SteppedEnumerator::from_process(ScriptedProcess::new(vec![(1, sol("y"))], 1));
        e.advance(5).unwrap();
        assert!(e.is_finished());
        let after = e.advance(100).unwrap();
        assert!(after.is_empty());
        assert_eq!(e.cost_consumed(), 1);
    }

    #[test]
    fn zero_budget_is_rejected() {
        let mut e = SteppedEnumerator::from_process(ScriptedProcess::new(vec![], 1));
        assert!(matches!(e.advance(0), Err(EnumError::InvalidBudget)));
    }

    #[test]
    fn duplicate_emissions_poison_the_enumerator() {
        let mut e = SteppedEnumerator::from_process(ScriptedProcess::new(
            vec![(1, sol("same")), (2, sol("same"))],
            3,
        ));
        let err = e.advance(10).unwrap_err();
        assert!(matches!(err, EnumError::DuplicateEmission(s) if s == sol("same")));
        assert!(matches!(e.advance(1), Err(EnumError::Poisoned)));
    }

    #[test]
    fn zero_cost_progress_is_an_accounting_violation() {
        struct Stuck;
        impl EnumProcess for Stuck {
            fn run(&mut self, _budget: u64) -> Result<Burst, EnumError> {
                Ok(Burst::progress(0))
            }
        }
        let mut e = SteppedEnumerator::from_process(Stuck);
        assert!(matches!(
            e.advance(4),
            Err(EnumError::CostAccountingViolation(_))
        ));
    }

    #[test]
    fn overspending_the_budget_is_an_accounting_violation() {
        struct Greedy;
        impl EnumProcess for Greedy {
            fn run(&mut self, budget: u64) -> Result<Burst, EnumError> {
                Ok(Burst::progress(budget + 1))
            }
        }
        let mut e = SteppedEnumerator::from_process(Greedy);
        assert!(matches!(
            e.advance(4),
            Err(EnumError::CostAccountingViolation(_))
        ));
    }

    #[test]
    fn emission_costs_strictly_increase() {
        let script: Vec<(u64, Solution)> =
            (1..=5).map(|i| (i, sol(&format!("s{i}")))).collect();
        let mut e = SteppedEnumerator::from_process(ScriptedProcess::new(script, 5));
        let events = e.advance(100).unwrap();
        let costs: Vec<u64> = events
            .iter()
            .filter_map(|ev| match ev {
                EnumeratorEvent::Emitted { at_cost, .. } => Some(*at_cost),
                EnumeratorEvent::Finished { .. } => None,
            })
            .collect();
        assert_eq!(costs, vec![1, 2, 3, 4, 5]);
    }
}
