//! Reductions between enumerators and another-solution oracles.
//!
//! An another-solution oracle answers "give me a solution I do not already
//! know, or tell me there are none left". The two directions implemented
//! here turn such an oracle into a full enumerator and vice versa:
//!
//! * [`enum_from_oracle`] iterates an oracle into an enumerator. Each round
//!   pays the oracle's declared call cost, then one more tick to record the
//!   returned solution, which carries the emission. Total cost is linear in
//!   the number of solutions times the call cost.
//! * [`oracle_from_enum`] answers oracle queries by simulating a fresh
//!   enumerator under a declared cumulative budget. A compliant enumerator
//!   must surface at least `|known| + 1` distinct solutions within the
//!   budget for `|known| + 1`, so either a new solution appears among them
//!   or the run finishes and exhaustion can be reported with certainty.
//!
//! [`roundtrip`] composes the two directions over a concrete problem
//! instance and compares the result against brute force, which exercises
//! both reductions end to end.

use std::cell::Cell;
use std::collections::BTreeSet;
use std::rc::Rc;

use crate::error::EnumError;
use crate::problem::{brute_force_enum, Instance, ProblemDescriptor, Solution};
use crate::process::{Burst, EnumProcess, EnumeratorEvent, SteppedEnumerator};
use crate::schedule::{ipow, BudgetSchedule};
use crate::trace::run_to_completion;

/// One oracle answer: a solution outside the known set, or a certificate
/// that the known set is already complete.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleAnswer {
    Solution(Solution),
    Exhausted,
}

/// Solver callback behind an oracle: the instance and the set of already
/// known solutions in, the next answer out.
pub type SolveFn =
    Box<dyn FnMut(&Instance, &BTreeSet<Solution>) -> Result<OracleAnswer, EnumError>>;

/// An another-solution oracle with a declared per-call tick cost.
///
/// The contract on `solve(x, known)`: return a solution of `x` that is not
/// in `known`, or `Exhausted` when `known` covers every solution. Answers
/// are validated by the consuming side; a violation surfaces as
/// [`EnumError::OracleContractViolation`].
pub struct AnotherSolOracle {
    solve: SolveFn,
    cost_of_call: u64,
}

impl AnotherSolOracle {
    /// Wrap a solver closure. `cost_of_call` is the tick cost charged for
    /// each query and must be at least one: answers ride ticks, so a free
    /// call would break cost accounting downstream.
    pub fn new(
        cost_of_call: u64,
        solve: impl FnMut(&Instance, &BTreeSet<Solution>) -> Result<OracleAnswer, EnumError>
            + 'static,
    ) -> Result<Self, EnumError> {
        if cost_of_call == 0 {
            return Err(EnumError::CostAccountingViolation(
                "oracle call cost must be at least one tick",
            ));
        }
        Ok(AnotherSolOracle {
            solve: Box::new(solve),
            cost_of_call,
        })
    }

    pub fn cost_of_call(&self) -> u64 {
        self.cost_of_call
    }

    /// Query the oracle directly, outside any enumeration run.
    pub fn call(
        &mut self,
        instance: &Instance,
        known: &BTreeSet<Solution>,
    ) -> Result<OracleAnswer, EnumError> {
        (self.solve)(instance, known)
    }
}

impl std::fmt::Debug for AnotherSolOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AnotherSolOracle")
            .field("cost_of_call", &self.cost_of_call)
            .finish()
    }
}

enum IterationPhase {
    /// Paying down the call cost; the query fires once fully paid.
    Calling { paid: u64 },
    /// The answer is validated and waiting for its one recording tick.
    Recording { pending: Solution },
}

/// Enumerates by repeatedly asking an oracle for a yet-unknown solution.
struct OracleIteration {
    problem: ProblemDescriptor,
    instance: Instance,
    oracle: AnotherSolOracle,
    known: BTreeSet<Solution>,
    phase: IterationPhase,
    finished: bool,
}

impl EnumProcess for OracleIteration {
    fn run(&mut self, budget: u64) -> Result<Burst, EnumError> {
        if self.finished {
            return Ok(Burst {
                consumed: 0,
                emitted: None,
                finished: true,
            });
        }
        let mut consumed = 0;
        while consumed < budget {
            match &mut self.phase {
                IterationPhase::Calling { paid } => {
                    let due = self.oracle.cost_of_call - *paid;
                    let pay = due.min(budget - consumed);
                    consumed += pay;
                    *paid += pay;
                    if *paid < self.oracle.cost_of_call {
                        return Ok(Burst::progress(consumed));
                    }
                    match (self.oracle.solve)(&self.instance, &self.known)? {
                        OracleAnswer::Exhausted => {
                            self.finished = true;
                            return Ok(Burst {
                                consumed,
                                emitted: None,
                                finished: true,
                            });
                        }
                        OracleAnswer::Solution(candidate) => {
                            if self.known.contains(&candidate) {
                                return Err(EnumError::OracleContractViolation(format!(
                                    "oracle repeated known solution {}",
                                    candidate.escaped()
                                )));
                            }
                            if !self.problem.check(self.instance.raw(), candidate.bytes()) {
                                return Err(EnumError::OracleContractViolation(format!(
                                    "oracle answer {} is not a solution",
                                    candidate.escaped()
                                )));
                            }
                            self.phase = IterationPhase::Recording { pending: candidate };
                        }
                    }
                }
                IterationPhase::Recording { pending } => {
                    let solution = pending.clone();
                    consumed += 1;
                    self.known.insert(solution.clone());
                    self.phase = IterationPhase::Calling { paid: 0 };
                    return Ok(Burst {
                        consumed,
                        emitted: Some(solution),
                        finished: false,
                    });
                }
            }
        }
        Ok(Burst::progress(consumed))
    }
}

/// Turn an another-solution oracle into an enumerator for `instance`.
///
/// Every emission costs `cost_of_call + 1` ticks (the query plus one tick
/// to record the answer, which carries the emission); the final exhaustion
/// check costs `cost_of_call` as postcomputation. Oracle answers are
/// validated against the problem's `check` and the set already seen.
pub fn enum_from_oracle(
    problem: &ProblemDescriptor,
    instance: &Instance,
    oracle: AnotherSolOracle,
) -> SteppedEnumerator {
    SteppedEnumerator::from_process(OracleIteration {
        problem: problem.clone(),
        instance: instance.clone(),
        oracle,
        known: BTreeSet::new(),
        phase: IterationPhase::Calling { paid: 0 },
        finished: false,
    })
}

/// A declared cumulative bound for an enumerator: within
/// `scale(k, n) * i^exponent` ticks it emits at least `i` solutions or
/// finishes. [`oracle_from_enum`] budgets its simulations from this.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumeratorBoundDecl(pub BudgetSchedule);

impl EnumeratorBoundDecl {
    /// Ticks granted to a simulation that must surface `known + 1`
    /// solutions (or finish), clamped to `u64::MAX`.
    pub fn simulation_budget(&self, k: u64, n: u64, known: u64) -> u64 {
        let bound = self
            .0
            .scale(k, n)
            .saturating_mul(ipow(known as u128 + 1, self.0.exponent as u64));
        u64::try_from(bound).unwrap_or(u64::MAX)
    }
}

struct Simulation {
    emitted: Vec<Solution>,
    finished: bool,
}

fn simulate(
    make_enum: &dyn Fn() -> SteppedEnumerator,
    budget: u64,
) -> Result<Simulation, EnumError> {
    let mut fresh = make_enum();
    let mut emitted = Vec::new();
    let mut finished = false;
    for event in fresh.advance(budget)? {
        match event {
            EnumeratorEvent::Emitted { solution, .. } => emitted.push(solution),
            EnumeratorEvent::Finished { .. } => finished = true,
        }
    }
    Ok(Simulation { emitted, finished })
}

/// Turn an enumerator family into an another-solution oracle.
///
/// Each query spawns a fresh enumerator via `make_enum` and runs it for
/// `decl.simulation_budget(k, n, |known|)` ticks. If the run finishes, the
/// full solution set is on the table and the answer is exact: the smallest
/// unknown solution in canonical byte order, or `Exhausted`. If it does not
/// finish, a `decl`-compliant run has emitted at least `|known| + 1`
/// distinct solutions, so one of them is unknown and the smallest such is
/// returned; fewer emissions mean the declaration is broken and the query
/// fails with [`EnumError::BoundViolation`] at index `|known| + 1`.
///
/// The oracle's own call cost is one tick: simulation work happens on the
/// oracle's side of the fence and is not billed to the caller.
pub fn oracle_from_enum(
    make_enum: impl Fn() -> SteppedEnumerator + 'static,
    decl: EnumeratorBoundDecl,
    k: u64,
    n: u64,
) -> Result<AnotherSolOracle, EnumError> {
    if decl.0.scale(k, n) == 0 {
        return Err(EnumError::InvalidSchedule(
            "declared bound evaluates to a zero budget".into(),
        ));
    }
    AnotherSolOracle::new(1, move |_instance, known| {
        let budget = decl.simulation_budget(k, n, known.len() as u64);
        let sim = simulate(&make_enum, budget)?;
        let fresh = sim
            .emitted
            .iter()
            .filter(|solution| !known.contains(*solution))
            .min()
            .cloned();
        match (fresh, sim.finished) {
            (Some(solution), _) => Ok(OracleAnswer::Solution(solution)),
            (None, true) => Ok(OracleAnswer::Exhausted),
            (None, false) => Err(EnumError::BoundViolation {
                index: known.len() as u64 + 1,
            }),
        }
    })
}

/// Certify that `known` covers the whole solution set, by simulating a
/// fresh enumerator under the declared budget for `|known| + 1` solutions.
///
/// Returns true only when the simulation finishes and every emission is
/// already in `known`. An unfinished simulation yields false: either the
/// declaration is broken or solutions are genuinely missing, and without a
/// finish there is no certificate either way.
pub fn completeness_check(
    make_enum: &dyn Fn() -> SteppedEnumerator,
    decl: &EnumeratorBoundDecl,
    k: u64,
    n: u64,
    known: &BTreeSet<Solution>,
) -> Result<bool, EnumError> {
    let budget = decl.simulation_budget(k, n, known.len() as u64);
    let sim = simulate(make_enum, budget)?;
    Ok(sim.finished && sim.emitted.iter().all(|solution| known.contains(solution)))
}

/// Result of a [`roundtrip`] run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundtripReport {
    /// The composed enumerator reproduced the brute-force solution set.
    pub pass: bool,
    /// Solutions in emission order.
    pub solutions: Vec<Solution>,
    /// Oracle queries issued, including the final exhaustion check.
    pub oracle_calls: u64,
    /// Total ticks of the composed enumerator.
    pub ticks_total: u64,
}

/// Drive `make_enum` through both reductions and compare with brute force:
/// the enumerator becomes an oracle under `decl`, the oracle is iterated
/// back into an enumerator, and the emitted set must match
/// [`brute_force_enum`] exactly.
pub fn roundtrip(
    problem: &ProblemDescriptor,
    instance: &Instance,
    make_enum: impl Fn() -> SteppedEnumerator + 'static,
    decl: EnumeratorBoundDecl,
    cost_cap: u64,
) -> Result<RoundtripReport, EnumError> {
    let k = instance.param();
    let n = instance.size() as u64;
    let calls = Rc::new(Cell::new(0u64));

    let AnotherSolOracle {
        solve,
        cost_of_call,
    } = oracle_from_enum(make_enum, decl, k, n)?;
    let oracle = AnotherSolOracle::new(cost_of_call, counting_solver(solve, Rc::clone(&calls)))?;

    let mut composed = enum_from_oracle(problem, instance, oracle);
    let completed = run_to_completion(&mut composed, cost_cap)?;
    let expected = brute_force_enum(problem, instance, cost_cap)?;
    let produced: BTreeSet<Solution> = completed.solutions.iter().cloned().collect();

    Ok(RoundtripReport {
        pass: produced == expected,
        solutions: completed.solutions,
        oracle_calls: calls.get(),
        ticks_total: completed.trace.total_cost(),
    })
}

fn counting_solver(
    mut inner: SolveFn,
    counter: Rc<Cell<u64>>,
) -> impl FnMut(&Instance, &BTreeSet<Solution>) -> Result<OracleAnswer, EnumError> {
    move |instance, known| {
        counter.set(counter.get() + 1);
        inner(instance, known)
    }
}
