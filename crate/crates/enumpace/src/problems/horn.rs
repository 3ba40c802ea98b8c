//! Enumeration of all satisfying assignments of a Horn formula.
//!
//! Solutions are assignment strings over `{'0','1'}` of length `V`,
//! variable 0 first. The search interleaves unit propagation with branching
//! on the lowest unassigned variable, exploring the 0-branch first, so
//! assignments come out in lexicographic order. After conflict-free
//! propagation the all-false completion always satisfies a Horn formula, so
//! every surviving node leads to at least one emission and the delay stays
//! linear in the variable count.

use crate::error::EnumError;
use crate::problem::{ProblemDescriptor, Solution};
use crate::problems::ParseError;
use crate::process::{Burst, EnumProcess};

/// Upper limit on variable count so assignments fit in a `u128` bitmask.
pub const MAX_VARS: u32 = 128;

/// One literal; `var` is 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lit {
    pub var: u32,
    pub positive: bool,
}

impl Lit {
    pub fn pos(var: u32) -> Self {
        Lit { var, positive: true }
    }

    pub fn neg(var: u32) -> Self {
        Lit {
            var,
            positive: false,
        }
    }
}

/// A CNF formula in which every clause has at most one positive literal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HornFormula {
    nvars: u32,
    clauses: Vec<Vec<Lit>>,
}

impl HornFormula {
    pub fn new(nvars: u32, clauses: Vec<Vec<Lit>>) -> Result<Self, ParseError> {
        if nvars > MAX_VARS {
            return Err(ParseError::unpositioned(format!(
                "formula has {nvars} variables, at most {MAX_VARS} supported"
            )));
        }
        for (index, clause) in clauses.iter().enumerate() {
            for lit in clause {
                if lit.var >= nvars {
                    return Err(ParseError::unpositioned(format!(
                        "clause {index} mentions variable {} outside 0..{nvars}",
                        lit.var
                    )));
                }
            }
            if clause.iter().filter(|l| l.positive).count() > 1 {
                return Err(ParseError::NotHorn { index });
            }
        }
        Ok(HornFormula { nvars, clauses })
    }

    pub fn nvars(&self) -> u32 {
        self.nvars
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    /// Canonical DIMACS encoding: `p cnf V C` followed by one
    /// zero-terminated clause per line with 1-based signed literals.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = format!("p cnf {} {}\n", self.nvars, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                let v = (lit.var + 1) as i64;
                out.push_str(&format!("{} ", if lit.positive { v } else { -v }));
            }
            out.push_str("0\n");
        }
        out.into_bytes()
    }

    /// Parse DIMACS CNF: `c` comment lines, a `p cnf V C` header, then one
    /// clause per line terminated by `0`. Rejects non-Horn clauses.
    pub fn parse_dimacs(raw: &[u8]) -> Result<Self, ParseError> {
        let text = std::str::from_utf8(raw)
            .map_err(|_| ParseError::unpositioned("formula is not valid UTF-8"))?;
        let mut significant = text
            .lines()
            .enumerate()
            .map(|(i, line)| (i + 1, line.trim()))
            .filter(|(_, line)| !line.is_empty() && !line.starts_with('c'));

        let (line_no, header) = significant
            .next()
            .ok_or_else(|| ParseError::at(1, 1, "missing `p cnf` header"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
            return Err(ParseError::at(line_no, 1, "header must be `p cnf V C`"));
        }
        let nvars: u32 = fields[2]
            .parse()
            .map_err(|_| ParseError::at(line_no, 1, format!("bad variable count {:?}", fields[2])))?;
        let promised: usize = fields[3]
            .parse()
            .map_err(|_| ParseError::at(line_no, 1, format!("bad clause count {:?}", fields[3])))?;

        let mut clauses = Vec::with_capacity(promised);
        for (line_no, line) in significant {
            let mut clause = Vec::new();
            let mut terminated = false;
            for token in line.split_whitespace() {
                if terminated {
                    return Err(ParseError::at(line_no, 1, "literal after terminating 0"));
                }
                let value: i64 = token.parse().map_err(|_| {
                    ParseError::at(line_no, 1, format!("expected a literal, found {token:?}"))
                })?;
                if value == 0 {
                    terminated = true;
                    continue;
                }
                let var = value.unsigned_abs() - 1;
                if var >= nvars as u64 {
                    return Err(ParseError::at(
                        line_no,
                        1,
                        format!("literal {value} outside 1..={nvars}"),
                    ));
                }
                clause.push(Lit {
                    var: var as u32,
                    positive: value > 0,
                });
            }
            if !terminated {
                return Err(ParseError::at(line_no, 1, "clause line must end with 0"));
            }
            clauses.push(clause);
        }
        if clauses.len() != promised {
            return Err(ParseError::unpositioned(format!(
                "header promises {promised} clauses, found {}",
                clauses.len()
            )));
        }
        HornFormula::new(nvars, clauses)
    }

    fn assignment(&self, values: u128) -> Solution {
        let bytes: Vec<u8> = (0..self.nvars)
            .map(|v| if values >> v & 1 == 1 { b'1' } else { b'0' })
            .collect();
        Solution::new(bytes)
    }
}

/// Descriptor over assignment strings: a candidate is accepted when it has
/// length `V`, uses only `0`/`1`, and satisfies every clause. The
/// parametrisation is constant 1.
pub fn descriptor() -> ProblemDescriptor {
    ProblemDescriptor::new(
        "horn-sat",
        *b"01",
        |raw, candidate| {
            let Ok(f) = HornFormula::parse_dimacs(raw) else {
                return false;
            };
            if candidate.len() != f.nvars as usize {
                return false;
            }
            if !candidate.iter().all(|&b| b == b'0' || b == b'1') {
                return false;
            }
            f.clauses.iter().all(|clause| {
                clause
                    .iter()
                    .any(|lit| (candidate[lit.var as usize] == b'1') == lit.positive)
            })
        },
        |raw| {
            HornFormula::parse_dimacs(raw)
                .map(|f| f.nvars as usize)
                .unwrap_or(0)
        },
        |_| 1,
    )
}

/// A clause as variable bitmasks for propagation.
#[derive(Debug, Clone, Copy)]
struct SolverClause {
    pos: u128,
    neg: u128,
}

/// DFS with unit propagation, one tick per explored node.
///
/// Propagation runs to fixpoint inside the node's tick; conflicts prune the
/// node, complete assignments are emitted, otherwise the search branches on
/// the lowest unassigned variable with the 0-branch explored first.
pub struct HornSearch {
    formula: HornFormula,
    clauses: Vec<SolverClause>,
    /// Pairs of (assigned variables, their values).
    stack: Vec<(u128, u128)>,
    finished: bool,
}

impl HornSearch {
    pub fn new(formula: &HornFormula) -> Self {
        let clauses = formula
            .clauses
            .iter()
            .map(|clause| {
                let mut pos = 0;
                let mut neg = 0;
                for lit in clause {
                    if lit.positive {
                        pos |= 1 << lit.var;
                    } else {
                        neg |= 1 << lit.var;
                    }
                }
                SolverClause { pos, neg }
            })
            .collect();
        HornSearch {
            formula: formula.clone(),
            clauses,
            stack: vec![(0, 0)],
            finished: false,
        }
    }

    /// Unit-propagate to fixpoint; `None` on conflict.
    fn propagate(&self, mut assigned: u128, mut values: u128) -> Option<(u128, u128)> {
        loop {
            let mut changed = false;
            for c in &self.clauses {
                let satisfied =
                    c.pos & assigned & values != 0 || c.neg & assigned & !values != 0;
                if satisfied {
                    continue;
                }
                let open_pos = c.pos & !assigned;
                let open_neg = c.neg & !assigned;
                match open_pos.count_ones() + open_neg.count_ones() {
                    0 => return None,
                    1 => {
                        if open_pos != 0 {
                            let var = open_pos.trailing_zeros();
                            assigned |= 1 << var;
                            values |= 1 << var;
                        } else {
                            assigned |= 1 << open_neg.trailing_zeros();
                        }
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return Some((assigned, values));
            }
        }
    }
}

impl EnumProcess for HornSearch {
    fn run(&mut self, budget: u64) -> Result<Burst, EnumError> {
        if self.finished {
            return Ok(Burst {
                consumed: 0,
                emitted: None,
                finished: true,
            });
        }
        let all_vars = if self.formula.nvars == MAX_VARS {
            u128::MAX
        } else {
            (1 << self.formula.nvars) - 1
        };
        let mut consumed = 0;
        while consumed < budget {
            let Some((assigned, values)) = self.stack.pop() else {
                self.finished = true;
                return Ok(Burst {
                    consumed,
                    emitted: None,
                    finished: true,
                });
            };
            consumed += 1;
            let Some((assigned, values)) = self.propagate(assigned, values) else {
                // A conflict on the last node ends the run; the finish
                // rides this tick so a budget of exactly the total cost
                // observes it.
                if self.stack.is_empty() {
                    self.finished = true;
                    return Ok(Burst {
                        consumed,
                        emitted: None,
                        finished: true,
                    });
                }
                continue;
            };
            let open = all_vars & !assigned;
            if open == 0 {
                self.finished = self.stack.is_empty();
                return Ok(Burst {
                    consumed,
                    emitted: Some(self.formula.assignment(values)),
                    finished: self.finished,
                });
            }
            let bit = 1 << open.trailing_zeros();
            self.stack.push((assigned | bit, values | bit));
            self.stack.push((assigned | bit, values));
        }
        Ok(Burst::progress(consumed))
    }
}
