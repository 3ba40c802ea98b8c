//! Synthetic enumerators with exactly known cost profiles.
//!
//! These produce placeholder solutions on a deterministic tick schedule, so
//! pacing and instrumentation can be exercised against ground truth. Two
//! profiles are provided, both with zero postcomputation:
//!
//! * `structured`: emission `i` (1-based) ends a phase of `scale * i^a`
//!   ticks, so it lands at cumulative cost `scale * (1^a + ... + i^a)`;
//! * `front_loaded`: a setup block of `scale` ticks, then one tick per
//!   emission, so emission `i` lands at `scale + i`.
//!
//! `scale` is `t(k) * p(n)`. Phase lengths can far exceed any sensible
//! per-call budget; the process reports partial progress instead of
//! stepping through individual ticks, so runs over huge virtual spans stay
//! cheap.

use serde::{Deserialize, Serialize};

use crate::error::EnumError;
use crate::problem::Solution;
use crate::process::{Burst, EnumProcess};
use crate::schedule::{ipow, sum_of_powers, ParamCost, Polynomial};

/// Byte length of every synthetic solution string.
pub const SOLUTION_WIDTH: usize = 16;

/// Largest solution count the fixed-width naming scheme supports.
pub const MAX_SOLUTIONS: u64 = 999_999_999_999;

/// The 1-based `i`-th synthetic solution: `sol_` plus twelve digits.
pub fn solution_string(i: u64) -> Solution {
    let s = format!("sol_{i:012}");
    debug_assert_eq!(s.len(), SOLUTION_WIDTH);
    Solution::new(s.into_bytes())
}

/// Which cost profile a synthetic enumerator follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    Structured,
    FrontLoaded,
}

/// Full description of a synthetic enumerator.
///
/// Serialized with `t` flattened into exactly one of `t_const` / `t_table`,
/// mirroring the schedule representation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SyntheticRepr", into = "SyntheticRepr")]
pub struct SyntheticSpec {
    pub n: u64,
    pub k: u64,
    pub a: u32,
    /// Number of solutions.
    pub m: u64,
    pub profile: Profile,
    pub t: ParamCost,
    pub p: Polynomial,
}

impl SyntheticSpec {
    pub fn new(
        n: u64,
        k: u64,
        a: u32,
        m: u64,
        profile: Profile,
        t: ParamCost,
        p: Polynomial,
    ) -> Result<Self, EnumError> {
        let spec = SyntheticSpec {
            n,
            k,
            a,
            m,
            profile,
            t,
            p,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<(), EnumError> {
        if matches!(self.t, ParamCost::Formula(_)) {
            return Err(EnumError::InvalidSchedule(
                "synthetic cost factors must be t_const or t_table".into(),
            ));
        }
        if self.m > MAX_SOLUTIONS {
            return Err(EnumError::InvalidSchedule(format!(
                "solution count {} exceeds {MAX_SOLUTIONS}",
                self.m
            )));
        }
        let scale = self.t.eval(self.k).saturating_mul(self.p.eval(self.n));
        if scale == 0 {
            return Err(EnumError::InvalidSchedule(
                "t(k) * p(n) must be at least 1".into(),
            ));
        }
        if scale > u64::MAX as u128 {
            return Err(EnumError::InvalidSchedule(
                "t(k) * p(n) does not fit in 64 bits".into(),
            ));
        }
        let total: u128 = match self.profile {
            Profile::Structured => scale.saturating_mul(sum_of_powers(self.m, self.a)),
            Profile::FrontLoaded => scale + self.m as u128,
        };
        if total > u64::MAX as u128 {
            return Err(EnumError::InvalidSchedule(
                "total cost does not fit in 64 bits".into(),
            ));
        }
        Ok(())
    }

    /// `t(k) * p(n)`, guaranteed to fit in 64 bits.
    pub fn scale(&self) -> u64 {
        self.t.eval(self.k).saturating_mul(self.p.eval(self.n)) as u64
    }

    /// Cumulative cost of the 1-based `i`-th emission.
    pub fn emission_cost(&self, i: u64) -> u64 {
        debug_assert!(1 <= i && i <= self.m);
        let scale = self.scale() as u128;
        match self.profile {
            Profile::Structured => (scale * sum_of_powers(i, self.a)) as u64,
            Profile::FrontLoaded => (scale + i as u128) as u64,
        }
    }

    /// Total ticks consumed by a complete run.
    pub fn total_cost(&self) -> u64 {
        match self.profile {
            Profile::Structured => {
                (self.scale() as u128 * sum_of_powers(self.m, self.a)) as u64
            }
            Profile::FrontLoaded => self.scale() + self.m,
        }
    }

    pub fn process(&self) -> SyntheticProcess {
        SyntheticProcess::new(self)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SyntheticRepr {
    n: u64,
    k: u64,
    a: u32,
    m: u64,
    profile: Profile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t_const: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t_table: Option<Vec<u64>>,
    p_coeffs: Vec<u64>,
}

impl TryFrom<SyntheticRepr> for SyntheticSpec {
    type Error = EnumError;

    fn try_from(repr: SyntheticRepr) -> Result<Self, EnumError> {
        let t = match (repr.t_const, repr.t_table) {
            (Some(v), None) => ParamCost::Const(v),
            (None, Some(entries)) => ParamCost::table(entries)?,
            _ => {
                return Err(EnumError::InvalidSchedule(
                    "exactly one of t_const, t_table must be set".into(),
                ))
            }
        };
        SyntheticSpec::new(
            repr.n,
            repr.k,
            repr.a,
            repr.m,
            repr.profile,
            t,
            Polynomial(repr.p_coeffs),
        )
    }
}

impl From<SyntheticSpec> for SyntheticRepr {
    fn from(spec: SyntheticSpec) -> SyntheticRepr {
        let (t_const, t_table) = match spec.t {
            ParamCost::Const(v) => (Some(v), None),
            ParamCost::Table(entries) => (None, Some(entries)),
            ParamCost::Formula(_) => unreachable!("rejected at construction"),
        };
        SyntheticRepr {
            n: spec.n,
            k: spec.k,
            a: spec.a,
            m: spec.m,
            profile: spec.profile,
            t_const,
            t_table,
            p_coeffs: spec.p.0,
        }
    }
}

/// Executable form of a [`SyntheticSpec`].
pub struct SyntheticProcess {
    a: u32,
    m: u64,
    profile: Profile,
    scale: u64,
    total: u64,
    emitted: u64,
    consumed: u64,
    next_target: u64,
}

impl SyntheticProcess {
    pub fn new(spec: &SyntheticSpec) -> Self {
        let scale = spec.scale();
        let next_target = match spec.profile {
            Profile::Structured => scale,
            Profile::FrontLoaded => scale + 1,
        };
        SyntheticProcess {
            a: spec.a,
            m: spec.m,
            profile: spec.profile,
            scale,
            total: spec.total_cost(),
            emitted: 0,
            consumed: 0,
            next_target,
        }
    }
}

impl EnumProcess for SyntheticProcess {
    fn run(&mut self, budget: u64) -> Result<Burst, EnumError> {
        if self.consumed == self.total && self.emitted == self.m {
            return Ok(Burst {
                consumed: 0,
                emitted: None,
                finished: true,
            });
        }
        if self.emitted == self.m {
            // Only a front-loaded setup block with no emissions ends here.
            let tail = self.total - self.consumed;
            if budget < tail {
                self.consumed += budget;
                return Ok(Burst::progress(budget));
            }
            self.consumed = self.total;
            return Ok(Burst {
                consumed: tail,
                emitted: None,
                finished: true,
            });
        }
        let need = self.next_target - self.consumed;
        if budget < need {
            self.consumed += budget;
            return Ok(Burst::progress(budget));
        }
        self.consumed = self.next_target;
        self.emitted += 1;
        let solution = solution_string(self.emitted);
        if self.emitted < self.m {
            let step = match self.profile {
                Profile::Structured => {
                    (self.scale as u128 * ipow(self.emitted as u128 + 1, self.a as u64)) as u64
                }
                Profile::FrontLoaded => 1,
            };
            self.next_target += step;
        }
        Ok(Burst {
            consumed: need,
            emitted: Some(solution),
            finished: self.emitted == self.m && self.consumed == self.total,
        })
    }
}
