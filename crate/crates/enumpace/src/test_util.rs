//! Hand-scriptable process for exercising the execution harness.

use crate::error::EnumError;
use crate::problem::Solution;
use crate::process::{Burst, EnumProcess};

/// Emits each scripted solution at its exact cumulative cost and finishes at
/// `finish_at`. Costs must be strictly increasing, at least 1, and at most
/// `finish_at`.
pub struct ScriptedProcess {
    script: Vec<(u64, Solution)>,
    finish_at: u64,
    pos: u64,
    next: usize,
}

impl ScriptedProcess {
    pub fn new(script: Vec<(u64, Solution)>, finish_at: u64) -> Self {
        let mut last = 0;
        for &(cost, _) in &script {
            assert!(cost > last, "scripted costs must be strictly increasing");
            assert!(cost <= finish_at, "scripted costs must not pass finish_at");
            last = cost;
        }
        ScriptedProcess {
            script,
            finish_at,
            pos: 0,
            next: 0,
        }
    }
}

impl EnumProcess for ScriptedProcess {
    fn run(&mut self, budget: u64) -> Result<Burst, EnumError> {
        if self.pos >= self.finish_at && self.next >= self.script.len() {
            return Ok(Burst {
                consumed: 0,
                emitted: None,
                finished: true,
            });
        }
        let target = if self.next < self.script.len() {
            self.script[self.next].0
        } else {
            self.finish_at
        };
        let need = target - self.pos;
        if budget < need {
            self.pos += budget;
            return Ok(Burst::progress(budget));
        }
        self.pos = target;
        let emitted = if self.next < self.script.len() {
            let solution = self.script[self.next].1.clone();
            self.next += 1;
            Some(solution)
        } else {
            None
        };
        Ok(Burst {
            consumed: need,
            emitted,
            finished: self.pos >= self.finish_at && self.next >= self.script.len(),
        })
    }
}
