use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::EnumError;

/// A solution in its canonical byte encoding.
///
/// Byte-wise equality is solution equality: every problem in this crate maps
/// each abstract solution to exactly one byte string, so duplicate detection,
/// set comparison, and priority-queue ordering all work on raw bytes.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Solution(Vec<u8>);

impl Solution {
    pub fn new(bytes: impl Into<Vec<u8>>) -> Self {
        Solution(bytes.into())
    }

    pub fn bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Printable form: ASCII graphic characters and space pass through,
    /// backslash doubles, anything else becomes `\xNN`.
    pub fn escaped(&self) -> String {
        let mut out = String::with_capacity(self.0.len());
        for &b in &self.0 {
            match b {
                b'\\' => out.push_str("\\\\"),
                0x20..=0x7e => out.push(b as char),
                _ => out.push_str(&format!("\\x{b:02x}")),
            }
        }
        out
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.escaped())
    }
}

impl fmt::Debug for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Solution({})", self.escaped())
    }
}

type CheckFn = dyn Fn(&[u8], &[u8]) -> bool + Send + Sync;
type ParamFn = dyn Fn(&[u8]) -> u64 + Send + Sync;
type LengthBoundFn = dyn Fn(&[u8]) -> usize + Send + Sync;

/// An enumeration problem: a membership check for candidate solutions, a
/// per-instance solution-length bound, and a parametrisation.
///
/// `check` must accept exactly the canonical encodings; every accepted
/// candidate must satisfy the length bound, and the bound itself must be
/// polynomially bounded in the instance size. Descriptors are immutable and
/// cheap to clone.
#[derive(Clone)]
pub struct ProblemDescriptor {
    name: String,
    alphabet: Vec<u8>,
    check: Arc<CheckFn>,
    length_bound: Arc<LengthBoundFn>,
    parametrisation: Arc<ParamFn>,
}

impl ProblemDescriptor {
    /// `alphabet` is the symbol set candidate strings are built from; it is
    /// sorted and deduplicated here and must not be empty.
    pub fn new(
        name: impl Into<String>,
        alphabet: impl Into<Vec<u8>>,
        check: impl Fn(&[u8], &[u8]) -> bool + Send + Sync + 'static,
        length_bound: impl Fn(&[u8]) -> usize + Send + Sync + 'static,
        parametrisation: impl Fn(&[u8]) -> u64 + Send + Sync + 'static,
    ) -> Self {
        let mut alphabet = alphabet.into();
        alphabet.sort_unstable();
        alphabet.dedup();
        assert!(!alphabet.is_empty(), "alphabet must not be empty");
        ProblemDescriptor {
            name: name.into(),
            alphabet,
            check: Arc::new(check),
            length_bound: Arc::new(length_bound),
            parametrisation: Arc::new(parametrisation),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> &[u8] {
        &self.alphabet
    }

    /// Is `candidate` a (canonically encoded) solution for `instance`?
    pub fn check(&self, instance: &[u8], candidate: &[u8]) -> bool {
        (self.check)(instance, candidate)
    }

    /// Upper bound on the byte length of any solution for `instance`.
    pub fn length_bound(&self, instance: &[u8]) -> usize {
        (self.length_bound)(instance)
    }

    /// The parameter value κ(instance).
    pub fn param(&self, instance: &[u8]) -> u64 {
        (self.parametrisation)(instance)
    }
}

impl fmt::Debug for ProblemDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemDescriptor")
            .field("name", &self.name)
            .field("alphabet_len", &self.alphabet.len())
            .finish()
    }
}

/// An instance paired with its cached parameter value.
///
/// The parameter is computed from the raw bytes at construction, so it can
/// never disagree with the descriptor's parametrisation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    raw: Vec<u8>,
    param: u64,
}

impl Instance {
    pub fn new(problem: &ProblemDescriptor, raw: impl Into<Vec<u8>>) -> Self {
        let raw = raw.into();
        let param = problem.param(&raw);
        Instance { raw, param }
    }

    pub fn raw(&self) -> &[u8] {
        &self.raw
    }

    /// Instance size |x| in bytes.
    pub fn size(&self) -> usize {
        self.raw.len()
    }

    pub fn param(&self) -> u64 {
        self.param
    }
}

/// Outcome of [`verify_solutions`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail { index: usize, reason: FailureReason },
}

/// Why a solution list failed verification, attributed to the first
/// offending index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailureReason {
    /// The entry is longer than the instance's length bound.
    OverLength { length: usize, bound: usize },
    /// The membership check rejected the entry.
    FailsCheck,
    /// The entry already appeared earlier in the list.
    Duplicate,
}

/// Check a claimed solution list: every entry within the length bound,
/// accepted by `check`, and no duplicates.
pub fn verify_solutions(
    problem: &ProblemDescriptor,
    instance: &Instance,
    solutions: &[Solution],
) -> Verdict {
    let bound = problem.length_bound(instance.raw());
    let mut seen = BTreeSet::new();
    for (index, sol) in solutions.iter().enumerate() {
        if sol.len() > bound {
            return Verdict::Fail {
                index,
                reason: FailureReason::OverLength {
                    length: sol.len(),
                    bound,
                },
            };
        }
        if !problem.check(instance.raw(), sol.bytes()) {
            return Verdict::Fail {
                index,
                reason: FailureReason::FailsCheck,
            };
        }
        if !seen.insert(sol.clone()) {
            return Verdict::Fail {
                index,
                reason: FailureReason::Duplicate,
            };
        }
    }
    Verdict::Pass
}

/// Ground-truth enumeration: test every string over the problem's alphabet
/// up to the instance's length bound and keep the ones `check` accepts.
///
/// The candidate space has Σ_{L ≤ bound} |alphabet|^L strings; the call is
/// refused with `BudgetExhausted` when that exceeds `cost_cap`, at one tick
/// per candidate.
pub fn brute_force_enum(
    problem: &ProblemDescriptor,
    instance: &Instance,
    cost_cap: u64,
) -> Result<BTreeSet<Solution>, EnumError> {
    let alphabet = problem.alphabet();
    let base = alphabet.len() as u128;
    let max_len = problem.length_bound(instance.raw());

    let mut candidates: u128 = 1;
    let mut layer: u128 = 1;
    for _ in 0..max_len {
        layer = layer.saturating_mul(base);
        candidates = candidates.saturating_add(layer);
    }
    if candidates > u128::from(cost_cap) {
        return Err(EnumError::BudgetExhausted { cap: cost_cap });
    }

    let mut out = BTreeSet::new();
    // Digit indices into the alphabet, enumerated in length-lexicographic
    // order starting from the empty string.
    let mut digits: Vec<usize> = Vec::new();
    loop {
        let bytes: Vec<u8> = digits.iter().map(|&d| alphabet[d]).collect();
        if problem.check(instance.raw(), &bytes) {
            out.insert(Solution::new(bytes));
        }
        if !next_candidate(&mut digits, alphabet.len(), max_len) {
            return Ok(out);
        }
    }
}

fn next_candidate(digits: &mut Vec<usize>, base: usize, max_len: usize) -> bool {
    let mut i = digits.len();
    while i > 0 {
        i -= 1;
        digits[i] += 1;
        if digits[i] < base {
            return true;
        }
        digits[i] = 0;
    }
    if digits.len() == max_len {
        return false;
    }
    // A full carry leaves every position at zero; one more zero starts the
    // next length.
    digits.push(0);
    true
}
