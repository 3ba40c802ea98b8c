//! Budget schedules of the shape `t(k) * p(n) * i^exponent`.
//!
//! The three factors are kept separate so callers can evaluate the
//! parameter-dependent part once per instance and the index-dependent part
//! once per emission. All arithmetic is u128 and saturating; a bound that
//! overflows is treated as "no effective bound" rather than wrapping.

use serde::{Deserialize, Serialize};

use crate::error::EnumError;

/// Integer power with the convention `0^0 = 1`, saturating at `u128::MAX`.
pub fn ipow(base: u128, exp: u64) -> u128 {
    if exp == 0 {
        return 1;
    }
    match base {
        0 => 0,
        1 => 1,
        _ => {
            let mut result: u128 = 1;
            for _ in 0..exp {
                result = result.saturating_mul(base);
                if result == u128::MAX {
                    break;
                }
            }
            result
        }
    }
}

/// `1^a + 2^a + ... + i^a`, saturating.
pub fn sum_of_powers(i: u64, a: u32) -> u128 {
    let mut total: u128 = 0;
    for j in 1..=i {
        total = total.saturating_add(ipow(j as u128, a as u64));
    }
    total
}

/// A polynomial in one variable with unsigned coefficients, lowest degree
/// first. Evaluation saturates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Polynomial(pub Vec<u64>);

impl Polynomial {
    pub fn eval(&self, n: u64) -> u128 {
        let mut total: u128 = 0;
        let mut power: u128 = 1;
        for (j, &c) in self.0.iter().enumerate() {
            if j > 0 {
                power = power.saturating_mul(n as u128);
            }
            total = total.saturating_add(power.saturating_mul(c as u128));
        }
        total
    }
}

/// One factor of a [`CostFormula`] product.
#[derive(Debug, Clone, PartialEq, Eq)]
enum FormulaFactor {
    /// A literal constant.
    Int(u64),
    /// The parameter itself.
    Param,
    /// `k^c` for a constant exponent.
    ParamPow(u32),
    /// `b^k` for a constant base.
    ExpParam(u64),
}

impl FormulaFactor {
    fn eval(&self, k: u64) -> u128 {
        match *self {
            FormulaFactor::Int(v) => v as u128,
            FormulaFactor::Param => k as u128,
            FormulaFactor::ParamPow(c) => ipow(k as u128, c as u64),
            FormulaFactor::ExpParam(b) => ipow(b as u128, k),
        }
    }

    fn render(&self) -> String {
        match *self {
            FormulaFactor::Int(v) => v.to_string(),
            FormulaFactor::Param => "k".into(),
            FormulaFactor::ParamPow(c) => format!("k^{c}"),
            FormulaFactor::ExpParam(b) => format!("{b}^k"),
        }
    }
}

/// A product of factors over the parameter `k`: each factor is an integer,
/// `k`, `k^INT`, or `INT^k`, joined by `*`. This covers the cost shapes the
/// problem suite needs (for example `2^k * k`) without a general expression
/// language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostFormula {
    factors: Vec<FormulaFactor>,
}

impl CostFormula {
    pub fn parse(text: &str) -> Result<Self, EnumError> {
        let bad = |msg: String| EnumError::InvalidSchedule(msg);
        if text.trim().is_empty() {
            return Err(bad("empty cost formula".into()));
        }
        let mut factors = Vec::new();
        for raw in text.split('*') {
            let part = raw.trim();
            if part.is_empty() {
                return Err(bad(format!("empty factor in formula {text:?}")));
            }
            let factor = if part == "k" {
                FormulaFactor::Param
            } else if part.bytes().all(|b| b.is_ascii_digit()) {
                FormulaFactor::Int(
                    part.parse()
                        .map_err(|_| bad(format!("integer out of range: {part:?}")))?,
                )
            } else if let Some((lhs, rhs)) = part.split_once('^') {
                let (lhs, rhs) = (lhs.trim(), rhs.trim());
                if lhs == "k" && rhs.bytes().all(|b| b.is_ascii_digit()) && !rhs.is_empty() {
                    FormulaFactor::ParamPow(
                        rhs.parse()
                            .map_err(|_| bad(format!("exponent out of range: {rhs:?}")))?,
                    )
                } else if rhs == "k" && lhs.bytes().all(|b| b.is_ascii_digit()) && !lhs.is_empty() {
                    FormulaFactor::ExpParam(
                        lhs.parse()
                            .map_err(|_| bad(format!("base out of range: {lhs:?}")))?,
                    )
                } else {
                    return Err(bad(format!(
                        "factor must be INT, k, k^INT, or INT^k, found {part:?}"
                    )));
                }
            } else {
                return Err(bad(format!(
                    "factor must be INT, k, k^INT, or INT^k, found {part:?}"
                )));
            };
            factors.push(factor);
        }
        Ok(CostFormula { factors })
    }

    pub fn eval(&self, k: u64) -> u128 {
        self.factors
            .iter()
            .fold(1u128, |acc, f| acc.saturating_mul(f.eval(k)))
    }

    pub fn render(&self) -> String {
        self.factors
            .iter()
            .map(FormulaFactor::render)
            .collect::<Vec<_>>()
            .join(" * ")
    }
}

/// The parameter-dependent cost factor `t(k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamCost {
    Const(u64),
    /// Lookup by `k`, clamping past the last entry. Must be non-empty.
    Table(Vec<u64>),
    Formula(CostFormula),
}

impl ParamCost {
    pub fn table(entries: Vec<u64>) -> Result<Self, EnumError> {
        if entries.is_empty() {
            return Err(EnumError::InvalidSchedule("empty cost table".into()));
        }
        Ok(ParamCost::Table(entries))
    }

    pub fn eval(&self, k: u64) -> u128 {
        match self {
            ParamCost::Const(v) => *v as u128,
            ParamCost::Table(entries) => {
                let idx = (k as usize).min(entries.len() - 1);
                entries[idx] as u128
            }
            ParamCost::Formula(f) => f.eval(k),
        }
    }
}

/// A full budget schedule `t(k) * p(n) * i^exponent`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ScheduleRepr", into = "ScheduleRepr")]
pub struct BudgetSchedule {
    pub t: ParamCost,
    pub p: Polynomial,
    pub exponent: u32,
}

impl BudgetSchedule {
    pub fn new(t: ParamCost, p: Polynomial, exponent: u32) -> Self {
        BudgetSchedule { t, p, exponent }
    }

    /// The index-independent part `t(k) * p(n)`.
    pub fn scale(&self, k: u64, n: u64) -> u128 {
        self.t.eval(k).saturating_mul(self.p.eval(n))
    }

    /// The budget at emission index `i`: `t(k) * p(n) * i^exponent`.
    pub fn bound(&self, k: u64, n: u64, i: u64) -> u128 {
        self.scale(k, n)
            .saturating_mul(ipow(i as u128, self.exponent as u64))
    }
}

/// On-disk form of a schedule. Exactly one of the `t_*` fields must be set.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct ScheduleRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t_const: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t_table: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t_formula: Option<String>,
    p_coeffs: Vec<u64>,
    exponent: u32,
}

impl TryFrom<ScheduleRepr> for BudgetSchedule {
    type Error = EnumError;

    fn try_from(repr: ScheduleRepr) -> Result<Self, EnumError> {
        let set = repr.t_const.is_some() as u8
            + repr.t_table.is_some() as u8
            + repr.t_formula.is_some() as u8;
        if set != 1 {
            return Err(EnumError::InvalidSchedule(format!(
                "exactly one of t_const, t_table, t_formula must be set, found {set}"
            )));
        }
        let t = if let Some(v) = repr.t_const {
            ParamCost::Const(v)
        } else if let Some(entries) = repr.t_table {
            ParamCost::table(entries)?
        } else {
            ParamCost::Formula(CostFormula::parse(&repr.t_formula.unwrap())?)
        };
        Ok(BudgetSchedule::new(t, Polynomial(repr.p_coeffs), repr.exponent))
    }
}

impl From<BudgetSchedule> for ScheduleRepr {
    fn from(s: BudgetSchedule) -> ScheduleRepr {
        let (t_const, t_table, t_formula) = match s.t {
            ParamCost::Const(v) => (Some(v), None, None),
            ParamCost::Table(entries) => (None, Some(entries), None),
            ParamCost::Formula(f) => (None, None, Some(f.render())),
        };
        ScheduleRepr {
            t_const,
            t_table,
            t_formula,
            p_coeffs: s.p.0,
            exponent: s.exponent,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ipow_handles_corner_cases() {
        assert_eq!(ipow(0, 0), 1);
        assert_eq!(ipow(0, 5), 0);
        assert_eq!(ipow(1, 1_000_000), 1);
        assert_eq!(ipow(2, 10), 1024);
        assert_eq!(ipow(3, 0), 1);
        assert_eq!(ipow(10, 38), 10u128.pow(38));
        assert_eq!(ipow(10, 39), u128::MAX);
        assert_eq!(ipow(2, 200), u128::MAX);
    }

    #[test]
    fn sum_of_powers_matches_direct_sums() {
        assert_eq!(sum_of_powers(4, 2), 30);
        assert_eq!(sum_of_powers(0, 3), 0);
        assert_eq!(sum_of_powers(10, 0), 10);
        assert_eq!(sum_of_powers(3, 1), 6);
        assert_eq!(sum_of_powers(100, 1), 5050);
    }

    #[test]
    fn polynomial_evaluates_lowest_degree_first() {
        assert_eq!(Polynomial(vec![3, 0, 2]).eval(5), 53);
        assert_eq!(Polynomial(vec![]).eval(7), 0);
        assert_eq!(Polynomial(vec![9]).eval(0), 9);
        assert_eq!(Polynomial(vec![0, 1]).eval(41), 41);
    }

    #[test]
    fn param_cost_variants_evaluate() {
        assert_eq!(ParamCost::Const(4).eval(99), 4);
        let table = ParamCost::table(vec![1, 2, 4]).unwrap();
        assert_eq!(table.eval(0), 1);
        assert_eq!(table.eval(2), 4);
        assert_eq!(table.eval(7), 4);
        assert!(ParamCost::table(vec![]).is_err());
    }

    #[test]
    fn formulas_parse_and_evaluate() {
        assert_eq!(CostFormula::parse("2^k * 3").unwrap().eval(4), 48);
        assert_eq!(CostFormula::parse("k^2*5").unwrap().eval(3), 45);
        assert_eq!(CostFormula::parse("k * k").unwrap().eval(6), 36);
        assert_eq!(CostFormula::parse("7").unwrap().eval(123), 7);
        assert_eq!(CostFormula::parse("2^k").unwrap().eval(0), 1);
    }

    #[test]
    fn malformed_formulas_are_rejected() {
        for text in ["", "k^k", "2^3^4", "q", "k**2", "k^", "^k", " * "] {
            assert!(CostFormula::parse(text).is_err(), "accepted {text:?}");
        }
    }

    #[test]
    fn formula_render_round_trips() {
        let f = CostFormula::parse(" 2^k*k ^3 * 11 ").unwrap();
        assert_eq!(f.render(), "2^k * k^3 * 11");
        assert_eq!(CostFormula::parse(&f.render()).unwrap(), f);
    }

    #[test]
    fn schedule_bound_multiplies_all_three_factors() {
        let s = BudgetSchedule::new(ParamCost::Const(2), Polynomial(vec![1, 1]), 1);
        assert_eq!(s.scale(9, 4), 10);
        assert_eq!(s.bound(9, 4, 3), 30);
        // Index 0 with exponent 0 uses 0^0 = 1.
        let flat = BudgetSchedule::new(ParamCost::Const(5), Polynomial(vec![3]), 0);
        assert_eq!(flat.bound(0, 0, 0), 15);
    }

    #[test]
    fn schedule_json_round_trips() {
        let json = r#"{"t_const":2,"p_coeffs":[1,1],"exponent":1}"#;
        let s: BudgetSchedule = serde_json::from_str(json).unwrap();
        assert_eq!(s.bound(9, 4, 3), 30);
        let back = serde_json::to_string(&s).unwrap();
        assert_eq!(back, json);

        let formula = r#"{"t_formula":"2^k * k","p_coeffs":[10],"exponent":2}"#;
        let s: BudgetSchedule = serde_json::from_str(formula).unwrap();
        assert_eq!(s.bound(3, 1, 2), 8 * 3 * 10 * 4);
        assert_eq!(serde_json::to_string(&s).unwrap(), formula);
    }

    #[test]
    fn schedule_json_requires_exactly_one_t() {
        for json in [
            r#"{"t_const":2,"t_table":[1],"p_coeffs":[1],"exponent":0}"#,
            r#"{"p_coeffs":[1],"exponent":0}"#,
            r#"{"t_table":[],"p_coeffs":[1],"exponent":0}"#,
        ] {
            assert!(serde_json::from_str::<BudgetSchedule>(json).is_err());
        }
    }
}
