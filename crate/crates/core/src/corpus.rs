//! The bundled families with their known verdicts.

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebra::{parse_expression, FamilyPoly, Parsed};
use crate::checker::{check_family, CheckConfig, Condition, FamilyReport};
use crate::error::Result;

pub struct CorpusCase {
    pub name: &'static str,
    pub expression: &'static str,
    /// Expected status of (a), (A), (A′) in that order.
    pub expected: [&'static str; 3],
}

pub const CORPUS: &[CorpusCase] = &[
    CorpusCase {
        name: "cube_with_critical_arc",
        expression: "x^3+3*t*x^2*y+3*t^2*x*y^2+t^3*y^3-y^4",
        expected: ["holds", "holds", "holds"],
    },
    CorpusCase {
        name: "cube_without_middle_term",
        expression: "x^3+3*t*x^2*y+t^3*y^3-y^4",
        expected: ["fails", "fails", "fails"],
    },
    CorpusCase {
        name: "quartic_splitting",
        expression: "x^4-t^2*x^2*y^2-y^4",
        expected: ["fails", "fails", "fails"],
    },
    CorpusCase {
        name: "quadratic_moving_polygon",
        expression: "x^2+2*x*y-t*y^2",
        expected: ["holds", "holds", "holds"],
    },
    CorpusCase {
        name: "constant_cusp",
        expression: "x^2-y^3",
        expected: ["holds", "holds", "holds"],
    },
];

/// Parses an expression as a family truncated at t-order `k`; expressions
/// without `t` become constant families.
pub fn parse_family(s: &str, k: usize) -> Result<FamilyPoly> {
    match parse_expression(s, k)? {
        Parsed::Family(f) => Ok(f),
        Parsed::Poly(p) => FamilyPoly::constant(&p, k),
    }
}

pub struct CorpusRow {
    pub name: &'static str,
    pub report: FamilyReport,
    pub expected: [&'static str; 3],
}

impl CorpusRow {
    pub fn statuses(&self) -> Vec<&'static str> {
        Condition::ALL.iter().map(|c| self.report.get(*c).map(|v| v.status()).unwrap_or("missing")).collect()
    }

    pub fn passed(&self) -> bool {
        self.statuses() == self.expected
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "expected": self.expected,
            "observed": self.statuses(),
            "pass": self.passed(),
            "report": self.report.to_json(),
        })
    }
}

pub struct CorpusReport {
    pub k: usize,
    pub seed: u64,
    pub rows: Vec<CorpusRow>,
}

impl CorpusReport {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(CorpusRow::passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "t_order": self.k,
            "seed": self.seed,
            "all_pass": self.all_passed(),
            "cases": self.rows.iter().map(CorpusRow::to_json).collect::<Vec<_>>(),
        })
    }

    /// One `PASS`/`FAIL` line per case.
    pub fn table(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let tag = if r.passed() { "PASS" } else { "FAIL" };
            out.push_str(&format!("{tag}  {:<26} a={} A={} Aprime={}\n", r.name, r.statuses()[0], r.statuses()[1], r.statuses()[2]));
        }
        out
    }
}

/// Checks every bundled family at t-order `k`.
pub fn run_corpus(k: usize, cfg: &CheckConfig) -> Result<CorpusReport> {
    let rows = CORPUS
        .par_iter()
        .map(|case| {
            let family = parse_family(case.expression, k)?;
            let report = check_family(&family, &Condition::ALL, cfg)?;
            Ok(CorpusRow { name: case.name, report, expected: case.expected })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CorpusReport { k, seed: cfg.seed, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_passes_on_defaults() {
        let r = run_corpus(4, &CheckConfig::default()).unwrap();
        assert!(r.all_passed(), "{}", r.table());
    }

    #[test]
    fn first_order_truncation_is_undecided_for_the_cube() {
        let r = run_corpus(1, &CheckConfig::default()).unwrap();
        let row = r.rows.iter().find(|r| r.name == "cube_without_middle_term").unwrap();
        assert_eq!(row.statuses()[0], "undecided");
    }
}
