//! The acceptance checks, runnable from the binary.
//!
//! Every check that exercises the generator takes the rule as a parameter,
//! so running them with a corrupted rule must produce failures.

use std::time::{Duration, Instant};

use num_bigint::{BigInt, Sign};
use serde::Serialize;

use crate::error::Result;
use crate::generator::GeneratorRule;
use crate::numeric::{fractal_values_with, ParcelEvaluator};
use crate::oracle::{build_table, build_table_pentagonal, restricted_count, RestrictedQuery};
use crate::recurrence::{
    classify_pentagonal, derive_recurrence_with, mine_with, verify, PentagonalClass,
};
use crate::reference::{self, KnownRecurrence};
use crate::symbolic::ValidRange;
use crate::trace::{build_trace_with, ExpansionNode};
use crate::variant::TailVariant;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub id: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub checks: Vec<CheckResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("[{status}] {} {}: {}\n", c.id, c.name, c.detail));
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        out.push_str(&format!("{passed}/{} checks passed\n", self.checks.len()));
        out
    }
}

/// A message when `start` is more than `budget` ago.
fn overran(budget: Duration, start: Instant) -> Option<String> {
    let took = start.elapsed();
    (took > budget).then(|| {
        format!(
            "took {:.2}s, budget {:.0}s",
            took.as_secs_f64(),
            budget.as_secs_f64()
        )
    })
}

type Outcome = std::result::Result<String, String>;

fn value_reproduction(rule: GeneratorRule) -> Result<Outcome> {
    let start = Instant::now();
    let fractal = fractal_values_with(300, rule);
    for (n, want) in [(10, 42), (11, 56), (12, 77)] {
        if fractal[n] != BigInt::from(want) {
            return Ok(Err(format!(
                "p({n}) = {} via generator, expected {want}",
                fractal[n]
            )));
        }
    }
    let dp = build_table(300)?;
    let pent = build_table_pentagonal(300)?;
    for n in 0..=300 {
        let d = BigInt::from_biguint(Sign::Plus, dp[n].clone());
        let q = BigInt::from_biguint(Sign::Plus, pent[n].clone());
        if fractal[n] != d || fractal[n] != q {
            return Ok(Err(format!("disagreement at n = {n}")));
        }
    }
    if let Some(msg) = overran(Duration::from_secs(5), start) {
        return Ok(Err(msg));
    }
    Ok(Ok("42, 56, 77 and three-way agreement on 0..=300".into()))
}

fn generator_semantics(rule: GeneratorRule) -> Result<Outcome> {
    let start = Instant::now();
    let table = build_table(60)?;
    let eval = ParcelEvaluator::from_table(&table, 59, rule)?;
    for head in 1..=60 {
        for tab in 0..head {
            let want = restricted_count(RestrictedQuery::new(tab, head - tab))?;
            if eval.parcel(tab, head) != BigInt::from_biguint(Sign::Plus, want) {
                return Ok(Err(format!(
                    "parcel (tab {tab}, head {head}) is not a restricted count"
                )));
            }
        }
    }
    if let Some(msg) = overran(Duration::from_secs(5), start) {
        return Ok(Err(msg));
    }
    Ok(Ok(
        "parcel values equal restricted counts for 0 <= tab < head <= 60".into(),
    ))
}

fn trace_fidelity(rule: GeneratorRule) -> Result<Outcome> {
    let doc = build_trace_with(10, TailVariant::Full, 1_000_000, rule)?;
    let cells: Vec<(usize, usize)> = doc
        .nodes
        .iter()
        .filter(|n| n.is_cell())
        .map(|n| (n.tab(), n.children().len()))
        .collect();
    if cells != [(6, 2), (7, 4), (8, 6), (9, 8)] {
        return Ok(Err(format!("first-level cells {cells:?}")));
    }
    let nested = ExpansionNode::Cell {
        tab: 7,
        children: vec![
            ExpansionNode::Parcel { tab: 0 },
            ExpansionNode::Parcel { tab: 1 },
            ExpansionNode::Parcel { tab: 2 },
            ExpansionNode::Parcel { tab: 3 },
            ExpansionNode::Cell {
                tab: 4,
                children: vec![ExpansionNode::Parcel { tab: 0 }],
            },
        ],
    };
    if !doc.nodes[9].children().contains(&nested) {
        return Ok(Err(
            "tab-9 cell lacks [p(7) - p(0) - p(1) - p(2) - p(3) - [p(4) - p(0)]]".into(),
        ));
    }
    if doc.total != 42u32.into() {
        return Ok(Err(format!("total {}", doc.total)));
    }
    Ok(Ok(
        "cells 6,7,8,9 with 2,4,6,8 children, nested p(7) cell, total 42".into(),
    ))
}

fn derivation_matches(rule: GeneratorRule) -> Result<Outcome> {
    let start = Instant::now();
    for known in reference::ALL {
        let d = known.derivation;
        let rec = derive_recurrence_with(d.cap, d.pn, d.pn1, rule)?;
        if rec.canonical_key() != known.recurrence().canonical_key() {
            return Ok(Err(format!("{}: derived {rec}", known.name)));
        }
    }
    if let Some(msg) = overran(Duration::from_secs(5), start) {
        return Ok(Err(msg));
    }
    Ok(Ok(
        "all five reference recurrences reproduced exactly".into()
    ))
}

fn numerical_verification() -> Result<Outcome> {
    let table = build_table(40)?;
    for known in reference::ALL {
        let report = verify(&known.recurrence(), known.claimed(), &table)?;
        if !report.all_passed() {
            return Ok(Err(format!("{} fails on its claimed range", known.name)));
        }
    }
    let first_failure = |k: KnownRecurrence| -> Result<Option<usize>> {
        Ok(verify(&k.recurrence(), ValidRange::new(2, 40), &table)?
            .first_failure
            .map(|m| m.n))
    };
    let a = first_failure(reference::PENTAGONAL_12)?;
    let b = first_failure(reference::PENTAGONAL_22)?;
    if a != Some(15) || b != Some(26) {
        return Ok(Err(format!(
            "first failures {a:?} and {b:?}, expected 15 and 26"
        )));
    }
    Ok(Ok(
        "claimed ranges hold; truncations first fail at 15 and 26".into(),
    ))
}

fn classification(rule: GeneratorRule) -> Result<Outcome> {
    let class = |k: KnownRecurrence| -> Result<PentagonalClass> {
        let d = k.derivation;
        Ok(classify_pentagonal(&derive_recurrence_with(
            d.cap, d.pn, d.pn1, rule,
        )?))
    };
    let got = [
        class(reference::PENTAGONAL_12)?,
        class(reference::PENTAGONAL_22)?,
        class(reference::UNSUBSTITUTED_24)?,
    ];
    let want = [
        PentagonalClass::ExactTruncation,
        PentagonalClass::ExactTruncation,
        PentagonalClass::Unrelated,
    ];
    if got != want {
        return Ok(Err(format!("classified as {got:?}")));
    }
    Ok(Ok("two exact truncations, one unrelated".into()))
}

fn mining(rule: GeneratorRule) -> Result<Outcome> {
    let start = Instant::now();
    let table = build_table(60)?;
    let caps: Vec<usize> = (12..=24).collect();
    let pairs: Vec<_> = TailVariant::all_pairs().collect();
    let catalog = mine_with(&caps, &pairs, 60, &table, rule);
    let keys = catalog.entries.len();
    if !catalog.errors.is_empty() || !catalog.anomalies.is_empty() || keys < 20 {
        return Ok(Err(format!(
            "{keys} keys, {} anomalies, {} errors",
            catalog.anomalies.len(),
            catalog.errors.len()
        )));
    }
    if let Some(msg) = overran(Duration::from_secs(60), start) {
        return Ok(Err(msg));
    }
    Ok(Ok(format!("{keys} distinct recurrences, no anomalies")))
}

fn oracle_independence() -> Result<Outcome> {
    let start = Instant::now();
    if build_table(1000)? != build_table_pentagonal(1000)? {
        return Ok(Err("tables differ".into()));
    }
    if let Some(msg) = overran(Duration::from_secs(5), start) {
        return Ok(Err(msg));
    }
    Ok(Ok("parts-DP and pentagonal tables agree to 1000".into()))
}

/// Runs all checks with the given generator rule.
pub fn run_selftest(rule: GeneratorRule) -> SelftestReport {
    type Check = (&'static str, &'static str, Box<dyn Fn() -> Result<Outcome>>);
    let checks: Vec<Check> = vec![
        (
            "C1",
            "value reproduction",
            Box::new(move || value_reproduction(rule)),
        ),
        (
            "C2",
            "generator semantics",
            Box::new(move || generator_semantics(rule)),
        ),
        (
            "C3",
            "trace fidelity",
            Box::new(move || trace_fidelity(rule)),
        ),
        (
            "C4",
            "recurrence derivation",
            Box::new(move || derivation_matches(rule)),
        ),
        (
            "C5",
            "numerical verification",
            Box::new(numerical_verification),
        ),
        (
            "C6",
            "classification",
            Box::new(move || classification(rule)),
        ),
        ("C7", "mining", Box::new(move || mining(rule))),
        ("C8", "oracle independence", Box::new(oracle_independence)),
    ];
    let checks = checks
        .into_iter()
        .map(|(id, name, check)| {
            let (passed, detail) = match check() {
                Ok(Ok(msg)) => (true, msg),
                Ok(Err(msg)) => (false, msg),
                Err(e) => (false, format!("error: {e}")),
            };
            CheckResult {
                id,
                name,
                passed,
                detail,
            }
        })
        .collect();
    SelftestReport { checks }
}
