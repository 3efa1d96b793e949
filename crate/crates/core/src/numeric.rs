//! Numeric evaluation of p(n) through the generator rule.
//!
//! The value of a fully expanded parcel {p(τ)} under father tab h is
//!
//! ```text
//! Q(τ, h) = p(τ) − Σ_{k < λ} Q(k, τ),   λ = max(0, 2τ − h)
//! ```
//!
//! and p(n) = Σ_{i < n} Q(i, n). The children of {p(τ)} are always the same
//! sequence Q(0, τ), Q(1, τ), …; only how many of them are taken depends on
//! h. The evaluator therefore keeps, per tab, the running sums of that child
//! sequence, which makes every Q(τ, h) a single subtraction.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};

use crate::config::{Limits, DEFAULT_MAX_FRACTAL};
use crate::error::{Error, Result};
use crate::generator::GeneratorRule;
use crate::oracle::PartitionTable;

/// Memo state for one evaluation. Not meant to be shared between threads
/// while it is growing; the values it hands out are plain integers.
#[derive(Debug, Clone)]
pub struct ParcelEvaluator {
    rule: GeneratorRule,
    values: Vec<BigInt>,
    /// `child_sums[τ][j]` = Σ_{k < j} Q(k, τ).
    child_sums: Vec<Vec<BigInt>>,
}

impl ParcelEvaluator {
    pub fn new(rule: GeneratorRule) -> Self {
        ParcelEvaluator {
            rule,
            values: Vec::new(),
            child_sums: Vec::new(),
        }
    }

    /// Seeds the evaluator with p(0..=upto) taken from `table`.
    pub fn from_table(table: &PartitionTable, upto: usize, rule: GeneratorRule) -> Result<Self> {
        if upto > table.limit() {
            return Err(Error::TableTooSmall {
                needed: upto,
                limit: table.limit(),
            });
        }
        let mut eval = Self::new(rule);
        for v in &table.values()[..=upto] {
            eval.push(BigInt::from_biguint(Sign::Plus, v.clone()));
        }
        Ok(eval)
    }

    pub fn rule(&self) -> GeneratorRule {
        self.rule
    }

    /// Number of p-values known so far.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, m: usize) -> &BigInt {
        &self.values[m]
    }

    /// Appends p(len) and prepares the child sums of that tab.
    pub fn push(&mut self, value: BigInt) {
        let tab = self.values.len();
        self.values.push(value);
        // Heads of interest are tab+1 and above; the largest child list
        // belongs to the smallest head.
        let widest = self.rule.child_count(tab, tab + 1);
        let mut sums = Vec::with_capacity(widest + 1);
        let mut acc = BigInt::zero();
        sums.push(acc.clone());
        for k in 0..widest {
            acc += self.parcel(k, tab);
            sums.push(acc.clone());
        }
        self.child_sums.push(sums);
    }

    /// Q(tab, head). Requires `tab < len()` and `tab < head`.
    pub fn parcel(&self, tab: usize, head: usize) -> BigInt {
        debug_assert!(tab < head);
        let lambda = self.rule.child_count(tab, head);
        &self.values[tab] - &self.child_sums[tab][lambda]
    }

    /// Σ_{i < n} Q(i, n) using the values known so far (`n <= len()`).
    pub fn top_level_sum(&self, n: usize) -> BigInt {
        (0..n).map(|i| self.parcel(i, n)).sum()
    }

    /// Extends the known values up to p(n), each one computed by the
    /// generator from the values before it.
    pub fn grow_to(&mut self, n: usize) {
        while self.values.len() <= n {
            let m = self.values.len();
            let next = if m == 0 {
                BigInt::one()
            } else {
                self.top_level_sum(m)
            };
            self.push(next);
        }
    }
}

fn to_count(v: BigInt) -> BigUint {
    v.to_biguint()
        .expect("the standard generator rule yields nonnegative counts")
}

/// Value of the fully expanded parcel {p(tab)} whose father has tab `head`.
/// Only p(0..=tab) is read from `table`.
pub fn parcel_value(tab: usize, head: usize, table: &PartitionTable) -> Result<BigUint> {
    parcel_value_with(tab, head, table, GeneratorRule::STANDARD).map(to_count)
}

pub fn parcel_value_with(
    tab: usize,
    head: usize,
    table: &PartitionTable,
    rule: GeneratorRule,
) -> Result<BigInt> {
    if tab >= head {
        return Err(Error::Precondition(format!(
            "parcel tab {tab} must be below its father's tab {head}"
        )));
    }
    let eval = ParcelEvaluator::from_table(table, tab, rule)?;
    Ok(eval.parcel(tab, head))
}

/// p(n) computed entirely by the generator, bottom-up.
pub fn fractal_p(n: usize) -> Result<BigUint> {
    fractal_p_capped(n, DEFAULT_MAX_FRACTAL)
}

pub fn fractal_p_capped(n: usize, max: usize) -> Result<BigUint> {
    Limits::check("fractal n", n, max)?;
    Ok(to_count(fractal_p_with(n, GeneratorRule::STANDARD)))
}

pub fn fractal_p_with(n: usize, rule: GeneratorRule) -> BigInt {
    let mut eval = ParcelEvaluator::new(rule);
    eval.grow_to(n);
    eval.values.swap_remove(n)
}

/// p(0..=n), every entry produced by the generator.
pub fn fractal_table(n: usize) -> Result<PartitionTable> {
    fractal_table_capped(n, DEFAULT_MAX_FRACTAL)
}

pub fn fractal_table_capped(n: usize, max: usize) -> Result<PartitionTable> {
    Limits::check("fractal n", n, max)?;
    let values = fractal_values_with(n, GeneratorRule::STANDARD)
        .into_iter()
        .map(to_count)
        .collect();
    PartitionTable::from_values(values)
}

pub fn fractal_values_with(n: usize, rule: GeneratorRule) -> Vec<BigInt> {
    let mut eval = ParcelEvaluator::new(rule);
    eval.grow_to(n);
    eval.values
}
