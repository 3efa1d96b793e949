//! Ground truth for unrestricted and restricted partition counts.
//!
//! Two unrelated algorithms produce p(0..=N): a dynamic program over the
//! allowed part sizes and Euler's recurrence over generalized pentagonal
//! offsets. Neither touches the generator rule, so the fractal engine is
//! always checked against something it did not compute.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};

use crate::config::{Limits, DEFAULT_MAX_TABLE, ENUMERATION_MAX};
use crate::error::{Error, Result};

static ZERO: BigUint = BigUint::ZERO;

/// Dense table of p(0..=limit).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionTable {
    values: Vec<BigUint>,
}

impl PartitionTable {
    /// Wraps precomputed values. `values[0]` must be p(0).
    pub fn from_values(values: Vec<BigUint>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Precondition(
                "a partition table holds at least p(0)".into(),
            ));
        }
        Ok(PartitionTable { values })
    }

    pub fn limit(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    /// p(m) with p(m) = 0 for m < 0; `None` past the end of the table.
    pub fn get(&self, m: i64) -> Option<&BigUint> {
        if m < 0 {
            return Some(&ZERO);
        }
        self.values.get(m as usize)
    }

    /// Like [`get`](Self::get) but reports a missing entry as an error.
    pub fn lookup(&self, m: i64) -> Result<&BigUint> {
        self.get(m).ok_or(Error::TableTooSmall {
            needed: m as usize,
            limit: self.limit(),
        })
    }
}

impl std::ops::Index<usize> for PartitionTable {
    type Output = BigUint;

    fn index(&self, m: usize) -> &BigUint {
        &self.values[m]
    }
}

/// Partitions of `m` whose parts are all at most `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RestrictedQuery {
    pub m: usize,
    pub k: usize,
}

impl RestrictedQuery {
    pub fn new(m: usize, k: usize) -> Self {
        RestrictedQuery { m, k }
    }
}

/// p(0..=limit) by the classic coin-change style DP over parts 1..=limit.
pub fn build_table(limit: usize) -> Result<PartitionTable> {
    build_table_capped(limit, DEFAULT_MAX_TABLE)
}

pub fn build_table_capped(limit: usize, max: usize) -> Result<PartitionTable> {
    Limits::check("table size", limit, max)?;
    Ok(PartitionTable {
        values: parts_dp(limit, limit),
    })
}

/// Counts with parts in 1..=max_part for every total 0..=limit.
fn parts_dp(limit: usize, max_part: usize) -> Vec<BigUint> {
    let mut ways = vec![BigUint::zero(); limit + 1];
    ways[0] = BigUint::one();
    for part in 1..=max_part.min(limit) {
        for total in part..=limit {
            let (lo, hi) = ways.split_at_mut(total);
            hi[0] += &lo[total - part];
        }
    }
    ways
}

/// Generalized pentagonal numbers k(3k−1)/2 for k = 1, −1, 2, −2, … paired
/// with the sign Euler's recurrence gives them: +, +, −, −, +, +, …
pub fn generalized_pentagonals() -> impl Iterator<Item = (usize, i32)> {
    (1usize..).flat_map(|k| {
        let sign = if k % 2 == 1 { 1 } else { -1 };
        [(k * (3 * k - 1) / 2, sign), (k * (3 * k + 1) / 2, sign)]
    })
}

/// p(0..=limit) by Euler's pentagonal number recurrence (untruncated).
pub fn build_table_pentagonal(limit: usize) -> Result<PartitionTable> {
    build_table_pentagonal_capped(limit, DEFAULT_MAX_TABLE)
}

pub fn build_table_pentagonal_capped(limit: usize, max: usize) -> Result<PartitionTable> {
    Limits::check("table size", limit, max)?;
    let mut values: Vec<BigUint> = Vec::with_capacity(limit + 1);
    values.push(BigUint::one());
    for m in 1..=limit {
        let mut acc = BigInt::zero();
        for (offset, sign) in generalized_pentagonals() {
            if offset > m {
                break;
            }
            let term = BigInt::from_biguint(Sign::Plus, values[m - offset].clone());
            if sign > 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        values.push(
            acc.to_biguint()
                .expect("Euler's recurrence yields a nonnegative count"),
        );
    }
    Ok(PartitionTable { values })
}

/// Number of partitions of `q.m` into parts no larger than `q.k`.
pub fn restricted_count(q: RestrictedQuery) -> Result<BigUint> {
    restricted_count_capped(q, DEFAULT_MAX_TABLE)
}

pub fn restricted_count_capped(q: RestrictedQuery, max: usize) -> Result<BigUint> {
    Limits::check("restricted count", q.m, max)?;
    Ok(parts_dp(q.m, q.k).swap_remove(q.m))
}

/// Counts partitions of `m` with parts ≤ `max_part` by listing them one by
/// one. Exponential; only meant as an oracle for small `m`.
pub fn enumerate_count(m: usize, max_part: usize) -> Result<BigUint> {
    if m > ENUMERATION_MAX {
        return Err(Error::EnumerationGuard {
            m,
            max: ENUMERATION_MAX,
        });
    }
    let mut count = 0u64;
    for_each_partition(m, max_part, &mut |_| count += 1);
    Ok(BigUint::from(count))
}

/// Calls `visit` with each partition of `m` (parts non-increasing, each ≤
/// `max_part`).
pub fn for_each_partition(m: usize, max_part: usize, visit: &mut dyn FnMut(&[usize])) {
    fn walk(rest: usize, cap: usize, parts: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if rest == 0 {
            visit(parts);
            return;
        }
        for part in (1..=cap.min(rest)).rev() {
            parts.push(part);
            walk(rest - part, part, parts, visit);
            parts.pop();
        }
    }
    let mut parts = Vec::with_capacity(m);
    walk(m, max_part, &mut parts, visit);
}
