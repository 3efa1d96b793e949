//! Recurrences obtained by subtracting the expansion of p(n−1) from that of
//! p(n), plus the tools to check them against the oracle and to catalog
//! many of them.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, Sign};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generator::GeneratorRule;
use crate::oracle::{generalized_pentagonals, PartitionTable};
use crate::quasi::QuasiPoly2;
use crate::symbolic::{
    evaluate_form, expand_symbolic_with, maximal_valid_range, shift_form, LinearForm, ValidRange,
};
use crate::variant::TailVariant;

/// Parameters of one derivation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Derivation {
    pub cap: usize,
    pub pn: TailVariant,
    pub pn1: TailVariant,
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cap={} pn={} pn1={}", self.cap, self.pn, self.pn1)
    }
}

/// p(n) = rhs, where rhs only references p(n−c) with c ≥ 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recurrence {
    rhs: LinearForm,
    /// Empty for recurrences that did not come out of a derivation.
    provenance: Vec<Derivation>,
}

impl Recurrence {
    /// A recurrence supplied from outside, e.g. read from a file.
    pub fn external(
        terms: impl IntoIterator<Item = (usize, i64)>,
        tail: QuasiPoly2,
        claimed: ValidRange,
    ) -> Result<Self> {
        let rhs = LinearForm::from_terms(terms, tail, Some(claimed))?;
        Ok(Recurrence {
            rhs,
            provenance: Vec::new(),
        })
    }

    pub fn rhs(&self) -> &LinearForm {
        &self.rhs
    }

    pub fn claimed(&self) -> ValidRange {
        self.rhs
            .claimed()
            .expect("recurrences always carry a claimed range")
    }

    pub fn provenance(&self) -> &[Derivation] {
        &self.provenance
    }

    pub fn is_external(&self) -> bool {
        self.provenance.is_empty()
    }

    pub fn coefficient(&self, offset: usize) -> i64 {
        self.rhs.coefficient(offset)
    }

    pub fn tail(&self) -> &QuasiPoly2 {
        self.rhs.tail()
    }

    /// Sorted offset:coefficient pairs and both tail branches. Two
    /// recurrences share a key exactly when they are the same identity.
    pub fn canonical_key(&self) -> String {
        let terms: Vec<String> = self
            .rhs
            .coeffs()
            .iter()
            .map(|(o, c)| format!("{o}:{c}"))
            .collect();
        let t = self.rhs.tail();
        format!(
            "{}|even={},{};odd={},{}",
            terms.join(","),
            t.even.constant,
            t.even.slope,
            t.odd.constant,
            t.odd.slope
        )
    }
}

impl fmt::Display for Recurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.rhs.render("p(n)"))
    }
}

/// rhs = p(n−1) + [expansion of p(n)] − [expansion of p(n−1)], where p(n−1)
/// is expanded with cap − 1 and shifted so both sides reach p(n−cap).
pub fn derive_recurrence(cap: usize, pn: TailVariant, pn1: TailVariant) -> Result<Recurrence> {
    derive_recurrence_with(cap, pn, pn1, GeneratorRule::STANDARD)
}

pub fn derive_recurrence_with(
    cap: usize,
    pn: TailVariant,
    pn1: TailVariant,
    rule: GeneratorRule,
) -> Result<Recurrence> {
    if cap < 3 {
        return Err(Error::Precondition(format!(
            "recurrence cap must be at least 3, got {cap}"
        )));
    }
    let current = expand_symbolic_with(cap, pn, rule)?;
    let previous = shift_form(&expand_symbolic_with(cap - 1, pn1, rule)?, 1);
    let mut rhs = LinearForm::new(cap);
    rhs.add_term(1, 1);
    rhs.accumulate(&current, 1);
    rhs.accumulate(&previous, -1);
    let rhs = rhs.with_claimed(Some(ValidRange::new(2, cap)));
    Ok(Recurrence {
        rhs,
        provenance: vec![Derivation { cap, pn, pn1 }],
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub n: usize,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub window: ValidRange,
    pub claimed: ValidRange,
    /// (n, passed) for every n in the window.
    pub outcomes: Vec<(usize, bool)>,
    /// Longest run of passes inside the window that covers the claimed
    /// range (clipped to the window). `None` when the claim itself fails.
    pub valid_range: Option<ValidRange>,
    /// First failure above the valid range, or the first failure inside the
    /// claimed range when the claim does not hold.
    pub first_failure: Option<Mismatch>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|&(_, ok)| ok)
    }

    pub fn claim_holds(&self) -> bool {
        self.valid_range.is_some()
    }

    pub fn failures(&self) -> impl Iterator<Item = usize> + '_ {
        self.outcomes.iter().filter(|(_, ok)| !ok).map(|&(n, _)| n)
    }
}

fn mismatch_at(rec: &Recurrence, n: usize, table: &PartitionTable) -> Result<Mismatch> {
    Ok(Mismatch {
        n,
        lhs: table.lookup(n as i64)?.to_string(),
        rhs: evaluate_form(rec.rhs(), n as i64, table)?.to_string(),
    })
}

/// Checks p(n) = rhs(n) for every n in `window`.
pub fn verify(
    rec: &Recurrence,
    window: ValidRange,
    table: &PartitionTable,
) -> Result<VerificationReport> {
    if window.hi > table.limit() {
        return Err(Error::TableTooSmall {
            needed: window.hi,
            limit: table.limit(),
        });
    }
    let mut outcomes = Vec::with_capacity(window.hi + 1 - window.lo.min(window.hi + 1));
    for n in window.iter() {
        let lhs = BigInt::from_biguint(Sign::Plus, table[n].clone());
        outcomes.push((n, evaluate_form(rec.rhs(), n as i64, table)? == lhs));
    }
    let passed = |n: usize| outcomes[n - window.lo].1;

    let claimed = rec.claimed();
    let lo = claimed.lo.max(window.lo);
    let hi = claimed.hi.min(window.hi);
    let inside_failure = (lo..=hi).find(|&n| !passed(n));

    let (valid_range, first_failure) = match inside_failure {
        Some(n) => (None, Some(mismatch_at(rec, n, table)?)),
        None if lo > hi => (None, None),
        None => {
            let mut a = lo;
            while a > window.lo && passed(a - 1) {
                a -= 1;
            }
            let mut b = hi;
            while b < window.hi && passed(b + 1) {
                b += 1;
            }
            let above = if b < window.hi {
                Some(mismatch_at(rec, b + 1, table)?)
            } else {
                None
            };
            (Some(ValidRange::new(a, b)), above)
        }
    };

    Ok(VerificationReport {
        window,
        claimed,
        outcomes,
        valid_range,
        first_failure,
    })
}

/// Largest contiguous range in [0, scan_to] containing the claimed range on
/// which the recurrence holds; `None` if the claimed range itself fails.
pub fn empirical_validity(
    rec: &Recurrence,
    scan_to: usize,
    table: &PartitionTable,
) -> Result<Option<ValidRange>> {
    let claimed = rec.claimed();
    if scan_to < claimed.hi {
        return Err(Error::Precondition(format!(
            "scan must reach the claimed upper bound {}, got {scan_to}",
            claimed.hi
        )));
    }
    if scan_to > table.limit() {
        return Err(Error::TableTooSmall {
            needed: scan_to,
            limit: table.limit(),
        });
    }
    maximal_valid_range(rec.rhs(), claimed, scan_to, table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PentagonalClass {
    /// Unit coefficients on an initial segment of 1, 2, 5, 7, 12, … with
    /// Euler's signs and nothing else.
    ExactTruncation,
    /// Starts like Euler's series (at least p(n−1) + p(n−2)) but carries
    /// further terms or a tail.
    TruncationWithExtras,
    Unrelated,
}

impl fmt::Display for PentagonalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PentagonalClass::ExactTruncation => "exact-truncation",
            PentagonalClass::TruncationWithExtras => "truncation-with-extras",
            PentagonalClass::Unrelated => "unrelated",
        })
    }
}

/// Compares a recurrence with Euler's pentagonal recurrence
/// p(n) = p(n−1) + p(n−2) − p(n−5) − p(n−7) + p(n−12) + p(n−15) − …
pub fn classify_pentagonal(rec: &Recurrence) -> PentagonalClass {
    let coeffs = rec.rhs().coeffs();
    let mut matched = 0usize;
    let mut matched_terms = 0usize;
    for (offset, sign) in generalized_pentagonals() {
        if coeffs.get(&offset) == Some(&(sign as i64)) {
            matched += 1;
            matched_terms += 1;
        } else {
            break;
        }
    }
    let extras = coeffs.len() > matched_terms || !rec.tail().is_zero();
    match (matched, extras) {
        (0, _) => PentagonalClass::Unrelated,
        (_, false) => PentagonalClass::ExactTruncation,
        (m, true) if m >= 2 => PentagonalClass::TruncationWithExtras,
        _ => PentagonalClass::Unrelated,
    }
}

/// One line of a catalog file. The same shape is accepted as a recurrence
/// input, in which case everything but `coefficients` and `claimed` may be
/// omitted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogRecord {
    #[serde(default)]
    pub key: String,
    pub coefficients: BTreeMap<usize, i64>,
    #[serde(default)]
    pub tail: QuasiPoly2,
    pub claimed: ValidRange,
    #[serde(default)]
    pub empirical: Option<ValidRange>,
    #[serde(default)]
    pub provenance: Vec<Derivation>,
    #[serde(default)]
    pub classification: Option<PentagonalClass>,
}

impl CatalogRecord {
    pub fn to_recurrence(&self) -> Result<Recurrence> {
        let rhs = LinearForm::from_terms(
            self.coefficients.iter().map(|(&o, &c)| (o, c)),
            self.tail,
            Some(self.claimed),
        )?;
        Ok(Recurrence {
            rhs,
            provenance: self.provenance.clone(),
        })
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("catalog records are plain data")
    }

    pub fn from_line(line: &str) -> Result<Self> {
        serde_json::from_str(line).map_err(|e| Error::Parse(format!("catalog record: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub recurrence: Recurrence,
    pub key: String,
    pub empirical: Option<ValidRange>,
    pub classification: PentagonalClass,
}

impl CatalogEntry {
    pub fn to_record(&self) -> CatalogRecord {
        CatalogRecord {
            key: self.key.clone(),
            coefficients: self.recurrence.rhs().coeffs().clone(),
            tail: *self.recurrence.tail(),
            claimed: self.recurrence.claimed(),
            empirical: self.empirical,
            provenance: self.recurrence.provenance().to_vec(),
            classification: Some(self.classification),
        }
    }

    /// Folds in another entry with the same key: provenance lists are
    /// united and the claimed range becomes their hull.
    fn absorb(&mut self, other: CatalogEntry) {
        debug_assert_eq!(self.key, other.key);
        let mine = self.recurrence.claimed();
        let theirs = other.recurrence.claimed();
        let hull = ValidRange::new(mine.lo.min(theirs.lo), mine.hi.max(theirs.hi));
        self.recurrence.rhs = self.recurrence.rhs.clone().with_claimed(Some(hull));
        self.recurrence
            .provenance
            .extend(other.recurrence.provenance);
        self.recurrence.provenance.sort();
        self.recurrence.provenance.dedup();
    }
}

/// A derived recurrence that fails inside its own claimed range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Anomaly {
    pub derivation: Derivation,
    pub recurrence: Recurrence,
    pub failure: Mismatch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobError {
    pub derivation: Derivation,
    pub error: Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Catalog {
    /// Sorted by canonical key.
    pub entries: Vec<CatalogEntry>,
    pub anomalies: Vec<Anomaly>,
    pub errors: Vec<JobError>,
    pub jobs: usize,
}

impl Catalog {
    pub fn to_jsonl(&self) -> String {
        self.entries
            .iter()
            .map(|e| e.to_record().to_line() + "\n")
            .collect()
    }

    pub fn find(&self, rec: &Recurrence) -> Option<&CatalogEntry> {
        let key = rec.canonical_key();
        self.entries.iter().find(|e| e.key == key)
    }
}

enum JobOutcome {
    Entry(CatalogEntry),
    Anomaly(Anomaly),
}

fn run_job(
    job: Derivation,
    scan_to: usize,
    table: &PartitionTable,
    rule: GeneratorRule,
) -> Result<JobOutcome> {
    let rec = derive_recurrence_with(job.cap, job.pn, job.pn1, rule)?;
    let report = verify(&rec, ValidRange::new(0, scan_to.max(job.cap)), table)?;
    if !report.claim_holds() {
        let failure = report
            .first_failure
            .clone()
            .expect("a failed claim names its failure");
        return Ok(JobOutcome::Anomaly(Anomaly {
            derivation: job,
            recurrence: rec,
            failure,
        }));
    }
    Ok(JobOutcome::Entry(CatalogEntry {
        key: rec.canonical_key(),
        classification: classify_pentagonal(&rec),
        empirical: report.valid_range,
        recurrence: rec,
    }))
}

/// Derives and checks one recurrence per (cap, variant pair) and merges
/// them by canonical key. Jobs run in parallel; the result does not depend
/// on their order.
pub fn mine(
    caps: &[usize],
    pairs: &[(TailVariant, TailVariant)],
    scan_to: usize,
    table: &PartitionTable,
) -> Catalog {
    mine_with(caps, pairs, scan_to, table, GeneratorRule::STANDARD)
}

pub fn mine_with(
    caps: &[usize],
    pairs: &[(TailVariant, TailVariant)],
    scan_to: usize,
    table: &PartitionTable,
    rule: GeneratorRule,
) -> Catalog {
    let jobs: Vec<Derivation> = caps
        .iter()
        .flat_map(|&cap| {
            pairs
                .iter()
                .map(move |&(pn, pn1)| Derivation { cap, pn, pn1 })
        })
        .collect();
    let mut outcomes: Vec<(Derivation, Result<JobOutcome>)> = jobs
        .par_iter()
        .map(|&job| (job, run_job(job, scan_to, table, rule)))
        .collect();
    outcomes.sort_by_key(|(job, _)| *job);

    let mut merged: BTreeMap<String, CatalogEntry> = BTreeMap::new();
    let mut catalog = Catalog {
        jobs: jobs.len(),
        ..Catalog::default()
    };
    for (derivation, outcome) in outcomes {
        match outcome {
            Ok(JobOutcome::Entry(entry)) => match merged.get_mut(&entry.key) {
                Some(existing) => existing.absorb(entry),
                None => {
                    merged.insert(entry.key.clone(), entry);
                }
            },
            Ok(JobOutcome::Anomaly(anomaly)) => catalog.anomalies.push(anomaly),
            Err(error) => catalog.errors.push(JobError { derivation, error }),
        }
    }
    catalog.entries = merged.into_values().collect();
    catalog
}

/// Parses `offset:coef` pairs separated by commas, e.g. `1:1,2:1,5:-1`.
pub fn parse_inline_terms(text: &str) -> Result<Vec<(usize, i64)>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|pair| {
            let (o, c) = pair
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected offset:coef, got {pair:?}")))?;
            let offset = o
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad offset {o:?}")))?;
            let coef = c
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient {c:?}")))?;
            Ok((offset, coef))
        })
        .collect()
}
