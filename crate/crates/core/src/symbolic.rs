//! Symbolic expansion of p(n) as a signed combination of terms p(n−c).
//!
//! A parcel p(n−a) whose father is p(n−b) generates the children
//! p(0), …, p(n − 2a + b − 1), i.e. the terms p(n−c) for c ≥ 2a − b + 1.
//! Expanding against a fixed cap lists those children for every offset up
//! to the cap, whatever n is: a term with c > n is p(negative) = 0, so the
//! same display is correct for every n ≤ cap. Each child is expanded in
//! turn with p(n−a) as its father.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::{BigInt, Sign};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generator::GeneratorRule;
use crate::oracle::PartitionTable;
use crate::quasi::QuasiPoly2;
use crate::variant::TailVariant;

/// Inclusive range of n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ValidRange {
    pub lo: usize,
    pub hi: usize,
}

impl ValidRange {
    pub fn new(lo: usize, hi: usize) -> Self {
        ValidRange { lo, hi }
    }

    pub fn contains(&self, n: usize) -> bool {
        self.lo <= n && n <= self.hi
    }

    pub fn contains_range(&self, other: &ValidRange) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn shifted(&self, d: usize) -> Self {
        ValidRange::new(self.lo + d, self.hi + d)
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<usize> {
        self.lo..=self.hi
    }
}

impl fmt::Display for ValidRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} <= n <= {}]", self.lo, self.hi)
    }
}

/// Σ coef_c · p(n − c) + G(n).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearForm {
    #[serde(rename = "coefficients")]
    coeffs: BTreeMap<usize, i64>,
    tail: QuasiPoly2,
    cap: usize,
    /// Where the form is claimed to equal p(n). Forms that describe a
    /// single parcel rather than p(n) carry no claim.
    claimed: Option<ValidRange>,
}

impl LinearForm {
    pub fn new(cap: usize) -> Self {
        LinearForm {
            coeffs: BTreeMap::new(),
            tail: QuasiPoly2::ZERO,
            cap,
            claimed: None,
        }
    }

    /// Builds a form from (offset, coefficient) pairs. Offsets must be ≥ 1.
    pub fn from_terms(
        terms: impl IntoIterator<Item = (usize, i64)>,
        tail: QuasiPoly2,
        claimed: Option<ValidRange>,
    ) -> Result<Self> {
        let mut form = LinearForm::new(0);
        for (offset, coef) in terms {
            if offset == 0 {
                return Err(Error::Precondition("term offsets start at 1".into()));
            }
            form.cap = form.cap.max(offset);
            form.add_term(offset, coef);
        }
        form.tail = tail;
        form.claimed = claimed;
        if let Some(range) = claimed {
            form.cap = form.cap.max(range.hi);
        }
        Ok(form)
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, i64> {
        &self.coeffs
    }

    pub fn coefficient(&self, offset: usize) -> i64 {
        self.coeffs.get(&offset).copied().unwrap_or(0)
    }

    pub fn tail(&self) -> &QuasiPoly2 {
        &self.tail
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn claimed(&self) -> Option<ValidRange> {
        self.claimed
    }

    pub fn with_claimed(mut self, range: Option<ValidRange>) -> Self {
        self.claimed = range;
        self
    }

    pub fn with_tail(mut self, tail: QuasiPoly2) -> Self {
        self.tail = tail;
        self
    }

    pub fn add_term(&mut self, offset: usize, coef: i64) {
        if coef == 0 {
            return;
        }
        let entry = self.coeffs.entry(offset).or_insert(0);
        *entry += coef;
        if *entry == 0 {
            self.coeffs.remove(&offset);
        }
    }

    /// Adds `sign · other` term by term (tails included).
    pub fn accumulate(&mut self, other: &LinearForm, sign: i64) {
        for (&offset, &coef) in &other.coeffs {
            self.add_term(offset, sign * coef);
        }
        self.tail = if sign >= 0 {
            self.tail + other.tail
        } else {
            self.tail - other.tail
        };
        self.cap = self.cap.max(other.cap);
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.tail.is_zero()
    }

    /// Smallest offset present, if any.
    pub fn min_offset(&self) -> Option<usize> {
        self.coeffs.keys().next().copied()
    }

    /// Renders `lhs = terms + tail  [lo <= n <= hi]`, terms by ascending
    /// offset.
    pub fn render(&self, lhs: &str) -> String {
        let mut out = format!("{lhs} =");
        let mut first = true;
        for (&offset, &coef) in &self.coeffs {
            let mag = coef.unsigned_abs();
            let term = if mag == 1 {
                format!("p(n-{offset})")
            } else {
                format!("{mag}p(n-{offset})")
            };
            match (first, coef < 0) {
                (true, false) => out.push_str(&format!(" {term}")),
                (true, true) => out.push_str(&format!(" -{term}")),
                (false, false) => out.push_str(&format!(" + {term}")),
                (false, true) => out.push_str(&format!(" - {term}")),
            }
            first = false;
        }
        if first {
            if self.tail.is_zero() {
                out.push_str(" 0");
            } else {
                out.push_str(&format!(" {}", self.tail));
            }
        } else {
            out.push_str(&self.tail.render_suffix());
        }
        if let Some(range) = self.claimed {
            out.push_str(&format!("  {range}"));
        }
        out
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("p(n)"))
    }
}

/// Collected expansions of individual parcels, memoized on (a, b).
#[derive(Debug)]
pub struct SymbolicExpander {
    cap: usize,
    rule: GeneratorRule,
    memo: HashMap<(usize, usize), BTreeMap<usize, i64>>,
}

impl SymbolicExpander {
    pub fn new(cap: usize, rule: GeneratorRule) -> Self {
        SymbolicExpander {
            cap,
            rule,
            memo: HashMap::new(),
        }
    }

    /// Offsets of the children of p(n−a) under head p(n−b).
    pub fn child_offsets(&self, a: usize, b: usize) -> std::ops::RangeInclusive<usize> {
        let first = self.rule.first_child_offset(a, b).max(a as i64 + 1) as usize;
        first..=self.cap
    }

    /// p(n−a) minus its fully expanded children, collected.
    pub fn parcel(&mut self, a: usize, b: usize) -> BTreeMap<usize, i64> {
        if let Some(hit) = self.memo.get(&(a, b)) {
            return hit.clone();
        }
        let mut terms = BTreeMap::from([(a, 1i64)]);
        for c in self.child_offsets(a, b) {
            for (offset, coef) in self.parcel(c, a) {
                *terms.entry(offset).or_insert(0) -= coef;
            }
        }
        terms.retain(|_, coef| *coef != 0);
        self.memo.insert((a, b), terms.clone());
        terms
    }

    /// Uncollected tree for p(n−a) under head p(n−b).
    pub fn tree(&self, a: usize, b: usize) -> SymbolicNode {
        SymbolicNode {
            offset: a,
            children: self.child_offsets(a, b).map(|c| self.tree(c, a)).collect(),
        }
    }
}

/// A term p(n−offset) together with the children subtracted from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicNode {
    pub offset: usize,
    pub children: Vec<SymbolicNode>,
}

impl SymbolicNode {
    pub fn evaluate(&self, n: i64, table: &PartitionTable) -> Result<BigInt> {
        let mut v = BigInt::from_biguint(Sign::Plus, table.lookup(n - self.offset as i64)?.clone());
        for child in &self.children {
            v -= child.evaluate(n, table)?;
        }
        Ok(v)
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(SymbolicNode::size).sum::<usize>()
    }

    /// Bracket notation with children in increasing tab (decreasing
    /// offset) order, e.g. `[p(n-5) - p(n-12) - p(n-11)]`.
    pub fn render(&self) -> String {
        if self.children.is_empty() {
            return format!("p(n-{})", self.offset);
        }
        let mut out = format!("[p(n-{})", self.offset);
        for child in self.children.iter().rev() {
            out.push_str(" - ");
            out.push_str(&child.render());
        }
        out.push(']');
        out
    }
}

fn check_parcel_args(a: usize, b: usize, cap: usize) -> Result<()> {
    if !(b < a && a <= cap) {
        return Err(Error::Precondition(format!(
            "parcel offset must satisfy head < offset <= cap, got head {b}, offset {a}, cap {cap}"
        )));
    }
    Ok(())
}

/// Collected expansion of the parcel p(n−a) under head p(n−b).
pub fn expand_parcel_symbolic(a: usize, b: usize, cap: usize) -> Result<LinearForm> {
    expand_parcel_symbolic_with(a, b, cap, GeneratorRule::STANDARD)
}

pub fn expand_parcel_symbolic_with(
    a: usize,
    b: usize,
    cap: usize,
    rule: GeneratorRule,
) -> Result<LinearForm> {
    check_parcel_args(a, b, cap)?;
    let mut expander = SymbolicExpander::new(cap, rule);
    Ok(LinearForm {
        coeffs: expander.parcel(a, b),
        tail: QuasiPoly2::ZERO,
        cap,
        claimed: None,
    })
}

/// Uncollected tree of the parcel p(n−a) under head p(n−b).
pub fn parcel_tree(a: usize, b: usize, cap: usize) -> Result<SymbolicNode> {
    check_parcel_args(a, b, cap)?;
    Ok(SymbolicExpander::new(cap, GeneratorRule::STANDARD).tree(a, b))
}

/// The closed tail that replaces the substituted top-level parcels.
pub fn variant_tail(variant: TailVariant) -> QuasiPoly2 {
    match variant {
        TailVariant::Full => QuasiPoly2::ZERO,
        TailVariant::OneSub => QuasiPoly2::constant(1),
        TailVariant::TwoSub => QuasiPoly2::floor_half() + QuasiPoly2::constant(1),
    }
}

/// Range of n the expansion is claimed for. The unsubstituted form is an
/// empty sum at n = 0, so it starts at 1.
pub fn claimed_range(cap: usize, variant: TailVariant) -> ValidRange {
    match variant {
        TailVariant::Full => ValidRange::new(1, cap),
        _ => ValidRange::new(2, cap),
    }
}

fn check_cap(cap: usize) -> Result<()> {
    if cap < 2 {
        return Err(Error::Precondition(format!(
            "expansion cap must be at least 2, got {cap}"
        )));
    }
    Ok(())
}

/// p(n) for n in the claimed range, as a collected form with offsets ≤ cap.
pub fn expand_symbolic(cap: usize, variant: TailVariant) -> Result<LinearForm> {
    expand_symbolic_with(cap, variant, GeneratorRule::STANDARD)
}

pub fn expand_symbolic_with(
    cap: usize,
    variant: TailVariant,
    rule: GeneratorRule,
) -> Result<LinearForm> {
    check_cap(cap)?;
    let mut expander = SymbolicExpander::new(cap, rule);
    let mut form = LinearForm::new(cap);
    for a in (1 + variant.substituted())..=cap {
        for (offset, coef) in expander.parcel(a, 0) {
            form.add_term(offset, coef);
        }
    }
    form.tail = variant_tail(variant);
    form.claimed = Some(claimed_range(cap, variant));
    Ok(form)
}

/// Top-level parcels of the expansion, uncollected, in tab order.
pub fn expansion_tree(cap: usize, variant: TailVariant) -> Result<Vec<SymbolicNode>> {
    check_cap(cap)?;
    let expander = SymbolicExpander::new(cap, GeneratorRule::STANDARD);
    Ok(((1 + variant.substituted())..=cap)
        .rev()
        .map(|a| expander.tree(a, 0))
        .collect())
}

/// Bracket display of the whole expansion, e.g.
/// `p(n) = p(n-12) + ... + [p(n-5) - p(n-12) - p(n-11)] + ... + 1`.
pub fn render_expansion(cap: usize, variant: TailVariant) -> Result<String> {
    let nodes = expansion_tree(cap, variant)?;
    let mut body: Vec<String> = nodes.iter().map(SymbolicNode::render).collect();
    let tail = variant_tail(variant);
    match variant {
        TailVariant::Full => {}
        TailVariant::OneSub => body.push("1".into()),
        TailVariant::TwoSub => {
            body.push("⌊n/2⌋".into());
            body.push("1".into());
        }
    }
    debug_assert!(variant != TailVariant::Full || tail.is_zero());
    Ok(format!("p(n) = {}", body.join(" + ")))
}

/// The largest offset whose top-level parcel generates children, i.e. the
/// first parcel in tab order that is not a plain p(n−c).
pub fn first_generating_offset(cap: usize, variant: TailVariant) -> Result<Option<usize>> {
    check_cap(cap)?;
    let expander = SymbolicExpander::new(cap, GeneratorRule::STANDARD);
    Ok(((1 + variant.substituted())..=cap)
        .rev()
        .find(|&a| !expander.child_offsets(a, 0).is_empty()))
}

/// The same form written for p(m) with m = n − d, re-expressed in n.
pub fn shift_form(form: &LinearForm, d: usize) -> LinearForm {
    LinearForm {
        coeffs: form
            .coeffs
            .iter()
            .map(|(&c, &coef)| (c + d, coef))
            .collect(),
        tail: form.tail.shifted(d as i64),
        cap: form.cap + d,
        claimed: form.claimed.map(|r| r.shifted(d)),
    }
}

/// Σ coef_c · p(n − c) + G(n), with p at negative arguments equal to 0.
pub fn evaluate_form(form: &LinearForm, n: i64, table: &PartitionTable) -> Result<BigInt> {
    let mut acc = BigInt::from(form.tail.integer_at(n)?);
    for (&offset, &coef) in &form.coeffs {
        let p = table.lookup(n - offset as i64)?;
        acc += BigInt::from(coef) * BigInt::from_biguint(Sign::Plus, p.clone());
    }
    Ok(acc)
}

/// Whether the form equals p(n) at `n`.
pub fn holds_at(form: &LinearForm, n: usize, table: &PartitionTable) -> Result<bool> {
    let lhs = BigInt::from_biguint(Sign::Plus, table.lookup(n as i64)?.clone());
    Ok(evaluate_form(form, n as i64, table)? == lhs)
}

/// Largest contiguous range within `[0, scan_to]` that contains `seed` and on
/// which the form equals p(n). `None` if the form fails somewhere in `seed`.
pub fn maximal_valid_range(
    form: &LinearForm,
    seed: ValidRange,
    scan_to: usize,
    table: &PartitionTable,
) -> Result<Option<ValidRange>> {
    for n in seed.iter() {
        if !holds_at(form, n, table)? {
            return Ok(None);
        }
    }
    let mut lo = seed.lo;
    while lo > 0 && holds_at(form, lo - 1, table)? {
        lo -= 1;
    }
    let mut hi = seed.hi;
    while hi < scan_to && holds_at(form, hi + 1, table)? {
        hi += 1;
    }
    Ok(Some(ValidRange::new(lo, hi)))
}

/// Smallest n from which the form holds continuously up to its claim.
pub fn empirical_lower_bound(form: &LinearForm, table: &PartitionTable) -> Result<Option<usize>> {
    let Some(claimed) = form.claimed else {
        return Ok(None);
    };
    Ok(maximal_valid_range(form, claimed, claimed.hi, table)?.map(|r| r.lo))
}
