//! The generator rule: how many child parcels a parcel spawns.
//!
//! A parcel {p(τ)} whose father has tab h generates λ = 2τ − h children,
//! {p(0)}, …, {p(λ−1)}, and none at all when 2τ − h ≤ 0. Both engines ask
//! this type instead of hard-coding the formula, so a corrupted rule can be
//! injected to prove the test suite notices.

/// λ = max(0, 2τ − h + slack). The correct rule has `slack == 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GeneratorRule {
    slack: i64,
}

impl Default for GeneratorRule {
    fn default() -> Self {
        Self::STANDARD
    }
}

impl GeneratorRule {
    pub const STANDARD: GeneratorRule = GeneratorRule { slack: 0 };

    /// A deliberately wrong rule, λ = 2τ − h + slack. For mutation testing.
    pub fn mutated(slack: i64) -> Self {
        GeneratorRule { slack }
    }

    pub fn is_standard(&self) -> bool {
        self.slack == 0
    }

    pub fn slack(&self) -> i64 {
        self.slack
    }

    /// Number of children of the parcel with tab `tab` under father tab `head`.
    pub fn child_count(&self, tab: usize, head: usize) -> usize {
        (2 * tab as i64 - head as i64 + self.slack).max(0) as usize
    }

    /// Symbolic form of the rule. A parcel p(n−a) under head p(n−b) has
    /// children p(0), …, p(n − 2a + b − 1 + slack), i.e. the terms p(n−c)
    /// with c from the returned offset upward.
    pub fn first_child_offset(&self, a: usize, b: usize) -> i64 {
        2 * a as i64 - b as i64 + 1 - self.slack
    }
}
