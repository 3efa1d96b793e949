use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Which top-level tail substitutions are applied to p(n) = Σ {p(i)}.
///
/// `OneSub` replaces the last parcel {p(n−1)} by 1 (only the all-ones
/// partition contains the fixed number 1 that many times). `TwoSub` also
/// replaces {p(n−2)} by ⌊n/2⌋, the number of partitions of n − 2 into parts
/// of size at most 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TailVariant {
    #[serde(rename = "none")]
    Full,
    #[serde(rename = "one")]
    OneSub,
    #[serde(rename = "two")]
    TwoSub,
}

impl TailVariant {
    pub const ALL: [TailVariant; 3] = [TailVariant::Full, TailVariant::OneSub, TailVariant::TwoSub];

    /// How many top-level parcels are replaced by closed terms.
    pub fn substituted(self) -> usize {
        match self {
            TailVariant::Full => 0,
            TailVariant::OneSub => 1,
            TailVariant::TwoSub => 2,
        }
    }

    pub fn flag(self) -> &'static str {
        match self {
            TailVariant::Full => "none",
            TailVariant::OneSub => "one",
            TailVariant::TwoSub => "two",
        }
    }

    /// Every ordered (p(n) variant, p(n−1) variant) pair.
    pub fn all_pairs() -> impl Iterator<Item = (TailVariant, TailVariant)> {
        Self::ALL
            .into_iter()
            .flat_map(|a| Self::ALL.into_iter().map(move |b| (a, b)))
    }
}

impl fmt::Display for TailVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.flag())
    }
}

impl FromStr for TailVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" | "full" => Ok(TailVariant::Full),
            "one" => Ok(TailVariant::OneSub),
            "two" => Ok(TailVariant::TwoSub),
            other => Err(Error::Parse(format!(
                "unknown tail variant {other:?} (expected none, one or two)"
            ))),
        }
    }
}
