//! Recurrences known in closed form, used as fixed expectations by the
//! self-test and the examples.

use crate::quasi::QuasiPoly2;
use crate::recurrence::{Derivation, Recurrence};
use crate::symbolic::ValidRange;
use crate::variant::TailVariant::{self, Full, OneSub, TwoSub};

#[derive(Debug, Clone, Copy)]
pub struct KnownRecurrence {
    pub name: &'static str,
    pub derivation: Derivation,
    pub terms: &'static [(usize, i64)],
    tail: TailKind,
}

#[derive(Debug, Clone, Copy)]
enum TailKind {
    Zero,
    /// ⌊n/2⌋, written (n − k)/2 with k the parity of n.
    FloorHalf,
    /// 1 on even n, 0 on odd n.
    EvenIndicator,
}

impl KnownRecurrence {
    pub fn tail(&self) -> QuasiPoly2 {
        match self.tail {
            TailKind::Zero => QuasiPoly2::ZERO,
            TailKind::FloorHalf => QuasiPoly2::floor_half(),
            TailKind::EvenIndicator => {
                QuasiPoly2::floor_half() - QuasiPoly2::floor_half().shifted(1)
            }
        }
    }

    pub fn claimed(&self) -> ValidRange {
        ValidRange::new(2, self.derivation.cap)
    }

    pub fn recurrence(&self) -> Recurrence {
        Recurrence::external(self.terms.iter().copied(), self.tail(), self.claimed())
            .expect("reference offsets are positive")
    }
}

const fn derivation(cap: usize, pn: TailVariant, pn1: TailVariant) -> Derivation {
    Derivation { cap, pn, pn1 }
}

/// Euler's recurrence cut after p(n−12).
pub const PENTAGONAL_12: KnownRecurrence = KnownRecurrence {
    name: "pentagonal through p(n-12)",
    derivation: derivation(12, OneSub, OneSub),
    terms: &[(1, 1), (2, 1), (5, -1), (7, -1), (12, 1)],
    tail: TailKind::Zero,
};

/// Euler's recurrence cut after p(n−22).
pub const PENTAGONAL_22: KnownRecurrence = KnownRecurrence {
    name: "pentagonal through p(n-22)",
    derivation: derivation(24, OneSub, OneSub),
    terms: &[(1, 1), (2, 1), (5, -1), (7, -1), (12, 1), (15, 1), (22, -1)],
    tail: TailKind::Zero,
};

/// No substitution on either side. The deepest terms are −p(n−22) + p(n−23);
/// a version ending in −p(n−24) instead is off by one at n = 22.
pub const UNSUBSTITUTED_24: KnownRecurrence = KnownRecurrence {
    name: "unsubstituted, cap 24",
    derivation: derivation(24, Full, Full),
    terms: &[
        (1, 2),
        (3, -1),
        (5, -1),
        (6, 1),
        (7, -1),
        (8, 1),
        (12, 1),
        (13, -1),
        (15, 1),
        (16, -1),
        (22, -1),
        (23, 1),
    ],
    tail: TailKind::Zero,
};

/// p(n) with ⌊n/2⌋ + 1, p(n−1) with 1.
pub const HALF_TAIL_24: KnownRecurrence = KnownRecurrence {
    name: "floor(n/2) tail, cap 24",
    derivation: derivation(24, TwoSub, OneSub),
    terms: &[
        (1, 1),
        (6, 1),
        (8, 1),
        (11, -1),
        (13, -2),
        (14, -1),
        (15, -1),
        (16, -1),
        (17, -1),
        (20, 1),
        (21, 1),
        (22, 1),
        (23, 2),
        (24, 2),
    ],
    tail: TailKind::FloorHalf,
};

/// Both sides with the ⌊·/2⌋ substitution.
pub const PARITY_TAIL_24: KnownRecurrence = KnownRecurrence {
    name: "parity tail, cap 24",
    derivation: derivation(24, TwoSub, TwoSub),
    terms: &[
        (1, 1),
        (3, 1),
        (7, -1),
        (9, -1),
        (11, -1),
        (12, 1),
        (13, -1),
        (14, 1),
        (16, 1),
        (18, 1),
        (20, 1),
    ],
    tail: TailKind::EvenIndicator,
};

pub const ALL: [KnownRecurrence; 5] = [
    PENTAGONAL_12,
    HALF_TAIL_24,
    PARITY_TAIL_24,
    UNSUBSTITUTED_24,
    PENTAGONAL_22,
];
