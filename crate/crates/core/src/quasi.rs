//! Parity quasi-polynomials of degree at most one.
//!
//! G(n) = e0 + e1·n for even n and o0 + o1·n for odd n, with exact rational
//! coefficients. This covers ⌊n/2⌋, (n − k)/2 and the parity indicator k that
//! show up as recurrence tails. Higher moduli or degrees would extend
//! [`Affine`] and the branch array.

use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// c + s·n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Affine {
    pub constant: Rational64,
    pub slope: Rational64,
}

impl Affine {
    pub const ZERO: Affine = Affine {
        constant: Rational64::ZERO,
        slope: Rational64::ZERO,
    };

    pub fn new(constant: Rational64, slope: Rational64) -> Self {
        Affine { constant, slope }
    }

    pub fn at(&self, n: i64) -> Rational64 {
        self.constant + self.slope * Rational64::from_integer(n)
    }

    /// The same function with its argument replaced by n − d.
    pub fn shifted(&self, d: i64) -> Affine {
        Affine {
            constant: self.constant - self.slope * Rational64::from_integer(d),
            slope: self.slope,
        }
    }

    fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.slope.is_zero()
    }
}

impl std::ops::Add for Affine {
    type Output = Affine;
    fn add(self, rhs: Affine) -> Affine {
        Affine::new(self.constant + rhs.constant, self.slope + rhs.slope)
    }
}

impl std::ops::Neg for Affine {
    type Output = Affine;
    fn neg(self) -> Affine {
        Affine::new(-self.constant, -self.slope)
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Put both coefficients over their common denominator.
        let denom = self.constant.denom().lcm(self.slope.denom());
        let c = (self.constant * Rational64::from_integer(denom)).to_integer();
        let s = (self.slope * Rational64::from_integer(denom)).to_integer();
        let mut numer = String::new();
        match s {
            0 => {}
            1 => numer.push('n'),
            -1 => numer.push_str("-n"),
            _ => numer.push_str(&format!("{s}n")),
        }
        if c != 0 || s == 0 {
            if numer.is_empty() {
                numer = c.to_string();
            } else if c > 0 {
                numer.push_str(&format!("+{c}"));
            } else {
                numer.push_str(&c.to_string());
            }
        }
        if denom == 1 {
            f.write_str(&numer)
        } else if s != 0 && c != 0 {
            write!(f, "({numer})/{denom}")
        } else {
            write!(f, "{numer}/{denom}")
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuasiPoly2 {
    pub even: Affine,
    pub odd: Affine,
}

impl Default for QuasiPoly2 {
    fn default() -> Self {
        Self::ZERO
    }
}

impl QuasiPoly2 {
    pub const ZERO: QuasiPoly2 = QuasiPoly2 {
        even: Affine::ZERO,
        odd: Affine::ZERO,
    };

    pub fn new(even: Affine, odd: Affine) -> Self {
        QuasiPoly2 { even, odd }
    }

    pub fn constant(c: i64) -> Self {
        let a = Affine::new(Rational64::from_integer(c), Rational64::zero());
        QuasiPoly2 { even: a, odd: a }
    }

    /// ⌊n/2⌋: n/2 on even n, (n − 1)/2 on odd n.
    pub fn floor_half() -> Self {
        let half = Rational64::new(1, 2);
        QuasiPoly2 {
            even: Affine::new(Rational64::zero(), half),
            odd: Affine::new(-half, half),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.even.is_zero() && self.odd.is_zero()
    }

    pub fn is_uniform(&self) -> bool {
        self.even == self.odd
    }

    pub fn branch(&self, n: i64) -> &Affine {
        if n.is_even() {
            &self.even
        } else {
            &self.odd
        }
    }

    pub fn at(&self, n: i64) -> Rational64 {
        self.branch(n).at(n)
    }

    /// Value at `n`, which must be an integer.
    pub fn integer_at(&self, n: i64) -> Result<i64> {
        let v = self.at(n);
        if !v.is_integer() {
            return Err(Error::NonIntegralTail(n));
        }
        Ok(v.to_integer())
    }

    /// Whether both branches give integers on their parity class.
    /// Degree one makes two consecutive samples per branch sufficient.
    pub fn is_integer_valued(&self) -> bool {
        (0..4).all(|n| self.at(n).is_integer())
    }

    /// G(n − d) as a quasi-polynomial in n. An odd shift swaps the branches.
    pub fn shifted(&self, d: i64) -> Self {
        let (even_src, odd_src) = if d.is_even() {
            (self.even, self.odd)
        } else {
            (self.odd, self.even)
        };
        QuasiPoly2 {
            even: even_src.shifted(d),
            odd: odd_src.shifted(d),
        }
    }

    /// Denominators divide two on both branches.
    pub fn is_half_integral(&self) -> bool {
        [self.even, self.odd].iter().all(|a| {
            (Rational64::from_integer(2) * a.constant).is_integer()
                && (Rational64::from_integer(2) * a.slope).is_integer()
        })
    }
}

impl std::ops::Add for QuasiPoly2 {
    type Output = QuasiPoly2;
    fn add(self, rhs: QuasiPoly2) -> QuasiPoly2 {
        QuasiPoly2::new(self.even + rhs.even, self.odd + rhs.odd)
    }
}

impl std::ops::Neg for QuasiPoly2 {
    type Output = QuasiPoly2;
    fn neg(self) -> QuasiPoly2 {
        QuasiPoly2::new(-self.even, -self.odd)
    }
}

impl std::ops::Sub for QuasiPoly2 {
    type Output = QuasiPoly2;
    fn sub(self, rhs: QuasiPoly2) -> QuasiPoly2 {
        self + (-rhs)
    }
}

impl fmt::Display for QuasiPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_uniform() {
            write!(f, "{}", self.even)
        } else {
            write!(f, "({} if n even, {} if n odd)", self.even, self.odd)
        }
    }
}

impl QuasiPoly2 {
    /// The `+ G(n)` suffix of a rendered form; empty for a zero tail.
    pub fn render_suffix(&self) -> String {
        if self.is_zero() {
            return String::new();
        }
        if self.is_uniform() && self.even.slope.is_zero() && self.even.constant.is_negative() {
            return format!(" - {}", -self.even.constant);
        }
        format!(" + {self}")
    }
}

/// Serialized as `{"even": ["c", "s"], "odd": ["c", "s"]}` with each
/// coefficient written as `a` or `a/b`.
#[derive(Serialize, Deserialize)]
struct QuasiRepr {
    even: [String; 2],
    odd: [String; 2],
}

fn parse_ratio(s: &str) -> Result<Rational64> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let den: i64 = b.trim().parse().map_err(|_| bad())?;
            if den == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(a.trim().parse().map_err(|_| bad())?, den))
        }
        None => Ok(Rational64::from_integer(
            s.trim().parse().map_err(|_| bad())?,
        )),
    }
}

impl Serialize for QuasiPoly2 {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        QuasiRepr {
            even: [self.even.constant.to_string(), self.even.slope.to_string()],
            odd: [self.odd.constant.to_string(), self.odd.slope.to_string()],
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QuasiPoly2 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = QuasiRepr::deserialize(deserializer)?;
        let affine = |pair: &[String; 2]| -> Result<Affine> {
            Ok(Affine::new(parse_ratio(&pair[0])?, parse_ratio(&pair[1])?))
        };
        let even = affine(&repr.even).map_err(serde::de::Error::custom)?;
        let odd = affine(&repr.odd).map_err(serde::de::Error::custom)?;
        Ok(QuasiPoly2 { even, odd })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn floor_div2(n: i64) -> i64 {
        n.div_euclid(2)
    }

    #[test]
    fn floor_half_pointwise() {
        let g = QuasiPoly2::floor_half();
        for n in -10..=50 {
            assert_eq!(g.integer_at(n).unwrap(), floor_div2(n));
        }
        assert!(g.is_integer_valued());
        assert!(g.is_half_integral());
    }

    #[test]
    fn shifting_floor_half_swaps_branches() {
        let g = QuasiPoly2::floor_half().shifted(1);
        assert_eq!(g.even, QuasiPoly2::floor_half().odd.shifted(1));
        for n in 0..=50 {
            assert_eq!(g.integer_at(n).unwrap(), floor_div2(n - 1));
        }
        assert!(g.is_integer_valued());
    }

    #[test]
    fn constant_shift_is_constant() {
        assert_eq!(QuasiPoly2::constant(1).shifted(1), QuasiPoly2::constant(1));
        assert_eq!(QuasiPoly2::constant(1).shifted(4), QuasiPoly2::constant(1));
    }

    #[test]
    fn parity_indicator_from_difference() {
        // ⌊n/2⌋ − ⌊(n−1)/2⌋ is 1 on even n and 0 on odd n
        let k = QuasiPoly2::floor_half() - QuasiPoly2::floor_half().shifted(1);
        assert_eq!(
            k,
            QuasiPoly2::new(
                Affine::new(Rational64::one(), Rational64::zero()),
                Affine::ZERO,
            )
        );
        assert_eq!(k.to_string(), "(1 if n even, 0 if n odd)");
    }

    #[test]
    fn rendering() {
        assert_eq!(QuasiPoly2::constant(1).to_string(), "1");
        assert_eq!(QuasiPoly2::ZERO.render_suffix(), "");
        assert_eq!(QuasiPoly2::constant(-2).render_suffix(), " - 2");
        assert_eq!(
            QuasiPoly2::floor_half().to_string(),
            "(n/2 if n even, (n-1)/2 if n odd)"
        );
        let g = QuasiPoly2::floor_half() + QuasiPoly2::constant(1);
        assert_eq!(g.to_string(), "((n+2)/2 if n even, (n+1)/2 if n odd)");
    }

    #[test]
    fn non_integral_detected() {
        let half = QuasiPoly2::constant(0)
            + QuasiPoly2::new(
                Affine::new(Rational64::new(1, 2), Rational64::zero()),
                Affine::ZERO,
            );
        assert!(!half.is_integer_valued());
        assert_eq!(half.integer_at(4), Err(Error::NonIntegralTail(4)));
    }

    #[test]
    fn serde_round_trip() {
        let g = QuasiPoly2::floor_half() + QuasiPoly2::constant(1);
        let text = serde_json::to_string(&g).unwrap();
        assert_eq!(text, r#"{"even":["1","1/2"],"odd":["1/2","1/2"]}"#);
        assert_eq!(serde_json::from_str::<QuasiPoly2>(&text).unwrap(), g);
        assert!(
            serde_json::from_str::<QuasiPoly2>(r#"{"even":["1/0","0"],"odd":["0","0"]}"#).is_err()
        );
    }
}
