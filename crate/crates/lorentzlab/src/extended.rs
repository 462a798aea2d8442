//! Extended reals with the infinity conventions used throughout the crate.
//!
//! Infinities are explicit tags; no kernel ever relies on IEEE `inf - inf`
//! (which would be NaN). The conventions are
//!
//! * `(+∞) − (+∞) = +∞` and `(−∞) − (−∞) = +∞`,
//! * `±∞ + z = ±∞` for every `z` (the left operand wins when both are infinite),
//! * `0 · (±∞) = 0`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};

/// A point of `[−∞, +∞]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtReal {
    NegInf,
    Finite(f64),
    PosInf,
}

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal::Finite(0.0);

    /// Converts an IEEE double, mapping `±inf` to the corresponding tag.
    pub fn from_f64(x: f64) -> Self {
        debug_assert!(!x.is_nan(), "NaN cannot be represented as an extended real");
        if x == f64::INFINITY {
            ExtReal::PosInf
        } else if x == f64::NEG_INFINITY {
            ExtReal::NegInf
        } else {
            ExtReal::Finite(x)
        }
    }

    /// IEEE view, for reporting only.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtReal::NegInf => f64::NEG_INFINITY,
            ExtReal::Finite(x) => x,
            ExtReal::PosInf => f64::INFINITY,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(x) => Some(x),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    /// Multiplication by a real scalar with `0 · (±∞) = 0`.
    pub fn scale(self, c: f64) -> Self {
        if c == 0.0 {
            return ExtReal::ZERO;
        }
        match self {
            ExtReal::Finite(x) => ExtReal::Finite(c * x),
            inf if c > 0.0 => inf,
            inf => -inf,
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Total order (the type never stores NaN).
    pub fn total_cmp(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).unwrap_or(Ordering::Equal)
    }

    fn rank(self) -> u8 {
        match self {
            ExtReal::NegInf => 0,
            ExtReal::Finite(_) => 1,
            ExtReal::PosInf => 2,
        }
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a.partial_cmp(b),
            _ => Some(self.rank().cmp(&other.rank())),
        }
    }
}

impl Add for ExtReal {
    type Output = ExtReal;
    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::Finite(a + b),
            (ExtReal::Finite(_), inf) => inf,
            (inf, _) => inf,
        }
    }
}

impl Sub for ExtReal {
    type Output = ExtReal;
    fn sub(self, rhs: Self) -> Self {
        match (self, rhs) {
            (ExtReal::PosInf, ExtReal::PosInf) | (ExtReal::NegInf, ExtReal::NegInf) => ExtReal::PosInf,
            _ => self + (-rhs),
        }
    }
}

impl Neg for ExtReal {
    type Output = ExtReal;
    fn neg(self) -> Self {
        match self {
            ExtReal::NegInf => ExtReal::PosInf,
            ExtReal::Finite(x) => ExtReal::Finite(-x),
            ExtReal::PosInf => ExtReal::NegInf,
        }
    }
}

impl From<f64> for ExtReal {
    fn from(x: f64) -> Self {
        ExtReal::from_f64(x)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInf => write!(f, "-inf"),
            ExtReal::PosInf => write!(f, "inf"),
            ExtReal::Finite(x) => write!(f, "{x:?}"),
        }
    }
}

impl FromStr for ExtReal {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "-inf" | "-infinity" | "-Inf" => Ok(ExtReal::NegInf),
            "inf" | "+inf" | "infinity" | "Inf" => Ok(ExtReal::PosInf),
            t => match t.parse::<f64>() {
                Ok(x) if x.is_nan() => Err(format!("NaN is not an extended real: {t:?}")),
                Ok(x) => Ok(ExtReal::from_f64(x)),
                Err(_) => Err(format!("not a number: {t:?}")),
            },
        }
    }
}

/// A time-separation value: `−∞` or a point of `[0, +∞]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct ExtendedTime(ExtReal);

impl ExtendedTime {
    pub const NEG_INF: ExtendedTime = ExtendedTime(ExtReal::NegInf);
    pub const POS_INF: ExtendedTime = ExtendedTime(ExtReal::PosInf);
    pub const ZERO: ExtendedTime = ExtendedTime(ExtReal::Finite(0.0));

    /// A finite nonnegative separation.
    pub fn finite(x: f64) -> Result<Self> {
        if x.is_nan() || x < 0.0 || x.is_infinite() {
            return Err(Error::Domain(format!("time separation must be finite and nonnegative, got {x}")));
        }
        // normalise −0.0 so that bitwise comparisons behave
        Ok(ExtendedTime(ExtReal::Finite(x + 0.0)))
    }

    /// Any value of the admissible range; finite negatives are rejected.
    pub fn new(value: ExtReal) -> Result<Self> {
        match value {
            ExtReal::Finite(x) => Self::finite(x),
            other => Ok(ExtendedTime(other)),
        }
    }

    /// Wraps a value known to be a nonnegative finite real (e.g. a square root).
    pub(crate) fn from_nonneg(x: f64) -> Self {
        debug_assert!(x >= 0.0 && x.is_finite());
        ExtendedTime(ExtReal::Finite(x + 0.0))
    }

    pub fn value(self) -> ExtReal {
        self.0
    }

    pub fn finite_value(self) -> Option<f64> {
        self.0.finite()
    }

    /// `ℓ ≥ 0`, i.e. the pair is causally related.
    pub fn is_causal(self) -> bool {
        self.0 != ExtReal::NegInf
    }

    /// `ℓ > 0`, i.e. the pair is chronologically related.
    pub fn is_chronological(self) -> bool {
        self.0 > ExtReal::ZERO
    }

    pub fn to_f64(self) -> f64 {
        self.0.to_f64()
    }

    /// `ℓ^q` with the conventions `0^q = +∞` for `q < 0`, `(+∞)^q = 0` for
    /// `q < 0`; the non-causal value `−∞` is returned unchanged.
    pub fn pow(self, q: f64) -> ExtReal {
        match self.0 {
            ExtReal::NegInf => ExtReal::NegInf,
            ExtReal::PosInf => {
                if q > 0.0 {
                    ExtReal::PosInf
                } else {
                    ExtReal::ZERO
                }
            }
            ExtReal::Finite(x) => {
                if x == 0.0 && q < 0.0 {
                    ExtReal::PosInf
                } else {
                    ExtReal::Finite(x.powf(q))
                }
            }
        }
    }

    /// The transport cost `ℓ^q / q`, with value `−∞` off the causal relation.
    pub fn pow_over_q(self, q: f64) -> ExtReal {
        match self.pow(q) {
            ExtReal::NegInf => ExtReal::NegInf,
            v => v.scale(1.0 / q),
        }
    }
}

impl From<ExtendedTime> for ExtReal {
    fn from(t: ExtendedTime) -> Self {
        t.0
    }
}

impl fmt::Display for ExtendedTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for ExtendedTime {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let v: ExtReal = s.parse()?;
        ExtendedTime::new(v).map_err(|e| e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ExtReal::*;
    const ZERO: ExtReal = ExtReal::ZERO;

    #[test]
    fn subtraction_conventions() {
        assert_eq!(PosInf - PosInf, PosInf);
        assert_eq!(NegInf - NegInf, PosInf);
        assert_eq!(PosInf - NegInf, PosInf);
        assert_eq!(NegInf - PosInf, NegInf);
        assert_eq!(Finite(3.0) - NegInf, PosInf);
        assert_eq!(Finite(3.0) - PosInf, NegInf);
        assert_eq!(Finite(3.0) - Finite(1.0), Finite(2.0));
    }

    #[test]
    fn addition_left_infinity_wins() {
        assert_eq!(NegInf + PosInf, NegInf);
        assert_eq!(PosInf + NegInf, PosInf);
        assert_eq!(Finite(1.0) + PosInf, PosInf);
        assert_eq!(PosInf + Finite(-7.0), PosInf);
    }

    #[test]
    fn zero_times_infinity_is_zero() {
        assert_eq!(PosInf.scale(0.0), ZERO);
        assert_eq!(NegInf.scale(0.0), ZERO);
        assert_eq!(PosInf.scale(-2.0), NegInf);
        assert_eq!(Finite(2.0).scale(0.5), Finite(1.0));
    }

    #[test]
    fn ordering_places_tags_at_the_ends() {
        assert!(NegInf < Finite(-1e300));
        assert!(Finite(1e300) < PosInf);
        assert_eq!(NegInf.max(Finite(0.0)), Finite(0.0));
        assert_eq!(PosInf.min(Finite(0.0)), Finite(0.0));
    }

    #[test]
    fn time_separation_rejects_negative_reals() {
        assert!(ExtendedTime::finite(-1.0).is_err());
        assert!(ExtendedTime::new(Finite(-0.5)).is_err());
        assert!(ExtendedTime::new(NegInf).is_ok());
        assert!("-inf".parse::<ExtendedTime>().unwrap() == ExtendedTime::NEG_INF);
        assert!("-2".parse::<ExtendedTime>().is_err());
    }

    #[test]
    fn power_conventions() {
        assert_eq!(ExtendedTime::ZERO.pow(-1.0), PosInf);
        assert_eq!(ExtendedTime::ZERO.pow(0.5), ZERO);
        assert_eq!(ExtendedTime::POS_INF.pow(-1.0), ZERO);
        assert_eq!(ExtendedTime::ZERO.pow_over_q(-1.0), NegInf);
        assert_eq!(ExtendedTime::finite(4.0).unwrap().pow_over_q(0.5), Finite(4.0));
        assert_eq!(ExtendedTime::NEG_INF.pow_over_q(0.5), NegInf);
    }

    #[test]
    fn display_round_trips() {
        for v in [NegInf, PosInf, Finite(0.1), Finite(-3.25e-300)] {
            let s = v.to_string();
            assert_eq!(s.parse::<ExtReal>().unwrap(), v);
        }
    }
}
