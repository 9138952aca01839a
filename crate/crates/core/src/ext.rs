//! Extended integers: the scalar domains of the calculus.
//!
//! [`ExtNat`] is `Z+ ∪ {∞}` with saturating infinity and checked finite
//! addition. [`ExtInt`] is `Z ∪ {−∞, +∞}`, used for belief degrees and
//! scalar utilities.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A non-negative integer or infinity. `Fin` sorts below `Inf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtNat {
    Fin(u64),
    Inf,
}

pub const INF: ExtNat = ExtNat::Inf;
pub const ZERO: ExtNat = ExtNat::Fin(0);

impl ExtNat {
    pub const fn new(v: u64) -> Self {
        ExtNat::Fin(v)
    }

    pub fn is_inf(self) -> bool {
        matches!(self, ExtNat::Inf)
    }

    pub fn is_finite(self) -> bool {
        !self.is_inf()
    }

    pub fn is_zero(self) -> bool {
        self == ZERO
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtNat::Fin(v) => Some(v),
            ExtNat::Inf => None,
        }
    }

    /// `∞ + c = ∞`; finite sums that overflow `u64` are an error.
    pub fn checked_add(self, rhs: ExtNat) -> Result<ExtNat> {
        match (self, rhs) {
            (ExtNat::Fin(a), ExtNat::Fin(b)) => a
                .checked_add(b)
                .map(ExtNat::Fin)
                .ok_or(Error::Overflow(a, b)),
            _ => Ok(ExtNat::Inf),
        }
    }

    /// Subtracts a finite amount. `∞ − c = ∞`. Returns `None` when the
    /// result would be negative or `rhs` is infinite.
    pub fn checked_sub(self, rhs: ExtNat) -> Option<ExtNat> {
        match (self, rhs) {
            (_, ExtNat::Inf) => None,
            (ExtNat::Inf, ExtNat::Fin(_)) => Some(ExtNat::Inf),
            (ExtNat::Fin(a), ExtNat::Fin(b)) => a.checked_sub(b).map(ExtNat::Fin),
        }
    }

    /// Minimum of an iterator; `∞` for an empty one (the min over `∅`).
    pub fn min_of<I: IntoIterator<Item = ExtNat>>(it: I) -> ExtNat {
        it.into_iter().min().unwrap_or(ExtNat::Inf)
    }
}

impl From<u64> for ExtNat {
    fn from(v: u64) -> Self {
        ExtNat::Fin(v)
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Fin(v) => write!(f, "{v}"),
            ExtNat::Inf => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtNat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(ExtNat::Inf);
        }
        s.parse::<u64>()
            .map(ExtNat::Fin)
            .map_err(|_| Error::OutOfRange(format!("`{s}` is not a non-negative integer or inf")))
    }
}

impl Serialize for ExtNat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtNat::Fin(v) => s.serialize_u64(*v),
            ExtNat::Inf => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtNat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = ExtNat;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a non-negative integer or \"inf\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<ExtNat, E> {
                Ok(ExtNat::Fin(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<ExtNat, E> {
                u64::try_from(v)
                    .map(ExtNat::Fin)
                    .map_err(|_| E::invalid_value(de::Unexpected::Signed(v), &self))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<ExtNat, E> {
                if v == "inf" {
                    Ok(ExtNat::Inf)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// An integer or one of the two infinities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtInt {
    NegInf,
    Fin(i64),
    PosInf,
}

impl ExtInt {
    pub fn neg(self) -> ExtInt {
        match self {
            ExtInt::NegInf => ExtInt::PosInf,
            ExtInt::PosInf => ExtInt::NegInf,
            // i64::MIN cannot arise from an ExtNat conversion.
            ExtInt::Fin(v) => ExtInt::Fin(-v),
        }
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            ExtInt::Fin(v) => Some(v),
            _ => None,
        }
    }

    /// `b − a` for two extended naturals where at most one is infinite.
    /// Returns `None` for `∞ − ∞` or a finite difference outside `i64`.
    pub fn difference(b: ExtNat, a: ExtNat) -> Option<ExtInt> {
        match (b, a) {
            (ExtNat::Inf, ExtNat::Inf) => None,
            (ExtNat::Inf, ExtNat::Fin(_)) => Some(ExtInt::PosInf),
            (ExtNat::Fin(_), ExtNat::Inf) => Some(ExtInt::NegInf),
            (ExtNat::Fin(b), ExtNat::Fin(a)) => {
                let d = i128::from(b) - i128::from(a);
                i64::try_from(d).ok().map(ExtInt::Fin)
            }
        }
    }
}

impl TryFrom<ExtNat> for ExtInt {
    type Error = Error;

    fn try_from(v: ExtNat) -> Result<Self> {
        match v {
            ExtNat::Inf => Ok(ExtInt::PosInf),
            ExtNat::Fin(v) => i64::try_from(v)
                .map(ExtInt::Fin)
                .map_err(|_| Error::OutOfRange(format!("{v} does not fit a signed integer"))),
        }
    }
}

impl PartialEq<i64> for ExtInt {
    fn eq(&self, other: &i64) -> bool {
        *self == ExtInt::Fin(*other)
    }
}

impl PartialOrd<i64> for ExtInt {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.cmp(&ExtInt::Fin(*other)))
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::NegInf => f.write_str("-inf"),
            ExtInt::PosInf => f.write_str("+inf"),
            ExtInt::Fin(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for ExtInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtInt::Fin(v) => s.serialize_i64(*v),
            ExtInt::PosInf => s.serialize_str("+inf"),
            ExtInt::NegInf => s.serialize_str("-inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = ExtInt;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer, \"+inf\" or \"-inf\"")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<ExtInt, E> {
                Ok(ExtInt::Fin(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<ExtInt, E> {
                i64::try_from(v)
                    .map(ExtInt::Fin)
                    .map_err(|_| E::invalid_value(de::Unexpected::Unsigned(v), &self))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<ExtInt, E> {
                match v {
                    "+inf" | "inf" => Ok(ExtInt::PosInf),
                    "-inf" => Ok(ExtInt::NegInf),
                    _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }
        }
        d.deserialize_any(V)
    }
}
