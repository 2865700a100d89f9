//! Exact rationals and the extended value `+∞` used for valuations.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;
use serde::{Serialize, Serializer};

pub type Q = Rational64;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(n)
}

/// Smallest integer `>= x`.
pub fn ceil(x: Q) -> i64 {
    x.numer().div_ceil(x.denom())
}

/// Largest integer `<= x`.
pub fn floor(x: Q) -> i64 {
    x.numer().div_floor(x.denom())
}

pub fn format_q(x: Q) -> String {
    if *x.denom() == 1 {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// A rational or `+∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtQ {
    Finite(Q),
    Infinite,
}

impl ExtQ {
    pub fn finite(self) -> Option<Q> {
        match self {
            ExtQ::Finite(x) => Some(x),
            ExtQ::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtQ::Infinite)
    }

    pub fn add_q(self, d: Q) -> ExtQ {
        match self {
            ExtQ::Finite(x) => ExtQ::Finite(x + d),
            ExtQ::Infinite => ExtQ::Infinite,
        }
    }

    pub fn plus(self, other: ExtQ) -> ExtQ {
        match (self, other) {
            (ExtQ::Finite(a), ExtQ::Finite(b)) => ExtQ::Finite(a + b),
            _ => ExtQ::Infinite,
        }
    }

    pub fn min(self, other: ExtQ) -> ExtQ {
        if self <= other {
            self
        } else {
            other
        }
    }
}

impl PartialOrd for ExtQ {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtQ {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtQ::Finite(a), ExtQ::Finite(b)) => a.cmp(b),
            (ExtQ::Finite(_), ExtQ::Infinite) => Ordering::Less,
            (ExtQ::Infinite, ExtQ::Finite(_)) => Ordering::Greater,
            (ExtQ::Infinite, ExtQ::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtQ::Finite(x) => write!(f, "{}", format_q(*x)),
            ExtQ::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for ExtQ {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Serialize a rational as the string `n/d`.
pub fn ser_q<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_q(*x))
}

pub fn ser_q_vec<S: Serializer>(xs: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&format_q(*x))?;
    }
    seq.end()
}

/// `v_p(n)` for nonzero `n`.
pub fn vp_u64(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n > 0 && n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceil_floor() {
        assert_eq!(ceil(q(9, 4)), 3);
        assert_eq!(ceil(q(-9, 4)), -2);
        assert_eq!(floor(q(-9, 4)), -3);
        assert_eq!(ceil(qi(3)), 3);
    }

    #[test]
    fn ext_order() {
        assert!(ExtQ::Finite(qi(100)) < ExtQ::Infinite);
        assert_eq!(ExtQ::Infinite.add_q(qi(1)), ExtQ::Infinite);
    }
}
