//! Points of the supported phase spaces.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::rational::{fmt_q, Q};
use crate::symbolic::Substitution;

/// Three-valued membership answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tri {
    True,
    False,
    Unknown,
}

impl Tri {
    pub fn and(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::False, _) | (_, Tri::False) => Tri::False,
            (Tri::True, Tri::True) => Tri::True,
            _ => Tri::Unknown,
        }
    }

    pub fn or(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::True, _) | (_, Tri::True) => Tri::True,
            (Tri::False, Tri::False) => Tri::False,
            _ => Tri::Unknown,
        }
    }
}

impl From<bool> for Tri {
    fn from(b: bool) -> Self {
        if b { Tri::True } else { Tri::False }
    }
}

/// A one-sided symbol sequence `s(0) s(1) s(2) ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Seq {
    /// `pre` followed by `period` repeated forever.
    Periodic { pre: Vec<u8>, period: Vec<u8> },
    /// Fixed point of a substitution starting with `seed`.
    Fixed { rule: Substitution, seed: u8, prefix: Arc<Vec<u8>> },
}

impl Seq {
    pub fn periodic(pre: Vec<u8>, period: Vec<u8>) -> Seq {
        assert!(!period.is_empty(), "period must be nonempty");
        Seq::Periodic { pre, period }
    }

    pub fn constant(a: u8) -> Seq {
        Seq::periodic(vec![], vec![a])
    }

    pub fn fixed_point(rule: Substitution, seed: u8) -> Seq {
        let prefix = Arc::new(rule.fixed_point_prefix(seed, 1 << 12));
        Seq::Fixed { rule, seed, prefix }
    }

    pub fn symbol(&self, k: u64) -> u8 {
        match self {
            Seq::Periodic { pre, period } => {
                if (k as usize) < pre.len() {
                    pre[k as usize]
                } else {
                    period[(k as usize - pre.len()) % period.len()]
                }
            }
            Seq::Fixed { rule, seed, prefix } => {
                if (k as usize) < prefix.len() {
                    prefix[k as usize]
                } else {
                    rule.fixed_point_symbol(*seed, k)
                }
            }
        }
    }

    /// `(start, period)` such that `s(k + period) = s(k)` for `k >= start`.
    pub fn eventual_period(&self) -> Option<(u64, u64)> {
        match self {
            Seq::Periodic { pre, period } => Some((pre.len() as u64, period.len() as u64)),
            Seq::Fixed { .. } => None,
        }
    }
}

/// A point of a full shift, one- or two-sided. Coordinate `i` reads
/// `right(i + shift)` for nonnegative indices and `left(-(i + shift) - 1)`
/// otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymbolicPoint {
    pub right: Seq,
    pub left: Option<Seq>,
    pub shift: i64,
}

impl SymbolicPoint {
    pub fn one_sided(right: Seq) -> Self {
        SymbolicPoint { right, left: None, shift: 0 }
    }

    pub fn two_sided(left: Seq, right: Seq) -> Self {
        SymbolicPoint { right, left: Some(left), shift: 0 }
    }

    pub fn symbol(&self, i: i64) -> u8 {
        let j = i + self.shift;
        if j >= 0 {
            self.right.symbol(j as u64)
        } else {
            match &self.left {
                Some(l) => l.symbol((-j - 1) as u64),
                None => self.right.symbol(0),
            }
        }
    }

    pub fn shifted(&self, n: i64) -> SymbolicPoint {
        SymbolicPoint { shift: self.shift + n, ..self.clone() }
    }

    pub fn window(&self, lo: i64, hi: i64) -> Vec<u8> {
        (lo..hi).map(|i| self.symbol(i)).collect()
    }

    /// Eventual period of the coordinates `i >= 0` as a function of `i`,
    /// valid for `i >= start`.
    pub fn eventual_period(&self) -> Option<(i64, i64)> {
        let (s, p) = self.right.eventual_period()?;
        Some(((s as i64 - self.shift).max(0), p as i64))
    }

    pub fn is_two_sided(&self) -> bool {
        self.left.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Point {
    /// A point of `[0,1]`, `[0,∞)` or of the circle `[0,1)`, known up to
    /// `error`.
    Real { value: Q, error: Q },
    Infinity,
    Symbolic(SymbolicPoint),
    Element(usize),
    Tuple(Vec<Point>),
}

impl Point {
    pub fn exact(value: Q) -> Point {
        Point::Real { value, error: Q::zero() }
    }

    pub fn approx(value: Q, error: Q) -> Point {
        Point::Real { value, error }
    }

    pub fn error(&self) -> Q {
        match self {
            Point::Real { error, .. } => error.clone(),
            Point::Tuple(ps) => ps.iter().map(Point::error).max().unwrap_or_else(Q::zero),
            _ => Q::zero(),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.error().is_zero()
    }

    pub fn value(&self) -> Option<&Q> {
        match self {
            Point::Real { value, .. } => Some(value),
            _ => None,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Real { value, error } if error.is_zero() => f.write_str(&fmt_q(value)),
            Point::Real { value, error } => write!(f, "{}+-{}", fmt_q(value), fmt_q(error)),
            Point::Infinity => f.write_str("inf"),
            Point::Symbolic(s) => {
                let w: String = s.window(0, 8).iter().map(|a| char::from(b'0' + a)).collect();
                if s.is_two_sided() {
                    let l: String = s.window(-4, 0).iter().map(|a| char::from(b'0' + a)).collect();
                    write!(f, "..{l}.{w}..")
                } else {
                    write!(f, "{w}..")
                }
            }
            Point::Element(i) => write!(f, "#{i}"),
            Point::Tuple(ps) => {
                let s: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
                write!(f, "({})", s.join(","))
            }
        }
    }
}
