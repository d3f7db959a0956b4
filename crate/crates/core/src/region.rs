//! Exact descriptions of subsets of phase space.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::point::{Point, Tri};
use crate::rational::{fmt_q, Q};

/// A rational number or `+∞` (the point at infinity of `[0, ∞]`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ext {
    Fin(Q),
    Inf,
}

impl Ext {
    pub fn fin(&self) -> &Q {
        match self {
            Ext::Fin(v) => v,
            Ext::Inf => panic!("expected a finite endpoint"),
        }
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, Ext::Inf)
    }

    pub fn add(&self, t: &Q) -> Ext {
        match self {
            Ext::Fin(v) => Ext::Fin(v + t),
            Ext::Inf => Ext::Inf,
        }
    }
}

impl From<Q> for Ext {
    fn from(v: Q) -> Self {
        Ext::Fin(v)
    }
}

impl Ord for Ext {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Ext::Fin(a), Ext::Fin(b)) => a.cmp(b),
            (Ext::Fin(_), Ext::Inf) => Ordering::Less,
            (Ext::Inf, Ext::Fin(_)) => Ordering::Greater,
            (Ext::Inf, Ext::Inf) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Ext {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::Fin(v) => f.write_str(&fmt_q(v)),
            Ext::Inf => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Ext,
    pub hi: Ext,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: Q, hi: Q, lo_closed: bool, hi_closed: bool) -> Self {
        Interval { lo: Ext::Fin(lo), hi: Ext::Fin(hi), lo_closed, hi_closed }
    }

    pub fn open(lo: Q, hi: Q) -> Self {
        Self::new(lo, hi, false, false)
    }

    pub fn closed(lo: Q, hi: Q) -> Self {
        Self::new(lo, hi, true, true)
    }

    pub fn point(x: Q) -> Self {
        Self::closed(x.clone(), x)
    }

    pub fn is_empty(&self) -> bool {
        match self.lo.cmp(&self.hi) {
            Ordering::Greater => true,
            Ordering::Equal => !(self.lo_closed && self.hi_closed),
            Ordering::Less => false,
        }
    }

    pub fn contains(&self, x: &Ext) -> bool {
        let above = match x.cmp(&self.lo) {
            Ordering::Greater => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Less => false,
        };
        let below = match x.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed,
            Ordering::Greater => false,
        };
        above && below
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            Ordering::Greater => (self.lo.clone(), self.lo_closed),
            Ordering::Less => (other.lo.clone(), other.lo_closed),
            Ordering::Equal => (self.lo.clone(), self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            Ordering::Less => (self.hi.clone(), self.hi_closed),
            Ordering::Greater => (other.hi.clone(), other.hi_closed),
            Ordering::Equal => (self.hi.clone(), self.hi_closed && other.hi_closed),
        };
        Interval { lo, hi, lo_closed, hi_closed }
    }

    /// Length of a finite interval.
    pub fn length(&self) -> Option<Q> {
        match (&self.lo, &self.hi) {
            (Ext::Fin(a), Ext::Fin(b)) => Some(b - a),
            _ => None,
        }
    }

    pub fn has_interior(&self) -> bool {
        self.lo < self.hi
    }

    pub fn shift(&self, t: &Q) -> Interval {
        Interval {
            lo: self.lo.add(t),
            hi: self.hi.add(t),
            lo_closed: self.lo_closed,
            hi_closed: self.hi_closed,
        }
    }

    /// A rational point of the interval (midpoint when bounded).
    pub fn sample(&self) -> Option<Q> {
        if self.is_empty() {
            return None;
        }
        match (&self.lo, &self.hi) {
            (Ext::Fin(a), Ext::Fin(b)) => Some((a + b) / crate::rational::qi(2)),
            (Ext::Fin(a), Ext::Inf) => Some(a + crate::rational::qi(1)),
            _ => None,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi && self.lo_closed && self.hi_closed {
            return write!(f, "{{{}}}", self.lo);
        }
        write!(
            f,
            "{}{},{}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// Canonical finite union of intervals: sorted, disjoint, nonempty parts,
/// and no two parts that could be merged.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntervalUnion {
    parts: Vec<Interval>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion { parts: Vec::new() }
    }

    pub fn single(iv: Interval) -> Self {
        Self::from_parts(vec![iv])
    }

    pub fn from_parts(mut parts: Vec<Interval>) -> Self {
        parts.retain(|p| !p.is_empty());
        parts.sort_by(|a, b| a.lo.cmp(&b.lo).then_with(|| b.lo_closed.cmp(&a.lo_closed)));
        let mut out: Vec<Interval> = Vec::with_capacity(parts.len());
        for p in parts {
            if let Some(last) = out.last_mut() {
                let touches = match p.lo.cmp(&last.hi) {
                    Ordering::Less => true,
                    Ordering::Equal => last.hi_closed || p.lo_closed,
                    Ordering::Greater => false,
                };
                if touches {
                    match p.hi.cmp(&last.hi) {
                        Ordering::Greater => {
                            last.hi = p.hi;
                            last.hi_closed = p.hi_closed;
                        }
                        Ordering::Equal => last.hi_closed |= p.hi_closed,
                        Ordering::Less => {}
                    }
                    continue;
                }
            }
            out.push(p);
        }
        IntervalUnion { parts: out }
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, x: &Ext) -> bool {
        self.parts.iter().any(|p| p.contains(x))
    }

    pub fn contains_q(&self, x: &Q) -> bool {
        self.contains(&Ext::Fin(x.clone()))
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().cloned());
        Self::from_parts(parts)
    }

    pub fn intersect(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut parts = Vec::new();
        for a in &self.parts {
            for b in &other.parts {
                let c = a.intersect(b);
                if !c.is_empty() {
                    parts.push(c);
                }
            }
        }
        Self::from_parts(parts)
    }

    pub fn intersects(&self, other: &IntervalUnion) -> bool {
        self.parts
            .iter()
            .any(|a| other.parts.iter().any(|b| !a.intersect(b).is_empty()))
    }

    pub fn is_subset(&self, other: &IntervalUnion) -> bool {
        &self.intersect(other) == self
    }

    /// Complement inside `universe`.
    pub fn complement_in(&self, universe: &Interval) -> IntervalUnion {
        let mut out = Vec::new();
        let mut cur_lo = universe.lo.clone();
        let mut cur_closed = universe.lo_closed;
        for p in self.intersect(&IntervalUnion::single(universe.clone())).parts {
            out.push(Interval {
                lo: cur_lo.clone(),
                hi: p.lo.clone(),
                lo_closed: cur_closed,
                hi_closed: !p.lo_closed,
            });
            cur_lo = p.hi.clone();
            cur_closed = !p.hi_closed;
        }
        out.push(Interval {
            lo: cur_lo,
            hi: universe.hi.clone(),
            lo_closed: cur_closed,
            hi_closed: universe.hi_closed,
        });
        Self::from_parts(out)
    }

    pub fn has_interior(&self) -> bool {
        self.parts.iter().any(Interval::has_interior)
    }

    pub fn shift(&self, t: &Q) -> IntervalUnion {
        Self::from_parts(self.parts.iter().map(|p| p.shift(t)).collect())
    }

    /// Shrinks every part by `r` on each side, leaving ends that sit on the
    /// seam points in `keep` untouched. Result ends are open.
    pub fn shrink(&self, r: &Q, keep: &[Q]) -> IntervalUnion {
        if r.is_zero() {
            return self.clone();
        }
        let parts = self
            .parts
            .iter()
            .map(|p| {
                let mut s = p.clone();
                if let Ext::Fin(a) = &p.lo {
                    if !keep.contains(a) {
                        s.lo = Ext::Fin(a + r);
                        s.lo_closed = false;
                    }
                }
                if let Ext::Fin(b) = &p.hi {
                    if !keep.contains(b) {
                        s.hi = Ext::Fin(b - r);
                        s.hi_closed = false;
                    }
                }
                s
            })
            .collect();
        Self::from_parts(parts)
    }

    /// Total length of the bounded parts.
    pub fn measure(&self) -> Option<Q> {
        let mut total = Q::zero();
        for p in &self.parts {
            total += p.length()?;
        }
        Some(total)
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("{}");
        }
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        f.write_str(&s.join("u"))
    }
}

/// `{x : x[offset + i] = word[i]}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cylinder {
    pub offset: i64,
    pub word: Vec<u8>,
}

impl Cylinder {
    pub fn new(offset: i64, word: Vec<u8>) -> Self {
        Cylinder { offset, word }
    }

    pub fn end(&self) -> i64 {
        self.offset + self.word.len() as i64
    }

    pub fn symbol_at(&self, i: i64) -> Option<u8> {
        if i >= self.offset && i < self.end() {
            Some(self.word[(i - self.offset) as usize])
        } else {
            None
        }
    }

    /// `self ⊆ other` as subsets of the full shift.
    pub fn is_within(&self, other: &Cylinder) -> bool {
        (other.offset..other.end()).all(|i| self.symbol_at(i) == other.symbol_at(i))
    }

    /// Constraints `(coordinate, symbol)`.
    pub fn constraints(&self) -> impl Iterator<Item = (i64, u8)> + '_ {
        self.word.iter().enumerate().map(move |(i, &s)| (self.offset + i as i64, s))
    }
}

impl fmt::Display for Cylinder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: String = self.word.iter().map(|s| char::from(b'0' + s)).collect();
        write!(f, "[{}]@{}", w, self.offset)
    }
}

/// Union of cylinders in which no cylinder is contained in another.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CylinderUnion {
    cylinders: Vec<Cylinder>,
}

impl CylinderUnion {
    pub fn from_cylinders(mut cyls: Vec<Cylinder>) -> Self {
        for c in cyls.iter_mut().filter(|c| c.word.is_empty()) {
            c.offset = 0;
        }
        cyls.sort();
        cyls.dedup();
        let keep: Vec<Cylinder> = cyls
            .iter()
            .enumerate()
            .filter(|(i, c)| {
                !cyls.iter().enumerate().any(|(j, d)| j != *i && c.is_within(d) && !(d.is_within(c) && j > *i))
            })
            .map(|(_, c)| c.clone())
            .collect();
        CylinderUnion { cylinders: keep }
    }

    pub fn single(c: Cylinder) -> Self {
        CylinderUnion { cylinders: vec![c] }
    }

    pub fn whole() -> Self {
        Self::single(Cylinder::new(0, vec![]))
    }

    pub fn cylinders(&self) -> &[Cylinder] {
        &self.cylinders
    }

    pub fn is_empty(&self) -> bool {
        self.cylinders.is_empty()
    }

    pub fn is_whole(&self) -> bool {
        self.cylinders.iter().any(|c| c.word.is_empty())
    }
}

impl fmt::Display for CylinderUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cylinders.is_empty() {
            return f.write_str("{}");
        }
        let s: Vec<String> = self.cylinders.iter().map(|c| c.to_string()).collect();
        f.write_str(&s.join("u"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    Intervals(IntervalUnion),
    Cylinders(CylinderUnion),
    Finite(Vec<usize>),
    /// Product box, one region per factor.
    Boxed(Vec<Region>),
}

impl Region {
    pub fn interval(iv: Interval) -> Region {
        Region::Intervals(IntervalUnion::single(iv))
    }

    pub fn open(lo: Q, hi: Q) -> Region {
        Region::interval(Interval::open(lo, hi))
    }

    pub fn cylinder(offset: i64, word: &[u8]) -> Region {
        Region::Cylinders(CylinderUnion::single(Cylinder::new(offset, word.to_vec())))
    }

    pub fn finite(mut idx: Vec<usize>) -> Region {
        idx.sort_unstable();
        idx.dedup();
        Region::Finite(idx)
    }

    pub fn is_empty(&self) -> bool {
        match self {
            Region::Intervals(u) => u.is_empty(),
            Region::Cylinders(c) => c.is_empty(),
            Region::Finite(v) => v.is_empty(),
            Region::Boxed(parts) => parts.iter().any(Region::is_empty),
        }
    }

    pub fn as_intervals(&self) -> Result<&IntervalUnion> {
        match self {
            Region::Intervals(u) => Ok(u),
            other => Err(Error::SpaceMismatch(format!("expected interval region, got {other}"))),
        }
    }

    pub fn as_cylinders(&self) -> Result<&CylinderUnion> {
        match self {
            Region::Cylinders(c) => Ok(c),
            other => Err(Error::SpaceMismatch(format!("expected cylinder region, got {other}"))),
        }
    }

    pub fn as_finite(&self) -> Result<&[usize]> {
        match self {
            Region::Finite(v) => Ok(v),
            other => Err(Error::SpaceMismatch(format!("expected finite region, got {other}"))),
        }
    }

    pub fn as_boxed(&self) -> Result<&[Region]> {
        match self {
            Region::Boxed(v) => Ok(v),
            other => Err(Error::SpaceMismatch(format!("expected product box, got {other}"))),
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::Intervals(u) => u.fmt(f),
            Region::Cylinders(c) => c.fmt(f),
            Region::Finite(v) => {
                let s: Vec<String> = v.iter().map(|i| format!("#{i}")).collect();
                write!(f, "{{{}}}", s.join(","))
            }
            Region::Boxed(parts) => {
                let s: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "<{}>", s.join(" x "))
            }
        }
    }
}

/// Uncanonicalised region parts as they come from a user or a config file.
#[derive(Clone, Debug)]
pub enum RawPart {
    Interval(Interval),
    Cylinder(Cylinder),
    Element(usize),
}

pub fn normalize_region(parts: &[RawPart]) -> Result<Region> {
    let Some(first) = parts.first() else {
        return Ok(Region::Intervals(IntervalUnion::empty()));
    };
    match first {
        RawPart::Interval(_) => {
            let ivs = parts
                .iter()
                .map(|p| match p {
                    RawPart::Interval(iv) => Ok(iv.clone()),
                    _ => Err(Error::MixedVariant),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Region::Intervals(IntervalUnion::from_parts(ivs)))
        }
        RawPart::Cylinder(_) => {
            let cs = parts
                .iter()
                .map(|p| match p {
                    RawPart::Cylinder(c) => Ok(c.clone()),
                    _ => Err(Error::MixedVariant),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Region::Cylinders(CylinderUnion::from_cylinders(cs)))
        }
        RawPart::Element(_) => {
            let es = parts
                .iter()
                .map(|p| match p {
                    RawPart::Element(e) => Ok(*e),
                    _ => Err(Error::MixedVariant),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Region::finite(es))
        }
    }
}

/// Membership with the point's error ball taken into account.
pub fn region_contains(r: &Region, p: &Point) -> Result<Tri> {
    match (r, p) {
        (Region::Intervals(u), Point::Real { value, error }) => {
            if error.is_zero() {
                return Ok(Tri::from(u.contains_q(value)));
            }
            let ball = Interval::closed(value - error, value + error);
            let ball = IntervalUnion::single(ball);
            if ball.is_subset(u) {
                Ok(Tri::True)
            } else if !ball.intersects(u) {
                Ok(Tri::False)
            } else {
                Ok(Tri::Unknown)
            }
        }
        (Region::Intervals(u), Point::Infinity) => Ok(Tri::from(u.contains(&Ext::Inf))),
        (Region::Cylinders(c), Point::Symbolic(s)) => Ok(Tri::from(
            c.cylinders().iter().any(|cyl| cyl.constraints().all(|(i, a)| s.symbol(i) == a)),
        )),
        (Region::Finite(v), Point::Element(e)) => Ok(Tri::from(v.binary_search(e).is_ok())),
        (Region::Boxed(rs), Point::Tuple(ps)) if rs.len() == ps.len() => {
            let mut acc = Tri::True;
            for (r, p) in rs.iter().zip(ps) {
                acc = acc.and(region_contains(r, p)?);
            }
            Ok(acc)
        }
        _ => Err(Error::SpaceMismatch(format!("region {r} vs point {p}"))),
    }
}
