//! Hitting-time sets and their Furstenberg-family classification.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_traits::Zero;

use crate::actions::{region_contains_circle, ElementKey};
use crate::error::{Error, Result};
use crate::interval_maps::{translation, PlMap, PIECE_CAP};
use crate::point::{Point, Seq, SymbolicPoint, Tri};
use crate::rational::{fmt_q, lcm_u64, qi, Q};
use crate::region::{Cylinder, Ext, IntervalUnion, Region};
use crate::space::basis;
use crate::symbolic::{ShiftKind, Subshift};
use crate::system::{power, ProductMode, SystemHandle, SystemKind};
use crate::verdict::{CheckBudget, Evidence, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TimeKind {
    Discrete,
    Continuous,
    Word,
}

impl fmt::Display for TimeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TimeKind::Discrete => "discrete",
            TimeKind::Continuous => "continuous",
            TimeKind::Word => "word",
        })
    }
}

/// Membership of `n >= start` is `pattern[(n - start) % period]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tail {
    pub start: u64,
    pub pattern: Vec<bool>,
}

impl Tail {
    pub fn period(&self) -> u64 {
        self.pattern.len() as u64
    }

    pub fn at(&self, n: u64) -> bool {
        debug_assert!(n >= self.start);
        self.pattern[((n - self.start) % self.period()) as usize]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Hits {
    Discrete(Vec<u64>),
    Continuous(IntervalUnion),
    /// Canonical keys of the semigroup elements that hit.
    Word(BTreeSet<String>),
}

/// Hitting times observed up to a horizon.
///
/// Discrete hits lie in `[1, horizon]`; word hits are elements reached by
/// words of length at most `horizon`; continuous hits are exact for all
/// `t > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimeWindowSet {
    pub hits: Hits,
    pub horizon: u64,
    /// No time in the window was skipped or left undecided.
    pub exact: bool,
    /// Times whose membership could not be decided; excluded from `hits`.
    pub ambiguous: usize,
    /// Exact periodic continuation of a discrete set beyond the horizon.
    pub tail: Option<Tail>,
    /// Word sets: every element of the semigroup was examined.
    pub closed: bool,
}

impl TimeWindowSet {
    /// Exact discrete set, with `hits` decided on `[1, horizon]`.
    pub fn discrete(mut hits: Vec<u64>, horizon: u64, tail: Option<Tail>) -> Self {
        hits.sort_unstable();
        hits.dedup();
        hits.retain(|&n| n >= 1 && n <= horizon);
        TimeWindowSet { hits: Hits::Discrete(hits), horizon, exact: true, ambiguous: 0, tail, closed: false }
    }

    /// Discrete set given by a membership predicate that repeats from `start`
    /// with period `period`; the predicate must be exact at every `n >= 1`.
    pub fn from_periodic_rule(horizon: u64, start: u64, period: u64, mut member: impl FnMut(u64) -> bool) -> Self {
        let start = start.max(1);
        let pattern: Vec<bool> = (start..start + period).map(&mut member).collect();
        let tail = Tail { start, pattern };
        let hits = (1..=horizon).filter(|&n| if n >= start { tail.at(n) } else { member(n) }).collect();
        Self::discrete(hits, horizon, Some(tail))
    }

    /// Exact continuous set `{t > 0 : ...}`.
    pub fn continuous(hits: IntervalUnion) -> Self {
        TimeWindowSet { hits: Hits::Continuous(hits), horizon: 0, exact: true, ambiguous: 0, tail: None, closed: true }
    }

    pub fn words(hits: BTreeSet<String>, horizon: u64, closed: bool, ambiguous: usize) -> Self {
        TimeWindowSet { hits: Hits::Word(hits), horizon, exact: ambiguous == 0, ambiguous, tail: None, closed }
    }

    pub fn kind(&self) -> TimeKind {
        match self.hits {
            Hits::Discrete(_) => TimeKind::Discrete,
            Hits::Continuous(_) => TimeKind::Continuous,
            Hits::Word(_) => TimeKind::Word,
        }
    }

    pub fn discrete_hits(&self) -> &[u64] {
        match &self.hits {
            Hits::Discrete(h) => h,
            _ => &[],
        }
    }

    pub fn is_empty_in_window(&self) -> bool {
        match &self.hits {
            Hits::Discrete(h) => h.is_empty(),
            Hits::Continuous(u) => u.is_empty(),
            Hits::Word(w) => w.is_empty(),
        }
    }

    /// Membership of a discrete time, when known.
    pub fn contains(&self, n: u64) -> Option<bool> {
        let Hits::Discrete(h) = &self.hits else { return None };
        if n >= 1 && n <= self.horizon && self.exact {
            return Some(h.binary_search(&n).is_ok());
        }
        match &self.tail {
            Some(t) if n >= t.start => Some(t.at(n)),
            _ => None,
        }
    }

    /// The set is known to be empty for every time, not only in the window.
    pub fn provably_empty(&self) -> bool {
        if !self.exact || !self.is_empty_in_window() {
            return false;
        }
        match &self.hits {
            Hits::Discrete(_) => match &self.tail {
                Some(t) => t.start <= self.horizon + 1 && t.pattern.iter().all(|b| !b),
                None => false,
            },
            Hits::Continuous(_) => true,
            Hits::Word(_) => self.closed,
        }
    }

    /// Membership is known for every time.
    pub fn is_complete(&self) -> bool {
        self.exact
            && match &self.hits {
                Hits::Discrete(_) => self.tail.as_ref().is_some_and(|t| t.start <= self.horizon + 1),
                Hits::Continuous(_) => true,
                Hits::Word(_) => self.closed,
            }
    }

    fn check_compatible(&self, other: &TimeWindowSet) -> Result<()> {
        if self.kind() != other.kind() || (self.kind() != TimeKind::Continuous && self.horizon != other.horizon) {
            return Err(Error::MixedKind);
        }
        Ok(())
    }

    fn combine(&self, other: &TimeWindowSet, op: impl Fn(bool, bool) -> bool) -> Result<TimeWindowSet> {
        self.check_compatible(other)?;
        let exact = self.exact && other.exact;
        let ambiguous = self.ambiguous + other.ambiguous;
        let mut out = match (&self.hits, &other.hits) {
            (Hits::Discrete(_), Hits::Discrete(_)) => {
                let tail = match (&self.tail, &other.tail) {
                    (Some(a), Some(b)) => {
                        let start = a.start.max(b.start);
                        let period = lcm_u64(a.period(), b.period());
                        Some(Tail { start, pattern: (start..start + period).map(|n| op(a.at(n), b.at(n))).collect() })
                    }
                    _ => None,
                };
                let hits = (1..=self.horizon)
                    .filter(|&n| {
                        op(
                            self.discrete_hits().binary_search(&n).is_ok(),
                            other.discrete_hits().binary_search(&n).is_ok(),
                        )
                    })
                    .collect();
                TimeWindowSet::discrete(hits, self.horizon, tail)
            }
            (Hits::Continuous(a), Hits::Continuous(b)) => {
                let u = if op(true, false) { a.union(b) } else { a.intersect(b) };
                TimeWindowSet::continuous(u)
            }
            (Hits::Word(a), Hits::Word(b)) => {
                let s: BTreeSet<String> =
                    if op(true, false) { a.union(b).cloned().collect() } else { a.intersection(b).cloned().collect() };
                TimeWindowSet::words(s, self.horizon, self.closed && other.closed, 0)
            }
            _ => return Err(Error::MixedKind),
        };
        out.exact = exact;
        out.ambiguous = ambiguous;
        Ok(out)
    }

    pub fn intersect(&self, other: &TimeWindowSet) -> Result<TimeWindowSet> {
        self.combine(other, |a, b| a && b)
    }

    pub fn union(&self, other: &TimeWindowSet) -> Result<TimeWindowSet> {
        self.combine(other, |a, b| a || b)
    }

    /// Restriction of a discrete set to a shorter horizon.
    pub fn truncate(&self, horizon: u64) -> TimeWindowSet {
        let mut out = self.clone();
        if let Hits::Discrete(h) = &mut out.hits {
            h.retain(|&n| n <= horizon);
            out.horizon = horizon.min(self.horizon);
        }
        out
    }
}

/// Compact `1,3-7,9` form of a sorted list.
pub fn fmt_runs(xs: &[u64]) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < xs.len() {
        let mut j = i;
        while j + 1 < xs.len() && xs[j + 1] == xs[j] + 1 {
            j += 1;
        }
        parts.push(if j == i { xs[i].to_string() } else { format!("{}-{}", xs[i], xs[j]) });
        i = j + 1;
    }
    parts.join(",")
}

impl fmt::Display for TimeWindowSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.hits {
            Hits::Discrete(h) => {
                write!(f, "{{{}}}@H={}", fmt_runs(h), self.horizon)?;
                if let Some(t) = &self.tail {
                    let pat: String = t.pattern.iter().map(|&b| if b { '1' } else { '0' }).collect();
                    write!(f, ";tail:{}+{}*", t.start, pat)?;
                }
                Ok(())
            }
            Hits::Continuous(u) => write!(f, "{u}"),
            Hits::Word(w) => {
                let shown: Vec<&str> = w.iter().take(8).map(String::as_str).collect();
                write!(f, "{{{}{}}}@L={}", shown.join(","), if w.len() > 8 { ",..." } else { "" }, self.horizon)
            }
        }?;
        if self.ambiguous > 0 {
            write!(f, ";ambiguous={}", self.ambiguous)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FamilyClass {
    Empty,
    Finite { count: usize },
    /// Continuous set contained in `(0, sup]`.
    Bounded { sup: Q },
    Syndetic { gap: Q },
    Thick { run: Q },
    Cofinite { threshold: Q },
    Unclassified,
}

impl fmt::Display for FamilyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyClass::Empty => f.write_str("empty"),
            FamilyClass::Finite { count } => write!(f, "finite({count})"),
            FamilyClass::Bounded { sup } => write!(f, "bounded({})", fmt_q(sup)),
            FamilyClass::Syndetic { gap } => write!(f, "syndetic({})", fmt_q(gap)),
            FamilyClass::Thick { run } => write!(f, "thick({})", fmt_q(run)),
            FamilyClass::Cofinite { threshold } => write!(f, "cofinite({})", fmt_q(threshold)),
            FamilyClass::Unclassified => f.write_str("unclassified"),
        }
    }
}

/// A family classification together with the window it was read from.
/// `horizon == None` means the classification holds for all times.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FamilyCertificate {
    pub class: FamilyClass,
    pub horizon: Option<u64>,
}

impl FamilyCertificate {
    pub fn syndetic(gap: u64, horizon: u64) -> Self {
        FamilyCertificate { class: FamilyClass::Syndetic { gap: qi(gap as i64) }, horizon: Some(horizon) }
    }

    pub fn all_time(class: FamilyClass) -> Self {
        FamilyCertificate { class, horizon: None }
    }

    pub fn is_all_time(&self) -> bool {
        self.horizon.is_none()
    }

    pub fn is_cofinite(&self) -> bool {
        matches!(self.class, FamilyClass::Cofinite { .. })
    }

    pub fn is_syndetic(&self) -> bool {
        matches!(self.class, FamilyClass::Syndetic { .. } | FamilyClass::Cofinite { .. })
    }

    pub fn is_thick(&self) -> bool {
        matches!(self.class, FamilyClass::Thick { .. } | FamilyClass::Cofinite { .. })
    }

    pub fn threshold(&self) -> Option<&Q> {
        match &self.class {
            FamilyClass::Cofinite { threshold } => Some(threshold),
            _ => None,
        }
    }
}

impl fmt::Display for FamilyCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.horizon {
            None => write!(f, "{}@all", self.class),
            Some(h) => write!(f, "{}@H={h}", self.class),
        }
    }
}

fn longest_run(hits: &[u64]) -> u64 {
    let mut best = 0;
    let mut cur = 0;
    let mut prev = None;
    for &n in hits {
        cur = if prev == Some(n.wrapping_sub(1)) { cur + 1 } else { 1 };
        best = best.max(cur);
        prev = Some(n);
    }
    best
}

/// Largest distance between consecutive hits, counting `0` and `end` as
/// hits.
fn max_gap(hits: &[u64], end: u64) -> u64 {
    let mut prev = 0;
    let mut g = 0;
    for &n in hits.iter().chain(std::iter::once(&end)) {
        g = g.max(n - prev);
        prev = n;
    }
    g
}

fn classify_all_time(tws: &TimeWindowSet, tail: &Tail) -> FamilyCertificate {
    let member = |n: u64| tws.contains(n).unwrap_or(false);
    let cls = if tail.pattern.iter().all(|b| !b) {
        let hits: Vec<u64> = (1..tail.start).filter(|&n| member(n)).collect();
        if hits.is_empty() { FamilyClass::Empty } else { FamilyClass::Finite { count: hits.len() } }
    } else if tail.pattern.iter().all(|&b| b) {
        let mut n = tail.start;
        while n > 1 && member(n - 1) {
            n -= 1;
        }
        FamilyClass::Cofinite { threshold: qi(n as i64) }
    } else {
        let end = tail.start + 2 * tail.period();
        let hits: Vec<u64> = (1..end).filter(|&n| member(n)).collect();
        // a later hit exists at distance at most one period past the window
        let next = (end..end + tail.period()).find(|&n| member(n)).unwrap();
        FamilyClass::Syndetic { gap: qi(max_gap(&hits, next) as i64) }
    };
    FamilyCertificate::all_time(cls)
}

/// Strongest family class whose window definition the set satisfies.
///
/// Sets with an exact periodic tail are classified for all times. Otherwise
/// the classes are read off `[1, H]`: cofinite needs a final run starting at
/// or before `H/2`, thick a run of length at least `H/4`, syndetic all gaps
/// at most `H/4`, finite no hit in the upper half of the window.
pub fn classify(tws: &TimeWindowSet) -> FamilyCertificate {
    let h = tws.horizon;
    match &tws.hits {
        Hits::Discrete(hits) => {
            if tws.ambiguous > 0 {
                return FamilyCertificate { class: FamilyClass::Unclassified, horizon: Some(h) };
            }
            if let Some(t) = &tws.tail {
                if tws.is_complete() {
                    return classify_all_time(tws, t);
                }
            }
            let at = |class| FamilyCertificate { class, horizon: Some(h) };
            if hits.is_empty() {
                return at(FamilyClass::Empty);
            }
            let mut start = h + 1;
            while start > 1 && hits.binary_search(&(start - 1)).is_ok() {
                start -= 1;
            }
            if start <= h && 2 * start <= h {
                return at(FamilyClass::Cofinite { threshold: qi(start as i64) });
            }
            let run = longest_run(hits);
            if run >= 2 && 4 * run >= h {
                return at(FamilyClass::Thick { run: qi(run as i64) });
            }
            let gap = max_gap(hits, h + 1);
            if 4 * gap <= h {
                return at(FamilyClass::Syndetic { gap: qi(gap as i64) });
            }
            if 2 * hits.last().unwrap() <= h {
                return at(FamilyClass::Finite { count: hits.len() });
            }
            at(FamilyClass::Unclassified)
        }
        Hits::Continuous(u) => {
            let cls = match u.parts().last() {
                None => FamilyClass::Empty,
                Some(last) if last.hi.is_inf() => {
                    let lo = last.lo.fin().clone();
                    FamilyClass::Cofinite { threshold: lo }
                }
                Some(last) => FamilyClass::Bounded { sup: last.hi.fin().clone() },
            };
            FamilyCertificate::all_time(cls)
        }
        Hits::Word(w) => {
            let cls = if w.is_empty() { FamilyClass::Empty } else { FamilyClass::Finite { count: w.len() } };
            FamilyCertificate { class: cls, horizon: if tws.closed && tws.exact { None } else { Some(h) } }
        }
    }
}

/// Finite-intersection test over labelled hitting sets: every pair, and a
/// deterministic sample of triples and quadruples, must meet.
pub fn filter_check(collection: &[(String, TimeWindowSet)]) -> Result<Verdict> {
    if let Some((_, first)) = collection.first() {
        for (_, t) in collection {
            first.check_compatible(t)?;
        }
    }
    let n = collection.len();
    let mut undecided = None;
    let mut tested = 0usize;
    let mut test = |idx: &[usize], undecided: &mut Option<String>| -> Result<Option<Verdict>> {
        let mut acc = collection[idx[0]].1.clone();
        for &i in &idx[1..] {
            acc = acc.intersect(&collection[i].1)?;
        }
        tested += 1;
        if acc.is_empty_in_window() {
            let names: Vec<&str> = idx.iter().map(|&i| collection[i].0.as_str()).collect();
            if acc.provably_empty() {
                return Ok(Some(Verdict::fails(Evidence::EmptyPair {
                    from: names[0].to_string(),
                    to: names[1..].join("&"),
                    proof: format!("intersection empty for all times ({})", acc),
                })));
            }
            undecided.get_or_insert_with(|| format!("{} empty within window", names.join("&")));
        }
        Ok(None)
    };
    for i in 0..n {
        for j in i..n {
            if let Some(v) = test(&[i, j], &mut undecided)? {
                return Ok(v);
            }
        }
    }
    // deterministic stride sample of higher-order intersections
    let stride = (n / 7).max(1);
    for k in [3usize, 4] {
        if n < k {
            continue;
        }
        let mut count = 0;
        let mut a = 0;
        while a + (k - 1) * stride < n && count < 64 {
            let idx: Vec<usize> = (0..k).map(|m| (a + m * stride * (m + 1)) % n).collect();
            if let Some(v) = test(&idx, &mut undecided)? {
                return Ok(v);
            }
            a += 1;
            count += 1;
        }
    }
    Ok(match undecided {
        Some(msg) => Verdict::undetermined(msg),
        None => Verdict::holds(Evidence::Certificate(format!("{tested} intersections nonempty over {n} sets"))),
    })
}

/// Upper endpoint of a continuous hit set, if bounded.
pub fn continuous_sup(u: &IntervalUnion) -> Option<Ext> {
    u.parts().last().map(|p| p.hi.clone())
}


/// Images up to the horizon, and `(start, period)` once they cycle.
type SetOrbit = (Vec<IntervalUnion>, Option<(u64, u64)>);

fn pl_orbit_of_sets(f: &PlMap, u: &IntervalUnion, h: u64) -> Result<SetOrbit> {
    let mut seen: HashMap<IntervalUnion, u64> = HashMap::new();
    let mut imgs = vec![f.image(u, 0)?];
    seen.insert(imgs[0].clone(), 0);
    for n in 1..=h {
        let next = f.image_capped(&imgs[n as usize - 1], 1, PIECE_CAP)?;
        if let Some(&m) = seen.get(&next) {
            return Ok((imgs, Some((m, n - m))));
        }
        seen.insert(next.clone(), n);
        imgs.push(next);
    }
    Ok((imgs, None))
}

/// Index into an eventually periodic sequence given by its first values.
fn periodic_index(len: u64, rep: Option<(u64, u64)>, n: u64) -> u64 {
    match rep {
        Some((m, p)) if n >= len => m + (n - m) % p,
        _ => n,
    }
}

fn tri_times(h: u64, rep: Option<(u64, u64)>, len: u64, member: impl Fn(u64) -> Tri) -> TimeWindowSet {
    let mut hits = Vec::new();
    let mut ambiguous = 0;
    for n in 1..=h {
        match member(periodic_index(len, rep, n)) {
            Tri::True => hits.push(n),
            Tri::Unknown => ambiguous += 1,
            Tri::False => {}
        }
    }
    let tail = match rep {
        Some((m, p)) if ambiguous == 0 => {
            let start = m.max(1);
            let pattern = (start..start + p).map(|n| member(periodic_index(len, rep, n)) == Tri::True).collect();
            Some(Tail { start, pattern })
        }
        _ => None,
    };
    let mut t = TimeWindowSet::discrete(hits, h, tail);
    t.ambiguous = ambiguous;
    t.exact = ambiguous == 0;
    t
}

fn pl_point_orbit(f: &PlMap, x: &Q, h: u64) -> (Vec<Q>, Option<(u64, u64)>) {
    let mut seen: HashMap<Q, u64> = HashMap::new();
    let mut pts = vec![x.clone()];
    seen.insert(x.clone(), 0);
    for n in 1..=h {
        let y = f.eval(&pts[n as usize - 1]);
        if let Some(&m) = seen.get(&y) {
            return (pts, Some((m, n - m)));
        }
        seen.insert(y.clone(), n);
        pts.push(y);
    }
    (pts, None)
}

fn pl_contains(u: &IntervalUnion, x: &Point) -> Tri {
    region_contains_circle(&Region::Intervals(u.clone()), x)
}

fn cylinder_constraints(c: &Cylinder, shift: i64) -> impl Iterator<Item = (i64, u8)> + '_ {
    c.constraints().map(move |(i, a)| (i + shift, a))
}

/// `N(u, v)` for two cylinders of a subshift.
fn shift_pair(s: &Subshift, u: &Cylinder, v: &Cylinder, h: u64) -> TimeWindowSet {
    match &s.kind {
        ShiftKind::Substitution { .. } => substitution_pair(s, u, v, h),
        _ => {
            let (ps, pp) = s.power_profile().expect("full shifts and SFTs have power profiles");
            let start = (ps as i64 + u.offset + u.word.len() as i64 - 1 - v.offset).max(1) as u64;
            TimeWindowSet::from_periodic_rule(h, start, pp, |n| {
                let cons: Vec<(i64, u8)> =
                    cylinder_constraints(u, 0).chain(cylinder_constraints(v, n as i64)).collect();
                s.admits(&cons)
            })
        }
    }
}

fn occurrence_origins(r: &[u8], c: &Cylinder) -> Vec<i64> {
    if c.word.len() > r.len() {
        return vec![];
    }
    r.windows(c.word.len()).enumerate().filter(|(_, w)| *w == c.word.as_slice()).map(|(p, _)| p as i64 - c.offset).collect()
}

/// Substitution subshifts: differences of occurrence origins in a word that
/// contains every factor of the needed length.
fn substitution_pair(s: &Subshift, u: &Cylinder, v: &Cylinder, h: u64) -> TimeWindowSet {
    if u.word.is_empty() || v.word.is_empty() {
        let other = if u.word.is_empty() { v } else { u };
        let ok = s.contains_word(&other.word);
        return TimeWindowSet::discrete(if ok { (1..=h).collect() } else { vec![] }, h, None);
    }
    let span = h as i64 + (u.word.len() + v.word.len()) as i64 + u.offset.abs() + v.offset.abs();
    let r = s.reference(span as usize);
    let ou = occurrence_origins(&r, u);
    let ov = occurrence_origins(&r, v);
    let mut mark = vec![false; h as usize + 1];
    for a in &ou {
        let lo = ov.partition_point(|b| *b <= *a);
        for b in &ov[lo..] {
            let n = b - a;
            if n > h as i64 {
                break;
            }
            mark[n as usize] = true;
        }
    }
    TimeWindowSet::discrete((1..=h).filter(|&n| mark[n as usize]).collect(), h, None)
}

fn seq_profile(s: &Seq) -> Option<(i64, i64)> {
    s.eventual_period().map(|(a, b)| (a as i64, b as i64))
}

fn shift_pair_to_point(s: &Subshift, u: &Cylinder, x: &SymbolicPoint, h: u64) -> Result<TimeWindowSet> {
    if s.two_sided {
        let Some(left) = &x.left else {
            return Err(Error::SpaceMismatch("two-sided shift needs a two-sided point".into()));
        };
        let member = |n: u64| c_matches(u, |i| x.symbol(i - n as i64));
        return Ok(match seq_profile(left) {
            Some((sl, pl)) => {
                let start = (u.offset + u.word.len() as i64 + x.shift + sl).max(1) as u64;
                TimeWindowSet::from_periodic_rule(h, start, pl as u64, member)
            }
            None => TimeWindowSet::discrete((1..=h).filter(|&n| member(n)).collect(), h, None),
        });
    }
    if matches!(s.kind, ShiftKind::Substitution { .. }) {
        return Err(Error::Unsupported("N(U,x) in one-sided substitution subshifts".into()));
    }
    let (ps, pp) = s.power_profile().unwrap();
    let x0 = x.symbol(0);
    let member = |n: u64| {
        let n = n as i64;
        let mut cons: Vec<(i64, u8)> = Vec::new();
        for (i, a) in u.constraints() {
            if i >= n {
                if x.symbol(i - n) != a {
                    return false;
                }
            } else {
                cons.push((i, a));
            }
        }
        cons.push((n, x0));
        s.admits(&cons)
    };
    let start = (ps as i64 + u.offset + u.word.len() as i64 - 1).max(1) as u64;
    Ok(TimeWindowSet::from_periodic_rule(h, start, pp, member))
}

fn c_matches(c: &Cylinder, sym: impl Fn(i64) -> u8) -> bool {
    c.constraints().all(|(i, a)| sym(i) == a)
}

fn shift_point_to_pair(s: &Subshift, x: &SymbolicPoint, v: &Cylinder, h: u64) -> TimeWindowSet {
    let _ = s;
    let member = |n: u64| c_matches(v, |i| x.symbol(i + n as i64));
    match seq_profile(&x.right) {
        Some((sr, pr)) => {
            let start = (sr - v.offset - x.shift).max(1) as u64;
            TimeWindowSet::from_periodic_rule(h, start, pr as u64, member)
        }
        None => TimeWindowSet::discrete((1..=h).filter(|&n| member(n)).collect(), h, None),
    }
}

fn union_all(sets: Vec<TimeWindowSet>, empty: TimeWindowSet) -> Result<TimeWindowSet> {
    let mut acc = empty;
    for t in sets {
        acc = acc.union(&t)?;
    }
    Ok(acc)
}

fn empty_discrete(h: u64) -> TimeWindowSet {
    TimeWindowSet::discrete(vec![], h, Some(Tail { start: 1, pattern: vec![false] }))
}

fn key_set(keys: impl IntoIterator<Item = ElementKey>) -> BTreeSet<String> {
    keys.into_iter().map(|k| k.to_string()).collect()
}

fn word_set(results: Vec<(ElementKey, Tri)>, len: usize, closed: bool) -> TimeWindowSet {
    let ambiguous = results.iter().filter(|(_, t)| *t == Tri::Unknown).count();
    let hits = key_set(results.into_iter().filter(|(_, t)| *t == Tri::True).map(|(k, _)| k));
    TimeWindowSet::words(hits, len as u64, closed, ambiguous)
}

fn independent(sets: Vec<TimeWindowSet>, len: u64) -> Result<TimeWindowSet> {
    let mut keys: Vec<String> = vec![String::new()];
    let mut closed = true;
    let mut ambiguous = 0;
    for t in &sets {
        let comp: Vec<String> = match &t.hits {
            Hits::Discrete(h) => h.iter().map(|n| n.to_string()).collect(),
            Hits::Word(w) => w.iter().cloned().collect(),
            Hits::Continuous(_) => return Err(Error::Unsupported("independent products of semiflows".into())),
        };
        closed &= t.is_complete();
        ambiguous += t.ambiguous;
        keys = keys
            .iter()
            .flat_map(|k| comp.iter().map(move |c| if k.is_empty() { c.clone() } else { format!("{k}|{c}") }))
            .collect();
        if keys.len() > crate::actions::ELEMENT_CAP {
            return Err(Error::BudgetExceeded(keys.len()));
        }
    }
    Ok(TimeWindowSet::words(keys.into_iter().collect(), len, closed, ambiguous))
}

/// `N(U,V) = {t : t(U) ∩ V ≠ ∅}` within the budget's horizon (cascades),
/// exactly (the translation semiflow) or within the word length (actions).
pub fn hitting_uv(sys: &SystemHandle, u: &Region, v: &Region, b: &CheckBudget) -> Result<TimeWindowSet> {
    let h = b.horizon;
    match (&sys.kind, u, v) {
        (SystemKind::Pl(f), Region::Intervals(ru), Region::Intervals(rv)) => {
            let (imgs, rep) = pl_orbit_of_sets(f, ru, h)?;
            let len = imgs.len() as u64;
            Ok(tri_times(h, rep, len, |n| Tri::from(imgs[n as usize].intersects(rv))))
        }
        (SystemKind::Translation, Region::Intervals(ru), Region::Intervals(rv)) => {
            Ok(TimeWindowSet::continuous(translation::hitting(ru, rv)))
        }
        (SystemKind::Shift(s), Region::Cylinders(cu), Region::Cylinders(cv)) => {
            let mut sets = Vec::new();
            for a in cu.cylinders() {
                for c in cv.cylinders() {
                    sets.push(shift_pair(s, a, c, h));
                }
            }
            union_all(sets, empty_discrete(h))
        }
        (SystemKind::Action(a), _, _) => {
            let (imgs, closed) = a.region_images(u, b.word_len, &b.epsilon)?;
            Ok(word_set(imgs.into_iter().map(|(k, bd)| (k, bd.meets(v))).collect(), b.word_len, closed))
        }
        (SystemKind::Product { parts, mode }, Region::Boxed(us), Region::Boxed(vs)) if us.len() == parts.len() && vs.len() == parts.len() => {
            let sets: Vec<TimeWindowSet> =
                parts.iter().zip(us.iter().zip(vs)).map(|(p, (u, v))| hitting_uv(p, u, v, b)).collect::<Result<_>>()?;
            combine_product(sets, *mode, b)
        }
        _ => Err(Error::SpaceMismatch(format!("regions {u} and {v} on {}", sys.space()))),
    }
}

fn combine_product(sets: Vec<TimeWindowSet>, mode: ProductMode, b: &CheckBudget) -> Result<TimeWindowSet> {
    match mode {
        ProductMode::Diagonal => {
            let mut it = sets.into_iter();
            let mut acc = it.next().unwrap();
            for t in it {
                acc = acc.intersect(&t)?;
            }
            Ok(acc)
        }
        ProductMode::Independent => independent(sets, b.horizon.max(b.word_len as u64)),
    }
}

/// [`hitting_uv`] for one source region and many targets, sharing the
/// forward images of `u`.
pub fn hitting_uv_many(sys: &SystemHandle, u: &Region, vs: &[Region], b: &CheckBudget) -> Result<Vec<TimeWindowSet>> {
    match (&sys.kind, u) {
        (SystemKind::Pl(f), Region::Intervals(ru)) => {
            let (imgs, rep) = pl_orbit_of_sets(f, ru, b.horizon)?;
            let len = imgs.len() as u64;
            vs.iter()
                .map(|v| {
                    let rv = v.as_intervals()?;
                    Ok(tri_times(b.horizon, rep, len, |n| Tri::from(imgs[n as usize].intersects(rv))))
                })
                .collect()
        }
        (SystemKind::Action(a), _) => {
            let (imgs, closed) = a.region_images(u, b.word_len, &b.epsilon)?;
            Ok(vs
                .iter()
                .map(|v| word_set(imgs.iter().map(|(k, bd)| (k.clone(), bd.meets(v))).collect(), b.word_len, closed))
                .collect())
        }
        _ => vs.iter().map(|v| hitting_uv(sys, u, v, b)).collect(),
    }
}

/// [`hitting_ux`] for one region and many points.
pub fn hitting_ux_many(sys: &SystemHandle, u: &Region, xs: &[Point], b: &CheckBudget) -> Result<Vec<TimeWindowSet>> {
    match (&sys.kind, u) {
        (SystemKind::Pl(f), Region::Intervals(ru)) => {
            let (imgs, rep) = pl_orbit_of_sets(f, ru, b.horizon)?;
            let len = imgs.len() as u64;
            Ok(xs.iter().map(|x| tri_times(b.horizon, rep, len, |n| pl_contains(&imgs[n as usize], x))).collect())
        }
        (SystemKind::Action(a), _) => {
            let (imgs, closed) = a.region_images(u, b.word_len, &b.epsilon)?;
            let mut table: Vec<Vec<(ElementKey, Tri)>> = vec![Vec::with_capacity(imgs.len()); xs.len()];
            match exact_sorted(xs) {
                Some(sorted) => {
                    for (k, bd) in &imgs {
                        let mut cells = vec![Tri::False; xs.len()];
                        for i in candidates(&bd.outer, &sorted) {
                            cells[i] = bd.contains(&xs[i]);
                        }
                        for (row, t) in table.iter_mut().zip(cells) {
                            row.push((k.clone(), t));
                        }
                    }
                }
                None => {
                    for (k, bd) in &imgs {
                        for (row, x) in table.iter_mut().zip(xs) {
                            row.push((k.clone(), bd.contains(x)));
                        }
                    }
                }
            }
            Ok(table.into_iter().map(|row| word_set(row, b.word_len, closed)).collect())
        }
        _ => xs.iter().map(|x| hitting_ux(sys, u, x, b)).collect(),
    }
}

/// Values of exact real points with their indices, sorted; `None` if some
/// point is not an exact real.
fn exact_sorted(xs: &[Point]) -> Option<Vec<(Q, usize)>> {
    let mut v: Vec<(Q, usize)> = xs
        .iter()
        .enumerate()
        .map(|(i, x)| match x {
            Point::Real { value, error } if error.is_zero() => Some((value.clone(), i)),
            _ => None,
        })
        .collect::<Option<_>>()?;
    v.sort();
    Some(v)
}

/// Indices of sorted points lying in the interval parts of `r`.
fn candidates<'a>(r: &'a Region, sorted: &'a [(Q, usize)]) -> impl Iterator<Item = usize> + 'a {
    let parts = match r {
        Region::Intervals(u) => u.parts(),
        _ => &[],
    };
    parts.iter().flat_map(move |part| {
        let from = match &part.lo {
            Ext::Fin(lo) => sorted.partition_point(|(v, _)| v < lo),
            Ext::Inf => sorted.len(),
        };
        sorted[from..]
            .iter()
            .take_while(move |(v, _)| match &part.hi {
                Ext::Fin(hi) => v <= hi,
                Ext::Inf => true,
            })
            .map(|(_, i)| *i)
    })
}

/// `N(U,x) = {t : x ∈ t(U)}`.
pub fn hitting_ux(sys: &SystemHandle, u: &Region, x: &Point, b: &CheckBudget) -> Result<TimeWindowSet> {
    let h = b.horizon;
    match (&sys.kind, u, x) {
        (SystemKind::Pl(f), Region::Intervals(ru), Point::Real { .. }) => {
            let (imgs, rep) = pl_orbit_of_sets(f, ru, h)?;
            let len = imgs.len() as u64;
            Ok(tri_times(h, rep, len, |n| pl_contains(&imgs[n as usize], x)))
        }
        (SystemKind::Translation, Region::Intervals(ru), _) => {
            let e = point_ext(x)?;
            Ok(TimeWindowSet::continuous(translation::hitting_to_point(ru, &e)))
        }
        (SystemKind::Shift(s), Region::Cylinders(cu), Point::Symbolic(p)) => {
            let sets = cu.cylinders().iter().map(|c| shift_pair_to_point(s, c, p, h)).collect::<Result<Vec<_>>>()?;
            union_all(sets, empty_discrete(h))
        }
        (SystemKind::Action(a), _, _) => {
            let (imgs, closed) = a.region_images(u, b.word_len, &b.epsilon)?;
            Ok(word_set(imgs.into_iter().map(|(k, bd)| (k, bd.contains(x))).collect(), b.word_len, closed))
        }
        (SystemKind::Product { parts, mode }, Region::Boxed(us), Point::Tuple(xs)) if us.len() == parts.len() && xs.len() == parts.len() => {
            let sets: Vec<TimeWindowSet> =
                parts.iter().zip(us.iter().zip(xs)).map(|(p, (u, x))| hitting_ux(p, u, x, b)).collect::<Result<_>>()?;
            combine_product(sets, *mode, b)
        }
        _ => Err(Error::SpaceMismatch(format!("region {u} and point {x} on {}", sys.space()))),
    }
}

/// `N(x,V) = {t : t(x) ∈ V}`.
pub fn hitting_xv(sys: &SystemHandle, x: &Point, v: &Region, b: &CheckBudget) -> Result<TimeWindowSet> {
    let h = b.horizon;
    match (&sys.kind, x, v) {
        (SystemKind::Pl(f), Point::Real { value, error }, Region::Intervals(rv)) => {
            if !error.is_zero() {
                return Err(Error::Unsupported("orbits of approximate points under PL maps".into()));
            }
            let (pts, rep) = pl_point_orbit(f, value, h);
            let len = pts.len() as u64;
            Ok(tri_times(h, rep, len, |n| Tri::from(rv.contains_q(&pts[n as usize]))))
        }
        (SystemKind::Translation, _, Region::Intervals(rv)) => {
            let e = point_ext(x)?;
            Ok(TimeWindowSet::continuous(translation::hitting_from_point(&e, rv)))
        }
        (SystemKind::Shift(s), Point::Symbolic(p), Region::Cylinders(cv)) => {
            let sets = cv.cylinders().iter().map(|c| shift_point_to_pair(s, p, c, h)).collect();
            union_all(sets, empty_discrete(h))
        }
        (SystemKind::Action(a), _, _) => {
            let (pts, closed) = a.point_images(x, b.word_len, &b.epsilon)?;
            Ok(word_set(pts.into_iter().map(|(k, p)| (k, region_contains_circle(v, &p))).collect(), b.word_len, closed))
        }
        (SystemKind::Product { parts, mode }, Point::Tuple(xs), Region::Boxed(vs)) if vs.len() == parts.len() && xs.len() == parts.len() => {
            let sets: Vec<TimeWindowSet> =
                parts.iter().zip(xs.iter().zip(vs)).map(|(p, (x, v))| hitting_xv(p, x, v, b)).collect::<Result<_>>()?;
            combine_product(sets, *mode, b)
        }
        _ => Err(Error::SpaceMismatch(format!("point {x} and region {v} on {}", sys.space()))),
    }
}

fn point_ext(x: &Point) -> Result<Ext> {
    match x {
        Point::Infinity => Ok(Ext::Inf),
        Point::Real { value, error } if error.is_zero() => Ok(Ext::Fin(value.clone())),
        _ => Err(Error::SpaceMismatch(format!("point {x} on [0,inf]"))),
    }
}

/// Direct test of `t(U) ∩ V ≠ ∅` at one discrete time, bypassing the
/// periodic-tail machinery of [`hitting_uv`].
pub fn meets_at(sys: &SystemHandle, u: &Region, v: &Region, n: u64) -> Result<bool> {
    match (&sys.kind, u, v) {
        (SystemKind::Pl(f), Region::Intervals(ru), Region::Intervals(rv)) => Ok(f.image(ru, n)?.intersects(rv)),
        (SystemKind::Shift(s), Region::Cylinders(cu), Region::Cylinders(cv)) => Ok(cu.cylinders().iter().any(|a| {
            cv.cylinders().iter().any(|c| {
                let cons: Vec<(i64, u8)> = cylinder_constraints(a, 0).chain(cylinder_constraints(c, n as i64)).collect();
                s.admits(&cons)
            })
        })),
        (SystemKind::Product { parts, mode: ProductMode::Diagonal }, Region::Boxed(us), Region::Boxed(vs)) => {
            for (p, (u, v)) in parts.iter().zip(us.iter().zip(vs)) {
                if !meets_at(p, u, v, n)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        _ => Err(Error::Unsupported(format!("direct images on {}", sys.space()))),
    }
}

/// Checks `N(U1×V1, U2×V2) = N(U1,U2) ∩ N(V1,V2)` on the diagonal square of
/// `sys`: the left side by direct joint images at every time, the right side
/// from the hitting engine.
pub fn product_identity_audit(
    sys: &SystemHandle,
    u1: &Region,
    v1: &Region,
    u2: &Region,
    v2: &Region,
    b: &CheckBudget,
) -> Result<Verdict> {
    let sq = power(sys, 2)?;
    let a = Region::Boxed(vec![u1.clone(), v1.clone()]);
    let c = Region::Boxed(vec![u2.clone(), v2.clone()]);
    let engine = hitting_uv(sys, u1, u2, b)?.intersect(&hitting_uv(sys, v1, v2, b)?)?;
    match sys.time_kind() {
        TimeKind::Discrete => {
            for n in 1..=b.horizon {
                let direct = meets_at(&sq, &a, &c, n)?;
                if engine.contains(n) != Some(direct) {
                    return Ok(Verdict::fails(Evidence::Certificate(format!("time {n}: product {direct}, intersection {:?}", engine.contains(n)))));
                }
            }
            Ok(Verdict::holds(Evidence::Certificate(format!("equal on [1,{}]: {}", b.horizon, engine))))
        }
        _ => {
            let joint = hitting_uv(&sq, &a, &c, b)?;
            if joint == engine {
                Ok(Verdict::holds(Evidence::Certificate(format!("equal: {engine}"))))
            } else {
                Ok(Verdict::fails(Evidence::Certificate(format!("product {joint} vs intersection {engine}"))))
            }
        }
    }
}

/// Searches refinements `(U3, V3)` of the basis (up to `depth` halvings of
/// the resolution) with `N(U3,V3) ⊆ N(U1,V1) ∩ N(U2,V2)` in the window.
pub fn furstenberg_probe(
    sys: &SystemHandle,
    u1: &Region,
    v1: &Region,
    u2: &Region,
    v2: &Region,
    depth: u32,
    b: &CheckBudget,
) -> Result<Verdict> {
    if !sys.is_abelian() {
        return Err(Error::NotAbelianDeclared);
    }
    let target = hitting_uv(sys, u1, v1, b)?.intersect(&hitting_uv(sys, u2, v2, b)?)?;
    let subset = |t: &TimeWindowSet| -> Result<bool> {
        let both = t.intersect(&target)?;
        Ok(!t.is_empty_in_window() && both == t.clone().with_flags_of(&both))
    };
    if u1 == u2 && v1 == v2 {
        return Ok(Verdict::holds(Evidence::Certificate(format!("U3={u1};V3={v1}"))));
    }
    let mut eps = b.epsilon.clone();
    for _ in 0..=depth {
        let regions = basis(&sys.space(), &eps)?;
        for u3 in &regions {
            for v3 in &regions {
                let t = hitting_uv(sys, u3, v3, b)?;
                if subset(&t)? {
                    return Ok(Verdict::holds(Evidence::Certificate(format!("U3={u3};V3={v3};N={t}"))));
                }
            }
        }
        eps /= qi(2);
    }
    Ok(Verdict::undetermined(format!("no refinement pair found to depth {depth}")))
}

impl TimeWindowSet {
    fn with_flags_of(mut self, other: &TimeWindowSet) -> TimeWindowSet {
        self.exact = other.exact;
        self.ambiguous = other.ambiguous;
        self.closed = other.closed;
        self.tail = other.tail.clone();
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tw(hits: impl IntoIterator<Item = u64>, h: u64) -> TimeWindowSet {
        TimeWindowSet::discrete(hits.into_iter().collect(), h, None)
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&tw(4..=64, 64)).class, FamilyClass::Cofinite { threshold: qi(4) });
        let evens = classify(&tw((1..=32).map(|k| 2 * k), 64));
        assert_eq!(evens.class, FamilyClass::Syndetic { gap: qi(2) });
        assert!(!evens.is_thick());
        let mixed = classify(&tw((4..=12).chain(20..=40).chain(50..=64), 64));
        match mixed.class {
            FamilyClass::Thick { run } => assert!(run >= qi(15)),
            c => panic!("{c}"),
        }
        assert_eq!(classify(&tw([], 64)).class, FamilyClass::Empty);
        assert_eq!(classify(&tw([3], 64)).class, FamilyClass::Finite { count: 1 });
    }

    #[test]
    fn periodic_tails_classify_for_all_time() {
        let evens = TimeWindowSet::from_periodic_rule(16, 1, 2, |n| n % 2 == 0);
        let c = classify(&evens);
        assert_eq!(c, FamilyCertificate::all_time(FamilyClass::Syndetic { gap: qi(2) }));
        let odds = TimeWindowSet::from_periodic_rule(16, 1, 2, |n| n % 2 == 1);
        let both = evens.intersect(&odds).unwrap();
        assert!(both.provably_empty());
        let late = TimeWindowSet::from_periodic_rule(16, 5, 1, |n| n >= 3);
        assert_eq!(classify(&late).class, FamilyClass::Cofinite { threshold: qi(3) });
    }

    #[test]
    fn filter_examples() {
        let ev = TimeWindowSet::from_periodic_rule(32, 1, 2, |n| n % 2 == 0);
        let od = TimeWindowSet::from_periodic_rule(32, 1, 2, |n| n % 2 == 1);
        let v = filter_check(&[("U".into(), ev.clone()), ("V".into(), od)]).unwrap();
        assert!(v.is_fails());
        let s = tw([3], 32);
        assert!(filter_check(&[("a".into(), s.clone()), ("b".into(), s)]).unwrap().is_holds());
        let w = TimeWindowSet::words(BTreeSet::new(), 3, true, 0);
        assert_eq!(filter_check(&[("a".into(), ev), ("b".into(), w)]), Err(Error::MixedKind));
    }

    fn b(h: u64) -> CheckBudget {
        CheckBudget::new(crate::rational::q(1, 8), h)
    }

    fn sys(name: &str) -> SystemHandle {
        crate::system::builtin(name).unwrap()
    }

    fn iv(a: i64, bq: i64, c: i64, d: i64) -> Region {
        Region::open(crate::rational::q(a, bq), crate::rational::q(c, d))
    }

    #[test]
    fn tent_hitting_is_cofinite_for_all_time() {
        let t = hitting_uv(&sys("tent"), &iv(0, 1, 1, 4), &iv(3, 4, 1, 1), &b(32)).unwrap();
        let c = classify(&t);
        assert!(c.is_cofinite() && c.is_all_time(), "{t} {c}");
        for n in 1..=32 {
            assert_eq!(t.contains(n), Some(meets_at(&sys("tent"), &iv(0, 1, 1, 4), &iv(3, 4, 1, 1), n).unwrap()));
        }
    }

    #[test]
    fn swap_alternates() {
        let s = sys("swap_F");
        let odd = hitting_uv(&s, &iv(0, 1, 1, 4), &iv(3, 4, 1, 1), &b(32)).unwrap();
        let even = hitting_uv(&s, &iv(0, 1, 1, 4), &iv(1, 8, 1, 4), &b(32)).unwrap();
        assert_eq!(classify(&odd), FamilyCertificate::all_time(FamilyClass::Syndetic { gap: qi(2) }));
        assert!(odd.contains(1) == Some(true) && odd.contains(2) == Some(false));
        assert!(odd.intersect(&even).unwrap().provably_empty());
    }

    #[test]
    fn shift_hitting_sets() {
        let h = b(40);
        let full = hitting_uv(&sys("full_shift"), &Region::cylinder(0, &[0]), &Region::cylinder(0, &[1]), &h).unwrap();
        assert_eq!(classify(&full), FamilyCertificate::all_time(FamilyClass::Cofinite { threshold: qi(1) }));
        let g = hitting_uv(&sys("golden_mean"), &Region::cylinder(0, &[1]), &Region::cylinder(0, &[1]), &h).unwrap();
        assert_eq!(classify(&g), FamilyCertificate::all_time(FamilyClass::Cofinite { threshold: qi(2) }));
        let z = sys("full_shift_z");
        let t = hitting_uv(&z, &Region::cylinder(-1, &[0, 1, 0]), &Region::cylinder(-1, &[1, 1, 1]), &h).unwrap();
        assert_eq!(classify(&t), FamilyCertificate::all_time(FamilyClass::Cofinite { threshold: qi(3) }));
        let m = hitting_uv(&sys("morse_thue"), &Region::cylinder(0, &[0, 0]), &Region::cylinder(0, &[0, 0]), &h).unwrap();
        assert!(m.contains(1) == Some(false) && !m.is_empty_in_window());
        for n in 1..=40 {
            assert_eq!(g.contains(n), Some(meets_at(&sys("golden_mean"), &Region::cylinder(0, &[1]), &Region::cylinder(0, &[1]), n).unwrap()));
        }
    }

    #[test]
    fn point_hitting_sets() {
        let h = b(24);
        let x = Point::Symbolic(SymbolicPoint::one_sided(Seq::periodic(vec![], vec![0, 1])));
        let t = hitting_xv(&sys("full_shift"), &x, &Region::cylinder(0, &[1]), &h).unwrap();
        assert_eq!(classify(&t), FamilyCertificate::all_time(FamilyClass::Syndetic { gap: qi(2) }));
        let back = hitting_ux(&sys("full_shift"), &Region::cylinder(0, &[1, 1]), &x, &h).unwrap();
        assert_eq!(classify(&back), FamilyCertificate::all_time(FamilyClass::Cofinite { threshold: qi(2) }));
        let d = hitting_xv(&sys("doubling"), &Point::exact(crate::rational::q(1, 3)), &iv(0, 1, 1, 2), &h).unwrap();
        assert_eq!(classify(&d), FamilyCertificate::all_time(FamilyClass::Syndetic { gap: qi(2) }));
    }

    #[test]
    fn translation_and_products() {
        let s = sys("translation_semiflow");
        let t = hitting_uv(&s, &iv(0, 1, 1, 1), &iv(2, 1, 3, 1), &b(8)).unwrap();
        assert_eq!(t.to_string(), "(1,3)");
        let tent = sys("tent");
        let audit = product_identity_audit(&tent, &iv(0, 1, 1, 4), &iv(1, 2, 3, 4), &iv(3, 4, 1, 1), &iv(0, 1, 1, 8), &b(24)).unwrap();
        assert!(audit.is_holds(), "{audit}");
        let fs = sys("full_shift");
        let (c0, c1) = (Region::cylinder(0, &[0, 1]), Region::cylinder(0, &[1, 1]));
        assert!(product_identity_audit(&fs, &c0, &c1, &c1, &c0, &b(24)).unwrap().is_holds());
    }

}
