//! Property checkers. Each returns a three-valued [`Verdict`]; `Fails` is
//! issued only from exact evidence (provably empty hitting sets, finite
//! orbits, parity tails, homeomorphism obstructions).

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::actions::{eps_dense, Bounds, GeneratorMap};
use crate::error::{Error, Result};
use crate::hitting::{
    classify, filter_check, hitting_ux_many, hitting_uv_many, hitting_xv, FamilyCertificate, FamilyClass, Hits,
    TimeKind, TimeWindowSet,
};
use crate::point::{Point, Seq, SymbolicPoint, Tri};
use crate::interval_maps::PlMap;
use crate::rational::{fmt_q, frac, qi, Q};
use crate::region::{region_contains, CylinderUnion, Region};
use crate::space::{basis, cylinder_length, net};
use crate::symbolic::{occurrence_gap, ShiftKind};
use crate::system::{SystemHandle, SystemKind};
use crate::verdict::{CheckBudget, Evidence, Verdict};

/// Upper bound on sampled tuples in product checks of order three or more.
const TUPLE_SAMPLES: usize = 20_000;
/// Upper bound on backward-orbit sizes used by dual cross-checks.
const PREIMAGE_CAP: usize = 1 << 14;
/// Word length of the backward-set cross-check for actions.
const BACKWARD_WORD_LEN: usize = 4;

/// The eight set-level properties, in report order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    Transitive,
    WeakMixing,
    Mixing,
    Leo,
    StronglyTransitive,
    Vst,
    Spt,
    Minimal,
}

impl Property {
    pub const ALL: [Property; 8] = [
        Property::Transitive,
        Property::WeakMixing,
        Property::Mixing,
        Property::Leo,
        Property::StronglyTransitive,
        Property::Vst,
        Property::Spt,
        Property::Minimal,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Property::Transitive => "transitive",
            Property::WeakMixing => "weak_mixing",
            Property::Mixing => "mixing",
            Property::Leo => "leo",
            Property::StronglyTransitive => "strongly_transitive",
            Property::Vst => "vst",
            Property::Spt => "spt",
            Property::Minimal => "minimal",
        }
    }

    pub fn parse(s: &str) -> Option<Property> {
        Property::ALL.into_iter().find(|p| p.id() == s)
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Runs the checker for `p`.
pub fn check(sys: &SystemHandle, p: Property, b: &CheckBudget) -> Result<Verdict> {
    if !b.is_valid() {
        return Err(Error::InvalidParameter(format!("budget {b}")));
    }
    let v = check_at(sys, p, b)?;
    if !v.is_holds() {
        return Ok(v);
    }
    // Every orbit of a finite-order homeomorphism is finite, so no property
    // here can hold; bases coarser than the orbit spacing, or horizons shorter
    // than the period, merely blur the gaps. An exact witness found at a finer resolution is valid at every
    // budget, which keeps larger budgets from flipping the verdict.
    if let SystemKind::Pl(f) = &sys.kind {
        if let Some(q) = finite_order(f, ORDER_PROBE)? {
            let fine = Q::new(1.into(), (4 * q).into());
            let refined = CheckBudget { epsilon: fine.min(b.epsilon.clone()), horizon: b.horizon.max(2 * u64::from(q) + 2), ..b.clone() };
            if refined != *b {
                let w = check_at(sys, p, &refined)?;
                if w.is_fails() {
                    return Ok(w);
                }
            }
        }
    }
    Ok(v)
}

/// Largest order probed by [`finite_order`].
pub const ORDER_PROBE: u32 = 64;

/// Smallest `q <= max` with `f^q = id`, for homeomorphisms.
pub fn finite_order(f: &PlMap, max: u32) -> Result<Option<u32>> {
    if !f.is_homeomorphism() {
        return Ok(None);
    }
    let mut g = f.clone();
    for q in 1..=max {
        if is_identity(&g) {
            return Ok(Some(q));
        }
        // compositions of homeomorphisms only gain breakpoints
        if g.breakpoints().len() > 4 * f.breakpoints().len() * q as usize + 8 {
            return Ok(None);
        }
        g = g.then(f)?;
    }
    Ok(None)
}

/// Unit slopes plus agreement at every breakpoint pin the map to the identity.
fn is_identity(g: &PlMap) -> bool {
    g.slopes().iter().all(|s| s.is_one()) && g.breakpoints().iter().all(|x| g.eval(x) == if g.is_circle() { frac(x) } else { x.clone() })
}

fn check_at(sys: &SystemHandle, p: Property, b: &CheckBudget) -> Result<Verdict> {
    match p {
        Property::Transitive => check_transitive(sys, b),
        Property::WeakMixing => check_weak_mixing(sys, b),
        Property::Mixing => check_mixing(sys, b),
        Property::Leo => check_leo(sys, b),
        Property::StronglyTransitive => check_strongly_transitive(sys, b),
        Property::Vst => check_vst(sys, b),
        Property::Spt => check_spt(sys, b),
        Property::Minimal => check_minimal(sys, b),
    }
}

/// Basis regions at `eps` that meet the phase space (empty cylinders of a
/// subshift are dropped).
pub fn system_basis(sys: &SystemHandle, eps: &Q) -> Result<Vec<Region>> {
    match &sys.kind {
        SystemKind::Shift(s) => Ok(basis(&sys.space(), eps)?.into_iter().filter(|r| s.nonempty(r)).collect()),
        SystemKind::Product { parts, .. } => {
            let mut boxes: Vec<Vec<Region>> = vec![vec![]];
            for p in parts {
                let bs = system_basis(p, eps)?;
                boxes = boxes
                    .into_iter()
                    .flat_map(|pre| {
                        bs.iter().map(move |r| {
                            let mut v = pre.clone();
                            v.push(r.clone());
                            v
                        })
                    })
                    .collect();
            }
            Ok(boxes.into_iter().map(Region::Boxed).collect())
        }
        _ => basis(&sys.space(), eps),
    }
}

/// Net points at `eps` lying in the phase space.
pub fn system_net(sys: &SystemHandle, eps: &Q) -> Result<Vec<Point>> {
    match &sys.kind {
        SystemKind::Shift(s) => Ok(s.net_points(cylinder_length(eps))?.into_iter().map(Point::Symbolic).collect()),
        SystemKind::Product { parts, .. } => {
            let mut tuples: Vec<Vec<Point>> = vec![vec![]];
            for p in parts {
                let ns = system_net(p, eps)?;
                tuples = tuples
                    .into_iter()
                    .flat_map(|pre| {
                        ns.iter().map(move |x| {
                            let mut v = pre.clone();
                            v.push(x.clone());
                            v
                        })
                    })
                    .collect();
            }
            Ok(tuples.into_iter().map(Point::Tuple).collect())
        }
        _ => net(&sys.space(), eps),
    }
}

/// Window hits as a bitset; word keys are interned in `universe`.
#[derive(Clone, Debug)]
struct Bits(Vec<u64>);

impl Bits {
    fn of(t: &TimeWindowSet, universe: &mut HashMap<String, usize>) -> Option<Bits> {
        let idx: Vec<usize> = match &t.hits {
            Hits::Discrete(h) => h.iter().map(|&n| n as usize).collect(),
            Hits::Word(w) => w
                .iter()
                .map(|k| {
                    let next = universe.len();
                    *universe.entry(k.clone()).or_insert(next)
                })
                .collect(),
            Hits::Continuous(_) => return None,
        };
        let mut v = vec![0u64; idx.iter().max().map_or(0, |m| m / 64 + 1)];
        for i in idx {
            v[i / 64] |= 1 << (i % 64);
        }
        Some(Bits(v))
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &w)| (0..64).filter(move |i| w & (1 << i) != 0).map(move |i| k * 64 + i))
    }

    fn meet_all(sets: &[&Bits]) -> bool {
        let len = sets.iter().map(|b| b.0.len()).min().unwrap_or(0);
        (0..len).any(|i| sets.iter().fold(u64::MAX, |acc, b| acc & b.0[i]) != 0)
    }
}

/// Hitting sets between a list of sources and a list of targets, with
/// bitsets for fast joint-intersection tests.
struct Table {
    rows: Vec<String>,
    cols: Vec<String>,
    sets: Vec<Vec<TimeWindowSet>>,
    bits: Vec<Vec<Option<Bits>>>,
}

impl Table {
    fn new(rows: Vec<String>, cols: Vec<String>, sets: Vec<Vec<TimeWindowSet>>) -> Table {
        let mut universe = HashMap::new();
        let bits = sets.iter().map(|r| r.iter().map(|t| Bits::of(t, &mut universe)).collect()).collect();
        Table { rows, cols, sets, bits }
    }

    fn uv(sys: &SystemHandle, regions: &[Region], b: &CheckBudget) -> Result<Table> {
        let sets = regions.iter().map(|u| hitting_uv_many(sys, u, regions, b)).collect::<Result<Vec<_>>>()?;
        let names: Vec<String> = regions.iter().map(|r| r.to_string()).collect();
        Ok(Table::new(names.clone(), names, sets))
    }

    fn ux(sys: &SystemHandle, regions: &[Region], points: &[Point], b: &CheckBudget) -> Result<Table> {
        let sets = regions.iter().map(|u| hitting_ux_many(sys, u, points, b)).collect::<Result<Vec<_>>>()?;
        Ok(Table::new(
            regions.iter().map(|r| r.to_string()).collect(),
            points.iter().map(|p| p.to_string()).collect(),
            sets,
        ))
    }

    /// Does the intersection of the chosen cells meet the window, and if
    /// not, is it provably empty?
    fn joint(&self, cells: &[(usize, usize)]) -> Result<(Tri, TimeWindowSet)> {
        let bits: Option<Vec<&Bits>> = cells.iter().map(|&(i, j)| self.bits[i][j].as_ref()).collect();
        if let Some(bits) = &bits {
            if Bits::meet_all(bits) {
                return Ok((Tri::True, self.sets[cells[0].0][cells[0].1].clone()));
            }
        }
        let mut acc = self.sets[cells[0].0][cells[0].1].clone();
        for &(i, j) in &cells[1..] {
            acc = acc.intersect(&self.sets[i][j])?;
        }
        let t = if !acc.is_empty_in_window() {
            Tri::True
        } else if acc.provably_empty() {
            Tri::False
        } else {
            Tri::Unknown
        };
        Ok((t, acc))
    }

    fn label(&self, cells: &[(usize, usize)]) -> (String, String) {
        let from: Vec<&str> = cells.iter().map(|c| self.rows[c.0].as_str()).collect();
        let to: Vec<&str> = cells.iter().map(|c| self.cols[c.1].as_str()).collect();
        if cells.len() == 1 {
            (from[0].to_string(), to[0].to_string())
        } else {
            (format!("({})", from.join("x")), format!("({})", to.join(",")))
        }
    }
}

fn proof_of(t: &TimeWindowSet) -> String {
    match t.kind() {
        TimeKind::Discrete => format!("exact:{t}"),
        TimeKind::Continuous => "exact:continuous".to_string(),
        TimeKind::Word => format!("closed:{t}"),
    }
}

/// Outcome of a search over tuples of cells: first exact witness, count of
/// unresolved tuples, and tuples checked.
struct TupleScan {
    witness: Option<Evidence>,
    unknown: usize,
    checked: usize,
}

/// Checks `∩ cells ≠ ∅` for every `j`-tuple of rows paired with every
/// `j`-tuple of columns (all tuples when few, a deterministic stride sample
/// otherwise).
fn scan_tuples(t: &Table, j: usize) -> Result<TupleScan> {
    if j == 2 {
        if let Some(scan) = scan_pairs_by_time(t)? {
            return Ok(scan);
        }
    }
    let (r, c) = (t.rows.len(), t.cols.len());
    let total = (r * c).checked_pow(j as u32).unwrap_or(usize::MAX);
    let exhaustive = j <= 2 || total <= TUPLE_SAMPLES;
    let count = if exhaustive { total } else { TUPLE_SAMPLES };
    let stride = if exhaustive { 1 } else { (total / TUPLE_SAMPLES).max(1) | 1 };
    let mut scan = TupleScan { witness: None, unknown: 0, checked: 0 };
    for s in 0..count {
        let mut code = if exhaustive { s } else { (s.wrapping_mul(stride)) % total };
        let mut cells = Vec::with_capacity(j);
        for _ in 0..j {
            let rc = code % (r * c);
            code /= r * c;
            cells.push((rc / c, rc % c));
        }
        scan.checked += 1;
        match t.joint(&cells)? {
            (Tri::True, _) => {}
            (Tri::False, acc) => {
                let (from, to) = t.label(&cells);
                scan.witness = Some(Evidence::EmptyPair { from, to, proof: proof_of(&acc) });
                return Ok(scan);
            }
            (Tri::Unknown, _) => scan.unknown += 1,
        }
    }
    Ok(scan)
}

/// Exhaustive pairs of cells without touching each pair: cell `a` meets
/// every cell set in the union of the per-time columns over `a`'s hits.
/// Only uncovered pairs go through the exact intersection.
fn scan_pairs_by_time(t: &Table) -> Result<Option<TupleScan>> {
    let cells: Vec<(usize, usize)> = (0..t.rows.len()).flat_map(|i| (0..t.cols.len()).map(move |j| (i, j))).collect();
    let Some(bits) = cells.iter().map(|&(i, j)| t.bits[i][j].as_ref()).collect::<Option<Vec<&Bits>>>() else {
        return Ok(None);
    };
    let m = cells.len();
    let words = m.div_ceil(64);
    let times = bits.iter().map(|b| b.0.len() * 64).max().unwrap_or(0);
    // by_time[n] = cells whose hitting set contains n
    let mut by_time = vec![vec![0u64; words]; times];
    for (a, b) in bits.iter().enumerate() {
        for n in b.ones() {
            by_time[n][a / 64] |= 1 << (a % 64);
        }
    }
    let mut scan = TupleScan { witness: None, unknown: 0, checked: m * m };
    let mut cover = vec![0u64; words];
    for (a, b) in bits.iter().enumerate() {
        cover.iter_mut().for_each(|w| *w = 0);
        for n in b.ones() {
            cover.iter_mut().zip(&by_time[n]).for_each(|(w, x)| *w |= x);
        }
        for other in (0..m).filter(|&o| cover[o / 64] & (1 << (o % 64)) == 0) {
            let pair = [cells[a], cells[other]];
            match t.joint(&pair)? {
                (Tri::True, _) => {}
                (Tri::False, acc) => {
                    let (from, to) = t.label(&pair);
                    scan.witness = Some(Evidence::EmptyPair { from, to, proof: proof_of(&acc) });
                    return Ok(Some(scan));
                }
                (Tri::Unknown, _) => scan.unknown += 1,
            }
        }
    }
    Ok(Some(scan))
}

fn scan_verdict(scan: TupleScan, what: &str) -> Verdict {
    match scan.witness {
        Some(w) => Verdict::fails(w),
        None if scan.unknown > 0 => Verdict::undetermined(format!("{what}: {} of {} empty in window only", scan.unknown, scan.checked)),
        None => Verdict::holds(Evidence::Certificate(format!("{what}: {} nonempty", scan.checked))),
    }
}

/// Transitivity: `N(U,V)` meets the window for every basis pair.
pub fn check_transitive(sys: &SystemHandle, b: &CheckBudget) -> Result<Verdict> {
    let regions = system_basis(sys, &b.epsilon)?;
    let t = Table::uv(sys, &regions, b)?;
    Ok(scan_verdict(scan_tuples(&t, 1)?, "pairs"))
}

/// Point transitivity witnessed by `x`: its orbit meets every basis region.
pub fn check_point_transitive(sys: &SystemHandle, x: &Point, b: &CheckBudget) -> Result<Verdict> {
    let mut unknown = Vec::new();
    let regions = system_basis(sys, &b.epsilon)?;
    for v in &regions {
        let t = hitting_xv(sys, x, v, b)?;
        if t.provably_empty() {
            return Ok(Verdict::fails(Evidence::EmptyPair { from: x.to_string(), to: v.to_string(), proof: proof_of(&t) }));
        }
        if t.is_empty_in_window() {
            unknown.push(v.to_string());
        }
    }
    if unknown.is_empty() {
        Ok(Verdict::holds(Evidence::Certificate(format!("orbit of {x} meets {} regions", regions.len()))))
    } else {
        Ok(Verdict::undetermined(format!("orbit misses {} in window", unknown.join(" "))))
    }
}

/// Weak mixing: transitivity of the square, cross-checked against
/// thickness of the hitting sets (discrete time).
pub fn check_weak_mixing(sys: &SystemHandle, b: &CheckBudget) -> Result<Verdict> {
    let regions = system_basis(sys, &b.epsilon)?;
    let t = Table::uv(sys, &regions, b)?;
    let base = scan_tuples(&t, 1)?;
    if base.witness.is_some() {
        return Ok(scan_verdict(base, "pairs"));
    }
    let square = scan_verdict(scan_tuples(&t, 2)?, "square");
    if sys.time_kind() != TimeKind::Discrete || square.is_fails() {
        return Ok(square);
    }
    let thin: Vec<String> = t
        .sets
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, s)| (i, j, s)))
        .filter_map(|(i, j, s)| {
            let c = classify(s);
            (!(c.is_thick() || c.is_cofinite())).then(|| format!("N({},{})={}", t.rows[i], t.cols[j], c))
        })
        .collect();
    match (square.is_holds(), thin.is_empty()) {
        (true, true) => Ok(Verdict::holds(Evidence::Certificate(format!("square transitive; all {} sets thick", t.rows.len().pow(2))))),
        (true, false) => Ok(Verdict::undetermined(format!("square transitive but not thick at horizon: {}", thin[0]))),
        _ => Ok(square),
    }
}

/// Mixing: every basis-pair hitting set is cofinite.
pub fn check_mixing(sys: &SystemHandle, b: &CheckBudget) -> Result<Verdict> {
    let regions = system_basis(sys, &b.epsilon)?;
    match sys.time_kind() {
        TimeKind::Word => return mixing_action(sys, &regions),
        TimeKind::Continuous => {
            // a bounded hitting set has a complement that is not compact
            let t = Table::uv(sys, &regions, b)?;
            for (i, row) in t.sets.iter().enumerate() {
                for (j, s) in row.iter().enumerate() {
                    let c = classify(s);
                    if !c.is_cofinite() {
                        return Ok(Verdict::fails(Evidence::EmptyPair {
                            from: t.rows[i].clone(),
                            to: t.cols[j].clone(),
                            proof: format!("N={s} is bounded; class {c}"),
                        }));
                    }
                }
            }
            return Ok(Verdict::holds(Evidence::Certificate("all hitting sets unbounded to the right".into())));
        }
        TimeKind::Discrete => {}
    }
    let t = Table::uv(sys, &regions, b)?;
    let mut worst = Q::zero();
    let mut pending: Option<String> = None;
    for (i, row) in t.sets.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            let c = classify(s);
            if c.is_all_time() && !c.is_cofinite() {
                return Ok(Verdict::fails(Evidence::EmptyPair {
                    from: t.rows[i].clone(),
                    to: t.cols[j].clone(),
                    proof: format!("not cofinite: {c}; {s}"),
                }));
            }
            let ok = c.is_all_time() && s.exact && c.threshold().is_some_and(|n| n <= &qi(b.horizon as i64 / 2).max(Q::one()));
            if ok {
                worst = worst.max(c.threshold().unwrap().clone());
            } else if pending.is_none() {
                pending = Some(format!("N({},{}) = {s} classifies {c}", t.rows[i], t.cols[j]));
            }
        }
    }
    match pending {
        None => Ok(Verdict::holds(Evidence::Certificate(format!("cofinite, max threshold {}", fmt_q(&worst))))),
        Some(p) => Ok(Verdict::undetermined(p)),
    }
}

/// Mixing of semigroup actions with compact read as finite: the complement
/// of `N(U,V)` must be finite.
fn mixing_action(sys: &SystemHandle, regions: &[Region]) -> Result<Verdict> {
    let a = match &sys.kind {
        SystemKind::Action(a) => a,
        _ => return Ok(Verdict::undetermined("mixing of products of actions is not checked")),
    };
    if a.all_constant() && a.truncated {
        // the constants outside V form an infinite family in the untruncated space
        if let Some(v) = regions.iter().find(|r| r.as_finite().is_ok_and(|ix| !ix.contains(&0))) {
            return Ok(Verdict::fails(Evidence::EmptyPair {
                from: regions[0].to_string(),
                to: v.to_string(),
                proof: "complement contains the constants of every 1/n outside V: infinite".into(),
            }));
        }
    }
    Ok(Verdict::undetermined("cofiniteness in an infinite semigroup is not decidable from a word window"))
}

/// Non-wandering, recurrence and almost periodicity of one point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointReport {
    pub nonwandering: Verdict,
    pub recurrent: Verdict,
    pub almost_periodic: Verdict,
    pub omega_window: Vec<Point>,
}

fn containing_regions(sys: &SystemHandle, x: &Point, eps: &Q) -> Result<Vec<Region>> {
    let mut out = Vec::new();
    for r in system_basis(sys, eps)? {
        if region_contains(&r, x)? == Tri::True {
            out.push(r);
        }
    }
    Ok(out)
}

/// Non-wandering, recurrence and almost periodicity of `x` with respect to
/// the basis regions containing it.
pub fn check_point_properties(sys: &SystemHandle, x: &Point, b: &CheckBudget) -> Result<PointReport> {
    let regions = containing_regions(sys, x, &b.epsilon)?;
    if regions.is_empty() {
        return Err(Error::SpaceMismatch(format!("no basis region contains {x}")));
    }
    let mut nonwandering = Verdict::holds(Evidence::Certificate(format!("N(U,U) nonempty for {} regions", regions.len())));
    let mut recurrent = Verdict::holds(Evidence::Certificate(format!("N(x,U) nonempty for {} regions", regions.len())));
    let mut gaps = Vec::new();
    let mut almost_periodic: Option<Verdict> = None;
    for u in &regions {
        let uu = hitting_uv_many(sys, u, std::slice::from_ref(u), b)?.remove(0);
        let xu = hitting_xv(sys, x, u, b)?;
        nonwandering = worse(nonwandering, emptiness(&uu, &u.to_string(), &u.to_string()));
        recurrent = worse(recurrent, emptiness(&xu, &x.to_string(), &u.to_string()));
        let c = classify(&xu);
        if c.is_syndetic() || c.is_cofinite() {
            gaps.push(c.to_string());
        } else if c.is_all_time() {
            almost_periodic.get_or_insert_with(|| {
                Verdict::fails(Evidence::EmptyPair { from: x.to_string(), to: u.to_string(), proof: format!("not syndetic: {c}") })
            });
        } else {
            almost_periodic.get_or_insert_with(|| Verdict::undetermined(format!("N({x},{u}) classifies {c}")));
        }
    }
    let almost_periodic = almost_periodic.unwrap_or_else(|| Verdict::holds(Evidence::Certificate(gaps.join(";"))));
    Ok(PointReport { nonwandering, recurrent, almost_periodic, omega_window: omega_window(sys, x, b.horizon) })
}

/// Keeps the stronger negative result: Fails over Undetermined over Holds.
fn worse(a: Verdict, b: Verdict) -> Verdict {
    let rank = |v: &Verdict| match v.status {
        crate::verdict::Status::Fails => 0,
        crate::verdict::Status::Undetermined => 1,
        crate::verdict::Status::Holds => 2,
    };
    if rank(&b) < rank(&a) { b } else { a }
}

fn emptiness(t: &TimeWindowSet, from: &str, to: &str) -> Verdict {
    if !t.is_empty_in_window() {
        Verdict::holds(Evidence::Certificate(format!("N({from},{to}) = {t}")))
    } else if t.provably_empty() {
        Verdict::fails(Evidence::EmptyPair { from: from.into(), to: to.into(), proof: proof_of(t) })
    } else {
        Verdict::undetermined(format!("N({from},{to}) empty in window"))
    }
}

/// Distinct orbit points at times `H/2..=H` (at most 16), a window on the
/// omega-limit set.
fn omega_window(sys: &SystemHandle, x: &Point, h: u64) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::new();
    for n in h / 2..=h {
        let p = match (&sys.kind, x) {
            (SystemKind::Translation, Point::Real { value, error }) => Point::approx(value + qi(n as i64), error.clone()),
            (SystemKind::Translation, Point::Infinity) => Point::Infinity,
            _ => match sys.step_point(x, n) {
                Ok(p) => p,
                Err(_) => return out,
            },
        };
        if !out.contains(&p) {
            out.push(p);
        }
        if out.len() >= 16 {
            break;
        }
    }
    out
}

enum Onto {
    At(u64),
    Never(String),
    Unknown(String),
}

/// Least `N <= H` with `f^N(U)` equal to the whole space.
fn onto_time(sys: &SystemHandle, u: &Region, h: u64) -> Result<Onto> {
    match (&sys.kind, u) {
        (SystemKind::Pl(f), Region::Intervals(ru)) => {
            if f.is_homeomorphism() {
                return Ok(Onto::Never("homeomorphism: proper open sets never map onto".into()));
            }
            let whole = sys.space().whole();
            let whole = whole.as_intervals()?;
            let mut seen = std::collections::HashSet::new();
            let mut cur = ru.clone();
            seen.insert(cur.clone());
            for n in 1..=h {
                cur = f.image_capped(&cur, 1, crate::interval_maps::PIECE_CAP)?;
                if &cur == whole {
                    return Ok(Onto::At(n));
                }
                if !seen.insert(cur.clone()) {
                    return Ok(Onto::Never(format!("images cycle from time {n} without covering")));
                }
            }
            Ok(Onto::Unknown(format!("not onto by time {h}")))
        }
        (SystemKind::Translation, _) => Ok(Onto::Never("translates t+U with t>0 miss 0".into())),
        (SystemKind::Shift(s), Region::Cylinders(c)) => {
            if s.two_sided {
                return Ok(Onto::Never("the shift is a homeomorphism: proper cylinders map to proper cylinders".into()));
            }
            if matches!(s.kind, ShiftKind::Substitution { .. }) {
                return Ok(Onto::Unknown("images in one-sided substitution subshifts".into()));
            }
            let mut prev: Option<CylinderUnion> = None;
            for n in 1..=h {
                let img = s.image_region(c, n)?;
                if s.covers(&img)? {
                    return Ok(Onto::At(n));
                }
                if prev.as_ref() == Some(&img) {
                    return Ok(Onto::Never(format!("image stabilizes at {img} from time {n}")));
                }
                prev = Some(img);
            }
            Ok(Onto::Unknown(format!("not onto by time {h}")))
        }
        (SystemKind::Product { parts, .. }, Region::Boxed(rs)) => {
            let mut worst = 0;
            for (p, r) in parts.iter().zip(rs) {
                match onto_time(p, r, h)? {
                    Onto::At(n) => worst = worst.max(n),
                    other => return Ok(other),
                }
            }
            // onto components stay onto, so the box is onto at the latest time
            Ok(Onto::At(worst))
        }
        _ => Ok(Onto::Unknown(format!("images of {u} on {}", sys.space()))),
    }
}

/// Least time at which `U` maps onto the whole space, if within `h`.
pub fn leo_time(sys: &SystemHandle, u: &Region, h: u64) -> Result<Option<u64>> {
    Ok(match onto_time(sys, u, h)? {
        Onto::At(n) => Some(n),
        _ => None,
    })
}

/// Grows the backward orbit `∪_{n≤depth} f^{-n}(x)` of a PL map level by
/// level until it meets every region; returns a region it never met.
fn pl_backward_misses(f: &crate::interval_maps::PlMap, x: &Q, depth: u64, regions: &[Region]) -> Result<Option<Region>> {
    let mut open: Vec<&Region> = regions.iter().collect();
    let mut level = std::collections::BTreeSet::from([x.clone()]);
    let mut total = 0;
    for _ in 0..depth {
        level = level.iter().flat_map(|y| f.point_preimages(y)).collect();
        total += level.len();
        if level.is_empty() || total > PREIMAGE_CAP {
            break;
        }
        let pts: Vec<Point> = level.iter().cloned().map(Point::exact).collect();
        let mut still = Vec::new();
        for r in open {
            if meets_every(std::slice::from_ref(r), &pts)?.is_some() {
                still.push(r);
            }
        }
        open = still;
        if open.is_empty() {
            return Ok(None);
        }
    }
    Ok(open.first().map(|r| (*r).clone()))
}

fn meets_every(regions: &[Region], pts: &[Point]) -> Result<Option<Region>> {
    for r in regions {
        let mut hit = false;
        for p in pts {
            if region_contains(r, p)? == Tri::True {
                hit = true;
                break;
            }
        }
        if !hit {
            return Ok(Some(r.clone()));
        }
    }
    Ok(None)
}

/// Locally eventually onto: every basis region maps onto the space.
pub fn check_leo(sys: &SystemHandle, b: &CheckBudget) -> Result<Verdict> {
    let regions = system_basis(sys, &b.epsilon)?;
    if let SystemKind::Action(_) = sys.kind {
        return leo_action(sys, &regions, b);
    }
    let mut max_n = 0;
    let mut pending = None;
    for u in &regions {
        match onto_time(sys, u, b.horizon)? {
            Onto::At(n) => max_n = max_n.max(n),
            Onto::Never(reason) => return Ok(Verdict::fails(Evidence::RegionWitness { region: u.clone(), reason })),
            Onto::Unknown(r) => {
                pending.get_or_insert(format!("{u}: {r}"));
            }
        }
    }
    if let Some(p) = pending {
        return Ok(Verdict::undetermined(p));
    }
    // dual route: f^{-N}(x) meets every basis region for every net point x
    if let SystemKind::Pl(f) = &sys.kind {
        for x in system_net(sys, &b.epsilon)? {
            let mut level = std::collections::BTreeSet::from([x.value().unwrap().clone()]);
            for _ in 0..max_n {
                level = level.iter().flat_map(|y| f.point_preimages(y)).collect();
                if level.len() > PREIMAGE_CAP {
                    return Ok(Verdict::holds(Evidence::OntoTime { max_n }));
                }
            }
            let pts: Vec<Point> = level.into_iter().map(Point::exact).collect();
            if let Some(r) = meets_every(&regions, &pts)? {
                return Ok(Verdict::undetermined(format!("dual check: f^-{max_n}({x}) misses {r}")));
            }
        }
    }
    Ok(Verdict::holds(Evidence::OntoTime { max_n }))
}

fn leo_action(sys: &SystemHandle, regions: &[Region], b: &CheckBudget) -> Result<Verdict> {
    let a = sys.as_action().unwrap();
    if a.all_constant() {
        return Ok(Verdict::fails(Evidence::RegionWitness {
            region: regions[0].clone(),
            reason: "constant maps send open sets to points".into(),
        }));
    }
    if a.has_irrational_rotation() {
        return Ok(Verdict::fails(Evidence::RegionWitness {
            region: regions[0].clone(),
            reason: "infinitely many rotation powers are homeomorphisms and never map a proper open set onto".into(),
        }));
    }
    let (els, _) = a.elements(b.word_len)?;
    let whole = sys.space().whole();
    let mut level = 0;
    for u in regions {
        // shortest word length from which every enumerated element is onto
        let mut first_bad_len = 0;
        for (_, w) in &els {
            let mut bd = Bounds::exact(u.clone());
            for &g in w {
                bd = a.step_region(b.word_len, &b.epsilon, &bd, g)?;
            }
            if bd.inner != whole {
                first_bad_len = first_bad_len.max(w.len());
            }
        }
        if first_bad_len >= b.word_len {
            return Ok(Verdict::undetermined(format!("{u}: some element of length {} is not onto", b.word_len)));
        }
        level = level.max(first_bad_len + 1);
    }
    Ok(Verdict::holds(Evidence::Certificate(format!("every element of length >= {level} (up to {}) is onto", b.word_len))))
}

/// Strong transitivity: every net point lies in an image of every basis
/// region, cross-checked by density of backward orbits.
pub fn check_strongly_transitive(sys: &SystemHandle, b: &CheckBudget) -> Result<Verdict> {
    Ok(strongly_transitive_table(sys, b)?.0)
}

fn strongly_transitive_table(sys: &SystemHandle, b: &CheckBudget) -> Result<(Verdict, Table)> {
    let regions = system_basis(sys, &b.epsilon)?;
    let pts = system_net(sys, &b.epsilon)?;
    let t = Table::ux(sys, &regions, &pts, b)?;
    let v = scan_verdict(scan_tuples(&t, 1)?, "N(U,x)");
    let v = if v.is_holds() { backward_cross_check(sys, v, &regions, &pts, b)? } else { v };
    Ok((v, t))
}

/// Dual route for strong transitivity: backward orbits of net points are
/// dense. Disagreement downgrades a forward `Holds` to `Undetermined`.
fn backward_cross_check(sys: &SystemHandle, v: Verdict, regions: &[Region], pts: &[Point], b: &CheckBudget) -> Result<Verdict> {
    match &sys.kind {
        SystemKind::Pl(f) => {
            for x in pts {
                if let Some(r) = pl_backward_misses(f, x.value().unwrap(), b.horizon, regions)? {
                    return Ok(Verdict::undetermined(format!("backward orbit of {x} misses {r}; forward route holds")));
                }
            }
            Ok(v)
        }
        SystemKind::Action(a) => {
            'points: for x in pts {
                // shortest word length whose backward set is dense
                for len in b.word_len.min(BACKWARD_WORD_LEN)..=b.word_len {
                    let Some(back) = a.backward_set(x, len, &b.epsilon)? else { continue 'points };
                    if eps_dense(&sys.space(), &back, &b.epsilon)?.is_holds() {
                        continue 'points;
                    }
                }
                return Ok(Verdict::undetermined(format!("backward set of {x} not dense at L={}; forward route holds", b.word_len)));
            }
            if a.all_constant() {
                let one = a.backward_set(&pts[0], 1, &b.epsilon)?.map_or(0, |s| s.len());
                let Evidence::Certificate(c) = &v.evidence else { return Ok(v) };
                return Ok(Verdict::holds(Evidence::Certificate(format!("{c}; backward set at L=1 has all {one} points"))));
            }
            Ok(v)
        }
        _ => Ok(v),
    }
}

/// Earliest `N` with `∪_{n=1}^N f^n(U)` the whole space.
fn cover_time(sys: &SystemHandle, u: &Region, b: &CheckBudget) -> Result<Onto> {
    let h = b.horizon;
    match (&sys.kind, u) {
        (SystemKind::Pl(f), Region::Intervals(ru)) => {
            let whole = sys.space().whole();
            let whole = whole.as_intervals()?;
            let mut seen = std::collections::HashSet::new();
            let mut cur = ru.clone();
            let mut acc = crate::region::IntervalUnion::empty();
            for n in 1..=h {
                cur = f.image_capped(&cur, 1, crate::interval_maps::PIECE_CAP)?;
                acc = acc.union(&cur);
                if &acc == whole {
                    return Ok(Onto::At(n));
                }
                if !seen.insert(cur.clone()) {
                    return Ok(Onto::Never(format!("images cycle from time {n}; union {acc}")));
                }
            }
            Ok(Onto::Unknown(format!("union not whole by time {h}")))
        }
        (SystemKind::Translation, _) => Ok(Onto::Never("translates t+U with t>0 miss 0".into())),
        (SystemKind::Shift(s), Region::Cylinders(c)) => match &s.kind {
            ShiftKind::Substitution { .. } => {
                let w = &c.cylinders()[0].word;
                match occurrence_gap(s, w, h)?.evidence {
                    Evidence::Family(FamilyCertificate { class: FamilyClass::Syndetic { gap }, .. }) => {
                        let n = gap + qi(w.len() as i64);
                        Ok(Onto::At(n.to_integer().try_into().unwrap_or(u64::MAX)))
                    }
                    e => Ok(Onto::Unknown(e.to_string())),
                }
            }
            _ if s.two_sided => {
                for a in 0..s.alphabet() {
                    let fixed = SymbolicPoint::two_sided(Seq::constant(a), Seq::constant(a));
                    let avoids = c.cylinders().iter().all(|cyl| cyl.word.iter().any(|&x| x != a));
                    if avoids && s.point_in_window(&fixed, -1, 1) {
                        return Ok(Onto::Never(format!("fixed point {a}^inf avoids every image of {u}")));
                    }
                }
                Ok(Onto::Unknown("no avoiding fixed point".into()))
            }
            _ => {
                let mut acc: Vec<crate::region::Cylinder> = Vec::new();
                let mut prev: Option<CylinderUnion> = None;
                for n in 1..=h {
                    let img = s.image_region(c, n)?;
                    acc.extend(img.cylinders().iter().cloned());
                    let un = CylinderUnion::from_cylinders(acc.clone());
                    if s.covers(&un)? {
                        return Ok(Onto::At(n));
                    }
                    if prev.as_ref() == Some(&img) {
                        return Ok(Onto::Never(format!("images stabilize at {img}; union {un}")));
                    }
                    prev = Some(img);
                }
                Ok(Onto::Unknown(format!("union not whole by time {h}")))
            }
        },
        (SystemKind::Action(a), _) => {
            if a.all_constant() && a.truncated {
                return Ok(Onto::Never("finite unions of point images are finite; the untruncated space is infinite".into()));
            }
            let (imgs, _) = a.region_images(u, b.word_len, &b.epsilon)?;
            let whole = sys.space().whole();
            let inner: Vec<Region> = imgs.into_iter().map(|(_, bd)| bd.inner).collect();
            let covered = match &whole {
                Region::Intervals(w) => {
                    let mut acc = crate::region::IntervalUnion::empty();
                    for r in &inner {
                        acc = acc.union(r.as_intervals()?);
                    }
                    &acc == w
                }
                Region::Finite(w) => {
                    let mut all: Vec<usize> = inner.iter().flat_map(|r| r.as_finite().map(|v| v.to_vec()).unwrap_or_default()).collect();
                    all.sort();
                    all.dedup();
                    &all == w
                }
                _ => false,
            };
            Ok(if covered { Onto::At(b.word_len as u64) } else { Onto::Unknown(format!("images of length <= {} do not cover", b.word_len)) })
        }
        _ => Ok(Onto::Unknown(format!("covers of {u} on {}", sys.space()))),
    }
}

/// Very strong transitivity: finitely many images of each basis region
/// cover the space. The certificate includes the class of one `N(U,x)`.
pub fn check_vst(sys: &SystemHandle, b: &CheckBudget) -> Result<Verdict> {
    let regions = system_basis(sys, &b.epsilon)?;
    let mut max_n = 0;
    let mut pending = None;
    for u in &regions {
        match cover_time(sys, u, b)? {
            Onto::At(n) => max_n = max_n.max(n),
            Onto::Never(reason) => return Ok(Verdict::fails(Evidence::RegionWitness { region: u.clone(), reason })),
            Onto::Unknown(r) => {
                pending.get_or_insert(format!("{u}: {r}"));
            }
        }
    }
    if let Some(p) = pending {
        return Ok(Verdict::undetermined(p));
    }
    let pts = system_net(sys, &b.epsilon)?;
    let sample = hitting_ux_many(sys, &regions[0], &pts[..1], b)?.remove(0);
    Ok(Verdict::holds(Evidence::Certificate(format!(
        "cover by time {max_n}; N({},{}) is {}",
        regions[0],
        pts[0],
        classify(&sample)
    ))))
}

/// Strong product transitivity up to the budget's order: strong
/// transitivity of every self-product of order at most `k`, plus the
/// filter property of `{N(U,x)}`.
pub fn check_spt(sys: &SystemHandle, b: &CheckBudget) -> Result<Verdict> {
    let (st, t) = strongly_transitive_table(sys, b)?;
    if st.is_fails() {
        return Ok(st);
    }
    let mut pending = if st.is_holds() { None } else { Some(st.evidence.to_string()) };
    for j in 2..=b.order.max(1) {
        let scan = scan_tuples(&t, j)?;
        if let Some(w) = scan.witness {
            return Ok(Verdict::fails(w));
        }
        if scan.unknown > 0 {
            pending.get_or_insert(format!("order {j}: {} tuples empty in window", scan.unknown));
        }
    }
    let collection: Vec<(String, TimeWindowSet)> = t
        .sets
        .iter()
        .enumerate()
        .flat_map(|(i, row)| {
            let t = &t;
            row.iter().enumerate().map(move |(j, s)| (format!("N({},{})", t.rows[i], t.cols[j]), s.clone()))
        })
        .collect();
    let filter = filter_check(&collection)?;
    if filter.is_fails() {
        return Ok(filter);
    }
    if !filter.is_holds() {
        pending.get_or_insert(filter.evidence.to_string());
    }
    match pending {
        None => Ok(Verdict::holds(Evidence::Certificate(format!("products up to order {} strongly transitive; filter holds", b.order)))),
        Some(p) => Ok(Verdict::undetermined(p)),
    }
}

/// Minimality: every orbit is dense. Exact failures come from fixed points,
/// finite orbits and orbits that provably avoid a region.
pub fn check_minimal(sys: &SystemHandle, b: &CheckBudget) -> Result<Verdict> {
    match &sys.kind {
        SystemKind::Pl(f) => {
            if let Some(p) = f.fixed_points().into_iter().next() {
                return Ok(Verdict::fails(Evidence::PointWitness { point: Point::exact(p), reason: "fixed point".into() }));
            }
            orbit_density(sys, b)
        }
        SystemKind::Translation => {
            Ok(Verdict::fails(Evidence::PointWitness { point: Point::Infinity, reason: "fixed point".into() }))
        }
        SystemKind::Shift(s) => match &s.kind {
            ShiftKind::Substitution { .. } => {
                let k = cylinder_length(&b.epsilon);
                let len = if s.two_sided { 2 * k - 1 } else { k };
                let mut worst = Q::zero();
                for l in 1..=len {
                    for w in s.language(l)? {
                        match occurrence_gap(s, &w, b.horizon)?.evidence {
                            Evidence::Family(FamilyCertificate { class: FamilyClass::Syndetic { gap }, .. }) => {
                                worst = worst.max(gap)
                            }
                            e => return Ok(Verdict::undetermined(format!("word {}: {e}", crate::symbolic::word_str(&w)))),
                        }
                    }
                }
                Ok(Verdict::holds(Evidence::Certificate(format!(
                    "uniformly recurrent words up to length {len}; max gap {} at H={}",
                    fmt_q(&worst),
                    b.horizon
                ))))
            }
            _ => orbit_density(sys, b),
        },
        SystemKind::Action(a) => {
            let space = sys.space();
            let mut pending = None;
            for x in system_net(sys, &b.epsilon)? {
                let (imgs, closed) = a.point_images(&x, b.word_len, &b.epsilon)?;
                let mut pts: Vec<Point> = Vec::new();
                for (_, p) in imgs {
                    if !pts.contains(&p) {
                        pts.push(p);
                    }
                }
                let dense = eps_dense(&space, &pts, &b.epsilon)?;
                if dense.is_holds() {
                    continue;
                }
                if pts.iter().all(Point::is_exact) && (closed || invariant_under_generators(a, &pts, &b.epsilon)?) {
                    return Ok(Verdict::fails(Evidence::PointWitness {
                        point: x,
                        reason: format!("finite orbit of {} points; {}", pts.len(), dense.evidence),
                    }));
                }
                pending.get_or_insert(format!("orbit of {x} not dense at L={}", b.word_len));
            }
            Ok(match pending {
                None => Verdict::holds(Evidence::Certificate(format!("every net orbit {}-dense at L={}", fmt_q(&b.epsilon), b.word_len))),
                Some(p) => Verdict::undetermined(p),
            })
        }
        SystemKind::Product { parts, .. } => {
            // a factor of a minimal system is minimal
            for p in parts {
                let v = check_minimal(p, b)?;
                if v.is_fails() {
                    return Ok(v);
                }
            }
            Ok(Verdict::undetermined("minimality of products is not checked"))
        }
    }
}

/// The finite point set maps into itself under every generator.
fn invariant_under_generators(a: &crate::actions::SemigroupAction, pts: &[Point], eps: &Q) -> Result<bool> {
    if a.generators.iter().any(|g| matches!(g, GeneratorMap::Rotation { .. })) {
        return Ok(false);
    }
    for p in pts {
        for g in 0..a.generators.len() {
            if !pts.contains(&a.act(&[g], p, eps)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Orbits of net points meet every basis region; a provably avoided region
/// is an exact failure.
fn orbit_density(sys: &SystemHandle, b: &CheckBudget) -> Result<Verdict> {
    let mut pending = None;
    for x in system_net(sys, &b.epsilon)? {
        let v = check_point_transitive(sys, &x, b)?;
        if v.is_fails() {
            return Ok(v);
        }
        if v.is_undetermined() {
            pending.get_or_insert(v.evidence.to_string());
        }
    }
    Ok(match pending {
        None => Verdict::holds(Evidence::Certificate("every net orbit meets every basis region".into())),
        Some(p) => Verdict::undetermined(p),
    })
}

/// The three equivalent transitivity criteria for cascades: forward
/// hitting sets, preimages `f^{-n}(V)` meeting `U`, and image unions
/// `∪_{n≤H} f^n(U)` meeting every region. Each route works on its own
/// objects; on central exact systems all three must agree.
pub fn transitivity_criteria(sys: &SystemHandle, b: &CheckBudget) -> Result<[Verdict; 3]> {
    let regions = system_basis(sys, &b.epsilon)?;
    let forward = check_transitive(sys, b)?;
    let (backward, union) = match &sys.kind {
        SystemKind::Pl(f) => (pl_backward_route(f, &regions, b.horizon)?, pl_union_route(f, &regions, b.horizon)?),
        SystemKind::Shift(s) if !matches!(s.kind, ShiftKind::Substitution { .. }) => {
            (shift_backward_route(sys, s, &regions, b.horizon)?, shift_union_route(s, &regions, b.horizon)?)
        }
        _ => return Err(Error::Unsupported(format!("preimage routes on {}", sys.space()))),
    };
    Ok([forward, backward, union])
}

fn route_verdict(bad: Option<(String, String, String)>, unknown: Option<String>, what: &str) -> Verdict {
    match (bad, unknown) {
        (Some((from, to, proof)), _) => Verdict::fails(Evidence::EmptyPair { from, to, proof }),
        (None, Some(u)) => Verdict::undetermined(u),
        (None, None) => Verdict::holds(Evidence::Certificate(what.into())),
    }
}

fn pl_backward_route(f: &crate::interval_maps::PlMap, regions: &[Region], h: u64) -> Result<Verdict> {
    let mut unknown = None;
    for v in regions {
        let mut open: Vec<&crate::region::IntervalUnion> = regions.iter().map(|u| u.as_intervals()).collect::<Result<_>>()?;
        let mut cur = v.as_intervals()?.clone();
        let mut seen = std::collections::HashSet::from([cur.clone()]);
        let mut cycled = false;
        for _ in 1..=h {
            cur = f.preimage(&cur);
            if cur.parts().len() > crate::interval_maps::PIECE_CAP {
                break;
            }
            open.retain(|u| !u.intersects(&cur));
            if open.is_empty() || !seen.insert(cur.clone()) {
                cycled = !open.is_empty();
                break;
            }
        }
        if let Some(u) = open.first() {
            if cycled {
                return Ok(route_verdict(Some((u.to_string(), v.to_string(), "preimages cycle".into())), None, ""));
            }
            unknown.get_or_insert(format!("no preimage of {v} meets {u} in window"));
        }
    }
    Ok(route_verdict(None, unknown, "every preimage sequence meets every region"))
}

fn pl_union_route(f: &crate::interval_maps::PlMap, regions: &[Region], h: u64) -> Result<Verdict> {
    let mut unknown = None;
    for u in regions {
        let mut cur = u.as_intervals()?.clone();
        let mut acc = crate::region::IntervalUnion::empty();
        let mut seen = std::collections::HashSet::from([cur.clone()]);
        let mut cycled = false;
        for _ in 1..=h {
            cur = f.image_capped(&cur, 1, crate::interval_maps::PIECE_CAP)?;
            acc = acc.union(&cur);
            if !seen.insert(cur.clone()) {
                cycled = true;
                break;
            }
        }
        for v in regions {
            if !acc.intersects(v.as_intervals()?) {
                if cycled {
                    return Ok(route_verdict(Some((u.to_string(), v.to_string(), format!("image union {acc} is final"))), None, ""));
                }
                unknown.get_or_insert(format!("image union of {u} misses {v} in window"));
            }
        }
    }
    Ok(route_verdict(None, unknown, "every image union meets every region"))
}

fn shift_backward_route(sys: &SystemHandle, s: &crate::symbolic::Subshift, regions: &[Region], h: u64) -> Result<Verdict> {
    let (ps, pp) = s.power_profile().expect("full shifts and SFTs have power profiles");
    for u in regions {
        for v in regions {
            // admissibility of u@a with v@(a+n) is periodic in n beyond this bound
            let (cu, cv) = (&u.as_cylinders()?.cylinders()[0], &v.as_cylinders()?.cylinders()[0]);
            let start = (ps as i64 + cu.offset + cu.word.len() as i64 - 1 - cv.offset).max(1) as u64;
            let last = h.max(start + pp);
            let mut hit = false;
            for n in 1..=last {
                if crate::hitting::meets_at(sys, u, v, n)? {
                    hit = true;
                    break;
                }
            }
            if !hit {
                return Ok(route_verdict(Some((u.to_string(), v.to_string(), format!("no time up to {last}"))), None, ""));
            }
        }
    }
    Ok(route_verdict(None, None, "every pair admissible at some time"))
}

fn shift_union_route(s: &crate::symbolic::Subshift, regions: &[Region], h: u64) -> Result<Verdict> {
    let mut unknown = None;
    for u in regions {
        let mut imgs: Vec<crate::region::Cylinder> = Vec::new();
        for n in 1..=h {
            imgs.extend(s.image_region(u.as_cylinders()?, n)?.cylinders().iter().cloned());
        }
        for v in regions {
            let cv = &v.as_cylinders()?.cylinders()[0];
            let meets = imgs.iter().any(|c| {
                let cons: Vec<(i64, u8)> = c.constraints().chain(cv.constraints()).collect();
                s.admits(&cons)
            });
            if !meets {
                unknown.get_or_insert(format!("image union of {u} misses {v} in window"));
            }
        }
    }
    Ok(route_verdict(None, unknown, "every image union meets every region"))
}
