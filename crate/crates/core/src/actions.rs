//! Finitely generated semigroup actions: orbits, backward orbits and
//! structural flags, with certified error bounds for irrational rotations.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::interval_maps::PlMap;
use crate::point::{Point, Tri};
use crate::rational::{fmt_q, frac, qi, ContinuedFraction, Q};
use crate::region::{region_contains, Ext, Interval, IntervalUnion, Region};
use crate::space::{basis, Space};
use crate::verdict::{Evidence, Verdict};

/// Cap on the number of distinct semigroup elements a search may visit.
pub const ELEMENT_CAP: usize = 1 << 15;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Angle {
    Rational(Q),
    /// An irrational number in `(0,1)` given by its continued fraction.
    Irrational(ContinuedFraction),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorMap {
    Pl(PlMap),
    Constant(Point),
    /// `θ ↦ θ ± angle` on the circle.
    Rotation { angle: Angle, inverse: bool },
}

impl GeneratorMap {
    pub fn rotation(angle: Angle) -> Self {
        GeneratorMap::Rotation { angle, inverse: false }
    }

    pub fn inverse_rotation(angle: Angle) -> Self {
        GeneratorMap::Rotation { angle, inverse: true }
    }

    fn lipschitz(&self) -> Q {
        match self {
            GeneratorMap::Pl(f) => f.lipschitz(),
            GeneratorMap::Constant(_) => Q::zero(),
            GeneratorMap::Rotation { .. } => Q::one(),
        }
    }

    fn is_homeomorphism(&self) -> bool {
        match self {
            GeneratorMap::Pl(f) => f.is_homeomorphism(),
            GeneratorMap::Constant(_) => false,
            GeneratorMap::Rotation { .. } => true,
        }
    }
}

impl fmt::Display for GeneratorMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorMap::Pl(m) => write!(f, "pl{m}"),
            GeneratorMap::Constant(p) => write!(f, "const({p})"),
            GeneratorMap::Rotation { angle, inverse } => {
                let s = if *inverse { "-" } else { "+" };
                match angle {
                    Angle::Rational(a) => write!(f, "rot{s}{}", fmt_q(a)),
                    Angle::Irrational(cf) => write!(f, "rot{s}cf{:?}{:?}", cf.preperiod, cf.period),
                }
            }
        }
    }
}

/// Distinct elements with a shortest word and per-element state.
pub type Elements<S> = Vec<(ElementKey, Vec<usize>, S)>;

/// An element with a shortest word reaching it.
pub type ElementWord = (ElementKey, Vec<usize>);

/// Normal form of a semigroup element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElementKey {
    /// `θ ↦ mult·θ + alpha·α + shift (mod 1)`, α the action's irrational angle.
    Affine { mult: i64, alpha: i64, shift: Q },
    /// Constant map with the given target.
    Constant(String),
    /// No normal form; the (possibly sorted) generator word itself.
    Word(Vec<usize>),
}

impl fmt::Display for ElementKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementKey::Affine { mult, alpha, shift } => write!(f, "{mult}x{alpha:+}a+{}", fmt_q(shift)),
            ElementKey::Constant(t) => write!(f, "c{t}"),
            ElementKey::Word(w) => {
                let s: Vec<String> = w.iter().map(|g| g.to_string()).collect();
                write!(f, "w{}", s.join("."))
            }
        }
    }
}

/// A generator evaluated at a fixed rational approximation.
#[derive(Clone, Debug)]
struct WorkGen {
    map: GeneratorMap,
    /// Signed rotation amount used in arithmetic.
    shift: Option<Q>,
    /// Certified bound on `|true shift - shift|`.
    delta: Q,
    /// The approximate rotation as a circle map.
    rot: Option<PlMap>,
}

/// A semigroup action given by generators, evaluated at a fixed word-length
/// and resolution budget.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SemigroupAction {
    pub space: Space,
    pub generators: Vec<GeneratorMap>,
    /// Declared commutativity (spot-verified by `verify_abelian`).
    pub abelian: bool,
    /// The space is a truncation of an infinite countable space whose
    /// constant generators are indexed by its points.
    pub truncated: bool,
}

fn one_irrational(gens: &[GeneratorMap]) -> Result<Option<ContinuedFraction>> {
    let mut found: Option<ContinuedFraction> = None;
    for g in gens {
        if let GeneratorMap::Rotation { angle: Angle::Irrational(cf), .. } = g {
            match &found {
                Some(f) if f != cf => {
                    return Err(Error::UnsupportedGenerator("at most one irrational angle per action".into()))
                }
                _ => found = Some(cf.clone()),
            }
        }
    }
    Ok(found)
}

impl SemigroupAction {
    pub fn new(space: Space, generators: Vec<GeneratorMap>, abelian: bool) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidParameter("an action needs at least one generator".into()));
        }
        one_irrational(&generators)?;
        for g in &generators {
            let ok = match (g, &space) {
                (GeneratorMap::Pl(f), Space::Circle) => f.is_circle(),
                (GeneratorMap::Pl(f), Space::Unit) => !f.is_circle(),
                (GeneratorMap::Rotation { .. }, Space::Circle) => true,
                (GeneratorMap::Constant(Point::Element(i)), Space::Finite { n_max }) => i <= n_max,
                (GeneratorMap::Constant(Point::Real { value, error }), Space::Unit) => {
                    error.is_zero() && value >= &Q::zero() && value <= &Q::one()
                }
                (GeneratorMap::Constant(Point::Real { value, error }), Space::Circle) => {
                    error.is_zero() && value >= &Q::zero() && value < &Q::one()
                }
                _ => false,
            };
            if !ok {
                return Err(Error::SpaceMismatch(format!("generator {g} does not act on {space}")));
            }
        }
        Ok(SemigroupAction { space, generators, abelian, truncated: false })
    }

    /// Constant maps `f_x(y) = x` for every point of `{1/n : n <= n_max} ∪ {0}`.
    pub fn pnst(n_max: usize) -> Self {
        let gens = (0..=n_max).map(|i| GeneratorMap::Constant(Point::Element(i))).collect();
        let mut a = SemigroupAction::new(Space::Finite { n_max }, gens, false).unwrap();
        a.truncated = true;
        a
    }

    /// Doubling together with the golden rotation and its inverse.
    pub fn dai() -> Self {
        let alpha = Angle::Irrational(ContinuedFraction::golden());
        SemigroupAction::new(
            Space::Circle,
            vec![
                GeneratorMap::Pl(PlMap::doubling()),
                GeneratorMap::rotation(alpha.clone()),
                GeneratorMap::inverse_rotation(alpha),
            ],
            false,
        )
        .unwrap()
    }

    /// Multiplication by the sampled factors `r` on the circle.
    pub fn multipliers(factors: &[i64]) -> Result<Self> {
        let gens = factors
            .iter()
            .map(|&r| {
                if r == 0 {
                    return Err(Error::InvalidParameter("multiplier must be nonzero".into()));
                }
                Ok(GeneratorMap::Pl(PlMap::new(vec![Q::zero(), Q::one()], vec![Q::zero(), qi(r)], true)?))
            })
            .collect::<Result<Vec<_>>>()?;
        SemigroupAction::new(Space::Circle, gens, true)
    }

    pub fn all_constant(&self) -> bool {
        self.generators.iter().all(|g| matches!(g, GeneratorMap::Constant(_)))
    }

    pub fn has_homeomorphism_generator(&self) -> bool {
        self.generators.iter().any(GeneratorMap::is_homeomorphism)
    }

    /// Has an irrational rotation among its generators.
    pub fn has_irrational_rotation(&self) -> bool {
        self.generators
            .iter()
            .any(|g| matches!(g, GeneratorMap::Rotation { angle: Angle::Irrational(_), .. }))
    }

    fn max_lipschitz(&self) -> Q {
        self.generators.iter().map(GeneratorMap::lipschitz).max().unwrap().max(Q::one())
    }

    /// Rotation approximations good enough that words of length `len`
    /// accumulate error below `eps/10`.
    fn work(&self, len: usize, eps: &Q) -> Vec<WorkGen> {
        let lam = self.max_lipschitz();
        // error after a word is at most delta * len * lam^len
        let mut growth = Q::from_integer(BigInt::from(len.max(1)));
        for _ in 0..len {
            growth *= &lam;
        }
        let need = (qi(10) * growth / eps).ceil().to_integer();
        let min_den = need.sqrt() + BigInt::one();
        self.generators
            .iter()
            .map(|g| {
                let (shift, delta) = match g {
                    GeneratorMap::Rotation { angle, inverse } => {
                        let (a, d) = match angle {
                            Angle::Rational(a) => (frac(a), Q::zero()),
                            Angle::Irrational(cf) => cf.convergent(&min_den),
                        };
                        (Some(if *inverse { -a } else { a }), d)
                    }
                    _ => (None, Q::zero()),
                };
                let rot = shift.clone().map(PlMap::rotation);
                WorkGen { map: g.clone(), shift, delta, rot }
            })
            .collect()
    }

    /// Rational approximation of the irrational angle used at this budget.
    pub fn angle_approximation(&self, len: usize, eps: &Q) -> Option<(Q, Q)> {
        self.work(len, eps)
            .into_iter()
            .find(|w| !w.delta.is_zero())
            .map(|w| (w.shift.unwrap().abs(), w.delta))
    }

    fn generator_key(&self, g: usize) -> ElementKey {
        match &self.generators[g] {
            GeneratorMap::Pl(f) if f.is_circle() && f.breakpoints().len() == 2 => match f.degree().to_integer().to_i64() {
                Some(m) => ElementKey::Affine { mult: m, alpha: 0, shift: frac(&f.values()[0]) },
                None => ElementKey::Word(vec![g]),
            },
            GeneratorMap::Rotation { angle: Angle::Rational(a), inverse } => {
                ElementKey::Affine { mult: 1, alpha: 0, shift: frac(&if *inverse { -a.clone() } else { a.clone() }) }
            }
            GeneratorMap::Rotation { angle: Angle::Irrational(_), inverse } => {
                ElementKey::Affine { mult: 1, alpha: if *inverse { -1 } else { 1 }, shift: Q::zero() }
            }
            GeneratorMap::Constant(p) => ElementKey::Constant(p.to_string()),
            GeneratorMap::Pl(_) => ElementKey::Word(vec![g]),
        }
    }

    /// Key of `g ∘ s` (apply `s`, then generator `g`).
    fn extend_key(&self, key: &ElementKey, word: &[usize], g: usize) -> ElementKey {
        let gk = self.generator_key(g);
        match (key, &gk) {
            (ElementKey::Constant(_), _) => {
                let target = self.act_exact_word(word, g);
                match target {
                    Some(p) => ElementKey::Constant(p.to_string()),
                    None => self.word_key(word, g),
                }
            }
            (_, ElementKey::Constant(_)) => gk,
            (ElementKey::Affine { mult: m1, alpha: a1, shift: s1 }, ElementKey::Affine { mult: m2, alpha: a2, shift: s2 }) => {
                match (m2.checked_mul(*m1), m2.checked_mul(*a1).and_then(|x| x.checked_add(*a2))) {
                    (Some(mult), Some(alpha)) => {
                        ElementKey::Affine { mult, alpha, shift: frac(&(qi(*m2) * s1 + s2)) }
                    }
                    _ => self.word_key(word, g),
                }
            }
            _ => self.word_key(word, g),
        }
    }

    fn word_key(&self, word: &[usize], g: usize) -> ElementKey {
        let mut w = word.to_vec();
        w.push(g);
        if self.abelian {
            w.sort_unstable();
        }
        ElementKey::Word(w)
    }

    /// Exact image of the constant target after the rest of the word, when
    /// the rest of the word is exact.
    fn act_exact_word(&self, word: &[usize], g: usize) -> Option<Point> {
        let start = word.iter().rposition(|&i| matches!(self.generators[i], GeneratorMap::Constant(_)))?;
        let GeneratorMap::Constant(p) = &self.generators[word[start]] else { unreachable!() };
        let mut x = p.clone();
        for &i in word[start + 1..].iter().chain(std::iter::once(&g)) {
            x = match &self.generators[i] {
                GeneratorMap::Constant(c) => c.clone(),
                GeneratorMap::Pl(f) => Point::exact(f.eval(x.value()?)),
                GeneratorMap::Rotation { angle: Angle::Rational(a), inverse } => {
                    let a = if *inverse { -a.clone() } else { a.clone() };
                    Point::exact(frac(&(x.value()? + a)))
                }
                GeneratorMap::Rotation { .. } => return None,
            };
        }
        Some(x)
    }

    /// Distinct elements reachable by words of length `1..=len`, in
    /// breadth-first, generator-lexicographic order, each carrying a state
    /// advanced by `step`. The flag reports that the semigroup was exhausted.
    pub fn elements_with<S: Clone>(
        &self,
        len: usize,
        init: S,
        mut step: impl FnMut(&S, usize) -> Result<S>,
    ) -> Result<(Elements<S>, bool)> {
        let mut seen: HashMap<ElementKey, ()> = HashMap::new();
        let mut out: Elements<S> = Vec::new();
        let mut layer: Vec<(Option<ElementKey>, Vec<usize>, S)> = vec![(None, vec![], init)];
        for depth in 1..=len + 1 {
            let mut next = Vec::new();
            for (key, word, state) in &layer {
                for g in 0..self.generators.len() {
                    let k = match key {
                        None => self.generator_key(g),
                        Some(k) => self.extend_key(k, word, g),
                    };
                    if seen.contains_key(&k) {
                        continue;
                    }
                    if depth > len {
                        // one more layer only to detect exhaustion
                        return Ok((out, false));
                    }
                    seen.insert(k.clone(), ());
                    let s = step(state, g)?;
                    let mut w = word.clone();
                    w.push(g);
                    out.push((k.clone(), w.clone(), s.clone()));
                    next.push((Some(k), w, s));
                    if out.len() > ELEMENT_CAP {
                        return Err(Error::BudgetExceeded(out.len()));
                    }
                }
            }
            if next.is_empty() && depth <= len {
                return Ok((out, true));
            }
            layer = next;
        }
        Ok((out, true))
    }

    /// Distinct elements for words of length at most `len`.
    pub fn elements(&self, len: usize) -> Result<(Vec<ElementWord>, bool)> {
        let (els, closed) = self.elements_with(len, (), |_, _| Ok(()))?;
        Ok((els.into_iter().map(|(k, w, _)| (k, w)).collect(), closed))
    }

    fn step_point(&self, work: &[WorkGen], x: &Point, g: usize) -> Result<Point> {
        let wg = &work[g];
        Ok(match (&wg.map, x) {
            (GeneratorMap::Constant(c), _) => c.clone(),
            (GeneratorMap::Pl(f), Point::Real { value, error }) => {
                Point::approx(f.eval(value), f.lipschitz() * error)
            }
            (GeneratorMap::Rotation { .. }, Point::Real { value, error }) => {
                Point::approx(frac(&(value + wg.shift.as_ref().unwrap())), error + &wg.delta)
            }
            _ => return Err(Error::SpaceMismatch(format!("generator {} cannot act on {x}", wg.map))),
        })
    }

    fn check_point(&self, x: &Point) -> Result<()> {
        let ok = match (&self.space, x) {
            (Space::Finite { n_max }, Point::Element(i)) => i <= n_max,
            (Space::Unit | Space::Circle, Point::Real { .. }) => true,
            _ => false,
        };
        if ok { Ok(()) } else { Err(Error::SpaceMismatch(format!("point {x} is not in {}", self.space))) }
    }

    /// `w` applied left to right to `x`; the error bound grows by each
    /// generator's Lipschitz factor and approximation error.
    pub fn act(&self, word: &[usize], x: &Point, eps: &Q) -> Result<Point> {
        if word.is_empty() {
            return Err(Error::InvalidParameter("words must be nonempty".into()));
        }
        self.check_point(x)?;
        let work = self.work(word.len(), eps);
        let mut p = x.clone();
        for &g in word {
            if g >= self.generators.len() {
                return Err(Error::InvalidParameter(format!("no generator {g}")));
            }
            p = self.step_point(&work, &p, g)?;
        }
        Ok(p)
    }

    fn error_limit(eps: &Q) -> Q {
        eps / qi(10)
    }

    /// Points `s(x)` for all elements `s` reachable within `len` letters,
    /// deduplicated and sorted.
    pub fn orbit_set(&self, x: &Point, len: usize, eps: &Q) -> Result<Vec<Point>> {
        self.check_point(x)?;
        let work = self.work(len, eps);
        let (els, _) = self.elements_with(len, x.clone(), |p, g| self.step_point(&work, p, g))?;
        let limit = Self::error_limit(eps);
        let mut out = BTreeMap::new();
        for (_, _, p) in els {
            let e = p.error();
            if e - x.error() >= limit {
                return Err(Error::ErrorBudgetExceeded(fmt_q(&p.error()), fmt_q(&limit)));
            }
            out.insert(point_order(&p), p);
        }
        Ok(out.into_values().collect())
    }

    /// Points `y` with `s(y) = x` for some element reachable within `len`
    /// letters. `None` stands for the whole space (a constant generator
    /// hitting `x`).
    pub fn backward_set(&self, x: &Point, len: usize, eps: &Q) -> Result<Option<Vec<Point>>> {
        self.check_point(x)?;
        let work = self.work(len, eps);
        let (els, _) = self.elements(len)?;
        let limit = Self::error_limit(eps);
        let mut out = BTreeMap::new();
        // preimage sets of x under word suffixes; every suffix of a listed
        // word is computed before the word itself when scanning by length
        let mut memo: HashMap<Vec<usize>, Vec<Point>> = HashMap::new();
        let mut els = els;
        els.sort_by_key(|(_, w)| w.len());
        for (_, word) in els {
            let cur = self.back_suffix(&work, &word, x, &mut memo)?;
            let Some(cur) = cur else { return Ok(None) };
            for p in cur {
                if p.error() >= limit {
                    return Err(Error::ErrorBudgetExceeded(fmt_q(&p.error()), fmt_q(&limit)));
                }
                out.insert(point_order(&p), p);
            }
            if out.len() > ELEMENT_CAP {
                return Err(Error::BudgetExceeded(out.len()));
            }
        }
        Ok(Some(out.into_values().collect()))
    }

    /// Preimages of `x` under the word (applied left to right), memoized by
    /// suffix. `None` stands for the whole continuous space.
    fn back_suffix(
        &self,
        work: &[WorkGen],
        word: &[usize],
        x: &Point,
        memo: &mut HashMap<Vec<usize>, Vec<Point>>,
    ) -> Result<Option<Vec<Point>>> {
        if word.is_empty() {
            return Ok(Some(vec![x.clone()]));
        }
        if let Some(v) = memo.get(word) {
            return Ok(Some(v.clone()));
        }
        let Some(rest) = self.back_suffix(work, &word[1..], x, memo)? else { return Ok(None) };
        let mut next = Vec::new();
        for p in &rest {
            match self.step_back(work, p, word[0])? {
                None => match self.space.finite_size() {
                    Some(size) => next.extend((0..size).map(Point::Element)),
                    None => return Ok(None),
                },
                Some(ps) => next.extend(ps),
            }
        }
        next.sort_by_key(point_order);
        next.dedup();
        memo.insert(word.to_vec(), next.clone());
        Ok(Some(next))
    }

    /// Preimages of `x` under one generator; `None` means every point.
    fn step_back(&self, work: &[WorkGen], x: &Point, g: usize) -> Result<Option<Vec<Point>>> {
        let wg = &work[g];
        Ok(match (&wg.map, x) {
            (GeneratorMap::Constant(c), _) => {
                if c == x {
                    None
                } else if x.is_exact() || !matches!(x, Point::Real { .. }) {
                    Some(vec![])
                } else {
                    return Err(Error::Unsupported("preimages of approximate points under constants".into()));
                }
            }
            (GeneratorMap::Pl(f), Point::Real { value, error }) => {
                let min_slope = f.slopes().iter().map(|s| s.abs()).min().unwrap();
                if min_slope.is_zero() {
                    return Err(Error::UnsupportedGenerator("fibres of flat pieces".into()));
                }
                let e = error / min_slope;
                Some(f.point_preimages(value).into_iter().map(|y| Point::approx(y, e.clone())).collect())
            }
            (GeneratorMap::Rotation { .. }, Point::Real { value, error }) => {
                Some(vec![Point::approx(frac(&(value - wg.shift.as_ref().unwrap())), error + &wg.delta)])
            }
            _ => return Err(Error::SpaceMismatch(format!("generator {} cannot act on {x}", wg.map))),
        })
    }

    /// Image of a region under generator `g`, as inner and outer bounds of
    /// the true image.
    pub fn step_region(&self, work_len: usize, eps: &Q, r: &Bounds, g: usize) -> Result<Bounds> {
        let work = self.work(work_len, eps);
        self.step_bounds(&work[g], r)
    }

    fn step_bounds(&self, wg: &WorkGen, r: &Bounds) -> Result<Bounds> {
        Ok(match (&wg.map, &r.inner, &r.outer) {
            (GeneratorMap::Constant(c), _, _) => {
                let reg = match c {
                    Point::Element(i) => Region::Finite(vec![*i]),
                    Point::Real { value, .. } => Region::interval(Interval::point(value.clone())),
                    _ => return Err(Error::UnsupportedGenerator(wg.map.to_string())),
                };
                if r.outer.is_empty() {
                    Bounds::exact(empty_like(&reg))
                } else if r.inner.is_empty() {
                    Bounds { inner: empty_like(&reg), outer: reg }
                } else {
                    Bounds::exact(reg)
                }
            }
            (GeneratorMap::Pl(f), Region::Intervals(i), Region::Intervals(o)) => Bounds {
                inner: Region::Intervals(f.image_once(i)),
                outer: Region::Intervals(f.image_once(o)),
            },
            (GeneratorMap::Rotation { .. }, Region::Intervals(i), Region::Intervals(o)) => {
                let rot = wg.rot.as_ref().unwrap();
                Bounds {
                    inner: Region::Intervals(circle_shrink(&rot.image_once(i), &wg.delta)),
                    outer: Region::Intervals(circle_expand(&rot.image_once(o), &wg.delta)),
                }
            }
            _ => return Err(Error::SpaceMismatch(format!("generator {} cannot act on this region", wg.map))),
        })
    }

    /// Elements within `len` letters with their region image bounds.
    pub fn region_images(&self, u: &Region, len: usize, eps: &Q) -> Result<(Vec<(ElementKey, Bounds)>, bool)> {
        let work = self.work(len, eps);
        let (els, closed) = self.elements_with(len, Bounds::exact(u.clone()), |b, g| self.step_bounds(&work[g], b))?;
        Ok((els.into_iter().map(|(k, _, b)| (k, b)).collect(), closed))
    }

    /// Elements within `len` letters with the images of `x`.
    pub fn point_images(&self, x: &Point, len: usize, eps: &Q) -> Result<(Vec<(ElementKey, Point)>, bool)> {
        self.check_point(x)?;
        let work = self.work(len, eps);
        let (els, closed) = self.elements_with(len, x.clone(), |p, g| self.step_point(&work, p, g))?;
        Ok((els.into_iter().map(|(k, _, p)| (k, p)).collect(), closed))
    }

    /// Spot check of commutativity on a rational grid (exact generators only).
    pub fn verify_abelian(&self) -> Tri {
        if self.has_irrational_rotation() {
            // commutation of an approximate rotation is decided on keys
            let ks: Vec<ElementKey> = (0..self.generators.len()).map(|g| self.generator_key(g)).collect();
            for a in 0..ks.len() {
                for b in 0..ks.len() {
                    let ab = self.extend_key(&ks[a], &[a], b);
                    let ba = self.extend_key(&ks[b], &[b], a);
                    if matches!(ab, ElementKey::Word(_)) || matches!(ba, ElementKey::Word(_)) {
                        return Tri::Unknown;
                    }
                    if ab != ba {
                        return Tri::False;
                    }
                }
            }
            return Tri::True;
        }
        let grid: Vec<Point> = match &self.space {
            Space::Finite { n_max } => (0..=*n_max).map(Point::Element).collect(),
            _ => (0..64).map(|j| Point::exact(Q::new(BigInt::from(j), BigInt::from(64)))).collect(),
        };
        let eps = Q::one();
        for a in 0..self.generators.len() {
            for b in a + 1..self.generators.len() {
                for x in &grid {
                    let ab = self.act(&[a, b], x, &eps);
                    let ba = self.act(&[b, a], x, &eps);
                    if ab.is_ok() && ab != ba {
                        return Tri::False;
                    }
                }
            }
        }
        Tri::True
    }

    /// Every generator is onto.
    pub fn is_central(&self) -> bool {
        self.generators.iter().all(|g| match g {
            GeneratorMap::Pl(f) => {
                let whole = self.space.whole();
                let w = whole.as_intervals().unwrap();
                &f.image_once(w) == w
            }
            GeneratorMap::Rotation { .. } => true,
            GeneratorMap::Constant(_) => self.space.finite_size() == Some(1),
        })
    }
}

impl fmt::Display for SemigroupAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "action[{}] on {}", g.join(";"), self.space)
    }
}

/// Inner and outer bounds for an image computed with approximate maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub inner: Region,
    pub outer: Region,
}

impl Bounds {
    pub fn exact(r: Region) -> Self {
        Bounds { inner: r.clone(), outer: r }
    }

    pub fn is_exact(&self) -> bool {
        self.inner == self.outer
    }

    /// Does the true image meet `v`?
    pub fn meets(&self, v: &Region) -> Tri {
        let hit = |r: &Region| match (r, v) {
            (Region::Intervals(a), Region::Intervals(b)) => a.intersects(b),
            (Region::Finite(a), Region::Finite(b)) => a.iter().any(|x| b.binary_search(x).is_ok()),
            _ => false,
        };
        if hit(&self.inner) {
            Tri::True
        } else if !hit(&self.outer) {
            Tri::False
        } else {
            Tri::Unknown
        }
    }

    /// Does the true image contain `x`?
    pub fn contains(&self, x: &Point) -> Tri {
        let inner = region_contains_circle(&self.inner, x);
        if inner == Tri::True {
            return Tri::True;
        }
        match region_contains_circle(&self.outer, x) {
            Tri::False => Tri::False,
            _ => Tri::Unknown,
        }
    }
}

fn empty_like(r: &Region) -> Region {
    match r {
        Region::Finite(_) => Region::Finite(vec![]),
        _ => Region::Intervals(IntervalUnion::empty()),
    }
}

fn circle() -> Interval {
    Interval::new(Q::zero(), Q::one(), true, false)
}

/// Ends at `0` and `1` are joined on the circle when both are present.
fn circle_seams(u: &IntervalUnion) -> Vec<Q> {
    let parts = u.parts();
    let starts = parts.first().is_some_and(|p| p.lo == crate::region::Ext::Fin(Q::zero()) && p.lo_closed);
    let ends = parts.last().is_some_and(|p| p.hi == crate::region::Ext::Fin(Q::one()));
    if starts && ends { vec![Q::zero(), Q::one()] } else { vec![] }
}

pub fn circle_shrink(u: &IntervalUnion, r: &Q) -> IntervalUnion {
    if u.parts() == [circle()] {
        return u.clone();
    }
    u.shrink(r, &circle_seams(u))
}

pub fn circle_expand(u: &IntervalUnion, r: &Q) -> IntervalUnion {
    if r.is_zero() || u.is_empty() {
        return u.clone();
    }
    let comp = u.complement_in(&circle());
    circle_shrink(&comp, r).complement_in(&circle())
}

/// The error ball of a circle point, reduced modulo one.
pub fn circle_ball(value: &Q, error: &Q) -> IntervalUnion {
    if error >= &crate::rational::half() {
        return IntervalUnion::single(circle());
    }
    PlMap::rotation(Q::zero()).image_once(&IntervalUnion::single(Interval::closed(value - error, value + error)))
}

/// Circle-aware membership with the point's error ball.
pub fn region_contains_circle(r: &Region, x: &Point) -> Tri {
    match (r, x) {
        (Region::Intervals(u), Point::Real { value, error }) if !error.is_zero() => {
            let ball = circle_ball(value, error);
            if ball.is_subset(u) {
                Tri::True
            } else if !ball.intersects(u) {
                Tri::False
            } else {
                Tri::Unknown
            }
        }
        _ => region_contains(r, x).unwrap_or(Tri::Unknown),
    }
}

/// Sort key for point sets.
fn point_order(p: &Point) -> (u8, Q, usize, Q) {
    match p {
        Point::Real { value, error } => (0, value.clone(), 0, error.clone()),
        Point::Element(i) => (1, Q::zero(), *i, Q::zero()),
        Point::Infinity => (2, Q::zero(), 0, Q::zero()),
        _ => (3, Q::zero(), 0, Q::zero()),
    }
}

/// Holds iff every basis region at `eps` contains a point of the set
/// (error balls included).
pub fn eps_dense(space: &Space, points: &[Point], eps: &Q) -> Result<Verdict> {
    let limit = eps / qi(10);
    if let Some(p) = points.iter().find(|p| p.error() > limit) {
        return Err(Error::ErrorBudgetExceeded(fmt_q(&p.error()), fmt_q(&limit)));
    }
    let regions = basis(space, eps)?;
    let mut reals: Vec<(&Q, &Point)> = points.iter().filter_map(|p| p.value().map(|v| (v, p))).collect();
    reals.sort_by(|a, b| a.0.cmp(b.0));
    // a point whose error ball lies inside an interval has its value there
    let inside = |r: &Region| -> bool {
        if let Region::Intervals(u) = r {
            return u.parts().iter().any(|part| {
                let from = match &part.lo {
                    Ext::Fin(lo) => reals.partition_point(|(v, _)| *v < lo),
                    Ext::Inf => reals.len(),
                };
                reals[from..]
                    .iter()
                    .take_while(|(v, _)| match &part.hi {
                        Ext::Fin(hi) => *v <= hi,
                        Ext::Inf => true,
                    })
                    .any(|(_, p)| region_contains_circle(r, p) == Tri::True)
            }) || points.iter().any(|p| p.value().is_none() && region_contains_circle(r, p) == Tri::True);
        }
        points.iter().any(|p| region_contains_circle(r, p) == Tri::True)
    };
    for r in &regions {
        if !inside(r) {
            return Ok(Verdict::fails(Evidence::RegionWitness {
                region: r.clone(),
                reason: format!("none of {} points inside", points.len()),
            }));
        }
    }
    Ok(Verdict::holds(Evidence::Certificate(format!("{} points meet all {} basis regions", points.len(), regions.len()))))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureReport {
    pub central: Verdict,
    pub almost_open: Verdict,
    pub irreducible: Verdict,
}

/// Centrality, almost-openness and irreducibility of the generators, tested
/// on the basis at `eps`.
pub fn structure_report(a: &SemigroupAction, eps: &Q) -> Result<StructureReport> {
    let regions = basis(&a.space, eps)?;
    let whole = a.space.whole();
    let mut central = Verdict::holds(Evidence::Certificate("every generator is onto".into()));
    let mut almost_open = Verdict::holds(Evidence::Certificate(format!("images of {} basis regions have interior", regions.len())));
    let mut irreducible = Verdict::holds(Evidence::Certificate(format!("at resolution {}", fmt_q(eps))));
    for (gi, g) in a.generators.iter().enumerate() {
        match g {
            GeneratorMap::Constant(c) => {
                if a.space.finite_size() != Some(1) {
                    let reason = format!("generator {gi} has image {{{c}}}");
                    if central.is_holds() {
                        central = Verdict::fails(Evidence::PointWitness { point: c.clone(), reason: reason.clone() });
                        irreducible = Verdict::fails(Evidence::PointWitness { point: c.clone(), reason: format!("{reason}, not onto") });
                    }
                }
                // a singleton image is open only at an isolated point
                let isolated = matches!(c, Point::Element(i) if *i != 0);
                if !isolated && almost_open.is_holds() {
                    almost_open = Verdict::fails(Evidence::RegionWitness {
                        region: regions[0].clone(),
                        reason: format!("generator {gi} maps it to the point {c}"),
                    });
                }
            }
            GeneratorMap::Rotation { .. } => {}
            GeneratorMap::Pl(f) => {
                let w = whole.as_intervals()?;
                if &f.image_once(w) != w && central.is_holds() {
                    central = Verdict::fails(Evidence::RegionWitness {
                        region: Region::Intervals(f.image_once(w)),
                        reason: format!("image of generator {gi}"),
                    });
                    irreducible = central.clone();
                }
                for r in &regions {
                    let u = r.as_intervals()?;
                    if !f.image_once(u).has_interior() && almost_open.is_holds() {
                        almost_open = Verdict::fails(Evidence::RegionWitness {
                            region: r.clone(),
                            reason: format!("generator {gi} image has empty interior"),
                        });
                    }
                    let universe = a.space.whole_interval()?;
                    let rest = u.complement_in(&universe);
                    if irreducible.is_holds() && !rest.is_empty() && &f.image_once(&rest) == w {
                        irreducible = Verdict::fails(Evidence::RegionWitness {
                            region: Region::Intervals(rest),
                            reason: format!("proper closed set mapped onto the space by generator {gi}"),
                        });
                    }
                }
            }
        }
    }
    Ok(StructureReport { central, almost_open, irreducible })
}

/// Number of distinct elements, by word length, within `len` letters.
pub fn growth(a: &SemigroupAction, len: usize) -> Result<Vec<usize>> {
    let (els, _) = a.elements(len)?;
    let mut counts = vec![0; len];
    for (_, w) in els {
        counts[w.len() - 1] += 1;
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn dai_doubling_of_a_third() {
        let a = SemigroupAction::dai();
        let p = a.act(&[0], &Point::exact(q(1, 3)), &q(1, 50)).unwrap();
        assert_eq!(p, Point::exact(q(2, 3)));
        let back = a.act(&[1, 2], &Point::exact(q(1, 3)), &q(1, 50)).unwrap();
        assert_eq!(back.value(), Some(&q(1, 3)));
        let (_, d) = a.angle_approximation(2, &q(1, 50)).unwrap();
        assert_eq!(back.error(), qi(2) * d);
    }

    #[test]
    fn constants_absorb() {
        let a = SemigroupAction::pnst(8);
        for w in [vec![3], vec![1, 2, 3], vec![0, 0, 3]] {
            assert_eq!(a.act(&w, &Point::Element(5), &q(1, 8)).unwrap(), Point::Element(3));
        }
        let orbit = a.orbit_set(&Point::Element(2), 1, &q(1, 8)).unwrap();
        assert_eq!(orbit.len(), 9);
        let (els, closed) = a.elements(3).unwrap();
        assert!(closed);
        assert_eq!(els.len(), 9);
        let back = a.backward_set(&Point::Element(4), 1, &q(1, 8)).unwrap().unwrap();
        assert_eq!(back.len(), 9);
    }

    #[test]
    fn rational_rotation_orbit_has_three_points() {
        let a = SemigroupAction::new(Space::Circle, vec![GeneratorMap::rotation(Angle::Rational(q(1, 3)))], true).unwrap();
        let o = a.orbit_set(&Point::exact(q(0, 1)), 10, &q(1, 8)).unwrap();
        assert_eq!(o.len(), 3);
    }

    #[test]
    fn doubling_backward_tree() {
        let a = SemigroupAction::new(Space::Circle, vec![GeneratorMap::Pl(PlMap::doubling())], true).unwrap();
        let b = a.backward_set(&Point::exact(q(0, 1)), 3, &q(1, 8)).unwrap().unwrap();
        let vals: Vec<Q> = b.iter().map(|p| p.value().unwrap().clone()).collect();
        let want: Vec<Q> = (0..8).map(|k| q(k, 8)).collect();
        assert_eq!(vals, want);
    }

    #[test]
    fn structure_examples() {
        let pn = structure_report(&SemigroupAction::pnst(8), &q(1, 4)).unwrap();
        assert!(pn.almost_open.is_fails());
        assert!(pn.central.is_fails());
        let d = SemigroupAction::new(Space::Circle, vec![GeneratorMap::Pl(PlMap::doubling())], true).unwrap();
        let r = structure_report(&d, &q(1, 8)).unwrap();
        assert!(r.central.is_holds() && r.almost_open.is_holds());
        let t = SemigroupAction::new(Space::Unit, vec![GeneratorMap::Pl(PlMap::tent())], true).unwrap();
        let r = structure_report(&t, &q(1, 10)).unwrap();
        match &r.irreducible.evidence {
            Evidence::RegionWitness { region, .. } => assert_eq!(region.to_string(), "[1/10,1]"),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn dai_keys_are_exact_normal_forms() {
        let a = SemigroupAction::dai();
        // rotation followed by its inverse is the identity key shape
        let k = a.extend_key(&a.generator_key(1), &[1], 2);
        assert_eq!(k, ElementKey::Affine { mult: 1, alpha: 0, shift: Q::zero() });
        assert_eq!(a.verify_abelian(), Tri::False);
        let (els, closed) = a.elements(12).unwrap();
        assert!(!closed);
        assert!(els.len() >= 40);
    }
}
