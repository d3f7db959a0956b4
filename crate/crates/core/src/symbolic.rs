//! Shift spaces: full shifts, subshifts of finite type and substitution
//! subshifts, with exact cylinder calculus.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::hitting::FamilyCertificate;
use crate::point::{Point, Seq, SymbolicPoint};
use crate::region::{Cylinder, CylinderUnion, Region};
use crate::verdict::{Evidence, Verdict};

/// Longest word length `language` will enumerate.
pub const LANGUAGE_CAP: usize = 4096;

pub type Word = Vec<u8>;

pub fn word_str(w: &[u8]) -> String {
    w.iter().map(|a| char::from(b'0' + a)).collect()
}

pub fn parse_word(s: &str) -> Option<Word> {
    s.bytes().map(|b| b.checked_sub(b'0').filter(|d| *d < 10)).collect()
}

/// Symbol-to-word substitution rule.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Substitution {
    rules: Vec<Word>,
}

impl Substitution {
    pub fn new(rules: Vec<Word>) -> Result<Self> {
        let k = rules.len();
        if k < 2 {
            return Err(Error::InvalidParameter("substitution needs at least two symbols".into()));
        }
        if rules.iter().any(|r| r.is_empty() || r.iter().any(|&a| a as usize >= k)) {
            return Err(Error::InvalidParameter("substitution images must be nonempty words over the alphabet".into()));
        }
        Ok(Substitution { rules })
    }

    /// `0 → 01, 1 → 10`.
    pub fn morse() -> Self {
        Substitution { rules: vec![vec![0, 1], vec![1, 0]] }
    }

    pub fn alphabet(&self) -> u8 {
        self.rules.len() as u8
    }

    pub fn rules(&self) -> &[Word] {
        &self.rules
    }

    pub fn apply(&self, w: &[u8]) -> Word {
        w.iter().flat_map(|&a| self.rules[a as usize].iter().copied()).collect()
    }

    pub fn iterate(&self, seed: u8, n: usize) -> Word {
        let mut w = vec![seed];
        for _ in 0..n {
            w = self.apply(&w);
        }
        w
    }

    fn uniform_length(&self) -> Option<usize> {
        let l = self.rules[0].len();
        self.rules.iter().all(|r| r.len() == l).then_some(l)
    }

    fn grows_from(&self, seed: u8) -> bool {
        let r = &self.rules[seed as usize];
        r[0] == seed && r.len() > 1
    }

    /// Prefix of the fixed point starting with `seed`, of length at least
    /// `min_len`.
    pub fn fixed_point_prefix(&self, seed: u8, min_len: usize) -> Word {
        assert!(self.grows_from(seed), "seed must be a growing prefix-fixed symbol");
        let mut w = vec![seed];
        while w.len() < min_len {
            w = self.apply(&w);
        }
        w
    }

    /// `k`-th symbol of the fixed point.
    pub fn fixed_point_symbol(&self, seed: u8, k: u64) -> u8 {
        match self.uniform_length() {
            Some(l) => {
                let l = l as u64;
                if k == 0 {
                    return seed;
                }
                let parent = self.fixed_point_symbol(seed, k / l);
                self.rules[parent as usize][(k % l) as usize]
            }
            None => self.fixed_point_prefix(seed, k as usize + 1)[k as usize],
        }
    }

    /// Some power of the incidence matrix is positive.
    pub fn is_primitive(&self) -> bool {
        let k = self.rules.len();
        let m: Vec<Vec<u8>> = (0..k)
            .map(|i| (0..k).map(|j| u8::from(self.rules[i].contains(&(j as u8)))).collect())
            .collect();
        primitive_power(&m).is_some()
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.rules.iter().enumerate().map(|(i, r)| format!("{i}:{}", word_str(r))).collect();
        f.write_str(&s.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ShiftKind {
    Full { alphabet: u8 },
    Sft { matrix: Vec<Vec<u8>> },
    Substitution { rule: Substitution },
}

/// Stabilised iterate of a substitution whose factors of length up to
/// `factor_len` are exactly the language at that length.
#[derive(Debug, Default)]
struct ReferenceCache {
    word: Option<(usize, Arc<Word>)>,
}

#[derive(Clone, Debug)]
pub struct Subshift {
    pub kind: ShiftKind,
    pub two_sided: bool,
    cache: Arc<Mutex<ReferenceCache>>,
}

impl PartialEq for Subshift {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.two_sided == other.two_sided
    }
}

impl Eq for Subshift {}

impl std::hash::Hash for Subshift {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.kind.hash(state);
        self.two_sided.hash(state);
    }
}

fn validate_matrix(m: &[Vec<u8>]) -> Result<()> {
    let k = m.len();
    if k == 0 || m.iter().any(|r| r.len() != k) {
        return Err(Error::MalformedMatrix("matrix must be square and nonempty".into()));
    }
    if m.iter().flatten().any(|&e| e > 1) {
        return Err(Error::MalformedMatrix("entries must be 0 or 1".into()));
    }
    if let Some(i) = (0..k).find(|&i| m[i].iter().all(|&e| e == 0)) {
        return Err(Error::MalformedMatrix(format!("row {i} is zero")));
    }
    if let Some(j) = (0..k).find(|&j| m.iter().all(|r| r[j] == 0)) {
        return Err(Error::MalformedMatrix(format!("column {j} is zero")));
    }
    Ok(())
}

impl Subshift {
    fn with(kind: ShiftKind, two_sided: bool) -> Self {
        Subshift { kind, two_sided, cache: Arc::new(Mutex::new(ReferenceCache::default())) }
    }

    pub fn full(alphabet: u8, two_sided: bool) -> Result<Self> {
        if alphabet < 2 {
            return Err(Error::InvalidParameter("alphabet needs at least two symbols".into()));
        }
        Ok(Self::with(ShiftKind::Full { alphabet }, two_sided))
    }

    pub fn sft(matrix: Vec<Vec<u8>>, two_sided: bool) -> Result<Self> {
        validate_matrix(&matrix)?;
        Ok(Self::with(ShiftKind::Sft { matrix }, two_sided))
    }

    pub fn substitution(rule: Substitution, two_sided: bool) -> Result<Self> {
        if !rule.grows_from(0) {
            return Err(Error::InvalidParameter("symbol 0 must start its own image".into()));
        }
        Ok(Self::with(ShiftKind::Substitution { rule }, two_sided))
    }

    /// Golden-mean shift (the word `11` is forbidden).
    pub fn golden_mean(two_sided: bool) -> Self {
        Self::sft(vec![vec![1, 1], vec![1, 0]], two_sided).unwrap()
    }

    pub fn morse(two_sided: bool) -> Self {
        Self::substitution(Substitution::morse(), two_sided).unwrap()
    }

    pub fn alphabet(&self) -> u8 {
        match &self.kind {
            ShiftKind::Full { alphabet } => *alphabet,
            ShiftKind::Sft { matrix } => matrix.len() as u8,
            ShiftKind::Substitution { rule } => rule.alphabet(),
        }
    }

    pub fn sidedness(&self) -> &'static str {
        if self.two_sided { "two-sided" } else { "one-sided" }
    }

    /// Iterate of the substitution whose length-`factor_len` factors have
    /// stabilised.
    pub(crate) fn reference(&self, factor_len: usize) -> Arc<Word> {
        let ShiftKind::Substitution { rule } = &self.kind else {
            panic!("reference word only exists for substitution subshifts");
        };
        let mut cache = self.cache.lock().unwrap();
        if let Some((len, w)) = &cache.word {
            if *len >= factor_len {
                return w.clone();
            }
        }
        let factors = |w: &[u8]| -> HashSet<Vec<u8>> {
            if w.len() < factor_len {
                return HashSet::new();
            }
            w.windows(factor_len).map(|s| s.to_vec()).collect()
        };
        let mut cur = rule.fixed_point_prefix(0, factor_len.max(2));
        let mut prev = factors(&cur);
        loop {
            let next = rule.apply(&cur);
            let nf = factors(&next);
            let stable = nf == prev && !prev.is_empty();
            cur = next;
            prev = nf;
            if stable {
                break;
            }
        }
        let w = Arc::new(cur);
        cache.word = Some((factor_len, w.clone()));
        w
    }

    /// All words of length `len` occurring in the subshift, sorted.
    pub fn language(&self, len: usize) -> Result<BTreeSet<Word>> {
        if len > LANGUAGE_CAP {
            return Err(Error::CapExceeded(len, LANGUAGE_CAP));
        }
        Ok(match &self.kind {
            ShiftKind::Full { alphabet } => crate::space::all_words(*alphabet, len).into_iter().collect(),
            ShiftKind::Sft { matrix } => {
                let mut words: Vec<Word> = if len == 0 { vec![vec![]] } else { (0..matrix.len() as u8).map(|a| vec![a]).collect() };
                for _ in 1..len {
                    words = words
                        .into_iter()
                        .flat_map(|w| {
                            let last = *w.last().unwrap() as usize;
                            (0..matrix.len())
                                .filter(move |&b| matrix[last][b] == 1)
                                .map(move |b| {
                                    let mut v = w.clone();
                                    v.push(b as u8);
                                    v
                                })
                        })
                        .collect();
                }
                words.into_iter().collect()
            }
            ShiftKind::Substitution { .. } => {
                if len == 0 {
                    return Ok([vec![]].into_iter().collect());
                }
                let r = self.reference(len);
                r.windows(len).map(|w| w.to_vec()).collect()
            }
        })
    }

    pub fn contains_word(&self, w: &[u8]) -> bool {
        self.admits(&w.iter().enumerate().map(|(i, &a)| (i as i64, a)).collect::<Vec<_>>())
    }

    /// Is there a point of the subshift with the given coordinates fixed?
    pub fn admits(&self, constraints: &[(i64, u8)]) -> bool {
        let mut fixed: BTreeMap<i64, u8> = BTreeMap::new();
        for &(i, a) in constraints {
            if a >= self.alphabet() {
                return false;
            }
            if let Some(prev) = fixed.insert(i, a) {
                if prev != a {
                    return false;
                }
            }
        }
        if fixed.is_empty() {
            return true;
        }
        if !self.two_sided && fixed.keys().next().is_some_and(|&i| i < 0) {
            return false;
        }
        let lo = *fixed.keys().next().unwrap();
        let hi = *fixed.keys().next_back().unwrap();
        match &self.kind {
            ShiftKind::Full { .. } => true,
            ShiftKind::Sft { matrix } => {
                let k = matrix.len();
                let allowed = |i: i64| -> Vec<bool> {
                    match fixed.get(&i) {
                        Some(&a) => (0..k).map(|b| b == a as usize).collect(),
                        None => vec![true; k],
                    }
                };
                let mut cur = allowed(lo);
                for i in lo + 1..=hi {
                    let mask = allowed(i);
                    let next: Vec<bool> = (0..k)
                        .map(|b| mask[b] && (0..k).any(|a| cur[a] && matrix[a][b] == 1))
                        .collect();
                    if !next.iter().any(|&x| x) {
                        return false;
                    }
                    cur = next;
                }
                true
            }
            ShiftKind::Substitution { .. } => {
                let span = (hi - lo + 1) as usize;
                let r = self.reference(span);
                let cons: Vec<(usize, u8)> = fixed.iter().map(|(&i, &a)| ((i - lo) as usize, a)).collect();
                r.windows(span).any(|w| cons.iter().all(|&(i, a)| w[i] == a))
            }
        }
    }

    /// `(start, period)` such that the boolean powers `M^m` repeat with the
    /// given period from `m = start` on; `None` when no such profile exists.
    pub fn power_profile(&self) -> Option<(u64, u64)> {
        match &self.kind {
            ShiftKind::Full { .. } => Some((1, 1)),
            ShiftKind::Sft { matrix } => {
                let mut seen: BTreeMap<Vec<Vec<u8>>, u64> = BTreeMap::new();
                let mut cur = matrix.clone();
                let mut m = 1u64;
                loop {
                    if let Some(&first) = seen.get(&cur) {
                        return Some((first, m - first));
                    }
                    seen.insert(cur.clone(), m);
                    cur = bool_mul(&cur, matrix);
                    m += 1;
                }
            }
            ShiftKind::Substitution { .. } => None,
        }
    }

    /// Exact `σ^n(c)` for full shifts and subshifts of finite type.
    pub fn image_cylinder(&self, c: &Cylinder, n: u64) -> Result<CylinderUnion> {
        if c.word.is_empty() {
            return Ok(CylinderUnion::whole());
        }
        if self.two_sided {
            return Ok(CylinderUnion::single(Cylinder::new(c.offset - n as i64, c.word.clone())));
        }
        if c.offset < 0 {
            return Err(Error::SpaceMismatch("one-sided cylinders need nonnegative offsets".into()));
        }
        let n = n as i64;
        let new_offset = c.offset - n;
        match &self.kind {
            ShiftKind::Full { .. } | ShiftKind::Sft { .. } => {
                let keep_from = (-new_offset).max(0) as usize;
                if keep_from < c.word.len() {
                    let suffix = c.word[keep_from..].to_vec();
                    return Ok(CylinderUnion::single(Cylinder::new(new_offset.max(0), suffix)));
                }
                match &self.kind {
                    ShiftKind::Full { .. } => Ok(CylinderUnion::whole()),
                    ShiftKind::Sft { matrix } => {
                        // first coordinate of the image is reached from the last symbol of c
                        let steps = n - c.end() + 1;
                        let mut cur = vec![false; matrix.len()];
                        cur[*c.word.last().unwrap() as usize] = true;
                        for _ in 0..steps {
                            cur = (0..matrix.len())
                                .map(|b| (0..matrix.len()).any(|a| cur[a] && matrix[a][b] == 1))
                                .collect();
                        }
                        if cur.iter().all(|&x| x) {
                            return Ok(CylinderUnion::whole());
                        }
                        Ok(CylinderUnion::from_cylinders(
                            (0..matrix.len())
                                .filter(|&b| cur[b])
                                .map(|b| Cylinder::new(0, vec![b as u8]))
                                .collect(),
                        ))
                    }
                    _ => unreachable!(),
                }
            }
            ShiftKind::Substitution { .. } => {
                Err(Error::Unsupported("images of cylinders in substitution subshifts".into()))
            }
        }
    }

    pub fn image_region(&self, r: &CylinderUnion, n: u64) -> Result<CylinderUnion> {
        let mut parts = Vec::new();
        for c in r.cylinders() {
            parts.extend(self.image_cylinder(c, n)?.cylinders().iter().cloned());
        }
        Ok(CylinderUnion::from_cylinders(parts))
    }

    /// Does the cylinder union cover the whole subshift?
    pub fn covers(&self, r: &CylinderUnion) -> Result<bool> {
        if r.is_whole() {
            return Ok(true);
        }
        let lo = r.cylinders().iter().map(|c| c.offset).min().unwrap_or(0);
        let hi = r.cylinders().iter().map(|c| c.end()).max().unwrap_or(0);
        let len = (hi - lo) as usize;
        for w in self.language(len)? {
            let inside = r.cylinders().iter().any(|c| c.constraints().all(|(i, a)| w[(i - lo) as usize] == a));
            if !inside {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Does some cylinder of the region meet the subshift?
    pub fn nonempty(&self, r: &Region) -> bool {
        match r {
            Region::Cylinders(c) => c.cylinders().iter().any(|cyl| {
                self.admits(&cyl.constraints().collect::<Vec<_>>())
            }),
            _ => false,
        }
    }

    /// Does the point lie in the subshift (checked on the window `[lo, hi)`)?
    pub fn point_in_window(&self, p: &SymbolicPoint, lo: i64, hi: i64) -> bool {
        let lo = if self.two_sided { lo } else { lo.max(0) };
        self.admits(&(lo..hi).map(|i| (i, p.symbol(i))).collect::<Vec<_>>())
    }

    /// Points of the subshift used as a net: periodic points for full shifts
    /// and SFTs, shifts of the fixed point for substitutions.
    pub fn net_points(&self, len: usize) -> Result<Vec<SymbolicPoint>> {
        match &self.kind {
            ShiftKind::Substitution { rule } => {
                let base = if self.two_sided { morse_like_point(rule) } else { SymbolicPoint::one_sided(Seq::fixed_point(rule.clone(), 0)) };
                let count = self.language(len)?.len().max(1) * 2;
                Ok((0..count as i64).map(|i| base.shifted(i)).collect())
            }
            _ => {
                let mut out = Vec::new();
                for w in self.language(len)? {
                    let mut cyc = w.clone();
                    cyc.push(w[0]);
                    if !self.contains_word(&cyc) {
                        continue;
                    }
                    let right = Seq::periodic(vec![], w.clone());
                    out.push(if self.two_sided {
                        let mut rev = w.clone();
                        rev.reverse();
                        SymbolicPoint::two_sided(Seq::periodic(vec![], rev), right)
                    } else {
                        SymbolicPoint::one_sided(right)
                    });
                }
                Ok(out)
            }
        }
    }
}

impl fmt::Display for Subshift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ShiftKind::Full { alphabet } => write!(f, "full{alphabet}"),
            ShiftKind::Sft { matrix } => {
                let rows: Vec<String> = matrix.iter().map(|r| word_str(r)).collect();
                write!(f, "sft[{}]", rows.join(";"))
            }
            ShiftKind::Substitution { rule } => write!(f, "subst[{rule}]"),
        }?;
        write!(f, "/{}", self.sidedness())
    }
}

fn bool_mul(a: &[Vec<u8>], b: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let k = a.len();
    (0..k)
        .map(|i| (0..k).map(|j| u8::from((0..k).any(|l| a[i][l] == 1 && b[l][j] == 1))).collect())
        .collect()
}

/// Smallest `N <= (k-1)^2 + 1` with `M^N > 0` entrywise.
pub fn primitive_power(m: &[Vec<u8>]) -> Option<u32> {
    let k = m.len();
    let bound = (k - 1) * (k - 1) + 1;
    let bin: Vec<Vec<u8>> = m.iter().map(|r| r.iter().map(|&e| u8::from(e > 0)).collect()).collect();
    let mut cur = bin.clone();
    for n in 1..=bound {
        if cur.iter().flatten().all(|&e| e == 1) {
            return Some(n as u32);
        }
        cur = bool_mul(&cur, &bin);
    }
    None
}

/// Two-sided point `p(k) = x(k)` for `k >= 0` and `p(-k-1) = x(k)`, with
/// `x` the fixed point of `rule` starting at 0.
pub fn morse_like_point(rule: &Substitution) -> SymbolicPoint {
    let x = Seq::fixed_point(rule.clone(), 0);
    SymbolicPoint::two_sided(x.clone(), x)
}

/// The symmetric two-sided Morse–Thue point.
pub fn morse_point() -> SymbolicPoint {
    morse_like_point(&Substitution::morse())
}

fn reachable(m: &[Vec<u8>], from: usize) -> Vec<bool> {
    let mut seen = vec![false; m.len()];
    let mut queue = VecDeque::from([from]);
    seen[from] = true;
    while let Some(a) = queue.pop_front() {
        for b in 0..m.len() {
            if m[a][b] == 1 && !seen[b] {
                seen[b] = true;
                queue.push_back(b);
            }
        }
    }
    seen
}

/// Strong connectivity of the transition graph.
pub fn sft_transitive(m: &[Vec<u8>]) -> Result<Verdict> {
    validate_matrix(m)?;
    for a in 0..m.len() {
        let r = reachable(m, a);
        if let Some(b) = (0..m.len()).find(|&b| !r[b]) {
            return Ok(Verdict::fails(Evidence::Unreachable { from: a, to: b }));
        }
    }
    Ok(Verdict::holds(Evidence::Certificate(format!("strongly connected on {} vertices", m.len()))))
}

/// Period of an irreducible graph: gcd of cycle lengths, from BFS levels.
pub fn graph_period(m: &[Vec<u8>]) -> u64 {
    let k = m.len();
    let mut level = vec![None; k];
    level[0] = Some(0u64);
    let mut queue = VecDeque::from([0usize]);
    let mut g = 0u64;
    while let Some(a) = queue.pop_front() {
        let la = level[a].unwrap();
        for b in 0..k {
            if m[a][b] != 1 {
                continue;
            }
            match level[b] {
                None => {
                    level[b] = Some(la + 1);
                    queue.push_back(b);
                }
                Some(lb) => g = crate::rational::gcd_u64(g, (la + 1).abs_diff(lb)),
            }
        }
    }
    g
}

/// Primitivity of an irreducible transition matrix.
pub fn sft_mixing(m: &[Vec<u8>]) -> Result<Verdict> {
    validate_matrix(m)?;
    if !sft_transitive(m)?.is_holds() {
        return Err(Error::NotIrreducible);
    }
    let period = graph_period(m);
    if period > 1 {
        return Ok(Verdict::fails(Evidence::Period { period }));
    }
    let power = primitive_power(m).expect("aperiodic irreducible matrices are primitive within the Wielandt bound");
    Ok(Verdict::holds(Evidence::PrimitivePower { power }))
}

/// Occurrence positions of `w` in `p` with start in `[0, h - |w|]`.
fn occurrences(p: &SymbolicPoint, w: &[u8], h: i64) -> Vec<i64> {
    let win = p.window(0, h);
    if win.len() < w.len() {
        return vec![];
    }
    win.windows(w.len()).enumerate().filter(|(_, s)| *s == w).map(|(i, _)| i as i64).collect()
}

/// Largest window length with no occurrence start, plus one.
fn max_gap(occ: &[i64], h: i64, wl: i64) -> Option<u64> {
    let first = *occ.first()?;
    let last = *occ.last().unwrap();
    let mut g = first + 1;
    for pair in occ.windows(2) {
        g = g.max(pair[1] - pair[0]);
    }
    g = g.max(h - wl + 1 - last);
    Some(g as u64)
}

/// Syndeticity certificate for the occurrences of `w` in the point.
pub fn occurrence_gap_in_point(p: &SymbolicPoint, w: &[u8], h: u64) -> Verdict {
    let h = h as i64;
    let wl = w.len() as i64;
    if let Some((start, period)) = p.eventual_period() {
        // eventually periodic: the window [0, start + period + |w|) decides everything
        let span = start + period + wl;
        let tail = occurrences(&p.shifted(start), w, period + wl);
        if tail.is_empty() {
            return Verdict::fails(Evidence::PointWitness {
                point: Point::Symbolic(p.clone()),
                reason: format!("{} never occurs after coordinate {start}", word_str(w)),
            });
        }
        let occ = occurrences(p, w, span.max(h));
        let g = max_gap(&occ, span.max(h), wl).unwrap();
        return Verdict::holds(Evidence::Family(FamilyCertificate::syndetic(g, span.max(h) as u64)));
    }
    let occ_h = occurrences(p, w, h);
    let occ_2h = occurrences(p, w, 2 * h);
    match (max_gap(&occ_h, h, wl), max_gap(&occ_2h, 2 * h, wl)) {
        (Some(g1), Some(g2)) if g1 == g2 => {
            Verdict::holds(Evidence::Family(FamilyCertificate::syndetic(g1, h as u64)))
        }
        (None, None) => Verdict::undetermined(format!("{} absent from [0,{})", word_str(w), 2 * h)),
        (a, b) => Verdict::undetermined(format!("gap not stable: {a:?} at H, {b:?} at 2H")),
    }
}

/// Syndeticity certificate for occurrences of `w` in the generating point of
/// a substitution subshift.
pub fn occurrence_gap(s: &Subshift, w: &[u8], h: u64) -> Result<Verdict> {
    let ShiftKind::Substitution { rule } = &s.kind else {
        return Err(Error::Unsupported("occurrence_gap needs a generating point; use occurrence_gap_in_point".into()));
    };
    if !s.contains_word(w) {
        return Err(Error::WordAbsent(word_str(w)));
    }
    let p = SymbolicPoint::one_sided(Seq::fixed_point(rule.clone(), 0));
    Ok(occurrence_gap_in_point(&p, w, h))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn morse_iterates_double_and_extend() {
        let m = Substitution::morse();
        for k in 0..8 {
            let a = m.iterate(0, k);
            let b = m.iterate(0, k + 1);
            assert_eq!(a.len(), 1 << k);
            assert_eq!(&b[..a.len()], &a[..]);
        }
        assert_eq!(word_str(&m.iterate(0, 4)), "0110100110010110");
        for k in 0..2000u64 {
            assert_eq!(m.fixed_point_symbol(0, k), (k.count_ones() % 2) as u8);
        }
    }

    #[test]
    fn languages() {
        let full = Subshift::full(2, false).unwrap();
        let l: Vec<String> = full.language(2).unwrap().iter().map(|w| word_str(w)).collect();
        assert_eq!(l, ["00", "01", "10", "11"]);
        let g = Subshift::golden_mean(false);
        let l: Vec<String> = g.language(2).unwrap().iter().map(|w| word_str(w)).collect();
        assert_eq!(l, ["00", "01", "10"]);
        let m = Subshift::morse(true);
        let l3 = m.language(3).unwrap();
        assert!(!l3.contains(&vec![0, 0, 0]) && !l3.contains(&vec![1, 1, 1]));
        assert_eq!(l3.len(), 6);
        assert!(matches!(full.language(LANGUAGE_CAP + 1), Err(Error::CapExceeded(..))));
    }

    #[test]
    fn cylinder_images() {
        let one = Subshift::full(2, false).unwrap();
        let c = Cylinder::new(0, vec![0, 1]);
        assert_eq!(one.image_cylinder(&c, 1).unwrap(), CylinderUnion::single(Cylinder::new(0, vec![1])));
        assert!(one.image_cylinder(&c, 2).unwrap().is_whole());
        let two = Subshift::full(2, true).unwrap();
        assert_eq!(two.image_cylinder(&c, 2).unwrap(), CylinderUnion::single(Cylinder::new(-2, vec![0, 1])));
        let g = Subshift::golden_mean(false);
        // from symbol 1 the next symbol must be 0
        let img = g.image_cylinder(&Cylinder::new(0, vec![1]), 1).unwrap();
        assert_eq!(img, CylinderUnion::single(Cylinder::new(0, vec![0])));
        assert!(g.image_cylinder(&Cylinder::new(0, vec![1]), 2).unwrap().is_whole());
    }

    #[test]
    fn matrix_criteria() {
        let golden = vec![vec![1, 1], vec![1, 0]];
        assert!(sft_transitive(&golden).unwrap().is_holds());
        assert_eq!(sft_mixing(&golden).unwrap().evidence, Evidence::PrimitivePower { power: 2 });
        let split = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(sft_transitive(&split).unwrap().evidence, Evidence::Unreachable { from: 0, to: 1 });
        assert_eq!(sft_mixing(&split), Err(Error::NotIrreducible));
        let swap = vec![vec![0, 1], vec![1, 0]];
        assert_eq!(sft_mixing(&swap).unwrap().evidence, Evidence::Period { period: 2 });
        assert!(sft_transitive(&[vec![1]]).unwrap().is_holds());
        assert_eq!(sft_mixing(&[vec![1, 1], vec![1, 1]]).unwrap().evidence, Evidence::PrimitivePower { power: 1 });
        assert!(matches!(sft_transitive(&[vec![1, 0], vec![1, 0]]), Err(Error::MalformedMatrix(_))));
    }

    #[test]
    fn morse_occurrence_gaps() {
        let m = Subshift::morse(true);
        let v = occurrence_gap(&m, &[0], 64).unwrap();
        assert_eq!(v.evidence, Evidence::Family(FamilyCertificate::syndetic(3, 64)));
        assert_eq!(occurrence_gap(&m, &[0, 0, 0], 64), Err(Error::WordAbsent("000".into())));
        let ones = SymbolicPoint::one_sided(Seq::constant(1));
        assert!(occurrence_gap_in_point(&ones, &[0], 64).is_fails());
    }
}
