//! Factor maps, preservation of properties under factors, and the audit of
//! the implications between properties.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::interval_maps::PlMap;
use crate::hitting::product_identity_audit;
use crate::properties::{check, system_basis, Property};
use crate::rational::{q, Q};
use crate::region::{Cylinder, CylinderUnion};
use crate::symbolic::{word_str, Subshift};
use crate::system::{builtin, SystemHandle, SystemKind};
use crate::verdict::{CheckBudget, Evidence, Status, Verdict};

pub use crate::system::{power, product, ProductMode};

/// Names accepted by [`builtin_factor`].
pub const BUILTIN_FACTORS: &[&str] = &["doubling_to_tent", "twosided_to_onesided_shift", "identity(<system>)"];

/// How a factor map acts on points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorCode {
    Identity,
    /// A PL map from the source space onto the target space.
    Pl(PlMap),
    /// Forgets the coordinates of negative index.
    Restriction,
}

/// A semiconjugacy `φ` from `source` onto `target`: `φ(t·x) = t·φ(x)`.
#[derive(Clone, Debug)]
pub struct FactorMap {
    pub name: String,
    pub source: SystemHandle,
    pub target: SystemHandle,
    pub code: FactorCode,
    /// Set only after the identity has been checked exactly.
    pub verified: bool,
}

impl FactorMap {
    pub fn identity(sys: SystemHandle) -> FactorMap {
        FactorMap {
            name: format!("identity({})", sys.name),
            source: sys.clone(),
            target: sys,
            code: FactorCode::Identity,
            verified: true,
        }
    }

    /// Checks `φ ∘ f = g ∘ φ` exactly and records the result.
    pub fn verify(mut self) -> Result<FactorMap> {
        match (&self.code, &self.source.kind, &self.target.kind) {
            (FactorCode::Identity, _, _) => {
                if self.source != self.target {
                    return Err(Error::VerificationFailed(format!("{}: source differs from target", self.name)));
                }
            }
            (FactorCode::Pl(phi), SystemKind::Pl(f), SystemKind::Pl(g)) => verify_pl(&self.name, phi, f, g)?,
            (FactorCode::Restriction, SystemKind::Shift(s), SystemKind::Shift(t)) => {
                verify_restriction(&self.name, s, t)?
            }
            _ => {
                return Err(Error::VerificationFailed(format!("{}: code does not fit the systems", self.name)));
            }
        }
        self.verified = true;
        Ok(self)
    }
}

/// Two continuous PL maps agree iff they agree on all their breakpoints.
fn verify_pl(name: &str, phi: &PlMap, f: &PlMap, g: &PlMap) -> Result<()> {
    let fail = |e: Error| Error::VerificationFailed(format!("{name}: {e}"));
    let left = f.then(phi).map_err(fail)?;
    let right = phi.then(g).map_err(fail)?;
    let grid: BTreeSet<Q> = left.breakpoints().iter().chain(right.breakpoints()).cloned().collect();
    for x in &grid {
        let (a, b) = (left.eval(x), right.eval(x));
        if a != b {
            return Err(Error::VerificationFailed(format!("{name}: sides differ at {x}: {a} vs {b}")));
        }
    }
    Ok(())
}

/// The part of a two-sided cylinder at nonnegative coordinates.
pub fn restrict(c: &Cylinder) -> Cylinder {
    let from = (-c.offset).max(0) as usize;
    if from >= c.word.len() {
        return Cylinder::new(0, vec![]);
    }
    Cylinder::new(c.offset.max(0), c.word[from..].to_vec())
}

fn restrict_union(r: &CylinderUnion) -> CylinderUnion {
    CylinderUnion::from_cylinders(r.cylinders().iter().map(restrict).collect())
}

const RESTRICTION_WORD_LEN: usize = 3;
const RESTRICTION_OFFSETS: std::ops::RangeInclusive<i64> = -3..=3;

/// Checks `φ(σC) = σφ(C)` on every cylinder with a word of length at most
/// three at offsets -3..=3.
fn verify_restriction(name: &str, s: &Subshift, t: &Subshift) -> Result<()> {
    if !s.two_sided || t.two_sided || s.kind != t.kind {
        return Err(Error::VerificationFailed(format!("{name}: needs a two-sided shift and its one-sided twin")));
    }
    for len in 1..=RESTRICTION_WORD_LEN {
        for w in s.language(len)? {
            for offset in RESTRICTION_OFFSETS {
                let c = Cylinder::new(offset, w.clone());
                let left = restrict_union(&s.image_cylinder(&c, 1)?);
                let right = t.image_region(&CylinderUnion::single(restrict(&c)), 1)?;
                if left != right {
                    return Err(Error::VerificationFailed(format!(
                        "{name}: cylinder [{}]@{offset} maps to {left:?} and {right:?}",
                        word_str(&w)
                    )));
                }
            }
        }
    }
    Ok(())
}

/// The fold `θ ↦ 2θ` on `[0,1/2]`, `2(1-θ)` on `[1/2,1]`.
fn fold() -> PlMap {
    PlMap::new(vec![q(0, 1), q(1, 2), q(1, 1)], vec![q(0, 1), q(1, 1), q(0, 1)], false)
        .expect("fold is a valid PL map")
}

/// A verified built-in factor map. `identity(<system>)` wraps any built-in.
pub fn builtin_factor(name: &str) -> Result<FactorMap> {
    let name = name.trim();
    let fm = match name {
        "doubling_to_tent" => FactorMap {
            name: name.into(),
            source: builtin("doubling")?,
            target: builtin("tent")?,
            code: FactorCode::Pl(fold()),
            verified: false,
        },
        "twosided_to_onesided_shift" => FactorMap {
            name: name.into(),
            source: builtin("full_shift_z")?,
            target: builtin("full_shift")?,
            code: FactorCode::Restriction,
            verified: false,
        },
        _ => match name.strip_prefix("identity(").and_then(|r| r.strip_suffix(')')) {
            Some(inner) => FactorMap::identity(builtin(inner)?),
            None => return Err(Error::UnknownName(name.to_string())),
        },
    };
    fm.verify()
}

/// Holds unless the source Holds while the target Fails. Undetermined on
/// either side is never counted against the factor.
pub fn verify_preservation(fm: &FactorMap, p: Property, b: &CheckBudget) -> Result<Verdict> {
    if !fm.verified {
        return Err(Error::VerificationFailed(format!("{} is not verified", fm.name)));
    }
    let src = check(&fm.source, p, b)?;
    let tgt = check(&fm.target, p, b)?;
    let summary = format!("{}: {} {} -> {} {}", fm.name, fm.source.name, src.status, fm.target.name, tgt.status);
    Ok(if src.is_holds() && tgt.is_fails() {
        Verdict::fails(Evidence::Certificate(format!("{summary}; target {}", tgt.evidence)))
    } else {
        Verdict::holds(Evidence::Certificate(summary))
    })
}

/// One checked cell with the budget it was computed at.
#[derive(Clone, Debug)]
pub struct Cell {
    pub verdict: Verdict,
    pub budget: CheckBudget,
}

#[derive(Clone, Debug)]
pub struct VerdictRow {
    pub system: String,
    pub abelian: bool,
    pub central: bool,
    pub cells: BTreeMap<Property, Cell>,
}

impl VerdictRow {
    pub fn new(system: impl Into<String>, abelian: bool, central: bool) -> Self {
        VerdictRow { system: system.into(), abelian, central, cells: BTreeMap::new() }
    }

    pub fn for_system(sys: &SystemHandle) -> Self {
        Self::new(sys.name.clone(), sys.is_abelian(), sys.is_central())
    }

    pub fn set(&mut self, p: Property, verdict: Verdict, budget: CheckBudget) {
        self.cells.insert(p, Cell { verdict, budget });
    }

    pub fn status(&self, p: Property) -> Option<Status> {
        self.cells.get(&p).map(|c| c.verdict.status)
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerdictTable {
    pub rows: Vec<VerdictRow>,
}

impl VerdictTable {
    /// Checks every property in `props` on every system at budget `b`.
    pub fn compute(systems: &[SystemHandle], props: &[Property], b: &CheckBudget) -> Result<VerdictTable> {
        let mut rows = Vec::with_capacity(systems.len());
        for sys in systems {
            let mut row = VerdictRow::for_system(sys);
            for &p in props {
                row.set(p, check(sys, p, b)?, b.clone());
            }
            rows.push(row);
        }
        Ok(VerdictTable { rows })
    }
}

/// The product hitting identity on every quadruple of basis regions at
/// resolution `b.epsilon`. Fails on the first mismatching quadruple.
pub fn product_identity_sweep(sys: &SystemHandle, b: &CheckBudget) -> Result<Verdict> {
    let basis = system_basis(sys, &b.epsilon)?;
    let mut count = 0usize;
    for u1 in &basis {
        for v1 in &basis {
            for u2 in &basis {
                for v2 in &basis {
                    let v = product_identity_audit(sys, u1, v1, u2, v2, b)?;
                    if !v.is_holds() {
                        let why = format!("({u1},{v1}) -> ({u2},{v2}): {}", v.evidence);
                        return Ok(Verdict { status: v.status, evidence: Evidence::Certificate(why) });
                    }
                    count += 1;
                }
            }
        }
    }
    Ok(Verdict::holds(Evidence::Certificate(format!("{count} quadruples over {} regions", basis.len()))))
}

/// Unconditional implications `antecedent ⟹ consequent`.
pub const IMPLICATIONS: &[(Property, Property)] = &[
    (Property::Leo, Property::Mixing),
    (Property::Leo, Property::Spt),
    (Property::Leo, Property::Vst),
    (Property::Mixing, Property::WeakMixing),
    (Property::Spt, Property::WeakMixing),
    (Property::WeakMixing, Property::Transitive),
    (Property::Minimal, Property::Transitive),
    (Property::StronglyTransitive, Property::Transitive),
    (Property::Vst, Property::StronglyTransitive),
];

/// `Minimal ⟹ Vst`, valid for abelian systems with central generators.
pub const CONDITIONAL: (Property, Property) = (Property::Minimal, Property::Vst);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub system: String,
    pub antecedent: Property,
    pub consequent: Property,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} HOLDS but {} FAILS", self.system, self.antecedent, self.consequent)
    }
}

#[derive(Clone, Debug, Default)]
pub struct AuditReport {
    pub violations: Vec<Violation>,
    /// Implied pairs with both ends decided.
    pub edges_checked: usize,
    /// Conditional edges skipped because the system is not abelian and central.
    pub conditional_skipped: Vec<String>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// All pairs `(a, c)` with `a ⟹ c` derivable from `edges`, `a != c`.
fn closure(edges: &[(Property, Property)]) -> Vec<(Property, Property)> {
    let mut out = Vec::new();
    for a in Property::ALL {
        let mut seen = BTreeSet::from([a]);
        let mut stack = vec![a];
        while let Some(x) = stack.pop() {
            for &(_, c) in edges.iter().filter(|(from, _)| *from == x) {
                if seen.insert(c) {
                    stack.push(c);
                    out.push((a, c));
                }
            }
        }
    }
    out
}

/// Looks for a Holds antecedent with a Fails consequent along every chain of
/// implications on each row.
pub fn implication_audit(vt: &VerdictTable) -> AuditReport {
    let plain = closure(IMPLICATIONS);
    let mut with_conditional = IMPLICATIONS.to_vec();
    with_conditional.push(CONDITIONAL);
    let full = closure(&with_conditional);
    let mut report = AuditReport::default();
    for row in &vt.rows {
        let edges = if row.abelian && row.central {
            &full
        } else {
            if row.cells.contains_key(&CONDITIONAL.0) && row.cells.contains_key(&CONDITIONAL.1) {
                report.conditional_skipped.push(row.system.clone());
            }
            &plain
        };
        for &(a, c) in edges {
            let (Some(sa), Some(sc)) = (row.status(a), row.status(c)) else { continue };
            if sa == Status::Undetermined || sc == Status::Undetermined {
                continue;
            }
            report.edges_checked += 1;
            if sa == Status::Holds && sc == Status::Fails {
                report.violations.push(Violation { system: row.system.clone(), antecedent: a, consequent: c });
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fold_conjugates_doubling_to_tent() {
        let fm = builtin_factor("doubling_to_tent").unwrap();
        assert!(fm.verified);
        let FactorCode::Pl(phi) = &fm.code else { panic!() };
        let x = q(1, 3);
        assert_eq!(phi.eval(&x), q(2, 3));
        let tent = PlMap::tent();
        let doubling = PlMap::doubling();
        assert_eq!(tent.eval(&phi.eval(&x)), q(2, 3));
        assert_eq!(phi.eval(&doubling.eval(&x)), q(2, 3));
    }

    #[test]
    fn wrong_pl_factor_is_rejected() {
        let fm = FactorMap {
            name: "bad".into(),
            source: builtin("doubling").unwrap(),
            target: builtin("tent").unwrap(),
            code: FactorCode::Pl(PlMap::new(vec![q(0, 1), q(1, 1)], vec![q(0, 1), q(1, 1)], false).unwrap()),
            verified: false,
        };
        assert!(matches!(fm.verify(), Err(Error::VerificationFailed(_))));
    }

    #[test]
    fn restriction_commutes_with_shift() {
        let fm = builtin_factor("twosided_to_onesided_shift").unwrap();
        assert!(fm.verified);
        let c = Cylinder::new(0, vec![0, 1]);
        assert_eq!(restrict(&c), c);
        assert_eq!(restrict(&Cylinder::new(-1, vec![0, 1])), Cylinder::new(0, vec![1]));
    }

    #[test]
    fn identity_factor_is_verified() {
        let fm = builtin_factor("identity(tent)").unwrap();
        assert!(fm.verified);
        assert_eq!(fm.source, fm.target);
    }

    #[test]
    fn injected_fault_is_one_violation() {
        let mut row = VerdictRow::new("fake", true, true);
        let b = CheckBudget::default();
        row.set(Property::Leo, Verdict::holds(Evidence::Certificate("x".into())), b.clone());
        row.set(Property::Transitive, Verdict::fails(Evidence::Certificate("y".into())), b.clone());
        let report = implication_audit(&VerdictTable { rows: vec![row] });
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].antecedent, Property::Leo);
    }

    #[test]
    fn undetermined_is_not_a_violation() {
        let mut row = VerdictRow::new("fake", true, true);
        let b = CheckBudget::default();
        row.set(Property::Leo, Verdict::holds(Evidence::Certificate("x".into())), b.clone());
        row.set(Property::Mixing, Verdict::undetermined("window"), b);
        assert!(implication_audit(&VerdictTable { rows: vec![row] }).is_clean());
    }
}
