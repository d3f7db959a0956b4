//! Immutable handles describing one dynamical system, and the built-in zoo.

use std::fmt;

use crate::actions::SemigroupAction;
use crate::error::{Error, Result};
use crate::hitting::TimeKind;
use crate::interval_maps::PlMap;
use crate::point::Point;
use crate::rational::{parse_q, Q};
use crate::region::{Region, IntervalUnion};
use crate::space::Space;
use crate::symbolic::{ShiftKind, Subshift};

/// How the acting time of a product is shared between components.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProductMode {
    /// The same time acts on every component.
    Diagonal,
    /// Each component has its own time.
    Independent,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SystemKind {
    /// Iteration of a PL map of `[0,1]` or of the circle.
    Pl(PlMap),
    /// `(t, x) ↦ t + x` on `[0, ∞]`.
    Translation,
    Shift(Subshift),
    Action(SemigroupAction),
    Product { parts: Vec<SystemHandle>, mode: ProductMode },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SystemHandle {
    pub name: String,
    pub kind: SystemKind,
}

/// Names accepted by [`builtin`], with their parameter syntax.
pub const BUILTINS: &[(&str, &str)] = &[
    ("tent", "tent map 1 - |2x - 1| on [0,1]"),
    ("doubling", "2x mod 1 on the circle"),
    ("rotation(p/q)", "rotation by a rational angle"),
    ("swap_F", "transitive PL map swapping the halves of [0,1]"),
    ("translation_semiflow", "t + x on [0,inf]"),
    ("full_shift", "one-sided full shift on 2 symbols; full_shift(k) for k symbols"),
    ("full_shift_z", "two-sided full shift on 2 symbols; full_shift_z(k)"),
    ("golden_mean", "one-sided SFT forbidding 11"),
    ("morse_thue", "two-sided Morse-Thue substitution subshift"),
    ("pnst", "constant maps on {1/n}u{0}, truncated at n<=64; pnst(N)"),
    ("dai", "doubling with the golden rotation and its inverse"),
    ("leo_sampled", "multiplication by 2 and 3 on the circle"),
];

fn parse_arg(name: &str) -> Option<(&str, &str)> {
    let (head, rest) = name.split_once('(')?;
    Some((head, rest.strip_suffix(')')?))
}

/// The built-in system called `name`.
pub fn builtin(name: &str) -> Result<SystemHandle> {
    let name = name.trim();
    let bad = |m: &str| Error::InvalidParameter(format!("{name}: {m}"));
    let kind = match parse_arg(name) {
        None => match name {
            "tent" => SystemKind::Pl(PlMap::tent()),
            "doubling" => SystemKind::Pl(PlMap::doubling()),
            "swap_F" => SystemKind::Pl(PlMap::swap()),
            "translation_semiflow" => SystemKind::Translation,
            "full_shift" => SystemKind::Shift(Subshift::full(2, false)?),
            "full_shift_z" => SystemKind::Shift(Subshift::full(2, true)?),
            "golden_mean" => SystemKind::Shift(Subshift::golden_mean(false)),
            "morse_thue" => SystemKind::Shift(Subshift::morse(true)),
            "pnst" => SystemKind::Action(SemigroupAction::pnst(64)),
            "dai" => SystemKind::Action(SemigroupAction::dai()),
            "leo_sampled" => SystemKind::Action(SemigroupAction::multipliers(&[2, 3])?),
            _ => return Err(Error::UnknownName(name.to_string())),
        },
        Some((head, arg)) => match head {
            "rotation" => {
                let a = parse_q(arg)?;
                SystemKind::Pl(PlMap::rotation(a))
            }
            "full_shift" | "full_shift_z" => {
                let k: u8 = arg.trim().parse().map_err(|_| bad("alphabet size must be an integer"))?;
                SystemKind::Shift(Subshift::full(k, head == "full_shift_z")?)
            }
            "pnst" => {
                let n: usize = arg.trim().parse().map_err(|_| bad("N must be a positive integer"))?;
                if n == 0 {
                    return Err(bad("N must be a positive integer"));
                }
                SystemKind::Action(SemigroupAction::pnst(n))
            }
            _ => return Err(Error::UnknownName(name.to_string())),
        },
    };
    Ok(SystemHandle { name: name.to_string(), kind })
}

/// The product of `parts`; a single part is returned unchanged.
pub fn product(parts: Vec<SystemHandle>, mode: ProductMode) -> Result<SystemHandle> {
    if parts.is_empty() {
        return Err(Error::InvalidParameter("empty product".into()));
    }
    if parts.len() == 1 {
        return Ok(parts.into_iter().next().unwrap());
    }
    let kinds: Vec<TimeKind> = parts.iter().map(|p| p.time_kind()).collect();
    if mode == ProductMode::Diagonal && kinds.iter().any(|k| *k != kinds[0]) {
        return Err(Error::IncompatibleKinds);
    }
    if mode == ProductMode::Diagonal && kinds[0] == TimeKind::Word && parts.iter().any(|p| p != &parts[0]) {
        return Err(Error::IncompatibleKinds);
    }
    let sep = if mode == ProductMode::Diagonal { "x" } else { "*" };
    let name = parts.iter().map(|p| p.name.as_str()).collect::<Vec<_>>().join(sep);
    Ok(SystemHandle { name, kind: SystemKind::Product { parts, mode } })
}

/// `k`-fold diagonal self-product.
pub fn power(sys: &SystemHandle, k: usize) -> Result<SystemHandle> {
    product(vec![sys.clone(); k.max(1)], ProductMode::Diagonal)
}

impl SystemHandle {
    pub fn new(name: impl Into<String>, kind: SystemKind) -> Self {
        SystemHandle { name: name.into(), kind }
    }

    pub fn space(&self) -> Space {
        match &self.kind {
            SystemKind::Pl(f) => {
                if f.is_circle() { Space::Circle } else { Space::Unit }
            }
            SystemKind::Translation => Space::HalfLine,
            SystemKind::Shift(s) => Space::Shift { alphabet: s.alphabet(), two_sided: s.two_sided },
            SystemKind::Action(a) => a.space.clone(),
            SystemKind::Product { parts, .. } => Space::Product(parts.iter().map(|p| p.space()).collect()),
        }
    }

    pub fn time_kind(&self) -> TimeKind {
        match &self.kind {
            SystemKind::Pl(_) | SystemKind::Shift(_) => TimeKind::Discrete,
            SystemKind::Translation => TimeKind::Continuous,
            SystemKind::Action(_) => TimeKind::Word,
            SystemKind::Product { parts, mode } => match mode {
                ProductMode::Diagonal => parts[0].time_kind(),
                ProductMode::Independent => TimeKind::Word,
            },
        }
    }

    /// Components of a product (the system itself otherwise).
    pub fn components(&self) -> Vec<&SystemHandle> {
        match &self.kind {
            SystemKind::Product { parts, .. } => parts.iter().collect(),
            _ => vec![self],
        }
    }

    /// Acting times commute.
    pub fn is_abelian(&self) -> bool {
        match &self.kind {
            SystemKind::Action(a) => a.abelian && a.verify_abelian() == crate::point::Tri::True,
            SystemKind::Product { parts, .. } => parts.iter().all(SystemHandle::is_abelian),
            _ => true,
        }
    }

    /// Every acting element is onto.
    pub fn is_central(&self) -> bool {
        match &self.kind {
            SystemKind::Pl(f) => {
                let w = self.space().whole();
                let w = w.as_intervals().unwrap();
                &f.image_once(w) == w
            }
            SystemKind::Translation => false,
            SystemKind::Shift(_) => true,
            SystemKind::Action(a) => a.is_central(),
            SystemKind::Product { parts, .. } => parts.iter().all(SystemHandle::is_central),
        }
    }

    /// Every acting element is a homeomorphism of the space.
    pub fn is_invertible(&self) -> bool {
        match &self.kind {
            SystemKind::Pl(f) => f.is_homeomorphism(),
            SystemKind::Translation => false,
            SystemKind::Shift(s) => s.two_sided,
            SystemKind::Action(a) => a.generators.iter().all(|g| matches!(g, crate::actions::GeneratorMap::Rotation { .. })),
            SystemKind::Product { parts, .. } => parts.iter().all(SystemHandle::is_invertible),
        }
    }

    /// All arithmetic is exact (no approximated rotation angles).
    pub fn is_exact(&self) -> bool {
        match &self.kind {
            SystemKind::Action(a) => !a.has_irrational_rotation(),
            SystemKind::Product { parts, .. } => parts.iter().all(SystemHandle::is_exact),
            _ => true,
        }
    }

    /// Exact image of a region at discrete time `n` (cascades only).
    pub fn image(&self, r: &Region, n: u64) -> Result<Region> {
        match (&self.kind, r) {
            (SystemKind::Pl(f), Region::Intervals(u)) => Ok(Region::Intervals(f.image(u, n)?)),
            (SystemKind::Shift(s), Region::Cylinders(c)) => Ok(Region::Cylinders(s.image_region(c, n)?)),
            (SystemKind::Translation, Region::Intervals(u)) => {
                Ok(Region::Intervals(crate::interval_maps::translation::image(u, &Q::from_integer(n.into()))))
            }
            (SystemKind::Product { parts, mode: ProductMode::Diagonal }, Region::Boxed(rs)) if rs.len() == parts.len() => {
                Ok(Region::Boxed(parts.iter().zip(rs).map(|(p, r)| p.image(r, n)).collect::<Result<_>>()?))
            }
            (SystemKind::Action(_), _) => Err(Error::Unsupported("discrete images of a semigroup action".into())),
            _ => Err(Error::SpaceMismatch(format!("region {r} on {}", self.space()))),
        }
    }

    /// Does the region equal the whole space (for regions of this space)?
    pub fn is_whole(&self, r: &Region) -> Result<bool> {
        match (&self.kind, r) {
            (SystemKind::Shift(s), Region::Cylinders(c)) => s.covers(c),
            (SystemKind::Product { parts, .. }, Region::Boxed(rs)) => {
                for (p, r) in parts.iter().zip(rs) {
                    if !p.is_whole(r)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            (_, Region::Intervals(u)) => {
                let w = self.space().whole();
                Ok(u == w.as_intervals()?)
            }
            (_, Region::Finite(v)) => Ok(Some(v.len()) == self.space().finite_size()),
            _ => Err(Error::SpaceMismatch(format!("region {r} on {}", self.space()))),
        }
    }

    /// Point `t·x` at discrete time `n` (cascades only).
    pub fn step_point(&self, x: &Point, n: u64) -> Result<Point> {
        match (&self.kind, x) {
            (SystemKind::Pl(f), Point::Real { value, error }) if error == &Q::from_integer(0.into()) => {
                let mut v = value.clone();
                for _ in 0..n {
                    v = f.eval(&v);
                }
                Ok(Point::exact(v))
            }
            (SystemKind::Shift(_), Point::Symbolic(p)) => Ok(Point::Symbolic(p.shifted(n as i64))),
            (SystemKind::Product { parts, mode: ProductMode::Diagonal }, Point::Tuple(ps)) if ps.len() == parts.len() => {
                Ok(Point::Tuple(parts.iter().zip(ps).map(|(s, p)| s.step_point(p, n)).collect::<Result<_>>()?))
            }
            _ => Err(Error::SpaceMismatch(format!("point {x} on {}", self.space()))),
        }
    }

    pub fn as_shift(&self) -> Option<&Subshift> {
        match &self.kind {
            SystemKind::Shift(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_action(&self) -> Option<&SemigroupAction> {
        match &self.kind {
            SystemKind::Action(a) => Some(a),
            _ => None,
        }
    }

    pub fn is_substitution(&self) -> bool {
        matches!(&self.kind, SystemKind::Shift(s) if matches!(s.kind, ShiftKind::Substitution { .. }))
    }

    /// Short description of the dynamics.
    pub fn describe(&self) -> String {
        match &self.kind {
            SystemKind::Pl(f) => format!("pl {f}"),
            SystemKind::Translation => "translation on [0,inf]".into(),
            SystemKind::Shift(s) => format!("shift {s}"),
            SystemKind::Action(a) => a.to_string(),
            SystemKind::Product { parts, mode } => {
                let p: Vec<String> = parts.iter().map(|p| p.name.clone()).collect();
                format!("{:?} product of {}", mode, p.join(","))
            }
        }
    }
}

impl fmt::Display for SystemHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Whole-space interval union of an interval-like space.
pub fn whole_intervals(space: &Space) -> Result<IntervalUnion> {
    Ok(space.whole().as_intervals()?.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn builtins_resolve() {
        for name in ["tent", "doubling", "rotation(1/3)", "swap_F", "translation_semiflow", "full_shift", "full_shift_z",
            "golden_mean", "morse_thue", "pnst", "pnst(8)", "dai", "leo_sampled", "full_shift(3)"]
        {
            let s = builtin(name).unwrap();
            assert_eq!(s.name, name);
        }
        assert!(matches!(builtin("nope"), Err(Error::UnknownName(_))));
        assert!(matches!(builtin("rotation(1/0)"), Err(Error::BadRational(_))));
    }

    #[test]
    fn tent_handle_matches_formula() {
        let SystemKind::Pl(f) = builtin("tent").unwrap().kind else { panic!() };
        assert_eq!(f.breakpoints(), &[q(0, 1), q(1, 2), q(1, 1)]);
        assert_eq!(f.values(), &[q(0, 1), q(1, 1), q(0, 1)]);
    }

    #[test]
    fn products() {
        let t = builtin("tent").unwrap();
        let p = power(&t, 2).unwrap();
        assert_eq!(p.space(), Space::Product(vec![Space::Unit, Space::Unit]));
        assert_eq!(power(&t, 1).unwrap(), t);
        let m = product(vec![t.clone(), builtin("full_shift").unwrap()], ProductMode::Independent).unwrap();
        assert_eq!(m.time_kind(), TimeKind::Word);
        assert_eq!(product(vec![t, builtin("translation_semiflow").unwrap()], ProductMode::Diagonal), Err(Error::IncompatibleKinds));
    }
}
