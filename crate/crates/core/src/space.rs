//! Phase-space descriptors, finite bases of open sets and ε-nets.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::point::{Point, Seq, SymbolicPoint};
use crate::region::{Cylinder, CylinderUnion, Ext, Interval, IntervalUnion, Region};
use crate::rational::{inverse_ceil, log2_scale, q, qi, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    /// `[0, 1]`.
    Unit,
    /// The circle, coordinates in `[0, 1)`.
    Circle,
    /// `[0, ∞]`, the one-point compactification of the nonnegative reals.
    HalfLine,
    /// Sequences over `{0, .., alphabet-1}`.
    Shift { alphabet: u8, two_sided: bool },
    /// `{1/n : 1 <= n <= n_max} ∪ {0}` standing in for the countable
    /// compact space; element `0` is the point `0`, element `n` is `1/n`.
    Finite { n_max: usize },
    Product(Vec<Space>),
}

impl Space {
    pub fn whole(&self) -> Region {
        match self {
            Space::Unit => Region::interval(Interval::closed(Q::zero(), Q::one())),
            Space::Circle => Region::interval(Interval::new(Q::zero(), Q::one(), true, false)),
            Space::HalfLine => Region::interval(Interval {
                lo: Ext::Fin(Q::zero()),
                hi: Ext::Inf,
                lo_closed: true,
                hi_closed: true,
            }),
            Space::Shift { .. } => Region::Cylinders(CylinderUnion::whole()),
            Space::Finite { n_max } => Region::Finite((0..=*n_max).collect()),
            Space::Product(parts) => Region::Boxed(parts.iter().map(Space::whole).collect()),
        }
    }

    pub fn whole_interval(&self) -> Result<Interval> {
        match self.whole() {
            Region::Intervals(u) => Ok(u.parts()[0].clone()),
            _ => Err(Error::SpaceMismatch(format!("{self} is not an interval space"))),
        }
    }

    /// Number of points if finite (the truncated space counts as finite).
    pub fn finite_size(&self) -> Option<usize> {
        match self {
            Space::Finite { n_max } => Some(n_max + 1),
            _ => None,
        }
    }

    pub fn element_value(i: usize) -> Q {
        if i == 0 { Q::zero() } else { q(1, i as i64) }
    }

    pub fn is_interval_like(&self) -> bool {
        matches!(self, Space::Unit | Space::Circle | Space::HalfLine)
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Unit => f.write_str("[0,1]"),
            Space::Circle => f.write_str("circle"),
            Space::HalfLine => f.write_str("[0,inf]"),
            Space::Shift { alphabet, two_sided } => {
                write!(f, "{}shift^{}", if *two_sided { "Z-" } else { "N-" }, alphabet)
            }
            Space::Finite { n_max } => write!(f, "pnst(N={n_max})"),
            Space::Product(parts) => {
                let s: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                f.write_str(&s.join("x"))
            }
        }
    }
}

/// `y/(1-y)`: the chart of `[0,1)` onto `[0,∞)`.
fn unchart(y: &Q) -> Ext {
    if y >= &Q::one() {
        Ext::Inf
    } else {
        Ext::Fin(y / (Q::one() - y))
    }
}

/// Overlapping intervals of length `1/m` at steps of `1/(2m)`, as
/// `(lo, hi)` numerators over `2m`.
fn half_step_windows(m: u64) -> Vec<(u64, u64)> {
    (0..2 * m - 1).map(|j| (j, j + 2)).collect()
}

/// Cap on the number of regions in a basis or points in a net.
pub const BASIS_CAP: usize = 1 << 16;

/// Upper bound on the basis size at resolution `eps`, saturating.
fn basis_size(space: &Space, eps: &Q) -> u128 {
    let m = inverse_ceil(eps) as u128;
    match space {
        Space::Unit | Space::Circle | Space::HalfLine => 2 * m,
        Space::Shift { alphabet, two_sided } => {
            let k = cylinder_length(eps) as u32;
            let len = if *two_sided { 2 * k - 1 } else { k };
            (*alphabet as u128).saturating_pow(len)
        }
        Space::Finite { n_max } => *n_max as u128 + 1,
        Space::Product(parts) => parts.iter().fold(1u128, |acc, p| acc.saturating_mul(basis_size(p, eps))),
    }
}

fn check_size(space: &Space, eps: &Q) -> Result<()> {
    let n = basis_size(space, eps);
    if n > BASIS_CAP as u128 {
        return Err(Error::CapExceeded(n.min(usize::MAX as u128) as usize, BASIS_CAP));
    }
    Ok(())
}

/// Cylinder length used at resolution `eps` (metric `2^-k`).
pub fn cylinder_length(eps: &Q) -> usize {
    log2_scale(eps).max(1) as usize
}

/// All words of length `len` over `k` symbols in lexicographic order.
pub fn all_words(k: u8, len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..k).map(move |a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    out
}

/// Finite list of open regions of diameter at most `eps` covering the space.
pub fn basis(space: &Space, eps: &Q) -> Result<Vec<Region>> {
    if eps <= &Q::zero() {
        return Err(Error::InvalidParameter("resolution must be positive".into()));
    }
    check_size(space, eps)?;
    let m = inverse_ceil(eps);
    let d = qi(2 * m as i64);
    match space {
        Space::Unit => Ok(half_step_windows(m)
            .into_iter()
            .map(|(a, b)| {
                let lo = qi(a as i64) / &d;
                let hi = qi(b as i64) / &d;
                let lo_closed = lo.is_zero();
                let hi_closed = hi == Q::one();
                Region::interval(Interval::new(lo, hi, lo_closed, hi_closed))
            })
            .collect()),
        Space::Circle => {
            let mut out: Vec<Region> = half_step_windows(m)
                .into_iter()
                .map(|(a, b)| Region::open(qi(a as i64) / &d, qi(b as i64) / &d))
                .collect();
            // the window straddling the seam at 0
            out[0] = Region::interval(Interval::new(Q::zero(), q(1, m as i64), true, false));
            let last = qi(2 * m as i64 - 1) / &d;
            out.push(Region::Intervals(IntervalUnion::from_parts(vec![
                Interval::new(last, Q::one(), false, false),
                Interval::new(Q::zero(), Q::one() / &d, true, false),
            ])));
            out.sort_by_key(region_key);
            Ok(out)
        }
        Space::HalfLine => Ok(half_step_windows(m)
            .into_iter()
            .map(|(a, b)| {
                let lo = qi(a as i64) / &d;
                let hi = qi(b as i64) / &d;
                let lo_closed = lo.is_zero();
                let hi_closed = hi == Q::one();
                Region::interval(Interval { lo: unchart(&lo), hi: unchart(&hi), lo_closed, hi_closed })
            })
            .collect()),
        Space::Shift { alphabet, two_sided } => {
            let k = cylinder_length(eps);
            let (offset, len) = if *two_sided { (-(k as i64 - 1), 2 * k - 1) } else { (0, k) };
            Ok(all_words(*alphabet, len)
                .into_iter()
                .map(|w| Region::Cylinders(CylinderUnion::single(Cylinder::new(offset, w))))
                .collect())
        }
        Space::Finite { n_max } => {
            let mut out: Vec<Region> = (1..=*n_max)
                .filter(|&n| q(1, n as i64) >= *eps)
                .map(|n| Region::Finite(vec![n]))
                .collect();
            let mut tail = vec![0];
            tail.extend((1..=*n_max).filter(|&n| q(1, n as i64) < *eps));
            out.push(Region::Finite(tail));
            Ok(out)
        }
        Space::Product(parts) => {
            let mut boxes: Vec<Vec<Region>> = vec![vec![]];
            for p in parts {
                let b = basis(p, eps)?;
                boxes = boxes
                    .into_iter()
                    .flat_map(|pre| {
                        b.iter().map(move |r| {
                            let mut v = pre.clone();
                            v.push(r.clone());
                            v
                        })
                    })
                    .collect();
            }
            Ok(boxes.into_iter().map(Region::Boxed).collect())
        }
    }
}

fn region_key(r: &Region) -> Ext {
    match r {
        Region::Intervals(u) => u.parts().first().map(|p| p.lo.clone()).unwrap_or(Ext::Inf),
        _ => Ext::Inf,
    }
}

/// Finite set of points such that every point of the space lies within
/// `eps/2` of one of them.
pub fn net(space: &Space, eps: &Q) -> Result<Vec<Point>> {
    if eps <= &Q::zero() {
        return Err(Error::InvalidParameter("resolution must be positive".into()));
    }
    check_size(space, eps)?;
    let m = inverse_ceil(eps);
    let d = qi(2 * m as i64);
    match space {
        Space::Unit => Ok((0..=2 * m).map(|j| Point::exact(qi(j as i64) / &d)).collect()),
        Space::Circle => Ok((0..2 * m).map(|j| Point::exact(qi(j as i64) / &d)).collect()),
        Space::HalfLine => {
            let mut pts: Vec<Point> = (0..2 * m)
                .map(|j| Point::exact(unchart(&(qi(j as i64) / &d)).fin().clone()))
                .collect();
            pts.push(Point::Infinity);
            Ok(pts)
        }
        Space::Shift { alphabet, two_sided } => {
            let k = cylinder_length(eps);
            Ok(all_words(*alphabet, k)
                .into_iter()
                .map(|w| {
                    let right = Seq::periodic(vec![], w.clone());
                    let p = if *two_sided {
                        let mut rev = w.clone();
                        rev.reverse();
                        SymbolicPoint::two_sided(Seq::periodic(vec![], rev), right)
                    } else {
                        SymbolicPoint::one_sided(right)
                    };
                    Point::Symbolic(p)
                })
                .collect())
        }
        Space::Finite { n_max } => Ok((0..=*n_max).map(Point::Element).collect()),
        Space::Product(parts) => {
            let mut tuples: Vec<Vec<Point>> = vec![vec![]];
            for p in parts {
                let n = net(p, eps)?;
                tuples = tuples
                    .into_iter()
                    .flat_map(|pre| {
                        n.iter().map(move |x| {
                            let mut v = pre.clone();
                            v.push(x.clone());
                            v
                        })
                    })
                    .collect();
            }
            Ok(tuples.into_iter().map(Point::Tuple).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::region_contains;
    use crate::point::Tri;

    fn covered(space: &Space, eps: &Q, x: &Point) -> bool {
        basis(space, eps).unwrap().iter().any(|r| region_contains(r, x).unwrap() == Tri::True)
    }

    #[test]
    fn unit_basis_quarter() {
        let b = basis(&Space::Unit, &q(1, 4)).unwrap();
        let s: Vec<String> = b.iter().map(|r| r.to_string()).collect();
        assert_eq!(
            s,
            ["[0,1/4)", "(1/8,3/8)", "(1/4,1/2)", "(3/8,5/8)", "(1/2,3/4)", "(5/8,7/8)", "(3/4,1]"]
        );
    }

    #[test]
    fn oversized_bases_are_refused() {
        let wide = Space::Shift { alphabet: 4, two_sided: false };
        assert!(matches!(basis(&wide, &q(1, 1 << 20)), Err(Error::CapExceeded(..))));
        assert!(matches!(net(&Space::Circle, &q(1, 1 << 20)), Err(Error::CapExceeded(..))));
        assert!(basis(&wide, &q(1, 256)).is_ok());
    }

    #[test]
    fn bases_cover_fine_grids() {
        for eps in [q(1, 4), q(1, 8), q(1, 7)] {
            for j in 0..=200 {
                let x = Point::exact(q(j, 200));
                assert!(covered(&Space::Unit, &eps, &x));
                if j < 200 {
                    assert!(covered(&Space::Circle, &eps, &x));
                }
                assert!(covered(&Space::HalfLine, &eps, &Point::exact(q(j, 7))));
            }
            assert!(covered(&Space::HalfLine, &eps, &Point::Infinity));
        }
    }

    #[test]
    fn shift_basis_uses_metric_length() {
        let b = basis(&Space::Shift { alphabet: 2, two_sided: false }, &q(1, 8)).unwrap();
        assert_eq!(b.len(), 8);
        assert_eq!(b[1], Region::cylinder(0, &[0, 0, 1]));
        let b2 = basis(&Space::Shift { alphabet: 2, two_sided: true }, &q(1, 4)).unwrap();
        assert_eq!(b2.len(), 8);
        assert_eq!(b2[0], Region::cylinder(-1, &[0, 0, 0]));
    }

    #[test]
    fn finite_basis_has_tail_neighbourhood_of_zero() {
        let b = basis(&Space::Finite { n_max: 10 }, &q(1, 4)).unwrap();
        assert_eq!(b.len(), 5);
        assert_eq!(b[4], Region::Finite(vec![0, 5, 6, 7, 8, 9, 10]));
        for i in 0..=10 {
            assert!(covered(&Space::Finite { n_max: 10 }, &q(1, 4), &Point::Element(i)));
        }
    }
}
