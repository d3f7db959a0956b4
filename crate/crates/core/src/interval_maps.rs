//! Exact piecewise-linear maps of `[0,1]` and of the circle, and the
//! translation semiflow on `[0, ∞]`.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::region::{Ext, Interval, IntervalUnion};
use crate::rational::{fmt_q, frac, q, qi, Q};

/// Default cap on the number of interval pieces an iterated image may have.
pub const PIECE_CAP: usize = 1 << 16;

/// Continuous piecewise-linear map given by its values at the breakpoints.
///
/// For circle maps (`mod_one`) the values are those of a lift, and the
/// map is read modulo one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlMap {
    breakpoints: Vec<Q>,
    values: Vec<Q>,
    mod_one: bool,
}

struct Piece<'a> {
    b0: &'a Q,
    b1: &'a Q,
    v0: &'a Q,
    v1: &'a Q,
}

impl Piece<'_> {
    fn slope(&self) -> Q {
        (self.v1 - self.v0) / (self.b1 - self.b0)
    }

    fn eval(&self, x: &Q) -> Q {
        self.v0 + self.slope() * (x - self.b0)
    }

    fn domain(&self) -> Interval {
        Interval::closed(self.b0.clone(), self.b1.clone())
    }
}

impl PlMap {
    pub fn new(breakpoints: Vec<Q>, values: Vec<Q>, mod_one: bool) -> Result<Self> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        if breakpoints.len() < 2 || breakpoints.len() != values.len() {
            return bad("need at least two breakpoints and one value per breakpoint");
        }
        if !breakpoints[0].is_zero() || !breakpoints.last().unwrap().is_one() {
            return bad("breakpoints must run from 0 to 1");
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return bad("breakpoints must be strictly increasing");
        }
        if mod_one {
            if !(values.last().unwrap() - &values[0]).is_integer() {
                return bad("circle map lift must have integer degree");
            }
        } else if values.iter().any(|v| v < &Q::zero() || v > &Q::one()) {
            return bad("interval map values must lie in [0,1]");
        }
        Ok(PlMap { breakpoints, values, mod_one })
    }

    pub fn tent() -> Self {
        PlMap::new(vec![q(0, 1), q(1, 2), q(1, 1)], vec![q(0, 1), q(1, 1), q(0, 1)], false).unwrap()
    }

    /// `θ ↦ 2θ mod 1`.
    pub fn doubling() -> Self {
        PlMap::new(vec![q(0, 1), q(1, 1)], vec![q(0, 1), q(2, 1)], true).unwrap()
    }

    /// `θ ↦ θ + angle mod 1`.
    pub fn rotation(angle: Q) -> Self {
        let a = frac(&angle);
        PlMap::new(vec![q(0, 1), q(1, 1)], vec![a.clone(), a + Q::one()], true).unwrap()
    }

    /// Transitive map of `[0,1]` swapping the halves `[0,1/2]` and `[1/2,1]`,
    /// whose square is a tent map on each half.
    pub fn swap() -> Self {
        PlMap::new(
            vec![q(0, 1), q(1, 4), q(1, 2), q(1, 1)],
            vec![q(1, 2), q(1, 1), q(1, 2), q(0, 1)],
            false,
        )
        .unwrap()
    }

    pub fn breakpoints(&self) -> &[Q] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn is_circle(&self) -> bool {
        self.mod_one
    }

    fn pieces(&self) -> impl Iterator<Item = Piece<'_>> {
        (0..self.breakpoints.len() - 1).map(move |i| Piece {
            b0: &self.breakpoints[i],
            b1: &self.breakpoints[i + 1],
            v0: &self.values[i],
            v1: &self.values[i + 1],
        })
    }

    pub fn slopes(&self) -> Vec<Q> {
        self.pieces().map(|p| p.slope()).collect()
    }

    /// Largest absolute slope (Lipschitz constant).
    pub fn lipschitz(&self) -> Q {
        self.slopes().iter().map(|s| s.abs()).max().unwrap_or_else(Q::zero)
    }

    pub fn degree(&self) -> Q {
        self.values.last().unwrap() - &self.values[0]
    }

    /// Lift value (no reduction).
    pub fn lift(&self, x: &Q) -> Q {
        let piece = self
            .pieces()
            .find(|p| x <= p.b1)
            .unwrap_or_else(|| self.pieces().last().unwrap());
        piece.eval(x)
    }

    pub fn eval(&self, x: &Q) -> Q {
        let x = if self.mod_one { frac(x) } else { x.clone() };
        let y = self.lift(&x);
        if self.mod_one { frac(&y) } else { y }
    }

    /// True for homeomorphisms of the space (monotone, onto, and for circle
    /// maps of degree ±1).
    pub fn is_homeomorphism(&self) -> bool {
        let slopes = self.slopes();
        let all_pos = slopes.iter().all(|s| s.is_positive());
        let all_neg = slopes.iter().all(|s| s.is_negative());
        if !(all_pos || all_neg) {
            return false;
        }
        if self.mod_one {
            self.degree().abs().is_one()
        } else {
            let (a, b) = (&self.values[0], self.values.last().unwrap());
            (a.is_zero() && b.is_one()) || (a.is_one() && b.is_zero())
        }
    }

    fn universe(&self) -> Interval {
        if self.mod_one {
            Interval::new(Q::zero(), Q::one(), true, false)
        } else {
            Interval::closed(Q::zero(), Q::one())
        }
    }

    /// Reduces a lift interval modulo one into `[0,1)`.
    fn wrap(iv: Interval, out: &mut Vec<Interval>) {
        let (lo, hi) = (iv.lo.fin().clone(), iv.hi.fin().clone());
        let len = &hi - &lo;
        if len > Q::one() || (len.is_one() && (iv.lo_closed || iv.hi_closed)) {
            out.push(Interval::new(Q::zero(), Q::one(), true, false));
            return;
        }
        let k = lo.floor();
        let (lo, hi) = (lo - &k, hi - &k);
        if hi < Q::one() || (hi.is_one() && !iv.hi_closed) {
            out.push(Interval::new(lo, hi, iv.lo_closed, iv.hi_closed));
        } else {
            out.push(Interval::new(lo, Q::one(), iv.lo_closed, false));
            out.push(Interval::new(Q::zero(), hi - Q::one(), true, iv.hi_closed));
        }
    }

    /// `f(r)` for a single application.
    pub fn image_once(&self, r: &IntervalUnion) -> IntervalUnion {
        let mut out = Vec::new();
        for part in r.parts() {
            for piece in self.pieces() {
                let j = part.intersect(&piece.domain());
                if j.is_empty() {
                    continue;
                }
                let (a, b) = (piece.eval(j.lo.fin()), piece.eval(j.hi.fin()));
                let s = piece.slope();
                let img = if s.is_zero() {
                    Interval::point(a)
                } else if s.is_positive() {
                    Interval::new(a, b, j.lo_closed, j.hi_closed)
                } else {
                    Interval::new(b, a, j.hi_closed, j.lo_closed)
                };
                if self.mod_one {
                    Self::wrap(img, &mut out);
                } else {
                    out.push(img);
                }
            }
        }
        IntervalUnion::from_parts(out)
    }

    /// Exact `f^n(r)`.
    pub fn image(&self, r: &IntervalUnion, n: u64) -> Result<IntervalUnion> {
        self.image_capped(r, n, PIECE_CAP)
    }

    pub fn image_capped(&self, r: &IntervalUnion, n: u64, cap: usize) -> Result<IntervalUnion> {
        let mut cur = r.intersect(&IntervalUnion::single(self.universe()));
        for _ in 0..n {
            cur = self.image_once(&cur);
            if cur.parts().len() > cap {
                return Err(Error::BudgetExceeded(cur.parts().len()));
            }
        }
        Ok(cur)
    }

    /// Exact `f^{-1}(r)`.
    pub fn preimage(&self, r: &IntervalUnion) -> IntervalUnion {
        let mut out = Vec::new();
        for piece in self.pieces() {
            let s = piece.slope();
            let shifts: Vec<Q> = if self.mod_one {
                let (lo, hi) = if piece.v0 <= piece.v1 { (piece.v0, piece.v1) } else { (piece.v1, piece.v0) };
                let (k0, k1) = (lo.floor().to_integer(), hi.ceil().to_integer());
                num_iter(k0, k1).map(Q::from_integer).collect()
            } else {
                vec![Q::zero()]
            };
            if s.is_zero() {
                let hit = shifts.iter().any(|k| r.contains_q(&(piece.v0 - k)));
                if hit {
                    out.push(piece.domain());
                }
                continue;
            }
            for k in &shifts {
                for part in r.parts() {
                    let (Ext::Fin(lo), Ext::Fin(hi)) = (&part.lo, &part.hi) else { continue };
                    let x_lo = (lo + k - piece.v0) / &s + piece.b0;
                    let x_hi = (hi + k - piece.v0) / &s + piece.b0;
                    let iv = if s.is_positive() {
                        Interval::new(x_lo, x_hi, part.lo_closed, part.hi_closed)
                    } else {
                        Interval::new(x_hi, x_lo, part.hi_closed, part.lo_closed)
                    };
                    let c = iv.intersect(&piece.domain());
                    if !c.is_empty() {
                        out.push(c);
                    }
                }
            }
        }
        IntervalUnion::from_parts(out).intersect(&IntervalUnion::single(self.universe()))
    }

    /// All exact `y` with `f(y) = x`.
    pub fn point_preimages(&self, x: &Q) -> BTreeSet<Q> {
        let r = IntervalUnion::single(Interval::point(x.clone()));
        let pre = self.preimage(&r);
        let mut out = BTreeSet::new();
        for part in pre.parts() {
            // flat pieces contribute whole intervals; keep their endpoints
            out.insert(part.lo.fin().clone());
            out.insert(part.hi.fin().clone());
        }
        out
    }

    /// `x ↦ g(f(x))`.
    pub fn then(&self, g: &PlMap) -> Result<PlMap> {
        if self.mod_one && !g.mod_one && g.values[0] != *g.values.last().unwrap() {
            return Err(Error::InvalidParameter(
                "circle map followed by an interval map that does not respect the seam".into(),
            ));
        }
        let mut points: BTreeSet<Q> = self.breakpoints.iter().cloned().collect();
        for piece in self.pieces() {
            let s = piece.slope();
            if s.is_zero() {
                continue;
            }
            let (lo, hi) = if piece.v0 <= piece.v1 { (piece.v0, piece.v1) } else { (piece.v1, piece.v0) };
            let shifts: Vec<Q> = if self.mod_one {
                num_iter(lo.floor().to_integer(), hi.ceil().to_integer())
                    .map(Q::from_integer)
                    .collect()
            } else {
                vec![Q::zero()]
            };
            for k in &shifts {
                for b in &g.breakpoints {
                    let target = b + k;
                    if &target >= lo && &target <= hi {
                        points.insert((target - piece.v0) / &s + piece.b0);
                    }
                }
            }
        }
        let bps: Vec<Q> = points.into_iter().collect();
        let vals: Vec<Q> = bps
            .iter()
            .map(|x| {
                let y = self.lift(x);
                if self.mod_one {
                    let fl = y.floor();
                    let r = y - &fl;
                    if g.mod_one {
                        g.lift(&r) + g.degree() * fl
                    } else {
                        g.lift(&r)
                    }
                } else {
                    g.lift(&y)
                }
            })
            .collect();
        // interval map into a circle map is not a self-map of one space
        PlMap::new(bps, vals, g.mod_one)
    }

    /// Fixed points, solved piece by piece (`v0 + s(x - b0) = x`).
    pub fn fixed_points(&self) -> BTreeSet<Q> {
        let mut out = BTreeSet::new();
        for piece in self.pieces() {
            let s = piece.slope();
            let shifts: Vec<Q> = if self.mod_one {
                let (lo, hi) = if piece.v0 <= piece.v1 { (piece.v0, piece.v1) } else { (piece.v1, piece.v0) };
                num_iter(lo.floor().to_integer() - 1, hi.ceil().to_integer() + 1)
                    .map(Q::from_integer)
                    .collect()
            } else {
                vec![Q::zero()]
            };
            for k in shifts {
                if s.is_one() {
                    if (piece.v0 - piece.b0 - &k).is_zero() {
                        out.insert(piece.b0.clone());
                    }
                    continue;
                }
                // v0 - s*b0 - k = x (1 - s)
                let x = (piece.v0 - &s * piece.b0 - &k) / (Q::one() - &s);
                if &x >= piece.b0 && &x <= piece.b1 && (!self.mod_one || x < Q::one()) {
                    out.insert(x);
                }
            }
        }
        out
    }
}

fn num_iter(lo: num_bigint::BigInt, hi: num_bigint::BigInt) -> impl Iterator<Item = num_bigint::BigInt> {
    let mut cur = lo;
    std::iter::from_fn(move || {
        if cur > hi {
            None
        } else {
            let v = cur.clone();
            cur += 1;
            Some(v)
        }
    })
}

impl std::fmt::Display for PlMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let b: Vec<String> = self.breakpoints.iter().map(fmt_q).collect();
        let v: Vec<String> = self.values.iter().map(fmt_q).collect();
        write!(f, "pl[{}|{}{}]", b.join(","), v.join(","), if self.mod_one { "|mod1" } else { "" })
    }
}

/// `(t, x) ↦ t + x` on `[0, ∞]`: exact hitting sets by endpoint arithmetic.
pub mod translation {
    use super::*;

    fn positive_times() -> IntervalUnion {
        IntervalUnion::single(Interval { lo: Ext::Fin(Q::zero()), hi: Ext::Inf, lo_closed: false, hi_closed: false })
    }

    fn neg(e: &Ext) -> Option<Q> {
        match e {
            Ext::Fin(v) => Some(-v),
            Ext::Inf => None,
        }
    }

    /// `{y - x : x ∈ a, y ∈ b}` restricted to `t > 0`; `None` bounds mean
    /// unbounded in that direction.
    fn difference(a: &Interval, b: &Interval) -> Interval {
        let lo = match (&b.lo, &a.hi) {
            (Ext::Fin(c), Ext::Fin(bb)) => Ext::Fin(c - bb),
            (Ext::Fin(_), Ext::Inf) => Ext::Fin(qi(-1)),
            (Ext::Inf, _) => Ext::Inf,
        };
        let lo_closed = b.lo_closed && a.hi_closed && !a.hi.is_inf();
        let hi = match (&b.hi, neg(&a.lo)) {
            (Ext::Fin(d), Some(na)) => Ext::Fin(d + na),
            _ => Ext::Inf,
        };
        let hi_closed = b.hi_closed && a.lo_closed && !hi.is_inf();
        Interval { lo, hi, lo_closed, hi_closed }
    }

    fn finite_part(u: &IntervalUnion) -> IntervalUnion {
        let fin = IntervalUnion::single(Interval { lo: Ext::Fin(Q::zero()), hi: Ext::Inf, lo_closed: true, hi_closed: false });
        u.intersect(&fin)
    }

    /// `{t > 0 : (U + t) ∩ V ≠ ∅}`, exactly.
    pub fn hitting(u: &IntervalUnion, v: &IntervalUnion) -> IntervalUnion {
        if u.contains(&Ext::Inf) && v.contains(&Ext::Inf) {
            return positive_times();
        }
        let (uf, vf) = (finite_part(u), finite_part(v));
        let mut parts = Vec::new();
        for a in uf.parts() {
            for b in vf.parts() {
                parts.push(difference(a, b));
            }
        }
        // a finite x can only approach ∞; ∞ itself is never reached
        IntervalUnion::from_parts(parts).intersect(&positive_times())
    }

    /// `{t > 0 : x ∈ U + t}`.
    pub fn hitting_to_point(u: &IntervalUnion, x: &Ext) -> IntervalUnion {
        match x {
            Ext::Inf => {
                if u.contains(&Ext::Inf) { positive_times() } else { IntervalUnion::empty() }
            }
            Ext::Fin(v) => hitting(u, &IntervalUnion::single(Interval::point(v.clone()))),
        }
    }

    /// `{t > 0 : x + t ∈ V}`.
    pub fn hitting_from_point(x: &Ext, v: &IntervalUnion) -> IntervalUnion {
        match x {
            Ext::Inf => {
                if v.contains(&Ext::Inf) { positive_times() } else { IntervalUnion::empty() }
            }
            Ext::Fin(p) => hitting(&IntervalUnion::single(Interval::point(p.clone())), v),
        }
    }

    /// `U + t`.
    pub fn image(u: &IntervalUnion, t: &Q) -> IntervalUnion {
        u.shift(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ou(a: Q, b: Q) -> IntervalUnion {
        IntervalUnion::single(Interval::open(a, b))
    }

    #[test]
    fn tent_image_of_middle_interval() {
        let t = PlMap::tent();
        let u = ou(q(2, 5), q(3, 5));
        assert_eq!(t.image(&u, 1).unwrap().to_string(), "(4/5,1]");
        assert_eq!(t.image(&u, 4).unwrap().to_string(), "[0,1]");
        assert_ne!(t.image(&u, 3).unwrap().to_string(), "[0,1]");
        assert!(t.image(&IntervalUnion::empty(), 3).unwrap().is_empty());
    }

    #[test]
    fn preimages() {
        let t = PlMap::tent();
        assert_eq!(t.preimage(&ou(q(1, 2), q(1, 1))).to_string(), "(1/4,1/2)u(1/2,3/4)");
        let d = PlMap::doubling();
        assert_eq!(d.preimage(&ou(q(0, 1), q(1, 2))).to_string(), "(0,1/4)u(1/2,3/4)");
        let c = PlMap::new(vec![q(0, 1), q(1, 1)], vec![q(1, 3), q(1, 3)], false).unwrap();
        assert!(c.preimage(&ou(q(1, 2), q(1, 1))).is_empty());
        assert_eq!(c.preimage(&ou(q(0, 1), q(1, 2))).to_string(), "[0,1]");
    }

    #[test]
    fn swap_map_exchanges_halves() {
        let f = PlMap::swap();
        let left = ou(q(0, 1), q(1, 2));
        assert_eq!(f.image(&left, 1).unwrap().to_string(), "(1/2,1]");
        let sq = f.then(&f).unwrap();
        // the square restricted to [0,1/2] is conjugate to the tent map by x ↦ 1/2 - x
        for j in 0..=40 {
            let y = q(j, 80);
            let x = q(1, 2) - &y;
            let conj = q(1, 2) - sq.eval(&x);
            let tent = if y <= q(1, 4) { qi(2) * &y } else { Q::one() - qi(2) * &y };
            assert_eq!(conj, tent);
        }
    }

    #[test]
    fn rotation_third_is_periodic() {
        let r = PlMap::rotation(q(1, 3));
        let u = ou(q(0, 1), q(1, 8));
        let img3 = r.image(&u, 3).unwrap();
        assert_eq!(img3, u);
        assert_eq!(r.eval(&q(2, 3)), q(0, 1));
        assert!(r.is_homeomorphism());
    }

    #[test]
    fn circle_image_wraps() {
        let d = PlMap::doubling();
        let img = d.image(&ou(q(3, 8), q(5, 8)), 1).unwrap();
        assert_eq!(img.to_string(), "[0,1/4)u(3/4,1)");
        assert_eq!(d.image(&ou(q(0, 1), q(1, 2)), 1).unwrap().to_string(), "(0,1)");
    }

    #[test]
    fn fixed_points_found_per_piece() {
        assert_eq!(PlMap::tent().fixed_points().into_iter().collect::<Vec<_>>(), vec![q(0, 1), q(2, 3)]);
        assert_eq!(PlMap::swap().fixed_points().into_iter().collect::<Vec<_>>(), vec![q(1, 2)]);
        assert_eq!(PlMap::doubling().fixed_points().into_iter().collect::<Vec<_>>(), vec![q(0, 1)]);
        assert!(PlMap::rotation(q(1, 3)).fixed_points().is_empty());
    }

    #[test]
    fn composition_with_circle_source() {
        let phi = PlMap::tent();
        let lhs = PlMap::doubling().then(&phi).unwrap();
        let rhs = phi.then(&PlMap::tent()).unwrap();
        for j in 0..64 {
            let x = q(j, 64);
            assert_eq!(lhs.eval(&x), rhs.eval(&x));
        }
    }

    #[test]
    fn translation_hitting_sets() {
        use translation::hitting;
        assert!(hitting(&ou(qi(2), qi(3)), &ou(qi(0), qi(1))).is_empty());
        assert_eq!(hitting(&ou(qi(0), qi(1)), &ou(qi(2), qi(3))).to_string(), "(1,3)");
        assert_eq!(hitting(&ou(qi(0), qi(1)), &ou(qi(0), qi(1))).to_string(), "(0,1)");
        let tail = IntervalUnion::single(Interval { lo: Ext::Fin(qi(5)), hi: Ext::Inf, lo_closed: false, hi_closed: true });
        assert_eq!(hitting(&ou(qi(0), qi(1)), &tail).to_string(), "(4,inf)");
    }
}
