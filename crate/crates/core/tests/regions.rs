use proptest::prelude::*;
use topotrans::point::{Point, Tri};
use topotrans::rational::q;
use topotrans::region::{normalize_region, region_contains, Cylinder, Ext, Interval, RawPart, Region};
use topotrans::space::{basis, Space};
use topotrans::{Error, Q};

fn iv(a: i64, b: i64, c: i64, d: i64) -> RawPart {
    RawPart::Interval(Interval::open(q(a, b), q(c, d)))
}

#[test]
fn normalize_examples() {
    let r = normalize_region(&[iv(0, 1, 1, 2), iv(1, 4, 3, 4)]).unwrap();
    assert_eq!(r, normalize_region(&[iv(0, 1, 3, 4)]).unwrap());
    assert!(normalize_region(&[iv(1, 2, 1, 2)]).unwrap().is_empty());
    let r = normalize_region(&[
        RawPart::Cylinder(Cylinder::new(0, vec![0, 1])),
        RawPart::Cylinder(Cylinder::new(0, vec![0])),
    ])
    .unwrap();
    assert_eq!(r, Region::cylinder(0, &[0]));
    let mixed = normalize_region(&[iv(0, 1, 1, 2), RawPart::Element(3)]);
    assert!(matches!(mixed, Err(Error::MixedVariant)));
}

#[test]
fn contains_examples() {
    let r = Region::open(q(0, 1), q(1, 2));
    assert_eq!(region_contains(&r, &Point::exact(q(1, 4))).unwrap(), Tri::True);
    assert_eq!(region_contains(&r, &Point::exact(q(1, 2))).unwrap(), Tri::False);
    let narrow = Region::open(q(49, 100), q(51, 100));
    assert_eq!(region_contains(&narrow, &Point::approx(q(1, 2), q(1, 100))).unwrap(), Tri::Unknown);
}

#[test]
fn basis_examples() {
    let b = basis(&Space::Unit, &q(1, 4)).unwrap();
    for r in &b {
        let u = r.as_intervals().unwrap();
        assert_eq!(u.parts().len(), 1);
        assert_eq!(u.measure().unwrap(), q(1, 4));
    }
    // closed balls: agreement on coordinates 0..k has diameter 2^-k <= eps
    let b = basis(&Space::Shift { alphabet: 2, two_sided: false }, &q(1, 8)).unwrap();
    assert_eq!(b.len(), 8);
    for r in &b {
        let c = &r.as_cylinders().unwrap().cylinders()[0];
        assert_eq!((c.offset, c.word.len()), (0, 3));
    }
    let b = basis(&Space::Finite { n_max: 16 }, &q(1, 4)).unwrap();
    let singles = b.iter().filter(|r| r.as_finite().unwrap().len() == 1).count();
    assert!(singles >= 4);
    assert!(b.iter().any(|r| r.as_finite().unwrap().contains(&0)));
}

fn rational() -> impl Strategy<Value = Q> {
    (0i64..=240).prop_map(|n| q(n, 240))
}

fn raw_interval() -> impl Strategy<Value = Interval> {
    (rational(), rational(), any::<bool>(), any::<bool>()).prop_map(|(a, b, lc, hc)| {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        Interval::new(lo, hi, lc, hc)
    })
}

fn brute_contains(parts: &[Interval], x: &Q) -> bool {
    parts.iter().any(|p| {
        let lo = p.lo.fin();
        let above = if p.lo_closed { x >= lo } else { x > lo };
        let below = match &p.hi {
            Ext::Fin(hi) => {
                if p.hi_closed {
                    x <= hi
                } else {
                    x < hi
                }
            }
            Ext::Inf => true,
        };
        above && below
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normalize_is_idempotent_and_order_free(parts in prop::collection::vec(raw_interval(), 0..6), seed in any::<u64>()) {
        let raw: Vec<RawPart> = parts.iter().cloned().map(RawPart::Interval).collect();
        let once = normalize_region(&raw).unwrap();
        let again: Vec<RawPart> = match &once {
            Region::Intervals(u) => u.parts().iter().cloned().map(RawPart::Interval).collect(),
            _ => unreachable!(),
        };
        prop_assert_eq!(&normalize_region(&again).unwrap(), &once);
        let mut shuffled = raw.clone();
        let n = shuffled.len();
        if n > 1 {
            shuffled.rotate_left((seed % n as u64) as usize);
            shuffled.swap(0, (seed / 7 % n as u64) as usize);
        }
        prop_assert_eq!(&normalize_region(&shuffled).unwrap(), &once);
    }

    #[test]
    fn cylinder_normalize_is_idempotent(words in prop::collection::vec((0i64..3, prop::collection::vec(0u8..2, 1..4)), 1..6)) {
        let raw: Vec<RawPart> = words.iter().map(|(o, w)| RawPart::Cylinder(Cylinder::new(*o, w.clone()))).collect();
        let once = normalize_region(&raw).unwrap();
        let again: Vec<RawPart> = once.as_cylinders().unwrap().cylinders().iter().cloned().map(RawPart::Cylinder).collect();
        prop_assert_eq!(normalize_region(&again).unwrap(), once.clone());
        let mut rev = raw.clone();
        rev.reverse();
        prop_assert_eq!(normalize_region(&rev).unwrap(), once);
    }

    #[test]
    fn contains_matches_brute_force(parts in prop::collection::vec(raw_interval(), 0..5), xs in prop::collection::vec(rational(), 1000)) {
        let raw: Vec<RawPart> = parts.iter().cloned().map(RawPart::Interval).collect();
        let r = normalize_region(&raw).unwrap();
        for x in &xs {
            let t = region_contains(&r, &Point::exact(x.clone())).unwrap();
            prop_assert_eq!(t == Tri::True, brute_contains(&parts, x));
        }
    }
}

#[test]
fn bases_cover_a_fine_grid() {
    for eps in [q(1, 2), q(1, 4), q(1, 8), q(1, 16), q(1, 10)] {
        for space in [Space::Unit, Space::Circle] {
            let b = basis(&space, &eps).unwrap();
            let top = if space == Space::Unit { 1000 } else { 999 };
            for k in 0..=top {
                let x = Point::exact(q(k, 1000));
                let hit = b.iter().any(|r| region_contains(r, &x).unwrap() == Tri::True);
                assert!(hit, "{space:?} eps={eps} misses {k}/1000");
            }
        }
    }
}
