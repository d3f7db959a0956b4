use proptest::prelude::*;
use topotrans::hitting::*;
use topotrans::interval_maps::PlMap;
use topotrans::point::{Point, Seq, SymbolicPoint};
use topotrans::properties::system_basis;
use topotrans::rational::{q, qi};
use topotrans::region::{Cylinder, Interval, IntervalUnion, Region};
use topotrans::system::{builtin, SystemHandle, SystemKind};
use topotrans::verdict::CheckBudget;

fn sys(name: &str) -> SystemHandle {
    builtin(name).unwrap()
}

fn b(h: u64) -> CheckBudget {
    CheckBudget::new(q(1, 8), h)
}

fn open(a: i64, b: i64, c: i64, d: i64) -> Region {
    Region::interval(Interval::open(q(a, b), q(c, d)))
}

#[test]
fn hitting_uv_examples() {
    let u = open(2, 5, 3, 5);
    let n = hitting_uv(&sys("tent"), &u, &u, &b(16)).unwrap();
    for t in 4..=16 {
        assert_eq!(n.contains(t), Some(true));
    }
    let n = hitting_uv(&sys("full_shift"), &Region::cylinder(0, &[0, 1]), &Region::cylinder(0, &[1, 0]), &b(8)).unwrap();
    assert_eq!(n.discrete_hits(), &[1, 2, 3, 4, 5, 6, 7, 8]);
    let n = hitting_uv(&sys("translation_semiflow"), &open(2, 1, 3, 1), &open(0, 1, 1, 1), &b(8)).unwrap();
    assert!(n.provably_empty());
}

#[test]
fn hitting_ux_examples() {
    let n = hitting_ux(&sys("tent"), &open(2, 5, 3, 5), &Point::exact(q(1, 3)), &b(16)).unwrap();
    assert!((4..=16).all(|t| n.contains(t) == Some(true)));
    // f²(U) = [0,2/5) already contains 1/3
    assert_eq!(classify(&n).class, FamilyClass::Cofinite { threshold: qi(2) });

    let n = hitting_ux(&sys("pnst"), &Region::finite(vec![2]), &Point::Element(5), &CheckBudget::default()).unwrap();
    match &n.hits {
        Hits::Word(w) => assert_eq!(w.len(), 1, "{w:?}"),
        h => panic!("{h:?}"),
    }

    let zeros = Point::Symbolic(SymbolicPoint::two_sided(Seq::constant(0), Seq::constant(0)));
    let n = hitting_ux(&sys("full_shift_z"), &Region::cylinder(0, &[1, 1]), &zeros, &b(32)).unwrap();
    assert!(n.provably_empty());
}

#[test]
fn hitting_xv_examples() {
    // the orbit {0, 1/3, 2/3} meets (3/10, 4/10) at 1/3 and misses (4/10, 6/10)
    let rot = sys("rotation(1/3)");
    let n = hitting_xv(&rot, &Point::exact(q(0, 1)), &open(3, 10, 4, 10), &b(64)).unwrap();
    assert_eq!(n.discrete_hits(), (1..=64).filter(|t| t % 3 == 1).collect::<Vec<_>>());
    let n = hitting_xv(&rot, &Point::exact(q(0, 1)), &open(4, 10, 6, 10), &b(64)).unwrap();
    assert!(n.provably_empty());
    let v = Region::Intervals(IntervalUnion::from_parts(vec![
        Interval::open(q(0, 1), q(1, 2)),
        Interval::open(q(1, 2), q(1, 1)),
    ]));
    let n = hitting_xv(&sys("tent"), &Point::exact(q(2, 5)), &v, &b(8)).unwrap();
    assert!(!n.is_empty_in_window());
    let n = hitting_xv(&sys("tent"), &Point::exact(q(0, 1)), &Region::interval(Interval::new(q(0, 1), q(1, 8), true, false)), &b(32)).unwrap();
    assert_eq!(n.discrete_hits().len(), 32);
}

#[test]
fn classify_examples() {
    let cof = TimeWindowSet::discrete((4..=64).collect(), 64, None);
    assert_eq!(classify(&cof).class, FamilyClass::Cofinite { threshold: qi(4) });
    let evens = TimeWindowSet::discrete((1..=64).filter(|n| n % 2 == 0).collect(), 64, None);
    let c = classify(&evens);
    assert_eq!(c.class, FamilyClass::Syndetic { gap: qi(2) });
    assert!(!c.is_thick());
    let runs: Vec<u64> = (4..=12).chain(20..=40).chain(50..=64).collect();
    let c = classify(&TimeWindowSet::discrete(runs, 64, None));
    match c.class {
        FamilyClass::Thick { run } => assert!(run >= qi(15)),
        other => panic!("{other}"),
    }
}

#[test]
fn filter_examples() {
    let doubling = sys("doubling");
    let basis = system_basis(&doubling, &q(1, 8)).unwrap();
    let mut coll = Vec::new();
    for (i, u) in basis.iter().enumerate() {
        for k in 0..5 {
            let x = Point::exact(q(2 * k + 1, 11));
            coll.push((format!("{i},{k}"), hitting_ux(&doubling, u, &x, &b(32)).unwrap()));
        }
    }
    assert!(filter_check(&coll).unwrap().is_holds());

    let swap = sys("swap_F");
    let x = Point::exact(q(1, 5));
    let even = hitting_ux(&swap, &open(0, 1, 1, 2), &x, &b(32)).unwrap();
    let odd = hitting_ux(&swap, &open(1, 2, 1, 1), &x, &b(32)).unwrap();
    assert!(filter_check(&[("U".into(), even), ("V".into(), odd)]).unwrap().is_fails());

    let three = TimeWindowSet::discrete(vec![3], 8, None);
    assert!(filter_check(&[("a".into(), three.clone()), ("b".into(), three)]).unwrap().is_holds());
}

#[test]
fn audit_examples() {
    let tent = sys("tent");
    let quarter = system_basis(&tent, &q(1, 4)).unwrap();
    let bb = CheckBudget::new(q(1, 4), 32);
    assert!(product_identity_audit(&tent, &quarter[0], &quarter[3], &quarter[1], &quarter[5], &bb).unwrap().is_holds());
    let fs = sys("full_shift");
    let c = |w: &[u8]| Region::cylinder(0, w);
    let v = product_identity_audit(&fs, &c(&[0, 1]), &c(&[1]), &c(&[1, 1]), &c(&[0, 0]), &b(16)).unwrap();
    assert!(v.is_holds());
    let swap = sys("swap_F");
    let (lo, hi) = (open(0, 1, 1, 2), open(1, 2, 1, 1));
    let v = product_identity_audit(&swap, &lo, &hi, &lo, &lo, &b(32)).unwrap();
    assert!(v.is_holds());
    let joint = hitting_uv(&swap, &lo, &lo, &b(32)).unwrap().intersect(&hitting_uv(&swap, &hi, &lo, &b(32)).unwrap()).unwrap();
    assert!(joint.provably_empty());
}

#[test]
fn furstenberg_examples() {
    let d = sys("doubling");
    let basis = system_basis(&d, &q(1, 8)).unwrap();
    let v = furstenberg_probe(&d, &basis[0], &basis[4], &basis[2], &basis[9], 3, &b(32)).unwrap();
    assert!(v.is_holds(), "{v}");
    let r = sys("rotation(1/3)");
    let basis = system_basis(&r, &q(1, 8)).unwrap();
    let v = furstenberg_probe(&r, &basis[0], &basis[4], &basis[1], &basis[4], 3, &b(32)).unwrap();
    assert!(!v.is_holds(), "{v}");
    let u = &basis[2];
    assert!(furstenberg_probe(&r, u, u, u, u, 1, &b(32)).unwrap().is_holds());
}

#[test]
fn product_identity_on_every_quadruple() {
    let bb = CheckBudget::new(q(1, 4), 6);
    for name in ["tent", "doubling", "swap_F", "rotation(1/3)", "full_shift", "golden_mean", "translation_semiflow"] {
        let s = sys(name);
        let basis = system_basis(&s, &q(1, 4)).unwrap();
        for u1 in &basis {
            for v1 in &basis {
                for u2 in &basis {
                    for v2 in &basis {
                        let v = product_identity_audit(&s, u1, v1, u2, v2, &bb).unwrap();
                        assert!(v.is_holds(), "{name}: {u1} {v1} {u2} {v2}: {v}");
                    }
                }
            }
        }
    }
}

/// `U ∩ f^{-n}(V) ≠ ∅` using preimages only.
fn backward_meets(f: &PlMap, u: &IntervalUnion, v: &IntervalUnion, n: u64) -> bool {
    let mut pre = v.clone();
    for _ in 0..n {
        pre = f.preimage(&pre);
    }
    u.intersects(&pre)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn horizon_monotone(m in 0usize..4, i in 0usize..7, j in 0usize..7, h1 in 1u64..20, extra in 1u64..20) {
        let s = sys(["tent", "doubling", "swap_F", "full_shift"][m]);
        let basis = system_basis(&s, &q(1, 4)).unwrap();
        let (u, v) = (&basis[i % basis.len()], &basis[j % basis.len()]);
        let small = hitting_uv(&s, u, v, &b(h1)).unwrap();
        let big = hitting_uv(&s, u, v, &b(h1 + extra)).unwrap();
        let cut = big.truncate(h1);
        prop_assert_eq!(small.discrete_hits(), cut.discrete_hits());
    }

    #[test]
    fn forward_equals_backward_on_pl(m in 0usize..4, i in 0usize..15, j in 0usize..15) {
        let s = sys(["tent", "doubling", "swap_F", "rotation(1/3)"][m]);
        let SystemKind::Pl(f) = &s.kind else { unreachable!() };
        let basis = system_basis(&s, &q(1, 8)).unwrap();
        let (u, v) = (&basis[i % basis.len()], &basis[j % basis.len()]);
        let n = hitting_uv(&s, u, v, &b(12)).unwrap();
        for t in 1..=12 {
            let back = backward_meets(f, u.as_intervals().unwrap(), v.as_intervals().unwrap(), t);
            prop_assert_eq!(n.contains(t), Some(back), "t = {}", t);
        }
    }

    #[test]
    fn forward_equals_backward_on_shifts(m in 0usize..3, u in prop::collection::vec(0u8..2, 1..4), v in prop::collection::vec(0u8..2, 1..4)) {
        let s = sys(["full_shift", "golden_mean", "full_shift_z"][m]);
        let shift = s.as_shift().unwrap();
        prop_assume!(shift.contains_word(&u) && shift.contains_word(&v));
        let n = hitting_uv(&s, &Region::cylinder(0, &u), &Region::cylinder(0, &v), &b(10)).unwrap();
        for t in 1..=10i64 {
            // σ^{-t}[v]@0 = [v]@t
            let pre = Cylinder::new(t, v.clone());
            let base = Cylinder::new(0, u.clone());
            let constraints: Vec<(i64, u8)> = base.constraints().chain(pre.constraints()).collect();
            let consistent = constraints.iter().all(|(i, a)| constraints.iter().all(|(j, c)| i != j || a == c));
            let back = consistent && shift.admits(&constraints);
            prop_assert_eq!(n.contains(t as u64), Some(back), "t = {}", t);
        }
    }

    #[test]
    fn cofinite_implies_syndetic_and_thick(hits in prop::collection::btree_set(1u64..=64, 0..64), start in 1u64..40) {
        let mut all: Vec<u64> = hits.into_iter().collect();
        all.extend(start..=64);
        let tws = TimeWindowSet::discrete(all.clone(), 64, None);
        let c = classify(&tws);
        if let Some(t) = c.threshold() {
            all.sort_unstable();
            all.dedup();
            let t: u64 = t.to_integer().try_into().unwrap();
            prop_assert!((t..=64).all(|n| all.contains(&n)));
            // least threshold, and at most half the window
            prop_assert!(t == 1 || !all.contains(&(t - 1)));
            prop_assert!(2 * t <= 64);
            prop_assert!(c.is_syndetic() && c.is_thick());
        }
    }
}
