use topotrans::hitting::hitting_uv;
use topotrans::point::{Point, Seq, SymbolicPoint};
use topotrans::properties::*;
use topotrans::region::{Interval, Region};
use topotrans::symbolic::morse_point;
use topotrans::system::{builtin, SystemHandle};
use topotrans::verdict::{CheckBudget, Evidence, Status};
use topotrans::{rational::q, Q};

fn sys(name: &str) -> SystemHandle {
    builtin(name).unwrap()
}

fn budget(eps: Q, h: u64) -> CheckBudget {
    CheckBudget::new(eps, h)
}

fn status(name: &str, p: Property, b: &CheckBudget) -> Status {
    check(&sys(name), p, b).unwrap().status
}

fn open(a: i64, b: i64, c: i64, d: i64) -> Region {
    Region::interval(Interval::open(q(a, b), q(c, d)))
}

#[test]
fn transitive_examples() {
    let b = budget(q(1, 8), 32);
    assert_eq!(status("tent", Property::Transitive, &b), Status::Holds);
    assert_eq!(status("rotation(1/3)", Property::Transitive, &b), Status::Fails);
    let v = check_transitive(&sys("translation_semiflow"), &b).unwrap();
    assert!(v.is_fails(), "{v}");
    assert!(matches!(v.evidence, Evidence::EmptyPair { .. }));
    let n = hitting_uv(&sys("translation_semiflow"), &open(2, 1, 3, 1), &open(0, 1, 1, 1), &b).unwrap();
    assert!(n.provably_empty());
}

#[test]
fn point_transitive_examples() {
    let b = budget(q(1, 8), 32);
    let zero = Point::exact(q(0, 1));
    assert!(check_point_transitive(&sys("translation_semiflow"), &zero, &b).unwrap().is_holds());
    assert!(check_point_transitive(&sys("rotation(1/3)"), &zero, &b).unwrap().is_fails());

    // every word of length up to 6, then zeros
    let mut prefix = Vec::new();
    for len in 1..=6u32 {
        for w in 0..(1u32 << len) {
            prefix.extend((0..len).rev().map(|i| ((w >> i) & 1) as u8));
        }
    }
    let x = Point::Symbolic(SymbolicPoint::one_sided(Seq::periodic(prefix, vec![0])));
    let v = check_point_transitive(&sys("full_shift"), &x, &budget(q(1, 8), 1024)).unwrap();
    assert!(v.is_holds(), "{v}");
}

#[test]
fn weak_mixing_examples() {
    assert_eq!(status("doubling", Property::WeakMixing, &budget(q(1, 8), 64)), Status::Holds);
    assert_eq!(status("swap_F", Property::WeakMixing, &budget(q(1, 16), 64)), Status::Fails);
    assert_eq!(status("rotation(1/3)", Property::WeakMixing, &budget(q(1, 8), 32)), Status::Fails);
}

#[test]
fn mixing_examples() {
    let v = check_mixing(&sys("full_shift"), &budget(q(1, 8), 16)).unwrap();
    assert!(v.is_holds(), "{v}");
    assert_eq!(status("swap_F", Property::Mixing, &CheckBudget::default()), Status::Fails);
    assert_ne!(status("morse_thue", Property::Mixing, &budget(q(1, 8), 256)), Status::Holds);
}

#[test]
fn leo_examples() {
    let tent = sys("tent");
    assert_eq!(leo_time(&tent, &open(2, 5, 3, 5), 16).unwrap(), Some(4));
    let v = check_leo(&tent, &budget(q(1, 8), 16)).unwrap();
    match v.evidence {
        Evidence::OntoTime { max_n } => assert!(max_n <= 5, "{max_n}"),
        ref e => panic!("{e}"),
    }
    assert!(v.is_holds());
    assert_eq!(status("full_shift_z", Property::Leo, &CheckBudget::default()), Status::Fails);
    assert_eq!(status("pnst", Property::Leo, &CheckBudget::default()), Status::Fails);
}

#[test]
fn strongly_transitive_examples() {
    let b = CheckBudget::default();
    assert_eq!(status("pnst", Property::StronglyTransitive, &b.clone().with_word_len(1)), Status::Holds);
    assert_eq!(status("full_shift_z", Property::StronglyTransitive, &b), Status::Fails);
    assert_eq!(status("dai", Property::StronglyTransitive, &b), Status::Holds);
}

#[test]
fn vst_examples() {
    let b = CheckBudget::default();
    let st = status("doubling", Property::StronglyTransitive, &b);
    let vst = status("doubling", Property::Vst, &b);
    assert_eq!((st, vst), (Status::Holds, Status::Holds));
    assert_ne!(status("pnst", Property::Vst, &b), Status::Holds);
    assert_eq!(status("tent", Property::Vst, &b), Status::Holds);
}

#[test]
fn spt_examples() {
    assert_eq!(status("doubling", Property::Spt, &budget(q(1, 8), 64).with_order(3)), Status::Holds);
    assert_eq!(status("swap_F", Property::Spt, &CheckBudget::default()), Status::Fails);
    assert_eq!(status("pnst", Property::Spt, &CheckBudget::default()), Status::Fails);
}

#[test]
fn minimal_examples() {
    assert_eq!(status("morse_thue", Property::Minimal, &budget(q(1, 16), 512)), Status::Holds);
    let v = check_minimal(&sys("tent"), &CheckBudget::default()).unwrap();
    assert!(v.is_fails());
    assert!(matches!(v.evidence, Evidence::PointWitness { .. }), "{v}");
    assert_eq!(status("dai", Property::Minimal, &CheckBudget::default()), Status::Holds);
}

#[test]
fn point_property_examples() {
    let b = CheckBudget::default();
    let morse = Point::Symbolic(morse_point());
    let r = check_point_properties(&sys("morse_thue"), &morse, &budget(q(1, 8), 256)).unwrap();
    assert!(r.almost_periodic.is_holds(), "{}", r.almost_periodic);

    let r = check_point_properties(&sys("tent"), &Point::exact(q(0, 1)), &b).unwrap();
    assert!(r.nonwandering.is_holds() && r.recurrent.is_holds() && r.almost_periodic.is_holds());
    assert_eq!(r.omega_window, vec![Point::exact(q(0, 1))]);

    let x = Point::Symbolic(SymbolicPoint::one_sided(Seq::periodic(vec![1], vec![0])));
    let r = check_point_properties(&sys("full_shift"), &x, &b).unwrap();
    assert!(r.recurrent.is_fails(), "{}", r.recurrent);
}

#[test]
fn diagram_chain_on_builtins() {
    let b = CheckBudget::default();
    for name in ["tent", "doubling", "swap_F", "rotation(1/3)", "full_shift", "full_shift_z", "golden_mean", "pnst"] {
        let s = sys(name);
        let chain = [Property::Leo, Property::Vst, Property::StronglyTransitive, Property::Transitive];
        let v: Vec<Status> = chain.iter().map(|&p| check(&s, p, &b).unwrap().status).collect();
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                assert!(!(v[i] == Status::Holds && v[j] == Status::Fails), "{name}: {:?}", v);
            }
        }
    }
}

#[test]
fn invalid_budget_is_rejected() {
    let b = CheckBudget::new(q(0, 1), 32);
    assert!(check(&sys("tent"), Property::Transitive, &b).is_err());
}

#[test]
fn finite_order_detection() {
    use topotrans::interval_maps::PlMap;
    assert_eq!(finite_order(&PlMap::rotation(q(2, 5)), ORDER_PROBE).unwrap(), Some(5));
    assert_eq!(finite_order(&PlMap::rotation(q(0, 1)), ORDER_PROBE).unwrap(), Some(1));
    assert_eq!(finite_order(&PlMap::rotation(q(1, 65)), ORDER_PROBE).unwrap(), None);
    assert_eq!(finite_order(&PlMap::tent(), ORDER_PROBE).unwrap(), None);
}

#[test]
fn coarse_budgets_see_rational_rotation_gaps() {
    // the basis at 1/2 is wider than the gaps between the 5 rotated copies
    let b = budget(q(1, 2), 4).with_word_len(3);
    for p in Property::ALL {
        let v = check(&sys("rotation(2/5)"), p, &b).unwrap();
        assert!(!v.is_holds(), "{p}: {v}");
    }
}
