use proptest::prelude::*;
use topotrans::point::{Point, Seq, SymbolicPoint};
use topotrans::properties::{check, check_point_properties, transitivity_criteria, Property};
use topotrans::rational::q;
use topotrans::system::builtin;
use topotrans::verdict::{CheckBudget, Status, Verdict};

const FAST: &[&str] = &["tent", "doubling", "swap_F", "rotation(1/3)", "full_shift", "golden_mean", "full_shift_z", "pnst"];

fn flipped(a: Status, b: Status) -> bool {
    matches!((a, b), (Status::Holds, Status::Fails) | (Status::Fails, Status::Holds))
}

fn chain_ok(v: &[&Verdict]) -> bool {
    // each flag Holds only if the weaker ones do
    (0..v.len()).all(|i| !v[i].is_holds() || v[i + 1..].iter().all(|w| w.is_holds()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn larger_budgets_never_flip(s in 0usize..FAST.len(), p in 0usize..8, e in 2i64..4, h in 3u32..5, grow in 0usize..3) {
        let sys = builtin(FAST[s]).unwrap();
        let prop = Property::ALL[p];
        let small = CheckBudget::new(q(1, 1 << e), 1 << h).with_word_len(3);
        let big = match grow {
            0 => CheckBudget::new(q(1, 1 << e), 1 << (h + 1)).with_word_len(3),
            1 => CheckBudget::new(q(1, 1 << (e + 1)), 1 << h).with_word_len(3),
            _ => CheckBudget::new(q(1, 1 << e), 1 << h).with_word_len(4),
        };
        let a = check(&sys, prop, &small).unwrap().status;
        let b = check(&sys, prop, &big).unwrap().status;
        prop_assert!(!flipped(a, b), "{} {}: {:?} at {} vs {:?} at {}", FAST[s], prop, a, small, b, big);
    }

    #[test]
    fn point_report_chain(m in 0usize..4, k in 0i64..64, e in 2i64..4) {
        let sys = builtin(["tent", "doubling", "swap_F", "rotation(1/3)"][m]).unwrap();
        let b = CheckBudget::new(q(1, 1 << e), 32);
        let r = check_point_properties(&sys, &Point::exact(q(k, 64)), &b).unwrap();
        prop_assert!(chain_ok(&[&r.almost_periodic, &r.recurrent, &r.nonwandering]));
    }

    #[test]
    fn point_report_chain_on_shifts(pre in prop::collection::vec(0u8..2, 0..4), period in prop::collection::vec(0u8..2, 1..4)) {
        let sys = builtin("full_shift").unwrap();
        let x = Point::Symbolic(SymbolicPoint::one_sided(Seq::periodic(pre, period)));
        let r = check_point_properties(&sys, &x, &CheckBudget::default()).unwrap();
        prop_assert!(chain_ok(&[&r.almost_periodic, &r.recurrent, &r.nonwandering]));
    }

    #[test]
    fn three_criteria_agree(s in 0usize..7, e in 2i64..4, h in 3u32..6) {
        let name = ["tent", "doubling", "swap_F", "rotation(1/3)", "full_shift", "golden_mean", "full_shift_z"][s];
        let sys = builtin(name).unwrap();
        prop_assume!(sys.is_central() && sys.is_exact());
        let b = CheckBudget::new(q(1, 1 << e), 1 << h);
        let [fwd, back, union] = transitivity_criteria(&sys, &b).unwrap();
        prop_assert_eq!(fwd.status, back.status, "{}: {} / {}", name, fwd, back);
        prop_assert_eq!(fwd.status, union.status, "{}: {} / {}", name, fwd, union);
    }
}

#[test]
fn criteria_cover_central_exact_builtins() {
    for name in ["tent", "doubling", "swap_F", "rotation(1/3)", "full_shift", "golden_mean", "full_shift_z"] {
        let sys = builtin(name).unwrap();
        assert!(sys.is_central() && sys.is_exact(), "{name}");
    }
}
