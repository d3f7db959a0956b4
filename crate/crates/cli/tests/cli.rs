use std::path::PathBuf;
use std::process::{Command, Output};

use topotrans::properties::Property;
use topotrans::system::SystemKind;
use topotrans_cli::{parse_config, run, ConfigError, Format, RunPlan, DEFAULT_PLAN};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn topotrans(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_topotrans")).args(args).output().unwrap()
}

fn errors(text: &str) -> Vec<ConfigError> {
    parse_config(text).unwrap_err()
}

const TENT: &str = "[system tent]\nkind = pl\nbreakpoints = 0, 1/2, 1\nvalues = 0, 1, 0\n";

#[test]
fn tent_block_gives_one_pl_system() {
    let plan = parse_config(TENT).unwrap();
    assert_eq!(plan.systems.len(), 1);
    assert!(matches!(plan.systems["tent"].kind, SystemKind::Pl(_)));
    assert_eq!(plan.systems["tent"].name, "tent");
    assert!(plan.checks.is_empty());
}

#[test]
fn undeclared_system_is_a_parse_error() {
    let e = errors("[check]\nsystem = tent\nproperty = leo\n");
    assert_eq!(e, vec![ConfigError::Parse(2, "undeclared system `tent`".into())]);
}

#[test]
fn zero_denominator_is_a_bad_rational() {
    let e = errors("[system t]\nkind = pl\nbreakpoints = 0, 3/0, 1\nvalues = 0, 1, 0\n");
    assert_eq!(e, vec![ConfigError::BadRational(3, "3/0".into())]);
}

#[test]
fn unknown_kind_and_keys_are_errors() {
    assert_eq!(errors("[system s]\nkind = spiral\n"), vec![ConfigError::UnknownSystemKind(2, "spiral".into())]);
    let e = errors(&format!("{TENT}colour = red\n"));
    assert!(matches!(&e[..], [ConfigError::Parse(5, m)] if m.contains("colour")), "{e:?}");
    let e = errors(&format!("{TENT}[check]\nsystem = tent\nproperty = leo\nhorizn = 4\n"));
    assert!(matches!(&e[..], [ConfigError::Parse(8, m)] if m.contains("horizn")), "{e:?}");
}

#[test]
fn every_error_is_reported_with_its_line() {
    let text = "stray\n[system a]\nkind = builtin\nname = nope\n[system a]\nkind = builtin\nname = tent\n[check]\nsystem = a\nproperty = wobbly\n";
    let lines: Vec<usize> = errors(text).iter().map(ConfigError::line).collect();
    assert_eq!(lines, vec![1, 4, 10]);
}

#[test]
fn duplicate_names_and_bad_budgets_are_rejected() {
    assert!(!errors(&format!("{TENT}{TENT}")).is_empty());
    assert!(!errors(&format!("{TENT}[check]\nsystem = tent\nproperty = leo\nepsilon = 0\n")).is_empty());
    assert!(!errors(&format!("{TENT}[check]\nsystem = tent\nproperty = leo\nhorizon = -3\n")).is_empty());
    assert!(!errors(&format!("{TENT}[system p]\nkind = product\nof = tent, missing\n")).is_empty());
}

#[test]
fn check_blocks_expand_property_lists() {
    let plan = parse_config(&format!("{TENT}[check]\nsystem = tent\nproperty = all\nepsilon = 1/4\n")).unwrap();
    assert_eq!(plan.checks.len(), 8);
    assert!(plan.checks.iter().all(|c| c.budget.epsilon == topotrans::rational::q(1, 4) && c.budget.horizon == 32));
    let plan = parse_config(&format!("{TENT}[check]\nsystem = tent\nproperty = leo, spt\n")).unwrap();
    assert_eq!(plan.checks.iter().map(|c| c.property).collect::<Vec<_>>(), vec![Property::Leo, Property::Spt]);
}

#[test]
fn empty_plan_gives_empty_report_and_exit_zero() {
    let report = run(&RunPlan::default(), 1, false);
    assert_eq!(report.render(Format::Tsv), "");
    assert_eq!(report.exit_code(), 0);
    let empty = std::env::temp_dir().join(format!("topotrans-empty-{}.plan", std::process::id()));
    std::fs::write(&empty, "# nothing\n").unwrap();
    let out = topotrans(&["--config", empty.to_str().unwrap()]);
    std::fs::remove_file(&empty).unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
}

#[test]
fn report_lines_are_sorted_and_well_formed() {
    let out = topotrans(&["--config", fixture("custom.plan").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let checks: Vec<Vec<&str>> = text.lines().filter(|l| l.starts_with("CHECK")).map(|l| l.split('\t').collect()).collect();
    assert_eq!(checks.len(), 7);
    assert!(checks.iter().all(|f| f.len() == 6));
    let keys: Vec<(&str, &str)> = checks.iter().map(|f| (f[1], f[2])).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(text.contains("CHECK\tflip\tmixing\teps=1/8;H=32;k=2;L=6\tFAILS\t"));
    assert!(text.contains("CHECK\tmy_tent\tleo\teps=1/8;H=16;k=2;L=6\tHOLDS\tonto:maxN="));
    assert!(text.lines().last().unwrap().starts_with("AUDIT\tproduct_identity\tgolden\t"));
}

#[test]
fn runs_are_deterministic() {
    let path = fixture("custom.plan");
    let a = topotrans(&["--config", path.to_str().unwrap(), "--jobs", "1"]);
    let b = topotrans(&["--config", path.to_str().unwrap(), "--jobs", "4"]);
    assert_eq!(a.stdout, b.stdout);
    let plan = parse_config(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(run(&plan, 3, true).render(Format::Pretty), run(&plan, 1, true).render(Format::Pretty));
}

#[test]
fn exit_codes() {
    let out = topotrans(&["--config", fixture("fault.plan").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("AUDIT\tviolation\ttent\tleo=>transitive\tFAILS"));

    let out = topotrans(&["--config", fixture("does-not-exist.plan").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let bad = std::env::temp_dir().join(format!("topotrans-bad-{}.plan", std::process::id()));
    std::fs::write(&bad, "[check]\nsystem = ghost\nproperty = leo\n").unwrap();
    let out = topotrans(&["--config", bad.to_str().unwrap()]);
    std::fs::remove_file(&bad).unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(topotrans(&["--jobs", "0"]).status.code(), Some(1));
    assert_eq!(topotrans(&["--format", "xml"]).status.code(), Some(1));
}

#[test]
fn list_builtins() {
    let out = topotrans(&["--list-builtins"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["tent", "swap_F", "morse_thue", "pnst", "dai"] {
        assert!(text.lines().any(|l| l.starts_with(&format!("{name}\t"))), "{name}");
    }
}

#[test]
fn check_errors_are_captured_in_the_report() {
    // 4^20 cylinders at this resolution: the check refuses instead of running
    let plan = parse_config("[system s]\nkind = full_shift\nalphabet = 4\n[check]\nsystem = s\nproperty = transitive, leo\nepsilon = 1/1048576\n").unwrap();
    let report = run(&plan, 1, true);
    let text = report.render(Format::Tsv);
    assert_eq!(text.lines().filter(|l| l.starts_with("CHECK") && l.contains("\tERROR\t")).count(), 2, "{text}");
    assert_eq!(report.exit_code(), 0);
}

#[test]
fn default_plan_parses() {
    let plan = parse_config(DEFAULT_PLAN).unwrap();
    assert_eq!(plan.systems.len(), 12);
    assert_eq!(plan.checks.len(), 96);
    assert!(plan.audits.implication);
}
