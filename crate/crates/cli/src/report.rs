//! Executing a plan and rendering the report.
//!
//! Every line is assembled after all work finishes and sorted canonically,
//! so the output does not depend on scheduling.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};

use rayon::prelude::*;
use topotrans::hierarchy::{builtin_factor, implication_audit, product_identity_sweep, verify_preservation, VerdictRow, VerdictTable};
use topotrans::properties::{check, Property};
use topotrans::verdict::{CheckBudget, Evidence, Status, Verdict};

use crate::config::RunPlan;

/// Outcome of one check: a verdict, or the error that stopped it.
pub type Outcome = Result<Verdict, String>;

#[derive(Clone, Debug)]
pub struct CheckLine {
    pub system: String,
    pub property: Property,
    pub budget: CheckBudget,
    pub outcome: Outcome,
}

#[derive(Clone, Debug)]
pub struct AuditLine {
    pub kind: &'static str,
    pub subject: String,
    pub detail: String,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub checks: Vec<CheckLine>,
    pub audits: Vec<AuditLine>,
    /// Implication violations, failed preservations and failed identities.
    pub violations: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Tsv,
    Pretty,
}

/// Runs `f`, turning errors and panics into an `Err` message.
fn guarded(f: impl FnOnce() -> topotrans::Result<Verdict>) -> Outcome {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(r) => r.map_err(|e| e.to_string()),
        Err(p) => Err(match p.downcast_ref::<&str>() {
            Some(s) => format!("panic: {s}"),
            None => match p.downcast_ref::<String>() {
                Some(s) => format!("panic: {s}"),
                None => "panic".to_string(),
            },
        }),
    }
}

fn status_of(o: &Outcome) -> Option<Status> {
    o.as_ref().ok().map(|v| v.status)
}

/// Executes every check and audit of `plan` on a pool of `jobs` threads.
pub fn run(plan: &RunPlan, jobs: usize, force_audit: bool) -> Report {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().expect("thread pool");
    pool.install(|| run_inner(plan, force_audit))
}

fn run_inner(plan: &RunPlan, force_audit: bool) -> Report {
    let mut checks: Vec<CheckLine> = plan
        .checks
        .par_iter()
        .map(|c| {
            let sys = &plan.systems[&c.system];
            CheckLine { system: c.system.clone(), property: c.property, budget: c.budget.clone(), outcome: guarded(|| check(sys, c.property, &c.budget)) }
        })
        .collect();
    // stable: equal keys keep plan order
    checks.sort_by(|a, b| (&a.system, a.property.id()).cmp(&(&b.system, b.property.id())));

    let mut report = Report { checks, ..Report::default() };
    let audits = &plan.audits;
    if audits.implication || force_audit || !plan.injections.is_empty() {
        implication_lines(plan, &mut report);
    }

    let ab = &audits.budget;
    let jobs: Vec<(String, Property)> = audits.preservation.iter().flat_map(|f| Property::ALL.map(|p| (f.clone(), p))).collect();
    let mut lines: Vec<AuditLine> = jobs
        .par_iter()
        .map(|(f, p)| AuditLine {
            kind: "preservation",
            subject: f.clone(),
            detail: format!("{p};{ab}"),
            outcome: guarded(|| verify_preservation(&builtin_factor(f)?, *p, ab)),
        })
        .collect();
    lines.extend(audits.product_identity.par_iter().map(|name| AuditLine {
        kind: "product_identity",
        subject: name.clone(),
        detail: ab.to_string(),
        outcome: guarded(|| product_identity_sweep(&plan.systems[name], ab)),
    }).collect::<Vec<_>>());
    report.violations += lines.iter().filter(|l| status_of(&l.outcome) == Some(Status::Fails)).count();
    report.audits.extend(lines);
    report
}

/// Builds the verdict table from the checks (injections override) and
/// audits the implications on it.
fn implication_lines(plan: &RunPlan, report: &mut Report) {
    let mut rows: BTreeMap<String, VerdictRow> = BTreeMap::new();
    for c in &report.checks {
        let Ok(v) = &c.outcome else { continue };
        let r = row(&mut rows, plan, &c.system);
        // a decided verdict outranks an undetermined one at another budget
        if r.status(c.property).is_none_or(|s| s == Status::Undetermined) {
            r.set(c.property, v.clone(), c.budget.clone());
        }
    }
    for inj in &plan.injections {
        let v = Verdict { status: inj.status, evidence: Evidence::Certificate("injected".into()) };
        row(&mut rows, plan, &inj.system).set(inj.property, v.clone(), CheckBudget::default());
        report.audits.push(AuditLine { kind: "inject", subject: inj.system.clone(), detail: inj.property.id().to_string(), outcome: Ok(v) });
    }
    let table = VerdictTable { rows: rows.into_values().collect() };
    let audit = implication_audit(&table);
    for v in &audit.violations {
        report.audits.push(AuditLine {
            kind: "violation",
            subject: v.system.clone(),
            detail: format!("{}=>{}", v.antecedent.id(), v.consequent.id()),
            outcome: Ok(Verdict::fails(Evidence::Certificate(v.to_string()))),
        });
    }
    let mut summary = format!("systems={};edges={}", table.rows.len(), audit.edges_checked);
    if !audit.conditional_skipped.is_empty() {
        let _ = write!(summary, ";conditional_skipped={}", audit.conditional_skipped.join(","));
    }
    let verdict = if audit.is_clean() {
        Verdict::holds(Evidence::Certificate("no violations".into()))
    } else {
        Verdict::fails(Evidence::Certificate(format!("violations={}", audit.violations.len())))
    };
    report.audits.push(AuditLine { kind: "implication", subject: "all".into(), detail: summary, outcome: Ok(verdict) });
    report.violations += audit.violations.len();
}

fn row<'a>(rows: &'a mut BTreeMap<String, VerdictRow>, plan: &RunPlan, name: &str) -> &'a mut VerdictRow {
    let sys = &plan.systems[name];
    rows.entry(name.to_string()).or_insert_with(|| VerdictRow::new(name, sys.is_abelian(), sys.is_central()))
}

/// Tabs and newlines would break the record format.
fn field(s: &str) -> String {
    s.replace(['\t', '\n', '\r'], " ")
}

fn outcome_fields(o: &Outcome) -> (String, String) {
    match o {
        Ok(v) => (v.status.to_string(), field(&v.evidence.to_string())),
        Err(e) => ("ERROR".to_string(), field(e)),
    }
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.violations > 0 {
            2
        } else {
            0
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Tsv => self.tsv(),
            Format::Pretty => self.pretty(),
        }
    }

    fn tsv(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let (s, e) = outcome_fields(&c.outcome);
            let _ = writeln!(out, "CHECK\t{}\t{}\t{}\t{s}\t{e}", c.system, c.property.id(), c.budget);
        }
        for a in &self.audits {
            let (s, e) = outcome_fields(&a.outcome);
            let _ = writeln!(out, "AUDIT\t{}\t{}\t{}\t{s}\t{e}", a.kind, a.subject, a.detail);
        }
        out
    }

    fn pretty(&self) -> String {
        const EVIDENCE_WIDTH: usize = 96;
        let mut out = String::new();
        let rows: Vec<[String; 4]> = self
            .checks
            .iter()
            .map(|c| {
                let (s, e) = outcome_fields(&c.outcome);
                [c.system.clone(), c.property.id().to_string(), c.budget.to_string(), format!("{s:<12} {}", clip(&e, EVIDENCE_WIDTH))]
            })
            .chain(self.audits.iter().map(|a| {
                let (s, e) = outcome_fields(&a.outcome);
                [format!("audit:{}", a.kind), a.subject.clone(), a.detail.clone(), format!("{s:<12} {}", clip(&e, EVIDENCE_WIDTH))]
            }))
            .collect();
        let width = |i: usize| rows.iter().map(|r| r[i].chars().count()).max().unwrap_or(0);
        let (w0, w1, w2) = (width(0), width(1), width(2));
        let mut last = "";
        for r in &rows {
            let first = if r[0] == last { "" } else { r[0].as_str() };
            let _ = writeln!(out, "{first:<w0$}  {:<w1$}  {:<w2$}  {}", r[1], r[2], r[3]);
            last = &r[0];
        }
        let _ = writeln!(out, "{} checks, {} audit lines, {} violations", self.checks.len(), self.audits.len(), self.violations);
        out
    }
}

fn clip(s: &str, n: usize) -> String {
    if s.chars().count() <= n {
        s.to_string()
    } else {
        let mut t: String = s.chars().take(n - 3).collect();
        t.push_str("...");
        t
    }
}
