//! Sectioned key-value run plans.
//!
//! ```text
//! [system tent]
//! kind = builtin
//! name = tent
//!
//! [check]
//! system = tent
//! property = leo
//! epsilon = 1/8
//! horizon = 16
//! ```

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;
use topotrans::actions::{Angle, GeneratorMap, SemigroupAction};
use topotrans::hierarchy::BUILTIN_FACTORS;
use topotrans::interval_maps::PlMap;
use topotrans::point::Point;
use topotrans::properties::Property;
use topotrans::rational::{parse_q, q, qi, ContinuedFraction};
use topotrans::space::Space;
use topotrans::symbolic::{parse_word, Subshift, Substitution};
use topotrans::system::{builtin, product, ProductMode, SystemHandle, SystemKind};
use topotrans::verdict::{CheckBudget, Status};
use topotrans::Q;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("line {0}: {1}")]
    Parse(usize, String),
    #[error("line {0}: unknown system kind `{1}`")]
    UnknownSystemKind(usize, String),
    #[error("line {0}: bad rational `{1}`")]
    BadRational(usize, String),
}

impl ConfigError {
    pub fn line(&self) -> usize {
        match self {
            ConfigError::Parse(l, _) | ConfigError::UnknownSystemKind(l, _) | ConfigError::BadRational(l, _) => *l,
        }
    }
}

/// One requested property check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckRequest {
    pub system: String,
    pub property: Property,
    pub budget: CheckBudget,
}

/// A verdict forced into the audit table in place of a computed one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Injection {
    pub system: String,
    pub property: Property,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Audits {
    pub implication: bool,
    /// Factor names, see [`topotrans::hierarchy::builtin_factor`].
    pub preservation: Vec<String>,
    /// Declared system names.
    pub product_identity: Vec<String>,
    pub budget: CheckBudget,
}

impl Default for Audits {
    fn default() -> Self {
        Audits { implication: false, preservation: Vec::new(), product_identity: Vec::new(), budget: CheckBudget::new(q(1, 4), 8) }
    }
}

impl Audits {
    pub fn any(&self) -> bool {
        self.implication || !self.preservation.is_empty() || !self.product_identity.is_empty()
    }
}

/// A validated plan: names are unique and every reference resolves.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunPlan {
    pub systems: BTreeMap<String, SystemHandle>,
    pub checks: Vec<CheckRequest>,
    pub injections: Vec<Injection>,
    pub audits: Audits,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SectionKind {
    System,
    Check,
    Audit,
    Inject,
}

impl fmt::Display for SectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SectionKind::System => "system",
            SectionKind::Check => "check",
            SectionKind::Audit => "audit",
            SectionKind::Inject => "inject",
        };
        f.write_str(s)
    }
}

struct Section {
    kind: SectionKind,
    name: String,
    line: usize,
    keys: BTreeMap<String, (usize, String)>,
}

impl Section {
    /// Rejects keys outside `allowed`.
    fn only(&self, allowed: &[&str], errs: &mut Vec<ConfigError>) {
        for (k, (line, _)) in &self.keys {
            if !allowed.contains(&k.as_str()) {
                errs.push(ConfigError::Parse(*line, format!("unknown key `{k}` in [{}] block", self.kind)));
            }
        }
    }

    fn get(&self, key: &str) -> Option<(usize, &str)> {
        self.keys.get(key).map(|(l, v)| (*l, v.as_str()))
    }

    fn require(&self, key: &str) -> Result<(usize, &str), ConfigError> {
        self.get(key).ok_or_else(|| ConfigError::Parse(self.line, format!("[{}] block needs `{key}`", self.kind)))
    }

    fn rational(&self, key: &str) -> Result<Option<Q>, ConfigError> {
        self.get(key).map(|(l, v)| rational(l, v)).transpose()
    }

    fn int<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError> {
        self.get(key)
            .map(|(l, v)| v.parse().map_err(|_| ConfigError::Parse(l, format!("`{key}` must be a nonnegative integer, got `{v}`"))))
            .transpose()
    }

    fn flag(&self, key: &str, default: bool) -> Result<bool, ConfigError> {
        match self.get(key) {
            None => Ok(default),
            Some((_, "true")) => Ok(true),
            Some((_, "false")) => Ok(false),
            Some((l, v)) => Err(ConfigError::Parse(l, format!("`{key}` must be true or false, got `{v}`"))),
        }
    }

    fn budget(&self, default: &CheckBudget) -> Result<CheckBudget, ConfigError> {
        let b = CheckBudget {
            epsilon: self.rational("epsilon")?.unwrap_or_else(|| default.epsilon.clone()),
            horizon: self.int("horizon")?.unwrap_or(default.horizon),
            order: self.int("order")?.unwrap_or(default.order),
            word_len: self.int("wordlen")?.unwrap_or(default.word_len),
        };
        if !b.is_valid() || b.epsilon > Q::one() {
            return Err(ConfigError::Parse(self.line, format!("invalid budget {b}: need 0 < epsilon <= 1 and positive horizon, order, wordlen")));
        }
        Ok(b)
    }
}

fn rational(line: usize, text: &str) -> Result<Q, ConfigError> {
    parse_q(text).map_err(|_| ConfigError::BadRational(line, text.trim().to_string()))
}

fn list(text: &str) -> Vec<&str> {
    text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

/// Splits `text` into sections; stray lines and malformed headers are errors.
fn sections(text: &str, errs: &mut Vec<ConfigError>) -> Vec<Section> {
    let mut out: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        if let Some(head) = s.strip_prefix('[') {
            let Some(head) = head.strip_suffix(']') else {
                errs.push(ConfigError::Parse(line, "unterminated section header".into()));
                continue;
            };
            let mut words = head.split_whitespace();
            let (kind, name) = (words.next().unwrap_or(""), words.next());
            if words.next().is_some() {
                errs.push(ConfigError::Parse(line, "section header has extra words".into()));
                continue;
            }
            let kind = match (kind, name) {
                ("system", Some(_)) => SectionKind::System,
                ("system", None) => {
                    errs.push(ConfigError::Parse(line, "[system] needs a name".into()));
                    continue;
                }
                ("check", None) => SectionKind::Check,
                ("audit", None) => SectionKind::Audit,
                ("inject", None) => SectionKind::Inject,
                _ => {
                    errs.push(ConfigError::Parse(line, format!("unknown section `[{head}]`")));
                    continue;
                }
            };
            out.push(Section { kind, name: name.unwrap_or("").to_string(), line, keys: BTreeMap::new() });
            continue;
        }
        let Some((k, v)) = s.split_once('=') else {
            errs.push(ConfigError::Parse(line, format!("expected `key = value`, got `{s}`")));
            continue;
        };
        let (k, v) = (k.trim(), v.trim());
        let Some(sec) = out.last_mut() else {
            errs.push(ConfigError::Parse(line, "key outside of any section".into()));
            continue;
        };
        if k.is_empty() {
            errs.push(ConfigError::Parse(line, "empty key".into()));
        } else if sec.keys.insert(k.to_string(), (line, v.to_string())).is_some() {
            errs.push(ConfigError::Parse(line, format!("duplicate key `{k}`")));
        }
    }
    out
}

/// Parses and validates a plan, collecting every error found.
pub fn parse_config(text: &str) -> Result<RunPlan, Vec<ConfigError>> {
    let mut errs = Vec::new();
    let secs = sections(text, &mut errs);
    let mut plan = RunPlan::default();
    let mut audit_seen = false;
    for sec in &secs {
        let res = match sec.kind {
            SectionKind::System => system_block(sec, &plan.systems).map(|sys| {
                if plan.systems.contains_key(&sec.name) {
                    Err(ConfigError::Parse(sec.line, format!("system `{}` declared twice", sec.name)))
                } else {
                    plan.systems.insert(sec.name.clone(), sys);
                    Ok(())
                }
            }),
            SectionKind::Check => check_block(sec, &plan.systems).map(|cs| {
                plan.checks.extend(cs);
                Ok(())
            }),
            SectionKind::Inject => inject_block(sec, &plan.systems).map(|i| {
                plan.injections.push(i);
                Ok(())
            }),
            SectionKind::Audit if audit_seen => Ok(Err(ConfigError::Parse(sec.line, "only one [audit] block is allowed".into()))),
            SectionKind::Audit => {
                audit_seen = true;
                audit_block(sec, &plan.systems).map(|a| {
                    plan.audits = a;
                    Ok(())
                })
            }
        };
        match res {
            Ok(Ok(())) => {}
            Ok(Err(e)) | Err(e) => errs.push(e),
        }
    }
    if errs.is_empty() {
        Ok(plan)
    } else {
        errs.sort_by_key(ConfigError::line);
        Err(errs)
    }
}

fn system_block(sec: &Section, declared: &BTreeMap<String, SystemHandle>) -> Result<SystemHandle, ConfigError> {
    let mut errs = Vec::new();
    let (kl, kind) = sec.require("kind")?;
    let core = |l: usize| move |e: topotrans::Error| ConfigError::Parse(l, e.to_string());
    let handle = match kind {
        "builtin" => {
            sec.only(&["kind", "name"], &mut errs);
            let (l, name) = sec.require("name")?;
            builtin(name).map_err(core(l))?
        }
        "pl" => {
            sec.only(&["kind", "breakpoints", "values", "circle"], &mut errs);
            let (bl, bps) = sec.require("breakpoints")?;
            let (vl, vals) = sec.require("values")?;
            let bps = list(bps).into_iter().map(|x| rational(bl, x)).collect::<Result<Vec<_>, _>>()?;
            let vals = list(vals).into_iter().map(|x| rational(vl, x)).collect::<Result<Vec<_>, _>>()?;
            SystemHandle::new(&sec.name, SystemKind::Pl(PlMap::new(bps, vals, sec.flag("circle", false)?).map_err(core(sec.line))?))
        }
        "translation" => {
            sec.only(&["kind"], &mut errs);
            SystemHandle::new(&sec.name, SystemKind::Translation)
        }
        "full_shift" => {
            sec.only(&["kind", "alphabet", "two_sided"], &mut errs);
            let k = sec.int::<u8>("alphabet")?.unwrap_or(2);
            SystemHandle::new(&sec.name, SystemKind::Shift(Subshift::full(k, sec.flag("two_sided", false)?).map_err(core(sec.line))?))
        }
        "sft" => {
            sec.only(&["kind", "matrix", "two_sided"], &mut errs);
            let (l, m) = sec.require("matrix")?;
            let m = matrix(l, m)?;
            SystemHandle::new(&sec.name, SystemKind::Shift(Subshift::sft(m, sec.flag("two_sided", false)?).map_err(core(l))?))
        }
        "substitution" => {
            sec.only(&["kind", "substitution", "two_sided"], &mut errs);
            let (l, rule) = sec.require("substitution")?;
            let rule = substitution(l, rule)?;
            SystemHandle::new(&sec.name, SystemKind::Shift(Subshift::substitution(rule, sec.flag("two_sided", true)?).map_err(core(l))?))
        }
        "action" => {
            sec.only(&["kind", "space", "generators", "abelian"], &mut errs);
            let (sl, space) = sec.require("space")?;
            let space = action_space(sl, space)?;
            let (gl, gens) = sec.require("generators")?;
            let gens = list(gens).into_iter().map(|g| generator(gl, g, &space)).collect::<Result<Vec<_>, _>>()?;
            let a = SemigroupAction::new(space, gens, sec.flag("abelian", false)?).map_err(core(gl))?;
            SystemHandle::new(&sec.name, SystemKind::Action(a))
        }
        "product" => {
            sec.only(&["kind", "of", "mode"], &mut errs);
            let (ol, of) = sec.require("of")?;
            let parts = list(of)
                .into_iter()
                .map(|n| declared.get(n).cloned().ok_or_else(|| ConfigError::Parse(ol, format!("product of undeclared system `{n}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            if parts.len() < 2 {
                return Err(ConfigError::Parse(ol, "a product needs at least two systems".into()));
            }
            let mode = match sec.get("mode") {
                None | Some((_, "diagonal")) => ProductMode::Diagonal,
                Some((_, "independent")) => ProductMode::Independent,
                Some((l, m)) => return Err(ConfigError::Parse(l, format!("mode must be diagonal or independent, got `{m}`"))),
            };
            product(parts, mode).map_err(core(ol))?
        }
        other => return Err(ConfigError::UnknownSystemKind(kl, other.to_string())),
    };
    match errs.into_iter().next() {
        Some(e) => Err(e),
        None => Ok(SystemHandle { name: sec.name.clone(), ..handle }),
    }
}

/// Rows separated by `;`, entries by `,` or juxtaposed digits: `1,1;1,0` or `11;10`.
fn matrix(line: usize, text: &str) -> Result<Vec<Vec<u8>>, ConfigError> {
    text.split(';')
        .map(|row| {
            let row = row.trim();
            let cells: Vec<&str> = if row.contains(',') { list(row) } else { row.split("").filter(|s| !s.trim().is_empty()).collect() };
            cells
                .into_iter()
                .map(|c| match c {
                    "0" => Ok(0),
                    "1" => Ok(1),
                    _ => Err(ConfigError::Parse(line, format!("matrix entries must be 0 or 1, got `{c}`"))),
                })
                .collect()
        })
        .collect()
}

/// `0:01,1:10`: one rule per symbol, in symbol order.
fn substitution(line: usize, text: &str) -> Result<Substitution, ConfigError> {
    let mut rules = Vec::new();
    for (i, part) in list(text).into_iter().enumerate() {
        let bad = || ConfigError::Parse(line, format!("bad substitution rule `{part}`"));
        let (sym, img) = part.split_once(':').ok_or_else(bad)?;
        if sym.trim().parse::<usize>().ok() != Some(i) {
            return Err(ConfigError::Parse(line, format!("rule {i} must be for symbol {i}, got `{part}`")));
        }
        rules.push(parse_word(img.trim()).ok_or_else(bad)?);
    }
    Substitution::new(rules).map_err(|e| ConfigError::Parse(line, e.to_string()))
}

fn action_space(line: usize, text: &str) -> Result<Space, ConfigError> {
    match text {
        "circle" => Ok(Space::Circle),
        "unit" => Ok(Space::Unit),
        _ => {
            let n = text.strip_prefix("finite(").and_then(|r| r.strip_suffix(')')).and_then(|n| n.trim().parse().ok());
            match n {
                Some(n_max) if n_max > 0 => Ok(Space::Finite { n_max }),
                _ => Err(ConfigError::Parse(line, format!("space must be circle, unit or finite(N), got `{text}`"))),
            }
        }
    }
}

/// Generator names: `doubling`, `tent`, `times(k)`, `rotation(a)`,
/// `rotation_inv(a)` with `a` rational or `golden`, and `const(x)`.
fn generator(line: usize, text: &str, space: &Space) -> Result<GeneratorMap, ConfigError> {
    let bad = |m: String| ConfigError::Parse(line, m);
    let (head, arg) = match text.split_once('(') {
        Some((h, r)) => (h.trim(), Some(r.strip_suffix(')').ok_or_else(|| bad(format!("unbalanced `{text}`")))?.trim())),
        None => (text, None),
    };
    let angle = |a: &str| -> Result<Angle, ConfigError> {
        if a == "golden" {
            Ok(Angle::Irrational(ContinuedFraction::golden()))
        } else {
            Ok(Angle::Rational(rational(line, a)?))
        }
    };
    let g = match (head, arg) {
        ("doubling", None) => GeneratorMap::Pl(PlMap::doubling()),
        ("tent", None) => GeneratorMap::Pl(PlMap::tent()),
        ("times", Some(k)) => {
            let k: i64 = k.parse().map_err(|_| bad(format!("times(k) needs an integer, got `{k}`")))?;
            if k == 0 {
                return Err(bad("times(0) is not a circle map".into()));
            }
            GeneratorMap::Pl(PlMap::new(vec![Q::zero(), Q::one()], vec![Q::zero(), qi(k)], true).map_err(|e| bad(e.to_string()))?)
        }
        ("rotation", Some(a)) => GeneratorMap::rotation(angle(a)?),
        ("rotation_inv", Some(a)) => GeneratorMap::inverse_rotation(angle(a)?),
        ("const", Some(x)) => match space {
            Space::Finite { .. } => GeneratorMap::Constant(Point::Element(x.parse().map_err(|_| bad(format!("const on a finite space needs an element index, got `{x}`")))?)),
            _ => GeneratorMap::Constant(Point::exact(rational(line, x)?)),
        },
        _ => return Err(bad(format!("unknown generator `{text}`"))),
    };
    Ok(g)
}

fn system_ref(sec: &Section, declared: &BTreeMap<String, SystemHandle>) -> Result<String, ConfigError> {
    let (l, name) = sec.require("system")?;
    if !declared.contains_key(name) {
        return Err(ConfigError::Parse(l, format!("undeclared system `{name}`")));
    }
    Ok(name.to_string())
}

fn properties(line: usize, text: &str) -> Result<Vec<Property>, ConfigError> {
    if text == "all" {
        return Ok(Property::ALL.to_vec());
    }
    let ps = list(text);
    if ps.is_empty() {
        return Err(ConfigError::Parse(line, "empty property list".into()));
    }
    ps.into_iter().map(|p| Property::parse(p).ok_or_else(|| ConfigError::Parse(line, format!("unknown property `{p}`")))).collect()
}

fn check_block(sec: &Section, declared: &BTreeMap<String, SystemHandle>) -> Result<Vec<CheckRequest>, ConfigError> {
    let mut errs = Vec::new();
    sec.only(&["system", "property", "epsilon", "horizon", "order", "wordlen"], &mut errs);
    if let Some(e) = errs.into_iter().next() {
        return Err(e);
    }
    let system = system_ref(sec, declared)?;
    let (pl, props) = sec.require("property")?;
    let props = properties(pl, props)?;
    let budget = sec.budget(&CheckBudget::default())?;
    Ok(props.into_iter().map(|property| CheckRequest { system: system.clone(), property, budget: budget.clone() }).collect())
}

fn inject_block(sec: &Section, declared: &BTreeMap<String, SystemHandle>) -> Result<Injection, ConfigError> {
    let mut errs = Vec::new();
    sec.only(&["system", "property", "status"], &mut errs);
    if let Some(e) = errs.into_iter().next() {
        return Err(e);
    }
    let system = system_ref(sec, declared)?;
    let (pl, p) = sec.require("property")?;
    let property = Property::parse(p).ok_or_else(|| ConfigError::Parse(pl, format!("unknown property `{p}`")))?;
    let (sl, s) = sec.require("status")?;
    let status = match s {
        "holds" => Status::Holds,
        "fails" => Status::Fails,
        "undetermined" => Status::Undetermined,
        _ => return Err(ConfigError::Parse(sl, format!("status must be holds, fails or undetermined, got `{s}`"))),
    };
    Ok(Injection { system, property, status })
}

fn audit_block(sec: &Section, declared: &BTreeMap<String, SystemHandle>) -> Result<Audits, ConfigError> {
    let mut errs = Vec::new();
    sec.only(&["implication", "preservation", "product_identity", "epsilon", "horizon", "order", "wordlen"], &mut errs);
    if let Some(e) = errs.into_iter().next() {
        return Err(e);
    }
    let defaults = Audits::default();
    let preservation: Vec<String> = sec.get("preservation").map_or(Vec::new(), |(_, v)| list(v).into_iter().map(String::from).collect());
    if let Some((l, _)) = sec.get("preservation") {
        for f in &preservation {
            let known = BUILTIN_FACTORS[..2].contains(&f.as_str()) || f.starts_with("identity(");
            if !known {
                return Err(ConfigError::Parse(l, format!("unknown factor `{f}`")));
            }
        }
    }
    let product_identity: Vec<String> = sec.get("product_identity").map_or(Vec::new(), |(_, v)| list(v).into_iter().map(String::from).collect());
    if let Some((l, _)) = sec.get("product_identity") {
        if let Some(n) = product_identity.iter().find(|n| !declared.contains_key(n.as_str())) {
            return Err(ConfigError::Parse(l, format!("undeclared system `{n}`")));
        }
    }
    Ok(Audits {
        implication: sec.flag("implication", false)?,
        preservation,
        product_identity,
        budget: sec.budget(&defaults.budget)?,
    })
}
