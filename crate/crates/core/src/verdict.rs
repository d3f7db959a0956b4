//! Three-valued outcomes of property checks.

use std::fmt;

use crate::hitting::FamilyCertificate;
use crate::point::Point;
use crate::rational::{fmt_q, q, Q};
use crate::region::Region;

/// Resolution, horizon, product order and word length used by a check.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CheckBudget {
    pub epsilon: Q,
    pub horizon: u64,
    pub order: usize,
    pub word_len: usize,
}

impl CheckBudget {
    pub fn new(epsilon: Q, horizon: u64) -> Self {
        CheckBudget { epsilon, horizon, order: 2, word_len: 6 }
    }

    pub fn with_order(mut self, k: usize) -> Self {
        self.order = k;
        self
    }

    pub fn with_word_len(mut self, l: usize) -> Self {
        self.word_len = l;
        self
    }

    pub fn is_valid(&self) -> bool {
        self.epsilon > q(0, 1) && self.horizon >= 1 && self.order >= 1 && self.word_len >= 1
    }
}

impl Default for CheckBudget {
    fn default() -> Self {
        CheckBudget::new(q(1, 8), 32)
    }
}

impl fmt::Display for CheckBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "eps={};H={};k={};L={}",
            fmt_q(&self.epsilon),
            self.horizon,
            self.order,
            self.word_len
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    Holds,
    Fails,
    Undetermined,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Holds => "HOLDS",
            Status::Fails => "FAILS",
            Status::Undetermined => "UNDETERMINED",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    /// Replayable description of why a property holds.
    Certificate(String),
    Family(FamilyCertificate),
    /// Largest eventually-onto time over the basis.
    OntoTime { max_n: u64 },
    /// Positive matrix power.
    PrimitivePower { power: u32 },
    /// Period of an irreducible transition graph.
    Period { period: u64 },
    /// Vertex `to` cannot be reached from vertex `from`.
    Unreachable { from: usize, to: usize },
    /// A pair of sets with an (exactly) empty hitting set.
    EmptyPair { from: String, to: String, proof: String },
    /// A point that obstructs the property.
    PointWitness { point: Point, reason: String },
    /// A region that obstructs the property.
    RegionWitness { region: Region, reason: String },
    /// Budget exhausted or the two routes disagreed.
    Exhausted(String),
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evidence::Certificate(s) => write!(f, "cert:{s}"),
            Evidence::Family(c) => write!(f, "family:{c}"),
            Evidence::OntoTime { max_n } => write!(f, "onto:maxN={max_n}"),
            Evidence::PrimitivePower { power } => write!(f, "primitive:M^{power}>0"),
            Evidence::Period { period } => write!(f, "period:{period}"),
            Evidence::Unreachable { from, to } => write!(f, "unreachable:{from}->{to}"),
            Evidence::EmptyPair { from, to, proof } => write!(f, "empty:N({from},{to})=0;{proof}"),
            Evidence::PointWitness { point, reason } => write!(f, "point:{point};{reason}"),
            Evidence::RegionWitness { region, reason } => write!(f, "region:{region};{reason}"),
            Evidence::Exhausted(s) => write!(f, "budget:{s}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub evidence: Evidence,
}

impl Verdict {
    pub fn holds(evidence: Evidence) -> Self {
        Verdict { status: Status::Holds, evidence }
    }

    pub fn fails(evidence: Evidence) -> Self {
        Verdict { status: Status::Fails, evidence }
    }

    pub fn undetermined(reason: impl Into<String>) -> Self {
        Verdict { status: Status::Undetermined, evidence: Evidence::Exhausted(reason.into()) }
    }

    pub fn is_holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn is_fails(&self) -> bool {
        self.status == Status::Fails
    }

    pub fn is_undetermined(&self) -> bool {
        self.status == Status::Undetermined
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}", self.status, self.evidence)
    }
}
