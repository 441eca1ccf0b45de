use serde::{Deserialize, Serialize};

use crate::km2::{BCInstance, BCWitness};

/// Cap on the number of problem instances examined by one check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget(pub u64);

impl Default for Budget {
    fn default() -> Self {
        Budget(10_000_000)
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget(u64::MAX)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// The instance budget ran out before a decision was reached.
    Inconclusive,
}

impl Verdict {
    /// Conjunction: any failure wins, then any inconclusive outcome.
    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Pass,
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Horn `Lambda_p[n]` data: `faces[i]` is `c_i`, with `faces[p] == None`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HornProblem {
    pub n: usize,
    pub p: usize,
    pub faces: Vec<Option<usize>>,
}

/// Rhombus data: two `(n-1)`-simplices `c_p`, `c_q` with `d_p c_q = d_{q-1} c_p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhombusProblem {
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub c_p: usize,
    pub c_q: usize,
}

/// Partial Duskin data for a rhombus: everything except `f_{pq}` and the
/// 2-cells on triples containing both `p` and `q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DuskinRhombus {
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub objects: Vec<usize>,
    /// Indexed by pairs `i < j` in lexicographic order.
    pub one_cells: Vec<Option<usize>>,
    /// Indexed by triples `i < j < k` in lexicographic order.
    pub two_cells: Vec<Option<usize>>,
}

/// What a failing check points at.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Finding {
    Horn(HornProblem),
    Rhombus(RhombusProblem),
    /// A simplicial identity violated at a concrete simplex.
    SimplicialIdentity {
        identity: String,
        level: usize,
        simplex: usize,
        lhs: usize,
        rhs: usize,
    },
    /// An algebraic law (category, 2-category or monoid axiom) violated.
    Law { law: String, detail: String },
    /// An unsolvable `K(M,2)` rhombus instance and the equations that constrain it.
    Km2 {
        instance: BCInstance<usize>,
        binding_equations: Vec<String>,
    },
    Duskin(DuskinRhombus),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Filler {
    Simplex { id: usize },
    Km2 { witness: BCWitness<usize> },
    Duskin { f_pq: usize, two_cells: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sample {
    pub problem: Finding,
    pub filler: Filler,
}

/// Outcome of one condition check.
///
/// `verdict == Fail` exactly when `counterexample` is present.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub condition: String,
    pub verdict: Verdict,
    pub instances_examined: u64,
    pub counterexample: Option<Finding>,
    pub witness_sample: Option<Sample>,
}

impl CheckReport {
    pub fn pass(condition: impl Into<String>, instances_examined: u64) -> Self {
        CheckReport {
            condition: condition.into(),
            verdict: Verdict::Pass,
            instances_examined,
            counterexample: None,
            witness_sample: None,
        }
    }

    pub fn fail(condition: impl Into<String>, instances_examined: u64, finding: Finding) -> Self {
        CheckReport {
            condition: condition.into(),
            verdict: Verdict::Fail,
            instances_examined,
            counterexample: Some(finding),
            witness_sample: None,
        }
    }

    pub fn inconclusive(condition: impl Into<String>, instances_examined: u64) -> Self {
        CheckReport {
            condition: condition.into(),
            verdict: Verdict::Inconclusive,
            instances_examined,
            counterexample: None,
            witness_sample: None,
        }
    }

    pub fn with_sample(mut self, sample: Option<Sample>) -> Self {
        self.witness_sample = sample;
        self
    }

    pub fn is_pass(&self) -> bool {
        self.verdict.is_pass()
    }
}

/// Per-condition reports plus the aggregated verdicts of a `check_all` run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub kan: Option<Verdict>,
    pub bc: Option<Verdict>,
    pub reports: Vec<CheckReport>,
}

impl AggregateReport {
    pub fn verdict(&self) -> Verdict {
        self.reports
            .iter()
            .fold(Verdict::Pass, |acc, r| acc.and(r.verdict))
    }

    pub fn get(&self, condition: &str) -> Option<&CheckReport> {
        self.reports.iter().find(|r| r.condition == condition)
    }
}

pub(crate) fn kan_name(n: usize, p: usize) -> String {
    format!("Kan_{p}[{n}]")
}

pub(crate) fn bc_name(n: usize, p: usize, q: usize) -> String {
    format!("BC_{{{p},{q}}}[{n}]")
}
