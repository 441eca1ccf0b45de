use serde::{Deserialize, Serialize};

use super::bc_check_km2;
use crate::error::Result;
use crate::monoid::{commutative_monoids, is_cancellative, is_group, Monoid};
use crate::report::{bc_name, Budget, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionOutcome {
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub verdict: Verdict,
    pub instances_examined: u64,
}

/// One isomorphism class of commutative monoid and its rhombus verdicts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRow {
    pub monoid: Monoid,
    pub is_group: bool,
    pub is_cancellative: bool,
    pub conditions: Vec<ConditionOutcome>,
}

impl ClassificationRow {
    pub fn overall(&self) -> Verdict {
        self.conditions.iter().fold(Verdict::Pass, |v, c| v.and(c.verdict))
    }

    pub fn first_failure(&self) -> Option<&ConditionOutcome> {
        self.conditions.iter().find(|c| c.verdict == Verdict::Fail)
    }

    pub fn outcome(&self, n: usize, p: usize, q: usize) -> Option<Verdict> {
        self.conditions
            .iter()
            .find(|c| (c.n, c.p, c.q) == (n, p, q))
            .map(|c| c.verdict)
    }

    pub const HEADER: &'static str =
        "order\tunit\ttable\tis_group\tis_cancellative\tbc_overall\tfirst_failure\tpassed\tfailed\tinconclusive";

    /// Tab-separated row in [`Self::HEADER`] column order.
    pub fn to_tsv(&self) -> String {
        let count = |v| self.conditions.iter().filter(|c| c.verdict == v).count();
        let table = self
            .monoid
            .table()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",");
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.monoid.size(),
            self.monoid.unit(),
            table,
            self.is_group,
            self.is_cancellative,
            self.overall(),
            self.first_failure()
                .map(|c| bc_name(c.n, c.p, c.q))
                .unwrap_or_else(|| "-".into()),
            count(Verdict::Pass),
            count(Verdict::Fail),
            count(Verdict::Inconclusive),
        )
    }
}

/// Classifies every commutative monoid of order `1..=max_order` (up to
/// isomorphism) by group-ness, cancellativity and the verdict of every
/// `BC_{p,q}[n]`, `2 <= n <= max_dim`, each under its own budget.
pub fn monoid_search(max_order: usize, max_dim: usize, budget: Budget) -> Result<Vec<ClassificationRow>> {
    let mut rows = Vec::new();
    for order in 1..=max_order {
        for m in commutative_monoids(order) {
            let mut conditions = Vec::new();
            for n in 2..=max_dim {
                for p in 0..n {
                    for q in p + 1..=n {
                        let r = bc_check_km2(&m, n, p, q, budget)?;
                        conditions.push(ConditionOutcome {
                            n,
                            p,
                            q,
                            verdict: r.verdict,
                            instances_examined: r.instances_examined,
                        });
                    }
                }
            }
            rows.push(ClassificationRow {
                is_group: is_group(&m).is_ok(),
                is_cancellative: is_cancellative(&m).is_ok(),
                monoid: m,
                conditions,
            });
        }
    }
    Ok(rows)
}
