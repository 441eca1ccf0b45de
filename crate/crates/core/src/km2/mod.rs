//! `K(M,2)` for commutative monoids: cochains, lazy level access, the direct
//! rhombus checker, the one-object 2-categories `Z(M)` and `A(M)`, and the
//! small-monoid classification harness.

mod bc;
mod build;
mod search;

pub use bc::{
    assemble_instance, bc_check_km2, binary_obstruction, binding_equations, count_witnesses, equations, find_witness, instance_is_valid,
    verify_instance, violated_equations, BCInstance, BCWitness, Equation, Term,
};
pub use build::{build_a, build_z, Aut2Cell};
pub use search::{monoid_search, ClassificationRow, ConditionOutcome};

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indexing::{codegeneracy, coface, contains_both, quadruples, Triples};
use crate::monoid::{Carrier, Monoid};
use crate::report::Budget;
use crate::simplicial::{assemble, TruncatedSimplicialSet};

/// An `n`-simplex of `K(M,2)`: entries `a_{ijk}` over triples in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct KM2Cochain<E> {
    pub n: usize,
    pub entries: Vec<E>,
}

impl<E: Copy> KM2Cochain<E> {
    pub fn new(n: usize, entries: Vec<E>) -> Result<Self> {
        let want = Triples::new(n).len();
        if entries.len() != want {
            return Err(Error::InvalidInput(format!(
                "dimension {n} needs {want} entries, got {}",
                entries.len()
            )));
        }
        Ok(KM2Cochain { n, entries })
    }

    pub fn get(&self, triples: &Triples, i: usize, j: usize, k: usize) -> E {
        self.entries[triples.index(i, j, k)]
    }

    /// `d_j`: relabel triples along the injection skipping `j`.
    pub fn face(&self, j: usize) -> Self {
        let t = Triples::new(self.n);
        let entries = Triples::new(self.n - 1)
            .list()
            .iter()
            .map(|&[a, b, c]| self.entries[t.index(coface(j, a), coface(j, b), coface(j, c))])
            .collect();
        KM2Cochain { n: self.n - 1, entries }
    }

    /// `s_j`: relabel along the surjection collapsing `j, j+1`; triples hitting
    /// a repeated index get `unit`.
    pub fn degeneracy(&self, j: usize, unit: E) -> Self {
        let t = Triples::new(self.n);
        let s = |a| codegeneracy(j, a);
        let entries = Triples::new(self.n + 1)
            .list()
            .iter()
            .map(|&[a, b, c]| {
                let (sa, sb, sc) = (s(a), s(b), s(c));
                if sa == sb || sb == sc {
                    unit
                } else {
                    self.entries[t.index(sa, sb, sc)]
                }
            })
            .collect();
        KM2Cochain { n: self.n + 1, entries }
    }
}

/// `a_{ikl}·a_{ijk} = a_{ijl}·a_{jkl}` for all `i < j < k < l`.
pub fn is_cocycle<C: Carrier>(m: &C, c: &KM2Cochain<C::Elem>) -> bool {
    let t = Triples::new(c.n);
    quadruples(c.n).all(|[i, j, k, l]| {
        let a = |x, y, z| c.entries[t.index(x, y, z)];
        m.op(a(i, k, l), a(i, j, k)) == m.op(a(i, j, l), a(j, k, l))
    })
}

/// Lexicographic enumeration of cochains over a finite monoid, with the
/// cocycle identity checked as soon as the last entry of a square is set.
///
/// With `skip = Some((p, q))`, triples and squares containing both `p` and
/// `q` are left out; skipped slots hold the unit. Visits full-length entry
/// vectors.
pub(crate) struct CocycleEnumerator<'a> {
    m: &'a Monoid,
    active: Vec<usize>,
    /// For each active slot, squares completed there, as
    /// `[ikl, ijk, ijl, jkl]` triple indices.
    checks: Vec<Vec<[usize; 4]>>,
    len: usize,
}

impl<'a> CocycleEnumerator<'a> {
    pub(crate) fn new(m: &'a Monoid, n: usize, skip: Option<(usize, usize)>) -> Self {
        let t = Triples::new(n);
        let skipped = |s: &[usize]| skip.is_some_and(|(p, q)| contains_both(s, p, q));
        let active: Vec<usize> = (0..t.len()).filter(|&x| !skipped(&t.list()[x])).collect();
        let mut checks = vec![Vec::new(); active.len()];
        for [i, j, k, l] in quadruples(n) {
            if skipped(&[i, j, k, l]) {
                continue;
            }
            // (j, k, l) is the last of the four triples in lexicographic order
            let last = t.index(j, k, l);
            let slot = active.binary_search(&last).expect("active triple");
            checks[slot].push([t.index(i, k, l), t.index(i, j, k), t.index(i, j, l), last]);
        }
        CocycleEnumerator { m, active, checks, len: t.len() }
    }

    pub(crate) fn for_each<F>(&self, mut visit: F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let mut entries = vec![self.m.unit(); self.len];
        self.fill(0, &mut entries, &mut visit)
    }

    fn fill<F>(&self, slot: usize, entries: &mut [usize], visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if slot == self.active.len() {
            return visit(entries);
        }
        let at = self.active[slot];
        for v in 0..self.m.size() {
            entries[at] = v;
            let ok = self.checks[slot].iter().all(|&[ikl, ijk, ijl, jkl]| {
                self.m.op(entries[ikl], entries[ijk]) == self.m.op(entries[ijl], entries[jkl])
            });
            if ok {
                self.fill(slot + 1, entries, visit)?;
            }
        }
        ControlFlow::Continue(())
    }
}

/// `K(M,2)` with levels generated on demand.
#[derive(Debug, Clone, Copy)]
pub struct Km2<'a> {
    monoid: &'a Monoid,
}

impl<'a> Km2<'a> {
    pub fn new(monoid: &'a Monoid) -> Self {
        Km2 { monoid }
    }

    /// Calls `visit` on each `n`-simplex in canonical order.
    pub fn for_each_simplex<F>(&self, n: usize, mut visit: F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if n < 2 {
            return visit(&[]);
        }
        CocycleEnumerator::new(self.monoid, n, None).for_each(&mut visit)
    }

    pub fn level(&self, n: usize, budget: Budget) -> Result<Vec<KM2Cochain<usize>>> {
        let mut out = Vec::new();
        let mut over = false;
        let _ = self.for_each_simplex(n, |e| {
            if out.len() as u64 >= budget.0 {
                over = true;
                return ControlFlow::Break(());
            }
            out.push(KM2Cochain { n, entries: e.to_vec() });
            ControlFlow::Continue(())
        });
        if over {
            return Err(Error::BudgetExhausted {
                budget: budget.0,
                context: format!("enumerating {n}-simplices of K(M,2)"),
            });
        }
        Ok(out)
    }

    pub fn count(&self, n: usize) -> u64 {
        let mut c = 0;
        let _ = self.for_each_simplex(n, |_| {
            c += 1;
            ControlFlow::Continue(())
        });
        c
    }
}

/// Materializes `K(M,2)` up to `height`.
pub fn km2_truncation(m: &Monoid, height: usize, budget: Budget) -> Result<TruncatedSimplicialSet> {
    let k = Km2::new(m);
    let levels = (0..=height)
        .map(|n| k.level(n, budget))
        .collect::<Result<Vec<_>>>()?;
    let unit = m.unit();
    assemble(levels, |_, c: &KM2Cochain<usize>, i| c.face(i), |_, c, j| c.degeneracy(j, unit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::validate;

    #[test]
    fn trivial_monoid_has_singleton_levels() {
        let s = km2_truncation(&Monoid::trivial(), 5, Budget::default()).unwrap();
        assert_eq!(s.counts(), &[1; 6]);
    }

    #[test]
    fn z2_level_three_has_eight_simplices() {
        // brute force: 4 free entries, keep those satisfying the single square
        let m = Monoid::cyclic(2);
        let t = Triples::new(3);
        let mut brute = 0;
        for bits in 0..16usize {
            let entries: Vec<usize> = (0..4).map(|b| (bits >> b) & 1).collect();
            if is_cocycle(&m, &KM2Cochain::new(3, entries).unwrap()) {
                brute += 1;
            }
        }
        assert_eq!(t.len(), 4);
        assert_eq!(brute, 8);
        assert_eq!(Km2::new(&m).count(3), 8);
    }

    #[test]
    fn binary_level_two_has_two_simplices() {
        let s = km2_truncation(&Monoid::binary(), 2, Budget::default()).unwrap();
        assert_eq!(s.count(2), 2);
    }

    #[test]
    fn truncations_validate() {
        for m in [Monoid::cyclic(2), Monoid::binary(), Monoid::cyclic(3)] {
            let s = km2_truncation(&m, 4, Budget::default()).unwrap();
            assert!(validate(&s).is_pass());
        }
    }

    #[test]
    fn enumeration_matches_filtered_brute_force() {
        let m = Monoid::binary();
        for n in 2..=4 {
            let len = Triples::new(n).len();
            let mut brute = Vec::new();
            for bits in 0..(1usize << len) {
                let e: Vec<usize> = (0..len).map(|b| (bits >> (len - 1 - b)) & 1).collect();
                let c = KM2Cochain::new(n, e).unwrap();
                if is_cocycle(&m, &c) {
                    brute.push(c);
                }
            }
            assert_eq!(Km2::new(&m).level(n, Budget::default()).unwrap(), brute);
        }
    }

    #[test]
    fn budget_guard() {
        let err = km2_truncation(&Monoid::cyclic(3), 4, Budget(10)).unwrap_err();
        assert!(matches!(err, Error::BudgetExhausted { .. }));
    }
}
