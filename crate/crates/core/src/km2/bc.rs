use std::fmt;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use super::{CocycleEnumerator, KM2Cochain};
use crate::error::{Error, Result};
use crate::indexing::{contains_both, quadruples, Triples};
use crate::monoid::{validate_monoid, Carrier, Monoid};
use crate::report::{bc_name, Budget, CheckReport, Filler, Finding, Sample};

/// Rhombus data for `K(M,2)`: entries `a_{ijk}` for every triple not
/// containing both `p` and `q` (those slots are `None`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BCInstance<E> {
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub entries: Vec<Option<E>>,
}

/// The unknowns `x_{ipq}` (`i < p`), `y_{pjq}` (`p < j < q`), `z_{pqk}` (`q < k <= n`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BCWitness<E> {
    pub x: Vec<E>,
    pub y: Vec<E>,
    pub z: Vec<E>,
}

fn check_shape(n: usize, p: usize, q: usize) -> Result<()> {
    if n < 2 || !(p < q && q <= n) {
        return Err(Error::InvalidIndices(format!(
            "need n >= 2 and 0 <= p < q <= n, got n = {n}, p = {p}, q = {q}"
        )));
    }
    Ok(())
}

impl<E: Copy> BCInstance<E> {
    pub fn new(n: usize, p: usize, q: usize, entries: Vec<Option<E>>) -> Result<Self> {
        check_shape(n, p, q)?;
        let t = Triples::new(n);
        if entries.len() != t.len() {
            return Err(Error::InvalidInput(format!(
                "dimension {n} has {} triples, got {} entries",
                t.len(),
                entries.len()
            )));
        }
        for (tri, e) in t.list().iter().zip(&entries) {
            if contains_both(tri, p, q) != e.is_none() {
                return Err(Error::InvalidInput(format!(
                    "entry a_{{{}{}{}}} must be {} for (p, q) = ({p}, {q})",
                    tri[0],
                    tri[1],
                    tri[2],
                    if e.is_none() { "given" } else { "absent" }
                )));
            }
        }
        Ok(BCInstance { n, p, q, entries })
    }

    /// Builds an instance from `(i, j, k, value)` records.
    pub fn from_records(n: usize, p: usize, q: usize, records: &[(usize, usize, usize, E)]) -> Result<Self> {
        check_shape(n, p, q)?;
        let t = Triples::new(n);
        let mut entries = vec![None; t.len()];
        for &(i, j, k, v) in records {
            if !(i < j && j < k && k <= n) {
                return Err(Error::InvalidInput(format!("({i}, {j}, {k}) is not an increasing triple in 0..={n}")));
            }
            entries[t.index(i, j, k)] = Some(v);
        }
        Self::new(n, p, q, entries)
    }

    /// The part of a full cochain the rhombus sees.
    pub fn restrict(c: &KM2Cochain<E>, p: usize, q: usize) -> Result<Self> {
        check_shape(c.n, p, q)?;
        let t = Triples::new(c.n);
        let entries = t
            .list()
            .iter()
            .zip(&c.entries)
            .map(|(tri, &v)| (!contains_both(tri, p, q)).then_some(v))
            .collect();
        Ok(BCInstance { n: c.n, p, q, entries })
    }

    pub fn get(&self, t: &Triples, i: usize, j: usize, k: usize) -> E {
        self.entries[t.index(i, j, k)].expect("entry present in the rhombus")
    }

    pub fn records(&self) -> Vec<(usize, usize, usize, E)> {
        Triples::new(self.n)
            .list()
            .iter()
            .zip(&self.entries)
            .filter_map(|(&[i, j, k], e)| e.map(|v| (i, j, k, v)))
            .collect()
    }

    pub fn map<F: Copy>(&self, f: impl Fn(E) -> F) -> BCInstance<F> {
        BCInstance {
            n: self.n,
            p: self.p,
            q: self.q,
            entries: self.entries.iter().map(|e| e.map(&f)).collect(),
        }
    }

    pub fn unknown_count(&self) -> usize {
        self.n - 1
    }
}

impl<E: Copy> BCWitness<E> {
    pub fn map<F>(&self, f: impl Fn(E) -> F) -> BCWitness<F> {
        let m = |v: &Vec<E>| v.iter().map(|&e| f(e)).collect();
        BCWitness { x: m(&self.x), y: m(&self.y), z: m(&self.z) }
    }

    /// Splits unknowns given in search order `(x.., y.., z..)`.
    pub fn from_unknowns(n: usize, p: usize, q: usize, values: &[E]) -> Self {
        assert_eq!(values.len(), n - 1);
        let (x, rest) = values.split_at(p);
        let (y, z) = rest.split_at(q - p - 1);
        BCWitness { x: x.to_vec(), y: y.to_vec(), z: z.to_vec() }
    }

    pub fn unknowns(&self) -> Vec<E> {
        self.x.iter().chain(&self.y).chain(&self.z).copied().collect()
    }

    pub fn x(&self, i: usize) -> E {
        self.x[i]
    }

    pub fn y(&self, p: usize, j: usize) -> E {
        self.y[j - p - 1]
    }

    pub fn z(&self, q: usize, k: usize) -> E {
        self.z[k - q - 1]
    }

    /// The entries of a full cochain on triples containing both `p` and `q`.
    pub fn extract(c: &KM2Cochain<E>, p: usize, q: usize) -> Self {
        let t = Triples::new(c.n);
        BCWitness {
            x: (0..p).map(|i| c.get(&t, i, p, q)).collect(),
            y: (p + 1..q).map(|j| c.get(&t, p, j, q)).collect(),
            z: (q + 1..=c.n).map(|k| c.get(&t, p, q, k)).collect(),
        }
    }

    fn fits(&self, n: usize, p: usize, q: usize) -> bool {
        self.x.len() == p && self.y.len() == q - p - 1 && self.z.len() == n - q
    }
}

/// Instance and witness glued into a full cochain.
pub fn assemble_instance<E: Copy>(inst: &BCInstance<E>, w: &BCWitness<E>) -> KM2Cochain<E> {
    let t = Triples::new(inst.n);
    let (p, q) = (inst.p, inst.q);
    let entries = t
        .list()
        .iter()
        .zip(&inst.entries)
        .map(|(&[i, j, k], e)| match e {
            Some(v) => *v,
            None if j == p && k == q => w.x(i),
            None if i == p && k == q => w.y(p, j),
            None => w.z(q, k),
        })
        .collect();
    KM2Cochain { n: inst.n, entries }
}

/// A factor in a filler equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Term {
    Entry(usize, usize, usize),
    X(usize),
    Y(usize),
    Z(usize),
}

/// `lhs[0]·lhs[1] = rhs[0]·rhs[1]`, one member of family 1..=6.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Equation {
    pub family: u8,
    pub p: usize,
    pub q: usize,
    pub lhs: [Term; 2],
    pub rhs: [Term; 2],
}

impl Equation {
    pub fn unknowns(&self) -> impl Iterator<Item = Term> + '_ {
        self.lhs
            .iter()
            .chain(&self.rhs)
            .copied()
            .filter(|t| !matches!(t, Term::Entry(..)))
    }

    fn term_name(&self, t: Term) -> String {
        let idx = |a: usize, b: usize, c: usize| {
            if a.max(b).max(c) > 9 {
                format!("{{{a},{b},{c}}}")
            } else {
                format!("{{{a}{b}{c}}}")
            }
        };
        let (p, q) = (self.p, self.q);
        match t {
            Term::Entry(i, j, k) => format!("a_{}", idx(i, j, k)),
            Term::X(i) => format!("x_{}", idx(i, p, q)),
            Term::Y(j) => format!("y_{}", idx(p, j, q)),
            Term::Z(k) => format!("z_{}", idx(p, q, k)),
        }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}) {}·{} = {}·{}",
            self.family,
            self.term_name(self.lhs[0]),
            self.term_name(self.lhs[1]),
            self.term_name(self.rhs[0]),
            self.term_name(self.rhs[1])
        )
    }
}

/// All filler equations for `(n, p, q)`, by family then lexicographically.
pub fn equations(n: usize, p: usize, q: usize) -> Vec<Equation> {
    use Term::*;
    let mut out = Vec::new();
    let mut push = |family, lhs, rhs| out.push(Equation { family, p, q, lhs, rhs });
    // (1) x_{ipq} a_{ijp} = a_{ijq} x_{jpq}
    for i in 0..p {
        for j in i + 1..p {
            push(1, [X(i), Entry(i, j, p)], [Entry(i, j, q), X(j)]);
        }
    }
    // (2) y_{pkq} a_{pjk} = y_{pjq} a_{jkq}
    for j in p + 1..q {
        for k in j + 1..q {
            push(2, [Y(k), Entry(p, j, k)], [Y(j), Entry(j, k, q)]);
        }
    }
    // (3) a_{pkl} z_{pqk} = z_{pql} a_{qkl}
    for k in q + 1..=n {
        for l in k + 1..=n {
            push(3, [Entry(p, k, l), Z(k)], [Z(l), Entry(q, k, l)]);
        }
    }
    // (4) x_{ipq} y_{pjq} = a_{ijq} a_{ipj}
    for i in 0..p {
        for j in p + 1..q {
            push(4, [X(i), Y(j)], [Entry(i, j, q), Entry(i, p, j)]);
        }
    }
    // (5) a_{iqk} x_{ipq} = a_{ipk} z_{pqk}
    for i in 0..p {
        for k in q + 1..=n {
            push(5, [Entry(i, q, k), X(i)], [Entry(i, p, k), Z(k)]);
        }
    }
    // (6) z_{pqk} y_{pjq} = a_{pjk} a_{jqk}
    for j in p + 1..q {
        for k in q + 1..=n {
            push(6, [Z(k), Y(j)], [Entry(p, j, k), Entry(j, q, k)]);
        }
    }
    out
}

fn term_value<C: Carrier>(
    t: Term,
    inst: &BCInstance<C::Elem>,
    tri: &Triples,
    w: &BCWitness<C::Elem>,
) -> C::Elem {
    match t {
        Term::Entry(i, j, k) => inst.get(tri, i, j, k),
        Term::X(i) => w.x(i),
        Term::Y(j) => w.y(inst.p, j),
        Term::Z(k) => w.z(inst.q, k),
    }
}

fn equation_holds<C: Carrier>(
    c: &C,
    e: &Equation,
    inst: &BCInstance<C::Elem>,
    tri: &Triples,
    w: &BCWitness<C::Elem>,
) -> bool {
    let v = |t| term_value::<C>(t, inst, tri, w);
    c.op(v(e.lhs[0]), v(e.lhs[1])) == c.op(v(e.rhs[0]), v(e.rhs[1]))
}

/// Equations the witness violates; empty when the witness fills the instance.
pub fn violated_equations<C: Carrier>(
    c: &C,
    inst: &BCInstance<C::Elem>,
    w: &BCWitness<C::Elem>,
) -> Vec<Equation> {
    if !w.fits(inst.n, inst.p, inst.q) {
        return equations(inst.n, inst.p, inst.q);
    }
    let tri = Triples::new(inst.n);
    equations(inst.n, inst.p, inst.q)
        .into_iter()
        .filter(|e| !equation_holds(c, e, inst, &tri, w))
        .collect()
}

/// Whether `w` satisfies every filler equation of `inst`.
pub fn verify_instance<C: Carrier>(c: &C, inst: &BCInstance<C::Elem>, w: &BCWitness<C::Elem>) -> bool {
    w.fits(inst.n, inst.p, inst.q) && violated_equations(c, inst, w).is_empty()
}

/// The cocycle identity on every square not containing both `p` and `q`.
pub fn instance_is_valid<C: Carrier>(c: &C, inst: &BCInstance<C::Elem>) -> bool {
    let t = Triples::new(inst.n);
    quadruples(inst.n)
        .filter(|s| !contains_both(s, inst.p, inst.q))
        .all(|[i, j, k, l]| {
            let a = |x, y, z| inst.get(&t, x, y, z);
            c.op(a(i, k, l), a(i, j, k)) == c.op(a(i, j, l), a(j, k, l))
        })
}

#[derive(Debug, Clone, Copy)]
enum Slot {
    Known(usize),
    Unknown(usize),
}

/// Filler equations compiled against triple indices and unknown positions
/// `(x.., y.., z..)`, each attached to its last unknown.
#[derive(Debug, Clone)]
struct WitnessSearch {
    n: usize,
    p: usize,
    q: usize,
    due: Vec<Vec<[Slot; 4]>>,
}

impl WitnessSearch {
    fn new(n: usize, p: usize, q: usize) -> Self {
        let t = Triples::new(n);
        let unknown = |term: Term| match term {
            Term::X(i) => i,
            Term::Y(j) => p + (j - p - 1),
            Term::Z(k) => p + (q - p - 1) + (k - q - 1),
            Term::Entry(..) => unreachable!(),
        };
        let slot = |term: Term| match term {
            Term::Entry(i, j, k) => Slot::Known(t.index(i, j, k)),
            other => Slot::Unknown(unknown(other)),
        };
        let mut due = vec![Vec::new(); n - 1];
        for e in equations(n, p, q) {
            let last = e.unknowns().map(unknown).max().expect("every equation has an unknown");
            due[last].push([slot(e.lhs[0]), slot(e.lhs[1]), slot(e.rhs[0]), slot(e.rhs[1])]);
        }
        WitnessSearch { n, p, q, due }
    }

    #[inline]
    fn holds(m: &Monoid, eq: &[Slot; 4], entries: &[usize], vals: &[usize]) -> bool {
        let v = |s: Slot| match s {
            Slot::Known(i) => entries[i],
            Slot::Unknown(u) => vals[u],
        };
        m.op(v(eq[0]), v(eq[1])) == m.op(v(eq[2]), v(eq[3]))
    }

    /// Lexicographically first witness over a finite monoid; `entries` is
    /// full-length with arbitrary values in the skipped slots.
    fn first(&self, m: &Monoid, entries: &[usize], vals: &mut [usize]) -> bool {
        self.assign(m, 0, entries, vals)
    }

    fn assign(&self, m: &Monoid, u: usize, entries: &[usize], vals: &mut [usize]) -> bool {
        if u == vals.len() {
            return true;
        }
        for v in 0..m.size() {
            vals[u] = v;
            if self.due[u].iter().all(|eq| Self::holds(m, eq, entries, vals))
                && self.assign(m, u + 1, entries, vals)
            {
                return true;
            }
        }
        false
    }

    fn witness(&self, vals: &[usize]) -> BCWitness<usize> {
        BCWitness::from_unknowns(self.n, self.p, self.q, vals)
    }
}

fn dense_entries(m: &Monoid, inst: &BCInstance<usize>) -> Vec<usize> {
    inst.entries.iter().map(|e| e.unwrap_or(m.unit())).collect()
}

/// Lexicographically first witness in `(x.., y.., z..)` order, if any.
pub fn find_witness(m: &Monoid, inst: &BCInstance<usize>) -> Option<BCWitness<usize>> {
    let search = WitnessSearch::new(inst.n, inst.p, inst.q);
    let entries = dense_entries(m, inst);
    let mut vals = vec![0; inst.n - 1];
    search.first(m, &entries, &mut vals).then(|| search.witness(&vals))
}

fn for_each_candidate(m: &Monoid, count: usize, mut f: impl FnMut(&[usize])) {
    let mut vals = vec![0usize; count];
    loop {
        f(&vals);
        let mut i = count;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            vals[i] += 1;
            if vals[i] < m.size() {
                break;
            }
            vals[i] = 0;
        }
    }
}

/// `(candidates, accepted)` over all `|M|^(n-1)` assignments of the unknowns.
pub fn count_witnesses(m: &Monoid, inst: &BCInstance<usize>) -> (u64, u64) {
    let (mut total, mut ok) = (0, 0);
    for_each_candidate(m, inst.n - 1, |vals| {
        total += 1;
        if verify_instance(m, inst, &BCWitness::from_unknowns(inst.n, inst.p, inst.q, vals)) {
            ok += 1;
        }
    });
    (total, ok)
}

/// Equations violated by at least one candidate witness, i.e. those that
/// actually constrain the unknowns for this instance.
pub fn binding_equations(m: &Monoid, inst: &BCInstance<usize>) -> Vec<Equation> {
    let eqs = equations(inst.n, inst.p, inst.q);
    let tri = Triples::new(inst.n);
    let mut binding = vec![false; eqs.len()];
    for_each_candidate(m, inst.n - 1, |vals| {
        let w = BCWitness::from_unknowns(inst.n, inst.p, inst.q, vals);
        for (b, e) in binding.iter_mut().zip(&eqs) {
            if !*b && !equation_holds(m, e, inst, &tri, &w) {
                *b = true;
            }
        }
    });
    eqs.into_iter()
        .zip(binding)
        .filter_map(|(e, b)| b.then_some(e))
        .collect()
}

/// The `BC_{0,3}[5]` instance over `{0,1}` under multiplication with
/// `a_{015} = a_{024} = a_{135} = a_{234} = 1` and every other entry `0`.
/// It satisfies the cocycle identity and has no witness.
pub fn binary_obstruction() -> BCInstance<usize> {
    let ones = [(0, 1, 5), (0, 2, 4), (1, 3, 5), (2, 3, 4)];
    let records: Vec<_> = Triples::new(5)
        .list()
        .iter()
        .filter(|tri| !contains_both(*tri, 0, 3))
        .map(|&[i, j, k]| (i, j, k, ones.contains(&(i, j, k)) as usize))
        .collect();
    BCInstance::from_records(5, 0, 3, &records).expect("well-formed")
}

/// Candidate witnesses above which binding equations are not listed.
const BINDING_LIMIT: u64 = 1 << 20;

/// Decides `BC_{p,q}[n]` for `K(M,2)` on cochain data, without materializing
/// the simplicial set: every valid instance, in lexicographic order, must
/// admit a witness.
pub fn bc_check_km2(m: &Monoid, n: usize, p: usize, q: usize, budget: Budget) -> Result<CheckReport> {
    check_shape(n, p, q)?;
    let v = validate_monoid(m);
    if !v.is_pass() {
        return Err(Error::InvalidInput(format!("not a commutative monoid: {:?}", v.counterexample)));
    }
    let name = bc_name(n, p, q);
    let search = WitnessSearch::new(n, p, q);
    let t = Triples::new(n);
    let to_instance = |e: &[usize]| BCInstance {
        n,
        p,
        q,
        entries: t
            .list()
            .iter()
            .zip(e)
            .map(|(tri, &v)| (!contains_both(tri, p, q)).then_some(v))
            .collect(),
    };
    let mut vals = vec![0; n - 1];
    let mut examined = 0u64;
    let mut sample = None;
    let mut out_of_budget = false;
    let mut unsolvable = None;
    let _ = CocycleEnumerator::new(m, n, Some((p, q))).for_each(|entries| {
        if examined >= budget.0 {
            out_of_budget = true;
            return ControlFlow::Break(());
        }
        examined += 1;
        if search.first(m, entries, &mut vals) {
            if sample.is_none() {
                sample = Some(Sample {
                    problem: Finding::Km2 { instance: to_instance(entries), binding_equations: Vec::new() },
                    filler: Filler::Km2 { witness: search.witness(&vals) },
                });
            }
            ControlFlow::Continue(())
        } else {
            unsolvable = Some(to_instance(entries));
            ControlFlow::Break(())
        }
    });
    if out_of_budget {
        return Ok(CheckReport::inconclusive(name, examined));
    }
    Ok(match unsolvable {
        None => CheckReport::pass(name, examined).with_sample(sample),
        Some(instance) => {
            let binding = if (m.size() as u64).checked_pow((n - 1) as u32).is_some_and(|c| c <= BINDING_LIMIT) {
                binding_equations(m, &instance).iter().map(ToString::to_string).collect()
            } else {
                Vec::new()
            };
            CheckReport::fail(name, examined, Finding::Km2 { instance, binding_equations: binding })
                .with_sample(sample)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::km2::{is_cocycle, Km2};
    use crate::report::Verdict;

    #[test]
    fn obstruction_is_valid_and_unsolvable() {
        let m = Monoid::binary();
        let inst = binary_obstruction();
        assert!(instance_is_valid(&m, &inst));
        assert_eq!(count_witnesses(&m, &inst), (16, 0));
        assert_eq!(find_witness(&m, &inst), None);
    }

    #[test]
    fn obstruction_binding_equations() {
        let got: Vec<String> = binding_equations(&Monoid::binary(), &binary_obstruction())
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(
            got,
            vec![
                "(6) z_{034}·y_{013} = a_{014}·a_{134}",
                "(6) z_{035}·y_{013} = a_{015}·a_{135}",
                "(6) z_{034}·y_{023} = a_{024}·a_{234}",
                "(6) z_{035}·y_{023} = a_{025}·a_{235}",
            ]
        );
    }

    #[test]
    fn all_unit_instance_accepts_all_unit_witness() {
        let m = Monoid::binary();
        let n = 4;
        let t = Triples::new(n);
        for (p, q) in [(0, 1), (1, 3), (0, 4)] {
            let entries = t.list().iter().map(|tri| (!contains_both(tri, p, q)).then_some(1)).collect();
            let inst = BCInstance::new(n, p, q, entries).unwrap();
            let w = BCWitness::from_unknowns(n, p, q, &vec![1; n - 1]);
            assert!(verify_instance(&m, &inst, &w));
        }
    }

    #[test]
    fn split_of_a_full_cocycle_verifies() {
        for m in [Monoid::binary(), Monoid::cyclic(3)] {
            let k = Km2::new(&m);
            for n in 2..=4 {
                for c in k.level(n, Budget::default()).unwrap() {
                    assert!(is_cocycle(&m, &c));
                    for q in 1..=n {
                        for p in 0..q {
                            let inst = BCInstance::restrict(&c, p, q).unwrap();
                            let w = BCWitness::extract(&c, p, q);
                            assert!(verify_instance(&m, &inst, &w));
                            assert_eq!(assemble_instance(&inst, &w), c);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn equations_are_the_squares_through_p_and_q() {
        // each equation family covers one position of {p, q} in a square
        for n in 2..=7 {
            for q in 1..=n {
                for p in 0..q {
                    let through = quadruples(n).filter(|s| contains_both(s, p, q)).count();
                    assert_eq!(equations(n, p, q).len(), through);
                }
            }
        }
    }

    #[test]
    fn trivial_monoid_passes() {
        let m = Monoid::trivial();
        for n in 2..=5 {
            for q in 1..=n {
                for p in 0..q {
                    assert!(bc_check_km2(&m, n, p, q, Budget::default()).unwrap().is_pass());
                }
            }
        }
    }

    #[test]
    fn binary_fails_at_paper_condition() {
        let r = bc_check_km2(&Monoid::binary(), 5, 0, 3, Budget::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        let Some(Finding::Km2 { instance, .. }) = &r.counterexample else { panic!() };
        assert_eq!(find_witness(&Monoid::binary(), instance), None);
        assert!(instance_is_valid(&Monoid::binary(), instance));
    }

    #[test]
    fn malformed_instances_rejected() {
        assert!(BCInstance::<usize>::new(3, 0, 1, vec![None; 4]).is_err());
        assert!(BCInstance::<usize>::new(3, 2, 1, vec![None; 4]).is_err());
        assert!(BCInstance::<usize>::from_records(3, 0, 1, &[(2, 1, 3, 0)]).is_err());
    }
}
