//! Finite monoids given by multiplication tables, and the algebraic carriers
//! used by the cochain machinery.

use std::fmt::Debug;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{CheckReport, Finding};

/// A finite monoid on `0..size` with row-major table `table[a * size + b] = a·b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monoid {
    size: usize,
    unit: usize,
    table: Vec<usize>,
}

impl Monoid {
    pub fn new(size: usize, unit: usize, table: Vec<usize>) -> Result<Self> {
        if size == 0 {
            return Err(Error::Structural("a monoid has at least one element".into()));
        }
        if unit >= size {
            return Err(Error::Structural(format!("unit {unit} out of range")));
        }
        if table.len() != size * size {
            return Err(Error::Structural(format!(
                "table has {} entries, expected {}",
                table.len(),
                size * size
            )));
        }
        if let Some(pos) = table.iter().position(|&v| v >= size) {
            return Err(Error::Structural(format!(
                "table entry {} · {} = {} is out of range",
                pos / size,
                pos % size,
                table[pos]
            )));
        }
        Ok(Monoid { size, unit, table })
    }

    pub fn trivial() -> Self {
        Monoid { size: 1, unit: 0, table: vec![0] }
    }

    /// `Z/m` under addition; element `a` is the residue `a`.
    pub fn cyclic(m: usize) -> Self {
        assert!(m > 0);
        let table = (0..m * m).map(|i| (i / m + i % m) % m).collect();
        Monoid { size: m, unit: 0, table }
    }

    /// `{0, 1}` under multiplication; element `a` is the number `a`, unit is `1`.
    pub fn binary() -> Self {
        Monoid { size: 2, unit: 1, table: vec![0, 0, 0, 1] }
    }

    /// Direct product; `(a, b)` is encoded as `a * other.size + b`.
    pub fn product(&self, other: &Monoid) -> Self {
        let (m, n) = (self.size, other.size);
        let size = m * n;
        let mut table = vec![0; size * size];
        for x in 0..size {
            for y in 0..size {
                let a = self.op(x / n, y / n);
                let b = other.op(x % n, y % n);
                table[x * size + y] = a * n + b;
            }
        }
        Monoid { size, unit: self.unit * n + other.unit, table }
    }

    /// The symmetric group on `k` letters under composition, elements in
    /// lexicographic order of permutations.
    pub fn symmetric_group(k: usize) -> Self {
        let perms = permutations(k);
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).unwrap();
        let size = perms.len();
        let mut table = vec![0; size * size];
        for (a, pa) in perms.iter().enumerate() {
            for (b, pb) in perms.iter().enumerate() {
                // (a·b)(i) = a(b(i))
                let c: Vec<usize> = (0..k).map(|i| pa[pb[i]]).collect();
                table[a * size + b] = index(&c);
            }
        }
        Monoid { size, unit: 0, table }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    #[inline]
    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size + b]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.size).all(|a| (0..self.size).all(|b| self.op(a, b) == self.op(b, a)))
    }

    pub fn inverse_of(&self, a: usize) -> Option<usize> {
        (0..self.size).find(|&b| self.op(a, b) == self.unit && self.op(b, a) == self.unit)
    }

    /// Submonoid of elements commuting with everything, renumbered in order.
    pub fn center(&self) -> Monoid {
        let elems: Vec<usize> = (0..self.size)
            .filter(|&a| (0..self.size).all(|m| self.op(a, m) == self.op(m, a)))
            .collect();
        self.submonoid(&elems)
    }

    fn submonoid(&self, elems: &[usize]) -> Monoid {
        let pos = |x: usize| elems.iter().position(|&e| e == x).expect("closed subset");
        let size = elems.len();
        let mut table = Vec::with_capacity(size * size);
        for &a in elems {
            for &b in elems {
                table.push(pos(self.op(a, b)));
            }
        }
        Monoid { size, unit: pos(self.unit), table }
    }

    /// Bijections of the carrier preserving the unit and the product, as
    /// `perm[a] = f(a)`, identity first, the rest in lexicographic order.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        permutations(self.size)
            .into_iter()
            .filter(|f| {
                f[self.unit] == self.unit
                    && (0..self.size)
                        .all(|a| (0..self.size).all(|b| f[self.op(a, b)] == self.op(f[a], f[b])))
            })
            .collect()
    }

    /// Relabels elements along the bijection `perm` (old -> new).
    pub fn relabel(&self, perm: &[usize]) -> Monoid {
        let n = self.size;
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[perm[a] * n + perm[b]] = perm[self.op(a, b)];
            }
        }
        Monoid { size: n, unit: perm[self.unit], table }
    }

    /// Isomorphism invariant: the lexicographically least table over all
    /// relabelings sending the unit to `0`.
    pub fn canonical_form(&self) -> Monoid {
        let n = self.size;
        let mut best: Option<Monoid> = None;
        for rest in permutations(n - 1) {
            // new labels: unit -> 0, other elements -> 1.. in the order of `rest`
            let others: Vec<usize> = (0..n).filter(|&a| a != self.unit).collect();
            let mut perm = vec![0; n];
            for (slot, &old) in others.iter().enumerate() {
                perm[old] = rest[slot] + 1;
            }
            let cand = self.relabel(&perm);
            if best.as_ref().is_none_or(|b| cand.table < b.table) {
                best = Some(cand);
            }
        }
        best.unwrap()
    }

    pub fn to_file(&self) -> MonoidFile {
        MonoidFile { size: self.size, unit: self.unit, table: self.table.clone() }
    }

    pub fn from_file(file: &MonoidFile) -> Result<Self> {
        Self::new(file.size, file.unit, file.table.clone())
    }
}

/// On-disk form: carrier size, unit index, flattened row-major table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidFile {
    pub size: usize,
    pub unit: usize,
    pub table: Vec<usize>,
}

pub(crate) fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(k), &mut vec![false; k], &mut out);
    out
}

/// Monoid laws (associativity, two-sided unit) without commutativity.
pub fn check_monoid_laws(m: &Monoid) -> CheckReport {
    const NAME: &str = "monoid laws";
    let n = m.size;
    let law = |law: &str, detail: String| Finding::Law { law: law.into(), detail };
    let mut examined = 0;
    for a in 0..n {
        examined += 1;
        if m.op(m.unit, a) != a || m.op(a, m.unit) != a {
            return CheckReport::fail(NAME, examined, law("unit", format!("unit · {a} or {a} · unit differs from {a}")));
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                examined += 1;
                let lhs = m.op(m.op(a, b), c);
                let rhs = m.op(a, m.op(b, c));
                if lhs != rhs {
                    return CheckReport::fail(NAME, examined, law("associativity", format!("({a}·{b})·{c} = {lhs} but {a}·({b}·{c}) = {rhs}")));
                }
            }
        }
    }
    CheckReport::pass(NAME, examined)
}

/// Commutative monoid laws.
pub fn validate_monoid(m: &Monoid) -> CheckReport {
    let laws = check_monoid_laws(m);
    if !laws.is_pass() {
        return CheckReport { condition: "commutative monoid laws".into(), ..laws };
    }
    let n = m.size;
    for a in 0..n {
        for b in a + 1..n {
            if m.op(a, b) != m.op(b, a) {
                return CheckReport::fail(
                    "commutative monoid laws",
                    laws.instances_examined,
                    Finding::Law {
                        law: "commutativity".into(),
                        detail: format!("{a}·{b} = {} but {b}·{a} = {}", m.op(a, b), m.op(b, a)),
                    },
                );
            }
        }
    }
    CheckReport::pass("commutative monoid laws", laws.instances_examined + (n * n) as u64)
}

/// `Err(a)` names the first element without an inverse.
pub fn is_group(m: &Monoid) -> std::result::Result<(), usize> {
    match (0..m.size).find(|&a| m.inverse_of(a).is_none()) {
        Some(a) => Err(a),
        None => Ok(()),
    }
}

/// `Err((a, b, c))` with `a·b = a·c` and `b != c`, the first such in lexicographic order.
pub fn is_cancellative(m: &Monoid) -> std::result::Result<(), (usize, usize, usize)> {
    let n = m.size;
    for a in 0..n {
        for b in 0..n {
            for c in b + 1..n {
                if m.op(a, b) == m.op(a, c) {
                    return Err((a, b, c));
                }
            }
        }
    }
    Ok(())
}

/// All commutative monoids of the given order up to isomorphism, in canonical
/// form (unit `0`), sorted by table.
pub fn commutative_monoids(order: usize) -> Vec<Monoid> {
    assert!(order >= 1);
    // free entries: a·b for 1 <= a <= b < order
    let pairs: Vec<(usize, usize)> = (1..order)
        .flat_map(|a| (a..order).map(move |b| (a, b)))
        .collect();
    let mut found = std::collections::BTreeSet::new();
    let mut values = vec![0usize; pairs.len()];
    loop {
        let mut table = vec![0; order * order];
        for a in 0..order {
            table[a] = a;
            table[a * order] = a;
        }
        for (&(a, b), &v) in pairs.iter().zip(&values) {
            table[a * order + b] = v;
            table[b * order + a] = v;
        }
        let m = Monoid { size: order, unit: 0, table };
        if check_monoid_laws(&m).is_pass() {
            found.insert(m.canonical_form().table);
        }
        // odometer
        let mut i = 0;
        loop {
            if i == values.len() {
                return found
                    .into_iter()
                    .map(|table| Monoid { size: order, unit: 0, table })
                    .collect();
            }
            values[i] += 1;
            if values[i] < order {
                break;
            }
            values[i] = 0;
            i += 1;
        }
    }
}

/// A commutative monoid as consumed by the cochain machinery.
pub trait Carrier {
    type Elem: Copy + Eq + Ord + Hash + Debug;

    fn unit(&self) -> Self::Elem;
    fn op(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
}

/// A carrier in which every element has an inverse.
pub trait AbelianGroup: Carrier {
    fn neg(&self, a: Self::Elem) -> Self::Elem;

    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem {
        self.op(a, self.neg(b))
    }
}

impl Carrier for Monoid {
    type Elem = usize;

    fn unit(&self) -> usize {
        self.unit
    }

    fn op(&self, a: usize, b: usize) -> usize {
        Monoid::op(self, a, b)
    }
}

/// The integers under addition.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Integers;

impl Carrier for Integers {
    type Elem = i64;

    fn unit(&self) -> i64 {
        0
    }

    fn op(&self, a: i64, b: i64) -> i64 {
        a + b
    }
}

impl AbelianGroup for Integers {
    fn neg(&self, a: i64) -> i64 {
        -a
    }
}

/// The nonnegative integers under addition. Elements are `i64 >= 0`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NonNegIntegers;

impl NonNegIntegers {
    pub fn contains(&self, a: i64) -> bool {
        a >= 0
    }

    pub fn inverse_of(&self, a: i64) -> Option<i64> {
        (a == 0).then_some(0)
    }

    /// Least element without an additive inverse.
    pub fn first_non_invertible(&self) -> i64 {
        (0..).find(|&a| self.inverse_of(a).is_none()).unwrap()
    }
}

impl Carrier for NonNegIntegers {
    type Elem = i64;

    fn unit(&self) -> i64 {
        0
    }

    fn op(&self, a: i64, b: i64) -> i64 {
        a + b
    }
}

/// A finite commutative group presented by a table, with cached inverses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    monoid: Monoid,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    pub fn new(monoid: Monoid) -> Result<Self> {
        if !validate_monoid(&monoid).is_pass() {
            return Err(Error::InvalidInput("not a commutative monoid".into()));
        }
        let inverses = (0..monoid.size)
            .map(|a| {
                monoid
                    .inverse_of(a)
                    .ok_or_else(|| Error::InvalidInput(format!("element {a} has no inverse")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteGroup { monoid, inverses })
    }

    pub fn cyclic(m: usize) -> Self {
        Self::new(Monoid::cyclic(m)).unwrap()
    }

    pub fn monoid(&self) -> &Monoid {
        &self.monoid
    }
}

impl Carrier for FiniteGroup {
    type Elem = usize;

    fn unit(&self) -> usize {
        self.monoid.unit
    }

    fn op(&self, a: usize, b: usize) -> usize {
        self.monoid.op(a, b)
    }
}

impl AbelianGroup for FiniteGroup {
    fn neg(&self, a: usize) -> usize {
        self.inverses[a]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Verdict;

    #[test]
    fn standard_monoids_validate() {
        for m in [Monoid::binary(), Monoid::cyclic(4), Monoid::trivial(), Monoid::cyclic(2).product(&Monoid::cyclic(2))] {
            assert!(validate_monoid(&m).is_pass(), "{m:?}");
        }
        assert!(check_monoid_laws(&Monoid::symmetric_group(3)).is_pass());
        assert!(!validate_monoid(&Monoid::symmetric_group(3)).is_pass());
    }

    #[test]
    fn broken_associativity_is_caught() {
        // Z/3 with 1·2 and 2·1 changed to 1: still commutative and unital
        let mut t = Monoid::cyclic(3).table;
        t[3 + 2] = 1;
        t[2 * 3 + 1] = 1;
        let m = Monoid::new(3, 0, t).unwrap();
        let r = validate_monoid(&m);
        assert_eq!(r.verdict, Verdict::Fail);
        let Some(Finding::Law { law, .. }) = r.counterexample else { panic!() };
        assert_eq!(law, "associativity");
    }

    #[test]
    fn group_and_cancellative_witnesses() {
        let b = Monoid::binary();
        assert_eq!(is_group(&b), Err(0));
        assert_eq!(is_cancellative(&b), Err((0, 0, 1)));
        assert_eq!(is_group(&Monoid::cyclic(2)), Ok(()));
        assert_eq!(is_cancellative(&Monoid::cyclic(2)), Ok(()));
    }

    #[test]
    fn commutative_monoid_counts() {
        // 1, 2, 5, 19: commutative monoids of order 1..4 up to isomorphism
        let counts: Vec<usize> = (1..=4).map(|k| commutative_monoids(k).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 19]);
    }

    #[test]
    fn finite_cancellative_is_group() {
        for k in 1..=4 {
            for m in commutative_monoids(k) {
                assert_eq!(is_group(&m).is_ok(), is_cancellative(&m).is_ok(), "{m:?}");
            }
        }
    }

    #[test]
    fn automorphisms_of_small_groups() {
        assert_eq!(Monoid::cyclic(2).automorphisms().len(), 1);
        assert_eq!(Monoid::cyclic(3).automorphisms(), vec![vec![0, 1, 2], vec![0, 2, 1]]);
        assert_eq!(Monoid::cyclic(2).product(&Monoid::cyclic(2)).automorphisms().len(), 6);
    }

    #[test]
    fn center_of_s3_is_trivial() {
        assert_eq!(Monoid::symmetric_group(3).center(), Monoid::trivial());
        assert_eq!(Monoid::cyclic(4).center(), Monoid::cyclic(4));
    }

    #[test]
    fn canonical_form_identifies_relabelings() {
        let b = Monoid::binary();
        let swapped = b.relabel(&[1, 0]);
        assert_eq!(b.canonical_form(), swapped.canonical_form());
        assert_ne!(b.canonical_form(), Monoid::cyclic(2).canonical_form());
    }
}
