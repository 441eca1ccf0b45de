//! Finite strict 2-categories and their Duskin nerves.
//!
//! 1-cells follow the nerve orientation: `f_{ij}: C_j -> C_i`, and `fg`
//! denotes `f ∘ g` (apply `g` first). A 2-cell `α: f ⇒ g` runs between
//! parallel 1-cells. `β·α` is vertical composition and `αα'` horizontal
//! composition, with whiskerings `fα = id_f α` and `αf = α id_f`.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::category::{validate_category, FiniteCategory};
use crate::error::{Error, Result};
use crate::indexing::{codegeneracy, coface, contains_both, Pairs, Triples};
use crate::report::{bc_name, Budget, CheckReport, DuskinRhombus, Filler, Finding, Sample};
use crate::simplicial::{assemble, TruncatedSimplicialSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finite2Category {
    objects: usize,
    one_cells: Vec<(usize, usize)>,
    one_identities: Vec<usize>,
    one_comp: Vec<Option<usize>>,
    two_cells: Vec<(usize, usize)>,
    two_identities: Vec<usize>,
    vertical: Vec<Option<usize>>,
    horizontal: Vec<Option<usize>>,
}

/// On-disk form. Tables are `[left, right, result]` triples:
/// `one_composition` lists `f ∘ g`, `vertical` lists `β·α`, `horizontal` lists `αα'`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoCategoryFile {
    pub objects: usize,
    pub one_cells: Vec<[usize; 2]>,
    pub one_identities: Vec<usize>,
    pub one_composition: Vec<[usize; 3]>,
    pub two_cells: Vec<[usize; 2]>,
    pub two_identities: Vec<usize>,
    pub vertical: Vec<[usize; 3]>,
    pub horizontal: Vec<[usize; 3]>,
}

fn fill_table(entries: &[[usize; 3]], size: usize, what: &str) -> Result<Vec<Option<usize>>> {
    let mut table = vec![None; size * size];
    for &[a, b, c] in entries {
        if a >= size || b >= size || c >= size {
            return Err(Error::Structural(format!(
                "{what} entry [{a}, {b}, {c}] references a missing cell"
            )));
        }
        if table[a * size + b].replace(c).is_some() {
            return Err(Error::Structural(format!("{what} of ({a}, {b}) given twice")));
        }
    }
    Ok(table)
}

fn table_entries(table: &[Option<usize>], size: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in 0..size {
        for b in 0..size {
            if let Some(c) = table[a * size + b] {
                out.push([a, b, c]);
            }
        }
    }
    out
}

impl Finite2Category {
    pub fn from_file(file: &TwoCategoryFile) -> Result<Self> {
        let m1 = file.one_cells.len();
        let m2 = file.two_cells.len();
        if file.one_cells.iter().flatten().any(|&o| o >= file.objects) {
            return Err(Error::Structural("1-cell endpoint out of range".into()));
        }
        if file.two_cells.iter().flatten().any(|&f| f >= m1) {
            return Err(Error::Structural("2-cell endpoint is not a 1-cell".into()));
        }
        if file.one_identities.len() != file.objects || file.one_identities.iter().any(|&f| f >= m1) {
            return Err(Error::Structural("identity 1-cells malformed".into()));
        }
        if file.two_identities.len() != m1 || file.two_identities.iter().any(|&a| a >= m2) {
            return Err(Error::Structural("identity 2-cells malformed".into()));
        }
        Ok(Finite2Category {
            objects: file.objects,
            one_cells: file.one_cells.iter().map(|&[s, t]| (s, t)).collect(),
            one_identities: file.one_identities.clone(),
            one_comp: fill_table(&file.one_composition, m1, "1-cell composition")?,
            two_cells: file.two_cells.iter().map(|&[s, t]| (s, t)).collect(),
            two_identities: file.two_identities.clone(),
            vertical: fill_table(&file.vertical, m2, "vertical composition")?,
            horizontal: fill_table(&file.horizontal, m2, "horizontal composition")?,
        })
    }

    pub fn to_file(&self) -> TwoCategoryFile {
        let m1 = self.one_cells.len();
        let m2 = self.two_cells.len();
        TwoCategoryFile {
            objects: self.objects,
            one_cells: self.one_cells.iter().map(|&(s, t)| [s, t]).collect(),
            one_identities: self.one_identities.clone(),
            one_composition: table_entries(&self.one_comp, m1),
            two_cells: self.two_cells.iter().map(|&(s, t)| [s, t]).collect(),
            two_identities: self.two_identities.clone(),
            vertical: table_entries(&self.vertical, m2),
            horizontal: table_entries(&self.horizontal, m2),
        }
    }

    /// The category `c` with identity 2-cells only.
    pub fn locally_discrete(c: &FiniteCategory) -> Self {
        let cf = c.to_file();
        let m = c.morphism_count();
        let file = TwoCategoryFile {
            objects: cf.objects,
            one_cells: cf.morphisms.clone(),
            one_identities: cf.identities.clone(),
            one_composition: cf.composition.clone(),
            two_cells: (0..m).map(|f| [f, f]).collect(),
            two_identities: (0..m).collect(),
            vertical: (0..m).map(|f| [f, f, f]).collect(),
            horizontal: cf.composition,
        };
        Self::from_file(&file).expect("locally discrete 2-category is well formed")
    }

    pub fn object_count(&self) -> usize {
        self.objects
    }

    pub fn one_cell_count(&self) -> usize {
        self.one_cells.len()
    }

    pub fn two_cell_count(&self) -> usize {
        self.two_cells.len()
    }

    /// `(source, target)` objects of a 1-cell.
    pub fn one_cell(&self, f: usize) -> (usize, usize) {
        self.one_cells[f]
    }

    /// `(source, target)` 1-cells of a 2-cell.
    pub fn two_cell(&self, a: usize) -> (usize, usize) {
        self.two_cells[a]
    }

    pub fn id1(&self, object: usize) -> usize {
        self.one_identities[object]
    }

    pub fn id2(&self, f: usize) -> usize {
        self.two_identities[f]
    }

    /// `f ∘ g`.
    pub fn comp1(&self, f: usize, g: usize) -> Option<usize> {
        self.one_comp[f * self.one_cells.len() + g]
    }

    /// `β·α`.
    pub fn vcomp(&self, beta: usize, alpha: usize) -> Option<usize> {
        self.vertical[beta * self.two_cells.len() + alpha]
    }

    /// `αα'`.
    pub fn hcomp(&self, alpha: usize, alpha2: usize) -> Option<usize> {
        self.horizontal[alpha * self.two_cells.len() + alpha2]
    }

    /// `fα`.
    pub fn whisker_left(&self, f: usize, alpha: usize) -> Option<usize> {
        self.hcomp(self.id2(f), alpha)
    }

    /// `αf`.
    pub fn whisker_right(&self, alpha: usize, f: usize) -> Option<usize> {
        self.hcomp(alpha, self.id2(f))
    }

    /// 2-cells `f ⇒ g`.
    pub fn hom2(&self, f: usize, g: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.two_cells.len()).filter(move |&a| self.two_cells[a] == (f, g))
    }

    fn underlying_category(&self) -> Result<FiniteCategory> {
        let f = self.to_file();
        FiniteCategory::new(
            f.objects,
            self.one_cells.clone(),
            f.one_identities,
            &f.one_composition,
        )
    }
}

/// Checks all strict 2-category axioms, including both forms of interchange.
pub fn validate_2category(x: &Finite2Category) -> CheckReport {
    const NAME: &str = "2-category axioms";
    let law = |law: &str, detail: String| Finding::Law { law: law.into(), detail };
    let fail = |examined, l: &str, d: String| CheckReport::fail(NAME, examined, law(l, d));
    let c = match x.underlying_category() {
        Ok(c) => c,
        Err(e) => return fail(0, "structure", e.to_string()),
    };
    let base = validate_category(&c);
    if !base.is_pass() {
        return CheckReport { condition: NAME.into(), ..base };
    }
    let mut examined = base.instances_examined;
    let m2 = x.two_cell_count();
    let obj_src = |a: usize| x.one_cell(x.two_cell(a).0).0;
    let obj_tgt = |a: usize| x.one_cell(x.two_cell(a).0).1;

    for a in 0..m2 {
        let (f, g) = x.two_cell(a);
        if x.one_cell(f) != x.one_cell(g) {
            return fail(examined, "parallel endpoints", format!("2-cell {a}: {f} ⇒ {g} between non-parallel 1-cells"));
        }
    }
    for f in 0..x.one_cell_count() {
        if x.two_cell(x.id2(f)) != (f, f) {
            return fail(examined, "identity 2-cell", format!("identity of 1-cell {f} is not {f} ⇒ {f}"));
        }
    }

    // vertical composition: domain, endpoints, units, associativity
    for b in 0..m2 {
        for a in 0..m2 {
            examined += 1;
            let composable = x.two_cell(a).1 == x.two_cell(b).0;
            match (composable, x.vcomp(b, a)) {
                (true, None) => return fail(examined, "vertical domain", format!("{b}·{a} is composable but undefined")),
                (false, Some(_)) => return fail(examined, "vertical domain", format!("{b}·{a} defined on a non-composable pair")),
                (true, Some(r)) if x.two_cell(r) != (x.two_cell(a).0, x.two_cell(b).1) => {
                    return fail(examined, "vertical endpoints", format!("{b}·{a} = {r} has wrong endpoints"))
                }
                _ => {}
            }
        }
    }
    for a in 0..m2 {
        let (f, g) = x.two_cell(a);
        examined += 1;
        if x.vcomp(x.id2(g), a) != Some(a) || x.vcomp(a, x.id2(f)) != Some(a) {
            return fail(examined, "vertical identity", format!("identity laws fail for 2-cell {a}"));
        }
    }
    for a in 0..m2 {
        for b in (0..m2).filter(|&b| x.two_cell(b).0 == x.two_cell(a).1) {
            let ba = x.vcomp(b, a).unwrap();
            for cc in (0..m2).filter(|&cc| x.two_cell(cc).0 == x.two_cell(b).1) {
                examined += 1;
                if x.vcomp(cc, ba) != x.vcomp(x.vcomp(cc, b).unwrap(), a) {
                    return fail(examined, "vertical associativity", format!("({cc}·{b})·{a} != {cc}·({b}·{a})"));
                }
            }
        }
    }

    // horizontal composition: domain, endpoints, units, identities, associativity
    for a in 0..m2 {
        for a2 in 0..m2 {
            examined += 1;
            let composable = obj_src(a) == obj_tgt(a2);
            match (composable, x.hcomp(a, a2)) {
                (true, None) => return fail(examined, "horizontal domain", format!("{a}{a2} is composable but undefined")),
                (false, Some(_)) => return fail(examined, "horizontal domain", format!("{a}{a2} defined on a non-composable pair")),
                (true, Some(r)) => {
                    let (f, g) = x.two_cell(a);
                    let (f2, g2) = x.two_cell(a2);
                    let want = (x.comp1(f, f2).unwrap(), x.comp1(g, g2).unwrap());
                    if x.two_cell(r) != want {
                        return fail(examined, "horizontal endpoints", format!("{a}{a2} = {r} has wrong endpoints"));
                    }
                }
                _ => {}
            }
        }
    }
    for a in 0..m2 {
        examined += 1;
        let left = x.id2(x.id1(obj_tgt(a)));
        let right = x.id2(x.id1(obj_src(a)));
        if x.hcomp(left, a) != Some(a) || x.hcomp(a, right) != Some(a) {
            return fail(examined, "horizontal identity", format!("identity 2-cells of identity 1-cells do not act trivially on {a}"));
        }
    }
    for f in 0..x.one_cell_count() {
        for g in (0..x.one_cell_count()).filter(|&g| x.one_cell(f).0 == x.one_cell(g).1) {
            examined += 1;
            let fg = x.comp1(f, g).unwrap();
            if x.hcomp(x.id2(f), x.id2(g)) != Some(x.id2(fg)) {
                return fail(examined, "identity preservation", format!("id_{f} id_{g} != id_{fg}"));
            }
        }
    }
    for a in 0..m2 {
        for b in (0..m2).filter(|&b| obj_src(a) == obj_tgt(b)) {
            let ab = x.hcomp(a, b).unwrap();
            for cc in (0..m2).filter(|&cc| obj_src(b) == obj_tgt(cc)) {
                examined += 1;
                if x.hcomp(ab, cc) != x.hcomp(a, x.hcomp(b, cc).unwrap()) {
                    return fail(examined, "horizontal associativity", format!("({a}{b}){cc} != {a}({b}{cc})"));
                }
            }
        }
    }

    // interchange, whiskered form: αα' = αg'·fα' = gα'·αf'
    for a in 0..m2 {
        for a2 in (0..m2).filter(|&a2| obj_src(a) == obj_tgt(a2)) {
            examined += 1;
            let (f, g) = x.two_cell(a);
            let (f2, g2) = x.two_cell(a2);
            let whole = x.hcomp(a, a2);
            let first = x.vcomp(x.whisker_right(a, g2).unwrap(), x.whisker_left(f, a2).unwrap());
            let second = x.vcomp(x.whisker_left(g, a2).unwrap(), x.whisker_right(a, f2).unwrap());
            if whole != first || whole != second {
                return fail(examined, "interchange", format!("{a}{a2} differs from its whiskered factorizations"));
            }
        }
    }
    // interchange, middle-four form: (β·α)(β'·α') = (ββ')·(αα')
    for a in 0..m2 {
        for b in (0..m2).filter(|&b| x.two_cell(b).0 == x.two_cell(a).1) {
            let ba = x.vcomp(b, a).unwrap();
            for a2 in (0..m2).filter(|&a2| obj_src(a) == obj_tgt(a2)) {
                for b2 in (0..m2).filter(|&b2| x.two_cell(b2).0 == x.two_cell(a2).1) {
                    examined += 1;
                    let lhs = x.hcomp(ba, x.vcomp(b2, a2).unwrap());
                    let rhs = x.vcomp(x.hcomp(b, b2).unwrap(), x.hcomp(a, a2).unwrap());
                    if lhs != rhs {
                        return fail(examined, "interchange", format!("({b}·{a})({b2}·{a2}) != ({b}{b2})·({a}{a2})"));
                    }
                }
            }
        }
    }
    CheckReport::pass(NAME, examined)
}

/// An `n`-simplex of the Duskin nerve. Ordering is lexicographic on
/// `(objects, one_cells, two_cells)`, which fixes canonical identifiers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DuskinSimplex {
    pub objects: Vec<usize>,
    /// `f_{ij}` for pairs `i < j` in lexicographic order.
    pub one_cells: Vec<usize>,
    /// `α_{ijk}: f_{ij} f_{jk} ⇒ f_{ik}` for triples in lexicographic order.
    pub two_cells: Vec<usize>,
}

impl DuskinSimplex {
    pub fn dim(&self) -> usize {
        self.objects.len() - 1
    }

    /// `d_j`: drop every item involving index `j`.
    pub fn face(&self, j: usize) -> DuskinSimplex {
        let n = self.dim();
        let (pairs, triples) = (Pairs::new(n), Triples::new(n));
        let m = n - 1;
        let objects = (0..=m).map(|a| self.objects[coface(j, a)]).collect();
        let one_cells = Pairs::new(m)
            .list()
            .iter()
            .map(|&[a, b]| self.one_cells[pairs.index(coface(j, a), coface(j, b))])
            .collect();
        let two_cells = Triples::new(m)
            .list()
            .iter()
            .map(|&[a, b, c]| self.two_cells[triples.index(coface(j, a), coface(j, b), coface(j, c))])
            .collect();
        DuskinSimplex { objects, one_cells, two_cells }
    }

    /// `s_j`: repeat `C_j`, inserting identity 1- and 2-cells.
    pub fn degeneracy(&self, x: &Finite2Category, j: usize) -> DuskinSimplex {
        let n = self.dim();
        let (pairs, triples) = (Pairs::new(n), Triples::new(n));
        let m = n + 1;
        let s = |a| codegeneracy(j, a);
        let objects: Vec<usize> = (0..=m).map(|a| self.objects[s(a)]).collect();
        let new_pairs = Pairs::new(m);
        let one_cells: Vec<usize> = new_pairs
            .list()
            .iter()
            .map(|&[a, b]| {
                if s(a) == s(b) {
                    x.id1(objects[a])
                } else {
                    self.one_cells[pairs.index(s(a), s(b))]
                }
            })
            .collect();
        let two_cells = Triples::new(m)
            .list()
            .iter()
            .map(|&[a, b, c]| {
                let (sa, sb, sc) = (s(a), s(b), s(c));
                if sa == sb || sb == sc {
                    x.id2(one_cells[new_pairs.index(a, c)])
                } else {
                    self.two_cells[triples.index(sa, sb, sc)]
                }
            })
            .collect();
        DuskinSimplex { objects, one_cells, two_cells }
    }
}

/// `α_{ijl}·(f_{ij}α_{jkl}) = α_{ikl}·(α_{ijk}f_{kl})` for the given slots.
fn tetrahedron(
    x: &Finite2Category,
    f_ij: usize,
    f_kl: usize,
    a_ijk: usize,
    a_ijl: usize,
    a_ikl: usize,
    a_jkl: usize,
) -> bool {
    let lhs = x.whisker_left(f_ij, a_jkl).and_then(|w| x.vcomp(a_ijl, w));
    let rhs = x.whisker_right(a_ijk, f_kl).and_then(|w| x.vcomp(a_ikl, w));
    lhs.is_some() && lhs == rhs
}

/// Backtracking enumeration of Duskin data on `{0..n}`, optionally leaving
/// out `f_{pq}` and every 2-cell and coherence square containing both `p, q`.
struct DuskinEnumerator<'a> {
    x: &'a Finite2Category,
    n: usize,
    skip: Option<(usize, usize)>,
    pairs: Pairs,
    triples: Triples,
    /// 1-cells by `(source object, target object)`.
    hom1: Vec<Vec<usize>>,
    /// 2-cells by `(source 1-cell, target 1-cell)`.
    hom2: Vec<Vec<usize>>,
    objects: Vec<usize>,
    one: Vec<usize>,
    two: Vec<usize>,
}

const UNSET: usize = usize::MAX;

impl<'a> DuskinEnumerator<'a> {
    fn new(x: &'a Finite2Category, n: usize, skip: Option<(usize, usize)>) -> Self {
        let (o, m1) = (x.object_count(), x.one_cell_count());
        let mut hom1 = vec![Vec::new(); o * o];
        for f in 0..m1 {
            let (s, t) = x.one_cell(f);
            hom1[s * o + t].push(f);
        }
        let mut hom2 = vec![Vec::new(); m1 * m1];
        for a in 0..x.two_cell_count() {
            let (f, g) = x.two_cell(a);
            hom2[f * m1 + g].push(a);
        }
        let pairs = Pairs::new(n);
        let triples = Triples::new(n);
        DuskinEnumerator {
            x,
            n,
            skip,
            objects: vec![UNSET; n + 1],
            one: vec![UNSET; pairs.len()],
            two: vec![UNSET; triples.len()],
            pairs,
            triples,
            hom1,
            hom2,
        }
    }

    fn skipped(&self, s: &[usize]) -> bool {
        self.skip.is_some_and(|(p, q)| contains_both(s, p, q))
    }

    fn hom1(&self, source: usize, target: usize) -> &[usize] {
        &self.hom1[source * self.x.object_count() + target]
    }

    fn hom2(&self, f: usize, g: usize) -> &[usize] {
        &self.hom2[f * self.x.one_cell_count() + g]
    }

    fn run<F>(&mut self, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&Self) -> ControlFlow<()>,
    {
        self.objects_from(0, visit)
    }

    fn objects_from<F>(&mut self, i: usize, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&Self) -> ControlFlow<()>,
    {
        if i > self.n {
            return self.one_from(0, visit);
        }
        for o in 0..self.x.object_count() {
            self.objects[i] = o;
            self.objects_from(i + 1, visit)?;
        }
        ControlFlow::Continue(())
    }

    fn one_from<F>(&mut self, slot: usize, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&Self) -> ControlFlow<()>,
    {
        if slot == self.pairs.len() {
            return self.two_from(0, visit);
        }
        let [i, j] = self.pairs.list()[slot];
        if self.skipped(&[i, j]) {
            self.one[slot] = UNSET;
            return self.one_from(slot + 1, visit);
        }
        let cands = self.hom1(self.objects[j], self.objects[i]).to_vec();
        for f in cands {
            self.one[slot] = f;
            self.one_from(slot + 1, visit)?;
        }
        ControlFlow::Continue(())
    }

    fn two_from<F>(&mut self, slot: usize, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&Self) -> ControlFlow<()>,
    {
        if slot == self.triples.len() {
            return visit(self);
        }
        let [i, j, k] = self.triples.list()[slot];
        if self.skipped(&[i, j, k]) {
            self.two[slot] = UNSET;
            return self.two_from(slot + 1, visit);
        }
        let f_ij = self.one[self.pairs.index(i, j)];
        let f_jk = self.one[self.pairs.index(j, k)];
        let f_ik = self.one[self.pairs.index(i, k)];
        let Some(fg) = self.x.comp1(f_ij, f_jk) else {
            return ControlFlow::Continue(());
        };
        let cands = self.hom2(fg, f_ik).to_vec();
        'cand: for a in cands {
            self.two[slot] = a;
            // this triple is (j', k', l') = (i, j, k) of every square (h, i, j, k), h < i
            for h in 0..i {
                if self.skipped(&[h, i, j, k]) {
                    continue;
                }
                if !self.square(h, i, j, k) {
                    continue 'cand;
                }
            }
            self.two_from(slot + 1, visit)?;
        }
        self.two[slot] = UNSET;
        ControlFlow::Continue(())
    }

    fn square(&self, i: usize, j: usize, k: usize, l: usize) -> bool {
        let (p, t) = (&self.pairs, &self.triples);
        tetrahedron(
            self.x,
            self.one[p.index(i, j)],
            self.one[p.index(k, l)],
            self.two[t.index(i, j, k)],
            self.two[t.index(i, j, l)],
            self.two[t.index(i, k, l)],
            self.two[t.index(j, k, l)],
        )
    }

    fn simplex(&self) -> DuskinSimplex {
        DuskinSimplex {
            objects: self.objects.clone(),
            one_cells: self.one.clone(),
            two_cells: self.two.clone(),
        }
    }
}

/// All `n`-simplices of the Duskin nerve, in canonical order.
pub fn duskin_simplices(x: &Finite2Category, n: usize, budget: Budget) -> Result<Vec<DuskinSimplex>> {
    let mut out = Vec::new();
    let mut over = false;
    let _ = DuskinEnumerator::new(x, n, None).run(&mut |e| {
        if out.len() as u64 >= budget.0 {
            over = true;
            return ControlFlow::Break(());
        }
        out.push(e.simplex());
        ControlFlow::Continue(())
    });
    if over {
        return Err(Error::BudgetExhausted {
            budget: budget.0,
            context: format!("enumerating Duskin {n}-simplices"),
        });
    }
    out.sort();
    Ok(out)
}

/// The Duskin nerve of `x`, truncated at `height`.
pub fn duskin_nerve(x: &Finite2Category, height: usize, budget: Budget) -> Result<TruncatedSimplicialSet> {
    let levels = (0..=height)
        .map(|n| duskin_simplices(x, n, budget))
        .collect::<Result<Vec<_>>>()?;
    assemble(levels, |_, s: &DuskinSimplex, i| s.face(i), |_, s, j| s.degeneracy(x, j))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KanCriterion {
    pub two_cells_invertible: bool,
    /// First 2-cell without a vertical inverse.
    pub non_invertible_two_cell: Option<usize>,
    pub one_cells_equivalences: bool,
    /// First 1-cell that is not an equivalence.
    pub non_equivalence: Option<usize>,
}

impl KanCriterion {
    /// Predicted Kan verdict of the Duskin nerve.
    pub fn is_kan(&self) -> bool {
        self.two_cells_invertible && self.one_cells_equivalences
    }
}

fn vertically_invertible(x: &Finite2Category, a: usize) -> bool {
    let (f, g) = x.two_cell(a);
    x.hom2(g, f)
        .any(|b| x.vcomp(b, a) == Some(x.id2(f)) && x.vcomp(a, b) == Some(x.id2(g)))
}

/// Invertibility of all 2-cells and of all 1-cells up to invertible 2-cells.
pub fn kan_criterion(x: &Finite2Category) -> KanCriterion {
    let non_invertible_two_cell = (0..x.two_cell_count()).find(|&a| !vertically_invertible(x, a));
    let non_equivalence = (0..x.one_cell_count()).find(|&f| {
        let (s, t) = x.one_cell(f);
        // g: t -> s with invertible fg ⇒ id_t and gf ⇒ id_s
        let is_equivalence = (0..x.one_cell_count()).any(|g| {
            if x.one_cell(g) != (t, s) {
                return false;
            }
            let fg = x.comp1(f, g).unwrap();
            let gf = x.comp1(g, f).unwrap();
            x.hom2(fg, x.id1(t)).any(|a| vertically_invertible(x, a))
                && x.hom2(gf, x.id1(s)).any(|a| vertically_invertible(x, a))
        });
        !is_equivalence
    });
    KanCriterion {
        two_cells_invertible: non_invertible_two_cell.is_none(),
        non_invertible_two_cell,
        one_cells_equivalences: non_equivalence.is_none(),
        non_equivalence,
    }
}

/// Unknowns of a Duskin rhombus problem, in search order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Unknown {
    Fpq,
    Lambda(usize),
    Mu(usize),
    Rho(usize),
}

/// The six families of filler equations, indexed by the free indices of each.
#[derive(Debug, Clone, Copy)]
enum FillerEquation {
    /// `λ_{ipq}·α_{ijp}f_{pq} = α_{ijq}·f_{ij}λ_{jpq}`, `i < j < p`
    One(usize, usize),
    /// `μ_{pkq}·α_{pjk}f_{kq} = μ_{pjq}·f_{pj}α_{jkq}`, `p < j < k < q`
    Two(usize, usize),
    /// `α_{pkl}·ρ_{pqk}f_{kl} = ρ_{pql}·f_{pq}α_{qkl}`, `q < k < l`
    Three(usize, usize),
    /// `λ_{ipq}·f_{ip}μ_{pkq} = α_{ikq}·α_{ipk}f_{kq}`, `i < p < k < q`
    Four(usize, usize),
    /// `α_{iql}·λ_{ipq}f_{ql} = α_{ipl}·f_{ip}ρ_{pql}`, `i < p < q < l`
    Five(usize, usize),
    /// `ρ_{pql}·μ_{pjq}f_{ql} = α_{pjl}·f_{pj}α_{jql}`, `p < j < q < l`
    Six(usize, usize),
}

struct RhombusSolver<'a> {
    x: &'a Finite2Category,
    p: usize,
    q: usize,
    pairs: Pairs,
    triples: Triples,
    unknowns: Vec<Unknown>,
    /// Equations checked once unknown `u` is assigned.
    due: Vec<Vec<FillerEquation>>,
}

impl<'a> RhombusSolver<'a> {
    fn new(x: &'a Finite2Category, n: usize, p: usize, q: usize) -> Self {
        let mut unknowns = vec![Unknown::Fpq];
        unknowns.extend((0..p).map(Unknown::Lambda));
        unknowns.extend((p + 1..q).map(Unknown::Mu));
        unknowns.extend((q + 1..=n).map(Unknown::Rho));
        let pos = |u: Unknown| unknowns.iter().position(|&v| v == u).unwrap();
        let mut due = vec![Vec::new(); unknowns.len()];
        use FillerEquation::*;
        for i in 0..p {
            for j in i + 1..p {
                due[pos(Unknown::Lambda(j))].push(One(i, j));
            }
        }
        for j in p + 1..q {
            for k in j + 1..q {
                due[pos(Unknown::Mu(k))].push(Two(j, k));
            }
        }
        for k in q + 1..=n {
            for l in k + 1..=n {
                due[pos(Unknown::Rho(l))].push(Three(k, l));
            }
        }
        for i in 0..p {
            for k in p + 1..q {
                due[pos(Unknown::Mu(k))].push(Four(i, k));
            }
        }
        for i in 0..p {
            for l in q + 1..=n {
                due[pos(Unknown::Rho(l))].push(Five(i, l));
            }
        }
        for j in p + 1..q {
            for l in q + 1..=n {
                due[pos(Unknown::Rho(l))].push(Six(j, l));
            }
        }
        RhombusSolver {
            x,
            p,
            q,
            pairs: Pairs::new(n),
            triples: Triples::new(n),
            unknowns,
            due,
        }
    }

    fn slot(&self, u: Unknown) -> (Option<usize>, Option<usize>) {
        let (p, q) = (self.p, self.q);
        match u {
            Unknown::Fpq => (Some(self.pairs.index(p, q)), None),
            Unknown::Lambda(i) => (None, Some(self.triples.index(i, p, q))),
            Unknown::Mu(j) => (None, Some(self.triples.index(p, j, q))),
            Unknown::Rho(k) => (None, Some(self.triples.index(p, q, k))),
        }
    }

    fn holds(&self, eq: FillerEquation, objects_one: &[usize], two: &[usize]) -> bool {
        let x = self.x;
        let (p, q) = (self.p, self.q);
        let f = |i: usize, j: usize| objects_one[self.pairs.index(i, j)];
        let a = |i: usize, j: usize, k: usize| two[self.triples.index(i, j, k)];
        let v = |beta: usize, alpha: Option<usize>| alpha.and_then(|al| x.vcomp(beta, al));
        let (lhs, rhs) = match eq {
            FillerEquation::One(i, j) => (
                v(a(i, p, q), x.whisker_right(a(i, j, p), f(p, q))),
                v(a(i, j, q), x.whisker_left(f(i, j), a(j, p, q))),
            ),
            FillerEquation::Two(j, k) => (
                v(a(p, k, q), x.whisker_right(a(p, j, k), f(k, q))),
                v(a(p, j, q), x.whisker_left(f(p, j), a(j, k, q))),
            ),
            FillerEquation::Three(k, l) => (
                v(a(p, k, l), x.whisker_right(a(p, q, k), f(k, l))),
                v(a(p, q, l), x.whisker_left(f(p, q), a(q, k, l))),
            ),
            FillerEquation::Four(i, k) => (
                v(a(i, p, q), x.whisker_left(f(i, p), a(p, k, q))),
                v(a(i, k, q), x.whisker_right(a(i, p, k), f(k, q))),
            ),
            FillerEquation::Five(i, l) => (
                v(a(i, q, l), x.whisker_right(a(i, p, q), f(q, l))),
                v(a(i, p, l), x.whisker_left(f(i, p), a(p, q, l))),
            ),
            FillerEquation::Six(j, l) => (
                v(a(p, q, l), x.whisker_right(a(p, j, q), f(q, l))),
                v(a(p, j, l), x.whisker_left(f(p, j), a(j, q, l))),
            ),
        };
        lhs.is_some() && lhs == rhs
    }

    /// First filler in lexicographic order of `(f_pq, λ.., μ.., ρ..)`.
    fn solve(&self, objects: &[usize], one: &mut [usize], two: &mut [usize]) -> Option<(usize, Vec<usize>)> {
        self.assign(0, objects, one, two).then(|| {
            let f_pq = one[self.pairs.index(self.p, self.q)];
            let cells = self.unknowns[1..]
                .iter()
                .map(|&u| two[self.slot(u).1.unwrap()])
                .collect();
            (f_pq, cells)
        })
    }

    fn assign(&self, u: usize, objects: &[usize], one: &mut [usize], two: &mut [usize]) -> bool {
        if u == self.unknowns.len() {
            return true;
        }
        let x = self.x;
        let (p, q) = (self.p, self.q);
        let f = |one: &[usize], i: usize, j: usize| one[self.pairs.index(i, j)];
        let candidates: Vec<usize> = match self.unknowns[u] {
            Unknown::Fpq => (0..x.one_cell_count())
                .filter(|&g| x.one_cell(g) == (objects[q], objects[p]))
                .collect(),
            Unknown::Lambda(i) => match x.comp1(f(one, i, p), f(one, p, q)) {
                Some(s) => x.hom2(s, f(one, i, q)).collect(),
                None => Vec::new(),
            },
            Unknown::Mu(j) => match x.comp1(f(one, p, j), f(one, j, q)) {
                Some(s) => x.hom2(s, f(one, p, q)).collect(),
                None => Vec::new(),
            },
            Unknown::Rho(k) => match x.comp1(f(one, p, q), f(one, q, k)) {
                Some(s) => x.hom2(s, f(one, p, k)).collect(),
                None => Vec::new(),
            },
        };
        let (one_slot, two_slot) = self.slot(self.unknowns[u]);
        for c in candidates {
            match (one_slot, two_slot) {
                (Some(s), _) => one[s] = c,
                (_, Some(s)) => two[s] = c,
                _ => unreachable!(),
            }
            if self.due[u].iter().all(|&eq| self.holds(eq, one, two))
                && self.assign(u + 1, objects, one, two)
            {
                return true;
            }
        }
        false
    }
}

/// Decides `BC_{p,q}[n]` for the Duskin nerve directly on 2-categorical data:
/// for every rhombus datum, search `f_{pq}` and 2-cells `λ_{ipq}`, `μ_{pjq}`,
/// `ρ_{pqk}` satisfying the six families of filler equations.
pub fn bc_check_duskin(
    x: &Finite2Category,
    n: usize,
    p: usize,
    q: usize,
    budget: Budget,
) -> Result<CheckReport> {
    if n < 2 || !(p < q && q <= n) {
        return Err(Error::InvalidIndices(format!(
            "need n >= 2 and 0 <= p < q <= n, got n = {n}, p = {p}, q = {q}"
        )));
    }
    let name = bc_name(n, p, q);
    let solver = RhombusSolver::new(x, n, p, q);
    let mut examined = 0u64;
    let mut outcome: Option<std::result::Result<DuskinRhombus, ()>> = None;
    let mut sample = None;
    let _ = DuskinEnumerator::new(x, n, Some((p, q))).run(&mut |e| {
        if examined >= budget.0 {
            outcome = Some(Err(()));
            return ControlFlow::Break(());
        }
        examined += 1;
        let mut one = e.one.clone();
        let mut two = e.two.clone();
        let problem = || DuskinRhombus {
            n,
            p,
            q,
            objects: e.objects.clone(),
            one_cells: e.one.iter().map(|&f| (f != UNSET).then_some(f)).collect(),
            two_cells: e.two.iter().map(|&a| (a != UNSET).then_some(a)).collect(),
        };
        match solver.solve(&e.objects, &mut one, &mut two) {
            Some((f_pq, two_cells)) => {
                if sample.is_none() {
                    sample = Some(Sample {
                        problem: Finding::Duskin(problem()),
                        filler: Filler::Duskin { f_pq, two_cells },
                    });
                }
                ControlFlow::Continue(())
            }
            None => {
                outcome = Some(Ok(problem()));
                ControlFlow::Break(())
            }
        }
    });
    Ok(match outcome {
        None => CheckReport::pass(name, examined).with_sample(sample),
        Some(Err(())) => CheckReport::inconclusive(name, examined),
        Some(Ok(problem)) => {
            CheckReport::fail(name, examined, Finding::Duskin(problem)).with_sample(sample)
        }
    })
}

/// Replays a filler against a rhombus datum: assembles the full simplex and
/// checks every coherence square.
pub fn replay_duskin_filler(
    x: &Finite2Category,
    problem: &DuskinRhombus,
    f_pq: usize,
    two_cells: &[usize],
) -> bool {
    let (n, p, q) = (problem.n, problem.p, problem.q);
    let pairs = Pairs::new(n);
    let triples = Triples::new(n);
    let mut one: Vec<usize> = problem.one_cells.iter().map(|f| f.unwrap_or(UNSET)).collect();
    one[pairs.index(p, q)] = f_pq;
    let mut two: Vec<usize> = problem.two_cells.iter().map(|a| a.unwrap_or(UNSET)).collect();
    let slots = (0..p)
        .map(|i| triples.index(i, p, q))
        .chain((p + 1..q).map(|j| triples.index(p, j, q)))
        .chain((q + 1..=n).map(|k| triples.index(p, q, k)));
    let mut filled = 0;
    for (slot, &a) in slots.zip(two_cells) {
        two[slot] = a;
        filled += 1;
    }
    if filled != n - 1 || one.contains(&UNSET) || two.contains(&UNSET) {
        return false;
    }
    let ok_one = pairs.list().iter().zip(&one).all(|(&[i, j], &f)| {
        f < x.one_cell_count() && x.one_cell(f) == (problem.objects[j], problem.objects[i])
    });
    let ok_two = ok_one
        && triples.list().iter().zip(&two).all(|(&[i, j, k], &a)| {
            a < x.two_cell_count()
                && x.comp1(one[pairs.index(i, j)], one[pairs.index(j, k)])
                    .is_some_and(|s| x.two_cell(a) == (s, one[pairs.index(i, k)]))
        });
    ok_two
        && crate::indexing::quadruples(n).all(|[i, j, k, l]| {
            tetrahedron(
                x,
                one[pairs.index(i, j)],
                one[pairs.index(k, l)],
                two[triples.index(i, j, k)],
                two[triples.index(i, j, l)],
                two[triples.index(i, k, l)],
                two[triples.index(j, k, l)],
            )
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::FiniteCategory;
    use crate::km2::{build_a, build_z, km2_truncation};
    use crate::monoid::Monoid;
    use crate::simplicial::{check_all, check_bc, validate, CheckMode};

    fn naive_z(m: &Monoid) -> TwoCategoryFile {
        let k = m.size();
        let product: Vec<[usize; 3]> =
            (0..k).flat_map(|b| (0..k).map(move |a| [b, a, m.op(b, a)])).collect();
        TwoCategoryFile {
            objects: 1,
            one_cells: vec![[0, 0]],
            one_identities: vec![0],
            one_composition: vec![[0, 0, 0]],
            two_cells: vec![[0, 0]; k],
            two_identities: vec![m.unit()],
            vertical: product.clone(),
            horizontal: product,
        }
    }

    fn z2_groupoid() -> FiniteCategory {
        FiniteCategory::from_monoid(&Monoid::cyclic(2))
    }

    #[test]
    fn constructions_validate() {
        for m in [Monoid::trivial(), Monoid::cyclic(3), Monoid::binary(), Monoid::symmetric_group(3)] {
            assert!(validate_2category(&build_z(&m)).is_pass());
            assert!(validate_2category(&build_a(&m).0).is_pass());
        }
        let ld = Finite2Category::locally_discrete(&FiniteCategory::chain_poset(3));
        assert!(validate_2category(&ld).is_pass());
        let back = Finite2Category::from_file(&ld.to_file()).unwrap();
        assert_eq!(back, ld);
    }

    #[test]
    fn noncommutative_product_breaks_interchange() {
        let x = Finite2Category::from_file(&naive_z(&Monoid::symmetric_group(3))).unwrap();
        let r = validate_2category(&x);
        assert!(!r.is_pass());
        match r.counterexample {
            Some(Finding::Law { law, .. }) => assert_eq!(law, "interchange"),
            other => panic!("unexpected finding {other:?}"),
        }
    }

    #[test]
    fn duskin_counts() {
        let s = duskin_nerve(&build_z(&Monoid::trivial()), 4, Budget::default()).unwrap();
        assert_eq!(s.counts(), &[1, 1, 1, 1, 1]);
        // Z/2 cocycles at level 3: 2^(6 - 3) = 8
        let s = duskin_nerve(&build_z(&Monoid::cyclic(2)), 3, Budget::default()).unwrap();
        assert_eq!(s.count(3), 8);
        assert!(validate(&s).is_pass());
    }

    #[test]
    fn duskin_nerve_of_z_is_km2() {
        for m in [Monoid::cyclic(2), Monoid::cyclic(3), Monoid::binary()] {
            let a = duskin_nerve(&build_z(&m), 4, Budget::default()).unwrap();
            let b = km2_truncation(&m, 4, Budget::default()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn locally_discrete_nerve_is_category_nerve() {
        let c = FiniteCategory::chain_poset(3);
        let a = duskin_nerve(&Finite2Category::locally_discrete(&c), 3, Budget::default()).unwrap();
        assert_eq!(a.counts(), crate::category::nerve(&c, 3).counts());
    }

    #[test]
    fn kan_criterion_predicts_kan() {
        let cases = [
            build_z(&Monoid::cyclic(2)),
            build_z(&Monoid::binary()),
            build_a(&Monoid::cyclic(3)).0,
            build_a(&Monoid::binary()).0,
            Finite2Category::locally_discrete(&z2_groupoid()),
            Finite2Category::locally_discrete(&FiniteCategory::chain_poset(2)),
        ];
        for x in cases {
            let s = duskin_nerve(&x, 3, Budget::default()).unwrap();
            let all = check_all(&s, 3, CheckMode::Kan, Budget::default()).unwrap();
            assert_eq!(kan_criterion(&x).is_kan(), all.kan.unwrap().is_pass(), "{x:?}");
        }
    }

    #[test]
    fn direct_bc_agrees_with_nerve() {
        let cases = [
            build_z(&Monoid::cyclic(2)),
            build_z(&Monoid::binary()),
            build_a(&Monoid::cyclic(3)).0,
            Finite2Category::locally_discrete(&z2_groupoid()),
            Finite2Category::locally_discrete(&FiniteCategory::chain_poset(2)),
        ];
        for x in cases {
            let s = duskin_nerve(&x, 4, Budget::default()).unwrap();
            for n in 2..=4 {
                for q in 1..=n {
                    for p in 0..q {
                        let direct = bc_check_duskin(&x, n, p, q, Budget::default()).unwrap();
                        let nerve = check_bc(&s, n, p, q, Budget::default()).unwrap();
                        assert_eq!(direct.verdict, nerve.verdict, "{x:?} {}", direct.condition);
                        if let Some(Sample { problem: Finding::Duskin(d), filler: Filler::Duskin { f_pq, two_cells } }) =
                            &direct.witness_sample
                        {
                            assert!(replay_duskin_filler(&x, d, *f_pq, two_cells));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn binary_z_fails_known_rhombus() {
        let x = build_z(&Monoid::binary());
        let r = bc_check_duskin(&x, 5, 0, 3, Budget::default()).unwrap();
        assert_eq!(r.verdict, crate::report::Verdict::Fail);
        assert_eq!(r.condition, "BC_{0,3}[5]");
    }

    #[test]
    fn budget_makes_direct_check_inconclusive() {
        let x = build_z(&Monoid::cyclic(2));
        let r = bc_check_duskin(&x, 4, 0, 2, Budget(3)).unwrap();
        assert_eq!(r.verdict, crate::report::Verdict::Inconclusive);
        assert!(duskin_simplices(&x, 4, Budget(3)).is_err());
    }
}
