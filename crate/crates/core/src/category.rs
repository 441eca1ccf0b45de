//! Finite 1-categories and their nerves.
//!
//! Morphisms follow the nerve orientation `f_{ij}: C_j -> C_i`: an
//! `n`-simplex is a chain `C_0 <- C_1 <- ... <- C_n` stored as its
//! consecutive arrows `(f_{01}, ..., f_{n-1,n})`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monoid::Monoid;
use crate::report::{Budget, CheckReport, Finding, Verdict};
use crate::simplicial::{assemble, check_all, CheckMode, TruncatedSimplicialSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCategory {
    objects: usize,
    /// `(source, target)` per morphism.
    morphisms: Vec<(usize, usize)>,
    identities: Vec<usize>,
    /// `comp[f * m + g] = f ∘ g` (apply `g` first), defined iff `target(g) == source(f)`.
    comp: Vec<Option<usize>>,
}

/// On-disk form: composition given as `[f, g, f∘g]` triples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryFile {
    pub objects: usize,
    pub morphisms: Vec<[usize; 2]>,
    pub identities: Vec<usize>,
    pub composition: Vec<[usize; 3]>,
}

impl FiniteCategory {
    pub fn new(
        objects: usize,
        morphisms: Vec<(usize, usize)>,
        identities: Vec<usize>,
        composition: &[[usize; 3]],
    ) -> Result<Self> {
        let m = morphisms.len();
        if let Some((f, _)) = morphisms
            .iter()
            .enumerate()
            .find(|(_, &(s, t))| s >= objects || t >= objects)
        {
            return Err(Error::Structural(format!("morphism {f} has an endpoint out of range")));
        }
        if identities.len() != objects {
            return Err(Error::Structural(format!(
                "{} identities for {objects} objects",
                identities.len()
            )));
        }
        if let Some(&i) = identities.iter().find(|&&i| i >= m) {
            return Err(Error::Structural(format!("identity {i} is not a morphism")));
        }
        let mut comp = vec![None; m * m];
        for &[f, g, h] in composition {
            if f >= m || g >= m || h >= m {
                return Err(Error::Structural(format!(
                    "composition entry [{f}, {g}, {h}] references a missing morphism"
                )));
            }
            if comp[f * m + g].replace(h).is_some() {
                return Err(Error::Structural(format!("composite of ({f}, {g}) given twice")));
            }
        }
        Ok(FiniteCategory {
            objects,
            morphisms,
            identities,
            comp,
        })
    }

    pub fn from_file(file: &CategoryFile) -> Result<Self> {
        Self::new(
            file.objects,
            file.morphisms.iter().map(|&[s, t]| (s, t)).collect(),
            file.identities.clone(),
            &file.composition,
        )
    }

    pub fn to_file(&self) -> CategoryFile {
        let m = self.morphisms.len();
        let mut composition = Vec::new();
        for f in 0..m {
            for g in 0..m {
                if let Some(h) = self.comp[f * m + g] {
                    composition.push([f, g, h]);
                }
            }
        }
        CategoryFile {
            objects: self.objects,
            morphisms: self.morphisms.iter().map(|&(s, t)| [s, t]).collect(),
            identities: self.identities.clone(),
            composition,
        }
    }

    /// One-object category whose morphisms are the elements of `m`.
    pub fn from_monoid(m: &Monoid) -> Self {
        let k = m.size();
        let mut composition = Vec::with_capacity(k * k);
        for a in 0..k {
            for b in 0..k {
                composition.push([a, b, m.op(a, b)]);
            }
        }
        Self::new(1, vec![(0, 0); k], vec![m.unit()], &composition)
            .expect("monoid tables give well-formed categories")
    }

    /// The poset `0 < 1 < ... < k-1`, with one arrow `j -> i` whenever `i <= j`,
    /// so that nerve simplices are nondecreasing sequences of objects.
    pub fn chain_poset(k: usize) -> Self {
        let mut morphisms = Vec::new();
        let mut index = vec![vec![usize::MAX; k]; k];
        for (i, row) in index.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate().skip(i) {
                *slot = morphisms.len();
                morphisms.push((j, i));
            }
        }
        let identities = (0..k).map(|i| index[i][i]).collect();
        let mut composition = Vec::new();
        for i in 0..k {
            for j in i..k {
                for l in j..k {
                    // (i <- j) ∘ (j <- l) = (i <- l)
                    composition.push([index[i][j], index[j][l], index[i][l]]);
                }
            }
        }
        Self::new(k, morphisms, identities, &composition).expect("poset tables are well formed")
    }

    /// Disjoint union of two categories.
    pub fn disjoint_union(&self, other: &FiniteCategory) -> Self {
        let off_o = self.objects;
        let off_m = self.morphisms.len();
        let mut morphisms = self.morphisms.clone();
        morphisms.extend(other.morphisms.iter().map(|&(s, t)| (s + off_o, t + off_o)));
        let mut identities = self.identities.clone();
        identities.extend(other.identities.iter().map(|&i| i + off_m));
        let mut composition = self.to_file().composition;
        composition.extend(
            other
                .to_file()
                .composition
                .iter()
                .map(|&[f, g, h]| [f + off_m, g + off_m, h + off_m]),
        );
        Self::new(self.objects + other.objects, morphisms, identities, &composition)
            .expect("union of well-formed categories")
    }

    pub fn object_count(&self) -> usize {
        self.objects
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn source(&self, f: usize) -> usize {
        self.morphisms[f].0
    }

    pub fn target(&self, f: usize) -> usize {
        self.morphisms[f].1
    }

    pub fn identity(&self, object: usize) -> usize {
        self.identities[object]
    }

    /// `f ∘ g`, if defined.
    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        self.comp[f * self.morphisms.len() + g]
    }

    fn composite(&self, f: usize, g: usize) -> usize {
        self.compose(f, g)
            .expect("composable pair in a validated category")
    }
}

/// Checks composability domains, endpoints of composites, identity laws and
/// associativity.
pub fn validate_category(c: &FiniteCategory) -> CheckReport {
    const NAME: &str = "category axioms";
    let m = c.morphism_count();
    let law = |law: &str, detail: String| Finding::Law {
        law: law.into(),
        detail,
    };
    let mut examined = 0u64;
    for (o, &id) in c.identities.iter().enumerate() {
        if c.source(id) != o || c.target(id) != o {
            return CheckReport::fail(NAME, examined, law("identity endpoints", format!("identity of object {o} is morphism {id}, not an endomorphism of {o}")));
        }
    }
    for f in 0..m {
        for g in 0..m {
            examined += 1;
            let composable = c.target(g) == c.source(f);
            match (composable, c.compose(f, g)) {
                (true, None) => {
                    return CheckReport::fail(NAME, examined, law("composition domain", format!("{f} ∘ {g} is composable but undefined")))
                }
                (false, Some(_)) => {
                    return CheckReport::fail(NAME, examined, law("composition domain", format!("{f} ∘ {g} is defined on a non-composable pair")))
                }
                (true, Some(h)) if c.source(h) != c.source(g) || c.target(h) != c.target(f) => {
                    return CheckReport::fail(NAME, examined, law("composite endpoints", format!("{f} ∘ {g} = {h} has the wrong source or target")))
                }
                _ => {}
            }
        }
    }
    for f in 0..m {
        examined += 1;
        if c.composite(c.identity(c.target(f)), f) != f {
            return CheckReport::fail(NAME, examined, law("left identity", format!("id ∘ {f} != {f}")));
        }
        if c.composite(f, c.identity(c.source(f))) != f {
            return CheckReport::fail(NAME, examined, law("right identity", format!("{f} ∘ id != {f}")));
        }
    }
    for f in 0..m {
        for g in (0..m).filter(|&g| c.target(g) == c.source(f)) {
            let fg = c.composite(f, g);
            for h in (0..m).filter(|&h| c.target(h) == c.source(g)) {
                examined += 1;
                let lhs = c.composite(fg, h);
                let rhs = c.composite(f, c.composite(g, h));
                if lhs != rhs {
                    return CheckReport::fail(NAME, examined, law("associativity", format!("({f} ∘ {g}) ∘ {h} = {lhs} but {f} ∘ ({g} ∘ {h}) = {rhs}")));
                }
            }
        }
    }
    CheckReport::pass(NAME, examined)
}

/// `Ok(())` when every morphism has a two-sided inverse, otherwise the first
/// morphism that does not.
pub fn is_groupoid(c: &FiniteCategory) -> std::result::Result<(), usize> {
    for f in 0..c.morphism_count() {
        let (s, t) = c.morphisms[f];
        let invertible = (0..c.morphism_count()).any(|g| {
            c.source(g) == t
                && c.target(g) == s
                && c.compose(f, g) == Some(c.identity(t))
                && c.compose(g, f) == Some(c.identity(s))
        });
        if !invertible {
            return Err(f);
        }
    }
    Ok(())
}

/// Composable chains of length `n`, lexicographic in their arrows.
pub fn chains(c: &FiniteCategory, n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return (0..c.objects).map(|o| vec![o]).collect();
    }
    let mut level: Vec<Vec<usize>> = (0..c.morphism_count()).map(|f| vec![f]).collect();
    for _ in 1..n {
        let mut next = Vec::new();
        for chain in &level {
            // the new arrow f_{k,k+1} lands in C_k = source(last arrow)
            let last = *chain.last().unwrap();
            for g in (0..c.morphism_count()).filter(|&g| c.target(g) == c.source(last)) {
                let mut ch = chain.clone();
                ch.push(g);
                next.push(ch);
            }
        }
        level = next;
    }
    level.sort();
    level
}

/// Object `C_j` of a level-`n` chain.
fn chain_object(c: &FiniteCategory, n: usize, chain: &[usize], j: usize) -> usize {
    if n == 0 {
        chain[0]
    } else if j < n {
        c.target(chain[j])
    } else {
        c.source(chain[n - 1])
    }
}

/// The nerve of `c`, truncated at `height`.
pub fn nerve(c: &FiniteCategory, height: usize) -> TruncatedSimplicialSet {
    let levels = (0..=height).map(|n| chains(c, n)).collect();
    assemble(
        levels,
        |n, chain: &Vec<usize>, i| {
            if n == 1 {
                // d_0 f = C_1 = source, d_1 f = C_0 = target
                return vec![if i == 0 { c.source(chain[0]) } else { c.target(chain[0]) }];
            }
            let mut v = chain.clone();
            if i == 0 {
                v.remove(0);
            } else if i == n {
                v.pop();
            } else {
                let composite = c.composite(chain[i - 1], chain[i]);
                v.splice(i - 1..=i, [composite]);
            }
            v
        },
        |n, chain, j| {
            let id = c.identity(chain_object(c, n, chain, j));
            if n == 0 {
                return vec![id];
            }
            let mut v = chain.clone();
            v.insert(j, id);
            v
        },
    )
    .expect("chains are closed under faces and degeneracies")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorollaryReport {
    pub groupoid: bool,
    pub non_invertible: Option<usize>,
    pub kan: Verdict,
    pub bc: Verdict,
    pub reports: Vec<CheckReport>,
}

impl CorollaryReport {
    /// Groupoid, Kan and BC agree. Inconclusive verdicts make this false.
    pub fn consistent(&self) -> bool {
        let g = if self.groupoid { Verdict::Pass } else { Verdict::Fail };
        self.kan == g && self.bc == g
    }
}

/// Computes groupoid-ness and the Kan and BC verdicts of the nerve up to `height`.
pub fn corollary_check(
    c: &FiniteCategory,
    height: usize,
    budget: Budget,
) -> Result<CorollaryReport> {
    let v = validate_category(c);
    if !v.is_pass() {
        return Err(Error::InvalidInput(format!("not a category: {:?}", v.counterexample)));
    }
    let groupoid = is_groupoid(c);
    let s = nerve(c, height);
    let all = check_all(&s, height, CheckMode::Both, budget)?;
    Ok(CorollaryReport {
        groupoid: groupoid.is_ok(),
        non_invertible: groupoid.err(),
        kan: all.kan.unwrap(),
        bc: all.bc.unwrap(),
        reports: all.reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{check_bc, check_kan, standard_simplex, validate};

    #[test]
    fn constructors_validate() {
        assert!(validate_category(&FiniteCategory::from_monoid(&Monoid::binary())).is_pass());
        assert!(validate_category(&FiniteCategory::chain_poset(3)).is_pass());
        let u = FiniteCategory::from_monoid(&Monoid::cyclic(2))
            .disjoint_union(&FiniteCategory::from_monoid(&Monoid::cyclic(3)));
        assert!(validate_category(&u).is_pass());
        assert_eq!(is_groupoid(&u), Ok(()));
    }

    #[test]
    fn broken_right_identity_is_reported() {
        let c = FiniteCategory::from_monoid(&Monoid::cyclic(2));
        let mut file = c.to_file();
        // 1 ∘ id := id
        for e in &mut file.composition {
            if e[0] == 1 && e[1] == 0 {
                e[2] = 0;
            }
        }
        let broken = FiniteCategory::from_file(&file).unwrap();
        let r = validate_category(&broken);
        assert_eq!(r.verdict, Verdict::Fail);
        let Some(Finding::Law { law, .. }) = r.counterexample else { panic!() };
        assert_eq!(law, "right identity");
    }

    #[test]
    fn dangling_reference_is_structural() {
        let err = FiniteCategory::new(1, vec![(0, 0)], vec![0], &[[0, 0, 5]]).unwrap_err();
        assert!(matches!(err, Error::Structural(_)));
    }

    #[test]
    fn groupoid_witnesses() {
        assert_eq!(is_groupoid(&FiniteCategory::from_monoid(&Monoid::cyclic(2))), Ok(()));
        let poset = FiniteCategory::chain_poset(2);
        let f = is_groupoid(&poset).unwrap_err();
        // the arrow 0 <- 1
        assert_eq!((poset.source(f), poset.target(f)), (1, 0));
    }

    #[test]
    fn nerve_level_counts() {
        assert_eq!(nerve(&FiniteCategory::from_monoid(&Monoid::trivial()), 3).counts(), &[1, 1, 1, 1]);
        assert_eq!(nerve(&FiniteCategory::chain_poset(2), 2).counts(), &[2, 3, 4]);
        assert_eq!(nerve(&FiniteCategory::from_monoid(&Monoid::cyclic(2)), 3).counts(), &[1, 2, 4, 8]);
    }

    #[test]
    fn poset_nerve_is_the_standard_simplex() {
        for k in 1..4 {
            let n = nerve(&FiniteCategory::chain_poset(k), 3);
            assert!(validate(&n).is_pass());
            assert_eq!(n, standard_simplex(k - 1, 3));
        }
    }

    #[test]
    fn small_examples_from_the_kan_checker() {
        let z2 = nerve(&FiniteCategory::from_monoid(&Monoid::cyclic(2)), 2);
        assert!(check_kan(&z2, 2, 1, Budget::default()).unwrap().is_pass());
        let poset = nerve(&FiniteCategory::chain_poset(2), 2);
        assert_eq!(check_kan(&poset, 2, 0, Budget::default()).unwrap().verdict, Verdict::Fail);
        assert_eq!(check_bc(&poset, 2, 1, 2, Budget::default()).unwrap().verdict, Verdict::Fail);
    }

    #[test]
    fn corollary_triples() {
        let z3 = corollary_check(&FiniteCategory::from_monoid(&Monoid::cyclic(3)), 3, Budget::default()).unwrap();
        assert!(z3.groupoid && z3.kan.is_pass() && z3.bc.is_pass());
        for c in [FiniteCategory::chain_poset(2), FiniteCategory::from_monoid(&Monoid::binary())] {
            let r = corollary_check(&c, 3, Budget::default()).unwrap();
            assert!(!r.groupoid);
            assert_eq!((r.kan, r.bc), (Verdict::Fail, Verdict::Fail));
            assert!(r.consistent());
        }
    }
}
