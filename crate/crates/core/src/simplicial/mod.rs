//! Level-wise finite truncated simplicial sets.
//!
//! Simplices are opaque indices `0..count(n)` at each level. Constructors in
//! this crate number simplices by the lexicographic order of their underlying
//! combinatorial data, so identifiers are stable across runs.

mod check;

pub use check::{
    check_all, check_bc, check_kan, check_weak_pullback, find_horn_filler, find_rhombus_filler, CheckMode,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{CheckReport, Finding};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSimplicialSet {
    counts: Vec<usize>,
    /// `faces[n][i][x] = d_i(x)` for `x` in level `n`; `faces[0]` is empty.
    faces: Vec<Vec<Vec<usize>>>,
    /// `degeneracies[n][j][x] = s_j(x)` for `x` in level `n < height`.
    degeneracies: Vec<Vec<Vec<usize>>>,
}

impl TruncatedSimplicialSet {
    /// Builds a simplicial set from raw tables, checking shapes and ranges.
    /// Simplicial identities are not checked here; see [`validate`].
    pub fn from_tables(
        counts: Vec<usize>,
        faces: Vec<Vec<Vec<usize>>>,
        degeneracies: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::Structural("no levels".into()));
        }
        let height = counts.len() - 1;
        if faces.len() != height + 1 {
            return Err(Error::Structural(format!(
                "expected {} face levels (level 0 empty), found {}",
                height + 1,
                faces.len()
            )));
        }
        if degeneracies.len() != height {
            return Err(Error::Structural(format!(
                "expected {} degeneracy levels, found {}",
                height,
                degeneracies.len()
            )));
        }
        if !faces[0].is_empty() {
            return Err(Error::Structural("level 0 has no face maps".into()));
        }
        for n in 1..=height {
            check_maps(&faces[n], n + 1, counts[n], counts[n - 1], "d", n)?;
        }
        for n in 0..height {
            check_maps(&degeneracies[n], n + 1, counts[n], counts[n + 1], "s", n)?;
        }
        Ok(TruncatedSimplicialSet {
            counts,
            faces,
            degeneracies,
        })
    }

    pub fn height(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn count(&self, n: usize) -> usize {
        self.counts[n]
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// `d_i` on level `n`.
    #[inline]
    pub fn face(&self, n: usize, i: usize, x: usize) -> usize {
        self.faces[n][i][x]
    }

    pub fn face_table(&self, n: usize, i: usize) -> &[usize] {
        &self.faces[n][i]
    }

    /// `s_j` on level `n`.
    #[inline]
    pub fn degeneracy(&self, n: usize, j: usize, x: usize) -> usize {
        self.degeneracies[n][j][x]
    }

    pub fn degeneracy_table(&self, n: usize, j: usize) -> &[usize] {
        &self.degeneracies[n][j]
    }

    /// The same simplicial set truncated at a lower height.
    pub fn truncate(&self, height: usize) -> Self {
        let h = height.min(self.height());
        TruncatedSimplicialSet {
            counts: self.counts[..=h].to_vec(),
            faces: self.faces[..=h].to_vec(),
            degeneracies: self.degeneracies[..h].to_vec(),
        }
    }

    /// Simplices of level `n` that are not in the image of any degeneracy.
    pub fn nondegenerate(&self, n: usize) -> Vec<usize> {
        let mut hit = vec![false; self.counts[n]];
        if n > 0 {
            for table in &self.degeneracies[n - 1] {
                for &y in table {
                    hit[y] = true;
                }
            }
        }
        (0..self.counts[n]).filter(|&x| !hit[x]).collect()
    }

    pub fn to_file(&self) -> SimplicialSetFile {
        SimplicialSetFile {
            height: self.height(),
            levels: self.counts.iter().map(|&count| LevelSpec { count }).collect(),
            faces: self.faces.clone(),
            degeneracies: self.degeneracies.clone(),
        }
    }

    pub fn from_file(file: SimplicialSetFile) -> Result<Self> {
        if file.levels.len() != file.height + 1 {
            return Err(Error::Structural(format!(
                "height {} but {} levels given",
                file.height,
                file.levels.len()
            )));
        }
        Self::from_tables(
            file.levels.iter().map(|l| l.count).collect(),
            file.faces,
            file.degeneracies,
        )
    }
}

fn check_maps(
    tables: &[Vec<usize>],
    arity: usize,
    domain: usize,
    codomain: usize,
    name: &str,
    level: usize,
) -> Result<()> {
    if tables.len() != arity {
        return Err(Error::Structural(format!(
            "level {level}: expected {arity} maps {name}_*, found {}",
            tables.len()
        )));
    }
    for (i, table) in tables.iter().enumerate() {
        if table.len() != domain {
            return Err(Error::Structural(format!(
                "level {level}: {name}_{i} has {} entries, level has {domain} simplices",
                table.len()
            )));
        }
        if let Some((x, &y)) = table.iter().enumerate().find(|(_, &y)| y >= codomain) {
            return Err(Error::Structural(format!(
                "level {level}: {name}_{i}({x}) = {y} is out of range (target has {codomain} simplices)"
            )));
        }
    }
    Ok(())
}

/// On-disk form of a truncated simplicial set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialSetFile {
    pub height: usize,
    pub levels: Vec<LevelSpec>,
    pub faces: Vec<Vec<Vec<usize>>>,
    pub degeneracies: Vec<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSpec {
    pub count: usize,
}

/// Checks every simplicial identity whose two sides land inside the truncation.
/// Reports the first violation in the order: `d d`, `s s`, `d s`.
pub fn validate(s: &TruncatedSimplicialSet) -> CheckReport {
    const NAME: &str = "simplicial identities";
    let h = s.height();
    let mut examined = 0u64;
    let violation = |identity: String, level, simplex, lhs, rhs| Finding::SimplicialIdentity {
        identity,
        level,
        simplex,
        lhs,
        rhs,
    };

    // d_i d_j = d_{j-1} d_i, i < j
    for n in 2..=h {
        for j in 1..=n {
            for i in 0..j {
                for x in 0..s.count(n) {
                    examined += 1;
                    let lhs = s.face(n - 1, i, s.face(n, j, x));
                    let rhs = s.face(n - 1, j - 1, s.face(n, i, x));
                    if lhs != rhs {
                        let id = format!("d_{i} d_{j} = d_{} d_{i}", j - 1);
                        return CheckReport::fail(NAME, examined, violation(id, n, x, lhs, rhs));
                    }
                }
            }
        }
    }

    // s_i s_j = s_{j+1} s_i, i <= j
    for n in 0..h.saturating_sub(1) {
        for j in 0..=n {
            for i in 0..=j {
                for x in 0..s.count(n) {
                    examined += 1;
                    let lhs = s.degeneracy(n + 1, i, s.degeneracy(n, j, x));
                    let rhs = s.degeneracy(n + 1, j + 1, s.degeneracy(n, i, x));
                    if lhs != rhs {
                        let id = format!("s_{i} s_{j} = s_{} s_{i}", j + 1);
                        return CheckReport::fail(NAME, examined, violation(id, n, x, lhs, rhs));
                    }
                }
            }
        }
    }

    // d_i s_j on level n, landing back in level n
    for n in 0..h {
        for j in 0..=n {
            for i in 0..=n + 1 {
                for x in 0..s.count(n) {
                    let sx = s.degeneracy(n, j, x);
                    let lhs = s.face(n + 1, i, sx);
                    let (rhs, id) = if i < j {
                        if n == 0 {
                            continue;
                        }
                        (
                            s.degeneracy(n - 1, j - 1, s.face(n, i, x)),
                            format!("d_{i} s_{j} = s_{} d_{i}", j - 1),
                        )
                    } else if i == j || i == j + 1 {
                        (x, format!("d_{i} s_{j} = id"))
                    } else {
                        if n == 0 {
                            continue;
                        }
                        (
                            s.degeneracy(n - 1, j, s.face(n, i - 1, x)),
                            format!("d_{i} s_{j} = s_{j} d_{}", i - 1),
                        )
                    };
                    examined += 1;
                    if lhs != rhs {
                        return CheckReport::fail(NAME, examined, violation(id, n, x, lhs, rhs));
                    }
                }
            }
        }
    }
    CheckReport::pass(NAME, examined)
}

/// Assembles a simplicial set from sorted, deduplicated levels of keys and
/// key-level face and degeneracy operators. Identifiers follow key order.
///
/// `face(n, key, i)` is `d_i` of a level-`n` key, `degeneracy(n, key, j)` is `s_j`.
pub fn assemble<K, F, D>(
    mut levels: Vec<Vec<K>>,
    face: F,
    degeneracy: D,
) -> Result<TruncatedSimplicialSet>
where
    K: Ord + std::fmt::Debug,
    F: Fn(usize, &K, usize) -> K,
    D: Fn(usize, &K, usize) -> K,
{
    for level in &mut levels {
        level.sort();
        level.dedup();
    }
    let lookup = |level: &[K], key: &K, what: &str| -> Result<usize> {
        level
            .binary_search(key)
            .map_err(|_| Error::Structural(format!("{what} produced {key:?}, which is not a simplex")))
    };
    let height = levels.len() - 1;
    let mut faces = vec![Vec::new()];
    for n in 1..=height {
        let mut level_faces = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let table = levels[n]
                .iter()
                .map(|k| lookup(&levels[n - 1], &face(n, k, i), "face"))
                .collect::<Result<Vec<_>>>()?;
            level_faces.push(table);
        }
        faces.push(level_faces);
    }
    let mut degeneracies = Vec::with_capacity(height);
    for n in 0..height {
        let mut level_degs = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let table = levels[n]
                .iter()
                .map(|k| lookup(&levels[n + 1], &degeneracy(n, k, j), "degeneracy"))
                .collect::<Result<Vec<_>>>()?;
            level_degs.push(table);
        }
        degeneracies.push(level_degs);
    }
    TruncatedSimplicialSet::from_tables(levels.iter().map(Vec::len).collect(), faces, degeneracies)
}

/// Monotone maps `[0,n] -> [0,k]` as nondecreasing sequences, in lexicographic order.
fn monotone_sequences(len: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, len: usize, k: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        let lo = prefix.last().copied().unwrap_or(0);
        for v in lo..=k {
            prefix.push(v);
            go(prefix, len, k, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(len), len, k, &mut out);
    out
}

/// The standard simplex `Delta[k]` truncated at `height`.
pub fn standard_simplex(k: usize, height: usize) -> TruncatedSimplicialSet {
    let levels = (0..=height).map(|n| monotone_sequences(n + 1, k)).collect();
    assemble(
        levels,
        |_, seq: &Vec<usize>, i| {
            let mut v = seq.clone();
            v.remove(i);
            v
        },
        |_, seq, j| {
            let mut v = seq.clone();
            v.insert(j, seq[j]);
            v
        },
    )
    .expect("standard simplex is closed under faces and degeneracies")
}

/// The terminal simplicial set: one simplex per level.
pub fn point(height: usize) -> TruncatedSimplicialSet {
    standard_simplex(0, height)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Verdict;

    #[test]
    fn point_has_singleton_levels() {
        let s = standard_simplex(0, 3);
        assert_eq!(s.counts(), &[1, 1, 1, 1]);
        assert!(validate(&s).is_pass());
    }

    #[test]
    fn interval_levels() {
        let s = standard_simplex(1, 1);
        assert_eq!(s.counts(), &[2, 3]);
        assert_eq!(s.nondegenerate(1).len(), 1);
    }

    #[test]
    fn triangle_has_one_nondegenerate_top_simplex() {
        let s = standard_simplex(2, 2);
        assert!(validate(&s).is_pass());
        let nd = s.nondegenerate(2);
        assert_eq!(nd.len(), 1);
        // the identity map [0,1,2] is the only strictly increasing sequence
        let seqs = monotone_sequences(3, 2);
        assert_eq!(seqs[nd[0]], vec![0, 1, 2]);
    }

    #[test]
    fn level_counts_match_binomials() {
        fn binom(n: usize, k: usize) -> usize {
            (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
        }
        for k in 0..4 {
            let s = standard_simplex(k, 4);
            for n in 0..=4 {
                assert_eq!(s.count(n), binom(n + k + 1, k));
            }
            assert!(validate(&s).is_pass());
        }
    }

    #[test]
    fn swapped_faces_on_degenerate_simplex_fail_validation() {
        let s = standard_simplex(1, 1);
        // vertex 0; s_0(0) = [0,0]
        let deg = s.degeneracy(0, 0, 0);
        let mut faces = s.faces.clone();
        faces[1][0][deg] = 1;
        let broken =
            TruncatedSimplicialSet::from_tables(s.counts.clone(), faces, s.degeneracies.clone())
                .unwrap();
        let report = validate(&broken);
        assert_eq!(report.verdict, Verdict::Fail);
        match report.counterexample {
            Some(Finding::SimplicialIdentity { identity, .. }) => {
                assert_eq!(identity, "d_0 s_0 = id")
            }
            other => panic!("unexpected finding {other:?}"),
        }
    }

    #[test]
    fn out_of_range_target_is_structural() {
        let err = TruncatedSimplicialSet::from_tables(
            vec![1, 1],
            vec![vec![], vec![vec![0], vec![3]]],
            vec![vec![vec![0]]],
        )
        .unwrap_err();
        assert!(matches!(err, Error::Structural(_)));
    }

    #[test]
    fn file_form_round_trips() {
        let s = standard_simplex(2, 3);
        let back = TruncatedSimplicialSet::from_file(s.to_file()).unwrap();
        assert_eq!(s, back);
    }
}
