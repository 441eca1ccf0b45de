use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::TruncatedSimplicialSet;
use crate::error::{Error, Result};
use crate::report::{
    bc_name, kan_name, AggregateReport, Budget, CheckReport, Filler, Finding, HornProblem,
    RhombusProblem, Sample, Verdict,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMode {
    Kan,
    Bc,
    Both,
}

fn require_levels(s: &TruncatedSimplicialSet, n: usize, lowest: usize, needed: &str) -> Result<()> {
    if n < lowest || n > s.height() {
        return Err(Error::LevelOutOfRange {
            level: n,
            height: s.height(),
            needed: needed.into(),
        });
    }
    Ok(())
}

/// `by_face[v]`: simplices `c` of level `n` with `d_i c = v`, ascending.
fn fibres(s: &TruncatedSimplicialSet, n: usize, i: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); s.count(n - 1)];
    for (c, &v) in s.face_table(n, i).iter().enumerate() {
        out[v].push(c);
    }
    out
}

enum Scan {
    Done,
    Counterexample(Vec<Option<usize>>),
    OutOfBudget,
}

struct HornScan<'a> {
    s: &'a TruncatedSimplicialSet,
    n: usize,
    p: usize,
    positions: Vec<usize>,
    fibres: Vec<Vec<Vec<usize>>>,
    fillers: HashMap<Vec<usize>, usize>,
    faces: Vec<Option<usize>>,
    examined: u64,
    budget: u64,
    sample: Option<Sample>,
}

impl HornScan<'_> {
    fn run(&mut self, depth: usize) -> Scan {
        if depth == self.positions.len() {
            if self.examined >= self.budget {
                return Scan::OutOfBudget;
            }
            self.examined += 1;
            let key: Vec<usize> = self.faces.iter().flatten().copied().collect();
            return match self.fillers.get(&key) {
                Some(&x) => {
                    if self.sample.is_none() {
                        self.sample = Some(Sample {
                            problem: Finding::Horn(HornProblem {
                                n: self.n,
                                p: self.p,
                                faces: self.faces.clone(),
                            }),
                            filler: Filler::Simplex { id: x },
                        });
                    }
                    Scan::Done
                }
                None => Scan::Counterexample(self.faces.clone()),
            };
        }
        let i = self.positions[depth];
        let n = self.n;
        let earlier: Vec<usize> = self.positions[..depth].to_vec();
        let candidates: Vec<usize> = match earlier.first() {
            // d_j(c_i) = d_{i-1}(c_j) for the first earlier j
            Some(&j) if n >= 2 => {
                let cj = self.faces[j].unwrap();
                self.fibres[j][self.s.face(n - 1, i - 1, cj)].clone()
            }
            _ => (0..self.s.count(n - 1)).collect(),
        };
        'cand: for c in candidates {
            if n >= 2 {
                for &j in earlier.iter().skip(1) {
                    let cj = self.faces[j].unwrap();
                    if self.s.face(n - 1, j, c) != self.s.face(n - 1, i - 1, cj) {
                        continue 'cand;
                    }
                }
            }
            self.faces[i] = Some(c);
            match self.run(depth + 1) {
                Scan::Done => {}
                other => return other,
            }
        }
        self.faces[i] = None;
        Scan::Done
    }
}

/// Decides `Kan_p[n]` by enumerating every horn in lexicographic order of
/// its face identifiers.
pub fn check_kan(
    s: &TruncatedSimplicialSet,
    n: usize,
    p: usize,
    budget: Budget,
) -> Result<CheckReport> {
    require_levels(s, n, 1, "n and n-1, n >= 1")?;
    if p > n {
        return Err(Error::InvalidIndices(format!("horn index {p} exceeds n = {n}")));
    }
    let positions: Vec<usize> = (0..=n).filter(|&i| i != p).collect();
    let mut fillers = HashMap::new();
    for x in 0..s.count(n) {
        let key: Vec<usize> = positions.iter().map(|&i| s.face(n, i, x)).collect();
        fillers.entry(key).or_insert(x);
    }
    let fib = if n >= 2 {
        (0..n).map(|j| fibres(s, n - 1, j)).collect()
    } else {
        Vec::new()
    };
    let mut scan = HornScan {
        s,
        n,
        p,
        positions,
        fibres: fib,
        fillers,
        faces: vec![None; n + 1],
        examined: 0,
        budget: budget.0,
        sample: None,
    };
    let name = kan_name(n, p);
    Ok(match scan.run(0) {
        Scan::Done => CheckReport::pass(name, scan.examined).with_sample(scan.sample),
        Scan::OutOfBudget => CheckReport::inconclusive(name, scan.examined),
        Scan::Counterexample(faces) => {
            CheckReport::fail(name, scan.examined, Finding::Horn(HornProblem { n, p, faces }))
                .with_sample(scan.sample)
        }
    })
}

fn check_bc_indices(s: &TruncatedSimplicialSet, n: usize, p: usize, q: usize) -> Result<()> {
    require_levels(s, n, 2, "n, n-1 and n-2, n >= 2")?;
    if !(p < q && q <= n) {
        return Err(Error::InvalidIndices(format!(
            "need 0 <= p < q <= n, got p = {p}, q = {q}, n = {n}"
        )));
    }
    Ok(())
}

/// Decides `BC_{p,q}[n]`: every pair `(c_p, c_q)` with `d_p c_q = d_{q-1} c_p`
/// must be `(d_p x, d_q x)` for some `x`. Pairs are scanned in lexicographic order.
pub fn check_bc(
    s: &TruncatedSimplicialSet,
    n: usize,
    p: usize,
    q: usize,
    budget: Budget,
) -> Result<CheckReport> {
    check_bc_indices(s, n, p, q)?;
    let name = bc_name(n, p, q);
    let mut fillers = HashMap::new();
    for x in 0..s.count(n) {
        fillers
            .entry((s.face(n, p, x), s.face(n, q, x)))
            .or_insert(x);
    }
    let by_dp = fibres(s, n - 1, p);
    let mut examined = 0u64;
    let mut sample = None;
    for c_p in 0..s.count(n - 1) {
        let v = s.face(n - 1, q - 1, c_p);
        for &c_q in &by_dp[v] {
            if examined >= budget.0 {
                return Ok(CheckReport::inconclusive(name, examined));
            }
            examined += 1;
            let problem = RhombusProblem { n, p, q, c_p, c_q };
            match fillers.get(&(c_p, c_q)) {
                Some(&x) => {
                    if sample.is_none() {
                        sample = Some(Sample {
                            problem: Finding::Rhombus(problem),
                            filler: Filler::Simplex { id: x },
                        });
                    }
                }
                None => {
                    return Ok(CheckReport::fail(name, examined, Finding::Rhombus(problem))
                        .with_sample(sample))
                }
            }
        }
    }
    Ok(CheckReport::pass(name, examined).with_sample(sample))
}

/// The same condition phrased as surjectivity of `(d_p, d_q): S_n -> P` onto the
/// pullback `P = S_{n-1} x_{S_{n-2}} S_{n-1}` of `d_{q-1}` and `d_p`.
///
/// Works fibrewise over `S_{n-2}`: the image is counted per fibre and compared
/// with the fibre's product size. Pairs are only listed when a fibre comes up
/// short, to name the first missing one.
pub fn check_weak_pullback(
    s: &TruncatedSimplicialSet,
    n: usize,
    p: usize,
    q: usize,
    budget: Budget,
) -> Result<CheckReport> {
    check_bc_indices(s, n, p, q)?;
    let name = format!("weak pullback {}", bc_name(n, p, q));
    let base = s.count(n - 2);
    // A_z = {a : d_{q-1} a = z}, B_z = {b : d_p b = z}
    let a_fib = fibres(s, n - 1, q - 1);
    let b_fib = fibres(s, n - 1, p);
    let pullback_size: u64 = (0..base)
        .map(|z| a_fib[z].len() as u64 * b_fib[z].len() as u64)
        .sum();
    if pullback_size > budget.0 {
        return Ok(CheckReport::inconclusive(name, 0));
    }
    let mut image: Vec<Vec<(usize, usize)>> = vec![Vec::new(); base];
    for x in 0..s.count(n) {
        let a = s.face(n, p, x);
        let b = s.face(n, q, x);
        let za = s.face(n - 1, q - 1, a);
        if s.face(n - 1, p, b) == za {
            image[za].push((a, b));
        }
    }
    let mut short = Vec::new();
    for z in 0..base {
        image[z].sort_unstable();
        image[z].dedup();
        if (image[z].len() as u64) < a_fib[z].len() as u64 * b_fib[z].len() as u64 {
            short.push(z);
        }
    }
    if short.is_empty() {
        return Ok(CheckReport::pass(name, pullback_size));
    }
    // first missing pair in (a, b) lexicographic order, over all deficient fibres
    let mut missing = None;
    for &z in &short {
        'fibre: for &a in &a_fib[z] {
            for &b in &b_fib[z] {
                if image[z].binary_search(&(a, b)).is_err() {
                    if missing.is_none_or(|m| (a, b) < m) {
                        missing = Some((a, b));
                    }
                    break 'fibre;
                }
            }
        }
    }
    let (c_p, c_q) = missing.expect("a deficient fibre has a missing pair");
    Ok(CheckReport::fail(
        name,
        pullback_size,
        Finding::Rhombus(RhombusProblem { n, p, q, c_p, c_q }),
    ))
}

/// Runs every applicable condition up to `max_level`: `Kan_p[n]` for
/// `1 <= n`, `BC_{p,q}[n]` for `2 <= n`.
pub fn check_all(
    s: &TruncatedSimplicialSet,
    max_level: usize,
    mode: CheckMode,
    budget: Budget,
) -> Result<AggregateReport> {
    if max_level > s.height() {
        return Err(Error::LevelOutOfRange {
            level: max_level,
            height: s.height(),
            needed: "all levels up to max_level".into(),
        });
    }
    let mut reports = Vec::new();
    let mut kan = None;
    let mut bc = None;
    if matches!(mode, CheckMode::Kan | CheckMode::Both) {
        let mut v = Verdict::Pass;
        for n in 1..=max_level {
            for p in 0..=n {
                let r = check_kan(s, n, p, budget)?;
                v = v.and(r.verdict);
                reports.push(r);
            }
        }
        kan = Some(v);
    }
    if matches!(mode, CheckMode::Bc | CheckMode::Both) {
        let mut v = Verdict::Pass;
        for n in 2..=max_level {
            for q in 1..=n {
                for p in 0..q {
                    let r = check_bc(s, n, p, q, budget)?;
                    v = v.and(r.verdict);
                    reports.push(r);
                }
            }
        }
        bc = Some(v);
    }
    Ok(AggregateReport { kan, bc, reports })
}

/// Searches for an `n`-simplex filling `horn` (replay of a reported counterexample).
pub fn find_horn_filler(s: &TruncatedSimplicialSet, horn: &HornProblem) -> Option<usize> {
    (0..s.count(horn.n)).find(|&x| {
        horn.faces
            .iter()
            .enumerate()
            .all(|(i, c)| c.is_none_or(|c| s.face(horn.n, i, x) == c))
    })
}

/// Searches for an `n`-simplex filling `rhombus`.
pub fn find_rhombus_filler(s: &TruncatedSimplicialSet, r: &RhombusProblem) -> Option<usize> {
    (0..s.count(r.n)).find(|&x| s.face(r.n, r.p, x) == r.c_p && s.face(r.n, r.q, x) == r.c_q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{point, standard_simplex};

    #[test]
    fn empty_lower_level_passes_vacuously() {
        let s = TruncatedSimplicialSet::from_tables(
            vec![0, 0, 0],
            vec![vec![], vec![vec![], vec![]], vec![vec![], vec![], vec![]]],
            vec![vec![vec![]], vec![vec![], vec![]]],
        )
        .unwrap();
        let r = check_bc(&s, 2, 0, 1, Budget::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.instances_examined, 0);
        assert!(check_kan(&s, 2, 1, Budget::default()).unwrap().is_pass());
    }

    #[test]
    fn point_passes_everything() {
        let s = point(4);
        let all = check_all(&s, 4, CheckMode::Both, Budget::default()).unwrap();
        assert_eq!(all.verdict(), Verdict::Pass);
        for n in 2..=4 {
            for q in 1..=n {
                for p in 0..q {
                    assert!(check_weak_pullback(&s, n, p, q, Budget::default())
                        .unwrap()
                        .is_pass());
                }
            }
        }
    }

    #[test]
    fn above_height_is_rejected() {
        let s = standard_simplex(1, 2);
        assert!(matches!(
            check_bc(&s, 3, 0, 1, Budget::default()),
            Err(Error::LevelOutOfRange { .. })
        ));
        assert!(matches!(
            check_kan(&s, 0, 0, Budget::default()),
            Err(Error::LevelOutOfRange { .. })
        ));
        assert!(matches!(
            check_bc(&s, 2, 1, 1, Budget::default()),
            Err(Error::InvalidIndices(_))
        ));
    }

    #[test]
    fn interval_is_not_kan_in_dimension_two() {
        // Delta[1]: the horn (c_1 = [0,1], c_2 = [1,1]) has no filler for p = 0
        let s = standard_simplex(1, 2);
        let r = check_kan(&s, 2, 0, Budget::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        let Some(Finding::Horn(h)) = &r.counterexample else { panic!() };
        assert_eq!(find_horn_filler(&s, h), None);
        assert!(check_kan(&s, 2, 1, Budget::default()).unwrap().is_pass());
    }

    #[test]
    fn budget_exhaustion_is_inconclusive() {
        let s = standard_simplex(2, 3);
        let r = check_bc(&s, 3, 0, 1, Budget(3)).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert_eq!(r.instances_examined, 3);
        let r = check_kan(&s, 3, 1, Budget(2)).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }
}
