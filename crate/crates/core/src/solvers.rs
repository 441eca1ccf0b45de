//! Constructive rhombus fillers for `K(G,2)` over abelian groups and for
//! `K(Z+,2)` by solving over the integers and shifting.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indexing::{Pairs, Triples};
use crate::km2::{instance_is_valid, verify_instance, violated_equations, BCInstance, BCWitness, KM2Cochain};
use crate::monoid::{AbelianGroup, Integers, NonNegIntegers};

/// Fills a valid instance over an abelian group.
///
/// Let `r` be the least index outside `{p, q}`. The unknown on the triple
/// `{r, p, q}` is set to zero and every other unknown is read off the single
/// equation tying it to that one. The result is replayed against all
/// equations before it is returned.
pub fn solve_abelian<G: AbelianGroup>(g: &G, inst: &BCInstance<G::Elem>) -> Result<BCWitness<G::Elem>> {
    if !instance_is_valid(g, inst) {
        return Err(Error::InvalidInput("instance violates the cocycle identity".into()));
    }
    let (n, p, q) = (inst.n, inst.p, inst.q);
    let t = Triples::new(n);
    let a = |i, j, k| inst.get(&t, i, j, k);
    let zero = g.unit();
    let r = (0..=n).find(|r| *r != p && *r != q).expect("n >= 2 leaves an index outside {p, q}");

    let mut w = BCWitness {
        x: vec![zero; p],
        y: vec![zero; q - p - 1],
        z: vec![zero; n - q],
    };
    if r < p {
        // r = 0, pivot x_{0pq}
        let x0 = zero;
        w.x[0] = x0;
        for i in 1..p {
            // (1) at (0, i): x_{0pq} + a_{0ip} = a_{0iq} + x_{ipq}
            w.x[i] = g.sub(g.op(x0, a(0, i, p)), a(0, i, q));
        }
        for j in p + 1..q {
            // (4) at (0, j): x_{0pq} + y_{pjq} = a_{0jq} + a_{0pj}
            w.y[j - p - 1] = g.sub(g.op(a(0, j, q), a(0, p, j)), x0);
        }
        for k in q + 1..=n {
            // (5) at (0, k): a_{0qk} + x_{0pq} = a_{0pk} + z_{pqk}
            w.z[k - q - 1] = g.sub(g.op(a(0, q, k), x0), a(0, p, k));
        }
    } else if r < q {
        // pivot y_{prq}
        let yr = zero;
        w.y[r - p - 1] = yr;
        for j in r + 1..q {
            // (2) at (r, j): y_{pjq} + a_{prj} = y_{prq} + a_{rjq}
            w.y[j - p - 1] = g.sub(g.op(yr, a(r, j, q)), a(p, r, j));
        }
        for k in q + 1..=n {
            // (6) at (r, k): z_{pqk} + y_{prq} = a_{prk} + a_{rqk}
            w.z[k - q - 1] = g.sub(g.op(a(p, r, k), a(r, q, k)), yr);
        }
    } else {
        // pivot z_{pqr}
        let zr = zero;
        w.z[r - q - 1] = zr;
        for k in r + 1..=n {
            // (3) at (r, k): a_{prk} + z_{pqr} = z_{pqk} + a_{qrk}
            w.z[k - q - 1] = g.sub(g.op(a(p, r, k), zr), a(q, r, k));
        }
    }
    let bad = violated_equations(g, inst, &w);
    if !bad.is_empty() {
        return Err(Error::Verification(format!(
            "pivot witness violates {}",
            bad.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
        )));
    }
    Ok(w)
}

/// A nonnegative filler and the shift that produced it from the integer one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZPlusSolution {
    pub witness: BCWitness<i64>,
    pub shift: i64,
    pub integer_witness: BCWitness<i64>,
}

/// Fills a valid instance over the nonnegative integers: solve over the
/// integers, then move `A` from `y` onto `x` and `z` with the least `A` that
/// makes every `x + A` and `z + A` nonnegative while keeping `y - A >= 0`.
/// With no `x` or `z` unknowns, `A = min(0, min y)`.
pub fn solve_zplus(inst: &BCInstance<i64>) -> Result<ZPlusSolution> {
    if let Some((i, j, k, v)) = inst.records().into_iter().find(|r| r.3 < 0) {
        return Err(Error::InvalidInput(format!("negative entry a_{{{i}{j}{k}}} = {v}")));
    }
    let integer_witness = solve_abelian(&Integers, inst)?;
    let lower = integer_witness.x.iter().chain(&integer_witness.z).map(|v| -v).max();
    let upper = integer_witness.y.iter().copied().min();
    let shift = match (lower, upper) {
        (Some(lo), Some(hi)) if lo > hi => {
            return Err(Error::InvalidInput(format!(
                "no nonnegative witness: shift would need {lo} <= A <= {hi}"
            )))
        }
        (Some(lo), _) => lo,
        (None, Some(hi)) => hi.min(0),
        (None, None) => 0,
    };
    let witness = BCWitness {
        x: integer_witness.x.iter().map(|v| v + shift).collect(),
        y: integer_witness.y.iter().map(|v| v - shift).collect(),
        z: integer_witness.z.iter().map(|v| v + shift).collect(),
    };
    let nonneg = witness.unknowns().iter().all(|&v| NonNegIntegers.contains(v));
    if !nonneg || !verify_instance(&NonNegIntegers, inst, &witness) {
        return Err(Error::Verification(format!(
            "shifted witness {witness:?} (A = {shift}) does not fill the instance"
        )));
    }
    Ok(ZPlusSolution { witness, shift, integer_witness })
}

/// Carriers for generated instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum GenCarrier {
    Integers,
    NonNegIntegers,
    /// `Z/m`, entries are residues `0..m`.
    Cyclic(u32),
}

impl fmt::Display for GenCarrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenCarrier::Integers => f.write_str("z"),
            GenCarrier::NonNegIntegers => f.write_str("zplus"),
            GenCarrier::Cyclic(m) => write!(f, "z/{m}"),
        }
    }
}

impl FromStr for GenCarrier {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "z" | "Z" | "int" => Ok(GenCarrier::Integers),
            "zplus" | "Z+" | "nat" => Ok(GenCarrier::NonNegIntegers),
            _ => s
                .strip_prefix("z/")
                .or_else(|| s.strip_prefix("Z/"))
                .and_then(|m| m.parse().ok())
                .filter(|&m: &u32| m > 0)
                .map(GenCarrier::Cyclic)
                .ok_or_else(|| Error::InvalidInput(format!("unknown carrier {s:?} (use z, zplus or z/m)"))),
        }
    }
}

impl From<GenCarrier> for String {
    fn from(c: GenCarrier) -> String {
        c.to_string()
    }
}

impl TryFrom<String> for GenCarrier {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// On-disk instance: entries are `[i, j, k, value]` for every triple not
/// containing both `p` and `q`. `carrier` is absent for monoid-indexed entries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub carrier: Option<GenCarrier>,
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub entries: Vec<[i64; 4]>,
}

impl InstanceFile {
    pub fn new(carrier: Option<GenCarrier>, inst: &BCInstance<i64>) -> Self {
        InstanceFile {
            carrier,
            n: inst.n,
            p: inst.p,
            q: inst.q,
            entries: inst.records().into_iter().map(|(i, j, k, v)| [i as i64, j as i64, k as i64, v]).collect(),
        }
    }

    pub fn instance(&self) -> Result<BCInstance<i64>> {
        let records = self
            .entries
            .iter()
            .map(|&[i, j, k, v]| {
                let idx = |x: i64| usize::try_from(x).map_err(|_| Error::InvalidInput(format!("negative index {x}")));
                Ok((idx(i)?, idx(j)?, idx(k)?, v))
            })
            .collect::<Result<Vec<_>>>()?;
        BCInstance::from_records(self.n, self.p, self.q, &records)
    }
}

/// A pseudo-random full cochain `a_{ijk} = b_{ij} + b_{jk} - b_{ik}`.
///
/// - integers: `b` uniform in `[-bound/3, bound/3]`, so `|a| <= bound`;
/// - nonnegative integers: `b` is the shortest-path metric of random edge
///   weights in `[0, bound/2]`, so `0 <= a <= bound`;
/// - `Z/m`: `b` uniform, `a` reduced mod `m`; `bound` is ignored.
pub fn gen_cochain(seed: u64, n: usize, carrier: GenCarrier, bound: i64) -> KM2Cochain<i64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = Pairs::new(n);
    let b: Vec<i64> = match carrier {
        GenCarrier::Integers => {
            let r = bound.max(0) / 3;
            (0..pairs.len()).map(|_| rng.gen_range(-r..=r)).collect()
        }
        GenCarrier::Cyclic(m) => (0..pairs.len()).map(|_| rng.gen_range(0..m as i64)).collect(),
        GenCarrier::NonNegIntegers => {
            let r = bound.max(0) / 2;
            let w = n + 1;
            let mut d = vec![0i64; w * w];
            for &[i, j] in pairs.list() {
                let v = rng.gen_range(0..=r);
                d[i * w + j] = v;
                d[j * w + i] = v;
            }
            for k in 0..w {
                for i in 0..w {
                    for j in 0..w {
                        let via = d[i * w + k] + d[k * w + j];
                        if via < d[i * w + j] {
                            d[i * w + j] = via;
                        }
                    }
                }
            }
            pairs.list().iter().map(|&[i, j]| d[i * w + j]).collect()
        }
    };
    let bb = |i, j| b[pairs.index(i, j)];
    let entries = Triples::new(n)
        .list()
        .iter()
        .map(|&[i, j, k]| {
            let v = bb(i, j) + bb(j, k) - bb(i, k);
            match carrier {
                GenCarrier::Cyclic(m) => v.rem_euclid(m as i64),
                _ => v,
            }
        })
        .collect();
    KM2Cochain { n, entries }
}

/// [`gen_cochain`] restricted to the rhombus `(p, q)`.
pub fn gen_instance(seed: u64, n: usize, p: usize, q: usize, carrier: GenCarrier, bound: i64) -> Result<BCInstance<i64>> {
    BCInstance::restrict(&gen_cochain(seed, n, carrier, bound), p, q)
}

/// Seed of trial `t` at condition `(n, p, q)` in a batch seeded by `seed`.
pub fn trial_seed(seed: u64, n: usize, p: usize, q: usize, t: u64) -> u64 {
    let tag = ((n as u64) << 48) | ((p as u64) << 40) | ((q as u64) << 32);
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ tag ^ t
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchFailure {
    pub seed: u64,
    pub instance: BCInstance<i64>,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchReport {
    pub carrier: GenCarrier,
    pub seed: u64,
    pub trials_per_condition: u64,
    pub attempted: u64,
    pub solved: u64,
    pub failures: Vec<BatchFailure>,
}

/// Generates `trials` instances per `(n, p, q)` with `n` in `dims` and solves
/// each with the carrier's solver (nonnegative shift for `zplus`, pivot
/// otherwise). Every solution is replayed.
pub fn run_batch(
    carrier: GenCarrier,
    dims: std::ops::RangeInclusive<usize>,
    trials: u64,
    seed: u64,
    bound: i64,
) -> BatchReport {
    let mut report = BatchReport {
        carrier,
        seed,
        trials_per_condition: trials,
        attempted: 0,
        solved: 0,
        failures: Vec::new(),
    };
    for n in dims {
        for p in 0..n {
            for q in p + 1..=n {
                for t in 0..trials {
                    let s = trial_seed(seed, n, p, q, t);
                    let inst = gen_instance(s, n, p, q, carrier, bound).expect("valid shape");
                    report.attempted += 1;
                    match solve_generated(carrier, &inst) {
                        Ok(()) => report.solved += 1,
                        Err(e) => report.failures.push(BatchFailure { seed: s, instance: inst, error: e.to_string() }),
                    }
                }
            }
        }
    }
    report
}

fn solve_generated(carrier: GenCarrier, inst: &BCInstance<i64>) -> Result<()> {
    match carrier {
        GenCarrier::NonNegIntegers => solve_zplus(inst).map(|_| ()),
        GenCarrier::Integers => solve_abelian(&Integers, inst).map(|_| ()),
        GenCarrier::Cyclic(m) => {
            let g = crate::monoid::FiniteGroup::cyclic(m as usize);
            solve_abelian(&g, &inst.map(|v| v as usize)).map(|_| ())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::km2::is_cocycle;
    use crate::monoid::{Carrier, FiniteGroup};

    fn zero_instance(n: usize, p: usize, q: usize) -> BCInstance<i64> {
        BCInstance::restrict(&KM2Cochain { n, entries: vec![0; Triples::new(n).len()] }, p, q).unwrap()
    }

    #[test]
    fn zero_instance_gives_zero_witness() {
        for n in 2..=6 {
            for q in 1..=n {
                for p in 0..q {
                    let inst = zero_instance(n, p, q);
                    let w = solve_abelian(&Integers, &inst).unwrap();
                    assert!(w.unknowns().iter().all(|&v| v == 0));
                    let s = solve_zplus(&inst).unwrap();
                    assert_eq!(s.shift, 0);
                    assert!(s.witness.unknowns().iter().all(|&v| v == 0));
                }
            }
        }
    }

    #[test]
    fn generated_cochains_are_cocycles_in_range() {
        for seed in 0..50 {
            for n in 2..=8 {
                let c = gen_cochain(seed, n, GenCarrier::NonNegIntegers, 9);
                assert!(is_cocycle(&Integers, &c));
                assert!(c.entries.iter().all(|&v| (0..=9).contains(&v)));
                let c = gen_cochain(seed, n, GenCarrier::Integers, 5);
                assert!(is_cocycle(&Integers, &c));
                assert!(c.entries.iter().all(|&v| (-5..=5).contains(&v)));
                let c = gen_cochain(seed, n, GenCarrier::Cyclic(3), 0);
                let g = FiniteGroup::cyclic(3);
                let cu = KM2Cochain { n, entries: c.entries.iter().map(|&v| v as usize).collect() };
                assert!(is_cocycle(&g, &cu));
            }
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let a = gen_instance(7, 6, 1, 4, GenCarrier::NonNegIntegers, 9).unwrap();
        let b = gen_instance(7, 6, 1, 4, GenCarrier::NonNegIntegers, 9).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, gen_instance(8, 6, 1, 4, GenCarrier::NonNegIntegers, 9).unwrap());
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        let mut inst = zero_instance(4, 0, 1);
        let slot = inst.entries.iter().position(Option::is_some).unwrap();
        inst.entries[slot] = Some(1);
        assert!(matches!(solve_abelian(&Integers, &inst), Err(Error::InvalidInput(_))));
        let mut neg = zero_instance(4, 0, 1);
        neg.entries[slot] = Some(-1);
        assert!(matches!(solve_zplus(&neg), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn adjacent_rhombus_shift() {
        // q = p + 1: no y unknowns, A = max(0, -min x, -min z)
        for seed in 0..200 {
            for (n, p) in [(5, 0), (5, 2), (6, 3), (8, 7)] {
                let inst = gen_instance(seed, n, p, p + 1, GenCarrier::NonNegIntegers, 9).unwrap();
                let s = solve_zplus(&inst).unwrap();
                let iw = &s.integer_witness;
                let min = iw.x.iter().chain(&iw.z).copied().min().unwrap();
                assert_eq!(s.shift, 0i64.max(-min));
                assert!(s.witness.unknowns().iter().all(|&v| v >= 0));
            }
        }
    }

    #[test]
    fn carrier_names_round_trip() {
        for c in [GenCarrier::Integers, GenCarrier::NonNegIntegers, GenCarrier::Cyclic(6)] {
            assert_eq!(c.to_string().parse::<GenCarrier>().unwrap(), c);
        }
        assert!("q".parse::<GenCarrier>().is_err());
        assert!("z/0".parse::<GenCarrier>().is_err());
    }

    #[test]
    fn instance_file_round_trip() {
        let inst = gen_instance(3, 5, 0, 3, GenCarrier::Integers, 6).unwrap();
        let f = InstanceFile::new(Some(GenCarrier::Integers), &inst);
        let json = serde_json::to_string(&f).unwrap();
        assert!(json.contains("\"carrier\":\"z\""));
        let back: InstanceFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back.instance().unwrap(), inst);
    }

    #[test]
    fn integers_op_is_addition() {
        assert_eq!(Integers.op(2, -5), -3);
        assert_eq!(NonNegIntegers.first_non_invertible(), 1);
    }
}
