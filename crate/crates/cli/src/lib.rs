//! Command-line front end: argument types, file loading, report rendering and
//! exit statuses. [`run`] does all the work so it can be driven from tests.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use rhombus::category::{corollary_check, nerve, validate_category, CategoryFile, CorollaryReport, FiniteCategory};
use rhombus::km2::{
    bc_check_km2, binary_obstruction, binding_equations, build_a, build_z, count_witnesses, find_witness,
    instance_is_valid, km2_truncation, monoid_search, BCInstance, BCWitness, ClassificationRow,
};
use rhombus::monoid::{is_cancellative, is_group, validate_monoid, FiniteGroup, Integers, Monoid, MonoidFile, NonNegIntegers};
use rhombus::report::AggregateReport;
use rhombus::simplicial::{check_all, check_bc, check_kan, check_weak_pullback, validate, CheckMode, SimplicialSetFile};
use rhombus::solvers::{gen_instance, run_batch, solve_abelian, solve_zplus, BatchReport, GenCarrier, InstanceFile};
use rhombus::twocat::{bc_check_duskin, duskin_nerve, kan_criterion, validate_2category, Finite2Category, KanCriterion, TwoCategoryFile};
use rhombus::{Budget, CheckReport, Error, Result, TruncatedSimplicialSet, Verdict};

#[derive(Debug, Parser)]
#[command(name = "rhombus", version, about = "Kan and Beck-Chevalley conditions on finite simplicial sets")]
pub struct Cli {
    /// Cap on instances examined per condition.
    #[arg(long, global = true, default_value_t = 10_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Kan,
    Bc,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Example {
    Example1,
    Example2,
}

#[derive(Debug, Args)]
pub struct Rhombus {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: usize,
    #[arg(long)]
    pub q: usize,
}

#[derive(Debug, Subcommand)]
pub enum Verb {
    /// Check the simplicial identities of a simplicial-set file.
    ValidateSset {
        #[arg(long)]
        sset: PathBuf,
    },
    /// Decide Kan_p[n].
    CheckKan {
        #[arg(long)]
        sset: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
    },
    /// Decide BC_{p,q}[n].
    CheckBc {
        #[arg(long)]
        sset: PathBuf,
        #[command(flatten)]
        rhombus: Rhombus,
        /// Decide via surjectivity onto the pullback instead.
        #[arg(long)]
        weak_pullback: bool,
    },
    /// Run every Kan and/or BC condition up to a level.
    CheckAll {
        #[arg(long)]
        sset: PathBuf,
        #[arg(long)]
        max_dim: Option<usize>,
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
    },
    ValidateCat {
        #[arg(long)]
        cat: PathBuf,
    },
    /// Emit the nerve of a category as a simplicial-set file.
    Nerve {
        #[arg(long)]
        cat: PathBuf,
        #[arg(long)]
        height: usize,
    },
    /// Compare groupoid-ness with the Kan and BC verdicts of the nerve.
    CorollaryCheck {
        #[arg(long)]
        cat: PathBuf,
        #[arg(long)]
        height: usize,
    },
    #[command(name = "validate-2cat")]
    Validate2Cat {
        #[arg(long)]
        twocat: PathBuf,
    },
    /// Emit the Duskin nerve of a 2-category as a simplicial-set file.
    DuskinNerve {
        #[arg(long)]
        twocat: PathBuf,
        #[arg(long)]
        height: usize,
    },
    /// Invertibility of 2-cells and 1-cells, predicting the Kan verdict.
    KanCriterion {
        #[arg(long)]
        twocat: PathBuf,
    },
    /// Decide BC_{p,q}[n] on 2-categorical data.
    #[command(name = "bc-2cat")]
    Bc2Cat {
        #[arg(long)]
        twocat: PathBuf,
        #[command(flatten)]
        rhombus: Rhombus,
    },
    ValidateMonoid {
        #[arg(long)]
        monoid: PathBuf,
    },
    /// Emit the truncation of K(M,2) as a simplicial-set file.
    Km2 {
        #[arg(long)]
        monoid: PathBuf,
        #[arg(long)]
        height: usize,
    },
    /// Decide BC_{p,q}[n] for K(M,2), or solve a single instance.
    BcKm2 {
        #[arg(long)]
        monoid: PathBuf,
        #[arg(long, required_unless_present = "instance")]
        n: Option<usize>,
        #[arg(long, required_unless_present = "instance")]
        p: Option<usize>,
        #[arg(long, required_unless_present = "instance")]
        q: Option<usize>,
        /// Instance file with monoid element indices as entries.
        #[arg(long, conflicts_with_all = ["n", "p", "q"])]
        instance: Option<PathBuf>,
    },
    BuildA {
        #[arg(long)]
        monoid: PathBuf,
    },
    BuildZ {
        #[arg(long)]
        monoid: PathBuf,
    },
    /// Classify commutative monoids by their rhombus verdicts.
    MonoidSearch {
        #[arg(long, default_value_t = 3)]
        max_order: usize,
        #[arg(long, default_value_t = 5)]
        max_dim: usize,
    },
    /// Fill an instance over z, zplus or z/m.
    SolveBc {
        #[arg(long)]
        carrier: Option<GenCarrier>,
        /// A file path or `gen(seed=7,n=6,p=1,q=4)`.
        #[arg(long)]
        instance: String,
        #[arg(long, default_value_t = 9)]
        bound: i64,
    },
    /// Emit generated instances.
    GenBc {
        #[arg(long, default_value = "zplus")]
        carrier: GenCarrier,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 9)]
        bound: i64,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        #[command(flatten)]
        rhombus: Rhombus,
    },
    /// Rerun one of the two worked examples.
    ReproducePaper {
        #[arg(value_enum)]
        which: Example,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 8)]
        max_dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 9)]
        bound: i64,
    },
}

/// Rendered output and exit status of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: u8,
    pub output: String,
}

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

pub fn verdict_status(v: Verdict) -> u8 {
    match v {
        Verdict::Pass => EXIT_PASS,
        Verdict::Fail => EXIT_FAIL,
        Verdict::Inconclusive => EXIT_BUDGET,
    }
}

pub fn error_status(e: &Error) -> u8 {
    match e {
        Error::BudgetExhausted { .. } => EXIT_BUDGET,
        _ => EXIT_INVALID,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    pub carrier: GenCarrier,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub instance: InstanceFile,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<BCWitness<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integer_witness: Option<BCWitness<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceReport {
    pub instance: InstanceFile,
    pub verdict: Verdict,
    pub candidates: u64,
    pub accepted: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<BCWitness<usize>>,
    pub binding_equations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidReport {
    pub validation: CheckReport,
    pub is_group: bool,
    pub is_cancellative: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenReport {
    pub carrier: GenCarrier,
    pub seed: u64,
    pub instances: Vec<InstanceFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Example1Report {
    pub verdict: Verdict,
    pub check: CheckReport,
    pub instance: InstanceFile,
    pub instance_valid: bool,
    pub candidates: u64,
    pub rejected: u64,
    pub binding_equations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Example2Report {
    pub verdict: Verdict,
    pub batch: BatchReport,
    /// An element of the nonnegative integers with no additive inverse.
    pub non_invertible: i64,
    pub kan: Verdict,
    pub summary: String,
}

fn load<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn in_file<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Structural(m) => Error::Structural(format!("{}: {m}", path.display())),
        Error::InvalidInput(m) => Error::InvalidInput(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn load_sset(path: &Path) -> Result<TruncatedSimplicialSet> {
    in_file(path, TruncatedSimplicialSet::from_file(load::<SimplicialSetFile>(path)?))
}

fn load_valid_sset(path: &Path) -> Result<TruncatedSimplicialSet> {
    let s = load_sset(path)?;
    invalid_unless(path, validate(&s))?;
    Ok(s)
}

fn invalid_unless(path: &Path, r: CheckReport) -> Result<()> {
    if r.is_pass() {
        return Ok(());
    }
    Err(Error::InvalidInput(format!(
        "{}: {} fails: {}",
        path.display(),
        r.condition,
        compact(&r.counterexample)
    )))
}

fn load_cat(path: &Path) -> Result<FiniteCategory> {
    let c = in_file(path, FiniteCategory::from_file(&load::<CategoryFile>(path)?))?;
    Ok(c)
}

fn load_2cat(path: &Path) -> Result<Finite2Category> {
    in_file(path, Finite2Category::from_file(&load::<TwoCategoryFile>(path)?))
}

fn load_valid_2cat(path: &Path) -> Result<Finite2Category> {
    let x = load_2cat(path)?;
    invalid_unless(path, validate_2category(&x))?;
    Ok(x)
}

fn load_monoid(path: &Path) -> Result<Monoid> {
    in_file(path, Monoid::from_file(&load::<MonoidFile>(path)?))
}

fn load_commutative(path: &Path) -> Result<Monoid> {
    let m = load_monoid(path)?;
    invalid_unless(path, validate_monoid(&m))?;
    Ok(m)
}

/// Parses `gen(key=value,...)` with keys `seed`, `n`, `p`, `q`, `carrier`, `bound`.
pub fn parse_gen_spec(spec: &str) -> Option<Result<GenSpec>> {
    let body = spec.trim().strip_prefix("gen(")?.strip_suffix(')')?;
    Some(GenSpec::parse(body))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenSpec {
    pub seed: u64,
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub carrier: Option<GenCarrier>,
    pub bound: Option<i64>,
}

impl GenSpec {
    fn parse(body: &str) -> Result<Self> {
        let bad = |m: String| Error::InvalidInput(format!("gen(...): {m}"));
        let mut spec = GenSpec { seed: 0, n: 0, p: 0, q: 0, carrier: None, bound: None };
        let mut seen = [false; 3];
        for part in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| bad(format!("expected key=value, got {part:?}")))?;
            let num = || v.trim().parse::<u64>().map_err(|e| bad(format!("{k}: {e}")));
            match k.trim() {
                "seed" => spec.seed = num()?,
                "n" => (spec.n, seen[0]) = (num()? as usize, true),
                "p" => (spec.p, seen[1]) = (num()? as usize, true),
                "q" => (spec.q, seen[2]) = (num()? as usize, true),
                "carrier" => spec.carrier = Some(v.trim().parse()?),
                "bound" => spec.bound = Some(v.trim().parse().map_err(|e| bad(format!("bound: {e}")))?),
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }
        if seen != [true; 3] {
            return Err(bad("n, p and q are required".into()));
        }
        Ok(spec)
    }
}

fn compact<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("reports serialize")
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn check_text(r: &CheckReport) -> String {
    let mut s = format!(
        "condition: {}\nverdict: {}\ninstances_examined: {}\n",
        r.condition, r.verdict, r.instances_examined
    );
    if let Some(c) = &r.counterexample {
        let _ = writeln!(s, "counterexample: {}", compact(c));
    }
    if let Some(w) = &r.witness_sample {
        let _ = writeln!(s, "witness_sample: {}", compact(w));
    }
    s
}

fn aggregate_text(a: &AggregateReport) -> String {
    let mut s = String::new();
    for r in &a.reports {
        let _ = writeln!(s, "{}\t{}\t{}", r.condition, r.verdict, r.instances_examined);
    }
    if let Some(k) = a.kan {
        let _ = writeln!(s, "kan: {k}");
    }
    if let Some(b) = a.bc {
        let _ = writeln!(s, "bc: {b}");
    }
    if let Some(r) = a.reports.iter().find(|r| r.verdict == Verdict::Fail) {
        let _ = writeln!(s, "first_failure: {}", r.condition);
        let _ = writeln!(s, "counterexample: {}", compact(&r.counterexample));
    }
    s
}

struct Rendered {
    status: u8,
    text: String,
    json: String,
}

fn report<T: Serialize>(status: u8, value: &T, text: String) -> Rendered {
    Rendered { status, text, json: pretty(value) }
}

fn check(r: CheckReport) -> Rendered {
    report(verdict_status(r.verdict), &r, check_text(&r))
}

/// Artifacts are emitted as their JSON file format in both output formats.
fn artifact<T: Serialize>(value: &T) -> Rendered {
    let json = pretty(value);
    Rendered { status: EXIT_PASS, text: json.clone(), json }
}

fn sset_artifact(s: &TruncatedSimplicialSet) -> Rendered {
    artifact(&s.to_file())
}

/// Executes one parsed invocation. Output is returned rather than written,
/// except that `--output` is honoured here.
pub fn run(cli: &Cli) -> Outcome {
    let budget = Budget(cli.budget);
    let rendered = match dispatch(&cli.verb, budget) {
        Ok(r) => r,
        Err(e) => {
            return Outcome { status: error_status(&e), output: format!("error: {e}\n") };
        }
    };
    let body = match cli.format {
        Format::Text => rendered.text,
        Format::Json => rendered.json,
    };
    match &cli.output {
        Some(path) => match fs::write(path, &body) {
            Ok(()) => Outcome { status: rendered.status, output: String::new() },
            Err(e) => Outcome { status: EXIT_INVALID, output: format!("error: {}: {e}\n", path.display()) },
        },
        None => Outcome { status: rendered.status, output: body },
    }
}

fn dispatch(verb: &Verb, budget: Budget) -> Result<Rendered> {
    Ok(match verb {
        Verb::ValidateSset { sset } => {
            let r = validate(&load_sset(sset)?);
            let status = if r.is_pass() { EXIT_PASS } else { EXIT_INVALID };
            report(status, &r, check_text(&r))
        }
        Verb::CheckKan { sset, n, p } => check(check_kan(&load_valid_sset(sset)?, *n, *p, budget)?),
        Verb::CheckBc { sset, rhombus: Rhombus { n, p, q }, weak_pullback } => {
            let s = load_valid_sset(sset)?;
            check(if *weak_pullback {
                check_weak_pullback(&s, *n, *p, *q, budget)?
            } else {
                check_bc(&s, *n, *p, *q, budget)?
            })
        }
        Verb::CheckAll { sset, max_dim, mode } => {
            let s = load_valid_sset(sset)?;
            let mode = match mode {
                Mode::Kan => CheckMode::Kan,
                Mode::Bc => CheckMode::Bc,
                Mode::Both => CheckMode::Both,
            };
            let a = check_all(&s, max_dim.unwrap_or(s.height()), mode, budget)?;
            report(verdict_status(a.verdict()), &a, aggregate_text(&a))
        }
        Verb::ValidateCat { cat } => {
            let r = validate_category(&load_cat(cat)?);
            let status = if r.is_pass() { EXIT_PASS } else { EXIT_INVALID };
            report(status, &r, check_text(&r))
        }
        Verb::Nerve { cat, height } => {
            let c = load_cat(cat)?;
            invalid_unless(cat, validate_category(&c))?;
            sset_artifact(&nerve(&c, *height))
        }
        Verb::CorollaryCheck { cat, height } => {
            let c = load_cat(cat)?;
            in_file(cat, corollary_check(&c, *height, budget)).map(corollary)?
        }
        Verb::Validate2Cat { twocat } => {
            let r = validate_2category(&load_2cat(twocat)?);
            let status = if r.is_pass() { EXIT_PASS } else { EXIT_INVALID };
            report(status, &r, check_text(&r))
        }
        Verb::DuskinNerve { twocat, height } => {
            sset_artifact(&duskin_nerve(&load_valid_2cat(twocat)?, *height, budget)?)
        }
        Verb::KanCriterion { twocat } => {
            let k = kan_criterion(&load_valid_2cat(twocat)?);
            let status = if k.is_kan() { EXIT_PASS } else { EXIT_FAIL };
            report(status, &k, criterion_text(&k))
        }
        Verb::Bc2Cat { twocat, rhombus: Rhombus { n, p, q } } => {
            check(bc_check_duskin(&load_valid_2cat(twocat)?, *n, *p, *q, budget)?)
        }
        Verb::ValidateMonoid { monoid } => {
            let m = load_monoid(monoid)?;
            let r = MonoidReport {
                validation: validate_monoid(&m),
                is_group: is_group(&m).is_ok(),
                is_cancellative: is_cancellative(&m).is_ok(),
            };
            let status = if r.validation.is_pass() { EXIT_PASS } else { EXIT_INVALID };
            let text = format!(
                "{}is_group: {}\nis_cancellative: {}\n",
                check_text(&r.validation),
                r.is_group,
                r.is_cancellative
            );
            report(status, &r, text)
        }
        Verb::Km2 { monoid, height } => sset_artifact(&km2_truncation(&load_commutative(monoid)?, *height, budget)?),
        Verb::BcKm2 { monoid, n, p, q, instance } => {
            let m = load_commutative(monoid)?;
            match (instance, n, p, q) {
                (Some(path), ..) => solve_monoid_instance(&m, path)?,
                (None, Some(n), Some(p), Some(q)) => check(bc_check_km2(&m, *n, *p, *q, budget)?),
                _ => return Err(Error::InvalidInput("bc-km2 needs --instance or all of --n, --p, --q".into())),
            }
        }
        Verb::BuildA { monoid } => artifact(&build_a(&load_monoid(monoid)?).0.to_file()),
        Verb::BuildZ { monoid } => artifact(&build_z(&load_monoid(monoid)?).to_file()),
        Verb::MonoidSearch { max_order, max_dim } => {
            if *max_dim < 2 {
                return Err(Error::InvalidInput("--max-dim must be at least 2".into()));
            }
            let rows = monoid_search(*max_order, *max_dim, budget)?;
            let mut text = format!("{}\n", ClassificationRow::HEADER);
            for r in &rows {
                text.push_str(&r.to_tsv());
                text.push('\n');
            }
            let inconclusive = rows.iter().any(|r| r.overall() == Verdict::Inconclusive);
            let status = if inconclusive { EXIT_BUDGET } else { EXIT_PASS };
            report(status, &rows, text)
        }
        Verb::SolveBc { carrier, instance, bound } => solve(*carrier, instance, *bound)?,
        Verb::GenBc { carrier, seed, bound, trials, rhombus: Rhombus { n, p, q } } => {
            let instances = (0..*trials)
                .map(|t| {
                    let inst = gen_instance(seed.wrapping_add(t), *n, *p, *q, *carrier, *bound)?;
                    Ok(InstanceFile::new(Some(*carrier), &inst))
                })
                .collect::<Result<Vec<_>>>()?;
            if instances.len() == 1 {
                artifact(&instances[0])
            } else {
                artifact(&GenReport { carrier: *carrier, seed: *seed, instances })
            }
        }
        Verb::ReproducePaper { which: Example::Example1, .. } => example1(budget)?,
        Verb::ReproducePaper { which: Example::Example2, trials, max_dim, seed, bound } => {
            example2(*trials, *max_dim, *seed, *bound)?
        }
    })
}

fn corollary(r: CorollaryReport) -> Rendered {
    let status = if r.consistent() {
        verdict_status(r.kan)
    } else if r.kan == Verdict::Inconclusive || r.bc == Verdict::Inconclusive {
        EXIT_BUDGET
    } else {
        EXIT_INVALID
    };
    let mut text = format!("groupoid: {}\nkan: {}\nbc: {}\nconsistent: {}\n", r.groupoid, r.kan, r.bc, r.consistent());
    if let Some(f) = r.non_invertible {
        let _ = writeln!(text, "non_invertible: {f}");
    }
    for c in r.reports.iter().filter(|c| c.verdict != Verdict::Pass).take(1) {
        let _ = writeln!(text, "first_failure: {}\ncounterexample: {}", c.condition, compact(&c.counterexample));
    }
    report(status, &r, text)
}

fn criterion_text(k: &KanCriterion) -> String {
    let mut s = format!(
        "two_cells_invertible: {}\none_cells_equivalences: {}\nkan: {}\n",
        k.two_cells_invertible,
        k.one_cells_equivalences,
        k.is_kan()
    );
    if let Some(a) = k.non_invertible_two_cell {
        let _ = writeln!(s, "non_invertible_two_cell: {a}");
    }
    if let Some(f) = k.non_equivalence {
        let _ = writeln!(s, "non_equivalence: {f}");
    }
    s
}

fn to_monoid_instance(m: &Monoid, inst: &BCInstance<i64>) -> Result<BCInstance<usize>> {
    if let Some(r) = inst.records().iter().find(|r| !(0..m.size() as i64).contains(&r.3)) {
        return Err(Error::InvalidInput(format!("entry a_{{{}{}{}}} = {} is not an element", r.0, r.1, r.2, r.3)));
    }
    Ok(inst.map(|v| v as usize))
}

fn solve_monoid_instance(m: &Monoid, path: &Path) -> Result<Rendered> {
    let file: InstanceFile = load(path)?;
    let inst = to_monoid_instance(m, &in_file(path, file.instance())?)?;
    if !instance_is_valid(m, &inst) {
        return Err(Error::InvalidInput(format!("{}: instance violates the cocycle identity", path.display())));
    }
    let witness = find_witness(m, &inst);
    let (candidates, accepted) = count_witnesses(m, &inst);
    let binding = if witness.is_none() {
        binding_equations(m, &inst).iter().map(ToString::to_string).collect()
    } else {
        Vec::new()
    };
    let r = InstanceReport {
        instance: file,
        verdict: if witness.is_some() { Verdict::Pass } else { Verdict::Fail },
        candidates,
        accepted,
        witness,
        binding_equations: binding,
    };
    let mut text = format!("verdict: {}\ncandidates: {}\naccepted: {}\n", r.verdict, r.candidates, r.accepted);
    if let Some(w) = &r.witness {
        let _ = writeln!(text, "witness: {}", compact(w));
    }
    for e in &r.binding_equations {
        let _ = writeln!(text, "binding: {e}");
    }
    Ok(report(verdict_status(r.verdict), &r, text))
}

fn solve(carrier: Option<GenCarrier>, instance: &str, bound: i64) -> Result<Rendered> {
    let (inst, file_carrier, seed) = match parse_gen_spec(instance) {
        Some(spec) => {
            let spec = spec?;
            let c = spec.carrier.or(carrier).unwrap_or(GenCarrier::NonNegIntegers);
            let inst = gen_instance(spec.seed, spec.n, spec.p, spec.q, c, spec.bound.unwrap_or(bound))?;
            (inst, Some(c), Some(spec.seed))
        }
        None => {
            let path = Path::new(instance);
            let file: InstanceFile = load(path)?;
            (in_file(path, file.instance())?, file.carrier, None)
        }
    };
    let carrier = carrier.or(file_carrier).unwrap_or(GenCarrier::NonNegIntegers);
    let mut r = SolveReport {
        carrier,
        seed,
        instance: InstanceFile::new(Some(carrier), &inst),
        verdict: Verdict::Pass,
        witness: None,
        shift: None,
        integer_witness: None,
        message: None,
    };
    let solved = match carrier {
        GenCarrier::NonNegIntegers => solve_zplus(&inst).map(|s| {
            r.shift = Some(s.shift);
            r.integer_witness = Some(s.integer_witness);
            s.witness
        }),
        GenCarrier::Integers => solve_abelian(&Integers, &inst),
        GenCarrier::Cyclic(m) => {
            let g = FiniteGroup::cyclic(m as usize);
            let inst = to_monoid_instance(g.monoid(), &inst)?;
            solve_abelian(&g, &inst).map(|w| w.map(|v| v as i64))
        }
    };
    match solved {
        Ok(w) => r.witness = Some(w),
        Err(Error::InvalidInput(m)) if m.starts_with("no nonnegative witness") => {
            r.verdict = Verdict::Fail;
            r.message = Some(m);
        }
        Err(e) => return Err(e),
    }
    let mut text = format!("carrier: {}\nverdict: {}\n", r.carrier, r.verdict);
    if let Some(s) = r.seed {
        let _ = writeln!(text, "seed: {s}");
    }
    if let Some(w) = &r.witness {
        let _ = writeln!(text, "x: {:?}\ny: {:?}\nz: {:?}", w.x, w.y, w.z);
    }
    if let Some(a) = r.shift {
        let _ = writeln!(text, "shift: {a}");
    }
    if let Some(m) = &r.message {
        let _ = writeln!(text, "message: {m}");
    }
    Ok(report(verdict_status(r.verdict), &r, text))
}

fn example1(budget: Budget) -> Result<Rendered> {
    let m = Monoid::binary();
    let check = bc_check_km2(&m, 5, 0, 3, budget)?;
    let inst = binary_obstruction();
    let instance_valid = instance_is_valid(&m, &inst);
    let (candidates, accepted) = count_witnesses(&m, &inst);
    let binding: Vec<String> = binding_equations(&m, &inst).iter().map(ToString::to_string).collect();
    let reproduced = check.verdict == Verdict::Fail && instance_valid && accepted == 0;
    let r = Example1Report {
        verdict: if reproduced { Verdict::Pass } else { Verdict::Fail },
        instance: InstanceFile::new(None, &inst.map(|v| v as i64)),
        instance_valid,
        candidates,
        rejected: candidates - accepted,
        binding_equations: binding,
        check,
    };
    let mut text = format!(
        "{}: {} over {{0,1}} under multiplication\ninstance valid: {}\nwitnesses rejected: {}/{}\n",
        r.check.condition,
        r.check.verdict,
        r.instance_valid,
        r.rejected,
        r.candidates
    );
    for e in &r.binding_equations {
        let _ = writeln!(text, "binding: {e}");
    }
    let _ = writeln!(text, "reproduced: {}", r.verdict.is_pass());
    Ok(report(verdict_status(r.verdict), &r, text))
}

fn example2(trials: u64, max_dim: usize, seed: u64, bound: i64) -> Result<Rendered> {
    if max_dim < 3 {
        return Err(Error::InvalidInput("--max-dim must be at least 3".into()));
    }
    let batch = run_batch(GenCarrier::NonNegIntegers, 3..=max_dim, trials, seed, bound);
    let non_invertible = NonNegIntegers.first_non_invertible();
    let kan = if NonNegIntegers.inverse_of(non_invertible).is_none() { Verdict::Fail } else { Verdict::Pass };
    let ss = batch.failures.is_empty();
    let r = Example2Report {
        verdict: if ss && kan == Verdict::Fail { Verdict::Pass } else { Verdict::Fail },
        summary: format!(
            "{} at tested dimensions, {}",
            if ss { "SS" } else { "not SS" },
            if kan == Verdict::Fail { "not Kan" } else { "Kan" }
        ),
        batch,
        non_invertible,
        kan,
    };
    let mut text = format!(
        "solved: {}/{} (seed {}, {} trials per condition, n = 3..={max_dim})\n",
        r.batch.solved, r.batch.attempted, r.batch.seed, r.batch.trials_per_condition
    );
    for f in r.batch.failures.iter().take(5) {
        let _ = writeln!(text, "failure: seed {}: {}", f.seed, f.error);
    }
    let _ = writeln!(text, "non-invertible 2-cell: {}\nkan: {}\nsummary: {}", r.non_invertible, r.kan, r.summary);
    Ok(report(verdict_status(r.verdict), &r, text))
}
