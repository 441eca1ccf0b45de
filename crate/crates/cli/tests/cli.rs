use std::fs;
use std::path::PathBuf;
use std::process::Command;

use rhombus::category::CorollaryReport;
use rhombus::km2::{verify_instance, ClassificationRow};
use rhombus::monoid::NonNegIntegers;
use rhombus::report::{AggregateReport, Finding};
use rhombus::solvers::InstanceFile;
use rhombus::{CheckReport, TruncatedSimplicialSet, Verdict};
use rhombus_cli::{Example1Report, Example2Report, SolveReport};
use serde::de::DeserializeOwned;
use serde::Serialize;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn rhombus(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_rhombus")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn json<T: DeserializeOwned + Serialize + PartialEq + std::fmt::Debug>(args: &[&str]) -> (i32, T) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let (status, out) = rhombus(&full);
    let parsed: T = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}"));
    let again: T = serde_json::from_str(&serde_json::to_string(&parsed).unwrap()).unwrap();
    assert_eq!(again, parsed);
    assert_eq!(serde_json::to_value(&parsed).unwrap(), serde_json::from_str::<serde_json::Value>(&out).unwrap());
    (status, parsed)
}

#[test]
fn bc_km2_binary_fails_with_unsolvable_instance() {
    let (status, r): (_, CheckReport) = json(&["bc-km2", "--monoid", &data("binary.mon.json"), "--n", "5", "--p", "0", "--q", "3"]);
    assert_eq!(status, 1);
    assert_eq!(r.verdict, Verdict::Fail);
    match r.counterexample {
        Some(Finding::Km2 { instance, binding_equations }) => {
            assert_eq!((instance.n, instance.p, instance.q), (5, 0, 3));
            assert!(!binding_equations.is_empty());
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn corollary_check_on_z2() {
    let (status, r): (_, CorollaryReport) = json(&["corollary-check", "--cat", &data("z2.cat.json"), "--height", "4"]);
    assert_eq!(status, 0);
    assert_eq!((r.groupoid, r.kan, r.bc), (true, Verdict::Pass, Verdict::Pass));
    let (status, r): (_, CorollaryReport) = json(&["corollary-check", "--cat", &data("poset2.cat.json"), "--height", "3"]);
    assert_eq!(status, 1);
    assert_eq!((r.groupoid, r.kan, r.bc), (false, Verdict::Fail, Verdict::Fail));
    assert_eq!(r.non_invertible, Some(2));
}

#[test]
fn solve_bc_generated_zplus() {
    let (status, r): (_, SolveReport) =
        json(&["solve-bc", "--carrier", "zplus", "--instance", "gen(seed=7,n=6,p=1,q=4)"]);
    assert_eq!(status, 0);
    assert_eq!(r.seed, Some(7));
    let w = r.witness.unwrap();
    assert!(w.x.iter().chain(&w.y).chain(&w.z).all(|&v| v >= 0));
    assert!(verify_instance(&NonNegIntegers, &r.instance.instance().unwrap(), &w));
}

#[test]
fn solve_bc_reads_instance_files_and_other_carriers() {
    let (status, r): (_, SolveReport) = json(&["solve-bc", "--instance", &data("zplus-6-1-4.inst.json")]);
    assert_eq!(status, 0);
    assert_eq!(r.seed, None);
    let (status, gen): (_, SolveReport) =
        json(&["solve-bc", "--carrier", "zplus", "--instance", "gen(seed=7,n=6,p=1,q=4)"]);
    assert_eq!(status, 0);
    assert_eq!(gen.instance, r.instance);

    for carrier in ["z", "z/5"] {
        let spec = format!("gen(seed=3,n=5,p=2,q=4,carrier={carrier})");
        let (status, r): (_, SolveReport) = json(&["solve-bc", "--instance", &spec]);
        assert_eq!(status, 0, "{carrier}");
        assert_eq!(r.carrier.to_string(), carrier);
    }
}

#[test]
fn gen_bc_round_trips_through_solve() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("i.json");
    let p = path.to_str().unwrap();
    let (status, _) = rhombus(&["gen-bc", "--carrier", "z", "--seed", "11", "--n", "4", "--p", "0", "--q", "4", "--output", p]);
    assert_eq!(status, 0);
    let file: InstanceFile = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(file.carrier.unwrap().to_string(), "z");
    let (status, out) = rhombus(&["solve-bc", "--instance", p]);
    assert_eq!(status, 0, "{out}");
    assert!(out.contains("verdict: pass"));
}

#[test]
fn reproduce_examples() {
    let (status, r): (_, Example1Report) = json(&["reproduce-paper", "example1"]);
    assert_eq!(status, 0);
    assert_eq!((r.candidates, r.rejected), (16, 16));
    assert_eq!(r.binding_equations.len(), 4);
    assert_eq!(r.check.verdict, Verdict::Fail);

    let (status, r): (_, Example2Report) =
        json(&["reproduce-paper", "example2", "--trials", "20", "--max-dim", "5", "--seed", "4"]);
    assert_eq!(status, 0);
    assert_eq!(r.batch.seed, 4);
    assert_eq!(r.batch.solved, r.batch.attempted);
    assert_eq!(r.non_invertible, 1);
    assert_eq!(r.kan, Verdict::Fail);
    assert_eq!(r.summary, "SS at tested dimensions, not Kan");
}

#[test]
fn check_verbs_on_interval() {
    let s = data("interval.sset.json");
    let (status, r): (_, CheckReport) = json(&["check-kan", "--sset", &s, "--n", "2", "--p", "1"]);
    assert_eq!((status, r.verdict), (0, Verdict::Pass));
    let (status, r): (_, CheckReport) = json(&["check-kan", "--sset", &s, "--n", "2", "--p", "0"]);
    assert_eq!((status, r.verdict), (1, Verdict::Fail));
    let (status, r): (_, CheckReport) = json(&["check-bc", "--sset", &s, "--n", "2", "--p", "1", "--q", "2", "--weak-pullback"]);
    assert_eq!((status, r.verdict), (1, Verdict::Fail));
    let (status, r): (_, AggregateReport) = json(&["check-all", "--sset", &s]);
    assert_eq!(status, 1);
    assert_eq!(r.get("BC_{0,2}[2]").unwrap().verdict, Verdict::Pass);
    let (status, _): (_, CheckReport) = json(&["validate-sset", "--sset", &s]);
    assert_eq!(status, 0);
}

#[test]
fn budget_exhaustion_is_status_3() {
    let s = data("interval.sset.json");
    let (status, r): (_, CheckReport) = json(&["check-kan", "--sset", &s, "--n", "2", "--p", "1", "--budget", "1"]);
    assert_eq!((status, r.verdict), (3, Verdict::Inconclusive));
    let (status, out) = rhombus(&["km2", "--monoid", &data("z2.mon.json"), "--height", "4", "--budget", "2"]);
    assert_eq!(status, 3, "{out}");
}

#[test]
fn artifacts_load_back() {
    let dir = tempfile::tempdir().unwrap();
    let nerve = dir.path().join("nerve.json");
    let z = dir.path().join("z.json");
    let duskin = dir.path().join("duskin.json");
    let km2 = dir.path().join("km2.json");
    let path = |p: &PathBuf| p.to_str().unwrap().to_string();
    assert_eq!(rhombus(&["nerve", "--cat", &data("z2.cat.json"), "--height", "3", "--output", &path(&nerve)]).0, 0);
    assert_eq!(rhombus(&["validate-sset", "--sset", &path(&nerve)]).0, 0);
    assert_eq!(rhombus(&["build-z", "--monoid", &data("z2.mon.json"), "--output", &path(&z)]).0, 0);
    assert_eq!(rhombus(&["validate-2cat", "--twocat", &path(&z)]).0, 0);
    assert_eq!(rhombus(&["kan-criterion", "--twocat", &path(&z)]).0, 0);
    assert_eq!(rhombus(&["bc-2cat", "--twocat", &path(&z), "--n", "3", "--p", "0", "--q", "2"]).0, 0);
    assert_eq!(rhombus(&["duskin-nerve", "--twocat", &path(&z), "--height", "3", "--output", &path(&duskin)]).0, 0);
    assert_eq!(rhombus(&["km2", "--monoid", &data("z2.mon.json"), "--height", "3", "--output", &path(&km2)]).0, 0);
    let read = |p: &PathBuf| TruncatedSimplicialSet::from_file(serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()).unwrap();
    assert_eq!(read(&duskin), read(&km2));
    assert_eq!(rhombus(&["kan-criterion", "--twocat", &data("z-binary.2cat.json")]).0, 1);
    assert_eq!(rhombus(&["validate-2cat", "--twocat", &data("a-z2.2cat.json")]).0, 0);
}

#[test]
fn monoid_verbs() {
    let (status, out) = rhombus(&["validate-monoid", "--monoid", &data("binary.mon.json")]);
    assert_eq!(status, 0);
    assert!(out.contains("is_group: false"));
    let (status, rows): (_, Vec<ClassificationRow>) = json(&["monoid-search", "--max-order", "2", "--max-dim", "4"]);
    assert_eq!(status, 0);
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.is_group == r.is_cancellative));
    let (_, text) = rhombus(&["monoid-search", "--max-order", "1", "--max-dim", "2"]);
    assert_eq!(text.lines().next().unwrap(), ClassificationRow::HEADER);

    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let (_, r): (_, Example1Report) = json(&["reproduce-paper", "example1"]);
    fs::write(&inst, serde_json::to_string(&r.instance).unwrap()).unwrap();
    let (status, out) = rhombus(&["bc-km2", "--monoid", &data("binary.mon.json"), "--instance", inst.to_str().unwrap()]);
    assert_eq!(status, 1);
    assert!(out.contains("accepted: 0") && out.contains("candidates: 16"), "{out}");
}

#[test]
fn malformed_inputs_are_status_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"size\": 2, \"unit\": 0,\n \"table\": [0, 1, 1]").unwrap();
    let (status, out) = rhombus(&["validate-monoid", "--monoid", bad.to_str().unwrap()]);
    assert_eq!(status, 2);
    assert!(out.contains("bad.json") && out.contains("line 2"), "{out}");

    let (status, _) = rhombus(&["check-kan", "--sset", "/nonexistent/s.json", "--n", "1", "--p", "0"]);
    assert_eq!(status, 2);

    fs::write(&bad, r#"{"size":3,"unit":0,"table":[0,1,2,1,2,0,2,1,0]}"#).unwrap();
    let (status, _) = rhombus(&["validate-monoid", "--monoid", bad.to_str().unwrap()]);
    assert_eq!(status, 2);
    let (status, _) = rhombus(&["km2", "--monoid", bad.to_str().unwrap(), "--height", "2"]);
    assert_eq!(status, 2);

    let s = data("interval.sset.json");
    let (status, _) = rhombus(&["check-bc", "--sset", &s, "--n", "2", "--p", "2", "--q", "1"]);
    assert_eq!(status, 2);
    let (status, _) = rhombus(&["check-kan", "--sset", &s, "--n", "3", "--p", "0"]);
    assert_eq!(status, 2);
    let (status, _) = rhombus(&["solve-bc", "--instance", "gen(seed=1,n=4)"]);
    assert_eq!(status, 2);
}
