//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Counts are minimums; every check is exact.

use std::process::ExitCode;
use std::time::Instant;

use coalsim::behavioural::{quotient_witness, t_bisimulation_check};
use coalsim::harness::{run_property_suite, PropertyRunReport};
use coalsim::io::parse_model;
use coalsim::simulation::{is_bisimulation, is_simulation};
use coalsim::{Coalgebra, Error, KindTag, LambdaSignature, Relation, SignatureSpec};

const SEED: u64 = 20_240_601;

type Check = (&'static str, fn() -> Criterion);

struct Criterion {
    ok: bool,
    detail: String,
}

fn suite(property: &str, trials: usize) -> PropertyRunReport {
    run_property_suite(property, trials, SEED).expect("known property")
}

fn per_kind_at_least(r: &PropertyRunReport, kinds: &[KindTag], min: usize) -> bool {
    kinds
        .iter()
        .all(|k| r.per_kind.get(k).copied().unwrap_or(0) >= min)
}

fn summary(r: &PropertyRunReport) -> String {
    let kinds: Vec<String> = r.per_kind.iter().map(|(k, n)| format!("{k}={n}")).collect();
    format!(
        "{} trials [{}], {} counterexample(s)",
        r.trials,
        kinds.join(" "),
        r.counterexamples.len()
    )
}

fn per_kind_criterion(property: &str, trials: usize, min: usize) -> Criterion {
    let r = suite(property, trials);
    Criterion {
        ok: r.passed() && per_kind_at_least(&r, &KindTag::ALL, min),
        detail: summary(&r),
    }
}

fn oracle_equivalence() -> Criterion {
    per_kind_criterion("oracle-agreement", 4000, 1000)
}

fn fast_paths() -> Criterion {
    let r = suite("fast-path-agreement", 4000);
    let paths = [
        "diamond-forth",
        "box-back",
        "distribution-measure",
        "multiset-measure",
        "neighborhood-images",
    ];
    let counts: Vec<String> = paths
        .iter()
        .map(|p| format!("{p}={}", r.tally(p)))
        .collect();
    Criterion {
        ok: r.passed() && paths.iter().all(|p| r.tally(p) >= 1000),
        detail: format!(
            "{}, {} counterexample(s)",
            counts.join(" "),
            r.counterexamples.len()
        ),
    }
}

fn triples(property: &str, trials: usize) -> Criterion {
    let r = suite(property, trials);
    Criterion {
        ok: r.passed() && r.tally("triples") >= 10_000 && per_kind_at_least(&r, &KindTag::ALL, 1),
        detail: format!("{} triples, {}", r.tally("triples"), summary(&r)),
    }
}

fn difunctional_closure() -> Criterion {
    let r = suite("prop-difunctional", 2000);
    Criterion {
        ok: r.passed() && r.trials >= 1000,
        detail: format!(
            "{} relations, {} up-to bisimulations, {}",
            r.trials,
            r.tally("holding"),
            summary(&r)
        ),
    }
}

fn coupling_converse() -> Criterion {
    let r = suite("t-bisim-converse", 3000);
    Criterion {
        ok: r.passed() && r.tally("random-instances") >= 500 && r.tally("exhaustive-instances") >= 500,
        detail: format!(
            "{} exhaustive instances ({} relations), {} random instances, {} difunctional and {} up-to bisimulations coupled, {} counterexample(s)",
            r.tally("exhaustive-instances"),
            r.tally("exhaustive-relations"),
            r.tally("random-instances"),
            r.tally("difunctional-bisimulations"),
            r.tally("up-to-bisimulations"),
            r.counterexamples.len()
        ),
    }
}

const DEADLOCK_LIVE_LEFT: &str = r#"{"functor":"kripke","atoms":[],"states":["x"],
  "transition":{"x":{"props":[],"succ":["x"]}}}"#;
const DEADLOCK_LIVE_RIGHT: &str = r#"{"functor":"kripke","atoms":[],"states":["y"],
  "transition":{"y":{"props":[],"succ":[]}}}"#;
const SPLIT_MASS_LEFT: &str = r#"{"functor":"distribution","states":["x","a","b"],
  "transition":{"x":{"a":"1/2","b":"1/2"},"a":{"a":"1"},"b":{"b":"1"}}}"#;
const POINT_MASS_RIGHT: &str = r#"{"functor":"distribution","states":["y","c"],
  "transition":{"y":{"c":"1"},"c":{"c":"1"}}}"#;

const EXPECTED_DEADLOCK_SIM: &str = r#"{"holds":false,"violations":[{"direction":"forward","source":"x","target":"y","modality":"<>","set":["x"]}]}"#;
const EXPECTED_DEADLOCK_QUOTIENT: &str =
    "block B0 is not well defined: x ↦ ({}, {B0}) but y ↦ ({}, {})";
const EXPECTED_SPLIT_MASS: &str = r#"coupling=false lambda={"holds":false,"violations":[{"direction":"forward","source":"x","target":"y","modality":"L(1/2)","set":["b"]},{"direction":"backward","source":"y","target":"x","modality":"L(1/1)","set":["c"]}]}"#;
const EXPECTED_BOX_VIOLATION: &str = r#"diamond=true box={"holds":false,"violations":[{"direction":"forward","source":"y","target":"x","modality":"[]","set":[]}]}"#;

fn rel(c: &Coalgebra, d: &Coalgebra, pairs: &[(&str, &str)]) -> Relation {
    Relation::new(
        c.len(),
        d.len(),
        pairs
            .iter()
            .map(|(x, y)| (c.state(x).unwrap(), d.state(y).unwrap())),
    )
}

/// Renders each negative control; the output must not depend on the run.
fn negative_control_outputs() -> Vec<(&'static str, String, &'static str)> {
    let mut out = Vec::new();

    let c = parse_model(DEADLOCK_LIVE_LEFT).unwrap();
    let d = parse_model(DEADLOCK_LIVE_RIGHT).unwrap();
    let sig = LambdaSignature::kripke(true, true, &[]);
    let s = rel(&c, &d, &[("x", "y")]);
    let report = is_simulation(&s, &c, &d, &sig).unwrap();
    out.push((
        "live vs deadlock simulation",
        report.to_json(&c, &d).to_string(),
        EXPECTED_DEADLOCK_SIM,
    ));
    let quotient = match quotient_witness(&s, &c, &d) {
        Err(Error::NotWellDefined(failure)) => failure.to_string(),
        other => format!("unexpected: {other:?}"),
    };
    out.push((
        "live vs deadlock quotient",
        quotient,
        EXPECTED_DEADLOCK_QUOTIENT,
    ));

    let c = parse_model(SPLIT_MASS_LEFT).unwrap();
    let d = parse_model(POINT_MASS_RIGHT).unwrap();
    let sig = SignatureSpec::default_for(KindTag::Distribution)
        .resolve(&[&c, &d])
        .unwrap();
    let s = rel(&c, &d, &[("x", "y"), ("a", "c")]);
    let coupling = t_bisimulation_check(&s, &c, &d).unwrap();
    let report = is_bisimulation(&s, &c, &d, &sig).unwrap();
    out.push((
        "non-transportable distribution",
        format!(
            "coupling={} lambda={}",
            coupling.is_some(),
            report.to_json(&c, &d)
        ),
        EXPECTED_SPLIT_MASS,
    ));

    let c = parse_model(DEADLOCK_LIVE_RIGHT).unwrap();
    let d = parse_model(DEADLOCK_LIVE_LEFT).unwrap();
    let diamond = LambdaSignature::kripke(false, true, &[]);
    let boxed = LambdaSignature::kripke(true, false, &[]);
    let s = rel(&c, &d, &[("y", "x")]);
    let as_diamond = is_simulation(&s, &c, &d, &diamond).unwrap().holds;
    let report = is_simulation(&s, &c, &d, &boxed).unwrap();
    out.push((
        "box-violating relation",
        format!("diamond={} box={}", as_diamond, report.to_json(&c, &d)),
        EXPECTED_BOX_VIOLATION,
    ));
    out
}

fn negative_controls() -> Criterion {
    let first = negative_control_outputs();
    let second = negative_control_outputs();
    let mut ok = true;
    let mut notes = Vec::new();
    for ((name, got, expected), (_, again, _)) in first.iter().zip(&second) {
        if got != expected || got != again {
            ok = false;
            notes.push(format!("{name}: got {got}"));
        }
    }
    Criterion {
        ok,
        detail: if ok {
            format!("{} controls match their documented witnesses", first.len())
        } else {
            notes.join("; ")
        },
    }
}

fn main() -> ExitCode {
    let criteria: Vec<Check> = vec![
        ("oracle equivalence", oracle_equivalence),
        ("fast-path equivalence", fast_paths),
        ("simulations preserve positive formulas", || {
            triples("preservation", 2000)
        }),
        ("n-simulations preserve rank-n positive formulas", || {
            triples("rank-n-preservation", 3000)
        }),
        ("greatest n-bisimulation is n-step equivalence", || {
            per_kind_criterion("n-step-equivalence", 2000, 500)
        }),
        ("behavioural equivalence cross-checks", || {
            per_kind_criterion("behavioural-soundness", 2000, 500)
        }),
        ("up-to-difunctionality versus closure", difunctional_closure),
        ("T-bisimulations are Λ-bisimulations", || {
            per_kind_criterion("t-implies-lambda", 2000, 500)
        }),
        (
            "difunctional Λ-bisimulations admit couplings",
            coupling_converse,
        ),
        ("functor laws and naturality", || {
            per_kind_criterion("functor-laws", 4000, 1000)
        }),
        ("negative controls", negative_controls),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let c = run();
        if !c.ok {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} {name}: {} ({:.1}s)",
            if c.ok { "PASS" } else { "FAIL" },
            i + 1,
            c.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
