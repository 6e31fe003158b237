//! Named cross-module properties run on seeded random instances.
//!
//! Trial `i` of a run with seed `s` draws everything from seed `s + i` and
//! uses the `i`-th kind (cyclically) among the kinds the property covers,
//! so reports do not depend on scheduling.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::generate::{
    generate_with, random_formula, random_injection, random_map, random_relation,
    random_subrelation, random_value, rng_for, GeneratorConfig, TrialRng,
};
use super::oracle::{
    all_relations, brute_force_n_bisimulations, brute_force_n_simulations,
    brute_force_simulation_oracle, kripke_bisimilarity_oracle, union_of_simulations,
};
use crate::behavioural::{
    behavioural_equivalence, n_step_partition, quotient_witness, stable_partition,
    t_bisim_up_to_difunctionality_check, t_bisimulation_check,
};
use crate::coalgebra::{Coalgebra, FunctorKind, FunctorValue, KindTag, State, StateSet};
use crate::error::{Error, Result};
use crate::io::{model_to_json, relation_to_json, value_to_json};
use crate::liftings::{
    distinguishing_pair, is_lambda_homomorphism, lambda_leq, satisfies, LambdaSignature,
};
use crate::logic::{extension, Modality};
use crate::num::Rational;
use crate::relation::Relation;
use crate::signature::SignatureSpec;
use crate::simulation::{
    greatest_bisimulation, greatest_n_bisimulation, greatest_simulation, greatest_simulation_with,
    is_bisimulation, is_bisimulation_up_to_difunctionality, is_simulation, is_simulation_fast,
    n_simulation_chain, Engine,
};

const ALL: &[KindTag] = &KindTag::ALL;
const WEAK_PULLBACK: &[KindTag] = &[KindTag::Kripke, KindTag::Multiset, KindTag::Distribution];
const KRIPKE: &[KindTag] = &[KindTag::Kripke];
const KRIPKE_DIST: &[KindTag] = &[KindTag::Kripke, KindTag::Distribution];

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PropertyInfo {
    pub id: &'static str,
    pub claim: &'static str,
    pub kinds: &'static [KindTag],
    /// Non-assertive properties report findings without failing.
    pub assertive: bool,
}

/// Every property the suite knows, in manifest order.
pub const PROPERTIES: &[PropertyInfo] = &[
    PropertyInfo {
        id: "oracle-agreement",
        claim: "base-restricted simulation check agrees with quantification over all subsets",
        kinds: ALL,
        assertive: true,
    },
    PropertyInfo {
        id: "fast-path-agreement",
        claim: "per-kind characterizations (diamond forth, box back, measure inequality, neighbourhood images) agree with the generic engine",
        kinds: ALL,
        assertive: true,
    },
    PropertyInfo {
        id: "preservation",
        claim: "Λ-simulations preserve positive formulas",
        kinds: ALL,
        assertive: true,
    },
    PropertyInfo {
        id: "rank-n-preservation",
        claim: "Λ-n-simulations preserve positive formulas of rank at most n",
        kinds: ALL,
        assertive: true,
    },
    PropertyInfo {
        id: "n-step-equivalence",
        claim: "n-step equivalence is a Λ-n-bisimulation and, for separating Λ, the greatest one",
        kinds: ALL,
        assertive: true,
    },
    PropertyInfo {
        id: "behavioural-soundness",
        claim: "for separating Λ, Λ-bisimilarity, the stable terminal-sequence partition and the quotient cospan coincide",
        kinds: ALL,
        assertive: true,
    },
    PropertyInfo {
        id: "prop-difunctional",
        claim: "S is a Λ-bisimulation up to difunctionality iff its difunctional closure is a Λ-bisimulation",
        kinds: ALL,
        assertive: true,
    },
    PropertyInfo {
        id: "t-implies-lambda",
        claim: "T-bisimulations (up to difunctionality) are Λ-bisimulations (up to difunctionality) and, for separating Λ, contained in bisimilarity",
        kinds: ALL,
        assertive: true,
    },
    PropertyInfo {
        id: "t-bisim-converse",
        claim: "for weak-pullback-preserving T and separating Λ, difunctional Λ-bisimulations and Λ-bisimulations up to difunctionality admit couplings",
        kinds: WEAK_PULLBACK,
        assertive: true,
    },
    PropertyInfo {
        id: "functor-laws",
        claim: "relabeling preserves identities, composition and injectivity, and satisfaction is natural",
        kinds: ALL,
        assertive: true,
    },
    PropertyInfo {
        id: "stability",
        claim: "Λ-simulations are closed under unions and composition and contain the identity; bisimilarity on one model is an equivalence",
        kinds: ALL,
        assertive: true,
    },
    PropertyInfo {
        id: "homomorphism",
        claim: "the ordering criterion for homomorphisms matches the graph being a simulation; graphs of coalgebra morphisms are Λ-bisimulations",
        kinds: ALL,
        assertive: true,
    },
    PropertyInfo {
        id: "monotony",
        claim: "liftings are monotone and insensitive to states outside the base",
        kinds: ALL,
        assertive: true,
    },
    PropertyInfo {
        id: "lambda-preorder",
        claim: "the Λ-ordering is a preorder and separating signatures distinguish distinct values",
        kinds: ALL,
        assertive: true,
    },
    PropertyInfo {
        id: "n-chain-search",
        claim: "containment in the greatest chain decides n-(bi)simulations defined by witnessing chains",
        kinds: ALL,
        assertive: true,
    },
    PropertyInfo {
        id: "greatest-fixpoint",
        claim: "the greatest simulation and bisimulation are the unions of all simulations and bisimulations",
        kinds: ALL,
        assertive: true,
    },
    PropertyInfo {
        id: "kripke-oracle",
        claim: "Λ-bisimilarity for atoms, box and diamond is classical strong bisimilarity",
        kinds: KRIPKE,
        assertive: true,
    },
    PropertyInfo {
        id: "generator-validity",
        claim: "generated models validate and are reproducible from their seed",
        kinds: ALL,
        assertive: true,
    },
    PropertyInfo {
        id: "open-problem-search",
        claim: "search for Λ-bisimulations, difunctional or not, that admit no coupling (report only)",
        kinds: KRIPKE_DIST,
        assertive: false,
    },
];

pub fn property_info(id: &str) -> Option<&'static PropertyInfo> {
    PROPERTIES.iter().find(|p| p.id == id)
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub trial: usize,
    pub seed: u64,
    pub kind: KindTag,
    pub detail: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyRunReport {
    pub property: String,
    pub assertive: bool,
    pub trials: usize,
    pub seed: u64,
    /// Trials per functor kind.
    pub per_kind: BTreeMap<KindTag, usize>,
    /// Named counters of individual checks.
    pub tallies: BTreeMap<String, u64>,
    pub counterexamples: Vec<Counterexample>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl PropertyRunReport {
    pub fn tally(&self, name: &str) -> u64 {
        self.tallies.get(name).copied().unwrap_or(0)
    }

    pub fn checks(&self) -> u64 {
        self.tallies.values().sum()
    }

    /// Assertive runs pass iff no counterexample was found; searches
    /// always pass.
    pub fn passed(&self) -> bool {
        !self.assertive || self.counterexamples.is_empty()
    }
}

#[derive(Default)]
struct Outcome {
    tallies: BTreeMap<String, u64>,
    failures: Vec<Value>,
}

impl Outcome {
    fn count(&mut self, name: &str, n: u64) {
        *self.tallies.entry(name.to_string()).or_insert(0) += n;
    }

    fn fail(&mut self, detail: Value) {
        self.failures.push(detail);
    }
}

/// Runs `trials` instances of property `name`.
pub fn run_property_suite(name: &str, trials: usize, seed: u64) -> Result<PropertyRunReport> {
    let info = property_info(name).ok_or_else(|| Error::UnknownProperty(name.to_string()))?;
    let start = Instant::now();
    let run = |i: usize| -> (KindTag, u64, Outcome) {
        let kind = info.kinds[i % info.kinds.len()];
        let trial_seed = seed.wrapping_add(i as u64);
        let outcome = run_trial(info.id, kind, trial_seed).unwrap_or_else(|e| Outcome {
            tallies: BTreeMap::new(),
            failures: vec![json!({ "error": e.to_string() })],
        });
        (kind, trial_seed, outcome)
    };
    #[cfg(feature = "parallel")]
    let outcomes: Vec<_> = {
        use rayon::prelude::*;
        (0..trials).into_par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let outcomes: Vec<_> = (0..trials).map(run).collect();

    let mut report = PropertyRunReport {
        property: info.id.to_string(),
        assertive: info.assertive,
        trials,
        seed,
        per_kind: BTreeMap::new(),
        tallies: BTreeMap::new(),
        counterexamples: Vec::new(),
        elapsed: Duration::ZERO,
    };
    for (i, (kind, trial_seed, outcome)) in outcomes.into_iter().enumerate() {
        *report.per_kind.entry(kind).or_insert(0) += 1;
        for (k, v) in outcome.tallies {
            *report.tallies.entry(k).or_insert(0) += v;
        }
        report
            .counterexamples
            .extend(outcome.failures.into_iter().map(|detail| Counterexample {
                trial: i,
                seed: trial_seed,
                kind,
                detail,
            }));
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

fn run_trial(id: &str, kind: KindTag, seed: u64) -> Result<Outcome> {
    let mut rng = rng_for(seed);
    let rng = &mut rng;
    let mut out = Outcome::default();
    match id {
        "oracle-agreement" => oracle_agreement(rng, kind, &mut out)?,
        "fast-path-agreement" => fast_path_agreement(rng, kind, &mut out)?,
        "preservation" => preservation(rng, kind, &mut out)?,
        "rank-n-preservation" => rank_n_preservation(rng, kind, &mut out)?,
        "n-step-equivalence" => n_step_equivalence(rng, kind, &mut out)?,
        "behavioural-soundness" => behavioural_soundness(rng, kind, &mut out)?,
        "prop-difunctional" => prop_difunctional(rng, kind, &mut out)?,
        "t-implies-lambda" => t_implies_lambda(rng, kind, &mut out)?,
        "t-bisim-converse" => t_bisim_converse(rng, kind, seed, &mut out)?,
        "functor-laws" => functor_laws(rng, kind, &mut out)?,
        "stability" => stability(rng, kind, &mut out)?,
        "homomorphism" => homomorphism(rng, kind, &mut out)?,
        "monotony" => monotony(rng, kind, &mut out)?,
        "lambda-preorder" => lambda_preorder(rng, kind, &mut out)?,
        "n-chain-search" => n_chain_search(rng, kind, &mut out)?,
        "greatest-fixpoint" => greatest_fixpoint(rng, kind, &mut out)?,
        "kripke-oracle" => kripke_oracle(rng, &mut out)?,
        "generator-validity" => generator_validity(rng, kind, seed, &mut out)?,
        "open-problem-search" => open_problem_search(rng, kind, &mut out)?,
        other => return Err(Error::UnknownProperty(other.to_string())),
    }
    Ok(out)
}

fn config(kind: KindTag, states: RangeInclusive<usize>, finite: bool) -> GeneratorConfig {
    let mut cfg = GeneratorConfig::new(kind, 0).states(states);
    if kind == KindTag::Multiset && !finite {
        cfg = cfg.infinite_percent(10);
    }
    cfg
}

fn model(
    rng: &mut TrialRng,
    kind: KindTag,
    states: RangeInclusive<usize>,
    finite: bool,
) -> Coalgebra {
    generate_with(rng, &config(kind, states, finite))
}

fn pair(
    rng: &mut TrialRng,
    kind: KindTag,
    states: RangeInclusive<usize>,
    finite: bool,
) -> (Coalgebra, Coalgebra) {
    let c = model(rng, kind, states.clone(), finite);
    let d = model(rng, kind, states, finite);
    (c, d)
}

/// A signature for `kind` resolved against `models`. With `separating`
/// only declared-separating (and, for measures, measure-complete) choices
/// are drawn.
fn signature(
    rng: &mut TrialRng,
    kind: KindTag,
    models: &[&Coalgebra],
    separating: bool,
) -> Result<LambdaSignature> {
    let spec = match kind {
        KindTag::Kripke => {
            let (with_box, with_diamond) = match rng.gen_range(0..3) {
                0 => (true, false),
                1 => (false, true),
                _ => (true, true),
            };
            let with_atoms = separating || rng.gen_bool(0.5);
            SignatureSpec::Kripke {
                with_box,
                with_diamond,
                with_atoms,
            }
        }
        KindTag::Multiset => {
            if separating || rng.gen_bool(0.5) {
                SignatureSpec::Graded { max_k: None }
            } else {
                SignatureSpec::Graded {
                    max_k: Some(rng.gen_range(0..=3)),
                }
            }
        }
        KindTag::Distribution => {
            if !separating && rng.gen_bool(0.3) {
                let grid = [(0, 1), (1, 4), (1, 3), (1, 2), (2, 3), (1, 1)];
                let mut picks = Vec::new();
                for &(n, d) in &grid {
                    if rng.gen_bool(0.4) {
                        let p = Rational::new(n, d);
                        picks.push(if rng.gen_bool(0.5) {
                            Modality::AtLeast(p)
                        } else {
                            Modality::MoreThan(p)
                        });
                    }
                }
                return Ok(LambdaSignature::new(KindTag::Distribution, picks, false));
            }
            let (lower, strict) = match rng.gen_range(0..3) {
                0 => (true, false),
                1 => (false, true),
                _ => (true, true),
            };
            SignatureSpec::Probabilistic { lower, strict }
        }
        KindTag::Neighborhood => SignatureSpec::Neighborhood,
    };
    spec.resolve(models)
}

fn any_signature(
    rng: &mut TrialRng,
    kind: KindTag,
    models: &[&Coalgebra],
) -> Result<LambdaSignature> {
    let separating = rng.gen_bool(0.5);
    signature(rng, kind, models, separating)
}

fn instance(c: &Coalgebra, d: &Coalgebra, sig: &LambdaSignature) -> Value {
    json!({
        "left": model_to_json(c),
        "right": model_to_json(d),
        "signature": sig.modalities().iter().map(ToString::to_string).collect::<Vec<_>>(),
    })
}

fn with_relation(mut base: Value, key: &str, s: &Relation, c: &Coalgebra, d: &Coalgebra) -> Value {
    base[key] = relation_to_json(s, c, d);
    base
}

/// Largest Λ-simulation contained in `s`.
fn simulation_within(
    s: &Relation,
    c: &Coalgebra,
    d: &Coalgebra,
    sig: &LambdaSignature,
) -> Result<Relation> {
    let mut r = s.clone();
    loop {
        let report = is_simulation(&r, c, d, sig)?;
        if report.holds {
            return Ok(r);
        }
        for v in report.violations {
            r.remove(v.source, v.target);
        }
    }
}

fn preserved_pairs(
    s: &Relation,
    c: &Coalgebra,
    d: &Coalgebra,
    ext_c: &StateSet,
    ext_d: &StateSet,
) -> Vec<(State, State)> {
    s.iter()
        .filter(|(x, y)| ext_c.contains(x) && !ext_d.contains(y))
        .inspect(|_| {
            let _ = (c, d);
        })
        .collect()
}

fn oracle_agreement(rng: &mut TrialRng, kind: KindTag, out: &mut Outcome) -> Result<()> {
    let (c, d) = pair(rng, kind, 1..=6, false);
    let sig = any_signature(rng, kind, &[&c, &d])?;
    let density = rng.gen_range(0.2..0.8);
    let s = if rng.gen_bool(0.3) {
        greatest_simulation(&c, &d, &sig)?
    } else {
        random_relation(rng, c.len(), d.len(), density)
    };
    let engine = is_simulation(&s, &c, &d, &sig)?.holds;
    let oracle = brute_force_simulation_oracle(&s, &c, &d, &sig)?;
    out.count(kind.name(), 1);
    if engine != oracle {
        out.fail(with_relation(
            json!({ "engine": engine, "oracle": oracle, "instance": instance(&c, &d, &sig) }),
            "relation",
            &s,
            &c,
            &d,
        ));
    }
    Ok(())
}

fn fast_path_agreement(rng: &mut TrialRng, kind: KindTag, out: &mut Outcome) -> Result<()> {
    let (c, d) = pair(rng, kind, 1..=6, false);
    let density = rng.gen_range(0.2..0.8);
    let s = random_relation(rng, c.len(), d.len(), density);
    let sigs: Vec<(&str, LambdaSignature)> = match kind {
        KindTag::Kripke => {
            let atoms: Vec<String> = c.kind().atoms().to_vec();
            vec![
                ("diamond-forth", LambdaSignature::kripke(false, true, &[])),
                ("box-back", LambdaSignature::kripke(true, false, &[])),
                (
                    "kripke-combined",
                    LambdaSignature::kripke(true, true, &atoms),
                ),
            ]
        }
        KindTag::Multiset => vec![("multiset-measure", signature(rng, kind, &[&c, &d], true)?)],
        KindTag::Distribution => {
            vec![(
                "distribution-measure",
                signature(rng, kind, &[&c, &d], true)?,
            )]
        }
        KindTag::Neighborhood => vec![("neighborhood-images", LambdaSignature::neighborhood())],
    };
    for (label, sig) in sigs {
        let generic = is_simulation(&s, &c, &d, &sig)?.holds;
        let fast = is_simulation_fast(&s, &c, &d, &sig)?;
        out.count(label, 1);
        if fast != Some(generic) {
            out.fail(with_relation(
                json!({ "path": label, "generic": generic, "fast": fast, "instance": instance(&c, &d, &sig) }),
                "relation",
                &s,
                &c,
                &d,
            ));
        }
        if c.len() <= 4 && d.len() <= 4 {
            let g = greatest_simulation_with(&c, &d, &sig, Engine::Generic)?;
            let a = greatest_simulation_with(&c, &d, &sig, Engine::Auto)?;
            if g != a {
                out.fail(json!({
                    "path": label,
                    "greatest_generic": relation_to_json(&g, &c, &d),
                    "greatest_fast": relation_to_json(&a, &c, &d),
                    "instance": instance(&c, &d, &sig),
                }));
            }
        }
    }
    Ok(())
}

const FORMULAS_PER_TRIAL: usize = 4;

fn check_preservation(
    rng: &mut TrialRng,
    s: &Relation,
    c: &Coalgebra,
    d: &Coalgebra,
    sig: &LambdaSignature,
    rank: usize,
    out: &mut Outcome,
) -> Result<()> {
    for _ in 0..FORMULAS_PER_TRIAL {
        let f = random_formula(rng, sig, rank, true);
        let (ext_c, ext_d) = (extension(&f, c)?, extension(&f, d)?);
        out.count("triples", s.len() as u64);
        let bad = preserved_pairs(s, c, d, &ext_c, &ext_d);
        if let Some(&(x, y)) = bad.first() {
            out.fail(json!({
                "formula": f.to_string(),
                "pair": [c.name(x), d.name(y)],
                "relation": relation_to_json(s, c, d),
                "instance": instance(c, d, sig),
            }));
        }
    }
    Ok(())
}

fn preservation(rng: &mut TrialRng, kind: KindTag, out: &mut Outcome) -> Result<()> {
    let (c, d) = pair(rng, kind, 1..=4, false);
    let sig = any_signature(rng, kind, &[&c, &d])?;
    let greatest = greatest_simulation(&c, &d, &sig)?;
    check_preservation(rng, &greatest, &c, &d, &sig, 4, out)?;
    let density = rng.gen_range(0.3..0.9);
    let random = random_relation(rng, c.len(), d.len(), density);
    let inner = simulation_within(&random, &c, &d, &sig)?;
    check_preservation(rng, &inner, &c, &d, &sig, 4, out)
}

fn rank_n_preservation(rng: &mut TrialRng, kind: KindTag, out: &mut Outcome) -> Result<()> {
    let (c, d) = pair(rng, kind, 1..=4, false);
    let sig = any_signature(rng, kind, &[&c, &d])?;
    let n = rng.gen_range(0..=4);
    let chain = n_simulation_chain(&c, &d, &sig, n)?;
    out.count(&format!("rank-{n}"), 1);
    check_preservation(rng, &chain[n], &c, &d, &sig, n, out)
}

fn n_step_equivalence(rng: &mut TrialRng, kind: KindTag, out: &mut Outcome) -> Result<()> {
    let (c, d) = pair(rng, kind, 1..=5, false);
    let sig = signature(rng, kind, &[&c, &d], true)?;
    let n = rng.gen_range(0..=5);
    let approx = n_step_partition(&c, &d, n)?.restrict();
    let greatest = greatest_n_bisimulation(&c, &d, &sig, n)?;
    let fwd = n_simulation_chain(&c, &d, &sig, n)?
        .pop()
        .expect("chain is nonempty");
    let bwd = n_simulation_chain(&d, &c, &sig, n)?
        .pop()
        .expect("chain is nonempty");
    out.count(kind.name(), 1);
    if approx != greatest || !approx.is_subset(&fwd) || !approx.inverse().is_subset(&bwd) {
        out.fail(json!({
            "n": n,
            "n_step": relation_to_json(&approx, &c, &d),
            "greatest_n_bisimulation": relation_to_json(&greatest, &c, &d),
            "instance": instance(&c, &d, &sig),
        }));
    }
    Ok(())
}

fn is_equivalence(r: &Relation) -> bool {
    let n = r.left_size();
    r == &r.inverse() && (0..n).all(|x| r.contains(x, x)) && r.compose(r).is_subset(r)
}

fn behavioural_soundness(rng: &mut TrialRng, kind: KindTag, out: &mut Outcome) -> Result<()> {
    let (c, d) = pair(rng, kind, 1..=5, false);
    let sig = signature(rng, kind, &[&c, &d], true)?;
    out.count(kind.name(), 1);
    let eq = match behavioural_equivalence(&c, &d, &sig) {
        Ok(eq) => eq,
        Err(e) => {
            out.fail(json!({ "error": e.to_string(), "instance": instance(&c, &d, &sig) }));
            return Ok(());
        }
    };
    let w = &eq.witness;
    let blocks_agree = c.carrier().all(|x| {
        d.carrier()
            .all(|y| eq.relation.contains(x, y) == (w.kappa_left[x] == w.kappa_right[y]))
    });
    // κ-morphism equations, state by state
    let mut morphism = true;
    for x in c.carrier() {
        morphism &= c.transition(x).relabel(&w.kappa_left)? == w.chi[w.kappa_left[x]];
    }
    for y in d.carrier() {
        morphism &= d.transition(y).relabel(&w.kappa_right)? == w.chi[w.kappa_right[y]];
    }
    out.count("kappa-equations", (c.len() + d.len()) as u64);
    if !blocks_agree || !morphism || eq.rounds > c.len() + d.len() + 1 {
        out.fail(json!({
            "blocks_agree": blocks_agree,
            "morphism": morphism,
            "rounds": eq.rounds,
            "instance": instance(&c, &d, &sig),
        }));
    }
    let self_bisim = greatest_bisimulation(&c, &c, &sig)?;
    if !is_equivalence(&self_bisim) {
        out.fail(json!({ "not_an_equivalence": relation_to_json(&self_bisim, &c, &c) }));
    }
    Ok(())
}

/// A relation likely to be interesting for bisimulation questions: random,
/// or a random part of the greatest bisimulation, optionally closed.
fn interesting_relation(
    rng: &mut TrialRng,
    c: &Coalgebra,
    d: &Coalgebra,
    sig: &LambdaSignature,
) -> Result<Relation> {
    Ok(match rng.gen_range(0..4) {
        0 => {
            let density = rng.gen_range(0.1..0.7);
            random_relation(rng, c.len(), d.len(), density)
        }
        1 => greatest_bisimulation(c, d, sig)?,
        2 => {
            let g = greatest_bisimulation(c, d, sig)?;
            random_subrelation(rng, &g, 0.5)
        }
        _ => {
            let g = greatest_bisimulation(c, d, sig)?;
            random_subrelation(rng, &g, 0.5).difunctional_closure()
        }
    })
}

fn prop_difunctional(rng: &mut TrialRng, kind: KindTag, out: &mut Outcome) -> Result<()> {
    let (c, d) = pair(rng, kind, 1..=4, false);
    let sig = any_signature(rng, kind, &[&c, &d])?;
    let s = interesting_relation(rng, &c, &d, &sig)?;
    let up_to = is_bisimulation_up_to_difunctionality(&s, &c, &d, &sig)?.holds;
    let closed = is_bisimulation(&s.difunctional_closure(), &c, &d, &sig)?.holds;
    out.count(kind.name(), 1);
    if up_to {
        out.count("holding", 1);
    }
    if up_to != closed {
        out.fail(with_relation(
            json!({ "up_to": up_to, "closure_is_bisimulation": closed, "instance": instance(&c, &d, &sig) }),
            "relation",
            &s,
            &c,
            &d,
        ));
    }
    Ok(())
}

fn t_implies_lambda(rng: &mut TrialRng, kind: KindTag, out: &mut Outcome) -> Result<()> {
    let states = if kind == KindTag::Neighborhood {
        1..=3
    } else {
        1..=4
    };
    let (c, d) = pair(rng, kind, states, true);
    let sig = any_signature(rng, kind, &[&c, &d])?;
    let s = interesting_relation(rng, &c, &d, &sig)?;
    out.count(kind.name(), 1);
    if let Some(coupling) = t_bisimulation_check(&s, &c, &d)? {
        out.count("couplings", 1);
        if !is_bisimulation(&s, &c, &d, &sig)?.holds {
            out.fail(with_relation(
                json!({ "variant": "plain", "coupling": coupling.to_json(&c, &d), "instance": instance(&c, &d, &sig) }),
                "relation",
                &s,
                &c,
                &d,
            ));
        }
    }
    if let Some(coupling) = t_bisim_up_to_difunctionality_check(&s, &c, &d)? {
        out.count("up-to-couplings", 1);
        if sig.is_separating() && !s.is_subset(&greatest_bisimulation(&c, &d, &sig)?) {
            out.fail(with_relation(
                json!({ "variant": "up-to-sound", "instance": instance(&c, &d, &sig) }),
                "relation",
                &s,
                &c,
                &d,
            ));
        }
        if !is_bisimulation_up_to_difunctionality(&s, &c, &d, &sig)?.holds {
            out.fail(with_relation(
                json!({ "variant": "up-to", "coupling": coupling.to_json(&c, &d), "instance": instance(&c, &d, &sig) }),
                "relation",
                &s,
                &c,
                &d,
            ));
        }
    }
    Ok(())
}

fn coupling_converse(
    s: &Relation,
    c: &Coalgebra,
    d: &Coalgebra,
    sig: &LambdaSignature,
    out: &mut Outcome,
) -> Result<()> {
    if s.is_difunctional() && is_bisimulation(s, c, d, sig)?.holds {
        out.count("difunctional-bisimulations", 1);
        if t_bisimulation_check(s, c, d)?.is_none() {
            out.fail(with_relation(
                json!({ "variant": "plain", "instance": instance(c, d, sig) }),
                "relation",
                s,
                c,
                d,
            ));
        }
    }
    if is_bisimulation_up_to_difunctionality(s, c, d, sig)?.holds {
        out.count("up-to-bisimulations", 1);
        if t_bisim_up_to_difunctionality_check(s, c, d)?.is_none() {
            out.fail(with_relation(
                json!({ "variant": "up-to", "instance": instance(c, d, sig) }),
                "relation",
                s,
                c,
                d,
            ));
        }
    }
    Ok(())
}

/// Even seeds: every relation between two models with at most three
/// states. Odd seeds: sampled relations between larger models.
fn t_bisim_converse(rng: &mut TrialRng, kind: KindTag, seed: u64, out: &mut Outcome) -> Result<()> {
    if seed.is_multiple_of(2) {
        let (c, d) = pair(rng, kind, 1..=3, true);
        let sig = signature(rng, kind, &[&c, &d], true)?;
        for s in all_relations(c.len(), d.len())? {
            out.count("exhaustive-relations", 1);
            coupling_converse(&s, &c, &d, &sig, out)?;
        }
        out.count("exhaustive-instances", 1);
    } else {
        let (c, d) = pair(rng, kind, 4..=6, true);
        let sig = signature(rng, kind, &[&c, &d], true)?;
        for _ in 0..4 {
            let s = interesting_relation(rng, &c, &d, &sig)?;
            out.count("random-relations", 1);
            coupling_converse(&s, &c, &d, &sig, out)?;
        }
        out.count("random-instances", 1);
    }
    Ok(())
}

/// A coalgebra on `n` states all of whose transitions are drawn from
/// `values` in turn; used to resolve signatures for isolated values.
fn host(kind: KindTag, n: usize, values: &[FunctorValue]) -> Coalgebra {
    let fk = match kind {
        KindTag::Kripke => FunctorKind::Kripke {
            atoms: vec!["p".into(), "q".into()],
        },
        KindTag::Multiset => FunctorKind::Multiset,
        KindTag::Distribution => FunctorKind::Distribution,
        KindTag::Neighborhood => FunctorKind::Neighborhood,
    };
    Coalgebra::new(
        fk,
        (0..n.max(values.len())).map(|i| format!("s{i}")).collect(),
        (0..n.max(values.len()))
            .map(|i| values[i % values.len()].clone())
            .collect(),
    )
    .expect("host coalgebra is valid")
}

fn preimage(f: &[State], a: &StateSet) -> StateSet {
    (0..f.len()).filter(|&x| a.contains(&f[x])).collect()
}

fn random_set(rng: &mut TrialRng, n: usize) -> StateSet {
    (0..n).filter(|_| rng.gen_bool(0.5)).collect()
}

fn functor_laws(rng: &mut TrialRng, kind: KindTag, out: &mut Outcome) -> Result<()> {
    let cfg = config(kind, 1..=5, false);
    let n = rng.gen_range(1..=5);
    let (m, k) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
    let t = random_value(rng, &cfg, n);
    let u = random_value(rng, &cfg, n);
    let f = random_map(rng, n, m);
    let g = random_map(rng, m, k);
    let id: Vec<State> = (0..n).collect();
    let gf: Vec<State> = f.iter().map(|&y| g[y]).collect();
    let name = |s: State| format!("s{s}");
    let show = |v: &FunctorValue| value_to_json(v, &name);
    out.count(kind.name(), 1);
    if t.relabel(&id)? != t {
        out.fail(json!({ "law": "identity", "value": show(&t) }));
    }
    if t.relabel(&f)?.relabel(&g)? != t.relabel(&gf)? {
        out.fail(json!({ "law": "composition", "value": show(&t), "f": f, "g": g }));
    }
    let wide = n + rng.gen_range(0..=2);
    let inj = random_injection(rng, n, wide);
    if t != u && t.relabel(&inj)? == u.relabel(&inj)? {
        out.fail(json!({ "law": "injective", "t": show(&t), "u": show(&u), "map": inj }));
    }
    let pushed = t.relabel(&f)?;
    let sig = signature(
        rng,
        kind,
        &[
            &host(kind, n, std::slice::from_ref(&t)),
            &host(kind, m, std::slice::from_ref(&pushed)),
        ],
        true,
    )?;
    for _ in 0..4 {
        let a = random_set(rng, m);
        let pre = preimage(&f, &a);
        for h in sig.modalities() {
            out.count("naturality", 1);
            if satisfies(&pushed, h, &a)? != satisfies(&t, h, &pre)? {
                out.fail(json!({
                    "law": "naturality",
                    "value": show(&t),
                    "map": f,
                    "modality": h.to_string(),
                    "set": a,
                }));
            }
        }
    }
    Ok(())
}

fn stability(rng: &mut TrialRng, kind: KindTag, out: &mut Outcome) -> Result<()> {
    let (c, d) = pair(rng, kind, 1..=4, false);
    let e = model(rng, kind, 1..=4, false);
    let sig = any_signature(rng, kind, &[&c, &d, &e])?;
    let draw = |rng: &mut TrialRng, l: usize, r: usize| {
        let density = rng.gen_range(0.3..0.9);
        random_relation(rng, l, r, density)
    };
    let s1 = simulation_within(&draw(rng, c.len(), d.len()), &c, &d, &sig)?;
    let s2 = simulation_within(&draw(rng, c.len(), d.len()), &c, &d, &sig)?;
    let t = simulation_within(&draw(rng, d.len(), e.len()), &d, &e, &sig)?;
    out.count(kind.name(), 1);
    let union = s1.union(&s2);
    if !is_simulation(&union, &c, &d, &sig)?.holds {
        out.fail(with_relation(
            json!({ "closure": "union", "instance": instance(&c, &d, &sig) }),
            "relation",
            &union,
            &c,
            &d,
        ));
    }
    let composed = s1.compose(&t);
    if !is_simulation(&composed, &c, &e, &sig)?.holds {
        out.fail(with_relation(
            json!({ "closure": "composition", "instance": instance(&c, &e, &sig) }),
            "relation",
            &composed,
            &c,
            &e,
        ));
    }
    if !is_simulation(&Relation::identity(c.len()), &c, &c, &sig)?.holds {
        out.fail(json!({ "closure": "identity", "model": model_to_json(&c) }));
    }
    let g = greatest_bisimulation(&c, &c, &sig)?;
    if !is_equivalence(&g) {
        out.fail(json!({ "closure": "equivalence", "relation": relation_to_json(&g, &c, &c) }));
    }
    Ok(())
}

fn homomorphism(rng: &mut TrialRng, kind: KindTag, out: &mut Outcome) -> Result<()> {
    let (c, d) = pair(rng, kind, 1..=5, false);
    let sig = any_signature(rng, kind, &[&c, &d])?;
    let f = random_map(rng, c.len(), d.len());
    let criterion = is_lambda_homomorphism(&f, &c, &d, &sig)?;
    let graph = is_simulation(&Relation::graph(&f, d.len()), &c, &d, &sig)?.holds;
    out.count(kind.name(), 1);
    if criterion != graph {
        out.fail(json!({ "map": f, "criterion": criterion, "graph": graph, "instance": instance(&c, &d, &sig) }));
    }
    // the quotient map by the stable partition is a coalgebra morphism
    let (p, _) = stable_partition(&c, &c)?;
    let w = quotient_witness(&p.restrict(), &c, &c)?;
    let z = w.coalgebra(&c)?;
    let qsig = any_signature(rng, kind, &[&c, &z])?;
    let kappa = Relation::graph(&w.kappa_left, z.len());
    out.count("morphisms", 1);
    if !is_bisimulation(&kappa, &c, &z, &qsig)?.holds
        || !is_lambda_homomorphism(&w.kappa_left, &c, &z, &qsig)?
    {
        out.fail(json!({ "morphism": w.to_json(&c, &c), "instance": instance(&c, &z, &qsig) }));
    }
    Ok(())
}

fn monotony(rng: &mut TrialRng, kind: KindTag, out: &mut Outcome) -> Result<()> {
    let cfg = config(kind, 1..=6, false);
    let n = rng.gen_range(1..=6);
    let t = random_value(rng, &cfg, n);
    let sig = any_signature(rng, kind, &[&host(kind, n, std::slice::from_ref(&t))])?;
    let base = t.base();
    out.count(kind.name(), 1);
    for h in sig.modalities() {
        for mask in 0u32..1 << n {
            let a: StateSet = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let restricted: StateSet = a.intersection(&base).copied().collect();
            out.count("base-guarantee", 1);
            if satisfies(&t, h, &a)? != satisfies(&t, h, &restricted)? {
                out.fail(json!({ "property": "base", "modality": h.to_string(), "set": a }));
            }
            let extra = random_set(rng, n);
            let b: StateSet = a.union(&extra).copied().collect();
            out.count("monotony", 1);
            if satisfies(&t, h, &a)? && !satisfies(&t, h, &b)? {
                out.fail(
                    json!({ "property": "monotony", "modality": h.to_string(), "a": a, "b": b }),
                );
            }
        }
    }
    Ok(())
}

fn lambda_preorder(rng: &mut TrialRng, kind: KindTag, out: &mut Outcome) -> Result<()> {
    let cfg = config(kind, 1..=4, false);
    let n = rng.gen_range(1..=4);
    let vals: Vec<FunctorValue> = (0..3).map(|_| random_value(rng, &cfg, n)).collect();
    let h = host(kind, n, &vals);
    let sig = any_signature(rng, kind, &[&h])?;
    let (t, u, v) = (&vals[0], &vals[1], &vals[2]);
    let name = |s: State| format!("s{s}");
    out.count(kind.name(), 1);
    if !lambda_leq(t, t, &sig)? {
        out.fail(json!({ "property": "reflexive", "t": value_to_json(t, &name) }));
    }
    if lambda_leq(t, u, &sig)? && lambda_leq(u, v, &sig)? && !lambda_leq(t, v, &sig)? {
        out.fail(json!({
            "property": "transitive",
            "t": value_to_json(t, &name),
            "u": value_to_json(u, &name),
            "v": value_to_json(v, &name),
        }));
    }
    let sep = signature(rng, kind, &[&h], true)?;
    let probe = distinguishing_pair(t, u, &sep)?;
    out.count("separation", 1);
    if probe.is_some() == (t == u) {
        out.fail(json!({
            "property": "separation",
            "t": value_to_json(t, &name),
            "u": value_to_json(u, &name),
            "signature": sep.modalities().iter().map(ToString::to_string).collect::<Vec<_>>(),
        }));
    }
    Ok(())
}

fn n_chain_search(rng: &mut TrialRng, kind: KindTag, out: &mut Outcome) -> Result<()> {
    let c = model(rng, kind, 1..=3, false);
    let d = model(rng, kind, 1..=2, false);
    let sig = any_signature(rng, kind, &[&c, &d])?;
    let n = rng.gen_range(0..=3);
    let greatest = n_simulation_chain(&c, &d, &sig, n)?
        .pop()
        .expect("chain is nonempty");
    let greatest_bi = greatest_n_bisimulation(&c, &d, &sig, n)?;
    let brute = brute_force_n_simulations(&c, &d, &sig, n)?;
    let brute_bi = brute_force_n_bisimulations(&c, &d, &sig, n)?;
    out.count(kind.name(), 1);
    for s in all_relations(c.len(), d.len())? {
        out.count("relations", 1);
        if brute.contains(&s) != s.is_subset(&greatest)
            || brute_bi.contains(&s) != s.is_subset(&greatest_bi)
        {
            out.fail(with_relation(
                json!({ "n": n, "instance": instance(&c, &d, &sig) }),
                "relation",
                &s,
                &c,
                &d,
            ));
            break;
        }
    }
    Ok(())
}

fn greatest_fixpoint(rng: &mut TrialRng, kind: KindTag, out: &mut Outcome) -> Result<()> {
    let c = model(rng, kind, 1..=3, false);
    let d = model(rng, kind, 1..=2, false);
    let sig = any_signature(rng, kind, &[&c, &d])?;
    out.count(kind.name(), 1);
    let sim = greatest_simulation(&c, &d, &sig)?;
    let union = union_of_simulations(&c, &d, &sig)?;
    let mut bi_union = Relation::empty(c.len(), d.len());
    for s in all_relations(c.len(), d.len())? {
        if brute_force_simulation_oracle(&s, &c, &d, &sig)?
            && brute_force_simulation_oracle(&s.inverse(), &d, &c, &sig)?
        {
            bi_union = bi_union.union(&s);
        }
    }
    let bisim = greatest_bisimulation(&c, &d, &sig)?;
    if sim != union || bisim != bi_union {
        out.fail(json!({
            "greatest_simulation": relation_to_json(&sim, &c, &d),
            "union_of_simulations": relation_to_json(&union, &c, &d),
            "greatest_bisimulation": relation_to_json(&bisim, &c, &d),
            "union_of_bisimulations": relation_to_json(&bi_union, &c, &d),
            "instance": instance(&c, &d, &sig),
        }));
    }
    Ok(())
}

fn kripke_oracle(rng: &mut TrialRng, out: &mut Outcome) -> Result<()> {
    let (c, d) = pair(rng, KindTag::Kripke, 1..=6, false);
    let atoms = c.kind().atoms().to_vec();
    let full = LambdaSignature::kripke(true, true, &atoms);
    let diamond = LambdaSignature::kripke(false, true, &atoms);
    let engine = greatest_bisimulation(&c, &d, &full)?;
    let oracle = kripke_bisimilarity_oracle(&c, &d);
    out.count("kripke", 1);
    if engine != oracle {
        out.fail(json!({
            "engine": relation_to_json(&engine, &c, &d),
            "oracle": relation_to_json(&oracle, &c, &d),
            "instance": instance(&c, &d, &full),
        }));
    }
    if !engine.is_subset(&greatest_bisimulation(&c, &d, &diamond)?) {
        out.fail(json!({ "coarser": "diamond-only bisimilarity misses pairs", "instance": instance(&c, &d, &full) }));
    }
    Ok(())
}

fn generator_validity(
    rng: &mut TrialRng,
    kind: KindTag,
    seed: u64,
    out: &mut Outcome,
) -> Result<()> {
    let cfg = GeneratorConfig::new(kind, seed)
        .states(1..=rng.gen_range(1..=8))
        .branching(rng.gen_range(0..=4))
        .infinite_percent(if kind == KindTag::Multiset { 20 } else { 0 });
    let c = super::generate::generate_coalgebra(&cfg);
    out.count(kind.name(), 1);
    if c.validate().is_err() || c != super::generate::generate_coalgebra(&cfg) {
        out.fail(json!({ "config": cfg, "model": model_to_json(&c) }));
    }
    if let KindTag::Distribution = kind {
        for v in c.transitions() {
            if let FunctorValue::Distribution(m) = v {
                if m.values()
                    .any(|r| *r.denom() > cfg.denominator_cap as i128 || r.is_zero())
                {
                    out.fail(json!({ "config": cfg, "model": model_to_json(&c) }));
                }
            }
        }
    }
    Ok(())
}

fn open_problem_search(rng: &mut TrialRng, kind: KindTag, out: &mut Outcome) -> Result<()> {
    let (c, d) = pair(rng, kind, 1..=3, true);
    let sig = signature(rng, kind, &[&c, &d], true)?;
    for s in all_relations(c.len(), d.len())? {
        if !is_bisimulation(&s, &c, &d, &sig)?.holds {
            continue;
        }
        let label = if s.is_difunctional() {
            "difunctional-bisimulations"
        } else {
            "non-difunctional-bisimulations"
        };
        out.count(label, 1);
        if t_bisimulation_check(&s, &c, &d)?.is_none() {
            out.count("without-coupling", 1);
            out.fail(with_relation(
                json!({ "finding": "Λ-bisimulation without a coupling", "difunctional": s.is_difunctional(), "instance": instance(&c, &d, &sig) }),
                "relation",
                &s,
                &c,
                &d,
            ));
        }
    }
    Ok(())
}
