//! Λ-simulations and Λ-bisimulations between finite coalgebras: checking,
//! greatest fixpoints, bounded-depth chains and up-to-difunctionality.
//!
//! The generic engine quantifies over all `A ⊆ base(ξ(x))`. Per-kind fast
//! paths decide the same condition without subset enumeration:
//!
//! * Kripke `◇`: forth condition; `□`: back condition; atoms: inclusion of
//!   labels.
//! * distributions and multisets over a measure-complete signature:
//!   `ζ(y)(S[A]) ≥ ξ(x)(A)` for every `A ⊆ supp ξ(x)`.
//! * neighbourhoods: `S[m] ∈ ζ(y)` for every minimal `m` of `ξ(x)`.

use std::collections::BTreeMap;

use num_traits::Zero;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;

use crate::coalgebra::{Coalgebra, FunctorValue, State, StateSet};
use crate::error::{Error, Result};
use crate::liftings::{satisfies, subsets, LambdaSignature};
use crate::logic::Modality;
use crate::num::{Rational, Weight};
use crate::relation::Relation;

/// Upper bound on recorded violations per direction.
pub const MAX_VIOLATIONS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `S` as a simulation from the left coalgebra to the right one.
    Forward,
    /// `S⁻¹` as a simulation from the right coalgebra to the left one.
    Backward,
}

/// `source ⊨ ♥A` holds but the image condition fails at `target`. For
/// backward violations `source` lives in the right coalgebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub direction: Direction,
    pub source: State,
    pub target: State,
    pub modality: Modality,
    pub set: StateSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SimulationReport {
    pub holds: bool,
    pub violations: Vec<Violation>,
}

impl SimulationReport {
    /// JSON rendering with state names from the two coalgebras.
    pub fn to_json(&self, c: &Coalgebra, d: &Coalgebra) -> serde_json::Value {
        let violations: Vec<_> = self
            .violations
            .iter()
            .map(|v| {
                let (src, dst) = match v.direction {
                    Direction::Forward => (c, d),
                    Direction::Backward => (d, c),
                };
                serde_json::json!({
                    "direction": v.direction,
                    "source": src.name(v.source),
                    "target": dst.name(v.target),
                    "modality": v.modality.to_string(),
                    "set": v.set.iter().map(|&s| src.name(s)).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({ "holds": self.holds, "violations": violations })
    }
}

/// Which checker decides single pairs inside fixpoint computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    /// Subset enumeration only.
    Generic,
    /// Fast path when one applies, generic otherwise.
    Auto,
}

fn check_inputs(s: &Relation, c: &Coalgebra, d: &Coalgebra, sig: &LambdaSignature) -> Result<()> {
    check_models(c, d, sig)?;
    if s.left_size() != c.len() || s.right_size() != d.len() {
        return Err(Error::CarrierMismatch(format!(
            "relation is over {}×{} states, coalgebras have {} and {}",
            s.left_size(),
            s.right_size(),
            c.len(),
            d.len()
        )));
    }
    Ok(())
}

fn check_models(c: &Coalgebra, d: &Coalgebra, sig: &LambdaSignature) -> Result<()> {
    sig.check_kind(c.tag())?;
    sig.check_kind(d.tag())
}

/// All `(♥, A)` with `A ⊆ base(t)`, `t ⊨ ♥A` and `u ⊭ ♥ image[A]`, up to
/// `limit` of them.
fn generic_pair_violations(
    t: &FunctorValue,
    u: &FunctorValue,
    sig: &LambdaSignature,
    image: &Relation,
    limit: usize,
) -> Result<Vec<(Modality, StateSet)>> {
    let mut out = Vec::new();
    if limit == 0 {
        return Ok(out);
    }
    for a in subsets(&t.base())? {
        let mut target: Option<StateSet> = None;
        for h in sig.modalities() {
            if satisfies(t, h, &a)? {
                let img = target.get_or_insert_with(|| image.image(&a));
                if !satisfies(u, h, img)? {
                    out.push((h.clone(), a.clone()));
                    if out.len() >= limit {
                        return Ok(out);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Per-kind characterization of the simulation condition for one pair.
/// `None` when no fast path applies to `sig`.
pub fn fast_pair_ok(
    t: &FunctorValue,
    u: &FunctorValue,
    sig: &LambdaSignature,
    image: &Relation,
) -> Option<bool> {
    match (t, u) {
        (
            FunctorValue::Kripke {
                props: pt,
                succ: st,
            },
            FunctorValue::Kripke {
                props: pu,
                succ: su,
            },
        ) => Some(sig.modalities().iter().all(|h| {
            match h {
                Modality::Atom(p) => !pt.contains(p) || pu.contains(p),
                // forth: every successor of x is matched by a successor of y
                Modality::Diamond => st
                    .iter()
                    .all(|&x1| image.successors(x1).any(|y1| su.contains(&y1))),
                // back: every successor of y is matched by a successor of x
                Modality::Box => su
                    .iter()
                    .all(|y1| st.iter().any(|&x1| image.contains(x1, *y1))),
                _ => false,
            }
        })),
        (FunctorValue::Distribution(mt), FunctorValue::Distribution(mu)) => {
            if !sig.is_measure_complete() {
                return None;
            }
            let base: StateSet = mt.keys().copied().collect();
            let sets = subsets(&base).ok()?;
            let measure = |m: &BTreeMap<State, Rational>, a: &StateSet| -> Rational {
                a.iter().filter_map(|s| m.get(s)).copied().sum()
            };
            Some(sets.into_iter().all(|a| {
                let lhs = measure(mt, &a);
                lhs.is_zero() || measure(mu, &image.image(&a)) >= lhs
            }))
        }
        (FunctorValue::Multiset(wt), FunctorValue::Multiset(wu)) => {
            if !sig.is_measure_complete() {
                return None;
            }
            let base: StateSet = wt.keys().copied().collect();
            let sets = subsets(&base).ok()?;
            let measure = |m: &BTreeMap<State, Weight>, a: &StateSet| -> Weight {
                a.iter().filter_map(|s| m.get(s)).copied().sum()
            };
            Some(
                sets.into_iter()
                    .all(|a| measure(wu, &image.image(&a)) >= measure(wt, &a)),
            )
        }
        (FunctorValue::Neighborhood(mt), FunctorValue::Neighborhood(mu)) => {
            if !sig.contains(&Modality::NbhdBox) {
                return Some(true);
            }
            Some(mt.iter().all(|m| {
                let img = image.image(m);
                mu.iter().any(|n| n.is_subset(&img))
            }))
        }
        _ => None,
    }
}

fn pair_ok(
    t: &FunctorValue,
    u: &FunctorValue,
    sig: &LambdaSignature,
    image: &Relation,
    engine: Engine,
) -> Result<bool> {
    if engine == Engine::Auto {
        if let Some(ok) = fast_pair_ok(t, u, sig, image) {
            return Ok(ok);
        }
    }
    Ok(generic_pair_violations(t, u, sig, image, 1)?.is_empty())
}

/// Checks `pairs` (oriented from `c` to `d`) with images under `image`.
fn check_direction(
    pairs: impl Iterator<Item = (State, State)>,
    image: &Relation,
    c: &Coalgebra,
    d: &Coalgebra,
    sig: &LambdaSignature,
    direction: Direction,
) -> Result<(bool, Vec<Violation>)> {
    let mut holds = true;
    let mut violations = Vec::new();
    for (x, y) in pairs {
        let room = MAX_VIOLATIONS - violations.len();
        let found =
            generic_pair_violations(c.transition(x), d.transition(y), sig, image, room.max(1))?;
        if !found.is_empty() {
            holds = false;
            for (modality, set) in found.into_iter().take(room) {
                violations.push(Violation {
                    direction,
                    source: x,
                    target: y,
                    modality,
                    set,
                });
            }
        }
    }
    Ok((holds, violations))
}

/// Is `s` a Λ-simulation from `c` to `d`? Violations are listed in
/// lexicographic pair order, then by subset mask and operator order.
pub fn is_simulation(
    s: &Relation,
    c: &Coalgebra,
    d: &Coalgebra,
    sig: &LambdaSignature,
) -> Result<SimulationReport> {
    check_inputs(s, c, d, sig)?;
    let (holds, violations) = check_direction(s.iter(), s, c, d, sig, Direction::Forward)?;
    Ok(SimulationReport { holds, violations })
}

/// Fast-path verdict for the whole relation, if every pair has one.
pub fn is_simulation_fast(
    s: &Relation,
    c: &Coalgebra,
    d: &Coalgebra,
    sig: &LambdaSignature,
) -> Result<Option<bool>> {
    check_inputs(s, c, d, sig)?;
    let mut all = true;
    for (x, y) in s.iter() {
        match fast_pair_ok(c.transition(x), d.transition(y), sig, s) {
            Some(ok) => all &= ok,
            None => return Ok(None),
        }
    }
    Ok(Some(all))
}

/// `s` and `s⁻¹` are both Λ-simulations.
pub fn is_bisimulation(
    s: &Relation,
    c: &Coalgebra,
    d: &Coalgebra,
    sig: &LambdaSignature,
) -> Result<SimulationReport> {
    check_inputs(s, c, d, sig)?;
    let inv = s.inverse();
    let (fwd, mut violations) = check_direction(s.iter(), s, c, d, sig, Direction::Forward)?;
    let (bwd, back) = check_direction(inv.iter(), &inv, d, c, sig, Direction::Backward)?;
    violations.extend(back);
    Ok(SimulationReport {
        holds: fwd && bwd,
        violations,
    })
}

/// Pairs of `s` checked with images under the difunctional closure of `s`,
/// in both directions.
pub fn is_bisimulation_up_to_difunctionality(
    s: &Relation,
    c: &Coalgebra,
    d: &Coalgebra,
    sig: &LambdaSignature,
) -> Result<SimulationReport> {
    check_inputs(s, c, d, sig)?;
    let closure = s.difunctional_closure();
    let closure_inv = closure.inverse();
    let (fwd, mut violations) = check_direction(s.iter(), &closure, c, d, sig, Direction::Forward)?;
    let (bwd, back) = check_direction(
        s.iter().map(|(x, y)| (y, x)),
        &closure_inv,
        d,
        c,
        sig,
        Direction::Backward,
    )?;
    violations.extend(back);
    Ok(SimulationReport {
        holds: fwd && bwd,
        violations,
    })
}

/// One refinement round: keep the pairs of `r` that pass `keep`. Pairs are
/// independent given `r`, so they are scanned in parallel.
fn refine(r: &Relation, keep: impl Fn(State, State) -> Result<bool> + Sync) -> Result<Relation> {
    let pairs: Vec<(State, State)> = r.iter().collect();
    #[cfg(feature = "parallel")]
    let verdicts: Vec<Result<bool>> = pairs.par_iter().map(|&(x, y)| keep(x, y)).collect();
    #[cfg(not(feature = "parallel"))]
    let verdicts: Vec<Result<bool>> = pairs.iter().map(|&(x, y)| keep(x, y)).collect();
    let mut kept = Vec::with_capacity(pairs.len());
    for (pair, verdict) in pairs.into_iter().zip(verdicts) {
        if verdict? {
            kept.push(pair);
        }
    }
    Ok(Relation::new(r.left_size(), r.right_size(), kept))
}

fn forward_keep<'a>(
    c: &'a Coalgebra,
    d: &'a Coalgebra,
    sig: &'a LambdaSignature,
    r: &'a Relation,
    engine: Engine,
) -> impl Fn(State, State) -> Result<bool> + Sync + 'a {
    move |x, y| pair_ok(c.transition(x), d.transition(y), sig, r, engine)
}

/// Greatest Λ-simulation from `c` to `d`.
pub fn greatest_simulation(
    c: &Coalgebra,
    d: &Coalgebra,
    sig: &LambdaSignature,
) -> Result<Relation> {
    greatest_simulation_with(c, d, sig, Engine::Auto)
}

pub fn greatest_simulation_with(
    c: &Coalgebra,
    d: &Coalgebra,
    sig: &LambdaSignature,
    engine: Engine,
) -> Result<Relation> {
    check_models(c, d, sig)?;
    let mut r = Relation::full(c.len(), d.len());
    loop {
        let next = refine(&r, forward_keep(c, d, sig, &r, engine))?;
        if next.len() == r.len() {
            return Ok(r);
        }
        r = next;
    }
}

/// Greatest Λ-bisimulation between `c` and `d`.
pub fn greatest_bisimulation(
    c: &Coalgebra,
    d: &Coalgebra,
    sig: &LambdaSignature,
) -> Result<Relation> {
    greatest_bisimulation_with(c, d, sig, Engine::Auto)
}

pub fn greatest_bisimulation_with(
    c: &Coalgebra,
    d: &Coalgebra,
    sig: &LambdaSignature,
    engine: Engine,
) -> Result<Relation> {
    check_models(c, d, sig)?;
    let mut r = Relation::full(c.len(), d.len());
    loop {
        let inv = r.inverse();
        let next = refine(&r, |x, y| {
            Ok(pair_ok(c.transition(x), d.transition(y), sig, &r, engine)?
                && pair_ok(d.transition(y), c.transition(x), sig, &inv, engine)?)
        })?;
        if next.len() == r.len() {
            return Ok(r);
        }
        r = next;
    }
}

/// `R₀ = X × Y`, `R_{k+1}` = pairs of `R_k` satisfying the simulation
/// condition with images under `R_k`. Returns `[R₀, …, R_n]`.
pub fn n_simulation_chain(
    c: &Coalgebra,
    d: &Coalgebra,
    sig: &LambdaSignature,
    n: usize,
) -> Result<Vec<Relation>> {
    check_models(c, d, sig)?;
    let mut chain = vec![Relation::full(c.len(), d.len())];
    for _ in 0..n {
        let r = chain.last().expect("chain is nonempty");
        let next = refine(r, forward_keep(c, d, sig, r, Engine::Auto))?;
        chain.push(next);
    }
    Ok(chain)
}

/// `s` is a Λ-n-simulation iff it is contained in the greatest one.
pub fn is_n_simulation(
    s: &Relation,
    c: &Coalgebra,
    d: &Coalgebra,
    sig: &LambdaSignature,
    n: usize,
) -> Result<bool> {
    check_inputs(s, c, d, sig)?;
    let chain = n_simulation_chain(c, d, sig, n)?;
    Ok(s.is_subset(&chain[n]))
}

/// `B₀ = X × Y`, `B_{k+1}` = pairs of `B_k` satisfying the simulation
/// condition in both directions with images under `B_k` and `B_k⁻¹`.
/// Returns `[B₀, …, B_n]`.
pub fn n_bisimulation_chain(
    c: &Coalgebra,
    d: &Coalgebra,
    sig: &LambdaSignature,
    n: usize,
) -> Result<Vec<Relation>> {
    check_models(c, d, sig)?;
    let mut chain = vec![Relation::full(c.len(), d.len())];
    for _ in 0..n {
        let r = chain.last().expect("chain is nonempty");
        let inv = r.inverse();
        let next = refine(r, |x, y| {
            Ok(
                pair_ok(c.transition(x), d.transition(y), sig, r, Engine::Auto)?
                    && pair_ok(d.transition(y), c.transition(x), sig, &inv, Engine::Auto)?,
            )
        })?;
        chain.push(next);
    }
    Ok(chain)
}

/// Greatest Λ-n-bisimulation, the last relation of the bisimulation chain.
/// The witnessing chain consists of bisimulations at every depth, so this
/// is in general smaller than mutual n-similarity.
pub fn greatest_n_bisimulation(
    c: &Coalgebra,
    d: &Coalgebra,
    sig: &LambdaSignature,
    n: usize,
) -> Result<Relation> {
    Ok(n_bisimulation_chain(c, d, sig, n)?
        .pop()
        .expect("chain is nonempty"))
}

pub fn is_n_bisimulation(
    s: &Relation,
    c: &Coalgebra,
    d: &Coalgebra,
    sig: &LambdaSignature,
    n: usize,
) -> Result<bool> {
    check_inputs(s, c, d, sig)?;
    Ok(s.is_subset(&greatest_n_bisimulation(c, d, sig, n)?))
}
