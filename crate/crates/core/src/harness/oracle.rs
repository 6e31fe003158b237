//! Brute-force reference implementations used to validate the engines.

use std::collections::BTreeSet;

use crate::coalgebra::{Coalgebra, FunctorValue, State, StateSet};
use crate::error::{Error, Result};
use crate::liftings::{satisfies, LambdaSignature};
use crate::logic::Modality;
use crate::relation::Relation;

pub const ORACLE_MAX_CARRIER: usize = 12;

fn image(pairs: &[(State, State)], a: &StateSet) -> StateSet {
    pairs
        .iter()
        .filter(|(x, _)| a.contains(x))
        .map(|&(_, y)| y)
        .collect()
}

/// First failure of the simulation condition quantifying over every
/// `A ⊆ X`, not only subsets of the base.
pub fn brute_force_simulation_witness(
    s: &Relation,
    c: &Coalgebra,
    d: &Coalgebra,
    sig: &LambdaSignature,
) -> Result<Option<(State, State, Modality, StateSet)>> {
    let n = c.len();
    if n > ORACLE_MAX_CARRIER {
        return Err(Error::CarrierTooLarge {
            size: n,
            limit: ORACLE_MAX_CARRIER,
        });
    }
    let pairs: Vec<(State, State)> = s.iter().collect();
    for &(x, y) in &pairs {
        for mask in 0u32..1 << n {
            let a: StateSet = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let img = image(&pairs, &a);
            for h in sig.modalities() {
                if satisfies(c.transition(x), h, &a)? && !satisfies(d.transition(y), h, &img)? {
                    return Ok(Some((x, y, h.clone(), a)));
                }
            }
        }
    }
    Ok(None)
}

pub fn brute_force_simulation_oracle(
    s: &Relation,
    c: &Coalgebra,
    d: &Coalgebra,
    sig: &LambdaSignature,
) -> Result<bool> {
    Ok(brute_force_simulation_witness(s, c, d, sig)?.is_none())
}

/// Classic strong bisimilarity of labelled graphs on the disjoint union,
/// by removing pairs that fail the forth or back condition.
pub fn kripke_bisimilarity_oracle(c: &Coalgebra, d: &Coalgebra) -> Relation {
    let n = c.len() + d.len();
    let value = |i: usize| {
        if i < c.len() {
            (c.transition(i), 0)
        } else {
            (d.transition(i - c.len()), c.len())
        }
    };
    let graph: Vec<(BTreeSet<String>, Vec<usize>)> = (0..n)
        .map(|i| match value(i) {
            (FunctorValue::Kripke { props, succ }, offset) => {
                (props.clone(), succ.iter().map(|s| s + offset).collect())
            }
            _ => panic!("kripke oracle on a non-kripke coalgebra"),
        })
        .collect();
    let mut rel = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            rel[i][j] = graph[i].0 == graph[j].0;
        }
    }
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if !rel[i][j] {
                    continue;
                }
                let forth = graph[i]
                    .1
                    .iter()
                    .all(|&a| graph[j].1.iter().any(|&b| rel[a][b]));
                let back = graph[j]
                    .1
                    .iter()
                    .all(|&b| graph[i].1.iter().any(|&a| rel[a][b]));
                if !(forth && back) {
                    rel[i][j] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    Relation::new(
        c.len(),
        d.len(),
        (0..c.len())
            .flat_map(|x| (0..d.len()).map(move |y| (x, y)))
            .filter(|&(x, y)| rel[x][c.len() + y]),
    )
}

/// Every relation between carriers of the given sizes. At most `2^16`.
pub fn all_relations(left: usize, right: usize) -> Result<Vec<Relation>> {
    let cells = left * right;
    if cells > 16 {
        return Err(Error::Budget(format!(
            "{cells} cells is too many to enumerate relations"
        )));
    }
    Ok((0u32..1 << cells)
        .map(|mask| {
            Relation::new(
                left,
                right,
                (0..cells)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| (i / right, i % right)),
            )
        })
        .collect())
}

/// The simulation condition for `S` with images under `prev`, checked over
/// every subset of the carrier.
fn steps_within(
    s: &Relation,
    prev: &Relation,
    c: &Coalgebra,
    d: &Coalgebra,
    sig: &LambdaSignature,
) -> Result<bool> {
    let prev_pairs: Vec<(State, State)> = prev.iter().collect();
    let n = c.len();
    for (x, y) in s.iter() {
        for mask in 0u32..1 << n {
            let a: StateSet = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            for h in sig.modalities() {
                if satisfies(c.transition(x), h, &a)?
                    && !satisfies(d.transition(y), h, &image(&prev_pairs, &a))?
                {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Λ-n-simulations by the inductive definition with its existential
/// witness chain, over all relations. Only for tiny carriers.
pub fn brute_force_n_simulations(
    c: &Coalgebra,
    d: &Coalgebra,
    sig: &LambdaSignature,
    n: usize,
) -> Result<BTreeSet<Relation>> {
    let all = all_relations(c.len(), d.len())?;
    let mut level: BTreeSet<Relation> = all.iter().cloned().collect();
    for _ in 0..n {
        let mut next = BTreeSet::new();
        for s in &all {
            for prev in &level {
                if s.is_subset(prev) && steps_within(s, prev, c, d, sig)? {
                    next.insert(s.clone());
                    break;
                }
            }
        }
        level = next;
    }
    Ok(level)
}

/// Λ-n-bisimulations by the inductive definition where every relation of
/// the witness chain is itself a bisimulation of the lower depth.
pub fn brute_force_n_bisimulations(
    c: &Coalgebra,
    d: &Coalgebra,
    sig: &LambdaSignature,
    n: usize,
) -> Result<BTreeSet<Relation>> {
    let all = all_relations(c.len(), d.len())?;
    let mut level: BTreeSet<Relation> = all.iter().cloned().collect();
    for _ in 0..n {
        let mut next = BTreeSet::new();
        for s in &all {
            for prev in &level {
                if s.is_subset(prev)
                    && steps_within(s, prev, c, d, sig)?
                    && steps_within(&s.inverse(), &prev.inverse(), d, c, sig)?
                {
                    next.insert(s.clone());
                    break;
                }
            }
        }
        level = next;
    }
    Ok(level)
}

/// Union of every relation passing the brute-force simulation oracle.
pub fn union_of_simulations(
    c: &Coalgebra,
    d: &Coalgebra,
    sig: &LambdaSignature,
) -> Result<Relation> {
    let mut acc = Relation::empty(c.len(), d.len());
    for s in all_relations(c.len(), d.len())? {
        if brute_force_simulation_oracle(&s, c, d, sig)? {
            acc = acc.union(&s);
        }
    }
    Ok(acc)
}

/// Difunctional closure from connected components of the bipartite graph.
pub fn closure_by_components(s: &Relation) -> Relation {
    let (l, r) = (s.left_size(), s.right_size());
    let mut comp: Vec<usize> = (0..l + r).collect();
    fn root(comp: &mut [usize], mut i: usize) -> usize {
        while comp[i] != i {
            i = comp[i];
        }
        i
    }
    for (x, y) in s.iter() {
        let (a, b) = (root(&mut comp, x), root(&mut comp, l + y));
        comp[a] = b;
    }
    let touched_left: BTreeSet<State> = s.iter().map(|p| p.0).collect();
    let touched_right: BTreeSet<State> = s.iter().map(|p| p.1).collect();
    let mut pairs = Vec::new();
    for &x in &touched_left {
        for &y in &touched_right {
            if root(&mut comp, x) == root(&mut comp, l + y) {
                pairs.push((x, y));
            }
        }
    }
    Relation::new(l, r, pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgebra::FunctorKind;

    fn kripke(succ: &[&[State]]) -> Coalgebra {
        Coalgebra::new(
            FunctorKind::Kripke { atoms: vec![] },
            (0..succ.len()).map(|i| format!("s{i}")).collect(),
            succ.iter()
                .map(|s| FunctorValue::kripke(Vec::<String>::new(), s.iter().copied()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn empty_relation_passes() {
        let c = kripke(&[&[0]]);
        let sig = LambdaSignature::kripke(true, true, &[]);
        assert!(brute_force_simulation_oracle(&Relation::empty(1, 1), &c, &c, &sig).unwrap());
    }

    #[test]
    fn full_relation_on_incompatible_models() {
        let c = kripke(&[&[0]]);
        let d = kripke(&[&[]]);
        let sig = LambdaSignature::kripke(false, true, &[]);
        let w = brute_force_simulation_witness(&Relation::full(1, 1), &c, &d, &sig).unwrap();
        assert_eq!(
            w,
            Some((0, 0, Modality::Diamond, [0].into_iter().collect()))
        );
    }

    #[test]
    fn carrier_bound() {
        let big: Vec<Vec<State>> = (0..13).map(|_| vec![]).collect();
        let refs: Vec<&[State]> = big.iter().map(|v| v.as_slice()).collect();
        let c = kripke(&refs);
        let sig = LambdaSignature::kripke(false, true, &[]);
        assert!(matches!(
            brute_force_simulation_oracle(&Relation::empty(13, 13), &c, &c, &sig),
            Err(Error::CarrierTooLarge { .. })
        ));
    }

    #[test]
    fn components_match_closure() {
        let s = Relation::new(3, 3, [(0, 0), (1, 0), (1, 1), (2, 2)]);
        assert_eq!(closure_by_components(&s), s.difunctional_closure());
    }
}
