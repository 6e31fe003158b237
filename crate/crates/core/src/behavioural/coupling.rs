//! Couplings witnessing `T`-bisimulations: for each related pair a value
//! over the relation (or its difunctional closure) whose two projections
//! give back the pair's transition values.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::flow::FlowNetwork;
use crate::coalgebra::{minimize, Coalgebra, FunctorValue, State, StateSet};
use crate::enumerate::{enumerate_values, EnumerationBudget};
use crate::error::{Error, Result};
use crate::liftings::subsets;
use crate::num::{Rational, Weight};
use crate::relation::Relation;

/// Pair-set search for neighbourhood couplings by full enumeration is
/// limited to this many pairs.
pub const NEIGHBORHOOD_ENUMERATION_LIMIT: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coupling {
    /// Pair set the values live on (`S`, or its difunctional closure).
    pub space: Vec<(State, State)>,
    /// One value over indices into `space` per pair of `S`.
    pub values: BTreeMap<(State, State), FunctorValue>,
}

impl Coupling {
    fn projections(&self) -> (Vec<State>, Vec<State>) {
        self.space.iter().copied().unzip()
    }

    /// Checks both marginal equations for every pair.
    pub fn verify(&self, c: &Coalgebra, d: &Coalgebra) -> Result<bool> {
        let (p1, p2) = self.projections();
        for (&(x, y), value) in &self.values {
            if !value.relabel(&p1)?.values_equal(c.transition(x))?
                || !value.relabel(&p2)?.values_equal(d.transition(y))?
            {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self, c: &Coalgebra, d: &Coalgebra) -> serde_json::Value {
        let label = |i: usize| {
            let (x, y) = self.space[i];
            format!("({},{})", c.name(x), d.name(y))
        };
        let values: Vec<_> = self
            .values
            .iter()
            .map(|(&(x, y), v)| {
                serde_json::json!({
                    "pair": [c.name(x), d.name(y)],
                    "value": crate::io::value_to_json(v, &label),
                })
            })
            .collect();
        serde_json::json!({
            "space": self.space.iter().map(|&(x, y)| [c.name(x), d.name(y)]).collect::<Vec<_>>(),
            "couplings": values,
        })
    }
}

fn check_inputs(s: &Relation, c: &Coalgebra, d: &Coalgebra) -> Result<()> {
    if c.tag() != d.tag() {
        return Err(Error::KindMismatch {
            expected: c.tag(),
            found: d.tag(),
        });
    }
    if s.left_size() != c.len() || s.right_size() != d.len() {
        return Err(Error::CarrierMismatch(
            "relation does not match the coalgebras".into(),
        ));
    }
    Ok(())
}

/// Searches `ρ : S → TS` making both projections coalgebra morphisms.
pub fn t_bisimulation_check(
    s: &Relation,
    c: &Coalgebra,
    d: &Coalgebra,
) -> Result<Option<Coupling>> {
    check_inputs(s, c, d)?;
    couple_over(s, s, c, d)
}

/// Searches `ρ : S → T S̄` with `S̄` the difunctional closure.
pub fn t_bisim_up_to_difunctionality_check(
    s: &Relation,
    c: &Coalgebra,
    d: &Coalgebra,
) -> Result<Option<Coupling>> {
    check_inputs(s, c, d)?;
    couple_over(s, &s.difunctional_closure(), c, d)
}

fn couple_over(
    s: &Relation,
    space: &Relation,
    c: &Coalgebra,
    d: &Coalgebra,
) -> Result<Option<Coupling>> {
    let space: Vec<(State, State)> = space.iter().collect();
    let mut values = BTreeMap::new();
    for (x, y) in s.iter() {
        let found = couple_pair(&space, c.transition(x), d.transition(y), &|| {
            format!("{} or {}", c.name(x), d.name(y))
        })?;
        match found {
            Some(v) => {
                values.insert((x, y), v);
            }
            None => return Ok(None),
        }
    }
    let coupling = Coupling { space, values };
    if !coupling.verify(c, d)? {
        return Err(Error::InternalCheck(
            "constructed coupling has wrong marginals".into(),
        ));
    }
    Ok(Some(coupling))
}

/// A value over `space` projecting to `t` and `u`, if one exists.
pub fn couple_pair(
    space: &[(State, State)],
    t: &FunctorValue,
    u: &FunctorValue,
    who: &dyn Fn() -> String,
) -> Result<Option<FunctorValue>> {
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
        ) => {
            if pt != pu {
                return Ok(None);
            }
            // every witness can be enlarged to this one
            let cells: StateSet = (0..space.len())
                .filter(|&i| st.contains(&space[i].0) && su.contains(&space[i].1))
                .collect();
            let left: StateSet = cells.iter().map(|&i| space[i].0).collect();
            let right: StateSet = cells.iter().map(|&i| space[i].1).collect();
            if &left != st || &right != su {
                return Ok(None);
            }
            Ok(Some(FunctorValue::Kripke {
                props: pt.clone(),
                succ: cells,
            }))
        }
        (FunctorValue::Distribution(mt), FunctorValue::Distribution(mu)) => {
            let scale = mt
                .values()
                .chain(mu.values())
                .fold(1i128, |acc, m| acc.lcm(m.denom()));
            let rows: Vec<(State, i128)> = mt
                .iter()
                .map(|(&s, m)| (s, (m * scale).to_integer()))
                .collect();
            let cols: Vec<(State, i128)> = mu
                .iter()
                .map(|(&s, m)| (s, (m * scale).to_integer()))
                .collect();
            let total: i128 = rows.iter().map(|r| r.1).sum();
            if total != cols.iter().map(|c| c.1).sum::<i128>() {
                return Ok(None);
            }
            Ok(transport(space, &rows, &cols, total).map(|flows| {
                FunctorValue::distribution(
                    flows.into_iter().map(|(i, f)| (i, Rational::new(f, scale))),
                )
            }))
        }
        (FunctorValue::Multiset(wt), FunctorValue::Multiset(wu)) => {
            let finite = |w: &BTreeMap<State, Weight>| -> Result<Vec<(State, i128)>> {
                w.iter()
                    .map(|(&s, w)| match w {
                        Weight::Finite(n) => Ok((s, *n as i128)),
                        Weight::Infinite => Err(Error::InfiniteWeight(who())),
                    })
                    .collect()
            };
            let (rows, cols) = (finite(wt)?, finite(wu)?);
            let total: i128 = rows.iter().map(|r| r.1).sum();
            if total != cols.iter().map(|c| c.1).sum::<i128>() {
                return Ok(None);
            }
            Ok(transport(space, &rows, &cols, total).map(|flows| {
                FunctorValue::multiset(flows.into_iter().map(|(i, f)| {
                    (
                        i,
                        Weight::Finite(f.to_u64().expect("flow bounded by a u64 total")),
                    )
                }))
            }))
        }
        (FunctorValue::Neighborhood(_), FunctorValue::Neighborhood(_)) => {
            neighborhood_canonical(space, t, u)
        }
        _ => Err(Error::KindMismatch {
            expected: t.tag(),
            found: u.tag(),
        }),
    }
}

/// Integer transportation problem with cells restricted to `space`.
/// Returns the positive cell flows when all of `total` can be routed.
fn transport(
    space: &[(State, State)],
    rows: &[(State, i128)],
    cols: &[(State, i128)],
    total: i128,
) -> Option<Vec<(usize, i128)>> {
    if total == 0 {
        return Some(Vec::new());
    }
    let source = 0;
    let sink = 1;
    let row_node = |i: usize| 2 + i;
    let col_node = |j: usize| 2 + rows.len() + j;
    let mut net = FlowNetwork::new(2 + rows.len() + cols.len());
    for (i, &(_, w)) in rows.iter().enumerate() {
        net.add_edge(source, row_node(i), w);
    }
    for (j, &(_, w)) in cols.iter().enumerate() {
        net.add_edge(col_node(j), sink, w);
    }
    let mut cells = Vec::new();
    for (k, &(x, y)) in space.iter().enumerate() {
        let i = rows.iter().position(|r| r.0 == x);
        let j = cols.iter().position(|c| c.0 == y);
        if let (Some(i), Some(j)) = (i, j) {
            cells.push((k, net.add_edge(row_node(i), col_node(j), total)));
        }
    }
    if net.max_flow(source, sink) != total {
        return None;
    }
    Some(
        cells
            .into_iter()
            .map(|(k, e)| (k, net.flow(e)))
            .filter(|(_, f)| !f.is_zero())
            .collect(),
    )
}

/// Neighbourhood coupling via the largest candidate: all pair sets whose
/// projections lie in `t` and `u` respectively. Any coupling is contained
/// in it, so it is a coupling iff one exists.
fn neighborhood_canonical(
    space: &[(State, State)],
    t: &FunctorValue,
    u: &FunctorValue,
) -> Result<Option<FunctorValue>> {
    let (FunctorValue::Neighborhood(nt), FunctorValue::Neighborhood(nu)) = (t, u) else {
        unreachable!("caller matched neighbourhood values");
    };
    let (bt, bu) = (t.base(), u.base());
    let relevant: StateSet = (0..space.len())
        .filter(|&i| bt.contains(&space[i].0) || bu.contains(&space[i].1))
        .collect();
    let member = |mins: &[StateSet], a: &StateSet| mins.iter().any(|m| m.is_subset(a));
    let mut family = Vec::new();
    for m in subsets(&relevant)? {
        let left: StateSet = m.iter().map(|&i| space[i].0).collect();
        let right: StateSet = m.iter().map(|&i| space[i].1).collect();
        if member(nt, &left) && member(nu, &right) {
            family.push(m);
        }
    }
    let candidate = FunctorValue::Neighborhood(minimize(family));
    let (p1, p2): (Vec<State>, Vec<State>) = space.iter().copied().unzip();
    if candidate.relabel(&p1)?.values_equal(t)? && candidate.relabel(&p2)?.values_equal(u)? {
        Ok(Some(candidate))
    } else {
        Ok(None)
    }
}

/// Exhaustive neighbourhood coupling search over every value on `space`;
/// limited to [`NEIGHBORHOOD_ENUMERATION_LIMIT`] pairs.
pub fn neighborhood_coupling_by_enumeration(
    space: &[(State, State)],
    t: &FunctorValue,
    u: &FunctorValue,
) -> Result<Option<FunctorValue>> {
    if space.len() > NEIGHBORHOOD_ENUMERATION_LIMIT {
        return Err(Error::Budget(format!(
            "{} pairs exceeds the neighbourhood enumeration limit {NEIGHBORHOOD_ENUMERATION_LIMIT}",
            space.len()
        )));
    }
    let budget = EnumerationBudget {
        max_neighborhood_states: NEIGHBORHOOD_ENUMERATION_LIMIT,
        ..Default::default()
    };
    let (p1, p2): (Vec<State>, Vec<State>) = space.iter().copied().unzip();
    for rho in enumerate_values(
        &crate::coalgebra::FunctorKind::Neighborhood,
        space.len(),
        &budget,
    )? {
        if rho.relabel(&p1)?.values_equal(t)? && rho.relabel(&p2)?.values_equal(u)? {
            return Ok(Some(rho));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgebra::FunctorKind;

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    fn set(xs: &[State]) -> StateSet {
        xs.iter().copied().collect()
    }

    fn kripke(succ: &[&[State]]) -> Coalgebra {
        let none: Vec<String> = vec![];
        Coalgebra::new(
            FunctorKind::Kripke { atoms: vec![] },
            (0..succ.len()).map(|i| format!("s{i}")).collect(),
            succ.iter()
                .map(|s| FunctorValue::kripke(none.clone(), s.iter().copied()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn isomorphism_is_coupled() {
        let c = kripke(&[&[1], &[0]]);
        let s = Relation::graph(&[1, 0], 2);
        let coupling = t_bisimulation_check(&s, &c, &c).unwrap().unwrap();
        assert!(coupling.verify(&c, &c).unwrap());
    }

    #[test]
    fn kripke_canonical_candidate() {
        // x→{a,b}, y→{c}; S={(x,y),(a,c),(b,c)}
        let c = kripke(&[&[1, 2], &[], &[]]);
        let d = kripke(&[&[1], &[]]);
        let s = Relation::new(3, 2, [(0, 0), (1, 1), (2, 1)]);
        let coupling = t_bisimulation_check(&s, &c, &d).unwrap().unwrap();
        // space is sorted: (0,0),(1,1),(2,1)
        assert_eq!(
            coupling.values[&(0, 0)],
            FunctorValue::kripke(Vec::<String>::new(), [1, 2])
        );
    }

    #[test]
    fn untransportable_mass() {
        let c = Coalgebra::new(
            FunctorKind::Distribution,
            vec!["x".into(), "a".into(), "b".into()],
            vec![
                FunctorValue::distribution([(1, r(1, 2)), (2, r(1, 2))]),
                FunctorValue::distribution([(1, r(1, 1))]),
                FunctorValue::distribution([(2, r(1, 1))]),
            ],
        )
        .unwrap();
        let d = Coalgebra::new(
            FunctorKind::Distribution,
            vec!["y".into(), "c".into()],
            vec![
                FunctorValue::distribution([(1, r(1, 1))]),
                FunctorValue::distribution([(1, r(1, 1))]),
            ],
        )
        .unwrap();
        let s = Relation::new(3, 2, [(0, 0), (1, 1)]);
        assert_eq!(t_bisimulation_check(&s, &c, &d).unwrap(), None);
        let s = Relation::new(3, 2, [(0, 0), (1, 1), (2, 1)]);
        let coupling = t_bisimulation_check(&s, &c, &d).unwrap().unwrap();
        assert_eq!(
            coupling.values[&(0, 0)],
            FunctorValue::distribution([(1, r(1, 2)), (2, r(1, 2))])
        );
    }

    #[test]
    fn closure_supplies_the_missing_cell() {
        // x→{a:1/2,b:1/2}, y→{u:1/4,v:3/4}; S lacks (b,v), its closure has it
        let point = |i: State| FunctorValue::distribution([(i, r(1, 1))]);
        let c = Coalgebra::new(
            FunctorKind::Distribution,
            vec!["x".into(), "a".into(), "b".into()],
            vec![
                FunctorValue::distribution([(1, r(1, 2)), (2, r(1, 2))]),
                point(1),
                point(2),
            ],
        )
        .unwrap();
        let d = Coalgebra::new(
            FunctorKind::Distribution,
            vec!["y".into(), "u".into(), "v".into()],
            vec![
                FunctorValue::distribution([(1, r(1, 4)), (2, r(3, 4))]),
                point(1),
                point(2),
            ],
        )
        .unwrap();
        let s = Relation::new(3, 3, [(0, 0), (1, 1), (1, 2), (2, 1)]);
        assert_eq!(t_bisimulation_check(&s, &c, &d).unwrap(), None);
        let coupling = t_bisim_up_to_difunctionality_check(&s, &c, &d)
            .unwrap()
            .unwrap();
        assert!(coupling.verify(&c, &d).unwrap());
        assert!(coupling.space.contains(&(2, 2)));
    }

    #[test]
    fn infinite_weights_are_rejected() {
        let c = Coalgebra::new(
            FunctorKind::Multiset,
            vec!["u".into()],
            vec![FunctorValue::multiset([(0, Weight::Infinite)])],
        )
        .unwrap();
        assert!(matches!(
            t_bisimulation_check(&Relation::identity(1), &c, &c),
            Err(Error::InfiniteWeight(_))
        ));
    }

    #[test]
    fn multiset_totals_must_agree() {
        let space = [(0, 0)];
        let t = FunctorValue::multiset([(0, Weight::Finite(2))]);
        let u = FunctorValue::multiset([(0, Weight::Finite(1))]);
        assert_eq!(couple_pair(&space, &t, &u, &String::new).unwrap(), None);
        let coupled = couple_pair(&space, &t, &t, &String::new).unwrap().unwrap();
        assert_eq!(coupled, FunctorValue::multiset([(0, Weight::Finite(2))]));
    }

    /// The canonical neighbourhood candidate agrees with exhaustive search
    /// over every value on the pair set.
    #[test]
    fn neighbourhood_canonical_matches_enumeration() {
        let budget = EnumerationBudget::default();
        let values = enumerate_values(&FunctorKind::Neighborhood, 2, &budget).unwrap();
        let spaces: Vec<Vec<(State, State)>> = vec![
            vec![(0, 0), (1, 1)],
            vec![(0, 0), (0, 1), (1, 1)],
            vec![(0, 1), (1, 0)],
            vec![(0, 0)],
        ];
        for space in &spaces {
            for t in &values {
                for u in &values {
                    let fast = couple_pair(space, t, u, &String::new).unwrap();
                    let slow = neighborhood_coupling_by_enumeration(space, t, u).unwrap();
                    assert_eq!(fast.is_some(), slow.is_some(), "{space:?} {t:?} {u:?}");
                }
            }
        }
        let big: Vec<(State, State)> = (0..6).map(|i| (i, i)).collect();
        let t = FunctorValue::neighborhood([set(&[0])]);
        assert!(neighborhood_coupling_by_enumeration(&big, &t, &t).is_err());
    }
}
