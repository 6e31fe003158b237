//! Bounded exhaustive enumeration of `TX` over a small state set.

use thiserror::Error;

use crate::coalgebra::{FunctorKind, FunctorValue, State, StateSet};
use crate::num::{Rational, Weight};

#[derive(Clone, Debug)]
pub struct EnumerationBudget {
    /// Upper bound on the number of produced values.
    pub max_values: usize,
    /// Neighbourhood enumeration walks antichains over `2^states`.
    pub max_neighborhood_states: usize,
    /// Distribution masses are multiples of `1/denominator`.
    pub denominator: u32,
    /// Multiset weights range over `0..=weight_cap`.
    pub weight_cap: u64,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            max_values: 200_000,
            max_neighborhood_states: 5,
            denominator: 2,
            weight_cap: 2,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumerationError {
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
}

/// All values of `kind` over states `0..n` within the budget. Complete for
/// the full `TX` in the Kripke and neighbourhood cases.
pub fn enumerate_values(
    kind: &FunctorKind,
    n: usize,
    budget: &EnumerationBudget,
) -> Result<Vec<FunctorValue>, EnumerationError> {
    let over = |count: f64| -> Result<(), EnumerationError> {
        if count > budget.max_values as f64 {
            Err(EnumerationError::BudgetExceeded(format!(
                "{count} values exceeds limit {}",
                budget.max_values
            )))
        } else {
            Ok(())
        }
    };
    let subsets = |items: usize| -> Vec<StateSet> {
        (0u64..1 << items)
            .map(|mask| (0..items).filter(|i| mask >> i & 1 == 1).collect())
            .collect()
    };
    match kind {
        FunctorKind::Kripke { atoms } => {
            over(2f64.powi((n + atoms.len()) as i32))?;
            let mut out = Vec::new();
            for props in subsets(atoms.len()) {
                let props: Vec<String> = props.iter().map(|&i| atoms[i].clone()).collect();
                for succ in subsets(n) {
                    out.push(FunctorValue::kripke(props.clone(), succ));
                }
            }
            Ok(out)
        }
        FunctorKind::Multiset => {
            over(((budget.weight_cap + 1) as f64).powi(n as i32))?;
            let mut out = Vec::new();
            let mut weights = vec![0u64; n];
            loop {
                out.push(FunctorValue::multiset(
                    weights
                        .iter()
                        .enumerate()
                        .map(|(s, &w)| (s, Weight::Finite(w))),
                ));
                // odometer
                let mut i = 0;
                while i < n && weights[i] == budget.weight_cap {
                    weights[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
                weights[i] += 1;
            }
            Ok(out)
        }
        FunctorKind::Distribution => {
            let d = budget.denominator.max(1) as usize;
            if n == 0 {
                return Ok(Vec::new());
            }
            // compositions of d into n non-negative parts
            over(binomial(d + n - 1, n - 1))?;
            let mut out = Vec::new();
            let mut parts = vec![0usize; n];
            compositions(d, 0, &mut parts, &mut |parts| {
                out.push(FunctorValue::distribution(
                    parts
                        .iter()
                        .enumerate()
                        .map(|(s, &k)| (s, Rational::new(k as i128, d as i128))),
                ));
            });
            Ok(out)
        }
        FunctorKind::Neighborhood => {
            if n > budget.max_neighborhood_states {
                return Err(EnumerationError::BudgetExceeded(format!(
                    "{n} states exceeds neighbourhood limit {}",
                    budget.max_neighborhood_states
                )));
            }
            let mut sets = subsets(n);
            sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
            let mut out = Vec::new();
            let mut chosen: Vec<StateSet> = Vec::new();
            antichains(&sets, 0, &mut chosen, &mut out, budget.max_values)?;
            Ok(out)
        }
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn compositions(rest: usize, i: usize, parts: &mut [usize], emit: &mut dyn FnMut(&[usize])) {
    if i + 1 == parts.len() {
        parts[i] = rest;
        emit(parts);
        return;
    }
    for k in 0..=rest {
        parts[i] = k;
        compositions(rest - k, i + 1, parts, emit);
    }
}

fn antichains(
    sets: &[StateSet],
    i: usize,
    chosen: &mut Vec<StateSet>,
    out: &mut Vec<FunctorValue>,
    limit: usize,
) -> Result<(), EnumerationError> {
    if i == sets.len() {
        if out.len() >= limit {
            return Err(EnumerationError::BudgetExceeded(format!(
                "more than {limit} neighbourhood values"
            )));
        }
        out.push(FunctorValue::neighborhood(chosen.iter().cloned()));
        return Ok(());
    }
    antichains(sets, i + 1, chosen, out, limit)?;
    // sets are ordered by size, so only earlier choices can be subsets
    if !chosen.iter().any(|c| c.is_subset(&sets[i])) {
        chosen.push(sets[i].clone());
        antichains(sets, i + 1, chosen, out, limit)?;
        chosen.pop();
    }
    Ok(())
}

/// States `0..n` as a set.
pub fn all_states(n: usize) -> StateSet {
    (0..n as State).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn set(xs: &[State]) -> StateSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn kripke_single_state() {
        let vals = enumerate_values(
            &FunctorKind::Kripke { atoms: vec![] },
            1,
            &EnumerationBudget::default(),
        )
        .unwrap();
        assert_eq!(
            vals,
            vec![
                FunctorValue::kripke(Vec::<String>::new(), []),
                FunctorValue::kripke(Vec::<String>::new(), [0]),
            ]
        );
    }

    #[test]
    fn neighborhood_single_state() {
        let vals: BTreeSet<_> =
            enumerate_values(&FunctorKind::Neighborhood, 1, &EnumerationBudget::default())
                .unwrap()
                .into_iter()
                .collect();
        let expected: BTreeSet<_> = [
            FunctorValue::neighborhood([]),
            FunctorValue::neighborhood([set(&[])]),
            FunctorValue::neighborhood([set(&[0])]),
        ]
        .into_iter()
        .collect();
        assert_eq!(vals, expected);
    }

    /// Upward-closed families over an n-set are counted by the Dedekind
    /// numbers 2, 3, 6, 20, 168, 7581.
    #[test]
    fn neighborhood_counts_are_dedekind_numbers() {
        let budget = EnumerationBudget::default();
        let counts: Vec<usize> = (0..=5)
            .map(|n| {
                enumerate_values(&FunctorKind::Neighborhood, n, &budget)
                    .unwrap()
                    .len()
            })
            .collect();
        assert_eq!(counts, vec![2, 3, 6, 20, 168, 7581]);
        assert!(enumerate_values(&FunctorKind::Neighborhood, 6, &budget).is_err());
    }

    #[test]
    fn multiset_with_cap_one() {
        let budget = EnumerationBudget {
            weight_cap: 1,
            ..Default::default()
        };
        let vals = enumerate_values(&FunctorKind::Multiset, 1, &budget).unwrap();
        assert_eq!(
            vals,
            vec![
                FunctorValue::multiset([]),
                FunctorValue::multiset([(0, Weight::Finite(1))]),
            ]
        );
    }

    #[test]
    fn distributions_sum_to_one() {
        let budget = EnumerationBudget {
            denominator: 3,
            ..Default::default()
        };
        let vals = enumerate_values(&FunctorKind::Distribution, 2, &budget).unwrap();
        assert_eq!(vals.len(), 4);
        for v in vals {
            assert!(v.check().is_empty());
        }
    }

    #[test]
    fn budget_is_enforced() {
        let budget = EnumerationBudget {
            max_values: 10,
            ..Default::default()
        };
        assert!(enumerate_values(&FunctorKind::Kripke { atoms: vec![] }, 4, &budget).is_err());
    }
}
