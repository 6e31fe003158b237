//! Seeded random models, relations, maps and formulas. Identical
//! configurations produce identical output.

use std::ops::RangeInclusive;

use rand::seq::index::sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coalgebra::{Coalgebra, FunctorKind, FunctorValue, KindTag, State, StateSet};
use crate::liftings::LambdaSignature;
use crate::logic::{Formula, Modality};
use crate::num::{Rational, Weight};
use crate::relation::Relation;

pub type TrialRng = ChaCha8Rng;

pub fn rng_for(seed: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub kind: KindTag,
    pub min_states: usize,
    pub max_states: usize,
    /// Successor count, support size or number of minimal sets.
    pub branching: usize,
    pub denominator_cap: u32,
    pub weight_cap: u64,
    /// Chance in percent that a multiset weight is `∞`.
    pub infinite_percent: u32,
    pub atoms: Vec<String>,
}

impl GeneratorConfig {
    pub fn new(kind: KindTag, seed: u64) -> Self {
        GeneratorConfig {
            seed,
            kind,
            min_states: 1,
            max_states: 4,
            branching: 3,
            denominator_cap: 4,
            weight_cap: 3,
            infinite_percent: 0,
            atoms: if kind == KindTag::Kripke {
                vec!["p".into(), "q".into()]
            } else {
                vec![]
            },
        }
    }

    pub fn states(mut self, range: RangeInclusive<usize>) -> Self {
        self.min_states = *range.start();
        self.max_states = *range.end();
        self
    }

    pub fn branching(mut self, cap: usize) -> Self {
        self.branching = cap;
        self
    }

    pub fn infinite_percent(mut self, percent: u32) -> Self {
        self.infinite_percent = percent;
        self
    }

    pub fn atoms(mut self, atoms: &[&str]) -> Self {
        self.atoms = atoms.iter().map(|a| a.to_string()).collect();
        self
    }

    pub fn is_valid(&self) -> bool {
        self.min_states >= 1
            && self.min_states <= self.max_states
            && self.denominator_cap >= 1
            && self.weight_cap >= 1
            && self.infinite_percent <= 100
    }
}

/// A validated coalgebra drawn from `cfg`.
pub fn generate_coalgebra(cfg: &GeneratorConfig) -> Coalgebra {
    assert!(cfg.is_valid(), "invalid generator configuration {cfg:?}");
    let mut rng = rng_for(cfg.seed);
    generate_with(&mut rng, cfg)
}

/// Draws from an existing stream; used when several objects share one seed.
pub fn generate_with(rng: &mut TrialRng, cfg: &GeneratorConfig) -> Coalgebra {
    let n = rng.gen_range(cfg.min_states..=cfg.max_states);
    let kind = match cfg.kind {
        KindTag::Kripke => FunctorKind::Kripke {
            atoms: cfg.atoms.clone(),
        },
        KindTag::Multiset => FunctorKind::Multiset,
        KindTag::Distribution => FunctorKind::Distribution,
        KindTag::Neighborhood => FunctorKind::Neighborhood,
    };
    let transitions = (0..n).map(|_| random_value(rng, cfg, n)).collect();
    Coalgebra::new(kind, (0..n).map(|i| format!("s{i}")).collect(), transitions)
        .expect("generator produces valid coalgebras")
}

fn random_subset(rng: &mut TrialRng, n: usize, size: usize) -> StateSet {
    sample(rng, n, size.min(n)).into_iter().collect()
}

/// A value of `cfg.kind` over states `0..n`.
pub fn random_value(rng: &mut TrialRng, cfg: &GeneratorConfig, n: usize) -> FunctorValue {
    let cap = cfg.branching.min(n);
    match cfg.kind {
        KindTag::Kripke => {
            let props: Vec<String> = cfg
                .atoms
                .iter()
                .filter(|_| rng.gen_bool(0.5))
                .cloned()
                .collect();
            let k = rng.gen_range(0..=cap);
            FunctorValue::kripke(props, random_subset(rng, n, k))
        }
        KindTag::Multiset => {
            let k = rng.gen_range(0..=cap);
            let support = random_subset(rng, n, k);
            FunctorValue::multiset(support.into_iter().map(|s| {
                let w = if rng.gen_range(0..100) < cfg.infinite_percent {
                    Weight::Infinite
                } else {
                    Weight::Finite(rng.gen_range(1..=cfg.weight_cap))
                };
                (s, w)
            }))
        }
        KindTag::Distribution => {
            let den = rng.gen_range(1..=cfg.denominator_cap) as usize;
            let k = rng.gen_range(1..=cap.max(1).min(den));
            let support: Vec<State> = random_subset(rng, n, k).into_iter().collect();
            // k positive parts of den from k-1 distinct cut points
            let mut cuts: Vec<usize> = if k > 1 {
                sample(rng, den - 1, k - 1)
                    .into_iter()
                    .map(|c| c + 1)
                    .collect()
            } else {
                vec![]
            };
            cuts.sort_unstable();
            cuts.push(den);
            let mut prev = 0;
            let mut masses = Vec::with_capacity(k);
            for (s, cut) in support.into_iter().zip(cuts) {
                masses.push((s, Rational::new((cut - prev) as i128, den as i128)));
                prev = cut;
            }
            FunctorValue::distribution(masses)
        }
        KindTag::Neighborhood => {
            let count = rng.gen_range(0..=cfg.branching);
            let mut family = Vec::with_capacity(count);
            for _ in 0..count {
                let size = if rng.gen_range(0..12) == 0 {
                    0
                } else {
                    rng.gen_range(1..=n.min(3))
                };
                family.push(random_subset(rng, n, size));
            }
            FunctorValue::neighborhood(family)
        }
    }
}

/// Each pair present with probability `density`.
pub fn random_relation(rng: &mut TrialRng, left: usize, right: usize, density: f64) -> Relation {
    let mut pairs = Vec::new();
    for x in 0..left {
        for y in 0..right {
            if rng.gen_bool(density) {
                pairs.push((x, y));
            }
        }
    }
    Relation::new(left, right, pairs)
}

/// A random subrelation keeping each pair with probability `keep`.
pub fn random_subrelation(rng: &mut TrialRng, s: &Relation, keep: f64) -> Relation {
    Relation::new(
        s.left_size(),
        s.right_size(),
        s.iter().filter(|_| rng.gen_bool(keep)).collect::<Vec<_>>(),
    )
}

pub fn random_map(rng: &mut TrialRng, from: usize, to: usize) -> Vec<State> {
    (0..from).map(|_| rng.gen_range(0..to)).collect()
}

/// An injective map from `0..from` into `0..to`, `from ≤ to`.
pub fn random_injection(rng: &mut TrialRng, from: usize, to: usize) -> Vec<State> {
    sample(rng, to, from).into_iter().collect()
}

/// A formula over the operators of `sig` with rank at most `rank`;
/// negation-free when `positive` is set. At most six binary connectives.
pub fn random_formula(
    rng: &mut TrialRng,
    sig: &LambdaSignature,
    rank: usize,
    positive: bool,
) -> Formula {
    let mut budget = 6usize;
    formula_rec(rng, sig, rank, positive, &mut budget)
}

fn formula_rec(
    rng: &mut TrialRng,
    sig: &LambdaSignature,
    rank: usize,
    positive: bool,
    budget: &mut usize,
) -> Formula {
    let unary: Vec<&Modality> = sig
        .modalities()
        .iter()
        .filter(|m| !m.is_nullary())
        .collect();
    let atoms: Vec<&Modality> = sig.modalities().iter().filter(|m| m.is_nullary()).collect();
    let leaf = |rng: &mut TrialRng| -> Formula {
        if rank >= 1 && !atoms.is_empty() && rng.gen_bool(0.6) {
            Formula::Modal(atoms[rng.gen_range(0..atoms.len())].clone(), None)
        } else if rng.gen_bool(0.8) {
            Formula::Top
        } else {
            Formula::Bot
        }
    };
    let choice = rng.gen_range(0..10);
    match choice {
        0..=3 if rank >= 1 && !unary.is_empty() => {
            let h = unary[rng.gen_range(0..unary.len())].clone();
            Formula::modal(h, formula_rec(rng, sig, rank - 1, positive, budget))
        }
        4..=6 if *budget > 0 => {
            *budget -= 1;
            let a = formula_rec(rng, sig, rank, positive, budget);
            let b = formula_rec(rng, sig, rank, positive, budget);
            if choice == 4 || (choice == 6 && rng.gen_bool(0.5)) {
                Formula::and(a, b)
            } else {
                Formula::or(a, b)
            }
        }
        7 if !positive => Formula::neg(formula_rec(rng, sig, rank, positive, budget)),
        _ => leaf(rng),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_deadlocked_state() {
        let cfg = GeneratorConfig::new(KindTag::Kripke, 7)
            .states(1..=1)
            .branching(0)
            .atoms(&[]);
        let c = generate_coalgebra(&cfg);
        assert_eq!(c.len(), 1);
        assert_eq!(
            c.transition(0),
            &FunctorValue::kripke(Vec::<String>::new(), [])
        );
    }

    #[test]
    fn deterministic_per_seed() {
        for kind in KindTag::ALL {
            let cfg = GeneratorConfig::new(kind, 42).infinite_percent(10);
            assert_eq!(generate_coalgebra(&cfg), generate_coalgebra(&cfg));
        }
    }

    #[test]
    fn distribution_denominators_are_capped() {
        for seed in 0..200 {
            let cfg = GeneratorConfig::new(KindTag::Distribution, seed);
            let c = generate_coalgebra(&cfg);
            for v in c.transitions() {
                let FunctorValue::Distribution(m) = v else {
                    unreachable!()
                };
                assert!(m.values().all(|r| *r.denom() <= 4));
                assert_eq!(m.values().sum::<Rational>(), Rational::from_integer(1));
            }
        }
    }

    #[test]
    fn formulas_respect_caps() {
        let sig = LambdaSignature::kripke(true, true, &["p".to_string()]);
        let mut rng = rng_for(3);
        for rank in 0..5 {
            for _ in 0..50 {
                let f = random_formula(&mut rng, &sig, rank, true);
                assert!(f.rank() <= rank);
                assert!(f.is_positive());
            }
        }
    }
}
