use proptest::prelude::*;

use coalsim::behavioural::n_step_partition;
use coalsim::harness::generate::{
    generate_with, random_formula, random_map, random_relation, random_value,
};
use coalsim::harness::oracle::closure_by_components;
use coalsim::harness::{rng_for, GeneratorConfig};
use coalsim::liftings::satisfies;
use coalsim::logic::{eval, extension, parse_formula, parse_unchecked};
use coalsim::{Formula, FunctorValue, KindTag, Relation, SignatureSpec, StateSet};

fn kind_strategy() -> impl Strategy<Value = KindTag> {
    prop::sample::select(KindTag::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_then_parse_is_identity(seed: u64, kind in kind_strategy(), rank in 0usize..5) {
        let mut rng = rng_for(seed);
        let c = generate_with(&mut rng, &GeneratorConfig::new(kind, seed));
        let sig = SignatureSpec::default_for(kind).resolve(&[&c]).unwrap();
        let f = random_formula(&mut rng, &sig, rank, false);
        let text = f.to_string();
        prop_assert_eq!(&parse_formula(&text, &sig).unwrap(), &f, "{}", text);
        prop_assert_eq!(parse_unchecked(&text).unwrap(), f);
    }

    #[test]
    fn boolean_connectives(seed: u64, kind in kind_strategy()) {
        let mut rng = rng_for(seed);
        let c = generate_with(&mut rng, &GeneratorConfig::new(kind, seed));
        let sig = SignatureSpec::default_for(kind).resolve(&[&c]).unwrap();
        let f = random_formula(&mut rng, &sig, 3, false);
        let g = random_formula(&mut rng, &sig, 3, false);
        for x in c.carrier() {
            let (a, b) = (eval(&f, &c, x).unwrap(), eval(&g, &c, x).unwrap());
            prop_assert_eq!(eval(&Formula::neg(f.clone()), &c, x).unwrap(), !a);
            prop_assert_eq!(eval(&Formula::and(f.clone(), g.clone()), &c, x).unwrap(), a && b);
            prop_assert_eq!(eval(&Formula::or(f.clone(), g.clone()), &c, x).unwrap(), a || b);
        }
        prop_assert_eq!(extension(&Formula::Top, &c).unwrap().len(), c.len());
        prop_assert!(extension(&Formula::Bot, &c).unwrap().is_empty());
    }

    #[test]
    fn kripke_modalities_match_the_graph(seed: u64) {
        let mut rng = rng_for(seed);
        let cfg = GeneratorConfig::new(KindTag::Kripke, seed).states(1..=8).branching(4);
        let c = generate_with(&mut rng, &cfg);
        let sig = SignatureSpec::default_for(KindTag::Kripke).resolve(&[&c]).unwrap();
        let labelled = |s: usize, atom: &str| match c.transition(s) {
            FunctorValue::Kripke { props, .. } => props.contains(atom),
            _ => unreachable!(),
        };
        let succ = |s: usize| match c.transition(s) {
            FunctorValue::Kripke { succ, .. } => succ.clone(),
            _ => unreachable!(),
        };
        let diamond = extension(&parse_formula("<> p", &sig).unwrap(), &c).unwrap();
        let boxed = extension(&parse_formula("[] q", &sig).unwrap(), &c).unwrap();
        let nested = extension(&parse_formula("<> [] false", &sig).unwrap(), &c).unwrap();
        for x in c.carrier() {
            prop_assert_eq!(diamond.contains(&x), succ(x).iter().any(|&y| labelled(y, "p")));
            prop_assert_eq!(boxed.contains(&x), succ(x).iter().all(|&y| labelled(y, "q")));
            prop_assert_eq!(nested.contains(&x), succ(x).iter().any(|&y| succ(y).is_empty()));
        }
    }

    #[test]
    fn rank_n_formulas_respect_n_step_equivalence(seed: u64, kind in kind_strategy(), n in 0usize..4) {
        let mut rng = rng_for(seed);
        let c = generate_with(&mut rng, &GeneratorConfig::new(kind, seed).states(1..=5));
        let sig = SignatureSpec::default_for(kind).resolve(&[&c]).unwrap();
        let f = random_formula(&mut rng, &sig, n, false);
        prop_assert!(f.rank() <= n);
        let ext = extension(&f, &c).unwrap();
        let approx = n_step_partition(&c, &c, n).unwrap().restrict();
        for (x, y) in approx.iter() {
            prop_assert_eq!(ext.contains(&x), ext.contains(&y), "{} at {} vs {}", f, x, y);
        }
    }

    #[test]
    fn closure_matches_components(seed: u64, l in 1usize..6, r in 1usize..6, density in 0.0f64..0.6) {
        let mut rng = rng_for(seed);
        let s = random_relation(&mut rng, l, r, density);
        let closed = s.difunctional_closure();
        prop_assert_eq!(&closed, &closure_by_components(&s));
        prop_assert!(s.is_subset(&closed));
        prop_assert!(closed.is_difunctional());
        prop_assert_eq!(closed.difunctional_closure(), closed.clone());
        prop_assert_eq!(closed.inverse(), s.inverse().difunctional_closure());
    }

    #[test]
    fn relabel_is_functorial(seed: u64, kind in kind_strategy(), n in 1usize..6, m in 1usize..6, k in 1usize..6) {
        let mut rng = rng_for(seed);
        let cfg = GeneratorConfig::new(kind, seed).infinite_percent(15);
        let t = random_value(&mut rng, &cfg, n);
        let f = random_map(&mut rng, n, m);
        let g = random_map(&mut rng, m, k);
        let gf: Vec<usize> = f.iter().map(|&y| g[y]).collect();
        let id: Vec<usize> = (0..n).collect();
        prop_assert_eq!(t.relabel(&id).unwrap(), t.clone());
        prop_assert_eq!(t.relabel(&f).unwrap().relabel(&g).unwrap(), t.relabel(&gf).unwrap());
        prop_assert!(t.relabel(&f).unwrap().check().is_empty());
    }

    #[test]
    fn liftings_are_monotone(seed: u64, kind in kind_strategy(), n in 1usize..6, a_mask: u8, b_mask: u8) {
        let mut rng = rng_for(seed);
        let c = generate_with(&mut rng, &GeneratorConfig::new(kind, seed).states(n..=n));
        let sig = SignatureSpec::default_for(kind).resolve(&[&c]).unwrap();
        let a: StateSet = (0..n).filter(|i| a_mask >> i & 1 == 1).collect();
        let b: StateSet = (0..n).filter(|i| (a_mask | b_mask) >> i & 1 == 1).collect();
        for x in c.carrier() {
            for h in sig.modalities() {
                if satisfies(c.transition(x), h, &a).unwrap() {
                    prop_assert!(satisfies(c.transition(x), h, &b).unwrap(), "{} {:?} {:?}", h, a, b);
                }
            }
        }
    }
}

#[test]
fn empty_relation_closure_is_empty() {
    assert!(Relation::empty(3, 2).difunctional_closure().is_empty());
}
