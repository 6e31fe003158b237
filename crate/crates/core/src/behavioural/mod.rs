//! Behavioural equivalence through the terminal sequence, quotient
//! witnesses, and `T`-bisimulations via coupling search.

mod coupling;
mod flow;
mod partition;
mod quotient;

pub use coupling::{
    couple_pair, neighborhood_coupling_by_enumeration, t_bisim_up_to_difunctionality_check,
    t_bisimulation_check, Coupling, NEIGHBORHOOD_ENUMERATION_LIMIT,
};
pub use flow::FlowNetwork;
pub use partition::{n_step_partition, stable_partition, Partition};
pub use quotient::{quotient_witness, QuotientFailure, QuotientWitness};

use crate::coalgebra::Coalgebra;
use crate::error::{Error, Result};
use crate::liftings::LambdaSignature;
use crate::relation::Relation;
use crate::simulation::greatest_bisimulation;

/// Result of [`behavioural_equivalence`] with the artefacts of its
/// cross-checks.
#[derive(Clone, Debug)]
pub struct Equivalence {
    pub relation: Relation,
    pub partition: Partition,
    pub rounds: usize,
    pub witness: QuotientWitness,
}

/// Behavioural equivalence between the states of `c` and `d`, computed as
/// the greatest Λ-bisimulation. The stabilized terminal-sequence partition
/// must restrict to the same relation and the quotient by it must be well
/// defined; a disagreement is reported as an internal error.
pub fn behavioural_equivalence(
    c: &Coalgebra,
    d: &Coalgebra,
    sig: &LambdaSignature,
) -> Result<Equivalence> {
    if !sig.is_separating() {
        return Err(Error::NotSeparating);
    }
    let relation = greatest_bisimulation(c, d, sig)?;
    let (partition, rounds) = stable_partition(c, d)?;
    if partition.restrict() != relation {
        return Err(Error::InternalCheck(format!(
            "greatest bisimulation has {} pairs, stabilized partition relates {}",
            relation.len(),
            partition.restrict().len()
        )));
    }
    let witness = match quotient_witness(&relation, c, d) {
        Ok(w) => w,
        Err(Error::NotWellDefined(failure)) => {
            return Err(Error::InternalCheck(format!(
                "quotient by bisimilarity: {failure}"
            )))
        }
        Err(e) => return Err(e),
    };
    Ok(Equivalence {
        relation,
        partition,
        rounds,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgebra::{FunctorKind, FunctorValue};
    use crate::num::Weight;
    use crate::signature::SignatureSpec;

    #[test]
    fn labelled_two_cycle_matches_loop() {
        let atoms = vec!["p".to_string()];
        let kind = FunctorKind::Kripke {
            atoms: atoms.clone(),
        };
        let c = Coalgebra::new(
            kind.clone(),
            vec!["a".into(), "b".into()],
            vec![
                FunctorValue::kripke(atoms.clone(), [1]),
                FunctorValue::kripke(atoms.clone(), [0]),
            ],
        )
        .unwrap();
        let d = Coalgebra::new(
            kind,
            vec!["l".into()],
            vec![FunctorValue::kripke(atoms, [0])],
        )
        .unwrap();
        let sig = SignatureSpec::default_for(c.tag())
            .resolve(&[&c, &d])
            .unwrap();
        let eq = behavioural_equivalence(&c, &d, &sig).unwrap();
        assert_eq!(eq.relation, Relation::full(2, 1));
        assert_eq!(eq.witness.block_count(), 1);
    }

    #[test]
    fn graded_total_class_weight() {
        // x ↦ {u:2}, y ↦ {v:1, w:1}, u, v, w terminal
        let c = Coalgebra::new(
            FunctorKind::Multiset,
            vec!["x".into(), "u".into()],
            vec![
                FunctorValue::multiset([(1, Weight::Finite(2))]),
                FunctorValue::multiset([]),
            ],
        )
        .unwrap();
        let d = Coalgebra::new(
            FunctorKind::Multiset,
            vec!["y".into(), "v".into(), "w".into()],
            vec![
                FunctorValue::multiset([(1, Weight::Finite(1)), (2, Weight::Finite(1))]),
                FunctorValue::multiset([]),
                FunctorValue::multiset([]),
            ],
        )
        .unwrap();
        let sig = SignatureSpec::default_for(c.tag())
            .resolve(&[&c, &d])
            .unwrap();
        let eq = behavioural_equivalence(&c, &d, &sig).unwrap();
        assert!(eq.relation.contains(0, 0));
        assert!(!eq.relation.contains(0, 1));
    }

    #[test]
    fn requires_separating_signature() {
        let c = Coalgebra::new(
            FunctorKind::Kripke { atoms: vec![] },
            vec!["s".into()],
            vec![FunctorValue::kripke(Vec::<String>::new(), [0])],
        )
        .unwrap();
        let sig = LambdaSignature::kripke(false, true, &[]).declare_separating(false);
        assert!(matches!(
            behavioural_equivalence(&c, &c, &sig),
            Err(Error::NotSeparating)
        ));
    }
}
