use crate::coalgebra::{Coalgebra, State, StateSet};
use crate::error::{Error, Result};
use crate::liftings::satisfies;

use super::Formula;

/// Truth of `f` at `x`.
pub fn eval(f: &Formula, c: &Coalgebra, x: State) -> Result<bool> {
    if x >= c.len() {
        return Err(Error::UnknownState(format!("#{x}")));
    }
    Ok(extension(f, c)?.contains(&x))
}

/// The set of states satisfying `f`, computed bottom-up. The modal case
/// hands the child's extension to the lifting.
pub fn extension(f: &Formula, c: &Coalgebra) -> Result<StateSet> {
    for m in f.modalities() {
        if m.kind() != c.tag() {
            return Err(Error::SignatureMismatch {
                modality: m.clone(),
                kind: c.tag(),
            });
        }
        if let crate::logic::Modality::Atom(p) = m {
            if !c.kind().atoms().contains(p) {
                return Err(Error::Signature(format!(
                    "atom {p:?} is not in the model vocabulary"
                )));
            }
        }
    }
    ext(f, c)
}

fn ext(f: &Formula, c: &Coalgebra) -> Result<StateSet> {
    let all = || c.carrier().collect::<StateSet>();
    Ok(match f {
        Formula::Top => all(),
        Formula::Bot => StateSet::new(),
        Formula::Neg(g) => {
            let inner = ext(g, c)?;
            c.carrier().filter(|s| !inner.contains(s)).collect()
        }
        Formula::And(a, b) => ext(a, c)?.intersection(&ext(b, c)?).copied().collect(),
        Formula::Or(a, b) => ext(a, c)?.union(&ext(b, c)?).copied().collect(),
        Formula::Modal(m, child) => {
            let arg = match child {
                Some(g) => ext(g, c)?,
                None => StateSet::new(),
            };
            let mut out = StateSet::new();
            for z in c.carrier() {
                if satisfies(c.transition(z), m, &arg)? {
                    out.insert(z);
                }
            }
            out
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgebra::{FunctorKind, FunctorValue};
    use crate::logic::{parse_unchecked, Modality};
    use crate::num::Weight;

    fn loop_with_p() -> Coalgebra {
        Coalgebra::new(
            FunctorKind::Kripke {
                atoms: vec!["p".into()],
            },
            vec!["x".into()],
            vec![FunctorValue::kripke(["p"], [0])],
        )
        .unwrap()
    }

    #[test]
    fn top_holds_everywhere() {
        let c = loop_with_p();
        assert!(eval(&Formula::Top, &c, 0).unwrap());
        assert!(!eval(&Formula::Bot, &c, 0).unwrap());
    }

    #[test]
    fn self_loop_diamond() {
        let c = loop_with_p();
        assert!(eval(&parse_unchecked("<> p").unwrap(), &c, 0).unwrap());
        assert!(!eval(&parse_unchecked("<> ~p").unwrap(), &c, 0).unwrap());
    }

    #[test]
    fn graded_threshold_is_strict() {
        let c = Coalgebra::new(
            FunctorKind::Multiset,
            vec!["u".into()],
            vec![FunctorValue::multiset([(0, Weight::Finite(2))])],
        )
        .unwrap();
        assert!(eval(&parse_unchecked("<1> true").unwrap(), &c, 0).unwrap());
        assert!(!eval(&parse_unchecked("<2> true").unwrap(), &c, 0).unwrap());
    }

    #[test]
    fn mismatched_modality_is_rejected() {
        let c = loop_with_p();
        let f = Formula::modal(Modality::DiamondK(0), Formula::Top);
        assert!(matches!(
            eval(&f, &c, 0),
            Err(Error::SignatureMismatch { .. })
        ));
        assert!(eval(&Formula::atom("q"), &c, 0).is_err());
    }
}
