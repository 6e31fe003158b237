use std::fmt;

use crate::coalgebra::{Coalgebra, FunctorValue, State};
use crate::error::{Error, Result};
use crate::relation::Relation;

/// A cospan `X → Z ← Y` of coalgebra morphisms into the quotient of
/// `X ⊎ Y` by the equivalence generated by a relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientWitness {
    pub kappa_left: Vec<usize>,
    pub kappa_right: Vec<usize>,
    pub chi: Vec<FunctorValue>,
}

/// Two members of one block whose relabeled transitions disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientFailure {
    pub block: usize,
    pub first: String,
    pub first_value: String,
    pub second: String,
    pub second_value: String,
}

impl fmt::Display for QuotientFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "block B{} is not well defined: {} ↦ {} but {} ↦ {}",
            self.block, self.first, self.first_value, self.second, self.second_value
        )
    }
}

impl QuotientWitness {
    pub fn block_count(&self) -> usize {
        self.chi.len()
    }

    /// The quotient as a coalgebra with states `B0, B1, …`.
    pub fn coalgebra(&self, c: &Coalgebra) -> Result<Coalgebra> {
        Ok(Coalgebra::new(
            c.kind().clone(),
            (0..self.chi.len()).map(|b| format!("B{b}")).collect(),
            self.chi.clone(),
        )?)
    }

    /// Checks `Tκ₁(ξ(x)) = χ(κ₁(x))` for every `x` and symmetrically for
    /// the right coalgebra.
    pub fn verify(&self, c: &Coalgebra, d: &Coalgebra) -> Result<bool> {
        for x in c.carrier() {
            let pushed = c.transition(x).relabel(&self.kappa_left)?;
            if !pushed.values_equal(&self.chi[self.kappa_left[x]])? {
                return Ok(false);
            }
        }
        for y in d.carrier() {
            let pushed = d.transition(y).relabel(&self.kappa_right)?;
            if !pushed.values_equal(&self.chi[self.kappa_right[y]])? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self, c: &Coalgebra, d: &Coalgebra) -> serde_json::Value {
        let block = |b: usize| format!("B{b}");
        let left: serde_json::Map<_, _> = c
            .carrier()
            .map(|x| (c.name(x), block(self.kappa_left[x]).into()))
            .collect();
        let right: serde_json::Map<_, _> = d
            .carrier()
            .map(|y| (d.name(y), block(self.kappa_right[y]).into()))
            .collect();
        let chi: serde_json::Map<_, _> = self
            .chi
            .iter()
            .enumerate()
            .map(|(b, v)| (block(b), crate::io::value_to_json(v, &|s| block(s))))
            .collect();
        serde_json::json!({
            "blocks": (0..self.chi.len()).map(block).collect::<Vec<_>>(),
            "kappa_left": left,
            "kappa_right": right,
            "structure": chi,
        })
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Builds the quotient of `X ⊎ Y` by the equivalence generated by `s` and
/// checks that the induced structure map is well defined.
pub fn quotient_witness(s: &Relation, c: &Coalgebra, d: &Coalgebra) -> Result<QuotientWitness> {
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
    let n = c.len() + d.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for (x, y) in s.iter() {
        let (a, b) = (find(&mut parent, x), find(&mut parent, c.len() + y));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut block_of_root = vec![usize::MAX; n];
    let mut blocks = Vec::with_capacity(n);
    let mut count = 0;
    for i in 0..n {
        let root = find(&mut parent, i);
        if block_of_root[root] == usize::MAX {
            block_of_root[root] = count;
            count += 1;
        }
        blocks.push(block_of_root[root]);
    }
    let kappa_left = blocks[..c.len()].to_vec();
    let kappa_right = blocks[c.len()..].to_vec();

    let name = |i: usize| {
        if i < c.len() {
            c.name(i)
        } else {
            d.name(i - c.len())
        }
    };
    let value = |i: usize| -> Result<FunctorValue> {
        Ok(if i < c.len() {
            c.transition(i).relabel(&kappa_left)?
        } else {
            d.transition(i - c.len()).relabel(&kappa_right)?
        })
    };
    let mut chi: Vec<Option<(State, FunctorValue)>> = vec![None; count];
    for (i, &b) in blocks.iter().enumerate() {
        let v = value(i)?;
        match &chi[b] {
            None => chi[b] = Some((i, v)),
            Some((first, w)) => {
                if !w.values_equal(&v)? {
                    let render = |v: &FunctorValue| v.render(&|s| format!("B{s}"));
                    return Err(Error::NotWellDefined(Box::new(QuotientFailure {
                        block: b,
                        first: name(*first),
                        first_value: render(w),
                        second: name(i),
                        second_value: render(&v),
                    })));
                }
            }
        }
    }
    let witness = QuotientWitness {
        kappa_left,
        kappa_right,
        chi: chi
            .into_iter()
            .map(|e| e.expect("every block has a member").1)
            .collect(),
    };
    if !witness.verify(c, d)? {
        return Err(Error::InternalCheck(
            "quotient maps are not coalgebra morphisms".into(),
        ));
    }
    Ok(witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgebra::FunctorKind;

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
    fn identity_quotient_is_isomorphic() {
        let c = kripke(&[&[1], &[0, 1]]);
        let w = quotient_witness(&Relation::identity(2), &c, &c).unwrap();
        assert_eq!(w.block_count(), 2);
        assert_eq!(w.kappa_left, vec![0, 1]);
        assert_eq!(w.kappa_right, vec![0, 1]);
        assert_eq!(w.chi, c.transitions().to_vec());
        assert!(w.coalgebra(&c).is_ok());
    }

    #[test]
    fn deadlock_against_live_state_fails() {
        let c = kripke(&[&[]]);
        let d = kripke(&[&[0]]);
        let err = quotient_witness(&Relation::full(1, 1), &c, &d).unwrap_err();
        let Error::NotWellDefined(failure) = err else {
            panic!("expected a well-definedness failure, got {err}");
        };
        assert_eq!(failure.first, "s0");
        assert_eq!(failure.first_value, "({}, {})");
        assert_eq!(failure.second_value, "({}, {B0})");
    }
}
