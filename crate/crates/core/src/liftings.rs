//! Predicate liftings: `t ⊨ ♥A` for every supported operator, the induced
//! preorder on `TX`, and the homomorphism criterion built on it.
//!
//! Quantification over predicates `A ⊆ X` is restricted to subsets of the
//! relevant base. For every supported lifting `t ⊨ ♥A` iff
//! `t ⊨ ♥(A ∩ base(t))`, so together with monotony the restricted checks
//! decide the unrestricted ones.

use std::collections::BTreeSet;
use std::mem::discriminant;

use num_traits::Zero;

use crate::coalgebra::{Coalgebra, FunctorValue, KindTag, State, StateSet};
use crate::config::max_base;
use crate::error::{Error, Result};
use crate::logic::Modality;
use crate::num::{Rational, Weight};

/// A finite set of operators over one functor kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaSignature {
    kind: KindTag,
    modalities: Vec<Modality>,
    separating: bool,
    /// Any index of an operator family present in `modalities` is admitted
    /// by the parser (auto grids).
    open_families: bool,
    /// The thresholds cover every subset measure of the models the
    /// signature was resolved against, so simulation reduces to the
    /// measure inequality.
    measure_complete: bool,
}

impl LambdaSignature {
    /// Explicit operator list with a declared separation flag.
    pub fn new(kind: KindTag, modalities: Vec<Modality>, separating: bool) -> Self {
        let mut sig = LambdaSignature {
            kind,
            modalities,
            separating,
            open_families: false,
            measure_complete: false,
        };
        sig.dedup();
        sig
    }

    /// `V ∪ {□, ◇}` or a part of it. Separating when all atoms are present
    /// together with at least one of the box and the diamond.
    pub fn kripke(with_box: bool, with_diamond: bool, atoms: &[String]) -> Self {
        let mut modalities = Vec::new();
        if with_box {
            modalities.push(Modality::Box);
        }
        if with_diamond {
            modalities.push(Modality::Diamond);
        }
        modalities.extend(atoms.iter().cloned().map(Modality::Atom));
        LambdaSignature::new(KindTag::Kripke, modalities, with_box || with_diamond)
    }

    /// `{◇_k | k ≤ max_k}`. Declared separating (and measure-complete) when
    /// `max_k` reaches the largest finite total weight of the models.
    pub fn graded(max_k: u64, models: &[&Coalgebra]) -> Self {
        let needed = models
            .iter()
            .flat_map(|c| c.transitions())
            .map(finite_total)
            .max()
            .unwrap_or(0);
        let mut sig = LambdaSignature::new(
            KindTag::Multiset,
            (0..=max_k).map(Modality::DiamondK).collect(),
            max_k >= needed,
        );
        sig.measure_complete = max_k >= needed;
        sig
    }

    /// Graded operators up to the largest finite total weight of the models.
    pub fn graded_auto(models: &[&Coalgebra]) -> Self {
        let needed = models
            .iter()
            .flat_map(|c| c.transitions())
            .map(finite_total)
            .max()
            .unwrap_or(0);
        let mut sig = LambdaSignature::graded(needed, models);
        sig.open_families = true;
        sig
    }

    /// `L_p` (and/or `M_p`) for `p` ranging over every subset mass of every
    /// distribution in the models.
    pub fn probabilistic_auto(models: &[&Coalgebra], lower: bool, strict: bool) -> Result<Self> {
        let mut grid = BTreeSet::new();
        grid.insert(Rational::zero());
        for c in models {
            for value in c.transitions() {
                if let FunctorValue::Distribution(m) = value {
                    let support: Vec<Rational> = m.values().copied().collect();
                    check_base(support.len())?;
                    for mask in 0u32..(1 << support.len()) {
                        grid.insert(
                            support
                                .iter()
                                .enumerate()
                                .filter(|(i, _)| mask >> i & 1 == 1)
                                .map(|(_, m)| *m)
                                .sum(),
                        );
                    }
                }
            }
        }
        let mut modalities = Vec::new();
        if lower {
            modalities.extend(grid.iter().copied().map(Modality::AtLeast));
        }
        if strict {
            modalities.extend(grid.iter().copied().map(Modality::MoreThan));
        }
        let mut sig = LambdaSignature::new(KindTag::Distribution, modalities, lower || strict);
        sig.open_families = true;
        sig.measure_complete = lower || strict;
        Ok(sig)
    }

    pub fn neighborhood() -> Self {
        LambdaSignature::new(KindTag::Neighborhood, vec![Modality::NbhdBox], true)
    }

    /// Overrides the declared separation flag.
    pub fn declare_separating(mut self, separating: bool) -> Self {
        self.separating = separating;
        self
    }

    fn dedup(&mut self) {
        let mut seen = BTreeSet::new();
        self.modalities.retain(|m| seen.insert(m.clone()));
    }

    pub fn kind(&self) -> KindTag {
        self.kind
    }

    pub fn modalities(&self) -> &[Modality] {
        &self.modalities
    }

    pub fn is_separating(&self) -> bool {
        self.separating
    }

    pub fn is_measure_complete(&self) -> bool {
        self.measure_complete
    }

    pub fn contains(&self, m: &Modality) -> bool {
        self.modalities.contains(m)
    }

    /// Whether formulas over this signature may use `m`.
    pub fn admits(&self, m: &Modality) -> bool {
        if m.kind() != self.kind {
            return false;
        }
        self.contains(m)
            || (self.open_families
                && self
                    .modalities
                    .iter()
                    .any(|n| discriminant(n) == discriminant(m)))
    }

    /// Errors unless the signature interprets over `kind`.
    pub fn check_kind(&self, kind: KindTag) -> Result<()> {
        if self.kind != kind {
            return Err(Error::KindMismatch {
                expected: self.kind,
                found: kind,
            });
        }
        Ok(())
    }
}

fn finite_total(value: &FunctorValue) -> u64 {
    match value {
        FunctorValue::Multiset(w) => w
            .values()
            .filter_map(|w| match w {
                Weight::Finite(n) => Some(*n),
                Weight::Infinite => None,
            })
            .sum(),
        _ => 0,
    }
}

pub(crate) fn check_base(size: usize) -> Result<()> {
    let limit = max_base();
    if size > limit {
        return Err(Error::BaseTooLarge { size, limit });
    }
    Ok(())
}

/// Every subset of `base`, smallest masks first. Errors past the
/// exhaustive-subset bound.
pub fn subsets(base: &StateSet) -> Result<impl Iterator<Item = StateSet>> {
    check_base(base.len())?;
    let items: Vec<State> = base.iter().copied().collect();
    Ok((0u64..1 << items.len()).map(move |mask| {
        items
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, s)| *s)
            .collect()
    }))
}

/// `t ⊨ ♥A`.
pub fn satisfies(t: &FunctorValue, h: &Modality, a: &StateSet) -> Result<bool> {
    let ok = match (t, h) {
        (FunctorValue::Kripke { succ, .. }, Modality::Box) => succ.is_subset(a),
        (FunctorValue::Kripke { succ, .. }, Modality::Diamond) => !succ.is_disjoint(a),
        (FunctorValue::Kripke { props, .. }, Modality::Atom(p)) => props.contains(p),
        (FunctorValue::Multiset(w), Modality::DiamondK(k)) => w
            .iter()
            .filter(|(s, _)| a.contains(s))
            .map(|(_, w)| *w)
            .sum::<Weight>()
            .exceeds(*k),
        (FunctorValue::Distribution(m), Modality::AtLeast(p)) => mass(m, a) >= *p,
        (FunctorValue::Distribution(m), Modality::MoreThan(p)) => mass(m, a) > *p,
        (FunctorValue::Neighborhood(mins), Modality::NbhdBox) => {
            mins.iter().any(|m| m.is_subset(a))
        }
        _ => {
            return Err(Error::SignatureMismatch {
                modality: h.clone(),
                kind: t.tag(),
            })
        }
    };
    Ok(ok)
}

fn mass(m: &std::collections::BTreeMap<State, Rational>, a: &StateSet) -> Rational {
    m.iter()
        .filter(|(s, _)| a.contains(s))
        .map(|(_, m)| *m)
        .sum()
}

/// `t ≤_Λ u`: every `(♥, A)` satisfied by `t` is satisfied by `u`.
pub fn lambda_leq(t: &FunctorValue, u: &FunctorValue, sig: &LambdaSignature) -> Result<bool> {
    Ok(lambda_leq_witness(t, u, sig)?.is_none())
}

/// A pair `(♥, A)` with `t ⊨ ♥A` and `u ⊭ ♥A`, if any. `A` ranges over
/// subsets of the joint base.
pub fn lambda_leq_witness(
    t: &FunctorValue,
    u: &FunctorValue,
    sig: &LambdaSignature,
) -> Result<Option<(Modality, StateSet)>> {
    if t.tag() != u.tag() {
        return Err(Error::KindMismatch {
            expected: t.tag(),
            found: u.tag(),
        });
    }
    sig.check_kind(t.tag())?;
    let joint: StateSet = t.base().union(&u.base()).copied().collect();
    for a in subsets(&joint)? {
        for h in sig.modalities() {
            if satisfies(t, h, &a)? && !satisfies(u, h, &a)? {
                return Ok(Some((h.clone(), a)));
            }
        }
    }
    Ok(None)
}

/// A predicate separating `t` from `u` in either direction. The flag is
/// `true` when `t` satisfies it and `u` does not.
pub fn distinguishing_pair(
    t: &FunctorValue,
    u: &FunctorValue,
    sig: &LambdaSignature,
) -> Result<Option<(Modality, StateSet, bool)>> {
    if let Some((h, a)) = lambda_leq_witness(t, u, sig)? {
        return Ok(Some((h, a, true)));
    }
    Ok(lambda_leq_witness(u, t, sig)?.map(|(h, a)| (h, a, false)))
}

/// Checks `Tf(ξ(x)) ≤_Λ ζ(f(x))` for every state `x` of `c`.
pub fn is_lambda_homomorphism(
    f: &[State],
    c: &Coalgebra,
    d: &Coalgebra,
    sig: &LambdaSignature,
) -> Result<bool> {
    check_map(f, c, d)?;
    for x in c.carrier() {
        let pushed = c.transition(x).relabel(f)?;
        if !lambda_leq(&pushed, d.transition(f[x]), sig)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub(crate) fn check_map(f: &[State], c: &Coalgebra, d: &Coalgebra) -> Result<()> {
    if f.len() < c.len() {
        return Err(Error::PartialMap(f.len()));
    }
    if let Some(bad) = f.iter().take(c.len()).find(|&&y| y >= d.len()) {
        return Err(Error::CarrierMismatch(format!(
            "map target {bad} outside the codomain carrier"
        )));
    }
    Ok(())
}
