//! Finite coalgebras for the Kripke, multiset, distribution and monotone
//! neighbourhood functors.
//!
//! States are indices into an ordered carrier. A [`FunctorValue`] is one
//! element of `TX` over such indices; [`FunctorValue::relabel`] is the
//! functorial action `Tf` for a map given as a lookup table.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::num::{format_rational, Rational, Weight};

pub type State = usize;
pub type StateSet = BTreeSet<State>;

/// Discriminant shared by kinds and values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KindTag {
    Kripke,
    Multiset,
    Distribution,
    Neighborhood,
}

impl KindTag {
    pub const ALL: [KindTag; 4] = [
        KindTag::Kripke,
        KindTag::Multiset,
        KindTag::Distribution,
        KindTag::Neighborhood,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KindTag::Kripke => "kripke",
            KindTag::Multiset => "multiset",
            KindTag::Distribution => "distribution",
            KindTag::Neighborhood => "neighborhood",
        }
    }

    pub fn from_name(name: &str) -> Option<KindTag> {
        KindTag::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Hard-coded: every kind except monotone neighbourhoods preserves weak
    /// pullbacks.
    pub fn preserves_weak_pullbacks(self) -> bool {
        !matches!(self, KindTag::Neighborhood)
    }
}

impl fmt::Display for KindTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FunctorKind {
    /// `C_V × 𝒫X`; an empty vocabulary gives plain finite powerset.
    Kripke {
        atoms: Vec<String>,
    },
    Multiset,
    Distribution,
    Neighborhood,
}

impl FunctorKind {
    pub fn tag(&self) -> KindTag {
        match self {
            FunctorKind::Kripke { .. } => KindTag::Kripke,
            FunctorKind::Multiset => KindTag::Multiset,
            FunctorKind::Distribution => KindTag::Distribution,
            FunctorKind::Neighborhood => KindTag::Neighborhood,
        }
    }

    pub fn atoms(&self) -> &[String] {
        match self {
            FunctorKind::Kripke { atoms } => atoms,
            _ => &[],
        }
    }
}

/// One element of `TX`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FunctorValue {
    Kripke {
        props: BTreeSet<String>,
        succ: StateSet,
    },
    /// No explicit zero weights once normalized.
    Multiset(BTreeMap<State, Weight>),
    /// Positive masses summing to exactly one.
    Distribution(BTreeMap<State, Rational>),
    /// Minimal elements of an upward-closed family; an antichain once
    /// normalized, sorted.
    Neighborhood(Vec<StateSet>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValueError {
    #[error("map is undefined on state {0}")]
    PartialMap(State),
    #[error("functor kind mismatch: {left} vs {right}")]
    KindMismatch { left: KindTag, right: KindTag },
}

impl FunctorValue {
    pub fn kripke<P, S>(props: P, succ: S) -> Self
    where
        P: IntoIterator,
        P::Item: Into<String>,
        S: IntoIterator<Item = State>,
    {
        FunctorValue::Kripke {
            props: props.into_iter().map(Into::into).collect(),
            succ: succ.into_iter().collect(),
        }
    }

    pub fn multiset(weights: impl IntoIterator<Item = (State, Weight)>) -> Self {
        let mut map = BTreeMap::new();
        for (s, w) in weights {
            let entry = map.entry(s).or_insert(Weight::ZERO);
            *entry = *entry + w;
        }
        map.retain(|_, w: &mut Weight| !w.is_zero());
        FunctorValue::Multiset(map)
    }

    /// Builds a distribution without checking the unit-mass invariant;
    /// see [`FunctorValue::check`].
    pub fn distribution(masses: impl IntoIterator<Item = (State, Rational)>) -> Self {
        let mut map = BTreeMap::new();
        for (s, m) in masses {
            *map.entry(s).or_insert_with(Rational::zero) += m;
        }
        map.retain(|_, m: &mut Rational| !m.is_zero());
        FunctorValue::Distribution(map)
    }

    pub fn neighborhood(minimals: impl IntoIterator<Item = StateSet>) -> Self {
        FunctorValue::Neighborhood(minimize(minimals.into_iter().collect()))
    }

    pub fn tag(&self) -> KindTag {
        match self {
            FunctorValue::Kripke { .. } => KindTag::Kripke,
            FunctorValue::Multiset(_) => KindTag::Multiset,
            FunctorValue::Distribution(_) => KindTag::Distribution,
            FunctorValue::Neighborhood(_) => KindTag::Neighborhood,
        }
    }

    /// Support set: every monotone lifting of the kind is insensitive to
    /// states outside it.
    pub fn base(&self) -> StateSet {
        match self {
            FunctorValue::Kripke { succ, .. } => succ.clone(),
            FunctorValue::Multiset(w) => w
                .iter()
                .filter(|(_, w)| !w.is_zero())
                .map(|(s, _)| *s)
                .collect(),
            FunctorValue::Distribution(m) => m
                .iter()
                .filter(|(_, m)| !m.is_zero())
                .map(|(s, _)| *s)
                .collect(),
            FunctorValue::Neighborhood(mins) => mins.iter().flatten().copied().collect(),
        }
    }

    /// Every state mentioned by the value, including zero-weight entries
    /// and non-minimal neighbourhood sets.
    pub fn mentioned(&self) -> StateSet {
        match self {
            FunctorValue::Kripke { succ, .. } => succ.clone(),
            FunctorValue::Multiset(w) => w.keys().copied().collect(),
            FunctorValue::Distribution(m) => m.keys().copied().collect(),
            FunctorValue::Neighborhood(mins) => mins.iter().flatten().copied().collect(),
        }
    }

    /// Canonical representative.
    pub fn normalized(&self) -> FunctorValue {
        match self {
            FunctorValue::Kripke { .. } => self.clone(),
            FunctorValue::Multiset(w) => FunctorValue::multiset(w.iter().map(|(s, w)| (*s, *w))),
            FunctorValue::Distribution(m) => {
                FunctorValue::distribution(m.iter().map(|(s, m)| (*s, *m)))
            }
            FunctorValue::Neighborhood(mins) => FunctorValue::neighborhood(mins.iter().cloned()),
        }
    }

    /// Functorial action `Tf` for `f` given as a table indexed by state.
    /// The result is normalized.
    pub fn relabel(&self, f: &[State]) -> Result<FunctorValue, ValueError> {
        let map = |s: State| f.get(s).copied().ok_or(ValueError::PartialMap(s));
        Ok(match self {
            FunctorValue::Kripke { props, succ } => FunctorValue::Kripke {
                props: props.clone(),
                succ: succ.iter().map(|&s| map(s)).collect::<Result<_, _>>()?,
            },
            FunctorValue::Multiset(w) => {
                FunctorValue::multiset(w.iter().map(|(&s, &w)| Ok((map(s)?, w))).collect::<Result<
                    Vec<_>,
                    ValueError,
                >>(
                )?)
            }
            FunctorValue::Distribution(m) => FunctorValue::distribution(
                m.iter()
                    .map(|(&s, &m)| Ok((map(s)?, m)))
                    .collect::<Result<Vec<_>, ValueError>>()?,
            ),
            // B ∈ Tf(N) iff f⁻¹[B] ∈ N iff B includes the image of a minimal.
            FunctorValue::Neighborhood(mins) => FunctorValue::neighborhood(
                mins.iter()
                    .map(|m| m.iter().map(|&s| map(s)).collect::<Result<StateSet, _>>())
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        })
    }

    /// Equality of normalized representations.
    pub fn values_equal(&self, other: &FunctorValue) -> Result<bool, ValueError> {
        if self.tag() != other.tag() {
            return Err(ValueError::KindMismatch {
                left: self.tag(),
                right: other.tag(),
            });
        }
        Ok(self.normalized() == other.normalized())
    }

    /// Invariant violations of this value in isolation.
    pub fn check(&self) -> Vec<String> {
        let mut problems = Vec::new();
        match self {
            FunctorValue::Kripke { .. } => {}
            FunctorValue::Multiset(w) => {
                for (s, w) in w {
                    if w.is_zero() {
                        problems.push(format!("explicit zero weight on state {s}"));
                    }
                }
            }
            FunctorValue::Distribution(m) => {
                for (s, m) in m {
                    if *m <= Rational::zero() {
                        problems.push(format!(
                            "non-positive mass {} on state {s}",
                            format_rational(m)
                        ));
                    }
                }
                let total: Rational = m.values().sum();
                if total != Rational::one() {
                    problems.push(format!("mass sum {} ≠ 1", display_rational(&total)));
                }
            }
            FunctorValue::Neighborhood(mins) => {
                for (i, a) in mins.iter().enumerate() {
                    for (j, b) in mins.iter().enumerate() {
                        if i != j && a.is_subset(b) {
                            problems.push("not an antichain".to_string());
                            return problems;
                        }
                    }
                }
            }
        }
        problems
    }

    /// Human-readable rendering with state names supplied by `name`.
    pub fn render(&self, name: &dyn Fn(State) -> String) -> String {
        let set = |s: &StateSet| {
            let items: Vec<_> = s.iter().map(|&x| name(x)).collect();
            format!("{{{}}}", items.join(","))
        };
        match self {
            FunctorValue::Kripke { props, succ } => {
                let props: Vec<_> = props.iter().cloned().collect();
                format!("({{{}}}, {})", props.join(","), set(succ))
            }
            FunctorValue::Multiset(w) => {
                let items: Vec<_> = w.iter().map(|(s, w)| format!("{}:{w}", name(*s))).collect();
                format!("[{}]", items.join(", "))
            }
            FunctorValue::Distribution(m) => {
                let items: Vec<_> = m
                    .iter()
                    .map(|(s, m)| format!("{}:{}", name(*s), format_rational(m)))
                    .collect();
                format!("[{}]", items.join(", "))
            }
            FunctorValue::Neighborhood(mins) => {
                let items: Vec<_> = mins.iter().map(set).collect();
                format!("up{{{}}}", items.join(", "))
            }
        }
    }
}

fn display_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format_rational(r)
    }
}

/// Minimal elements of a family of sets, sorted and deduplicated.
pub fn minimize(mut family: Vec<StateSet>) -> Vec<StateSet> {
    family.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    family.dedup();
    let mut out: Vec<StateSet> = Vec::new();
    for s in family {
        if !out.iter().any(|m| m.is_subset(&s)) {
            out.push(s);
        }
    }
    out.sort();
    out
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid coalgebra: {}", .violations.join("; "))]
pub struct ValidationError {
    pub violations: Vec<String>,
}

/// A finite coalgebra `(X, ξ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coalgebra {
    kind: FunctorKind,
    states: Vec<String>,
    index: HashMap<String, State>,
    transition: Vec<FunctorValue>,
}

impl Coalgebra {
    /// Builds and validates.
    pub fn new(
        kind: FunctorKind,
        states: Vec<String>,
        transition: Vec<FunctorValue>,
    ) -> Result<Self, ValidationError> {
        let c = Self::new_unchecked(kind, states, transition);
        c.validate()?;
        Ok(c)
    }

    pub fn new_unchecked(
        kind: FunctorKind,
        states: Vec<String>,
        transition: Vec<FunctorValue>,
    ) -> Self {
        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Coalgebra {
            kind,
            states,
            index,
            transition,
        }
    }

    pub fn validate(&self) -> Result<(), ValidationError> {
        let mut violations = Vec::new();
        if self.states.is_empty() {
            violations.push("carrier is empty".to_string());
        }
        if self.index.len() != self.states.len() {
            violations.push("duplicate state names".to_string());
        }
        if self.transition.len() != self.states.len() {
            violations.push(format!(
                "{} states but {} transition entries",
                self.states.len(),
                self.transition.len()
            ));
        }
        let atoms: BTreeSet<&String> = self.kind.atoms().iter().collect();
        for (i, value) in self.transition.iter().enumerate() {
            let here = self.name(i);
            if value.tag() != self.kind.tag() {
                violations.push(format!(
                    "state {here}: {} value in a {} coalgebra",
                    value.tag(),
                    self.kind.tag()
                ));
                continue;
            }
            if let FunctorValue::Kripke { props, .. } = value {
                for p in props {
                    if !atoms.contains(p) {
                        violations.push(format!("state {here}: unknown atom {p:?}"));
                    }
                }
            }
            for s in value.mentioned() {
                if s >= self.states.len() {
                    violations.push(format!("state {here}: successor index {s} outside carrier"));
                }
            }
            for p in value.check() {
                violations.push(format!("state {here}: {p}"));
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(ValidationError { violations })
        }
    }

    pub fn kind(&self) -> &FunctorKind {
        &self.kind
    }

    pub fn tag(&self) -> KindTag {
        self.kind.tag()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn name(&self, s: State) -> String {
        self.states
            .get(s)
            .cloned()
            .unwrap_or_else(|| format!("#{s}"))
    }

    pub fn state(&self, name: &str) -> Option<State> {
        self.index.get(name).copied()
    }

    pub fn transition(&self, s: State) -> &FunctorValue {
        &self.transition[s]
    }

    pub fn transitions(&self) -> &[FunctorValue] {
        &self.transition
    }

    pub fn carrier(&self) -> impl Iterator<Item = State> {
        0..self.states.len()
    }
}
