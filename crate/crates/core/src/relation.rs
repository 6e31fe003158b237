use std::collections::BTreeSet;

use crate::coalgebra::{State, StateSet};

/// A relation `S ⊆ X × Y` between carriers of the given sizes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    left: usize,
    right: usize,
    pairs: BTreeSet<(State, State)>,
}

impl Relation {
    pub fn empty(left: usize, right: usize) -> Self {
        Relation {
            left,
            right,
            pairs: BTreeSet::new(),
        }
    }

    /// Pairs outside the carriers are dropped.
    pub fn new(left: usize, right: usize, pairs: impl IntoIterator<Item = (State, State)>) -> Self {
        Relation {
            left,
            right,
            pairs: pairs
                .into_iter()
                .filter(|&(x, y)| x < left && y < right)
                .collect(),
        }
    }

    pub fn full(left: usize, right: usize) -> Self {
        Relation::new(
            left,
            right,
            (0..left).flat_map(|x| (0..right).map(move |y| (x, y))),
        )
    }

    pub fn identity(n: usize) -> Self {
        Relation::new(n, n, (0..n).map(|x| (x, x)))
    }

    /// Graph of a map given as a table.
    pub fn graph(f: &[State], right: usize) -> Self {
        Relation::new(f.len(), right, f.iter().copied().enumerate())
    }

    pub fn left_size(&self) -> usize {
        self.left
    }

    pub fn right_size(&self) -> usize {
        self.right
    }

    pub fn pairs(&self) -> &BTreeSet<(State, State)> {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, x: State, y: State) -> bool {
        self.pairs.contains(&(x, y))
    }

    pub fn insert(&mut self, x: State, y: State) -> bool {
        assert!(x < self.left && y < self.right, "pair outside carriers");
        self.pairs.insert((x, y))
    }

    pub fn remove(&mut self, x: State, y: State) -> bool {
        self.pairs.remove(&(x, y))
    }

    pub fn iter(&self) -> impl Iterator<Item = (State, State)> + '_ {
        self.pairs.iter().copied()
    }

    /// `S[{x}]`.
    pub fn successors(&self, x: State) -> impl Iterator<Item = State> + '_ {
        self.pairs.range((x, 0)..(x + 1, 0)).map(|&(_, y)| y)
    }

    /// Relational image `S[A] = {y | ∃x ∈ A. xSy}`.
    pub fn image(&self, a: &StateSet) -> StateSet {
        a.iter().flat_map(|&x| self.successors(x)).collect()
    }

    pub fn inverse(&self) -> Relation {
        Relation {
            left: self.right,
            right: self.left,
            pairs: self.pairs.iter().map(|&(x, y)| (y, x)).collect(),
        }
    }

    /// `self ; other`: `x (S;S') z` iff `x S y` and `y S' z` for some `y`.
    pub fn compose(&self, other: &Relation) -> Relation {
        assert_eq!(self.right, other.left, "relations are not composable");
        let pairs: BTreeSet<_> = self
            .pairs
            .iter()
            .flat_map(|&(x, y)| other.successors(y).map(move |z| (x, z)))
            .collect();
        Relation {
            left: self.left,
            right: other.right,
            pairs,
        }
    }

    pub fn union(&self, other: &Relation) -> Relation {
        assert_eq!((self.left, self.right), (other.left, other.right));
        Relation {
            left: self.left,
            right: self.right,
            pairs: self.pairs.union(&other.pairs).copied().collect(),
        }
    }

    pub fn intersection(&self, other: &Relation) -> Relation {
        Relation {
            left: self.left,
            right: self.right,
            pairs: self.pairs.intersection(&other.pairs).copied().collect(),
        }
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    /// `xSy ∧ zSy ∧ zSw ⇒ xSw`.
    pub fn is_difunctional(&self) -> bool {
        let back = self.inverse();
        self.pairs.iter().all(|&(x, y)| {
            back.successors(y)
                .all(|z| self.successors(z).all(|w| self.contains(x, w)))
        })
    }

    /// Least difunctional relation containing `self`, by iterating
    /// `R := R ∪ R;R⁻¹;R` to a fixpoint.
    pub fn difunctional_closure(&self) -> Relation {
        let mut r = self.clone();
        loop {
            let step = r.compose(&r.inverse()).compose(&r);
            let next = r.union(&step);
            if next.len() == r.len() {
                return r;
            }
            r = next;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[State]) -> StateSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn image_examples() {
        assert!(Relation::empty(2, 3).image(&set(&[0, 1])).is_empty());
        let s = Relation::new(1, 3, [(0, 1)]);
        assert_eq!(s.image(&set(&[0])), set(&[1]));
        let s = Relation::new(1, 3, [(0, 1), (0, 2)]);
        assert_eq!(s.image(&set(&[0])), set(&[1, 2]));
    }

    #[test]
    fn closure_adds_zigzag_pair() {
        let s = Relation::new(2, 2, [(0, 0), (1, 0), (1, 1)]);
        assert!(!s.is_difunctional());
        let closed = s.difunctional_closure();
        assert_eq!(closed, Relation::full(2, 2));
        assert!(closed.is_difunctional());
        assert_eq!(closed.difunctional_closure(), closed);
        assert_eq!(
            Relation::empty(3, 3).difunctional_closure(),
            Relation::empty(3, 3)
        );
    }

    #[test]
    fn compose_and_inverse() {
        let s = Relation::new(2, 2, [(0, 1)]);
        let t = Relation::new(2, 3, [(1, 2), (1, 0)]);
        assert_eq!(s.compose(&t), Relation::new(2, 3, [(0, 0), (0, 2)]));
        assert_eq!(s.inverse(), Relation::new(2, 2, [(1, 0)]));
    }
}
