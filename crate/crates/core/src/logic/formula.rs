use std::fmt;

use crate::coalgebra::KindTag;
use crate::num::{format_rational, Rational};

/// A modal operator. `Atom` is nullary, every other operator is unary.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Modality {
    /// Kripke box, `succ ⊆ A`.
    Box,
    /// Kripke diamond, `succ ∩ A ≠ ∅`.
    Diamond,
    /// Graded diamond, `b(A) > k`.
    DiamondK(u64),
    /// Probability at least `p`.
    AtLeast(Rational),
    /// Probability more than `p`.
    MoreThan(Rational),
    /// Monotone neighbourhood box, `A ∈ N`.
    NbhdBox,
    /// Propositional atom of a Kripke vocabulary.
    Atom(String),
}

impl Modality {
    pub fn is_nullary(&self) -> bool {
        matches!(self, Modality::Atom(_))
    }

    /// The functor kind whose liftings interpret this operator.
    pub fn kind(&self) -> KindTag {
        match self {
            Modality::Box | Modality::Diamond | Modality::Atom(_) => KindTag::Kripke,
            Modality::DiamondK(_) => KindTag::Multiset,
            Modality::AtLeast(_) | Modality::MoreThan(_) => KindTag::Distribution,
            Modality::NbhdBox => KindTag::Neighborhood,
        }
    }
}

impl fmt::Display for Modality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Modality::Box => f.write_str("[]"),
            Modality::Diamond => f.write_str("<>"),
            Modality::DiamondK(k) => write!(f, "<{k}>"),
            Modality::AtLeast(p) => write!(f, "L({})", format_rational(p)),
            Modality::MoreThan(p) => write!(f, "M({})", format_rational(p)),
            Modality::NbhdBox => f.write_str("[m]"),
            Modality::Atom(name) => f.write_str(name),
        }
    }
}

/// Formula AST. `Or` and `Bot` are kept as primitives so positivity stays
/// a syntactic property.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Top,
    Bot,
    Neg(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    /// `None` exactly for nullary operators.
    Modal(Modality, Option<Box<Formula>>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Modal(Modality::Atom(name.into()), None)
    }

    pub fn modal(m: Modality, child: Formula) -> Formula {
        Formula::Modal(m, Some(Box::new(child)))
    }

    pub fn neg(f: Formula) -> Formula {
        Formula::Neg(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    /// Maximal nesting of modal operators; an atom counts as one level.
    pub fn rank(&self) -> usize {
        match self {
            Formula::Top | Formula::Bot => 0,
            Formula::Neg(f) => f.rank(),
            Formula::And(a, b) | Formula::Or(a, b) => a.rank().max(b.rank()),
            Formula::Modal(_, None) => 1,
            Formula::Modal(_, Some(f)) => 1 + f.rank(),
        }
    }

    /// No negation anywhere in the tree.
    pub fn is_positive(&self) -> bool {
        match self {
            Formula::Top | Formula::Bot => true,
            Formula::Neg(_) => false,
            Formula::And(a, b) | Formula::Or(a, b) => a.is_positive() && b.is_positive(),
            Formula::Modal(_, child) => child.as_ref().is_none_or(|f| f.is_positive()),
        }
    }

    /// Every modality occurring in the formula, in pre-order.
    pub fn modalities(&self) -> Vec<&Modality> {
        let mut out = Vec::new();
        self.collect_modalities(&mut out);
        out
    }

    fn collect_modalities<'a>(&'a self, out: &mut Vec<&'a Modality>) {
        match self {
            Formula::Top | Formula::Bot => {}
            Formula::Neg(f) => f.collect_modalities(out),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_modalities(out);
                b.collect_modalities(out);
            }
            Formula::Modal(m, child) => {
                out.push(m);
                if let Some(f) = child {
                    f.collect_modalities(out);
                }
            }
        }
    }
}

/// Prints in the concrete syntax accepted by [`crate::logic::parse_formula`].
/// Binary connectives are always parenthesized.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Top => f.write_str("true"),
            Formula::Bot => f.write_str("false"),
            Formula::Neg(g) => write!(f, "~{g}"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Modal(m, None) => write!(f, "{m}"),
            Formula::Modal(m, Some(g)) => write!(f, "{m} {g}"),
        }
    }
}
