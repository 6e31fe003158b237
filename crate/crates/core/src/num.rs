//! Exact numbers used by functor values: rationals for distributions and
//! saturating `ℕ ∪ {∞}` weights for multisets.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_traits::{One, Zero};

/// Exact rational. `i128` components keep sums of desk-scale distributions
/// far from overflow.
pub type Rational = num_rational::Ratio<i128>;

/// Parses `"n/d"` or a bare integer `"n"`.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: i128 = num
        .parse()
        .map_err(|_| format!("invalid rational numerator in {text:?}"))?;
    let den: i128 = den
        .parse()
        .map_err(|_| format!("invalid rational denominator in {text:?}"))?;
    if den == 0 {
        return Err(format!("zero denominator in {text:?}"));
    }
    Ok(Rational::new(num, den))
}

/// Always prints `n/d`, including for integers, so the output re-parses
/// to the same value in every context.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn is_unit_interval(r: &Rational) -> bool {
    *r >= Rational::zero() && *r <= Rational::one()
}

/// Multiset weight in `ℕ ∪ {∞}`. Addition saturates at `Infinite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Weight {
    Finite(u64),
    Infinite,
}

impl Weight {
    pub const ZERO: Weight = Weight::Finite(0);

    pub fn is_zero(self) -> bool {
        self == Weight::ZERO
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Weight::Finite(_))
    }

    /// `self > k`; `∞` exceeds every natural.
    pub fn exceeds(self, k: u64) -> bool {
        match self {
            Weight::Finite(w) => w > k,
            Weight::Infinite => true,
        }
    }
}

impl Add for Weight {
    type Output = Weight;

    fn add(self, rhs: Weight) -> Weight {
        match (self, rhs) {
            (Weight::Finite(a), Weight::Finite(b)) => match a.checked_add(b) {
                Some(s) => Weight::Finite(s),
                None => Weight::Infinite,
            },
            _ => Weight::Infinite,
        }
    }
}

impl std::iter::Sum for Weight {
    fn sum<I: Iterator<Item = Weight>>(iter: I) -> Weight {
        iter.fold(Weight::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Finite(w) => write!(f, "{w}"),
            Weight::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Weight {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "∞" => Ok(Weight::Infinite),
            other => other
                .parse::<u64>()
                .map(Weight::Finite)
                .map_err(|_| format!("invalid multiset weight {s:?}")),
        }
    }
}
