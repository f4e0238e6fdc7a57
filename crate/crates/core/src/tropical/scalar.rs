use std::fmt;

/// An element of the max-plus semiring ℝ ∪ {ε}.
///
/// `⊕` is max and `⊗` is +, with ε = −∞ the absorbing zero and 0 the unit.
/// The bottom element is a dedicated variant rather than a sentinel value,
/// so `ε ⊗ x = ε` holds structurally and emptiness tests downstream are
/// exact. The finite carrier is `i64`: every operation is a max or a sum,
/// so integral inputs never leave the integers.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TropicalScalar {
    /// ε = −∞, the semiring zero. Sorts below every finite value.
    Epsilon,
    Finite(i64),
}

use TropicalScalar::{Epsilon, Finite};

impl TropicalScalar {
    /// The semiring unit e = 0.
    pub const UNIT: TropicalScalar = Finite(0);

    /// Tropical addition: `a ⊕ b = max(a, b)`.
    #[inline]
    pub fn oplus(self, other: TropicalScalar) -> TropicalScalar {
        self.max(other)
    }

    /// Tropical multiplication: `a ⊗ b = a + b`, with ε absorbing.
    #[inline]
    pub fn otimes(self, other: TropicalScalar) -> TropicalScalar {
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(a + b),
            _ => Epsilon,
        }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        matches!(self, Finite(_))
    }

    /// The finite value, if any.
    #[inline]
    pub fn finite(self) -> Option<i64> {
        match self {
            Finite(a) => Some(a),
            Epsilon => None,
        }
    }

    /// The value as a float, with ε mapped to −∞ (for point arithmetic).
    #[inline]
    pub fn to_f64(self) -> f64 {
        match self {
            Finite(a) => a as f64,
            Epsilon => f64::NEG_INFINITY,
        }
    }
}

impl From<i64> for TropicalScalar {
    fn from(v: i64) -> Self {
        Finite(v)
    }
}

/// Tropical inverse of a finite value (−a); ε maps to ε.
impl std::ops::Neg for TropicalScalar {
    type Output = TropicalScalar;

    #[inline]
    fn neg(self) -> TropicalScalar {
        match self {
            Finite(a) => Finite(-a),
            Epsilon => Epsilon,
        }
    }
}

impl fmt::Debug for TropicalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Epsilon => write!(f, "\u{3b5}"),
            Finite(a) => write!(f, "{a}"),
        }
    }
}

impl fmt::Display for TropicalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_is_absorbing_and_neutral() {
        let a = TropicalScalar::from(7);
        assert_eq!(Epsilon.oplus(a), a);
        assert_eq!(a.oplus(Epsilon), a);
        assert_eq!(Epsilon.otimes(a), Epsilon);
        assert_eq!(a.otimes(Epsilon), Epsilon);
        assert_eq!(TropicalScalar::UNIT.otimes(a), a);
    }

    #[test]
    fn ordering_puts_epsilon_at_the_bottom() {
        assert!(Epsilon < Finite(i64::MIN));
        assert!(Finite(-3) < Finite(2));
    }

    #[test]
    fn integral_closure() {
        // max and + of integers are integers; the representation cannot
        // round by construction.
        let a = Finite(3).otimes(Finite(-5)).oplus(Finite(1));
        assert_eq!(a, Finite(1));
    }
}
