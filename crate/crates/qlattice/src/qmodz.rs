//! Elements of Q/Z as canonical reduced fractions.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// A class in Q/Z, stored as `num/den` with `0 <= num < den` and
/// `gcd(num, den) = 1`. The zero class is `0/1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QmodZ {
    num: u64,
    den: u64,
}

impl QmodZ {
    /// Canonicalize an arbitrary signed fraction modulo 1.
    pub fn new(num: i64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::DomainError("denominator must be positive".into()));
        }
        let d = den as i64;
        let n = num.rem_euclid(d) as u64;
        let g = gcd(n, den);
        let (num, den) = (n / g, den / g);
        Ok(QmodZ { num, den })
    }

    pub fn zero() -> Self {
        QmodZ { num: 0, den: 1 }
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// Group law in Q/Z, always recanonicalized.
    pub fn add(&self, other: &QmodZ) -> QmodZ {
        let den = lcm(self.den, other.den);
        let num = (self.num as u128 * (den / self.den) as u128
            + other.num as u128 * (den / other.den) as u128)
            % den as u128;
        let g = gcd(num as u64, den);
        QmodZ { num: num as u64 / g, den: den / g }
    }

    /// Additive inverse: (den - num)/den.
    pub fn neg(&self) -> QmodZ {
        if self.num == 0 {
            *self
        } else {
            QmodZ { num: self.den - self.num, den: self.den }
        }
    }

    pub fn sub(&self, other: &QmodZ) -> QmodZ {
        self.add(&other.neg())
    }

    /// Multiply by a natural number (still a class mod 1).
    pub fn scale(&self, k: u64) -> QmodZ {
        let num = (self.num as u128 * k as u128) % self.den as u128;
        let g = gcd(num as u64, self.den);
        QmodZ { num: num as u64 / g, den: self.den / g }
    }

    /// The n-division points: all s with n*s = self in Q/Z.
    pub fn divided_by(&self, n: u64) -> Vec<QmodZ> {
        // s = (num + j*den) / (n*den), j = 0..n-1
        (0..n)
            .map(|j| {
                QmodZ::new((self.num + j * self.den) as i64, n * self.den)
                    .expect("denominator positive")
            })
            .collect()
    }

    /// Exhaustive list of classes with denominator dividing `den`.
    pub fn all_with_denominator(den: u64) -> Vec<QmodZ> {
        (0..den).map(|k| QmodZ::new(k as i64, den).unwrap()).collect()
    }
}

impl fmt::Display for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl Serialize for QmodZ {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("QmodZ", 2)?;
        s.serialize_field("num", &self.num)?;
        s.serialize_field("den", &self.den)?;
        s.end()
    }
}

/// Parse "a/b" (or a bare integer, meaning the zero class) into QmodZ.
impl std::str::FromStr for QmodZ {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |p: &str| {
            p.trim()
                .parse::<i64>()
                .map_err(|_| Error::DomainError(format!("cannot parse `{}` as a fraction", s)))
        };
        match s.split_once('/') {
            Some((n, d)) => {
                let den = parse(d)?;
                if den <= 0 {
                    return Err(Error::DomainError("denominator must be positive".into()));
                }
                QmodZ::new(parse(n)?, den as u64)
            }
            None => QmodZ::new(parse(s)?, 1),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: u64) -> QmodZ {
        QmodZ::new(n, d).unwrap()
    }

    #[test]
    fn addition_examples() {
        assert_eq!(q(1, 2).add(&q(1, 2)), QmodZ::zero());
        assert_eq!(q(1, 3).add(&q(1, 2)), q(5, 6));
        assert_eq!(QmodZ::zero().add(&q(3, 4)), q(3, 4));
    }

    #[test]
    fn canonical_form() {
        assert_eq!(q(7, 2), q(1, 2));
        assert_eq!(q(-1, 3), q(2, 3));
        assert_eq!(q(4, 6), q(2, 3));
        assert_eq!(q(3, 3), QmodZ::zero());
        assert_eq!(QmodZ::zero().denom(), 1);
    }

    #[test]
    fn division_points() {
        let pts = q(1, 2).divided_by(2);
        assert_eq!(pts, vec![q(1, 4), q(3, 4)]);
        let pts = QmodZ::zero().divided_by(3);
        assert_eq!(pts, vec![QmodZ::zero(), q(1, 3), q(2, 3)]);
    }

    #[test]
    fn parses_fractions() {
        assert_eq!("3/4".parse::<QmodZ>().unwrap(), q(3, 4));
        assert_eq!("0".parse::<QmodZ>().unwrap(), QmodZ::zero());
        assert!("3/0".parse::<QmodZ>().is_err());
    }

    prop_compose! {
        fn arb_qmodz()(den in 1u64..=24, num in 0i64..100) -> QmodZ {
            QmodZ::new(num % den as i64, den).unwrap()
        }
    }

    proptest! {
        #[test]
        fn abelian_group_laws(a in arb_qmodz(), b in arb_qmodz(), c in arb_qmodz()) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.add(&QmodZ::zero()), a);
            prop_assert_eq!(a.add(&a.neg()), QmodZ::zero());
        }

        #[test]
        fn inverse_is_den_minus_num(a in arb_qmodz()) {
            let n = a.neg();
            if !a.is_zero() {
                prop_assert_eq!(n.numer(), a.denom() - a.numer());
                prop_assert_eq!(n.denom(), a.denom());
            }
        }
    }

    #[test]
    fn exhaustive_group_laws_small_denominators() {
        for den in 1..=24u64 {
            let all = QmodZ::all_with_denominator(den);
            for a in &all {
                assert_eq!(a.add(&a.neg()), QmodZ::zero());
                for b in &all {
                    assert_eq!(a.add(b), b.add(a));
                }
            }
        }
    }
}
