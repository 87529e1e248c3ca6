//! Level-N truncations of endomorphisms of Q/Z.
//!
//! An endomorphism of Q/Z is determined by a compatible system of residues,
//! one for each level; the crate works with a single level at a time and
//! makes the level-change maps explicit. Raising the level is one-to-many
//! (a refinement), lowering is the canonical projection, and lowering after
//! raising is the identity.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::qmodz::{gcd, QmodZ};

/// A residue `r mod N` standing for the endomorphism `x -> r*x` on the
/// classes of denominator dividing N.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResidueEndo {
    level: u64,
    residue: u64,
}

impl ResidueEndo {
    pub fn new(level: u64, residue: u64) -> Result<Self> {
        if level == 0 {
            return Err(Error::DomainError("level must be positive".into()));
        }
        Ok(ResidueEndo { level, residue: residue % level })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn is_zero_map(&self) -> bool {
        self.residue == 0
    }

    /// Apply to a class `a/b`; requires `b | N`. The image lands in
    /// `(1/N) Z / Z`: `(residue * a * (N/b)) mod N` over N.
    pub fn apply(&self, r: &QmodZ) -> Result<QmodZ> {
        let b = r.denom();
        if self.level % b != 0 {
            return Err(Error::LevelMismatch(format!(
                "cannot apply a level-{} residue to denominator {}",
                self.level, b
            )));
        }
        let k = (self.residue as u128 * r.numer() as u128 * (self.level / b) as u128)
            % self.level as u128;
        QmodZ::new(k as i64, self.level)
    }

    /// All level-N' residues lying over this one (N | N').
    pub fn refinements(&self, higher: u64) -> Result<Vec<ResidueEndo>> {
        if higher % self.level != 0 {
            return Err(Error::LevelMismatch(format!(
                "{} is not a multiple of level {}",
                higher, self.level
            )));
        }
        Ok((0..higher / self.level)
            .map(|k| ResidueEndo { level: higher, residue: self.residue + k * self.level })
            .collect())
    }

    /// Canonical projection to a divisor level.
    pub fn project(&self, lower: u64) -> Result<ResidueEndo> {
        if lower == 0 || self.level % lower != 0 {
            return Err(Error::LevelMismatch(format!(
                "{} does not divide level {}",
                lower, self.level
            )));
        }
        Ok(ResidueEndo { level: lower, residue: self.residue % lower })
    }

    /// Smallest refinement: the same residue read at the higher level.
    /// Used where a canonical (rather than arbitrary) lift is needed.
    pub fn lift(&self, higher: u64) -> Result<ResidueEndo> {
        if higher % self.level != 0 {
            return Err(Error::LevelMismatch(format!(
                "{} is not a multiple of level {}",
                higher, self.level
            )));
        }
        Ok(ResidueEndo { level: higher, residue: self.residue })
    }

    /// Multiply by a natural number.
    pub fn scale(&self, n: u64) -> ResidueEndo {
        ResidueEndo {
            level: self.level,
            residue: ((self.residue as u128 * n as u128) % self.level as u128) as u64,
        }
    }

    /// Is the residue divisible by q (i.e. does the endomorphism factor
    /// through multiplication by q at this level)?
    pub fn divisible_by(&self, q: u64) -> bool {
        self.level % q == 0 && self.residue % q == 0
    }

    /// Apply a positive rational `p/q` (reduced): defined when `q | N` and
    /// `q | residue`; the quotient of the canonical representative is taken,
    /// then multiplied by p. This is the level-N shadow of division in the
    /// profinite limit.
    pub fn scale_rational(&self, p: u64, q: u64) -> Result<ResidueEndo> {
        if self.level % q != 0 {
            return Err(Error::LevelMismatch(format!(
                "denominator {} does not divide level {}",
                q, self.level
            )));
        }
        if self.residue % q != 0 {
            return Err(Error::NotInGroupoid(format!(
                "residue {} mod {} is not divisible by {}",
                self.residue, self.level, q
            )));
        }
        Ok(ResidueEndo {
            level: self.level,
            residue: ((self.residue / q) as u128 * p as u128 % self.level as u128) as u64,
        })
    }

    pub fn is_unit(&self) -> bool {
        gcd(self.residue, self.level) == 1
    }
}

impl fmt::Display for ResidueEndo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.residue, self.level)
    }
}

impl Serialize for ResidueEndo {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ResidueEndo", 2)?;
        s.serialize_field("level", &self.level)?;
        s.serialize_field("residue", &self.residue)?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: u64) -> QmodZ {
        QmodZ::new(n, d).unwrap()
    }

    #[test]
    fn apply_examples() {
        let rho = ResidueEndo::new(6, 5).unwrap();
        assert_eq!(rho.apply(&q(1, 3)).unwrap(), q(2, 3));
        let zero = ResidueEndo::new(6, 0).unwrap();
        assert_eq!(zero.apply(&q(1, 2)).unwrap(), QmodZ::zero());
        let rho4 = ResidueEndo::new(4, 1).unwrap();
        assert!(matches!(rho4.apply(&q(1, 3)), Err(Error::LevelMismatch(_))));
    }

    #[test]
    fn level_maps_round_trip() {
        // lowering ∘ raising = identity at the lower level, all N | N' <= 144
        for n in 1..=24u64 {
            for mult in 1..=(144 / n) {
                let higher = n * mult;
                for r in 0..n {
                    let rho = ResidueEndo::new(n, r).unwrap();
                    for lifted in rho.refinements(higher).unwrap() {
                        assert_eq!(lifted.project(n).unwrap(), rho);
                    }
                }
            }
        }
    }

    #[test]
    fn refinement_count() {
        let rho = ResidueEndo::new(6, 5).unwrap();
        assert_eq!(rho.refinements(24).unwrap().len(), 4);
        assert!(rho.refinements(10).is_err());
    }

    #[test]
    fn rational_scaling() {
        let rho = ResidueEndo::new(12, 6).unwrap();
        // (1/2) * 6 = 3 mod 12, then * 5 = 15 = 3
        assert_eq!(rho.scale_rational(5, 2).unwrap().residue(), 3);
        assert!(ResidueEndo::new(12, 5).unwrap().scale_rational(1, 2).is_err());
        assert!(ResidueEndo::new(12, 6).unwrap().scale_rational(1, 5).is_err());
    }
}
