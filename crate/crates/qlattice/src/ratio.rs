//! Small positive rationals used as groupoid ratios and support keys.

use std::fmt;

use serde::ser::Serializer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qmodz::gcd;

/// A positive rational `num/den` in lowest terms. Arithmetic uses 128-bit
/// intermediates; supports stay far below that in practice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PosRatio {
    num: u64,
    den: u64,
}

impl PosRatio {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::DomainError("ratio must be positive".into()));
        }
        let g = gcd(num, den);
        Ok(PosRatio { num: num / g, den: den / g })
    }

    pub fn one() -> Self {
        PosRatio { num: 1, den: 1 }
    }

    pub fn from_integer(n: u64) -> Result<Self> {
        PosRatio::new(n, 1)
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    pub fn is_one(&self) -> bool {
        self.num == 1 && self.den == 1
    }

    pub fn inv(&self) -> PosRatio {
        PosRatio { num: self.den, den: self.num }
    }

    pub fn mul(&self, other: &PosRatio) -> PosRatio {
        // cross-reduce before multiplying to keep within u64
        let g1 = gcd(self.num, other.den);
        let g2 = gcd(other.num, self.den);
        PosRatio {
            num: (self.num / g1) * (other.num / g2),
            den: (self.den / g2) * (other.den / g1),
        }
    }
}

impl fmt::Display for PosRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl Serialize for PosRatio {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&format!("{}/{}", self.num, self.den))
    }
}

impl std::str::FromStr for PosRatio {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |p: &str| {
            p.trim()
                .parse::<u64>()
                .map_err(|_| Error::DomainError(format!("cannot parse `{}` as a positive ratio", s)))
        };
        match s.split_once('/') {
            Some((n, d)) => PosRatio::new(parse(n)?, parse(d)?),
            None => PosRatio::new(parse(s)?, 1),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_products() {
        let r = PosRatio::new(10, 4).unwrap();
        assert_eq!((r.numer(), r.denom()), (5, 2));
        let s = PosRatio::new(2, 5).unwrap();
        assert!(r.mul(&s).is_one());
        assert_eq!(r.inv().mul(&r), PosRatio::one());
        assert!(PosRatio::new(0, 3).is_err());
    }
}
