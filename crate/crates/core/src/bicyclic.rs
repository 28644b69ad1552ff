//! The bicyclic monoid `C = ω×ω` with an adjoined zero.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use thiserror::Error;

/// A point of `C⁰`: the adjoined zero or a pair of naturals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Zero,
    Pair(BigUint, BigUint),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BicyclicError {
    #[error("the zero element has no sigma class")]
    ZeroHasNoClass,
    #[error("cannot parse element `{0}`: expected `0` or `(a,b)`")]
    Parse(String),
}

impl Element {
    pub fn pair(a: impl Into<BigUint>, b: impl Into<BigUint>) -> Self {
        Element::Pair(a.into(), b.into())
    }

    /// The identity `(0,0)`.
    pub fn identity() -> Self {
        Element::pair(0u32, 0u32)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Element::Zero)
    }

    pub fn multiply(&self, other: &Element) -> Element {
        match (self, other) {
            (Element::Pair(a, b), Element::Pair(c, d)) => {
                if b <= c {
                    Element::Pair(a + c - b, d.clone())
                } else {
                    Element::Pair(a.clone(), d + b - c)
                }
            }
            _ => Element::Zero,
        }
    }

    pub fn invert(&self) -> Element {
        match self {
            Element::Zero => Element::Zero,
            Element::Pair(a, b) => Element::Pair(b.clone(), a.clone()),
        }
    }

    pub fn is_idempotent(&self) -> bool {
        match self {
            Element::Zero => true,
            Element::Pair(a, b) => a == b,
        }
    }

    /// The class of `self` under the least group congruence, i.e. `a − b`.
    pub fn sigma_class(&self) -> Result<BigInt, BicyclicError> {
        match self {
            Element::Zero => Err(BicyclicError::ZeroHasNoClass),
            Element::Pair(a, b) => Ok(BigInt::from(a.clone()) - BigInt::from(b.clone())),
        }
    }

    /// Coordinates as machine words, when both fit.
    pub fn to_small(&self) -> Option<(u64, u64)> {
        match self {
            Element::Zero => None,
            Element::Pair(a, b) => Some((u64::try_from(a).ok()?, u64::try_from(b).ok()?)),
        }
    }
}

/// Product of two pairs with machine-word coordinates.
///
/// Used by the exhaustive sweeps; agrees with [`Element::multiply`] whenever
/// the result fits.
#[inline]
pub fn multiply_small((a, b): (u64, u64), (c, d): (u64, u64)) -> (u64, u64) {
    if b <= c {
        (a + (c - b), d)
    } else {
        (a, d + (b - c))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Zero => write!(f, "0"),
            Element::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

impl FromStr for Element {
    type Err = BicyclicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "0" {
            return Ok(Element::Zero);
        }
        let err = || BicyclicError::Parse(s.to_string());
        let inner = t
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(err)?;
        let (a, b) = inner.split_once(',').ok_or_else(err)?;
        let a: BigUint = a.trim().parse().map_err(|_| err())?;
        let b: BigUint = b.trim().parse().map_err(|_| err())?;
        Ok(Element::Pair(a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: u64, b: u64) -> Element {
        Element::pair(a, b)
    }

    #[test]
    fn multiply_examples() {
        assert_eq!(p(2, 3).multiply(&p(5, 7)), p(4, 7));
        assert_eq!(p(4, 1).multiply(&p(0, 2)), p(4, 3));
        for c in 0..=20 {
            for d in 0..=20 {
                assert_eq!(Element::identity().multiply(&p(c, d)), p(c, d));
            }
        }
        assert_eq!(Element::Zero.multiply(&p(3, 4)), Element::Zero);
        assert_eq!(p(3, 4).multiply(&Element::Zero), Element::Zero);
    }

    #[test]
    fn invert_examples() {
        assert_eq!(p(3, 5).invert(), p(5, 3));
        assert_eq!(Element::Zero.invert(), Element::Zero);
        let x = p(2, 7);
        assert_eq!(x.multiply(&x.invert()).multiply(&x), x);
        let y = x.invert();
        assert_eq!(y.multiply(&x).multiply(&y), y);
    }

    #[test]
    fn idempotents() {
        assert!(p(4, 4).is_idempotent());
        assert!(!p(4, 5).is_idempotent());
        assert_ne!(p(4, 5).multiply(&p(4, 5)), p(4, 5));
        assert!(Element::Zero.is_idempotent());
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(p(5, 3).sigma_class().unwrap(), BigInt::from(2));
        assert_eq!(p(3, 5).sigma_class().unwrap(), BigInt::from(-2));
        for k in 0..=10 {
            assert_eq!(p(k, k).sigma_class().unwrap(), BigInt::from(0));
        }
        assert_eq!(Element::Zero.sigma_class(), Err(BicyclicError::ZeroHasNoClass));
    }

    #[test]
    fn big_coordinates_stay_exact() {
        let big: BigUint = "51090942171709440000".parse().unwrap(); // 21!
        let x = Element::Pair(big.clone(), 3u32.into());
        let y = x.multiply(&p(5, 0));
        assert_eq!(y, Element::Pair(big + 2u32, 0u32.into()));
    }

    #[test]
    fn parse_and_print() {
        assert_eq!("0".parse::<Element>().unwrap(), Element::Zero);
        assert_eq!(" (2, 9) ".parse::<Element>().unwrap(), p(2, 9));
        assert_eq!(p(2, 9).to_string(), "(2,9)");
        assert!("(2;9)".parse::<Element>().is_err());
        assert!("(-1,2)".parse::<Element>().is_err());
    }
}
