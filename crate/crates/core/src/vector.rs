//! Integer vectors of arbitrary precision.

use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVector(Vec<BigInt>);

impl IntVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        assert!(!coords.is_empty(), "IntVector needs dimension >= 1");
        IntVector(coords)
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        IntVector::new(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![BigInt::zero(); n];
        v[i] = BigInt::from(1);
        IntVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn has_zero_coordinate(&self) -> bool {
        self.0.iter().any(Zero::is_zero)
    }

    /// Coordinates as `i64`, or `None` when any coordinate overflows.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.0.iter().map(|c| c.to_i64()).collect()
    }

    pub fn dot(&self, other: &IntVector) -> BigInt {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sq(&self) -> BigInt {
        self.dot(self)
    }

    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == BigInt::from(1)
    }

    pub fn scale(&self, k: &BigInt) -> IntVector {
        IntVector(self.0.iter().map(|c| c * k).collect())
    }

    pub fn add(&self, other: &IntVector) -> IntVector {
        IntVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &IntVector) -> IntVector {
        IntVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> IntVector {
        IntVector(self.0.iter().map(|c| -c).collect())
    }

    pub fn abs(&self) -> IntVector {
        IntVector(self.0.iter().map(|c| c.abs()).collect())
    }

    /// Sum of absolute values.
    pub fn l1_norm(&self) -> BigInt {
        self.0.iter().map(|c| c.abs()).sum()
    }

    pub fn to_rationals(&self) -> Vec<Rational> {
        self.0.iter().cloned().map(Rational::from_integer).collect()
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        if self.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.dim(),
            });
        }
        Ok(())
    }
}

impl Index<usize> for IntVector {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Divides out the content and makes the first nonzero coordinate positive.
pub fn primitive_part(v: &IntVector) -> Result<IntVector> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let g = v.content();
    let mut out: Vec<BigInt> = v.coords().iter().map(|c| c / &g).collect();
    let first = out.iter().find(|c| !c.is_zero()).expect("nonzero");
    if first.is_negative() {
        out.iter_mut().for_each(|c| *c = -&*c);
    }
    Ok(IntVector(out))
}

/// Serializes as a JSON number when it fits in `i64`, otherwise as a string.
pub fn serialize_bigint<S: Serializer>(c: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match c.to_i64() {
        Some(x) => s.serialize_i64(x),
        None => s.serialize_str(&c.to_string()),
    }
}

impl Serialize for IntVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for c in &self.0 {
            match c.to_i64() {
                Some(x) => seq.serialize_element(&x)?,
                None => seq.serialize_element(&c.to_string())?,
            }
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for IntVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Coord {
            Int(i64),
            Text(String),
        }
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = IntVector;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a nonempty array of integers")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut a: A) -> std::result::Result<IntVector, A::Error> {
                let mut out = Vec::new();
                while let Some(c) = a.next_element::<Coord>()? {
                    out.push(match c {
                        Coord::Int(x) => BigInt::from(x),
                        Coord::Text(t) => t.parse().map_err(de::Error::custom)?,
                    });
                }
                if out.is_empty() {
                    return Err(de::Error::custom("empty vector"));
                }
                Ok(IntVector(out))
            }
        }
        d.deserialize_seq(V)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(c: &[i64]) -> IntVector {
        IntVector::from_i64s(c)
    }

    #[test]
    fn primitive_part_examples() {
        assert_eq!(primitive_part(&iv(&[2, 4, 6])).unwrap(), iv(&[1, 2, 3]));
        assert_eq!(primitive_part(&iv(&[-3, 6])).unwrap(), iv(&[1, -2]));
        assert_eq!(primitive_part(&iv(&[5, 7])).unwrap(), iv(&[5, 7]));
        assert_eq!(primitive_part(&iv(&[0, -4, 2])).unwrap(), iv(&[0, 2, -1]));
        assert_eq!(primitive_part(&iv(&[0, 0])), Err(Error::ZeroVector));
    }

    #[test]
    fn big_coordinates_do_not_overflow() {
        let big: BigInt = BigInt::from(i64::MAX) * 6;
        let v = IntVector::new(vec![big.clone(), big.clone() * 2]);
        assert_eq!(primitive_part(&v).unwrap(), iv(&[1, 2]));
        assert_eq!(v.dot(&v), &big * &big * 5);
    }

    #[test]
    fn serde_numbers_and_strings() {
        let big: BigInt = BigInt::from(i64::MAX) * 4;
        let v = IntVector::new(vec![BigInt::from(-3), big]);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, "[-3,\"36893488147419103228\"]");
        let back: IntVector = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }

    proptest::proptest! {
        #[test]
        fn primitive_part_idempotent(c in proptest::collection::vec(-50i64..50, 1..5)) {
            let v = iv(&c);
            proptest::prop_assume!(!v.is_zero());
            let p = primitive_part(&v).unwrap();
            proptest::prop_assert!(p.is_primitive());
            proptest::prop_assert_eq!(primitive_part(&p).unwrap(), p);
        }
    }
}
