//! Points of the torus `(R/Z)^n` and the two metrics everything else uses.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Distance from `x` to the nearest integer, in `[0, 1/2]`.
pub fn circle_distance(x: &Rational) -> Rational {
    let f = x.frac();
    let g = Rational::one() - &f;
    f.min(g)
}

/// A point of `(R/Z)^n` with every coordinate reduced into `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TorusPoint(Vec<Rational>);

impl TorusPoint {
    /// Reduces every coordinate mod 1; negative inputs wrap.
    pub fn new(coords: Vec<Rational>) -> Self {
        assert!(!coords.is_empty(), "TorusPoint needs dimension >= 1");
        TorusPoint(coords.into_iter().map(|c| c.frac()).collect())
    }

    pub fn origin(n: usize) -> Self {
        TorusPoint(vec![Rational::zero(); n])
    }

    pub fn center(n: usize) -> Self {
        TorusPoint(vec![Rational::half(); n])
    }

    pub fn parse(items: &[&str]) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::InvalidArgument("empty torus point".into()));
        }
        let coords = items
            .iter()
            .map(|s| s.parse::<Rational>())
            .collect::<Result<Vec<_>>>()?;
        Ok(TorusPoint::new(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn add(&self, other: &TorusPoint) -> TorusPoint {
        TorusPoint::new(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: &Rational) -> TorusPoint {
        TorusPoint::new(self.0.iter().map(|a| a * k).collect())
    }

    /// Appends `extra` zero coordinates.
    pub fn extend_zeros(&self, extra: usize) -> TorusPoint {
        let mut c = self.0.clone();
        c.extend(std::iter::repeat_n(Rational::zero(), extra));
        TorusPoint(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }
}

impl fmt::Display for TorusPoint {
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

impl fmt::Debug for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// L-infinity distance from `p` to the center `(1/2, ..., 1/2)`.
pub fn linf_center_distance(p: &TorusPoint) -> Rational {
    let half = Rational::half();
    p.coords()
        .iter()
        .map(|c| (c - &half).abs())
        .max()
        .expect("nonempty point")
}

/// Number of coordinates of `p` whose distance to 1/2 equals `d`.
pub fn tight_coordinates(p: &TorusPoint, d: &Rational) -> usize {
    let half = Rational::half();
    p.coords().iter().filter(|c| &(*c - &half).abs() == d).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use proptest::prelude::*;

    #[test]
    fn circle_distance_examples() {
        assert_eq!(circle_distance(&q(7, 3)), q(1, 3));
        assert_eq!(circle_distance(&q(1, 2)), q(1, 2));
        assert_eq!(circle_distance(&q(9, 25)), q(9, 25));
        assert_eq!(circle_distance(&q(-1, 4)), q(1, 4));
        assert_eq!(circle_distance(&q(5, 1)), q(0, 1));
    }

    #[test]
    fn linf_examples() {
        assert_eq!(linf_center_distance(&TorusPoint::center(2)), q(0, 1));
        let p = TorusPoint::new(vec![q(12, 25), q(9, 25)]);
        assert_eq!(linf_center_distance(&p), q(7, 50));
        assert_eq!(linf_center_distance(&TorusPoint::origin(2)), q(1, 2));
    }

    #[test]
    fn constructor_wraps_negatives() {
        let p = TorusPoint::new(vec![q(-1, 3), q(5, 2)]);
        assert_eq!(p.coords(), &[q(2, 3), q(1, 2)]);
    }

    fn rat() -> impl Strategy<Value = Rational> {
        (-200i64..200, 1i64..60).prop_map(|(p, d)| q(p, d))
    }

    proptest! {
        #[test]
        fn circle_distance_even_and_periodic(x in rat(), m in -5i64..5) {
            let d = circle_distance(&x);
            prop_assert_eq!(&circle_distance(&-x.clone()), &d);
            prop_assert_eq!(&circle_distance(&(x.clone() + Rational::from(m))), &d);
            prop_assert!(d >= Rational::zero() && d <= Rational::half());
        }

        #[test]
        fn linf_symmetries(cs in proptest::collection::vec(rat(), 1..5), rot in 0usize..5) {
            let p = TorusPoint::new(cs.clone());
            let d = linf_center_distance(&p);
            let mut rotated = cs.clone();
            let k = rot % rotated.len();
            rotated.rotate_left(k);
            prop_assert_eq!(&linf_center_distance(&TorusPoint::new(rotated)), &d);
            let negated = TorusPoint::new(cs.iter().map(|c| -c.clone()).collect());
            prop_assert_eq!(&linf_center_distance(&negated), &d);
            // distance to 1/2 in [0,1) agrees with the circle metric
            let via_circle = p.coords().iter().map(|c| circle_distance(&(c - &Rational::half()))).max().unwrap();
            prop_assert_eq!(via_circle, d);
        }
    }
}
