use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::plane::minors_gcd;
use crate::error::{Error, Result};
use crate::vector::{primitive_part, IntVector};

fn check_pair(u: &IntVector, v: &IntVector) -> Result<()> {
    v.check_dim(u.dim())?;
    if minors_gcd(u, v).is_zero() {
        return Err(Error::DegenerateBasis);
    }
    Ok(())
}

/// Multipliers tried when clearing zeros: 0, 1, -1, 2, -2, ...
fn small_multipliers() -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..).flat_map(|k| [k, -k]))
}

/// A line direction inside the plane spanned by `u`, `v` whose D-value is at
/// least that of the plane.
///
/// `u` is shifted by the smallest multiple of `v` leaving no zero entry,
/// made positive coordinatewise, and the coordinates are ordered by
/// `v_i / u_i`. At the first strict increase between neighbours `i`, `i+1`
/// the combination `(v_i + v_{i+1}) u - (u_i + u_{i+1}) v` is taken, which
/// makes those two coordinates cancel.
pub fn slice_plane(u: &IntVector, v: &IntVector) -> Result<IntVector> {
    check_pair(u, v)?;
    if let Some(i) = (0..u.dim()).find(|&i| u[i].is_zero() && v[i].is_zero()) {
        return Err(Error::NotProper(i));
    }
    let shifted = small_multipliers()
        .map(|k| u.add(&v.scale(&BigInt::from(k))))
        .find(|w| !w.has_zero_coordinate())
        .expect("only finitely many multipliers create a zero");
    let signs: Vec<bool> = shifted.coords().iter().map(Signed::is_negative).collect();
    let flip = |x: &BigInt, neg: bool| if neg { -x } else { x.clone() };
    let a: Vec<BigInt> = shifted.coords().iter().zip(&signs).map(|(x, &s)| flip(x, s)).collect();
    let b: Vec<BigInt> = v.coords().iter().zip(&signs).map(|(x, &s)| flip(x, s)).collect();

    let ratio_cmp = |i: usize, j: usize| (&b[i] * &a[j]).cmp(&(&b[j] * &a[i]));
    let mut order: Vec<usize> = (0..a.len()).collect();
    order.sort_by(|&i, &j| ratio_cmp(i, j));
    let (p, q) = order
        .windows(2)
        .map(|w| (w[0], w[1]))
        .find(|&(i, j)| ratio_cmp(i, j) == Ordering::Less)
        .ok_or(Error::DegenerateBasis)?;

    // undoing the sign flips on both a and b cancels them, so the
    // combination can be formed directly in the original coordinates
    let w = shifted
        .scale(&(&b[p] + &b[q]))
        .sub(&v.scale(&(&a[p] + &a[q])));
    primitive_part(&w)
}

/// The `j`-th direction `u1 + j u2` of a sequence of lines whose closures
/// fill the plane spanned by `u1`, `u2`.
pub fn dense_sequence(u1: &IntVector, u2: &IntVector, j: i64) -> Result<IntVector> {
    check_pair(u1, u2)?;
    primitive_part(&u1.add(&u2.scale(&BigInt::from(j))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::plane::saturate;

    fn iv(v: &[i64]) -> IntVector {
        IntVector::from_i64s(v)
    }

    #[test]
    fn slice_examples() {
        assert_eq!(slice_plane(&iv(&[1, 1, 1]), &iv(&[0, 1, 2])).unwrap(), iv(&[1, -1, -3]));
        assert_eq!(slice_plane(&iv(&[1, 1, 1]), &iv(&[0, 0, 1])).unwrap(), iv(&[1, 1, -1]));
    }

    #[test]
    fn slice_errors() {
        assert_eq!(slice_plane(&iv(&[1, 2, 3]), &iv(&[2, 4, 6])), Err(Error::DegenerateBasis));
        assert_eq!(slice_plane(&iv(&[1, 0, 3]), &iv(&[2, 0, 1])), Err(Error::NotProper(1)));
    }

    #[test]
    fn slice_clears_zero_entries_first() {
        // u has a zero; u + v = (1, 1, 3) is the first admissible shift
        let w = slice_plane(&iv(&[1, 0, 2]), &iv(&[0, 1, 1])).unwrap();
        assert!(!w.has_zero_coordinate());
        assert!(saturate(&iv(&[1, 0, 2]), &iv(&[0, 1, 1])).unwrap().contains_direction(&w));
    }

    #[test]
    fn dense_sequence_examples() {
        let (u1, u2) = (iv(&[1, 1, 1]), iv(&[0, 1, 2]));
        assert_eq!(dense_sequence(&u1, &u2, 1).unwrap(), iv(&[1, 2, 3]));
        assert_eq!(dense_sequence(&u1, &u2, 2).unwrap(), iv(&[1, 3, 5]));
        assert_eq!(dense_sequence(&u1, &u2, 0).unwrap(), iv(&[1, 1, 1]));
        assert_eq!(dense_sequence(&u1, &u1, 3), Err(Error::DegenerateBasis));
    }

    proptest::proptest! {
        #[test]
        fn slice_is_a_proper_line_in_the_plane(
            u in proptest::collection::vec(-4i64..5, 3..5),
            v in proptest::collection::vec(-4i64..5, 3..5),
        ) {
            proptest::prop_assume!(u.len() == v.len());
            let (u, v) = (iv(&u), iv(&v));
            proptest::prop_assume!(!minors_gcd(&u, &v).is_zero());
            proptest::prop_assume!((0..u.dim()).all(|i| !(u[i].is_zero() && v[i].is_zero())));
            let w = slice_plane(&u, &v).unwrap();
            proptest::prop_assert!(!w.has_zero_coordinate());
            proptest::prop_assert!(saturate(&u, &v).unwrap().contains_direction(&w));
            // two coordinates share a magnitude: the cancelling pair
            let mags: Vec<BigInt> = w.coords().iter().map(|c| c.abs()).collect();
            let paired = (0..mags.len()).any(|i| (i + 1..mags.len()).any(|j| mags[i] == mags[j]));
            proptest::prop_assert!(paired);
        }
    }
}
