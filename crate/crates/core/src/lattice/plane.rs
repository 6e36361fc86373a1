use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::vector::IntVector;

/// A basis of `Z^n ∩ span(u, v)` together with its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturatedPlane {
    pub basis_u: IntVector,
    pub basis_v: IntVector,
    pub gram: [[BigInt; 2]; 2],
}

impl SaturatedPlane {
    fn from_basis(u: IntVector, v: IntVector) -> Self {
        let gram = [[u.dot(&u), u.dot(&v)], [v.dot(&u), v.dot(&v)]];
        SaturatedPlane {
            basis_u: u,
            basis_v: v,
            gram,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis_u.dim()
    }

    /// True when `w` lies in the real span of the basis.
    pub fn contains_direction(&self, w: &IntVector) -> bool {
        gram3_det(&self.basis_u, &self.basis_v, w).is_zero()
    }
}

impl Serialize for SaturatedPlane {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let gram = [
            IntVector::new(self.gram[0].to_vec()),
            IntVector::new(self.gram[1].to_vec()),
        ];
        let mut st = s.serialize_struct("SaturatedPlane", 4)?;
        st.serialize_field("u", &self.basis_u)?;
        st.serialize_field("v", &self.basis_v)?;
        st.serialize_field("gram", &gram)?;
        st.serialize_field("covolume_sq", &covolume_sq_2(self))?;
        st.end()
    }
}

/// Gram determinant of three vectors (zero iff they are dependent).
fn gram3_det(a: &IntVector, b: &IntVector, c: &IntVector) -> BigInt {
    let g = [
        [a.dot(a), a.dot(b), a.dot(c)],
        [b.dot(a), b.dot(b), b.dot(c)],
        [c.dot(a), c.dot(b), c.dot(c)],
    ];
    &g[0][0] * (&g[1][1] * &g[2][2] - &g[1][2] * &g[2][1])
        - &g[0][1] * (&g[1][0] * &g[2][2] - &g[1][2] * &g[2][0])
        + &g[0][2] * (&g[1][0] * &g[2][1] - &g[1][1] * &g[2][0])
}

/// gcd of all 2x2 minors of the 2 x n matrix with rows `u`, `v`.
pub fn minors_gcd(u: &IntVector, v: &IntVector) -> BigInt {
    let n = u.dim();
    let mut g = BigInt::zero();
    for i in 0..n {
        for j in i + 1..n {
            g = g.gcd(&(&u[i] * &v[j] - &u[j] * &v[i]));
        }
    }
    g
}

/// Integer coefficients `c` with `c . a = gcd(a)`.
pub fn bezout_coefficients(a: &IntVector) -> (BigInt, Vec<BigInt>) {
    let mut g = BigInt::zero();
    let mut coeffs: Vec<BigInt> = vec![BigInt::zero(); a.dim()];
    for (i, ai) in a.coords().iter().enumerate() {
        let e = g.extended_gcd(ai);
        // new g = e.x * g + e.y * ai
        for c in coeffs.iter_mut().take(i) {
            *c *= &e.x;
        }
        coeffs[i] = e.y.clone();
        g = e.gcd;
    }
    if g.is_negative() {
        g = -g;
        coeffs.iter_mut().for_each(|c| *c = -&*c);
    }
    (g, coeffs)
}

/// Basis of `Z^n ∩ span(u, v)`: the first vector is `u` with its content
/// divided out, the second is `(v + j u') / g` where `g` is the index of
/// `<u', v>` in the saturation.
pub fn saturate(u: &IntVector, v: &IntVector) -> Result<SaturatedPlane> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            got: v.dim(),
        });
    }
    if u.is_zero() || minors_gcd(u, v).is_zero() {
        return Err(Error::DegenerateBasis);
    }
    let cu = u.content();
    let a = IntVector::new(u.coords().iter().map(|c| c / &cu).collect());
    let g = minors_gcd(&a, v);
    if g.is_one() {
        return Ok(SaturatedPlane::from_basis(a, v.clone()));
    }
    let (one, c) = bezout_coefficients(&a);
    debug_assert!(one.is_one());
    let cv: BigInt = c.iter().zip(v.coords()).map(|(x, y)| x * y).sum();
    let j = (-cv).mod_floor(&g);
    let shifted = v.add(&a.scale(&j));
    let w: Vec<BigInt> = shifted
        .coords()
        .iter()
        .map(|x| {
            debug_assert!(x.is_multiple_of(&g));
            x / &g
        })
        .collect();
    Ok(SaturatedPlane::from_basis(a, IntVector::new(w)))
}

/// `vol_1^2 = sum v_i^2` for a primitive direction.
pub fn volume_sq_1(v: &IntVector) -> Result<Rational> {
    if !v.is_primitive() {
        return Err(Error::InvalidDirection(format!("{} is not primitive", v)));
    }
    Ok(Rational::from_integer(v.norm_sq()))
}

/// Squared covolume of the plane lattice (Gram determinant).
pub fn covolume_sq_2(p: &SaturatedPlane) -> Rational {
    let g = &p.gram;
    Rational::from_integer(&g[0][0] * &g[1][1] - &g[0][1] * &g[1][0])
}

/// Squared L2 radius within which the line spanned by `v` is dense in the
/// plane torus: half the spacing `covol / |v|` of its parallel windings.
pub fn density_radius_sq(v: &IntVector, p: &SaturatedPlane) -> Result<Rational> {
    v.check_dim(p.ambient_dim())?;
    if !v.is_primitive() {
        return Err(Error::InvalidDirection(format!("{} is not primitive", v)));
    }
    if !p.contains_direction(v) {
        return Err(Error::NotContained);
    }
    Ok(covolume_sq_2(p) / (Rational::from(4) * Rational::from_integer(v.norm_sq())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn iv(v: &[i64]) -> IntVector {
        IntVector::from_i64s(v)
    }

    #[test]
    fn saturate_examples() {
        let p = saturate(&iv(&[1, 0, 0]), &iv(&[0, 1, 0])).unwrap();
        assert_eq!((p.basis_u.clone(), p.basis_v.clone()), (iv(&[1, 0, 0]), iv(&[0, 1, 0])));
        assert_eq!(covolume_sq_2(&p), q(1, 1));

        let p = saturate(&iv(&[2, 0]), &iv(&[0, 1])).unwrap();
        assert_eq!(covolume_sq_2(&p), q(1, 1));

        let p = saturate(&iv(&[1, 1, 1]), &iv(&[0, 1, 2])).unwrap();
        assert_eq!(minors_gcd(&iv(&[1, 1, 1]), &iv(&[0, 1, 2])), BigInt::from(1));
        assert_eq!(covolume_sq_2(&p), q(6, 1));
    }

    #[test]
    fn saturation_divides_out_the_index() {
        // <(1,1,0), (1,-1,0)> has index 2 in Z^2 x {0}
        let p = saturate(&iv(&[1, 1, 0]), &iv(&[1, -1, 0])).unwrap();
        assert_eq!(covolume_sq_2(&p), q(1, 1));
        // <(1,0,1), (0,3,3)> has index 3
        let p = saturate(&iv(&[1, 0, 1]), &iv(&[0, 3, 3])).unwrap();
        assert_eq!(p.basis_v, iv(&[0, 1, 1]));
        assert_eq!(covolume_sq_2(&p), q(3, 1));
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(saturate(&iv(&[1, 2]), &iv(&[2, 4])), Err(Error::DegenerateBasis));
        assert_eq!(saturate(&iv(&[0, 0]), &iv(&[2, 4])), Err(Error::DegenerateBasis));
    }

    #[test]
    fn volumes() {
        assert_eq!(volume_sq_1(&iv(&[1, 2])).unwrap(), q(5, 1));
        assert_eq!(volume_sq_1(&iv(&[1, 1, 1])).unwrap(), q(3, 1));
        assert_eq!(volume_sq_1(&iv(&[8, 3, 11, 19])).unwrap(), q(555, 1));
        assert!(matches!(volume_sq_1(&iv(&[2, 4])), Err(Error::InvalidDirection(_))));
    }

    #[test]
    fn density_radius_examples() {
        let z2 = saturate(&iv(&[1, 0]), &iv(&[0, 1])).unwrap();
        assert_eq!(density_radius_sq(&iv(&[1, 1]), &z2).unwrap(), q(1, 8));
        assert_eq!(density_radius_sq(&iv(&[1, 0]), &z2).unwrap(), q(1, 4));
        assert_eq!(density_radius_sq(&iv(&[1, 2]), &z2).unwrap(), q(1, 20));
        let plane = saturate(&iv(&[1, 0, 0]), &iv(&[0, 1, 0])).unwrap();
        assert_eq!(density_radius_sq(&iv(&[0, 0, 1]), &plane), Err(Error::NotContained));
    }

    #[test]
    fn bezout() {
        let (g, c) = bezout_coefficients(&iv(&[6, 10, 15]));
        assert_eq!(g, BigInt::from(1));
        let s: BigInt = c.iter().zip([6, 10, 15]).map(|(x, y)| x * y).sum();
        assert_eq!(s, BigInt::from(1));
    }

    proptest::proptest! {
        #[test]
        fn saturation_matches_index(
            u in proptest::collection::vec(-6i64..7, 3),
            v in proptest::collection::vec(-6i64..7, 3),
        ) {
            let (u, v) = (iv(&u), iv(&v));
            proptest::prop_assume!(!minors_gcd(&u, &v).is_zero());
            let p = saturate(&u, &v).unwrap();
            // every input vector lies in the saturated lattice: solve in the basis
            let input_det = {
                let g = [[u.dot(&u), u.dot(&v)], [v.dot(&u), v.dot(&v)]];
                &g[0][0] * &g[1][1] - &g[0][1] * &g[1][0]
            };
            let index = minors_gcd(&u, &v);
            let out = covolume_sq_2(&p);
            proptest::prop_assert_eq!(out * Rational::from_integer(&index * &index), Rational::from_integer(input_det));
            proptest::prop_assert!(minors_gcd(&p.basis_u, &p.basis_v).is_one());
            proptest::prop_assert!(p.contains_direction(&u) && p.contains_direction(&v));
        }
    }
}
