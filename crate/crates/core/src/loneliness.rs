//! Maximum loneliness of integer speed tuples and the D-value of the
//! corresponding 1-dimensional subtori.
//!
//! `ML(v) = max_t min_i ||t v_i||` is a max of a min of sawtooth functions.
//! Its local maxima sit either at a peak of one sawtooth or where a rising
//! branch of one meets a falling branch of another; for positive speeds both
//! cases are times `t = c / (v_i + v_j)` (with `i = j` giving the peaks). The
//! objective is symmetric under `t -> 1 - t`, so only `0 < t <= 1/2` is
//! scanned, which also contains the smallest maximizing time.
//!
//! Two interchangeable scans implement this: a `u64` path used whenever every
//! speed is at most [`FAST_SPEED_LIMIT`] (no intermediate can exceed 2^50
//! there), and an arbitrary-precision path for everything else.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::torus::{circle_distance, TorusPoint};
use crate::vector::IntVector;

/// Largest speed the fixed-width scan accepts.
pub const FAST_SPEED_LIMIT: u64 = 1 << 24;

/// A primitive speed vector with no zero entry; signs are dropped on
/// construction since `||t v||` is even in `v`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SpeedTuple {
    speeds: IntVector,
    canonical: Vec<BigInt>,
}

impl SpeedTuple {
    pub fn new(v: IntVector) -> Result<Self> {
        if v.has_zero_coordinate() {
            return Err(Error::InvalidSpeeds(format!("{} has a zero speed", v)));
        }
        if !v.is_primitive() {
            return Err(Error::InvalidSpeeds(format!("{} is not primitive", v)));
        }
        let speeds = v.abs();
        let mut canonical = speeds.coords().to_vec();
        canonical.sort();
        Ok(SpeedTuple { speeds, canonical })
    }

    pub fn from_i64s(v: &[i64]) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::InvalidSpeeds("empty speed list".into()));
        }
        SpeedTuple::new(IntVector::from_i64s(v))
    }

    pub fn speeds(&self) -> &IntVector {
        &self.speeds
    }

    /// Sorted absolute values.
    pub fn canonical_form(&self) -> &[BigInt] {
        &self.canonical
    }

    pub fn len(&self) -> usize {
        self.speeds.dim()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn as_u64s(&self) -> Option<Vec<u64>> {
        let out: Option<Vec<u64>> = self.speeds.coords().iter().map(|c| c.to_u64()).collect();
        out.filter(|v| v.iter().all(|&x| x <= FAST_SPEED_LIMIT))
    }
}

impl fmt::Display for SpeedTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.speeds, f)
    }
}

impl fmt::Debug for SpeedTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.speeds, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LonelinessResult {
    pub ml: Rational,
    pub witness_time: Rational,
    pub d_value: Rational,
}

/// Which scan to run. `Auto` picks the fixed-width scan when it is safe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanPath {
    Auto,
    Fixed,
    Exact,
}

/// Raw outcome of a scan: `ml = ml_num / ml_den`, smallest maximizer
/// `t = t_num / t_den`, both not necessarily reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FixedScan {
    pub ml_num: u64,
    pub ml_den: u64,
    pub t_num: u64,
    pub t_den: u64,
}

impl FixedScan {
    /// `d = 1/2 - ml` as a reduced `(num, den)` pair.
    pub fn d_value(&self) -> (u64, u64) {
        let num = self.ml_den - 2 * self.ml_num;
        let den = 2 * self.ml_den;
        let g = num.gcd(&den);
        (num / g, den / g)
    }
}

/// Fixed-width scan. Callers guarantee `0 < v_i <= FAST_SPEED_LIMIT`.
pub fn scan_fixed(v: &[u64]) -> FixedScan {
    debug_assert!(v.iter().all(|&x| x > 0 && x <= FAST_SPEED_LIMIT));
    let n = v.len();
    let (mut bn, mut bd, mut btn, mut btd) = (0u64, 1u64, 1u64, 1u64);
    for i in 0..n {
        for j in i..n {
            let s = v[i] + v[j];
            for c in 1..=s / 2 {
                let r = (c * v[i]) % s;
                let mut m = r.min(s - r);
                if m * bd < bn * s {
                    continue;
                }
                for (k, &vk) in v.iter().enumerate() {
                    if k == i {
                        continue;
                    }
                    let r = (c * vk) % s;
                    let x = r.min(s - r);
                    if x < m {
                        m = x;
                        if m * bd < bn * s {
                            break;
                        }
                    }
                }
                let lhs = m * bd;
                let rhs = bn * s;
                if lhs > rhs || (lhs == rhs && c * btd < btn * s) {
                    bn = m;
                    bd = s;
                    btn = c;
                    btd = s;
                }
            }
        }
    }
    FixedScan {
        ml_num: bn,
        ml_den: bd,
        t_num: btn,
        t_den: btd,
    }
}

/// Arbitrary-precision scan over the same candidate set. Returns `(ml, t)`.
pub fn scan_exact(v: &[BigInt]) -> (Rational, Rational) {
    let n = v.len();
    let mut best_n = BigInt::zero();
    let mut best_d = BigInt::one();
    let mut best_t = Rational::one();
    for i in 0..n {
        for j in i..n {
            let s: BigInt = &v[i] + &v[j];
            let half: BigInt = &s / 2;
            let mut c = BigInt::one();
            while c <= half {
                let value = |vk: &BigInt| {
                    let r = (&c * vk).mod_floor(&s);
                    let other = &s - &r;
                    std::cmp::min(r, other)
                };
                let mut m = value(&v[i]);
                if &m * &best_d >= &best_n * &s {
                    for (k, vk) in v.iter().enumerate() {
                        if k == i {
                            continue;
                        }
                        let x = value(vk);
                        if x < m {
                            m = x;
                            if &m * &best_d < &best_n * &s {
                                break;
                            }
                        }
                    }
                    let lhs = &m * &best_d;
                    let rhs = &best_n * &s;
                    let t = Rational::new(c.clone(), s.clone());
                    if lhs > rhs || (lhs == rhs && t < best_t) {
                        best_n = m;
                        best_d = s.clone();
                        best_t = t;
                    }
                }
                c += 1;
            }
        }
    }
    (Rational::new(best_n, best_d), best_t)
}

fn result_from(ml: Rational, t: Rational) -> LonelinessResult {
    let d_value = Rational::half() - &ml;
    LonelinessResult {
        ml,
        witness_time: t,
        d_value,
    }
}

pub fn max_loneliness_with(v: &SpeedTuple, path: ScanPath) -> LonelinessResult {
    let fixed = match path {
        ScanPath::Exact => None,
        ScanPath::Auto => v.as_u64s(),
        ScanPath::Fixed => Some(v.as_u64s().expect("speeds exceed the fixed-width limit")),
    };
    match fixed {
        Some(u) => {
            let s = scan_fixed(&u);
            result_from(
                Rational::new(s.ml_num, s.ml_den),
                Rational::new(s.t_num, s.t_den),
            )
        }
        None => {
            let (ml, t) = scan_exact(v.speeds().coords());
            result_from(ml, t)
        }
    }
}

/// Exact maximum loneliness with the smallest maximizing time in `[0, 1)`.
pub fn max_loneliness(v: &SpeedTuple) -> LonelinessResult {
    max_loneliness_with(v, ScanPath::Auto)
}

/// `D(T) = 1/2 - ML(v)` for the line `T` spanned by `v`.
pub fn d_subtorus1(v: &SpeedTuple) -> Rational {
    max_loneliness(v).d_value
}

/// All maximizing times `t` in `(0, 1)` for `ML(v)`, sorted ascending.
pub fn maximizing_times(v: &SpeedTuple) -> (Rational, Vec<Rational>) {
    let speeds = v.speeds().coords();
    let ml = max_loneliness(v).ml;
    let value_at = |t: &Rational| {
        speeds
            .iter()
            .map(|s| circle_distance(&(t * Rational::from_integer(s.clone()))))
            .min()
            .expect("nonempty")
    };
    let mut out = Vec::new();
    for i in 0..speeds.len() {
        for j in i..speeds.len() {
            let s: BigInt = &speeds[i] + &speeds[j];
            let mut c = BigInt::one();
            while c < s {
                let t = Rational::new(c.clone(), s.clone());
                if value_at(&t) == ml {
                    out.push(t);
                }
                c += 1;
            }
        }
    }
    out.sort();
    out.dedup();
    (ml, out)
}

/// Shifted min-max: `min_t max_i ||t v_i + h_i - 1/2||` over the coset
/// `T + h`. Speeds may be signed or zero here; the candidate set covers every
/// crossing `t (v_i + v_j)` or `t (v_i - v_j)` with the shifted half-integer
/// lattice, plus `t = 0`.
pub fn d_min_max_raw(v: &[BigInt], shift: &[Rational]) -> Rational {
    assert_eq!(v.len(), shift.len());
    let n = v.len();
    let half = Rational::half();
    let speeds: Vec<Rational> = v.iter().cloned().map(Rational::from_integer).collect();
    let objective = |t: &Rational| {
        speeds
            .iter()
            .zip(shift)
            .map(|(s, h)| circle_distance(&(t * s + h - &half)))
            .max()
            .expect("nonempty")
    };
    let mut best = objective(&Rational::zero());
    for i in 0..n {
        for j in i..n {
            for sigma in [1i64, -1] {
                if i == j && sigma == -1 {
                    continue;
                }
                let s = &speeds[i] + &speeds[j] * Rational::from(sigma);
                if s.is_zero() {
                    continue;
                }
                let off = &shift[i] + &shift[j] * Rational::from(sigma);
                // t = (c - off) / s in [0, 1)  <=>  c in off + s * [0, 1)
                let (lo, hi) = if s.is_positive() {
                    (off.clone(), &off + &s)
                } else {
                    (&off + &s, off.clone())
                };
                let mut c = lo.floor();
                let end = hi.floor() + 1;
                while c <= end {
                    let t = (Rational::from_integer(c.clone()) - &off) / &s;
                    if t >= Rational::zero() && t < Rational::one() {
                        let val = objective(&t);
                        if val < best {
                            best = val;
                        }
                    }
                    c += 1;
                }
            }
        }
    }
    best
}

/// D-value of the coset `T + shift` of the line spanned by `v`.
pub fn d_min_max(v: &SpeedTuple, shift: &TorusPoint) -> Result<Rational> {
    v.speeds().check_dim(shift.dim())?;
    Ok(d_min_max_raw(v.speeds().coords(), shift.coords()))
}

/// Closed form for the codimension-1 subtorus `{x : w . x in Z}`:
/// `||(sum w_i)/2|| / ||w||_1`.
pub fn d_hyperplane(w: &IntVector) -> Result<Rational> {
    if !w.is_primitive() {
        return Err(Error::InvalidNormal(format!("{} is not primitive", w)));
    }
    let nonzero = w.coords().iter().filter(|c| !c.is_zero()).count();
    if nonzero <= 1 {
        return Err(Error::InvalidNormal(format!("{} is axis-parallel", w)));
    }
    let sum: BigInt = w.coords().iter().sum();
    let l1: BigInt = w.coords().iter().map(|c| c.abs()).sum();
    Ok(circle_distance(&Rational::new(sum, 2)) / Rational::from_integer(l1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn st(v: &[i64]) -> SpeedTuple {
        SpeedTuple::from_i64s(v).unwrap()
    }

    #[test]
    fn single_runner() {
        let r = max_loneliness(&st(&[1]));
        assert_eq!(r.ml, q(1, 2));
        assert_eq!(r.witness_time, q(1, 2));
        assert_eq!(r.d_value, q(0, 1));
    }

    #[test]
    fn small_examples() {
        let r = max_loneliness(&st(&[1, 2]));
        assert_eq!((r.ml, r.witness_time), (q(1, 3), q(1, 3)));
        let r = max_loneliness(&st(&[2, 3]));
        assert_eq!((r.ml, r.witness_time), (q(2, 5), q(1, 5)));
        assert_eq!(max_loneliness(&st(&[1, 2, 3])).ml, q(1, 4));
        assert_eq!(max_loneliness(&st(&[8, 3, 11, 19])).ml, q(7, 30));
    }

    #[test]
    fn d_values() {
        assert_eq!(d_subtorus1(&st(&[1, 2])), q(1, 6));
        assert_eq!(d_subtorus1(&st(&[1, 3])), q(0, 1));
        assert_eq!(d_subtorus1(&st(&[1, 2, 2])), q(1, 6));
    }

    #[test]
    fn invalid_speeds() {
        assert!(matches!(SpeedTuple::from_i64s(&[0, 1]), Err(Error::InvalidSpeeds(_))));
        assert!(matches!(SpeedTuple::from_i64s(&[2, 4]), Err(Error::InvalidSpeeds(_))));
        assert!(matches!(SpeedTuple::from_i64s(&[]), Err(Error::InvalidSpeeds(_))));
    }

    #[test]
    fn negative_speeds_are_normalized() {
        assert_eq!(st(&[-1, 2]), st(&[1, 2]));
        assert_eq!(st(&[3, -1, 2]).canonical_form(), st(&[1, 2, 3]).canonical_form());
    }

    #[test]
    fn shifted_engine_examples() {
        let zero2 = TorusPoint::origin(2);
        assert_eq!(d_min_max(&st(&[1, 2]), &zero2).unwrap(), q(1, 6));
        assert_eq!(d_min_max(&st(&[1, 3]), &zero2).unwrap(), q(0, 1));
        let half = TorusPoint::new(vec![q(1, 2)]);
        assert_eq!(d_min_max(&st(&[1]), &half).unwrap(), q(0, 1));
        assert!(matches!(
            d_min_max(&st(&[1, 2]), &TorusPoint::origin(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn hyperplane_examples() {
        let h = |w: &[i64]| d_hyperplane(&IntVector::from_i64s(w));
        assert_eq!(h(&[2, -1]).unwrap(), q(1, 6));
        assert_eq!(h(&[3, -2]).unwrap(), q(1, 10));
        assert_eq!(h(&[3, -1]).unwrap(), q(0, 1));
        assert!(matches!(h(&[2, -4]), Err(Error::InvalidNormal(_))));
        assert!(matches!(h(&[0, 1]), Err(Error::InvalidNormal(_))));
    }

    #[test]
    fn exact_path_agrees_on_examples() {
        for v in [&[1i64, 2][..], &[2, 3], &[1, 2, 3], &[8, 3, 11, 19], &[5, 7, 9, 13]] {
            let t = st(v);
            assert_eq!(
                max_loneliness_with(&t, ScanPath::Exact),
                max_loneliness_with(&t, ScanPath::Fixed)
            );
        }
    }

    #[test]
    fn pair_closed_form_near_fixed_limit() {
        // (a, a+1): D = 1/(2(2a+1)); exercised on the fixed path's largest scale
        let a = 4096i64;
        assert_eq!(d_subtorus1(&st(&[a, a + 1])), q(1, 2 * (2 * a + 1)));
    }

    #[test]
    fn maximizers_are_symmetric() {
        let (ml, ts) = maximizing_times(&st(&[1, 2]));
        assert_eq!(ml, q(1, 3));
        assert_eq!(ts, vec![q(1, 3), q(2, 3)]);
    }
}
