use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::plane::saturate;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::vector::IntVector;

/// Default bound on `|u_i| + |v_i|` for every coordinate of the reduced basis.
pub const DEFAULT_ENTRY_BUDGET: i64 = 12;

/// Nonnegative fraction `num / den` with `den > 0`, ordered by value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Frac {
    num: i64,
    den: i64,
}

impl Ord for Frac {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.num as i128 * o.den as i128).cmp(&(o.num as i128 * self.den as i128))
    }
}

impl PartialOrd for Frac {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// D-value of the plane subtorus spanned by `u`, `v`.
pub fn d_subtorus2(u: &IntVector, v: &IntVector) -> Result<Rational> {
    d_subtorus2_with_budget(u, v, DEFAULT_ENTRY_BUDGET)
}

/// The plane is first replaced by a reduced basis of its integer points, so
/// that `(alpha, beta) in [0,1)^2` covers the subtorus exactly once. The
/// objective `max_i ||alpha u_i + beta v_i - 1/2||` is piecewise linear on
/// cells cut out by the line families `(u_i -+ u_j, v_i -+ v_j) . x in Z`,
/// so its minimum sits at a crossing of two such families.
pub fn d_subtorus2_with_budget(u: &IntVector, v: &IntVector, budget: i64) -> Result<Rational> {
    let plane = saturate(u, v)?;
    let (a, b) = reduce(&plane.basis_u, &plane.basis_v);
    let rows: Vec<(i64, i64)> = a
        .iter()
        .zip(&b)
        .map(|(x, y)| (*x, *y))
        .collect();
    if let Some((x, y)) = rows.iter().find(|(x, y)| x.abs() + y.abs() > budget) {
        return Err(Error::BudgetExceeded(format!(
            "reduced basis entry ({}, {}) exceeds |u_i| + |v_i| <= {}",
            x, y, budget
        )));
    }
    Ok(planar_min_max(&rows))
}

/// Gauss-Lagrange reduction in small integers.
fn reduce(u: &IntVector, v: &IntVector) -> (Vec<i64>, Vec<i64>) {
    let to = |w: &IntVector| -> Vec<i128> {
        w.coords().iter().map(|c| c.to_i128().unwrap_or(i128::MAX / 4)).collect()
    };
    let (mut a, mut b) = (to(u), to(v));
    let dot = |x: &[i128], y: &[i128]| -> i128 { x.iter().zip(y).map(|(p, q)| p.saturating_mul(*q)).sum() };
    if dot(&a, &a) > dot(&b, &b) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let (ab, aa) = (dot(&a, &b), dot(&a, &a));
        let k = Rational::new(BigInt::from(ab), BigInt::from(aa)).round().to_i128().unwrap_or(0);
        b.iter_mut().zip(&a).for_each(|(y, x)| *y -= k * x);
        if dot(&b, &b) >= dot(&a, &a) {
            break;
        }
        std::mem::swap(&mut a, &mut b);
    }
    let clamp = |w: Vec<i128>| -> Vec<i64> { w.into_iter().map(|c| c.clamp(i64::MIN as i128 / 4, i64::MAX as i128 / 4) as i64).collect() };
    (clamp(a), clamp(b))
}

fn planar_min_max(rows: &[(i64, i64)]) -> Rational {
    let mut normals: Vec<(i64, i64)> = Vec::new();
    for i in 0..rows.len() {
        for j in i..rows.len() {
            let (ui, vi) = rows[i];
            let (uj, vj) = rows[j];
            normals.push((ui + uj, vi + vj));
            if i != j {
                normals.push((ui - uj, vi - vj));
            }
        }
    }
    let mut normals: Vec<(i64, i64)> = normals
        .into_iter()
        .filter(|&n| n != (0, 0))
        .map(|(x, y)| if x < 0 || (x == 0 && y < 0) { (-x, -y) } else { (x, y) })
        .collect();
    normals.sort_unstable();
    normals.dedup();

    let pairs: Vec<(usize, usize)> = (0..normals.len())
        .flat_map(|i| (i + 1..normals.len()).map(move |j| (i, j)))
        .collect();
    let origin = objective(rows, 0, 0, 1);
    let best = pairs
        .par_iter()
        .filter_map(|&(i, j)| crossings_min(rows, normals[i], normals[j]))
        .min()
        .map_or(origin, |m| m.min(origin));
    Rational::new(best.num, best.den)
}

/// Range of `n . x` over the closed unit square.
fn range_on_square(n: (i64, i64)) -> (i64, i64) {
    (n.0.min(0) + n.1.min(0), n.0.max(0) + n.1.max(0))
}

/// Minimum of the objective over crossings of `n1 . x in Z` and `n2 . x in Z`
/// lying in `[0,1)^2`.
fn crossings_min(rows: &[(i64, i64)], n1: (i64, i64), n2: (i64, i64)) -> Option<Frac> {
    let det = n1.0 * n2.1 - n1.1 * n2.0;
    if det == 0 {
        return None;
    }
    let (lo1, hi1) = range_on_square(n1);
    let (lo2, hi2) = range_on_square(n2);
    let mut best: Option<Frac> = None;
    for k1 in lo1..=hi1 {
        for k2 in lo2..=hi2 {
            // x = adj(M) k / det
            let mut xa = n2.1 * k1 - n1.1 * k2;
            let mut xb = -n2.0 * k1 + n1.0 * k2;
            let mut d = det;
            if d < 0 {
                d = -d;
                xa = -xa;
                xb = -xb;
            }
            if xa < 0 || xa >= d || xb < 0 || xb >= d {
                continue;
            }
            let f = objective(rows, xa, xb, d);
            if best.is_none_or(|b| f < b) {
                best = Some(f);
            }
        }
    }
    best
}

/// `max_i ||(xa u_i + xb v_i)/d - 1/2||` as an exact fraction.
fn objective(rows: &[(i64, i64)], xa: i64, xb: i64, d: i64) -> Frac {
    let two_d = 2 * d;
    let num = rows
        .iter()
        .map(|&(u, v)| {
            let r = (2 * (xa * u + xb * v) - d).rem_euclid(two_d);
            r.min(two_d - r)
        })
        .max()
        .expect("nonempty");
    Frac { num, den: two_d }
}
