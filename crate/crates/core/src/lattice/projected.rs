use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::plane::{bezout_coefficients, density_radius_sq, saturate, SaturatedPlane};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::vector::IntVector;

type Row = Vec<BigInt>;

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(y: &mut [BigInt], k: &BigInt, x: &[BigInt]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += k * xi;
    }
}

/// Basis of the integer lattice generated by `gens`, by gcd row elimination.
pub(crate) fn row_basis(mut gens: Vec<Row>) -> Vec<Row> {
    let n = gens.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for col in 0..n {
        loop {
            let mut nz: Vec<usize> = (0..gens.len()).filter(|&r| !gens[r][col].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            nz.sort_by(|&a, &b| gens[a][col].abs().cmp(&gens[b][col].abs()));
            let pivot = nz[0];
            if nz.len() == 1 {
                out.push(gens.swap_remove(pivot));
                break;
            }
            let p = gens[pivot].clone();
            for &r in &nz[1..] {
                let k = -gens[r][col].div_floor(&p[col]);
                axpy(&mut gens[r], &k, &p);
            }
        }
        gens.retain(|g| g.iter().any(|c| !c.is_zero()));
    }
    out
}

struct GramSchmidt {
    mu: Vec<Vec<Rational>>,
    b: Vec<Rational>,
}

fn gram_schmidt(basis: &[Row]) -> GramSchmidt {
    let r = basis.len();
    let mut mu = vec![vec![Rational::zero(); r]; r];
    let mut b = vec![Rational::zero(); r];
    // star[i] = basis[i] - sum_j mu[i][j] star[j], kept implicitly through dot products
    for i in 0..r {
        for j in 0..i {
            let mut s = Rational::from_integer(dot(&basis[i], &basis[j]));
            for k in 0..j {
                s = s - &mu[j][k] * &mu[i][k] * &b[k];
            }
            mu[i][j] = s / &b[j];
        }
        let mut s = Rational::from_integer(dot(&basis[i], &basis[i]));
        for k in 0..i {
            s = s - &mu[i][k] * &mu[i][k] * &b[k];
        }
        b[i] = s;
    }
    GramSchmidt { mu, b }
}

/// Gauss-Lagrange reduction of a rank-2 basis.
fn gauss_lagrange(mut a: Row, mut b: Row) -> (Row, Row) {
    if dot(&a, &a) > dot(&b, &b) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let k = Rational::new(dot(&a, &b), dot(&a, &a)).round();
        axpy(&mut b, &-k, &a);
        if dot(&b, &b) >= dot(&a, &a) {
            return (a, b);
        }
        std::mem::swap(&mut a, &mut b);
    }
}

/// Textbook LLL with delta = 3/4 over exact rationals.
fn lll(mut basis: Vec<Row>) -> Vec<Row> {
    let delta = Rational::new(BigInt::from(3), BigInt::from(4));
    let mut k = 1;
    while k < basis.len() {
        for j in (0..k).rev() {
            let gs = gram_schmidt(&basis);
            let c = gs.mu[k][j].round();
            if !c.is_zero() {
                let bj = basis[j].clone();
                axpy(&mut basis[k], &-c, &bj);
            }
        }
        let gs = gram_schmidt(&basis);
        let lhs = gs.b[k].clone();
        let rhs = (&delta - &gs.mu[k][k - 1] * &gs.mu[k][k - 1]) * &gs.b[k - 1];
        if lhs >= rhs {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    basis
}

/// All lattice vectors of minimal nonzero squared length.
fn shortest_vectors(basis: &[Row]) -> (BigInt, Vec<Row>) {
    let gs = gram_schmidt(basis);
    let r = basis.len();
    let radius = basis.iter().map(|b| dot(b, b)).min().expect("rank >= 1");
    let radius_q = Rational::from_integer(radius.clone());
    let mut found: Vec<Row> = Vec::new();
    let mut best = radius;
    let mut coeffs = vec![BigInt::zero(); r];
    enumerate_level(basis, &gs, &radius_q, r, Rational::zero(), &mut coeffs, &mut |v| {
        let n = dot(v, v);
        if n.is_zero() {
            return;
        }
        if n < best {
            best = n.clone();
            found.clear();
        }
        if n == best {
            found.push(v.to_vec());
        }
    });
    (best, found)
}

fn enumerate_level(
    basis: &[Row],
    gs: &GramSchmidt,
    radius: &Rational,
    level: usize,
    partial: Rational,
    coeffs: &mut Vec<BigInt>,
    visit: &mut dyn FnMut(&[BigInt]),
) {
    if level == 0 {
        let dim = basis[0].len();
        let mut v = vec![BigInt::zero(); dim];
        for (c, b) in coeffs.iter().zip(basis) {
            axpy(&mut v, c, b);
        }
        visit(&v);
        return;
    }
    let k = level - 1;
    let mut center = Rational::zero();
    for (j, c) in coeffs.iter().enumerate().skip(level) {
        center = center - Rational::from_integer(c.clone()) * &gs.mu[j][k];
    }
    let room = (radius - &partial) / &gs.b[k];
    let width = room.to_f64().max(0.0).sqrt() + 1.0;
    let c = center.to_f64();
    let lo = (c - width).floor() as i64;
    let hi = (c + width).ceil() as i64;
    for ck in lo..=hi {
        let ck = BigInt::from(ck);
        let off = Rational::from_integer(ck.clone()) - &center;
        let next = &partial + &off * &off * &gs.b[k];
        if &next > radius {
            continue;
        }
        coeffs[k] = ck;
        enumerate_level(basis, gs, radius, k, next, coeffs, visit);
    }
    coeffs[k] = BigInt::zero();
}

fn sign_normalized(mut x: Row) -> Row {
    if x.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative()) {
        x.iter_mut().for_each(|c| *c = -&*c);
    }
    x
}

/// Integer points `x` with `|v|^2 x - (x.v) v = target`, restricted to the
/// representatives of minimal `|x|^2` within the coset `x + Zv`.
fn minimal_preimages(v: &[BigInt], target: &[BigInt], c: &[BigInt]) -> Vec<Row> {
    let vv = dot(v, v);
    let m = (-dot(c, target)).mod_floor(&vv);
    let x0: Row = target
        .iter()
        .zip(v)
        .map(|(t, vi)| {
            let s = t + &m * vi;
            debug_assert!(s.is_multiple_of(&vv));
            s / &vv
        })
        .collect();
    // |x0 + k v|^2 is minimized at k = -(x0.v)/|v|^2
    let k0 = Rational::new(-dot(&x0, v), vv.clone()).floor();
    let cands: Vec<Row> = [k0.clone(), k0 + 1]
        .iter()
        .map(|k| {
            let mut x = x0.clone();
            axpy(&mut x, k, v);
            x
        })
        .collect();
    let best = cands.iter().map(|x| dot(x, x)).min().expect("two candidates");
    cands.into_iter().filter(|x| dot(x, x) == best).collect()
}

/// A point `x` of `Z^n` off the line `Zv` whose component orthogonal to `v`
/// is as short as possible, together with that squared length.
///
/// Among minimizers the representative of minimal `|x|^2` in `x + Zv` is
/// taken, signs are normalized so the first nonzero entry is positive, and
/// the lexicographically greatest survivor is returned.
pub fn shortest_projected_vector(v: &IntVector) -> Result<(IntVector, Rational)> {
    let n = v.dim();
    if !(2..=4).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    if !v.is_primitive() {
        return Err(Error::InvalidDirection(format!("{} is not primitive", v)));
    }
    let vc = v.coords();
    let vv = v.norm_sq();
    // |v|^2 times the projection of each unit vector: integral and in v-perp
    let gens: Vec<Row> = (0..n)
        .map(|k| {
            let mut q: Row = vc.iter().map(|vi| -(vi * &vc[k])).collect();
            q[k] += &vv;
            q
        })
        .collect();
    let mut basis = row_basis(gens);
    debug_assert_eq!(basis.len(), n - 1);
    basis = match basis.len() {
        2 => {
            let (a, b) = gauss_lagrange(basis[0].clone(), basis[1].clone());
            vec![a, b]
        }
        3 => lll(basis),
        _ => basis,
    };
    let (best, targets) = shortest_vectors(&basis);
    let (_, c) = bezout_coefficients(v);
    let mut xs: Vec<Row> = targets
        .iter()
        .flat_map(|t| minimal_preimages(vc, t, &c))
        .map(sign_normalized)
        .collect();
    xs.sort();
    xs.dedup();
    let x = xs.pop().expect("a shortest vector exists");
    let p_sq = Rational::new(best, &vv * &vv);
    Ok((IntVector::new(x), p_sq))
}

/// Result of lifting the line spanned by `v` into a plane torus in which it
/// is dense up to radius `sqrt(delta_sq)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityCertificate {
    pub version: u32,
    pub inner_direction: IntVector,
    pub outer_plane: SaturatedPlane,
    pub delta_sq: Rational,
    pub epsilon: Rational,
    pub guaranteed: bool,
}

pub fn kronecker_lift(v: &IntVector, epsilon: &Rational) -> Result<DensityCertificate> {
    if !epsilon.is_positive() {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {}", epsilon)));
    }
    let (x, _) = shortest_projected_vector(v)?;
    let outer = saturate(v, &x)?;
    let delta_sq = density_radius_sq(v, &outer)?;
    let guaranteed = delta_sq <= epsilon * epsilon;
    Ok(DensityCertificate {
        version: 1,
        inner_direction: v.clone(),
        outer_plane: outer,
        delta_sq,
        epsilon: epsilon.clone(),
        guaranteed,
    })
}
