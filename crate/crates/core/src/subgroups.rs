//! Closed subgroups `T + H` of the torus with `T` of dimension at most one
//! and `H` finite: their D-values, properness and rational witnesses.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::loneliness::{d_min_max_raw, d_subtorus1, max_loneliness, maximizing_times, SpeedTuple};
use crate::rational::Rational;
use crate::torus::{linf_center_distance, tight_coordinates, TorusPoint};
use crate::vector::IntVector;

/// Coset iteration stops with [`Error::OrderLimit`] above this many elements.
pub const DEFAULT_ORDER_LIMIT: usize = 1_000_000;

/// The cyclic group generated by a rational point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCyclicSubgroup {
    generator: TorusPoint,
    order: BigInt,
}

impl FiniteCyclicSubgroup {
    pub fn new(generator: TorusPoint) -> Self {
        let order = generator
            .coords()
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        FiniteCyclicSubgroup { generator, order }
    }

    pub fn trivial(n: usize) -> Self {
        FiniteCyclicSubgroup::new(TorusPoint::origin(n))
    }

    pub fn generator(&self) -> &TorusPoint {
        &self.generator
    }

    pub fn order(&self) -> &BigInt {
        &self.order
    }

    pub fn dim(&self) -> usize {
        self.generator.dim()
    }

    /// `k * generator mod 1`.
    pub fn element(&self, k: u64) -> TorusPoint {
        self.generator.scale(&Rational::from(k as i64))
    }
}

/// The finite factor `H`: either cyclic or an explicit element list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FinitePart {
    Cyclic(FiniteCyclicSubgroup),
    Elements(Vec<TorusPoint>),
}

impl FinitePart {
    /// Checks that `elements` is a subgroup: contains the origin and is closed
    /// under addition. Duplicates are removed.
    pub fn from_elements(mut elements: Vec<TorusPoint>) -> Result<Self> {
        let n = elements
            .first()
            .map(TorusPoint::dim)
            .ok_or_else(|| Error::InvalidArgument("empty element list".into()))?;
        if elements.iter().any(|e| e.dim() != n) {
            return Err(Error::InvalidArgument("elements of mixed dimension".into()));
        }
        elements.sort();
        elements.dedup();
        if !elements.iter().any(TorusPoint::is_zero) {
            return Err(Error::InvalidArgument("element list lacks the origin".into()));
        }
        for a in &elements {
            for b in &elements {
                if elements.binary_search(&a.add(b)).is_err() {
                    return Err(Error::InvalidArgument(format!(
                        "element list not closed: {} + {}",
                        a, b
                    )));
                }
            }
        }
        Ok(FinitePart::Elements(elements))
    }

    pub fn dim(&self) -> usize {
        match self {
            FinitePart::Cyclic(c) => c.dim(),
            FinitePart::Elements(e) => e[0].dim(),
        }
    }

    pub fn len(&self) -> BigInt {
        match self {
            FinitePart::Cyclic(c) => c.order().clone(),
            FinitePart::Elements(e) => BigInt::from(e.len()),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn elements(&self, limit: usize) -> Result<Vec<TorusPoint>> {
        match self {
            FinitePart::Cyclic(c) => {
                let order = c
                    .order()
                    .to_usize()
                    .filter(|&o| o <= limit)
                    .ok_or_else(|| Error::OrderLimit {
                        order: c.order().to_string(),
                        limit,
                    })?;
                Ok((0..order as u64).map(|k| c.element(k)).collect())
            }
            FinitePart::Elements(e) => {
                if e.len() > limit {
                    return Err(Error::OrderLimit {
                        order: e.len().to_string(),
                        limit,
                    });
                }
                Ok(e.clone())
            }
        }
    }

    fn extend_zeros(&self, extra: usize) -> FinitePart {
        match self {
            FinitePart::Cyclic(c) => {
                FinitePart::Cyclic(FiniteCyclicSubgroup::new(c.generator().extend_zeros(extra)))
            }
            FinitePart::Elements(e) => {
                FinitePart::Elements(e.iter().map(|p| p.extend_zeros(extra)).collect())
            }
        }
    }
}

/// `Δ = T + H` with `T` spanned by `torus_directions`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductSubgroup {
    torus_directions: Vec<IntVector>,
    finite_part: FinitePart,
}

impl ProductSubgroup {
    pub fn new(torus_directions: Vec<IntVector>, finite_part: FinitePart) -> Result<Self> {
        let n = finite_part.dim();
        for d in &torus_directions {
            d.check_dim(n)?;
        }
        if rank(&torus_directions) != torus_directions.len() {
            return Err(Error::DegenerateBasis);
        }
        Ok(ProductSubgroup {
            torus_directions,
            finite_part,
        })
    }

    pub fn finite(part: FinitePart) -> Self {
        ProductSubgroup {
            torus_directions: Vec::new(),
            finite_part: part,
        }
    }

    pub fn line(direction: IntVector) -> Self {
        let n = direction.dim();
        ProductSubgroup {
            torus_directions: vec![direction],
            finite_part: FinitePart::Cyclic(FiniteCyclicSubgroup::trivial(n)),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.finite_part.dim()
    }

    pub fn dimension(&self) -> usize {
        self.torus_directions.len()
    }

    pub fn torus_directions(&self) -> &[IntVector] {
        &self.torus_directions
    }

    pub fn finite_part(&self) -> &FinitePart {
        &self.finite_part
    }
}

/// Rank over Q of a small list of integer vectors (fraction-free elimination).
fn rank(vs: &[IntVector]) -> usize {
    let mut rows: Vec<Vec<BigInt>> = vs.iter().map(|v| v.coords().to_vec()).collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let (a, b) = (rows[r][c].clone(), rows[i][c].clone());
                let pivot = rows[r].clone();
                for (x, p) in rows[i].iter_mut().zip(&pivot) {
                    *x = &*x * &a - p * &b;
                }
            }
        }
        r += 1;
    }
    r
}

/// `min_k linf(k g)` over the cyclic group.
pub fn d_finite_cyclic(g: &FiniteCyclicSubgroup) -> Rational {
    let order = g.order().to_u64().expect("cyclic order fits in u64");
    let eval = |k: u64| linf_center_distance(&g.element(k));
    if order > 4096 {
        (0..order).into_par_iter().map(eval).min().expect("order >= 1")
    } else {
        (0..order).map(eval).min().expect("order >= 1")
    }
}

pub fn d_subgroup(delta: &ProductSubgroup) -> Result<Rational> {
    d_subgroup_with_limit(delta, DEFAULT_ORDER_LIMIT)
}

pub fn d_subgroup_with_limit(delta: &ProductSubgroup, limit: usize) -> Result<Rational> {
    match delta.dimension() {
        0 => {
            let elems = delta.finite_part.elements(limit)?;
            Ok(elems
                .par_iter()
                .map(linf_center_distance)
                .min()
                .expect("nonempty"))
        }
        1 => {
            let dir = &delta.torus_directions[0];
            if !dir.is_primitive() {
                return Err(Error::InvalidDirection(format!("{} is not primitive", dir)));
            }
            let cosets = delta.finite_part.elements(limit)?;
            Ok(cosets
                .par_iter()
                .map(|h| d_min_max_raw(dir.coords(), h.coords()))
                .min()
                .expect("nonempty"))
        }
        k => Err(Error::UnsupportedDimension(k)),
    }
}

pub fn is_proper(delta: &ProductSubgroup) -> Result<bool> {
    is_proper_with_limit(delta, DEFAULT_ORDER_LIMIT)
}

pub fn is_proper_with_limit(delta: &ProductSubgroup, limit: usize) -> Result<bool> {
    let elems = match delta.dimension() {
        0 | 1 => delta.finite_part.elements(limit)?,
        k => return Err(Error::UnsupportedDimension(k)),
    };
    let dir = delta.torus_directions.first();
    Ok(elems.iter().any(|h| {
        h.coords().iter().enumerate().all(|(i, hi)| {
            !hi.is_zero() || dir.is_some_and(|d| !d[i].is_zero())
        })
    }))
}

/// A rational point of the line attaining its D-value.
pub fn find_rational_witness(v: &SpeedTuple) -> TorusPoint {
    let t = max_loneliness(v).witness_time;
    point_at(v, &t)
}

fn point_at(v: &SpeedTuple, t: &Rational) -> TorusPoint {
    TorusPoint::new(
        v.speeds()
            .coords()
            .iter()
            .map(|s| t * Rational::from_integer(s.clone()))
            .collect(),
    )
}

/// Among all minimizing points, one with the largest number of coordinates
/// at L-infinity distance exactly `D` from the center (smallest time on ties).
pub fn deep_witness(v: &SpeedTuple) -> Result<(TorusPoint, usize)> {
    let d = d_subtorus1(v);
    if d.is_zero() {
        return Err(Error::CenterReached);
    }
    let (_, times) = maximizing_times(v);
    let mut best: Option<(TorusPoint, usize)> = None;
    for t in &times {
        let p = point_at(v, t);
        let count = tight_coordinates(&p, &d);
        if best.as_ref().is_none_or(|(_, c)| count > *c) {
            best = Some((p, count));
        }
    }
    Ok(best.expect("at least one maximizer"))
}

/// `Δ × (R/Z)^extra`.
pub fn pad_subgroup(delta: &ProductSubgroup, extra: usize) -> ProductSubgroup {
    let n = delta.ambient_dim();
    let mut dirs: Vec<IntVector> = delta
        .torus_directions
        .iter()
        .map(|d| {
            let mut c = d.coords().to_vec();
            c.extend(std::iter::repeat_n(BigInt::zero(), extra));
            IntVector::new(c)
        })
        .collect();
    dirs.extend((n..n + extra).map(|i| IntVector::unit(n + extra, i)));
    ProductSubgroup {
        torus_directions: dirs,
        finite_part: delta.finite_part.extend_zeros(extra),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn cyclic(g: &[Rational]) -> FiniteCyclicSubgroup {
        FiniteCyclicSubgroup::new(TorusPoint::new(g.to_vec()))
    }

    fn st(v: &[i64]) -> SpeedTuple {
        SpeedTuple::from_i64s(v).unwrap()
    }

    fn iv(v: &[i64]) -> IntVector {
        IntVector::from_i64s(v)
    }

    #[test]
    fn cyclic_examples() {
        let g = cyclic(&[q(12, 25), q(9, 25)]);
        assert_eq!(g.order(), &BigInt::from(25));
        assert_eq!(d_finite_cyclic(&g), q(7, 50));
        assert_eq!(d_finite_cyclic(&cyclic(&[q(1, 2)])), q(0, 1));
        assert_eq!(d_finite_cyclic(&cyclic(&[q(1, 5)])), q(1, 10));
    }

    #[test]
    fn one_dimensional_cyclic_closed_form() {
        for qq in 1..=1000i64 {
            let d = d_finite_cyclic(&cyclic(&[q(1, qq)]));
            let expect = if qq % 2 == 0 {
                q(0, 1)
            } else {
                let s = (qq - 1) / 2;
                q(1, 4 * s + 2)
            };
            assert_eq!(d, expect, "q = {}", qq);
        }
    }

    #[test]
    fn subgroup_examples() {
        let line = ProductSubgroup::line(iv(&[1, 2]));
        assert_eq!(d_subgroup(&line).unwrap(), q(1, 6));

        let thirds = FinitePart::Cyclic(cyclic(&[q(0, 1), q(1, 3)]));
        let circle_by_thirds = ProductSubgroup::new(vec![iv(&[1, 0])], thirds).unwrap();
        assert_eq!(d_subgroup(&circle_by_thirds).unwrap(), q(1, 6));

        let pair = FinitePart::from_elements(vec![
            TorusPoint::origin(3),
            TorusPoint::center(3),
        ])
        .unwrap();
        assert_eq!(d_subgroup(&ProductSubgroup::finite(pair)).unwrap(), q(0, 1));
    }

    #[test]
    fn properness_examples() {
        assert!(is_proper(&ProductSubgroup::line(iv(&[1, 2, 3]))).unwrap());
        let origin = ProductSubgroup::finite(FinitePart::Cyclic(FiniteCyclicSubgroup::trivial(2)));
        assert!(!is_proper(&origin).unwrap());
        let part = FinitePart::from_elements(vec![
            TorusPoint::origin(2),
            TorusPoint::new(vec![q(1, 2), q(0, 1)]),
        ])
        .unwrap();
        let shifted = ProductSubgroup::new(vec![iv(&[0, 1])], part).unwrap();
        assert!(is_proper(&shifted).unwrap());
        assert!(d_subgroup(&shifted).unwrap() < q(1, 2));
    }

    #[test]
    fn element_lists_must_be_groups() {
        let not_closed = FinitePart::from_elements(vec![
            TorusPoint::origin(1),
            TorusPoint::new(vec![q(1, 3)]),
        ]);
        assert!(not_closed.is_err());
        let no_origin = FinitePart::from_elements(vec![TorusPoint::new(vec![q(1, 2)])]);
        assert!(no_origin.is_err());
    }

    #[test]
    fn witnesses() {
        let p = |v: &[Rational]| TorusPoint::new(v.to_vec());
        assert_eq!(find_rational_witness(&st(&[1, 2])), p(&[q(1, 3), q(2, 3)]));
        assert_eq!(find_rational_witness(&st(&[1, 3])), p(&[q(1, 2), q(1, 2)]));
        assert_eq!(
            find_rational_witness(&st(&[1, 2, 3])),
            p(&[q(1, 4), q(1, 2), q(3, 4)])
        );
    }

    #[test]
    fn deep_witness_examples() {
        let p = |v: &[Rational]| TorusPoint::new(v.to_vec());
        assert_eq!(deep_witness(&st(&[1, 2])).unwrap(), (p(&[q(1, 3), q(2, 3)]), 2));
        assert_eq!(
            deep_witness(&st(&[1, 2, 3])).unwrap(),
            (p(&[q(1, 4), q(1, 2), q(3, 4)]), 2)
        );
        assert_eq!(deep_witness(&st(&[2, 3])).unwrap(), (p(&[q(2, 5), q(3, 5)]), 2));
        assert_eq!(deep_witness(&st(&[1, 3])), Err(Error::CenterReached));
    }

    #[test]
    fn padding() {
        let fifth = ProductSubgroup::finite(FinitePart::Cyclic(cyclic(&[q(1, 5)])));
        let padded = pad_subgroup(&fifth, 1);
        assert_eq!(padded.dimension(), 1);
        assert_eq!(d_subgroup(&padded).unwrap(), q(1, 10));
        assert!(is_proper(&padded).unwrap());

        let origin = ProductSubgroup::finite(FinitePart::Cyclic(FiniteCyclicSubgroup::trivial(1)));
        assert!(!is_proper(&pad_subgroup(&origin, 1)).unwrap());

        let line = pad_subgroup(&ProductSubgroup::line(iv(&[1, 2])), 1);
        assert_eq!(d_subgroup(&line), Err(Error::UnsupportedDimension(2)));
        assert_eq!(is_proper(&line), Err(Error::UnsupportedDimension(2)));
    }

    #[test]
    fn order_limit_is_enforced() {
        let g = ProductSubgroup::finite(FinitePart::Cyclic(cyclic(&[q(1, 100), q(1, 99)])));
        assert!(matches!(d_subgroup_with_limit(&g, 1_000), Err(Error::OrderLimit { .. })));
        assert_eq!(d_subgroup(&g).unwrap(), d_finite_cyclic(&cyclic(&[q(1, 100), q(1, 99)])));
    }

    #[test]
    fn dependent_directions_rejected() {
        let r = ProductSubgroup::new(
            vec![iv(&[1, 2]), iv(&[2, 4])],
            FinitePart::Cyclic(FiniteCyclicSubgroup::trivial(2)),
        );
        assert_eq!(r, Err(Error::DegenerateBasis));
    }
}
