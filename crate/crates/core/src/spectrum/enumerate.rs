use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::loneliness::SpeedTuple;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationSpec {
    pub n: usize,
    pub max_volume_sq: u64,
    /// Emit one sorted representative per permutation class; otherwise every
    /// distinct ordering is emitted.
    pub canonical_only: bool,
}

impl EnumerationSpec {
    pub fn new(n: usize, max_volume_sq: u64) -> Result<Self> {
        let spec = EnumerationSpec {
            n,
            max_volume_sq,
            canonical_only: true,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        if self.max_volume_sq < self.n as u64 {
            return Err(Error::InvalidArgument(format!(
                "max_volume_sq {} is below the all-ones volume {}",
                self.max_volume_sq, self.n
            )));
        }
        Ok(())
    }

    /// Largest value the smallest coordinate can take.
    pub fn max_first(&self) -> u64 {
        isqrt(self.max_volume_sq / self.n as u64)
    }
}

pub(crate) fn isqrt(x: u64) -> u64 {
    let mut r = (x as f64).sqrt() as u64;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

/// Calls `f` on every sorted tuple with first entry `first`, entries
/// nondecreasing, gcd 1 and squared length at most `max`, in lexicographic
/// order.
pub(crate) fn visit_block(n: usize, max: u64, first: u64, f: &mut dyn FnMut(&[u64])) {
    if n as u64 * first * first > max {
        return;
    }
    let mut buf = vec![first; n];
    if n == 1 {
        if first == 1 {
            f(&buf);
        }
        return;
    }
    descend(&mut buf, 1, first * first, first, max, f);
}

fn descend(buf: &mut [u64], pos: usize, sum: u64, g: u64, max: u64, f: &mut dyn FnMut(&[u64])) {
    let n = buf.len();
    let rest = (n - pos) as u64;
    let mut x = buf[pos - 1];
    // all remaining entries are at least x
    while sum + rest * x * x <= max {
        buf[pos] = x;
        let g2 = g.gcd(&x);
        if pos + 1 == n {
            if g2 == 1 {
                f(buf);
            }
        } else {
            descend(buf, pos + 1, sum + x * x, g2, max, f);
        }
        x += 1;
    }
}

/// Tuples `1 <= v_1 <= ... <= v_n` with gcd 1 and `sum v_i^2 <= max_volume_sq`,
/// in lexicographic order.
pub fn enumerate_proper_primitive(spec: &EnumerationSpec) -> impl Iterator<Item = SpeedTuple> {
    let spec = *spec;
    let mut sorted = Vec::new();
    if spec.validate().is_ok() {
        for first in 1..=spec.max_first() {
            visit_block(spec.n, spec.max_volume_sq, first, &mut |t| sorted.push(t.to_vec()));
        }
    }
    sorted
        .into_iter()
        .flat_map(move |t| {
            if spec.canonical_only {
                vec![t]
            } else {
                distinct_permutations(t)
            }
        })
        .map(|t| {
            let signed: Vec<i64> = t.iter().map(|&x| x as i64).collect();
            SpeedTuple::from_i64s(&signed).expect("primitive and nonzero")
        })
}

/// Number of canonical tuples, without materializing them.
pub fn count_proper_primitive(spec: &EnumerationSpec) -> u64 {
    let mut count = 0u64;
    for first in 1..=spec.max_first() {
        visit_block(spec.n, spec.max_volume_sq, first, &mut |_| count += 1);
    }
    count
}

fn distinct_permutations(mut t: Vec<u64>) -> Vec<Vec<u64>> {
    t.sort_unstable();
    let mut out = vec![t.clone()];
    // next lexicographic permutation
    loop {
        let Some(i) = (1..t.len()).rev().find(|&i| t[i - 1] < t[i]) else {
            return out;
        };
        let j = (i..t.len()).rev().find(|&j| t[j] > t[i - 1]).expect("exists");
        t.swap(i - 1, j);
        t[i..].reverse();
        out.push(t.clone());
    }
}
