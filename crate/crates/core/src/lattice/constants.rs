use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Pow};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Rational enclosure `lower < pi < upper`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PiEnclosure {
    pub lower: Rational,
    pub upper: Rational,
}

impl Default for PiEnclosure {
    fn default() -> Self {
        PiEnclosure {
            lower: Rational::new(314159, 100000),
            upper: Rational::new(314160, 100000),
        }
    }
}

impl PiEnclosure {
    /// 36 correct digits, used for printed decimals.
    pub fn tight() -> Self {
        let digits: BigInt = "314159265358979323846264338327950288".parse().expect("digits");
        let scale = BigInt::from(10).pow(35u32);
        PiEnclosure {
            lower: Rational::new(digits.clone(), scale.clone()),
            upper: Rational::new(digits + 1, scale),
        }
    }
}

/// A constant of the form `coeff * pi^power`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiMonomial {
    pub coeff: Rational,
    pub power: i32,
}

impl PiMonomial {
    pub fn rational(coeff: Rational) -> Self {
        PiMonomial { coeff, power: 0 }
    }

    pub fn recip(&self) -> Self {
        PiMonomial {
            coeff: self.coeff.recip(),
            power: -self.power,
        }
    }

    pub fn times(&self, r: &Rational) -> Self {
        PiMonomial {
            coeff: &self.coeff * r,
            power: self.power,
        }
    }

    /// Rigorous `(lower, upper)` from the enclosure.
    pub fn bounds(&self, pi: &PiEnclosure) -> (Rational, Rational) {
        let (a, b) = if self.power >= 0 {
            (pi.lower.pow(self.power), pi.upper.pow(self.power))
        } else {
            (pi.upper.pow(self.power), pi.lower.pow(self.power))
        };
        let (x, y) = (&self.coeff * &a, &self.coeff * &b);
        if x <= y {
            (x, y)
        } else {
            (y, x)
        }
    }

    pub fn lower(&self, pi: &PiEnclosure) -> Rational {
        self.bounds(pi).0
    }

    pub fn upper(&self, pi: &PiEnclosure) -> Rational {
        self.bounds(pi).1
    }

    /// Decimal to `sig` significant digits from the tight enclosure.
    pub fn decimal(&self, sig: usize) -> String {
        let (lo, hi) = self.bounds(&PiEnclosure::tight());
        ((lo + hi) / Rational::from(2)).to_decimal(sig)
    }
}

impl fmt::Display for PiMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (p, q) = (self.coeff.numer(), self.coeff.denom());
        let pi = match self.power.abs() {
            0 => String::new(),
            1 => "π".to_string(),
            e => format!("π^{}", e),
        };
        match self.power.signum() {
            0 => write!(f, "{}", self.coeff),
            1 if q.is_one() => write!(f, "{}·{}", p, pi),
            1 => write!(f, "{}·{}/{}", p, pi, q),
            _ if q.is_one() => write!(f, "{}/{}", p, pi),
            _ => write!(f, "{}/({}·{})", p, q, pi),
        }
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

fn double_factorial(n: u32) -> BigInt {
    (1..=n).rev().step_by(2).map(BigInt::from).product()
}

/// Volume of the unit ball in `R^k`.
pub fn omega(k: u32) -> PiMonomial {
    let m = k / 2;
    let coeff = if k.is_multiple_of(2) {
        Rational::new(1, factorial(m))
    } else {
        Rational::new(BigInt::from(2).pow(m + 1), double_factorial(k))
    };
    PiMonomial {
        coeff,
        power: m as i32,
    }
}

/// `2^k (3/2)^{k(k-1)/2} V / omega_k`: bound on the lengths of a reduced basis
/// of a rank-`k` lattice of covolume `V`.
pub fn ell(k: u32, volume: &Rational) -> PiMonomial {
    let c = Rational::from(2).pow(k as i32) * Rational::new(3, 2).pow((k * k.saturating_sub(1) / 2) as i32);
    omega(k).recip().times(&(c * volume))
}

/// `1 / (omega_{n-k} (eps/2)^{n-k})`: volume beyond which a `k`-dimensional
/// subtorus of `(R/Z)^n` lifts to an `(eps/2)`-dense one step up.
pub fn c_star(n: u32, k: u32, epsilon: &Rational) -> Result<PiMonomial> {
    if k == 0 || k > n || !epsilon.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= k <= n and epsilon > 0, got n={} k={} epsilon={}",
            n, k, epsilon
        )));
    }
    let e = (n - k) as i32;
    Ok(omega(n - k).times(&(epsilon / Rational::from(2)).pow(e)).recip())
}

/// Speed-volume threshold `1 / (omega_{n-1} eps^{n-1})` at `eps = 1/(n(n+1))`.
pub fn lrc_threshold(n: u32) -> Result<PiMonomial> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("threshold needs n >= 2, got {}", n)));
    }
    let eps = Rational::new(1, n * (n + 1));
    c_star(n, 1, &(eps * Rational::from(2)))
}

/// `n^{5n/2}`, carried through its exact square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerBound {
    pub n: u32,
    pub square: BigInt,
}

impl PowerBound {
    pub fn new(n: u32) -> Self {
        PowerBound {
            n,
            square: BigInt::from(n).pow(5 * n),
        }
    }

    pub fn bounds(&self) -> (Rational, Rational) {
        let r = self.square.sqrt();
        if &r * &r == self.square {
            (Rational::from_integer(r.clone()), Rational::from_integer(r))
        } else {
            (Rational::from_integer(r.clone()), Rational::from_integer(r + 1))
        }
    }

    pub fn approx(&self) -> f64 {
        (self.n as f64).powf(2.5 * self.n as f64)
    }

    /// True when `x < n^{5n/2}` is certain for every value up to `x`.
    pub fn exceeds(&self, x: &Rational) -> bool {
        !x.is_positive() || (x * x) < Rational::from_integer(self.square.clone())
    }
}

/// Printable constant: symbolic form, decimal and rational enclosure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstantValue {
    pub symbolic: String,
    pub decimal: String,
    pub lower: Rational,
    pub upper: Rational,
}

impl ConstantValue {
    pub fn from_monomial(m: &PiMonomial, pi: &PiEnclosure) -> Self {
        let (lower, upper) = m.bounds(pi);
        ConstantValue {
            symbolic: m.to_string(),
            decimal: m.decimal(12),
            lower,
            upper,
        }
    }

    fn from_power_bound(b: &PowerBound) -> Self {
        let (lower, upper) = b.bounds();
        let decimal = if lower == upper {
            lower.to_decimal(12)
        } else {
            format!("{:.11e}", b.approx())
        };
        ConstantValue {
            symbolic: format!("{}^({}/2)", b.n, 5 * b.n),
            decimal,
            lower,
            upper,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedConstants {
    pub n: u32,
    pub k: u32,
    pub volume: Rational,
    pub epsilon: Rational,
    pub pi: PiEnclosure,
    pub omega_k: ConstantValue,
    pub ell_kv: ConstantValue,
    pub c_star: ConstantValue,
    pub lrc_threshold: ConstantValue,
    pub tao_bound: ConstantValue,
    /// `lrc_threshold < n^{5n/2}` certified from the upper enclosure.
    pub threshold_below_tao: bool,
}

pub fn named_constants(n: u32, k: u32, volume: &Rational, epsilon: &Rational) -> Result<NamedConstants> {
    named_constants_with(n, k, volume, epsilon, &PiEnclosure::default())
}

pub fn named_constants_with(
    n: u32,
    k: u32,
    volume: &Rational,
    epsilon: &Rational,
    pi: &PiEnclosure,
) -> Result<NamedConstants> {
    if !volume.is_positive() {
        return Err(Error::InvalidArgument(format!("volume must be positive, got {}", volume)));
    }
    let threshold = lrc_threshold(n)?;
    let tao = PowerBound::new(n);
    Ok(NamedConstants {
        n,
        k,
        volume: volume.clone(),
        epsilon: epsilon.clone(),
        pi: pi.clone(),
        omega_k: ConstantValue::from_monomial(&omega(k), pi),
        ell_kv: ConstantValue::from_monomial(&ell(k, volume), pi),
        c_star: ConstantValue::from_monomial(&c_star(n, k, epsilon)?, pi),
        lrc_threshold: ConstantValue::from_monomial(&threshold, pi),
        tao_bound: ConstantValue::from_power_bound(&tao),
        threshold_below_tao: tao.exceeds(&threshold.upper(pi)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn ball_volumes() {
        assert_eq!(omega(0), PiMonomial::rational(q(1, 1)));
        assert_eq!(omega(1), PiMonomial::rational(q(2, 1)));
        assert_eq!(omega(2), PiMonomial { coeff: q(1, 1), power: 1 });
        assert_eq!(omega(3), PiMonomial { coeff: q(4, 3), power: 1 });
        assert_eq!(omega(4), PiMonomial { coeff: q(1, 2), power: 2 });
        assert_eq!(omega(5), PiMonomial { coeff: q(8, 15), power: 2 });
        let (lo, hi) = omega(2).bounds(&PiEnclosure::default());
        assert_eq!((lo, hi), (q(314159, 100000), q(314160, 100000)));
    }

    #[test]
    fn ball_volumes_match_gamma_recursion() {
        // omega_k = 2 pi / k * omega_{k-2}
        for k in 2..12 {
            let lhs = omega(k);
            let rhs = omega(k - 2).times(&q(2, k as i64));
            assert_eq!(lhs.coeff, rhs.coeff);
            assert_eq!(lhs.power, rhs.power + 1);
        }
    }

    #[test]
    fn thresholds() {
        assert_eq!(lrc_threshold(2).unwrap(), PiMonomial::rational(q(3, 1)));
        assert_eq!(lrc_threshold(3).unwrap(), PiMonomial { coeff: q(144, 1), power: -1 });
        assert_eq!(lrc_threshold(3).unwrap().to_string(), "144/π");
        let c = c_star(3, 1, &q(2, 25)).unwrap();
        assert_eq!(c, PiMonomial { coeff: q(625, 1), power: -1 });
        let (lo, hi) = c.bounds(&PiEnclosure::default());
        assert!(lo > q(1989, 10) && hi < q(199, 1));
    }

    #[test]
    fn cutoff_199_needs_five_digits_of_pi() {
        let lhs = |pi: Rational| Rational::from(199) * pi * q(1, 625);
        assert!(lhs(q(314159, 100000)) > q(1, 1));
        assert!(lhs(q(314, 100)) < q(1, 1));
    }

    #[test]
    fn tao_comparison() {
        for n in 2..=12 {
            let c = named_constants(n, 1, &q(1, 1), &q(1, 10)).unwrap();
            assert!(c.threshold_below_tao, "n = {}", n);
        }
        assert_eq!(PowerBound::new(2).bounds(), (q(32, 1), q(32, 1)));
    }

    #[test]
    fn decimals() {
        assert_eq!(omega(2).decimal(12), "3.14159265359");
        assert_eq!(lrc_threshold(3).unwrap().decimal(12), "45.8366236105");
        assert_eq!(ell(2, &q(1, 1)).to_string(), "6/π");
    }
}
