use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::table::SpectrumTable;
use crate::error::{Error, Result};
use crate::loneliness::{max_loneliness, SpeedTuple};
use crate::rational::Rational;
use crate::vector::serialize_bigint;

/// Whether `d` is `0` or `1/(4s+2)` for some `s >= 1`; returns `s` in the latter case.
pub fn s2_closed_form_index(d: &Rational) -> Option<u64> {
    if d.is_zero() {
        return Some(0);
    }
    if !d.numer().is_one() {
        return None;
    }
    let m = d.denom().to_u64()?;
    (m >= 6 && m % 4 == 2).then(|| (m - 2) / 4)
}

pub fn in_s2_closed_form(d: &Rational) -> bool {
    s2_closed_form_index(d).is_some()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedFormReport {
    pub keys_checked: usize,
    pub max_key: Option<Rational>,
    /// Keys not of the form `0` or `1/(4s+2)`.
    pub violations: Vec<Rational>,
    /// `s` with `(1, 2s)` inside the bound whose value `1/(4s+2)` is absent.
    pub missing: Vec<u64>,
    pub pass: bool,
}

/// Checks a 2-runner table against `{0} ∪ {1/(4s+2)}`, in both directions.
pub fn verify_closed_form_s2(table: &SpectrumTable) -> Result<ClosedFormReport> {
    if table.n != 2 || table.k != 1 {
        return Err(Error::TableMismatch(format!(
            "expected a table with n = 2, k = 1, got n = {}, k = {}",
            table.n, table.k
        )));
    }
    let violations: Vec<Rational> = table
        .keys_desc()
        .filter(|d| !in_s2_closed_form(d))
        .cloned()
        .collect();
    let missing: Vec<u64> = (1u64..)
        .take_while(|s| 4 * s * s < table.max_volume_sq)
        .filter(|&s| table.get(&Rational::new(1, 4 * s + 2)).is_none())
        .collect();
    Ok(ClosedFormReport {
        keys_checked: table.entries.len(),
        max_key: table.max_key().cloned(),
        pass: violations.is_empty() && missing.is_empty(),
        violations,
        missing,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyFailure {
    pub r: u64,
    pub speeds: Vec<u64>,
    pub got: Rational,
    pub expected: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub r_max: u64,
    pub checked: u64,
    pub failures: Vec<FamilyFailure>,
    pub pass: bool,
}

pub fn fan_sun_speeds(r: u64) -> [u64; 4] {
    [8, 4 * r + 3, 4 * r + 11, 4 * r + 19]
}

pub fn fan_sun_value(r: u64) -> Rational {
    Rational::new(2 * r + 7, 8 * r + 30)
}

/// `ML(8, 4r+3, 4r+11, 4r+19) = (2r+7)/(8r+30)` for `0 <= r <= r_max`.
pub fn verify_family_fan_sun(r_max: u64) -> FamilyReport {
    let failures: Vec<FamilyFailure> = (0..=r_max)
        .filter_map(|r| {
            let speeds = fan_sun_speeds(r);
            let v: Vec<i64> = speeds.iter().map(|&x| x as i64).collect();
            let got = max_loneliness(&SpeedTuple::from_i64s(&v).expect("primitive")).ml;
            let expected = fan_sun_value(r);
            (got != expected).then(|| FamilyFailure {
                r,
                speeds: speeds.to_vec(),
                got,
                expected,
            })
        })
        .collect();
    FamilyReport {
        r_max,
        checked: r_max + 1,
        pass: failures.is_empty(),
        failures,
    }
}

/// Which window shape to test values of `ML` below `1/n` against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowMode {
    /// `s / (n s + 1)`.
    Strict,
    /// `s / (n s + k)` with `1 <= k <= n`.
    Amended,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowMatch {
    pub ml: Rational,
    #[serde(serialize_with = "serialize_bigint")]
    pub s: BigInt,
    #[serde(serialize_with = "serialize_bigint")]
    pub k: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowReport {
    pub n: usize,
    pub mode: WindowMode,
    pub in_window: usize,
    pub matches: Vec<WindowMatch>,
    pub violations: Vec<Rational>,
    pub pass: bool,
}

/// Writes `ml` in `(0, 1/n)` as `s/(ns + k)` with the smallest `k >= 1`.
pub fn window_form(ml: &Rational, n: usize) -> Option<(BigInt, BigInt)> {
    let nn = Rational::from(n as i64);
    if !ml.is_positive() || ml >= &nn.recip() {
        return None;
    }
    // 1/ml - n = k/s
    let ks = ml.recip() - nn;
    Some((ks.denom().clone(), ks.numer().clone()))
}

/// Lists `ML = 1/2 - d` values in `(0, 1/n)` not of the selected form.
pub fn verify_window(table: &SpectrumTable, mode: WindowMode) -> Result<WindowReport> {
    if table.k != 1 {
        return Err(Error::TableMismatch(format!("expected k = 1, got k = {}", table.k)));
    }
    let n = table.n;
    let limit = BigInt::from(match mode {
        WindowMode::Strict => 1,
        WindowMode::Amended => n as i64,
    });
    let mut matches = Vec::new();
    let mut violations = Vec::new();
    let mut in_window = 0;
    for d in table.keys_desc() {
        let ml = Rational::half() - d;
        let Some((s, k)) = window_form(&ml, n) else {
            continue;
        };
        in_window += 1;
        if k <= limit {
            matches.push(WindowMatch { ml, s, k });
        } else {
            violations.push(ml);
        }
    }
    Ok(WindowReport {
        n,
        mode,
        in_window,
        pass: violations.is_empty(),
        matches,
        violations,
    })
}
