use serde::Serialize;

use super::table::SpectrumTable;
use super::verify::in_s2_closed_form;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AccumulationRow {
    pub target: Rational,
    /// Distinct keys in `(x, x + window)`.
    pub above: usize,
    /// Distinct keys in `(x - window, x)`.
    pub below: usize,
    pub present: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AccumulationReport {
    pub n: usize,
    pub max_volume_sq: u64,
    pub window: Rational,
    pub rows: Vec<AccumulationRow>,
}

pub fn accumulation_report(table: &SpectrumTable, targets: &[Rational], window: &Rational) -> AccumulationReport {
    use std::ops::Bound::Excluded;
    let rows = targets
        .iter()
        .map(|x| AccumulationRow {
            target: x.clone(),
            above: table.entries.range((Excluded(x.clone()), Excluded(x + window))).count(),
            below: table.entries.range((Excluded(x - window), Excluded(x.clone()))).count(),
            present: table.entries.contains_key(x),
        })
        .collect();
    AccumulationReport {
        n: table.n,
        max_volume_sq: table.max_volume_sq,
        window: window.clone(),
        rows,
    }
}

/// Whether `d` is a D-value of some plane subtorus of `(R/Z)^n`, when known.
/// Such values are approached by infinitely many lines.
pub fn plane_spectrum_contains(n: usize, d: &Rational) -> Option<bool> {
    match n {
        2 => Some(d.is_zero()),
        3 => Some(in_s2_closed_form(d)),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicityRow {
    pub d: Rational,
    pub mult: u64,
    pub expected_unbounded: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicityReport {
    pub n: usize,
    pub max_volume_sq: u64,
    pub threshold: u64,
    pub rows: Vec<MultiplicityRow>,
}

/// Keys with multiplicity at least `threshold`, largest key first.
pub fn multiplicity_report(table: &SpectrumTable, threshold: u64) -> MultiplicityReport {
    let rows = table
        .entries
        .iter()
        .rev()
        .filter(|(_, e)| e.mult >= threshold)
        .map(|(d, e)| MultiplicityRow {
            d: d.clone(),
            mult: e.mult,
            expected_unbounded: plane_spectrum_contains(table.n, d),
        })
        .collect();
    MultiplicityReport {
        n: table.n,
        max_volume_sq: table.max_volume_sq,
        threshold,
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::spectrum::{build_spectrum, EnumerationSpec};

    #[test]
    fn accumulation_counts() {
        let t = build_spectrum(&EnumerationSpec::new(3, 3000).unwrap()).unwrap();
        let r = accumulation_report(&t, &[q(1, 6), q(1, 10)], &q(1, 100));
        assert_eq!(r.rows[0].below, 0);
        assert!(r.rows[0].present);
        let small = build_spectrum(&EnumerationSpec::new(3, 1000).unwrap()).unwrap();
        let s = accumulation_report(&small, &[q(1, 6)], &q(1, 100));
        assert!(s.rows[0].above <= r.rows[0].above);
    }

    #[test]
    fn two_runner_accumulation_at_zero() {
        let t = build_spectrum(&EnumerationSpec::new(2, 20000).unwrap()).unwrap();
        let r = accumulation_report(&t, &[q(0, 1)], &q(1, 100));
        let expected = t.entries.keys().filter(|d| d.is_positive() && **d < q(1, 100)).count();
        assert_eq!(r.rows[0].above, expected);
        assert!(expected > 0);
    }

    #[test]
    fn multiplicities() {
        let t = build_spectrum(&EnumerationSpec::new(3, 10000).unwrap()).unwrap();
        let r = multiplicity_report(&t, 1);
        let sixth = r.rows.iter().find(|row| row.d == q(1, 6)).unwrap();
        assert!(sixth.mult >= 2);
        assert_eq!(sixth.expected_unbounded, Some(true));
        let quarter = r.rows.iter().find(|row| row.d == q(1, 4)).unwrap();
        assert_eq!(quarter.expected_unbounded, Some(false));

        let t2 = build_spectrum(&EnumerationSpec::new(2, 10000).unwrap()).unwrap();
        assert_eq!(t2.get(&q(1, 6)).unwrap().mult, 1);
    }
}
