use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use super::build::{d_of_tuple, volume, with_pool};
use super::enumerate::{visit_block, EnumerationSpec};
use super::table::WITNESS_CAP;
use crate::error::{Error, Result};
use crate::lattice::{c_star, omega, PiEnclosure};
use crate::rational::Rational;

/// What is known about D-values of plane subtori of `(R/Z)^n`: a finite list
/// of top values and a bound on everything else.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OuterSpectrumFacts {
    /// Descending.
    pub top_values: Vec<Rational>,
    pub rest_bound: Rational,
    pub source: String,
}

impl OuterSpectrumFacts {
    pub fn known(n: usize) -> Option<Self> {
        match n {
            2 => Some(OuterSpectrumFacts {
                top_values: vec![],
                rest_bound: Rational::zero(),
                source: "the only plane subtorus of (R/Z)^2 is the whole torus, with D = 0".into(),
            }),
            3 => Some(OuterSpectrumFacts {
                top_values: vec![Rational::new(1, 6)],
                rest_bound: Rational::new(1, 10),
                source: "plane subtori of (R/Z)^3 take the values {0} ∪ {1/(4s+2)} of lines in (R/Z)^2".into(),
            }),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct CertifyOptions {
    pub threads: Option<usize>,
    pub pi: Option<PiEnclosure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExhaustivePhase {
    pub tuples_checked: u64,
    pub hits: u64,
    /// Smallest hits by (volume, lex).
    pub witnesses: Vec<Vec<u64>>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymbolicPhase {
    pub facts: OuterSpectrumFacts,
    pub pi: PiEnclosure,
    /// Largest outer value below the target, or the rest bound.
    pub below: Option<Rational>,
    pub gap: Option<Rational>,
    pub epsilon: Option<Rational>,
    /// Lines beyond the cutoff are `(gap - epsilon)`-dense in a plane.
    pub density_holds: bool,
    /// Volume past which that density is guaranteed, symbolically.
    pub density_volume: Option<String>,
    /// Outer values above the target push D above it.
    pub upper_case_holds: bool,
    /// `below + gap - epsilon < target`.
    pub lower_case_holds: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbsenceCertificate {
    pub version: u32,
    pub target: Rational,
    pub n: usize,
    pub cutoff_volume_sq: u64,
    pub exhaustive: ExhaustivePhase,
    pub symbolic: SymbolicPhase,
    pub pass: bool,
}

pub fn certify_absence(target: &Rational, n: usize, cutoff_volume_sq: u64) -> Result<AbsenceCertificate> {
    certify_absence_with(target, n, cutoff_volume_sq, None, &CertifyOptions::default())
}

/// Certifies that no line in `(R/Z)^n` has D-value `target`: an exhaustive
/// scan up to the cutoff, and beyond it a density argument against the
/// known plane spectrum.
pub fn certify_absence_with(
    target: &Rational,
    n: usize,
    cutoff_volume_sq: u64,
    facts: Option<&OuterSpectrumFacts>,
    opts: &CertifyOptions,
) -> Result<AbsenceCertificate> {
    let facts = match facts {
        Some(f) => f.clone(),
        None => OuterSpectrumFacts::known(n).ok_or_else(|| Error::MissingOuterSpectrum {
            n,
            target: target.clone(),
        })?,
    };
    let spec = EnumerationSpec::new(n, cutoff_volume_sq)?;
    let exhaustive = exhaustive_phase(target, &spec, opts.threads)?;
    let symbolic = symbolic_phase(target, n, cutoff_volume_sq, facts, opts.pi.clone().unwrap_or_default())?;
    Ok(AbsenceCertificate {
        version: 1,
        target: target.clone(),
        n,
        cutoff_volume_sq,
        pass: exhaustive.pass && symbolic.pass,
        exhaustive,
        symbolic,
    })
}

/// Tuples checked, hits, and the smallest hits with their volumes.
type BlockHits = (u64, u64, Vec<(u64, Vec<u64>)>);

fn exhaustive_phase(target: &Rational, spec: &EnumerationSpec, threads: Option<usize>) -> Result<ExhaustivePhase> {
    let key = match (target.numer().to_u64(), target.denom().to_u64()) {
        (Some(a), Some(b)) => Some((a, b)),
        _ => None,
    };
    let (n, max) = (spec.n, spec.max_volume_sq);
    let blocks: Vec<u64> = (1..=spec.max_first()).collect();
    let parts: Vec<BlockHits> = with_pool(threads, || {
        blocks
            .par_iter()
            .map(|&first| {
                let (mut checked, mut hits, mut found) = (0u64, 0u64, Vec::new());
                visit_block(n, max, first, &mut |t| {
                    checked += 1;
                    if Some(d_of_tuple(t)) == key {
                        hits += 1;
                        found.push((volume(t), t.to_vec()));
                    }
                });
                found.sort();
                found.truncate(WITNESS_CAP);
                (checked, hits, found)
            })
            .collect()
    })?;
    let tuples_checked = parts.iter().map(|p| p.0).sum();
    let hits = parts.iter().map(|p| p.1).sum();
    let mut all: Vec<(u64, Vec<u64>)> = parts.into_iter().flat_map(|p| p.2).collect();
    all.sort();
    all.truncate(WITNESS_CAP);
    Ok(ExhaustivePhase {
        tuples_checked,
        hits,
        witnesses: all.into_iter().map(|(_, t)| t).collect(),
        pass: hits == 0,
    })
}

fn symbolic_phase(
    target: &Rational,
    n: usize,
    cutoff: u64,
    facts: OuterSpectrumFacts,
    pi: PiEnclosure,
) -> Result<SymbolicPhase> {
    let mut phase = SymbolicPhase {
        facts: facts.clone(),
        pi: pi.clone(),
        below: None,
        gap: None,
        epsilon: None,
        density_holds: false,
        density_volume: None,
        upper_case_holds: false,
        lower_case_holds: false,
        pass: false,
    };
    if n < 2 {
        return Ok(phase);
    }
    phase.upper_case_holds = !facts.top_values.contains(target);
    let below = facts
        .top_values
        .iter()
        .filter(|a| *a < target)
        .chain(std::iter::once(&facts.rest_bound))
        .max()
        .cloned()
        .expect("rest bound present");
    if &below >= target {
        return Ok(phase);
    }
    let gap = target - &below;
    phase.below = Some(below.clone());
    phase.gap = Some(gap.clone());

    let e = (n - 1) as i32;
    let w = omega((n - 1) as u32);
    let w_lo = w.lower(&pi);
    let cutoff_q = Rational::from(cutoff as i64);
    let ten = Rational::from(10);
    let mut eps = ten.recip();
    for _ in 0..40 {
        if eps < gap {
            let radius = &gap - &eps;
            let m = &w_lo * radius.pow(e);
            if &cutoff_q * &m * &m > Rational::one() {
                phase.density_holds = true;
                phase.density_volume = Some(c_star(n as u32, 1, &(radius * Rational::from(2)))?.to_string());
                phase.epsilon = Some(eps.clone());
                break;
            }
        }
        eps = eps / &ten;
    }
    if let Some(eps) = &phase.epsilon {
        phase.lower_case_holds = &(&below + &gap - eps) < target;
    }
    phase.pass = phase.upper_case_holds && phase.density_holds && phase.lower_case_holds;
    Ok(phase)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn small_cutoff_instances() {
        let c = certify_absence(&q(1, 4), 3, 400).unwrap();
        assert!(!c.exhaustive.pass);
        assert_eq!(c.exhaustive.witnesses[0], vec![1, 2, 3]);

        let c = certify_absence(&q(1, 6), 3, 400).unwrap();
        assert!(!c.pass);
        assert!(c.exhaustive.witnesses.contains(&vec![1, 2, 2]));
        assert!(!c.symbolic.upper_case_holds);
    }

    #[test]
    fn symbolic_phase_for_seven_fiftieths() {
        let s = symbolic_phase(&q(7, 50), 3, 199 * 199, OuterSpectrumFacts::known(3).unwrap(), PiEnclosure::default())
            .unwrap();
        assert!(s.pass, "{:?}", s);
        assert_eq!(s.gap, Some(q(1, 25)));
        assert!(s.epsilon.unwrap() < q(1, 25));
    }

    #[test]
    fn coarse_pi_breaks_the_density_step() {
        let pi = PiEnclosure { lower: q(314, 100), upper: q(315, 100) };
        let s = symbolic_phase(&q(7, 50), 3, 199 * 199, OuterSpectrumFacts::known(3).unwrap(), pi).unwrap();
        assert!(!s.density_holds && !s.pass);
    }

    #[test]
    fn cutoff_198_is_too_small() {
        let s = symbolic_phase(&q(7, 50), 3, 198 * 198, OuterSpectrumFacts::known(3).unwrap(), PiEnclosure::default())
            .unwrap();
        assert!(!s.density_holds);
    }

    #[test]
    fn unknown_outer_spectrum() {
        assert!(matches!(
            certify_absence(&q(7, 50), 4, 100),
            Err(Error::MissingOuterSpectrum { n: 4, .. })
        ));
        let facts = OuterSpectrumFacts {
            top_values: vec![q(1, 6)],
            rest_bound: q(1, 10),
            source: "caller".into(),
        };
        let c = certify_absence_with(&q(7, 50), 4, 100, Some(&facts), &CertifyOptions::default()).unwrap();
        assert_eq!(c.n, 4);
    }
}
