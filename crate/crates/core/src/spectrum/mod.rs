//! Enumeration of canonical speed tuples, spectrum tables, verifiers,
//! the absence certificate and observational reports.

mod build;
mod certify;
mod enumerate;
mod report;
mod table;
mod verify;

pub use build::{build_spectrum, build_spectrum_with, d_of_tuple, BuildOptions, THREADS_ENV};
pub use certify::{
    certify_absence, certify_absence_with, AbsenceCertificate, CertifyOptions, ExhaustivePhase,
    OuterSpectrumFacts, SymbolicPhase,
};
pub use enumerate::{count_proper_primitive, enumerate_proper_primitive, EnumerationSpec};
pub use report::{
    accumulation_report, multiplicity_report, plane_spectrum_contains, AccumulationReport,
    AccumulationRow, MultiplicityReport, MultiplicityRow,
};
pub use table::{
    SpectrumEntry, SpectrumTable, CANONICAL_ORDERINGS, CANONICAL_SORTED, TABLE_VERSION, WITNESS_CAP,
};
pub use verify::{
    fan_sun_speeds, fan_sun_value, in_s2_closed_form, s2_closed_form_index, verify_closed_form_s2,
    verify_family_fan_sun, verify_window, window_form, ClosedFormReport, FamilyFailure,
    FamilyReport, WindowMatch, WindowMode, WindowReport,
};
