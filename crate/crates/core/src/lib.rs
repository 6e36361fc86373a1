//! Exact computation of Lonely Runner spectra.
//!
//! The crate is organized bottom-up:
//!
//! - [`rational`], [`vector`], [`torus`]: exact arithmetic and the circle/torus metrics.
//! - [`loneliness`]: maximum loneliness and D-values of 1-dimensional subtori.
//! - [`subgroups`]: D-values and properness of closed subgroups `T + H`.
//! - [`lattice`]: saturation, covolumes, density certificates, plane D-values, constants.
//! - [`spectrum`]: enumeration, spectrum tables, verifiers and reports.

pub mod error;
pub mod lattice;
pub mod loneliness;
pub mod rational;
pub mod spectrum;
pub mod subgroups;
pub mod torus;
pub mod vector;

pub use error::{Error, Result};
pub use loneliness::{
    d_hyperplane, d_min_max, d_subtorus1, max_loneliness, LonelinessResult, SpeedTuple,
};
pub use rational::Rational;
pub use torus::{circle_distance, linf_center_distance, TorusPoint};
pub use vector::{primitive_part, IntVector};
