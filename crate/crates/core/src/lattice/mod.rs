//! Lattice geometry for subtori: saturation, covolumes, projected lattices,
//! density lifts, plane slicing and the planar min-max.

mod planar;
mod plane;
mod projected;
mod slice;
mod constants;

pub use planar::{d_subtorus2, d_subtorus2_with_budget, DEFAULT_ENTRY_BUDGET};
pub use plane::{
    bezout_coefficients, covolume_sq_2, density_radius_sq, minors_gcd, saturate, volume_sq_1,
    SaturatedPlane,
};
pub use projected::{kronecker_lift, shortest_projected_vector, DensityCertificate};
pub use slice::{dense_sequence, slice_plane};
pub use constants::{
    c_star, ell, lrc_threshold, named_constants, named_constants_with, omega, ConstantValue,
    NamedConstants, PiEnclosure, PiMonomial, PowerBound,
};
