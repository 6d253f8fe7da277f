//! Rational polyhedral cones, fans and torus orbits.

pub mod cone;
pub(crate) mod dd;
pub mod fan;
pub mod hilbert;
pub mod toric;

pub use cone::{dual_cone, is_smooth, Cone};
pub use fan::{fan_validate, ConeSpec, Fan, FanSpec};
pub use hilbert::{dual_hilbert_basis, hilbert_basis, SemigroupBasis};
pub use toric::{distinguished_point, orbit, orbit_closure_cones, star_fan, DistinguishedPoint, OrbitDatum};
