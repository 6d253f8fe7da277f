//! Finite groups and groupoids, nerves, Čech cohomology and group homology.

pub mod cohomology;
pub mod group;
#[allow(clippy::module_inception)]
pub mod groupoid;
pub mod homology;
pub mod nerve;
pub mod sparse;

pub use cohomology::{cech_cohomology, cech_cohomology_skeletal, cech_complex, coarse_moduli_compare, CochainComplex};
pub use group::{GroupSpec, GroupTable};
pub use groupoid::{action_groupoid, Component, FiniteGroupoid, GroupoidSpec};
pub use homology::group_homology;
pub use nerve::{nerve, NerveData};
pub use sparse::SparseMatrix;
