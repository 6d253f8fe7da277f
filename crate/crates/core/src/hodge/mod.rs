//! Polarized Hodge structures, nilpotent cones and their boundary data, all
//! over exact rationals and Gaussian rationals.

pub mod decomposition;
pub mod gamma;
pub mod ku;
pub mod nilpotent;
pub mod structure;
pub mod weight;

pub use decomposition::{endomorphism_decomposition, ipr_fiber, EndomorphismDecomposition, IprFiber};
pub use gamma::{check_strong_compatibility, gamma_monoid, log_lattice, GammaMonoid, LogLattice};
pub use ku::{build_ku_stacky_triple, KuStackyTriple};
pub use nilpotent::{
    centralizer_algebra, default_y_samples, exp_nilpotent, form_algebra, log_unipotent, nilpotent_orbit_check,
    validate_nilpotent_cone, NilpotentCone, DEFAULT_Y_SAMPLES,
};
pub use structure::{validate_hodge, validate_hodge_with, PolarizedHodgeData, PositivityConvention};
pub use weight::{verify_weight_filtration, weight_filtration, WeightFiltration};

use crate::linalg::{Field, Matrix};

/// Basis of `{X ∈ T^{d×d} : L(X) = 0}` for a linear `L` given by the list of
/// matrices it must annihilate.
pub(crate) fn matrix_nullspace<T: Field>(
    d: usize,
    constraint: impl Fn(&Matrix<T>) -> Vec<Matrix<T>>,
) -> Vec<Matrix<T>> {
    let unit = |k: usize| Matrix::from_fn(d, d, |i, j| if i * d + j == k { T::one() } else { T::zero() });
    let columns: Vec<Vec<T>> =
        (0..d * d).map(|k| constraint(&unit(k)).iter().flat_map(|m| m.entries().to_vec()).collect()).collect();
    let rows = columns.first().map_or(0, Vec::len);
    if rows == 0 {
        return (0..d * d).map(unit).collect();
    }
    let system = Matrix::from_columns(&columns, rows);
    system
        .nullspace()
        .into_iter()
        .map(|v| Matrix::from_rows_with_cols(v.chunks(d.max(1)).map(<[T]>::to_vec).collect(), d))
        .collect()
}
