use num_bigint::BigInt;
use serde::Serialize;

use super::cone::{dual_cone, Cone};
use super::fan::Fan;
use super::hilbert::hilbert_basis;
use crate::error::Result;
use crate::lattice::{kernel_basis, quotient_lattice};
use crate::linalg::IntegerMatrix;

/// The torus orbit `O_τ ≅ T_{N(τ)}` attached to a cone of a fan.
#[derive(Clone, Debug)]
pub struct OrbitDatum {
    pub cone: Cone,
    pub orbit_dim: usize,
    pub quotient_rank: usize,
    /// Rows give the map `N → N(τ) = N / N_τ`.
    pub projection: IntegerMatrix,
}

/// Values of the distinguished point `x_σ` on the Hilbert basis of `σ^∨ ∩ M`.
#[derive(Clone, Debug)]
pub struct DistinguishedPoint {
    pub cone: Cone,
    pub semigroup_values: Vec<(Vec<BigInt>, u8)>,
}

#[derive(Serialize)]
struct ValueEntry<'a> {
    #[serde(with = "crate::json::bigint_vec")]
    element: &'a [BigInt],
    value: u8,
}

impl DistinguishedPoint {
    pub fn value(&self, u: &[BigInt]) -> Option<u8> {
        self.semigroup_values.iter().find(|(e, _)| e.as_slice() == u).map(|(_, v)| *v)
    }

    pub fn values_json(&self) -> serde_json::Value {
        let entries: Vec<ValueEntry> =
            self.semigroup_values.iter().map(|(e, v)| ValueEntry { element: e, value: *v }).collect();
        serde_json::to_value(entries).expect("serializable")
    }
}

/// Basis (columns) of `N_τ`, the saturated lattice spanned by `τ ∩ N`.
pub fn cone_lattice(tau: &Cone) -> IntegerMatrix {
    let n = tau.ambient_rank();
    if tau.equations().is_empty() {
        IntegerMatrix::identity(n)
    } else {
        kernel_basis(&IntegerMatrix::from_rows_with_cols(tau.equations().to_vec(), n))
    }
}

/// The projection `N → N(τ)` onto a free quotient of rank `n − dim τ`.
pub fn quotient_projection(tau: &Cone) -> Result<IntegerMatrix> {
    let (_, projection) = quotient_lattice(tau.ambient_rank(), &cone_lattice(tau))?;
    Ok(projection)
}

pub fn orbit(tau: &Cone, fan: &Fan) -> Result<OrbitDatum> {
    fan.require(tau)?;
    let projection = quotient_projection(tau)?;
    let n = fan.lattice_rank();
    Ok(OrbitDatum { cone: tau.clone(), orbit_dim: n - tau.dim(), quotient_rank: projection.rows(), projection })
}

/// `Star(τ)`: the images in `N(τ)` of all cones containing `τ` as a face.
pub fn star_fan(tau: &Cone, fan: &Fan) -> Result<Fan> {
    fan.require(tau)?;
    let projection = quotient_projection(tau)?;
    let images = orbit_closure_cones(tau, fan)?.iter().map(|c| c.image(&projection)).collect::<Result<Vec<_>>>()?;
    Fan::new(projection.rows(), images)
}

/// `{γ ∈ Σ : τ ≼ γ}`, the cones whose orbits make up the closure `V(τ)`.
pub fn orbit_closure_cones(tau: &Cone, fan: &Fan) -> Result<Vec<Cone>> {
    fan.require(tau)?;
    Ok(fan.all_cones().iter().filter(|g| tau.is_face_of(g)).cloned().collect())
}

pub fn distinguished_point(sigma: &Cone) -> Result<DistinguishedPoint> {
    let basis = hilbert_basis(&dual_cone(sigma))?;
    let semigroup_values = basis
        .elements
        .into_iter()
        .map(|u| {
            let v = sigma.is_orthogonal(&u) as u8;
            (u, v)
        })
        .collect();
    Ok(DistinguishedPoint { cone: sigma.clone(), semigroup_values })
}
