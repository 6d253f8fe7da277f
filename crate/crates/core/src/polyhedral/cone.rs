use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::dd::generators_of_halfspaces;
use crate::error::{Error, Result};
use crate::lattice::{int_dot, kernel_basis, primitive, primitive_from_rational, to_rational};
use crate::linalg::IntegerMatrix;

/// A rational polyhedral cone in `ℝⁿ` presented by primitive integer generators.
///
/// Construction canonicalizes: the lineality space is stored by a Hermite-form
/// lattice basis (and contributes `±` each basis vector to `generators`), each
/// extremal ray is reduced modulo the lineality space and made primitive, and
/// the generator list is sorted. Two cones are equal iff their canonical
/// generator lists agree. The zero cone has no generators.
#[derive(Clone, Debug)]
pub struct Cone {
    ambient_rank: usize,
    generators: Vec<Vec<BigInt>>,
    lineality: Vec<Vec<BigInt>>,
    rays: Vec<Vec<BigInt>>,
    equations: Vec<Vec<BigInt>>,
    facet_normals: Vec<Vec<BigInt>>,
}

impl Cone {
    pub fn new(ambient_rank: usize, generators: Vec<Vec<BigInt>>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.len() != ambient_rank) {
            return Err(Error::Dimension(format!(
                "cone generator has {} coordinates, ambient rank is {ambient_rank}",
                g.len()
            )));
        }
        let gens: Vec<Vec<BigInt>> =
            generators.iter().filter(|g| g.iter().any(|x| !x.is_zero())).map(|g| primitive(g)).collect();

        // H-description: σ^∨ = lin(equations) + cone(facets).
        let dual = generators_of_halfspaces(ambient_rank, &gens);
        let equations = crate::lattice::hermite_rows(&dual.lineality);
        let facet_normals = canonical_rays(ambient_rank, &equations, &dual.rays);

        // Lineality of σ: the common kernel of every facet and equation.
        let mut all = equations.clone();
        all.extend(facet_normals.iter().cloned());
        let lin_basis = if all.is_empty() {
            IntegerMatrix::identity(ambient_rank).to_columns()
        } else {
            kernel_basis(&IntegerMatrix::from_rows_with_cols(all, ambient_rank)).to_columns()
        };
        let lineality = crate::lattice::hermite_rows(&lin_basis);

        let target = ambient_rank.saturating_sub(lineality.len() + 1);
        let mut extreme = Vec::new();
        for g in &gens {
            let tight: Vec<Vec<BigInt>> = equations
                .iter()
                .cloned()
                .chain(facet_normals.iter().filter(|f| int_dot(f, g).is_zero()).cloned())
                .collect();
            let rank = if tight.is_empty() {
                0
            } else {
                to_rational(&IntegerMatrix::from_rows_with_cols(tight, ambient_rank)).rank()
            };
            let in_lineality = facet_normals.iter().all(|f| int_dot(f, g).is_zero());
            if !in_lineality && rank == target {
                extreme.push(g.clone());
            }
        }
        let rays = canonical_rays(ambient_rank, &lineality, &extreme);

        let mut all_gens: Vec<Vec<BigInt>> = rays.clone();
        for l in &lineality {
            all_gens.push(l.clone());
            all_gens.push(l.iter().map(|x| -x.clone()).collect());
        }
        all_gens.sort();
        all_gens.dedup();

        Ok(Self { ambient_rank, generators: all_gens, lineality, rays, equations, facet_normals })
    }

    pub fn from_i64(ambient_rank: usize, generators: &[&[i64]]) -> Result<Self> {
        Self::new(ambient_rank, generators.iter().map(|g| crate::lattice::int_vec(g)).collect())
    }

    pub fn zero(ambient_rank: usize) -> Self {
        Self::new(ambient_rank, Vec::new()).expect("zero cone")
    }

    /// The cone generated by the standard basis vectors `e_i` for `i ∈ indices`.
    pub fn coordinate(ambient_rank: usize, indices: &[usize]) -> Self {
        let gens =
            indices.iter().map(|&i| (0..ambient_rank).map(|j| BigInt::from((i == j) as i64)).collect()).collect();
        Self::new(ambient_rank, gens).expect("coordinate cone")
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    /// Extremal rays modulo the lineality space.
    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    pub fn lineality(&self) -> &[Vec<BigInt>] {
        &self.lineality
    }

    /// Integer normals `u` with `u·x = 0` on the linear span of the cone.
    pub fn equations(&self) -> &[Vec<BigInt>] {
        &self.equations
    }

    /// Inward facet normals `u` with `u·x ≥ 0` on the cone, one per facet.
    pub fn facet_normals(&self) -> &[Vec<BigInt>] {
        &self.facet_normals
    }

    pub fn dim(&self) -> usize {
        self.ambient_rank - self.equations.len()
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_strongly_convex(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn is_simplicial(&self) -> bool {
        self.is_strongly_convex() && self.rays.len() == self.dim()
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        v.len() == self.ambient_rank
            && self.equations.iter().all(|e| int_dot(e, v).is_zero())
            && self.facet_normals.iter().all(|f| !int_dot(f, v).is_negative())
    }

    /// Relative interior membership.
    pub fn contains_in_relative_interior(&self, v: &[BigInt]) -> bool {
        self.contains(v) && self.facet_normals.iter().all(|f| int_dot(f, v).is_positive())
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.generators.iter().all(|g| self.contains(g))
    }

    /// `σ^⊥ ∋ u` iff `u` vanishes on every generator.
    pub fn is_orthogonal(&self, u: &[BigInt]) -> bool {
        self.generators.iter().all(|g| int_dot(g, u).is_zero())
    }

    pub fn intersection(&self, other: &Cone) -> Result<Cone> {
        if self.ambient_rank != other.ambient_rank {
            return Err(Error::Dimension("intersecting cones of different ambient rank".into()));
        }
        let mut cons: Vec<Vec<BigInt>> = Vec::new();
        for c in [self, other] {
            cons.extend(c.facet_normals.iter().cloned());
            for e in &c.equations {
                cons.push(e.clone());
                cons.push(e.iter().map(|x| -x.clone()).collect());
            }
        }
        let g = generators_of_halfspaces(self.ambient_rank, &cons);
        let mut gens = g.rays;
        for l in g.lineality {
            gens.push(l.iter().map(|x| -x.clone()).collect());
            gens.push(l);
        }
        Cone::new(self.ambient_rank, gens)
    }

    /// All faces, including the zero cone and the cone itself, sorted by dimension.
    pub fn faces(&self) -> Vec<Cone> {
        // Faces are the intersections of σ with sets of facet hyperplanes; track
        // them by the indices of the generators they retain.
        let full: BTreeSet<usize> = (0..self.generators.len()).collect();
        let mut found: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        let mut stack = vec![full];
        while let Some(face) = stack.pop() {
            if !found.insert(face.clone()) {
                continue;
            }
            for f in &self.facet_normals {
                let sub: BTreeSet<usize> =
                    face.iter().copied().filter(|&i| int_dot(f, &self.generators[i]).is_zero()).collect();
                if !found.contains(&sub) {
                    stack.push(sub);
                }
            }
        }
        let mut out: Vec<Cone> = found
            .into_iter()
            .map(|s| {
                Cone::new(self.ambient_rank, s.into_iter().map(|i| self.generators[i].clone()).collect())
                    .expect("face of a cone")
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn is_face_of(&self, other: &Cone) -> bool {
        if self.ambient_rank != other.ambient_rank || !other.contains_cone(self) {
            return false;
        }
        if self == other {
            return true;
        }
        // τ ⊆ σ is a face iff τ = σ ∩ u^⊥ for u the sum of the facet normals tight on τ.
        let tight: Vec<&Vec<BigInt>> =
            other.facet_normals.iter().filter(|f| self.generators.iter().all(|g| int_dot(f, g).is_zero())).collect();
        if tight.is_empty() {
            return false;
        }
        let retained: Vec<Vec<BigInt>> =
            other.generators.iter().filter(|g| tight.iter().all(|f| int_dot(f, g).is_zero())).cloned().collect();
        Cone::new(self.ambient_rank, retained).map(|c| &c == self).unwrap_or(false)
    }

    /// Image under an integer linear map (`map` has `ambient_rank` columns).
    pub fn image(&self, map: &IntegerMatrix) -> Result<Cone> {
        if map.cols() != self.ambient_rank {
            return Err(Error::Dimension(format!(
                "map has {} columns, cone lives in rank {}",
                map.cols(),
                self.ambient_rank
            )));
        }
        Cone::new(map.rows(), self.generators.iter().map(|g| map.mul_vec(g)).collect())
    }

    /// Generators as the columns of an integer matrix.
    pub fn generator_matrix(&self) -> IntegerMatrix {
        IntegerMatrix::from_columns(&self.generators, self.ambient_rank)
    }
}

/// Rays reduced modulo `lineality` (pivot coordinates of its echelon form set
/// to zero over ℚ), made primitive, deduplicated and sorted.
fn canonical_rays(n: usize, lineality: &[Vec<BigInt>], rays: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let echelon = if lineality.is_empty() {
        None
    } else {
        let (r, pivots) = to_rational(&IntegerMatrix::from_rows_with_cols(lineality.to_vec(), n)).rref();
        Some((r, pivots))
    };
    let mut out: Vec<Vec<BigInt>> = rays
        .iter()
        .map(|ray| match &echelon {
            None => primitive(ray),
            Some((r, pivots)) => {
                let mut v: Vec<BigRational> = ray.iter().map(|x| BigRational::from_integer(x.clone())).collect();
                for (row, &p) in pivots.iter().enumerate() {
                    let c = v[p].clone();
                    if !c.is_zero() {
                        for (j, x) in v.iter_mut().enumerate() {
                            *x -= &c * r.get(row, j);
                        }
                    }
                }
                primitive_from_rational(&v)
            }
        })
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .collect();
    out.sort();
    out.dedup();
    out
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_rank == other.ambient_rank && self.generators == other.generators
    }
}

impl Eq for Cone {}

impl Hash for Cone {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ambient_rank.hash(state);
        self.generators.hash(state);
    }
}

impl PartialOrd for Cone {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by ambient rank, then dimension, then generator list.
impl Ord for Cone {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.ambient_rank, self.dim(), &self.generators).cmp(&(other.ambient_rank, other.dim(), &other.generators))
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.generators.is_empty() {
            return write!(f, "{{0}} in Z^{}", self.ambient_rank);
        }
        let gens: Vec<String> = self
            .generators
            .iter()
            .map(|g| format!("({})", g.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "cone[{}]", gens.join(", "))
    }
}

/// The dual cone `σ^∨ = {u : ⟨u, v⟩ ≥ 0 for all v ∈ σ}` in the dual lattice.
pub fn dual_cone(sigma: &Cone) -> Cone {
    let mut gens = sigma.facet_normals.clone();
    for e in &sigma.equations {
        gens.push(e.clone());
        gens.push(e.iter().map(|x| -x.clone()).collect());
    }
    Cone::new(sigma.ambient_rank, gens).expect("dual cone")
}

/// `σ` is generated by part of a ℤ-basis of the lattice.
pub fn is_smooth(sigma: &Cone) -> bool {
    if sigma.is_zero() {
        return true;
    }
    let m = sigma.generator_matrix();
    let diag = crate::lattice::invariant_factors(&m);
    let rank = diag.iter().filter(|x| !x.is_zero()).count();
    rank == m.cols() && diag.iter().take(rank).all(|d| d == &BigInt::from(1))
}

/// Coordinates of each vector of `vs` in the lattice basis `basis` (columns).
pub(crate) fn lattice_coordinates(basis: &IntegerMatrix, vs: &[Vec<BigInt>]) -> Option<Vec<Vec<BigInt>>> {
    let q = to_rational(basis);
    vs.iter()
        .map(|v| {
            let rv: Vec<BigRational> = v.iter().map(|x| BigRational::from_integer(x.clone())).collect();
            let sol = q.solve(&rv)?;
            sol.iter().all(|x| x.is_integer()).then(|| sol.iter().map(|x| x.to_integer()).collect())
        })
        .collect()
}
