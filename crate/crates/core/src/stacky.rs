//! Stacky fans `(Σ, β)`, the groups `G_β`, morphisms, fantastacks and DM tori.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{cokernel, dual_hom, hermite_rows, kernel_basis, smith_normal_form, FgAbelianGroup};
use crate::linalg::IntegerMatrix;
use crate::polyhedral::cone::lattice_coordinates;
use crate::polyhedral::{Cone, Fan};
use crate::report::Report;

/// Largest `n` for which the open-set description of a fantastack is checked
/// over all `2ⁿ` coordinate orbits.
pub const MAX_ORBIT_CHECK: usize = 20;

/// A fan `Σ` on `L` together with `β : L → N` of finite cokernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StackyFan {
    pub fan: Fan,
    pub beta: IntegerMatrix,
    pub n_rank: usize,
    pub cokernel: FgAbelianGroup,
}

/// `G_β = ker(T_L → T_N)`, described by its character group `coker(β*)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalizableGroup {
    pub character_group: FgAbelianGroup,
    /// One row per cyclic factor of the character group (torsion first, then
    /// free): the exponents of a character of `T_L` restricting to that generator.
    #[serde(serialize_with = "ser_matrix")]
    pub embedding_exponents: IntegerMatrix,
    /// Basis of `ker β`, the cocharacters of the identity component of `G_β`.
    #[serde(serialize_with = "ser_matrix")]
    pub cocharacters: IntegerMatrix,
}

fn ser_matrix<S: serde::Serializer>(m: &IntegerMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    crate::json::int_matrix_to_value(m).serialize(s)
}

impl DiagonalizableGroup {
    pub fn torus_rank(&self) -> usize {
        self.character_group.free_rank
    }

    pub fn component_group(&self) -> FgAbelianGroup {
        FgAbelianGroup { free_rank: 0, torsion: self.character_group.torsion.clone() }
    }
}

/// `Φ : L → L′` and `φ : N → N′`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StackyMorphism {
    pub big_phi: IntegerMatrix,
    pub phi: IntegerMatrix,
}

impl StackyMorphism {
    pub fn identity(sf: &StackyFan) -> Self {
        Self { big_phi: IntegerMatrix::identity(sf.fan.lattice_rank()), phi: IntegerMatrix::identity(sf.n_rank) }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &StackyMorphism) -> Self {
        Self { big_phi: &other.big_phi * &self.big_phi, phi: &other.phi * &self.phi }
    }
}

/// The fantastack `F_{Σ,β}` with `β : ℤⁿ → N`.
#[derive(Clone, Debug)]
pub struct Fantastack {
    pub base_fan: Fan,
    pub beta: IntegerMatrix,
    pub hat_fan: Fan,
    /// `{i : β(eᵢ) ∉ σ}` for each `σ ∈ Σ`, 1-based, deduplicated.
    pub ideal_generators: Vec<Vec<usize>>,
    /// Inclusion-minimal members of `ideal_generators`.
    pub minimal_ideal: Vec<Vec<usize>>,
    pub g_beta: DiagonalizableGroup,
    /// Coordinate orbits of `ℂⁿ ∖ V(I_Σ)` agree with the cones of `Σ̂`.
    pub open_set_verified: Option<bool>,
}

pub fn validate_stacky_fan(fan: Fan, beta: IntegerMatrix) -> Result<StackyFan> {
    if beta.cols() != fan.lattice_rank() {
        return Err(Error::Dimension(format!(
            "beta has {} columns, fan lattice rank is {}",
            beta.cols(),
            fan.lattice_rank()
        )));
    }
    let coker = cokernel(&beta);
    if !coker.is_finite() {
        return Err(Error::InfiniteCokernel { free_rank: coker.free_rank });
    }
    Ok(StackyFan { n_rank: beta.rows(), fan, beta, cokernel: coker })
}

pub fn g_beta(sf: &StackyFan) -> DiagonalizableGroup {
    group_of(&sf.beta)
}

fn group_of(beta: &IntegerMatrix) -> DiagonalizableGroup {
    let dual = dual_hom(beta);
    let snf = smith_normal_form(&dual);
    let diag = snf.diagonal();
    let l = dual.rows();
    let rows: Vec<usize> = (0..l).filter(|&i| i >= diag.len() || !diag[i].is_one()).collect();
    DiagonalizableGroup {
        character_group: cokernel(&dual),
        embedding_exponents: snf.u.select_rows(&rows),
        cocharacters: kernel_basis(beta),
    }
}

/// Checks `β′Φ = φβ` and that `Φ` carries every cone of `Σ` into a cone of `Σ′`.
pub fn validate_morphism(src: &StackyFan, dst: &StackyFan, m: &StackyMorphism) -> Report {
    let mut report = Report::new("stacky fan morphism");
    let shapes =
        [("Phi", &m.big_phi, dst.fan.lattice_rank(), src.fan.lattice_rank()), ("phi", &m.phi, dst.n_rank, src.n_rank)];
    let mut shapes_ok = true;
    for (name, mat, r, c) in shapes {
        if (mat.rows(), mat.cols()) != (r, c) {
            shapes_ok = false;
            report.fail("shapes", format!("{name} is {}x{}, expected {r}x{c}", mat.rows(), mat.cols()));
        }
    }
    if !shapes_ok {
        return report;
    }
    report.check("shapes", true, "Phi and phi have compatible sizes");

    let left = &dst.beta * &m.big_phi;
    let right = &m.phi * &src.beta;
    report.check(
        "square commutes",
        left == right,
        if left == right {
            "beta'.Phi = phi.beta".to_string()
        } else {
            format!("beta'.Phi = {left:?} but phi.beta = {right:?}")
        },
    );

    let mut contained = true;
    for sigma in src.fan.maximal_cones() {
        let image = match sigma.image(&m.big_phi) {
            Ok(c) => c,
            Err(e) => {
                contained = false;
                report.fail("cones map into cones", format!("{sigma}: {e}"));
                continue;
            }
        };
        if !dst.fan.maximal_cones().iter().any(|t| t.contains_cone(&image)) {
            contained = false;
            report.fail(
                "cones map into cones",
                format!("image of {sigma} is {image}, which lies in no cone of the target fan"),
            );
        }
    }
    if contained {
        report.check("cones map into cones", true, format!("{} maximal cones checked", src.fan.maximal_cones().len()));
    }
    report
}

pub fn build_fantastack(fan: Fan, beta: IntegerMatrix) -> Result<Fantastack> {
    let n_rank = fan.lattice_rank();
    if beta.rows() != n_rank {
        return Err(Error::Dimension(format!("beta has {} rows, fan lattice rank is {n_rank}", beta.rows())));
    }
    let coker = cokernel(&beta);
    if !coker.is_finite() {
        return Err(Error::InfiniteCokernel { free_rank: coker.free_rank });
    }
    let n = beta.cols();
    let images: Vec<Vec<BigInt>> = beta.to_columns();

    for ray in fan.cones_of_dim(1) {
        if !images.iter().any(|b| b.iter().any(|x| !x.is_zero()) && ray.contains(b)) {
            return Err(Error::FantastackPrecondition(format!("ray {ray} contains no beta(e_i)")));
        }
    }
    for (i, b) in images.iter().enumerate() {
        if !fan.maximal_cones().iter().any(|c| c.contains(b)) {
            return Err(Error::FantastackPrecondition(format!(
                "beta(e_{}) = ({}) is outside the support of the fan",
                i + 1,
                b.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
            )));
        }
    }

    let mut hat_cones = Vec::new();
    let mut ideal: BTreeSet<Vec<usize>> = BTreeSet::new();
    for sigma in fan.all_cones() {
        let inside: Vec<usize> = (0..n).filter(|&i| sigma.contains(&images[i])).collect();
        hat_cones.push(Cone::coordinate(n, &inside));
        ideal.insert((0..n).filter(|i| !inside.contains(i)).map(|i| i + 1).collect());
    }
    let hat_fan = Fan::new(n, hat_cones)?;
    let ideal_generators: Vec<Vec<usize>> = ideal.into_iter().collect();
    let minimal_ideal = minimal_monomials(&ideal_generators);
    let open_set_verified = (n <= MAX_ORBIT_CHECK).then(|| open_set_matches(n, &hat_fan, &minimal_ideal));

    Ok(Fantastack {
        g_beta: group_of(&beta),
        base_fan: fan,
        beta,
        hat_fan,
        ideal_generators,
        minimal_ideal,
        open_set_verified,
    })
}

/// Squarefree monomials (as index sets) not divisible by another member.
pub fn minimal_monomials(gens: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> =
        gens.iter().filter(|g| !gens.iter().any(|h| h != *g && h.iter().all(|i| g.contains(i)))).cloned().collect();
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    out.dedup();
    out
}

/// The orbit of `ℂⁿ` where exactly the coordinates in `S` vanish lies outside
/// `V(I)` iff some generator avoids `S`; it is an orbit of `X_Σ̂` iff `cone(e_S) ∈ Σ̂`.
fn open_set_matches(n: usize, hat_fan: &Fan, ideal: &[Vec<usize>]) -> bool {
    (0u64..1 << n).all(|mask| {
        let s: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let outside_v = ideal.iter().any(|m| m.iter().all(|i| !s.contains(&(i - 1))));
        outside_v == hat_fan.contains(&Cone::coordinate(n, &s))
    })
}

/// Kernel and cokernel of a homomorphism `φ : A → B` of finitely generated
/// abelian groups, given in invariant-factor coordinates (torsion generators
/// first, then free ones).
pub fn hom_kernel_cokernel(
    phi: &IntegerMatrix,
    src: &FgAbelianGroup,
    dst: &FgAbelianGroup,
) -> Result<(FgAbelianGroup, FgAbelianGroup)> {
    let (ga, gb) = (src.generator_count(), dst.generator_count());
    if (phi.rows(), phi.cols()) != (gb, ga) {
        return Err(Error::Dimension(format!("phi is {}x{}, expected {gb}x{ga}", phi.rows(), phi.cols())));
    }
    let ra = src.relation_matrix();
    let rb = dst.relation_matrix();
    // Well-definedness: φ sends the relations of A into those of B.
    let stacked = phi.hstack(&rb);
    if !(phi * &ra).to_columns().iter().all(|col| rb_contains(&rb, col)) {
        return Err(Error::Input("phi does not respect the torsion relations of the source".into()));
    }
    let coker = cokernel(&stacked);

    // ker φ = {x : φx ∈ im R_B} / im R_A.
    let k = kernel_basis(&stacked);
    let projected: Vec<Vec<BigInt>> = k.to_columns().into_iter().map(|c| c[..ga].to_vec()).collect();
    let basis = hermite_rows(&projected);
    if basis.is_empty() {
        return Ok((FgAbelianGroup::trivial(), coker));
    }
    let basis_m = IntegerMatrix::from_columns(&basis, ga);
    let coords = lattice_coordinates(&basis_m, &ra.to_columns()).expect("relations lie in the kernel");
    let rel = IntegerMatrix::from_columns(&coords, basis.len());
    Ok((cokernel(&rel), coker))
}

fn rb_contains(rb: &IntegerMatrix, v: &[BigInt]) -> bool {
    (0..v.len()).all(|i| {
        if i < rb.cols() {
            let d = rb.get(i, i);
            (&v[i] % d).is_zero()
        } else {
            v[i].is_zero()
        }
    })
}

/// `ker φ` free and `coker φ` finite; reports the decomposition `T × BG`.
pub fn dm_torus_validate(phi: &IntegerMatrix, src: &FgAbelianGroup, dst: &FgAbelianGroup) -> Report {
    let mut report = Report::new("DM torus");
    let (ker, coker) = match hom_kernel_cokernel(phi, src, dst) {
        Ok(kc) => kc,
        Err(e) => {
            report.fail("homomorphism", e.to_string());
            return report;
        }
    };
    report.check("kernel free", ker.is_free(), format!("ker = {ker}"));
    report.check("cokernel finite", coker.is_finite(), format!("coker = {coker}"));
    if report.passed {
        // T = Hom(ker φ, C*), G = Hom(coker φ, C*) ≅ coker φ.
        report.check("decomposition", true, format!("T x BG with torus rank {} and G = {coker}", ker.free_rank));
    }
    report
}
