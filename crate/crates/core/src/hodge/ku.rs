use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::lattice::{cokernel, to_integer, to_rational};
use crate::linalg::{IntegerMatrix, RationalMatrix};
use crate::polyhedral::{fan_validate, Cone, Fan};
use crate::report::Report;
use crate::stacky::{build_fantastack, validate_stacky_fan, Fantastack, StackyFan};

use super::gamma::{gamma_monoid, GammaMonoid};
use super::nilpotent::{validate_nilpotent_cone, NilpotentCone};

/// The triple `(D_M, e : Σ_ℤ → 𝔪_ℤ, Σ)` attached to a nilpotent cone.
#[derive(Clone, Debug)]
pub struct KuStackyTriple {
    /// `e`, with column `j` the coordinates of `N_j` in the basis of `𝔪_ℤ`.
    pub embedding: IntegerMatrix,
    /// All faces of the orthant in `Σ_ℤ = ℤ^r`.
    pub cone_fan: Fan,
    /// Faces of `e(σ)` in `𝔪_ℤ`.
    pub image_fan: Fan,
    pub gamma: GammaMonoid,
    pub stacky: Option<StackyFan>,
    pub fantastack: Option<Fantastack>,
    pub report: Report,
}

/// `m_lattice` lists a basis `M_1, …, M_k` of `𝔪_ℤ` as `dim × dim` matrices.
pub fn build_ku_stacky_triple(c: &NilpotentCone, m_lattice: &[RationalMatrix]) -> Result<KuStackyTriple> {
    let d = c.dim;
    let r = c.rank();
    let k = m_lattice.len();
    if let Some(bad) = m_lattice.iter().position(|m| m.rows() != d || m.cols() != d) {
        return Err(Error::Dimension(format!("m_lattice element {} is not {d}x{d}", bad + 1)));
    }
    let cone_report = validate_nilpotent_cone(c, None);
    if !cone_report.passed {
        let why: Vec<String> = cone_report.failures().map(|f| format!("{}: {}", f.name, f.detail)).collect();
        return Err(Error::Input(format!("invalid nilpotent cone: {}", why.join("; "))));
    }
    let basis_cols: Vec<Vec<BigRational>> = m_lattice.iter().map(|m| m.entries().to_vec()).collect();
    let basis = RationalMatrix::from_columns(&basis_cols, d * d);
    if k > 0 && basis.rank() != k {
        return Err(Error::Input("m_lattice elements are linearly dependent".into()));
    }
    let mut columns: Vec<Vec<BigInt>> = Vec::new();
    for (j, n) in c.generators.iter().enumerate() {
        let coeff = if k == 0 { None } else { basis.solve(n.entries()) };
        let coeff = coeff.ok_or_else(|| Error::NotInSpan(format!("N_{} is not in the span of m_lattice", j + 1)))?;
        let as_int = to_integer(&RationalMatrix::from_columns(std::slice::from_ref(&coeff), k))
            .ok_or_else(|| Error::NotInSpan(format!("N_{} has non-integral coordinates in m_lattice", j + 1)))?;
        columns.push(as_int.column(0));
    }
    let embedding = IntegerMatrix::from_columns(&columns, k);

    let orthant = Cone::coordinate(r, &(0..r).collect::<Vec<_>>());
    let cone_fan = Fan::from_cone(orthant.clone());
    let image_fan = Fan::from_cone(orthant.image(&embedding)?);
    let gamma = gamma_monoid(c)?;

    let mut report = Report::new("nilpotent cone triple");
    let injective = r == 0 || to_rational(&embedding).rank() == r;
    report.check(
        "e injective",
        injective,
        format!("rank {} of {r}", if r == 0 { 0 } else { to_rational(&embedding).rank() }),
    );
    report.absorb("cone fan", &fan_validate(&cone_fan));
    report.check(
        "Gamma(sigma)^gp = Sigma_Z",
        gamma.lattice.index == BigInt::from(1),
        format!("index of Sigma_Z in the integral-logarithm lattice is {}", gamma.lattice.index),
    );

    let coker = cokernel(&embedding);
    let stacky = validate_stacky_fan(cone_fan.clone(), embedding.clone()).ok();
    report.check(
        "stacky fan: coker(e) finite",
        stacky.is_some(),
        if stacky.is_some() {
            format!("coker(e) = {coker}")
        } else {
            format!("coker(e) = {coker} has free rank {}", coker.free_rank)
        },
    );
    let fantastack = match build_fantastack(image_fan.clone(), embedding.clone()) {
        Ok(f) => {
            report.check(
                "fantastack: rays and support",
                true,
                format!("G_beta has character group {}", f.g_beta.character_group),
            );
            Some(f)
        }
        Err(Error::InfiniteCokernel { free_rank }) => {
            report.fail("fantastack: rays and support", format!("not reached, coker(e) has free rank {free_rank}"));
            None
        }
        Err(e) => {
            report.fail("fantastack: rays and support", e.to_string());
            None
        }
    };
    let forms = stacky.is_some() && fantastack.is_some();
    report.check(
        "triple forms a toric fantastack",
        forms,
        if forms {
            "every stacky fan and fantastack condition holds".to_string()
        } else {
            format!("claimed, but fails for this lattice: coker(e) = {coker} must be finite")
        },
    );
    Ok(KuStackyTriple { embedding, cone_fan, image_fan, gamma, stacky, fantastack, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::int_matrix;

    fn rm(rows: &[&[i64]]) -> RationalMatrix {
        to_rational(&int_matrix(rows))
    }

    fn e() -> RationalMatrix {
        rm(&[&[0, 1], &[0, 0]])
    }

    #[test]
    fn rank_one_lattice() {
        let c = NilpotentCone::new(2, vec![e()], None).unwrap();
        let t = build_ku_stacky_triple(&c, &[e()]).unwrap();
        assert!(t.report.passed, "{}", t.report);
        assert_eq!(t.embedding, int_matrix(&[&[1]]));
        assert!(t.stacky.unwrap().cokernel.is_trivial());
        assert!(t.fantastack.unwrap().g_beta.character_group.is_trivial());
    }

    #[test]
    fn full_sl2_lattice_has_infinite_cokernel() {
        let c = NilpotentCone::new(2, vec![e()], None).unwrap();
        let sl2 = [e(), rm(&[&[1, 0], &[0, -1]]), rm(&[&[0, 0], &[1, 0]])];
        let t = build_ku_stacky_triple(&c, &sl2).unwrap();
        assert!(!t.report.passed);
        assert!(t.report.find("e injective").unwrap().passed);
        let fin = t.report.find("stacky fan: coker(e) finite").unwrap();
        assert!(!fin.passed && fin.detail.contains("free rank 2"));
        assert!(!t.report.find("triple forms a toric fantastack").unwrap().passed);
    }

    #[test]
    fn generator_outside_lattice() {
        let c = NilpotentCone::new(2, vec![e()], None).unwrap();
        let h = rm(&[&[1, 0], &[0, -1]]);
        assert!(matches!(build_ku_stacky_triple(&c, &[h]), Err(Error::NotInSpan(_))));
        let doubled = rm(&[&[0, 2], &[0, 0]]);
        assert!(matches!(build_ku_stacky_triple(&c, &[doubled]), Err(Error::NotInSpan(_))));
    }
}
