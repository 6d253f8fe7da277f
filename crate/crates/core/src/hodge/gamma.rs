use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{
    image_basis, integer_determinant, primitive_from_rational, smith_normal_form, to_integer, unimodular_inverse,
};
use crate::linalg::{IntegerMatrix, RationalMatrix, Subspace};
use crate::polyhedral::{dual_hilbert_basis, hilbert_basis, Cone, Fan, SemigroupBasis};
use crate::report::Report;

use super::nilpotent::{exp_nilpotent, validate_nilpotent_cone, NilpotentCone};

/// Largest index `[L₀ : ℤ^r]` of the candidate lattice scanned for integral exponentials.
pub const MAX_LOG_COSETS: u64 = 1_000_000;

/// `L = {c ∈ ℚ^r : exp(Σ c_j N_j) integral}`, a lattice containing `ℤ^r`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogLattice {
    /// Columns form a basis of `L` in the coordinates `c`.
    pub basis: RationalMatrix,
    /// `[L : ℤ^r]`.
    pub index: BigInt,
}

impl LogLattice {
    /// Coordinates of `c` in the basis of `L`.
    pub fn coordinates(&self, c: &[BigRational]) -> Vec<BigRational> {
        self.basis.solve(c).expect("full rank basis")
    }

    /// A rational cone in `c`-coordinates, rewritten in `L`-coordinates.
    pub fn cone_in_lattice(&self, generators: &[Vec<BigRational>]) -> Result<Cone> {
        let r = self.basis.rows();
        Cone::new(r, generators.iter().map(|g| primitive_from_rational(&self.coordinates(g))).collect())
    }
}

/// `log Γ(σ) = σ ∩ L` for the orthant `σ` spanned by the `N_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaMonoid {
    pub rank: usize,
    pub lattice: LogLattice,
    /// Hilbert basis of `σ ∩ L`, as coefficient vectors `c`.
    pub hilbert_basis: Vec<Vec<BigRational>>,
    /// `exp(Σ c_j N_j)` for each Hilbert basis element.
    pub unipotent_generators: Vec<IntegerMatrix>,
    /// Hilbert basis of `σ^∨ ∩ L^∨` in the dual basis of `L`; the chart is `Spec ℂ[Γ(σ)^∨]`.
    pub dual_basis: SemigroupBasis,
    /// Rank of `Γ(σ)^gp`, the torus `𝔾_m ⊗ Γ(σ)^gp` has this dimension.
    pub group_rank: usize,
}

fn lcm_up_to(n: usize) -> BigInt {
    (1..=n.max(1)).fold(BigInt::one(), |acc, k| acc.lcm(&BigInt::from(k)))
}

/// Smallest `k` such that every product of `k` elements of the span of the generators vanishes.
fn nilpotency_order(c: &NilpotentCone) -> usize {
    let d = c.dim;
    let unflatten = |v: &Vec<BigRational>| RationalMatrix::from_rows(v.chunks(d).map(<[_]>::to_vec).collect());
    let span = |ms: Vec<Vec<BigRational>>| -> Vec<RationalMatrix> {
        Subspace::span(d * d, &ms).basis().iter().map(unflatten).collect()
    };
    let mut level = span(c.generators.iter().map(|n| n.entries().to_vec()).collect());
    let mut k = 1;
    while !level.is_empty() {
        level = span(level.iter().flat_map(|p| c.generators.iter().map(move |n| (n * p).entries().to_vec())).collect());
        k += 1;
    }
    k
}

fn common_denominator<'a>(xs: impl Iterator<Item = &'a BigRational>) -> BigInt {
    xs.fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

fn q(x: BigInt) -> BigRational {
    BigRational::from_integer(x)
}

fn require_cone(c: &NilpotentCone) -> Result<()> {
    let r = validate_nilpotent_cone(c, None);
    if let Some(f) = r.failures().find(|f| f.name != "form preserved") {
        return Err(match f.name.as_str() {
            "nilpotent" => Error::NotNilpotent(f.detail.clone()),
            _ => Error::Input(format!("{}: {}", f.name, f.detail)),
        });
    }
    Ok(())
}

pub fn log_lattice(c: &NilpotentCone) -> Result<LogLattice> {
    require_cone(c)?;
    let r = c.rank();
    let d = c.dim;
    for (j, n) in c.generators.iter().enumerate() {
        let e = exp_nilpotent(n)?;
        if to_integer(&e).is_none() {
            return Err(Error::NonIntegralExponential(format!("generator N_{}: exp(N_{}) = {e}", j + 1, j + 1)));
        }
    }
    if r == 0 {
        return Ok(LogLattice { basis: RationalMatrix::zeros(0, 0), index: BigInt::one() });
    }

    // L ⊆ L₀ = {c : Σ c_j N_j ∈ (1/m)·M_d(ℤ)} with m = lcm(1, …, k−1), k the nilpotency order.
    let m = q(lcm_up_to(nilpotency_order(c) - 1));
    let cols: Vec<Vec<BigRational>> =
        c.generators.iter().map(|n| n.entries().iter().map(|x| x * &m).collect()).collect();
    let den = common_denominator(cols.iter().flatten());
    let b = IntegerMatrix::from_columns(
        &cols.iter().map(|v| v.iter().map(|x| (x * q(den.clone())).to_integer()).collect()).collect::<Vec<_>>(),
        d * d,
    );
    // U·B·V = diag(s); B·c ∈ den·ℤ iff (V⁻¹c)_i ∈ (den/s_i)·ℤ.
    let snf = smith_normal_form(&b);
    let s = snf.diagonal();
    let l0 =
        RationalMatrix::from_fn(r, r, |i, j| q(snf.v.get(i, j).clone()) * BigRational::new(den.clone(), s[j].clone()));

    // ℤ^r inside L₀: integer coordinates K = L₀⁻¹.
    let k = to_integer(&l0.inverse().expect("independent generators")).ok_or_else(|| {
        Error::NonIntegralExponential("generators are not in the lattice of integral logarithms".into())
    })?;
    let count = integer_determinant(&k).abs();
    if count.to_u64().is_none_or(|n| n > MAX_LOG_COSETS) {
        return Err(Error::TooLarge(format!(
            "{count} candidate cosets for integral logarithms exceeds {MAX_LOG_COSETS}"
        )));
    }
    let ks = smith_normal_form(&k);
    let kd = ks.diagonal();
    let u_inv = unimodular_inverse(&ks.u).expect("unimodular");

    let mut extra: Vec<Vec<BigRational>> = Vec::new();
    let mut digits = vec![BigInt::zero(); r];
    loop {
        let x = u_inv.mul_vec(&digits);
        let coeff: Vec<BigRational> = l0.mul_vec(&x.iter().cloned().map(q).collect::<Vec<_>>());
        if coeff.iter().any(|v| !v.is_integer()) {
            let e = exp_nilpotent(&c.combination(&coeff))?;
            if to_integer(&e).is_some() {
                extra.push(coeff);
            }
        }
        let mut pos = 0;
        loop {
            if pos == r {
                return Ok(assemble(r, extra));
            }
            digits[pos] += 1;
            if digits[pos] < kd[pos] {
                break;
            }
            digits[pos] = BigInt::zero();
            pos += 1;
        }
    }
}

fn assemble(r: usize, extra: Vec<Vec<BigRational>>) -> LogLattice {
    let den = common_denominator(extra.iter().flatten());
    let mut gens: Vec<Vec<BigInt>> =
        (0..r).map(|i| (0..r).map(|j| if i == j { den.clone() } else { BigInt::zero() }).collect()).collect();
    gens.extend(extra.iter().map(|v| v.iter().map(|x| (x * q(den.clone())).to_integer()).collect()));
    let basis = image_basis(&IntegerMatrix::from_columns(&gens, r));
    let basis = RationalMatrix::from_columns(
        &basis.iter().map(|v| v.iter().map(|x| BigRational::new(x.clone(), den.clone())).collect()).collect::<Vec<_>>(),
        r,
    );
    let index = (BigRational::one() / basis.determinant()).abs().to_integer();
    LogLattice { basis, index }
}

pub fn gamma_monoid(c: &NilpotentCone) -> Result<GammaMonoid> {
    let lattice = log_lattice(c)?;
    let r = c.rank();
    if r == 0 {
        return Ok(GammaMonoid {
            rank: 0,
            lattice,
            hilbert_basis: Vec::new(),
            unipotent_generators: Vec::new(),
            dual_basis: SemigroupBasis { ambient_rank: 0, elements: Vec::new() },
            group_rank: 0,
        });
    }
    let orthant: Vec<Vec<BigRational>> = (0..r)
        .map(|i| (0..r).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    let cone = lattice.cone_in_lattice(&orthant)?;
    let hb = hilbert_basis(&cone)?;
    let mut coeffs: Vec<Vec<BigRational>> =
        hb.elements.iter().map(|h| lattice.basis.mul_vec(&h.iter().cloned().map(q).collect::<Vec<_>>())).collect();
    coeffs.sort();
    let unipotent_generators = coeffs
        .iter()
        .map(|cf| {
            to_integer(&exp_nilpotent(&c.combination(cf))?)
                .ok_or_else(|| Error::NonIntegralExponential("Hilbert basis element".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GammaMonoid {
        rank: r,
        dual_basis: dual_hilbert_basis(&cone)?,
        group_rank: cone.dim(),
        lattice,
        hilbert_basis: coeffs,
        unipotent_generators,
    })
}

fn matrix_text(m: &RationalMatrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| format!("[{}]", m.row(i).iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

/// `Ad(γ)σ ∈ Σ` for each sampled `γ` and `σ ∈ Σ`, and `σ_ℝ = ℝ≥0⟨log Γ(σ)⟩`.
/// The fan lives in the coefficient lattice `ℤ^r` of the generators.
pub fn check_strong_compatibility(c: &NilpotentCone, fan: &Fan, gamma_sample: &[IntegerMatrix]) -> Result<Report> {
    let r = c.rank();
    let d = c.dim;
    if fan.lattice_rank() != r {
        return Err(Error::Dimension(format!(
            "fan has lattice rank {}, the cone has {r} generators",
            fan.lattice_rank()
        )));
    }
    let mut inverses = Vec::new();
    for (t, g) in gamma_sample.iter().enumerate() {
        if g.rows() != d || g.cols() != d {
            return Err(Error::Dimension(format!("gamma_{} is {}x{}, expected {d}x{d}", t + 1, g.rows(), g.cols())));
        }
        let inv = unimodular_inverse(g).ok_or_else(|| Error::NotInvertible(format!("gamma_{}", t + 1)))?;
        inverses.push(inv);
    }
    let lattice = log_lattice(c)?;
    let mut report = Report::new("strong compatibility");

    let mut thin = Vec::new();
    for sigma in fan.all_cones() {
        let gens: Vec<Vec<BigRational>> =
            sigma.generators().iter().map(|g| g.iter().cloned().map(q).collect()).collect();
        let hb = hilbert_basis(&lattice.cone_in_lattice(&gens)?)?;
        let span = if hb.elements.is_empty() {
            0
        } else {
            crate::lattice::to_rational(&IntegerMatrix::from_rows_with_cols(hb.elements.clone(), r)).rank()
        };
        if span != sigma.dim() {
            thin.push(format!("{sigma}: log Gamma spans dimension {span}"));
        }
    }
    report.check(
        "cones generated by log Gamma",
        thin.is_empty(),
        if thin.is_empty() { format!("{} cones", fan.all_cones().len()) } else { thin.join("; ") },
    );

    for (t, (g, inv)) in gamma_sample.iter().zip(&inverses).enumerate() {
        let gq = crate::lattice::to_rational(g);
        let iq = crate::lattice::to_rational(inv);
        let mut bad = Vec::new();
        'cones: for sigma in fan.all_cones() {
            let mut image = Vec::new();
            for gen in sigma.generators() {
                let n = c.combination(&gen.iter().cloned().map(q).collect::<Vec<_>>());
                let conj = &(&gq * &n) * &iq;
                match c.coefficients(&conj) {
                    Some(cf) => image.push(primitive_from_rational(&cf)),
                    None => {
                        bad.push(format!(
                            "{sigma}: Ad(gamma) sends a generator to {} outside the span",
                            matrix_text(&conj)
                        ));
                        continue 'cones;
                    }
                }
            }
            let cone = Cone::new(r, image)?;
            if !fan.contains(&cone) {
                bad.push(format!("{sigma} maps to {cone}, not a cone of the fan"));
            }
        }
        report.check(
            format!("Ad(gamma_{})", t + 1),
            bad.is_empty(),
            if bad.is_empty() { "every cone maps to a cone of the fan".into() } else { bad.join("; ") },
        );
    }
    report.check("scope", true, format!("verified for the provided sample of {} elements", gamma_sample.len()));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{int_matrix, int_vec, to_rational};

    fn cone_of(mats: &[&[&[i64]]]) -> NilpotentCone {
        let d = mats.first().map_or(2, |m| m.len());
        NilpotentCone::new(d, mats.iter().map(|m| to_rational(&int_matrix(m))).collect(), None).unwrap()
    }

    #[test]
    fn single_jordan_block_gives_naturals() {
        let g = gamma_monoid(&cone_of(&[&[&[0, 1], &[0, 0]]])).unwrap();
        assert_eq!(g.hilbert_basis, vec![vec![BigRational::one()]]);
        assert_eq!(g.unipotent_generators, vec![int_matrix(&[&[1, 1], &[0, 1]])]);
        assert_eq!(g.group_rank, 1);
        assert_eq!(g.dual_basis.elements, vec![int_vec(&[1])]);
    }

    #[test]
    fn two_blocks_give_free_monoid() {
        let n1: &[&[i64]] = &[&[0, 1, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0]];
        let n2: &[&[i64]] = &[&[0, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 0, 0]];
        let g = gamma_monoid(&cone_of(&[n1, n2])).unwrap();
        assert_eq!(g.hilbert_basis.len(), 2);
        assert_eq!(g.lattice.index, BigInt::one());
        assert_eq!(g.dual_basis.elements.len(), 2);
    }

    #[test]
    fn half_integral_logarithms_enlarge_the_lattice() {
        // N = [[0,2,0],[0,0,2],[0,0,0]]: exp(N/2) = [[1,1,1/2], …] is not integral, exp(N) is.
        let n = cone_of(&[&[&[0, 2, 0], &[0, 0, 2], &[0, 0, 0]]]);
        assert_eq!(log_lattice(&n).unwrap().index, BigInt::one());
        // N = [[0,2,0],[0,0,1],[0,0,0]]: exp(N/2) = [[1,1,1/2],…] fails too; exp(N) = [[1,2,1],[0,1,1],[0,0,1]].
        let m = cone_of(&[&[&[0, 2, 0], &[0, 0, 1], &[0, 0, 0]]]);
        assert_eq!(log_lattice(&m).unwrap().index, BigInt::one());
        // N = [[0,2],[0,0]]: exp(N/2) integral, so L = ½ℤ.
        let h = gamma_monoid(&cone_of(&[&[&[0, 2], &[0, 0]]])).unwrap();
        assert_eq!(h.lattice.index, BigInt::from(2));
        assert_eq!(h.hilbert_basis, vec![vec![BigRational::new(1.into(), 2.into())]]);
    }

    #[test]
    fn non_integral_exponential_is_reported() {
        let n = NilpotentCone::new(
            2,
            vec![RationalMatrix::from_rows(vec![
                vec![BigRational::zero(), BigRational::new(1.into(), 2.into())],
                vec![BigRational::zero(), BigRational::zero()],
            ])],
            None,
        )
        .unwrap();
        match gamma_monoid(&n) {
            Err(Error::NonIntegralExponential(msg)) => assert!(msg.contains("N_1")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn compatibility_samples() {
        let c = cone_of(&[&[&[0, 1], &[0, 0]]]);
        let fan = Fan::from_cone(Cone::from_i64(1, &[&[1]]).unwrap());
        let id = IntegerMatrix::identity(2);
        let exp_n = int_matrix(&[&[1, 1], &[0, 1]]);
        assert!(check_strong_compatibility(&c, &fan, &[id, exp_n]).unwrap().passed);
        let flip = int_matrix(&[&[-1, 0], &[0, 1]]);
        let r = check_strong_compatibility(&c, &fan, &[flip]).unwrap();
        assert!(!r.passed);
        assert!(r.find("Ad(gamma_1)").unwrap().detail.contains("cone[(-1)]"), "{r}");
        let swap = int_matrix(&[&[0, 1], &[1, 0]]);
        assert!(!check_strong_compatibility(&c, &fan, &[swap]).unwrap().passed);
        let singular = int_matrix(&[&[2, 0], &[0, 1]]);
        assert!(matches!(check_strong_compatibility(&c, &fan, &[singular]), Err(Error::NotInvertible(_))));
    }
}
