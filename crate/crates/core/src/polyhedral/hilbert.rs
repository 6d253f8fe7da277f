use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::cone::{lattice_coordinates, Cone};
use crate::error::{Error, Result};
use crate::lattice::{
    kernel_basis, quotient_lattice, reduce_mod_lattice, smith_normal_form, to_rational, unimodular_inverse,
};
use crate::linalg::IntegerMatrix;

/// Largest simplicial-cone multiplicity whose parallelepiped is enumerated.
pub const MAX_PARALLELEPIPED: u64 = 2_000_000;

/// Minimal generating set of the semigroup `σ ∩ ℤⁿ`.
///
/// For cones with a lineality space the semigroup has units; the basis then
/// contains `±` a lattice basis of the lineality space together with lifts of
/// the Hilbert basis of the pointed quotient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemigroupBasis {
    pub ambient_rank: usize,
    #[serde(with = "crate::json::bigint_vecs")]
    pub elements: Vec<Vec<BigInt>>,
}

impl SemigroupBasis {
    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.elements.iter().any(|e| e.as_slice() == v)
    }
}

/// Hilbert basis of the lattice points of `cone` (not of its dual).
pub fn hilbert_basis(cone: &Cone) -> Result<SemigroupBasis> {
    let n = cone.ambient_rank();
    if cone.is_zero() {
        return Ok(SemigroupBasis { ambient_rank: n, elements: Vec::new() });
    }
    let lin = cone.lineality();
    let mut elements: Vec<Vec<BigInt>> = Vec::new();

    let pointed_elements = if lin.is_empty() {
        pointed_hilbert_basis(cone)?
    } else {
        let lin_matrix = IntegerMatrix::from_columns(lin, n);
        let (_, projection) = quotient_lattice(n, &lin_matrix)?;
        let snf = smith_normal_form(&lin_matrix);
        let u_inv = unimodular_inverse(&snf.u).expect("unimodular");
        let k = lin.len();
        let section = u_inv.select_columns(&(k..n).collect::<Vec<_>>());
        let image = cone.image(&projection)?;
        let lifted: Vec<Vec<BigInt>> =
            pointed_hilbert_basis(&image)?.iter().map(|h| reduce_mod_lattice(&section.mul_vec(h), lin)).collect();
        for l in lin {
            elements.push(l.clone());
            elements.push(l.iter().map(|x| -x.clone()).collect());
        }
        lifted
    };
    elements.extend(pointed_elements);
    elements.sort();
    elements.dedup();
    Ok(SemigroupBasis { ambient_rank: n, elements })
}

/// Hilbert basis of `σ^∨ ∩ M`.
pub fn dual_hilbert_basis(sigma: &Cone) -> Result<SemigroupBasis> {
    hilbert_basis(&super::cone::dual_cone(sigma))
}

fn pointed_hilbert_basis(cone: &Cone) -> Result<Vec<Vec<BigInt>>> {
    let n = cone.ambient_rank();
    if cone.is_zero() {
        return Ok(Vec::new());
    }
    // Pass to the saturated lattice span(σ) ∩ ℤⁿ so the cone is full-dimensional.
    let basis = if cone.equations().is_empty() {
        IntegerMatrix::identity(n)
    } else {
        kernel_basis(&IntegerMatrix::from_rows_with_cols(cone.equations().to_vec(), n))
    };
    let coords = lattice_coordinates(&basis, cone.rays()).expect("rays lie in the saturated span");
    let d = basis.cols();
    let local = Cone::new(d, coords)?;
    let rays = local.rays().to_vec();

    let mut simplices: Vec<Vec<usize>> = Vec::new();
    triangulate(d, &rays, (0..rays.len()).collect(), &mut simplices)?;

    let mut candidates: BTreeSet<Vec<BigInt>> = rays.iter().cloned().collect();
    for s in &simplices {
        let gens: Vec<Vec<BigInt>> = s.iter().map(|&i| rays[i].clone()).collect();
        candidates.extend(parallelepiped_points(d, &gens)?);
    }
    let candidates: Vec<Vec<BigInt>> = candidates.into_iter().filter(|v| v.iter().any(|x| !x.is_zero())).collect();
    let minimal: Vec<Vec<BigInt>> = candidates
        .iter()
        .filter(|x| {
            !candidates.iter().any(|y| {
                y != *x && {
                    let diff: Vec<BigInt> = x.iter().zip(y).map(|(a, b)| a - b).collect();
                    local.contains(&diff)
                }
            })
        })
        .cloned()
        .collect();
    Ok(minimal.iter().map(|c| basis.mul_vec(c)).collect())
}

/// Pulling triangulation of the pointed cone spanned by `rays[idx]`, without new rays.
fn triangulate(n: usize, rays: &[Vec<BigInt>], idx: Vec<usize>, out: &mut Vec<Vec<usize>>) -> Result<()> {
    let cone = Cone::new(n, idx.iter().map(|&i| rays[i].clone()).collect())?;
    let dim = cone.dim();
    if idx.len() == dim {
        out.push(idx);
        return Ok(());
    }
    let apex = *idx.iter().min_by(|&&a, &&b| rays[a].cmp(&rays[b])).expect("nonempty");
    for f in cone.facet_normals() {
        if crate::lattice::int_dot(f, &rays[apex]).is_zero() {
            continue;
        }
        let facet: Vec<usize> =
            idx.iter().copied().filter(|&i| crate::lattice::int_dot(f, &rays[i]).is_zero()).collect();
        let mut sub = Vec::new();
        triangulate(n, rays, facet, &mut sub)?;
        for mut s in sub {
            s.push(apex);
            s.sort_unstable();
            out.push(s);
        }
    }
    Ok(())
}

/// Nonzero lattice points `Σ λᵢ gᵢ` with `λᵢ ∈ [0, 1)`, for `d` independent generators in `ℤ^d`.
fn parallelepiped_points(d: usize, gens: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>> {
    let g = IntegerMatrix::from_columns(gens, d);
    let snf = smith_normal_form(&g);
    let diag = snf.diagonal();
    let volume: BigInt = diag.iter().product();
    match volume.abs().to_u64() {
        Some(v) if v <= MAX_PARALLELEPIPED => {}
        _ => {
            return Err(Error::TooLarge(format!(
                "simplicial cone of multiplicity {volume} exceeds the enumeration limit {MAX_PARALLELEPIPED}"
            )))
        }
    }
    if volume.is_one() {
        return Ok(Vec::new());
    }
    // ℤ^d / Gℤ^d ≅ ⊕ ℤ/dᵢ with representatives U⁻¹·c.
    let u_inv = unimodular_inverse(&snf.u).expect("unimodular");
    let g_inv = to_rational(&g).inverse().expect("independent generators");
    let mut out = Vec::new();
    let mut c: Vec<BigInt> = vec![BigInt::zero(); d];
    loop {
        let x = u_inv.mul_vec(&c);
        let xr: Vec<BigRational> = x.iter().map(|v| BigRational::from_integer(v.clone())).collect();
        let lambda = g_inv.mul_vec(&xr);
        let frac: Vec<BigRational> = lambda.iter().map(|l| l - l.floor()).collect();
        if frac.iter().any(|f| !f.is_zero()) {
            let p = to_rational(&g).mul_vec(&frac);
            out.push(p.iter().map(|v| v.to_integer()).collect());
        }
        // Odometer over 0 ≤ cᵢ < dᵢ.
        let mut i = 0;
        loop {
            if i == d {
                return Ok(out);
            }
            c[i] += 1;
            if c[i] < diag[i] {
                break;
            }
            c[i] = BigInt::zero();
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::int_vec;
    use crate::polyhedral::cone::dual_cone;

    fn hb(n: usize, gens: &[&[i64]]) -> Vec<Vec<BigInt>> {
        hilbert_basis(&Cone::from_i64(n, gens).unwrap()).unwrap().elements
    }

    #[test]
    fn orthant_is_free() {
        assert_eq!(hb(2, &[&[1, 0], &[0, 1]]), vec![int_vec(&[0, 1]), int_vec(&[1, 0])]);
    }

    #[test]
    fn two_dimensional_example() {
        assert_eq!(hb(2, &[&[0, 1], &[2, -1]]), vec![int_vec(&[0, 1]), int_vec(&[1, 0]), int_vec(&[2, -1])]);
    }

    #[test]
    fn dual_of_thin_cone_has_one_interior_element() {
        let sigma = Cone::from_i64(2, &[&[1, 0], &[1, 5]]).unwrap();
        let b = dual_hilbert_basis(&sigma).unwrap();
        let d = dual_cone(&sigma);
        let interior: Vec<_> = b.elements.iter().filter(|e| !d.rays().contains(e)).collect();
        assert_eq!(interior.len(), 1);
    }

    #[test]
    fn quadratic_cone_in_three_space() {
        // Cone over the unit square at height 1 with a non-unimodular triangulation.
        let b = hb(3, &[&[0, 0, 1], &[2, 0, 1], &[0, 2, 1], &[2, 2, 1]]);
        assert_eq!(b.len(), 9);
    }

    #[test]
    fn lineality_is_split_off() {
        assert_eq!(
            hb(2, &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]),
            vec![int_vec(&[-1, 0]), int_vec(&[0, -1]), int_vec(&[0, 1]), int_vec(&[1, 0])]
        );
        assert_eq!(hb(2, &[&[1, 0], &[-1, 0], &[1, 1]]), vec![int_vec(&[-1, 0]), int_vec(&[0, 1]), int_vec(&[1, 0])]);
    }

    #[test]
    fn lower_dimensional_cone_uses_saturated_span() {
        assert_eq!(
            hb(3, &[&[1, 0, 1], &[1, 2, 1]]),
            vec![int_vec(&[1, 0, 1]), int_vec(&[1, 1, 1]), int_vec(&[1, 2, 1])]
        );
    }
}
