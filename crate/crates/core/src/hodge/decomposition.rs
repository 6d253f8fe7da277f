use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::linalg::ComplexMatrix;

use super::structure::{validate_hodge, PolarizedHodgeData};

/// `𝔤_ℂ = ⊕ᵢ 𝔤^{−i,i}` for `𝔤 = {X : XᵀQ + QX = 0}`, where `X ∈ 𝔤^{−i,i}`
/// maps each `V^{p,q}` into `V^{p−i,q+i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct EndomorphismDecomposition {
    /// Keyed by `i`.
    pub pieces: BTreeMap<i64, Vec<ComplexMatrix>>,
}

impl EndomorphismDecomposition {
    pub fn dim(&self, i: i64) -> usize {
        self.pieces.get(&i).map_or(0, Vec::len)
    }

    pub fn total_dim(&self) -> usize {
        self.pieces.values().map(Vec::len).sum()
    }

    /// `dim T_φD = Σ_{i>0} dim 𝔤^{−i,i}`.
    pub fn tangent_dim(&self) -> usize {
        self.pieces.iter().filter(|(&i, _)| i > 0).map(|(_, v)| v.len()).sum()
    }

    /// Complex dimension of `𝔤^{0,0}`, the real dimension of the stabilizer algebra.
    pub fn stabilizer_dim(&self) -> usize {
        self.dim(0)
    }
}

fn require_valid(h: &PolarizedHodgeData) -> Result<()> {
    let r = validate_hodge(h);
    if r.passed {
        Ok(())
    } else {
        let why: Vec<String> = r.failures().map(|c| format!("{}: {}", c.name, c.detail)).collect();
        Err(Error::InvalidHodge(why.join("; ")))
    }
}

pub fn endomorphism_decomposition(h: &PolarizedHodgeData) -> Result<EndomorphismDecomposition> {
    require_valid(h)?;
    let d = h.dim;
    let Some((lo, hi)) = h.level_range() else {
        return Ok(EndomorphismDecomposition { pieces: BTreeMap::new() });
    };

    // Adapted basis: columns of P run through V^{hi}, …, V^{lo}.
    let mut columns = Vec::new();
    let mut level = Vec::new();
    for p in (lo..=hi).rev() {
        for v in h.hodge_component(p).basis() {
            columns.push(v.clone());
            level.push(p);
        }
    }
    let p_mat = ComplexMatrix::from_columns(&columns, d);
    let p_inv = p_mat.inverse().expect("Hodge components span V");
    let q = h.q_complex();

    let mut pieces = BTreeMap::new();
    for i in (lo - hi)..=(hi - lo) {
        // X = P·Y·P⁻¹ with Y supported on entries (a, b) where level[a] = level[b] − i.
        let slots: Vec<(usize, usize)> =
            (0..d).flat_map(|a| (0..d).map(move |b| (a, b))).filter(|&(a, b)| level[a] == level[b] - i).collect();
        if slots.is_empty() {
            continue;
        }
        let elementary: Vec<ComplexMatrix> = slots
            .iter()
            .map(|&(a, b)| {
                let col = p_mat.column(a);
                let row = p_inv.row(b).to_vec();
                ComplexMatrix::from_fn(d, d, |r, c| col[r].clone() * row[c].clone())
            })
            .collect();
        let images: Vec<Vec<GaussianRational>> =
            elementary.iter().map(|x| (&(&x.transpose() * &q) + &(&q * x)).entries().to_vec()).collect();
        let system = ComplexMatrix::from_columns(&images, d * d);
        let basis: Vec<ComplexMatrix> = system
            .nullspace()
            .into_iter()
            .map(|coef| coef.iter().zip(&elementary).fold(ComplexMatrix::zeros(d, d), |acc, (c, e)| &acc + &e.scale(c)))
            .collect();
        if !basis.is_empty() {
            pieces.insert(i, basis);
        }
    }
    Ok(EndomorphismDecomposition { pieces })
}

/// `𝔤^{−1,1}`, the horizontal directions, against the full tangent space.
#[derive(Clone, Debug, PartialEq)]
pub struct IprFiber {
    pub basis: Vec<ComplexMatrix>,
    pub dim: usize,
    pub tangent_dim: usize,
}

pub fn ipr_fiber(h: &PolarizedHodgeData) -> Result<IprFiber> {
    let e = endomorphism_decomposition(h)?;
    let basis = e.pieces.get(&1).cloned().unwrap_or_default();
    Ok(IprFiber { dim: basis.len(), basis, tangent_dim: e.tangent_dim() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{int_matrix, to_rational};
    use num_traits::One;

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_ints(re, im)
    }

    fn curve() -> PolarizedHodgeData {
        PolarizedHodgeData::new(
            2,
            1,
            to_rational(&int_matrix(&[&[0, 1], &[-1, 0]])),
            BTreeMap::from([((1, 0), 1), ((0, 1), 1)]),
            BTreeMap::from([(1, vec![vec![GaussianRational::i(), GaussianRational::one()]])]),
        )
        .unwrap()
    }

    #[test]
    fn weight_one_rank_two() {
        let e = endomorphism_decomposition(&curve()).unwrap();
        assert_eq!((e.dim(-1), e.dim(0), e.dim(1)), (1, 1, 1));
        assert_eq!(e.tangent_dim(), 1);
        let f = ipr_fiber(&curve()).unwrap();
        assert_eq!((f.dim, f.tangent_dim), (1, 1));
    }

    #[test]
    fn pieces_shift_hodge_components() {
        let h = curve();
        let e = endomorphism_decomposition(&h).unwrap();
        for (&i, basis) in &e.pieces {
            for x in basis {
                for p in 0..=1 {
                    let target = h.hodge_component(p - i);
                    for v in h.hodge_component(p).basis() {
                        assert!(target.contains(&x.mul_vec(v)));
                    }
                }
            }
        }
    }

    #[test]
    fn weight_two_surface_type() {
        let q = to_rational(&int_matrix(&[&[0, 0, 1], &[0, -1, 0], &[1, 0, 0]]));
        let f2 = vec![g(1, 0), g(0, 2), g(-2, 0)];
        let f1 = vec![f2.clone(), vec![g(1, 0), g(0, 0), g(2, 0)]];
        let h = PolarizedHodgeData::new(
            3,
            2,
            q,
            BTreeMap::from([((2, 0), 1), ((1, 1), 1), ((0, 2), 1)]),
            BTreeMap::from([(2, vec![f2]), (1, f1)]),
        )
        .unwrap();
        let e = endomorphism_decomposition(&h).unwrap();
        assert_eq!(e.dim(2), 0);
        assert_eq!(e.dim(1), 1);
        assert_eq!(e.tangent_dim(), 1);
        assert_eq!(e.total_dim(), 3);
    }

    #[test]
    fn invalid_input_is_an_error() {
        let mut h = curve();
        h.filtration.insert(1, vec![vec![-GaussianRational::i(), GaussianRational::one()]]);
        assert!(matches!(endomorphism_decomposition(&h), Err(Error::InvalidHodge(_))));
    }
}
