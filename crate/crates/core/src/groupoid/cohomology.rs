use super::groupoid::FiniteGroupoid;
use super::nerve::{nerve, NerveData};
use super::sparse::SparseMatrix;
use crate::error::Result;
use crate::report::Report;

/// `C⁰ → C¹ → …` with `C^p = ℚ^{X_p}` and `δ_p : C^p → C^{p+1}`.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    pub dims: Vec<usize>,
    /// `coboundaries[p]` has `dims[p+1]` rows and `dims[p]` columns.
    pub coboundaries: Vec<SparseMatrix>,
}

impl CochainComplex {
    /// `(δf)(s) = Σᵢ (−1)ⁱ f(∂ᵢ s)`.
    pub fn from_nerve(n: &NerveData) -> Self {
        let dims = n.sizes();
        let coboundaries = (1..n.levels.len())
            .map(|p| {
                let level = &n.levels[p];
                let mut m = SparseMatrix::new(dims[p], dims[p - 1]);
                for (i, face) in level.faces.iter().enumerate() {
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    for (s, &t) in face.iter().enumerate() {
                        m.add(s, t as usize, sign);
                    }
                }
                m
            })
            .collect();
        Self { dims, coboundaries }
    }

    /// `δ_{p+1} ∘ δ_p = 0` for every consecutive pair.
    pub fn is_complex(&self) -> bool {
        self.coboundaries.windows(2).all(|w| w[1].mul(&w[0]).is_zero())
    }

    /// `dim H^p` for every `p` whose outgoing coboundary is present.
    pub fn cohomology_dims(&self) -> Vec<usize> {
        let mut ranks: Vec<usize> = Vec::with_capacity(self.coboundaries.len());
        for d in &self.coboundaries {
            // im δ_{p−1} ⊆ ker δ_p bounds the rank above; the rank mod a prime bounds it below
            let upper = d.rows().min(d.cols() - ranks.last().copied().unwrap_or(0));
            let r = if d.rank_mod_p(upper) == upper { upper } else { d.rank() };
            ranks.push(r);
        }
        (0..self.coboundaries.len()).map(|p| self.dims[p] - ranks[p] - if p == 0 { 0 } else { ranks[p - 1] }).collect()
    }
}

pub fn cech_complex(g: &FiniteGroupoid, max_degree: usize) -> Result<CochainComplex> {
    Ok(CochainComplex::from_nerve(&nerve(g, max_degree + 1)?))
}

/// Nerves with more top simplices than this are replaced by a skeleton.
pub const FULL_NERVE_BUDGET: usize = 50_000;

/// `dim_ℚ H^k(X₁ ⇉ X₀, ℚ)` for `k = 0..=max_degree`, from the full nerve when
/// it is small and from [`cech_cohomology_skeletal`] otherwise.
pub fn cech_cohomology(g: &FiniteGroupoid, max_degree: usize) -> Result<Vec<usize>> {
    let top: usize = g
        .decompose()
        .iter()
        .map(|c| {
            let arrows = c.objects.len().saturating_mul(c.group.order());
            c.objects.len().saturating_mul(arrows.saturating_pow(max_degree as u32 + 1))
        })
        .fold(0, usize::saturating_add);
    if top <= FULL_NERVE_BUDGET {
        Ok(cech_complex(g, max_degree)?.cohomology_dims())
    } else {
        cech_cohomology_skeletal(g, max_degree)
    }
}

/// The same dimensions summed over components, each replaced by the one-object
/// groupoid of its automorphism group.
pub fn cech_cohomology_skeletal(g: &FiniteGroupoid, max_degree: usize) -> Result<Vec<usize>> {
    let mut total = vec![0; max_degree + 1];
    for c in g.decompose() {
        let dims = cech_complex(&FiniteGroupoid::classifying(&c.group), max_degree)?.cohomology_dims();
        total.iter_mut().zip(dims).for_each(|(t, d)| *t += d);
    }
    Ok(total)
}

/// Compares `H^k(g, ℚ)` with the cohomology of the coarse space, the finite set
/// of components, for `k ≤ max_degree`.
pub fn coarse_moduli_compare(g: &FiniteGroupoid, max_degree: usize) -> Result<Report> {
    let stack = cech_cohomology(g, max_degree)?;
    let components = g.decompose().len();
    let coarse: Vec<usize> = (0..=max_degree).map(|k| if k == 0 { components } else { 0 }).collect();
    let mut report = Report::new("coarse moduli comparison");
    for k in 0..=max_degree {
        report.check(
            format!("H^{k}"),
            stack[k] == coarse[k],
            format!("groupoid dim {}, coarse space dim {}", stack[k], coarse[k]),
        );
    }
    Ok(report)
}
