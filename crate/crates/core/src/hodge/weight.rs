use std::collections::BTreeMap;

use num_rational::BigRational;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json::rational_to_string;
use crate::linalg::{RationalMatrix, Subspace};
use crate::report::Report;

use super::nilpotent::is_nilpotent;

pub type RationalSubspace = Subspace<BigRational>;

/// Monodromy weight filtration `W(N)` shifted to `center`.
///
/// `steps` runs from the last zero step to the first full step; indices below
/// are `0` and above are `V`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightFiltration {
    pub center: i64,
    pub dim: usize,
    pub steps: BTreeMap<i64, RationalSubspace>,
}

impl WeightFiltration {
    pub fn get(&self, k: i64) -> RationalSubspace {
        match (self.steps.first_key_value(), self.steps.last_key_value()) {
            (Some((&lo, _)), _) if k < lo => Subspace::zero(self.dim),
            (_, Some((&hi, _))) if k > hi => Subspace::full(self.dim),
            _ => self.steps.get(&k).cloned().unwrap_or_else(|| Subspace::full(self.dim)),
        }
    }

    /// `dim Gr_k = dim W_k − dim W_{k−1}`.
    pub fn graded_dim(&self, k: i64) -> usize {
        self.get(k).dim() - self.get(k - 1).dim()
    }

    pub fn to_json(&self) -> Value {
        let steps: Vec<Value> = self
            .steps
            .iter()
            .map(|(k, w)| {
                let basis: Vec<Vec<String>> =
                    w.basis().iter().map(|v| v.iter().map(rational_to_string).collect()).collect();
                json!({ "k": k, "dim": w.dim(), "basis": basis })
            })
            .collect();
        let graded: Vec<Value> = self
            .steps
            .keys()
            .map(|&k| json!({ "k": k, "dim": self.graded_dim(k) }))
            .filter(|v| v["dim"] != 0)
            .collect();
        json!({ "center": self.center, "dim": self.dim, "steps": steps, "graded": graded })
    }
}

fn kernel_of_power(n: &RationalMatrix, m: i64, l: i64) -> RationalSubspace {
    let d = n.rows();
    if m <= 0 {
        Subspace::zero(d)
    } else if m > l {
        Subspace::full(d)
    } else {
        Subspace::span(d, &n.pow(m as u32).nullspace())
    }
}

/// `W_k = Σ_{j ≥ max(0,−k)} N^j ker N^{k+2j+1}` (centered at 0), shifted by `center`.
pub fn weight_filtration(n: &RationalMatrix, center: i64) -> Result<WeightFiltration> {
    if !is_nilpotent(n) {
        return Err(Error::NotNilpotent(format!("{}x{} matrix", n.rows(), n.cols())));
    }
    let d = n.rows();
    // Nilpotency order: N^{l+1} = 0, N^l != 0.
    let l = (0..=d as i64).find(|&k| n.pow(k as u32 + 1).is_zero()).unwrap_or(0);
    let mut steps = BTreeMap::new();
    for k in -l - 1..=l {
        let mut w = Subspace::zero(d);
        for j in 0.max(-k)..=l {
            let piece = kernel_of_power(n, k + 2 * j + 1, l).image(&n.pow(j as u32));
            w = w.sum(&piece);
        }
        steps.insert(k + center, w);
    }
    Ok(WeightFiltration { center, dim: d, steps })
}

/// Checks `N W_k ⊆ W_{k−2}` and `N^k : Gr_{c+k} ≅ Gr_{c−k}` for `k ≥ 1`.
pub fn verify_weight_filtration(n: &RationalMatrix, w: &WeightFiltration) -> Report {
    let mut r = Report::new("weight filtration");
    let d = w.dim;
    let (lo, hi) = match (w.steps.first_key_value(), w.steps.last_key_value()) {
        (Some((&a, _)), Some((&b, _))) => (a, b),
        _ => (w.center, w.center),
    };
    let exhaustive = w.get(lo - 1).dim() == 0 && w.get(hi + 1).dim() == d;
    r.check("exhaustive", exhaustive, format!("W_{} = 0, W_{} = V", lo - 1, hi + 1));

    let not_increasing: Vec<String> = (lo..=hi + 1)
        .filter(|&k| !w.get(k - 1).is_subspace_of(&w.get(k)))
        .map(|k| format!("W_{} not in W_{k}", k - 1))
        .collect();
    r.check(
        "increasing",
        not_increasing.is_empty(),
        if not_increasing.is_empty() { "ok".into() } else { not_increasing.join("; ") },
    );

    let shift: Vec<String> = (lo..=hi + 1)
        .filter(|&k| !w.get(k).image(n).is_subspace_of(&w.get(k - 2)))
        .map(|k| format!("N W_{k} not in W_{}", k - 2))
        .collect();
    r.check("N W_k in W_(k-2)", shift.is_empty(), if shift.is_empty() { "ok".into() } else { shift.join("; ") });

    let c = w.center;
    let mut iso = Vec::new();
    for k in 1..=(hi - c + 1).max(c - lo + 1) {
        let nk = n.pow(k as u32);
        let (up, down) = (w.graded_dim(c + k), w.graded_dim(c - k));
        if up != down {
            iso.push(format!("dim Gr_{} = {up}, dim Gr_{} = {down}", c + k, c - k));
            continue;
        }
        let kernel = w.get(c + k).preimage_within(&nk, &w.get(c - k - 1));
        if !kernel.is_subspace_of(&w.get(c + k - 1)) {
            iso.push(format!("N^{k} is not injective on Gr_{}", c + k));
        }
    }
    r.check(
        "N^k : Gr_(c+k) -> Gr_(c-k) iso",
        iso.is_empty(),
        if iso.is_empty() { "ok".into() } else { iso.join("; ") },
    );
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::to_rational;
    use crate::linalg::IntegerMatrix;

    fn jordan(sizes: &[usize]) -> RationalMatrix {
        let d: usize = sizes.iter().sum();
        let mut m = IntegerMatrix::zeros(d, d);
        let mut start = 0;
        for &s in sizes {
            for i in start..start + s - 1 {
                m.set(i, i + 1, 1.into());
            }
            start += s;
        }
        to_rational(&m)
    }

    #[test]
    fn zero_map() {
        let w = weight_filtration(&RationalMatrix::zeros(2, 2), 0).unwrap();
        assert_eq!(w.get(-1).dim(), 0);
        assert_eq!(w.get(0).dim(), 2);
        assert!(verify_weight_filtration(&RationalMatrix::zeros(2, 2), &w).passed);
    }

    #[test]
    fn two_block() {
        let n = jordan(&[2]);
        let w = weight_filtration(&n, 0).unwrap();
        let ker = Subspace::span(2, &n.nullspace());
        assert_eq!(w.get(-2).dim(), 0);
        assert_eq!(w.get(-1), ker);
        assert_eq!(w.get(0), ker);
        assert_eq!(w.get(1).dim(), 2);
    }

    #[test]
    fn characterizing_properties_hold() {
        for sizes in [vec![1], vec![3], vec![4], vec![5], vec![2, 1], vec![3, 2], vec![4, 2, 1], vec![2, 2]] {
            let n = jordan(&sizes);
            for center in [0, 1, 3] {
                let w = weight_filtration(&n, center).unwrap();
                let r = verify_weight_filtration(&n, &w);
                assert!(r.passed, "{sizes:?} center {center}: {r}");
            }
        }
    }

    #[test]
    fn rejects_non_nilpotent() {
        assert!(weight_filtration(&RationalMatrix::identity(2), 0).is_err());
    }
}
