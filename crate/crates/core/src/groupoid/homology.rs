use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::group::GroupTable;
use crate::error::{Error, Result};
use crate::lattice::{invariant_factors, FgAbelianGroup};
use crate::linalg::IntegerMatrix;

/// Largest number of bar chains `|G|^(max_degree+1)` materialized.
pub const MAX_BAR_CHAINS: u64 = 1_000_000;

/// `∂_k : ℤ[G^k] → ℤ[G^{k−1}]` of the bar complex with trivial coefficients:
/// `∂[g₁|…|g_k] = [g₂|…|g_k] + Σ_{i<k} (−1)ⁱ [… |gᵢgᵢ₊₁| …] + (−1)^k [g₁|…|g_{k−1}]`.
/// Tuples are indexed in base `|G|` with `g₁` most significant.
pub fn bar_boundary(g: &GroupTable, k: usize) -> IntegerMatrix {
    let n = g.order();
    let mut m = IntegerMatrix::zeros(n.pow(k.saturating_sub(1) as u32), n.pow(k as u32));
    if k == 0 {
        return IntegerMatrix::zeros(0, 1);
    }
    let encode = |t: &[usize]| t.iter().fold(0, |acc, &x| acc * n + x);
    let mut tuple = vec![0usize; k];
    for col in 0..n.pow(k as u32) {
        let mut c = col;
        for slot in tuple.iter_mut().rev() {
            *slot = c % n;
            c /= n;
        }
        let mut add = |t: &[usize], s: i64| {
            let r = encode(t);
            let cur = m.get(r, col).clone();
            m.set(r, col, cur + s);
        };
        add(&tuple[1..], 1);
        for i in 1..k {
            let mut t: Vec<usize> = tuple[..i - 1].to_vec();
            t.push(g.mul(tuple[i - 1], tuple[i]));
            t.extend_from_slice(&tuple[i + 1..]);
            add(&t, if i % 2 == 0 { 1 } else { -1 });
        }
        add(&tuple[..k - 1], if k.is_multiple_of(2) { 1 } else { -1 });
    }
    m
}

/// `H_k(G, ℤ)` for `k = 0..=max_degree`, from the invariant factors of the bar boundaries.
pub fn group_homology(g: &GroupTable, max_degree: usize) -> Result<Vec<FgAbelianGroup>> {
    let n = g.order() as u64;
    let chains = n.checked_pow(max_degree as u32 + 1);
    if chains.is_none_or(|c| c > MAX_BAR_CHAINS) {
        return Err(Error::TooLarge(format!(
            "bar complex of a group of order {n} in degree {} exceeds {MAX_BAR_CHAINS} chains; use a smaller degree",
            max_degree + 1
        )));
    }
    // factors[k] are the invariant factors of ∂_k, for k = 1..=max_degree+1.
    let factors: Vec<Vec<BigInt>> = (0..=max_degree + 1)
        .map(|k| if k == 0 { Vec::new() } else { invariant_factors(&bar_boundary(g, k)) })
        .collect();
    let rank = |k: usize| factors[k].iter().filter(|d| !d.is_zero()).count();
    Ok((0..=max_degree)
        .map(|k| {
            let chain_rank = g.order().pow(k as u32);
            let free = chain_rank - if k == 0 { 0 } else { rank(k) } - rank(k + 1);
            let torsion = factors[k + 1].iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect();
            FgAbelianGroup { free_rank: free, torsion }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::int;

    fn cyclic(d: i64) -> FgAbelianGroup {
        FgAbelianGroup { free_rank: 0, torsion: vec![int(d)] }
    }

    #[test]
    fn trivial_group() {
        let h = group_homology(&GroupTable::trivial(), 3).unwrap();
        assert_eq!(h[0], FgAbelianGroup::free(1));
        assert!(h[1..].iter().all(FgAbelianGroup::is_trivial));
    }

    #[test]
    fn cyclic_of_order_two() {
        let h = group_homology(&GroupTable::cyclic(2), 3).unwrap();
        assert_eq!(h, vec![FgAbelianGroup::free(1), cyclic(2), FgAbelianGroup::trivial(), cyclic(2)]);
    }

    #[test]
    fn boundaries_compose_to_zero() {
        let g = GroupTable::symmetric(3);
        for k in 2..=3 {
            assert!((&bar_boundary(&g, k - 1) * &bar_boundary(&g, k)).is_zero());
        }
    }

    #[test]
    fn guard_trips() {
        assert!(matches!(group_homology(&GroupTable::cyclic(40), 3), Err(Error::TooLarge(_))));
    }
}
