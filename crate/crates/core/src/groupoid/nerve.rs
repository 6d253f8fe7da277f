use std::collections::HashMap;

use super::groupoid::FiniteGroupoid;
use crate::error::{Error, Result};

/// Largest total number of simplices materialized across all nerve levels.
pub const MAX_NERVE_SIMPLICES: usize = 4_000_000;

/// One level `X_p` of the nerve.
///
/// A `p`-simplex for `p ≥ 1` is a chain `x₀ →f₁ x₁ →f₂ … →f_p x_p` stored as
/// `(f₁, …, f_p)`; a 0-simplex is an object. `faces[i][s]` is the index of
/// `∂ᵢ s` in `X_{p−1}`: `∂₀` drops `f₁`, `∂_p` drops `f_p`, and `∂ᵢ` for
/// `0 < i < p` replaces `fᵢ, fᵢ₊₁` by `fᵢ₊₁ ∘ fᵢ`.
#[derive(Clone, Debug)]
pub struct NerveLevel {
    pub p: usize,
    simplices: Vec<u32>,
    pub faces: Vec<Vec<u32>>,
}

impl NerveLevel {
    pub fn len(&self) -> usize {
        if self.p == 0 {
            self.simplices.len()
        } else {
            self.simplices.len() / self.p
        }
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// The arrows of a simplex (or the single object when `p = 0`).
    pub fn simplex(&self, s: usize) -> &[u32] {
        let w = self.p.max(1);
        &self.simplices[s * w..(s + 1) * w]
    }
}

#[derive(Clone, Debug)]
pub struct NerveData {
    pub levels: Vec<NerveLevel>,
}

impl NerveData {
    pub fn sizes(&self) -> Vec<usize> {
        self.levels.iter().map(NerveLevel::len).collect()
    }

    /// `∂ᵢ∂ⱼ = ∂ⱼ₋₁∂ᵢ` for `i < j` on every level `p ≥ 2`.
    pub fn check_simplicial_identities(&self) -> bool {
        for p in 2..self.levels.len() {
            let (hi, lo) = (&self.levels[p], &self.levels[p - 1]);
            for s in 0..hi.len() {
                for j in 1..=p {
                    for i in 0..j {
                        let a = lo.faces[i][hi.faces[j][s] as usize];
                        let b = lo.faces[j - 1][hi.faces[i][s] as usize];
                        if a != b {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

pub fn nerve(g: &FiniteGroupoid, p_max: usize) -> Result<NerveData> {
    let mut levels = vec![NerveLevel { p: 0, simplices: (0..g.object_count() as u32).collect(), faces: Vec::new() }];
    let mut total = g.object_count();
    if p_max == 0 {
        return Ok(NerveData { levels });
    }

    let arrows: Vec<u32> = (0..g.arrow_count() as u32).collect();
    let faces = vec![
        arrows.iter().map(|&a| g.dst(a as usize) as u32).collect(),
        arrows.iter().map(|&a| g.src(a as usize) as u32).collect(),
    ];
    total += arrows.len();
    levels.push(NerveLevel { p: 1, simplices: arrows, faces });

    for p in 2..=p_max {
        let prev = &levels[p - 1];
        let index: HashMap<&[u32], u32> = (0..prev.len()).map(|s| (prev.simplex(s), s as u32)).collect();
        let mut simplices = Vec::new();
        let mut parents = Vec::new();
        for s in 0..prev.len() {
            let chain = prev.simplex(s);
            let last = *chain.last().expect("nonempty chain") as usize;
            for &f in g.outgoing(g.dst(last)) {
                simplices.extend_from_slice(chain);
                simplices.push(f as u32);
                parents.push(s as u32);
            }
        }
        let count = parents.len();
        total += count;
        if total > MAX_NERVE_SIMPLICES {
            return Err(Error::TooLarge(format!(
                "nerve up to level {p} has more than {MAX_NERVE_SIMPLICES} simplices; lower the degree"
            )));
        }
        let mut faces: Vec<Vec<u32>> = vec![Vec::with_capacity(count); p + 1];
        let mut buf: Vec<u32> = Vec::with_capacity(p);
        for s in 0..count {
            let chain = &simplices[s * p..(s + 1) * p];
            faces[0].push(index[&chain[1..]]);
            for i in 1..p {
                buf.clear();
                buf.extend_from_slice(&chain[..i - 1]);
                let c = g.compose(chain[i] as usize, chain[i - 1] as usize).expect("composable chain");
                buf.push(c as u32);
                buf.extend_from_slice(&chain[i + 1..]);
                faces[i].push(index[buf.as_slice()]);
            }
            faces[p].push(parents[s]);
        }
        drop(index);
        levels.push(NerveLevel { p, simplices, faces });
    }
    Ok(NerveData { levels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::group::GroupTable;
    use crate::groupoid::groupoid::action_groupoid;

    #[test]
    fn level_sizes() {
        let b2 = FiniteGroupoid::classifying(&GroupTable::cyclic(2));
        assert_eq!(nerve(&b2, 2).unwrap().sizes(), vec![1, 2, 4]);
        let two = FiniteGroupoid::discrete(2);
        assert_eq!(nerve(&two, 3).unwrap().sizes(), vec![2, 2, 2, 2]);
        let c2 = GroupTable::cyclic(2);
        let swap = action_groupoid(&c2, 2, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(nerve(&swap, 2).unwrap().sizes(), vec![2, 4, 8]);
    }

    #[test]
    fn simplicial_identities_hold() {
        // S₃ permuting three points; element k is the k-th permutation in lex order.
        let s3 = GroupTable::symmetric(3);
        let action: Vec<Vec<usize>> =
            vec![vec![0, 1, 2], vec![0, 2, 1], vec![1, 0, 2], vec![1, 2, 0], vec![2, 0, 1], vec![2, 1, 0]];
        let g = action_groupoid(&s3, 3, &action).unwrap();
        let n = nerve(&g, 4).unwrap();
        assert_eq!(n.sizes(), vec![3, 18, 108, 648, 3888]);
        assert!(n.check_simplicial_identities());
    }
}
