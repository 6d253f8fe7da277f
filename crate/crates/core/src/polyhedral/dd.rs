//! Double description: generators of `{x ∈ ℚⁿ : a·x ≥ 0 for all constraints a}`.
//!
//! Constraints are added one at a time to the generator description of the
//! current cone (lineality basis plus rays). Candidate rays produced by
//! combining a positive and a negative ray are kept only if they pass the
//! rank test for extremality, and rays are deduplicated by their zero sets.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::lattice::{int_dot, primitive, to_rational};
use crate::linalg::IntegerMatrix;

#[derive(Clone, Debug, Default)]
pub(crate) struct Generators {
    pub lineality: Vec<Vec<BigInt>>,
    pub rays: Vec<Vec<BigInt>>,
}

pub(crate) fn generators_of_halfspaces(n: usize, constraints: &[Vec<BigInt>]) -> Generators {
    let mut lineality: Vec<Vec<BigInt>> =
        (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect()).collect();
    let mut rays: Vec<Vec<BigInt>> = Vec::new();
    let mut processed: Vec<Vec<BigInt>> = Vec::new();

    for a in constraints {
        if a.iter().all(Zero::is_zero) {
            continue;
        }
        processed.push(a.clone());

        if let Some(pos) = lineality.iter().position(|l| !int_dot(a, l).is_zero()) {
            let mut l = lineality.remove(pos);
            let mut al = int_dot(a, &l);
            if al.is_negative() {
                l.iter_mut().for_each(|x| *x = -x.clone());
                al = -al;
            }
            for other in lineality.iter_mut() {
                let ao = int_dot(a, other);
                if !ao.is_zero() {
                    *other = primitive(&combine(&al, other, &(-ao), &l));
                }
            }
            for r in rays.iter_mut() {
                let ar = int_dot(a, r);
                if !ar.is_zero() {
                    *r = primitive(&combine(&al, r, &(-ar), &l));
                }
            }
            rays.push(primitive(&l));
            continue;
        }

        let values: Vec<BigInt> = rays.iter().map(|r| int_dot(a, r)).collect();
        let mut next: Vec<Vec<BigInt>> = Vec::new();
        for (r, v) in rays.iter().zip(&values) {
            if !v.is_negative() {
                next.push(r.clone());
            }
        }
        for (p, vp) in rays.iter().zip(&values) {
            if !vp.is_positive() {
                continue;
            }
            for (q, vq) in rays.iter().zip(&values) {
                if !vq.is_negative() {
                    continue;
                }
                // vp·q − vq·p has a-value zero and positive coefficients.
                next.push(primitive(&combine(vp, q, &(-vq.clone()), p)));
            }
        }
        rays = extreme_only(n, lineality.len(), &processed, next);
    }
    rays.sort();
    Generators { lineality, rays }
}

fn combine(ca: &BigInt, a: &[BigInt], cb: &BigInt, b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| ca * x + cb * y).collect()
}

fn zero_set(constraints: &[Vec<BigInt>], r: &[BigInt]) -> BTreeSet<usize> {
    constraints.iter().enumerate().filter(|(_, a)| int_dot(a, r).is_zero()).map(|(i, _)| i).collect()
}

fn extreme_only(
    n: usize,
    lin_dim: usize,
    constraints: &[Vec<BigInt>],
    candidates: Vec<Vec<BigInt>>,
) -> Vec<Vec<BigInt>> {
    let target = n - lin_dim - 1;
    let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    let mut out = Vec::new();
    for r in candidates {
        if r.iter().all(Zero::is_zero) {
            continue;
        }
        let z = zero_set(constraints, &r);
        if seen.contains(&z) {
            continue;
        }
        let rows: Vec<Vec<BigInt>> = z.iter().map(|&i| constraints[i].clone()).collect();
        let rank = if rows.is_empty() { 0 } else { to_rational(&IntegerMatrix::from_rows_with_cols(rows, n)).rank() };
        if rank == target {
            seen.insert(z);
            out.push(r);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::int_vec;

    #[test]
    fn orthant() {
        let g = generators_of_halfspaces(2, &[int_vec(&[1, 0]), int_vec(&[0, 1])]);
        assert!(g.lineality.is_empty());
        assert_eq!(g.rays, vec![int_vec(&[0, 1]), int_vec(&[1, 0])]);
    }

    #[test]
    fn half_plane_keeps_lineality() {
        let g = generators_of_halfspaces(2, &[int_vec(&[1, 0])]);
        assert_eq!(g.lineality.len(), 1);
        assert_eq!(g.rays.len(), 1);
    }

    #[test]
    fn opposite_constraints_give_hyperplane() {
        let g = generators_of_halfspaces(3, &[int_vec(&[1, 1, 0]), int_vec(&[-1, -1, 0])]);
        assert_eq!(g.lineality.len(), 2);
        assert!(g.rays.is_empty());
    }

    #[test]
    fn square_pyramid_rays() {
        // Dual description of the cone over a square has four facets.
        let gens = [[1, 0, 1], [0, 1, 1], [-1, 0, 1], [0, -1, 1]];
        let cons: Vec<_> = gens.iter().map(|g| int_vec(g)).collect();
        let g = generators_of_halfspaces(3, &cons);
        assert!(g.lineality.is_empty());
        assert_eq!(g.rays.len(), 4);
        for r in &g.rays {
            assert!(cons.iter().all(|c| !int_dot(c, r).is_negative()));
        }
    }
}
