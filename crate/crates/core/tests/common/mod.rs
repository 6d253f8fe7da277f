//! Independent oracles: small brute-force computations on machine integers
//! that share no code with the library.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeSet;

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::Rng;

use stackyfan::groupoid::{action_groupoid, FiniteGroupoid, GroupTable};

fn cross(a: [i64; 2], b: [i64; 2]) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Membership in the cone spanned by `u`, `v` (not opposite).
pub fn in_cone_2d(u: [i64; 2], v: [i64; 2], x: [i64; 2]) -> bool {
    let d = cross(u, v);
    if d == 0 {
        // collinear, same direction
        return cross(u, x) == 0 && u[0] * x[0] + u[1] * x[1] >= 0;
    }
    let a = cross(x, v) * d.signum();
    let b = cross(u, x) * d.signum();
    a >= 0 && b >= 0
}

/// Irreducible nonzero lattice points of a 2-dimensional pointed cone by exhaustive search.
pub fn hilbert_basis_2d(u: [i64; 2], v: [i64; 2]) -> BTreeSet<[i64; 2]> {
    let bound = u[0].abs().max(u[1].abs()) + v[0].abs().max(v[1].abs()) + 1;
    let pts: Vec<[i64; 2]> = (-bound..=bound)
        .flat_map(|x| (-bound..=bound).map(move |y| [x, y]))
        .filter(|&p| p != [0, 0] && in_cone_2d(u, v, p))
        .collect();
    pts.iter()
        .copied()
        .filter(|&p| !pts.iter().any(|&q| q != p && in_cone_2d(u, v, [p[0] - q[0], p[1] - q[1]])))
        .collect()
}

/// Number of solutions of `k x = 0` in `ℤ/d_1 × … × ℤ/d_m`.
pub fn torsion_counts(torsion: &[u64], k: u64) -> u64 {
    torsion.iter().map(|&d| d.gcd(&k)).product()
}

fn closure(g: &GroupTable, gens: &[usize]) -> BTreeSet<usize> {
    let mut set: BTreeSet<usize> = BTreeSet::from([g.identity()]);
    loop {
        let next: BTreeSet<usize> =
            set.iter().flat_map(|&a| gens.iter().map(move |&b| (a, b))).map(|(a, b)| g.mul(a, b)).collect();
        let before = set.len();
        set.extend(next);
        if set.len() == before {
            return set;
        }
    }
}

/// `|{x ∈ G/[G,G] : k x = 0}|` for each `k ≤ |G|`, computed in the quotient directly.
pub fn abelianization_counts(g: &GroupTable) -> Vec<u64> {
    let n = g.order();
    let commutators: Vec<usize> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .map(|(a, b)| g.mul(g.mul(a, b), g.mul(g.inverse(a), g.inverse(b))))
        .collect();
    let derived = closure(g, &commutators);
    let coset = |a: usize| -> BTreeSet<usize> { derived.iter().map(|&d| g.mul(a, d)).collect() };
    let mut cosets: Vec<BTreeSet<usize>> = Vec::new();
    for a in 0..n {
        let c = coset(a);
        if !cosets.contains(&c) {
            cosets.push(c);
        }
    }
    let power = |a: usize, k: u64| (0..k).fold(g.identity(), |acc, _| g.mul(acc, a));
    (1..=n as u64)
        .map(|k| cosets.iter().filter(|c| derived.contains(&power(*c.iter().next().unwrap(), k))).count() as u64)
        .collect()
}

/// Groups of order at most 6 up to isomorphism.
pub fn small_groups() -> Vec<GroupTable> {
    let mut v: Vec<GroupTable> = (1..=6).map(GroupTable::cyclic).collect();
    v.push(GroupTable::cyclic(2).direct_product(&GroupTable::cyclic(2)));
    v.push(GroupTable::symmetric(3));
    v
}

/// Action of `g` on the left cosets of `⟨h⟩`.
pub fn coset_action(g: &GroupTable, h: usize) -> (usize, Vec<Vec<usize>>) {
    let sub = closure(g, &[h]);
    let mut cosets: Vec<BTreeSet<usize>> = Vec::new();
    let mut index = vec![0; g.order()];
    for a in 0..g.order() {
        let c: BTreeSet<usize> = sub.iter().map(|&s| g.mul(a, s)).collect();
        let pos = cosets.iter().position(|x| *x == c).unwrap_or_else(|| {
            cosets.push(c.clone());
            cosets.len() - 1
        });
        index[a] = pos;
    }
    let reps: Vec<usize> = (0..cosets.len()).map(|i| *cosets[i].iter().next().unwrap()).collect();
    let action = (0..g.order()).map(|a| reps.iter().map(|&r| index[g.mul(a, r)]).collect()).collect();
    (cosets.len(), action)
}

/// A random groupoid with at most `max_objects` objects and automorphism groups of order ≤ 6,
/// assembled from coset action groupoids and pair groupoids.
pub fn random_groupoid<R: Rng>(rng: &mut R, max_objects: usize) -> FiniteGroupoid {
    let groups = small_groups();
    let mut parts = Vec::new();
    let mut budget = rng.gen_range(1..=max_objects);
    while budget > 0 {
        let g = groups.choose(rng).unwrap();
        if rng.gen_bool(0.5) {
            let (size, action) = coset_action(g, rng.gen_range(0..g.order()));
            if size <= budget {
                parts.push(action_groupoid(g, size, &action).unwrap());
                budget -= size;
                continue;
            }
        }
        let k = rng.gen_range(1..=budget);
        parts.push(FiniteGroupoid::pair_groupoid(k, g));
        budget -= k;
    }
    FiniteGroupoid::disjoint_union(&parts)
}

/// Connected components by union-find over the arrows.
pub fn component_count(g: &FiniteGroupoid) -> usize {
    let n = g.object_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for a in 0..g.arrow_count() {
        let (s, t) = (find(&mut parent, g.src(a)), find(&mut parent, g.dst(a)));
        parent[s] = t;
    }
    (0..n).filter(|&x| find(&mut parent, x) == x).count()
}

/// Weights of an `sl_2`-string decomposition: a Jordan block of size `s`
/// contributes `s−1, s−3, …, 1−s`.
pub fn jordan_weights(sizes: &[usize]) -> Vec<i64> {
    let mut w: Vec<i64> = sizes.iter().flat_map(|&s| (0..s).map(move |j| s as i64 - 1 - 2 * j as i64)).collect();
    w.sort();
    w
}

/// Nilpotent in Jordan form: `N e_j = e_{j−1}` inside each block.
pub fn jordan_shift(sizes: &[usize]) -> Vec<Option<usize>> {
    let mut image = Vec::new();
    let mut start = 0;
    for &s in sizes {
        for j in 0..s {
            image.push(if j == 0 { None } else { Some(start + j - 1) });
        }
        start += s;
    }
    image
}

/// Every coordinate weight assignment `w` (with `W_k = span{e_i : w_i ≤ k}`)
/// satisfying `N W_k ⊆ W_{k−2}` and `N^k : Gr_k ≅ Gr_{−k}` for `k ≥ 1`.
pub fn coordinate_weight_filtrations(sizes: &[usize]) -> Vec<Vec<i64>> {
    let shift = jordan_shift(sizes);
    let d = shift.len() as i64;
    let range: Vec<i64> = (-d..=d).collect();
    let mut out = Vec::new();
    let mut w = vec![0i64; d as usize];
    fn rec(i: usize, w: &mut Vec<i64>, range: &[i64], shift: &[Option<usize>], out: &mut Vec<Vec<i64>>) {
        if i == w.len() {
            if satisfies(w, shift) {
                out.push(w.clone());
            }
            return;
        }
        for &x in range {
            w[i] = x;
            rec(i + 1, w, range, shift, out);
        }
    }
    rec(0, &mut w, &range, &shift, &mut out);
    out
}

fn satisfies(w: &[i64], shift: &[Option<usize>]) -> bool {
    // N e_i ∈ W_{w_i − 2}
    for (i, t) in shift.iter().enumerate() {
        if let Some(j) = t {
            if w[*j] > w[i] - 2 {
                return false;
            }
        }
    }
    let power = |i: usize, k: i64| -> Option<usize> { (0..k).try_fold(i, |x, _| shift[x]) };
    let d = w.len() as i64;
    for k in 1..=d {
        let top: Vec<usize> = (0..w.len()).filter(|&i| w[i] == k).collect();
        let bottom = (0..w.len()).filter(|&i| w[i] == -k).count();
        if top.len() != bottom {
            return false;
        }
        if !top.iter().all(|&i| power(i, k).is_some_and(|j| w[j] == -k)) {
            return false;
        }
    }
    true
}

/// All partitions of `n`.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for p in (1..=n.min(max)).rev() {
            prefix.push(p);
            rec(n - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// All `2×2` integer matrices with entries in `[-b, b]` satisfying `pred`.
pub fn small_matrices_2x2(b: i64, pred: impl Fn([[i64; 2]; 2]) -> bool) -> Vec<[[i64; 2]; 2]> {
    let r: Vec<i64> = (-b..=b).collect();
    let mut out = Vec::new();
    for &a in &r {
        for &bb in &r {
            for &c in &r {
                for &d in &r {
                    let m = [[a, bb], [c, d]];
                    if pred(m) {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}

pub fn mul2(a: [[i64; 2]; 2], b: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

pub fn transpose2(a: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

/// Rank of a set of integer vectors by fraction-free elimination in `i128`.
pub fn rank_i128(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let (a, b) = (m[rank][c], m[r][c]);
                for k in 0..cols {
                    m[r][k] = m[r][k] * a - m[rank][k] * b;
                }
                let g = m[r].iter().fold(0i128, |g, &x| g.gcd(&x));
                if g > 1 {
                    m[r].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}
