use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::linalg::IntegerMatrix;

/// Row-major sparse integer matrix; each row is sorted by column with no zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[(usize, i64)] {
        &self.data[i]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    /// Adds `v` to entry `(i, j)`.
    pub fn add(&mut self, i: usize, j: usize, v: i64) {
        let row = &mut self.data[i];
        match row.binary_search_by_key(&j, |e| e.0) {
            Ok(k) => {
                row[k].1 += v;
                if row[k].1 == 0 {
                    row.remove(k);
                }
            }
            Err(k) => {
                if v != 0 {
                    row.insert(k, (j, v));
                }
            }
        }
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i].binary_search_by_key(&j, |e| e.0).map(|k| self.data[i][k].1).unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    /// `self · other`.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in sparse product");
        let mut out = SparseMatrix::new(self.rows, other.cols);
        for (i, row) in self.data.iter().enumerate() {
            let mut acc: HashMap<usize, i64> = HashMap::new();
            for &(k, a) in row {
                for &(j, b) in &other.data[k] {
                    *acc.entry(j).or_insert(0) += a * b;
                }
            }
            let mut r: Vec<(usize, i64)> = acc.into_iter().filter(|e| e.1 != 0).collect();
            r.sort_unstable();
            out.data[i] = r;
        }
        out
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut out = SparseMatrix::new(self.cols, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            for &(j, v) in row {
                out.data[j].push((i, v));
            }
        }
        out
    }

    pub fn to_dense(&self) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(self.rows, self.cols);
        for (i, row) in self.data.iter().enumerate() {
            for &(j, v) in row {
                m.set(i, j, BigInt::from(v));
            }
        }
        m
    }

    /// Rank over ℚ by fraction-free elimination, sparsest rows first.
    pub fn rank(&self) -> usize {
        let mut order: Vec<usize> = (0..self.rows).collect();
        order.sort_by_key(|&i| self.data[i].len());
        let mut pivots: HashMap<usize, Vec<(usize, BigInt)>> = HashMap::new();
        for i in order {
            let mut r: Vec<(usize, BigInt)> = self.data[i].iter().map(|&(j, v)| (j, BigInt::from(v))).collect();
            while let Some(lead) = r.first().map(|e| e.0) {
                match pivots.get(&lead) {
                    None => {
                        normalize(&mut r);
                        pivots.insert(lead, r);
                        break;
                    }
                    Some(p) => r = eliminate(&r, p),
                }
            }
        }
        pivots.len()
    }
    /// Rank over 𝔽_p for `p = 2^31 − 1`; a lower bound for the rank over ℚ.
    /// Elimination stops once `limit` pivots are found.
    pub fn rank_mod_p(&self, limit: usize) -> usize {
        let mut order: Vec<usize> = (0..self.rows).collect();
        order.sort_by_key(|&i| self.data[i].len());
        let mut pivots: HashMap<usize, Vec<(usize, u64)>> = HashMap::new();
        for i in order {
            if pivots.len() >= limit {
                break;
            }
            let mut r: Vec<(usize, u64)> =
                self.data[i].iter().map(|&(j, v)| (j, v.rem_euclid(PRIME as i64) as u64)).collect();
            r.retain(|e| e.1 != 0);
            while let Some(lead) = r.first().map(|e| e.0) {
                match pivots.get(&lead) {
                    None => {
                        let inv = inverse_mod(r[0].1);
                        r.iter_mut().for_each(|e| e.1 = e.1 * inv % PRIME);
                        pivots.insert(lead, r);
                        break;
                    }
                    Some(p) => r = eliminate_mod(&r, p),
                }
            }
        }
        pivots.len()
    }
}

const PRIME: u64 = 2_147_483_647;

fn inverse_mod(a: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a % PRIME, PRIME - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % PRIME;
        }
        base = base * base % PRIME;
        e >>= 1;
    }
    acc
}

/// `r − r_0 · p` for a monic pivot row `p`.
fn eliminate_mod(r: &[(usize, u64)], p: &[(usize, u64)]) -> Vec<(usize, u64)> {
    let b = PRIME - r[0].1;
    let mut out = Vec::with_capacity(r.len() + p.len());
    let (mut x, mut y) = (1, 1);
    while x < r.len() || y < p.len() {
        if y >= p.len() || (x < r.len() && r[x].0 < p[y].0) {
            out.push(r[x]);
            x += 1;
        } else if x >= r.len() || p[y].0 < r[x].0 {
            out.push((p[y].0, b * p[y].1 % PRIME));
            y += 1;
        } else {
            let v = (r[x].1 + b * p[y].1) % PRIME;
            if v != 0 {
                out.push((r[x].0, v));
            }
            x += 1;
            y += 1;
        }
    }
    out
}

/// `a·r − b·p` where `a`, `b` are the leading entries of `p` and `r`.
fn eliminate(r: &[(usize, BigInt)], p: &[(usize, BigInt)]) -> Vec<(usize, BigInt)> {
    let a = &p[0].1;
    let b = &r[0].1;
    let g = a.gcd(b);
    let (a, b) = (a / &g, b / &g);
    let mut out = Vec::with_capacity(r.len() + p.len());
    let (mut x, mut y) = (1, 1);
    while x < r.len() || y < p.len() {
        let take_r = y >= p.len() || (x < r.len() && r[x].0 < p[y].0);
        let take_p = x >= r.len() || (y < p.len() && p[y].0 < r[x].0);
        let (col, v) = if take_r {
            x += 1;
            (r[x - 1].0, &a * &r[x - 1].1)
        } else if take_p {
            y += 1;
            (p[y - 1].0, -(&b * &p[y - 1].1))
        } else {
            x += 1;
            y += 1;
            (r[x - 1].0, &a * &r[x - 1].1 - &b * &p[y - 1].1)
        };
        if !v.is_zero() {
            out.push((col, v));
        }
    }
    normalize(&mut out);
    out
}

fn normalize(r: &mut [(usize, BigInt)]) {
    let Some(first) = r.first() else { return };
    let mut g = r.iter().fold(BigInt::zero(), |acc, (_, v)| acc.gcd(v));
    if first.1.is_negative() {
        g = -g;
    }
    if g != BigInt::from(1) {
        for (_, v) in r.iter_mut() {
            *v = &*v / &g;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::to_rational;

    fn from_dense(rows: &[&[i64]]) -> SparseMatrix {
        let mut m = SparseMatrix::new(rows.len(), rows.first().map_or(0, |r| r.len()));
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                m.add(i, j, v);
            }
        }
        m
    }

    #[test]
    fn rank_matches_dense() {
        let cases: Vec<Vec<Vec<i64>>> = vec![
            vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]],
            vec![vec![0, 0], vec![0, 0]],
            vec![vec![1, -1, 0, 0], vec![0, 1, -1, 0], vec![0, 0, 1, -1], vec![-1, 0, 0, 1]],
            vec![vec![2, 3, 5], vec![7, 11, 13], vec![17, 19, 23], vec![1, 1, 1]],
        ];
        for c in cases {
            let rows: Vec<&[i64]> = c.iter().map(Vec::as_slice).collect();
            let s = from_dense(&rows);
            assert_eq!(s.rank(), to_rational(&s.to_dense()).rank());
            assert_eq!(s.transpose().rank(), s.rank());
            assert_eq!(s.rank_mod_p(usize::MAX), s.rank());
        }
    }

    #[test]
    fn product_and_zero_entries() {
        let a = from_dense(&[&[1, -1]]);
        let b = from_dense(&[&[1], &[1]]);
        assert!(a.mul(&b).is_zero());
        let mut m = SparseMatrix::new(1, 1);
        m.add(0, 0, 3);
        m.add(0, 0, -3);
        assert_eq!(m.nnz(), 0);
    }
}
