//! Exact integer lattice algebra: Smith normal form, kernels, cokernels,
//! dual maps and quotient lattices.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{IntegerMatrix, RationalMatrix};

pub fn int(x: i64) -> BigInt {
    BigInt::from(x)
}

pub fn int_vec(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn int_matrix(rows: &[&[i64]]) -> IntegerMatrix {
    IntegerMatrix::from_rows(rows.iter().map(|r| int_vec(r)).collect())
}

pub fn to_rational(m: &IntegerMatrix) -> RationalMatrix {
    m.map(|x| BigRational::from_integer(x.clone()))
}

/// Converts a rational matrix with integral entries back to an integer matrix.
pub fn to_integer(m: &RationalMatrix) -> Option<IntegerMatrix> {
    if m.entries().iter().all(|x| x.is_integer()) {
        Some(m.map(|x| x.to_integer()))
    } else {
        None
    }
}

pub fn vec_gcd(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Divides out the content of a nonzero vector; zero vectors are returned unchanged.
pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = vec_gcd(v);
    if g.is_zero() || g.is_one() {
        v.to_vec()
    } else {
        v.iter().map(|x| x / &g).collect()
    }
}

/// Scales a rational vector to the primitive integer vector on the same ray.
pub fn primitive_from_rational(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let scaled: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    primitive(&scaled)
}

pub fn int_dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `U·A·V = D` with `U`, `V` unimodular and `D` diagonal with `d₁ | d₂ | … | d_r`, then zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SmithDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

pub fn smith_normal_form(a: &IntegerMatrix) -> SmithDecomposition {
    let mut d = a.clone();
    let mut u = IntegerMatrix::identity(a.rows());
    let mut v = IntegerMatrix::identity(a.cols());
    reduce_to_smith(&mut d, Some(&mut u), Some(&mut v));
    SmithDecomposition { u, d, v }
}

/// Diagonal of the Smith form, without the transformation matrices.
pub fn invariant_factors(a: &IntegerMatrix) -> Vec<BigInt> {
    let mut d = a.clone();
    reduce_to_smith(&mut d, None, None);
    (0..d.rows().min(d.cols())).map(|i| d.get(i, i).clone()).collect()
}

fn reduce_to_smith(d: &mut IntegerMatrix, mut u: Option<&mut IntegerMatrix>, mut v: Option<&mut IntegerMatrix>) {
    let (m, n) = (d.rows(), d.cols());
    for t in 0..m.min(n) {
        // Minimal |entry| in the trailing block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = d.get(i, j);
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        swap_rows(d, u.as_deref_mut(), t, pi);
        swap_cols(d, v.as_deref_mut(), t, pj);

        loop {
            // Bring the smallest nonzero entry of row t / column t to the pivot.
            let mut best = (t, t);
            for i in t + 1..m {
                let x = d.get(i, t);
                if !x.is_zero() && x.abs() < d.get(best.0, best.1).abs() {
                    best = (i, t);
                }
            }
            for j in t + 1..n {
                let x = d.get(t, j);
                if !x.is_zero() && x.abs() < d.get(best.0, best.1).abs() {
                    best = (t, j);
                }
            }
            swap_rows(d, u.as_deref_mut(), t, best.0);
            swap_cols(d, v.as_deref_mut(), t, best.1);

            let pivot = d.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..m {
                let x = d.get(i, t).clone();
                if x.is_zero() {
                    continue;
                }
                let q = x.div_floor(&pivot);
                add_row(d, u.as_deref_mut(), i, t, &(-q));
                if !d.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let x = d.get(t, j).clone();
                if x.is_zero() {
                    continue;
                }
                let q = x.div_floor(&pivot);
                add_col(d, v.as_deref_mut(), j, t, &(-q));
                if !d.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Divisibility: fold an offending row into row t and repeat.
            let mut offending = None;
            'search: for i in t + 1..m {
                for j in t + 1..n {
                    if !d.get(i, j).is_multiple_of(&pivot) {
                        offending = Some(i);
                        break 'search;
                    }
                }
            }
            match offending {
                Some(i) => add_row(d, u.as_deref_mut(), t, i, &BigInt::one()),
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            if let Some(u) = u.as_deref_mut() {
                u.negate_row(t);
            }
        }
    }
}

fn swap_rows(d: &mut IntegerMatrix, u: Option<&mut IntegerMatrix>, a: usize, b: usize) {
    d.swap_rows(a, b);
    if let Some(u) = u {
        u.swap_rows(a, b);
    }
}

fn swap_cols(d: &mut IntegerMatrix, v: Option<&mut IntegerMatrix>, a: usize, b: usize) {
    d.swap_cols(a, b);
    if let Some(v) = v {
        v.swap_cols(a, b);
    }
}

fn add_row(d: &mut IntegerMatrix, u: Option<&mut IntegerMatrix>, target: usize, source: usize, c: &BigInt) {
    d.add_row_multiple(target, source, c);
    if let Some(u) = u {
        u.add_row_multiple(target, source, c);
    }
}

fn add_col(d: &mut IntegerMatrix, v: Option<&mut IntegerMatrix>, target: usize, source: usize, c: &BigInt) {
    d.add_col_multiple(target, source, c);
    if let Some(v) = v {
        v.add_col_multiple(target, source, c);
    }
}

/// A finitely generated abelian group `ℤ^free_rank ⊕ ⨁ ℤ/dᵢ` with `dᵢ ≥ 2`, `dᵢ | dᵢ₊₁`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FgAbelianGroup {
    pub free_rank: usize,
    #[serde(with = "crate::json::bigint_vec")]
    pub torsion: Vec<BigInt>,
}

impl FgAbelianGroup {
    pub fn trivial() -> Self {
        Self { free_rank: 0, torsion: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        Self { free_rank: rank, torsion: Vec::new() }
    }

    /// Builds the group from arbitrary cyclic orders, normalizing to invariant factors.
    pub fn from_invariants(free_rank: usize, orders: &[BigInt]) -> Self {
        let diag: Vec<BigInt> = orders.iter().map(|x| x.abs()).filter(|x| !x.is_zero()).collect();
        let extra_free = orders.len() - diag.len();
        let m = IntegerMatrix::from_fn(
            diag.len(),
            diag.len(),
            |i, j| if i == j { diag[i].clone() } else { BigInt::zero() },
        );
        let torsion = invariant_factors(&m).into_iter().filter(|x| *x > BigInt::one()).collect();
        Self { free_rank: free_rank + extra_free, torsion }
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    /// Number of cyclic generators in the invariant-factor presentation.
    pub fn generator_count(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// Relation matrix whose cokernel is this group, in invariant-factor coordinates
    /// (torsion generators first, then free generators).
    pub fn relation_matrix(&self) -> IntegerMatrix {
        let n = self.generator_count();
        let k = self.torsion.len();
        IntegerMatrix::from_fn(n, k, |i, j| if i == j { self.torsion[j].clone() } else { BigInt::zero() })
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `N / image(A)` for `A : L → N` (columns of `A` are images of basis vectors of `L`).
pub fn cokernel(a: &IntegerMatrix) -> FgAbelianGroup {
    let diag = invariant_factors(a);
    let rank = diag.iter().filter(|x| !x.is_zero()).count();
    FgAbelianGroup { free_rank: a.rows() - rank, torsion: diag.into_iter().filter(|x| *x > BigInt::one()).collect() }
}

/// Saturated basis of `ker(A) ⊆ ℤ^cols`, as the columns of the returned matrix.
pub fn kernel_basis(a: &IntegerMatrix) -> IntegerMatrix {
    let snf = smith_normal_form(a);
    let r = snf.rank();
    let cols: Vec<Vec<BigInt>> = (r..a.cols()).map(|j| snf.v.column(j)).collect();
    let canon = hermite_rows(&cols);
    IntegerMatrix::from_columns(&canon, a.cols())
}

/// The dual homomorphism `A* : N* → L*`, i.e. the transpose.
pub fn dual_hom(a: &IntegerMatrix) -> IntegerMatrix {
    a.transpose()
}

/// `N / N'` for `N = ℤ^n_rank` and `N'` spanned by the (independent) columns of
/// `sublattice_basis`. The projection maps `N` onto the free part of the quotient.
pub fn quotient_lattice(n_rank: usize, sublattice_basis: &IntegerMatrix) -> Result<(FgAbelianGroup, IntegerMatrix)> {
    if sublattice_basis.rows() != n_rank {
        return Err(Error::Dimension(format!(
            "sublattice vectors have {} coordinates, lattice rank is {n_rank}",
            sublattice_basis.rows()
        )));
    }
    let snf = smith_normal_form(sublattice_basis);
    let k = sublattice_basis.cols();
    if snf.rank() < k {
        return Err(Error::NotSublatticeBasis(format!("{k} columns span a lattice of rank {}", snf.rank())));
    }
    let group = FgAbelianGroup {
        free_rank: n_rank - k,
        torsion: snf.diagonal().into_iter().filter(|x| *x > BigInt::one()).collect(),
    };
    let projection = snf.u.select_rows(&(k..n_rank).collect::<Vec<_>>());
    Ok((group, projection))
}

/// Integral inverse of a unimodular matrix.
pub fn unimodular_inverse(u: &IntegerMatrix) -> Option<IntegerMatrix> {
    to_rational(u).inverse().and_then(|inv| to_integer(&inv))
}

pub fn integer_determinant(a: &IntegerMatrix) -> BigInt {
    to_rational(a).determinant().to_integer()
}

pub fn is_unimodular(a: &IntegerMatrix) -> bool {
    a.is_square() && integer_determinant(a).abs().is_one()
}

/// Row-style Hermite normal form of the ℤ-span of `vectors`: echelon, positive
/// pivots, entries above each pivot reduced into `[0, pivot)`, zero rows dropped.
pub(crate) fn hermite_rows(vectors: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = vectors.iter().filter(|v| v.iter().any(|x| !x.is_zero())).cloned().collect();
    let Some(n) = rows.first().map(Vec::len) else { return rows };
    let mut r = 0;
    for c in 0..n {
        if r == rows.len() {
            break;
        }
        // Smallest nonzero |entry| in column c among rows r.. becomes the pivot.
        while let Some(p) =
            (r..rows.len()).filter(|&i| !rows[i][c].is_zero()).min_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()))
        {
            rows.swap(r, p);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[r][c]);
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < rows.len() && !rows[r][c].is_zero() {
            if rows[r][c].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            let pivot_row = rows[r].clone();
            for i in 0..r {
                let q = rows[i][c].div_floor(&pivot_row[c]);
                if !q.is_zero() {
                    for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                        *x -= &q * y;
                    }
                }
            }
            r += 1;
        }
    }
    rows.truncate(r);
    rows.retain(|v| v.iter().any(|x| !x.is_zero()));
    rows
}

/// A ℤ-basis of the lattice spanned by the columns of `a`, in Hermite form.
pub fn image_basis(a: &IntegerMatrix) -> Vec<Vec<BigInt>> {
    hermite_rows(&a.to_columns())
}

/// Reduces `v` modulo the lattice with Hermite basis `hnf` (pivot coordinates into `[0, pivot)`).
pub(crate) fn reduce_mod_lattice(v: &[BigInt], hnf: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut out = v.to_vec();
    for row in hnf {
        let Some(p) = row.iter().position(|x| !x.is_zero()) else { continue };
        let q = out[p].div_floor(&row[p]);
        if !q.is_zero() {
            for (x, y) in out.iter_mut().zip(row) {
                *x -= &q * y;
            }
        }
    }
    out
}

/// Entry of an integer as `i64`, for display paths that know the value is small.
pub fn small(x: &BigInt) -> Option<i64> {
    x.to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(a: &IntegerMatrix) -> SmithDecomposition {
        let s = smith_normal_form(a);
        assert_eq!(&(&s.u * a) * &s.v, s.d, "U·A·V = D");
        assert!(is_unimodular(&s.u));
        assert!(is_unimodular(&s.v));
        let diag = s.diagonal();
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        let nz: Vec<_> = diag.iter().take_while(|x| !x.is_zero()).collect();
        assert!(diag[nz.len()..].iter().all(Zero::is_zero));
        for w in nz.windows(2) {
            assert!(w[1].is_multiple_of(w[0]));
        }
        assert!(nz.iter().all(|x| x.is_positive()));
        s
    }

    #[test]
    fn snf_examples() {
        assert_eq!(check_snf(&int_matrix(&[&[1, 1]])).d, int_matrix(&[&[1, 0]]));
        assert_eq!(check_snf(&int_matrix(&[&[0]])).d, int_matrix(&[&[0]]));
        assert_eq!(check_snf(&int_matrix(&[&[2, 0], &[0, 3]])).d, int_matrix(&[&[1, 0], &[0, 6]]));
        check_snf(&int_matrix(&[&[4, 6, 2], &[-2, 8, 10], &[6, 0, 0]]));
        check_snf(&IntegerMatrix::zeros(0, 3));
        check_snf(&IntegerMatrix::zeros(2, 0));
    }

    #[test]
    fn cokernel_examples() {
        assert_eq!(cokernel(&int_matrix(&[&[1, 1]])), FgAbelianGroup::trivial());
        assert_eq!(cokernel(&IntegerMatrix::identity(3)), FgAbelianGroup::trivial());
        assert_eq!(cokernel(&int_matrix(&[&[2]])), FgAbelianGroup { free_rank: 0, torsion: int_vec(&[2]) });
        assert_eq!(cokernel(&int_matrix(&[&[2, 0], &[0, 0]])).free_rank, 1);
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&int_matrix(&[&[1, 1]]));
        assert_eq!(k, int_matrix(&[&[1], &[-1]]));
        assert_eq!(kernel_basis(&IntegerMatrix::identity(2)).cols(), 0);
        assert_eq!(kernel_basis(&IntegerMatrix::zeros(1, 2)).cols(), 2);
        // Saturation: ker of (2 4) is spanned by (2,-1), not (4,-2).
        let k = kernel_basis(&int_matrix(&[&[2, 4]]));
        assert_eq!(k, int_matrix(&[&[2], &[-1]]));
    }

    #[test]
    fn dual_hom_examples() {
        assert_eq!(dual_hom(&int_matrix(&[&[1, 1]])), int_matrix(&[&[1], &[1]]));
        assert_eq!(dual_hom(&IntegerMatrix::identity(2)), IntegerMatrix::identity(2));
        let s = int_matrix(&[&[2, 0], &[0, 3]]);
        assert_eq!(dual_hom(&s), s);
    }

    #[test]
    fn quotient_examples() {
        let (g, p) = quotient_lattice(2, &int_matrix(&[&[1], &[0]])).unwrap();
        assert_eq!(g, FgAbelianGroup::free(1));
        // Projection kills (1,0) and is onto ℤ.
        assert!(p.mul_vec(&int_vec(&[1, 0])).iter().all(Zero::is_zero));
        assert_eq!(p.mul_vec(&int_vec(&[0, 1]))[0].abs(), int(1));

        let (g, _) = quotient_lattice(2, &int_matrix(&[&[2], &[0]])).unwrap();
        assert_eq!(g, FgAbelianGroup { free_rank: 1, torsion: int_vec(&[2]) });

        let (g, _) = quotient_lattice(3, &int_matrix(&[&[1, 0], &[0, 1], &[0, 0]])).unwrap();
        assert_eq!(g.free_rank, 1);

        let err = quotient_lattice(2, &int_matrix(&[&[1, 2], &[1, 2]])).unwrap_err();
        assert!(matches!(err, Error::NotSublatticeBasis(_)));
    }

    #[test]
    fn hermite_form_is_canonical() {
        let a = hermite_rows(&[int_vec(&[2, 4]), int_vec(&[1, 3])]);
        let b = hermite_rows(&[int_vec(&[1, 1]), int_vec(&[0, 2])]);
        assert_eq!(a, b);
        assert_eq!(a, vec![int_vec(&[1, 1]), int_vec(&[0, 2])]);
    }

    #[test]
    fn invariants_normalize() {
        let g = FgAbelianGroup::from_invariants(0, &int_vec(&[2, 3]));
        assert_eq!(g.torsion, int_vec(&[6]));
        assert_eq!(g.order(), Some(int(6)));
    }
}
