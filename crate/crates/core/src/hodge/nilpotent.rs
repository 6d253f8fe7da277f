use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::json::{rat_matrix_to_value, rational_to_string, value_to_rat_matrix};
use crate::linalg::{ComplexMatrix, Field, Matrix, RationalMatrix};
use crate::report::Report;

use super::matrix_nullspace;
use super::structure::{complexify, validate_hodge, PolarizedHodgeData};

/// Doubling schedule used when no `y` samples are given.
pub const DEFAULT_Y_SAMPLES: [i64; 5] = [1, 2, 4, 8, 16];

/// `σ = Σ ℝ≥0 N_j` for commuting nilpotent `N_j ∈ End(ℚ^dim)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NilpotentCone {
    pub dim: usize,
    pub generators: Vec<RationalMatrix>,
    pub q: Option<RationalMatrix>,
}

impl NilpotentCone {
    pub fn new(dim: usize, generators: Vec<RationalMatrix>, q: Option<RationalMatrix>) -> Result<Self> {
        for (j, n) in generators.iter().enumerate() {
            if n.rows() != dim || n.cols() != dim {
                return Err(Error::Dimension(format!(
                    "N_{} is {}x{}, expected {dim}x{dim}",
                    j + 1,
                    n.rows(),
                    n.cols()
                )));
            }
        }
        if let Some(q) = &q {
            if q.rows() != dim || q.cols() != dim {
                return Err(Error::Dimension(format!("Q is {}x{}, expected {dim}x{dim}", q.rows(), q.cols())));
            }
        }
        Ok(Self { dim, generators, q })
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = Error::Input;
        let dim = v.get("dim").and_then(Value::as_u64).ok_or_else(|| bad("missing \"dim\"".into()))? as usize;
        let gens = v.get("generators").and_then(Value::as_array).ok_or_else(|| bad("missing \"generators\"".into()))?;
        let generators =
            gens.iter().map(|g| matrix_or_empty(g, dim)).collect::<std::result::Result<Vec<_>, _>>().map_err(bad)?;
        let q = match v.get("Q") {
            None | Some(Value::Null) => None,
            Some(q) => Some(matrix_or_empty(q, dim).map_err(bad)?),
        };
        Self::new(dim, generators, q)
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "dim": self.dim,
            "generators": self.generators.iter().map(rat_matrix_to_value).collect::<Vec<_>>(),
        });
        if let Some(q) = &self.q {
            v["Q"] = rat_matrix_to_value(q);
        }
        v
    }

    /// `Σ c_j N_j`.
    pub fn combination(&self, c: &[BigRational]) -> RationalMatrix {
        self.generators.iter().zip(c).fold(RationalMatrix::zeros(self.dim, self.dim), |acc, (n, x)| &acc + &n.scale(x))
    }

    /// Coefficients `c` with `Σ c_j N_j = m`, when `m` lies in the span.
    pub fn coefficients(&self, m: &RationalMatrix) -> Option<Vec<BigRational>> {
        if self.generators.is_empty() {
            return m.is_zero().then(Vec::new);
        }
        let cols: Vec<Vec<BigRational>> = self.generators.iter().map(|n| n.entries().to_vec()).collect();
        RationalMatrix::from_columns(&cols, self.dim * self.dim).solve(m.entries())
    }
}

fn matrix_or_empty(v: &Value, dim: usize) -> std::result::Result<RationalMatrix, String> {
    let m = value_to_rat_matrix(v)?;
    if dim == 0 && m.rows() == 0 {
        return Ok(RationalMatrix::zeros(0, 0));
    }
    Ok(m)
}

pub fn is_nilpotent<T: Field>(n: &Matrix<T>) -> bool {
    n.is_square() && n.pow(n.rows() as u32).is_zero()
}

/// `exp(N) = Σ_{k<dim} N^k / k!`, exact.
pub fn exp_nilpotent<T: Field + From<BigRational>>(n: &Matrix<T>) -> Result<Matrix<T>> {
    if !is_nilpotent(n) {
        return Err(Error::NotNilpotent(format!("{}x{} matrix has N^{} != 0", n.rows(), n.cols(), n.rows())));
    }
    let d = n.rows();
    let mut acc = Matrix::identity(d);
    let mut term = Matrix::identity(d);
    for k in 1..d.max(1) {
        let inv_k = T::from(BigRational::new(BigInt::one(), BigInt::from(k)));
        term = (&term * n).scale(&inv_k);
        acc = &acc + &term;
    }
    Ok(acc)
}

/// `log(U) = Σ_{k≥1} (−1)^{k+1} (U − I)^k / k` for unipotent `U`.
pub fn log_unipotent(u: &RationalMatrix) -> Result<RationalMatrix> {
    let d = u.rows();
    let x = u - &RationalMatrix::identity(d);
    if !is_nilpotent(&x) {
        return Err(Error::NotNilpotent("U − I is not nilpotent".into()));
    }
    let mut acc = RationalMatrix::zeros(d, d);
    let mut power = RationalMatrix::identity(d);
    for k in 1..d.max(1) {
        power = &power * &x;
        let c = BigRational::new(if k % 2 == 1 { BigInt::one() } else { -BigInt::one() }, BigInt::from(k));
        acc = &acc + &power.scale(&c);
    }
    Ok(acc)
}

/// `{X : XᵀQ + QX = 0}`.
pub fn form_algebra(q: &RationalMatrix) -> Vec<RationalMatrix> {
    matrix_nullspace(q.rows(), |x| vec![&(&x.transpose() * q) + &(q * x)])
}

fn preserves_form(n: &RationalMatrix, q: &RationalMatrix) -> bool {
    (&(&n.transpose() * q) + &(q * n)).is_zero()
}

pub fn validate_nilpotent_cone(c: &NilpotentCone, ambient_q: Option<&RationalMatrix>) -> Report {
    let mut r = Report::new("nilpotent cone");
    let d = c.dim;

    let not_nil: Vec<String> = c
        .generators
        .iter()
        .enumerate()
        .filter(|(_, n)| !is_nilpotent(*n))
        .map(|(j, _)| format!("N_{}", j + 1))
        .collect();
    r.check(
        "nilpotent",
        not_nil.is_empty(),
        if not_nil.is_empty() {
            format!("N^{d} = 0 for every generator")
        } else {
            format!("not nilpotent: {}", not_nil.join(", "))
        },
    );

    let mut pairs = Vec::new();
    for a in 0..c.rank() {
        for b in a + 1..c.rank() {
            if !c.generators[a].commutator(&c.generators[b]).is_zero() {
                pairs.push(format!("[N_{}, N_{}] != 0", a + 1, b + 1));
            }
        }
    }
    r.check(
        "commuting",
        pairs.is_empty(),
        if pairs.is_empty() { "all pairs commute".into() } else { pairs.join("; ") },
    );

    let cols: Vec<Vec<BigRational>> = c.generators.iter().map(|n| n.entries().to_vec()).collect();
    let rank = if cols.is_empty() { 0 } else { RationalMatrix::from_columns(&cols, d * d).rank() };
    r.check("independent", rank == c.rank(), format!("span has dimension {rank} for {} generators", c.rank()));

    if let Some(q) = ambient_q.or(c.q.as_ref()) {
        if q.rows() != d || q.cols() != d {
            r.fail("form preserved", format!("Q is {}x{}, expected {d}x{d}", q.rows(), q.cols()));
        } else {
            let bad: Vec<String> = c
                .generators
                .iter()
                .enumerate()
                .filter(|(_, n)| !preserves_form(n, q))
                .map(|(j, _)| format!("N_{}", j + 1))
                .collect();
            r.check(
                "form preserved",
                bad.is_empty(),
                if bad.is_empty() {
                    "N^T Q + Q N = 0".into()
                } else {
                    format!("N^T Q + Q N != 0 for {}", bad.join(", "))
                },
            );
        }
    }
    r
}

/// Basis of `{X : [X, N_j] = 0 ∀j}`, cut down to `{XᵀQ + QX = 0}` when `Q` is given.
pub fn centralizer_algebra(c: &NilpotentCone, ambient_q: Option<&RationalMatrix>) -> Vec<RationalMatrix> {
    let q = ambient_q.or(c.q.as_ref());
    matrix_nullspace(c.dim, |x| {
        let mut out: Vec<RationalMatrix> = c.generators.iter().map(|n| x.commutator(n)).collect();
        if let Some(q) = q {
            out.push(&(&x.transpose() * q) + &(q * x));
        }
        out
    })
}

fn y_label(y: &[BigRational]) -> String {
    format!("y = ({})", y.iter().map(rational_to_string).collect::<Vec<_>>().join(", "))
}

/// Expands a sample to one coordinate per generator; length-1 samples broadcast.
fn expand_sample(y: &[BigRational], r: usize) -> Result<Vec<BigRational>> {
    if y.iter().any(|x| !x.is_positive()) {
        return Err(Error::Input(format!("{} has a nonpositive coordinate", y_label(y))));
    }
    match y.len() {
        n if n == r => Ok(y.to_vec()),
        1 => Ok(vec![y[0].clone(); r]),
        n => Err(Error::Input(format!("y sample has {n} coordinates, the cone has {r} generators"))),
    }
}

/// Horizontality `N_j F^p ⊆ F^{p−1}` and, for each sample `y`, whether
/// `exp(Σ i·y_j N_j)·F` lies in the period domain.
pub fn nilpotent_orbit_check(
    c: &NilpotentCone,
    h: &PolarizedHodgeData,
    y_samples: &[Vec<BigRational>],
) -> Result<Report> {
    if c.dim != h.dim {
        return Err(Error::Dimension(format!("cone acts on dimension {}, Hodge data has dimension {}", c.dim, h.dim)));
    }
    if let Some(j) = c.generators.iter().position(|n| !is_nilpotent(n)) {
        return Err(Error::NotNilpotent(format!("N_{}", j + 1)));
    }
    let samples: Vec<Vec<BigRational>> = y_samples.iter().map(|y| expand_sample(y, c.rank())).collect::<Result<_>>()?;
    let mut r = Report::new("nilpotent orbit");

    let (lo, hi) = h.level_range().unwrap_or((0, 0));
    for (j, n) in c.generators.iter().enumerate() {
        let nc = complexify(n);
        let mut witnesses = Vec::new();
        let mut failures = Vec::new();
        for p in lo..=hi + 1 {
            let image = h.f(p).image(&nc);
            if image.is_subspace_of(&h.f(p - 1)) {
                witnesses.push(format!("dim N F^{p} = {} inside F^{}", image.dim(), p - 1));
            } else {
                failures.push(format!("N F^{p} not inside F^{}", p - 1));
            }
        }
        let ok = failures.is_empty();
        r.check(format!("horizontality N_{}", j + 1), ok, if ok { witnesses.join("; ") } else { failures.join("; ") });
    }

    let mut in_domain = Vec::new();
    for (y, label) in samples.iter().zip(y_samples) {
        let m = c.combination(y);
        let im = complexify(&m).scale(&GaussianRational::i());
        let g: ComplexMatrix = exp_nilpotent(&im)?;
        let moved = h.transformed(&g);
        let rep = validate_hodge(&moved);
        let detail = if rep.passed {
            "point of D".to_string()
        } else {
            rep.failures().map(|f| format!("{}: {}", f.name, f.detail)).collect::<Vec<_>>().join("; ")
        };
        in_domain.push(rep.passed);
        r.check(y_label(label), rep.passed, detail);
    }

    if !in_domain.is_empty() {
        let tail = in_domain.iter().rev().take_while(|&&b| b).count();
        let stable = tail >= 2.min(in_domain.len());
        let detail = if tail == in_domain.len() {
            format!("in D for all {} samples", in_domain.len())
        } else {
            format!("in D for the last {tail} of {} samples", in_domain.len())
        };
        r.check("stabilization", stable, detail);
    }
    Ok(r)
}

pub fn default_y_samples() -> Vec<Vec<BigRational>> {
    DEFAULT_Y_SAMPLES.iter().map(|&y| vec![BigRational::from_integer(BigInt::from(y))]).collect()
}
