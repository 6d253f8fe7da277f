use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::json::{gaussian_to_value, rat_matrix_to_value, value_to_gaussian, value_to_rat_matrix};
use crate::linalg::{ComplexMatrix, RationalMatrix, Subspace};
use crate::report::Report;

pub type ComplexSubspace = Subspace<GaussianRational>;

/// Which argument of `Q` is conjugated in the positivity form on `V^{p,q}`,
/// with `Q(x, y) = xᵀ Q y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PositivityConvention {
    /// `i^{p−q} Q(v̄, v) > 0`. With `Q = [[0,1],[−1,0]]` this accepts `F¹ = ⟨(i,1)⟩`.
    #[default]
    ConjugateFirst,
    /// `i^{p−q} Q(v, v̄) > 0`, which differs from the first by `(−1)^weight`.
    ConjugateSecond,
}

/// A pure weight-`n` Hodge structure on `V = ℚ^dim` polarized by `Q`, given by
/// its Hodge filtration.
///
/// `filtration[p]` holds generators of `F^p`. Steps that are not listed are
/// `V` below the lowest Hodge level and `0` above the highest; any step strictly
/// between must be listed.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarizedHodgeData {
    pub dim: usize,
    pub weight: i64,
    pub q: RationalMatrix,
    pub hodge_numbers: BTreeMap<(i64, i64), usize>,
    pub filtration: BTreeMap<i64, Vec<Vec<GaussianRational>>>,
}

impl PolarizedHodgeData {
    pub fn new(
        dim: usize,
        weight: i64,
        q: RationalMatrix,
        hodge_numbers: BTreeMap<(i64, i64), usize>,
        filtration: BTreeMap<i64, Vec<Vec<GaussianRational>>>,
    ) -> Result<Self> {
        if q.rows() != dim || q.cols() != dim {
            return Err(Error::Dimension(format!("Q is {}x{}, expected {dim}x{dim}", q.rows(), q.cols())));
        }
        for &(p, qq) in hodge_numbers.keys() {
            if p + qq != weight {
                return Err(Error::InvalidHodge(format!("h^{{{p},{qq}}} does not have weight {weight}")));
            }
        }
        for (p, vs) in &filtration {
            if let Some(v) = vs.iter().find(|v| v.len() != dim) {
                return Err(Error::Dimension(format!("F^{p} generator has length {}, expected {dim}", v.len())));
            }
        }
        let h = Self { dim, weight, q, hodge_numbers, filtration };
        if let Some((lo, hi)) = h.level_range() {
            for p in lo + 1..=hi {
                if !h.filtration.contains_key(&p) {
                    return Err(Error::InvalidHodge(format!("F^{p} is not listed")));
                }
            }
        }
        Ok(h)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: String| Error::Input(m);
        let dim = v.get("dim").and_then(Value::as_u64).ok_or_else(|| bad("missing \"dim\"".into()))? as usize;
        let weight = v.get("weight").and_then(Value::as_i64).ok_or_else(|| bad("missing \"weight\"".into()))?;
        let q = value_to_rat_matrix(v.get("Q").ok_or_else(|| bad("missing \"Q\"".into()))?).map_err(bad)?;
        let mut hodge_numbers = BTreeMap::new();
        let hn =
            v.get("hodge_numbers").and_then(Value::as_object).ok_or_else(|| bad("missing \"hodge_numbers\"".into()))?;
        for (key, val) in hn {
            let (p, qq) = key.split_once(',').ok_or_else(|| bad(format!("Hodge number key {key:?} is not \"p,q\"")))?;
            let p: i64 = p.trim().parse().map_err(|_| bad(format!("bad key {key:?}")))?;
            let qq: i64 = qq.trim().parse().map_err(|_| bad(format!("bad key {key:?}")))?;
            let h = val.as_u64().ok_or_else(|| bad(format!("h^{{{key}}} must be a nonnegative integer")))?;
            if h > 0 {
                hodge_numbers.insert((p, qq), h as usize);
            }
        }
        let mut filtration = BTreeMap::new();
        if let Some(f) = v.get("filtration") {
            let f = f.as_object().ok_or_else(|| bad("\"filtration\" must be an object".into()))?;
            for (key, gens) in f {
                let p: i64 = key.trim().parse().map_err(|_| bad(format!("bad filtration index {key:?}")))?;
                let gens = gens.as_array().ok_or_else(|| bad(format!("F^{p} must be a list of vectors")))?;
                let vs = gens
                    .iter()
                    .map(|g| {
                        g.as_array()
                            .ok_or_else(|| format!("F^{p} generator must be an array"))?
                            .iter()
                            .map(value_to_gaussian)
                            .collect::<std::result::Result<Vec<_>, _>>()
                    })
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(bad)?;
                filtration.insert(p, vs);
            }
        }
        Self::new(dim, weight, q, hodge_numbers, filtration)
    }

    pub fn to_json(&self) -> Value {
        let hn: Map<String, Value> =
            self.hodge_numbers.iter().map(|(&(p, q), &h)| (format!("{p},{q}"), Value::from(h))).collect();
        let f: Map<String, Value> = self
            .filtration
            .iter()
            .map(|(p, vs)| {
                let gens = vs.iter().map(|v| Value::Array(v.iter().map(gaussian_to_value).collect())).collect();
                (p.to_string(), Value::Array(gens))
            })
            .collect();
        json!({
            "dim": self.dim,
            "weight": self.weight,
            "Q": rat_matrix_to_value(&self.q),
            "hodge_numbers": hn,
            "filtration": f,
        })
    }

    /// Lowest and highest `p` with `h^{p,q} > 0`.
    pub fn level_range(&self) -> Option<(i64, i64)> {
        let lo = self.hodge_numbers.keys().map(|k| k.0).min()?;
        let hi = self.hodge_numbers.keys().map(|k| k.0).max()?;
        Some((lo, hi))
    }

    pub fn hodge_number(&self, p: i64, q: i64) -> usize {
        self.hodge_numbers.get(&(p, q)).copied().unwrap_or(0)
    }

    pub fn f(&self, p: i64) -> ComplexSubspace {
        if let Some(vs) = self.filtration.get(&p) {
            return Subspace::span(self.dim, vs);
        }
        match self.level_range() {
            Some((lo, _)) if p <= lo => Subspace::full(self.dim),
            None if p <= 0 => Subspace::full(self.dim),
            _ => Subspace::zero(self.dim),
        }
    }

    /// `V^{p,n−p} = F^p ∩ conj(F^{n−p})`.
    pub fn hodge_component(&self, p: i64) -> ComplexSubspace {
        self.f(p).intersection(&conjugate(&self.f(self.weight - p)))
    }

    pub fn q_complex(&self) -> ComplexMatrix {
        complexify(&self.q)
    }

    /// The same data with every listed filtration step moved by `g`.
    pub fn transformed(&self, g: &ComplexMatrix) -> Self {
        let filtration =
            self.filtration.iter().map(|(&p, vs)| (p, vs.iter().map(|v| g.mul_vec(v)).collect())).collect();
        Self { filtration, ..self.clone() }
    }
}

pub fn complexify(m: &RationalMatrix) -> ComplexMatrix {
    m.map(|x| GaussianRational::from_real(x.clone()))
}

pub fn conjugate(s: &ComplexSubspace) -> ComplexSubspace {
    let vs: Vec<Vec<GaussianRational>> =
        s.basis().iter().map(|v| v.iter().map(GaussianRational::conj).collect()).collect();
    Subspace::span(s.ambient(), &vs)
}

fn bilinear(q: &ComplexMatrix, x: &[GaussianRational], y: &[GaussianRational]) -> GaussianRational {
    crate::linalg::dot(x, &q.mul_vec(y))
}

/// Gram matrix `M` of the positivity form on a basis `b` of `V^{p,q}`, so that
/// the form at `Σ cₐbₐ` is `c̄ᵀ M c`.
pub fn positivity_gram(
    q: &ComplexMatrix,
    basis: &[Vec<GaussianRational>],
    p: i64,
    qq: i64,
    convention: PositivityConvention,
) -> ComplexMatrix {
    let phase = GaussianRational::i_pow(p - qq);
    let conj = |v: &[GaussianRational]| v.iter().map(GaussianRational::conj).collect::<Vec<_>>();
    ComplexMatrix::from_fn(basis.len(), basis.len(), |a, b| {
        let value = match convention {
            PositivityConvention::ConjugateFirst => bilinear(q, &conj(&basis[a]), &basis[b]),
            PositivityConvention::ConjugateSecond => bilinear(q, &basis[b], &conj(&basis[a])),
        };
        phase.clone() * value
    })
}

/// Hermitian and positive definite, by leading principal minors.
pub fn is_positive_definite_hermitian(m: &ComplexMatrix) -> bool {
    let n = m.rows();
    for a in 0..n {
        for b in 0..n {
            if *m.get(a, b) != m.get(b, a).conj() {
                return false;
            }
        }
    }
    (1..=n).all(|k| {
        let idx: Vec<usize> = (0..k).collect();
        let d = m.select_rows(&idx).select_columns(&idx).determinant();
        d.is_real() && d.re > BigRational::zero()
    })
}

pub fn validate_hodge(h: &PolarizedHodgeData) -> Report {
    validate_hodge_with(h, PositivityConvention::default())
}

pub fn validate_hodge_with(h: &PolarizedHodgeData, convention: PositivityConvention) -> Report {
    let mut r = Report::new("polarized Hodge structure");
    let n = h.weight;
    let d = h.dim;

    let total: usize = h.hodge_numbers.values().sum();
    r.check("hodge numbers sum", total == d, format!("sum of h^{{p,q}} = {total}, dim = {d}"));
    let asym: Vec<String> = h
        .hodge_numbers
        .iter()
        .filter(|(&(p, q), &v)| h.hodge_number(q, p) != v)
        .map(|(&(p, q), _)| format!("h^{{{p},{q}}} != h^{{{q},{p}}}"))
        .collect();
    r.check("hodge symmetry", asym.is_empty(), if asym.is_empty() { "ok".into() } else { asym.join("; ") });

    let sign = if n.rem_euclid(2) == 0 { BigRational::one() } else { -BigRational::one() };
    let symmetric = h.q.transpose() == h.q.scale(&sign);
    r.check(
        "form symmetry",
        symmetric,
        if n % 2 == 0 { "Q must be symmetric for even weight" } else { "Q must be alternating for odd weight" },
    );
    let det = h.q.determinant();
    r.check("form nondegenerate", !det.is_zero(), format!("det Q = {det}"));

    let Some((lo, hi)) = h.level_range() else {
        r.check("filtration", d == 0, "no Hodge numbers");
        return r;
    };

    let mut decreasing = Vec::new();
    let mut dims = Vec::new();
    for p in lo..=hi + 1 {
        let fp = h.f(p);
        if !h.f(p + 1).is_subspace_of(&fp) {
            decreasing.push(format!("F^{} not inside F^{p}", p + 1));
        }
        let expected: usize = h.hodge_numbers.iter().filter(|(k, _)| k.0 >= p).map(|(_, &v)| v).sum();
        if fp.dim() != expected {
            dims.push(format!("dim F^{p} = {}, expected {expected}", fp.dim()));
        }
    }
    r.check(
        "filtration decreasing",
        decreasing.is_empty(),
        if decreasing.is_empty() { "ok".into() } else { decreasing.join("; ") },
    );
    r.check("filtration dimensions", dims.is_empty(), if dims.is_empty() { "ok".into() } else { dims.join("; ") });

    let components: Vec<(i64, ComplexSubspace)> = (lo..=hi).map(|p| (p, h.hodge_component(p))).collect();
    let mut bad = Vec::new();
    for (p, v) in &components {
        let want = h.hodge_number(*p, n - p);
        if v.dim() != want {
            bad.push(format!("dim V^{{{p},{}}} = {}, expected {want}", n - p, v.dim()));
        }
        let mirror = components.iter().find(|c| c.0 == n - p).map(|c| c.1.clone()).unwrap_or_else(|| Subspace::zero(d));
        if conjugate(v) != mirror {
            bad.push(format!("conj V^{{{p},{}}} != V^{{{},{p}}}", n - p, n - p));
        }
    }
    let sum = components.iter().fold(Subspace::zero(d), |acc, c| acc.sum(&c.1));
    let dim_total: usize = components.iter().map(|c| c.1.dim()).sum();
    if sum.dim() != d || dim_total != d {
        bad.push(format!("components span {} of {d} dimensions (total {dim_total})", sum.dim()));
    }
    r.check(
        "hodge decomposition",
        bad.is_empty(),
        if bad.is_empty() { "V = ⊕ V^{p,q}".into() } else { bad.join("; ") },
    );

    let qc = h.q_complex();
    let mut orth = Vec::new();
    for p in lo..=hi {
        let a = h.f(p);
        let b = h.f(n - p + 1);
        let nonzero = a.basis().iter().any(|x| b.basis().iter().any(|y| !bilinear(&qc, x, y).is_zero()));
        if nonzero {
            orth.push(format!("Q(F^{p}, F^{}) != 0", n - p + 1));
        }
    }
    r.check(
        "first bilinear relation",
        orth.is_empty(),
        if orth.is_empty() { "Q(F^p, F^{n-p+1}) = 0".into() } else { orth.join("; ") },
    );

    let mut neg = Vec::new();
    for (p, v) in &components {
        if v.dim() == 0 {
            continue;
        }
        let gram = positivity_gram(&qc, v.basis(), *p, n - p, convention);
        if !is_positive_definite_hermitian(&gram) {
            neg.push(format!("form on V^{{{p},{}}} is not positive definite (Gram {})", n - p, gram_text(&gram)));
        }
    }
    let label = match convention {
        PositivityConvention::ConjugateFirst => "i^{p-q} Q(conj v, v) > 0",
        PositivityConvention::ConjugateSecond => "i^{p-q} Q(v, conj v) > 0",
    };
    r.check("positivity", neg.is_empty(), if neg.is_empty() { label.to_string() } else { neg.join("; ") });
    r
}

fn gram_text(m: &ComplexMatrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| format!("[{}]", m.row(i).iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}
