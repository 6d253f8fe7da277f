use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::cone::Cone;
use crate::error::{Error, Result};
use crate::report::Report;

/// A finite collection of cones closed under taking faces.
///
/// `maximal_cones` are the inclusion-maximal input cones; `all_cones` is the
/// face closure, always containing `{0}`, sorted by dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    lattice_rank: usize,
    maximal_cones: Vec<Cone>,
    all_cones: Vec<Cone>,
}

/// Wire form `{"lattice_rank": n, "maximal_cones": [[[..], ..], ..]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FanSpec {
    pub lattice_rank: usize,
    pub maximal_cones: Vec<ConeSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConeSpec(#[serde(with = "crate::json::bigint_vecs")] pub Vec<Vec<BigInt>>);

impl Fan {
    pub fn new(lattice_rank: usize, cones: Vec<Cone>) -> Result<Self> {
        if let Some(c) = cones.iter().find(|c| c.ambient_rank() != lattice_rank) {
            return Err(Error::Dimension(format!(
                "cone {c} has ambient rank {}, fan lattice rank is {lattice_rank}",
                c.ambient_rank()
            )));
        }
        let mut closure: BTreeSet<Cone> = BTreeSet::new();
        closure.insert(Cone::zero(lattice_rank));
        let mut proper_faces: BTreeSet<Cone> = BTreeSet::new();
        for c in &cones {
            for f in c.faces() {
                if &f != c {
                    proper_faces.insert(f.clone());
                }
                closure.insert(f);
            }
        }
        let mut maximal: Vec<Cone> = cones.into_iter().filter(|c| !proper_faces.contains(c)).collect();
        maximal.sort();
        maximal.dedup();
        if maximal.is_empty() {
            maximal.push(Cone::zero(lattice_rank));
        }
        Ok(Self { lattice_rank, maximal_cones: maximal, all_cones: closure.into_iter().collect() })
    }

    pub fn from_spec(spec: &FanSpec) -> Result<Self> {
        let cones =
            spec.maximal_cones.iter().map(|c| Cone::new(spec.lattice_rank, c.0.clone())).collect::<Result<Vec<_>>>()?;
        Self::new(spec.lattice_rank, cones)
    }

    pub fn to_spec(&self) -> FanSpec {
        FanSpec {
            lattice_rank: self.lattice_rank,
            maximal_cones: self.maximal_cones.iter().map(|c| ConeSpec(c.generators().to_vec())).collect(),
        }
    }

    /// The fan of all faces of a single cone.
    pub fn from_cone(cone: Cone) -> Self {
        let n = cone.ambient_rank();
        Self::new(n, vec![cone]).expect("single cone fan")
    }

    pub fn lattice_rank(&self) -> usize {
        self.lattice_rank
    }

    pub fn maximal_cones(&self) -> &[Cone] {
        &self.maximal_cones
    }

    pub fn all_cones(&self) -> &[Cone] {
        &self.all_cones
    }

    pub fn contains(&self, cone: &Cone) -> bool {
        self.all_cones.binary_search(cone).is_ok()
    }

    pub fn cones_of_dim(&self, d: usize) -> impl Iterator<Item = &Cone> {
        self.all_cones.iter().filter(move |c| c.dim() == d)
    }

    /// Primitive generators of the one-dimensional cones.
    pub fn rays(&self) -> Vec<Vec<BigInt>> {
        let mut out: Vec<Vec<BigInt>> = self.cones_of_dim(1).flat_map(|c| c.rays().to_vec()).collect();
        out.sort();
        out
    }

    pub fn require(&self, cone: &Cone) -> Result<()> {
        if self.contains(cone) {
            Ok(())
        } else {
            Err(Error::ConeNotInFan(cone.to_string()))
        }
    }
}

/// Face closure, strong convexity, and the pairwise intersection condition.
pub fn fan_validate(fan: &Fan) -> Report {
    let mut report = Report::new(format!("fan in Z^{}", fan.lattice_rank));
    let mut convex = true;
    for c in &fan.maximal_cones {
        if !c.is_strongly_convex() {
            convex = false;
            report.fail("strongly convex", format!("{c} contains a line"));
        }
    }
    if convex {
        report.check("strongly convex", true, format!("{} maximal cones", fan.maximal_cones.len()));
    }

    let mut closed = true;
    for c in &fan.all_cones {
        for f in c.faces() {
            if !fan.contains(&f) {
                closed = false;
                report.fail("face closure", format!("face {f} of {c} missing"));
            }
        }
    }
    if closed {
        report.check("face closure", true, format!("{} cones", fan.all_cones.len()));
    }

    // Every cone is a face of a maximal one, so checking maximal pairs suffices.
    let mut meets = true;
    for (i, a) in fan.maximal_cones.iter().enumerate() {
        for b in &fan.maximal_cones[i + 1..] {
            match a.intersection(b) {
                Ok(m) => {
                    if !m.is_face_of(a) || !m.is_face_of(b) {
                        meets = false;
                        report.fail("intersections are faces", format!("{a} and {b} meet in {m}, not a common face"));
                    }
                }
                Err(e) => {
                    meets = false;
                    report.fail("intersections are faces", format!("{a} and {b}: {e}"));
                }
            }
        }
    }
    if meets {
        report.check("intersections are faces", true, "all pairs of maximal cones meet in common faces");
    }
    report
}
