use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::group::GroupTable;
use crate::error::{Error, Result};

/// Largest number of composable triples checked for associativity.
pub const MAX_ASSOCIATIVITY_CHECKS: usize = 5_000_000;

/// A finite groupoid `X₁ ⇉ X₀`.
///
/// Arrows are indexed `0..arrow_count`. `compose(f, g)` is `f ∘ g`, defined
/// when `dst(g) = src(f)`.
#[derive(Clone, Debug)]
pub struct FiniteGroupoid {
    objects: usize,
    src: Vec<usize>,
    dst: Vec<usize>,
    identities: Vec<usize>,
    compose: HashMap<(usize, usize), usize>,
    inverses: Vec<usize>,
    outgoing: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ArrowSpec {
    pub id: usize,
    pub src: usize,
    pub dst: usize,
}

/// Wire form; `compose` triples are `[left, right, result]` with `result = left ∘ right`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupoidSpec {
    pub objects: usize,
    pub arrows: Vec<ArrowSpec>,
    pub compose: Vec<[usize; 3]>,
    pub identities: Vec<usize>,
}

/// A connected component with the automorphism group of its smallest object.
#[derive(Clone, Debug)]
pub struct Component {
    pub objects: Vec<usize>,
    pub base: usize,
    pub group: GroupTable,
}

impl FiniteGroupoid {
    /// Builds and validates a groupoid from arrow endpoints, identities and a
    /// composition table keyed by `(left, right)`.
    pub fn new(
        objects: usize,
        src: Vec<usize>,
        dst: Vec<usize>,
        identities: Vec<usize>,
        compose: HashMap<(usize, usize), usize>,
    ) -> Result<Self> {
        let n = src.len();
        let bad = |msg: String| Err(Error::InvalidGroupoid(msg));
        if dst.len() != n {
            return bad("source and target lists differ in length".into());
        }
        if let Some(a) = (0..n).find(|&a| src[a] >= objects || dst[a] >= objects) {
            return bad(format!("arrow {a} has an endpoint outside 0..{objects}"));
        }
        if identities.len() != objects {
            return bad(format!("{} identities given for {objects} objects", identities.len()));
        }
        for (x, &e) in identities.iter().enumerate() {
            if e >= n || src[e] != x || dst[e] != x {
                return bad(format!("identity of object {x} is not a loop at {x}"));
            }
        }
        let mut outgoing = vec![Vec::new(); objects];
        for a in 0..n {
            outgoing[src[a]].push(a);
        }
        for (&(f, g), &h) in &compose {
            if f >= n || g >= n || h >= n {
                return bad(format!("composition ({f},{g}) -> {h} mentions an unknown arrow"));
            }
            if dst[g] != src[f] {
                return bad(format!("composition given for non-composable pair ({f},{g})"));
            }
            if src[h] != src[g] || dst[h] != dst[f] {
                return bad(format!("{f} o {g} = {h} has the wrong endpoints"));
            }
        }
        for g in 0..n {
            for &f in &outgoing[dst[g]] {
                if !compose.contains_key(&(f, g)) {
                    return bad(format!("composition missing for composable pair ({f},{g})"));
                }
            }
        }
        for a in 0..n {
            if compose[&(identities[dst[a]], a)] != a || compose[&(a, identities[src[a]])] != a {
                return bad(format!("identities are not neutral for arrow {a}"));
            }
        }
        let mut checks = 0usize;
        for h in 0..n {
            for &g in &outgoing[dst[h]] {
                for &f in &outgoing[dst[g]] {
                    checks += 1;
                    if checks > MAX_ASSOCIATIVITY_CHECKS {
                        return Err(Error::TooLarge("too many composable triples to verify associativity".into()));
                    }
                    if compose[&(compose[&(f, g)], h)] != compose[&(f, compose[&(g, h)])] {
                        return bad(format!("associativity fails for ({f},{g},{h})"));
                    }
                }
            }
        }
        let mut inverses = Vec::with_capacity(n);
        for a in 0..n {
            let inv = outgoing[dst[a]].iter().copied().find(|&b| {
                dst[b] == src[a] && compose[&(b, a)] == identities[src[a]] && compose[&(a, b)] == identities[dst[a]]
            });
            match inv {
                Some(b) => inverses.push(b),
                None => return bad(format!("arrow {a} is not invertible")),
            }
        }
        Ok(Self { objects, src, dst, identities, compose, inverses, outgoing })
    }

    pub fn from_spec(spec: &GroupoidSpec) -> Result<Self> {
        let n = spec.arrows.len();
        let mut index = HashMap::new();
        let mut src = vec![0; n];
        let mut dst = vec![0; n];
        for (k, a) in spec.arrows.iter().enumerate() {
            if index.insert(a.id, k).is_some() {
                return Err(Error::InvalidGroupoid(format!("duplicate arrow id {}", a.id)));
            }
            src[k] = a.src;
            dst[k] = a.dst;
        }
        let lookup =
            |id: usize| index.get(&id).copied().ok_or_else(|| Error::InvalidGroupoid(format!("unknown arrow id {id}")));
        let mut compose = HashMap::new();
        for &[l, r, res] in &spec.compose {
            if compose.insert((lookup(l)?, lookup(r)?), lookup(res)?).is_some() {
                return Err(Error::InvalidGroupoid(format!("composition ({l},{r}) given twice")));
            }
        }
        let identities = spec.identities.iter().map(|&i| lookup(i)).collect::<Result<Vec<_>>>()?;
        Self::new(spec.objects, src, dst, identities, compose)
    }

    pub fn to_spec(&self) -> GroupoidSpec {
        let mut compose: Vec<[usize; 3]> = self.compose.iter().map(|(&(f, g), &h)| [f, g, h]).collect();
        compose.sort();
        GroupoidSpec {
            objects: self.objects,
            arrows: (0..self.arrow_count()).map(|a| ArrowSpec { id: a, src: self.src[a], dst: self.dst[a] }).collect(),
            compose,
            identities: self.identities.clone(),
        }
    }

    /// A group as a one-object groupoid `BG`.
    pub fn classifying(g: &GroupTable) -> Self {
        Self::pair_groupoid(1, g)
    }

    /// Objects `0..k` with one arrow `i → j` for every `h ∈ H`; arrow
    /// `(i, j, h)` has index `(i·k + j)·|H| + h` and `(j,l,h₂)∘(i,j,h₁) = (i,l,h₂h₁)`.
    pub fn pair_groupoid(k: usize, h: &GroupTable) -> Self {
        let m = h.order();
        let id = |i: usize, j: usize, g: usize| (i * k + j) * m + g;
        let (mut src, mut dst) = (Vec::new(), Vec::new());
        for i in 0..k {
            for j in 0..k {
                for _ in 0..m {
                    src.push(i);
                    dst.push(j);
                }
            }
        }
        let mut compose = HashMap::new();
        for i in 0..k {
            for j in 0..k {
                for l in 0..k {
                    for g1 in 0..m {
                        for g2 in 0..m {
                            compose.insert((id(j, l, g2), id(i, j, g1)), id(i, l, h.mul(g2, g1)));
                        }
                    }
                }
            }
        }
        let identities = (0..k).map(|i| id(i, i, h.identity())).collect();
        Self::new(k, src, dst, identities, compose).expect("pair groupoid")
    }

    /// Objects only, identity arrows only.
    pub fn discrete(m: usize) -> Self {
        Self::disjoint_union(&vec![Self::classifying(&GroupTable::trivial()); m])
    }

    /// The 0-dimensional DM stack `⊔ BGᵢ`.
    pub fn from_groups(groups: &[GroupTable]) -> Self {
        Self::disjoint_union(&groups.iter().map(Self::classifying).collect::<Vec<_>>())
    }

    pub fn disjoint_union(parts: &[FiniteGroupoid]) -> Self {
        let (mut objects, mut arrows) = (0, 0);
        let (mut src, mut dst, mut identities) = (Vec::new(), Vec::new(), Vec::new());
        let mut compose = HashMap::new();
        for p in parts {
            src.extend(p.src.iter().map(|x| x + objects));
            dst.extend(p.dst.iter().map(|x| x + objects));
            identities.extend(p.identities.iter().map(|a| a + arrows));
            compose.extend(p.compose.iter().map(|(&(f, g), &h)| ((f + arrows, g + arrows), h + arrows)));
            objects += p.objects;
            arrows += p.arrow_count();
        }
        Self::new(objects, src, dst, identities, compose).expect("disjoint union")
    }

    pub fn object_count(&self) -> usize {
        self.objects
    }

    pub fn arrow_count(&self) -> usize {
        self.src.len()
    }

    pub fn src(&self, a: usize) -> usize {
        self.src[a]
    }

    pub fn dst(&self, a: usize) -> usize {
        self.dst[a]
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identities[x]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `f ∘ g`, `None` unless `dst(g) = src(f)`.
    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        self.compose.get(&(f, g)).copied()
    }

    pub fn outgoing(&self, x: usize) -> &[usize] {
        &self.outgoing[x]
    }

    pub fn max_out_degree(&self) -> usize {
        self.outgoing.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Connected components, each with its objects sorted and the automorphism
    /// group of its smallest object.
    pub fn decompose(&self) -> Vec<Component> {
        let mut comp = vec![usize::MAX; self.objects];
        let mut out = Vec::new();
        for start in 0..self.objects {
            if comp[start] != usize::MAX {
                continue;
            }
            // Arrows are invertible, so forward reachability is the component.
            let mut members = vec![start];
            comp[start] = out.len();
            let mut i = 0;
            while i < members.len() {
                for &a in &self.outgoing[members[i]] {
                    let y = self.dst[a];
                    if comp[y] == usize::MAX {
                        comp[y] = out.len();
                        members.push(y);
                    }
                }
                i += 1;
            }
            members.sort_unstable();
            out.push(Component { base: start, group: self.automorphism_group(start), objects: members });
        }
        out
    }

    pub fn automorphism_group(&self, x: usize) -> GroupTable {
        let loops: Vec<usize> = self.outgoing[x].iter().copied().filter(|&a| self.dst[a] == x).collect();
        let pos: HashMap<usize, usize> = loops.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let table = loops.iter().map(|&f| loops.iter().map(|&g| pos[&self.compose[&(f, g)]]).collect()).collect();
        GroupTable::new(loops.len(), table, pos[&self.identities[x]]).expect("automorphism group")
    }

    /// `Σ 1/|Gᵢ|` over connected components.
    pub fn mass(&self) -> BigRational {
        self.decompose()
            .iter()
            .fold(BigRational::zero(), |acc, c| acc + BigRational::new(BigInt::from(1), BigInt::from(c.group.order())))
    }
}

/// The action groupoid `G ⋉ X`: arrow `(g, x)` has index `g·|X| + x`, source
/// `x` and target `g·x`; `(h, gx) ∘ (g, x) = (hg, x)`.
pub fn action_groupoid(g: &GroupTable, set_size: usize, action: &[Vec<usize>]) -> Result<FiniteGroupoid> {
    let n = g.order();
    if action.len() != n || action.iter().any(|r| r.len() != set_size) {
        return Err(Error::InvalidAction(format!("action table must be {n}x{set_size}")));
    }
    if let Some((a, x)) =
        (0..n).flat_map(|a| (0..set_size).map(move |x| (a, x))).find(|&(a, x)| action[a][x] >= set_size)
    {
        return Err(Error::InvalidAction(format!("{a} sends {x} outside the set")));
    }
    if let Some(x) = (0..set_size).find(|&x| action[g.identity()][x] != x) {
        return Err(Error::InvalidAction(format!("identity axiom fails: e.{x} = {}", action[g.identity()][x])));
    }
    for a in 0..n {
        for b in 0..n {
            for x in 0..set_size {
                if action[g.mul(a, b)][x] != action[a][action[b][x]] {
                    return Err(Error::InvalidAction(format!(
                        "compatibility axiom fails: ({a}{b}).{x} differs from {a}.({b}.{x})"
                    )));
                }
            }
        }
    }
    let id = |a: usize, x: usize| a * set_size + x;
    let mut src = Vec::with_capacity(n * set_size);
    let mut dst = Vec::with_capacity(n * set_size);
    for a in 0..n {
        for x in 0..set_size {
            src.push(x);
            dst.push(action[a][x]);
        }
    }
    let mut compose = HashMap::new();
    for a in 0..n {
        for x in 0..set_size {
            for b in 0..n {
                compose.insert((id(b, action[a][x]), id(a, x)), id(g.mul(b, a), x));
            }
        }
    }
    let identities = (0..set_size).map(|x| id(g.identity(), x)).collect();
    FiniteGroupoid::new(set_size, src, dst, identities, compose)
}
