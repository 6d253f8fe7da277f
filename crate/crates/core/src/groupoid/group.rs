use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite group as a multiplication table on `0..order`, `table[a][b] = a·b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GroupSpec", into = "GroupSpec")]
pub struct GroupTable {
    order: usize,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupSpec {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default)]
    pub identity: usize,
}

impl TryFrom<GroupSpec> for GroupTable {
    type Error = Error;

    fn try_from(s: GroupSpec) -> Result<Self> {
        GroupTable::new(s.order, s.table, s.identity)
    }
}

impl From<GroupTable> for GroupSpec {
    fn from(g: GroupTable) -> Self {
        GroupSpec { order: g.order, table: g.table, identity: g.identity }
    }
}

impl GroupTable {
    /// Validates closure, identity, associativity and inverses.
    pub fn new(order: usize, table: Vec<Vec<usize>>, identity: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidGroup("a group has at least one element".into()));
        }
        if table.len() != order || table.iter().any(|r| r.len() != order) {
            return Err(Error::InvalidGroup(format!("table must be {order}x{order}")));
        }
        if let Some((a, b)) = pairs(order).find(|&(a, b)| table[a][b] >= order) {
            return Err(Error::InvalidGroup(format!("product {a}*{b} = {} is out of range", table[a][b])));
        }
        if identity >= order {
            return Err(Error::InvalidGroup(format!("identity {identity} is out of range")));
        }
        if let Some(a) = (0..order).find(|&a| table[identity][a] != a || table[a][identity] != a) {
            return Err(Error::InvalidGroup(format!("{identity} is not neutral for {a}")));
        }
        for a in 0..order {
            for b in 0..order {
                let ab = table[a][b];
                for c in 0..order {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!("associativity fails for ({a},{b},{c})")));
                    }
                }
            }
        }
        let mut inverses = Vec::with_capacity(order);
        for a in 0..order {
            match (0..order).find(|&b| table[a][b] == identity && table[b][a] == identity) {
                Some(b) => inverses.push(b),
                None => return Err(Error::InvalidGroup(format!("{a} has no inverse"))),
            }
        }
        Ok(Self { order, table, identity, inverses })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::new(n, table, 0).expect("cyclic group")
    }

    /// The symmetric group on `n` letters, elements in lexicographic order of
    /// their one-line notation; `(σ·τ)(i) = σ(τ(i))`.
    pub fn symmetric(n: usize) -> Self {
        let perms = permutations(n);
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).expect("permutation");
        let table =
            perms.iter().map(|s| perms.iter().map(|t| index(&t.iter().map(|&i| s[i]).collect())).collect()).collect();
        Self::new(perms.len(), table, 0).expect("symmetric group")
    }

    /// Elements `(a, b)` indexed `a·|H| + b`.
    pub fn direct_product(&self, other: &GroupTable) -> Self {
        let (m, n) = (self.order, other.order);
        let table = (0..m * n)
            .map(|x| (0..m * n).map(|y| self.table[x / n][y / n] * n + other.table[x % n][y % n]).collect())
            .collect();
        Self::new(m * n, table, self.identity * n + other.identity).expect("direct product")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn is_abelian(&self) -> bool {
        pairs(self.order).all(|(a, b)| self.table[a][b] == self.table[b][a])
    }

    /// The regular action on itself by left multiplication, `act[g][x] = g·x`.
    pub fn left_regular_action(&self) -> Vec<Vec<usize>> {
        self.table.clone()
    }
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |a| (0..n).map(move |b| (a, b)))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q: Vec<usize> = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}
