//! Finite groups given by multiplication tables, homomorphisms between them and
//! the constructions the embedding-problem layer needs: subgroups, quotients,
//! fiber products, commutator subgroups and homomorphism search.
//!
//! Elements are plain indices `0..order`. Every choice of representative made
//! anywhere in the crate picks the smallest index, so outputs are reproducible.

mod hom;
mod ops;
mod search;
mod standard;

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub use hom::GroupHom;
pub use ops::{commutator_subgroup, fiber_product, quotient, FiberProduct};
pub use search::{
    are_conjugate, conjugacy_classes, enumerate_homs, first_hom, node_budget, search_homs, HomConstraint,
    DEFAULT_NODE_BUDGET,
};
pub use standard::{elementary_abelian_2, standard_group, GroupKind, MAX_STANDARD_ORDER};

/// Groups up to this order get an exhaustive associativity check; larger ones
/// are sampled.
pub const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 256;
const ASSOCIATIVITY_SAMPLES: usize = 200_000;

struct GroupData {
    label: String,
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    identity: usize,
    names: Vec<String>,
    nonidentity: Vec<usize>,
    position: Vec<usize>,
    generators: Vec<usize>,
    element_orders: Vec<usize>,
}

/// A finite group stored as a validated Cayley table. Cloning is cheap.
#[derive(Clone)]
pub struct FiniteGroup(Arc<GroupData>);

impl FiniteGroup {
    /// Validates a Cayley table and derives identity, inverses, a canonical
    /// generating set and element orders.
    pub fn from_cayley_table(label: impl Into<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        Self::from_table_with_names(label, table, None)
    }

    pub(crate) fn from_table_with_names(
        label: impl Into<String>,
        table: Vec<Vec<usize>>,
        names: Option<Vec<String>>,
    ) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::MalformedTable("empty table".into()));
        }
        let mut mul = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::MalformedTable(format!(
                    "row {i} has length {} but the table has {n} rows",
                    row.len()
                )));
            }
            for &x in row {
                if x >= n {
                    return Err(Error::MalformedTable(format!("entry {x} in row {i} is out of range")));
                }
                mul.push(x as u32);
            }
        }
        Self::from_flat(label.into(), n, mul, names)
    }

    pub(crate) fn from_flat(
        label: String,
        n: usize,
        mul: Vec<u32>,
        names: Option<Vec<String>>,
    ) -> Result<Self> {
        let at = |a: usize, b: usize| mul[a * n + b] as usize;
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or(Error::NoIdentity)?;
        let mut inv = vec![0u32; n];
        for x in 0..n {
            let y = (0..n)
                .find(|&y| at(x, y) == identity && at(y, x) == identity)
                .ok_or(Error::NotInvertible(x))?;
            inv[x] = y as u32;
        }
        if n <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    let ab = at(a, b);
                    for c in 0..n {
                        if at(ab, c) != at(a, at(b, c)) {
                            return Err(Error::NotAssociative(a, b, c));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x6f62_7374);
            for _ in 0..ASSOCIATIVITY_SAMPLES {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if at(at(a, b), c) != at(a, at(b, c)) {
                    return Err(Error::NotAssociative(a, b, c));
                }
            }
        }
        let names = match names {
            Some(v) if v.len() == n => v,
            _ => (0..n).map(|i| format!("g{i}")).collect(),
        };
        let nonidentity: Vec<usize> = (0..n).filter(|&x| x != identity).collect();
        let mut position = vec![usize::MAX; n];
        for (p, &x) in nonidentity.iter().enumerate() {
            position[x] = p;
        }
        let element_orders = (0..n)
            .map(|x| {
                let mut k = 1;
                let mut y = x;
                while y != identity {
                    y = at(y, x);
                    k += 1;
                }
                k
            })
            .collect();
        let mut data = GroupData {
            label,
            order: n,
            mul,
            inv,
            identity,
            names,
            nonidentity,
            position,
            generators: Vec::new(),
            element_orders,
        };
        data.generators = greedy_generators(&data);
        Ok(FiniteGroup(Arc::new(data)))
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }

    pub fn order(&self) -> usize {
        self.0.order
    }

    pub fn identity(&self) -> usize {
        self.0.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.0.mul[a * self.0.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.0.inv[a] as usize
    }

    /// `g x g^-1`.
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// `x y x^-1 y^-1`.
    pub fn commutator(&self, x: usize, y: usize) -> usize {
        self.mul(self.mul(x, y), self.mul(self.inv(x), self.inv(y)))
    }

    pub fn pow(&self, x: usize, k: usize) -> usize {
        (0..k).fold(self.identity(), |acc, _| self.mul(acc, x))
    }

    pub fn name(&self, x: usize) -> &str {
        &self.0.names[x]
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn element_by_name(&self, name: &str) -> Option<usize> {
        self.0.names.iter().position(|s| s == name)
    }

    pub fn element_order(&self, x: usize) -> usize {
        self.0.element_orders[x]
    }

    pub fn exponent(&self) -> usize {
        self.0
            .element_orders
            .iter()
            .fold(1, |acc, &k| num_integer::lcm(acc, k))
    }

    /// Canonical generating set: greedily adds the smallest element outside the
    /// subgroup generated so far.
    pub fn generators(&self) -> &[usize] {
        &self.0.generators
    }

    /// Non-identity elements in increasing index order.
    pub fn nonidentity(&self) -> &[usize] {
        &self.0.nonidentity
    }

    /// Position of `x` in [`Self::nonidentity`], `None` for the identity.
    #[inline]
    pub fn nonidentity_position(&self, x: usize) -> Option<usize> {
        let p = self.0.position[x];
        (p != usize::MAX).then_some(p)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.0.order
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter()
            .all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order())
            .map(|a| (0..self.order()).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    /// Membership mask of the subgroup generated by `gens`.
    pub fn closure_mask(&self, gens: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.order()];
        let mut queue = vec![self.identity()];
        mask[self.identity()] = true;
        while let Some(x) = queue.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !mask[y] {
                    mask[y] = true;
                    queue.push(y);
                }
            }
        }
        mask
    }

    pub fn subgroup_generated(&self, gens: &[usize]) -> Subgroup {
        Subgroup::from_mask(self.clone(), self.closure_mask(gens))
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_mask(self.clone(), vec![true; self.order()])
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        let mut mask = vec![false; self.order()];
        mask[self.identity()] = true;
        Subgroup::from_mask(self.clone(), mask)
    }

    pub fn center(&self) -> Subgroup {
        let gens = self.generators().to_vec();
        let mask = (0..self.order())
            .map(|x| gens.iter().all(|&g| self.mul(g, x) == self.mul(x, g)))
            .collect();
        Subgroup::from_mask(self.clone(), mask)
    }

    /// Same underlying table (cheap pointer test first).
    pub fn same_as(&self, other: &FiniteGroup) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.order() == other.order() && self.0.mul == other.0.mul)
    }

    /// Returns a copy of the group carrying a different label.
    pub fn relabeled(&self, label: impl Into<String>) -> FiniteGroup {
        let d = &self.0;
        FiniteGroup(Arc::new(GroupData {
            label: label.into(),
            order: d.order,
            mul: d.mul.clone(),
            inv: d.inv.clone(),
            identity: d.identity,
            names: d.names.clone(),
            nonidentity: d.nonidentity.clone(),
            position: d.position.clone(),
            generators: d.generators.clone(),
            element_orders: d.element_orders.clone(),
        }))
    }
}

fn greedy_generators(d: &GroupData) -> Vec<usize> {
    let n = d.order;
    let mut mask = vec![false; n];
    mask[d.identity] = true;
    let mut members = vec![d.identity];
    let mut gens = Vec::new();
    for x in 0..n {
        if mask[x] {
            continue;
        }
        gens.push(x);
        // close `members` under right multiplication by all generators
        let mut queue = members.clone();
        while let Some(y) = queue.pop() {
            for &g in &gens {
                let z = d.mul[y * n + g] as usize;
                if !mask[z] {
                    mask[z] = true;
                    members.push(z);
                    queue.push(z);
                }
            }
        }
    }
    gens
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for FiniteGroup {}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.label(), self.order())
    }
}

/// A subgroup stored as a sorted member list over its parent.
#[derive(Clone)]
pub struct Subgroup {
    parent: FiniteGroup,
    members: Vec<usize>,
    mask: Vec<bool>,
}

impl Subgroup {
    fn from_mask(parent: FiniteGroup, mask: Vec<bool>) -> Self {
        let members = mask
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(i))
            .collect();
        Subgroup { parent, members, mask }
    }

    /// Builds a subgroup from an explicit member set, checking closure.
    pub fn new(parent: &FiniteGroup, members: &[usize]) -> Result<Self> {
        let mut mask = vec![false; parent.order()];
        for &m in members {
            if m >= parent.order() {
                return Err(Error::InvalidInput(format!("element {m} out of range")));
            }
            mask[m] = true;
        }
        if !mask[parent.identity()] {
            return Err(Error::InvalidInput("subgroup must contain the identity".into()));
        }
        let sub = Subgroup::from_mask(parent.clone(), mask);
        for &a in &sub.members {
            if !sub.mask[parent.inv(a)] {
                return Err(Error::InvalidInput(format!("inverse of {a} missing")));
            }
            for &b in &sub.members {
                if !sub.mask[parent.mul(a, b)] {
                    return Err(Error::InvalidInput(format!("product {a}*{b} leaves the set")));
                }
            }
        }
        Ok(sub)
    }

    pub fn parent(&self) -> &FiniteGroup {
        &self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.mask[x]
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.parent;
        self.members
            .iter()
            .all(|&a| self.members.iter().all(|&b| g.mul(a, b) == g.mul(b, a)))
    }

    /// First violation of normality, if any.
    pub fn normality_violation(&self) -> Option<(usize, usize)> {
        let g = &self.parent;
        for &by in g.generators() {
            for &m in &self.members {
                if !self.mask[g.conj(by, m)] {
                    return Some((m, by));
                }
            }
        }
        None
    }

    pub fn is_normal(&self) -> bool {
        self.normality_violation().is_none()
    }

    /// The subgroup as a group in its own right (elements renumbered in
    /// increasing parent order) together with the inclusion homomorphism.
    pub fn to_group(&self, label: impl Into<String>) -> (FiniteGroup, GroupHom) {
        let g = &self.parent;
        let k = self.members.len();
        let mut local = vec![usize::MAX; g.order()];
        for (i, &m) in self.members.iter().enumerate() {
            local[m] = i;
        }
        let mut mul = Vec::with_capacity(k * k);
        for &a in &self.members {
            for &b in &self.members {
                mul.push(local[g.mul(a, b)] as u32);
            }
        }
        let names = self.members.iter().map(|&m| g.name(m).to_string()).collect();
        let sub = FiniteGroup::from_flat(label.into(), k, mul, Some(names))
            .expect("subgroup of a valid group is a valid group");
        let inclusion = GroupHom::from_images_unchecked(sub.clone(), g.clone(), self.members.clone());
        (sub, inclusion)
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.parent == other.parent && self.members == other.members
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(of {}, members {:?})", self.parent.label(), self.members)
    }
}
