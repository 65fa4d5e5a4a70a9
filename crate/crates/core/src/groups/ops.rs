use super::{FiniteGroup, GroupHom, Subgroup};
use crate::error::{Error, Result};

/// `G / N` with cosets numbered by increasing smallest representative, and the
/// projection `G -> G/N`.
pub fn quotient(g: &FiniteGroup, n: &Subgroup) -> Result<(FiniteGroup, GroupHom)> {
    if !n.parent().same_as(g) {
        return Err(Error::GroupMismatch("normal subgroup lives in another group".into()));
    }
    if let Some((member, by)) = n.normality_violation() {
        return Err(Error::NotNormal { member, by });
    }
    let mut coset = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in g.elements() {
        if coset[x] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(x);
        for &m in n.members() {
            coset[g.mul(x, m)] = c;
        }
    }
    let k = reps.len();
    let mut mul = Vec::with_capacity(k * k);
    for &a in &reps {
        for &b in &reps {
            mul.push(coset[g.mul(a, b)] as u32);
        }
    }
    let names = reps.iter().map(|&r| g.name(r).to_string()).collect();
    let label = format!("{}/{}", g.label(), n.order());
    let q = FiniteGroup::from_flat(label, k, mul, Some(names))?;
    let proj = GroupHom::from_images_unchecked(g.clone(), q.clone(), coset);
    Ok((q, proj))
}

/// `{(a, b) : left(a) = right(b)}` with its two projections.
#[derive(Clone, Debug)]
pub struct FiberProduct {
    pub group: FiniteGroup,
    pub to_left: GroupHom,
    pub to_right: GroupHom,
    /// Element `i` of `group` is the pair `pairs[i]`; pairs are in
    /// lexicographic order.
    pub pairs: Vec<(usize, usize)>,
}

impl FiberProduct {
    pub fn index_of(&self, a: usize, b: usize) -> Option<usize> {
        self.pairs.binary_search(&(a, b)).ok()
    }
}

pub fn fiber_product(left: &GroupHom, right: &GroupHom) -> Result<FiberProduct> {
    if !left.codomain().same_as(right.codomain()) {
        return Err(Error::CodomainMismatch(format!(
            "{} and {} are different targets",
            left.codomain().label(),
            right.codomain().label()
        )));
    }
    let (ga, gb) = (left.domain(), right.domain());
    let mut pairs = Vec::new();
    for a in ga.elements() {
        for b in gb.elements() {
            if left.apply(a) == right.apply(b) {
                pairs.push((a, b));
            }
        }
    }
    let k = pairs.len();
    let index = |p: (usize, usize)| pairs.binary_search(&p).expect("fiber product is closed");
    let mut mul = Vec::with_capacity(k * k);
    for &(a1, b1) in &pairs {
        for &(a2, b2) in &pairs {
            mul.push(index((ga.mul(a1, a2), gb.mul(b1, b2))) as u32);
        }
    }
    let names = pairs
        .iter()
        .map(|&(a, b)| format!("({},{})", ga.name(a), gb.name(b)))
        .collect();
    let label = format!("{}x_{}{}", ga.label(), left.codomain().label(), gb.label());
    let group = FiniteGroup::from_flat(label, k, mul, Some(names))?;
    let to_left = GroupHom::from_images_unchecked(group.clone(), ga.clone(), pairs.iter().map(|p| p.0).collect());
    let to_right = GroupHom::from_images_unchecked(group.clone(), gb.clone(), pairs.iter().map(|p| p.1).collect());
    Ok(FiberProduct { group, to_left, to_right, pairs })
}

/// `[K, K]` for a subgroup `K` of `g`.
pub fn commutator_subgroup(g: &FiniteGroup, k: &Subgroup) -> Subgroup {
    let mut gens = Vec::new();
    let mut seen = vec![false; g.order()];
    for &a in k.members() {
        for &b in k.members() {
            let c = g.commutator(a, b);
            if !seen[c] {
                seen[c] = true;
                gens.push(c);
            }
        }
    }
    g.subgroup_generated(&gens)
}
