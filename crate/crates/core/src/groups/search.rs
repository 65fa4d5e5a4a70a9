use std::ops::ControlFlow;

use super::hom::extend_from_generators;
use super::{FiniteGroup, GroupHom, Subgroup};
use crate::error::{Error, Result};

/// Node budget used when the caller does not supply one; overridden by the
/// `OBSTRUKT_BUDGET` environment variable.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

pub fn node_budget() -> u64 {
    std::env::var("OBSTRUKT_BUDGET")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_NODE_BUDGET)
}

/// Restrictions on the homomorphisms `h: D -> C` returned by a search.
#[derive(Clone, Debug, Default)]
pub struct HomConstraint {
    lift: Option<(GroupHom, GroupHom)>,
    injective: bool,
    surjective: bool,
}

impl HomConstraint {
    pub fn any() -> Self {
        Self::default()
    }

    /// Only `h` with `phi ∘ h = psi`, where `phi: C -> T` and `psi: D -> T`.
    pub fn lifting(phi: GroupHom, psi: GroupHom) -> Self {
        HomConstraint {
            lift: Some((phi, psi)),
            ..Self::default()
        }
    }

    pub fn injective(mut self) -> Self {
        self.injective = true;
        self
    }

    pub fn surjective(mut self) -> Self {
        self.surjective = true;
        self
    }

    fn check(&self, domain: &FiniteGroup, codomain: &FiniteGroup) -> Result<()> {
        if let Some((phi, psi)) = &self.lift {
            if !phi.domain().same_as(codomain) || !psi.domain().same_as(domain) {
                return Err(Error::GroupMismatch("lifting constraint does not fit the search".into()));
            }
            if !phi.codomain().same_as(psi.codomain()) {
                return Err(Error::CodomainMismatch("lifting constraint maps to different groups".into()));
            }
        }
        Ok(())
    }
}

/// Visits every homomorphism `domain -> codomain` satisfying `constraint`, in
/// lexicographic order of the images of the domain's canonical generators.
/// The visitor may stop the search early. Returns the number of search nodes
/// used.
pub fn search_homs(
    domain: &FiniteGroup,
    codomain: &FiniteGroup,
    constraint: &HomConstraint,
    budget: u64,
    mut visit: impl FnMut(GroupHom) -> ControlFlow<()>,
) -> Result<u64> {
    constraint.check(domain, codomain)?;
    let gens = domain.generators().to_vec();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            let og = domain.element_order(g);
            codomain
                .elements()
                .filter(|&y| {
                    let oy = codomain.element_order(y);
                    let order_ok = if constraint.injective { oy == og } else { og % oy == 0 };
                    let lift_ok = match &constraint.lift {
                        Some((phi, psi)) => phi.apply(y) == psi.apply(g),
                        None => true,
                    };
                    order_ok && lift_ok
                })
                .collect()
        })
        .collect();
    if constraint.lift.is_some() {
        let (_, psi) = constraint.lift.as_ref().unwrap();
        if psi.images()[domain.identity()] != psi.codomain().identity() {
            return Ok(0);
        }
    }
    let mut state = Search {
        domain,
        codomain,
        constraint,
        gens: &gens,
        candidates: &candidates,
        pairs: Vec::with_capacity(gens.len()),
        nodes: 0,
        budget,
    };
    let _ = state.descend(&mut visit)?;
    Ok(state.nodes)
}

struct Search<'a> {
    domain: &'a FiniteGroup,
    codomain: &'a FiniteGroup,
    constraint: &'a HomConstraint,
    gens: &'a [usize],
    candidates: &'a [Vec<usize>],
    pairs: Vec<(usize, usize)>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn descend(&mut self, visit: &mut impl FnMut(GroupHom) -> ControlFlow<()>) -> Result<ControlFlow<()>> {
        let depth = self.pairs.len();
        if depth == self.gens.len() {
            let images = extend_from_generators(self.domain, self.codomain, &self.pairs)?;
            let h = GroupHom::from_images_unchecked(self.domain.clone(), self.codomain.clone(), images);
            if self.constraint.injective && !h.is_injective() {
                return Ok(ControlFlow::Continue(()));
            }
            if self.constraint.surjective && !h.is_surjective() {
                return Ok(ControlFlow::Continue(()));
            }
            return Ok(visit(h));
        }
        let g = self.gens[depth];
        for &y in &self.candidates[depth] {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::SearchBudgetExceeded(self.budget));
            }
            self.pairs.push((g, y));
            // relations among the generators assigned so far are checked on
            // the subgroup they generate
            let consistent = extend_from_generators(self.domain, self.codomain, &self.pairs).is_ok();
            if consistent {
                if let ControlFlow::Break(()) = self.descend(visit)? {
                    self.pairs.pop();
                    return Ok(ControlFlow::Break(()));
                }
            }
            self.pairs.pop();
        }
        Ok(ControlFlow::Continue(()))
    }
}

/// All homomorphisms satisfying `constraint`, in search order.
pub fn enumerate_homs(
    domain: &FiniteGroup,
    codomain: &FiniteGroup,
    constraint: &HomConstraint,
    budget: u64,
) -> Result<Vec<GroupHom>> {
    let mut out = Vec::new();
    search_homs(domain, codomain, constraint, budget, |h| {
        out.push(h);
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// First homomorphism satisfying `constraint` in search order.
pub fn first_hom(
    domain: &FiniteGroup,
    codomain: &FiniteGroup,
    constraint: &HomConstraint,
    budget: u64,
) -> Result<Option<GroupHom>> {
    let mut found = None;
    search_homs(domain, codomain, constraint, budget, |h| {
        found = Some(h);
        ControlFlow::Break(())
    })?;
    Ok(found)
}

/// Smallest `k` in `by` with `k h1(x) k^-1 = h2(x)` for all `x`.
pub fn are_conjugate(h1: &GroupHom, h2: &GroupHom, by: &Subgroup) -> Option<usize> {
    let c = h1.codomain();
    let gens = h1.domain().generators();
    by.members()
        .iter()
        .copied()
        .find(|&k| gens.iter().all(|&x| c.conj(k, h1.apply(x)) == h2.apply(x)))
}

/// Partitions `homs` into classes under conjugation by `by`. Classes are
/// listed by their first member and contain indices into `homs`.
pub fn conjugacy_classes(homs: &[GroupHom], by: &Subgroup) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    'next: for (i, h) in homs.iter().enumerate() {
        for class in classes.iter_mut() {
            if are_conjugate(&homs[class[0]], h, by).is_some() {
                class.push(i);
                continue 'next;
            }
        }
        classes.push(vec![i]);
    }
    classes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{standard_group, GroupKind};

    fn g(kind: GroupKind) -> FiniteGroup {
        standard_group(&kind).unwrap()
    }

    /// Brute force over all maps `D -> C`.
    fn count_homs_brute(d: &FiniteGroup, c: &FiniteGroup) -> usize {
        let n = d.order();
        let m = c.order();
        let mut count = 0;
        let mut images = vec![0usize; n];
        loop {
            if GroupHom::new(d.clone(), c.clone(), images.clone()).is_ok() {
                count += 1;
            }
            let mut i = 0;
            while i < n {
                images[i] += 1;
                if images[i] < m {
                    break;
                }
                images[i] = 0;
                i += 1;
            }
            if i == n {
                return count;
            }
        }
    }

    #[test]
    fn counts_match_brute_force() {
        let cases = [
            (GroupKind::Cyclic { n: 4 }, GroupKind::Cyclic { n: 2 }),
            (GroupKind::Cyclic { n: 2 }, GroupKind::Symmetric { n: 3 }),
            (GroupKind::Symmetric { n: 3 }, GroupKind::Cyclic { n: 2 }),
            (GroupKind::Cyclic { n: 3 }, GroupKind::Cyclic { n: 6 }),
        ];
        for (d, c) in cases {
            let (d, c) = (g(d), g(c));
            let homs = enumerate_homs(&d, &c, &HomConstraint::any(), DEFAULT_NODE_BUDGET).unwrap();
            assert_eq!(homs.len(), count_homs_brute(&d, &c), "{} -> {}", d.label(), c.label());
        }
    }

    #[test]
    fn automorphisms_of_s3() {
        let s3 = g(GroupKind::Symmetric { n: 3 });
        let c = HomConstraint::any().injective();
        let auts = enumerate_homs(&s3, &s3, &c, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(auts.len(), 6);
        // all inner, so one class under conjugation by S3
        assert_eq!(conjugacy_classes(&auts, &s3.whole()).len(), 1);
    }

    #[test]
    fn lifting_constraint() {
        let z4 = g(GroupKind::Cyclic { n: 4 });
        let z2 = g(GroupKind::Cyclic { n: 2 });
        let phi = GroupHom::from_generator_images(&z4, &z2, &[(1, 1)]).unwrap();
        let id = GroupHom::identity(&z2);
        let lifts = enumerate_homs(&z2, &z4, &HomConstraint::lifting(phi, id), DEFAULT_NODE_BUDGET).unwrap();
        assert!(lifts.is_empty());
    }

    #[test]
    fn budget_is_enforced() {
        let a5 = g(GroupKind::Alternating { n: 5 });
        let r = enumerate_homs(&a5, &a5, &HomConstraint::any(), 10);
        assert_eq!(r.unwrap_err(), Error::SearchBudgetExceeded(10));
    }
}
