use std::fmt;

use super::{FiniteGroup, Subgroup};
use crate::error::{Error, Result};

/// A homomorphism stored as its full image table.
#[derive(Clone)]
pub struct GroupHom {
    domain: FiniteGroup,
    codomain: FiniteGroup,
    images: Vec<usize>,
}

impl GroupHom {
    /// Checks the homomorphism law on every pair.
    pub fn new(domain: FiniteGroup, codomain: FiniteGroup, images: Vec<usize>) -> Result<Self> {
        if images.len() != domain.order() {
            return Err(Error::InvalidInput(format!(
                "image table has {} entries for a domain of order {}",
                images.len(),
                domain.order()
            )));
        }
        if let Some(&bad) = images.iter().find(|&&y| y >= codomain.order()) {
            return Err(Error::InvalidInput(format!("image {bad} out of range")));
        }
        if images[domain.identity()] != codomain.identity() {
            return Err(Error::NotAHomomorphism(domain.identity(), domain.identity()));
        }
        for x in domain.elements() {
            for y in domain.elements() {
                if images[domain.mul(x, y)] != codomain.mul(images[x], images[y]) {
                    return Err(Error::NotAHomomorphism(x, y));
                }
            }
        }
        Ok(GroupHom { domain, codomain, images })
    }

    pub(crate) fn from_images_unchecked(domain: FiniteGroup, codomain: FiniteGroup, images: Vec<usize>) -> Self {
        debug_assert_eq!(images.len(), domain.order());
        GroupHom { domain, codomain, images }
    }

    /// Extends `(generator, image)` pairs to the whole domain by closing under
    /// right multiplication. Consistency of every product `x * g` with a
    /// generator `g` is checked, which forces the homomorphism law.
    pub fn from_generator_images(
        domain: &FiniteGroup,
        codomain: &FiniteGroup,
        pairs: &[(usize, usize)],
    ) -> Result<Self> {
        for &(g, y) in pairs {
            if g >= domain.order() || y >= codomain.order() {
                return Err(Error::InvalidInput(format!("pair ({g}, {y}) out of range")));
            }
        }
        let images = extend_from_generators(domain, codomain, pairs)?;
        if images.contains(&usize::MAX) {
            let reached = images.iter().filter(|&&y| y != usize::MAX).count();
            return Err(Error::GeneratorsDontGenerate { reached, order: domain.order() });
        }
        Ok(GroupHom {
            domain: domain.clone(),
            codomain: codomain.clone(),
            images,
        })
    }

    pub fn identity(g: &FiniteGroup) -> Self {
        GroupHom {
            domain: g.clone(),
            codomain: g.clone(),
            images: g.elements().collect(),
        }
    }

    pub fn trivial(domain: &FiniteGroup, codomain: &FiniteGroup) -> Self {
        GroupHom {
            domain: domain.clone(),
            codomain: codomain.clone(),
            images: vec![codomain.identity(); domain.order()],
        }
    }

    pub fn domain(&self) -> &FiniteGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteGroup {
        &self.codomain
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom> {
        if !self.codomain.same_as(&other.domain) {
            return Err(Error::CodomainMismatch(format!(
                "cannot compose {} -> {} with {} -> {}",
                self.domain.label(),
                self.codomain.label(),
                other.domain.label(),
                other.codomain.label()
            )));
        }
        Ok(GroupHom {
            domain: self.domain.clone(),
            codomain: other.codomain.clone(),
            images: self.images.iter().map(|&y| other.apply(y)).collect(),
        })
    }

    pub fn kernel(&self) -> Subgroup {
        let e = self.codomain.identity();
        let mask = self.images.iter().map(|&y| y == e).collect();
        Subgroup::from_mask(self.domain.clone(), mask)
    }

    pub fn image(&self) -> Subgroup {
        let mut mask = vec![false; self.codomain.order()];
        for &y in &self.images {
            mask[y] = true;
        }
        Subgroup::from_mask(self.codomain.clone(), mask)
    }

    pub fn is_surjective(&self) -> bool {
        self.image().order() == self.codomain.order()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_trivial()
    }

    /// Images of the domain's canonical generators.
    pub fn generator_images(&self) -> Vec<(usize, usize)> {
        self.domain
            .generators()
            .iter()
            .map(|&g| (g, self.images[g]))
            .collect()
    }
}

pub(crate) fn extend_from_generators(
    domain: &FiniteGroup,
    codomain: &FiniteGroup,
    pairs: &[(usize, usize)],
) -> Result<Vec<usize>> {
    let mut images = vec![usize::MAX; domain.order()];
    images[domain.identity()] = codomain.identity();
    for &(g, y) in pairs {
        if g == domain.identity() && y != codomain.identity() {
            return Err(Error::NotAHomomorphism(g, g));
        }
    }
    let mut queue = vec![domain.identity()];
    while let Some(x) = queue.pop() {
        for &(g, y) in pairs {
            let xg = domain.mul(x, g);
            let img = codomain.mul(images[x], y);
            if images[xg] == usize::MAX {
                images[xg] = img;
                queue.push(xg);
            } else if images[xg] != img {
                return Err(Error::NotAHomomorphism(x, g));
            }
        }
    }
    Ok(images)
}

impl PartialEq for GroupHom {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain && self.codomain == other.codomain && self.images == other.images
    }
}

impl Eq for GroupHom {}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GroupHom({} -> {}, gens {:?})",
            self.domain.label(),
            self.codomain.label(),
            self.generator_images()
        )
    }
}
