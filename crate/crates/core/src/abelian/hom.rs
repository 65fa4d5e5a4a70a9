use super::{AbMap, CyclicDecomposition, FinAbGroup, Matrix};
use crate::error::Result;

/// `Hom(M, A)` as a finite abelian group, with the bijection between its
/// elements and additive maps.
///
/// A map is determined by its matrix; entry `(i, j)` is an element of `Z/a_i`
/// killed by `m_j`, i.e. a multiple of `a_i / gcd(m_j, a_i)`. These entries
/// form `Z/gcd(m_j, a_i)` each, and the product is brought into
/// invariant-factor form.
#[derive(Clone, Debug)]
pub struct HomGroup {
    source: FinAbGroup,
    target: FinAbGroup,
    /// `(row, col, step)` for every entry with a nontrivial gcd.
    slots: Vec<(usize, usize, i64)>,
    decomposition: CyclicDecomposition,
}

pub fn hom_group(m: &FinAbGroup, a: &FinAbGroup) -> Result<HomGroup> {
    let mut slots = Vec::new();
    let mut orders = Vec::new();
    for (i, &ai) in a.factors().iter().enumerate() {
        for (j, &mj) in m.factors().iter().enumerate() {
            let g = num_integer::gcd(ai, mj);
            if g > 1 {
                slots.push((i, j, (ai / g) as i64));
                orders.push(g);
            }
        }
    }
    let decomposition = FinAbGroup::from_orders(&orders)?;
    Ok(HomGroup {
        source: m.clone(),
        target: a.clone(),
        slots,
        decomposition,
    })
}

impl HomGroup {
    pub fn group(&self) -> &FinAbGroup {
        &self.decomposition.group
    }

    pub fn source(&self) -> &FinAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FinAbGroup {
        &self.target
    }

    pub fn to_map(&self, x: &[i64]) -> AbMap {
        let raw = self.decomposition.from_group(x);
        let mut m = Matrix::zeros(self.target.rank(), self.source.rank());
        for (&(i, j, step), &k) in self.slots.iter().zip(&raw) {
            m.set(i, j, k * step);
        }
        AbMap::new(&self.source, &self.target, m).expect("slot entries are killed by the source factors")
    }

    pub fn from_map(&self, f: &AbMap) -> Vec<i64> {
        debug_assert!(f.source() == &self.source && f.target() == &self.target);
        let raw: Vec<i64> = self
            .slots
            .iter()
            .map(|&(i, j, step)| f.matrix().get(i, j) / step)
            .collect();
        self.decomposition.to_group(&raw)
    }
}

/// `M^∨ = Hom(M, Z/e)` with `e` the exponent of `M`.
#[derive(Clone, Debug)]
pub struct Dual {
    hom: HomGroup,
    exponent: u64,
}

pub fn dual(m: &FinAbGroup) -> Result<Dual> {
    let exponent = m.exponent();
    Ok(Dual {
        hom: hom_group(m, &FinAbGroup::cyclic(exponent))?,
        exponent,
    })
}

impl Dual {
    pub fn group(&self) -> &FinAbGroup {
        self.hom.group()
    }

    pub fn hom(&self) -> &HomGroup {
        &self.hom
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// `ev(x, phi) = phi(x)` in `Z/e`.
    pub fn evaluate(&self, x: &[i64], phi: &[i64]) -> i64 {
        self.hom.to_map(phi).apply(x).first().copied().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(f: &[u64]) -> FinAbGroup {
        FinAbGroup::new(f.to_vec()).unwrap()
    }

    #[test]
    fn small_hom_groups() {
        assert!(hom_group(&g(&[2]), &g(&[3])).unwrap().group().is_trivial());
        assert_eq!(hom_group(&g(&[4]), &g(&[2])).unwrap().group().order(), 2);
        assert_eq!(hom_group(&g(&[2, 2]), &g(&[4])).unwrap().group().order(), 4);
    }

    #[test]
    fn indexer_is_bijective() {
        let h = hom_group(&g(&[2, 4]), &g(&[2, 4])).unwrap();
        for x in h.group().elements() {
            assert_eq!(h.from_map(&h.to_map(&x)), x);
        }
    }

    #[test]
    fn dual_of_cyclic() {
        let d = dual(&g(&[5])).unwrap();
        assert_eq!(d.group(), &g(&[5]));
        for x in 0..5 {
            assert_eq!(d.evaluate(&[x], &[0]), 0);
        }
    }
}
