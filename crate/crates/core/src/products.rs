//! Cup products of cochains and Massey products of degree-1 classes.

use std::collections::HashMap;

use crate::abelian::{AbMap, FinAbGroup};
use crate::cochain::{cohomology, CoboundarySolver, Cochain, CohomologyClass, CohomologyGroup};
use crate::error::{Error, Result};
use crate::gmodule::{trivial_module, GModule, HomModule};
use crate::groups::GroupHom;

/// A bilinear, equivariant map `left x right -> target`.
#[derive(Clone, Debug)]
pub struct CoeffPairing {
    left: GModule,
    right: GModule,
    target: GModule,
    /// Entry `i` is `a -> <e_i, a>` for the `i`-th generator `e_i` of `left`.
    table: Vec<AbMap>,
}

impl CoeffPairing {
    pub fn new(left: &GModule, right: &GModule, target: &GModule, table: Vec<AbMap>) -> Result<Self> {
        let g = left.group();
        if !right.group().same_as(g) || !target.group().same_as(g) {
            return Err(Error::GroupMismatch("pairing modules live over different groups".into()));
        }
        if table.len() != left.coeff().rank() {
            return Err(Error::TypeMismatch("one map per generator of the left module expected".into()));
        }
        for (i, t) in table.iter().enumerate() {
            if t.source() != right.coeff() || t.target() != target.coeff() {
                return Err(Error::TypeMismatch(format!("pairing map {i} has the wrong type")));
            }
            let d = left.coeff().factors()[i] as i64;
            if !(0..right.coeff().rank()).all(|j| target.coeff().is_zero(&target.coeff().scale(d, &t.apply(&right.coeff().basis(j))))) {
                return Err(Error::TypeMismatch(format!("pairing map {i} is not killed by the order of its generator")));
            }
        }
        let pr = CoeffPairing {
            left: left.clone(),
            right: right.clone(),
            target: target.clone(),
            table,
        };
        for &s in g.generators() {
            for i in 0..left.coeff().rank() {
                let m = left.coeff().basis(i);
                for j in 0..right.coeff().rank() {
                    let a = right.coeff().basis(j);
                    let lhs = pr.apply(&left.act(s, &m), &right.act(s, &a));
                    let rhs = target.act(s, &pr.apply(&m, &a));
                    if lhs != rhs {
                        return Err(Error::NotEquivariant(s));
                    }
                }
            }
        }
        Ok(pr)
    }

    /// Multiplication `Z/m x Z/m -> Z/m` on a trivial cyclic module.
    pub fn multiplication(module: &GModule) -> Result<Self> {
        let coeff = module.coeff();
        if coeff.rank() != 1 || !module.is_trivial_action() {
            return Err(Error::UnsupportedParameter(
                "ring multiplication needs a cyclic module with trivial action".into(),
            ));
        }
        Self::new(module, module, module, vec![AbMap::identity(coeff)])
    }

    /// Evaluation `M x Hom(M, A) -> A`.
    pub fn evaluation(m: &GModule, hom: &HomModule) -> Result<Self> {
        let h = &hom.hom;
        if h.source() != m.coeff() {
            return Err(Error::TypeMismatch("Hom module is not built on this module".into()));
        }
        let target = hom.target.clone();
        let basis_maps: Vec<AbMap> = (0..h.group().rank()).map(|j| h.to_map(&h.group().basis(j))).collect();
        let table = (0..m.coeff().rank())
            .map(|i| {
                let e = m.coeff().basis(i);
                let cols: Vec<Vec<i64>> = basis_maps.iter().map(|f| f.apply(&e)).collect();
                AbMap::from_columns(h.group(), target.coeff(), &cols)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(m, &hom.module, &target, table)
    }

    /// `<a, m>' = <m, a>`.
    pub fn swapped(&self) -> Result<Self> {
        let rl = self.right.coeff();
        let table = (0..rl.rank())
            .map(|j| {
                let a = rl.basis(j);
                let cols: Vec<Vec<i64>> = (0..self.left.coeff().rank())
                    .map(|i| self.apply(&self.left.coeff().basis(i), &a))
                    .collect();
                AbMap::from_columns(self.left.coeff(), self.target.coeff(), &cols)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(&self.right, &self.left, &self.target, table)
    }

    pub fn left(&self) -> &GModule {
        &self.left
    }

    pub fn right(&self) -> &GModule {
        &self.right
    }

    pub fn target(&self) -> &GModule {
        &self.target
    }

    pub fn apply(&self, m: &[i64], a: &[i64]) -> Vec<i64> {
        let tc = self.target.coeff();
        let mut out = tc.zero();
        for (t, &k) in self.table.iter().zip(m) {
            if k != 0 {
                out = tc.add(&out, &tc.scale(k, &t.apply(a)));
            }
        }
        out
    }
}

/// `(c ∪ d)(g_1..g_{p+q}) = <c(g_1..g_p), (g_1⋯g_p)·d(g_{p+1}..g_{p+q})>`.
pub fn cup(c: &Cochain, d: &Cochain, pr: &CoeffPairing) -> Result<Cochain> {
    if !c.module().same_as(&pr.left) || !d.module().same_as(&pr.right) {
        return Err(Error::TypeMismatch("cochains do not match the pairing".into()));
    }
    let g = pr.left.group();
    let p = c.degree();
    Cochain::from_fn(&pr.target, p + d.degree(), |t| {
        let front = c.value(&t[..p]);
        if front.iter().all(|&x| x == 0) {
            return pr.target.coeff().zero();
        }
        let prod = t[..p].iter().fold(g.identity(), |acc, &x| g.mul(acc, x));
        let back = pr.right.act(prod, &d.value(&t[p..]));
        pr.apply(&front, &back)
    })
}

/// Cup product of classes, landing in the given cohomology group of the
/// pairing's target.
pub fn cup_classes_in(
    a: &CohomologyClass,
    b: &CohomologyClass,
    pr: &CoeffPairing,
    target: &CohomologyGroup,
) -> Result<CohomologyClass> {
    if !target.module().same_as(&pr.target) || target.degree() != a.degree() + b.degree() {
        return Err(Error::TypeMismatch("target cohomology group does not fit the product".into()));
    }
    let c = cup(&a.representative(), &b.representative(), pr)?;
    target.class_of(&c)
}

pub fn cup_classes(a: &CohomologyClass, b: &CohomologyClass, pr: &CoeffPairing) -> Result<CohomologyClass> {
    let target = cohomology(&pr.target, a.degree() + b.degree())?;
    cup_classes_in(a, b, pr, &target)
}

/// The degree-1 cochain of a homomorphism to `Z/m`, valued in the trivial
/// module `Z/m`.
pub fn character_cochain(module: &GModule, chi: &GroupHom) -> Result<Cochain> {
    let coeff = module.coeff();
    if coeff.rank() != 1 || chi.codomain().order() as u64 != coeff.exponent() || !chi.domain().same_as(module.group()) {
        return Err(Error::TypeMismatch("character does not match the coefficient module".into()));
    }
    let c = chi.codomain();
    // position of each element of the cyclic codomain along its generator
    let gen = c.generators().first().copied().unwrap_or(c.identity());
    let mut log = vec![0i64; c.order()];
    let mut x = c.identity();
    for k in 0..c.order() {
        log[x] = k as i64;
        x = c.mul(x, gen);
    }
    Cochain::from_fn(module, 1, |t| vec![log[chi.apply(t[0])]])
}

/// A family `a_{ij}`, `1 <= i < j <= n+1`, `(i, j) != (1, n+1)`, with
/// `d(a_{ij}) = sum_k a_{ik} ∪ a_{kj}`.
#[derive(Clone, Debug)]
pub struct DefiningSystem {
    n: usize,
    entries: HashMap<(usize, usize), Cochain>,
    pairing: CoeffPairing,
}

impl DefiningSystem {
    pub fn order(&self) -> usize {
        self.n
    }

    /// `a_{ij}` with 1-based indices.
    pub fn get(&self, i: usize, j: usize) -> Option<&Cochain> {
        self.entries.get(&(i, j))
    }

    /// The entries sorted by `(i, j)`.
    pub fn entries(&self) -> Vec<((usize, usize), &Cochain)> {
        let mut v: Vec<_> = self.entries.iter().map(|(k, c)| (*k, c)).collect();
        v.sort_by_key(|e| e.0);
        v
    }

    /// `sum_{k=2}^{n} a_{1k} ∪ a_{k,n+1}`.
    pub fn product_cochain(&self) -> Result<Cochain> {
        let n = self.n;
        let mut acc = Cochain::zero(self.pairing.target(), 2)?;
        for k in 2..=n {
            acc = acc.add(&cup(&self.entries[&(1, k)], &self.entries[&(k, n + 1)], &self.pairing)?)?;
        }
        Ok(acc)
    }
}

/// Outcome of deciding whether a Massey product contains zero.
#[derive(Clone, Debug)]
pub enum MasseyZero {
    /// A defining system whose product is a coboundary.
    Contains(DefiningSystem),
    /// Every defining system was examined and none has vanishing product
    /// (including the case that none exists).
    Excludes,
    BudgetExceeded,
}

impl MasseyZero {
    pub fn contains_zero(&self) -> Option<bool> {
        match self {
            MasseyZero::Contains(_) => Some(true),
            MasseyZero::Excludes => Some(false),
            MasseyZero::BudgetExceeded => None,
        }
    }
}

struct MasseySearch {
    n: usize,
    pairing: CoeffPairing,
    cocycles: Vec<Cochain>,
    solver: CoboundarySolver,
    h2: CohomologyGroup,
    slots: Vec<(usize, usize)>,
    memo: HashMap<Vec<i64>, Option<Cochain>>,
    budget: u64,
    nodes: u64,
}

enum Step {
    Found(DefiningSystem),
    Exhausted,
    OutOfBudget,
}

impl MasseySearch {
    fn new(a: &[Cochain], budget: u64) -> Result<Self> {
        let n = a.len();
        if n < 2 {
            return Err(Error::InvalidInput("Massey products need at least two classes".into()));
        }
        let module = a[0].module().clone();
        let coeff = module.coeff();
        let prime = coeff.rank() == 1 && coeff.elementary_prime().is_some();
        if !prime || !module.is_trivial_action() {
            return Err(Error::UnsupportedParameter(
                "Massey products need trivial coefficients Z/p for a prime p".into(),
            ));
        }
        for c in a {
            if c.degree() != 1 || !c.module().same_as(&module) {
                return Err(Error::TypeMismatch("Massey inputs must be degree-1 cochains of one module".into()));
            }
            if !c.is_cocycle()? {
                return Err(Error::NotACocycle);
            }
        }
        let h1 = cohomology(&module, 1)?;
        let cocycles = h1.classes().map(|c| c.representative()).collect();
        let mut slots = Vec::new();
        for span in 2..=n {
            for i in 1..=n + 1 - span {
                if (i, i + span) != (1, n + 1) {
                    slots.push((i, i + span));
                }
            }
        }
        Ok(MasseySearch {
            n,
            pairing: CoeffPairing::multiplication(&module)?,
            cocycles,
            solver: CoboundarySolver::new(&module, 2)?,
            h2: cohomology(&module, 2)?,
            slots,
            memo: HashMap::new(),
            budget,
            nodes: 0,
        })
    }

    fn preimage(&mut self, rhs: &Cochain) -> Result<Option<Cochain>> {
        if let Some(hit) = self.memo.get(rhs.values()) {
            return Ok(hit.clone());
        }
        let b = self.solver.solve(rhs)?;
        self.memo.insert(rhs.values().to_vec(), b.clone());
        Ok(b)
    }

    /// Depth-first search over the solution cosets of the slots in order.
    /// `want_zero` asks for a system with vanishing product.
    fn descend(&mut self, depth: usize, sys: &mut HashMap<(usize, usize), Cochain>, want_zero: bool) -> Result<Step> {
        if depth == self.slots.len() {
            let ds = DefiningSystem {
                n: self.n,
                entries: sys.clone(),
                pairing: self.pairing.clone(),
            };
            if !want_zero || self.h2.is_coboundary(&ds.product_cochain()?)? {
                return Ok(Step::Found(ds));
            }
            return Ok(Step::Exhausted);
        }
        let (i, j) = self.slots[depth];
        let mut rhs = Cochain::zero(self.pairing.target(), 2)?;
        for k in i + 1..j {
            rhs = rhs.add(&cup(&sys[&(i, k)], &sys[&(k, j)], &self.pairing)?)?;
        }
        let Some(base) = self.preimage(&rhs)? else {
            return Ok(Step::Exhausted);
        };
        for z in 0..self.cocycles.len() {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Ok(Step::OutOfBudget);
            }
            sys.insert((i, j), base.add(&self.cocycles[z])?);
            match self.descend(depth + 1, sys, want_zero)? {
                Step::Exhausted => {}
                other => return Ok(other),
            }
        }
        sys.remove(&(i, j));
        Ok(Step::Exhausted)
    }

    fn run(&mut self, a: &[Cochain], want_zero: bool) -> Result<Step> {
        let mut sys = HashMap::new();
        for (i, c) in a.iter().enumerate() {
            sys.insert((i + 1, i + 2), c.clone());
        }
        self.descend(0, &mut sys, want_zero)
    }
}

/// Some defining system for `<a_1, ..., a_n>`, or `None` when provably none
/// exists. Errors with `BudgetExceeded` when the search was cut short.
pub fn massey_defining_system(a: &[Cochain], budget: u64) -> Result<Option<DefiningSystem>> {
    let mut search = MasseySearch::new(a, budget)?;
    match search.run(a, false)? {
        Step::Found(ds) => Ok(Some(ds)),
        Step::Exhausted => Ok(None),
        Step::OutOfBudget => Err(Error::BudgetExceeded(format!("Massey search exceeded {budget} nodes"))),
    }
}

/// The class of `sum_k a_{1k} ∪ a_{k,n+1}`.
pub fn massey_product(ds: &DefiningSystem) -> Result<CohomologyClass> {
    let h2 = cohomology(ds.pairing.target(), 2)?;
    h2.class_of(&ds.product_cochain()?)
}

/// Decides whether `<a_1, ..., a_n>` is defined and contains zero.
pub fn massey_contains_zero(a: &[Cochain], budget: u64) -> Result<MasseyZero> {
    let mut search = MasseySearch::new(a, budget)?;
    Ok(match search.run(a, true)? {
        Step::Found(ds) => MasseyZero::Contains(ds),
        Step::Exhausted => MasseyZero::Excludes,
        Step::OutOfBudget => MasseyZero::BudgetExceeded,
    })
}

/// The trivial module `Z/m` over the domain of the characters, with their
/// cochains.
pub fn characters_as_cochains(chars: &[GroupHom], m: u64) -> Result<Vec<Cochain>> {
    let Some(first) = chars.first() else {
        return Ok(Vec::new());
    };
    let module = trivial_module(first.domain(), &FinAbGroup::cyclic(m));
    chars.iter().map(|chi| character_cochain(&module, chi)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{standard_group, GroupKind};

    fn mod2(kind: GroupKind) -> GModule {
        trivial_module(&standard_group(&kind).unwrap(), &FinAbGroup::cyclic(2))
    }

    #[test]
    fn square_of_the_character_of_z2() {
        let m = mod2(GroupKind::Cyclic { n: 2 });
        let x = Cochain::from_fn(&m, 1, |t| vec![t[0] as i64]).unwrap();
        let pr = CoeffPairing::multiplication(&m).unwrap();
        let xx = cup(&x, &x, &pr).unwrap();
        let h = cohomology(&m, 2).unwrap();
        assert!(!h.is_coboundary(&xx).unwrap());
    }

    #[test]
    fn cup_with_zero() {
        let m = mod2(GroupKind::Cyclic { n: 4 });
        let pr = CoeffPairing::multiplication(&m).unwrap();
        let x = Cochain::from_fn(&m, 1, |t| vec![(t[0] % 2) as i64]).unwrap();
        let z = Cochain::zero(&m, 1).unwrap();
        assert!(cup(&x, &z, &pr).unwrap().is_zero());
    }

    #[test]
    fn massey_of_order_two_on_z4() {
        let m = mod2(GroupKind::Cyclic { n: 4 });
        let x = Cochain::from_fn(&m, 1, |t| vec![(t[0] % 2) as i64]).unwrap();
        assert!(massey_contains_zero(&[x.clone(), x.clone()], 1000).unwrap().contains_zero().unwrap());
        assert!(massey_contains_zero(&[x.clone(), x.clone(), x], 1000).unwrap().contains_zero().unwrap());
    }

    #[test]
    fn triple_product_undefined_on_z2() {
        let m = mod2(GroupKind::Cyclic { n: 2 });
        let x = Cochain::from_fn(&m, 1, |t| vec![t[0] as i64]).unwrap();
        assert!(massey_defining_system(&[x.clone(), x.clone(), x], 1000).unwrap().is_none());
    }
}
