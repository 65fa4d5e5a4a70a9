//! Embedding problems `(φ: G1 -> G2, ψ: B -> G2)` and their solutions.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::ControlFlow;
use std::sync::Arc;

use crate::abelian::FinAbGroup;
use crate::cochain::{cohomology, pullback, CohomologyClass};
use crate::error::{Error, Result};
use crate::extensions::{
    abelian_structure, class_of_extension, pullback_extension, section_difference, Extension, SectionClass,
};
use crate::groups::{
    commutator_subgroup, elementary_abelian_2, fiber_product, first_hom, node_budget, quotient, search_homs,
    standard_group, FiberProduct, FiniteGroup, GroupHom, GroupKind, HomConstraint, Subgroup,
};
use crate::gmodule::trivial_module;
use crate::products::{characters_as_cochains, massey_contains_zero, MasseyZero};

/// Lifting `ψ: base -> G2` through the surjection `φ: G1 -> G2`.
#[derive(Clone)]
pub struct EmbeddingProblem(Arc<ProblemData>);

struct ProblemData {
    phi: GroupHom,
    psi: GroupHom,
    kernel: Subgroup,
}

impl EmbeddingProblem {
    pub fn new(phi: &GroupHom, psi: &GroupHom) -> Result<Self> {
        if !phi.codomain().same_as(psi.codomain()) {
            return Err(Error::CodomainMismatch(format!(
                "phi lands in {} and psi in {}",
                phi.codomain().label(),
                psi.codomain().label()
            )));
        }
        if !phi.is_surjective() {
            return Err(Error::PhiNotSurjective);
        }
        Ok(EmbeddingProblem(Arc::new(ProblemData {
            kernel: phi.kernel(),
            phi: phi.clone(),
            psi: psi.clone(),
        })))
    }

    pub fn base(&self) -> &FiniteGroup {
        self.0.psi.domain()
    }

    pub fn g1(&self) -> &FiniteGroup {
        self.0.phi.domain()
    }

    pub fn g2(&self) -> &FiniteGroup {
        self.0.phi.codomain()
    }

    pub fn phi(&self) -> &GroupHom {
        &self.0.phi
    }

    pub fn psi(&self) -> &GroupHom {
        &self.0.psi
    }

    /// `Ker(φ)` as a subgroup of `G1`.
    pub fn kernel(&self) -> &Subgroup {
        &self.0.kernel
    }

    pub fn same_as(&self, other: &EmbeddingProblem) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.phi.domain().same_as(other.0.phi.domain())
                && self.0.phi.codomain().same_as(other.0.phi.codomain())
                && self.0.psi.domain().same_as(other.0.psi.domain())
                && self.0.phi.images() == other.0.phi.images()
                && self.0.psi.images() == other.0.psi.images())
    }
}

impl fmt::Debug for EmbeddingProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "EmbeddingProblem({} -> {} <- {})",
            self.g1().label(),
            self.g2().label(),
            self.base().label()
        )
    }
}

/// A solution up to conjugation by `Ker(φ)`; the representative is the
/// conjugate with lexicographically smallest images.
#[derive(Clone)]
pub struct SolutionClass {
    problem: EmbeddingProblem,
    representative: GroupHom,
}

impl SolutionClass {
    pub fn new(problem: &EmbeddingProblem, h: &GroupHom) -> Result<Self> {
        if !h.domain().same_as(problem.base()) || !h.codomain().same_as(problem.g1()) {
            return Err(Error::ProblemMismatch);
        }
        let (phi, psi) = (problem.phi(), problem.psi());
        if h.domain().elements().any(|b| phi.apply(h.apply(b)) != psi.apply(b)) {
            return Err(Error::ProblemMismatch);
        }
        let g = problem.g1();
        let best = problem
            .kernel()
            .members()
            .iter()
            .map(|&k| h.images().iter().map(|&x| g.conj(k, x)).collect::<Vec<_>>())
            .min()
            .expect("kernel is nonempty");
        Ok(SolutionClass {
            problem: problem.clone(),
            representative: GroupHom::from_images_unchecked(h.domain().clone(), g.clone(), best),
        })
    }

    pub fn problem(&self) -> &EmbeddingProblem {
        &self.problem
    }

    pub fn representative(&self) -> &GroupHom {
        &self.representative
    }
}

impl PartialEq for SolutionClass {
    fn eq(&self, other: &Self) -> bool {
        self.problem.same_as(&other.problem) && self.representative.images() == other.representative.images()
    }
}

impl fmt::Debug for SolutionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SolutionClass({:?})", self.representative.images())
    }
}

/// Every solution up to `Ker(φ)`-conjugacy, ordered by representative.
pub fn solve(e: &EmbeddingProblem) -> Result<Vec<SolutionClass>> {
    solve_with_budget(e, node_budget())
}

pub fn solve_with_budget(e: &EmbeddingProblem, budget: u64) -> Result<Vec<SolutionClass>> {
    let constraint = HomConstraint::lifting(e.phi().clone(), e.psi().clone());
    let mut reps = BTreeSet::new();
    search_homs(e.base(), e.g1(), &constraint, budget, |h| {
        let c = SolutionClass::new(e, &h).expect("search honours the lifting constraint");
        reps.insert(c.representative.images().to_vec());
        ControlFlow::Continue(())
    })?;
    Ok(reps
        .into_iter()
        .map(|images| SolutionClass {
            problem: e.clone(),
            representative: GroupHom::from_images_unchecked(e.base().clone(), e.g1().clone(), images),
        })
        .collect())
}

/// Whether any solution exists; stops at the first one.
pub fn is_solvable(e: &EmbeddingProblem, budget: u64) -> Result<bool> {
    let constraint = HomConstraint::lifting(e.phi().clone(), e.psi().clone());
    let mut found = false;
    search_homs(e.base(), e.g1(), &constraint, budget, |_| {
        found = true;
        ControlFlow::Break(())
    })?;
    Ok(found)
}

/// `Γ(E) = G1 ×_{G2} base` with its projections.
pub fn gamma_fiber(e: &EmbeddingProblem) -> Result<FiberProduct> {
    fiber_product(e.phi(), e.psi())
}

/// `Γ(E)` as an extension of the base by `Ker(φ)`; `a -> (a, 1)` embeds
/// the kernel.
pub fn gamma_of(e: &EmbeddingProblem) -> Result<Extension> {
    Ok(gamma_parts(e)?.1)
}

fn gamma_parts(e: &EmbeddingProblem) -> Result<(FiberProduct, Extension)> {
    let fp = gamma_fiber(e)?;
    let s = abelian_structure(e.kernel())?;
    let id = e.base().identity();
    let embed = s
        .elements
        .iter()
        .map(|&a| fp.index_of(a, id).expect("kernel pairs lie in the fiber product"))
        .collect();
    let ext = Extension::from_parts(&fp.to_right, &s.group, embed)?;
    Ok((fp, ext))
}

/// `c_E`, the class of `Γ(E)` in `H²(base, Ker)`.
pub fn obstruction_class(e: &EmbeddingProblem) -> Result<CohomologyClass> {
    class_of_extension(&gamma_of(e)?)
}

fn section_of(fp: &FiberProduct, gamma: &Extension, h: &GroupHom) -> Result<SectionClass> {
    let base = h.domain();
    let images = base
        .elements()
        .map(|g| fp.index_of(h.apply(g), g).ok_or(Error::ProblemMismatch))
        .collect::<Result<Vec<_>>>()?;
    SectionClass::new(gamma, &GroupHom::from_images_unchecked(base.clone(), gamma.total().clone(), images))
}

/// `Γ(E)` together with each solution and the section `g -> (h(g), g)` it
/// induces.
pub fn solutions_as_sections(e: &EmbeddingProblem) -> Result<(Extension, Vec<(SolutionClass, SectionClass)>)> {
    let (fp, gamma) = gamma_parts(e)?;
    let pairs = solve(e)?
        .into_iter()
        .map(|s| {
            let sec = section_of(&fp, &gamma, &s.representative)?;
            Ok((s, sec))
        })
        .collect::<Result<_>>()?;
    Ok((gamma, pairs))
}

/// The section of `Γ(E)` induced by an arbitrary lift `h`, not necessarily
/// a class representative.
pub fn section_of_solution(gamma: &Extension, e: &EmbeddingProblem, h: &GroupHom) -> Result<SectionClass> {
    let fp = gamma_fiber(e)?;
    if fp.group.order() != gamma.total().order() || fp.group.table() != gamma.total().table() {
        return Err(Error::ProblemMismatch);
    }
    SolutionClass::new(e, h)?;
    let base = h.domain();
    let images = base
        .elements()
        .map(|g| fp.index_of(h.apply(g), g).ok_or(Error::ProblemMismatch))
        .collect::<Result<Vec<_>>>()?;
    SectionClass::new(gamma, &GroupHom::from_images_unchecked(base.clone(), gamma.total().clone(), images))
}

/// `h' -> [s(h') - s(h_0)]`, a bijection from solutions to `H¹(base, Ker)`.
pub fn alpha_bijection(
    e: &EmbeddingProblem,
    base_solution: &SolutionClass,
) -> Result<Vec<(SolutionClass, CohomologyClass)>> {
    if !base_solution.problem.same_as(e) {
        return Err(Error::ProblemMismatch);
    }
    let (_, pairs) = solutions_as_sections(e)?;
    let s0 = pairs
        .iter()
        .find(|(s, _)| s == base_solution)
        .map(|(_, sec)| sec.clone())
        .ok_or(Error::NoSolution)?;
    pairs
        .into_iter()
        .map(|(s, sec)| Ok((s, section_difference(&sec, &s0)?)))
        .collect()
}

/// A morphism of embedding problems over the same base.
#[derive(Clone)]
pub struct ProblemMap {
    source: EmbeddingProblem,
    target: EmbeddingProblem,
    g1map: GroupHom,
    g2map: GroupHom,
}

impl ProblemMap {
    pub fn new(source: &EmbeddingProblem, target: &EmbeddingProblem, g1map: &GroupHom, g2map: &GroupHom) -> Result<Self> {
        let types_fit = g1map.domain().same_as(source.g1())
            && g1map.codomain().same_as(target.g1())
            && g2map.domain().same_as(source.g2())
            && g2map.codomain().same_as(target.g2())
            && source.base().same_as(target.base());
        if !types_fit {
            return Err(Error::ProblemMismatch);
        }
        let square1 = source
            .g1()
            .elements()
            .all(|x| target.phi().apply(g1map.apply(x)) == g2map.apply(source.phi().apply(x)));
        let square2 = source
            .base()
            .elements()
            .all(|b| target.psi().apply(b) == g2map.apply(source.psi().apply(b)));
        if !square1 || !square2 {
            return Err(Error::ProblemMismatch);
        }
        Ok(ProblemMap {
            source: source.clone(),
            target: target.clone(),
            g1map: g1map.clone(),
            g2map: g2map.clone(),
        })
    }

    pub fn identity(e: &EmbeddingProblem) -> Self {
        ProblemMap {
            source: e.clone(),
            target: e.clone(),
            g1map: GroupHom::identity(e.g1()),
            g2map: GroupHom::identity(e.g2()),
        }
    }

    pub fn source(&self) -> &EmbeddingProblem {
        &self.source
    }

    pub fn target(&self) -> &EmbeddingProblem {
        &self.target
    }

    pub fn g1map(&self) -> &GroupHom {
        &self.g1map
    }

    pub fn g2map(&self) -> &GroupHom {
        &self.g2map
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &ProblemMap) -> Result<ProblemMap> {
        if !self.target.same_as(&next.source) {
            return Err(Error::ProblemMismatch);
        }
        ProblemMap::new(
            &self.source,
            &next.target,
            &self.g1map.then(&next.g1map)?,
            &self.g2map.then(&next.g2map)?,
        )
    }
}

/// `Sol(g)`: the class of `g1 ∘ h`.
pub fn map_solutions(g: &ProblemMap, s: &SolutionClass) -> Result<SolutionClass> {
    if !s.problem.same_as(&g.source) {
        return Err(Error::ProblemMismatch);
    }
    SolutionClass::new(&g.target, &s.representative.then(&g.g1map)?)
}

/// `E^ab`: `G1` replaced by `G1 / [Ker, Ker]`, with the quotient map.
pub fn abelianized_problem(e: &EmbeddingProblem) -> Result<(EmbeddingProblem, ProblemMap)> {
    let g1 = e.g1();
    let kk = commutator_subgroup(g1, e.kernel());
    let (q, proj) = quotient(g1, &kk)?;
    let mut images = vec![usize::MAX; q.order()];
    for x in g1.elements() {
        let y = proj.apply(x);
        if images[y] == usize::MAX {
            images[y] = e.phi().apply(x);
        }
    }
    let phi = GroupHom::new(q, e.g2().clone(), images)?;
    let target = EmbeddingProblem::new(&phi, e.psi())?;
    let map = ProblemMap::new(e, &target, &proj, &GroupHom::identity(e.g2()))?;
    Ok((target, map))
}

/// `U_{n+1}(F_2) -> (Z/2)^n`, `U -> (e_12, e_23, ..., e_{n,n+1})`, lifting
/// `a_1 × ... × a_n`.
pub fn dwyer_problem(chars: &[GroupHom]) -> Result<EmbeddingProblem> {
    let n = chars.len();
    let Some(first) = chars.first() else {
        return Err(Error::InvalidInput("at least one character is needed".into()));
    };
    let base = first.domain();
    for a in chars {
        if !a.domain().same_as(base) || a.codomain().order() != 2 {
            return Err(Error::TypeMismatch("characters must map one base group to Z/2".into()));
        }
    }
    let u = standard_group(&GroupKind::Unipotent { n: n + 1 })?;
    let v = elementary_abelian_2(n)?;
    let size = n + 1;
    let positions: Vec<(usize, usize)> = (0..size).flat_map(|i| (i + 1..size).map(move |j| (i, j))).collect();
    let k = positions.len();
    let phi_images = u
        .elements()
        .map(|x| {
            (0..n).fold(0usize, |acc, i| {
                let p = positions.iter().position(|&q| q == (i, i + 1)).expect("superdiagonal entry");
                (acc << 1) | ((x >> (k - 1 - p)) & 1)
            })
        })
        .collect();
    let phi = GroupHom::new(u, v.clone(), phi_images)?;
    let psi_images = base
        .elements()
        .map(|b| {
            chars.iter().fold(0usize, |acc, a| {
                let bit = (a.apply(b) != a.codomain().identity()) as usize;
                (acc << 1) | bit
            })
        })
        .collect();
    let psi = GroupHom::new(base.clone(), v, psi_images)?;
    EmbeddingProblem::new(&phi, &psi)
}

/// Every homomorphism `base -> Z/2`, in search order.
pub fn characters(base: &FiniteGroup) -> Result<Vec<GroupHom>> {
    let z2 = standard_group(&GroupKind::Cyclic { n: 2 })?;
    crate::groups::enumerate_homs(base, &z2, &HomConstraint::any(), node_budget())
}

/// Both sides of Dwyer's criterion, each computed on its own.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct DwyerReport {
    /// Whether the Massey product is defined and contains zero; `None` when
    /// the search ran out of budget.
    pub massey_contains_zero: Option<bool>,
    /// Whether the unipotent embedding problem is solvable; `None` when the
    /// search ran out of budget.
    pub solvable: Option<bool>,
}

impl DwyerReport {
    /// `None` unless both sides finished.
    pub fn agree(&self) -> Option<bool> {
        Some(self.massey_contains_zero? == self.solvable?)
    }
}

pub fn dwyer_check(chars: &[GroupHom], budget: u64) -> Result<DwyerReport> {
    let cochains = characters_as_cochains(chars, 2)?;
    let massey = match massey_contains_zero(&cochains, budget)? {
        MasseyZero::BudgetExceeded => None,
        other => other.contains_zero(),
    };
    let problem = dwyer_problem(chars)?;
    let solvable = match is_solvable(&problem, budget) {
        Ok(b) => Some(b),
        Err(Error::SearchBudgetExceeded(_)) => None,
        Err(x) => return Err(x),
    };
    Ok(DwyerReport {
        massey_contains_zero: massey,
        solvable,
    })
}

/// The first `a: Z/2 -> ker` and `c ∈ H²(ker, coeff)` with `a^*(c) != 0`,
/// searching homomorphisms in order and classes in enumeration order.
pub fn pairing_witness(ker: &FiniteGroup, coeff: &FinAbGroup) -> Result<Option<(GroupHom, CohomologyClass)>> {
    let z2 = standard_group(&GroupKind::Cyclic { n: 2 })?;
    let h = cohomology(&trivial_module(ker, coeff), 2)?;
    let target = cohomology(&trivial_module(&z2, coeff), 2)?;
    let homs = crate::groups::enumerate_homs(&z2, ker, &HomConstraint::any(), node_budget())?;
    for a in homs {
        for c in h.classes() {
            if c.is_zero() {
                continue;
            }
            if !pullback(&a, &c, &target)?.is_zero() {
                return Ok(Some((a, c)));
            }
        }
    }
    Ok(None)
}

/// The binary icosahedral chain: `SL(2,5) -> A5`, pulled back along an
/// involution, together with the pairing witness on `A5`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct IcosahedralReport {
    /// Name of the involution of `A5` hit by the generator of `Z/2`.
    pub involution: String,
    pub pulled_back_order: usize,
    pub pulled_back_cyclic: bool,
    /// Coordinates of the pulled back class in `H²(Z/2, Z/2)`.
    pub pulled_back_class: Vec<i64>,
    /// Coordinates of the class of `SL(2,5)` in `H²(A5, Z/2)`.
    pub extension_class: Vec<i64>,
    /// Involution and class found by the pairing witness search.
    pub witness: Option<(String, Vec<i64>)>,
    /// Whether the witness class is the class of `SL(2,5)`.
    pub witness_is_extension_class: bool,
}

pub fn icosahedral_example() -> Result<IcosahedralReport> {
    let sl = standard_group(&GroupKind::Sl2 { p: 5 })?;
    let psl = standard_group(&GroupKind::Psl2 { p: 5 })?;
    let a5 = standard_group(&GroupKind::Alternating { n: 5 })?;
    let (q, to_q) = quotient(&sl, &sl.center())?;
    let iso_q = first_hom(&q, &psl, &HomConstraint::any().injective(), node_budget())?
        .ok_or_else(|| Error::Internal("SL(2,5)/{±1} is not PSL(2,5)".into()))?;
    let iso = first_hom(&psl, &a5, &HomConstraint::any().injective(), node_budget())?
        .ok_or_else(|| Error::Internal("PSL(2,5) and A5 are not isomorphic".into()))?;
    let proj = to_q.then(&iso_q)?.then(&iso)?;
    let ext = Extension::from_surjection(&proj)?;
    let class = class_of_extension(&ext)?;

    let coeff = FinAbGroup::cyclic(2);
    let witness = pairing_witness(&a5, &coeff)?;
    let z2 = standard_group(&GroupKind::Cyclic { n: 2 })?;
    let a = match &witness {
        Some((a, _)) => a.clone(),
        None => {
            let inv = a5
                .elements()
                .find(|&x| a5.element_order(x) == 2)
                .ok_or_else(|| Error::Internal("A5 has no involution".into()))?;
            let images = z2.elements().map(|x| if x == z2.identity() { a5.identity() } else { inv }).collect();
            GroupHom::new(z2.clone(), a5.clone(), images)?
        }
    };
    let gen = z2.elements().find(|&x| x != z2.identity()).expect("Z/2 has a generator");
    let inv = a.apply(gen);
    let pulled = pullback_extension(&ext, &a)?;
    let total = pulled.total();
    let pulled_class = class_of_extension(&pulled)?;
    let witness_is_extension_class = match &witness {
        Some((_, c)) => c.parent().class_of(&class.representative())? == *c,
        None => false,
    };
    Ok(IcosahedralReport {
        involution: a5.name(inv).to_string(),
        pulled_back_order: total.order(),
        pulled_back_cyclic: total.elements().any(|x| total.element_order(x) == total.order()),
        pulled_back_class: pulled_class.element().to_vec(),
        extension_class: class.element().to_vec(),
        witness: witness.map(|(a, c)| (a5.name(a.apply(gen)).to_string(), c.element().to_vec())),
        witness_is_extension_class,
    })
}
