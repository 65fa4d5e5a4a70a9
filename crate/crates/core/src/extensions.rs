//! Extensions `1 -> M -> Ω -> Π -> 1` with abelian kernel, their classes,
//! sections, and the edge map `δ: H²(Ω, A)_0 -> H¹(Π, Hom(M, A))`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::ops::ControlFlow;
use std::sync::Arc;

use crate::abelian::{present_quotient, AbMap, FinAbGroup};
use crate::cochain::{cohomology, pullback, CoboundarySolver, Cochain, CohomologyClass, CohomologyGroup};
use crate::error::{Error, Result};
use crate::gmodule::{hom_module, restrict_module, GModule, HomModule};
use crate::groups::{fiber_product, node_budget, search_homs, FiniteGroup, GroupHom, HomConstraint, Subgroup};
use crate::products::{cup_classes_in, CoeffPairing};

/// Sign `ε` with `s1*(c) - s2*(c) = ε [s1 - s2] ∪ δ(c)` for the conventions
/// implemented here.
pub const SECTION_FORMULA_SIGN: i64 = -1;

/// Largest group order built from a table in this module.
const MAX_BUILT_ORDER: usize = 4096;

/// The additive group of `a` as a [`FiniteGroup`]; element `k` is
/// `a.element(k)`.
pub fn additive_group(a: &FinAbGroup) -> Result<FiniteGroup> {
    let n = a.order() as usize;
    if n > MAX_BUILT_ORDER {
        return Err(Error::UnsupportedParameter(format!("group of order {n} is too large to tabulate")));
    }
    let elems: Vec<Vec<i64>> = a.elements().collect();
    let mut mul = Vec::with_capacity(n * n);
    for x in &elems {
        for y in &elems {
            mul.push(a.index_of(&a.add(x, y)) as u32);
        }
    }
    let names = elems
        .iter()
        .map(|v| {
            let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    FiniteGroup::from_flat(a.to_string(), n, mul, Some(names))
}

/// An abelian subgroup identified with a group in invariant-factor form.
#[derive(Clone, Debug)]
pub struct AbelianSubgroup {
    pub group: FinAbGroup,
    /// Element of the parent for each index of `group`.
    pub elements: Vec<usize>,
    /// Index in `group` of each parent element, if it is a member.
    pub index: Vec<Option<u64>>,
}

pub fn abelian_structure(sub: &Subgroup) -> Result<AbelianSubgroup> {
    let g = sub.parent();
    if !sub.is_abelian() {
        return Err(Error::KernelNotAbelian);
    }
    let mut gens: Vec<usize> = Vec::new();
    let mut reached = g.closure_mask(&[]);
    for &x in sub.members() {
        if !reached[x] {
            gens.push(x);
            reached = g.closure_mask(&gens);
        }
    }
    let orders: Vec<u64> = gens.iter().map(|&x| g.element_order(x) as u64).collect();
    let t = gens.len();
    let mut coord: Vec<Option<Vec<i64>>> = vec![None; g.order()];
    coord[g.identity()] = Some(vec![0; t]);
    let mut queue = VecDeque::from([g.identity()]);
    let mut relations = Vec::new();
    while let Some(y) = queue.pop_front() {
        let c = coord[y].clone().expect("queued elements have coordinates");
        for (i, &k) in gens.iter().enumerate() {
            let z = g.mul(y, k);
            let mut c2 = c.clone();
            c2[i] = (c2[i] + 1) % orders[i] as i64;
            match &coord[z] {
                Some(old) => {
                    let rel: Vec<i64> = c2.iter().zip(old).map(|(a, b)| a - b).collect();
                    if rel.iter().any(|&x| x != 0) {
                        relations.push(rel);
                    }
                }
                None => {
                    coord[z] = Some(c2);
                    queue.push_back(z);
                }
            }
        }
    }
    let q = present_quotient(&orders, &relations)?;
    if q.group.order() != sub.order() as u64 {
        return Err(Error::Internal("abelian structure has the wrong order".into()));
    }
    let mut elements = Vec::with_capacity(sub.order());
    for x in q.group.elements() {
        let mut amb = vec![0i64; t];
        for (xj, gj) in x.iter().zip(&q.gens) {
            for (a, b) in amb.iter_mut().zip(gj) {
                *a += xj * b;
            }
        }
        let mut e = g.identity();
        for (i, &a) in amb.iter().enumerate() {
            e = g.mul(e, g.pow(gens[i], a.rem_euclid(orders[i] as i64) as usize));
        }
        elements.push(e);
    }
    let mut index = vec![None; g.order()];
    for &y in sub.members() {
        let c = coord[y].as_ref().expect("members are reached");
        index[y] = Some(q.group.index_of(&q.project(c)));
    }
    for (k, &e) in elements.iter().enumerate() {
        if index[e] != Some(k as u64) {
            return Err(Error::Internal("abelian structure is not a bijection".into()));
        }
    }
    Ok(AbelianSubgroup {
        group: q.group,
        elements,
        index,
    })
}

/// An extension of `Π` by an abelian group `M`.
#[derive(Clone)]
pub struct Extension(Arc<ExtData>);

struct ExtData {
    total: FiniteGroup,
    proj: GroupHom,
    kernel: FinAbGroup,
    embed: Vec<usize>,
    index: Vec<Option<u64>>,
    inj: GroupHom,
    module: GModule,
    set_section: Vec<usize>,
}

impl Extension {
    /// Builds an extension from a surjection `Ω -> Π` and an identification
    /// of its kernel: `embed[k]` is the image of `kernel.element(k)`.
    pub fn from_parts(proj: &GroupHom, kernel: &FinAbGroup, embed: Vec<usize>) -> Result<Self> {
        if !proj.is_surjective() {
            return Err(Error::PhiNotSurjective);
        }
        let total = proj.domain().clone();
        let base = proj.codomain().clone();
        let n = kernel.order() as usize;
        if embed.len() != n || n * base.order() != total.order() {
            return Err(Error::InvalidInput("kernel identification has the wrong size".into()));
        }
        let mut index = vec![None; total.order()];
        for (k, &w) in embed.iter().enumerate() {
            if w >= total.order() || proj.apply(w) != base.identity() || index[w].is_some() {
                return Err(Error::InvalidInput("kernel identification is not a bijection onto the kernel".into()));
            }
            index[w] = Some(k as u64);
        }
        let elems: Vec<Vec<i64>> = kernel.elements().collect();
        for (a, x) in elems.iter().enumerate() {
            for (b, y) in elems.iter().enumerate() {
                let s = kernel.index_of(&kernel.add(x, y)) as usize;
                if total.mul(embed[a], embed[b]) != embed[s] {
                    return Err(Error::NotAHomomorphism(a, b));
                }
            }
        }
        let add = additive_group(kernel)?;
        let inj = GroupHom::from_images_unchecked(add, total.clone(), embed.clone());
        let mut set_section = vec![usize::MAX; base.order()];
        for w in total.elements() {
            let p = proj.apply(w);
            if set_section[p] == usize::MAX {
                set_section[p] = w;
            }
        }
        set_section[base.identity()] = total.identity();
        let conj_matrix = |w: usize| -> Result<AbMap> {
            let cols: Vec<Vec<i64>> = (0..kernel.rank())
                .map(|i| {
                    let k = kernel.index_of(&kernel.basis(i)) as usize;
                    let c = index[total.conj(w, embed[k])].expect("kernel is normal");
                    kernel.element(c)
                })
                .collect();
            AbMap::from_columns(kernel, kernel, &cols)
        };
        let actions: Vec<AbMap> = base
            .elements()
            .map(|p| conj_matrix(set_section[p]))
            .collect::<Result<_>>()?;
        for w in total.elements() {
            if conj_matrix(w)? != actions[proj.apply(w)] {
                return Err(Error::Internal("conjugation action depends on the preimage".into()));
            }
        }
        let module = GModule::from_action_table(&base, kernel, actions)?;
        Ok(Extension(Arc::new(ExtData {
            total,
            proj: proj.clone(),
            kernel: kernel.clone(),
            embed,
            index,
            inj,
            module,
            set_section,
        })))
    }

    /// The extension given by a surjection with abelian kernel.
    pub fn from_surjection(proj: &GroupHom) -> Result<Self> {
        if !proj.is_surjective() {
            return Err(Error::PhiNotSurjective);
        }
        let s = abelian_structure(&proj.kernel())?;
        Self::from_parts(proj, &s.group, s.elements)
    }

    pub fn total(&self) -> &FiniteGroup {
        &self.0.total
    }

    pub fn base(&self) -> &FiniteGroup {
        self.0.proj.codomain()
    }

    pub fn proj(&self) -> &GroupHom {
        &self.0.proj
    }

    /// `M -> Ω` on the additive group of the kernel.
    pub fn inj(&self) -> &GroupHom {
        &self.0.inj
    }

    pub fn kernel(&self) -> &FinAbGroup {
        &self.0.kernel
    }

    /// `M` with the conjugation action of `Π`.
    pub fn module(&self) -> &GModule {
        &self.0.module
    }

    /// The preimage of minimal index, with the identity over the identity.
    pub fn set_section(&self, p: usize) -> usize {
        self.0.set_section[p]
    }

    pub fn embed(&self, m: &[i64]) -> usize {
        self.0.embed[self.0.kernel.index_of(&self.0.kernel.reduced(m)) as usize]
    }

    /// Coordinates in `M` of a kernel element of `Ω`.
    pub fn kernel_coords(&self, w: usize) -> Option<Vec<i64>> {
        self.0.index[w].map(|k| self.0.kernel.element(k))
    }

    pub fn kernel_subgroup(&self) -> Subgroup {
        Subgroup::new(&self.0.total, &self.0.embed).expect("kernel image is a subgroup")
    }

    pub fn same_as(&self, other: &Extension) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.proj.domain().same_as(other.0.proj.domain())
                && self.0.proj.images() == other.0.proj.images()
                && self.0.proj.codomain().same_as(other.0.proj.codomain())
                && self.0.kernel == other.0.kernel
                && self.0.embed == other.0.embed)
    }

    /// `f(π1, π2) = t(π1) t(π2) t(π1 π2)^-1` read in `M`.
    pub fn cocycle(&self) -> Result<Cochain> {
        let g = self.total();
        let b = self.base();
        Cochain::from_fn(&self.0.module, 2, |t| {
            let w = g.mul(
                g.mul(self.set_section(t[0]), self.set_section(t[1])),
                g.inv(self.set_section(b.mul(t[0], t[1]))),
            );
            self.kernel_coords(w).expect("lands in the kernel")
        })
    }

    /// `M ⋊_f Π` with `(m1, p1)(m2, p2) = (m1 + p1·m2 + f(p1, p2), p1 p2)`.
    pub fn from_cocycle(module: &GModule, f: &Cochain) -> Result<Self> {
        if f.degree() != 2 || !f.module().same_as(module) {
            return Err(Error::TypeMismatch("expected a 2-cochain of the given module".into()));
        }
        if !f.is_cocycle()? {
            return Err(Error::NotACocycle);
        }
        let m = module.coeff();
        let pi = module.group();
        let (nm, np) = (m.order() as usize, pi.order());
        let n = nm * np;
        if n > MAX_BUILT_ORDER {
            return Err(Error::UnsupportedParameter(format!("extension of order {n} is too large")));
        }
        let elems: Vec<Vec<i64>> = m.elements().collect();
        let mut mul = Vec::with_capacity(n * n);
        for x in 0..n {
            let (m1, p1) = (&elems[x / np], x % np);
            for y in 0..n {
                let (m2, p2) = (&elems[y / np], y % np);
                let v = m.add(&m.add(m1, &module.act(p1, m2)), &f.value(&[p1, p2]));
                mul.push((m.index_of(&v) as usize * np + pi.mul(p1, p2)) as u32);
            }
        }
        let names = (0..n)
            .map(|x| {
                let parts: Vec<String> = elems[x / np].iter().map(|v| v.to_string()).collect();
                format!("(({}),{})", parts.join(","), pi.name(x % np))
            })
            .collect();
        let total = FiniteGroup::from_flat(format!("{m}.{}", pi.label()), n, mul, Some(names))?;
        let proj = GroupHom::from_images_unchecked(total, pi.clone(), (0..n).map(|x| x % np).collect());
        let embed = (0..nm).map(|k| k * np + pi.identity()).collect();
        Self::from_parts(&proj, m, embed)
    }
}

impl fmt::Debug for Extension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Extension({} -> {} -> {})",
            self.kernel(),
            self.total().label(),
            self.base().label()
        )
    }
}

pub fn extension_from_cocycle(module: &GModule, f: &Cochain) -> Result<Extension> {
    Extension::from_cocycle(module, f)
}

pub fn class_of_extension(e: &Extension) -> Result<CohomologyClass> {
    cohomology(e.module(), 2)?.class_of(&e.cocycle()?)
}

/// Pulls `e` back along `f: Π' -> Π`; the total group is the fiber product.
pub fn pullback_extension(e: &Extension, f: &GroupHom) -> Result<Extension> {
    let fp = fiber_product(e.proj(), f)?;
    let id = f.domain().identity();
    let embed = e
        .0
        .embed
        .iter()
        .map(|&w| fp.index_of(w, id).expect("kernel pairs lie in the fiber product"))
        .collect();
    Extension::from_parts(&fp.to_right, e.kernel(), embed)
}

/// A homomorphic section up to conjugation by `M`; the representative is the
/// conjugate with lexicographically smallest images.
#[derive(Clone)]
pub struct SectionClass {
    extension: Extension,
    representative: GroupHom,
}

impl SectionClass {
    pub fn new(e: &Extension, s: &GroupHom) -> Result<Self> {
        if !s.domain().same_as(e.base()) || !s.codomain().same_as(e.total()) {
            return Err(Error::ExtensionMismatch("section has the wrong type".into()));
        }
        let g = e.total();
        if s.domain().elements().any(|p| e.proj().apply(s.apply(p)) != p) {
            return Err(Error::InvalidInput("not a section of the projection".into()));
        }
        let best = e
            .0
            .embed
            .iter()
            .map(|&k| s.images().iter().map(|&x| g.conj(k, x)).collect::<Vec<_>>())
            .min()
            .expect("kernel is nonempty");
        Ok(SectionClass {
            extension: e.clone(),
            representative: GroupHom::from_images_unchecked(s.domain().clone(), g.clone(), best),
        })
    }

    pub fn extension(&self) -> &Extension {
        &self.extension
    }

    pub fn representative(&self) -> &GroupHom {
        &self.representative
    }
}

impl PartialEq for SectionClass {
    fn eq(&self, other: &Self) -> bool {
        self.extension.same_as(&other.extension) && self.representative.images() == other.representative.images()
    }
}

impl fmt::Debug for SectionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SectionClass({:?})", self.representative.images())
    }
}

/// All homomorphic sections of `e` up to conjugation by `M`, ordered by
/// representative.
pub fn sections(e: &Extension) -> Result<Vec<SectionClass>> {
    let id = GroupHom::identity(e.base());
    let constraint = HomConstraint::lifting(e.proj().clone(), id);
    let mut reps = BTreeSet::new();
    let mut err = None;
    search_homs(e.base(), e.total(), &constraint, node_budget(), |s| match SectionClass::new(e, &s) {
        Ok(c) => {
            reps.insert(c.representative.images().to_vec());
            ControlFlow::Continue(())
        }
        Err(x) => {
            err = Some(x);
            ControlFlow::Break(())
        }
    })?;
    if let Some(x) = err {
        return Err(x);
    }
    Ok(reps
        .into_iter()
        .map(|images| SectionClass {
            extension: e.clone(),
            representative: GroupHom::from_images_unchecked(e.base().clone(), e.total().clone(), images),
        })
        .collect())
}

/// The 1-cocycle `g -> s1(g) s2(g)^-1` in `M`.
pub fn section_difference_cocycle(s1: &SectionClass, s2: &SectionClass) -> Result<Cochain> {
    if !s1.extension.same_as(&s2.extension) {
        return Err(Error::ExtensionMismatch("sections of different extensions".into()));
    }
    let e = &s1.extension;
    let g = e.total();
    let (a, b) = (&s1.representative, &s2.representative);
    Cochain::from_fn(e.module(), 1, |t| {
        e.kernel_coords(g.mul(a.apply(t[0]), g.inv(b.apply(t[0]))))
            .expect("sections agree modulo the kernel")
    })
}

pub fn section_difference(s1: &SectionClass, s2: &SectionClass) -> Result<CohomologyClass> {
    let c = section_difference_cocycle(s1, s2)?;
    cohomology(s1.extension.module(), 1)?.class_of(&c)
}

/// `H²(Ω, A)_0`, the kernel of restriction to `M`, inside `H²(Ω, A)`.
#[derive(Clone, Debug)]
pub struct RestrictedKernel {
    /// `A` as an `Ω`-module.
    pub inflated: GModule,
    pub h2: CohomologyGroup,
    pub kernel: FinAbGroup,
    /// `kernel -> h2.group()`.
    pub inclusion: AbMap,
}

impl RestrictedKernel {
    pub fn classes(&self) -> Vec<CohomologyClass> {
        self.kernel
            .elements()
            .map(|x| self.h2.class(&self.inclusion.apply(&x)).expect("coordinates fit"))
            .collect()
    }

    pub fn contains(&self, c: &CohomologyClass) -> Result<bool> {
        if !c.parent().same_as(&self.h2) {
            return Err(Error::TypeMismatch("class is not in this H²".into()));
        }
        Ok(self.inclusion.preimage(c.element())?.is_some())
    }
}

pub fn restricted_kernel(e: &Extension, a: &GModule) -> Result<RestrictedKernel> {
    if !a.group().same_as(e.base()) {
        return Err(Error::GroupMismatch("coefficient module is not over the base".into()));
    }
    let inflated = restrict_module(a, e.proj())?;
    let h2 = cohomology(&inflated, 2)?;
    let on_m = restrict_module(&inflated, e.inj())?;
    let h2m = cohomology(&on_m, 2)?;
    let cols: Vec<Vec<i64>> = (0..h2.group().rank())
        .map(|i| pullback(e.inj(), &h2.class(&h2.group().basis(i))?, &h2m).map(|c| c.element().to_vec()))
        .collect::<Result<_>>()?;
    let res = AbMap::from_columns(h2.group(), h2m.group(), &cols)?;
    let (kernel, inclusion) = res.kernel()?;
    Ok(RestrictedKernel {
        inflated,
        h2,
        kernel,
        inclusion,
    })
}

/// Every class of `H²(Ω, A)` restricting to zero on `M`.
pub fn h2_restricted_kernel(e: &Extension, a: &GModule) -> Result<Vec<CohomologyClass>> {
    Ok(restricted_kernel(e, a)?.classes())
}

/// Shared data for evaluating `δ` and both sides of the section formula for
/// one extension and coefficient module.
pub struct EdgeMap {
    extension: Extension,
    coeff: GModule,
    inflated: GModule,
    on_kernel: GModule,
    solver: CoboundarySolver,
    hom: HomModule,
    h1_hom: CohomologyGroup,
    h1_m: CohomologyGroup,
    h2_base: CohomologyGroup,
    pairing: CoeffPairing,
}

impl EdgeMap {
    pub fn new(e: &Extension, a: &GModule) -> Result<Self> {
        if !a.group().same_as(e.base()) {
            return Err(Error::GroupMismatch("coefficient module is not over the base".into()));
        }
        let inflated = restrict_module(a, e.proj())?;
        let on_kernel = restrict_module(&inflated, e.inj())?;
        let solver = CoboundarySolver::new(&on_kernel, 2)?;
        let hom = hom_module(e.module(), a)?;
        let pairing = CoeffPairing::evaluation(e.module(), &hom)?;
        Ok(EdgeMap {
            extension: e.clone(),
            coeff: a.clone(),
            h1_hom: cohomology(&hom.module, 1)?,
            h1_m: cohomology(e.module(), 1)?,
            h2_base: cohomology(a, 2)?,
            inflated,
            on_kernel,
            solver,
            hom,
            pairing,
        })
    }

    pub fn hom_module(&self) -> &HomModule {
        &self.hom
    }

    pub fn target(&self) -> &CohomologyGroup {
        &self.h1_hom
    }

    /// `H²(Π, A)`, where both sides of the section formula live.
    pub fn h2_base(&self) -> &CohomologyGroup {
        &self.h2_base
    }

    /// The 1-cocycle representing `δ(c)`.
    pub fn delta_cocycle(&self, c: &CohomologyClass) -> Result<Cochain> {
        if !c.module().same_as(&self.inflated) || c.degree() != 2 {
            return Err(Error::TypeMismatch("class is not in H²(Ω, A)".into()));
        }
        let e = &self.extension;
        let g = e.total();
        let m = e.kernel();
        let a = self.coeff.coeff();
        let f = c.representative();
        let f_m = f.pullback_into(e.inj(), &self.on_kernel)?;
        let b_m = self.solver.solve(&f_m)?.ok_or(Error::NotInKernel)?;
        let b = Cochain::from_fn(&self.inflated, 1, |t| match e.0.index[t[0]] {
            Some(k) => b_m.value(&[k as usize]),
            None => a.zero(),
        })?;
        let f2 = f.sub(&b.differential()?)?;
        let hom = &self.hom.hom;
        let basis_idx: Vec<usize> = (0..m.rank()).map(|i| m.index_of(&m.basis(i)) as usize).collect();
        let mut values = Vec::with_capacity(e.base().order());
        for p in e.base().elements() {
            let w = e.set_section(p);
            let phi = |k: usize| -> Vec<i64> {
                let x = e.0.embed[k];
                a.sub(&f2.value(&[w, x]), &f2.value(&[g.conj(w, x), w]))
            };
            let cols: Vec<Vec<i64>> = basis_idx.iter().map(|&k| phi(k)).collect();
            let map = AbMap::from_columns(m, a, &cols)?;
            for (k, x) in m.elements().enumerate() {
                if map.apply(&x) != phi(k) {
                    return Err(Error::Internal("edge map value is not additive".into()));
                }
            }
            values.push(hom.from_map(&map));
        }
        let d = Cochain::from_fn(&self.hom.module, 1, |t| values[t[0]].clone())?;
        if !d.is_cocycle()? {
            return Err(Error::Internal("edge map output is not a cocycle".into()));
        }
        Ok(d)
    }

    pub fn delta(&self, c: &CohomologyClass) -> Result<CohomologyClass> {
        self.h1_hom.class_of(&self.delta_cocycle(c)?)
    }

    /// `s^*(c)` in `H²(Π, A)`.
    pub fn section_pullback(&self, s: &SectionClass, c: &CohomologyClass) -> Result<CohomologyClass> {
        if !s.extension.same_as(&self.extension) {
            return Err(Error::ExtensionMismatch("section of another extension".into()));
        }
        pullback(&s.representative, c, &self.h2_base)
    }

    /// Both sides of `s1*(c) - s2*(c) = [s1 - s2] ∪ δ(c)`.
    pub fn check(&self, c: &CohomologyClass, s1: &SectionClass, s2: &SectionClass) -> Result<SectionFormulaReport> {
        let delta = self.delta(c)?;
        self.report(
            &self.section_pullback(s1, c)?,
            &self.section_pullback(s2, c)?,
            s1,
            s2,
            &delta,
        )
    }

    /// Reports for every ordered pair of the given sections, row-major.
    pub fn check_pairs(&self, c: &CohomologyClass, secs: &[SectionClass]) -> Result<Vec<SectionFormulaReport>> {
        let delta = self.delta(c)?;
        let pulled: Vec<CohomologyClass> = secs
            .iter()
            .map(|s| self.section_pullback(s, c))
            .collect::<Result<_>>()?;
        let mut out = Vec::with_capacity(secs.len() * secs.len());
        for (s1, p1) in secs.iter().zip(&pulled) {
            for (s2, p2) in secs.iter().zip(&pulled) {
                out.push(self.report(p1, p2, s1, s2, &delta)?);
            }
        }
        Ok(out)
    }

    fn report(
        &self,
        p1: &CohomologyClass,
        p2: &CohomologyClass,
        s1: &SectionClass,
        s2: &SectionClass,
        delta: &CohomologyClass,
    ) -> Result<SectionFormulaReport> {
        let lhs = p1.sub(p2)?;
        let diff = self.h1_m.class_of(&section_difference_cocycle(s1, s2)?)?;
        let rhs = cup_classes_in(&diff, delta, &self.pairing, &self.h2_base)?;
        Ok(SectionFormulaReport {
            lhs: lhs.element().to_vec(),
            rhs: rhs.element().to_vec(),
            holds_with_plus: lhs == rhs,
            holds_with_minus: lhs == rhs.neg(),
        })
    }
}

/// Both sides of the section formula for one class and pair of sections, as
/// coordinates in `H²(Π, A)`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SectionFormulaReport {
    pub lhs: Vec<i64>,
    pub rhs: Vec<i64>,
    pub holds_with_plus: bool,
    pub holds_with_minus: bool,
}

impl SectionFormulaReport {
    pub fn holds(&self, sign: i64) -> bool {
        if sign >= 0 {
            self.holds_with_plus
        } else {
            self.holds_with_minus
        }
    }
}

pub fn edge_delta(e: &Extension, a: &GModule, c: &CohomologyClass) -> Result<CohomologyClass> {
    EdgeMap::new(e, a)?.delta(c)
}

pub fn verify_section_formula(
    e: &Extension,
    a: &GModule,
    c: &CohomologyClass,
    s1: &SectionClass,
    s2: &SectionClass,
) -> Result<SectionFormulaReport> {
    EdgeMap::new(e, a)?.check(c, s1, s2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmodule::trivial_module;
    use crate::groups::{standard_group, GroupKind};

    fn z(n: usize) -> FiniteGroup {
        standard_group(&GroupKind::Cyclic { n }).unwrap()
    }

    #[test]
    fn nontrivial_cocycle_gives_cyclic_four() {
        let m = trivial_module(&z(2), &FinAbGroup::cyclic(2));
        let h = cohomology(&m, 2).unwrap();
        let f = h.lift(&[1]);
        let e = extension_from_cocycle(&m, &f).unwrap();
        let w = e.embed(&[0]);
        assert_eq!(w, e.total().identity());
        let x = e.set_section(1);
        assert_eq!(e.total().element_order(x), 4);
        assert!(sections(&e).unwrap().is_empty());
        assert_eq!(class_of_extension(&e).unwrap().element(), &[1]);
    }

    #[test]
    fn surjection_from_s3() {
        let s3 = standard_group(&GroupKind::Symmetric { n: 3 }).unwrap();
        let z2 = z(2);
        let sign: Vec<usize> = s3
            .elements()
            .map(|x| if s3.element_order(x) == 2 { 1 } else { 0 })
            .collect();
        let proj = GroupHom::new(s3, z2, sign).unwrap();
        let e = Extension::from_surjection(&proj).unwrap();
        assert_eq!(e.kernel().factors(), &[3]);
        assert_eq!(sections(&e).unwrap().len(), 1);
        assert!(class_of_extension(&e).unwrap().is_zero());
    }

    #[test]
    fn abelian_structure_of_klein_four() {
        let v = standard_group(&"Z2xZ2".parse::<GroupKind>().unwrap()).unwrap();
        let s = abelian_structure(&v.whole()).unwrap();
        assert_eq!(s.group.factors(), &[2, 2]);
    }
}
