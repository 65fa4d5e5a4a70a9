use std::fmt;
use std::sync::{Arc, OnceLock};

use super::{coboundary_columns, for_each_differential_row, tuple_count, Cochain};
use crate::abelian::{present_quotient, AbMap, FinAbGroup, QuotientPresentation};
use crate::error::{Error, Result};
use crate::gmodule::{restrict_module, GModule};
use crate::groups::GroupHom;
use crate::linalg::gf2::{from_bits, to_bits};
use crate::linalg::{Congruences, FpRref, Gf2Rref, ZnKernel, ZnSolver};

/// Size limits for cohomology computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest degree accepted.
    pub max_degree: usize,
    /// Largest number of rows of the differential out of the requested degree.
    pub max_cells: u64,
}

impl Default for Limits {
    fn default() -> Self {
        let max_cells = std::env::var("OBSTRUKT_MAX_CELLS")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(20_000_000);
        Limits { max_degree: 3, max_cells }
    }
}

/// `H^n(G, M)` with a chosen identification with a finite abelian group.
#[derive(Clone)]
pub struct CohomologyGroup(Arc<Inner>);

struct Inner {
    module: GModule,
    degree: usize,
    group: FinAbGroup,
    engine: Engine,
    solver: OnceLock<Option<CoboundarySolver>>,
}

enum Engine {
    Zero,
    Field {
        p: u64,
        boundaries: Echelon,
        classes: Echelon,
    },
    Ring {
        kernel: ZnKernel,
        quotient: QuotientPresentation,
        lifts: Vec<Vec<i64>>,
    },
}

pub fn cohomology(module: &GModule, n: usize) -> Result<CohomologyGroup> {
    cohomology_with(module, n, &Limits::default())
}

pub fn cohomology_with(module: &GModule, n: usize, limits: &Limits) -> Result<CohomologyGroup> {
    if n > limits.max_degree {
        return Err(Error::BudgetExceeded(format!(
            "degree {n} exceeds the maximum degree {}",
            limits.max_degree
        )));
    }
    let r = module.coeff().rank() as u64;
    tuple_count(module.group().order() - 1, n + 1)
        .and_then(|t| t.checked_mul(r))
        .filter(|&c| c <= limits.max_cells)
        .ok_or_else(|| {
            Error::BudgetExceeded(format!(
                "degree {n} over a group of order {} exceeds {} cells",
                module.group().order(),
                limits.max_cells
            ))
        })?;
    let (group, engine) = if module.coeff().is_trivial() {
        (FinAbGroup::trivial(), Engine::Zero)
    } else if let Some(p) = module.coeff().elementary_prime() {
        field_engine(module, n, p)
    } else {
        ring_engine(module, n)?
    };
    Ok(CohomologyGroup(Arc::new(Inner {
        module: module.clone(),
        degree: n,
        group,
        engine,
        solver: OnceLock::new(),
    })))
}

fn cochain_cells(module: &GModule, n: usize) -> usize {
    tuple_count(module.group().order() - 1, n).expect("checked by the caller") as usize * module.coeff().rank()
}

fn field_engine(module: &GModule, n: usize, p: u64) -> (FinAbGroup, Engine) {
    let cols = cochain_cells(module, n);
    let mut relations = Echelon::new(p, cols);
    for_each_differential_row(module, n, |_, entries| {
        if !relations.is_full() {
            relations.insert_sparse(entries);
        }
    });
    let cocycles = relations.nullspace();
    drop(relations);
    let mut boundaries = Echelon::new(p, cols);
    if n >= 1 {
        for col in coboundary_columns(module, n) {
            boundaries.insert_sparse(&col);
        }
    }
    let mut classes = Echelon::new(p, cols);
    for mut v in cocycles {
        boundaries.reduce(&mut v);
        classes.insert_dense(v);
    }
    let group = FinAbGroup::elementary(p, classes.rank());
    (
        group,
        Engine::Field {
            p,
            boundaries,
            classes,
        },
    )
}

fn ring_engine(module: &GModule, n: usize) -> Result<(FinAbGroup, Engine)> {
    let coeff = module.coeff();
    let r = coeff.rank();
    let e = coeff.exponent();
    let d = coeff.factors();
    let cols = cochain_cells(module, n);
    let mut system = Congruences::new(e, cols)?;
    for_each_differential_row(module, n, |row, entries| system.push(entries, d[row % r]));
    let kernel = system.kernel();
    drop(system);
    let mut relations = Vec::new();
    for col in 0..cols {
        if d[col % r] < e {
            let mut x = vec![0u64; cols];
            x[col] = d[col % r];
            relations.push(kernel.coords(&x));
        }
    }
    if n >= 1 {
        for col in coboundary_columns(module, n) {
            let mut x = vec![0i64; cols];
            for (row, a) in col {
                x[row] += a;
            }
            let x: Vec<u64> = x
                .iter()
                .enumerate()
                .map(|(i, &v)| v.rem_euclid(d[i % r] as i64) as u64)
                .collect();
            relations.push(kernel.coords(&x));
        }
    }
    let quotient = present_quotient(kernel.orders(), &relations)?;
    let lifts = quotient
        .gens
        .iter()
        .map(|z| {
            kernel
                .element(z)
                .iter()
                .enumerate()
                .map(|(k, &v)| (v % d[k % r]) as i64)
                .collect()
        })
        .collect();
    Ok((
        quotient.group.clone(),
        Engine::Ring {
            kernel,
            quotient,
            lifts,
        },
    ))
}

impl CohomologyGroup {
    pub fn module(&self) -> &GModule {
        &self.0.module
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    /// The abstract group this cohomology group is identified with.
    pub fn group(&self) -> &FinAbGroup {
        &self.0.group
    }

    pub fn order(&self) -> u64 {
        self.0.group.order()
    }

    pub fn same_as(&self, other: &CohomologyGroup) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// A cocycle representing the element with the given coordinates.
    pub fn lift(&self, element: &[i64]) -> Cochain {
        let inner = &*self.0;
        let x = inner.group.reduced(element);
        let zero = || Cochain::zero(&inner.module, inner.degree).expect("size checked at construction");
        match &inner.engine {
            Engine::Zero => zero(),
            Engine::Field { p, classes, .. } => {
                let cols = cochain_cells(&inner.module, inner.degree);
                let mut v = vec![0u64; cols];
                for (j, &k) in x.iter().enumerate() {
                    if k == 0 {
                        continue;
                    }
                    for (a, b) in v.iter_mut().zip(classes.row(j)) {
                        *a = (*a + k as u64 * b as u64) % p;
                    }
                }
                Cochain::from_values(&inner.module, inner.degree, v.into_iter().map(|a| a as i64).collect())
                    .expect("size checked at construction")
            }
            Engine::Ring { lifts, .. } => {
                let mut c = zero();
                let factors = inner.module.coeff().factors();
                let r = factors.len();
                for (lift, &k) in lifts.iter().zip(&x) {
                    if k == 0 {
                        continue;
                    }
                    for (i, (a, &b)) in c.values.iter_mut().zip(lift).enumerate() {
                        let d = factors[i % r] as i128;
                        *a = ((*a as i128 + k as i128 * b as i128).rem_euclid(d)) as i64;
                    }
                }
                c
            }
        }
    }

    /// Coordinates of the class of a cocycle.
    pub fn project(&self, c: &Cochain) -> Result<Vec<i64>> {
        self.check_cochain(c)?;
        if !c.is_cocycle()? {
            return Err(Error::NotACocycle);
        }
        Ok(self.project_unchecked(c))
    }

    fn check_cochain(&self, c: &Cochain) -> Result<()> {
        if c.degree() != self.degree() || !c.module().same_as(self.module()) {
            return Err(Error::TypeMismatch(format!(
                "degree-{} cochain does not belong to a degree-{} cohomology group of this module",
                c.degree(),
                self.degree()
            )));
        }
        Ok(())
    }

    pub(crate) fn project_unchecked(&self, c: &Cochain) -> Vec<i64> {
        match &self.0.engine {
            Engine::Zero => Vec::new(),
            Engine::Field {
                p,
                boundaries,
                classes,
            } => {
                let mut v: Vec<u32> = c.values().iter().map(|&a| a.rem_euclid(*p as i64) as u32).collect();
                boundaries.reduce(&mut v);
                let out: Vec<i64> = classes.pivots().iter().map(|&col| v[col] as i64).collect();
                out
            }
            Engine::Ring { kernel, quotient, .. } => {
                let x: Vec<u64> = c.values().iter().map(|&a| a as u64).collect();
                quotient.project(&kernel.coords(&x))
            }
        }
    }

    pub fn class_of(&self, c: &Cochain) -> Result<CohomologyClass> {
        let element = self.project(c)?;
        Ok(CohomologyClass {
            parent: self.clone(),
            element,
        })
    }

    pub fn class(&self, element: &[i64]) -> Result<CohomologyClass> {
        if element.len() != self.group().rank() {
            return Err(Error::TypeMismatch(format!(
                "{} coordinates given for a group of rank {}",
                element.len(),
                self.group().rank()
            )));
        }
        Ok(CohomologyClass {
            parent: self.clone(),
            element: self.group().reduced(element),
        })
    }

    pub fn zero(&self) -> CohomologyClass {
        CohomologyClass {
            parent: self.clone(),
            element: self.group().zero(),
        }
    }

    /// Every class, in the enumeration order of [`FinAbGroup::elements`].
    pub fn classes(&self) -> impl Iterator<Item = CohomologyClass> + '_ {
        self.group().elements().map(|element| CohomologyClass {
            parent: self.clone(),
            element,
        })
    }

    pub fn classes_equal(&self, a: &Cochain, b: &Cochain) -> Result<bool> {
        Ok(self.project(a)? == self.project(b)?)
    }

    pub fn is_coboundary(&self, c: &Cochain) -> Result<bool> {
        Ok(self.group().is_zero(&self.project(c)?))
    }

    /// Some `b` with `db = c`, or `None` when `c` is not a coboundary.
    pub fn coboundary_preimage(&self, c: &Cochain) -> Result<Option<Cochain>> {
        self.check_cochain(c)?;
        if self.degree() == 0 {
            return Err(Error::InvalidInput("degree-0 cochains have no coboundary preimage".into()));
        }
        let solver = self
            .0
            .solver
            .get_or_init(|| CoboundarySolver::new(self.module(), self.degree()).ok());
        match solver {
            Some(s) => s.solve(c),
            None => CoboundarySolver::new(self.module(), self.degree())?.solve(c),
        }
    }
}

impl fmt::Debug for CohomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H^{}({:?}) = {}", self.degree(), self.module(), self.group())
    }
}

/// Solves `db = c` for cochains `c` of a fixed degree.
pub struct CoboundarySolver {
    module: GModule,
    degree: usize,
    solver: Option<ZnSolver>,
}

impl CoboundarySolver {
    pub fn new(module: &GModule, degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidInput("degree-0 cochains have no coboundary preimage".into()));
        }
        let coeff = module.coeff();
        if coeff.is_trivial() {
            return Ok(CoboundarySolver {
                module: module.clone(),
                degree,
                solver: None,
            });
        }
        let r = coeff.rank();
        let d = coeff.factors();
        let cols = Cochain::zero(module, degree - 1)?.values().len();
        Cochain::zero(module, degree)?;
        let mut system = Congruences::new(coeff.exponent(), cols)?;
        for_each_differential_row(module, degree - 1, |row, entries| system.push(entries, d[row % r]));
        Ok(CoboundarySolver {
            module: module.clone(),
            degree,
            solver: Some(system.into_solver()),
        })
    }

    pub fn solve(&self, c: &Cochain) -> Result<Option<Cochain>> {
        if c.degree() != self.degree || !c.module().same_as(&self.module) {
            return Err(Error::TypeMismatch("cochain does not fit the solver".into()));
        }
        let Some(solver) = &self.solver else {
            return Ok(Some(Cochain::zero(&self.module, self.degree - 1)?));
        };
        let d = self.module.coeff().factors();
        let r = d.len();
        match solver.solve(c.values()) {
            None => Ok(None),
            Some(x) => {
                let values = x
                    .iter()
                    .enumerate()
                    .map(|(k, &v)| (v % d[k % r]) as i64)
                    .collect();
                Ok(Some(Cochain::from_values(&self.module, self.degree - 1, values)?))
            }
        }
    }
}

/// An element of a [`CohomologyGroup`].
#[derive(Clone)]
pub struct CohomologyClass {
    parent: CohomologyGroup,
    element: Vec<i64>,
}

impl CohomologyClass {
    pub fn parent(&self) -> &CohomologyGroup {
        &self.parent
    }

    pub fn element(&self) -> &[i64] {
        &self.element
    }

    pub fn degree(&self) -> usize {
        self.parent.degree()
    }

    pub fn module(&self) -> &GModule {
        self.parent.module()
    }

    pub fn is_zero(&self) -> bool {
        self.parent.group().is_zero(&self.element)
    }

    pub fn order(&self) -> u64 {
        self.parent.group().element_order(&self.element)
    }

    pub fn representative(&self) -> Cochain {
        self.parent.lift(&self.element)
    }

    fn check_parent(&self, other: &CohomologyClass) -> Result<()> {
        if !self.parent.same_as(&other.parent) {
            return Err(Error::TypeMismatch("classes live in different cohomology groups".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &CohomologyClass) -> Result<CohomologyClass> {
        self.check_parent(other)?;
        Ok(CohomologyClass {
            parent: self.parent.clone(),
            element: self.parent.group().add(&self.element, &other.element),
        })
    }

    pub fn sub(&self, other: &CohomologyClass) -> Result<CohomologyClass> {
        self.check_parent(other)?;
        Ok(CohomologyClass {
            parent: self.parent.clone(),
            element: self.parent.group().sub(&self.element, &other.element),
        })
    }

    pub fn neg(&self) -> CohomologyClass {
        self.scale(-1)
    }

    pub fn scale(&self, k: i64) -> CohomologyClass {
        CohomologyClass {
            parent: self.parent.clone(),
            element: self.parent.group().scale(k, &self.element),
        }
    }
}

impl PartialEq for CohomologyClass {
    fn eq(&self, other: &Self) -> bool {
        self.parent.same_as(&other.parent) && self.element == other.element
    }
}

impl fmt::Debug for CohomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "class {:?} in H^{}", self.element, self.degree())
    }
}

/// Whether two cocycles define the same class in `h`.
pub fn classes_equal(a: &Cochain, b: &Cochain, h: &CohomologyGroup) -> Result<bool> {
    h.classes_equal(a, b)
}

/// `f^*: H^n(G, M) -> H^n(H, f^*M)` landing in the given group.
pub fn pullback(f: &GroupHom, class: &CohomologyClass, target: &CohomologyGroup) -> Result<CohomologyClass> {
    let restricted = restrict_module(class.module(), f)?;
    if !target.module().same_as(&restricted) || target.degree() != class.degree() {
        return Err(Error::TypeMismatch(
            "target cohomology group is not over the restricted module".into(),
        ));
    }
    let c = class.representative().pullback_into(f, target.module())?;
    Ok(CohomologyClass {
        element: target.project_unchecked(&c),
        parent: target.clone(),
    })
}

/// `f^*` with the target cohomology group computed on the fly.
pub fn pullback_class(f: &GroupHom, class: &CohomologyClass) -> Result<CohomologyClass> {
    let restricted = restrict_module(class.module(), f)?;
    let target = cohomology(&restricted, class.degree())?;
    pullback(f, class, &target)
}

/// `t_*: H^n(G, A) -> H^n(G, B)` for an equivariant `t: A -> B`.
pub fn pushforward(t: &AbMap, class: &CohomologyClass, target: &CohomologyGroup) -> Result<CohomologyClass> {
    class.module().check_equivariant(target.module(), t)?;
    if target.degree() != class.degree() {
        return Err(Error::TypeMismatch("degrees differ".into()));
    }
    let c = class.representative().map_values(t, target.module())?;
    Ok(CohomologyClass {
        element: target.project_unchecked(&c),
        parent: target.clone(),
    })
}

/// Row echelon basis over F_p with a dense `u32` interface.
enum Echelon {
    Two(Gf2Rref),
    Odd(FpRref),
}

impl Echelon {
    fn new(p: u64, cols: usize) -> Self {
        if p == 2 {
            Echelon::Two(Gf2Rref::new(cols))
        } else {
            Echelon::Odd(FpRref::new(p, cols))
        }
    }

    fn rank(&self) -> usize {
        match self {
            Echelon::Two(m) => m.rank(),
            Echelon::Odd(m) => m.rank(),
        }
    }

    fn is_full(&self) -> bool {
        match self {
            Echelon::Two(m) => m.is_full(),
            Echelon::Odd(m) => m.is_full(),
        }
    }

    fn pivots(&self) -> &[usize] {
        match self {
            Echelon::Two(m) => m.pivots(),
            Echelon::Odd(m) => m.pivots(),
        }
    }

    fn insert_sparse(&mut self, entries: &[(usize, i64)]) -> bool {
        match self {
            Echelon::Two(m) => {
                let support: Vec<usize> = entries.iter().filter(|e| e.1 & 1 == 1).map(|e| e.0).collect();
                m.insert_sparse(&support)
            }
            Echelon::Odd(m) => m.insert_sparse(entries),
        }
    }

    fn insert_dense(&mut self, v: Vec<u32>) -> bool {
        match self {
            Echelon::Two(m) => m.insert_bits(to_bits(&v)),
            Echelon::Odd(m) => m.insert_dense(v),
        }
    }

    fn reduce(&self, v: &mut [u32]) {
        match self {
            Echelon::Two(m) => {
                let mut x = to_bits(v);
                m.reduce(&mut x);
                v.copy_from_slice(&from_bits(&x, v.len()));
            }
            Echelon::Odd(m) => m.reduce(v),
        }
    }

    fn row(&self, r: usize) -> Vec<u32> {
        match self {
            Echelon::Two(m) => from_bits(m.row(r), m.cols()),
            Echelon::Odd(m) => m.row(r).to_vec(),
        }
    }

    fn nullspace(&self) -> Vec<Vec<u32>> {
        match self {
            Echelon::Two(m) => m.nullspace().iter().map(|x| from_bits(x, m.cols())).collect(),
            Echelon::Odd(m) => m.nullspace(),
        }
    }
}
