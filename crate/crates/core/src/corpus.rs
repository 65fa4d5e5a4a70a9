//! Instance collections and their checks: the section formula, extension
//! roundtrips, embedding problems and Dwyer's criterion.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::abelian::FinAbGroup;
use crate::cochain::{cohomology, CohomologyClass, CohomologyGroup};
use crate::embedding::{dwyer_check, solutions_as_sections, DwyerReport, EmbeddingProblem};
use crate::error::{Error, Result};
use crate::extensions::{
    class_of_extension, extension_from_cocycle, restricted_kernel, section_difference_cocycle, sections, EdgeMap,
    Extension,
};
use crate::groups::{enumerate_homs, node_budget, quotient, FiniteGroup, GroupHom, HomConstraint, Subgroup};
use crate::json::{build_action, ActionSpec, GroupSpec, HomSpec, ModuleSpec, ProblemSpec};

/// Default seed for corpus generation and sampling.
pub const DEFAULT_SEED: u64 = 20_240_611;

/// Class groups up to this order are checked exhaustively; larger ones on a
/// basis plus seeded random elements.
pub const EXHAUSTIVE_CLASSES: u64 = 64;

const SAMPLED_CLASSES: usize = 8;

/// An extension of `Π` by an abelian `M`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExtensionSpec {
    /// Built from the class with the given coordinates in `H²(Π, M)`; an
    /// empty list is the zero class.
    Cocycle { module: ModuleSpec, class: Vec<i64> },
    /// `proj: total -> base` with abelian kernel.
    Surjection { total: GroupSpec, base: GroupSpec, proj: HomSpec },
}

impl ExtensionSpec {
    pub fn build(&self) -> Result<Extension> {
        match self {
            ExtensionSpec::Cocycle { module, class } => {
                let m = module.build()?;
                let h = cohomology(&m, 2)?;
                let c = if class.is_empty() { h.zero() } else { h.class(class)? };
                extension_from_cocycle(&m, &c.representative())
            }
            ExtensionSpec::Surjection { total, base, proj } => {
                let p = proj.build(&total.build()?, &base.build()?)?;
                Extension::from_surjection(&p)
            }
        }
    }
}

/// A finite abelian group with an action of the base of an extension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientSpec {
    pub coeff: FinAbGroup,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub action: ActionSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionFormulaInstance {
    pub name: String,
    pub extension: ExtensionSpec,
    pub coefficients: CoefficientSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundtripCase {
    pub name: String,
    pub module: ModuleSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingCase {
    pub name: String,
    pub problem: ProblemSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DwyerCase {
    pub name: String,
    pub base: GroupSpec,
    /// Each character as the image (0 or 1) of every element.
    pub characters: Vec<Vec<usize>>,
}

impl DwyerCase {
    pub fn build(&self) -> Result<Vec<GroupHom>> {
        let base = self.base.build()?;
        let z2 = crate::groups::standard_group(&crate::groups::GroupKind::Cyclic { n: 2 })?;
        self.characters
            .iter()
            .map(|c| GroupHom::new(base.clone(), z2.clone(), c.clone()))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionCorpus {
    pub seed: u64,
    pub instances: Vec<SectionFormulaInstance>,
    #[serde(default)]
    pub roundtrip: Vec<RoundtripCase>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingCorpus {
    pub seed: u64,
    pub instances: Vec<EmbeddingCase>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DwyerCorpus {
    pub seed: u64,
    pub instances: Vec<DwyerCase>,
}

fn rng_for(seed: u64, name: &str) -> ChaCha8Rng {
    let h = name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

/// Every element of `group` when it is small, otherwise zero, the basis,
/// their sum and a few seeded random elements.
pub fn sample_elements(group: &FinAbGroup, rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    if group.order() <= EXHAUSTIVE_CLASSES {
        return group.elements().collect();
    }
    let mut out: Vec<Vec<i64>> = vec![group.zero()];
    out.extend((0..group.rank()).map(|i| group.basis(i)));
    out.push(group.factors().iter().map(|_| 1).collect());
    for _ in 0..SAMPLED_CLASSES {
        out.push(group.factors().iter().map(|&d| rng.gen_range(0..d as i64)).collect());
    }
    let mut seen = BTreeSet::new();
    out.retain(|x| seen.insert(x.clone()));
    out
}

fn sample_classes(h: &CohomologyGroup, rng: &mut ChaCha8Rng) -> Vec<CohomologyClass> {
    sample_elements(h.group(), rng)
        .into_iter()
        .map(|x| h.class(&x).expect("sampled coordinates fit"))
        .collect()
}

// ---------------------------------------------------------------------------
// Section formula.

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionFormulaOutcome {
    pub name: String,
    pub total_order: usize,
    pub base_order: usize,
    pub kernel: Vec<u64>,
    pub trivial_kernel_action: bool,
    pub trivial_coefficient_action: bool,
    pub sections: usize,
    /// Order of the subgroup of `H²(Ω, A)` restricting to zero on `M`.
    pub restricted_classes: u64,
    pub classes_checked: usize,
    pub checks: usize,
    pub holds_with_plus: usize,
    pub holds_with_minus: usize,
    /// Every check holds under the requested sign.
    pub passed: bool,
}

pub fn check_section_formula(inst: &SectionFormulaInstance, sign: i64, seed: u64) -> Result<SectionFormulaOutcome> {
    let e = inst.extension.build()?;
    let a = build_action(e.base(), &inst.coefficients.coeff, &inst.coefficients.action)?;
    let rk = restricted_kernel(&e, &a)?;
    let edge = EdgeMap::new(&e, &a)?;
    let secs = sections(&e)?;
    let mut rng = rng_for(seed, &inst.name);
    let classes: Vec<CohomologyClass> = sample_elements(&rk.kernel, &mut rng)
        .into_iter()
        .map(|x| rk.h2.class(&rk.inclusion.apply(&x)))
        .collect::<Result<_>>()?;
    let (mut checks, mut plus, mut minus, mut good) = (0, 0, 0, 0);
    for c in &classes {
        let delta = edge.delta(c)?;
        if c.is_zero() && !delta.is_zero() {
            return Err(Error::Internal("edge map is nonzero on the zero class".into()));
        }
        for r in edge.check_pairs(c, &secs)? {
            checks += 1;
            plus += r.holds_with_plus as usize;
            minus += r.holds_with_minus as usize;
            good += r.holds(sign) as usize;
        }
    }
    Ok(SectionFormulaOutcome {
        name: inst.name.clone(),
        total_order: e.total().order(),
        base_order: e.base().order(),
        kernel: e.kernel().factors().to_vec(),
        trivial_kernel_action: e.module().is_trivial_action(),
        trivial_coefficient_action: a.is_trivial_action(),
        sections: secs.len(),
        restricted_classes: rk.kernel.order(),
        classes_checked: classes.len(),
        checks,
        holds_with_plus: plus,
        holds_with_minus: minus,
        passed: good == checks,
    })
}

fn module(group: &str, factors: &[u64], action: &[(usize, Vec<Vec<i64>>)]) -> ModuleSpec {
    ModuleSpec {
        group: group.into(),
        coeff: FinAbGroup::new(factors.to_vec()).expect("valid invariant factors"),
        action: action.iter().map(|(g, m)| (g.to_string(), m.clone())).collect(),
    }
}

/// `M` acted on through a homomorphism `χ: Π -> Z/k`, the generator of `Z/k`
/// acting by `t`.
fn module_via(group: &str, factors: &[u64], chi: &GroupHom, t: &[Vec<i64>]) -> ModuleSpec {
    let g = chi.domain();
    let coeff = FinAbGroup::new(factors.to_vec()).expect("valid invariant factors");
    let r = coeff.rank();
    let mut action = ActionSpec::new();
    for &x in g.generators() {
        let k = chi.apply(x);
        let mut m: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| (i == j) as i64).collect()).collect();
        for _ in 0..k {
            m = (0..r)
                .map(|i| {
                    (0..r)
                        .map(|j| (0..r).map(|l| t[i][l] * m[l][j]).sum::<i64>().rem_euclid(coeff.factors()[i] as i64))
                        .collect()
                })
                .collect();
        }
        action.insert(x.to_string(), m);
    }
    ModuleSpec {
        group: group.into(),
        coeff,
        action,
    }
}

fn group(s: &str) -> FiniteGroup {
    GroupSpec::from(s).build().expect("standard group")
}

/// The first nontrivial homomorphism `g -> Z/k` in search order.
fn first_character(g: &str, k: usize) -> GroupHom {
    let g = group(g);
    let zk = group(&format!("Z{k}"));
    enumerate_homs(&g, &zk, &HomConstraint::any().surjective(), node_budget())
        .expect("small search")
        .into_iter()
        .next()
        .expect("a surjective character exists")
}

fn coeffs(factors: &[u64]) -> CoefficientSpec {
    CoefficientSpec {
        coeff: FinAbGroup::new(factors.to_vec()).expect("valid invariant factors"),
        action: ActionSpec::new(),
    }
}

fn coeffs_via(base: &str, factors: &[u64], chi: &GroupHom, t: &[Vec<i64>]) -> CoefficientSpec {
    let m = module_via(base, factors, chi, t);
    CoefficientSpec {
        coeff: m.coeff,
        action: m.action,
    }
}

fn cocycle_instance(name: &str, module: ModuleSpec, class: &[i64], coefficients: CoefficientSpec) -> SectionFormulaInstance {
    SectionFormulaInstance {
        name: name.into(),
        extension: ExtensionSpec::Cocycle {
            module,
            class: class.to_vec(),
        },
        coefficients,
    }
}

/// The default section-formula instances, hand-picked cases first.
pub fn section_formula_instances() -> Vec<SectionFormulaInstance> {
    let inv = |n: i64| vec![vec![n - 1]];
    let swap = vec![vec![0, 1], vec![1, 0]];
    let rot = vec![vec![0, 1], vec![1, 1]];
    let sign_s3 = first_character("S3", 2);
    let sign_d4 = first_character("D4", 2);
    let z3_on_a4 = first_character("Z3", 3);
    let z2 = first_character("Z2", 2);
    let mut out = vec![
        cocycle_instance("Z2 by Z2 split, A = Z2", module("Z2", &[2], &[]), &[], coeffs(&[2])),
        cocycle_instance("Z2 by Z2 nonsplit (Z4), A = Z2", module("Z2", &[2], &[]), &[1], coeffs(&[2])),
        cocycle_instance("Z2 by Z2 nonsplit (Z4), A = Z4", module("Z2", &[2], &[]), &[1], coeffs(&[4])),
        cocycle_instance("Z2 by Z2xZ2 split, A = Z2", module("Z2xZ2", &[2], &[]), &[], coeffs(&[2])),
        cocycle_instance("Z2 by Z2xZ2 class (1,0,0), A = Z2", module("Z2xZ2", &[2], &[]), &[1, 0, 0], coeffs(&[2])),
        cocycle_instance("Z2 by Z2xZ2 class (0,0,1), A = Z2", module("Z2xZ2", &[2], &[]), &[0, 0, 1], coeffs(&[2])),
        cocycle_instance("Z2 by Z2xZ2 class (1,1,1), A = Z2", module("Z2xZ2", &[2], &[]), &[1, 1, 1], coeffs(&[2])),
        cocycle_instance("Z2xZ2 by Z2 split, A = Z2", module("Z2", &[2, 2], &[]), &[], coeffs(&[2])),
        cocycle_instance("Z2xZ2 by Z2 swapped (D4), A = Z2", module("Z2", &[2, 2], &[(1, swap.clone())]), &[], coeffs(&[2])),
        cocycle_instance("Z2xZ2 by Z2 swapped (D4), A = Z4", module("Z2", &[2, 2], &[(1, swap.clone())]), &[], coeffs(&[4])),
        cocycle_instance("Z3 by Z2 inverted (S3), A = Z2", module("Z2", &[3], &[(1, inv(3))]), &[], coeffs(&[2])),
        cocycle_instance(
            "Z3 by Z2 inverted (S3), A = Z3 with sign action",
            module("Z2", &[3], &[(1, inv(3))]),
            &[],
            coeffs_via("Z2", &[3], &z2, &inv(3)),
        ),
        cocycle_instance("Z3 by Z3 split, A = Z3", module("Z3", &[3], &[]), &[], coeffs(&[3])),
        cocycle_instance("Z3 by Z3 nonsplit (Z9), A = Z3", module("Z3", &[3], &[]), &[1], coeffs(&[3])),
        cocycle_instance("Z3 by Z3xZ3 split, A = Z3", module("Z3xZ3", &[3], &[]), &[], coeffs(&[3])),
        cocycle_instance("Z4 by Z2 inverted (D4), A = Z2", module("Z2", &[4], &[(1, inv(4))]), &[], coeffs(&[2])),
        cocycle_instance(
            "Z4 by Z2 inverted (D4), A = Z4 with sign action",
            module("Z2", &[4], &[(1, inv(4))]),
            &[],
            coeffs_via("Z2", &[4], &z2, &inv(4)),
        ),
        cocycle_instance("Z4 by Z2 inverted nonsplit (Q8), A = Z2", module("Z2", &[4], &[(1, inv(4))]), &[1], coeffs(&[2])),
        cocycle_instance("Z4 by Z2 split, A = Z4", module("Z2", &[4], &[]), &[], coeffs(&[4])),
        cocycle_instance("Z2 by Z4 split, A = Z2", module("Z4", &[2], &[]), &[], coeffs(&[2])),
        cocycle_instance("Z2 by Z4 nonsplit (Z8), A = Z2", module("Z4", &[2], &[]), &[1], coeffs(&[2])),
        cocycle_instance(
            "Z2xZ2 by Z3 rotated (A4), A = Z2",
            module_via("Z3", &[2, 2], &z3_on_a4, &rot),
            &[],
            coeffs(&[2]),
        ),
        cocycle_instance("Z2 by S3 split, A = Z2", module("S3", &[2], &[]), &[], coeffs(&[2])),
        cocycle_instance(
            "Z3 by S3 via sign, A = Z3 with sign action",
            module_via("S3", &[3], &sign_s3, &inv(3)),
            &[],
            coeffs_via("S3", &[3], &sign_s3, &inv(3)),
        ),
        cocycle_instance("Z2 by Z2xZ2xZ2 split, A = Z2", module("Z2xZ2xZ2", &[2], &[]), &[], coeffs(&[2])),
        cocycle_instance("Z2 by D4 split, A = Z2", module("D4", &[2], &[]), &[], coeffs(&[2])),
        cocycle_instance("Z2 by D4 class (1,0,0), A = Z2", module("D4", &[2], &[]), &[1, 0, 0], coeffs(&[2])),
        cocycle_instance(
            "Z2xZ2 by D4 via sign swap, A = Z2",
            module_via("D4", &[2, 2], &sign_d4, &swap),
            &[],
            coeffs(&[2]),
        ),
        cocycle_instance("Z2xZ2 by Z2xZ2 split, A = Z2", module("Z2xZ2", &[2, 2], &[]), &[], coeffs(&[2])),
        cocycle_instance("Z2 by Z2^4 split, A = Z2", module("Z2xZ2xZ2xZ2", &[2], &[]), &[], coeffs(&[2])),
        cocycle_instance("Z5 by Z2 inverted (D5), A = Z2", module("Z2", &[5], &[(1, inv(5))]), &[], coeffs(&[2])),
    ];
    let proj = first_character("S3", 2);
    out.push(SectionFormulaInstance {
        name: "S3 onto Z2 as a surjection, A = Z3".into(),
        extension: ExtensionSpec::Surjection {
            total: GroupSpec::from("S3"),
            base: GroupSpec::from("Z2"),
            proj: HomSpec::from_hom(&proj),
        },
        coefficients: coeffs(&[3]),
    });
    out
}

// ---------------------------------------------------------------------------
// Extension roundtrip.

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundtripOutcome {
    pub name: String,
    pub h2_order: u64,
    pub h1_order: u64,
    pub classes_checked: usize,
    /// `class_of_extension(extension_from_cocycle(f)) = [f]` on every class.
    pub roundtrip: bool,
    /// Sections exist exactly for the zero class.
    pub split_iff_zero: bool,
    /// A split extension has `|H¹(Π, M)|` section classes.
    pub section_count: bool,
    pub passed: bool,
}

pub fn check_roundtrip(case: &RoundtripCase, seed: u64) -> Result<RoundtripOutcome> {
    let m = case.module.build()?;
    let h2 = cohomology(&m, 2)?;
    let h1 = cohomology(&m, 1)?;
    let mut rng = rng_for(seed, &case.name);
    let classes = sample_classes(&h2, &mut rng);
    let (mut roundtrip, mut split_iff_zero, mut section_count) = (true, true, true);
    for c in &classes {
        let e = extension_from_cocycle(&m, &c.representative())?;
        roundtrip &= e.module().same_as(&m) && h2.class_of(&e.cocycle()?)? == *c;
        let secs = sections(&e)?;
        split_iff_zero &= secs.is_empty() != c.is_zero();
        if c.is_zero() {
            section_count &= secs.len() as u64 == h1.order();
        }
    }
    Ok(RoundtripOutcome {
        name: case.name.clone(),
        h2_order: h2.order(),
        h1_order: h1.order(),
        classes_checked: classes.len(),
        roundtrip,
        split_iff_zero,
        section_count,
        passed: roundtrip && split_iff_zero && section_count,
    })
}

/// Bases of order at most 16 with kernels of order at most 9.
pub fn roundtrip_cases() -> Vec<RoundtripCase> {
    let inv = |n: i64| vec![vec![n - 1]];
    let swap = vec![vec![0, 1], vec![1, 0]];
    let rot = vec![vec![0, 1], vec![1, 1]];
    let mut out = Vec::new();
    let bases = [
        "Z2", "Z3", "Z4", "Z2xZ2", "S3", "Z6", "Z8", "Z4xZ2", "Z2xZ2xZ2", "D4", "Q8", "Z3xZ3", "A4", "D6",
        "Z2xZ2xZ2xZ2", "Z4xZ4", "Z16", "D8", "Z2xD4", "Z2xQ8",
    ];
    let trivial: [&[u64]; 7] = [&[2], &[3], &[4], &[2, 2], &[5], &[3, 3], &[9]];
    for b in bases {
        for f in trivial {
            out.push(RoundtripCase {
                name: format!("{b} acting trivially on {f:?}"),
                module: module(b, f, &[]),
            });
        }
        let g = group(b);
        let z2 = group("Z2");
        if let Some(chi) = enumerate_homs(&g, &z2, &HomConstraint::any().surjective(), node_budget())
            .expect("small search")
            .into_iter()
            .next()
        {
            out.push(RoundtripCase {
                name: format!("{b} inverting [3] by a character"),
                module: module_via(b, &[3], &chi, &inv(3)),
            });
            out.push(RoundtripCase {
                name: format!("{b} inverting [4] by a character"),
                module: module_via(b, &[4], &chi, &inv(4)),
            });
            out.push(RoundtripCase {
                name: format!("{b} swapping [2, 2] by a character"),
                module: module_via(b, &[2, 2], &chi, &swap),
            });
        }
        let z3 = group("Z3");
        if let Some(chi) = enumerate_homs(&g, &z3, &HomConstraint::any().surjective(), node_budget())
            .expect("small search")
            .into_iter()
            .next()
        {
            out.push(RoundtripCase {
                name: format!("{b} rotating [2, 2] through Z3"),
                module: module_via(b, &[2, 2], &chi, &rot),
            });
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Embedding problems.

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingOutcome {
    pub name: String,
    pub solutions: usize,
    pub obstruction_zero: bool,
    pub h1_order: u64,
    /// Solutions exist exactly when the obstruction class vanishes.
    pub solvable_iff_unobstructed: bool,
    /// When solvable, the solution classes match `H¹(base, Ker)` one to one.
    pub counts_match: bool,
    pub passed: bool,
}

pub fn check_embedding(case: &EmbeddingCase) -> Result<EmbeddingOutcome> {
    let e = case.problem.build()?;
    let (gamma, pairs) = solutions_as_sections(&e)?;
    let c = class_of_extension(&gamma)?;
    let h1 = cohomology(gamma.module(), 1)?;
    let solvable_iff_unobstructed = pairs.is_empty() != c.is_zero();
    let counts_match = match pairs.first() {
        None => true,
        Some((_, s0)) => {
            let mut distinct = BTreeSet::new();
            for (_, s) in &pairs {
                distinct.insert(h1.project(&section_difference_cocycle(s, s0)?)?);
            }
            pairs.len() as u64 == h1.order() && distinct.len() == pairs.len()
        }
    };
    Ok(EmbeddingOutcome {
        name: case.name.clone(),
        solutions: pairs.len(),
        obstruction_zero: c.is_zero(),
        h1_order: h1.order(),
        solvable_iff_unobstructed,
        counts_match,
        passed: solvable_iff_unobstructed && counts_match,
    })
}

/// Abelian normal subgroups `N` with `1 < |N| <= max_order`, `N != g`.
pub fn abelian_normal_subgroups(g: &FiniteGroup, max_order: usize) -> Vec<Subgroup> {
    let closure = |gens: &[usize]| -> Subgroup {
        let conj: Vec<usize> = gens
            .iter()
            .flat_map(|&x| g.elements().map(move |h| (h, x)))
            .map(|(h, x)| g.conj(h, x))
            .collect();
        g.subgroup_generated(&conj)
    };
    let singles: Vec<Subgroup> = g.elements().skip(1).map(|x| closure(&[x])).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut consider = |s: Subgroup| {
        if s.order() > 1 && s.order() <= max_order && s.order() < g.order() && s.is_abelian() && seen.insert(s.members().to_vec()) {
            out.push(s);
        }
    };
    for (i, a) in singles.iter().enumerate() {
        consider(a.clone());
        for b in &singles[i + 1..] {
            let mut gens = a.members().to_vec();
            gens.extend_from_slice(b.members());
            consider(g.subgroup_generated(&gens));
        }
    }
    out.sort_by(|a, b| (a.order(), a.members()).cmp(&(b.order(), b.members())));
    out
}

/// `ψ` choices kept for each `(G1, N, base)` triple.
const PSI_PER_TRIPLE: usize = 4;

fn problem_case(name: String, phi: &GroupHom, psi: &GroupHom) -> EmbeddingCase {
    EmbeddingCase {
        name,
        problem: ProblemSpec::from_problem(&EmbeddingProblem::new(phi, psi).expect("phi is a quotient map")),
    }
}

/// Quotients of small groups by abelian normal subgroups of order at most 9,
/// lifted from bases of order at most 16; hand-picked cases first.
pub fn embedding_cases(seed: u64) -> Vec<EmbeddingCase> {
    let z2 = group("Z2");
    let red = first_character("Z4", 2);
    let mut out = vec![
        problem_case("Z4 over Z2, psi = identity".into(), &red, &GroupHom::identity(&z2)),
        problem_case("Z4 over Z2, psi = reduction of Z4".into(), &red, &red),
    ];
    let g1s = [
        "Z4", "Z2xZ2", "Z8", "Z4xZ2", "D4", "Q8", "S3", "Z6", "Z9", "Z3xZ3", "A4", "D6", "Z2xZ2xZ2", "S4", "SL2(3)",
        "D8", "Z2xQ8", "U4",
    ];
    let bases = [
        "Z2", "Z3", "Z4", "Z2xZ2", "S3", "Z6", "Z8", "D4", "Q8", "Z4xZ2", "Z2xZ2xZ2", "Z3xZ3", "A4", "Z2xZ2xZ2xZ2",
        "Z4xZ4",
    ];
    for name in g1s {
        let g1 = group(name);
        for n in abelian_normal_subgroups(&g1, 9) {
            let (g2, phi) = quotient(&g1, &n).expect("normal subgroup");
            for b in bases {
                let base = group(b);
                let Ok(mut homs) = enumerate_homs(&base, &g2, &HomConstraint::any(), node_budget()) else {
                    continue;
                };
                let mut rng = rng_for(seed, &format!("{name}/{:?}/{b}", n.members()));
                let first = homs.remove(0);
                homs.shuffle(&mut rng);
                homs.truncate(PSI_PER_TRIPLE - 1);
                homs.insert(0, first);
                for (k, psi) in homs.iter().enumerate() {
                    out.push(problem_case(
                        format!("{name} over {name}/N (|N| = {}), base {b}, psi #{k}", n.order()),
                        &phi,
                        psi,
                    ));
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Dwyer's criterion.

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DwyerOutcome {
    pub name: String,
    pub report: DwyerReport,
    pub passed: bool,
}

pub fn check_dwyer(case: &DwyerCase, budget: u64) -> Result<DwyerOutcome> {
    let report = dwyer_check(&case.build()?, budget)?;
    Ok(DwyerOutcome {
        name: case.name.clone(),
        passed: report.agree() == Some(true),
        report,
    })
}

/// Every tuple of `n` characters for `n` in `lengths`, over each base.
pub fn dwyer_cases(bases: &[&str], lengths: &[usize]) -> Result<Vec<DwyerCase>> {
    let mut out = Vec::new();
    for &b in bases {
        let g = GroupSpec::from(b).build()?;
        let chars = crate::embedding::characters(&g)?;
        for &n in lengths {
            let total = chars.len().pow(n as u32);
            for mut k in 0..total {
                let mut tuple = Vec::with_capacity(n);
                for _ in 0..n {
                    tuple.push(chars[k % chars.len()].images().to_vec());
                    k /= chars.len();
                }
                tuple.reverse();
                let label: Vec<String> = tuple
                    .iter()
                    .map(|c| c.iter().map(|x| x.to_string()).collect::<String>())
                    .collect();
                out.push(DwyerCase {
                    name: format!("{b}: ({})", label.join(", ")),
                    base: GroupSpec::from(b),
                    characters: tuple,
                });
            }
        }
    }
    Ok(out)
}

pub const DWYER_BASES: [&str; 5] = ["Z2", "Z4", "Z2xZ2", "Z8", "D4"];

// ---------------------------------------------------------------------------
// Emission.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorpusKind {
    Extensions,
    Dwyer,
    Embedding,
}

impl std::str::FromStr for CorpusKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "extensions" => Ok(CorpusKind::Extensions),
            "dwyer" => Ok(CorpusKind::Dwyer),
            "embedding" => Ok(CorpusKind::Embedding),
            _ => Err(Error::InvalidInput(format!("unknown corpus kind '{s}'"))),
        }
    }
}

pub fn extension_corpus(seed: u64, size: Option<usize>) -> ExtensionCorpus {
    let mut instances = section_formula_instances();
    let mut roundtrip = roundtrip_cases();
    if let Some(n) = size {
        instances.truncate(n);
        roundtrip.truncate(n);
    }
    ExtensionCorpus {
        seed,
        instances,
        roundtrip,
    }
}

pub fn embedding_corpus(seed: u64, size: Option<usize>) -> EmbeddingCorpus {
    let mut instances = embedding_cases(seed);
    if let Some(n) = size {
        instances.truncate(n);
    }
    EmbeddingCorpus { seed, instances }
}

pub fn dwyer_corpus(seed: u64, size: Option<usize>) -> Result<DwyerCorpus> {
    let mut instances = dwyer_cases(&DWYER_BASES, &[2, 3])?;
    if let Some(n) = size {
        instances.truncate(n);
    }
    Ok(DwyerCorpus { seed, instances })
}

/// The corpus of the given kind as JSON.
pub fn emit_corpus(kind: CorpusKind, seed: u64, size: Option<usize>) -> Result<serde_json::Value> {
    Ok(match kind {
        CorpusKind::Extensions => crate::json::to_value(&extension_corpus(seed, size)),
        CorpusKind::Embedding => crate::json::to_value(&embedding_corpus(seed, size)),
        CorpusKind::Dwyer => crate::json::to_value(&dwyer_corpus(seed, size)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_picked_instances_lead() {
        let ext = extension_corpus(DEFAULT_SEED, None);
        assert!(ext.instances.len() >= 20);
        assert_eq!(ext.instances[0].name, "Z2 by Z2 split, A = Z2");
        let emb = embedding_cases(DEFAULT_SEED);
        assert!(emb[0].name.starts_with("Z4 over Z2"));
        let dw = dwyer_cases(&["Z2xZ2"], &[2]).unwrap();
        assert_eq!(dw.len(), 16);
    }

    #[test]
    fn split_klein_instance_passes() {
        let inst = &section_formula_instances()[0];
        let out = check_section_formula(inst, crate::extensions::SECTION_FORMULA_SIGN, DEFAULT_SEED).unwrap();
        assert!(out.passed);
        assert_eq!(out.sections, 2);
    }

    #[test]
    fn corpus_json_roundtrip() {
        let c = extension_corpus(DEFAULT_SEED, Some(3));
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(crate::json::parse::<ExtensionCorpus>(&text).unwrap(), c);
    }

    #[test]
    fn normal_subgroups_of_d4() {
        let d4 = group("D4");
        let orders: Vec<usize> = abelian_normal_subgroups(&d4, 9).iter().map(|s| s.order()).collect();
        assert_eq!(orders, vec![2, 4, 4, 4]);
    }
}
