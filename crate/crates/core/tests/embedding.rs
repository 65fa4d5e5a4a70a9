mod common;

use std::collections::BTreeSet;

use common::*;
use obstrukt::abelian::FinAbGroup;
use obstrukt::cochain::cohomology;
use obstrukt::corpus::embedding_cases;
use obstrukt::embedding::{
    abelianized_problem, alpha_bijection, characters, dwyer_check, dwyer_problem, gamma_of, icosahedral_example,
    is_solvable, map_solutions, obstruction_class, pairing_witness, section_of_solution, solutions_as_sections, solve,
    EmbeddingProblem, ProblemMap, SolutionClass,
};
use obstrukt::error::Error;
use obstrukt::extensions::{class_of_extension, sections, Extension};
use obstrukt::groups::{enumerate_homs, quotient, FiniteGroup, GroupHom, HomConstraint, Subgroup};

const BUDGET: u64 = 10_000_000;

fn homs(a: &FiniteGroup, b: &FiniteGroup) -> Vec<GroupHom> {
    enumerate_homs(a, b, &HomConstraint::any(), BUDGET).unwrap()
}

fn onto(a: &str, b: &str) -> GroupHom {
    homs(&group(a), &group(b)).into_iter().find(|h| h.is_surjective()).unwrap()
}

/// Lifts of `psi` grouped by conjugation with `Ker(phi)`, by brute force.
fn brute_classes(e: &EmbeddingProblem) -> Vec<BTreeSet<Vec<usize>>> {
    let g1 = e.g1();
    let lifts: Vec<Vec<usize>> = homs(e.base(), g1)
        .into_iter()
        .filter(|h| e.base().elements().all(|b| e.phi().apply(h.apply(b)) == e.psi().apply(b)))
        .map(|h| h.images().to_vec())
        .collect();
    let mut classes: Vec<BTreeSet<Vec<usize>>> = Vec::new();
    for h in lifts {
        if classes.iter().any(|c| c.contains(&h)) {
            continue;
        }
        let orbit = e
            .kernel()
            .members()
            .iter()
            .map(|&k| h.iter().map(|&x| g1.conj(k, x)).collect())
            .collect();
        classes.push(orbit);
    }
    classes
}

fn small_cases() -> Vec<(String, EmbeddingProblem)> {
    embedding_cases(obstrukt::corpus::DEFAULT_SEED)
        .into_iter()
        .map(|c| (c.name, c.problem.build().unwrap()))
        .filter(|(_, e)| e.g1().order() <= 16 && e.base().order() <= 8)
        .step_by(3)
        .collect()
}

#[test]
fn solve_examples() {
    let z2 = group("Z2");
    let z4 = group("Z4");
    let red = onto("Z4", "Z2");
    for psi in homs(&group("Z2xZ2"), &z4) {
        let e = EmbeddingProblem::new(&GroupHom::identity(&z4), &psi).unwrap();
        let sols = solve(&e).unwrap();
        assert_eq!(sols.len(), 1);
        assert_eq!(sols[0].representative().images(), psi.images());
    }
    let e = EmbeddingProblem::new(&red, &GroupHom::identity(&z2)).unwrap();
    assert!(solve(&e).unwrap().is_empty());
    let e = EmbeddingProblem::new(&red, &red).unwrap();
    let sols = solve(&e).unwrap();
    assert_eq!(sols.len(), 2);
    let gens: BTreeSet<usize> = sols.iter().map(|s| s.representative().apply(1)).collect();
    assert_eq!(gens.len(), 2);
    assert!(gens.iter().all(|&g| z4.element_order(g) == 4));
    assert_eq!(
        EmbeddingProblem::new(&GroupHom::trivial(&z4, &z2), &red).err(),
        Some(Error::PhiNotSurjective)
    );
    let tight = EmbeddingProblem::new(&onto("S4", "S3"), &GroupHom::identity(&group("S3"))).unwrap();
    assert!(matches!(
        obstrukt::embedding::solve_with_budget(&tight, 1),
        Err(Error::SearchBudgetExceeded(_))
    ));
}

#[test]
fn solutions_match_brute_force() {
    let cases = small_cases();
    assert!(cases.len() >= 100, "{}", cases.len());
    for (name, e) in &cases {
        let classes = brute_classes(e);
        let sols = solve(e).unwrap();
        assert_eq!(sols.len(), classes.len(), "{name}");
        for s in &sols {
            assert_eq!(
                classes.iter().filter(|c| c.contains(s.representative().images())).count(),
                1,
                "{name}"
            );
        }
        assert_eq!(is_solvable(e, BUDGET).unwrap(), !sols.is_empty());
    }
}

#[test]
fn nonabelian_kernels_still_solve() {
    let e = EmbeddingProblem::new(&onto("S3", "Z1"), &GroupHom::trivial(&group("Z2"), &group("Z1"))).unwrap();
    assert_eq!(solve(&e).unwrap().len(), brute_classes(&e).len());
    assert_eq!(obstruction_class(&e).err(), Some(Error::KernelNotAbelian));
}

#[test]
fn gamma_examples() {
    for (name, e) in small_cases().into_iter().take(60) {
        let Ok(g) = gamma_of(&e) else { continue };
        assert_eq!(g.total().order(), e.base().order() * e.kernel().order(), "{name}");
    }
    let z2 = group("Z2");
    let red = onto("Z4", "Z2");
    let e = EmbeddingProblem::new(&red, &GroupHom::trivial(&group("Z2xZ2"), &z2)).unwrap();
    let g = gamma_of(&e).unwrap();
    assert!(class_of_extension(&g).unwrap().is_zero());
    assert!(!sections(&g).unwrap().is_empty());
    let e = EmbeddingProblem::new(&red, &GroupHom::identity(&z2)).unwrap();
    let g = gamma_of(&e).unwrap();
    assert!(g.total().elements().any(|x| g.total().element_order(x) == 4));
    assert!(!obstruction_class(&e).unwrap().is_zero());
}

#[test]
fn obstruction_vanishes_iff_solvable() {
    let mut both = [0, 0];
    for (name, e) in small_cases() {
        let Ok(c) = obstruction_class(&e) else { continue };
        let solvable = !brute_classes(&e).is_empty();
        assert_eq!(c.is_zero(), solvable, "{name}");
        both[solvable as usize] += 1;
    }
    assert!(both[0] > 0 && both[1] > 0, "{both:?}");
    // split phi
    let v = group("Z2xZ2");
    let phi = onto("Z2xZ2", "Z2");
    for psi in homs(&group("Z4"), &group("Z2")) {
        assert!(obstruction_class(&EmbeddingProblem::new(&phi, &psi).unwrap()).unwrap().is_zero());
    }
    assert_eq!(v.order(), 4);
}

#[test]
fn solutions_and_sections() {
    for (name, e) in small_cases() {
        let Ok((gamma, pairs)) = solutions_as_sections(&e) else { continue };
        let secs = sections(&gamma).unwrap();
        assert_eq!(pairs.len(), secs.len(), "{name}");
        let distinct: BTreeSet<Vec<usize>> = pairs.iter().map(|(_, s)| s.representative().images().to_vec()).collect();
        assert_eq!(distinct.len(), pairs.len());
        // conjugating a solution by the kernel does not change its section
        for (sol, sec) in pairs.iter().take(3) {
            let h = sol.representative();
            for &k in e.kernel().members() {
                let images = h.images().iter().map(|&x| e.g1().conj(k, x)).collect();
                let hk = GroupHom::new(e.base().clone(), e.g1().clone(), images).unwrap();
                assert_eq!(&section_of_solution(&gamma, &e, &hk).unwrap(), sec, "{name}");
                assert_eq!(&SolutionClass::new(&e, &hk).unwrap(), sol);
            }
        }
        if let Some((s0, _)) = pairs.first() {
            let alpha = alpha_bijection(&e, s0).unwrap();
            let h1 = cohomology(gamma.module(), 1).unwrap();
            assert_eq!(alpha.len() as u64, h1.order(), "{name}");
            let images: BTreeSet<Vec<i64>> = alpha.iter().map(|(_, c)| c.element().to_vec()).collect();
            assert_eq!(images.len(), alpha.len());
            assert!(alpha.iter().find(|(s, _)| s == s0).unwrap().1.is_zero());
        }
    }
    let red = onto("Z4", "Z2");
    let e = EmbeddingProblem::new(&red, &red).unwrap();
    let (gamma, pairs) = solutions_as_sections(&e).unwrap();
    assert_eq!(pairs.len(), 2);
    assert_eq!(cohomology(gamma.module(), 1).unwrap().order(), 2);
}

#[test]
fn abelianization_examples() {
    let one = group("Z1");
    let z2 = group("Z2");
    for (g1, expected, elementary) in [("Q8", 4, true), ("S3", 2, true), ("D4", 4, true), ("Z4", 4, false)] {
        let e = EmbeddingProblem::new(&onto(g1, "Z1"), &GroupHom::trivial(&z2, &one)).unwrap();
        let (ab, map) = abelianized_problem(&e).unwrap();
        let g = ab.g1();
        assert_eq!(g.order(), expected, "{g1}");
        assert!(g.is_abelian());
        if elementary {
            assert!(g.elements().all(|x| g.element_order(x) <= 2), "{g1}");
        }
        for s in solve(&e).unwrap() {
            let image = map_solutions(&map, &s).unwrap();
            assert!(solve(&ab).unwrap().contains(&image));
        }
    }
    let red = onto("Z4", "Z2");
    let e = EmbeddingProblem::new(&red, &red).unwrap();
    let (ab, _) = abelianized_problem(&e).unwrap();
    assert_eq!(ab.g1().order(), 4);
    assert_eq!(solve(&ab).unwrap().len(), solve(&e).unwrap().len());
}

/// `E -> E/N` for a normal subgroup `N` of `G1` inside `Ker(φ)`.
fn quotient_map(e: &EmbeddingProblem, n: &Subgroup) -> ProblemMap {
    let (q, proj) = quotient(e.g1(), n).unwrap();
    let mut images = vec![usize::MAX; q.order()];
    for x in e.g1().elements() {
        images[proj.apply(x)] = e.phi().apply(x);
    }
    let phi = GroupHom::new(q, e.g2().clone(), images).unwrap();
    let target = EmbeddingProblem::new(&phi, e.psi()).unwrap();
    ProblemMap::new(e, &target, &proj, &GroupHom::identity(e.g2())).unwrap()
}

#[test]
fn solutions_are_functorial() {
    let z2 = group("Z2");
    let cases = [("Z8", "Z2", "Z8"), ("Z2xZ2xZ2", "Z2", "Z2xZ2"), ("D4", "Z2", "Z4"), ("Q8", "Z2", "Z4"), ("Z4xZ2", "Z2", "Z2xZ2")];
    let mut compared = 0;
    for (g1, g2, base) in cases {
        let g1 = group(g1);
        let phi = homs(&g1, &group(g2)).into_iter().find(|h| h.is_surjective()).unwrap();
        for psi in homs(&group(base), phi.codomain()) {
            let e = EmbeddingProblem::new(&phi, &psi).unwrap();
            let id = ProblemMap::identity(&e);
            let sols = solve(&e).unwrap();
            for s in &sols {
                assert_eq!(&map_solutions(&id, s).unwrap(), s);
            }
            // N1 < N2 < Ker(φ), both normal in G1, through the center
            let ker = e.kernel();
            let central: Vec<usize> = ker.members().iter().copied().filter(|&k| g1.center().contains(k)).collect();
            for &k in &central {
                if k == g1.identity() {
                    continue;
                }
                let n1 = g1.subgroup_generated(&[k]);
                if n1.order() == ker.order() {
                    continue;
                }
                let step1 = quotient_map(&e, &n1);
                let mid = step1.target().clone();
                let step2 = quotient_map(&mid, &mid.kernel().clone());
                let both = step1.then(&step2).unwrap();
                for s in &sols {
                    let direct = map_solutions(&both, s).unwrap();
                    let staged = map_solutions(&step2, &map_solutions(&step1, s).unwrap()).unwrap();
                    assert_eq!(direct, staged);
                    // independent of the representative
                    for &c in ker.members() {
                        let images = s.representative().images().iter().map(|&x| g1.conj(c, x)).collect();
                        let h = GroupHom::new(e.base().clone(), g1.clone(), images).unwrap();
                        let other = SolutionClass::new(&e, &h).unwrap();
                        assert_eq!(map_solutions(&step1, &other).unwrap(), map_solutions(&step1, s).unwrap());
                    }
                    compared += 1;
                }
            }
        }
    }
    assert!(compared > 10, "{compared}");
    let other = EmbeddingProblem::new(&onto("Z4", "Z2"), &GroupHom::identity(&z2)).unwrap();
    let e = EmbeddingProblem::new(&onto("Z4", "Z2"), &onto("Z4", "Z2")).unwrap();
    let s = &solve(&e).unwrap()[0];
    assert_eq!(map_solutions(&ProblemMap::identity(&other), s).err(), Some(Error::ProblemMismatch));
}

#[test]
fn dwyer_examples() {
    let v = group("Z2xZ2");
    let z4 = group("Z4");
    let vc = characters(&v).unwrap();
    let x4 = characters(&z4).unwrap()[1].clone();
    let e = dwyer_problem(&[vc[1].clone(), vc[2].clone()]).unwrap();
    assert_eq!(e.g1().order(), 8);
    assert_eq!(e.g2().order(), 4);
    assert!(solve(&e).unwrap().is_empty());
    assert!(!obstruction_class(&e).unwrap().is_zero());
    let e = dwyer_problem(&[x4.clone(), x4.clone()]).unwrap();
    assert!(!solve(&e).unwrap().is_empty());
    let e3 = dwyer_problem(&[x4.clone(), x4.clone(), x4.clone()]).unwrap();
    assert_eq!(e3.g1().order(), 64);
    // every lift of the generator has order dividing 4
    let sols = solve(&e3).unwrap();
    assert!(!sols.is_empty());
    for s in &sols {
        assert_eq!(4 % e3.g1().element_order(s.representative().apply(1)), 0);
    }
    for (chars, expected) in [
        (vec![vc[1].clone(), vc[2].clone()], false),
        (vec![x4.clone(), x4.clone()], true),
        (vec![x4.clone(), x4.clone(), x4.clone()], true),
    ] {
        let r = dwyer_check(&chars, BUDGET).unwrap();
        assert_eq!(r.massey_contains_zero, Some(expected));
        assert_eq!(r.solvable, Some(expected));
        assert_eq!(r.agree(), Some(true));
    }
    let r = dwyer_check(&[vc[1].clone(), vc[2].clone(), vc[1].clone()], 1).unwrap();
    assert!(r.agree().is_none());
}

#[test]
fn pairing_witnesses() {
    let (a, c) = pairing_witness(&group("Z2"), &FinAbGroup::cyclic(2)).unwrap().unwrap();
    assert!(a.is_injective());
    assert!(!c.is_zero());
    assert!(pairing_witness(&group("Z3"), &FinAbGroup::cyclic(2)).unwrap().is_none());

    let a5 = group("A5");
    let (a, c) = pairing_witness(&a5, &FinAbGroup::cyclic(2)).unwrap().unwrap();
    assert_eq!(a5.element_order(a.apply(1)), 2);
    let sl = group("SL2(5)");
    let (q, to_q) = quotient(&sl, &sl.center()).unwrap();
    let iso = obstrukt::groups::first_hom(&q, &a5, &HomConstraint::any().injective(), BUDGET)
        .unwrap()
        .unwrap();
    let ext = Extension::from_surjection(&to_q.then(&iso).unwrap()).unwrap();
    let class = class_of_extension(&ext).unwrap();
    assert_eq!(c.parent().order(), 2);
    assert_eq!(c.element(), class.element());
}

#[test]
fn icosahedral_chain() {
    let r = icosahedral_example().unwrap();
    assert_eq!(r.pulled_back_order, 4);
    assert!(r.pulled_back_cyclic);
    assert_eq!(r.pulled_back_class, vec![1]);
    assert_eq!(r.extension_class, vec![1]);
    assert!(r.witness.is_some());
    assert!(r.witness_is_extension_class);
    assert_eq!(r.involution, "(2,3)(4,5)");
}
