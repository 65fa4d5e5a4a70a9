//! Acceptance run: one PASS/FAIL line per criterion, with its time bound.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use obstrukt::abelian::FinAbGroup;
use obstrukt::cochain::{cohomology, pullback_class};
use obstrukt::corpus::{
    check_dwyer, check_embedding, check_roundtrip, check_section_formula, dwyer_cases, embedding_cases,
    roundtrip_cases, section_formula_instances, DEFAULT_SEED, DWYER_BASES,
};
use obstrukt::embedding::{icosahedral_example, pairing_witness};
use obstrukt::extensions::SECTION_FORMULA_SIGN;
use obstrukt::gmodule::trivial_module;
use obstrukt::groups::{enumerate_homs, node_budget, GroupHom, HomConstraint};
use obstrukt::products::{cup_classes, CoeffPairing};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Debug) -> String {
    format!("{e:?}")
}

fn cohomology_sanity() -> Outcome {
    let z2 = group("Z2");
    let m = trivial_module(&z2, &FinAbGroup::cyclic(2));
    for n in 0..=3 {
        let got = cohomology(&m, n).map_err(err)?.order();
        let brute = brute_force_order(&m, n);
        ensure(got == 2 && brute == 2, || format!("|H^{n}(Z2, Z2)| = {got}, oracle {brute}"))?;
    }
    let m = trivial_module(&group("Z3"), &FinAbGroup::cyclic(2));
    let got = cohomology(&m, 1).map_err(err)?.order();
    ensure(got == 1 && brute_force_order(&m, 1) == 1, || format!("|H^1(Z3, Z2)| = {got}"))?;
    Ok("H^0..3(Z2, Z2) = Z2, H^1(Z3, Z2) = 0".into())
}

fn a5_second_cohomology() -> Outcome {
    let m = trivial_module(&group("A5"), &FinAbGroup::cyclic(2));
    let h = cohomology(&m, 2).map_err(err)?;
    ensure(h.order() == 2, || format!("|H^2(A5, Z2)| = {}", h.order()))?;
    Ok("|H^2(A5, Z2)| = 2".into())
}

fn icosahedral() -> Outcome {
    let r = icosahedral_example().map_err(err)?;
    ensure(r.pulled_back_order == 4 && r.pulled_back_cyclic, || {
        format!("pullback has order {} (cyclic: {})", r.pulled_back_order, r.pulled_back_cyclic)
    })?;
    ensure(r.pulled_back_class == [1], || format!("pulled back class {:?}", r.pulled_back_class))?;
    ensure(r.extension_class == [1], || format!("SL(2,5) class {:?}", r.extension_class))?;
    ensure(r.witness.is_some() && r.witness_is_extension_class, || "no matching witness".into())?;
    // SL(2,5) has a single involution, so every involution of A5 lifts to order 4
    let sl = group("SL2(5)");
    let involutions = sl.elements().filter(|&x| sl.element_order(x) == 2).count();
    ensure(involutions == 1, || format!("{involutions} involutions in SL(2,5)"))?;
    let w = pairing_witness(&group("A5"), &FinAbGroup::cyclic(2)).map_err(err)?;
    ensure(w.is_some(), || "pairing witness search found nothing".into())?;
    Ok(format!("involution {}, pullback Z4, class nontrivial", r.involution))
}

fn section_formula() -> Outcome {
    let instances = section_formula_instances();
    ensure(instances.len() >= 20, || format!("only {} instances", instances.len()))?;
    let (mut split, mut nonsplit, mut trivial, mut nontrivial, mut checks, mut decisive) = (0, 0, 0, 0, 0, 0);
    for inst in &instances {
        let out = check_section_formula(inst, SECTION_FORMULA_SIGN, DEFAULT_SEED).map_err(err)?;
        ensure(out.total_order <= 32, || format!("{}: |Ω| = {}", out.name, out.total_order))?;
        ensure(out.passed, || format!("{}: formula fails", out.name))?;
        if out.sections > 0 {
            split += 1;
        } else {
            nonsplit += 1;
        }
        if out.trivial_kernel_action && out.trivial_coefficient_action {
            trivial += 1;
        } else {
            nontrivial += 1;
        }
        checks += out.checks;
        if out.holds_with_plus != out.holds_with_minus {
            decisive += 1;
        }
    }
    ensure(split > 0 && nonsplit > 0 && trivial > 0 && nontrivial > 0, || {
        format!("coverage: {split} split, {nonsplit} nonsplit, {trivial} trivial, {nontrivial} nontrivial")
    })?;
    ensure(decisive > 0, || "no instance distinguishes the two signs".into())?;
    Ok(format!(
        "{} instances, {checks} section pairs, sign {SECTION_FORMULA_SIGN}, {decisive} sign-decisive",
        instances.len()
    ))
}

fn roundtrip_and_obstruction() -> Outcome {
    let rt = roundtrip_cases();
    for case in &rt {
        let out = check_roundtrip(case, DEFAULT_SEED).map_err(err)?;
        ensure(out.passed, || format!("{out:?}"))?;
    }
    let emb = embedding_cases(DEFAULT_SEED);
    let mut solvable = 0;
    for case in &emb {
        let out = check_embedding(case).map_err(err)?;
        ensure(out.passed, || format!("{out:?}"))?;
        solvable += usize::from(out.solutions > 0);
    }
    Ok(format!(
        "{} roundtrip cases, {} embedding problems ({solvable} solvable)",
        rt.len(),
        emb.len()
    ))
}

fn dwyer() -> Outcome {
    let cases = dwyer_cases(&DWYER_BASES, &[2, 3]).map_err(err)?;
    let mut zero = 0;
    for case in &cases {
        let out = check_dwyer(case, node_budget()).map_err(err)?;
        ensure(out.passed, || format!("{}: {:?}", out.name, out.report))?;
        zero += usize::from(out.report.massey_contains_zero == Some(true));
    }
    Ok(format!("{} character tuples agree ({zero} contain zero)", cases.len()))
}

fn sign(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

fn structural_invariants() -> Outcome {
    let mut r = rng(DEFAULT_SEED);
    let corpus = module_corpus();
    let mut cells = 0;
    for (name, m) in &corpus {
        for n in 0..=2 {
            for _ in 0..100 {
                let c = random_cochain(m, n, &mut r);
                let dd = c.differential().and_then(|d| d.differential()).map_err(err)?;
                ensure(dd.is_zero(), || format!("{name}: d∘d ≠ 0 in degree {n}"))?;
            }
            cells += 1;
        }
    }
    let mut groups = 0;
    for (name, m) in &corpus {
        let order = m.group().order() as i64;
        for n in 1..=3 {
            let h = cohomology(m, n).map_err(err)?;
            for c in h.classes() {
                ensure(c.scale(order).is_zero(), || format!("{name}: |G| does not kill H^{n}"))?;
            }
            groups += 1;
        }
    }
    let mut products = 0;
    for (name, m) in &corpus {
        let Ok(pr) = CoeffPairing::multiplication(m) else { continue };
        let swapped = pr.swapped().map_err(err)?;
        for p in 0..=3 {
            for q in 0..=3 - p {
                let hp = cohomology(m, p).map_err(err)?;
                let hq = cohomology(m, q).map_err(err)?;
                for a in hp.classes() {
                    for b in hq.classes() {
                        let ab = cup_classes(&a, &b, &pr).map_err(err)?;
                        let ba = cup_classes(&b, &a, &swapped).map_err(err)?;
                        ensure(ab.element() == ba.scale(sign(p * q)).element(), || {
                            format!("{name}: cup not graded commutative in degrees {p}, {q}")
                        })?;
                        products += 1;
                    }
                }
            }
        }
    }
    let mut pullbacks = 0;
    let homs = |a: &str, b: &str| enumerate_homs(&group(a), &group(b), &HomConstraint::any(), node_budget());
    for (k, h, g) in [("Z2", "Z4", "Z2xZ2"), ("Z2", "S3", "Z2"), ("Z2xZ2", "D4", "Z2xZ2"), ("Z3", "S3", "Z2"), ("Z2", "Q8", "Z4")] {
        let m = trivial_module(&group(g), &FinAbGroup::cyclic(2));
        for n in 1..=2 {
            let hg = cohomology(&m, n).map_err(err)?;
            for f in homs(h, g).map_err(err)? {
                for e in homs(k, h).map_err(err)? {
                    let fe = e.then(&f).map_err(err)?;
                    for c in hg.classes() {
                        let direct = pullback_class(&fe, &c).map_err(err)?;
                        let staged = pullback_class(&e, &pullback_class(&f, &c).map_err(err)?).map_err(err)?;
                        ensure(direct.element() == staged.element(), || format!("{k} -> {h} -> {g}: degree {n}"))?;
                        pullbacks += 1;
                    }
                }
            }
            for c in hg.classes() {
                let id = GroupHom::identity(m.group());
                ensure(pullback_class(&id, &c).map_err(err)?.element() == c.element(), || "identity pullback".into())?;
            }
        }
    }
    Ok(format!(
        "d∘d on {cells} cells, {groups} groups killed by |G|, {products} cup pairs, {pullbacks} composite pullbacks"
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Outcome); 7] = [
        ("1 cohomology sanity", Duration::from_secs(1), cohomology_sanity),
        ("2 H^2(A5, Z2)", Duration::from_secs(60), a5_second_cohomology),
        ("3 binary icosahedral chain", Duration::from_secs(60), icosahedral),
        ("4 section formula corpus", Duration::from_secs(300), section_formula),
        ("5 roundtrip and obstruction", Duration::from_secs(300), roundtrip_and_obstruction),
        ("6 Dwyer equivalence", Duration::from_secs(600), dwyer),
        ("7 structural invariants", Duration::from_secs(300), structural_invariants),
    ];
    let mut failed = 0;
    for (name, bound, run) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            if elapsed <= bound {
                Ok(detail)
            } else {
                Err(format!("took {elapsed:.2?}, bound {bound:?}"))
            }
        });
        match outcome {
            Ok(detail) => println!("PASS  criterion {name} ({elapsed:.2?} / {bound:?}): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name} ({elapsed:.2?} / {bound:?}): {why}");
            }
        }
    }
    if failed == 0 {
        println!("acceptance: 7/7 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 7 criteria failed");
        ExitCode::FAILURE
    }
}
