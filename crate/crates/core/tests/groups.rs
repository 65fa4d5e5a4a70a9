mod common;

use std::collections::BTreeSet;

use common::*;
use obstrukt::error::Error;
use obstrukt::groups::{
    are_conjugate, commutator_subgroup, conjugacy_classes, enumerate_homs, fiber_product, quotient, standard_group,
    FiniteGroup, GroupHom, GroupKind, HomConstraint, Subgroup,
};
use proptest::prelude::*;

const BUDGET: u64 = 10_000_000;

fn homs(a: &FiniteGroup, b: &FiniteGroup) -> Vec<GroupHom> {
    enumerate_homs(a, b, &HomConstraint::any(), BUDGET).unwrap()
}

#[test]
fn cayley_table_validation() {
    let t = FiniteGroup::from_cayley_table("1", vec![vec![0]]).unwrap();
    assert_eq!(t.order(), 1);
    let z2 = FiniteGroup::from_cayley_table("Z2", vec![vec![0, 1], vec![1, 0]]).unwrap();
    assert_eq!(z2.order(), 2);
    // a Latin square that is not associative
    let bad = vec![
        vec![0, 1, 2, 3, 4],
        vec![1, 0, 3, 4, 2],
        vec![2, 4, 0, 1, 3],
        vec![3, 2, 4, 0, 1],
        vec![4, 3, 1, 2, 0],
    ];
    assert!(matches!(
        FiniteGroup::from_cayley_table("L", bad),
        Err(Error::NotAssociative(..))
    ));
    assert!(FiniteGroup::from_cayley_table("x", vec![vec![1, 1], vec![1, 1]]).is_err());
}

#[test]
fn standard_orders() {
    assert_eq!(standard_group(&GroupKind::Unipotent { n: 3 }).unwrap().order(), 8);
    assert_eq!(standard_group(&GroupKind::Alternating { n: 5 }).unwrap().order(), 60);
    // det-1 matrices over F5, counted directly
    let mut count = 0;
    for a in 0..5 {
        for b in 0..5 {
            for c in 0..5 {
                for d in 0..5 {
                    if (a * d + 25 - b * c) % 5 == 1 {
                        count += 1;
                    }
                }
            }
        }
    }
    assert_eq!(standard_group(&GroupKind::Sl2 { p: 5 }).unwrap().order(), count);
    assert!(matches!(
        standard_group(&GroupKind::Symmetric { n: 9 }),
        Err(Error::UnsupportedParameter(_))
    ));
}

#[test]
fn homomorphism_examples() {
    let z4 = group("Z4");
    let z2 = group("Z2");
    let r = GroupHom::from_generator_images(&z4, &z2, &[(1, 1)]).unwrap();
    assert_eq!(r.kernel().members(), &[0, 2]);
    assert!(matches!(
        GroupHom::from_generator_images(&z2, &z4, &[(1, 1)]),
        Err(Error::NotAHomomorphism(..))
    ));
    let a5 = group("A5");
    let one = group("Z1");
    let all = homs(&a5, &one);
    assert_eq!(all.len(), 1);
    assert!(GroupHom::trivial(&z2, &a5).image().is_trivial());
}

#[test]
fn center_of_sl2_5() {
    let sl = group("SL2(5)");
    let center: Vec<usize> = sl
        .elements()
        .filter(|&z| sl.elements().all(|x| sl.mul(z, x) == sl.mul(x, z)))
        .collect();
    assert_eq!(center.len(), 2);
    assert_eq!(sl.center().members(), center.as_slice());
    let (q, proj) = quotient(&sl, &sl.center()).unwrap();
    assert_eq!(q.order(), 60);
    assert_eq!(proj.kernel().members(), center.as_slice());
}

#[test]
fn quotient_examples() {
    let s3 = group("S3");
    let (q, _) = quotient(&s3, &s3.whole()).unwrap();
    assert_eq!(q.order(), 1);
    let a3 = s3.subgroup_generated(&[s3.elements().find(|&x| s3.element_order(x) == 3).unwrap()]);
    let (q, proj) = quotient(&s3, &a3).unwrap();
    assert_eq!(q.order(), 2);
    assert!(proj.is_surjective());
    assert_eq!(proj.kernel(), a3);
    let q8 = group("Q8");
    let (k, _) = quotient(&q8, &q8.center()).unwrap();
    assert_eq!(k.order(), 4);
    assert!(k.elements().filter(|&x| x != k.identity()).all(|x| k.element_order(x) == 2));
    let t = s3.subgroup_generated(&[s3.elements().find(|&x| s3.element_order(x) == 2).unwrap()]);
    assert!(matches!(quotient(&s3, &t), Err(Error::NotNormal { .. })));
}

#[test]
fn commutator_examples() {
    for (name, expected) in [("Q8", 2), ("S3", 3), ("Z2xZ4", 1), ("A4", 4), ("D4", 2)] {
        let g = group(name);
        // oracle: close the set of all commutators under multiplication
        let mut set: BTreeSet<usize> = g
            .elements()
            .flat_map(|x| g.elements().map(move |y| (x, y)))
            .map(|(x, y)| g.mul(g.mul(x, y), g.mul(g.inv(x), g.inv(y))))
            .collect();
        loop {
            let next: BTreeSet<usize> = set.iter().flat_map(|&a| set.iter().map(move |&b| (a, b))).map(|(a, b)| g.mul(a, b)).collect();
            if next == set {
                break;
            }
            set = next;
        }
        let c = commutator_subgroup(&g, &g.whole());
        assert_eq!(c.order(), expected, "{name}");
        assert_eq!(c.members().iter().copied().collect::<BTreeSet<_>>(), set);
    }
}

#[test]
fn hom_counts() {
    assert_eq!(homs(&group("Z2"), &group("Z2")).len(), 2);
    assert_eq!(homs(&group("Z2xZ2"), &group("Z2")).len(), 4);
    let d4 = group("D4");
    let order_divides_4 = d4.elements().filter(|&x| 4 % d4.element_order(x) == 0).count();
    assert_eq!(homs(&group("Z4"), &d4).len(), order_divides_4);
    assert_eq!(order_divides_4, 8);
}

#[test]
fn constrained_search_is_a_filter() {
    let cases = [("S4", "S3"), ("D4", "Z2xZ2"), ("Q8", "Z2xZ2"), ("Z2xZ4", "Z4"), ("S3", "Z2")];
    for (g1, g2) in cases {
        let g1 = group(g1);
        let g2 = group(g2);
        let phis: Vec<GroupHom> = homs(&g1, &g2).into_iter().filter(|h| h.is_surjective()).collect();
        for base in ["Z2", "Z4", "Z2xZ2", "S3"] {
            let base = group(base);
            let all = homs(&base, &g1);
            for phi in phis.iter().take(3) {
                for psi in homs(&base, &g2).iter().take(4) {
                    let lifted = enumerate_homs(
                        &base,
                        &g1,
                        &HomConstraint::lifting(phi.clone(), psi.clone()),
                        BUDGET,
                    )
                    .unwrap();
                    let filtered: Vec<&GroupHom> =
                        all.iter().filter(|h| h.then(phi).unwrap().images() == psi.images()).collect();
                    let a: BTreeSet<Vec<usize>> = lifted.iter().map(|h| h.images().to_vec()).collect();
                    let b: BTreeSet<Vec<usize>> = filtered.iter().map(|h| h.images().to_vec()).collect();
                    assert_eq!(a, b);
                    assert_eq!(lifted.len(), filtered.len());
                }
            }
        }
    }
}

#[test]
fn homs_come_in_deterministic_order() {
    let a = homs(&group("Z2xZ2"), &group("S4"));
    let b = homs(&group("Z2xZ2"), &group("S4"));
    assert_eq!(
        a.iter().map(|h| h.images().to_vec()).collect::<Vec<_>>(),
        b.iter().map(|h| h.images().to_vec()).collect::<Vec<_>>()
    );
}

#[test]
fn conjugacy_examples() {
    let s3 = group("S3");
    let z2 = group("Z2");
    let a3 = s3.subgroup_generated(&[s3.elements().find(|&x| s3.element_order(x) == 3).unwrap()]);
    let embeddings: Vec<GroupHom> = homs(&z2, &s3).into_iter().filter(|h| h.is_injective()).collect();
    assert_eq!(embeddings.len(), 3);
    let k = are_conjugate(&embeddings[0], &embeddings[1], &a3).unwrap();
    assert!(a3.contains(k));
    assert_eq!(are_conjugate(&embeddings[0], &embeddings[0], &a3), Some(s3.identity()));
    let z4 = group("Z4");
    let into_abelian = homs(&z2, &z4);
    assert!(are_conjugate(&into_abelian[0], &into_abelian[1], &z4.whole()).is_none());
}

fn fiber_cases() -> Vec<(&'static str, &'static str, &'static str)> {
    vec![
        ("Z4", "Z2", "Z2"),
        ("Z4", "Z2", "Z4"),
        ("D4", "Z2xZ2", "Z2xZ2"),
        ("Q8", "Z2xZ2", "Z2"),
        ("S3", "Z2", "Z6"),
        ("S4", "S3", "S3"),
        ("Z2xZ4", "Z4", "Z2"),
        ("A4", "Z3", "Z3"),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn fiber_product_order_law(case in 0usize..8, pick_phi in any::<usize>(), pick_psi in any::<usize>()) {
        let (g1, g2, base) = fiber_cases()[case];
        let (g1, g2, base) = (group(g1), group(g2), group(base));
        let phis: Vec<GroupHom> = homs(&g1, &g2).into_iter().filter(|h| h.is_surjective()).collect();
        let psis = homs(&base, &g2);
        let phi = &phis[pick_phi % phis.len()];
        let psi = &psis[pick_psi % psis.len()];
        let fp = fiber_product(phi, psi).unwrap();
        prop_assert_eq!(fp.group.order(), base.order() * phi.kernel().order());
        for x in fp.group.elements() {
            prop_assert_eq!(phi.apply(fp.to_left.apply(x)), psi.apply(fp.to_right.apply(x)));
        }
        prop_assert!(fp.to_right.is_surjective());
    }

    #[test]
    fn quotient_projection_has_kernel_n(name in prop::sample::select(vec!["S4", "D4", "Q8", "A4", "Z2xZ4", "S3", "Z2xD4"]), pick in any::<usize>()) {
        let g = group(name);
        let normals: Vec<Subgroup> = g
            .elements()
            .map(|x| {
                let conj: Vec<usize> = g.elements().map(|y| g.conj(y, x)).collect();
                g.subgroup_generated(&conj)
            })
            .collect();
        let n = &normals[pick % normals.len()];
        let (q, proj) = quotient(&g, n).unwrap();
        prop_assert!(proj.is_surjective());
        prop_assert_eq!(&proj.kernel(), n);
        prop_assert_eq!(q.order() * n.order(), g.order());
    }

    #[test]
    fn conjugacy_is_an_equivalence(name in prop::sample::select(vec!["S3", "D4", "Q8", "A4"]), src in prop::sample::select(vec!["Z2", "Z4", "Z2xZ2", "Z3"]), seed in any::<u64>()) {
        let g = group(name);
        let list = homs(&group(src), &g);
        let by = commutator_subgroup(&g, &g.whole());
        let mut r = rng(seed);
        for _ in 0..10 {
            let pick = |r: &mut rand_chacha::ChaCha8Rng| &list[rand::Rng::gen_range(r, 0..list.len())];
            let (a, b, c) = (pick(&mut r), pick(&mut r), pick(&mut r));
            prop_assert!(are_conjugate(a, a, &by).is_some());
            prop_assert_eq!(are_conjugate(a, b, &by).is_some(), are_conjugate(b, a, &by).is_some());
            if are_conjugate(a, b, &by).is_some() && are_conjugate(b, c, &by).is_some() {
                prop_assert!(are_conjugate(a, c, &by).is_some());
            }
        }
        let classes = conjugacy_classes(&list, &by);
        prop_assert_eq!(classes.iter().map(Vec::len).sum::<usize>(), list.len());
    }
}
