mod common;

use common::*;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use obstrukt::abelian::{dual, hom_group, snf, AbMap, FinAbGroup, Matrix};
use proptest::prelude::*;
use rand::Rng;

fn det(m: &Matrix<BigInt>) -> BigInt {
    // fraction-free elimination on a copy
    let n = m.rows();
    let mut a = m.to_rows();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn big(m: &Matrix<i64>) -> Matrix<BigInt> {
    m.map(|&x| BigInt::from(x))
}

fn random_group(r: &mut impl Rng) -> FinAbGroup {
    let k = r.gen_range(0..3);
    let orders: Vec<u64> = (0..k).map(|_| [2, 3, 4, 6, 8, 9][r.gen_range(0..6)]).collect();
    FinAbGroup::from_orders(&orders).unwrap().group
}

/// A random well-defined map: column `j` must be killed by the `j`-th factor.
fn random_map(src: &FinAbGroup, tgt: &FinAbGroup, r: &mut impl Rng) -> AbMap {
    let cols: Vec<Vec<i64>> = src
        .factors()
        .iter()
        .map(|&d| {
            tgt.factors()
                .iter()
                .map(|&e| {
                    let step = (e / d.gcd(&e)) as i64;
                    step * r.gen_range(0..e as i64)
                })
                .collect()
        })
        .collect();
    AbMap::from_columns(src, tgt, &cols).unwrap()
}

#[test]
fn snf_examples() {
    let id = Matrix::from_rows(vec![vec![1i64, 0], vec![0, 1]]).unwrap();
    assert_eq!(snf(&id).unwrap().diagonal(), vec![1, 1]);
    let m = Matrix::from_rows(vec![vec![2i64, 0], vec![0, 3]]).unwrap();
    assert_eq!(snf(&m).unwrap().diagonal(), vec![1, 6]);
    let z = Matrix::<i64>::zeros(2, 3);
    assert_eq!(snf(&z).unwrap().diagonal(), vec![0, 0]);
}

#[test]
fn kernel_image_cokernel_examples() {
    let z4 = FinAbGroup::cyclic(4);
    let z2 = FinAbGroup::cyclic(2);
    let zero = AbMap::zero(&z4, &z2);
    assert_eq!(zero.kernel().unwrap().0, z4);
    assert!(zero.image().unwrap().0.is_trivial());
    let red = AbMap::from_columns(&z4, &z2, &[vec![1]]).unwrap();
    assert_eq!(red.kernel().unwrap().0, z2);
    assert!(red.cokernel().unwrap().0.is_trivial());
    let z6 = FinAbGroup::cyclic(6);
    let double = AbMap::scalar(&z6, 2);
    // {x : 2x = 0 mod 6} = {0, 3}
    let brute = (0..6).filter(|x| 2 * x % 6 == 0).count() as u64;
    assert_eq!(double.kernel().unwrap().0.order(), brute);
    assert_eq!(double.image().unwrap().0, FinAbGroup::cyclic(3));
    assert_eq!(double.cokernel().unwrap().0, FinAbGroup::cyclic(2));
}

#[test]
fn hom_group_orders_match_enumeration() {
    let cases = ["Z2", "Z3", "Z4", "Z2xZ2", "Z2xZ4", "Z6", "Z3xZ3"];
    for a in cases {
        for b in cases {
            let (a, b) = (coeff(a), coeff(b));
            // oracle: count images of the generators with the right orders
            let mut count = 1u64;
            for &d in a.factors() {
                count *= b.elements().filter(|x| b.is_zero(&b.scale(d as i64, x))).count() as u64;
            }
            assert_eq!(hom_group(&a, &b).unwrap().group().order(), count, "Hom({a}, {b})");
        }
    }
    assert!(hom_group(&coeff("Z2"), &coeff("Z3")).unwrap().group().is_trivial());
    assert_eq!(hom_group(&coeff("Z4"), &coeff("Z2")).unwrap().group().order(), 2);
    assert_eq!(hom_group(&coeff("Z2xZ2"), &coeff("Z4")).unwrap().group().order(), 4);
}

#[test]
fn duals_are_nondegenerate() {
    for s in ["Z2", "Z5", "Z2xZ4", "Z2xZ2xZ6", "Z3xZ9"] {
        let m = coeff(s);
        let d = dual(&m).unwrap();
        assert_eq!(d.group(), &m, "dual of {s}");
        assert_eq!(dual(d.group()).unwrap().group(), &m);
        let functionals: Vec<Vec<i64>> = d.group().elements().collect();
        for x in m.elements() {
            assert_eq!(d.evaluate(&x, &d.group().zero()), 0);
            if !m.is_zero(&x) {
                assert!(functionals.iter().any(|f| d.evaluate(&x, f) != 0), "{s}: {x:?} in the radical");
            }
        }
        for f in &functionals {
            if !d.group().is_zero(f) {
                assert!(m.elements().any(|x| d.evaluate(&x, f) != 0));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn snf_is_a_unimodular_diagonalization(rows in 1usize..5, cols in 1usize..5, seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = Matrix::from_rows((0..rows).map(|_| (0..cols).map(|_| r.gen_range(-20i64..=20)).collect()).collect()).unwrap();
        let s = snf(&m).unwrap();
        // transforms may leave the i64 range, so check products exactly
        let (u, v, u_inv, v_inv) = (big(&s.u), big(&s.v), big(&s.u_inv), big(&s.v_inv));
        prop_assert_eq!(u.checked_mul(&big(&m)).unwrap().checked_mul(&v).unwrap(), big(&s.d));
        prop_assert!(s.d.is_diagonal());
        prop_assert!(det(&u).abs().is_one());
        prop_assert!(det(&v).abs().is_one());
        prop_assert_eq!(u.checked_mul(&u_inv).unwrap(), Matrix::identity(rows));
        prop_assert_eq!(v.checked_mul(&v_inv).unwrap(), Matrix::identity(cols));
        let diag = s.diagonal();
        for w in diag.windows(2) {
            if w[0] == 0 {
                prop_assert_eq!(w[1], 0);
            } else {
                prop_assert!(w[0] > 0 && w[1] % w[0] == 0);
            }
        }
    }

    #[test]
    fn maps_are_exact(seed in any::<u64>()) {
        let mut r = rng(seed);
        let src = random_group(&mut r);
        let tgt = random_group(&mut r);
        let f = random_map(&src, &tgt, &mut r);
        let (k, inc) = f.kernel().unwrap();
        let (im, _) = f.image().unwrap();
        let (cok, proj) = f.cokernel().unwrap();
        let brute_kernel = src.elements().filter(|x| tgt.is_zero(&f.apply(x))).count() as u64;
        prop_assert_eq!(k.order(), brute_kernel);
        prop_assert_eq!(k.order() * im.order(), src.order());
        prop_assert_eq!(cok.order() * im.order(), tgt.order());
        for x in k.elements() {
            prop_assert!(tgt.is_zero(&f.apply(&inc.apply(&x))));
        }
        // image = kernel of the cokernel projection
        let killed = tgt.elements().filter(|y| cok.is_zero(&proj.apply(y))).count() as u64;
        prop_assert_eq!(killed, im.order());
        for x in src.elements() {
            prop_assert!(cok.is_zero(&proj.apply(&f.apply(&x))));
        }
    }
}
