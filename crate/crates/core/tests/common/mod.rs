#![allow(dead_code)]

use std::collections::HashSet;

use obstrukt::abelian::{AbMap, FinAbGroup};
use obstrukt::cochain::Cochain;
use obstrukt::gmodule::{trivial_module, GModule};
use obstrukt::groups::{FiniteGroup, GroupHom, Subgroup};
use obstrukt::json::GroupSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn group(s: &str) -> FiniteGroup {
    GroupSpec::from(s).build().unwrap()
}

pub fn coeff(s: &str) -> FinAbGroup {
    s.parse().unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `Z/m` with `g` acting by `-1` when `chi(g) = 1`.
pub fn sign_module(chi: &GroupHom, m: u64) -> GModule {
    let g = chi.domain();
    let a = FinAbGroup::cyclic(m);
    let table = g
        .elements()
        .map(|x| if chi.apply(x) == 0 { AbMap::identity(&a) } else { AbMap::scalar(&a, -1) })
        .collect();
    GModule::from_action_table(g, &a, table).unwrap()
}

/// `(Z/m)^{G/H}` with `G` permuting the left cosets of `h`.
pub fn permutation_module(h: &Subgroup, m: u64) -> GModule {
    let g = h.parent();
    let mut coset_of = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in g.elements() {
        if coset_of[x] == usize::MAX {
            for &k in h.members() {
                coset_of[g.mul(x, k)] = reps.len();
            }
            reps.push(x);
        }
    }
    let k = reps.len();
    let a = FinAbGroup::new(vec![m; k]).unwrap();
    let table = g
        .elements()
        .map(|x| {
            let cols: Vec<Vec<i64>> = (0..k)
                .map(|i| {
                    let mut col = vec![0; k];
                    col[coset_of[g.mul(x, reps[i])]] = 1;
                    col
                })
                .collect();
            AbMap::from_columns(&a, &a, &cols).unwrap()
        })
        .collect();
    GModule::from_action_table(g, &a, table).unwrap()
}

/// Small modules with trivial and nontrivial actions.
pub fn module_corpus() -> Vec<(String, GModule)> {
    let mut out = Vec::new();
    for (g, a) in [
        ("Z2", "Z2"),
        ("Z2", "Z4"),
        ("Z3", "Z3"),
        ("Z4", "Z2"),
        ("Z4", "Z4"),
        ("Z2xZ2", "Z2"),
        ("Z2xZ2", "Z2xZ2"),
        ("S3", "Z2"),
        ("S3", "Z3"),
        ("D4", "Z2"),
        ("Q8", "Z2"),
        ("Z6", "Z6"),
    ] {
        out.push((format!("{g} on trivial {a}"), trivial_module(&group(g), &coeff(a))));
    }
    for (g, m) in [("Z2", 3), ("Z4", 4), ("S3", 3), ("D4", 4), ("Z2xZ2", 3)] {
        let gg = group(g);
        let chi = obstrukt::embedding::characters(&gg)
            .unwrap()
            .into_iter()
            .find(|c| c.kernel().order() < gg.order())
            .unwrap();
        out.push((format!("{g} on Z{m} by a sign"), sign_module(&chi, m)));
    }
    let s3 = group("S3");
    let h = s3.subgroup_generated(&[s3.elements().find(|&x| s3.element_order(x) == 2).unwrap()]);
    out.push(("S3 permuting Z2^3".into(), permutation_module(&h, 2)));
    let z2 = group("Z2");
    out.push(("Z2 permuting Z2^2".into(), permutation_module(&z2.trivial_subgroup(), 2)));
    out
}

pub fn random_cochain(m: &GModule, degree: usize, rng: &mut ChaCha8Rng) -> Cochain {
    let factors = m.coeff().factors().to_vec();
    Cochain::from_fn(m, degree, |_| factors.iter().map(|&d| rng.gen_range(0..d as i64)).collect()).unwrap()
}

// ---------------------------------------------------------------------------
// Oracles written against the group table and action maps only.

/// Full-bar differential at one tuple of `f`, given as a closure on tuples.
fn bar_differential(m: &GModule, f: &dyn Fn(&[usize]) -> Vec<i64>, tuple: &[usize]) -> Vec<i64> {
    let g = m.group();
    let a = m.coeff();
    let n = tuple.len() - 1;
    let mut acc = m.act(tuple[0], &f(&tuple[1..]));
    for i in 0..n {
        let mut t: Vec<usize> = tuple[..i].to_vec();
        t.push(g.mul(tuple[i], tuple[i + 1]));
        t.extend_from_slice(&tuple[i + 2..]);
        let v = f(&t);
        acc = if i % 2 == 0 { a.sub(&acc, &v) } else { a.add(&acc, &v) };
    }
    let v = f(&tuple[..n]);
    if n % 2 == 0 {
        a.sub(&acc, &v)
    } else {
        a.add(&acc, &v)
    }
}

fn tuples(elements: &[usize], n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                elements.iter().map(move |&x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// `|H^n(G, M)|` by enumerating every normalized cochain in degrees `n - 1`
/// and `n`.
pub fn brute_force_order(m: &GModule, n: usize) -> u64 {
    let g = m.group();
    let a = m.coeff();
    let elems: Vec<Vec<i64>> = a.elements().collect();
    let nonid: Vec<usize> = g.elements().filter(|&x| x != g.identity()).collect();
    let index = |t: &[usize], domain: &[Vec<usize>]| domain.iter().position(|u| u == t);
    let eval = |values: &[usize], domain: &[Vec<usize>], t: &[usize]| -> Vec<i64> {
        if t.contains(&g.identity()) {
            return a.zero();
        }
        elems[values[index(t, domain).unwrap()]].clone()
    };
    let assignments = |k: usize| -> Vec<Vec<usize>> { tuples(&(0..elems.len()).collect::<Vec<_>>(), k) };

    let dom_n = tuples(&nonid, n);
    let dom_next = tuples(&nonid, n + 1);
    let cocycles = assignments(dom_n.len())
        .into_iter()
        .filter(|vals| {
            let f = |t: &[usize]| eval(vals, &dom_n, t);
            dom_next.iter().all(|t| a.is_zero(&bar_differential(m, &f, t)))
        })
        .count() as u64;
    if n == 0 {
        return cocycles;
    }
    let dom_prev = tuples(&nonid, n - 1);
    let mut boundaries = HashSet::new();
    for vals in assignments(dom_prev.len()) {
        let f = |t: &[usize]| eval(&vals, &dom_prev, t);
        let image: Vec<Vec<i64>> = dom_n.iter().map(|t| bar_differential(m, &f, t)).collect();
        boundaries.insert(image);
    }
    cocycles / boundaries.len() as u64
}

/// Rank over `F_p` of a dense matrix.
pub fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] % p != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = (1..p).find(|&x| x * rows[rank][c] % p == 1).unwrap();
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let k = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = (*x + (p - k) * y) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Matrix over `F_p` of the full-bar differential `C^n -> C^{n+1}`, rows
/// indexed by `(tuple, coordinate)`.
fn full_bar_matrix(m: &GModule, n: usize, p: u64) -> Vec<Vec<u64>> {
    let g = m.group();
    let r = m.coeff().rank();
    let all: Vec<usize> = g.elements().collect();
    let dom = tuples(&all, n);
    let codom = tuples(&all, n + 1);
    let mut rows = vec![vec![0u64; dom.len() * r]; codom.len() * r];
    for (j, t0) in dom.iter().enumerate() {
        for k in 0..r {
            let basis = m.coeff().basis(k);
            let zero = m.coeff().zero();
            let f = |t: &[usize]| if t == t0.as_slice() { basis.clone() } else { zero.clone() };
            for (i, t) in codom.iter().enumerate() {
                let v = bar_differential(m, &f, t);
                for (l, &x) in v.iter().enumerate() {
                    rows[i * r + l][j * r + k] = x.rem_euclid(p as i64) as u64;
                }
            }
        }
    }
    rows
}

/// `|H^n(G, M)|` from the full (unnormalized) bar complex, for `M` an
/// `F_p`-vector space.
pub fn full_bar_order(m: &GModule, n: usize) -> u64 {
    let p = m.coeff().elementary_prime().expect("elementary abelian coefficients");
    let r = m.coeff().rank();
    let dim_c = (m.group().order() as u64).pow(n as u32) * r as u64;
    let rank_out = rank_mod_p(full_bar_matrix(m, n, p), p) as u64;
    let rank_in = if n == 0 { 0 } else { rank_mod_p(full_bar_matrix(m, n - 1, p), p) as u64 };
    p.pow((dim_c - rank_out - rank_in) as u32)
}
