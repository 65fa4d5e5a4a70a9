//! Finite abelian groups in invariant-factor form and additive maps between
//! them. Subgroups, kernels, images and cokernels are computed from integer
//! lattices with Smith normal form, first in 64-bit arithmetic and again in
//! arbitrary precision if that overflows.

mod hom;
mod matrix;
mod scalar;
mod snf;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use hom::{dual, hom_group, Dual, HomGroup};
pub use matrix::Matrix;
pub use scalar::{Overflow, Scalar};
pub use snf::{snf, snf_exact, Snf};

use scalar::{from_i64, residue};

/// `Z/d_1 x ... x Z/d_k` with `d_1 | d_2 | ... | d_k`, every `d_i >= 2`.
/// Elements are coordinate vectors with entry `i` in `0..d_i`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FactorsRepr", into = "FactorsRepr")]
pub struct FinAbGroup {
    factors: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct FactorsRepr {
    factors: Vec<u64>,
}

impl TryFrom<FactorsRepr> for FinAbGroup {
    type Error = Error;
    fn try_from(r: FactorsRepr) -> Result<Self> {
        FinAbGroup::new(r.factors)
    }
}

impl From<FinAbGroup> for FactorsRepr {
    fn from(g: FinAbGroup) -> Self {
        FactorsRepr { factors: g.factors }
    }
}

impl FinAbGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if let Some(&d) = factors.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidAbelian(format!("invariant factor {d} is below 2")));
        }
        for w in factors.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(Error::InvalidAbelian(format!("{} does not divide {}", w[0], w[1])));
            }
        }
        let mut order: u64 = 1;
        for &d in &factors {
            order = order
                .checked_mul(d)
                .filter(|&o| o <= i64::MAX as u64)
                .ok_or_else(|| Error::InvalidAbelian("group order does not fit in 63 bits".into()))?;
        }
        Ok(FinAbGroup { factors })
    }

    pub fn trivial() -> Self {
        FinAbGroup { factors: Vec::new() }
    }

    /// `Z/n`; trivial for `n = 1`.
    pub fn cyclic(n: u64) -> Self {
        if n <= 1 {
            Self::trivial()
        } else {
            FinAbGroup { factors: vec![n] }
        }
    }

    /// `(Z/p)^k`.
    pub fn elementary(p: u64, k: usize) -> Self {
        FinAbGroup::new(vec![p; k]).expect("equal factors form a chain")
    }

    /// Invariant-factor form of `Z/n_1 x ... x Z/n_k` for arbitrary `n_i >= 1`.
    pub fn from_orders(orders: &[u64]) -> Result<CyclicDecomposition> {
        if orders.contains(&0) {
            return Err(Error::InvalidAbelian("cyclic order 0".into()));
        }
        let k = orders.len();
        let rels: Vec<Vec<i64>> = (0..k)
            .map(|j| (0..k).map(|i| if i == j { orders[j] as i64 } else { 0 }).collect())
            .collect();
        let modulus = orders.iter().fold(1u64, |a, &b| a.lcm(&b));
        let p = with_fallback(|| present::<i64>(k, &rels, modulus), || present::<BigInt>(k, &rels, modulus))?;
        let group = FinAbGroup::new(p.factors)?;
        let from_group = (0..k)
            .map(|i| {
                p.gens
                    .iter()
                    .map(|g| g[i].rem_euclid(orders[i] as i64))
                    .collect()
            })
            .collect();
        Ok(CyclicDecomposition {
            orders: orders.to_vec(),
            group,
            to_group: p.coords,
            from_group,
        })
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    /// Number of invariant factors.
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// `Some(p)` if the group is `(Z/p)^k` with `p` prime and `k >= 1`.
    pub fn elementary_prime(&self) -> Option<u64> {
        let p = *self.factors.first()?;
        let prime = p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0);
        (prime && self.factors.iter().all(|&d| d == p)).then_some(p)
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.rank()]
    }

    pub fn reduce(&self, v: &mut [i64]) {
        for (x, &d) in v.iter_mut().zip(&self.factors) {
            *x = x.rem_euclid(d as i64);
        }
    }

    pub fn reduced(&self, v: &[i64]) -> Vec<i64> {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        a.iter()
            .zip(b)
            .zip(&self.factors)
            .map(|((x, y), &d)| (x + y).rem_euclid(d as i64))
            .collect()
    }

    pub fn sub(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        a.iter()
            .zip(b)
            .zip(&self.factors)
            .map(|((x, y), &d)| (x - y).rem_euclid(d as i64))
            .collect()
    }

    pub fn neg(&self, a: &[i64]) -> Vec<i64> {
        a.iter()
            .zip(&self.factors)
            .map(|(x, &d)| (-x).rem_euclid(d as i64))
            .collect()
    }

    pub fn scale(&self, k: i64, a: &[i64]) -> Vec<i64> {
        a.iter()
            .zip(&self.factors)
            .map(|(x, &d)| ((k as i128 * *x as i128).rem_euclid(d as i128)) as i64)
            .collect()
    }

    pub fn is_zero(&self, a: &[i64]) -> bool {
        a.iter().zip(&self.factors).all(|(x, &d)| x.rem_euclid(d as i64) == 0)
    }

    pub fn element_order(&self, a: &[i64]) -> u64 {
        a.iter().zip(&self.factors).fold(1u64, |acc, (x, &d)| {
            let x = x.rem_euclid(d as i64) as u64;
            acc.lcm(&(d / d.gcd(&x)))
        })
    }

    /// Element at position `idx` in the mixed-radix enumeration (first
    /// coordinate most significant).
    pub fn element(&self, mut idx: u64) -> Vec<i64> {
        let mut v = vec![0; self.rank()];
        for i in (0..self.rank()).rev() {
            let d = self.factors[i];
            v[i] = (idx % d) as i64;
            idx /= d;
        }
        v
    }

    pub fn index_of(&self, a: &[i64]) -> u64 {
        a.iter()
            .zip(&self.factors)
            .fold(0u64, |acc, (x, &d)| acc * d + x.rem_euclid(d as i64) as u64)
    }

    pub fn elements(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        (0..self.order()).map(move |i| self.element(i))
    }

    /// Standard generator `e_i`.
    pub fn basis(&self, i: usize) -> Vec<i64> {
        let mut v = self.zero();
        v[i] = 1;
        v
    }

    /// The subgroup generated by `gens` with its inclusion.
    pub fn subgroup(&self, gens: &[Vec<i64>]) -> Result<(FinAbGroup, AbMap)> {
        if gens.iter().any(|g| g.len() != self.rank()) {
            return Err(Error::InvalidAbelian("generator has the wrong number of coordinates".into()));
        }
        let gens = echelon_generators(&self.factors, gens);
        let gens = &gens[..];
        let (factors, new_gens) =
            with_fallback(|| subgroup_impl::<i64>(self, gens), || subgroup_impl::<BigInt>(self, gens))?;
        let sub = FinAbGroup::new(factors)?;
        let inc = AbMap::from_columns(&sub, self, &new_gens)?;
        Ok((sub, inc))
    }

    /// `self / <gens>` with its projection.
    pub fn quotient(&self, gens: &[Vec<i64>]) -> Result<(FinAbGroup, AbMap)> {
        let (_, inc) = self.subgroup(gens)?;
        inc.cokernel()
    }
}

/// Parses `"Z2"`, `"Z/4xZ/2"`, `"Z2*Z6"` or `"0"`; the factors need not be
/// in invariant-factor form.
impl std::str::FromStr for FinAbGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" || s == "1" || s.eq_ignore_ascii_case("trivial") {
            return Ok(FinAbGroup::trivial());
        }
        let bad = || Error::InvalidInput(format!("unrecognized abelian group '{s}'"));
        let orders = s
            .split(['x', '*'])
            .map(|part| {
                let part = part.trim();
                let digits = part
                    .strip_prefix("Z/")
                    .or_else(|| part.strip_prefix('Z'))
                    .or_else(|| part.strip_prefix("z/"))
                    .or_else(|| part.strip_prefix('z'))
                    .ok_or_else(bad)?;
                digits.parse::<u64>().ok().filter(|&n| n >= 1).ok_or_else(bad)
            })
            .collect::<Result<Vec<u64>>>()?;
        Ok(FinAbGroup::from_orders(&orders)?.group)
    }
}

impl fmt::Debug for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// At most `factors.len()` elements generating the same subgroup of
/// `Z/factors_1 x ...` as `gens`, in echelon form.
pub(crate) fn echelon_generators(factors: &[u64], gens: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let s = factors.len();
    let reduced = |v: &[i64]| -> Vec<i64> { v.iter().zip(factors).map(|(&x, &d)| x.rem_euclid(d as i64)).collect() };
    let mut basis: Vec<Option<Vec<i64>>> = vec![None; s];
    for g in gens {
        let mut x = reduced(g);
        for c in 0..s {
            if x[c] == 0 {
                continue;
            }
            let Some(b) = basis[c].take() else {
                basis[c] = Some(std::mem::take(&mut x));
                break;
            };
            let (gc, u, v) = crate::linalg::modular::ext_gcd(b[c], x[c]);
            let (bg, xg) = ((b[c] / gc) as i128, (x[c] / gc) as i128);
            let combine = |p: i128, q: i128| -> Vec<i64> {
                b.iter()
                    .zip(&x)
                    .zip(factors)
                    .map(|((&bi, &xi), &d)| ((p * bi as i128 + q * xi as i128).rem_euclid(d as i128)) as i64)
                    .collect()
            };
            basis[c] = Some(combine(u as i128, v as i128));
            x = combine(-xg, bg);
        }
    }
    basis.into_iter().flatten().filter(|v| v.iter().any(|&x| x != 0)).collect()
}

/// `(Z/orders_1 x ...) / span(relations)` in invariant-factor form, for
/// ambient groups too large to build as a [`FinAbGroup`].
#[derive(Clone, Debug)]
pub struct QuotientPresentation {
    pub group: FinAbGroup,
    /// Ambient representatives of the quotient generators.
    pub gens: Vec<Vec<i64>>,
    /// Rows mapping ambient coordinates to quotient coordinates.
    pub coords: Vec<Vec<i64>>,
}

impl QuotientPresentation {
    pub fn project(&self, x: &[i64]) -> Vec<i64> {
        let v: Vec<i64> = self
            .coords
            .iter()
            .zip(self.group.factors())
            .map(|(row, &d)| dot_mod(row, x, d))
            .collect();
        v
    }
}

pub fn present_quotient(orders: &[u64], relations: &[Vec<i64>]) -> Result<QuotientPresentation> {
    let k = orders.len();
    if orders.contains(&0) || relations.iter().any(|r| r.len() != k) {
        return Err(Error::InvalidAbelian("malformed quotient data".into()));
    }
    let mut rels: Vec<Vec<i64>> = (0..k)
        .map(|j| (0..k).map(|i| if i == j { orders[j] as i64 } else { 0 }).collect())
        .collect();
    rels.extend(echelon_generators(orders, relations));
    let modulus = orders.iter().fold(1u64, |a, &b| a.lcm(&b));
    if modulus < 1 << 31 {
        return quotient_via_residues(orders, &rels, modulus);
    }
    let p = with_fallback(|| present::<i64>(k, &rels, modulus), || present::<BigInt>(k, &rels, modulus))?;
    Ok(QuotientPresentation {
        group: FinAbGroup::new(p.factors)?,
        gens: p
            .gens
            .into_iter()
            .map(|g| g.iter().zip(orders).map(|(&x, &d)| x.rem_euclid(d as i64)).collect())
            .collect(),
        coords: p.coords,
    })
}

/// Every order divides `modulus`, so the quotient is a `Z/modulus`-module and
/// can be diagonalized without coefficient growth.
fn quotient_via_residues(orders: &[u64], rels: &[Vec<i64>], modulus: u64) -> Result<QuotientPresentation> {
    let k = orders.len();
    let rows: Vec<Vec<u64>> = rels
        .iter()
        .map(|r| r.iter().map(|&x| x.rem_euclid(modulus as i64) as u64).collect())
        .collect();
    let mq = crate::linalg::quotient_mod(modulus, k, &rows);
    let dec = FinAbGroup::from_orders(&mq.orders)?;
    let m = modulus as i128;
    let coords = dec
        .to_group
        .iter()
        .map(|t| {
            (0..k)
                .map(|j| {
                    t.iter()
                        .zip(&mq.coords)
                        .fold(0i128, |acc, (&a, row)| (acc + a as i128 * row[j] as i128).rem_euclid(m)) as i64
                })
                .collect()
        })
        .collect();
    let gens = (0..dec.group.rank())
        .map(|l| {
            (0..k)
                .map(|j| {
                    dec.from_group
                        .iter()
                        .zip(&mq.gens)
                        .fold(0i128, |acc, (f, g)| (acc + f[l] as i128 * g[j] as i128).rem_euclid(m))
                        .rem_euclid(orders[j] as i128) as i64
                })
                .collect()
        })
        .collect();
    Ok(QuotientPresentation {
        group: dec.group,
        gens,
        coords,
    })
}

/// `Z/n_1 x ... x Z/n_k` identified with a group in invariant-factor form.
#[derive(Clone, Debug)]
pub struct CyclicDecomposition {
    pub orders: Vec<u64>,
    pub group: FinAbGroup,
    /// `rank x k`: coordinates in `Z/n_i` to coordinates in `group`.
    pub to_group: Vec<Vec<i64>>,
    /// `k x rank`: coordinates in `group` to coordinates in `Z/n_i`.
    pub from_group: Vec<Vec<i64>>,
}

impl CyclicDecomposition {
    pub fn to_group(&self, raw: &[i64]) -> Vec<i64> {
        let v: Vec<i64> = self
            .to_group
            .iter()
            .map(|row| dot_mod(row, raw, self.group.exponent()))
            .collect();
        self.group.reduced(&v)
    }

    pub fn from_group(&self, x: &[i64]) -> Vec<i64> {
        self.from_group
            .iter()
            .zip(&self.orders)
            .map(|(row, &n)| dot_mod(row, x, n))
            .collect()
    }
}

fn dot_mod(a: &[i64], b: &[i64], m: u64) -> i64 {
    let m = m.max(1) as i128;
    a.iter()
        .zip(b)
        .fold(0i128, |acc, (&x, &y)| (acc + x as i128 * y as i128).rem_euclid(m)) as i64
}

/// An additive map; column `j` of the matrix is the image of the `j`-th
/// standard generator of the source.
#[derive(Clone, PartialEq, Eq)]
pub struct AbMap {
    source: FinAbGroup,
    target: FinAbGroup,
    matrix: Matrix<i64>,
}

impl AbMap {
    /// Checks that `d_j` times column `j` vanishes in the target.
    pub fn new(source: &FinAbGroup, target: &FinAbGroup, matrix: Matrix<i64>) -> Result<Self> {
        if matrix.rows() != target.rank() || matrix.cols() != source.rank() {
            return Err(Error::InvalidAbelian(format!(
                "matrix is {}x{} but the map {} -> {} needs {}x{}",
                matrix.rows(),
                matrix.cols(),
                source,
                target,
                target.rank(),
                source.rank()
            )));
        }
        let mut m = matrix;
        for i in 0..m.rows() {
            let e = target.factors[i] as i64;
            for j in 0..m.cols() {
                let x = m.get(i, j).rem_euclid(e);
                m.set(i, j, x);
                let d = source.factors[j] as i128;
                if (d * x as i128) % e as i128 != 0 {
                    return Err(Error::InvalidAbelian(format!(
                        "generator {j} of order {d} cannot map to an element with coordinate {x} mod {e}"
                    )));
                }
            }
        }
        Ok(AbMap {
            source: source.clone(),
            target: target.clone(),
            matrix: m,
        })
    }

    pub fn from_columns(source: &FinAbGroup, target: &FinAbGroup, columns: &[Vec<i64>]) -> Result<Self> {
        if columns.len() != source.rank() || columns.iter().any(|c| c.len() != target.rank()) {
            return Err(Error::InvalidAbelian("column data does not fit the groups".into()));
        }
        Self::new(source, target, Matrix::from_columns(target.rank(), columns))
    }

    pub fn zero(source: &FinAbGroup, target: &FinAbGroup) -> Self {
        AbMap {
            source: source.clone(),
            target: target.clone(),
            matrix: Matrix::zeros(target.rank(), source.rank()),
        }
    }

    pub fn identity(g: &FinAbGroup) -> Self {
        AbMap {
            source: g.clone(),
            target: g.clone(),
            matrix: Matrix::identity(g.rank()),
        }
    }

    /// Multiplication by `k` on `g`.
    pub fn scalar(g: &FinAbGroup, k: i64) -> Self {
        let mut m = Matrix::zeros(g.rank(), g.rank());
        for i in 0..g.rank() {
            m.set(i, i, k.rem_euclid(g.factors[i] as i64));
        }
        AbMap {
            source: g.clone(),
            target: g.clone(),
            matrix: m,
        }
    }

    pub fn source(&self) -> &FinAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FinAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix<i64> {
        &self.matrix
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        (0..self.target.rank())
            .map(|i| dot_mod(self.matrix.row(i), x, self.target.factors[i]))
            .collect()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &AbMap) -> Result<AbMap> {
        if self.target != other.source {
            return Err(Error::TypeMismatch(format!(
                "cannot compose {} -> {} with {} -> {}",
                self.source, self.target, other.source, other.target
            )));
        }
        let cols: Vec<Vec<i64>> = (0..self.source.rank())
            .map(|j| other.apply(&self.matrix.column(j)))
            .collect();
        AbMap::from_columns(&self.source, &other.target, &cols)
    }

    pub fn add(&self, other: &AbMap) -> Result<AbMap> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::TypeMismatch("adding maps between different groups".into()));
        }
        let cols: Vec<Vec<i64>> = (0..self.source.rank())
            .map(|j| self.target.add(&self.matrix.column(j), &other.matrix.column(j)))
            .collect();
        AbMap::from_columns(&self.source, &self.target, &cols)
    }

    pub fn is_zero(&self) -> bool {
        (0..self.source.rank()).all(|j| self.target.is_zero(&self.matrix.column(j)))
    }

    pub fn kernel(&self) -> Result<(FinAbGroup, AbMap)> {
        let gens = with_fallback(|| kernel_gens::<i64>(self), || kernel_gens::<BigInt>(self))?;
        self.source.subgroup(&gens)
    }

    pub fn image(&self) -> Result<(FinAbGroup, AbMap)> {
        let cols: Vec<Vec<i64>> = (0..self.source.rank()).map(|j| self.matrix.column(j)).collect();
        self.target.subgroup(&cols)
    }

    pub fn cokernel(&self) -> Result<(FinAbGroup, AbMap)> {
        let t = self.target.rank();
        let mut rels: Vec<Vec<i64>> = (0..t)
            .map(|i| {
                let mut v = vec![0; t];
                v[i] = self.target.factors[i] as i64;
                v
            })
            .collect();
        rels.extend((0..self.source.rank()).map(|j| self.matrix.column(j)));
        let e = self.target.exponent();
        let p = with_fallback(|| present::<i64>(t, &rels, e), || present::<BigInt>(t, &rels, e))?;
        let quotient = FinAbGroup::new(p.factors)?;
        let cols: Vec<Vec<i64>> = (0..t).map(|j| p.coords.iter().map(|row| row[j]).collect()).collect();
        let proj = AbMap::from_columns(&self.target, &quotient, &cols)?;
        Ok((quotient, proj))
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(self.kernel()?.0.is_trivial())
    }

    pub fn is_surjective(&self) -> Result<bool> {
        Ok(self.image()?.0.order() == self.target.order())
    }

    /// Some `x` with `self(x) = y`, if one exists.
    pub fn preimage(&self, y: &[i64]) -> Result<Option<Vec<i64>>> {
        let t = self.target.rank();
        let mut cols: Vec<Vec<i64>> = (0..self.source.rank()).map(|j| self.matrix.column(j)).collect();
        cols.extend((0..t).map(|i| {
            let mut v = vec![0; t];
            v[i] = self.target.factors[i] as i64;
            v
        }));
        let sol = with_fallback(
            || solve_integer::<i64>(t, &cols, y, &self.source.factors),
            || solve_integer::<BigInt>(t, &cols, y, &self.source.factors),
        )?;
        Ok(sol)
    }
}

impl fmt::Debug for AbMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbMap({} -> {}, {:?})", self.source, self.target, self.matrix)
    }
}

enum Fail {
    Overflow,
    Infinite,
}

impl From<Overflow> for Fail {
    fn from(_: Overflow) -> Self {
        Fail::Overflow
    }
}

fn with_fallback<R>(
    small: impl FnOnce() -> std::result::Result<R, Fail>,
    big: impl FnOnce() -> std::result::Result<R, Fail>,
) -> Result<R> {
    let out = match small() {
        Err(Fail::Overflow) => big(),
        other => other,
    };
    out.map_err(|e| match e {
        Fail::Infinite => Error::InvalidAbelian("relations do not present a finite group".into()),
        Fail::Overflow => Error::Internal("overflow in arbitrary precision".into()),
    })
}

struct Presentation {
    factors: Vec<u64>,
    /// New generators written in the old generators, reduced modulo the
    /// supplied modulus.
    gens: Vec<Vec<i64>>,
    /// Rows mapping old coordinates to new ones, reduced modulo each factor.
    coords: Vec<Vec<i64>>,
}

/// Invariant-factor form of `Z^k / span(relations)`.
fn present<T: Scalar>(k: usize, relations: &[Vec<i64>], modulus: u64) -> std::result::Result<Presentation, Fail> {
    let cols: Vec<Vec<T>> = relations
        .iter()
        .map(|c| c.iter().map(|&x| from_i64(x)).collect())
        .collect();
    present_t(k, &cols, modulus)
}

fn present_t<T: Scalar>(k: usize, relations: &[Vec<T>], modulus: u64) -> std::result::Result<Presentation, Fail> {
    if k == 0 {
        return Ok(Presentation {
            factors: Vec::new(),
            gens: Vec::new(),
            coords: Vec::new(),
        });
    }
    let m = Matrix::from_columns(k, relations);
    let s = snf(&m)?;
    if s.rank < k {
        return Err(Fail::Infinite);
    }
    let diag = s.diagonal();
    let mut factors = Vec::new();
    let mut gens = Vec::new();
    let mut coords = Vec::new();
    for (i, d) in diag.iter().enumerate() {
        if d.is_one() {
            continue;
        }
        let d = d.to_u64().ok_or(Fail::Overflow)?;
        factors.push(d);
        gens.push((0..k).map(|r| residue(s.u_inv.get(r, i), modulus.max(1))).collect());
        coords.push((0..k).map(|c| residue(s.u.get(i, c), d)).collect());
    }
    Ok(Presentation { factors, gens, coords })
}

/// Integer kernel basis of a `rows x n` matrix given by columns.
fn integer_kernel<T: Scalar>(rows: usize, cols: &[Vec<T>]) -> std::result::Result<Vec<Vec<T>>, Overflow> {
    let n = cols.len();
    let m = Matrix::from_columns(rows, cols);
    let s = snf(&m)?;
    Ok((s.rank..n).map(|j| s.v.column(j)).collect())
}

fn subgroup_impl<T: Scalar>(
    g: &FinAbGroup,
    gens: &[Vec<i64>],
) -> std::result::Result<(Vec<u64>, Vec<Vec<i64>>), Fail> {
    let k = gens.len();
    let s = g.rank();
    if k == 0 || s == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    // relations: c in Z^k with sum c_j g_j in diag(d) Z^s
    let mut cols: Vec<Vec<T>> = gens
        .iter()
        .map(|v| v.iter().map(|&x| from_i64(x)).collect())
        .collect();
    for i in 0..s {
        let mut v = vec![T::zero(); s];
        v[i] = -from_i64::<T>(g.factors[i] as i64);
        cols.push(v);
    }
    let rels: Vec<Vec<T>> = integer_kernel(s, &cols)?
        .into_iter()
        .map(|v| v[..k].to_vec())
        .collect();
    let p = present_t(k, &rels, g.exponent())?;
    let new_gens = p
        .gens
        .iter()
        .map(|c| {
            let mut v = g.zero();
            for (cj, gj) in c.iter().zip(gens) {
                v = g.add(&v, &g.scale(*cj, gj));
            }
            v
        })
        .collect();
    Ok((p.factors, new_gens))
}

fn kernel_gens<T: Scalar>(f: &AbMap) -> std::result::Result<Vec<Vec<i64>>, Fail> {
    let s = f.source.rank();
    let t = f.target.rank();
    if t == 0 {
        return Ok((0..s).map(|i| f.source.basis(i)).collect());
    }
    let mut cols: Vec<Vec<T>> = (0..s)
        .map(|j| f.matrix.column(j).iter().map(|&x| from_i64(x)).collect())
        .collect();
    for i in 0..t {
        let mut v = vec![T::zero(); t];
        v[i] = -from_i64::<T>(f.target.factors[i] as i64);
        cols.push(v);
    }
    let ker = integer_kernel(t, &cols)?;
    Ok(ker
        .iter()
        .map(|v| (0..s).map(|j| residue(&v[j], f.source.factors[j])).collect())
        .collect())
}

/// Integer solution of `sum x_j cols_j = y`, if any, with the leading
/// coordinates reduced modulo `moduli`.
fn solve_integer<T: Scalar>(
    rows: usize,
    cols: &[Vec<i64>],
    y: &[i64],
    moduli: &[u64],
) -> std::result::Result<Option<Vec<i64>>, Fail> {
    if rows == 0 {
        return Ok(Some(vec![0; moduli.len()]));
    }
    let tcols: Vec<Vec<T>> = cols
        .iter()
        .map(|c| c.iter().map(|&x| from_i64(x)).collect())
        .collect();
    let m = Matrix::from_columns(rows, &tcols);
    let s = snf(&m)?;
    // u m v = d, so m x = y  <=>  d (v^-1 x) = u y
    let yt: Vec<T> = y.iter().map(|&x| from_i64(x)).collect();
    let uy = s.u.checked_mul(&Matrix::from_columns(rows, &[yt]))?;
    let n = cols.len();
    let mut z = vec![T::zero(); n];
    for i in 0..rows {
        let target = uy.get(i, 0);
        if i < s.rank {
            let d = s.d.get(i, i);
            if !target.is_multiple_of(d) {
                return Ok(None);
            }
            z[i] = target.div_floor(d);
        } else if !target.is_zero() {
            return Ok(None);
        }
    }
    let x = s.v.checked_mul(&Matrix::from_columns(n, &[z]))?;
    Ok(Some(moduli.iter().enumerate().map(|(j, &m)| residue(x.get(j, 0), m)).collect()))
}
