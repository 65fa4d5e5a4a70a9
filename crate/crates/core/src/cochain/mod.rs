//! Normalized bar cochains, the differential and cohomology groups.
//!
//! A cochain of degree `n` is stored densely: one coefficient vector per
//! `n`-tuple of non-identity elements. Tuples are numbered big-endian by the
//! positions of their entries among the non-identity elements, so the first
//! entry varies slowest. Tuples containing the identity are implicitly zero.

mod cohomology;

use std::fmt;

use crate::abelian::AbMap;
use crate::error::{Error, Result};
use crate::gmodule::{restrict_module, GModule};
use crate::groups::GroupHom;

pub use cohomology::{
    classes_equal, cohomology, cohomology_with, pullback, pullback_class, pushforward, CoboundarySolver,
    CohomologyClass, CohomologyGroup, Limits,
};

/// Largest number of stored coordinates for a single cochain.
pub const MAX_COCHAIN_CELLS: u64 = 50_000_000;

pub(crate) fn tuple_count(nonidentity: usize, degree: usize) -> Option<u64> {
    (nonidentity as u64).checked_pow(degree as u32)
}

#[derive(Clone)]
pub struct Cochain {
    module: GModule,
    degree: usize,
    values: Vec<i64>,
}

impl Cochain {
    pub fn zero(module: &GModule, degree: usize) -> Result<Self> {
        let tuples = tuple_count(module.group().order() - 1, degree)
            .ok_or_else(|| Error::BudgetExceeded("cochain size overflows".into()))?;
        let cells = tuples
            .checked_mul(module.coeff().rank() as u64)
            .filter(|&c| c <= MAX_COCHAIN_CELLS)
            .ok_or_else(|| Error::BudgetExceeded(format!("degree-{degree} cochains need {tuples} tuples")))?;
        Ok(Cochain {
            module: module.clone(),
            degree,
            values: vec![0; cells as usize],
        })
    }

    /// Cochain with the given value on every non-identity tuple.
    pub fn from_fn(module: &GModule, degree: usize, mut f: impl FnMut(&[usize]) -> Vec<i64>) -> Result<Self> {
        let mut c = Self::zero(module, degree)?;
        let r = module.coeff().rank();
        let mut tuple = vec![0; degree];
        for t in 0..c.tuple_total() {
            c.decode_into(t, &mut tuple);
            let mut v = f(&tuple);
            if v.len() != r {
                return Err(Error::TypeMismatch(format!("value has {} coordinates, expected {r}", v.len())));
            }
            module.coeff().reduce(&mut v);
            c.values[t * r..(t + 1) * r].copy_from_slice(&v);
        }
        Ok(c)
    }

    /// Builds a cochain from raw coordinates in storage order.
    pub fn from_values(module: &GModule, degree: usize, mut values: Vec<i64>) -> Result<Self> {
        let z = Self::zero(module, degree)?;
        if values.len() != z.values.len() {
            return Err(Error::TypeMismatch(format!(
                "{} coordinates given, {} expected",
                values.len(),
                z.values.len()
            )));
        }
        let r = module.coeff().rank();
        if r > 0 {
            for chunk in values.chunks_mut(r) {
                module.coeff().reduce(chunk);
            }
        }
        Ok(Cochain {
            module: module.clone(),
            degree,
            values,
        })
    }

    pub fn module(&self) -> &GModule {
        &self.module
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Raw coordinates, tuple-major.
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn tuple_total(&self) -> usize {
        let r = self.module.coeff().rank();
        if r == 0 {
            tuple_count(self.module.group().order() - 1, self.degree).unwrap_or(0) as usize
        } else {
            self.values.len() / r
        }
    }

    /// Position of a tuple of group elements, `None` if it contains the
    /// identity.
    pub fn tuple_index(&self, tuple: &[usize]) -> Option<usize> {
        tuple_index(&self.module, tuple)
    }

    pub fn decode_into(&self, index: usize, out: &mut [usize]) {
        decode_tuple(&self.module, index, out)
    }

    pub fn tuple_at(&self, index: usize) -> Vec<usize> {
        let mut t = vec![0; self.degree];
        self.decode_into(index, &mut t);
        t
    }

    pub fn value_at(&self, index: usize) -> &[i64] {
        let r = self.module.coeff().rank();
        &self.values[index * r..(index + 1) * r]
    }

    /// Value on a tuple of group elements.
    pub fn value(&self, tuple: &[usize]) -> Vec<i64> {
        assert_eq!(tuple.len(), self.degree, "tuple length");
        match self.tuple_index(tuple) {
            Some(i) => self.value_at(i).to_vec(),
            None => self.module.coeff().zero(),
        }
    }

    pub fn set(&mut self, tuple: &[usize], value: &[i64]) -> Result<()> {
        if tuple.len() != self.degree || value.len() != self.module.coeff().rank() {
            return Err(Error::TypeMismatch("tuple or value has the wrong length".into()));
        }
        if tuple.iter().any(|&g| g >= self.module.group().order()) {
            return Err(Error::InvalidInput(format!("tuple {tuple:?} has an element out of range")));
        }
        match self.tuple_index(tuple) {
            Some(i) => {
                let r = value.len();
                let v = self.module.coeff().reduced(value);
                self.values[i * r..(i + 1) * r].copy_from_slice(&v);
                Ok(())
            }
            None if self.module.coeff().is_zero(value) => Ok(()),
            None => Err(Error::InvalidInput(format!(
                "normalized cochains vanish on tuples containing the identity, got {tuple:?}"
            ))),
        }
    }

    fn check_compatible(&self, other: &Cochain) -> Result<()> {
        if self.degree != other.degree || !self.module.same_as(&other.module) {
            return Err(Error::TypeMismatch("cochains of different degree or module".into()));
        }
        Ok(())
    }

    fn zip_with(&self, other: &Cochain, f: impl Fn(i64, i64, i64) -> i64) -> Result<Cochain> {
        self.check_compatible(other)?;
        let factors = self.module.coeff().factors();
        let r = factors.len();
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .enumerate()
            .map(|(k, (&a, &b))| f(a, b, factors[k % r] as i64))
            .collect();
        Ok(Cochain {
            module: self.module.clone(),
            degree: self.degree,
            values,
        })
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        self.zip_with(other, |a, b, d| (a + b).rem_euclid(d))
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        self.zip_with(other, |a, b, d| (a - b).rem_euclid(d))
    }

    pub fn scale(&self, k: i64) -> Cochain {
        let factors = self.module.coeff().factors();
        let r = factors.len();
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &a)| ((a as i128 * k as i128).rem_euclid(factors[i % r] as i128)) as i64)
            .collect();
        Cochain {
            module: self.module.clone(),
            degree: self.degree,
            values,
        }
    }

    pub fn neg(&self) -> Cochain {
        self.scale(-1)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&x| x == 0)
    }

    /// Applies a coefficient map valuewise into the module `target`.
    pub fn map_values(&self, t: &AbMap, target: &GModule) -> Result<Cochain> {
        if t.source() != self.module.coeff() || t.target() != target.coeff() {
            return Err(Error::TypeMismatch("coefficient map does not fit".into()));
        }
        if !target.group().same_as(self.module.group()) {
            return Err(Error::GroupMismatch("target module lives over another group".into()));
        }
        let r = self.module.coeff().rank();
        let mut out = Cochain::zero(target, self.degree)?;
        let r2 = target.coeff().rank();
        for i in 0..self.tuple_total() {
            let v = if r == 0 { Vec::new() } else { self.value_at(i).to_vec() };
            let w = t.apply(&v);
            out.values[i * r2..(i + 1) * r2].copy_from_slice(&w);
        }
        Ok(out)
    }

    /// Non-zero values as (tuple, value) pairs in storage order.
    pub fn entries(&self) -> Vec<(Vec<usize>, Vec<i64>)> {
        let r = self.module.coeff().rank();
        if r == 0 {
            return Vec::new();
        }
        (0..self.tuple_total())
            .filter(|&i| self.value_at(i).iter().any(|&x| x != 0))
            .map(|i| (self.tuple_at(i), self.value_at(i).to_vec()))
            .collect()
    }

    /// `(dc)(g_1..g_{n+1}) = g_1 c(g_2..) + sum_i (-1)^i c(.., g_i g_{i+1}, ..)
    /// + (-1)^{n+1} c(g_1..g_n)`.
    pub fn differential(&self) -> Result<Cochain> {
        let mut out = Cochain::zero(&self.module, self.degree + 1)?;
        let coeff = self.module.coeff();
        let r = coeff.rank();
        if r == 0 {
            return Ok(out);
        }
        let n = self.degree;
        let g = self.module.group();
        let mut tuple = vec![0; n + 1];
        let mut inner = vec![0; n];
        let mut acc = vec![0i64; r];
        let mut acted = vec![0i64; r];
        for t in 0..out.tuple_total() {
            out.decode_into(t, &mut tuple);
            acc.iter_mut().for_each(|x| *x = 0);
            let v = self.value(&tuple[1..]);
            self.module.act_into(tuple[0], &v, &mut acted);
            for (a, b) in acc.iter_mut().zip(&acted) {
                *a += b;
            }
            for i in 0..n {
                for (k, slot) in inner.iter_mut().enumerate() {
                    *slot = match k.cmp(&i) {
                        std::cmp::Ordering::Less => tuple[k],
                        std::cmp::Ordering::Equal => g.mul(tuple[i], tuple[i + 1]),
                        std::cmp::Ordering::Greater => tuple[k + 1],
                    };
                }
                if let Some(idx) = self.tuple_index(&inner) {
                    let sign = if (i + 1) % 2 == 0 { 1 } else { -1 };
                    for (a, b) in acc.iter_mut().zip(self.value_at(idx)) {
                        *a += sign * b;
                    }
                }
            }
            let last = self.value(&tuple[..n]);
            let sign = if (n + 1) % 2 == 0 { 1 } else { -1 };
            for (a, b) in acc.iter_mut().zip(&last) {
                *a += sign * b;
            }
            coeff.reduce(&mut acc);
            out.values[t * r..(t + 1) * r].copy_from_slice(&acc);
        }
        Ok(out)
    }

    pub fn is_cocycle(&self) -> Result<bool> {
        Ok(self.differential()?.is_zero())
    }

    /// `c(f g_1, ..., f g_n)` as a cochain for the restricted module.
    pub fn pullback(&self, f: &GroupHom) -> Result<Cochain> {
        let target = restrict_module(&self.module, f)?;
        self.pullback_into(f, &target)
    }

    pub(crate) fn pullback_into(&self, f: &GroupHom, target: &GModule) -> Result<Cochain> {
        let mut mapped = vec![0; self.degree];
        Cochain::from_fn(target, self.degree, |tuple| {
            for (m, &h) in mapped.iter_mut().zip(tuple) {
                *m = f.apply(h);
            }
            self.value(&mapped)
        })
    }
}

impl PartialEq for Cochain {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.module.same_as(&other.module) && self.values == other.values
    }
}

impl fmt::Debug for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cochain(degree {}, {} nonzero tuples)", self.degree, self.entries().len())
    }
}

pub(crate) fn tuple_index(module: &GModule, tuple: &[usize]) -> Option<usize> {
    let g = module.group();
    let base = g.order() - 1;
    let mut idx = 0usize;
    for &x in tuple {
        idx = idx * base + g.nonidentity_position(x)?;
    }
    Some(idx)
}

pub(crate) fn decode_tuple(module: &GModule, mut index: usize, out: &mut [usize]) {
    let g = module.group();
    let base = g.order() - 1;
    for slot in out.iter_mut().rev() {
        *slot = g.nonidentity()[index % base];
        index /= base;
    }
}

/// Streams the rows of the differential `C^n -> C^{n+1}` as sparse integer
/// rows. Row `t * r + i` is coordinate `i` of tuple `t` in `C^{n+1}`; columns
/// index `C^n` the same way.
pub(crate) fn for_each_differential_row(module: &GModule, n: usize, mut visit: impl FnMut(usize, &[(usize, i64)])) {
    let g = module.group();
    let r = module.coeff().rank();
    if r == 0 || g.order() == 1 && n > 0 {
        return;
    }
    let base = g.order() - 1;
    let tuples = tuple_count(base, n + 1).expect("caller checked the size") as usize;
    let mut tuple = vec![0; n + 1];
    let mut inner = vec![0; n];
    let mut entries: Vec<(usize, i64)> = Vec::with_capacity(4 * r + r * r);
    for t in 0..tuples {
        decode_tuple(module, t, &mut tuple);
        // columns touched by this tuple, independent of the coordinate
        let head = tuple_index(module, &tuple[1..]).expect("non-identity tuple");
        let mut faces: Vec<(usize, i64)> = Vec::with_capacity(n + 1);
        for i in 0..n {
            for (k, slot) in inner.iter_mut().enumerate() {
                *slot = match k.cmp(&i) {
                    std::cmp::Ordering::Less => tuple[k],
                    std::cmp::Ordering::Equal => g.mul(tuple[i], tuple[i + 1]),
                    std::cmp::Ordering::Greater => tuple[k + 1],
                };
            }
            if let Some(idx) = tuple_index(module, &inner) {
                faces.push((idx, if (i + 1) % 2 == 0 { 1 } else { -1 }));
            }
        }
        let last = tuple_index(module, &tuple[..n]).expect("non-identity tuple");
        faces.push((last, if (n + 1) % 2 == 0 { 1 } else { -1 }));
        let action = module.action(tuple[0]).matrix();
        for i in 0..r {
            entries.clear();
            for j in 0..r {
                let a = *action.get(i, j);
                if a != 0 {
                    entries.push((head * r + j, a));
                }
            }
            for &(idx, s) in &faces {
                entries.push((idx * r + i, s));
            }
            visit(t * r + i, &entries);
        }
    }
}

/// Columns of the differential `C^{n-1} -> C^n`: entry `k` lists the
/// coordinates of `d(e_k)` as (row, coefficient) pairs.
pub(crate) fn coboundary_columns(module: &GModule, n: usize) -> Vec<Vec<(usize, i64)>> {
    assert!(n >= 1);
    let r = module.coeff().rank();
    let cols = tuple_count(module.group().order() - 1, n - 1).expect("caller checked the size") as usize * r;
    let mut out: Vec<Vec<(usize, i64)>> = vec![Vec::new(); cols];
    for_each_differential_row(module, n - 1, |row, entries| {
        for &(c, a) in entries {
            out[c].push((row, a));
        }
    });
    out
}
