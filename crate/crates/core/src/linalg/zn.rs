//! Linear congruences over `Z/e`: diagonalization with tracked transforms,
//! kernels and particular solutions.

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::modular::{ext_gcd, inv_mod, reduce, solve_linear};
use crate::error::{Error, Result};

/// Rows beyond the column count are replaced by this many more random
/// combinations than there are columns.
const COMPRESSION_SLACK: usize = 8;
const COMPRESSION_SEED: u64 = 0x7a6e_636f;

/// `P A Q = diag` over `Z/e`, with `Q^-1` and optionally `P`.
struct Diagonal {
    e: u64,
    rows: usize,
    cols: usize,
    diag: Vec<u64>,
    p: Option<Vec<u64>>,
    q: Vec<u64>,
    q_inv: Vec<u64>,
}

struct Work {
    e: u64,
    rows: usize,
    cols: usize,
    a: Vec<u64>,
    p: Option<Vec<u64>>,
    q: Vec<u64>,
    q_inv: Vec<u64>,
}

fn identity(n: usize) -> Vec<u64> {
    let mut m = vec![0; n * n];
    for i in 0..n {
        m[i * n + i] = 1;
    }
    m
}

impl Work {
    #[inline]
    fn at(&self, i: usize, j: usize) -> u64 {
        self.a[i * self.cols + j]
    }

    /// Rows `(t, i)` of a row-major matrix with `width` columns become
    /// `(a t + b i, c t + d i)`.
    fn mix_rows(m: &mut [u64], width: usize, from: usize, t: usize, i: usize, k: [u64; 4], e: u64) {
        for j in from..width {
            let x = m[t * width + j];
            let y = m[i * width + j];
            if x == 0 && y == 0 {
                continue;
            }
            m[t * width + j] = (k[0] * x + k[1] * y) % e;
            m[i * width + j] = (k[2] * x + k[3] * y) % e;
        }
    }

    /// Columns `(t, j)` become `(a t + b j, c t + d j)`.
    fn mix_cols(m: &mut [u64], height: usize, width: usize, from: usize, t: usize, j: usize, k: [u64; 4], e: u64) {
        for r in from..height {
            let x = m[r * width + t];
            let y = m[r * width + j];
            if x == 0 && y == 0 {
                continue;
            }
            m[r * width + t] = (k[0] * x + k[1] * y) % e;
            m[r * width + j] = (k[2] * x + k[3] * y) % e;
        }
    }

    /// row_i -= q row_t
    fn row_sub(&mut self, t: usize, i: usize, q: u64) {
        let e = self.e;
        let nq = e - q;
        Self::mix_rows(&mut self.a, self.cols, t, t, i, [1, 0, nq, 1], e);
        if let Some(p) = self.p.as_mut() {
            Self::mix_rows(p, self.rows, 0, t, i, [1, 0, nq, 1], e);
        }
    }

    /// col_j -= q col_t
    fn col_sub(&mut self, t: usize, j: usize, q: u64) {
        let e = self.e;
        let nq = e - q;
        Self::mix_cols(&mut self.a, self.rows, self.cols, t, t, j, [1, 0, nq, 1], e);
        Self::mix_cols(&mut self.q, self.cols, self.cols, 0, t, j, [1, 0, nq, 1], e);
        // inverse: row_t += q row_j
        Self::mix_rows(&mut self.q_inv, self.cols, 0, t, j, [1, q, 0, 1], e);
    }

    fn bezout(&self, p: u64, x: u64) -> ([u64; 4], [u64; 4]) {
        let e = self.e as i64;
        let (g, s, t) = ext_gcd(p as i64, x as i64);
        let (pg, xg) = (p as i64 / g, x as i64 / g);
        let fwd = [reduce(s, e as u64), reduce(t, e as u64), reduce(-xg, e as u64), reduce(pg, e as u64)];
        let inv = [reduce(pg, e as u64), reduce(xg, e as u64), reduce(-t, e as u64), reduce(s, e as u64)];
        (fwd, inv)
    }

    fn row_bezout(&mut self, t: usize, i: usize) {
        let (k, _) = self.bezout(self.at(t, t), self.at(i, t));
        let e = self.e;
        Self::mix_rows(&mut self.a, self.cols, t, t, i, k, e);
        if let Some(p) = self.p.as_mut() {
            Self::mix_rows(p, self.rows, 0, t, i, k, e);
        }
    }

    fn col_bezout(&mut self, t: usize, j: usize) {
        let (k, inv) = self.bezout(self.at(t, t), self.at(t, j));
        let e = self.e;
        Self::mix_cols(&mut self.a, self.rows, self.cols, t, t, j, k, e);
        Self::mix_cols(&mut self.q, self.cols, self.cols, 0, t, j, k, e);
        Self::mix_rows(&mut self.q_inv, self.cols, 0, t, j, inv, e);
    }

    fn pivot(&self, t: usize, gcds: &[u64]) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), u64)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = self.at(i, j);
                if x == 0 {
                    continue;
                }
                let g = gcds.get(x as usize).copied().unwrap_or_else(|| x.gcd(&self.e));
                if best.is_none_or(|(_, b)| g < b) {
                    best = Some(((i, j), g));
                    if g == 1 {
                        return Some((i, j));
                    }
                }
            }
        }
        best.map(|(p, _)| p)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let c = self.cols;
        for j in 0..c {
            self.a.swap(a * c + j, b * c + j);
        }
        if let Some(p) = self.p.as_mut() {
            let r = self.rows;
            for j in 0..r {
                p.swap(a * r + j, b * r + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let c = self.cols;
        for r in 0..self.rows {
            self.a.swap(r * c + a, r * c + b);
        }
        for r in 0..c {
            self.q.swap(r * c + a, r * c + b);
        }
        for j in 0..c {
            self.q_inv.swap(a * c + j, b * c + j);
        }
    }
}

const GCD_TABLE_LIMIT: u64 = 1 << 16;

/// Division by a fixed nonzero `p` in `Z/e`.
struct Divider {
    p: u64,
    g: u64,
    m: u64,
    inv: u64,
}

impl Divider {
    fn new(p: u64, e: u64) -> Self {
        let g = p.gcd(&e);
        let m = e / g;
        let inv = if m == 1 { 0 } else { inv_mod((p / g) % m, m).expect("p / g is a unit modulo e / g") };
        Divider { p, g, m, inv }
    }

    /// Some `q` with `p q = x`, if one exists.
    fn quotient(&self, x: u64) -> Option<u64> {
        if x % self.g != 0 {
            return None;
        }
        Some((x / self.g) % self.m * self.inv % self.m)
    }
}

fn diagonalize(a: Vec<u64>, rows: usize, cols: usize, e: u64, track_p: bool) -> Diagonal {
    let mut w = Work {
        e,
        rows,
        cols,
        a,
        p: track_p.then(|| identity(rows)),
        q: identity(cols),
        q_inv: identity(cols),
    };
    let n = rows.min(cols);
    let mut diag = vec![0u64; n];
    let gcds: Vec<u64> = if e <= GCD_TABLE_LIMIT { (0..e).map(|x| x.gcd(&e)).collect() } else { Vec::new() };
    for t in 0..n {
        let Some((pi, pj)) = w.pivot(t, &gcds) else {
            break;
        };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        let mut dv = Divider::new(w.at(t, t), e);
        loop {
            for i in t + 1..rows {
                let x = w.at(i, t);
                if x == 0 {
                    continue;
                }
                if dv.p != w.at(t, t) {
                    dv = Divider::new(w.at(t, t), e);
                }
                match dv.quotient(x) {
                    Some(q) => w.row_sub(t, i, q),
                    None => w.row_bezout(t, i),
                }
            }
            let mut dirty = false;
            for j in t + 1..cols {
                let x = w.at(t, j);
                if x == 0 {
                    continue;
                }
                if dv.p != w.at(t, t) {
                    dv = Divider::new(w.at(t, t), e);
                }
                match dv.quotient(x) {
                    Some(q) => w.col_sub(t, j, q),
                    None => {
                        w.col_bezout(t, j);
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }
        diag[t] = w.at(t, t);
    }
    Diagonal {
        e,
        rows,
        cols,
        diag,
        p: w.p,
        q: w.q,
        q_inv: w.q_inv,
    }
}

impl Diagonal {
    /// `e / gcd(d_k, e)` for every column (1 where there is no diagonal entry).
    fn scales(&self) -> Vec<u64> {
        (0..self.cols)
            .map(|k| match self.diag.get(k) {
                Some(&d) if d != 0 => self.e / d.gcd(&self.e),
                _ => 1,
            })
            .collect()
    }
}

/// `(Z/e)^k / rowspan(rows)` as `⊕ Z/orders_i`, through the coordinate
/// change `y = x Q`.
#[derive(Clone, Debug)]
pub struct ModQuotient {
    /// Orders of the nontrivial cyclic factors, each dividing `e`.
    pub orders: Vec<u64>,
    /// Row `i` maps ambient coordinates to coordinate `i` of the quotient.
    pub coords: Vec<Vec<u64>>,
    /// Ambient representative of generator `i`.
    pub gens: Vec<Vec<u64>>,
}

pub fn quotient_mod(e: u64, k: usize, rows: &[Vec<u64>]) -> ModQuotient {
    let mut a = vec![0u64; rows.len() * k];
    for (r, row) in rows.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            a[r * k + j] = x % e;
        }
    }
    let d = diagonalize(a, rows.len(), k, e, false);
    let mut out = ModQuotient {
        orders: Vec::new(),
        coords: Vec::new(),
        gens: Vec::new(),
    };
    for i in 0..k {
        let order = match d.diag.get(i) {
            Some(&x) if x != 0 => x.gcd(&e),
            _ => e,
        };
        if order == 1 {
            continue;
        }
        out.orders.push(order);
        out.coords.push((0..k).map(|j| d.q[j * k + i] % order).collect());
        out.gens.push(d.q_inv[i * k..(i + 1) * k].to_vec());
    }
    out
}

/// A system of congruences `sum_j a_ij x_j = b_i (mod m_i)` with every
/// modulus dividing `e`. Row `i` is stored multiplied by `e / m_i`, which
/// turns it into a congruence modulo `e`.
#[derive(Clone, Debug)]
pub struct Congruences {
    e: u64,
    cols: usize,
    rows: Vec<Vec<(u32, u64)>>,
    scales: Vec<u64>,
}

impl Congruences {
    pub fn new(e: u64, cols: usize) -> Result<Self> {
        if !(2..1 << 31).contains(&e) {
            return Err(Error::UnsupportedParameter(format!("modulus {e} out of range")));
        }
        Ok(Congruences {
            e,
            cols,
            rows: Vec::new(),
            scales: Vec::new(),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.e
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    /// Adds a congruence modulo `modulus` (a divisor of `e`).
    pub fn push(&mut self, entries: &[(usize, i64)], modulus: u64) {
        debug_assert_eq!(self.e % modulus, 0);
        let s = self.e / modulus;
        let mut row: Vec<(u32, u64)> = Vec::with_capacity(entries.len());
        for &(c, a) in entries {
            let v = reduce(a, modulus) * s;
            if v != 0 {
                row.push((c as u32, v));
            }
        }
        row.sort_unstable_by_key(|&(c, _)| c);
        let mut merged: Vec<(u32, u64)> = Vec::with_capacity(row.len());
        for (c, v) in row {
            match merged.last_mut() {
                Some((lc, lv)) if *lc == c => *lv = (*lv + v) % self.e,
                _ => merged.push((c, v)),
            }
        }
        merged.retain(|&(_, v)| v != 0);
        self.rows.push(merged);
        self.scales.push(s);
    }

    fn eval_row(&self, r: usize, x: &[u64]) -> u64 {
        self.rows[r]
            .iter()
            .fold(0u64, |acc, &(c, a)| (acc + a * x[c as usize]) % self.e)
    }

    /// Dense matrix of the rows, or of random combinations of them when
    /// there are many more rows than columns. Returns the combination
    /// coefficients in the second case.
    fn compressed(&self, extra: &[usize]) -> (Vec<u64>, usize, Option<Vec<u64>>) {
        let e = self.e;
        let n = self.cols;
        let k = n + COMPRESSION_SLACK;
        if self.rows.len() <= k {
            let mut a = vec![0u64; self.rows.len() * n];
            for (r, row) in self.rows.iter().enumerate() {
                for &(c, v) in row {
                    a[r * n + c as usize] = v;
                }
            }
            return (a, self.rows.len(), None);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(COMPRESSION_SEED);
        let total = k + extra.len();
        let mut a = vec![0u64; total * n];
        let mut coeffs = vec![0u64; k * self.rows.len()];
        for (r, row) in self.rows.iter().enumerate() {
            for combo in 0..k {
                let c = rng.gen_range(0..e);
                coeffs[combo * self.rows.len() + r] = c;
                if c == 0 {
                    continue;
                }
                let dst = &mut a[combo * n..(combo + 1) * n];
                for &(col, v) in row {
                    let slot = &mut dst[col as usize];
                    *slot = (*slot + c * v) % e;
                }
            }
        }
        for (i, &r) in extra.iter().enumerate() {
            for &(col, v) in &self.rows[r] {
                a[(k + i) * n + col as usize] = v;
            }
        }
        (a, total, Some(coeffs))
    }

    fn failing_rows(&self, vectors: &[Vec<u64>]) -> Vec<usize> {
        let mut bad = Vec::new();
        for r in 0..self.rows.len() {
            if vectors.iter().any(|v| self.eval_row(r, v) != 0) {
                bad.push(r);
            }
        }
        bad
    }

    /// The solution module of the homogeneous system as a subgroup of
    /// `(Z/e)^cols`.
    pub fn kernel(&self) -> ZnKernel {
        let mut extra: Vec<usize> = Vec::new();
        loop {
            let (a, rows, _) = self.compressed(&extra);
            let d = diagonalize(a, rows, self.cols, self.e, false);
            let kernel = ZnKernel::from_diagonal(&d);
            let bad = self.failing_rows(&kernel.gens);
            if bad.is_empty() {
                return kernel;
            }
            extra.extend(bad);
            extra.sort_unstable();
            extra.dedup();
        }
    }

    /// A reusable solver for inhomogeneous right-hand sides.
    pub fn solver(&self) -> ZnSolver {
        self.clone().into_solver()
    }

    pub fn into_solver(self) -> ZnSolver {
        let mut extra: Vec<usize> = Vec::new();
        loop {
            let (a, rows, coeffs) = self.compressed(&extra);
            let d = diagonalize(a, rows, self.cols, self.e, true);
            let kernel = ZnKernel::from_diagonal(&d);
            let bad = self.failing_rows(&kernel.gens);
            if bad.is_empty() {
                return ZnSolver {
                    system: self,
                    diagonal: d,
                    coeffs,
                    extra,
                };
            }
            extra.extend(bad);
            extra.sort_unstable();
            extra.dedup();
        }
    }
}

/// `{x : A x = 0}` over `Z/e`, presented as `⊕ Z/g_k` through
/// `x = sum z_k gens_k`.
#[derive(Clone, Debug)]
pub struct ZnKernel {
    e: u64,
    gens: Vec<Vec<u64>>,
    orders: Vec<u64>,
    scales: Vec<u64>,
    coord_rows: Vec<Vec<u64>>,
}

impl ZnKernel {
    fn from_diagonal(d: &Diagonal) -> Self {
        let n = d.cols;
        let w = d.scales();
        let mut gens = Vec::new();
        let mut orders = Vec::new();
        let mut scales = Vec::new();
        let mut coord_rows = Vec::new();
        for k in 0..n {
            let g = d.e / w[k];
            if g == 1 {
                continue;
            }
            gens.push((0..n).map(|r| d.q[r * n + k] * w[k] % d.e).collect());
            orders.push(g);
            scales.push(w[k]);
            coord_rows.push(d.q_inv[k * n..(k + 1) * n].to_vec());
        }
        ZnKernel {
            e: d.e,
            gens,
            orders,
            scales,
            coord_rows,
        }
    }

    /// Orders `g_k` of the cyclic coordinates.
    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn generators(&self) -> &[Vec<u64>] {
        &self.gens
    }

    /// Coordinates `z_k` (mod `g_k`) of a kernel element.
    pub fn coords(&self, x: &[u64]) -> Vec<i64> {
        self.coord_rows
            .iter()
            .zip(&self.scales)
            .zip(&self.orders)
            .map(|((row, &w), &g)| {
                let y = row
                    .iter()
                    .zip(x)
                    .fold(0u64, |acc, (&a, &b)| if b == 0 { acc } else { (acc + a * b) % self.e });
                debug_assert_eq!(y % w, 0, "vector outside the kernel");
                ((y / w) % g) as i64
            })
            .collect()
    }

    /// `sum z_k gens_k`.
    pub fn element(&self, z: &[i64]) -> Vec<u64> {
        let n = self.gens.first().map_or(0, Vec::len);
        let mut x = vec![0u64; n];
        for (zk, g) in z.iter().zip(&self.gens) {
            let zk = reduce(*zk, self.e);
            if zk == 0 {
                continue;
            }
            for (a, &b) in x.iter_mut().zip(g) {
                *a = (*a + zk * b) % self.e;
            }
        }
        x
    }
}

/// Particular solutions of `A x = b`.
pub struct ZnSolver {
    system: Congruences,
    diagonal: Diagonal,
    coeffs: Option<Vec<u64>>,
    extra: Vec<usize>,
}

impl ZnSolver {
    /// Some `x` with `A x = b`, where `b_i` is the right-hand side of row `i`
    /// modulo that row's own modulus.
    pub fn solve(&self, b: &[i64]) -> Option<Vec<u64>> {
        let sys = &self.system;
        let e = sys.e;
        let scaled: Vec<u64> = b
            .iter()
            .zip(&sys.scales)
            .map(|(&x, &s)| reduce(x, e / s) * s % e)
            .collect();
        let rhs: Vec<u64> = match &self.coeffs {
            None => scaled.clone(),
            Some(c) => {
                let m = sys.rows.len();
                let k = c.len() / m;
                let mut out: Vec<u64> = (0..k)
                    .map(|combo| {
                        c[combo * m..(combo + 1) * m]
                            .iter()
                            .zip(&scaled)
                            .fold(0u64, |acc, (&a, &y)| (acc + a * y) % e)
                    })
                    .collect();
                out.extend(self.extra.iter().map(|&r| scaled[r]));
                out
            }
        };
        let d = &self.diagonal;
        let p = d.p.as_ref().expect("solver tracks row transforms");
        let pb: Vec<u64> = (0..d.rows)
            .map(|i| {
                p[i * d.rows..(i + 1) * d.rows]
                    .iter()
                    .zip(&rhs)
                    .fold(0u64, |acc, (&a, &y)| (acc + a * y) % e)
            })
            .collect();
        let n = d.cols;
        let mut y = vec![0u64; n];
        for (i, &c) in pb.iter().enumerate() {
            let dk = d.diag.get(i).copied().unwrap_or(0);
            if i >= n || dk == 0 {
                if c != 0 {
                    return None;
                }
                continue;
            }
            y[i] = solve_linear(dk, c, e)?;
        }
        let x: Vec<u64> = (0..n)
            .map(|r| (0..n).fold(0u64, |acc, k| (acc + d.q[r * n + k] * y[k]) % e))
            .collect();
        let ok = (0..sys.rows.len()).all(|r| sys.eval_row(r, &x) == scaled[r]);
        ok.then_some(x)
    }
}
