use super::modular::inv_mod;

/// Reduced row echelon basis over F_p with dense rows; pivots are 1.
#[derive(Clone, Debug)]
pub struct FpRref {
    p: u64,
    cols: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
    row_of_pivot: Vec<u32>,
}

const NONE: u32 = u32::MAX;

impl FpRref {
    pub fn new(p: u64, cols: usize) -> Self {
        assert!(p >= 2 && p < 1 << 31, "prime out of range");
        FpRref {
            p,
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
            row_of_pivot: vec![NONE; cols],
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.cols
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.rows[r]
    }

    /// Inserts the row with the given (column, value) entries; repeated
    /// columns add up. Returns whether the rank grew.
    pub fn insert_sparse(&mut self, entries: &[(usize, i64)]) -> bool {
        let p = self.p as i64;
        let mut x = vec![0u32; self.cols];
        for &(c, a) in entries {
            x[c] = ((x[c] as i64 + a).rem_euclid(p)) as u32;
        }
        let mut hits: Vec<(u32, u32)> = Vec::new();
        for &(c, _) in entries {
            if x[c] != 0 && self.row_of_pivot[c] != NONE {
                hits.push((self.row_of_pivot[c], x[c]));
            }
        }
        hits.sort_unstable();
        hits.dedup();
        for (r, k) in hits {
            sub_mul(&mut x, &self.rows[r as usize], k, self.p);
        }
        self.push_reduced(x)
    }

    pub fn insert_dense(&mut self, mut x: Vec<u32>) -> bool {
        self.reduce(&mut x);
        self.push_reduced(x)
    }

    fn push_reduced(&mut self, mut x: Vec<u32>) -> bool {
        let Some(c) = x.iter().position(|&a| a != 0) else {
            return false;
        };
        let inv = inv_mod(x[c] as u64, self.p).expect("nonzero in a prime field") as u32;
        scale(&mut x, inv, self.p);
        for row in self.rows.iter_mut() {
            let k = row[c];
            if k != 0 {
                sub_mul(row, &x, k, self.p);
            }
        }
        self.row_of_pivot[c] = self.rows.len() as u32;
        self.pivots.push(c);
        self.rows.push(x);
        true
    }

    /// Clears every pivot column of `x`.
    pub fn reduce(&self, x: &mut [u32]) {
        for (r, &c) in self.pivots.iter().enumerate() {
            let k = x[c];
            if k != 0 {
                sub_mul(x, &self.rows[r], k, self.p);
            }
        }
    }

    pub fn nullspace(&self) -> Vec<Vec<u32>> {
        let p = self.p as u32;
        let mut out = Vec::new();
        for f in 0..self.cols {
            if self.row_of_pivot[f] != NONE {
                continue;
            }
            let mut v = vec![0u32; self.cols];
            v[f] = 1;
            for (r, &c) in self.pivots.iter().enumerate() {
                let a = self.rows[r][f];
                if a != 0 {
                    v[c] = p - a;
                }
            }
            out.push(v);
        }
        out
    }
}

/// `x -= k * y` modulo `p`.
#[inline]
fn sub_mul(x: &mut [u32], y: &[u32], k: u32, p: u64) {
    let neg = p - k as u64;
    for (a, &b) in x.iter_mut().zip(y) {
        if b != 0 {
            *a = ((*a as u64 + neg * b as u64) % p) as u32;
        }
    }
}

fn scale(x: &mut [u32], k: u32, p: u64) {
    for a in x.iter_mut() {
        *a = ((*a as u64 * k as u64) % p) as u32;
    }
}
