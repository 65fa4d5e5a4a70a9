/// Reduced row echelon basis over F2 with rows packed into 64-bit words.
///
/// Every basis row vanishes in the pivot columns of all other rows, so
/// reducing a sparse incoming row costs one XOR per pivot column it touches.
#[derive(Clone, Debug)]
pub struct Gf2Rref {
    cols: usize,
    words: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    row_of_pivot: Vec<u32>,
}

const NONE: u32 = u32::MAX;

impl Gf2Rref {
    pub fn new(cols: usize) -> Self {
        Gf2Rref {
            cols,
            words: cols.div_ceil(64),
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

    /// Inserts the row with ones at `support` (repeated columns cancel).
    /// Returns whether the rank grew.
    pub fn insert_sparse(&mut self, support: &[usize]) -> bool {
        let mut x = vec![0u64; self.words];
        for &c in support {
            x[c / 64] ^= 1 << (c % 64);
        }
        let mut hits: Vec<u32> = Vec::with_capacity(support.len());
        for &c in support {
            if x[c / 64] >> (c % 64) & 1 == 1 && self.row_of_pivot[c] != NONE {
                hits.push(self.row_of_pivot[c]);
            }
        }
        hits.sort_unstable();
        hits.dedup();
        for r in hits {
            xor_into(&mut x, &self.rows[r as usize]);
        }
        self.push_reduced(x)
    }

    /// Inserts a dense 0/1 row.
    pub fn insert_bits(&mut self, mut x: Vec<u64>) -> bool {
        self.reduce(&mut x);
        self.push_reduced(x)
    }

    fn push_reduced(&mut self, x: Vec<u64>) -> bool {
        let Some(c) = lowest_bit(&x) else {
            return false;
        };
        let (w, b) = (c / 64, c % 64);
        for row in self.rows.iter_mut() {
            if row[w] >> b & 1 == 1 {
                xor_into(row, &x);
            }
        }
        self.row_of_pivot[c] = self.rows.len() as u32;
        self.pivots.push(c);
        self.rows.push(x);
        true
    }

    /// Clears every pivot column of `x`.
    pub fn reduce(&self, x: &mut [u64]) {
        for (r, &c) in self.pivots.iter().enumerate() {
            if x[c / 64] >> (c % 64) & 1 == 1 {
                xor_into(x, &self.rows[r]);
            }
        }
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.rows[r]
    }

    /// Basis of `{v : row · v = 0 for every row}`, one vector per free
    /// column in increasing order.
    pub fn nullspace(&self) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        for f in 0..self.cols {
            if self.row_of_pivot[f] != NONE {
                continue;
            }
            let mut v = vec![0u64; self.words];
            v[f / 64] |= 1 << (f % 64);
            for (r, &c) in self.pivots.iter().enumerate() {
                if self.rows[r][f / 64] >> (f % 64) & 1 == 1 {
                    v[c / 64] |= 1 << (c % 64);
                }
            }
            out.push(v);
        }
        out
    }
}

#[inline]
fn xor_into(x: &mut [u64], y: &[u64]) {
    for (a, b) in x.iter_mut().zip(y) {
        *a ^= b;
    }
}

fn lowest_bit(x: &[u64]) -> Option<usize> {
    x.iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
}

pub fn bit(x: &[u64], c: usize) -> bool {
    x[c / 64] >> (c % 64) & 1 == 1
}

pub fn to_bits(v: &[u32]) -> Vec<u64> {
    let mut x = vec![0u64; v.len().div_ceil(64)];
    for (c, &a) in v.iter().enumerate() {
        if a & 1 == 1 {
            x[c / 64] |= 1 << (c % 64);
        }
    }
    x
}

pub fn from_bits(x: &[u64], cols: usize) -> Vec<u32> {
    (0..cols).map(|c| bit(x, c) as u32).collect()
}
