use num_bigint::BigInt;

use super::matrix::Matrix;
use super::scalar::{add, sub_mul, Overflow, Scalar};

/// Smith normal form `u * m * v = d` with the inverses of `u` and `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf<T> {
    pub u: Matrix<T>,
    pub u_inv: Matrix<T>,
    pub d: Matrix<T>,
    pub v: Matrix<T>,
    pub v_inv: Matrix<T>,
    pub rank: usize,
}

impl<T: Scalar> Snf<T> {
    /// Diagonal entries `d_11, d_22, ...` (including trailing zeros).
    pub fn diagonal(&self) -> Vec<T> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }
}

struct Work<T> {
    a: Matrix<T>,
    u: Matrix<T>,
    u_inv: Matrix<T>,
    v: Matrix<T>,
    v_inv: Matrix<T>,
}

impl<T: Scalar> Work<T> {
    fn swap_rows(&mut self, i: usize, k: usize) {
        self.a.swap_rows(i, k);
        self.u.swap_rows(i, k);
        self.u_inv.swap_cols(i, k);
    }

    fn swap_cols(&mut self, j: usize, l: usize) {
        self.a.swap_cols(j, l);
        self.v.swap_cols(j, l);
        self.v_inv.swap_rows(j, l);
    }

    /// row_i -= q * row_k
    fn row_sub(&mut self, i: usize, k: usize, q: &T) -> Result<(), Overflow> {
        if q.is_zero() {
            return Ok(());
        }
        for m in [&mut self.a, &mut self.u] {
            for j in 0..m.cols() {
                let x = sub_mul(m.get(i, j), q, m.get(k, j))?;
                m.set(i, j, x);
            }
        }
        // inverse: col_k += q * col_i
        let m = &mut self.u_inv;
        for r in 0..m.rows() {
            let x = add(m.get(r, k), &(q.checked_mul(m.get(r, i)).ok_or(Overflow)?))?;
            m.set(r, k, x);
        }
        Ok(())
    }

    /// col_j -= q * col_l
    fn col_sub(&mut self, j: usize, l: usize, q: &T) -> Result<(), Overflow> {
        if q.is_zero() {
            return Ok(());
        }
        for m in [&mut self.a, &mut self.v] {
            for r in 0..m.rows() {
                let x = sub_mul(m.get(r, j), q, m.get(r, l))?;
                m.set(r, j, x);
            }
        }
        // inverse: row_l += q * row_j
        let m = &mut self.v_inv;
        for c in 0..m.cols() {
            let x = add(m.get(l, c), &(q.checked_mul(m.get(j, c)).ok_or(Overflow)?))?;
            m.set(l, c, x);
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.a.cols() {
            let x = -self.a.get(i, j).clone();
            self.a.set(i, j, x);
        }
        for j in 0..self.u.cols() {
            let x = -self.u.get(i, j).clone();
            self.u.set(i, j, x);
        }
        for r in 0..self.u_inv.rows() {
            let x = -self.u_inv.get(r, i).clone();
            self.u_inv.set(r, i, x);
        }
    }
}

/// Smith normal form over a fixed scalar type. Pivots are chosen by minimal
/// absolute value; fixed-width types return `Overflow` instead of wrapping.
pub fn snf<T: Scalar>(m: &Matrix<T>) -> Result<Snf<T>, Overflow> {
    let (r, c) = (m.rows(), m.cols());
    let mut w = Work {
        a: m.clone(),
        u: Matrix::identity(r),
        u_inv: Matrix::identity(r),
        v: Matrix::identity(c),
        v_inv: Matrix::identity(c),
    };
    let mut t = 0;
    while t < r.min(c) {
        let Some((pi, pj)) = min_entry(&w.a, (t..r).flat_map(|i| (t..c).map(move |j| (i, j)))) else {
            break;
        };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let pivot = w.a.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..r {
                if !w.a.get(i, t).is_zero() {
                    let q = w.a.get(i, t).div_floor(&pivot);
                    w.row_sub(i, t, &q)?;
                    clean &= w.a.get(i, t).is_zero();
                }
            }
            for j in t + 1..c {
                if !w.a.get(t, j).is_zero() {
                    let q = w.a.get(t, j).div_floor(&pivot);
                    w.col_sub(j, t, &q)?;
                    clean &= w.a.get(t, j).is_zero();
                }
            }
            if !clean {
                let cross = (t + 1..r).map(|i| (i, t)).chain((t + 1..c).map(|j| (t, j)));
                let (i, j) = min_entry(&w.a, cross).expect("a nonzero remainder exists");
                if w.a.get(i, j).abs() < pivot.abs() {
                    w.swap_rows(t, i);
                    w.swap_cols(t, j);
                }
                continue;
            }
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !w.a.get(i, j).is_multiple_of(&pivot)));
            match bad {
                // row_t += row_i
                Some(i) => w.row_sub(t, i, &(-T::one()))?,
                None => break,
            }
        }
        if w.a.get(t, t).is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
    Ok(Snf {
        u: w.u,
        u_inv: w.u_inv,
        d: w.a,
        v: w.v,
        v_inv: w.v_inv,
        rank: t,
    })
}

fn min_entry<T: Scalar>(
    a: &Matrix<T>,
    cells: impl Iterator<Item = (usize, usize)>,
) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), T)> = None;
    for (i, j) in cells {
        let x = a.get(i, j);
        if x.is_zero() {
            continue;
        }
        let ax = x.abs();
        if best.as_ref().is_none_or(|(_, b)| ax < *b) {
            best = Some(((i, j), ax));
        }
    }
    best.map(|(p, _)| p)
}

/// Smith normal form of a 64-bit matrix, retried in 128-bit and then
/// arbitrary precision when intermediate entries overflow.
pub fn snf_exact(m: &Matrix<i64>) -> Snf<BigInt> {
    let widen = |s: Snf<i128>| Snf {
        u: s.u.map(|&x| BigInt::from(x)),
        u_inv: s.u_inv.map(|&x| BigInt::from(x)),
        d: s.d.map(|&x| BigInt::from(x)),
        v: s.v.map(|&x| BigInt::from(x)),
        v_inv: s.v_inv.map(|&x| BigInt::from(x)),
        rank: s.rank,
    };
    if let Ok(s) = snf(m) {
        return widen(Snf {
            u: s.u.map(|&x| x as i128),
            u_inv: s.u_inv.map(|&x| x as i128),
            d: s.d.map(|&x| x as i128),
            v: s.v.map(|&x| x as i128),
            v_inv: s.v_inv.map(|&x| x as i128),
            rank: s.rank,
        });
    }
    if let Ok(s) = snf(&m.map(|&x| x as i128)) {
        return widen(s);
    }
    snf(&m.map(|&x| BigInt::from(x))).expect("arbitrary precision cannot overflow")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: Vec<Vec<i64>>) -> Matrix<i64> {
        Matrix::from_rows(rows).unwrap()
    }

    fn check(a: &Matrix<i64>) -> Snf<i64> {
        let s = snf(a).unwrap();
        assert_eq!(s.u.checked_mul(a).unwrap().checked_mul(&s.v).unwrap(), s.d);
        assert_eq!(s.u.checked_mul(&s.u_inv).unwrap(), Matrix::identity(a.rows()));
        assert_eq!(s.v.checked_mul(&s.v_inv).unwrap(), Matrix::identity(a.cols()));
        assert!(s.d.is_diagonal());
        s
    }

    #[test]
    fn identity_is_fixed() {
        let s = check(&Matrix::identity(3));
        assert_eq!(s.diagonal(), vec![1, 1, 1]);
    }

    #[test]
    fn diag_two_three() {
        let s = check(&m(vec![vec![2, 0], vec![0, 3]]));
        assert_eq!(s.diagonal(), vec![1, 6]);
    }

    #[test]
    fn zero_matrix() {
        let s = check(&Matrix::zeros(2, 3));
        assert_eq!(s.rank, 0);
        assert_eq!(s.diagonal(), vec![0, 0]);
    }

    #[test]
    fn overflow_falls_back() {
        let big = i64::MAX / 3;
        let a = m(vec![vec![big, big - 1], vec![big - 7, big - 11]]);
        let s = snf_exact(&a);
        let ab = a.map(|&x| BigInt::from(x));
        assert_eq!(s.u.checked_mul(&ab).unwrap().checked_mul(&s.v).unwrap(), s.d);
    }
}
