//! Exact rational and integer matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::QPoly;

/// Square or rectangular matrix over ℚ, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: Vec<Vec<BigRational>>,
}

impl QMatrix {
    pub fn new(rows: Vec<Vec<BigRational>>) -> Self {
        if let Some(first) = rows.first() {
            assert!(rows.iter().all(|r| r.len() == first.len()), "ragged matrix");
        }
        QMatrix { rows }
    }

    pub fn from_ints(rows: &[Vec<i64>]) -> Self {
        QMatrix::new(
            rows.iter()
                .map(|r| r.iter().map(|&a| BigRational::from_integer(a.into())).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        QMatrix::new(
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                        .collect()
                })
                .collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.rows
    }

    pub fn mul(&self, o: &QMatrix) -> QMatrix {
        assert_eq!(self.ncols(), o.nrows());
        let (n, k, m) = (self.nrows(), self.ncols(), o.ncols());
        let mut out = vec![vec![BigRational::zero(); m]; n];
        for i in 0..n {
            for l in 0..k {
                let a = &self.rows[i][l];
                if a.is_zero() {
                    continue;
                }
                for j in 0..m {
                    out[i][j] += a * &o.rows[l][j];
                }
            }
        }
        QMatrix::new(out)
    }

    pub fn sub(&self, o: &QMatrix) -> QMatrix {
        QMatrix::new(
            self.rows
                .iter()
                .zip(&o.rows)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
                .collect(),
        )
    }

    pub fn add_scalar_identity(&self, s: &BigRational) -> QMatrix {
        let mut m = self.clone();
        for i in 0..m.nrows() {
            m.rows[i][i] += s;
        }
        m
    }

    pub fn trace(&self) -> BigRational {
        (0..self.nrows()).map(|i| self.rows[i][i].clone()).sum()
    }

    pub fn is_integral(&self) -> bool {
        self.rows.iter().flatten().all(|a| a.is_integer())
    }

    pub fn to_integer(&self) -> Option<ZMatrix> {
        if !self.is_integral() {
            return None;
        }
        Some(ZMatrix::new(
            self.rows
                .iter()
                .map(|r| r.iter().map(|a| a.to_integer()).collect())
                .collect(),
        ))
    }

    /// Row echelon elimination; returns (rank, determinant if square).
    fn eliminate(&self) -> (usize, BigRational) {
        let mut a = self.rows.clone();
        let (n, m) = (self.nrows(), self.ncols());
        let mut det = BigRational::one();
        let mut rank = 0;
        for col in 0..m {
            let Some(piv) = (rank..n).find(|&r| !a[r][col].is_zero()) else {
                det = BigRational::zero();
                continue;
            };
            if piv != rank {
                a.swap(piv, rank);
                det = -det;
            }
            let p = a[rank][col].clone();
            det *= &p;
            for r in rank + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let f = &a[r][col] / &p;
                for c in col..m {
                    let t = &f * &a[rank][c];
                    a[r][c] -= t;
                }
            }
            rank += 1;
        }
        if rank < n {
            det = BigRational::zero();
        }
        (rank, det)
    }

    pub fn det(&self) -> BigRational {
        assert_eq!(self.nrows(), self.ncols());
        if self.nrows() == 0 {
            return BigRational::one();
        }
        self.eliminate().1
    }

    pub fn rank(&self) -> usize {
        self.eliminate().0
    }

    /// Gauss–Jordan inverse; `None` if singular.
    pub fn inverse(&self) -> Option<QMatrix> {
        let n = self.nrows();
        assert_eq!(n, self.ncols());
        let mut a: Vec<Vec<BigRational>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(piv, col);
            let p = a[col][col].clone();
            for c in 0..2 * n {
                a[col][c] = &a[col][c] / &p;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let t = &f * &a[col][c];
                    a[r][c] -= t;
                }
            }
        }
        Some(QMatrix::new(a.into_iter().map(|r| r[n..].to_vec()).collect()))
    }

    pub fn pow(&self, e: i64) -> Option<QMatrix> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut r = QMatrix::identity(self.nrows());
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                r = r.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        Some(r)
    }

    /// Characteristic polynomial det(xI − A) by Faddeev–LeVerrier.
    pub fn charpoly(&self) -> QPoly {
        let n = self.nrows();
        let mut c = vec![BigRational::zero(); n + 1];
        c[n] = BigRational::one();
        let mut mk = QMatrix::new(vec![vec![BigRational::zero(); n]; n]);
        for k in 1..=n {
            mk = self.mul(&mk).add_scalar_identity(&c[n - k + 1]);
            let am = self.mul(&mk);
            c[n - k] = -am.trace() / BigRational::from_integer(BigInt::from(k));
        }
        QPoly::new(c)
    }
}

/// Integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZMatrix {
    rows: Vec<Vec<BigInt>>,
}

impl ZMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Self {
        ZMatrix { rows }
    }

    pub fn identity(n: usize) -> Self {
        ZMatrix::new(
            (0..n)
                .map(|i| (0..n).map(|j| BigInt::from((i == j) as i32)).collect())
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn mul(&self, o: &ZMatrix) -> ZMatrix {
        let n = self.n();
        let mut out = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for l in 0..n {
                let a = &self.rows[i][l];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[i][j] += a * &o.rows[l][j];
                }
            }
        }
        ZMatrix::new(out)
    }

    pub fn pow(&self, mut k: u64) -> ZMatrix {
        let mut r = ZMatrix::identity(self.n());
        let mut b = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                r = r.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        r
    }

    pub fn sub_identity(&self) -> ZMatrix {
        let mut m = self.clone();
        for i in 0..m.n() {
            m.rows[i][i] -= 1;
        }
        m
    }

    /// Fraction-free Bareiss determinant.
    pub fn det_bareiss(&self) -> BigInt {
        let n = self.n();
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.rows.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                let Some(piv) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap(k, piv);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.rows
            .iter()
            .flatten()
            .map(|a| a.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinants_agree() {
        let m = QMatrix::from_ints(&[vec![2, -1, 0, 3], vec![1, 4, 2, 0], vec![0, 5, -3, 1], vec![7, 0, 1, 1]]);
        let z = m.to_integer().unwrap();
        assert_eq!(m.det().to_integer(), z.det_bareiss());
        let sing = QMatrix::from_ints(&[vec![1, 2], vec![2, 4]]);
        assert!(sing.det().is_zero());
        assert!(sing.inverse().is_none());
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), QMatrix::identity(4));
    }

    #[test]
    fn charpoly_of_companion() {
        // companion of x^2 - 2x - 1
        let c = QMatrix::from_ints(&[vec![0, 1], vec![1, 2]]);
        assert_eq!(c.charpoly(), QPoly::from_ints(&[-1, -2, 1]));
        assert_eq!(c.rank(), 2);
    }
}
