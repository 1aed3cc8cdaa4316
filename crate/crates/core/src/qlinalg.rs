//! Dense exact rational matrices: just enough row reduction, nullspaces
//! and solving for the commutant and idempotent computations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::linalg::{IntMatrix, Lattice};

#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigRational>,
}

impl std::fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }
}

impl QMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        Self::from_fn(m.rows, m.cols, |i, j| BigRational::from(m[(i, j)].clone()))
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let mut m = Self::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = QMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    if rhs[(k, j)].is_zero() {
                        continue;
                    }
                    let t = &self[(i, k)] * &rhs[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &QMatrix) -> QMatrix {
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &rhs[(i, j)])
    }

    pub fn sub(&self, rhs: &QMatrix) -> QMatrix {
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &rhs[(i, j)])
    }

    pub fn scale(&self, c: &BigRational) -> QMatrix {
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] * c)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self[(i, j)].is_one()
                    } else {
                        self[(i, j)].is_zero()
                    }
                })
            })
    }

    /// Reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let pivot = (row..self.rows).find(|&i| !self[(i, col)].is_zero());
            let p = match pivot {
                None => continue,
                Some(p) => p,
            };
            if p != row {
                for j in 0..self.cols {
                    let t = self[(p, j)].clone();
                    self[(p, j)] = self[(row, j)].clone();
                    self[(row, j)] = t;
                }
            }
            let inv = self[(row, col)].recip();
            for j in 0..self.cols {
                let t = &self[(row, j)] * &inv;
                self[(row, j)] = t;
            }
            for i in 0..self.rows {
                if i != row && !self[(i, col)].is_zero() {
                    let c = self[(i, col)].clone();
                    for j in 0..self.cols {
                        let t = &self[(row, j)] * &c;
                        self[(i, j)] -= t;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right nullspace, as columns.
    pub fn nullspace(&self) -> QMatrix {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = QMatrix::zero(self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            basis[(fc, k)] = BigRational::one();
            for (ri, &pc) in pivots.iter().enumerate() {
                basis[(pc, k)] = -m[(ri, fc)].clone();
            }
        }
        basis
    }

    /// Solve `self * x = b` for a single rational column; `None` if inconsistent.
    pub fn solve(&self, b: &[BigRational]) -> Option<Vec<BigRational>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = QMatrix::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![BigRational::zero(); self.cols];
        for (ri, &pc) in pivots.iter().enumerate() {
            x[pc] = aug[(ri, self.cols)].clone();
        }
        Some(x)
    }

    /// Column span as a saturated integer lattice (clear denominators
    /// columnwise, then saturate).
    pub fn column_span_saturated(&self) -> Lattice {
        let mut cols: Vec<Vec<BigInt>> = Vec::new();
        for j in 0..self.cols {
            let mut denom = BigInt::one();
            for i in 0..self.rows {
                denom = num_integer::lcm(denom, self[(i, j)].denom().clone());
            }
            let col: Vec<BigInt> = (0..self.rows)
                .map(|i| {
                    let v = &self[(i, j)] * BigRational::from(denom.clone());
                    v.to_integer()
                })
                .collect();
            cols.push(col);
        }
        Lattice::from_generator_vecs(self.rows, &cols).saturate()
    }

    pub fn trace(&self) -> BigRational {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self[(i, i)].clone()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    #[test]
    fn rref_and_nullspace() {
        let m = QMatrix::from_fn(2, 3, |i, j| q([[1, 2, 3], [2, 4, 6]][i][j]));
        assert_eq!(m.rank(), 1);
        let ns = m.nullspace();
        assert_eq!(ns.cols, 2);
        assert!(m.mul(&ns).is_zero());
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = QMatrix::from_fn(2, 2, |i, j| q([[2, 0], [0, 4]][i][j]));
        let x = m.solve(&[q(1), q(2)]).unwrap();
        assert_eq!(x, vec![BigRational::new(BigInt::from(1), BigInt::from(2)), BigRational::new(BigInt::from(1), BigInt::from(2))]);
        let singular = QMatrix::from_fn(2, 2, |i, j| q([[1, 1], [1, 1]][i][j]));
        assert!(singular.solve(&[q(0), q(1)]).is_none());
    }

    #[test]
    fn saturated_span() {
        let m = QMatrix::from_fn(2, 1, |i, _| {
            [BigRational::new(BigInt::from(1), BigInt::from(2)), q(1)][i].clone()
        });
        let l = m.column_span_saturated();
        assert_eq!(
            l,
            Lattice::from_generator_vecs(2, &[vec![BigInt::from(1), BigInt::from(2)]])
        );
    }
}
