//! Exact integer linear algebra: Hermite and Smith normal forms, integer
//! kernels and solvers, lattices in canonical form, and invariant factors
//! of finite abelian quotients.
//!
//! Everything here is over `BigInt`; intermediate entries of normal-form
//! reductions can grow past any fixed width, so no machine-integer paths
//! are used.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
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

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Build from rows of machine integers, mostly for tests and fixtures.
    pub fn from_rows_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(*v);
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
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

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape");
        let mut out = IntMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let t = a * b;
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &rhs[(i, j)])
    }

    pub fn sub(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &rhs[(i, j)])
    }

    pub fn neg(&self) -> IntMatrix {
        Self::from_fn(self.rows, self.cols, |i, j| -&self[(i, j)])
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
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

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hcat(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, rhs.rows);
        Self::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                rhs[(i, j - self.cols)].clone()
            }
        })
    }

    /// Vertical concatenation.
    pub fn vcat(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.cols);
        Self::from_fn(self.rows + rhs.rows, self.cols, |i, j| {
            if i < self.rows {
                self[(i, j)].clone()
            } else {
                rhs[(i - self.rows, j)].clone()
            }
        })
    }

    pub fn submatrix_cols(&self, cols: &[usize]) -> IntMatrix {
        Self::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])].clone())
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let swap = (k + 1..n).find(|&i| !a[(i, k)].is_zero());
                match swap {
                    Some(i) => {
                        for j in 0..n {
                            let t = a[(k, j)].clone();
                            a[(k, j)] = a[(i, j)].clone();
                            a[(i, j)] = t;
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = num / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    pub fn rank(&self) -> usize {
        let (h, _) = hnf(self);
        (0..h.rows)
            .filter(|&i| (0..h.cols).any(|j| !h[(i, j)].is_zero()))
            .count()
    }
}

fn is_row_hnf(m: &IntMatrix) -> bool {
    // pivots strictly to the right as rows descend, pivots positive,
    // entries above a pivot reduced into [0, pivot)
    let mut last_pivot: isize = -1;
    let mut seen_zero_row = false;
    for i in 0..m.rows {
        let pivot = (0..m.cols).find(|&j| !m[(i, j)].is_zero());
        match pivot {
            None => seen_zero_row = true,
            Some(j) => {
                if seen_zero_row || (j as isize) <= last_pivot || !m[(i, j)].is_positive() {
                    return false;
                }
                for k in 0..i {
                    if m[(k, j)].is_negative() || m[(k, j)] >= m[(i, j)] {
                        return false;
                    }
                }
                last_pivot = j as isize;
            }
        }
    }
    true
}

/// Row Hermite normal form: returns `(H, U)` with `H = U * M`, `U`
/// unimodular, pivots positive and entries above each pivot reduced modulo
/// it. Matrices already in HNF are fixed points with `U = I`.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    if is_row_hnf(m) {
        return (m.clone(), IntMatrix::identity(m.rows));
    }
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let (rows, cols) = (h.rows, h.cols);
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        // clear the column below pivot_row by gcd steps
        loop {
            // find row with smallest nonzero |entry| in this column
            let mut best: Option<usize> = None;
            for i in pivot_row..rows {
                if !h[(i, col)].is_zero() {
                    best = match best {
                        None => Some(i),
                        Some(b) => {
                            if h[(i, col)].abs() < h[(b, col)].abs() {
                                Some(i)
                            } else {
                                Some(b)
                            }
                        }
                    };
                }
            }
            let b = match best {
                None => break,
                Some(b) => b,
            };
            if b != pivot_row {
                swap_rows(&mut h, pivot_row, b);
                swap_rows(&mut u, pivot_row, b);
            }
            let mut done = true;
            for i in pivot_row + 1..rows {
                if h[(i, col)].is_zero() {
                    continue;
                }
                let q = div_round(&h[(i, col)], &h[(pivot_row, col)]);
                if !q.is_zero() {
                    row_axpy(&mut h, i, pivot_row, &-&q);
                    row_axpy(&mut u, i, pivot_row, &-&q);
                }
                if !h[(i, col)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(pivot_row, col)].is_zero() {
            continue;
        }
        if h[(pivot_row, col)].is_negative() {
            negate_row(&mut h, pivot_row);
            negate_row(&mut u, pivot_row);
        }
        // reduce entries above the pivot into [0, pivot)
        for i in 0..pivot_row {
            let q = h[(i, col)].div_floor(&h[(pivot_row, col)]);
            if !q.is_zero() {
                row_axpy(&mut h, i, pivot_row, &-&q);
                row_axpy(&mut u, i, pivot_row, &-&q);
            }
        }
        pivot_row += 1;
    }
    (h, u)
}

fn swap_rows(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols {
        let t = m[(a, j)].clone();
        m[(a, j)] = m[(b, j)].clone();
        m[(b, j)] = t;
    }
}

fn negate_row(m: &mut IntMatrix, r: usize) {
    for j in 0..m.cols {
        let v = -&m[(r, j)];
        m[(r, j)] = v;
    }
}

/// row[i] += q * row[k]
fn row_axpy(m: &mut IntMatrix, i: usize, k: usize, q: &BigInt) {
    for j in 0..m.cols {
        if m[(k, j)].is_zero() {
            continue;
        }
        let t = &m[(k, j)] * q;
        m[(i, j)] += t;
    }
}

/// Nearest-integer division, keeps HNF pivot growth small.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    let two_r: BigInt = &r * 2;
    if two_r.abs() > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Column Hermite form: `(H, V)` with `H = M * V`, `V` unimodular.
/// Columns of `H` are the canonical generators; zero columns are trailing.
pub fn col_hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (h, u) = hnf(&m.transpose());
    (h.transpose(), u.transpose())
}

/// Smith normal form: `(D, U, V)` with `D = U * M * V` diagonal,
/// `d_1 | d_2 | ...`, diagonal nonnegative, `U`, `V` unimodular.
pub fn snf(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let mut d = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);
    let n = m.rows.min(m.cols);
    let mut t = 0;
    while t < n {
        // move a nonzero entry of minimal magnitude into (t, t)
        let mut best: Option<(usize, usize)> = None;
        for i in t..d.rows {
            for j in t..d.cols {
                if !d[(i, j)].is_zero() {
                    best = match best {
                        None => Some((i, j)),
                        Some((bi, bj)) => {
                            if d[(i, j)].abs() < d[(bi, bj)].abs() {
                                Some((i, j))
                            } else {
                                Some((bi, bj))
                            }
                        }
                    };
                }
            }
        }
        let (bi, bj) = match best {
            None => break,
            Some(p) => p,
        };
        swap_rows(&mut d, t, bi);
        swap_rows(&mut u, t, bi);
        swap_cols(&mut d, t, bj);
        swap_cols(&mut v, t, bj);
        // clear row and column t
        let mut dirty = true;
        while dirty {
            dirty = false;
            for i in t + 1..d.rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = div_round(&d[(i, t)], &d[(t, t)]);
                row_axpy(&mut d, i, t, &-&q);
                row_axpy(&mut u, i, t, &-&q);
                if !d[(i, t)].is_zero() {
                    // remainder is smaller; swap up and restart
                    swap_rows(&mut d, t, i);
                    swap_rows(&mut u, t, i);
                    dirty = true;
                }
            }
            for j in t + 1..d.cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = div_round(&d[(t, j)], &d[(t, t)]);
                col_axpy(&mut d, j, t, &-&q);
                col_axpy(&mut v, j, t, &-&q);
                if !d[(t, j)].is_zero() {
                    swap_cols(&mut d, t, j);
                    swap_cols(&mut v, t, j);
                    dirty = true;
                }
            }
        }
        t += 1;
    }
    // enforce the divisibility chain
    loop {
        let mut fixed = true;
        for i in 0..n.saturating_sub(1) {
            let (a, b) = (d[(i, i)].clone(), d[(i + 1, i + 1)].clone());
            if a.is_zero() && b.is_zero() {
                continue;
            }
            if a.is_zero() && !b.is_zero() {
                // zero must come last
                swap_rows(&mut d, i, i + 1);
                swap_rows(&mut u, i, i + 1);
                swap_cols(&mut d, i, i + 1);
                swap_cols(&mut v, i, i + 1);
                fixed = false;
                continue;
            }
            if !b.is_zero() && (&b % &a).is_zero() {
                continue;
            }
            // add column i+1 to column i, then re-clear the 2x2 block
            col_axpy(&mut d, i, i + 1, &BigInt::one());
            col_axpy(&mut v, i, i + 1, &BigInt::one());
            // gcd-reduce entries (i,i),(i+1,i)
            loop {
                if d[(i + 1, i)].is_zero() {
                    break;
                }
                let q = div_round(&d[(i + 1, i)], &d[(i, i)]);
                row_axpy(&mut d, i + 1, i, &-&q);
                row_axpy(&mut u, i + 1, i, &-&q);
                if !d[(i + 1, i)].is_zero() {
                    swap_rows(&mut d, i, i + 1);
                    swap_rows(&mut u, i, i + 1);
                }
            }
            // clear fill-in at (i, i+1)
            loop {
                if d[(i, i + 1)].is_zero() {
                    break;
                }
                let q = div_round(&d[(i, i + 1)], &d[(i, i)]);
                col_axpy(&mut d, i + 1, i, &-&q);
                col_axpy(&mut v, i + 1, i, &-&q);
                if !d[(i, i + 1)].is_zero() {
                    swap_cols(&mut d, i, i + 1);
                    swap_cols(&mut v, i, i + 1);
                }
            }
            fixed = false;
        }
        if fixed {
            break;
        }
    }
    for i in 0..n {
        if d[(i, i)].is_negative() {
            negate_row(&mut d, i);
            negate_row(&mut u, i);
        }
    }
    (d, u, v)
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows {
        let t = m[(i, a)].clone();
        m[(i, a)] = m[(i, b)].clone();
        m[(i, b)] = t;
    }
}

/// col[j] += q * col[k]
fn col_axpy(m: &mut IntMatrix, j: usize, k: usize, q: &BigInt) {
    for i in 0..m.rows {
        if m[(i, k)].is_zero() {
            continue;
        }
        let t = &m[(i, k)] * q;
        m[(i, j)] += t;
    }
}

/// Basis of the integer kernel of `m`, as matrix columns. The kernel of an
/// integer matrix is saturated by construction.
pub fn kernel(m: &IntMatrix) -> IntMatrix {
    let (h, v) = col_hnf(m);
    let zero_cols: Vec<usize> = (0..h.cols)
        .filter(|&j| (0..h.rows).all(|i| h[(i, j)].is_zero()))
        .collect();
    let k = v.submatrix_cols(&zero_cols);
    let (kc, _) = col_hnf(&k);
    strip_zero_cols(&kc)
}

fn strip_zero_cols(m: &IntMatrix) -> IntMatrix {
    let keep: Vec<usize> = (0..m.cols)
        .filter(|&j| (0..m.rows).any(|i| !m[(i, j)].is_zero()))
        .collect();
    m.submatrix_cols(&keep)
}

/// Solve `A * X = B` exactly over the integers; `None` if no integral
/// solution exists.
pub fn solve_exact(a: &IntMatrix, b: &IntMatrix) -> Option<IntMatrix> {
    assert_eq!(a.rows, b.rows);
    let (h, u) = hnf(a);
    let ub = u.mul(b);
    // back substitution on the row-echelon H
    let mut x = IntMatrix::zero(a.cols, b.cols);
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for i in 0..h.rows {
        if let Some(j) = (0..h.cols).find(|&j| !h[(i, j)].is_zero()) {
            pivots.push((i, j));
        }
    }
    for col in 0..b.cols {
        let mut rhs: Vec<BigInt> = (0..h.rows).map(|i| ub[(i, col)].clone()).collect();
        for &(i, j) in pivots.iter().rev() {
            let (q, r) = rhs[i].div_rem(&h[(i, j)]);
            if !r.is_zero() {
                return None;
            }
            x[(j, col)] = q.clone();
            for i2 in 0..i {
                let t = &h[(i2, j)] * &q;
                rhs[i2] -= t;
            }
        }
        // rows without pivots must have zero rhs
        let pivot_rows: Vec<usize> = pivots.iter().map(|&(i, _)| i).collect();
        for i in 0..h.rows {
            if !pivot_rows.contains(&i) && !rhs[i].is_zero() {
                return None;
            }
        }
    }
    Some(x)
}

/// A sublattice of `Z^ambient`, stored by a canonical column-Hermite basis.
/// Equality of lattices is equality of canonical bases.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    ambient: usize,
    /// ambient x rank matrix, canonical column Hermite form, no zero columns.
    basis: IntMatrix,
}

impl std::fmt::Debug for Lattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Lattice(rank {} in Z^{}) {:?}", self.rank(), self.ambient, self.basis)
    }
}

impl Lattice {
    /// The zero lattice.
    pub fn zero(ambient: usize) -> Self {
        Lattice { ambient, basis: IntMatrix::zero(ambient, 0) }
    }

    /// All of `Z^ambient`.
    pub fn full(ambient: usize) -> Self {
        Lattice { ambient, basis: IntMatrix::identity(ambient) }
    }

    /// Lattice generated by the columns of `gens`.
    pub fn from_generators(ambient: usize, gens: &IntMatrix) -> Self {
        assert_eq!(gens.rows, ambient, "generator ambient rank");
        let (h, _) = col_hnf(gens);
        Lattice { ambient, basis: strip_zero_cols(&h) }
    }

    pub fn from_generator_vecs(ambient: usize, gens: &[Vec<BigInt>]) -> Self {
        let m = IntMatrix::from_fn(ambient, gens.len(), |i, j| gens[j][i].clone());
        Self::from_generators(ambient, &m)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.cols
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<BigInt>> {
        (0..self.basis.cols).map(|j| self.basis.col(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.ambient && self.basis.is_identity()
    }

    /// n * Z^ambient.
    pub fn scaled_full(ambient: usize, n: &BigInt) -> Self {
        Self::from_generators(ambient, &IntMatrix::identity(ambient).scale(n))
    }

    pub fn scale(&self, n: &BigInt) -> Self {
        Self::from_generators(self.ambient, &self.basis.scale(n))
    }

    pub fn sum(&self, other: &Lattice) -> Result<Lattice> {
        self.check_ambient(other)?;
        Ok(Self::from_generators(self.ambient, &self.basis.hcat(&other.basis)))
    }

    /// Exact intersection, via the kernel of the stacked basis matrix.
    pub fn intersect(&self, other: &Lattice) -> Result<Lattice> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Lattice::zero(self.ambient));
        }
        let stacked = self.basis.hcat(&other.basis);
        let ker = kernel(&stacked);
        // first block of each kernel vector gives coefficients in self
        let coeffs = IntMatrix::from_fn(self.rank(), ker.cols, |i, j| ker[(i, j)].clone());
        let gens = self.basis.mul(&coeffs);
        Ok(Self::from_generators(self.ambient, &gens))
    }

    /// Smallest saturated (primitive) overlattice: `(L ⊗ Q) ∩ Z^ambient`.
    pub fn saturate(&self) -> Lattice {
        if self.is_zero() {
            return self.clone();
        }
        let ortho = kernel(&self.basis.transpose());
        let sat = kernel(&ortho.transpose());
        Lattice { ambient: self.ambient, basis: sat }
    }

    pub fn is_saturated(&self) -> bool {
        *self == self.saturate()
    }

    /// `{x : M x ∈ self}` as a sublattice of the domain `Z^{m.cols}`.
    pub fn preimage(&self, m: &IntMatrix) -> Result<Lattice> {
        if m.rows != self.ambient {
            return Err(Error::DimensionMismatch(format!(
                "preimage: map has codomain rank {}, lattice ambient {}",
                m.rows, self.ambient
            )));
        }
        // kernel of [M | -B]: pairs (x, y) with Mx = By
        if self.is_zero() {
            return Ok(Lattice { ambient: m.cols, basis: kernel(m) });
        }
        let stacked = m.hcat(&self.basis.neg());
        let ker = kernel(&stacked);
        let xs = IntMatrix::from_fn(m.cols, ker.cols, |i, j| ker[(i, j)].clone());
        Ok(Lattice::from_generators(m.cols, &xs))
    }

    /// Image lattice `M * self` inside `Z^{m.rows}`.
    pub fn image(&self, m: &IntMatrix) -> Result<Lattice> {
        if m.cols != self.ambient {
            return Err(Error::DimensionMismatch(format!(
                "image: map has domain rank {}, lattice ambient {}",
                m.cols, self.ambient
            )));
        }
        Ok(Lattice::from_generators(m.rows, &m.mul(&self.basis)))
    }

    pub fn contains(&self, other: &Lattice) -> Result<bool> {
        self.check_ambient(other)?;
        if other.is_zero() {
            return Ok(true);
        }
        if other.rank() > self.rank() {
            return Ok(false);
        }
        Ok(solve_exact(&self.basis, &other.basis).is_some())
    }

    pub fn contains_vec(&self, v: &[BigInt]) -> bool {
        let b = IntMatrix::from_fn(self.ambient, 1, |i, _| v[i].clone());
        solve_exact(&self.basis, &b).is_some()
    }

    fn check_ambient(&self, other: &Lattice) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "ambient ranks {} vs {}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }
}

/// A finitely generated abelian group in invariant-factor form:
/// `Z/d_1 ⊕ ... ⊕ Z/d_k ⊕ Z^free` with `d_1 | d_2 | ... | d_k`, all `d_i ≥ 2`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteAbelianGroup {
    pub invariant_factors: Vec<BigInt>,
    pub free_rank: usize,
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        FiniteAbelianGroup { invariant_factors: vec![], free_rank: 0 }
    }

    pub fn from_factors_i64(factors: &[i64], free_rank: usize) -> Self {
        FiniteAbelianGroup {
            invariant_factors: factors.iter().map(|&d| BigInt::from(d)).collect(),
            free_rank,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty() && self.free_rank == 0
    }

    /// Order of the torsion part; `None` when there is free rank.
    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank > 0 {
            return None;
        }
        Some(self.torsion_order())
    }

    pub fn torsion_order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    /// Exponent of the torsion part (1 when torsion-free).
    pub fn exponent(&self) -> BigInt {
        self.invariant_factors.last().cloned().unwrap_or_else(BigInt::one)
    }

    pub fn torsion(&self) -> FiniteAbelianGroup {
        FiniteAbelianGroup { invariant_factors: self.invariant_factors.clone(), free_rank: 0 }
    }
}

impl std::fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> =
            self.invariant_factors.iter().map(|d| format!("Z/{}", d)).collect();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.free_rank)
            });
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Invariant factors of `sup / sub` together with the free rank
/// `rank(sup) - rank(sub)`. Errors if `sub ⊄ sup`.
pub fn quotient_invariants(sub: &Lattice, sup: &Lattice) -> Result<FiniteAbelianGroup> {
    if sub.ambient() != sup.ambient() {
        return Err(Error::DimensionMismatch(format!(
            "ambient ranks {} vs {}",
            sub.ambient(),
            sup.ambient()
        )));
    }
    if sub.is_zero() {
        return Ok(FiniteAbelianGroup { invariant_factors: vec![], free_rank: sup.rank() });
    }
    let coords = solve_exact(sup.basis(), sub.basis())
        .ok_or_else(|| Error::ContainmentViolated("quotient_invariants".into()))?;
    let (d, _, _) = snf(&coords);
    let mut factors = Vec::new();
    let n = coords.rows.min(coords.cols);
    let mut rank_sub = 0;
    for i in 0..n {
        if !d[(i, i)].is_zero() {
            rank_sub += 1;
            if !d[(i, i)].is_one() {
                factors.push(d[(i, i)].clone());
            }
        }
    }
    if rank_sub != sub.rank() {
        // dependent coordinates cannot happen for a genuine sublattice
        return Err(Error::ContainmentViolated("degenerate sublattice coordinates".into()));
    }
    Ok(FiniteAbelianGroup { invariant_factors: factors, free_rank: sup.rank() - sub.rank() })
}

/// Invariant factors of `Z^ambient / L`.
pub fn ambient_quotient(l: &Lattice) -> FiniteAbelianGroup {
    quotient_invariants(l, &Lattice::full(l.ambient())).expect("full lattice contains everything")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn hnf_worked_example() {
        // by-hand row reduction of [[2,4],[6,8]]: R2 -= 3 R1 gives (0,-4),
        // negate, then reduce 4 mod 4 above the pivot
        let m = IntMatrix::from_rows_i64(&[&[2, 4], &[6, 8]]);
        let (h, u) = hnf(&m);
        assert_eq!(h, IntMatrix::from_rows_i64(&[&[2, 0], &[0, 4]]));
        assert_eq!(u.mul(&m), h);
        assert_eq!(u.det().abs(), big(1));
    }

    #[test]
    fn hnf_fixed_points() {
        let id = IntMatrix::identity(3);
        let (h, u) = hnf(&id);
        assert_eq!(h, id);
        assert!(u.is_identity());

        let z = IntMatrix::zero(2, 3);
        let (h, _) = hnf(&z);
        assert!(h.is_zero());

        let m = IntMatrix::from_rows_i64(&[&[2, 1], &[0, 3]]);
        let (h, u) = hnf(&m);
        assert_eq!(h, m);
        assert!(u.is_identity());
    }

    #[test]
    fn snf_worked_example() {
        // gcd of entries is 2 and |det| = 8, so the elementary divisors are 2, 4
        let m = IntMatrix::from_rows_i64(&[&[2, 4], &[6, 8]]);
        let (d, u, v) = snf(&m);
        assert_eq!(d, IntMatrix::from_rows_i64(&[&[2, 0], &[0, 4]]));
        assert_eq!(u.mul(&m).mul(&v), d);
        assert_eq!(u.det().abs(), big(1));
        assert_eq!(v.det().abs(), big(1));
    }

    #[test]
    fn snf_trivial_cases() {
        let m = IntMatrix::from_rows_i64(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 6]]);
        let (d, _, _) = snf(&m);
        assert_eq!(d, m);

        let z = IntMatrix::from_rows_i64(&[&[0]]);
        let (d, _, _) = snf(&z);
        assert_eq!(d, z);
    }

    #[test]
    fn hnf_snf_random_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let rows = rng.gen_range(1..=6);
            let cols = rng.gen_range(1..=6);
            let m = IntMatrix::from_fn(rows, cols, |_, _| big(rng.gen_range(-9..=9)));
            let (h, u) = hnf(&m);
            assert_eq!(u.mul(&m), h, "H = U*M");
            assert_eq!(u.det().abs(), big(1), "U unimodular");
            let (h2, u2) = hnf(&h);
            assert_eq!(h2, h, "hnf idempotent");
            assert!(u2.is_identity());

            let (d, su, sv) = snf(&m);
            assert_eq!(su.mul(&m).mul(&sv), d, "D = U*M*V");
            assert_eq!(su.det().abs(), big(1));
            assert_eq!(sv.det().abs(), big(1));
            let n = rows.min(cols);
            for i in 0..n.saturating_sub(1) {
                let (a, b) = (&d[(i, i)], &d[(i + 1, i + 1)]);
                if !a.is_zero() {
                    assert!(b.is_zero() || (b % a).is_zero(), "divisibility chain");
                } else {
                    assert!(b.is_zero(), "zeros trail");
                }
            }
            let (d2, _, _) = snf(&d);
            assert_eq!(d2, d, "snf idempotent");
        }
    }

    #[test]
    fn kernel_of_map() {
        let m = IntMatrix::from_rows_i64(&[&[1, 2, 3]]);
        let k = kernel(&m);
        assert_eq!(k.cols, 2);
        assert!(m.mul(&k).is_zero());
        // kernel is saturated
        let kl = Lattice { ambient: 3, basis: k };
        assert!(kl.is_saturated());
    }

    #[test]
    fn solve_exact_works() {
        let a = IntMatrix::from_rows_i64(&[&[2, 0], &[0, 3]]);
        let b = IntMatrix::from_rows_i64(&[&[4], &[9]]);
        let x = solve_exact(&a, &b).unwrap();
        assert_eq!(a.mul(&x), b);
        let b2 = IntMatrix::from_rows_i64(&[&[1], &[0]]);
        assert!(solve_exact(&a, &b2).is_none());
    }

    #[test]
    fn lattice_intersect_brute_force() {
        // x even and x + y even forces both even
        let l1 = Lattice::from_generator_vecs(2, &[vec![big(2), big(0)], vec![big(0), big(1)]]);
        let l2 = Lattice::from_generator_vecs(2, &[vec![big(1), big(1)], vec![big(-1), big(1)]]);
        let meet = l1.intersect(&l2).unwrap();
        let expected = Lattice::scaled_full(2, &big(2));
        assert_eq!(meet, expected);
        // brute-force oracle over residues mod 2
        for x in -2i64..=2 {
            for y in -2i64..=2 {
                let v = vec![big(x), big(y)];
                let in_both = l1.contains_vec(&v) && l2.contains_vec(&v);
                assert_eq!(in_both, meet.contains_vec(&v), "({x},{y})");
            }
        }
    }

    #[test]
    fn saturate_primitive_vector() {
        let l = Lattice::from_generator_vecs(2, &[vec![big(2), big(4)]]);
        let s = l.saturate();
        assert_eq!(s, Lattice::from_generator_vecs(2, &[vec![big(1), big(2)]]));
        assert_eq!(s.saturate(), s);
        // index of L in its saturation is finite
        let q = quotient_invariants(&l, &s).unwrap();
        assert_eq!(q.free_rank, 0);
        assert_eq!(q.torsion_order(), big(2));
    }

    #[test]
    fn lattice_sum_idempotent_and_absorption() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let r = rng.gen_range(1..=4);
            let g1 = IntMatrix::from_fn(r, rng.gen_range(1..=4), |_, _| big(rng.gen_range(-5..=5)));
            let g2 = IntMatrix::from_fn(r, rng.gen_range(1..=4), |_, _| big(rng.gen_range(-5..=5)));
            let l = Lattice::from_generators(r, &g1);
            let m = Lattice::from_generators(r, &g2);
            assert_eq!(l.sum(&l).unwrap(), l, "sum idempotent");
            let absorb = l.sum(&l.intersect(&m).unwrap()).unwrap();
            assert_eq!(absorb, l, "absorption law");
        }
    }

    #[test]
    fn preimage_example() {
        // {x : 2x ∈ 3Z} = 3Z since gcd(2,3)=1... check against definition
        let m = IntMatrix::from_rows_i64(&[&[2]]);
        let l = Lattice::from_generator_vecs(1, &[vec![big(3)]]);
        let pre = l.preimage(&m).unwrap();
        assert_eq!(pre, Lattice::from_generator_vecs(1, &[vec![big(3)]]));
        // kernel folds in: {x: 0*x ∈ 3Z} = Z
        let z = IntMatrix::from_rows_i64(&[&[0]]);
        assert_eq!(l.preimage(&z).unwrap(), Lattice::full(1));
    }

    #[test]
    fn quotient_invariants_examples() {
        // 2Z^2 in Z^2
        let q = ambient_quotient(&Lattice::scaled_full(2, &big(2)));
        assert_eq!(q, FiniteAbelianGroup::from_factors_i64(&[2, 2], 0));

        // checkerboard lattice in Z^2 has index 2
        let l = Lattice::from_generator_vecs(2, &[vec![big(1), big(1)], vec![big(1), big(-1)]]);
        let q = ambient_quotient(&l);
        assert_eq!(q, FiniteAbelianGroup::from_factors_i64(&[2], 0));

        // rank drop gives free rank
        let l = Lattice::from_generator_vecs(2, &[vec![big(1), big(0)]]);
        let q = ambient_quotient(&l);
        assert_eq!(q, FiniteAbelianGroup::from_factors_i64(&[], 1));
    }

    #[test]
    fn quotient_invariants_scaled_grid() {
        for n in 1i64..=12 {
            for r in 1usize..=4 {
                let q = ambient_quotient(&Lattice::scaled_full(r, &big(n)));
                let expect = if n == 1 {
                    FiniteAbelianGroup::trivial()
                } else {
                    FiniteAbelianGroup {
                        invariant_factors: vec![big(n); r],
                        free_rank: 0,
                    }
                };
                assert_eq!(q, expect, "n={n} r={r}");
            }
        }
    }

    #[test]
    fn quotient_containment_violation() {
        let l = Lattice::from_generator_vecs(1, &[vec![big(2)]]);
        let m = Lattice::from_generator_vecs(1, &[vec![big(4)]]);
        assert!(quotient_invariants(&l, &m).is_err());
        assert!(quotient_invariants(&m, &l).is_ok());
    }

    #[test]
    fn det_and_rank() {
        let m = IntMatrix::from_rows_i64(&[&[2, 4], &[6, 8]]);
        assert_eq!(m.det(), big(-8));
        assert_eq!(m.rank(), 2);
        let s = IntMatrix::from_rows_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(s.det(), big(0));
        assert_eq!(s.rank(), 1);
    }
}
