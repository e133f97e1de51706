//! Exact integer and rational matrix algebra.
//!
//! Everything here is arbitrary precision. Matrices are dense and row-major;
//! the Hermite normal form uses left (row) operations, so for a full column
//! rank `m x n` matrix `A` we produce a unimodular `U` with `U * A = [H; 0]`
//! where `H` is upper triangular with a positive diagonal and every entry
//! above a pivot lies in `[0, pivot)`.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix has no nonzero entry")]
    ZeroMatrix,
    #[error("matrix has column rank {rank} < {cols}")]
    RankDeficient { rank: usize, cols: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Dense row-major matrix over any ring-like element type.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<BigInt>;
pub type RatMatrix = Matrix<Rational>;

impl<T> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        assert_eq!(data.len(), rows * cols, "entry count does not match {rows}x{cols}");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_vec(r, c, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn map<U, F: FnMut(&T) -> U>(&self, f: F) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn to_rows(&self) -> Vec<Vec<T>>
    where
        T: Clone,
    {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<T>
    where
        T: Clone,
    {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// The submatrix made of rows `start..end`.
    pub fn row_block(&self, start: usize, end: usize) -> Self
    where
        T: Clone,
    {
        Self::from_vec(end - start, self.cols, self.data[start * self.cols..end * self.cols].to_vec())
    }
}

impl<T: Zero + One + Clone> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_vec(rows, cols, vec![T::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn vstack(blocks: &[Self]) -> Self {
        let cols = blocks[0].cols;
        assert!(blocks.iter().all(|b| b.cols == cols));
        let rows = blocks.iter().map(|b| b.rows).sum();
        Self::from_vec(rows, cols, blocks.iter().flat_map(|b| b.data.iter().cloned()).collect())
    }
}

impl<T> Matrix<T>
where
    T: Zero + Clone,
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T>,
{
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = T::zero();
                for k in 0..self.cols {
                    acc = acc + &self[(r, k)] * &other[(k, c)];
                }
                data.push(acc);
            }
        }
        Self::from_vec(self.rows, other.cols, data)
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).fold(T::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x * s)
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[r * self.cols + c])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{} {}", self.rows, self.cols, self)
    }
}

impl IntMatrix {
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn to_rational(&self) -> RatMatrix {
        self.map(|x| Rational::from_integer(x.clone()))
    }
}

impl RatMatrix {
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        IntMatrix::from_i64_rows(rows).to_rational()
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    /// Integer entries, if every entry is an integer.
    pub fn to_integer(&self) -> Option<IntMatrix> {
        self.is_integral().then(|| self.map(|x| x.to_integer()))
    }
}

/// Split `m` as `content * primitive` with `content > 0` and the primitive part
/// an integer matrix whose entries have gcd 1.
pub fn content_primitive(m: &RatMatrix) -> Result<(Rational, IntMatrix), LinalgError> {
    let mut num_gcd = BigInt::zero();
    let mut den_lcm = BigInt::one();
    for x in m.entries().iter().filter(|x| !x.is_zero()) {
        num_gcd = num_gcd.gcd(x.numer());
        den_lcm = den_lcm.lcm(x.denom());
    }
    if num_gcd.is_zero() {
        return Err(LinalgError::ZeroMatrix);
    }
    let content = Rational::new(num_gcd, den_lcm);
    let primitive = m.map(|x| {
        let q = x / &content;
        debug_assert!(q.is_integer());
        q.to_integer()
    });
    Ok((content, primitive))
}

fn sub_row_multiple(m: &mut IntMatrix, target: usize, source: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for c in 0..m.cols() {
        let delta = q * &m[(source, c)];
        m[(target, c)] -= delta;
    }
}

fn negate_row(m: &mut IntMatrix, r: usize) {
    for c in 0..m.cols() {
        let v = -std::mem::take(&mut m[(r, c)]);
        m[(r, c)] = v;
    }
}

/// Row-style Hermite normal form together with the transform.
///
/// Returns `(h, u)` where `u` is unimodular (`m x m`) and `u * a == h`; the
/// first `n` rows of `h` are the Hermite normal form and the rest are zero.
pub fn hnf_with_transform(a: &IntMatrix) -> Result<(IntMatrix, IntMatrix), LinalgError> {
    let (m, n) = (a.rows(), a.cols());
    if m < n {
        return Err(LinalgError::RankDeficient { rank: m, cols: n });
    }
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    for col in 0..n {
        let pivot = col;
        loop {
            // smallest nonzero entry at or below the pivot row
            let best = (pivot..m)
                .filter(|&r| !h[(r, col)].is_zero())
                .min_by(|&x, &y| h[(x, col)].abs().cmp(&h[(y, col)].abs()));
            let Some(best) = best else {
                return Err(LinalgError::RankDeficient { rank: col, cols: n });
            };
            h.swap_rows(pivot, best);
            u.swap_rows(pivot, best);
            let mut done = true;
            for r in pivot + 1..m {
                if h[(r, col)].is_zero() {
                    continue;
                }
                let q = h[(r, col)].div_floor(&h[(pivot, col)]);
                sub_row_multiple(&mut h, r, pivot, &q);
                sub_row_multiple(&mut u, r, pivot, &q);
                if !h[(r, col)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(pivot, col)].is_negative() {
            negate_row(&mut h, pivot);
            negate_row(&mut u, pivot);
        }
        for r in 0..pivot {
            let q = h[(r, col)].div_floor(&h[(pivot, col)]);
            sub_row_multiple(&mut h, r, pivot, &q);
            sub_row_multiple(&mut u, r, pivot, &q);
        }
    }
    Ok((h, u))
}

/// Hermite normal form (`n x n`) of a full column rank integer matrix.
pub fn hnf(a: &IntMatrix) -> Result<IntMatrix, LinalgError> {
    let (h, _) = hnf_with_transform(a)?;
    Ok(h.row_block(0, a.cols()))
}

/// Reduced matrix of a rational matrix: content times the HNF of the primitive part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HnfResult {
    pub hnf: RatMatrix,
    pub content: Rational,
}

pub fn reduce_action_matrix(m: &RatMatrix) -> Result<HnfResult, LinalgError> {
    let (content, primitive) = content_primitive(m)?;
    let h = hnf(&primitive)?;
    Ok(HnfResult { hnf: h.to_rational().scale(&content), content })
}

/// Fraction-free (Bareiss) determinant of a square integer matrix.
pub fn det_int(m: &IntMatrix) -> Result<BigInt, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&r| !a[(r, k)].is_zero()) {
                Some(r) => {
                    a.swap_rows(k, r);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = v;
            }
        }
        prev = a[(k, k)].clone();
    }
    Ok(sign * &a[(n - 1, n - 1)])
}

/// Exact determinant of a square rational matrix.
///
/// Each row is scaled to integers by the lcm of its denominators, the integer
/// determinant is taken by Bareiss elimination and the scaling is divided out.
pub fn det(m: &RatMatrix) -> Result<Rational, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let mut scale = BigInt::one();
    let mut int_rows = Vec::with_capacity(n * n);
    for r in 0..n {
        let l = m.row(r).iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        for x in m.row(r) {
            int_rows.push((x * Rational::from_integer(l.clone())).to_integer());
        }
        scale *= l;
    }
    let d = det_int(&IntMatrix::from_vec(n, n, int_rows))?;
    Ok(Rational::new(d, scale))
}

/// Inverse of a square rational matrix by Gauss-Jordan elimination.
pub fn inverse(m: &RatMatrix) -> Result<RatMatrix, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut inv = RatMatrix::identity(n);
    for col in 0..n {
        let p = (col..n).find(|&r| !a[(r, col)].is_zero()).ok_or(LinalgError::Singular)?;
        a.swap_rows(col, p);
        inv.swap_rows(col, p);
        let pivot = a[(col, col)].clone();
        for c in 0..n {
            a[(col, c)] = &a[(col, c)] / &pivot;
            inv[(col, c)] = &inv[(col, c)] / &pivot;
        }
        for r in 0..n {
            if r == col || a[(r, col)].is_zero() {
                continue;
            }
            let f = a[(r, col)].clone();
            for c in 0..n {
                let da = &f * &a[(col, c)];
                a[(r, c)] -= da;
                let di = &f * &inv[(col, c)];
                inv[(r, c)] -= di;
            }
        }
    }
    Ok(inv)
}

/// Whether an integer matrix is square with determinant `±1`.
pub fn is_unimodular(m: &IntMatrix) -> bool {
    m.is_square() && det_int(m).map(|d| d.abs().is_one()).unwrap_or(false)
}
