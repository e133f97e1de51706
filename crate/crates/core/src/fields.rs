//! Quartic Galois fields: validation, case/type classification and integral
//! bases.
//!
//! Cyclic fields are `Q(sqrt(a (d + b sqrt d)))` with `d = b^2 + c^2`, and the
//! reference basis is `{1, sqrt d, z, w}` where `z = sqrt(a (d + b sqrt d))`
//! and `w = sqrt(a (d - b sqrt d))`. Biquadratic fields are `Q(sqrt m, sqrt n)`
//! with reference basis `{1, sqrt m, sqrt n, sqrt k}`, `k = m n / d^2` and
//! `d = gcd(m, n)`.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{det, ratio, rat, RatMatrix, Rational};

/// Largest magnitude accepted by the trial-division squarefree test.
pub const SQUAREFREE_LIMIT: i64 = 1_000_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[serde(tag = "error", content = "value")]
pub enum FieldError {
    #[error("{0} is not squarefree")]
    NotSquarefree(i64),
    #[error("a = {0} and d = {1} are not coprime")]
    NotCoprime(i64, i64),
    #[error("{0} must be positive, got {1}")]
    NonPositive(String, i64),
    #[error("a = {0} must be odd")]
    EvenA(i64),
    #[error("|{0}| exceeds the squarefree test limit")]
    TooLarge(i64),
    #[error("radicand {0} must not be 0 or 1")]
    TrivialRadicand(i64),
    #[error("m = {0} and n = {1} generate a degenerate product")]
    DegenerateProduct(i64, i64),
}

/// Whether `n` has no square prime factor.
///
/// Trial division removes every prime up to the cube root; what is left has
/// at most two prime factors, so it is squarefree unless it is a perfect square.
pub fn is_squarefree(n: i64) -> Result<bool, FieldError> {
    if n == 0 {
        return Ok(false);
    }
    let mut m = n.unsigned_abs();
    if m > SQUAREFREE_LIMIT as u64 {
        return Err(FieldError::TooLarge(n));
    }
    let limit = m.cbrt();
    let mut p = 2u64;
    while p <= limit {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return Ok(false);
            }
        }
        p += 1;
    }
    Ok(m == 1 || m.sqrt() * m.sqrt() != m)
}

fn check_size(n: i64) -> Result<(), FieldError> {
    if n.unsigned_abs() > SQUAREFREE_LIMIT as u64 {
        Err(FieldError::TooLarge(n))
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclicQuarticParams {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CyclicCase {
    Case1,
    Case2,
    Case3,
    Case4,
    Case5,
}

impl CyclicCase {
    pub fn number(self) -> u8 {
        match self {
            CyclicCase::Case1 => 1,
            CyclicCase::Case2 => 2,
            CyclicCase::Case3 => 3,
            CyclicCase::Case4 => 4,
            CyclicCase::Case5 => 5,
        }
    }
}

pub fn validate_cyclic(a: i64, b: i64, c: i64) -> Result<CyclicQuarticParams, FieldError> {
    if b <= 0 {
        return Err(FieldError::NonPositive("b".into(), b));
    }
    if c <= 0 {
        return Err(FieldError::NonPositive("c".into(), c));
    }
    let d = b
        .checked_mul(b)
        .and_then(|bb| c.checked_mul(c).and_then(|cc| bb.checked_add(cc)))
        .ok_or(FieldError::TooLarge(b.max(c)))?;
    check_size(a)?;
    check_size(d)?;
    if !is_squarefree(d)? {
        return Err(FieldError::NotSquarefree(d));
    }
    if a % 2 == 0 {
        return Err(FieldError::EvenA(a));
    }
    if !is_squarefree(a)? {
        return Err(FieldError::NotSquarefree(a));
    }
    if a.gcd(&d) != 1 {
        return Err(FieldError::NotCoprime(a, d));
    }
    Ok(CyclicQuarticParams { a, b, c, d })
}

pub fn classify_cyclic_case(p: &CyclicQuarticParams) -> CyclicCase {
    if p.d % 2 == 0 {
        CyclicCase::Case1
    } else if p.b % 2 != 0 {
        CyclicCase::Case2
    } else if (p.a + p.b).rem_euclid(4) == 3 {
        CyclicCase::Case3
    } else if p.a.rem_euclid(4) == p.c.rem_euclid(4) {
        CyclicCase::Case4
    } else {
        debug_assert_eq!(p.a.rem_euclid(4), (-p.c).rem_euclid(4));
        CyclicCase::Case5
    }
}

/// Coordinates of an integral basis `gamma_1..gamma_4` in the reference basis;
/// column `j` of the matrix is `gamma_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisDescriptor {
    matrix: RatMatrix,
}

impl BasisDescriptor {
    pub fn from_columns(gammas: [[Rational; 4]; 4]) -> Self {
        let mut m = RatMatrix::zeros(4, 4);
        for (j, g) in gammas.iter().enumerate() {
            for (i, x) in g.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        BasisDescriptor { matrix: m }
    }

    pub fn from_matrix(matrix: RatMatrix) -> Self {
        assert!(matrix.rows() == 4 && matrix.cols() == 4);
        BasisDescriptor { matrix }
    }

    pub fn identity() -> Self {
        BasisDescriptor { matrix: RatMatrix::identity(4) }
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn gamma(&self, j: usize) -> Vec<Rational> {
        self.matrix.column(j)
    }

    pub fn det(&self) -> Rational {
        det(&self.matrix).expect("descriptor is square")
    }
}

fn e(i: usize) -> [Rational; 4] {
    std::array::from_fn(|k| if k == i { rat(1) } else { rat(0) })
}

fn v(x: [(i64, i64); 4]) -> [Rational; 4] {
    x.map(|(n, d)| ratio(n, d))
}

pub fn integral_basis_cyclic(_p: &CyclicQuarticParams, case: CyclicCase) -> BasisDescriptor {
    let half_1d = v([(1, 2), (1, 2), (0, 1), (0, 1)]);
    let cols = match case {
        CyclicCase::Case1 => [e(0), e(1), e(2), e(3)],
        CyclicCase::Case2 => [e(0), half_1d, e(2), e(3)],
        CyclicCase::Case3 => [e(0), half_1d, v([(0, 1), (0, 1), (1, 2), (1, 2)]), v([(0, 1), (0, 1), (1, 2), (-1, 2)])],
        CyclicCase::Case4 => [e(0), half_1d, v([(1, 4), (1, 4), (1, 4), (1, 4)]), v([(1, 4), (-1, 4), (1, 4), (-1, 4)])],
        CyclicCase::Case5 => [e(0), half_1d, v([(1, 4), (1, 4), (1, 4), (-1, 4)]), v([(1, 4), (-1, 4), (1, 4), (1, 4)])],
    };
    BasisDescriptor::from_columns(cols)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BiquadType {
    First,
    Second,
    Third,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BiquadraticParams {
    pub m: i64,
    pub n: i64,
    pub k: i64,
    pub d: i64,
    pub ty: BiquadType,
    /// Radicands as the user labelled them: `[m_in, n_in, m_in n_in / g^2]`.
    pub user: [i64; 3],
    /// `perm[j]` is the canonical slot (0 = m, 1 = n, 2 = k) of user label `j`.
    pub perm: [usize; 3],
}

impl BiquadraticParams {
    pub fn canonical(&self) -> [i64; 3] {
        [self.m, self.n, self.k]
    }
}

/// Order the three quadratic subfields so the residues mod 4 of `(m, n, k)`
/// follow one of the three type patterns.
pub fn canonicalize_biquadratic(m_in: i64, n_in: i64) -> Result<BiquadraticParams, FieldError> {
    for r in [m_in, n_in] {
        if r == 0 || r == 1 {
            return Err(FieldError::TrivialRadicand(r));
        }
        check_size(r)?;
        if !is_squarefree(r)? {
            return Err(FieldError::NotSquarefree(r));
        }
    }
    if m_in == n_in {
        return Err(FieldError::DegenerateProduct(m_in, n_in));
    }
    let g = m_in.gcd(&n_in);
    let k_in = (m_in / g) * (n_in / g);
    if k_in == 0 || k_in == 1 {
        return Err(FieldError::DegenerateProduct(m_in, n_in));
    }
    check_size(k_in)?;
    let user = [m_in, n_in, k_in];
    let res = user.map(|x| x.rem_euclid(4));
    let ones: Vec<usize> = (0..3).filter(|&i| res[i] == 1).collect();
    let threes: Vec<usize> = (0..3).filter(|&i| res[i] == 3).collect();
    // order[slot] = user label placed in that canonical slot
    let (ty, order) = if ones.len() == 3 {
        let mut idx = [0usize, 1, 2];
        idx.sort_by_key(|&i| user[i]);
        (BiquadType::Third, idx)
    } else if ones.len() == 1 {
        (BiquadType::Second, special_first(ones[0]))
    } else {
        debug_assert!(threes.len() == 1 && ones.is_empty());
        (BiquadType::First, special_first(threes[0]))
    };
    let (m, n) = (user[order[0]], user[order[1]]);
    let d = m.gcd(&n);
    let k = (m / d) * (n / d);
    debug_assert_eq!(k, user[order[2]]);
    let mut perm = [0usize; 3];
    for (slot, &label) in order.iter().enumerate() {
        perm[label] = slot;
    }
    Ok(BiquadraticParams { m, n, k, d, ty, user, perm })
}

fn special_first(s: usize) -> [usize; 3] {
    let rest: Vec<usize> = (0..3).filter(|&i| i != s).collect();
    [s, rest[0], rest[1]]
}

pub fn integral_basis_biquadratic(p: &BiquadraticParams) -> BasisDescriptor {
    let cols = match p.ty {
        BiquadType::First => [e(0), e(1), e(2), v([(0, 1), (0, 1), (1, 2), (1, 2)])],
        BiquadType::Second => [
            e(0),
            v([(1, 2), (1, 2), (0, 1), (0, 1)]),
            e(2),
            v([(0, 1), (0, 1), (1, 2), (1, 2)]),
        ],
        BiquadType::Third => [
            e(0),
            v([(1, 2), (1, 2), (0, 1), (0, 1)]),
            v([(1, 2), (0, 1), (1, 2), (0, 1)]),
            [ratio(1, 4), ratio(1, 4), Rational::new(BigInt::from(p.m), BigInt::from(4 * p.d)), ratio(1, 4)],
        ],
    };
    BasisDescriptor::from_columns(cols)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Field {
    Cyclic(CyclicQuarticParams),
    Biquadratic(BiquadraticParams),
}

impl Field {
    pub fn cyclic(a: i64, b: i64, c: i64) -> Result<Self, FieldError> {
        validate_cyclic(a, b, c).map(Field::Cyclic)
    }

    pub fn biquadratic(m: i64, n: i64) -> Result<Self, FieldError> {
        canonicalize_biquadratic(m, n).map(Field::Biquadratic)
    }

    pub fn integral_basis(&self) -> BasisDescriptor {
        match self {
            Field::Cyclic(p) => integral_basis_cyclic(p, classify_cyclic_case(p)),
            Field::Biquadratic(p) => integral_basis_biquadratic(p),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_squarefree(n: i64) -> bool {
        let n = n.unsigned_abs();
        (2..).take_while(|p| p * p <= n).all(|p| n % (p * p) != 0)
    }

    #[test]
    fn squarefree_examples() {
        assert!(is_squarefree(10).unwrap());
        assert!(!is_squarefree(18).unwrap());
        assert!(is_squarefree(-1).unwrap());
        assert!(!is_squarefree(0).unwrap());
        assert!(!is_squarefree(999_983 * 999_983).unwrap());
        assert!(is_squarefree(999_983 * 1_000_003).unwrap());
        assert_eq!(is_squarefree(SQUAREFREE_LIMIT + 1), Err(FieldError::TooLarge(SQUAREFREE_LIMIT + 1)));
    }

    #[test]
    fn squarefree_matches_naive() {
        for n in -3000i64..3000 {
            if n != 0 {
                assert_eq!(is_squarefree(n).unwrap(), naive_squarefree(n), "{n}");
            }
        }
    }

    #[test]
    fn validate_cyclic_examples() {
        assert_eq!(validate_cyclic(1, 3, 1).unwrap().d, 10);
        assert_eq!(validate_cyclic(1, 3, 3), Err(FieldError::NotSquarefree(18)));
        assert_eq!(validate_cyclic(3, 2, 3).unwrap().d, 13);
        assert_eq!(validate_cyclic(2, 3, 1), Err(FieldError::EvenA(2)));
        assert_eq!(validate_cyclic(5, 2, 1), Err(FieldError::NotCoprime(5, 5)));
        assert_eq!(validate_cyclic(9, 2, 1), Err(FieldError::NotSquarefree(9)));
        assert!(matches!(validate_cyclic(1, 0, 1), Err(FieldError::NonPositive(_, 0))));
    }

    #[test]
    fn classify_examples() {
        let case = |a, b, c| classify_cyclic_case(&validate_cyclic(a, b, c).unwrap());
        assert_eq!(case(1, 3, 1), CyclicCase::Case1);
        assert_eq!(case(1, 3, 2), CyclicCase::Case2);
        assert_eq!(case(3, 2, 1), CyclicCase::Case5);
        assert_eq!(case(3, 2, 3), CyclicCase::Case4);
        assert_eq!(case(1, 2, 1), CyclicCase::Case3);
    }

    #[test]
    fn canonicalize_examples() {
        let p = canonicalize_biquadratic(5, -2).unwrap();
        assert_eq!((p.ty, p.m, p.n, p.k, p.d), (BiquadType::Second, 5, -2, -10, 1));
        assert_eq!(p.perm, [0, 1, 2]);

        let p = canonicalize_biquadratic(-3, -7).unwrap();
        assert_eq!((p.ty, p.d, p.k), (BiquadType::Third, 1, 21));

        let p = canonicalize_biquadratic(2, 3).unwrap();
        assert_eq!((p.ty, p.m, p.n, p.k), (BiquadType::First, 3, 2, 6));
        assert_eq!(p.perm, [1, 0, 2]);

        let p = canonicalize_biquadratic(6, 10).unwrap();
        assert_eq!((p.ty, p.m, p.n, p.k, p.d), (BiquadType::First, 15, 6, 10, 3));

        assert_eq!(canonicalize_biquadratic(4, 3), Err(FieldError::NotSquarefree(4)));
        assert_eq!(canonicalize_biquadratic(3, 3), Err(FieldError::DegenerateProduct(3, 3)));
        assert_eq!(canonicalize_biquadratic(1, 3), Err(FieldError::TrivialRadicand(1)));
    }

    #[test]
    fn basis_examples() {
        let p = validate_cyclic(1, 9, 5).unwrap();
        assert_eq!(integral_basis_cyclic(&p, CyclicCase::Case1), BasisDescriptor::identity());
        assert_eq!(integral_basis_cyclic(&p, CyclicCase::Case2).gamma(1), vec![ratio(1, 2), ratio(1, 2), rat(0), rat(0)]);
        assert_eq!(integral_basis_cyclic(&p, CyclicCase::Case4).gamma(2), vec![ratio(1, 4); 4]);

        let q = canonicalize_biquadratic(-3, -7).unwrap();
        let g4 = integral_basis_biquadratic(&q).gamma(3);
        assert_eq!(g4, vec![ratio(1, 4), ratio(1, 4), Rational::new(BigInt::from(q.m), BigInt::from(4 * q.d)), ratio(1, 4)]);
    }
}
