//! Indefinite binary quadratic forms `A x^2 + B xy + C y^2` and their cycles
//! of reduced forms.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{is_square, PellError};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadForm {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.a, self.b, self.c)
    }
}

impl QuadForm {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        QuadForm { a: a.into(), b: b.into(), c: c.into() }
    }

    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.a * x * x + &self.b * x * y + &self.c * y * y
    }

    /// `0 < B < sqrt(disc)` and `sqrt(disc) - B < 2|A| < sqrt(disc) + B`.
    pub fn is_reduced(&self) -> bool {
        let disc = self.discriminant();
        if !disc.is_positive() || is_square(&disc) {
            return false;
        }
        // compare against sqrt(disc) exactly through squares
        let b_pos = self.b.is_positive() && &self.b * &self.b < disc;
        let two_a = BigInt::from(2) * self.a.abs();
        // sqrt(disc) - B < 2|A|  <=>  sqrt(disc) < 2|A| + B
        let lower = {
            let s = &two_a + &self.b;
            s.is_positive() && disc < &s * &s
        };
        // 2|A| < sqrt(disc) + B  <=>  2|A| - B < sqrt(disc)
        let upper = {
            let s = &two_a - &self.b;
            !s.is_positive() || &s * &s < disc
        };
        b_pos && lower && upper
    }

    fn negate_outer(&self) -> Self {
        QuadForm { a: -&self.a, b: self.b.clone(), c: -&self.c }
    }
}

fn checked_discriminant(f: &QuadForm) -> Result<BigInt, PellError> {
    let disc = f.discriminant();
    if !disc.is_positive() || is_square(&disc) {
        return Err(PellError::BadDiscriminant(disc));
    }
    Ok(disc)
}

/// One reduction step `(A, B, C) -> (C, r, (r^2 - disc) / 4C)` with `r = -B`
/// modulo `2|C|`, taken in `(-|C|, |C|]` when `|C| > sqrt(disc)` and in
/// `(sqrt(disc) - 2|C|, sqrt(disc))` otherwise.
pub fn rho(f: &QuadForm) -> Result<QuadForm, PellError> {
    let disc = checked_discriminant(f)?;
    let s = disc.sqrt();
    let ac = f.c.abs();
    let two_c = BigInt::from(2) * &ac;
    let r = if &ac * &ac > disc {
        // representative in (-|C|, |C|]
        let mut r = (-&f.b).mod_floor(&two_c);
        if r > ac {
            r -= &two_c;
        }
        r
    } else {
        // largest r < sqrt(disc) with r = -B (mod 2|C|); since disc is not a
        // square, r < sqrt(disc) is r <= floor(sqrt(disc))
        let r0 = (-&f.b).mod_floor(&two_c);
        let k = (&s - &r0).div_floor(&two_c);
        r0 + k * &two_c
    };
    let c_new = (&r * &r - &disc) / (BigInt::from(4) * &f.c);
    Ok(QuadForm { a: f.c.clone(), b: r, c: c_new })
}

/// Apply [`rho`] until the form is reduced.
pub fn reduce(f: &QuadForm) -> Result<QuadForm, PellError> {
    checked_discriminant(f)?;
    let mut g = f.clone();
    while !g.is_reduced() {
        g = rho(&g)?;
    }
    Ok(g)
}

/// The cycle of reduced forms starting at `f`, stepping by `rho` followed by
/// `(A, B, C) -> (-A, B, -C)`, so every listed form has the sign of the
/// leading coefficient alternating back. The first element is `f` itself.
pub fn form_cycle(f: &QuadForm) -> Result<Vec<QuadForm>, PellError> {
    checked_discriminant(f)?;
    if !f.is_reduced() {
        return Err(PellError::NotReduced(f.clone()));
    }
    let mut out = vec![f.clone()];
    let mut g = rho(f)?.negate_outer();
    while g != *f {
        out.push(g.clone());
        g = rho(&g)?.negate_outer();
    }
    Ok(out)
}

/// The proper cycle (plain `rho` steps) of a reduced form.
pub fn proper_cycle(f: &QuadForm) -> Result<Vec<QuadForm>, PellError> {
    checked_discriminant(f)?;
    if !f.is_reduced() {
        return Err(PellError::NotReduced(f.clone()));
    }
    let mut out = vec![f.clone()];
    let mut g = rho(f)?;
    while g != *f {
        out.push(g.clone());
        g = rho(&g)?;
    }
    Ok(out)
}

/// `(1, b0, (b0^2 - disc) / 4)` with `b0` the largest integer below
/// `sqrt(disc)` of the same parity as `disc`.
pub fn principal_form(disc: &BigInt) -> Result<QuadForm, PellError> {
    if !disc.is_positive() || is_square(disc) {
        return Err(PellError::BadDiscriminant(disc.clone()));
    }
    let r = disc.mod_floor(&BigInt::from(4));
    if !(r.is_zero() || r.is_one()) {
        return Err(PellError::BadDiscriminant(disc.clone()));
    }
    let mut b0 = disc.sqrt();
    if b0.is_odd() != disc.is_odd() {
        b0 -= 1;
    }
    let c = (&b0 * &b0 - disc) / 4;
    Ok(QuadForm { a: BigInt::one(), b: b0, c })
}

/// Whether `f` represents 1, i.e. the principal form lies in its proper cycle.
pub fn represents_one(f: &QuadForm) -> Result<bool, PellError> {
    let disc = checked_discriminant(f)?;
    let principal = principal_form(&disc)?;
    let cycle = proper_cycle(&reduce(f)?)?;
    Ok(cycle.contains(&principal))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_represents_one(f: &QuadForm, bound: i64) -> bool {
        (-bound..=bound).any(|u| {
            (-bound..=bound).any(|v| f.eval(&BigInt::from(u), &BigInt::from(v)).is_one())
        })
    }

    #[test]
    fn cycle_of_discriminant_1096() {
        let f = QuadForm::new(15, 14, -15);
        assert!(f.is_reduced());
        let cycle = form_cycle(&f).unwrap();
        let expected: Vec<QuadForm> = [
            (15, 16, -14),
            (14, 12, -17),
            (17, 22, -9),
            (9, 32, -2),
            (2, 32, -9),
            (9, 22, -17),
            (17, 12, -14),
            (14, 16, -15),
        ]
        .iter()
        .map(|&(a, b, c)| QuadForm::new(a, b, c))
        .collect();
        assert_eq!(cycle[0], f);
        assert_eq!(&cycle[1..], &expected[..]);
        assert!(!represents_one(&f).unwrap());
    }

    #[test]
    fn principal_form_is_in_its_cycle() {
        for disc in [5i64, 8, 12, 13, 21, 40, 1096] {
            let p = principal_form(&BigInt::from(disc)).unwrap();
            assert!(p.is_reduced(), "{p}");
            assert!(form_cycle(&p).unwrap().contains(&p));
            assert!(represents_one(&p).unwrap());
        }
    }

    #[test]
    fn reduce_then_cycle() {
        let f = reduce(&QuadForm::new(1, 0, -2)).unwrap();
        let p = principal_form(&BigInt::from(8)).unwrap();
        assert!(proper_cycle(&f).unwrap().contains(&p));
    }

    #[test]
    fn disc_40() {
        let f = QuadForm::new(3, 2, -3);
        assert_eq!(represents_one(&f).unwrap(), brute_represents_one(&f, 100));
    }

    #[test]
    fn errors() {
        assert!(matches!(form_cycle(&QuadForm::new(1, 0, 4)), Err(PellError::BadDiscriminant(_))));
        assert!(matches!(form_cycle(&QuadForm::new(1, 2, 0)), Err(PellError::BadDiscriminant(_))));
        assert!(matches!(form_cycle(&QuadForm::new(1, 0, -2)), Err(PellError::NotReduced(_))));
    }
}
