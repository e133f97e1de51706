//! Generalized Pell equations `x^2 - D y^2 = N` over the integers.
//!
//! Positive nonsquare `D` is handled with the Lagrange-Matthews-Mollin
//! method: every primitive solution class comes from a root `z` of
//! `z^2 = D (mod |m|)` for `m = N / f^2`, found by running the `PQa`
//! continued fraction of `(z + sqrt D) / |m|` until `Q_i = +-1`. Negative and
//! square `D` have finitely many solutions and are enumerated directly.

pub mod forms;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use forms::{form_cycle, principal_form, reduce, represents_one, rho, QuadForm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PellError {
    #[error("D must be nonzero")]
    ZeroD,
    #[error("N must be nonzero")]
    ZeroN,
    #[error("{0} is a perfect square")]
    SquareD(BigInt),
    #[error("Jacobi symbol needs an odd positive modulus, got {0}")]
    EvenModulus(BigInt),
    #[error("form {0} is not reduced")]
    NotReduced(QuadForm),
    #[error("discriminant {0} is not a positive nonsquare")]
    BadDiscriminant(BigInt),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PellSolution {
    pub x: BigInt,
    pub y: BigInt,
}

impl PellSolution {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        PellSolution { x: x.into(), y: y.into() }
    }

    pub fn neg(&self) -> Self {
        PellSolution { x: -&self.x, y: -&self.y }
    }

    pub fn norm(&self, d: &BigInt) -> BigInt {
        &self.x * &self.x - d * &self.y * &self.y
    }

    /// `(x + y sqrt D)(t + u sqrt D)`.
    pub fn times(&self, d: &BigInt, t: &BigInt, u: &BigInt) -> Self {
        PellSolution { x: &self.x * t + d * &self.y * u, y: &self.x * u + &self.y * t }
    }
}

/// `x^2 - D y^2 = N`, with the sign the caller was after when the source
/// equation reads `= +-N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PellProblem {
    pub d: BigInt,
    pub n: BigInt,
    pub target_sign: i8,
}

impl PellProblem {
    pub fn new(d: impl Into<BigInt>, n: impl Into<BigInt>) -> Result<Self, PellError> {
        let (d, n) = (d.into(), n.into());
        if d.is_zero() {
            return Err(PellError::ZeroD);
        }
        if n.is_zero() {
            return Err(PellError::ZeroN);
        }
        Ok(PellProblem { d, n, target_sign: 1 })
    }

    pub fn with_sign(mut self, s: i8) -> Self {
        self.target_sign = s;
        self
    }

    pub fn check(&self, s: &PellSolution) -> bool {
        s.norm(&self.d) == self.n
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SolutionClassSet {
    Empty,
    Finite { solutions: Vec<PellSolution> },
    /// Every solution is `+-rep * (t + u sqrt D)^k` for some rep and `k` in Z.
    Indefinite { class_reps: Vec<PellSolution>, unit: (BigInt, BigInt) },
}

impl SolutionClassSet {
    pub fn is_empty(&self) -> bool {
        match self {
            SolutionClassSet::Empty => true,
            SolutionClassSet::Finite { solutions } => solutions.is_empty(),
            SolutionClassSet::Indefinite { class_reps, .. } => class_reps.is_empty(),
        }
    }

    /// All solutions with `|x|, |y| <= bound`.
    pub fn solutions_within(&self, d: &BigInt, bound: &BigInt) -> BTreeSet<PellSolution> {
        let inside = |s: &PellSolution| s.x.abs() <= *bound && s.y.abs() <= *bound;
        match self {
            SolutionClassSet::Empty => BTreeSet::new(),
            SolutionClassSet::Finite { solutions } => solutions.iter().filter(|s| inside(s)).cloned().collect(),
            SolutionClassSet::Indefinite { class_reps, unit: (t, u) } => {
                let mut out = BTreeSet::new();
                let inv_u = -u;
                for rep in class_reps {
                    for start in [rep.clone(), rep.neg()] {
                        // Forward powers grow monotonically once x and y share
                        // a sign, backward powers once they differ.
                        let mut cur = start.clone();
                        loop {
                            if inside(&cur) {
                                out.insert(cur.clone());
                            }
                            let same = sign(&cur.x) * sign(&cur.y) >= 0;
                            if same && !inside(&cur) {
                                break;
                            }
                            cur = cur.times(d, t, u);
                        }
                        let mut cur = start.times(d, t, &inv_u);
                        loop {
                            if inside(&cur) {
                                out.insert(cur.clone());
                            }
                            let opposite = sign(&cur.x) * sign(&cur.y) <= 0;
                            if opposite && !inside(&cur) {
                                break;
                            }
                            cur = cur.times(d, t, &inv_u);
                        }
                    }
                }
                out
            }
        }
    }
}

fn sign(x: &BigInt) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

pub fn is_square(n: &BigInt) -> bool {
    !n.is_negative() && {
        let r = n.sqrt();
        &r * &r == *n
    }
}

/// Continued fraction expansion of `sqrt(D)` over one period: returns the
/// convergent `(p, q)` at the end of the period and the period length.
fn sqrt_period_convergent(d: &BigInt) -> (BigInt, BigInt, usize) {
    let a0 = d.sqrt();
    let (mut m, mut den, mut a) = (BigInt::zero(), BigInt::one(), a0.clone());
    let (mut p_prev, mut p) = (BigInt::one(), a0.clone());
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    let two_a0 = &a0 * 2;
    let mut len = 0usize;
    loop {
        m = &den * &a - &m;
        den = (d - &m * &m) / &den;
        a = (&a0 + &m) / &den;
        len += 1;
        if a == two_a0 {
            return (p, q, len);
        }
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
    }
}

/// Minimal `(t, u)` with `t, u > 0` and `t^2 - D u^2 = 1`.
pub fn fundamental_unit(d: &BigInt) -> Result<(BigInt, BigInt), PellError> {
    if !d.is_positive() {
        return Err(PellError::BadDiscriminant(d.clone()));
    }
    if is_square(d) {
        return Err(PellError::SquareD(d.clone()));
    }
    let (p, q, len) = sqrt_period_convergent(d);
    if len % 2 == 0 {
        Ok((p, q))
    } else {
        Ok((&p * &p + d * &q * &q, BigInt::from(2) * &p * &q))
    }
}

/// Minimal positive solution of `x^2 - D y^2 = -1`, if there is one.
pub fn negative_unit(d: &BigInt) -> Result<Option<(BigInt, BigInt)>, PellError> {
    if !d.is_positive() {
        return Err(PellError::BadDiscriminant(d.clone()));
    }
    if is_square(d) {
        return Err(PellError::SquareD(d.clone()));
    }
    let (p, q, len) = sqrt_period_convergent(d);
    Ok((len % 2 == 1).then_some((p, q)))
}

/// Jacobi symbol `(a / n)` for odd positive `n`.
pub fn jacobi(a: &BigInt, n: &BigInt) -> Result<i8, PellError> {
    if !n.is_positive() || n.is_even() {
        return Err(PellError::EvenModulus(n.clone()));
    }
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut result = 1i8;
    let three = BigInt::from(3);
    let five = BigInt::from(5);
    let eight = BigInt::from(8);
    let four = BigInt::from(4);
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = n.mod_floor(&eight);
            if r == three || r == five {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.mod_floor(&four) == three && n.mod_floor(&four) == three {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    Ok(if n.is_one() { result } else { 0 })
}

/// Quick necessary condition from residues mod 8: with `D = 3 (mod 8)` and
/// `N = 2 (mod 8)`, or `D = 7` and `N = 6`, there is no solution.
pub fn mod8_obstruction(d: &BigInt, n: &BigInt) -> bool {
    let eight = BigInt::from(8);
    let (dr, nr) = (d.mod_floor(&eight), n.mod_floor(&eight));
    (dr == BigInt::from(3) && nr == BigInt::from(2)) || (dr == BigInt::from(7) && nr == BigInt::from(6))
}

fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = BigInt::one();
    while &i * &i <= n {
        if (&n % &i).is_zero() {
            let j = &n / &i;
            if j != i {
                large.push(j);
            }
            small.push(i.clone());
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn solve_definite(d: &BigInt, n: &BigInt) -> Vec<PellSolution> {
    // x^2 + |D| y^2 = N
    let mut out = BTreeSet::new();
    if n.is_positive() {
        let mut y = BigInt::zero();
        loop {
            let rest = n + d * &y * &y;
            if rest.is_negative() {
                break;
            }
            if is_square(&rest) {
                let x = rest.sqrt();
                for sx in [x.clone(), -x.clone()] {
                    for sy in [y.clone(), -y.clone()] {
                        out.insert(PellSolution::new(sx.clone(), sy));
                    }
                }
            }
            y += 1;
        }
    }
    out.into_iter().collect()
}

fn solve_square(d: &BigInt, n: &BigInt) -> Vec<PellSolution> {
    // (x - s y)(x + s y) = N
    let s = d.sqrt();
    let mut out = BTreeSet::new();
    for r in positive_divisors(n) {
        for r in [r.clone(), -r] {
            let other = n / &r;
            let sum = &r + &other;
            let diff = &other - &r;
            if sum.is_odd() || !(&diff % (BigInt::from(2) * &s)).is_zero() {
                continue;
            }
            out.insert(PellSolution::new(&sum / 2, &diff / (BigInt::from(2) * &s)));
        }
    }
    out.into_iter().collect()
}

/// `PQa` on `(p0 + sqrt D) / q0`: returns `(G_{i-1}, B_{i-1}, i, Q_i)` for the
/// first `i >= 1` with `|Q_i| = 1`, or `None` once the expansion cycles.
fn pqa_hit(p0: &BigInt, q0: &BigInt, d: &BigInt) -> Option<(BigInt, BigInt, usize, BigInt)> {
    let sqrt_d = d.sqrt();
    let (mut p, mut q) = (p0.clone(), q0.clone());
    let (mut g_prev, mut g) = (-p0.clone(), q0.clone());
    let (mut b_prev, mut b) = (BigInt::one(), BigInt::zero());
    let mut seen = BTreeSet::new();
    let mut i = 0usize;
    loop {
        // floor((p + sqrt D) / q) for either sign of q
        let a = if q.is_positive() {
            (&p + &sqrt_d).div_floor(&q)
        } else {
            (&p + &sqrt_d + BigInt::one()).div_floor(&q)
        };
        let g_next = &a * &g + &g_prev;
        let b_next = &a * &b + &b_prev;
        g_prev = std::mem::replace(&mut g, g_next);
        b_prev = std::mem::replace(&mut b, b_next);
        let p_next = &a * &q - &p;
        let q_next = (d - &p_next * &p_next) / &q;
        p = p_next;
        q = q_next;
        i += 1;
        if q.abs().is_one() {
            return Some((g, b, i, q));
        }
        if !seen.insert((p.clone(), q.clone())) {
            return None;
        }
    }
}

fn solve_indefinite(d: &BigInt, n: &BigInt) -> SolutionClassSet {
    let unit = fundamental_unit(d).expect("nonsquare positive D");
    let neg = negative_unit(d).expect("nonsquare positive D");
    let mut reps = BTreeSet::new();
    for f in positive_divisors(n) {
        let f2 = &f * &f;
        if !(n % &f2).is_zero() {
            continue;
        }
        let m = n / &f2;
        let am = m.abs();
        if am.is_one() {
            if m.is_one() {
                reps.insert(PellSolution::new(f.clone(), 0));
            } else if let Some((r, s)) = &neg {
                reps.insert(PellSolution::new(&f * r, &f * s));
            }
            continue;
        }
        // roots of z^2 = D (mod |m|) with -|m|/2 < z <= |m|/2
        let half = &am / 2;
        let mut z: BigInt = -(&am - BigInt::one()) / 2;
        while z <= half {
            if (&z * &z - d).mod_floor(&am).is_zero() {
                if let Some((r, s, _, _)) = pqa_hit(&z, &am, d) {
                    let cand = PellSolution::new(r, s);
                    let norm = cand.norm(d);
                    let prim = if norm == m {
                        Some(cand)
                    } else if norm == -&m {
                        neg.as_ref().map(|(t, u)| cand.times(d, t, u))
                    } else {
                        None
                    };
                    if let Some(p) = prim {
                        debug_assert_eq!(p.norm(d), m);
                        reps.insert(PellSolution::new(&p.x * &f, &p.y * &f));
                    }
                }
            }
            z += 1;
        }
    }
    let (t, u) = &unit;
    let reps: BTreeSet<PellSolution> = reps.into_iter().map(|r| normalize_rep(r, d, t, u)).collect();
    SolutionClassSet::Indefinite { class_reps: reps.into_iter().collect(), unit }
}

/// Move `alpha` along its unit orbit to the element with the smallest `|y|`
/// (then smallest `|x|`), signed so that `y > 0`, or `x > 0` when `y = 0`.
fn normalize_rep(alpha: PellSolution, d: &BigInt, t: &BigInt, u: &BigInt) -> PellSolution {
    let size = |s: &PellSolution| (s.y.abs(), s.x.abs());
    let inv_u = -u;
    let mut cur = alpha;
    loop {
        let fwd = cur.times(d, t, u);
        let back = cur.times(d, t, &inv_u);
        if size(&fwd) < size(&cur) {
            cur = fwd;
        } else if size(&back) < size(&cur) {
            cur = back;
        } else {
            break;
        }
    }
    if cur.y.is_negative() || (cur.y.is_zero() && cur.x.is_negative()) {
        cur.neg()
    } else {
        cur
    }
}

/// Complete description of the solutions of `x^2 - D y^2 = N`.
pub fn solve_all(p: &PellProblem) -> SolutionClassSet {
    let (d, n) = (&p.d, &p.n);
    let finite = |sols: Vec<PellSolution>| {
        if sols.is_empty() {
            SolutionClassSet::Empty
        } else {
            SolutionClassSet::Finite { solutions: sols }
        }
    };
    if d.is_negative() {
        return finite(solve_definite(d, n));
    }
    if is_square(d) {
        return finite(solve_square(d, n));
    }
    match solve_indefinite(d, n) {
        SolutionClassSet::Indefinite { class_reps, .. } if class_reps.is_empty() => SolutionClassSet::Empty,
        other => other,
    }
}

fn preference_key(s: &PellSolution) -> (BigInt, BigInt, bool, bool) {
    (s.y.abs(), s.x.abs(), s.y.is_negative(), s.x.is_negative())
}

/// A solution of `x^2 - D y^2 = N` with `modulus | x - c y`, if any exists.
///
/// For indefinite equations the unit acts on `(x, y) mod |modulus|` through
/// the invertible matrix `[[t, D u], [u, t]]`, so one period of that action per
/// class representative and sign covers every solution.
pub fn find_with_modulus(
    d: &BigInt,
    n: &BigInt,
    modulus: &BigInt,
    c: &BigInt,
) -> Result<Option<PellSolution>, PellError> {
    let problem = PellProblem::new(d.clone(), n.clone())?;
    if modulus.is_zero() {
        return Err(PellError::ZeroN);
    }
    let md = modulus.abs();
    let ok = |s: &PellSolution| (&s.x - c * &s.y).mod_floor(&md).is_zero();
    let best = match solve_all(&problem) {
        SolutionClassSet::Empty => None,
        SolutionClassSet::Finite { solutions } => {
            solutions.into_iter().filter(ok).min_by_key(preference_key)
        }
        SolutionClassSet::Indefinite { class_reps, unit: (t, u) } => {
            let mut hits = Vec::new();
            let inv_u = -&u;
            for rep in &class_reps {
                for start in [rep.clone(), rep.neg()] {
                    let key0 = (start.x.mod_floor(&md), start.y.mod_floor(&md));
                    let mut cur = start.clone();
                    let mut k = 0usize;
                    let mut first = None;
                    let mut last = None;
                    let period = loop {
                        if ok(&cur) {
                            if first.is_none() {
                                first = Some(cur.clone());
                            }
                            last = Some(k);
                        }
                        cur = cur.times(d, &t, &u);
                        k += 1;
                        if (cur.x.mod_floor(&md), cur.y.mod_floor(&md)) == key0 {
                            break k;
                        }
                    };
                    // hits closest to the representative on either side
                    if let (Some(fwd), Some(k_last)) = (first, last) {
                        let mut back = start.clone();
                        for _ in 0..period - k_last {
                            back = back.times(d, &t, &inv_u);
                        }
                        hits.push(fwd);
                        hits.push(back);
                    }
                }
            }
            hits.into_iter().min_by_key(preference_key)
        }
    };
    Ok(best)
}

/// A solution of `x^2 - D y^2 = b` with `b | x - c y`, if any exists.
pub fn find_with_divisibility(d: &BigInt, b: &BigInt, c: &BigInt) -> Result<Option<PellSolution>, PellError> {
    find_with_modulus(d, b, b, c)
}

/// Exhaustive class search with the classical bound
/// `0 <= y <= sqrt(|N| (t + 1) / (2 D))`. Only practical for small units; kept
/// as an independent check on [`solve_all`].
pub fn bounded_class_search(d: &BigInt, n: &BigInt) -> Result<Vec<PellSolution>, PellError> {
    let (t, _) = fundamental_unit(d)?;
    let num = n.abs() * (&t + 1);
    let den = BigInt::from(2) * d;
    let q: BigInt = &num / &den;
    let mut bound = q.sqrt();
    while &bound * &bound * &den < num {
        bound += 1;
    }
    let mut reps = Vec::new();
    let mut y = BigInt::zero();
    while y <= bound {
        let rest = n + d * &y * &y;
        if is_square(&rest) {
            let x = rest.sqrt();
            reps.push(PellSolution::new(x.clone(), y.clone()));
            if !x.is_zero() {
                reps.push(PellSolution::new(-x, y.clone()));
            }
        }
        y += 1;
    }
    Ok(reps)
}
