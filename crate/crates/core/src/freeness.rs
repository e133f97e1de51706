//! Deciding whether the ring of integers is free over the associated order of
//! a non-classical Hopf-Galois structure.
//!
//! Every decision goes through the same steps: cheap prescreen rules, then
//! the Pell criterion for the structure, then a closed-form generator built
//! from a Pell solution. A generator is only ever reported after the
//! determinant test `|D_beta| = I` has accepted it.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{
    classify_cyclic_case, BasisDescriptor, BiquadType, BiquadraticParams, CyclicCase, CyclicQuarticParams, Field,
};
use crate::hopf::{self, generator_determinant, HopfStructureId, ReductionReport, StructureAnalysis};
use crate::linalg::{self, RatMatrix, Rational};
use crate::pell::{self, PellProblem, PellSolution, SolutionClassSet};

/// Coordinates of a candidate generator in the integral basis.
pub type Beta = [BigInt; 4];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Free,
    NotFree,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Free,
    NotFree,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrescreenVerdict {
    pub outcome: Outcome,
    /// Identifier of the rule that decided, `none` when no rule fired.
    pub reason: String,
}

impl PrescreenVerdict {
    pub fn unknown() -> Self {
        PrescreenVerdict { outcome: Outcome::Unknown, reason: "none".into() }
    }

    fn free(reason: &str) -> Self {
        PrescreenVerdict { outcome: Outcome::Free, reason: reason.into() }
    }

    fn not_free(reason: &str) -> Self {
        PrescreenVerdict { outcome: Outcome::NotFree, reason: reason.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Method {
    Prescreen { reason: String },
    PellCriterion,
    BruteForce,
}

/// A solution of `x^2 - D y^2 = N` that produced the generator; `sign` is the
/// choice of `+-` in the source equation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Witness {
    pub d: BigInt,
    pub n: BigInt,
    pub sign: i8,
    pub solution: PellSolution,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreenessReport {
    pub structure: HopfStructureId,
    pub decision: Decision,
    pub witness: Option<Witness>,
    pub generator: Option<Beta>,
    pub index: Rational,
    pub generator_determinant: Option<Rational>,
    pub method: Method,
    pub prescreen: PrescreenVerdict,
    /// Every rule that fired, including sign eliminations handed to the solver.
    pub rules: Vec<String>,
}

impl FreenessReport {
    pub fn is_free(&self) -> bool {
        self.decision == Decision::Free
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecideOptions {
    /// Let prescreen rules decide and drop impossible target signs. With this
    /// off, every decision comes from the Pell criterion alone.
    pub prescreen: bool,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions { prescreen: true }
    }
}

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

fn div_exact(num: &BigInt, den: &BigInt) -> Option<BigInt> {
    let (q, r) = num.div_rem(den);
    r.is_zero().then_some(q)
}

fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2i64;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += 1;
    }
    true
}

fn factor(mut n: i64) -> Vec<(i64, u32)> {
    n = n.abs();
    let mut out = Vec::new();
    let mut p = 2i64;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn squarefree_part(n: i64) -> i64 {
    factor(n).into_iter().filter(|&(_, e)| e % 2 == 1).map(|(p, _)| p).product::<i64>() * n.signum()
}

// ---------------------------------------------------------------------------
// cyclic fields

/// `(t, other)`: the Pell target and the divisibility partner. Cases 1-2 use
/// `x^2 - d y^2 = b` with `b | x - c y`, cases 3-5 use `x^2 - d y^2 = c`
/// with `c | x - b y`.
pub fn cyclic_target(p: &CyclicQuarticParams) -> (i64, i64) {
    match classify_cyclic_case(p) {
        CyclicCase::Case1 | CyclicCase::Case2 => (p.b, p.c),
        _ => (p.c, p.b),
    }
}

pub fn prescreen_cyclic(p: &CyclicQuarticParams) -> PrescreenVerdict {
    let (t, _) = cyclic_target(p);
    if t == 1 {
        return PrescreenVerdict::free("target_is_one");
    }
    let odd_d = if p.d % 2 == 0 { p.d / 2 } else { p.d };
    if pell::jacobi(&big(t), &big(odd_d)).ok() == Some(-1) {
        return PrescreenVerdict::not_free(if p.d % 2 == 0 { "jacobi_half_d" } else { "jacobi_d" });
    }
    if is_prime(p.d) {
        let core = squarefree_part(t);
        if p.d % 4 == 3 && core.rem_euclid(4) == 3 {
            return PrescreenVerdict::not_free("prime_d_three_mod_four");
        }
        // a prime q | t with (d/q) = -1 rules out x^2 - d y^2 = t only when q
        // divides t to an odd power; otherwise q | x, q | y is possible
        for (q, e) in factor(t) {
            if q != 2 && e % 2 == 1 && pell::jacobi(&big(p.d), &big(q)).ok() == Some(-1) {
                return PrescreenVerdict::not_free("prime_d_nonresidue_divisor");
            }
        }
    }
    if is_prime(t) {
        if let Ok(problem) = PellProblem::new(p.d, t) {
            if !pell::solve_all(&problem).is_empty() {
                return PrescreenVerdict::free("prime_target_solvable");
            }
        }
    }
    PrescreenVerdict::unknown()
}

fn cyclic_formula(p: &CyclicQuarticParams, case: CyclicCase, x: &BigInt, y: &BigInt) -> Option<Beta> {
    let (b, c) = (big(p.b), big(p.c));
    let two = big(2);
    let half = |v: BigInt| div_exact(&v, &two);
    let y_mod_2 = y.mod_floor(&two);
    Some(match case {
        CyclicCase::Case1 => [BigInt::one(), BigInt::one(), div_exact(&(x - &c * y), &b)?, y.clone()],
        CyclicCase::Case2 => [BigInt::zero(), BigInt::one(), div_exact(&(x - &c * y), &b)?, y.clone()],
        CyclicCase::Case3 => [BigInt::zero(), BigInt::one(), div_exact(&(x - &b * y), &c)?, y.clone()],
        CyclicCase::Case4 => {
            let b3 = div_exact(&(x - &b * y), &c)?;
            let b2 = half(y - &b3 + 1)?;
            let b1 = -half(y + &y_mod_2)?;
            [b1, b2, b3, y.clone()]
        }
        CyclicCase::Case5 => {
            let b4 = div_exact(&(x - &b * y), &c)?;
            let b2 = -half(y - &b4 + 1)?;
            // the second linear factor is 4 b1 + 2 b4 - 1, so b1 follows b4, not y
            let b1 = -half(&b4 - b4.mod_floor(&two))?;
            [b1, b2, y.clone(), b4]
        }
    })
}

fn sign_variants(s: &PellSolution) -> [PellSolution; 4] {
    [
        s.clone(),
        PellSolution { x: -&s.x, y: s.y.clone() },
        PellSolution { x: s.x.clone(), y: -&s.y },
        s.neg(),
    ]
}

fn verified(analysis: &StructureAnalysis, beta: &Beta) -> Option<Rational> {
    let det = generator_determinant(&analysis.action, beta);
    (det.abs() == analysis.reduction.index).then_some(det)
}

pub fn decide_cyclic(p: &CyclicQuarticParams) -> Result<FreenessReport> {
    decide_cyclic_with(p, DecideOptions::default())
}

pub fn decide_cyclic_with(p: &CyclicQuarticParams, opts: DecideOptions) -> Result<FreenessReport> {
    let field = Field::Cyclic(*p);
    let id = HopfStructureId::CyclicNonclassical;
    let analysis = hopf::analyze(&field, id)?;
    let case = classify_cyclic_case(p);
    let (t, other) = cyclic_target(p);
    let prescreen = prescreen_cyclic(p);
    let mut rules = Vec::new();
    if prescreen.outcome != Outcome::Unknown {
        rules.push(prescreen.reason.clone());
    }
    let mut report = FreenessReport {
        structure: id,
        decision: Decision::NotFree,
        witness: None,
        generator: None,
        index: analysis.reduction.index.clone(),
        generator_determinant: None,
        method: Method::PellCriterion,
        prescreen: prescreen.clone(),
        rules,
    };
    if opts.prescreen && prescreen.outcome == Outcome::NotFree {
        report.method = Method::Prescreen { reason: prescreen.reason };
        return Ok(report);
    }
    let (d, tb) = (big(p.d), big(t));
    let found = pell::find_with_divisibility(&d, &tb, &big(other))?;
    let Some(sol) = found else {
        if opts.prescreen && prescreen.outcome == Outcome::Free {
            return Err(Error::Inconsistent(format!(
                "prescreen rule {} says free but x^2 - {d} y^2 = {t} has no admissible solution",
                prescreen.reason
            )));
        }
        return Ok(report);
    };
    for variant in sign_variants(&sol) {
        let Some(beta) = cyclic_formula(p, case, &variant.x, &variant.y) else {
            log::debug!("cyclic formula not integral at {variant:?}");
            continue;
        };
        if let Some(det) = verified(&analysis, &beta) {
            report.decision = Decision::Free;
            report.witness = Some(Witness { d: d.clone(), n: tb.clone(), sign: 1, solution: variant });
            report.generator = Some(beta);
            report.generator_determinant = Some(det);
            if opts.prescreen && prescreen.outcome == Outcome::Free {
                report.method = Method::Prescreen { reason: prescreen.reason };
            }
            return Ok(report);
        }
        log::debug!("cyclic formula at {variant:?} gave {beta:?}, which is not a generator");
    }
    Err(Error::Inconsistent(format!(
        "solution {sol:?} of x^2 - {d} y^2 = {t} gives no verified generator (case {})",
        case.number()
    )))
}

// ---------------------------------------------------------------------------
// biquadratic fields

/// The equation `x^2 + a y^2 = +-n0` deciding a biquadratic structure, or
/// `None` when the structure is never free.
fn biquad_equation(p: &BiquadraticParams, slot: usize) -> Option<(i64, i64)> {
    let (m, n, k, d) = (p.m, p.n, p.k, p.d);
    match (p.ty, slot) {
        (BiquadType::First, 0) => Some((m, 4 * d)),
        (BiquadType::First, 1) => Some((n, 2 * d)),
        (BiquadType::First, _) => Some((k, (2 * n / d).abs())),
        (BiquadType::Second, 0) => Some((m, 2 * d)),
        (BiquadType::Second, _) => None,
        (BiquadType::Third, 0) => Some((m, 2 * d)),
        (BiquadType::Third, 1) => Some((n, 2 * d)),
        (BiquadType::Third, _) => Some((k, (2 * n / d).abs())),
    }
}

fn biquad_formula(p: &BiquadraticParams, slot: usize, x: &BigInt, y: &BigInt) -> Option<Beta> {
    let (m, n, k, d) = (big(p.m), big(p.n), big(p.k), big(p.d));
    let one = BigInt::one();
    let two = big(2);
    let half = |v: &BigInt| div_exact(v, &two);
    match (p.ty, slot) {
        (BiquadType::First, 0) => Some([one.clone(), one, div_exact(&(x - &d * y), &(&two * &d))?, y.clone()]),
        (BiquadType::First, 1) => {
            Some([one.clone(), div_exact(x, &(&two * &d))?, half(&(&one - y))?, y.clone()])
        }
        (BiquadType::First, _) => {
            Some([one.clone(), half(y)?, div_exact(&(x * &d - &n), &(&two * &n))?, one])
        }
        (BiquadType::Second, 0) => Some([one.clone(), -one, div_exact(&(x - &d * y), &(&two * &d))?, y.clone()]),
        (BiquadType::Third, 0) => {
            let b3 = div_exact(&(x - &m * y), &(&two * &d))?;
            let eps = b3.mod_floor(&two);
            let b1 = half(&(-&b3 - &eps))?;
            Some([b1, half(&(&one - y))?, b3, y.clone()])
        }
        (BiquadType::Third, 1) => {
            let s = div_exact(&(&m * y - x), &d)?;
            let eps = s.mod_floor(&big(4));
            let b1 = div_exact(&(&s - &eps), &big(4))?;
            let b2 = div_exact(&(x - y * &d), &(&two * &d))?;
            let b3 = div_exact(&(&d - &m * y), &(&two * &d))?;
            Some([b1, b2, b3, y.clone()])
        }
        (BiquadType::Third, _) => {
            let nd = &n / &d;
            let s = div_exact(&(&k - x), &nd)? - y;
            let eps = s.mod_floor(&big(4)) - 2;
            let b1 = div_exact(&(&s + &eps), &big(4))?;
            let b2 = half(&(y - &one))?;
            let b3 = div_exact(&(x - &k), &(&two * &nd))?;
            Some([b1, b2, b3, one])
        }
        (BiquadType::Second, _) => None,
    }
}

/// Prescreen verdicts in canonical order `(H1, H2, H3)`.
pub fn prescreen_biquadratic(p: &BiquadraticParams) -> [PrescreenVerdict; 3] {
    std::array::from_fn(|slot| prescreen_biquadratic_slot(p, slot))
}

fn prescreen_biquadratic_slot(p: &BiquadraticParams, slot: usize) -> PrescreenVerdict {
    let (m, n, k, d) = (p.m, p.n, p.k, p.d);
    match p.ty {
        BiquadType::First => {
            if n.abs() == 2 || k.abs() == 2 {
                return PrescreenVerdict::free("n_or_k_is_pm2");
            }
            match slot {
                0 if d == 1 || m.abs() == d => PrescreenVerdict::free("coprime_or_m_divides_n"),
                0 if m > 0 => PrescreenVerdict::not_free("positive_m"),
                1 | 2 if n.abs() == 2 * d => PrescreenVerdict::free("n_is_pm2d"),
                1 if n > 0 => PrescreenVerdict::not_free("positive_n"),
                2 if k > 0 => PrescreenVerdict::not_free("positive_k"),
                _ => PrescreenVerdict::unknown(),
            }
        }
        BiquadType::Second if slot > 0 => PrescreenVerdict::not_free("second_type_structural"),
        BiquadType::Second | BiquadType::Third => {
            let a = p.canonical()[slot];
            if a > 1 {
                PrescreenVerdict::not_free("radicand_above_one")
            } else if a == -3 || a == -7 {
                PrescreenVerdict::free("radicand_minus_3_or_7")
            } else {
                PrescreenVerdict::unknown()
            }
        }
    }
}

/// Target signs of `x^2 + a y^2 = +-n0` excluded by residues mod 8.
fn excluded_signs(a: i64, n0: i64) -> Vec<i8> {
    [1i8, -1]
        .into_iter()
        .filter(|&s| pell::mod8_obstruction(&big(-a), &big(i64::from(s) * n0)))
        .collect()
}

/// Solutions worth feeding to a generator formula: everything for finite sets,
/// and a few orbit elements around each representative otherwise.
fn candidate_solutions(set: &SolutionClassSet, d: &BigInt) -> Vec<PellSolution> {
    let mut out = Vec::new();
    match set {
        SolutionClassSet::Empty => {}
        SolutionClassSet::Finite { solutions } => out.extend(solutions.iter().cloned()),
        SolutionClassSet::Indefinite { class_reps, unit: (t, u) } => {
            let inv_u = -u;
            for rep in class_reps {
                out.push(rep.clone());
                let (mut fwd, mut back) = (rep.clone(), rep.clone());
                for _ in 0..2 {
                    fwd = fwd.times(d, t, u);
                    back = back.times(d, t, &inv_u);
                    out.push(fwd.clone());
                    out.push(back.clone());
                }
            }
        }
    }
    let mut variants: Vec<PellSolution> = out.iter().flat_map(sign_variants).collect();
    variants.sort_by_key(|s| (s.y.abs(), s.x.abs(), s.y.is_negative(), s.x.is_negative()));
    variants.dedup();
    variants
}

fn decide_biquadratic_slot(
    p: &BiquadraticParams,
    slot: usize,
    analysis: &StructureAnalysis,
    opts: DecideOptions,
) -> Result<FreenessReport> {
    let prescreen = prescreen_biquadratic_slot(p, slot);
    let mut report = FreenessReport {
        structure: analysis.id,
        decision: Decision::NotFree,
        witness: None,
        generator: None,
        index: analysis.reduction.index.clone(),
        generator_determinant: None,
        method: Method::PellCriterion,
        prescreen: prescreen.clone(),
        rules: Vec::new(),
    };
    if prescreen.outcome != Outcome::Unknown {
        report.rules.push(prescreen.reason.clone());
    }
    let Some((a, n0)) = biquad_equation(p, slot) else {
        // no criterion: only the prescreen can speak for this structure
        report.method = Method::Prescreen { reason: prescreen.reason };
        return Ok(report);
    };
    if opts.prescreen && prescreen.outcome == Outcome::NotFree {
        report.method = Method::Prescreen { reason: prescreen.reason };
        return Ok(report);
    }
    let excluded = excluded_signs(a, n0);
    for &s in &excluded {
        report.rules.push(if s > 0 { "mod8_excludes_plus" } else { "mod8_excludes_minus" }.into());
    }
    let d = big(-a);
    let mut any_solution = None;
    for s in [1i8, -1] {
        if opts.prescreen && excluded.contains(&s) {
            continue;
        }
        let rhs = big(i64::from(s) * n0);
        let set = pell::solve_all(&PellProblem::new(d.clone(), rhs.clone())?.with_sign(s));
        for cand in candidate_solutions(&set, &d) {
            any_solution.get_or_insert_with(|| cand.clone());
            let Some(beta) = biquad_formula(p, slot, &cand.x, &cand.y) else {
                continue;
            };
            if let Some(det) = verified(analysis, &beta) {
                report.decision = Decision::Free;
                report.witness = Some(Witness { d: d.clone(), n: rhs.clone(), sign: s, solution: cand });
                report.generator = Some(beta);
                report.generator_determinant = Some(det);
                if opts.prescreen && prescreen.outcome == Outcome::Free {
                    report.method = Method::Prescreen { reason: prescreen.reason };
                }
                return Ok(report);
            }
            log::debug!("formula at {cand:?} gave {beta:?}, which is not a generator");
        }
    }
    if let Some(sol) = any_solution {
        return Err(Error::Inconsistent(format!(
            "solution {sol:?} of x^2 + {a} y^2 = +-{n0} gives no verified generator for {}",
            analysis.id
        )));
    }
    if opts.prescreen && prescreen.outcome == Outcome::Free {
        return Err(Error::Inconsistent(format!(
            "prescreen rule {} says free but x^2 + {a} y^2 = +-{n0} has no solution",
            prescreen.reason
        )));
    }
    Ok(report)
}

/// Reports for `(H1, H2, H3)` in canonical order.
pub fn decide_biquadratic(p: &BiquadraticParams) -> Result<[FreenessReport; 3]> {
    decide_biquadratic_with(p, DecideOptions::default())
}

pub fn decide_biquadratic_with(p: &BiquadraticParams, opts: DecideOptions) -> Result<[FreenessReport; 3]> {
    let field = Field::Biquadratic(*p);
    let mut out = Vec::with_capacity(3);
    for slot in 0..3 {
        let analysis = hopf::analyze(&field, HopfStructureId::from_slot(slot))?;
        out.push(decide_biquadratic_slot(p, slot, &analysis, opts)?);
    }
    Ok(out.try_into().expect("three reports"))
}

/// Reports for every non-classical structure of the field, in canonical order.
pub fn decide(field: &Field, opts: DecideOptions) -> Result<Vec<FreenessReport>> {
    match field {
        Field::Cyclic(p) => Ok(vec![decide_cyclic_with(p, opts)?]),
        Field::Biquadratic(p) => Ok(decide_biquadratic_with(p, opts)?.to_vec()),
    }
}

// ---------------------------------------------------------------------------
// brute-force oracle

/// `D_beta` as a homogeneous quartic in `beta`: exponent vector to coefficient.
///
/// Column `i` of `sum_j beta_j M_j` is linear in `beta`, so the determinant
/// expands into 256 determinants with one block column each.
pub fn generator_polynomial(m: &RatMatrix) -> BTreeMap<[u8; 4], Rational> {
    let mut poly: BTreeMap<[u8; 4], Rational> = BTreeMap::new();
    for code in 0..256usize {
        let js = [code & 3, (code >> 2) & 3, (code >> 4) & 3, (code >> 6) & 3];
        let mut a = RatMatrix::zeros(4, 4);
        for (col, &j) in js.iter().enumerate() {
            for r in 0..4 {
                a[(r, col)] = m[(4 * j + r, col)].clone();
            }
        }
        let det = linalg::det(&a).expect("square");
        if det.is_zero() {
            continue;
        }
        let mut exps = [0u8; 4];
        for &j in &js {
            exps[j] += 1;
        }
        *poly.entry(exps).or_insert_with(Rational::zero) += det;
    }
    poly.retain(|_, c| !c.is_zero());
    poly
}

/// Largest oracle bound accepted; keeps every evaluation inside `i128`.
pub const MAX_ORACLE_BOUND: u64 = 10_000;

/// Scan `beta` in `[-bound, bound]^4` for a generator. Coordinates are tried
/// in the order `0, 1, -1, 2, -2, ...` and `beta` lexicographically in that
/// order, so the first hit is deterministic and tends to be small. The hit is
/// re-checked with an exact determinant before it is returned.
pub fn brute_force_generator(r: &ReductionReport, m: &RatMatrix, bound: u64) -> Result<Option<Beta>> {
    if bound > MAX_ORACLE_BOUND {
        return Err(Error::OracleBound(bound));
    }
    let poly = generator_polynomial(m);
    let lcm = poly
        .values()
        .chain(std::iter::once(&r.index))
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let scale = |c: &Rational| (c * Rational::from_integer(lcm.clone())).to_integer();
    let target = scale(&r.index);
    let terms: Vec<([u8; 4], BigInt)> = poly.iter().map(|(e, c)| (*e, scale(c))).collect();
    // 35 terms, each at most max|c| * bound^4
    let max_coeff = terms.iter().map(|(_, c)| c.abs()).max().unwrap_or_default();
    let worst: BigInt = &max_coeff * BigInt::from(bound).pow(4) * 64;
    if worst.bits() > 120 || target.bits() > 120 {
        return Err(Error::OracleBound(bound));
    }
    let terms: Vec<([u8; 4], i128)> = terms.into_iter().map(|(e, c)| (e, c.to_i128().expect("checked"))).collect();
    let target = target.to_i128().expect("checked");

    let b = bound as i64;
    let values: Vec<i64> = std::iter::once(0).chain((1..=b).flat_map(|v| [v, -v])).collect();
    let pow = |v: i64, e: u8| (v as i128).pow(u32::from(e));
    let hit = values.par_iter().find_map_first(|&b1| {
        for &b2 in &values {
            for &b3 in &values {
                // coefficients of the quartic in beta_4
                let mut coeff = [0i128; 5];
                for (e, c) in &terms {
                    coeff[e[3] as usize] += c * pow(b1, e[0]) * pow(b2, e[1]) * pow(b3, e[2]);
                }
                for &b4 in &values {
                    let x = b4 as i128;
                    let v = (((coeff[4] * x + coeff[3]) * x + coeff[2]) * x + coeff[1]) * x + coeff[0];
                    if v.abs() == target {
                        return Some([b1, b2, b3, b4]);
                    }
                }
            }
        }
        None
    });
    Ok(hit.map(|h| {
        let beta = h.map(BigInt::from);
        debug_assert!(hopf::test_generator(r, m, &beta));
        assert_eq!(generator_determinant(m, &beta).abs(), r.index, "polynomial and determinant disagree");
        beta
    }))
}

// ---------------------------------------------------------------------------
// summaries

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureSummary {
    /// Label in the user's numbering: `H1`, `H2`, `H3`, or `H` for cyclic fields.
    pub label: String,
    /// The square root defining the structure.
    pub subfield: String,
    /// Slot of the structure after canonical reordering.
    pub canonical_slot: usize,
    pub report: FreenessReport,
    pub reduction: ReductionReport,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSummary {
    pub field: Field,
    /// `case_1` ... `case_5` or `first` / `second` / `third`.
    pub family_class: String,
    pub basis: BasisDescriptor,
    pub structures: Vec<StructureSummary>,
}

pub fn summary(field: &Field) -> Result<FieldSummary> {
    summary_with(field, DecideOptions::default())
}

pub fn summary_with(field: &Field, opts: DecideOptions) -> Result<FieldSummary> {
    let basis = field.integral_basis();
    match field {
        Field::Cyclic(p) => {
            let report = decide_cyclic_with(p, opts)?;
            let reduction = hopf::analyze(field, report.structure)?.reduction;
            Ok(FieldSummary {
                field: *field,
                family_class: format!("case_{}", classify_cyclic_case(p).number()),
                basis,
                structures: vec![StructureSummary {
                    label: "H".into(),
                    subfield: report.structure.subfield_tag(field),
                    canonical_slot: 0,
                    report,
                    reduction,
                }],
            })
        }
        Field::Biquadratic(p) => {
            let reports = decide_biquadratic_with(p, opts)?;
            let mut structures = Vec::with_capacity(3);
            for label in 0..3 {
                let slot = p.perm[label];
                let mut report = reports[slot].clone();
                let reduction = hopf::analyze(field, report.structure)?.reduction;
                let subfield = report.structure.subfield_tag(field);
                report.structure = HopfStructureId::from_slot(label);
                structures.push(StructureSummary {
                    label: format!("H{}", label + 1),
                    subfield,
                    canonical_slot: slot,
                    report,
                    reduction,
                });
            }
            let family_class = match p.ty {
                BiquadType::First => "first",
                BiquadType::Second => "second",
                BiquadType::Third => "third",
            };
            Ok(FieldSummary { field: *field, family_class: family_class.into(), basis, structures })
        }
    }
}
