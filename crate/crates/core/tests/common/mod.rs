#![allow(dead_code)]

use hopfq_core::fields::{classify_cyclic_case, BiquadType, CyclicCase, Field};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn beta(v: [i64; 4]) -> [BigInt; 4] {
    v.map(BigInt::from)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Parameter sets for one cyclic case, drawn with `|a|, b, c <= 30`.
pub fn cyclic_samples(case: CyclicCase, count: usize, seed: u64) -> Vec<(i64, i64, i64)> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    let mut guard = 0;
    while out.len() < count {
        guard += 1;
        assert!(guard < 1_000_000, "no samples for {case:?}");
        let a = r.gen_range(-15..=15) * 2 + 1;
        let (b, c) = (r.gen_range(1..=30), r.gen_range(1..=30));
        if let Ok(Field::Cyclic(p)) = Field::cyclic(a, b, c) {
            if classify_cyclic_case(&p) == case && !out.contains(&(a, b, c)) {
                out.push((a, b, c));
            }
        }
    }
    out
}

pub fn biquadratic_type(f: &Field) -> Option<BiquadType> {
    match f {
        Field::Biquadratic(p) => Some(p.ty),
        _ => None,
    }
}

/// Parameter sets `(m, n)` for one biquadratic type with `|m|, |n| <= 30`.
pub fn biquadratic_samples(ty: BiquadType, count: usize, seed: u64) -> Vec<(i64, i64)> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    let mut guard = 0;
    while out.len() < count {
        guard += 1;
        assert!(guard < 1_000_000, "no samples for {ty:?}");
        let (m, n) = (r.gen_range(-30..=30), r.gen_range(-30..=30));
        if let Ok(f) = Field::biquadratic(m, n) {
            if biquadratic_type(&f) == Some(ty) && !out.contains(&(m, n)) {
                out.push((m, n));
            }
        }
    }
    out
}

pub const CASES: [CyclicCase; 5] =
    [CyclicCase::Case1, CyclicCase::Case2, CyclicCase::Case3, CyclicCase::Case4, CyclicCase::Case5];
pub const TYPES: [BiquadType; 3] = [BiquadType::First, BiquadType::Second, BiquadType::Third];

/// The 50-field corpus: 4 fields per cyclic case and 10 per biquadratic type,
/// all parameters at most 30 in absolute value.
pub fn corpus() -> Vec<Field> {
    let mut out = Vec::new();
    for (i, case) in CASES.iter().enumerate() {
        for (a, b, c) in cyclic_samples(*case, 4, 100 + i as u64) {
            out.push(Field::cyclic(a, b, c).unwrap());
        }
    }
    for (i, ty) in TYPES.iter().enumerate() {
        for (m, n) in biquadratic_samples(*ty, 10, 200 + i as u64) {
            out.push(Field::biquadratic(m, n).unwrap());
        }
    }
    out
}

pub fn describe(f: &Field) -> String {
    match f {
        Field::Cyclic(p) => format!("cyclic({},{},{})", p.a, p.b, p.c),
        Field::Biquadratic(p) => format!("biquadratic({},{})", p.user[0], p.user[1]),
    }
}

/// Collects sub-check failures and prints one line for the criterion.
pub struct Criterion {
    name: &'static str,
    checks: usize,
    failures: Vec<String>,
}

impl Criterion {
    pub fn new(name: &'static str) -> Self {
        Criterion { name, checks: 0, failures: Vec::new() }
    }

    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn finish(self) {
        if self.failures.is_empty() {
            println!("{}: PASS ({} checks)", self.name, self.checks);
        } else {
            println!("{}: FAIL ({} of {} checks failed)", self.name, self.failures.len(), self.checks);
            for f in &self.failures {
                println!("  - {f}");
            }
            panic!("{} failed: {:?}", self.name, self.failures);
        }
    }
}
