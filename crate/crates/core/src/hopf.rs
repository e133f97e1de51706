//! Hopf-Galois structures on quartic Galois fields and their action on the
//! ring of integers.
//!
//! A Hopf algebra basis element is stored as the 4x4 matrix of its action on
//! the field in the current basis (column `j` is the image of the `j`-th basis
//! vector), so the Gram matrix is just the list of these four operators.
//! Non-classical structures are built from the classical automorphisms and
//! multiplication by a quadratic element.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fields::{BasisDescriptor, BiquadraticParams, CyclicQuarticParams, Field};
use crate::linalg::{self, rat, LinalgError, RatMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HopfError {
    #[error("basis descriptor is singular")]
    SingularDescriptor,
    #[error("{0} is not a structure of this field")]
    WrongFamily(HopfStructureId),
    #[error("Gram file line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HopfStructureId {
    Classical,
    CyclicNonclassical,
    BiquadH1,
    BiquadH2,
    BiquadH3,
}

impl HopfStructureId {
    /// The non-classical structures of a field, in canonical order.
    pub fn nonclassical(field: &Field) -> Vec<HopfStructureId> {
        match field {
            Field::Cyclic(_) => vec![HopfStructureId::CyclicNonclassical],
            Field::Biquadratic(_) => vec![HopfStructureId::BiquadH1, HopfStructureId::BiquadH2, HopfStructureId::BiquadH3],
        }
    }

    /// Canonical slot (0, 1, 2) of the quadratic subfield defining a biquadratic structure.
    pub fn slot(self) -> Option<usize> {
        match self {
            HopfStructureId::BiquadH1 => Some(0),
            HopfStructureId::BiquadH2 => Some(1),
            HopfStructureId::BiquadH3 => Some(2),
            _ => None,
        }
    }

    pub fn from_slot(slot: usize) -> HopfStructureId {
        [HopfStructureId::BiquadH1, HopfStructureId::BiquadH2, HopfStructureId::BiquadH3][slot]
    }

    /// The square root that defines the structure.
    pub fn subfield_tag(self, field: &Field) -> String {
        match (self, field) {
            (HopfStructureId::Classical, _) => "Q".into(),
            (HopfStructureId::CyclicNonclassical, Field::Cyclic(p)) => format!("sqrt({})", p.d),
            (id, Field::Biquadratic(p)) => match id.slot() {
                Some(s) => format!("sqrt({})", p.canonical()[s]),
                None => "?".into(),
            },
            _ => "?".into(),
        }
    }
}

impl fmt::Display for HopfStructureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            HopfStructureId::Classical => "classical",
            HopfStructureId::CyclicNonclassical => "cyclic_nonclassical",
            HopfStructureId::BiquadH1 => "biquad_H1",
            HopfStructureId::BiquadH2 => "biquad_H2",
            HopfStructureId::BiquadH3 => "biquad_H3",
        };
        f.write_str(s)
    }
}

/// Structure constants of the field over its reference basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultTable {
    /// `products[i][j]` = coordinates of `e_i e_j`.
    products: Vec<Vec<Vec<Rational>>>,
}

fn unit_vec(i: usize) -> Vec<Rational> {
    (0..4).map(|k| if k == i { rat(1) } else { rat(0) }).collect()
}

fn scaled(i: usize, s: Rational) -> Vec<Rational> {
    (0..4).map(|k| if k == i { s.clone() } else { rat(0) }).collect()
}

impl MultTable {
    pub fn product(&self, i: usize, j: usize) -> &[Rational] {
        &self.products[i][j]
    }

    /// Product of two elements given by coordinates.
    pub fn mul(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![rat(0); 4];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let coef = xi * yj;
                for (o, p) in out.iter_mut().zip(&self.products[i][j]) {
                    *o += &coef * p;
                }
            }
        }
        out
    }

    /// Matrix of multiplication by `x`.
    pub fn multiplication_matrix(&self, x: &[Rational]) -> RatMatrix {
        let mut m = RatMatrix::zeros(4, 4);
        for j in 0..4 {
            let col = self.mul(x, &unit_vec(j));
            for (i, v) in col.into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }
}

fn symmetric_table(entries: &[((usize, usize), Vec<Rational>)]) -> MultTable {
    let mut products = vec![vec![vec![rat(0); 4]; 4]; 4];
    for j in 0..4 {
        products[0][j] = unit_vec(j);
        products[j][0] = unit_vec(j);
    }
    for ((i, j), v) in entries {
        products[*i][*j] = v.clone();
        products[*j][*i] = v.clone();
    }
    MultTable { products }
}

fn cyclic_table(p: &CyclicQuarticParams) -> MultTable {
    let (a, b, c, d) = (rat(p.a), rat(p.b), rat(p.c), rat(p.d));
    let vec4 = |x: [Rational; 4]| x.to_vec();
    symmetric_table(&[
        ((1, 1), scaled(0, d.clone())),
        ((2, 2), vec4([&a * &d, &a * &b, rat(0), rat(0)])),
        ((3, 3), vec4([&a * &d, -(&a * &b), rat(0), rat(0)])),
        ((2, 3), scaled(1, &a * &c)),
        ((1, 2), vec4([rat(0), rat(0), b.clone(), c.clone()])),
        ((1, 3), vec4([rat(0), rat(0), c.clone(), -b.clone()])),
    ])
}

fn biquadratic_table(p: &BiquadraticParams) -> MultTable {
    let (m, n, k, d) = (rat(p.m), rat(p.n), rat(p.k), rat(p.d));
    symmetric_table(&[
        ((1, 1), scaled(0, m.clone())),
        ((2, 2), scaled(0, n.clone())),
        ((3, 3), scaled(0, k)),
        ((1, 2), scaled(3, d.clone())),
        ((1, 3), scaled(2, &m / &d)),
        ((2, 3), scaled(1, &n / &d)),
    ])
}

pub fn mult_table(field: &Field) -> MultTable {
    match field {
        Field::Cyclic(p) => cyclic_table(p),
        Field::Biquadratic(p) => biquadratic_table(p),
    }
}

/// Matrix sending `e_j` to `sign_j * e_{target_j}`.
fn signed_permutation(images: [(i64, usize); 4]) -> RatMatrix {
    let mut m = RatMatrix::zeros(4, 4);
    for (j, (s, i)) in images.into_iter().enumerate() {
        m[(i, j)] = rat(s);
    }
    m
}

/// The Galois automorphisms over the reference basis: `[1, s, s^2, s^3]` with
/// `s: z -> w -> -z` for cyclic fields, `[1, s, t, st]` for biquadratic ones.
pub fn classical_automorphisms(field: &Field) -> [RatMatrix; 4] {
    match field {
        Field::Cyclic(_) => [
            RatMatrix::identity(4),
            signed_permutation([(1, 0), (-1, 1), (1, 3), (-1, 2)]),
            signed_permutation([(1, 0), (1, 1), (-1, 2), (-1, 3)]),
            signed_permutation([(1, 0), (-1, 1), (-1, 3), (1, 2)]),
        ],
        Field::Biquadratic(_) => [
            RatMatrix::identity(4),
            signed_permutation([(1, 0), (-1, 1), (1, 2), (-1, 3)]),
            signed_permutation([(1, 0), (1, 1), (-1, 2), (-1, 3)]),
            signed_permutation([(1, 0), (-1, 1), (-1, 2), (1, 3)]),
        ],
    }
}

/// Action of a Hopf basis `w_1..w_4` on the field, one operator per `w_i`,
/// expressed in some basis of the field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramMatrix {
    ops: Vec<RatMatrix>,
}

impl GramMatrix {
    pub fn from_operators(ops: Vec<RatMatrix>) -> Self {
        assert!(ops.len() == 4 && ops.iter().all(|m| m.rows() == 4 && m.cols() == 4));
        GramMatrix { ops }
    }

    /// Build from `entries[i][j]` = coordinates of `w_i . gamma_j`.
    pub fn from_entries(entries: &[Vec<Vec<Rational>>]) -> Self {
        let ops = entries
            .iter()
            .map(|row| {
                let mut m = RatMatrix::zeros(4, 4);
                for (j, coords) in row.iter().enumerate() {
                    for (k, x) in coords.iter().enumerate() {
                        m[(k, j)] = x.clone();
                    }
                }
                m
            })
            .collect();
        Self::from_operators(ops)
    }

    pub fn operators(&self) -> &[RatMatrix] {
        &self.ops
    }

    /// Coordinates of `w_i . gamma_j`.
    pub fn entry(&self, i: usize, j: usize) -> Vec<Rational> {
        self.ops[i].column(j)
    }

    pub fn entries(&self) -> Vec<Vec<Vec<Rational>>> {
        (0..4).map(|i| (0..4).map(|j| self.entry(i, j)).collect()).collect()
    }
}

pub fn gram_classical(field: &Field) -> GramMatrix {
    GramMatrix::from_operators(classical_automorphisms(field).to_vec())
}

fn add(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    RatMatrix::from_vec(4, 4, a.entries().iter().zip(b.entries()).map(|(x, y)| x + y).collect())
}

fn sub(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    RatMatrix::from_vec(4, 4, a.entries().iter().zip(b.entries()).map(|(x, y)| x - y).collect())
}

/// Basis `(Id, g_fix, g + g', x (g - g'))` where `g_fix` fixes the quadratic
/// element `x` and `g, g'` are the two automorphisms moving it.
pub fn gram_nonclassical(field: &Field, id: HopfStructureId) -> Result<GramMatrix, HopfError> {
    let [one, s, t, st] = classical_automorphisms(field);
    let table = mult_table(field);
    let (fix, g, h, elem) = match (field, id) {
        (Field::Cyclic(_), HopfStructureId::CyclicNonclassical) => (t, s, st, 1),
        (Field::Biquadratic(_), HopfStructureId::BiquadH1) => (t, s, st, 1),
        (Field::Biquadratic(_), HopfStructureId::BiquadH2) => (s, t, st, 2),
        (Field::Biquadratic(_), HopfStructureId::BiquadH3) => (st, s, t, 3),
        _ => return Err(HopfError::WrongFamily(id)),
    };
    let lx = table.multiplication_matrix(&unit_vec(elem));
    Ok(GramMatrix::from_operators(vec![one, fix, add(&g, &h), lx.mul(&sub(&g, &h))]))
}

pub fn gram(field: &Field, id: HopfStructureId) -> Result<GramMatrix, HopfError> {
    match id {
        HopfStructureId::Classical => Ok(gram_classical(field)),
        _ => gram_nonclassical(field, id),
    }
}

/// Re-express a Gram matrix given over the reference basis in the basis
/// described by `desc`.
pub fn change_basis(g: &GramMatrix, desc: &BasisDescriptor) -> Result<GramMatrix, HopfError> {
    let p = desc.matrix();
    let p_inv = linalg::inverse(p).map_err(|_| HopfError::SingularDescriptor)?;
    Ok(GramMatrix::from_operators(g.ops.iter().map(|op| p_inv.mul(&op.mul(p))).collect()))
}

/// The 16x4 matrix whose block `j` has column `i` equal to `w_i . gamma_j`.
pub fn action_matrix(g: &GramMatrix) -> RatMatrix {
    let mut m = RatMatrix::zeros(16, 4);
    for j in 0..4 {
        for i in 0..4 {
            for k in 0..4 {
                m[(4 * j + k, i)] = g.ops[i][(k, j)].clone();
            }
        }
    }
    m
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionReport {
    /// Reduced matrix: content times the HNF of the primitive part.
    pub d: RatMatrix,
    pub content: Rational,
    pub index: Rational,
    /// Columns are the coordinates, in the Hopf basis, of a basis of the
    /// associated order. Since `h = sum x_i w_i` preserves the ring of integers
    /// exactly when `D x` is integral, this is `D^-1`.
    pub order_basis: RatMatrix,
}

pub fn reduction_report(m: &RatMatrix) -> Result<ReductionReport, HopfError> {
    let r = linalg::reduce_action_matrix(m)?;
    let index = linalg::det(&r.hnf)?.abs();
    let order_basis = linalg::inverse(&r.hnf)?;
    Ok(ReductionReport { d: r.hnf, content: r.content, index, order_basis })
}

/// `det(sum_j beta_j M_j)` for the blocks `M_j` of the action matrix.
pub fn generator_determinant(m: &RatMatrix, beta: &[BigInt; 4]) -> Rational {
    let mut acc = RatMatrix::zeros(4, 4);
    for (j, bj) in beta.iter().enumerate() {
        if bj.is_zero() {
            continue;
        }
        let s = Rational::from_integer(bj.clone());
        for r in 0..4 {
            for c in 0..4 {
                acc[(r, c)] += &s * &m[(4 * j + r, c)];
            }
        }
    }
    linalg::det(&acc).expect("square")
}

pub fn test_generator(r: &ReductionReport, m: &RatMatrix, beta: &[BigInt; 4]) -> bool {
    generator_determinant(m, beta).abs() == r.index
}

/// Everything computed for one structure over the field's integral basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureAnalysis {
    pub id: HopfStructureId,
    pub gram: GramMatrix,
    pub action: RatMatrix,
    pub reduction: ReductionReport,
}

pub fn analyze(field: &Field, id: HopfStructureId) -> Result<StructureAnalysis, HopfError> {
    let gram = change_basis(&gram(field, id)?, &field.integral_basis())?;
    let action = action_matrix(&gram);
    let reduction = reduction_report(&action)?;
    Ok(StructureAnalysis { id, gram, action, reduction })
}

pub fn analyze_gram(gram: GramMatrix, id: HopfStructureId) -> Result<StructureAnalysis, HopfError> {
    let action = action_matrix(&gram);
    let reduction = reduction_report(&action)?;
    Ok(StructureAnalysis { id, gram, action, reduction })
}

/// Parse a Gram matrix from text: four non-empty lines, each with four
/// whitespace-separated entries `p/q,p/q,p/q,p/q`. `#` starts a comment.
pub fn parse_gram(text: &str) -> Result<GramMatrix, HopfError> {
    let mut rows = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| HopfError::Parse { line: lineno + 1, msg };
        let entries: Vec<&str> = line.split_whitespace().collect();
        if entries.len() != 4 {
            return Err(err(format!("expected 4 entries, found {}", entries.len())));
        }
        let mut row = Vec::with_capacity(4);
        for entry in entries {
            let coords: Vec<&str> = entry.split(',').collect();
            if coords.len() != 4 {
                return Err(err(format!("entry {entry:?} does not have 4 coordinates")));
            }
            let parsed = coords
                .iter()
                .map(|c| c.parse::<Rational>().map_err(|e| err(format!("bad rational {c:?}: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            row.push(parsed);
        }
        rows.push(row);
    }
    if rows.len() != 4 {
        return Err(HopfError::Parse { line: 0, msg: format!("expected 4 rows, found {}", rows.len()) });
    }
    Ok(GramMatrix::from_entries(&rows))
}
