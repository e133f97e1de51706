//! Serializable report documents. Every number is written as an exact decimal
//! or `p/q` string, so documents round-trip without loss.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::fields::{Field, FieldError};
use crate::freeness::{Beta, Decision, FieldSummary, Method, PrescreenVerdict, StructureSummary, Witness};
use crate::hopf::StructureAnalysis;
use crate::linalg::{RatMatrix, Rational};
use crate::pell::forms::QuadForm;
use crate::pell::{PellSolution, SolutionClassSet};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub command: String,
    /// 1-based input line for corpus runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    pub body: ReportBody,
}

impl ReportDocument {
    pub fn new(command: &str, body: ReportBody) -> Self {
        ReportDocument { schema_version: SCHEMA_VERSION, command: command.into(), line: None, body }
    }

    pub fn at_line(mut self, line: usize) -> Self {
        self.line = Some(line);
        self
    }

    pub fn is_error(&self) -> bool {
        matches!(self.body, ReportBody::Error(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReportBody {
    Field(FieldDoc),
    Pell(PellDoc),
    FormCycle(FormCycleDoc),
    Gram(GramDoc),
    Error(ErrorDoc),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDoc {
    pub family: String,
    pub family_class: String,
    pub params: BTreeMap<String, String>,
    /// Column `j` is `gamma_j` in the reference basis.
    pub integral_basis: Vec<Vec<String>>,
    pub structures: Vec<StructureDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureDoc {
    pub label: String,
    pub subfield: String,
    pub canonical_slot: usize,
    pub decision: Decision,
    pub method: Method,
    pub prescreen: PrescreenVerdict,
    pub rules: Vec<String>,
    pub index: String,
    pub reduced_matrix: Vec<Vec<String>>,
    /// Columns are a basis of the associated order in the Hopf basis.
    pub order_basis: Vec<Vec<String>>,
    pub witness: Option<WitnessDoc>,
    pub generator: Option<Vec<String>>,
    pub generator_determinant: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDoc {
    /// The equation is `x^2 - D y^2 = N`.
    pub d: String,
    pub n: String,
    pub sign: i8,
    pub x: String,
    pub y: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleDoc {
    pub bound: u64,
    pub generator: Option<Vec<String>>,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PellDoc {
    pub d: String,
    pub n: String,
    /// `empty`, `finite` or `indefinite`.
    pub class: String,
    /// All solutions for finite sets, one representative per class otherwise.
    pub representatives: Vec<[String; 2]>,
    pub unit: Option<[String; 2]>,
    pub bound: String,
    /// Every solution with `|x|, |y| <= bound`.
    pub solutions: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divisibility: Option<DivisibilityDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityDoc {
    /// Condition `b | x - c y`.
    pub b: String,
    pub c: String,
    pub solution: Option<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormCycleDoc {
    pub input: [String; 3],
    pub start: [String; 3],
    /// Forms visited after `start` until the cycle closes.
    pub cycle: Vec<[String; 3]>,
    pub represents_one: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GramDoc {
    pub index: String,
    pub content: String,
    pub reduced_matrix: Vec<Vec<String>>,
    pub order_basis: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator_determinant: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub is_generator: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorDoc {
    pub error: String,
    pub message: String,
}

impl From<&Error> for ErrorDoc {
    fn from(e: &Error) -> Self {
        let error = match e {
            Error::Field(f) => match f {
                FieldError::NotSquarefree(_) => "NotSquarefree",
                FieldError::NotCoprime(..) => "NotCoprime",
                FieldError::NonPositive(..) => "NonPositive",
                FieldError::EvenA(_) => "EvenA",
                FieldError::TooLarge(_) => "TooLarge",
                FieldError::TrivialRadicand(_) => "TrivialRadicand",
                FieldError::DegenerateProduct(..) => "DegenerateProduct",
            }
            .to_string(),
            other => other.kind().into(),
        };
        ErrorDoc { error, message: e.to_string() }
    }
}

fn rows(m: &RatMatrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| r.iter().map(Rational::to_string).collect()).collect()
}

fn pair(s: &PellSolution) -> [String; 2] {
    [s.x.to_string(), s.y.to_string()]
}

pub fn beta_strings(b: &Beta) -> Vec<String> {
    b.iter().map(BigInt::to_string).collect()
}

fn form(f: &QuadForm) -> [String; 3] {
    [f.a.to_string(), f.b.to_string(), f.c.to_string()]
}

fn witness(w: &Witness) -> WitnessDoc {
    WitnessDoc {
        d: w.d.to_string(),
        n: w.n.to_string(),
        sign: w.sign,
        x: w.solution.x.to_string(),
        y: w.solution.y.to_string(),
    }
}

pub fn structure_doc(s: &StructureSummary) -> StructureDoc {
    let r = &s.report;
    StructureDoc {
        label: s.label.clone(),
        subfield: s.subfield.clone(),
        canonical_slot: s.canonical_slot,
        decision: r.decision,
        method: r.method.clone(),
        prescreen: r.prescreen.clone(),
        rules: r.rules.clone(),
        index: r.index.to_string(),
        reduced_matrix: rows(&s.reduction.d),
        order_basis: rows(&s.reduction.order_basis),
        witness: r.witness.as_ref().map(witness),
        generator: r.generator.as_ref().map(beta_strings),
        generator_determinant: r.generator_determinant.as_ref().map(Rational::to_string),
        oracle: None,
    }
}

pub fn field_params(field: &Field) -> (String, BTreeMap<String, String>) {
    let mut params = BTreeMap::new();
    let mut put = |k: &str, v: i64| {
        params.insert(k.to_string(), v.to_string());
    };
    let family = match field {
        Field::Cyclic(p) => {
            put("a", p.a);
            put("b", p.b);
            put("c", p.c);
            put("d", p.d);
            "cyclic"
        }
        Field::Biquadratic(p) => {
            put("m", p.user[0]);
            put("n", p.user[1]);
            put("k", p.user[2]);
            put("d", p.d);
            put("canonical_m", p.m);
            put("canonical_n", p.n);
            put("canonical_k", p.k);
            "biquadratic"
        }
    };
    (family.into(), params)
}

pub fn field_doc(s: &FieldSummary) -> FieldDoc {
    let (family, params) = field_params(&s.field);
    FieldDoc {
        family,
        family_class: s.family_class.clone(),
        params,
        integral_basis: (0..4).map(|j| s.basis.gamma(j).iter().map(Rational::to_string).collect()).collect(),
        structures: s.structures.iter().map(structure_doc).collect(),
    }
}

pub fn pell_doc(d: &BigInt, n: &BigInt, set: &SolutionClassSet, bound: &BigInt) -> PellDoc {
    let (class, representatives, unit) = match set {
        SolutionClassSet::Empty => ("empty", vec![], None),
        SolutionClassSet::Finite { solutions } => ("finite", solutions.iter().map(pair).collect(), None),
        SolutionClassSet::Indefinite { class_reps, unit: (t, u) } => (
            "indefinite",
            class_reps.iter().map(pair).collect(),
            Some([t.to_string(), u.to_string()]),
        ),
    };
    PellDoc {
        d: d.to_string(),
        n: n.to_string(),
        class: class.into(),
        representatives,
        unit,
        bound: bound.to_string(),
        solutions: set.solutions_within(d, bound).iter().map(pair).collect(),
        divisibility: None,
    }
}

pub fn divisibility_doc(b: &BigInt, c: &BigInt, sol: Option<&PellSolution>) -> DivisibilityDoc {
    DivisibilityDoc { b: b.to_string(), c: c.to_string(), solution: sol.map(pair) }
}

pub fn form_cycle_doc(input: &QuadForm, cycle: &[QuadForm], represents_one: bool) -> FormCycleDoc {
    FormCycleDoc {
        input: form(input),
        start: form(&cycle[0]),
        cycle: cycle[1..].iter().map(form).collect(),
        represents_one,
    }
}

pub fn gram_doc(a: &StructureAnalysis, beta: Option<&Beta>) -> GramDoc {
    let r = &a.reduction;
    let det = beta.map(|b| crate::hopf::generator_determinant(&a.action, b));
    GramDoc {
        index: r.index.to_string(),
        content: r.content.to_string(),
        reduced_matrix: rows(&r.d),
        order_basis: rows(&r.order_basis),
        beta: beta.map(beta_strings),
        is_generator: det.as_ref().map(|d| num_traits::Signed::abs(d) == r.index),
        generator_determinant: det.map(|d| d.to_string()),
    }
}

pub fn error_document(command: &str, e: &Error) -> ReportDocument {
    ReportDocument::new(command, ReportBody::Error(e.into()))
}
