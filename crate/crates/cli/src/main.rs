use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use rayon::prelude::*;

use hopfq_core::error::Error;
use hopfq_core::fields::Field;
use hopfq_core::freeness::{self, Decision};
use hopfq_core::hopf::{self, HopfStructureId};
use hopfq_core::pell::{self, forms, PellProblem};
use hopfq_core::report::{self, OracleDoc, ReportBody, ReportDocument};

const EXIT_VALIDATION: u8 = 2;
const EXIT_INCONSISTENT: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "hopfq", version, about = "Freeness of rings of integers in quartic Hopf-Galois structures")]
#[command(allow_negative_numbers = true)]
struct Cli {
    /// Emit JSON (the only output format; accepted for scripts that pass it).
    #[arg(long, global = true, default_value_t = true)]
    json: bool,
    /// Pretty-print JSON documents.
    #[arg(long, global = true)]
    pretty: bool,
    /// Also search for a generator by brute force and compare.
    #[arg(long, global = true)]
    verify_oracle: bool,
    /// Box size for --verify-oracle.
    #[arg(long, global = true, default_value_t = 30)]
    oracle_bound: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cyclic quartic field Q(sqrt(a (d + b sqrt d))), d = b^2 + c^2.
    #[command(allow_negative_numbers = true)]
    Cyclic {
        #[arg(short)]
        a: i64,
        #[arg(short)]
        b: i64,
        #[arg(short)]
        c: i64,
    },
    /// Biquadratic field Q(sqrt m, sqrt n).
    #[command(allow_negative_numbers = true)]
    Biquadratic {
        #[arg(short)]
        m: i64,
        #[arg(short)]
        n: i64,
    },
    /// Solutions of x^2 - D y^2 = N.
    #[command(allow_negative_numbers = true)]
    Pell {
        #[arg(short = 'D')]
        d: BigInt,
        #[arg(short = 'N')]
        n: BigInt,
        /// Also look for a solution with b | x - c y (needs -b and -c).
        #[arg(short, requires = "c")]
        b: Option<BigInt>,
        #[arg(short, requires = "b")]
        c: Option<BigInt>,
        /// List every solution with |x|, |y| up to this bound.
        #[arg(long, default_value = "1000")]
        bound: BigInt,
    },
    /// Cycle of reduced forms of A x^2 + B xy + C y^2.
    #[command(name = "form-cycle", allow_negative_numbers = true)]
    FormCycle { a: BigInt, b: BigInt, c: BigInt },
    /// One field per line: `cyclic A B C` or `biquadratic M N`.
    Corpus {
        file: PathBuf,
        /// Worker threads; lines are still written in input order.
        #[arg(long)]
        parallel: Option<usize>,
    },
    /// Reduce a Gram matrix read from a file.
    #[command(name = "gram-file", allow_negative_numbers = true)]
    GramFile {
        #[arg(long)]
        gram: PathBuf,
        /// Candidate generator `b1,b2,b3,b4`.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        beta: Option<Vec<BigInt>>,
    },
}

#[derive(Clone, Copy)]
struct Oracle {
    enabled: bool,
    bound: u64,
}

fn exit_code(e: &Error) -> u8 {
    if e.is_validation() {
        EXIT_VALIDATION
    } else {
        EXIT_INCONSISTENT
    }
}

fn field_document(command: &str, field: &Field, oracle: Oracle) -> Result<ReportDocument, Error> {
    let summary = freeness::summary(field)?;
    let mut doc = report::field_doc(&summary);
    if oracle.enabled {
        for (s, sd) in summary.structures.iter().zip(doc.structures.iter_mut()) {
            let id = match field {
                Field::Cyclic(_) => HopfStructureId::CyclicNonclassical,
                Field::Biquadratic(_) => HopfStructureId::from_slot(s.canonical_slot),
            };
            let analysis = hopf::analyze(field, id)?;
            let hit = freeness::brute_force_generator(&analysis.reduction, &analysis.action, oracle.bound)?;
            let free = s.report.decision == Decision::Free;
            if hit.is_some() && !free {
                return Err(Error::Inconsistent(format!(
                    "{} decided not free but the oracle found {:?}",
                    s.label,
                    hit.as_ref().map(report::beta_strings)
                )));
            }
            if hit.is_none() && free {
                log::warn!("{}: generator lies outside the oracle box of size {}", s.label, oracle.bound);
            }
            sd.oracle = Some(OracleDoc {
                bound: oracle.bound,
                agrees: hit.is_some() == free,
                generator: hit.as_ref().map(report::beta_strings),
            });
        }
    }
    Ok(ReportDocument::new(command, ReportBody::Field(doc)))
}

fn run_pell(d: BigInt, n: BigInt, b: Option<BigInt>, c: Option<BigInt>, bound: BigInt) -> Result<ReportDocument, Error> {
    let problem = PellProblem::new(d.clone(), n.clone())?;
    let set = pell::solve_all(&problem);
    let mut doc = report::pell_doc(&d, &n, &set, &bound);
    if let (Some(b), Some(c)) = (b, c) {
        let sol = pell::find_with_modulus(&d, &n, &b, &c)?;
        doc.divisibility = Some(report::divisibility_doc(&b, &c, sol.as_ref()));
    }
    Ok(ReportDocument::new("pell", ReportBody::Pell(doc)))
}

fn run_form_cycle(a: BigInt, b: BigInt, c: BigInt) -> Result<ReportDocument, Error> {
    let f = forms::QuadForm::new(a, b, c);
    let start = forms::reduce(&f)?;
    let cycle = forms::form_cycle(&start)?;
    let one = forms::represents_one(&f)?;
    Ok(ReportDocument::new("form-cycle", ReportBody::FormCycle(report::form_cycle_doc(&f, &cycle, one))))
}

fn run_gram(path: &PathBuf, beta: Option<Vec<BigInt>>) -> Result<ReportDocument, Error> {
    let text = fs::read_to_string(path).map_err(|e| {
        Error::Hopf(hopf::HopfError::Parse { line: 0, msg: format!("cannot read {}: {e}", path.display()) })
    })?;
    let gram = hopf::parse_gram(&text)?;
    let analysis = hopf::analyze_gram(gram, HopfStructureId::CyclicNonclassical)?;
    let beta: Option<freeness::Beta> = match beta {
        None => None,
        Some(v) => Some(v.try_into().map_err(|v: Vec<BigInt>| {
            Error::Hopf(hopf::HopfError::Parse { line: 0, msg: format!("--beta needs 4 values, got {}", v.len()) })
        })?),
    };
    Ok(ReportDocument::new("gram-file", ReportBody::Gram(report::gram_doc(&analysis, beta.as_ref()))))
}

/// `Ok(None)` for blank and comment lines; field validation errors are kept
/// apart from syntax errors so they report their own kind.
fn parse_corpus_line(line: &str) -> Result<Option<Result<Field, Error>>, String> {
    let body = line.split('#').next().unwrap_or("").trim();
    if body.is_empty() {
        return Ok(None);
    }
    let mut words = body.split_whitespace();
    let verb = words.next().unwrap_or_default();
    let nums = words.map(str::parse::<i64>).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
    let field = match (verb, nums.as_slice()) {
        ("cyclic", &[a, b, c]) => Field::cyclic(a, b, c),
        ("biquadratic", &[m, n]) => Field::biquadratic(m, n),
        _ => return Err(format!("expected `cyclic A B C` or `biquadratic M N`, got {body:?}")),
    };
    Ok(Some(field.map_err(Error::from)))
}

fn corpus_document(lineno: usize, line: &str, oracle: Oracle) -> Option<(ReportDocument, u8)> {
    let doc = match parse_corpus_line(line) {
        Ok(None) => return None,
        Ok(Some(Err(e))) => (report::error_document("corpus", &e), exit_code(&e)),
        Ok(Some(Ok(field))) => {
            let command = match field {
                Field::Cyclic(_) => "cyclic",
                Field::Biquadratic(_) => "biquadratic",
            };
            match field_document(command, &field, oracle) {
                Ok(doc) => (doc, 0),
                Err(e) => (report::error_document(command, &e), exit_code(&e)),
            }
        }
        Err(msg) => {
            let body = ReportBody::Error(report::ErrorDoc { error: "parse".into(), message: msg });
            (ReportDocument::new("corpus", body), EXIT_VALIDATION)
        }
    };
    Some((doc.0.at_line(lineno), doc.1))
}

fn run_corpus(file: &PathBuf, parallel: Option<usize>, oracle: Oracle, pretty: bool) -> u8 {
    let text = match fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => {
            let body = ReportBody::Error(report::ErrorDoc { error: "io".into(), message: e.to_string() });
            emit(&ReportDocument::new("corpus", body), pretty);
            return EXIT_VALIDATION;
        }
    };
    let lines: Vec<(usize, &str)> = text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect();
    let work = || -> Vec<Option<(ReportDocument, u8)>> {
        lines.par_iter().map(|&(i, l)| corpus_document(i, l, oracle)).collect()
    };
    let results = match parallel {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(work),
            Err(e) => {
                log::warn!("cannot build a pool of {n} threads ({e}); using the default pool");
                work()
            }
        },
        None => work(),
    };
    let mut code = 0;
    for (doc, c) in results.into_iter().flatten() {
        emit(&doc, pretty);
        code = code.max(c);
    }
    code
}

fn emit(doc: &ReportDocument, pretty: bool) {
    let text = if pretty { serde_json::to_string_pretty(doc) } else { serde_json::to_string(doc) };
    println!("{}", text.expect("report documents always serialize"));
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("HOPFQ_LOG", "warn")).init();
    let cli = Cli::parse();
    let oracle = Oracle { enabled: cli.verify_oracle, bound: cli.oracle_bound };
    let (command, result) = match cli.command {
        Command::Cyclic { a, b, c } => ("cyclic", Field::cyclic(a, b, c).map_err(Error::from)
            .and_then(|f| field_document("cyclic", &f, oracle))),
        Command::Biquadratic { m, n } => ("biquadratic", Field::biquadratic(m, n).map_err(Error::from)
            .and_then(|f| field_document("biquadratic", &f, oracle))),
        Command::Pell { d, n, b, c, bound } => ("pell", run_pell(d, n, b, c, bound)),
        Command::FormCycle { a, b, c } => ("form-cycle", run_form_cycle(a, b, c)),
        Command::GramFile { gram, beta } => ("gram-file", run_gram(&gram, beta)),
        Command::Corpus { file, parallel } => return ExitCode::from(run_corpus(&file, parallel, oracle, cli.pretty)),
    };
    match result {
        Ok(doc) => {
            emit(&doc, cli.pretty);
            ExitCode::SUCCESS
        }
        Err(e) => {
            log::error!("{e}");
            emit(&report::error_document(command, &e), cli.pretty);
            ExitCode::from(exit_code(&e))
        }
    }
}
