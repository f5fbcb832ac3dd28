//! Command-line front end: searches, matrix witnesses, subgroup
//! classification, verification sweeps, and certificate rechecks, all
//! emitted as JSON certificates on standard output (human summaries go to
//! standard error).
//!
//! Exit codes: 0 success, 1 verification failure, 2 bad hypothesis or
//! invalid parameters, 3 resource cap exceeded, 4 input parse error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use forge_core::cert::{
    classify_certificate, from_json, recheck_certificate, recheck_count_report,
    recheck_verify_all, search_certificate, to_json, verify_all_report, witness_certificate,
    Caps, Certificate, CheckOutcome, ClassificationJson, CountReportJson, RecheckReport,
    VerifyAllReport, SCHEMA_VERSION,
};
use forge_core::gsp::{Matrix, SympSpace};
use forge_core::poly::{count_report_cell, CountKind};
use forge_core::{Error, PrimePower, Result};

#[derive(Parser)]
#[command(
    name = "forge",
    version,
    about = "Construct and certify irreducible palindromic polynomials, their symplectic \
             matrix realizations, and transvection-containing subgroup classifications \
             over finite fields"
)]
struct Cli {
    /// Write the JSON output to this file instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Omit timestamps so identical invocations emit byte-identical JSON.
    #[arg(long, global = true)]
    deterministic: bool,

    /// Override both resource ceilings (enumeration sweep size and group
    /// closure size) with one value; takes precedence over FORGE_CAP.
    #[arg(long, global = true, value_name = "N")]
    cap: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one closed-form count over F_q, optionally checking it
    /// against exhaustive enumeration.
    Count {
        /// Field order (any prime power).
        #[arg(long)]
        q: u64,
        /// Degree parameter of the counted family.
        #[arg(long)]
        n: u32,
        /// Which quantity to evaluate.
        #[arg(long, value_enum)]
        which: Which,
        /// Also run the exhaustive enumeration and compare.
        #[arg(long)]
        verify: bool,
    },
    /// Find the first (in encoding order) monic irreducible palindromic
    /// polynomial of the given even degree with nonzero trace over F_q.
    Search {
        /// Field order (prime power, at least 5).
        #[arg(long)]
        q: u64,
        /// Target degree (even; the characteristic must not divide deg/2).
        #[arg(long)]
        deg: u32,
    },
    /// Search over F_ell, realize the found polynomial as a matrix in
    /// Sp_2n(F_ell), pair it with a transvection, and (within the closure
    /// cap) verify the pair generates the full symplectic group.
    Witness {
        /// Prime field characteristic (at least 5, not dividing n).
        #[arg(long)]
        ell: u64,
        /// Half of the matrix dimension.
        #[arg(long)]
        n: u32,
    },
    /// Classify the subgroup of GSp_2n(F_ell) generated by the matrices
    /// in a file: reducible, imprimitive, or containing Sp_2n.
    Classify {
        /// Generator file: one matrix per line as (2n)^2 space-separated
        /// integers (row-major); '#' starts a comment.
        #[arg(long, value_name = "FILE")]
        gens: PathBuf,
        /// Prime field characteristic.
        #[arg(long)]
        ell: u64,
        /// Half of the matrix dimension (1 or 2).
        #[arg(long)]
        n: u32,
    },
    /// Check every closed-form count against enumeration for q <= qmax,
    /// n <= nmax, and recompute the fixed full-group closure cells.
    VerifyAll {
        /// Largest field order to sweep.
        #[arg(long)]
        qmax: u64,
        /// Largest degree parameter to sweep.
        #[arg(long)]
        nmax: u32,
    },
    /// Re-run the checks named inside a stored certificate or report.
    Recheck {
        /// A certificate, verification report, or count report JSON file.
        #[arg(long, value_name = "FILE")]
        cert: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    /// Monic irreducibles of degree n.
    Irreducible,
    /// Monic irreducibles of degree n with nonzero trace.
    NonzeroTrace,
    /// Elements alpha of F_{q^n} with x^2 - alpha x + 1 reducible.
    ReducibleAlpha,
    /// Lower bound on elements giving irreducible palindromic lifts.
    #[value(name = "bound-M")]
    BoundM,
}

impl Which {
    fn kind(self) -> CountKind {
        match self {
            Which::Irreducible => CountKind::Irreducible,
            Which::NonzeroTrace => CountKind::NonzeroTrace,
            Which::ReducibleAlpha => CountKind::ReducibleAlpha,
            Which::BoundM => CountKind::BoundM,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::CapExceeded { .. } => 3,
        Error::Parse(_) => 4,
        Error::BadHypothesis(_)
        | Error::NotPrime(_)
        | Error::NotPrimePower(_)
        | Error::Overflow { .. }
        | Error::BadTower(_)
        | Error::NoTransvection => 2,
        _ => 1,
    }
}

fn run(cli: &Cli) -> Result<u8> {
    let caps = Caps::resolve(cli.cap, env_cap()?);
    match &cli.command {
        Command::Count {
            q,
            n,
            which,
            verify,
        } => {
            let q = PrimePower::new(*q)?;
            let report = count_report_cell(&q, *n, which.kind(), *verify, caps.enumeration)?;
            emit(&cli.out, &to_json(&CountReportJson::from(&report)))?;
            eprintln!("{report}");
            Ok(if report.agree { 0 } else { 1 })
        }
        Command::Search { q, deg } => {
            let q = PrimePower::new(*q)?;
            let cert = search_certificate(&q, *deg, &caps, cli.deterministic)?;
            emit(&cli.out, &to_json(&cert))?;
            eprintln!(
                "search q={} degree={}: found a polynomial passing {} build-time checks",
                q.value(),
                deg,
                cert.checks.len()
            );
            Ok(0)
        }
        Command::Witness { ell, n } => {
            let cert = witness_certificate(*ell, *n, &caps, cli.deterministic)?;
            emit(&cli.out, &to_json(&cert))?;
            let stats = cert.closure.as_ref().expect("witness certificates carry closure stats");
            if stats.verified {
                eprintln!(
                    "witness l={ell} n={n}: closure verified, {} elements of multiplier 1 = |Sp_{}(F_{ell})|",
                    stats
                        .multiplier_one
                        .as_ref()
                        .expect("verified closures carry counts"),
                    2 * n
                );
            } else {
                eprintln!(
                    "witness l={ell} n={n}: closure unverified, |Sp_{}(F_{ell})| = {} exceeds the cap {}",
                    2 * n,
                    stats.expected_sp_order,
                    caps.closure
                );
            }
            Ok(0)
        }
        Command::Classify { gens, ell, n } => {
            if *n == 0 || *n > 2 {
                return Err(Error::BadHypothesis(format!(
                    "classification is implemented for half-dimension 1 or 2, got n = {n}"
                )));
            }
            // Validate the space (prime l) before touching the file so a
            // bad field order reports as a hypothesis error, not a parse
            // error.
            SympSpace::new(*ell, *n as usize)?;
            let matrices = parse_generators(gens, *ell, *n)?;
            let cert = classify_certificate(*ell, *n as usize, &matrices, &caps, cli.deterministic)?;
            emit(&cli.out, &to_json(&cert))?;
            let stats = cert.closure.as_ref().expect("classify certificates carry closure stats");
            eprintln!(
                "classify l={ell} n={n}: {} ({} generators, group order {})",
                classification_label(
                    cert.classification
                        .as_ref()
                        .expect("classify certificates carry a classification")
                ),
                matrices.len(),
                stats
                    .total
                    .as_ref()
                    .expect("classify closures carry counts"),
            );
            Ok(0)
        }
        Command::VerifyAll { qmax, nmax } => {
            let report = verify_all_report(*qmax, *nmax, &caps, cli.deterministic)?;
            emit(&cli.out, &to_json(&report))?;
            summarize_verify_all(&report);
            Ok(if !report.all_pass {
                1
            } else if report.any_capped {
                3
            } else {
                0
            })
        }
        Command::Recheck { cert } => {
            let text = fs::read_to_string(cert).map_err(|e| {
                Error::Parse(format!("cannot read {}: {e}", cert.display()))
            })?;
            let report = recheck_any(&text, &caps)?;
            emit(&cli.out, &recheck_json(&report))?;
            eprint!("{report}");
            eprintln!(
                "recheck: {} checks, all_pass={} any_capped={}",
                report.outcomes.len(),
                report.all_pass(),
                report.any_capped()
            );
            Ok(if report.any_failed() {
                1
            } else if report.any_capped() {
                3
            } else {
                0
            })
        }
    }
}

fn env_cap() -> Result<Option<u64>> {
    match std::env::var("FORGE_CAP") {
        Ok(raw) => raw
            .trim()
            .parse::<u64>()
            .map(Some)
            .map_err(|_| Error::Parse(format!("FORGE_CAP='{raw}' is not a nonnegative integer"))),
        Err(_) => Ok(None),
    }
}

fn emit(out: &Option<PathBuf>, json: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, format!("{json}\n")).map_err(|e| {
            Error::CheckFailed(format!("cannot write {}: {e}", path.display()))
        }),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            match stdout
                .write_all(json.as_bytes())
                .and_then(|()| stdout.write_all(b"\n"))
            {
                Ok(()) => Ok(()),
                // The reader went away (e.g. piped into head); not an error.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                Err(e) => Err(Error::CheckFailed(format!(
                    "cannot write to standard output: {e}"
                ))),
            }
        }
    }
}

/// Parse a generator file: one matrix per line as (2n)^2 space-separated
/// nonnegative integers (row-major, reduced mod l); '#' starts a comment.
fn parse_generators(path: &Path, l: u64, n: u32) -> Result<Vec<Matrix>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    let d = 2 * n as usize;
    let mut matrices = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let entries = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<u64>().map_err(|_| {
                    Error::Parse(format!(
                        "line {}: '{tok}' is not a nonnegative integer",
                        idx + 1
                    ))
                })
            })
            .collect::<Result<Vec<u64>>>()?;
        if entries.len() != d * d {
            return Err(Error::Parse(format!(
                "line {}: expected {} entries for a {d}x{d} matrix, found {}",
                idx + 1,
                d * d,
                entries.len()
            )));
        }
        let rows: Vec<Vec<u64>> = entries.chunks(d).map(|c| c.to_vec()).collect();
        matrices.push(Matrix::from_rows(l, &rows)?);
    }
    if matrices.is_empty() {
        return Err(Error::Parse(
            "the generator file contains no matrices".into(),
        ));
    }
    Ok(matrices)
}

fn classification_label(c: &ClassificationJson) -> String {
    match c {
        ClassificationJson::Reducible { subspace } => {
            format!("reducible (invariant subspace of dimension {})", subspace.len())
        }
        ClassificationJson::Imprimitive { blocks } => {
            format!("imprimitive ({} permuted blocks)", blocks.len())
        }
        ClassificationJson::ContainsSp { order } => {
            format!("contains-sp (multiplier-one order {order})")
        }
    }
}

fn summarize_verify_all(report: &VerifyAllReport) {
    eprintln!(
        "verify-all q<={} n<={}: {} count cells, {} closure cells; all_pass={} any_capped={}",
        report.q_max,
        report.n_max,
        report.count_reports.len(),
        report.closure_checks.len(),
        report.all_pass,
        report.any_capped
    );
    for r in &report.count_reports {
        if !r.agree {
            let q = (r.p as u128).pow(r.r);
            eprintln!("MISMATCH: {} q={} n={}", r.kind, q, r.n);
        }
    }
    for c in &report.closure_checks {
        if !c.pass {
            eprintln!("MISMATCH: closure n={} l={}", c.n, c.l);
        } else if c.capped {
            eprintln!("capped: closure n={} l={} (expected order {})", c.n, c.l, c.expected_sp_order);
        }
    }
}

/// Dispatch a recheck over whichever JSON shape the file holds: a
/// certificate, a verification sweep report, a single count report, or a
/// list of count reports.
fn recheck_any(text: &str, caps: &Caps) -> Result<RecheckReport> {
    if let Ok(cert) = from_json::<Certificate>(text) {
        return Ok(recheck_certificate(&cert, caps));
    }
    if let Ok(report) = from_json::<VerifyAllReport>(text) {
        return Ok(recheck_verify_all(&report, caps));
    }
    if let Ok(cell) = from_json::<CountReportJson>(text) {
        return Ok(RecheckReport {
            outcomes: vec![(count_cell_label(&cell), recheck_count_report(&cell, caps))],
        });
    }
    if let Ok(cells) = from_json::<Vec<CountReportJson>>(text) {
        return Ok(RecheckReport {
            outcomes: cells
                .iter()
                .map(|c| (count_cell_label(c), recheck_count_report(c, caps)))
                .collect(),
        });
    }
    Err(Error::Parse(
        "the file is not a certificate, verification report, or count report".into(),
    ))
}

fn count_cell_label(c: &CountReportJson) -> String {
    let q = (c.p as u128).pow(c.r);
    format!("{} q={} n={}", c.kind, q, c.n)
}

fn recheck_json(report: &RecheckReport) -> String {
    let outcomes: Vec<serde_json::Value> = report
        .outcomes
        .iter()
        .map(|(name, outcome)| match outcome {
            CheckOutcome::Pass => serde_json::json!({"name": name, "outcome": "pass"}),
            CheckOutcome::Capped => serde_json::json!({"name": name, "outcome": "capped"}),
            CheckOutcome::Fail(reason) => {
                serde_json::json!({"name": name, "outcome": "fail", "reason": reason})
            }
        })
        .collect();
    let doc = serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "kind": "recheck",
        "outcomes": outcomes,
        "all_pass": report.all_pass(),
        "any_capped": report.any_capped(),
    });
    serde_json::to_string_pretty(&doc).expect("recheck summaries always serialize")
}
