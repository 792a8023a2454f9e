//! Command-line front end of the proof certifier.
//!
//! Single-pair mode takes a problem file and a proof file and exits with
//! 0 (`CERTIFIED`), 1 (`REJECTED: <path>: <reason>`) or 2 (usage, I/O or
//! parse errors). Batch mode certifies a manifest of pairs concurrently,
//! buffers the results and emits them in manifest order.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::exit;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};
use rayon::prelude::*;

use certifier_core::certify::{certify, CertResult, CertifyOptions};
use certifier_core::xml::parse_xml;
use certifier_core::xml::problem::parse_problem;
use certifier_core::xml::proof::parse_proof;

#[derive(Parser)]
#[command(name = "certifier", version)]
#[command(about = "Certifies termination and nontermination proofs of term rewrite systems")]
struct Cli {
    /// Problem file (XTC-subset XML)
    problem: Option<PathBuf>,

    /// Proof file (certificate XML)
    proof: Option<PathBuf>,

    /// Batch manifest: one "problem<TAB>proof" line per pair, paths
    /// relative to the manifest
    #[arg(long, conflicts_with_all = ["problem", "proof"])]
    batch: Option<PathBuf>,

    /// Machine-readable result lines: path, status, milliseconds, reason
    #[arg(long)]
    machine: bool,

    /// Disable the input echo check (testing only; prints a warning)
    #[arg(long)]
    unsafe_no_echo_check: bool,
}

enum Outcome {
    Certified,
    Rejected(String),
    Error(String),
}

impl Outcome {
    fn status(&self) -> &'static str {
        match self {
            Outcome::Certified => "CERTIFIED",
            Outcome::Rejected(_) => "REJECTED",
            Outcome::Error(_) => "ERROR",
        }
    }

    fn reason(&self) -> &str {
        match self {
            Outcome::Certified => "",
            Outcome::Rejected(reason) | Outcome::Error(reason) => reason,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Certified => write!(f, "CERTIFIED"),
            Outcome::Rejected(reason) => write!(f, "REJECTED: {}", reason),
            Outcome::Error(reason) => write!(f, "ERROR: {}", reason),
        }
    }
}

fn certify_pair(problem_path: &Path, proof_path: &Path, options: &CertifyOptions) -> Outcome {
    let raw_problem = match fs::read_to_string(problem_path) {
        Ok(text) => text,
        Err(err) => return Outcome::Error(format!("cannot read {}: {}", problem_path.display(), err)),
    };
    let raw_proof = match fs::read_to_string(proof_path) {
        Ok(text) => text,
        Err(err) => return Outcome::Error(format!("cannot read {}: {}", proof_path.display(), err)),
    };
    let problem_root = match parse_xml(&raw_problem) {
        Ok(root) => root,
        Err(err) => return Outcome::Error(format!("{}: {}", problem_path.display(), err)),
    };
    let proof_root = match parse_xml(&raw_proof) {
        Ok(root) => root,
        Err(err) => return Outcome::Error(format!("{}: {}", proof_path.display(), err)),
    };
    let problem = match parse_problem(&problem_root) {
        Ok(problem) => problem,
        Err(err) => return Outcome::Error(format!("{}: {}", problem_path.display(), err)),
    };
    let proof = match parse_proof(&proof_root, &problem.signature) {
        Ok(proof) => proof,
        Err(err) => return Outcome::Error(format!("{}: {}", proof_path.display(), err)),
    };
    match certify(&problem, &proof, &raw_problem, &raw_proof, options) {
        CertResult::Accepted => Outcome::Certified,
        CertResult::Rejected(rejection) => Outcome::Rejected(rejection.to_string()),
    }
}

fn machine_line(path: &Path, outcome: &Outcome, millis: u128) -> String {
    format!("{}\t{}\t{}\t{}", path.display(), outcome.status(), millis, outcome.reason())
}

fn run_single(problem: &Path, proof: &Path, machine: bool, options: &CertifyOptions) -> i32 {
    let start = Instant::now();
    let outcome = certify_pair(problem, proof, options);
    let millis = start.elapsed().as_millis();
    if machine {
        println!("{}", machine_line(problem, &outcome, millis));
    } else {
        match &outcome {
            Outcome::Certified | Outcome::Rejected(_) => println!("{}", outcome),
            Outcome::Error(reason) => eprintln!("ERROR: {}", reason),
        }
    }
    match outcome {
        Outcome::Certified => 0,
        Outcome::Rejected(_) => 1,
        Outcome::Error(_) => 2,
    }
}

fn run_batch(manifest_path: &Path, machine: bool, options: &CertifyOptions) -> i32 {
    let manifest = match fs::read_to_string(manifest_path) {
        Ok(text) => text,
        Err(err) => {
            eprintln!("ERROR: cannot read {}: {}", manifest_path.display(), err);
            return 2;
        }
    };
    let base = manifest_path.parent().unwrap_or_else(|| Path::new("."));
    let mut pairs: Vec<(PathBuf, PathBuf)> = Vec::new();
    for (number, line) in manifest.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let (Some(problem), Some(proof), None) = (fields.next(), fields.next(), fields.next())
        else {
            eprintln!(
                "ERROR: {} line {}: expected 'problem<TAB>proof'",
                manifest_path.display(),
                number + 1
            );
            return 2;
        };
        pairs.push((base.join(problem), base.join(proof)));
    }

    let start = Instant::now();
    let results: Vec<(Outcome, u128)> = pairs
        .par_iter()
        .map(|(problem, proof)| {
            let pair_start = Instant::now();
            let outcome = certify_pair(problem, proof, options);
            (outcome, pair_start.elapsed().as_millis())
        })
        .collect();
    let total = start.elapsed();

    let mut certified = 0usize;
    let mut rejected = 0usize;
    let mut errors = 0usize;
    for ((problem, _), (outcome, millis)) in pairs.iter().zip(&results) {
        match outcome {
            Outcome::Certified => certified += 1,
            Outcome::Rejected(_) => rejected += 1,
            Outcome::Error(_) => errors += 1,
        }
        if machine {
            println!("{}", machine_line(problem, outcome, *millis));
        } else {
            println!("{}: {}", problem.display(), outcome);
        }
    }
    let count = results.len().max(1);
    let summary = format!(
        "{} certified, {} rejected, {} errors; total {:.3} s, average {:.4} s per proof",
        certified,
        rejected,
        errors,
        total.as_secs_f64(),
        total.as_secs_f64() / count as f64
    );
    if machine {
        eprintln!("{}", summary);
    } else {
        println!("{}", summary);
    }
    if certified == results.len() {
        0
    } else {
        1
    }
}

fn main() {
    let cli = Cli::parse();
    let options = CertifyOptions { check_echo: !cli.unsafe_no_echo_check };
    if cli.unsafe_no_echo_check {
        eprintln!(
            "WARNING: the input echo check is disabled; accepted proofs are \
             no longer guaranteed to talk about the supplied input"
        );
    }
    let code = match (&cli.batch, &cli.problem, &cli.proof) {
        (Some(manifest), None, None) => run_batch(manifest, cli.machine, &options),
        (None, Some(problem), Some(proof)) => run_single(problem, proof, cli.machine, &options),
        _ => {
            Cli::command()
                .error(
                    ErrorKind::MissingRequiredArgument,
                    "expected either <PROBLEM> <PROOF> or --batch <MANIFEST>",
                )
                .print()
                .expect("write usage error");
            2
        }
    };
    exit(code);
}
