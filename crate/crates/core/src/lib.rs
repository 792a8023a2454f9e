//! Core library of a certifier for termination and nontermination proofs
//! of first-order term rewrite systems.
//!
//! The certifier takes a rewrite system and a structured XML proof tree
//! and independently re-verifies every proof step, accepting the proof or
//! rejecting it with a rewriting-domain diagnostic. Supported techniques:
//! rule removal by strictly monotone linear polynomial interpretations,
//! the dependency pair transformation, dependency graph decomposition,
//! reduction pair processors with usable rules, and for nontermination
//! loops and well-formedness violations.

pub mod certify;
pub mod dp;
pub mod poly;
pub mod rewrite;
pub mod subst;
pub mod term;
pub mod xml;

/// Coefficient scalar used by the certification pipeline: exact
/// arbitrary-precision integers, so checked arithmetic never aborts.
pub type Coeff = num_bigint::BigInt;

/// Interpretation type as it appears in parsed certificates.
pub type Interpretation = poly::LinearInterpretation<Coeff>;

pub use certify::{
    certify, check_disproof, check_dp_proof, check_trs_proof, CertResult, CertifyOptions,
    Rejection,
};
pub use dp::DpProblem;
pub use poly::{lower_poly, orient, upper_poly, LinearPoly, Mode};
pub use rewrite::{rewrite_step, tcap, RewriteWitness};
pub use subst::{canonical_rule, match_term, unify, FreshVars, Substitution};
pub use term::{Context, Position, Rule, Symbol, Term, Trs};
pub use xml::problem::{parse_problem, ProblemDoc};
pub use xml::proof::{parse_proof, serialize, ProofTree};
pub use xml::{equal_modulo_whitespace, parse_xml};
