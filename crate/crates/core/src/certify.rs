//! The check functions: dispatch over the proof tree, verify every
//! technique application, and produce accept/reject results with
//! rewriting-domain diagnostics.
//!
//! Every rejection is fail-fast and deterministic; per node the conditions
//! are checked in a fixed order:
//!
//! * `ruleRemoval`: strict monotonicity, weak orientation of all rules,
//!   strict orientation of the removed rules, kept rules contained in R,
//!   then the remaining proof.
//! * `dpTrans`: well-formedness of R, the computed dependency pairs are
//!   contained in the supplied ones, then the DP proof.
//! * `depGraphProc`: decomposition validity, then each SCC subproof in
//!   listed order.
//! * `redPairUrProc`: weak monotonicity, usable-rules closure, usable
//!   rules contained in R, weak orientation of pairs then usable rules,
//!   strict orientation of removed pairs, kept pairs contained in P, then
//!   the remaining proof on (P', R).
//! * `monoRedPairUrProc`: strict monotonicity, usable-rules closure and
//!   containment, weak orientation of pairs then usable rules, every
//!   non-strictly-oriented pair kept, every non-strictly-oriented usable
//!   rule kept, then the remaining proof on (P', R').
//! * `loop`: at least one term, well-formedness of R, then each step
//!   `t_i -> t_{i+1}` and finally `t_n -> C[t_1 sigma]`.
//!
//! All rule-set comparisons are modulo the canonical depth-first variable
//! renaming, so provers may rename variables freely.

use std::collections::BTreeSet;
use std::fmt;

use crate::dp::{
    dependency_pairs, estimate_graph, implicit_filter, usable_rules, validate_against_graph,
    DpProblem,
};
use crate::poly::{orient, LinearInterpretation, Mode};
use crate::subst::{canonical_rule, Substitution};
use crate::term::{Rule, Symbol, Term, Trs};
use crate::xml::problem::ProblemDoc;
use crate::xml::proof::{serialize, DpProof, InterpEntries, ProofTree, TrsDisproof, TrsProof};
use crate::Interpretation;

/// The certifier's verdict: either the whole proof tree checked out, or
/// the first failing condition with its location and a domain-level
/// reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertResult {
    Accepted,
    Rejected(Rejection),
}

impl CertResult {
    pub fn is_accepted(&self) -> bool {
        matches!(self, CertResult::Accepted)
    }
}

/// A rejection: the root-to-node path of proof-tree step labels and a
/// reason naming at least one concrete rule, pair, term or component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    pub path: Vec<String>,
    pub reason: String,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path.join("/"), self.reason)
    }
}

/// Certification options. The echo check is on by default; disabling it is
/// for testing only.
#[derive(Debug, Clone)]
pub struct CertifyOptions {
    pub check_echo: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { check_echo: true }
    }
}

type Checked = Result<(), Rejection>;

fn reject(path: &[String], reason: impl Into<String>) -> Checked {
    Err(Rejection { path: path.to_vec(), reason: reason.into() })
}

fn canonical_set(rules: &[Rule]) -> BTreeSet<Rule> {
    rules.iter().map(canonical_rule).collect()
}

fn interpretation(entries: &InterpEntries, mode: Mode) -> Interpretation {
    LinearInterpretation::new(mode, entries.clone())
}

fn check_monotone(interp: &Interpretation, path: &[String]) -> Checked {
    match interp.check_monotonicity() {
        Ok(()) => Ok(()),
        Err(violation) => reject(path, violation.to_string()),
    }
}

fn oriented(
    rule: &Rule,
    interp: &Interpretation,
    required: Mode,
    path: &[String],
) -> Result<bool, Rejection> {
    orient(rule, interp, required).map_err(|overflow| Rejection {
        path: path.to_vec(),
        reason: format!("{} while orienting {}", overflow, rule),
    })
}

fn signature_of(pairs: &[Rule], trs: &Trs) -> BTreeSet<Symbol> {
    let mut signature = trs.symbols();
    for pair in pairs {
        signature.extend(pair.lhs.symbols());
        signature.extend(pair.rhs.symbols());
    }
    signature
}

/// Checks a usable-rules element: the supplied set must contain the
/// self-computed least fixpoint and must be a subset of R.
fn check_usable(
    supplied: &[Rule],
    pairs: &[Rule],
    trs: &Trs,
    interp: &Interpretation,
    path: &[String],
) -> Checked {
    let signature = signature_of(pairs, trs);
    let filter = implicit_filter(interp, &signature);
    let seeds: Vec<Term> = pairs.iter().map(|p| p.rhs.clone()).collect();
    let required = usable_rules(trs, &seeds, &filter);
    let supplied_set = canonical_set(supplied);
    for rule in &required {
        if !supplied_set.contains(&canonical_rule(rule)) {
            return reject(path, format!("usable rules not closed: missing {}", rule));
        }
    }
    let trs_set = canonical_set(&trs.rules);
    for rule in supplied {
        if !trs_set.contains(&canonical_rule(rule)) {
            return reject(path, format!("usable rule not in R: {}", rule));
        }
    }
    Ok(())
}

fn verify_trs_proof(trs: &Trs, proof: &TrsProof, path: &mut Vec<String>) -> Checked {
    match proof {
        TrsProof::RIsEmpty => {
            path.push("rIsEmpty".to_string());
            match trs.rules.first() {
                None => Ok(()),
                Some(rule) => reject(path, format!("R is not empty: it still contains {}", rule)),
            }
        }
        TrsProof::RuleRemoval { interp, remaining, rest } => {
            path.push("ruleRemoval".to_string());
            let interp = interpretation(interp, Mode::Strict);
            check_monotone(&interp, path)?;
            for rule in &trs.rules {
                if !oriented(rule, &interp, Mode::Weak, path)? {
                    return reject(path, format!("rule not weakly oriented: {}", rule));
                }
            }
            let kept = canonical_set(remaining);
            for rule in &trs.rules {
                if kept.contains(&canonical_rule(rule)) {
                    continue;
                }
                if !oriented(rule, &interp, Mode::Strict, path)? {
                    return reject(path, format!("removed rule not strictly oriented: {}", rule));
                }
            }
            let all = canonical_set(&trs.rules);
            for rule in remaining {
                if !all.contains(&canonical_rule(rule)) {
                    return reject(path, format!("rule not in R: {}", rule));
                }
            }
            verify_trs_proof(&Trs::new(remaining.clone()), rest, path)
        }
        TrsProof::DpTrans { dps, rest } => {
            path.push("dpTrans".to_string());
            if let Some(rule) = trs.well_formedness_violation() {
                return reject(path, format!("rule is not well-formed: {}", rule));
            }
            let supplied = canonical_set(dps);
            for pair in dependency_pairs(trs) {
                if !supplied.contains(&canonical_rule(&pair)) {
                    return reject(path, format!("missing dependency pair: {}", pair));
                }
            }
            verify_dp_proof(dps, trs, rest, path)
        }
    }
}

fn verify_dp_proof(pairs: &[Rule], trs: &Trs, proof: &DpProof, path: &mut Vec<String>) -> Checked {
    match proof {
        DpProof::PIsEmpty => {
            path.push("pIsEmpty".to_string());
            match pairs.first() {
                None => Ok(()),
                Some(pair) => reject(path, format!("P is not empty: it still contains {}", pair)),
            }
        }
        DpProof::DepGraphProc { components } => {
            path.push("depGraphProc".to_string());
            let graph = estimate_graph(pairs, trs);
            if let Err(violation) = validate_against_graph(&graph, pairs, components) {
                return reject(path, violation.to_string());
            }
            for (index, component) in components.iter().enumerate() {
                if let Some(subproof) = &component.subproof {
                    let depth = path.len();
                    path.push(format!("component[{}]", index));
                    verify_dp_proof(&component.pairs, trs, subproof, path)?;
                    path.truncate(depth);
                }
            }
            Ok(())
        }
        DpProof::RedPairUrProc { interp, remaining_pairs, usable, rest } => {
            path.push("redPairUrProc".to_string());
            let interp = interpretation(interp, Mode::Weak);
            check_monotone(&interp, path)?;
            check_usable(usable, pairs, trs, &interp, path)?;
            for pair in pairs {
                if !oriented(pair, &interp, Mode::Weak, path)? {
                    return reject(path, format!("pair not weakly oriented: {}", pair));
                }
            }
            for rule in usable {
                if !oriented(rule, &interp, Mode::Weak, path)? {
                    return reject(path, format!("usable rule not weakly oriented: {}", rule));
                }
            }
            let kept = canonical_set(remaining_pairs);
            for pair in pairs {
                if kept.contains(&canonical_rule(pair)) {
                    continue;
                }
                if !oriented(pair, &interp, Mode::Strict, path)? {
                    return reject(path, format!("removed pair not strictly oriented: {}", pair));
                }
            }
            let all = canonical_set(pairs);
            for pair in remaining_pairs {
                if !all.contains(&canonical_rule(pair)) {
                    return reject(path, format!("pair not in P: {}", pair));
                }
            }
            verify_dp_proof(remaining_pairs, trs, rest, path)
        }
        DpProof::MonoRedPairUrProc { interp, remaining_pairs, remaining_rules, usable, rest } => {
            path.push("monoRedPairUrProc".to_string());
            let interp = interpretation(interp, Mode::Strict);
            check_monotone(&interp, path)?;
            check_usable(usable, pairs, trs, &interp, path)?;
            for pair in pairs {
                if !oriented(pair, &interp, Mode::Weak, path)? {
                    return reject(path, format!("pair not weakly oriented: {}", pair));
                }
            }
            for rule in usable {
                if !oriented(rule, &interp, Mode::Weak, path)? {
                    return reject(path, format!("usable rule not weakly oriented: {}", rule));
                }
            }
            let kept_pairs = canonical_set(remaining_pairs);
            for pair in pairs {
                if kept_pairs.contains(&canonical_rule(pair)) {
                    continue;
                }
                if !oriented(pair, &interp, Mode::Strict, path)? {
                    return reject(
                        path,
                        format!("pair neither strictly oriented nor kept: {}", pair),
                    );
                }
            }
            let kept_rules = canonical_set(remaining_rules);
            for rule in usable {
                if kept_rules.contains(&canonical_rule(rule)) {
                    continue;
                }
                if !oriented(rule, &interp, Mode::Strict, path)? {
                    return reject(
                        path,
                        format!("usable rule neither strictly oriented nor kept: {}", rule),
                    );
                }
            }
            verify_dp_proof(remaining_pairs, &Trs::new(remaining_rules.clone()), rest, path)
        }
    }
}

fn verify_disproof(trs: &Trs, disproof: &TrsDisproof, path: &mut Vec<String>) -> Checked {
    match disproof {
        TrsDisproof::NotWellFormed => {
            path.push("notWellFormed".to_string());
            match trs.well_formedness_violation() {
                Some(_) => Ok(()),
                None => reject(path, "all rules are well-formed"),
            }
        }
        TrsDisproof::Loop { subst, context, terms } => {
            path.push("loop".to_string());
            let Some(first) = terms.first() else {
                return reject(path, "loop must contain at least one term");
            };
            if let Some(rule) = trs.well_formedness_violation() {
                return reject(path, format!("rule is not well-formed: {}", rule));
            }
            for window in terms.windows(2) {
                if crate::rewrite::rewrite_step(trs, &window[0], &window[1]).is_none() {
                    return reject(
                        path,
                        format!("no rewrite step from {} to {}", window[0], window[1]),
                    );
                }
            }
            let sigma = Substitution::from_bindings(subst.iter().cloned());
            let target = context.apply(sigma.apply(first));
            let last = terms.last().expect("terms nonempty");
            if crate::rewrite::rewrite_step(trs, last, &target).is_none() {
                return reject(
                    path,
                    format!("no rewrite step from {} to the loop target {}", last, target),
                );
            }
            Ok(())
        }
    }
}

fn to_result(outcome: Checked) -> CertResult {
    match outcome {
        Ok(()) => CertResult::Accepted,
        Err(rejection) => CertResult::Rejected(rejection),
    }
}

/// Checks a termination proof subtree against a rewrite system. Useful for
/// certifying a single technique application without a full certificate.
pub fn check_trs_proof(trs: &Trs, proof: &TrsProof) -> CertResult {
    to_result(verify_trs_proof(trs, proof, &mut vec!["proof".to_string()]))
}

/// Checks a DP proof subtree against a DP problem.
pub fn check_dp_proof(problem: &DpProblem, proof: &DpProof) -> CertResult {
    to_result(verify_dp_proof(
        &problem.pairs,
        &problem.rules,
        proof,
        &mut vec!["proof".to_string()],
    ))
}

/// Checks a nontermination disproof against a rewrite system.
pub fn check_disproof(trs: &Trs, disproof: &TrsDisproof) -> CertResult {
    to_result(verify_disproof(trs, disproof, &mut vec!["proof".to_string()]))
}

/// Certifies a proof against its problem: first the input echo check
/// (the canonical serialization of the parsed structures must equal the
/// raw input modulo whitespace), then the proof tree itself.
pub fn certify(
    problem: &ProblemDoc,
    proof: &ProofTree,
    raw_problem: &str,
    raw_proof: &str,
    options: &CertifyOptions,
) -> CertResult {
    let mut path = vec!["proof".to_string()];
    if options.check_echo {
        let echoed = serialize(problem, proof);
        let supplied = format!("{}\n{}", raw_problem, raw_proof);
        if !crate::xml::equal_modulo_whitespace(&echoed, &supplied) {
            return CertResult::Rejected(Rejection {
                path,
                reason: "input and internal representation differ".to_string(),
            });
        }
    }
    let outcome = match proof {
        ProofTree::Proof(p) => verify_trs_proof(&problem.trs, p, &mut path),
        ProofTree::Disproof(d) => verify_disproof(&problem.trs, d, &mut path),
    };
    to_result(outcome)
}

/// True iff `path` is a valid chain of step labels from the root of the
/// proof tree (possibly stopping early).
pub fn path_is_valid(proof: &ProofTree, path: &[String]) -> bool {
    let Some((head, tail)) = path.split_first() else { return false };
    if head != "proof" {
        return false;
    }
    match proof {
        ProofTree::Proof(p) => valid_trs_path(p, tail),
        ProofTree::Disproof(d) => match tail {
            [] => true,
            [label] => match d {
                TrsDisproof::Loop { .. } => label == "loop",
                TrsDisproof::NotWellFormed => label == "notWellFormed",
            },
            _ => false,
        },
    }
}

fn valid_trs_path(proof: &TrsProof, path: &[String]) -> bool {
    let Some((head, tail)) = path.split_first() else { return true };
    match proof {
        TrsProof::RuleRemoval { rest, .. } => head == "ruleRemoval" && valid_trs_path(rest, tail),
        TrsProof::DpTrans { rest, .. } => head == "dpTrans" && valid_dp_path(rest, tail),
        TrsProof::RIsEmpty => head == "rIsEmpty" && tail.is_empty(),
    }
}

fn valid_dp_path(proof: &DpProof, path: &[String]) -> bool {
    let Some((head, tail)) = path.split_first() else { return true };
    match proof {
        DpProof::DepGraphProc { components } => {
            if head != "depGraphProc" {
                return false;
            }
            let Some((comp_label, comp_tail)) = tail.split_first() else { return true };
            components.iter().enumerate().any(|(i, c)| {
                comp_label == &format!("component[{}]", i)
                    && match &c.subproof {
                        Some(subproof) => valid_dp_path(subproof, comp_tail),
                        None => comp_tail.is_empty(),
                    }
            })
        }
        DpProof::RedPairUrProc { rest, .. } => head == "redPairUrProc" && valid_dp_path(rest, tail),
        DpProof::MonoRedPairUrProc { rest, .. } => {
            head == "monoRedPairUrProc" && valid_dp_path(rest, tail)
        }
        DpProof::PIsEmpty => head == "pIsEmpty" && tail.is_empty(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dp::Component;
    use crate::poly::SymbolInterpretation;
    use crate::term::Context;
    use crate::Coeff;

    fn sym(name: &str, arity: usize) -> Symbol {
        Symbol::new(name, arity)
    }

    fn v(name: &str) -> Term {
        Term::var(name)
    }

    fn app(name: &str, args: Vec<Term>) -> Term {
        Term::fun(sym(name, args.len()), args)
    }

    fn marked(name: &str, args: Vec<Term>) -> Term {
        Term::fun(sym(name, args.len()).marked_twin(), args)
    }

    fn big(value: i64) -> Coeff {
        Coeff::from(value)
    }

    fn entry(name: &str, arity: usize, marked_sym: bool, constant: i64, coeffs: &[i64]) -> SymbolInterpretation<Coeff> {
        let mut symbol = sym(name, arity);
        if marked_sym {
            symbol = symbol.marked_twin();
        }
        SymbolInterpretation::new(symbol, big(constant), coeffs.iter().map(|&c| big(c)).collect())
    }

    fn add_trs() -> Trs {
        Trs::new(vec![
            Rule::new(app("add", vec![app("0", vec![]), v("y")]), v("y")),
            Rule::new(
                app("add", vec![app("s", vec![v("x")]), v("y")]),
                app("s", vec![app("add", vec![v("x"), v("y")])]),
            ),
        ])
    }

    fn add_pair() -> Rule {
        Rule::new(
            marked("add", vec![app("s", vec![v("x")]), v("y")]),
            marked("add", vec![v("x"), v("y")]),
        )
    }

    /// Strict interpretation orienting both add rules strictly.
    fn add_strict_interp() -> InterpEntries {
        vec![
            entry("add", 2, false, 1, &[2, 1]),
            entry("s", 1, false, 1, &[1]),
            entry("0", 0, false, 0, &[]),
        ]
    }

    /// Weak interpretation projecting add# to its first argument.
    fn add_sharp_interp() -> InterpEntries {
        vec![
            entry("add", 2, true, 0, &[1, 0]),
            entry("s", 1, false, 1, &[1]),
            entry("0", 0, false, 0, &[]),
        ]
    }

    fn run_trs_proof(trs: &Trs, proof: &TrsProof) -> Checked {
        verify_trs_proof(trs, proof, &mut vec!["proof".to_string()])
    }

    fn run_disproof(trs: &Trs, disproof: &TrsDisproof) -> Checked {
        verify_disproof(trs, disproof, &mut vec!["proof".to_string()])
    }

    #[test]
    fn empty_trs_accepts_r_is_empty() {
        assert_eq!(run_trs_proof(&Trs::default(), &TrsProof::RIsEmpty), Ok(()));
    }

    #[test]
    fn nonempty_trs_rejects_r_is_empty() {
        let err = run_trs_proof(&add_trs(), &TrsProof::RIsEmpty).unwrap_err();
        assert_eq!(err.path, vec!["proof", "rIsEmpty"]);
        assert!(err.reason.contains("add(0,y) -> y"), "{}", err);
    }

    #[test]
    fn rule_removal_removing_everything() {
        let proof = TrsProof::RuleRemoval {
            interp: add_strict_interp(),
            remaining: vec![],
            rest: Box::new(TrsProof::RIsEmpty),
        };
        assert_eq!(run_trs_proof(&add_trs(), &proof), Ok(()));
    }

    #[test]
    fn rule_removal_may_keep_strictly_oriented_rules() {
        // keeping rule 2 although it is strictly oriented is fine
        let kept = add_trs().rules[1].clone();
        let proof = TrsProof::RuleRemoval {
            interp: add_strict_interp(),
            remaining: vec![kept.clone()],
            rest: Box::new(TrsProof::DpTrans {
                dps: vec![add_pair()],
                rest: Box::new(DpProof::RedPairUrProc {
                    interp: add_sharp_interp(),
                    remaining_pairs: vec![],
                    usable: vec![],
                    rest: Box::new(DpProof::PIsEmpty),
                }),
            }),
        };
        assert_eq!(run_trs_proof(&add_trs(), &proof), Ok(()));
    }

    #[test]
    fn rule_removal_rejects_non_weakly_oriented_rules() {
        // f(x) -> g(x,x) is not weakly oriented under the default
        // interpretation extended with g -> x1 + x2 + 1.
        let trs = Trs::new(vec![Rule::new(
            app("f", vec![v("x")]),
            app("g", vec![v("x"), v("x")]),
        )]);
        let proof = TrsProof::RuleRemoval {
            interp: vec![entry("g", 2, false, 1, &[1, 1])],
            remaining: vec![],
            rest: Box::new(TrsProof::RIsEmpty),
        };
        let err = run_trs_proof(&trs, &proof).unwrap_err();
        assert!(err.reason.contains("not weakly oriented"), "{}", err);
        assert!(err.reason.contains("f(x) -> g(x,x)"), "{}", err);
    }

    #[test]
    fn rule_removal_rejects_foreign_remaining_rules() {
        let foreign = Rule::new(app("h", vec![v("x")]), v("x"));
        let proof = TrsProof::RuleRemoval {
            interp: add_strict_interp(),
            remaining: vec![foreign.clone()],
            rest: Box::new(TrsProof::RIsEmpty),
        };
        let err = run_trs_proof(&add_trs(), &proof).unwrap_err();
        assert!(err.reason.contains("rule not in R"), "{}", err);
    }

    #[test]
    fn rule_removal_rejects_non_monotone_interpretations() {
        let proof = TrsProof::RuleRemoval {
            interp: vec![entry("add", 2, false, 1, &[0, 1])],
            remaining: add_trs().rules.clone(),
            rest: Box::new(TrsProof::RIsEmpty),
        };
        let err = run_trs_proof(&add_trs(), &proof).unwrap_err();
        assert!(err.reason.contains("not monotone"), "{}", err);
    }

    #[test]
    fn dp_trans_requires_all_computed_pairs() {
        let proof = TrsProof::DpTrans {
            dps: vec![],
            rest: Box::new(DpProof::PIsEmpty),
        };
        let err = run_trs_proof(&add_trs(), &proof).unwrap_err();
        assert_eq!(
            err.reason,
            "missing dependency pair: add#(s(x),y) -> add#(x,y)"
        );
    }

    #[test]
    fn dp_trans_accepts_renamed_and_extra_pairs() {
        // renamed copy of the computed pair plus a harmless extra pair,
        // all strictly oriented by the projection to the first argument
        let renamed = Rule::new(
            marked("add", vec![app("s", vec![v("u")]), v("w")]),
            marked("add", vec![v("u"), v("w")]),
        );
        let extra = Rule::new(
            marked("add", vec![app("s", vec![v("x")]), app("0", vec![])]),
            marked("add", vec![v("x"), app("0", vec![])]),
        );
        let proof = TrsProof::DpTrans {
            dps: vec![renamed, extra],
            rest: Box::new(DpProof::RedPairUrProc {
                interp: add_sharp_interp(),
                remaining_pairs: vec![],
                usable: vec![],
                rest: Box::new(DpProof::PIsEmpty),
            }),
        };
        assert_eq!(run_trs_proof(&add_trs(), &proof), Ok(()));
    }

    #[test]
    fn dp_trans_rejects_non_well_formed_systems() {
        let trs = Trs::new(vec![Rule::new(app("f", vec![v("x")]), v("y"))]);
        let proof = TrsProof::DpTrans { dps: vec![], rest: Box::new(DpProof::PIsEmpty) };
        let err = run_trs_proof(&trs, &proof).unwrap_err();
        assert!(err.reason.contains("not well-formed"), "{}", err);
    }

    #[test]
    fn red_pair_ur_proc_full_example() {
        // P = [add#(s(x),y) -> add#(x,y)], add# projected to x1: the pair
        // is strictly oriented and no rule is usable.
        let proof = TrsProof::DpTrans {
            dps: vec![add_pair()],
            rest: Box::new(DpProof::RedPairUrProc {
                interp: add_sharp_interp(),
                remaining_pairs: vec![],
                usable: vec![],
                rest: Box::new(DpProof::PIsEmpty),
            }),
        };
        assert_eq!(run_trs_proof(&add_trs(), &proof), Ok(()));
    }

    #[test]
    fn p_is_empty_rejects_remaining_pairs() {
        let proof = TrsProof::DpTrans {
            dps: vec![add_pair()],
            rest: Box::new(DpProof::RedPairUrProc {
                interp: add_sharp_interp(),
                remaining_pairs: vec![add_pair()],
                usable: vec![],
                rest: Box::new(DpProof::PIsEmpty),
            }),
        };
        let err = run_trs_proof(&add_trs(), &proof).unwrap_err();
        assert_eq!(
            err.path,
            vec!["proof", "dpTrans", "redPairUrProc", "pIsEmpty"]
        );
        assert!(err.reason.contains("P is not empty"), "{}", err);
    }

    #[test]
    fn usable_rules_closure_is_enforced() {
        // one pair whose rhs feeds add at a retained position, so both add
        // rules are usable; supplying none must be rejected.
        let pair = Rule::new(
            marked("f", vec![app("s", vec![v("x")])]),
            marked("f", vec![app("add", vec![v("x"), app("0", vec![])])]),
        );
        let interp = vec![
            entry("f", 1, true, 0, &[1]),
            entry("add", 2, false, 0, &[1, 1]),
            entry("s", 1, false, 1, &[1]),
            entry("0", 0, false, 0, &[]),
        ];
        let mut rules = add_trs().rules;
        rules.push(Rule::new(
            app("f", vec![app("s", vec![v("x")])]),
            app("f", vec![app("add", vec![v("x"), app("0", vec![])])]),
        ));
        let trs = Trs::new(rules);
        let bad = DpProof::RedPairUrProc {
            interp: interp.clone(),
            remaining_pairs: vec![],
            usable: vec![],
            rest: Box::new(DpProof::PIsEmpty),
        };
        let err = verify_dp_proof(std::slice::from_ref(&pair), &trs, &bad, &mut vec!["proof".into()])
            .unwrap_err();
        assert!(err.reason.contains("usable rules not closed: missing add(0,y) -> y"), "{}", err);

        let good = DpProof::RedPairUrProc {
            interp,
            remaining_pairs: vec![],
            usable: add_trs().rules.clone(),
            rest: Box::new(DpProof::PIsEmpty),
        };
        assert_eq!(
            verify_dp_proof(&[pair], &trs, &good, &mut vec!["proof".into()]),
            Ok(())
        );
    }

    #[test]
    fn usable_rules_must_come_from_r() {
        let foreign = Rule::new(app("q", vec![v("x")]), v("x"));
        let proof = DpProof::RedPairUrProc {
            interp: add_sharp_interp(),
            remaining_pairs: vec![],
            usable: vec![foreign],
            rest: Box::new(DpProof::PIsEmpty),
        };
        let err = verify_dp_proof(&[add_pair()], &add_trs(), &proof, &mut vec!["proof".into()])
            .unwrap_err();
        assert!(err.reason.contains("usable rule not in R"), "{}", err);
    }

    #[test]
    fn mono_red_pair_removes_pairs_and_rules() {
        // strictly monotone: add# -> x1 + x2, add -> 2x1 + x2 + 1,
        // s -> x1 + 1. Full filter, but P's rhs arguments are variables,
        // so U = {} and everything can be removed.
        let interp = vec![
            entry("add", 2, true, 0, &[1, 1]),
            entry("add", 2, false, 1, &[2, 1]),
            entry("s", 1, false, 1, &[1]),
            entry("0", 0, false, 0, &[]),
        ];
        let proof = DpProof::MonoRedPairUrProc {
            interp,
            remaining_pairs: vec![],
            remaining_rules: vec![],
            usable: vec![],
            rest: Box::new(DpProof::PIsEmpty),
        };
        assert_eq!(
            verify_dp_proof(&[add_pair()], &add_trs(), &proof, &mut vec!["proof".into()]),
            Ok(())
        );
    }

    #[test]
    fn mono_red_pair_requires_keeping_unremoved_rules() {
        // weakly-but-not-strictly oriented usable rule must stay in trs
        let pair = Rule::new(
            marked("f", vec![app("s", vec![v("x")])]),
            marked("f", vec![app("add", vec![v("x"), app("0", vec![])])]),
        );
        let mut rules = add_trs().rules;
        rules.push(Rule::new(
            app("f", vec![app("s", vec![v("x")])]),
            app("f", vec![app("add", vec![v("x"), app("0", vec![])])]),
        ));
        let trs = Trs::new(rules);
        let interp = vec![
            entry("f", 1, true, 0, &[1]),
            entry("add", 2, false, 1, &[1, 1]),
            entry("s", 1, false, 2, &[1]),
            entry("0", 0, false, 0, &[]),
        ];
        // add(s(x),y) -> s(add(x,y)) has difference 0 under this
        // interpretation, so it is only weakly oriented and must be kept.
        let bad = DpProof::MonoRedPairUrProc {
            interp: interp.clone(),
            remaining_pairs: vec![],
            remaining_rules: vec![],
            usable: add_trs().rules.clone(),
            rest: Box::new(DpProof::PIsEmpty),
        };
        let err = verify_dp_proof(std::slice::from_ref(&pair), &trs, &bad, &mut vec!["proof".into()])
            .unwrap_err();
        assert!(
            err.reason.contains("neither strictly oriented nor kept"),
            "{}",
            err
        );

        let good = DpProof::MonoRedPairUrProc {
            interp,
            remaining_pairs: vec![],
            remaining_rules: vec![add_trs().rules[1].clone()],
            usable: add_trs().rules.clone(),
            rest: Box::new(DpProof::PIsEmpty),
        };
        assert_eq!(
            verify_dp_proof(&[pair], &trs, &good, &mut vec!["proof".into()]),
            Ok(())
        );
    }

    #[test]
    fn dep_graph_proc_recurses_into_scc_components() {
        let proof = TrsProof::DpTrans {
            dps: vec![add_pair()],
            rest: Box::new(DpProof::DepGraphProc {
                components: vec![Component {
                    pairs: vec![add_pair()],
                    real_scc: true,
                    subproof: Some(DpProof::RedPairUrProc {
                        interp: add_sharp_interp(),
                        remaining_pairs: vec![],
                        usable: vec![],
                        rest: Box::new(DpProof::PIsEmpty),
                    }),
                }],
            }),
        };
        assert_eq!(run_trs_proof(&add_trs(), &proof), Ok(()));
    }

    #[test]
    fn dep_graph_proc_reports_component_paths() {
        // the subproof inside the component fails at its pIsEmpty
        let proof = TrsProof::DpTrans {
            dps: vec![add_pair()],
            rest: Box::new(DpProof::DepGraphProc {
                components: vec![Component {
                    pairs: vec![add_pair()],
                    real_scc: true,
                    subproof: Some(DpProof::PIsEmpty),
                }],
            }),
        };
        let err = run_trs_proof(&add_trs(), &proof).unwrap_err();
        assert_eq!(
            err.path,
            vec!["proof", "dpTrans", "depGraphProc", "component[0]", "pIsEmpty"]
        );
    }

    #[test]
    fn loop_certificates_are_checked_stepwise() {
        // R = {f(x) -> f(s(x))}: f(x) -> C[f(x) sigma] with sigma x := s(x)
        let trs = Trs::new(vec![Rule::new(
            app("f", vec![v("x")]),
            app("f", vec![app("s", vec![v("x")])]),
        )]);
        let disproof = TrsDisproof::Loop {
            subst: vec![("x".to_string(), app("s", vec![v("x")]))],
            context: Context::hole(),
            terms: vec![app("f", vec![v("x")])],
        };
        assert_eq!(run_disproof(&trs, &disproof), Ok(()));
    }

    #[test]
    fn self_loop_with_empty_substitution() {
        let trs = Trs::new(vec![Rule::new(app("f", vec![v("x")]), app("f", vec![v("x")]))]);
        let disproof = TrsDisproof::Loop {
            subst: vec![],
            context: Context::hole(),
            terms: vec![app("f", vec![v("x")])],
        };
        assert_eq!(run_disproof(&trs, &disproof), Ok(()));
    }

    #[test]
    fn loop_rejects_missing_steps() {
        let trs = Trs::new(vec![Rule::new(
            app("f", vec![v("x")]),
            app("f", vec![app("s", vec![v("x")])]),
        )]);
        let disproof = TrsDisproof::Loop {
            subst: vec![],
            context: Context::hole(),
            terms: vec![app("f", vec![v("x")]), app("f", vec![v("x")])],
        };
        let err = run_disproof(&trs, &disproof).unwrap_err();
        assert!(err.reason.contains("no rewrite step from f(x) to f(x)"), "{}", err);

        let empty = TrsDisproof::Loop {
            subst: vec![],
            context: Context::hole(),
            terms: vec![],
        };
        let err = run_disproof(&trs, &empty).unwrap_err();
        assert!(err.reason.contains("at least one term"), "{}", err);
    }

    #[test]
    fn not_well_formed_checks_both_directions() {
        let dropped = Trs::new(vec![Rule::new(app("f", vec![v("x")]), v("y"))]);
        assert_eq!(run_disproof(&dropped, &TrsDisproof::NotWellFormed), Ok(()));

        let var_lhs = Trs::new(vec![Rule::new(v("x"), app("a", vec![]))]);
        assert_eq!(run_disproof(&var_lhs, &TrsDisproof::NotWellFormed), Ok(()));

        let fine = Trs::new(vec![Rule::new(app("f", vec![v("x")]), v("x"))]);
        let err = run_disproof(&fine, &TrsDisproof::NotWellFormed).unwrap_err();
        assert_eq!(err.reason, "all rules are well-formed");
    }

    #[test]
    fn loop_requires_well_formed_rules() {
        let trs = Trs::new(vec![Rule::new(v("x"), app("a", vec![]))]);
        let disproof = TrsDisproof::Loop {
            subst: vec![],
            context: Context::hole(),
            terms: vec![app("a", vec![])],
        };
        let err = run_disproof(&trs, &disproof).unwrap_err();
        assert!(err.reason.contains("not well-formed"), "{}", err);
    }

    #[test]
    fn rejection_paths_are_valid_tree_paths() {
        let proof = ProofTree::Proof(TrsProof::DpTrans {
            dps: vec![add_pair()],
            rest: Box::new(DpProof::DepGraphProc {
                components: vec![Component {
                    pairs: vec![add_pair()],
                    real_scc: true,
                    subproof: Some(DpProof::PIsEmpty),
                }],
            }),
        });
        let ProofTree::Proof(inner) = &proof else { unreachable!() };
        let err = run_trs_proof(&add_trs(), inner).unwrap_err();
        assert!(path_is_valid(&proof, &err.path), "{:?}", err.path);
        assert!(!path_is_valid(&proof, &["proof".into(), "ruleRemoval".into()]));
    }

    #[test]
    fn single_technique_applications_can_be_checked_directly() {
        assert!(check_trs_proof(&Trs::default(), &TrsProof::RIsEmpty).is_accepted());
        assert!(!check_trs_proof(&add_trs(), &TrsProof::RIsEmpty).is_accepted());

        let problem = DpProblem::initial(&add_trs());
        let removal = DpProof::RedPairUrProc {
            interp: add_sharp_interp(),
            remaining_pairs: vec![],
            usable: vec![],
            rest: Box::new(DpProof::PIsEmpty),
        };
        assert!(check_dp_proof(&problem, &removal).is_accepted());
        assert!(!check_dp_proof(&problem, &DpProof::PIsEmpty).is_accepted());

        let broken = Trs::new(vec![Rule::new(v("x"), app("a", vec![]))]);
        assert!(check_disproof(&broken, &TrsDisproof::NotWellFormed).is_accepted());
    }

    #[test]
    fn certify_runs_the_echo_check() {
        use crate::xml::problem::parse_problem;
        use crate::xml::{parse_xml, proof::parse_proof};

        let problem_text = "<problem><trs><rules/></trs></problem>";
        let proof_text = "<proof><rIsEmpty/></proof>";
        let problem = parse_problem(&parse_xml(problem_text).unwrap()).unwrap();
        let proof = parse_proof(&parse_xml(proof_text).unwrap(), &problem.signature).unwrap();

        let ok = certify(&problem, &proof, problem_text, proof_text, &CertifyOptions::default());
        assert_eq!(ok, CertResult::Accepted);

        // corrupted raw input: structurally fine, echo must catch it
        let corrupted = "<problem><trs><rulez/></trs></problem>";
        let rejected =
            certify(&problem, &proof, corrupted, proof_text, &CertifyOptions::default());
        let CertResult::Rejected(rejection) = rejected else {
            panic!("echo mismatch must reject");
        };
        assert_eq!(rejection.reason, "input and internal representation differ");

        // with the echo check disabled the proof itself still passes
        let opts = CertifyOptions { check_echo: false };
        assert_eq!(certify(&problem, &proof, corrupted, proof_text, &opts), CertResult::Accepted);
    }
}
