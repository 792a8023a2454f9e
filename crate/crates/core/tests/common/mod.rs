//! Shared helpers for the integration suites: corpus loading and the
//! independent oracles (a hand-rolled matcher/rewriter and the clamped
//! polynomial evaluator) used to cross-check the library.

use std::collections::BTreeMap;
use std::path::PathBuf;

use certifier_core::poly::SymbolInterpretation;
use certifier_core::term::{Rule, Symbol, Term, Trs};
use certifier_core::xml::parse_xml;
use certifier_core::xml::problem::{parse_problem, ProblemDoc};
use certifier_core::xml::proof::{parse_proof, ProofTree};
use certifier_core::Coeff;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub struct CorpusPair {
    pub name: String,
    pub raw_problem: String,
    pub raw_proof: String,
    pub problem: ProblemDoc,
    pub proof: ProofTree,
}

pub fn load_corpus() -> Vec<CorpusPair> {
    let manifest = std::fs::read_to_string(corpus_dir().join("manifest.tsv"))
        .expect("read corpus manifest");
    let mut pairs = Vec::new();
    for line in manifest.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let problem_file = fields.next().expect("problem path");
        let proof_file = fields.next().expect("proof path");
        let raw_problem = std::fs::read_to_string(corpus_dir().join(problem_file))
            .expect("read problem");
        let raw_proof =
            std::fs::read_to_string(corpus_dir().join(proof_file)).expect("read proof");
        let problem = parse_problem(&parse_xml(&raw_problem).expect("problem xml"))
            .expect("parse problem");
        let proof = parse_proof(&parse_xml(&raw_proof).expect("proof xml"), &problem.signature)
            .expect("parse proof");
        pairs.push(CorpusPair {
            name: problem_file.trim_end_matches(".problem.xml").to_string(),
            raw_problem,
            raw_proof,
            problem,
            proof,
        });
    }
    pairs
}

// ---- independent one-step rewriting oracle -------------------------------

pub fn naive_match(pattern: &Term, subject: &Term, out: &mut Vec<(String, Term)>) -> bool {
    match (pattern, subject) {
        (Term::Var(x), t) => {
            if let Some((_, bound)) = out.iter().find(|(v, _)| v == x) {
                bound == t
            } else {
                out.push((x.clone(), t.clone()));
                true
            }
        }
        (Term::Fun(f, f_args), Term::Fun(g, g_args)) => {
            f == g && f_args.iter().zip(g_args).all(|(p, s)| naive_match(p, s, out))
        }
        _ => false,
    }
}

pub fn naive_apply(term: &Term, bindings: &[(String, Term)]) -> Term {
    match term {
        Term::Var(x) => bindings
            .iter()
            .find(|(v, _)| v == x)
            .map(|(_, t)| t.clone())
            .unwrap_or_else(|| term.clone()),
        Term::Fun(f, args) => Term::Fun(
            f.clone(),
            args.iter().map(|a| naive_apply(a, bindings)).collect(),
        ),
    }
}

pub fn naive_successors(trs: &Trs, term: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    for rule in &trs.rules {
        let mut bindings = Vec::new();
        if naive_match(&rule.lhs, term, &mut bindings) {
            out.push(naive_apply(&rule.rhs, &bindings));
        }
    }
    if let Term::Fun(f, args) = term {
        for (i, arg) in args.iter().enumerate() {
            for succ in naive_successors(trs, arg) {
                let mut new_args = args.clone();
                new_args[i] = succ;
                out.push(Term::Fun(f.clone(), new_args));
            }
        }
    }
    out
}

// ---- clamped polynomial evaluation oracle --------------------------------

/// Interpretation entries in plain i64 form: symbol -> (constant, coeffs).
pub type PlainInterp = BTreeMap<Symbol, (i64, Vec<i64>)>;

pub fn plain_interp(entries: &[SymbolInterpretation<Coeff>]) -> PlainInterp {
    use num_traits::ToPrimitive;
    entries
        .iter()
        .map(|e| {
            (
                e.symbol.clone(),
                (
                    e.constant.to_i64().expect("small constant"),
                    e.arg_coeffs
                        .iter()
                        .map(|c| c.to_i64().expect("small coefficient"))
                        .collect(),
                ),
            )
        })
        .collect()
}

/// Evaluates a term under the clamped semantics
/// `[[f(ts)]] = max(0, c0 + sum ci * [[ti]])`, defaulting unmapped symbols
/// to `0 + x1 + ... + xn`.
pub fn clamped_eval(term: &Term, interp: &PlainInterp, assignment: &BTreeMap<String, i64>) -> i64 {
    match term {
        Term::Var(name) => assignment[name],
        Term::Fun(symbol, args) => {
            let default = (0, vec![1; symbol.arity]);
            let (c0, coeffs) = interp.get(symbol).cloned().unwrap_or(default);
            let mut acc = c0;
            for (c, arg) in coeffs.iter().zip(args) {
                acc += c * clamped_eval(arg, interp, assignment);
            }
            acc.max(0)
        }
    }
}

/// All assignments of `0..=max` to the given variables.
pub fn assignments(vars: &[String], max: i64) -> Vec<BTreeMap<String, i64>> {
    let mut out = vec![BTreeMap::new()];
    for var in vars {
        let mut next = Vec::new();
        for partial in &out {
            for value in 0..=max {
                let mut extended = partial.clone();
                extended.insert(var.clone(), value);
                next.push(extended);
            }
        }
        out = next;
    }
    out
}

pub fn rule_vars(rule: &Rule) -> Vec<String> {
    let mut vars: Vec<String> = rule.lhs.vars().into_iter().collect();
    for v in rule.rhs.vars() {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    vars
}

/// Exhaustive check of `lhs >= rhs (+1)` over the `{0..3}` grid.
pub fn oracle_orients(rule: &Rule, interp: &PlainInterp, strict: bool) -> bool {
    let vars = rule_vars(rule);
    for assignment in assignments(&vars, 3) {
        let l = clamped_eval(&rule.lhs, interp, &assignment);
        let r = clamped_eval(&rule.rhs, interp, &assignment);
        if strict && l < r + 1 {
            return false;
        }
        if !strict && l < r {
            return false;
        }
    }
    true
}
