//! Substitutions, matching and unification.

use std::collections::BTreeMap;
use std::fmt;

use crate::term::{Rule, Term, RESERVED_VAR_PREFIX};

/// A finite map from variable names to terms. Unbound variables map to
/// themselves under application.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: BTreeMap<String, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Substitution::default()
    }

    pub fn singleton(var: impl Into<String>, term: Term) -> Self {
        let mut s = Substitution::new();
        s.bind(var, term);
        s
    }

    pub fn from_bindings(bindings: impl IntoIterator<Item = (String, Term)>) -> Self {
        Substitution { bindings: bindings.into_iter().collect() }
    }

    pub fn bind(&mut self, var: impl Into<String>, term: Term) {
        self.bindings.insert(var.into(), term);
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.bindings.get(var)
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Term)> {
        self.bindings.iter()
    }

    /// Homomorphic application: replaces bound variables, leaves symbols
    /// and unbound variables unchanged.
    pub fn apply(&self, term: &Term) -> Term {
        match term {
            Term::Var(name) => match self.bindings.get(name) {
                Some(t) => t.clone(),
                None => term.clone(),
            },
            Term::Fun(sym, args) => {
                Term::Fun(sym.clone(), args.iter().map(|a| self.apply(a)).collect())
            }
        }
    }

    /// Applies `self` to every binding image. Used to keep unifiers
    /// idempotent while they are being extended.
    fn normalize_under(&mut self, var: &str, term: &Term) {
        let single = Substitution::singleton(var.to_owned(), term.clone());
        for image in self.bindings.values_mut() {
            *image = single.apply(image);
        }
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (var, term)) in self.bindings.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{} := {}", var, term)?;
        }
        write!(f, "}}")
    }
}

/// Matches `pattern` against `subject`: returns the unique minimal
/// substitution `s` with `pattern . s = subject`, or `None`.
pub fn match_term(pattern: &Term, subject: &Term) -> Option<Substitution> {
    let mut subst = Substitution::new();
    match_into(pattern, subject, &mut subst).then_some(subst)
}

fn match_into(pattern: &Term, subject: &Term, subst: &mut Substitution) -> bool {
    match pattern {
        Term::Var(name) => match subst.get(name) {
            Some(bound) => bound == subject,
            None => {
                subst.bind(name.clone(), subject.clone());
                true
            }
        },
        Term::Fun(sym, args) => match subject {
            Term::Var(_) => false,
            Term::Fun(sub_sym, sub_args) => {
                sym == sub_sym
                    && args
                        .iter()
                        .zip(sub_args)
                        .all(|(p, s)| match_into(p, s, subst))
            }
        },
    }
}

/// Robinson unification with occurs check. Returns an idempotent most
/// general unifier, or `None` if the terms do not unify.
pub fn unify(s: &Term, t: &Term) -> Option<Substitution> {
    let mut subst = Substitution::new();
    let mut queue = vec![(s.clone(), t.clone())];
    while let Some((a, b)) = queue.pop() {
        let a = subst.apply(&a);
        let b = subst.apply(&b);
        match (a, b) {
            (Term::Var(x), Term::Var(y)) if x == y => {}
            (Term::Var(x), t) | (t, Term::Var(x)) => {
                if t.contains_var(&x) {
                    return None; // occurs check
                }
                subst.normalize_under(&x, &t);
                subst.bind(x, t);
            }
            (Term::Fun(f, f_args), Term::Fun(g, g_args)) => {
                if f != g {
                    return None;
                }
                queue.extend(f_args.into_iter().zip(g_args));
            }
        }
    }
    Some(subst)
}

/// Counter-based source of fresh variables. Generated names start with the
/// reserved prefix, which parsers never accept, so fresh variables are
/// always disjoint from variables of parsed input.
#[derive(Debug, Default)]
pub struct FreshVars {
    counter: u64,
}

impl FreshVars {
    pub fn new() -> Self {
        FreshVars::default()
    }

    pub fn fresh_name(&mut self) -> String {
        let name = format!("{}{}", RESERVED_VAR_PREFIX, self.counter);
        self.counter += 1;
        name
    }

    pub fn fresh(&mut self) -> Term {
        Term::Var(self.fresh_name())
    }
}

/// Renames all variables of a rule to fresh ones. Used to rename rule
/// sides apart before unification; the pair side is never renamed.
pub fn rename_rule_apart(rule: &Rule, fresh: &mut FreshVars) -> Rule {
    let mut subst = Substitution::new();
    let mut vars = rule.lhs.vars();
    vars.extend(rule.rhs.vars());
    for var in vars {
        subst.bind(var, fresh.fresh());
    }
    Rule::new(subst.apply(&rule.lhs), subst.apply(&rule.rhs))
}

/// Renames the variables of a rule by first occurrence in a preorder walk
/// of lhs then rhs. Two rules that are equal up to variable renaming have
/// identical canonical forms; all set-semantics comparisons between rule
/// lists go through this.
pub fn canonical_rule(rule: &Rule) -> Rule {
    let mut renaming: BTreeMap<String, String> = BTreeMap::new();
    let mut order = Vec::new();
    collect_var_order(&rule.lhs, &mut order);
    collect_var_order(&rule.rhs, &mut order);
    for var in order {
        let next = renaming.len();
        renaming
            .entry(var)
            .or_insert_with(|| format!("{}c{}", RESERVED_VAR_PREFIX, next));
    }
    let subst = Substitution::from_bindings(
        renaming
            .into_iter()
            .map(|(from, to)| (from, Term::Var(to))),
    );
    Rule::new(subst.apply(&rule.lhs), subst.apply(&rule.rhs))
}

fn collect_var_order(term: &Term, out: &mut Vec<String>) {
    match term {
        Term::Var(name) => {
            if !out.contains(name) {
                out.push(name.clone());
            }
        }
        Term::Fun(_, args) => {
            for arg in args {
                collect_var_order(arg, out);
            }
        }
    }
}
