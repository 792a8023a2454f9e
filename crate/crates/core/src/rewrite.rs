//! One-step rewriting and the tcap abstraction.

use crate::subst::{match_term, rename_rule_apart, unify, FreshVars, Substitution};
use crate::term::{Position, Term, Trs};

/// Evidence that `s` rewrites to `t` in one step: the rule index, the
/// redex position and the matching substitution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteWitness {
    pub rule_index: usize,
    pub position: Position,
    pub subst: Substitution,
}

/// Searches for a one-step rewrite from `s` to `t` with some rule of `trs`
/// at some position. Positions are tried outermost-leftmost first, rules in
/// list order, so the returned witness is deterministic.
pub fn rewrite_step(trs: &Trs, s: &Term, t: &Term) -> Option<RewriteWitness> {
    for position in s.positions() {
        let redex = s.subterm_at(&position).expect("position comes from enumeration");
        for (rule_index, rule) in trs.rules.iter().enumerate() {
            if let Some(subst) = match_term(&rule.lhs, redex) {
                let contractum = subst.apply(&rule.rhs);
                if s.replace_at(&position, contractum) == *t {
                    return Some(RewriteWitness { rule_index, position, subst });
                }
            }
        }
    }
    None
}

/// The tcap abstraction: replaces every subterm that might be rewritten by
/// `trs` (and every variable) with a fresh variable.
///
/// `tcap(x)` is a fresh variable; `tcap(f(t1..tn))` caps the arguments
/// first and then replaces the whole result by a fresh variable iff it
/// unifies with some rule's left-hand side (renamed apart). Output
/// variables are pairwise distinct and disjoint from input variables.
pub fn tcap(trs: &Trs, term: &Term, fresh: &mut FreshVars) -> Term {
    match term {
        Term::Var(_) => fresh.fresh(),
        Term::Fun(sym, args) => {
            let capped = Term::Fun(
                sym.clone(),
                args.iter().map(|a| tcap(trs, a, fresh)).collect(),
            );
            let unifies_with_some_lhs = trs.rules.iter().any(|rule| {
                let renamed = rename_rule_apart(rule, fresh);
                unify(&capped, &renamed.lhs).is_some()
            });
            if unifies_with_some_lhs {
                fresh.fresh()
            } else {
                capped
            }
        }
    }
}
