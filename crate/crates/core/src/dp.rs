//! The dependency pair framework: DP transformation, usable rules with an
//! implicit argument filter, dependency graph estimation via tcap, and
//! validation of supplied SCC decompositions.
//!
//! The graph estimation is deliberately an over-approximation: the
//! certifier only ever relies on the estimated edge set being a superset
//! of the real one, so any prover that worked with a weaker estimation
//! (more edges) still gets its decomposition accepted.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::poly::{Coefficient, LinearInterpretation};
use crate::rewrite::tcap;
use crate::subst::{canonical_rule, unify, FreshVars};
use crate::term::{Rule, Symbol, Term, Trs};

/// A DP problem: a list of pairs P and a rewrite system R.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DpProblem {
    pub pairs: Vec<Rule>,
    pub rules: Trs,
}

impl DpProblem {
    pub fn new(pairs: Vec<Rule>, rules: Trs) -> Self {
        DpProblem { pairs, rules }
    }

    /// The initial DP problem `(DP(R), R)` of a rewrite system.
    pub fn initial(trs: &Trs) -> Self {
        DpProblem { pairs: dependency_pairs(trs), rules: trs.clone() }
    }
}

/// Replaces the root symbol of a function application with its marked
/// twin; variables are returned unchanged.
pub fn mark_root(term: &Term) -> Term {
    match term {
        Term::Var(_) => term.clone(),
        Term::Fun(symbol, args) => Term::Fun(symbol.marked_twin(), args.clone()),
    }
}

/// The dependency pairs of a rewrite system: for every rule `l -> r` and
/// every subterm `u` of `r` with defined root, the pair `l# -> u#`.
/// Duplicates (up to variable renaming) are dropped; output order is rule
/// order, then outermost-leftmost subterm order.
pub fn dependency_pairs(trs: &Trs) -> Vec<Rule> {
    let defined = trs.defined_symbols();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for rule in &trs.rules {
        if rule.lhs.is_var() {
            continue;
        }
        for (_, subterm) in rule.rhs.subterms() {
            let Some(root) = subterm.root() else { continue };
            if !defined.contains(root) {
                continue;
            }
            let pair = Rule::new(mark_root(&rule.lhs), mark_root(subterm));
            if seen.insert(canonical_rule(&pair)) {
                out.push(pair);
            }
        }
    }
    out
}

/// An argument filter: the retained (1-based) argument positions per
/// symbol. Symbols without an entry retain all positions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ArgumentFilter {
    retained: BTreeMap<Symbol, BTreeSet<usize>>,
}

impl ArgumentFilter {
    pub fn new(retained: BTreeMap<Symbol, BTreeSet<usize>>) -> Self {
        for (symbol, positions) in &retained {
            for &pos in positions {
                assert!(
                    pos >= 1 && pos <= symbol.arity,
                    "retained position {} out of bounds for {}",
                    pos,
                    symbol
                );
            }
        }
        ArgumentFilter { retained }
    }

    /// Retained positions of a symbol, 1-based.
    pub fn retained(&self, symbol: &Symbol) -> BTreeSet<usize> {
        match self.retained.get(symbol) {
            Some(positions) => positions.clone(),
            None => (1..=symbol.arity).collect(),
        }
    }
}

/// The argument filter implicit in a polynomial reduction pair: position i
/// of f is retained iff the i-th coefficient of f's interpretation is
/// positive. Unmapped symbols use the default interpretation, whose
/// coefficients are all 1, so they retain every position.
pub fn implicit_filter<C: Coefficient>(
    interp: &LinearInterpretation<C>,
    signature: &BTreeSet<Symbol>,
) -> ArgumentFilter {
    let mut retained = BTreeMap::new();
    for symbol in signature {
        let positions = match interp.entry(symbol) {
            Some(entry) => entry
                .arg_coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| **c > C::zero())
                .map(|(i, _)| i + 1)
                .collect(),
            None => (1..=symbol.arity).collect(),
        };
        retained.insert(symbol.clone(), positions);
    }
    ArgumentFilter { retained }
}

/// Usable rules: the least fixpoint closing the seed terms (and the
/// right-hand sides of rules already found usable) under "every subterm
/// reachable through retained argument positions whose root is defined
/// contributes all rules with that root". Returns the usable subset of the
/// rule list in its original order.
pub fn usable_rules(trs: &Trs, seeds: &[Term], filter: &ArgumentFilter) -> Vec<Rule> {
    let defined = trs.defined_symbols();
    let mut usable = vec![false; trs.rules.len()];
    let mut work: Vec<Term> = seeds.to_vec();
    while let Some(term) = work.pop() {
        let mut stack = vec![term];
        while let Some(current) = stack.pop() {
            let Term::Fun(symbol, args) = &current else { continue };
            if defined.contains(symbol) {
                for (i, rule) in trs.rules.iter().enumerate() {
                    if !usable[i] && rule.lhs.root() == Some(symbol) {
                        usable[i] = true;
                        work.push(rule.rhs.clone());
                    }
                }
            }
            for pos in filter.retained(symbol) {
                stack.push(args[pos - 1].clone());
            }
        }
    }
    trs.rules
        .iter()
        .zip(&usable)
        .filter(|(_, keep)| **keep)
        .map(|(rule, _)| rule.clone())
        .collect()
}

/// An estimated dependency graph on pair indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepGraph {
    pub node_count: usize,
    pub edges: BTreeSet<(usize, usize)>,
}

impl DepGraph {
    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.edges.contains(&(from, to))
    }
}

fn reversed_for_backward(trs: &Trs) -> Trs {
    // Collapsing rules reverse into variable-lhs rules, against which tcap
    // caps every subterm: the backward refinement then blocks nothing,
    // which is the sound degradation (dropping them instead loses real
    // edges through collapsing steps).
    Trs::new(
        trs.rules
            .iter()
            .map(|rule| Rule::new(rule.rhs.clone(), rule.lhs.clone()))
            .collect(),
    )
}

/// Estimates the dependency graph: an edge from pair `s -> t` to pair
/// `u -> v` iff `tcap(R, t)` unifies with `u` and, when the backward
/// refinement is on, `tcap(R reversed, u)` unifies with `t`. The backward
/// condition only removes edges, never adds them, so disabling it yields a
/// supergraph.
pub fn estimate_graph_with(pairs: &[Rule], trs: &Trs, backward: bool) -> DepGraph {
    let reversed = reversed_for_backward(trs);
    let mut edges = BTreeSet::new();
    for (i, from) in pairs.iter().enumerate() {
        let mut fresh = FreshVars::new();
        let capped_rhs = tcap(trs, &from.rhs, &mut fresh);
        for (j, to) in pairs.iter().enumerate() {
            // tcap output contains only fresh variables, so it is already
            // renamed apart from the other pair's side.
            if unify(&capped_rhs, &to.lhs).is_none() {
                continue;
            }
            if backward {
                let mut fresh = FreshVars::new();
                let capped_lhs = tcap(&reversed, &to.lhs, &mut fresh);
                if unify(&capped_lhs, &from.rhs).is_none() {
                    continue;
                }
            }
            edges.insert((i, j));
        }
    }
    DepGraph { node_count: pairs.len(), edges }
}

/// Estimates the dependency graph with the backward refinement enabled.
pub fn estimate_graph(pairs: &[Rule], trs: &Trs) -> DepGraph {
    estimate_graph_with(pairs, trs, true)
}

/// One component of a claimed SCC decomposition, in listed order. A real
/// SCC carries a subproof; a trivial component (single node, no edge back
/// into itself) carries none.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component<S> {
    pub pairs: Vec<Rule>,
    pub real_scc: bool,
    pub subproof: Option<S>,
}

/// Why a claimed decomposition was not accepted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComponentViolation {
    /// A pair of P does not occur in any component.
    PairNotCovered { pair: Rule },
    /// A pair of P occurs in two distinct components.
    PairMultiplyCovered { pair: Rule, first: usize, second: usize },
    /// A component lists a pair that is not in P.
    ForeignPair { component: usize, pair: Rule },
    /// An estimated edge runs from a later-listed component to an earlier
    /// one, against the required topological order.
    OrderViolation { from_component: usize, to_component: usize, from: Rule, to: Rule },
    /// A component marked as trivial has an estimated edge inside it.
    InternalEdgeInTrivial { component: usize, from: Rule, to: Rule },
    /// A component marked as a real SCC has no subproof.
    MissingSubproof { component: usize },
    /// A trivial component carries a subproof.
    UnexpectedSubproof { component: usize },
}

impl fmt::Display for ComponentViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentViolation::PairNotCovered { pair } => {
                write!(f, "pair {} is not covered by any component", pair)
            }
            ComponentViolation::PairMultiplyCovered { pair, first, second } => write!(
                f,
                "pair {} occurs in components {} and {}",
                pair, first, second
            ),
            ComponentViolation::ForeignPair { component, pair } => write!(
                f,
                "component {} lists pair {} which is not in P",
                component, pair
            ),
            ComponentViolation::OrderViolation { from_component, to_component, from, to } => {
                write!(
                    f,
                    "estimated edge {} => {} runs from component {} back to component {}, violating topological order",
                    from, to, from_component, to_component
                )
            }
            ComponentViolation::InternalEdgeInTrivial { component, from, to } => write!(
                f,
                "component {} is not marked as an SCC but has the internal estimated edge {} => {}",
                component, from, to
            ),
            ComponentViolation::MissingSubproof { component } => {
                write!(f, "component {} is marked as an SCC but has no subproof", component)
            }
            ComponentViolation::UnexpectedSubproof { component } => {
                write!(f, "component {} is trivial but carries a subproof", component)
            }
        }
    }
}

/// Validates a claimed SCC decomposition against an already-computed
/// graph. Exposed separately so the decomposition logic can be exercised
/// with arbitrary graphs.
#[allow(clippy::result_large_err)]
pub fn validate_against_graph<S>(
    graph: &DepGraph,
    pairs: &[Rule],
    components: &[Component<S>],
) -> Result<(), ComponentViolation> {
    // (a) components partition P, up to variable renaming
    let mut component_of: BTreeMap<Rule, usize> = BTreeMap::new();
    let pair_keys: BTreeSet<Rule> = pairs.iter().map(canonical_rule).collect();
    for (index, component) in components.iter().enumerate() {
        for pair in &component.pairs {
            let key = canonical_rule(pair);
            if !pair_keys.contains(&key) {
                return Err(ComponentViolation::ForeignPair {
                    component: index,
                    pair: pair.clone(),
                });
            }
            if let Some(&previous) = component_of.get(&key) {
                if previous != index {
                    return Err(ComponentViolation::PairMultiplyCovered {
                        pair: pair.clone(),
                        first: previous,
                        second: index,
                    });
                }
            } else {
                component_of.insert(key, index);
            }
        }
    }
    for pair in pairs {
        if !component_of.contains_key(&canonical_rule(pair)) {
            return Err(ComponentViolation::PairNotCovered { pair: pair.clone() });
        }
    }

    // (b) edges respect the listed order; (c) internal edges only inside
    // real SCCs
    for &(from, to) in &graph.edges {
        let from_component = component_of[&canonical_rule(&pairs[from])];
        let to_component = component_of[&canonical_rule(&pairs[to])];
        if from_component == to_component {
            if !components[from_component].real_scc {
                return Err(ComponentViolation::InternalEdgeInTrivial {
                    component: from_component,
                    from: pairs[from].clone(),
                    to: pairs[to].clone(),
                });
            }
        } else if from_component > to_component {
            return Err(ComponentViolation::OrderViolation {
                from_component,
                to_component,
                from: pairs[from].clone(),
                to: pairs[to].clone(),
            });
        }
    }

    // subproof shape
    for (index, component) in components.iter().enumerate() {
        if component.real_scc && component.subproof.is_none() {
            return Err(ComponentViolation::MissingSubproof { component: index });
        }
        if !component.real_scc && component.subproof.is_some() {
            return Err(ComponentViolation::UnexpectedSubproof { component: index });
        }
    }
    Ok(())
}

/// Validates a claimed SCC decomposition of `(pairs, trs)` against the
/// self-computed estimated graph. Only estimated edges are checked, so any
/// decomposition that is valid for a supergraph passes as well.
#[allow(clippy::result_large_err)]
pub fn validate_components<S>(
    pairs: &[Rule],
    trs: &Trs,
    components: &[Component<S>],
) -> Result<(), ComponentViolation> {
    let graph = estimate_graph(pairs, trs);
    validate_against_graph(&graph, pairs, components)
}
