//! First-order terms over a signature of fixed-arity function symbols.
//!
//! Terms are the currency of every check in this crate: rules, rewrite
//! steps, dependency pairs, loop certificates and polynomial orientations
//! all operate on the types defined here. Everything is immutable after
//! construction and compared syntactically.

use std::collections::BTreeSet;
use std::fmt;

/// Variable names starting with this character are reserved for internally
/// generated fresh variables; parsers reject them in input files.
pub const RESERVED_VAR_PREFIX: char = '!';

/// Rendered suffix of a marked (dependency-pair) symbol.
pub const MARK_SUFFIX: char = '#';

/// A function symbol: a name, a fixed arity and a dependency-pair mark.
///
/// The marked twin of `f` is a distinct symbol rendered `f#`. Marking is a
/// flag, not part of the name, so a user symbol literally called `f#`
/// cannot collide with it (parsers reject such names outright).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
    pub marked: bool,
}

impl Symbol {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        Symbol { name: name.into(), arity, marked: false }
    }

    /// The marked twin of this symbol (same name and arity).
    pub fn marked_twin(&self) -> Self {
        Symbol { name: self.name.clone(), arity: self.arity, marked: true }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if self.marked {
            write!(f, "{}", MARK_SUFFIX)?;
        }
        Ok(())
    }
}

/// A position in a term: the path of argument indices from the root.
/// The root is the empty path.
pub type Position = Vec<usize>;

/// A first-order term: a variable or a function application whose argument
/// count equals the symbol's arity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Fun(Symbol, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    /// Builds a function application. The argument count must match the
    /// symbol's declared arity.
    pub fn fun(symbol: Symbol, args: Vec<Term>) -> Self {
        assert_eq!(
            symbol.arity,
            args.len(),
            "arity mismatch when building term with symbol {}",
            symbol
        );
        Term::Fun(symbol, args)
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn root(&self) -> Option<&Symbol> {
        match self {
            Term::Var(_) => None,
            Term::Fun(sym, _) => Some(sym),
        }
    }

    /// The set of variable names occurring in the term.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(name) => {
                out.insert(name.clone());
            }
            Term::Fun(_, args) => {
                for arg in args {
                    arg.collect_vars(out);
                }
            }
        }
    }

    /// True iff the variable `name` occurs in the term.
    pub fn contains_var(&self, name: &str) -> bool {
        match self {
            Term::Var(v) => v == name,
            Term::Fun(_, args) => args.iter().any(|a| a.contains_var(name)),
        }
    }

    /// All symbols occurring in the term.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Term::Var(_) => {}
            Term::Fun(sym, args) => {
                out.insert(sym.clone());
                for arg in args {
                    arg.collect_symbols(out);
                }
            }
        }
    }

    /// All positions of the term in preorder (outermost-leftmost first);
    /// the root position comes first.
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        self.collect_positions(&mut Vec::new(), &mut out);
        out
    }

    fn collect_positions(&self, prefix: &mut Position, out: &mut Vec<Position>) {
        out.push(prefix.clone());
        if let Term::Fun(_, args) = self {
            for (i, arg) in args.iter().enumerate() {
                prefix.push(i);
                arg.collect_positions(prefix, out);
                prefix.pop();
            }
        }
    }

    /// The subterm at `pos`, or `None` if the position does not exist.
    pub fn subterm_at(&self, pos: &[usize]) -> Option<&Term> {
        let mut cur = self;
        for &i in pos {
            match cur {
                Term::Var(_) => return None,
                Term::Fun(_, args) => cur = args.get(i)?,
            }
        }
        Some(cur)
    }

    /// A copy of the term with the subterm at `pos` replaced. Panics if the
    /// position does not exist.
    pub fn replace_at(&self, pos: &[usize], replacement: Term) -> Term {
        match pos.split_first() {
            None => replacement,
            Some((&i, rest)) => match self {
                Term::Var(_) => panic!("position {:?} does not exist in {}", pos, self),
                Term::Fun(sym, args) => {
                    let mut new_args = args.clone();
                    new_args[i] = new_args[i].replace_at(rest, replacement);
                    Term::Fun(sym.clone(), new_args)
                }
            },
        }
    }

    /// All subterms in preorder, paired with their positions.
    pub fn subterms(&self) -> Vec<(Position, &Term)> {
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        self.collect_subterms(&mut prefix, &mut out);
        out
    }

    fn collect_subterms<'a>(
        &'a self,
        prefix: &mut Position,
        out: &mut Vec<(Position, &'a Term)>,
    ) {
        out.push((prefix.clone(), self));
        if let Term::Fun(_, args) = self {
            for (i, arg) in args.iter().enumerate() {
                prefix.push(i);
                arg.collect_subterms(prefix, out);
                prefix.pop();
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Fun(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(name) => write!(f, "{}", name),
            Term::Fun(sym, args) => {
                write!(f, "{}", sym)?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, arg) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{}", arg)?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

/// A rewrite rule `lhs -> rhs`.
///
/// Non-well-formed rules (variable left-hand side, or right-hand side
/// variables not covered by the left) are representable on purpose: they
/// are exactly what a `notWellFormed` disproof certificate points at.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub lhs: Term,
    pub rhs: Term,
}

impl Rule {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Rule { lhs, rhs }
    }

    /// True iff the lhs is not a variable and every rhs variable occurs in
    /// the lhs.
    pub fn is_well_formed(&self) -> bool {
        if self.lhs.is_var() {
            return false;
        }
        let lhs_vars = self.lhs.vars();
        self.rhs.vars().is_subset(&lhs_vars)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs, self.rhs)
    }
}

/// A term rewrite system: an ordered list of rules. Duplicates are allowed;
/// all checks treat the rule list with set semantics.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trs {
    pub rules: Vec<Rule>,
}

impl Trs {
    pub fn new(rules: Vec<Rule>) -> Self {
        Trs { rules }
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    /// Root symbols of all non-variable left-hand sides.
    pub fn defined_symbols(&self) -> BTreeSet<Symbol> {
        self.rules
            .iter()
            .filter_map(|rule| rule.lhs.root().cloned())
            .collect()
    }

    /// The first rule (in list order) that is not well-formed, or `None`.
    pub fn well_formedness_violation(&self) -> Option<&Rule> {
        self.rules.iter().find(|rule| !rule.is_well_formed())
    }

    /// All symbols occurring in any rule.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for rule in &self.rules {
            out.extend(rule.lhs.symbols());
            out.extend(rule.rhs.symbols());
        }
        out
    }
}

/// A context: a term with exactly one occurrence of a hole.
///
/// The hole is a distinguished nullary symbol; `apply` replaces it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Context {
    term: Term,
    hole_pos: Position,
}

/// Name of the distinguished hole symbol used inside [`Context`] terms.
pub const HOLE_NAME: &str = "\u{25a1}"; // □

/// The hole symbol itself.
pub fn hole_symbol() -> Symbol {
    Symbol::new(HOLE_NAME, 0)
}

fn hole_positions(term: &Term, prefix: &mut Position, out: &mut Vec<Position>) {
    match term {
        Term::Var(_) => {}
        Term::Fun(sym, args) => {
            if sym == &hole_symbol() {
                out.push(prefix.clone());
            }
            for (i, arg) in args.iter().enumerate() {
                prefix.push(i);
                hole_positions(arg, prefix, out);
                prefix.pop();
            }
        }
    }
}

impl Context {
    /// Wraps a term containing exactly one hole occurrence.
    pub fn new(term: Term) -> Result<Self, ContextError> {
        let mut holes = Vec::new();
        hole_positions(&term, &mut Vec::new(), &mut holes);
        match holes.len() {
            0 => Err(ContextError::NoHole),
            1 => Ok(Context { term, hole_pos: holes.remove(0) }),
            n => Err(ContextError::MultipleHoles(n)),
        }
    }

    /// The empty context: just the hole.
    pub fn hole() -> Self {
        Context { term: Term::fun(hole_symbol(), vec![]), hole_pos: vec![] }
    }

    /// `C[t]`: the context with its hole replaced by `t`.
    pub fn apply(&self, t: Term) -> Term {
        self.term.replace_at(&self.hole_pos, t)
    }

    /// The underlying term (with the hole symbol still in place).
    pub fn as_term(&self) -> &Term {
        &self.term
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.term)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ContextError {
    #[error("context has no hole")]
    NoHole,
    #[error("context has {0} holes, expected exactly one")]
    MultipleHoles(usize),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(name: &str, arity: usize) -> Symbol {
        Symbol::new(name, arity)
    }

    fn f1(name: &str, arg: Term) -> Term {
        Term::fun(sym(name, 1), vec![arg])
    }

    #[test]
    fn symbol_equality_includes_mark() {
        let f = sym("f", 1);
        let f_marked = f.marked_twin();
        assert_ne!(f, f_marked);
        assert_eq!(f.name, f_marked.name);
        assert_eq!(format!("{}", f_marked), "f#");
    }

    #[test]
    fn positions_are_preorder() {
        // f(g(x), y): positions [], [0], [0,0], [1]
        let t = Term::fun(
            sym("f", 2),
            vec![f1("g", Term::var("x")), Term::var("y")],
        );
        assert_eq!(
            t.positions(),
            vec![vec![], vec![0], vec![0, 0], vec![1]]
        );
    }

    #[test]
    fn subterm_and_replace() {
        let t = f1("f", f1("g", Term::var("x")));
        assert_eq!(t.subterm_at(&[0, 0]), Some(&Term::var("x")));
        let replaced = t.replace_at(&[0, 0], Term::var("y"));
        assert_eq!(replaced, f1("f", f1("g", Term::var("y"))));
        assert!(t.subterm_at(&[1]).is_none());
    }

    #[test]
    fn defined_symbols_of_add_trs() {
        let zero = Term::fun(sym("0", 0), vec![]);
        let add = |a, b| Term::fun(sym("add", 2), vec![a, b]);
        let s = |a| f1("s", a);
        let trs = Trs::new(vec![
            Rule::new(add(zero, Term::var("y")), Term::var("y")),
            Rule::new(
                add(s(Term::var("x")), Term::var("y")),
                s(add(Term::var("x"), Term::var("y"))),
            ),
        ]);
        let defined = trs.defined_symbols();
        assert_eq!(defined.len(), 1);
        assert!(defined.contains(&sym("add", 2)));
        assert!(trs.well_formedness_violation().is_none());
    }

    #[test]
    fn defined_symbols_ignores_variable_lhs() {
        let trs = Trs::new(vec![Rule::new(
            Term::var("x"),
            Term::fun(sym("a", 0), vec![]),
        )]);
        assert!(trs.defined_symbols().is_empty());
        assert!(trs.well_formedness_violation().is_some());
    }

    #[test]
    fn empty_trs_has_no_defined_symbols() {
        assert!(Trs::default().defined_symbols().is_empty());
    }

    #[test]
    fn well_formedness_violations() {
        // f(x) -> y: rhs variable not in lhs
        let dropped = Rule::new(f1("f", Term::var("x")), Term::var("y"));
        let trs = Trs::new(vec![dropped.clone()]);
        assert_eq!(trs.well_formedness_violation(), Some(&dropped));

        // x -> a: variable lhs
        let var_lhs = Rule::new(Term::var("x"), Term::fun(sym("a", 0), vec![]));
        let trs = Trs::new(vec![var_lhs.clone()]);
        assert_eq!(trs.well_formedness_violation(), Some(&var_lhs));

        // f(x) -> x is fine
        let ok = Rule::new(f1("f", Term::var("x")), Term::var("x"));
        assert!(Trs::new(vec![ok]).well_formedness_violation().is_none());
    }

    #[test]
    fn context_requires_exactly_one_hole() {
        let hole = Term::fun(hole_symbol(), vec![]);
        assert!(Context::new(Term::var("x")).is_err());
        assert!(Context::new(hole.clone()).is_ok());
        let two = Term::fun(sym("f", 2), vec![hole.clone(), hole.clone()]);
        assert_eq!(
            Context::new(two),
            Err(ContextError::MultipleHoles(2))
        );
    }

    #[test]
    fn context_application_fills_the_hole() {
        let c = Context::new(f1("g", Term::fun(hole_symbol(), vec![]))).unwrap();
        let filled = c.apply(Term::var("x"));
        assert_eq!(filled, f1("g", Term::var("x")));
        assert!(filled.symbols().iter().all(|s| s.name != HOLE_NAME));
    }

    #[test]
    fn display_renders_terms_compactly() {
        let t = Term::fun(
            sym("add", 2).marked_twin(),
            vec![f1("s", Term::var("x")), Term::var("y")],
        );
        assert_eq!(format!("{}", t), "add#(s(x),y)");
        let r = Rule::new(t.clone(), t);
        assert!(format!("{}", r).contains(" -> "));
    }
}
