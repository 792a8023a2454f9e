//! Parsing and rendering of the problem format: an XTC-subset document
//! `problem > trs > rules > rule*` where each rule has `lhs` and `rhs`
//! holding one term built from `funapp`/`var` elements.

use std::collections::BTreeMap;

use crate::term::{hole_symbol, Rule, Symbol, Term, Trs, MARK_SUFFIX, RESERVED_VAR_PREFIX};
use crate::xml::{Element, XmlNode};

/// A parsed problem: the rewrite system and the inferred signature, keyed
/// by rendered symbol name (marked symbols carry their `#` suffix).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemDoc {
    pub trs: Trs,
    pub signature: BTreeMap<String, usize>,
}

/// A format-level error: the document is well-formed XML but not a valid
/// problem or proof.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct FormatError(pub String);

pub(crate) fn format_err<T>(message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError(message.into()))
}

pub(crate) fn expect_no_attrs(elem: &Element) -> Result<(), FormatError> {
    if let Some((name, _)) = elem.attrs.first() {
        return format_err(format!("unknown attribute '{}' on <{}>", name, elem.name));
    }
    Ok(())
}

pub(crate) fn expect_name(elem: &Element, name: &str) -> Result<(), FormatError> {
    if elem.name != name {
        return format_err(format!("expected <{}>, found <{}>", name, elem.name));
    }
    expect_no_attrs(elem)
}

/// All children as elements; any character data is an error.
pub(crate) fn child_elements(elem: &Element) -> Result<Vec<&Element>, FormatError> {
    let mut out = Vec::new();
    for child in &elem.children {
        match child {
            XmlNode::Element(e) => out.push(e),
            XmlNode::Text(text) => {
                return format_err(format!(
                    "unexpected character data '{}' inside <{}>",
                    text.trim(),
                    elem.name
                ))
            }
        }
    }
    Ok(out)
}

/// The trimmed text content of a leaf element; child elements are an error.
pub(crate) fn text_content(elem: &Element) -> Result<String, FormatError> {
    let mut out = String::new();
    for child in &elem.children {
        match child {
            XmlNode::Text(text) => out.push_str(text),
            XmlNode::Element(e) => {
                return format_err(format!(
                    "unexpected element <{}> inside <{}>",
                    e.name, elem.name
                ))
            }
        }
    }
    Ok(out.trim().to_string())
}

fn check_plain_name(kind: &str, name: &str) -> Result<(), FormatError> {
    if name.is_empty() {
        return format_err(format!("empty {} name", kind));
    }
    if name.chars().any(|c| c.is_whitespace() || matches!(c, '<' | '>' | '&' | '"' | '\'')) {
        return format_err(format!("invalid {} name '{}'", kind, name));
    }
    if name.contains(MARK_SUFFIX) {
        return format_err(format!(
            "{} name '{}' collides with the marked-symbol namespace",
            kind, name
        ));
    }
    if name.starts_with(RESERVED_VAR_PREFIX) {
        return format_err(format!(
            "{} name '{}' uses the reserved fresh-variable prefix '{}'",
            kind, name, RESERVED_VAR_PREFIX
        ));
    }
    Ok(())
}

/// Tracks symbol arities while terms are parsed; every symbol must occur
/// with a single arity across problem and proof.
#[derive(Debug, Clone, Default)]
pub(crate) struct SignatureBuilder {
    pub arities: BTreeMap<String, usize>,
}

impl SignatureBuilder {
    pub(crate) fn record(&mut self, display_name: &str, arity: usize) -> Result<(), FormatError> {
        match self.arities.get(display_name) {
            Some(&known) if known != arity => format_err(format!(
                "symbol arity mismatch: {} (used with {} and {})",
                display_name, known, arity
            )),
            _ => {
                self.arities.insert(display_name.to_string(), arity);
                Ok(())
            }
        }
    }
}

pub(crate) struct TermOptions {
    /// Accept a trailing `#` on funapp names (proof files only).
    pub allow_marked: bool,
    /// Accept `<box/>` hole elements (context terms only).
    pub allow_box: bool,
}

pub(crate) fn parse_term(
    elem: &Element,
    sig: &mut SignatureBuilder,
    opts: &TermOptions,
) -> Result<Term, FormatError> {
    match elem.name.as_str() {
        "var" => {
            expect_no_attrs(elem)?;
            let name = text_content(elem)?;
            check_plain_name("variable", &name)?;
            Ok(Term::Var(name))
        }
        "funapp" => {
            expect_no_attrs(elem)?;
            let children = child_elements(elem)?;
            let Some((name_elem, arg_elems)) = children.split_first() else {
                return format_err("<funapp> is missing its <name> child");
            };
            expect_name(name_elem, "name")?;
            let raw_name = text_content(name_elem)?;
            let (base, marked) = match raw_name.strip_suffix(MARK_SUFFIX) {
                Some(base) if opts.allow_marked => (base.to_string(), true),
                Some(_) => {
                    return format_err(format!(
                        "symbol name '{}' collides with the marked-symbol namespace",
                        raw_name
                    ))
                }
                None => (raw_name.clone(), false),
            };
            check_plain_name("symbol", &base)?;
            let mut args = Vec::new();
            for arg_elem in arg_elems {
                expect_name(arg_elem, "arg")?;
                let inner = child_elements(arg_elem)?;
                if inner.len() != 1 {
                    return format_err("<arg> must contain exactly one term");
                }
                args.push(parse_term(inner[0], sig, opts)?);
            }
            sig.record(&raw_name, args.len())?;
            let symbol = Symbol { name: base, arity: args.len(), marked };
            Ok(Term::Fun(symbol, args))
        }
        "box" if opts.allow_box => {
            expect_no_attrs(elem)?;
            if !elem.children.is_empty() {
                return format_err("<box> must be empty");
            }
            Ok(Term::fun(hole_symbol(), vec![]))
        }
        other => format_err(format!("unexpected element <{}> where a term was expected", other)),
    }
}

pub(crate) fn parse_rule(
    elem: &Element,
    sig: &mut SignatureBuilder,
    opts: &TermOptions,
) -> Result<Rule, FormatError> {
    expect_name(elem, "rule")?;
    let children = child_elements(elem)?;
    let [lhs_elem, rhs_elem] = children.as_slice() else {
        return format_err("<rule> must contain exactly <lhs> and <rhs>");
    };
    expect_name(lhs_elem, "lhs")?;
    expect_name(rhs_elem, "rhs")?;
    let lhs_children = child_elements(lhs_elem)?;
    let rhs_children = child_elements(rhs_elem)?;
    let ([lhs_term], [rhs_term]) = (lhs_children.as_slice(), rhs_children.as_slice()) else {
        return format_err("<lhs> and <rhs> must each contain exactly one term");
    };
    Ok(Rule::new(
        parse_term(lhs_term, sig, opts)?,
        parse_term(rhs_term, sig, opts)?,
    ))
}

/// Parses an XTC-subset problem document.
///
/// Well-formedness of rules is deliberately not enforced here: a
/// `notWellFormed` certificate needs the offending rules to survive
/// parsing.
pub fn parse_problem(root: &Element) -> Result<ProblemDoc, FormatError> {
    expect_name(root, "problem")?;
    let children = child_elements(root)?;
    let [trs_elem] = children.as_slice() else {
        return format_err("<problem> must contain exactly one <trs>");
    };
    expect_name(trs_elem, "trs")?;
    let trs_children = child_elements(trs_elem)?;
    let [rules_elem] = trs_children.as_slice() else {
        return format_err("<trs> must contain exactly one <rules>");
    };
    expect_name(rules_elem, "rules")?;

    let mut sig = SignatureBuilder::default();
    let opts = TermOptions { allow_marked: false, allow_box: false };
    let mut rules = Vec::new();
    for rule_elem in child_elements(rules_elem)? {
        rules.push(parse_rule(rule_elem, &mut sig, &opts)?);
    }
    Ok(ProblemDoc { trs: Trs::new(rules), signature: sig.arities })
}

pub(crate) fn term_to_xml(term: &Term) -> Element {
    match term {
        Term::Var(name) => Element::with_text("var", name.clone()),
        Term::Fun(symbol, args) => {
            if *symbol == hole_symbol() {
                return Element::new("box");
            }
            let mut children = vec![XmlNode::Element(Element::with_text(
                "name",
                symbol.to_string(),
            ))];
            for arg in args {
                children.push(XmlNode::Element(Element::with_children(
                    "arg",
                    vec![XmlNode::Element(term_to_xml(arg))],
                )));
            }
            Element::with_children("funapp", children)
        }
    }
}

pub(crate) fn rule_to_xml(rule: &Rule) -> Element {
    Element::with_children(
        "rule",
        vec![
            XmlNode::Element(Element::with_children(
                "lhs",
                vec![XmlNode::Element(term_to_xml(&rule.lhs))],
            )),
            XmlNode::Element(Element::with_children(
                "rhs",
                vec![XmlNode::Element(term_to_xml(&rule.rhs))],
            )),
        ],
    )
}

/// Renders a problem back to its canonical element structure.
pub fn problem_to_xml(problem: &ProblemDoc) -> Element {
    let rules = Element::with_children(
        "rules",
        problem
            .trs
            .rules
            .iter()
            .map(|r| XmlNode::Element(rule_to_xml(r)))
            .collect(),
    );
    let trs = Element::with_children("trs", vec![XmlNode::Element(rules)]);
    Element::with_children("problem", vec![XmlNode::Element(trs)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xml::parse_xml;

    const ADD_PROBLEM: &str = r#"<problem>
  <trs>
    <rules>
      <rule>
        <lhs><funapp><name>add</name><arg><funapp><name>0</name></funapp></arg><arg><var>y</var></arg></funapp></lhs>
        <rhs><var>y</var></rhs>
      </rule>
      <rule>
        <lhs><funapp><name>add</name><arg><funapp><name>s</name><arg><var>x</var></arg></funapp></arg><arg><var>y</var></arg></funapp></lhs>
        <rhs><funapp><name>s</name><arg><funapp><name>add</name><arg><var>x</var></arg><arg><var>y</var></arg></funapp></arg></funapp></rhs>
      </rule>
    </rules>
  </trs>
</problem>"#;

    #[test]
    fn parses_the_add_problem() {
        let doc = parse_problem(&parse_xml(ADD_PROBLEM).unwrap()).unwrap();
        assert_eq!(doc.trs.len(), 2);
        assert_eq!(doc.signature.get("add"), Some(&2));
        assert_eq!(doc.signature.get("s"), Some(&1));
        assert_eq!(doc.signature.get("0"), Some(&0));
        let add = Symbol::new("add", 2);
        assert_eq!(doc.trs.defined_symbols().into_iter().collect::<Vec<_>>(), vec![add]);
    }

    #[test]
    fn parses_an_empty_rules_element() {
        let doc =
            parse_problem(&parse_xml("<problem><trs><rules/></trs></problem>").unwrap()).unwrap();
        assert!(doc.trs.is_empty());
    }

    #[test]
    fn rejects_arity_clashes() {
        let text = r#"<problem><trs><rules>
            <rule><lhs><funapp><name>f</name><arg><var>x</var></arg></funapp></lhs>
                  <rhs><funapp><name>f</name><arg><var>x</var></arg><arg><var>x</var></arg></funapp></rhs></rule>
        </rules></trs></problem>"#;
        let err = parse_problem(&parse_xml(text).unwrap()).unwrap_err();
        assert!(err.0.contains("symbol arity mismatch: f"), "{}", err);
    }

    #[test]
    fn variable_lhs_is_not_a_parse_error() {
        let text = r#"<problem><trs><rules>
            <rule><lhs><var>x</var></lhs><rhs><funapp><name>a</name></funapp></rhs></rule>
        </rules></trs></problem>"#;
        let doc = parse_problem(&parse_xml(text).unwrap()).unwrap();
        assert!(doc.trs.well_formedness_violation().is_some());
    }

    #[test]
    fn rejects_marked_names_and_reserved_variables() {
        let marked = r#"<problem><trs><rules>
            <rule><lhs><funapp><name>f#</name></funapp></lhs><rhs><var>x</var></rhs></rule>
        </rules></trs></problem>"#;
        let err = parse_problem(&parse_xml(marked).unwrap()).unwrap_err();
        assert!(err.0.contains("marked-symbol namespace"), "{}", err);

        let reserved = r#"<problem><trs><rules>
            <rule><lhs><funapp><name>f</name><arg><var>!x</var></arg></funapp></lhs><rhs><var>!x</var></rhs></rule>
        </rules></trs></problem>"#;
        let err = parse_problem(&parse_xml(reserved).unwrap()).unwrap_err();
        assert!(err.0.contains("reserved"), "{}", err);
    }

    #[test]
    fn rejects_unknown_elements_and_attributes() {
        let unknown = "<problem><trs><rules><frob/></rules></trs></problem>";
        assert!(parse_problem(&parse_xml(unknown).unwrap()).is_err());
        let attr = "<problem><trs kind=\"x\"><rules/></trs></problem>";
        let err = parse_problem(&parse_xml(attr).unwrap()).unwrap_err();
        assert!(err.0.contains("unknown attribute"), "{}", err);
    }

    #[test]
    fn round_trips_through_the_serializer() {
        let doc = parse_problem(&parse_xml(ADD_PROBLEM).unwrap()).unwrap();
        let rendered = crate::xml::render(&problem_to_xml(&doc));
        let reparsed = parse_problem(&parse_xml(&rendered).unwrap()).unwrap();
        assert_eq!(doc, reparsed);
        assert!(crate::xml::equal_modulo_whitespace(&rendered, ADD_PROBLEM));
    }
}
