//! The proof grammar: parsing and rendering of structured proof trees.
//!
//! The tree constructors mirror the certificate grammar exactly:
//!
//! ```text
//! proof          ::= <proof> trsProof | trsDisproof </proof>
//! trsProof       ::= <ruleRemoval> redPair trs trsProof </ruleRemoval>
//!                  | <dpTrans> dps dpProof </dpTrans>
//!                  | <rIsEmpty/>
//! dpProof        ::= <depGraphProc> component* </depGraphProc>
//!                  | <redPairUrProc> redPair dps usableRules dpProof </redPairUrProc>
//!                  | <monoRedPairUrProc> redPair dps trs usableRules dpProof </monoRedPairUrProc>
//!                  | <pIsEmpty/>
//! redPair        ::= <redPair> interpretation </redPair>
//! interpretation ::= <interpretation> type domain interpret* </interpretation>
//! trsDisproof    ::= <loop> substitution context term* </loop>
//!                  | <notWellFormed/>
//! ```
//!
//! Container internals (rule lists, interpret entries, substitutions,
//! contexts, components) are fixed by this module and documented in the
//! README format reference.

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::dp::Component;
use crate::poly::SymbolInterpretation;
use crate::term::{Context, Rule, Symbol, Term};
use crate::xml::problem::{
    child_elements, expect_name, expect_no_attrs, format_err, parse_rule, parse_term, rule_to_xml,
    term_to_xml, text_content, FormatError, ProblemDoc, SignatureBuilder, TermOptions,
};
use crate::xml::{render, Element, XmlNode};
use crate::Coeff;

/// Interpretation entries in certificate order.
pub type InterpEntries = Vec<SymbolInterpretation<Coeff>>;

/// A whole certificate: a termination proof or a nontermination disproof.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProofTree {
    Proof(TrsProof),
    Disproof(TrsDisproof),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrsProof {
    /// Orient all rules with a strictly monotone interpretation; `remaining`
    /// holds the rules that could only be weakly oriented.
    RuleRemoval { interp: InterpEntries, remaining: Vec<Rule>, rest: Box<TrsProof> },
    /// Switch to the DP framework with the supplied dependency pairs.
    DpTrans { dps: Vec<Rule>, rest: Box<DpProof> },
    RIsEmpty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DpProof {
    /// Split the problem along the claimed SCC decomposition.
    DepGraphProc { components: Vec<Component<DpProof>> },
    /// Remove pairs with a weakly monotone interpretation and usable rules.
    RedPairUrProc {
        interp: InterpEntries,
        remaining_pairs: Vec<Rule>,
        usable: Vec<Rule>,
        rest: Box<DpProof>,
    },
    /// Remove pairs and rules with a strictly monotone interpretation.
    MonoRedPairUrProc {
        interp: InterpEntries,
        remaining_pairs: Vec<Rule>,
        remaining_rules: Vec<Rule>,
        usable: Vec<Rule>,
        rest: Box<DpProof>,
    },
    PIsEmpty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrsDisproof {
    /// A loop `t1 -> ... -> tn -> C[t1 sigma]`. Bindings keep certificate
    /// order so the input can be reproduced verbatim.
    Loop { subst: Vec<(String, Term)>, context: Context, terms: Vec<Term> },
    /// The system itself is not well-formed; the loop is implicit.
    NotWellFormed,
}

const INTERP_TYPE: &str = "linearPolynomial";
const INTERP_DOMAIN: &str = "naturals";

fn proof_term_options() -> TermOptions {
    TermOptions { allow_marked: true, allow_box: false }
}

fn parse_rule_list(
    elem: &Element,
    expected: &str,
    sig: &mut SignatureBuilder,
) -> Result<Vec<Rule>, FormatError> {
    expect_name(elem, expected)?;
    child_elements(elem)?
        .into_iter()
        .map(|rule| parse_rule(rule, sig, &proof_term_options()))
        .collect()
}

fn parse_integer(elem: &Element, expected: &str) -> Result<Coeff, FormatError> {
    expect_name(elem, expected)?;
    let text = text_content(elem)?;
    Coeff::from_str(&text)
        .map_err(|_| FormatError(format!("invalid integer '{}' in <{}>", text, expected)))
}

fn parse_interpret(
    elem: &Element,
    sig: &mut SignatureBuilder,
) -> Result<SymbolInterpretation<Coeff>, FormatError> {
    expect_name(elem, "interpret")?;
    let children = child_elements(elem)?;
    if children.len() < 3 {
        return format_err("<interpret> must contain name, arity, constant and coefficients");
    }
    expect_name(children[0], "name")?;
    let raw_name = text_content(children[0])?;
    let (base, marked) = match raw_name.strip_suffix(crate::term::MARK_SUFFIX) {
        Some(base) => (base.to_string(), true),
        None => (raw_name.clone(), false),
    };
    expect_name(children[1], "arity")?;
    let arity_text = text_content(children[1])?;
    let arity: usize = arity_text
        .parse()
        .map_err(|_| FormatError(format!("invalid arity '{}' in <interpret>", arity_text)))?;
    sig.record(&raw_name, arity)?;
    let constant = parse_integer(children[2], "constant")?;
    let coeff_elems = &children[3..];
    if coeff_elems.len() != arity {
        return format_err(format!(
            "interpretation of {} declares arity {} but has {} <coeff> entries",
            raw_name,
            arity,
            coeff_elems.len()
        ));
    }
    let mut arg_coeffs = Vec::new();
    for coeff in coeff_elems {
        arg_coeffs.push(parse_integer(coeff, "coeff")?);
    }
    Ok(SymbolInterpretation::new(
        Symbol { name: base, arity, marked },
        constant,
        arg_coeffs,
    ))
}

fn parse_red_pair(elem: &Element, sig: &mut SignatureBuilder) -> Result<InterpEntries, FormatError> {
    expect_name(elem, "redPair")?;
    let children = child_elements(elem)?;
    let [interp_elem] = children.as_slice() else {
        return format_err("<redPair> must contain exactly one <interpretation>");
    };
    expect_name(interp_elem, "interpretation")?;
    let parts = child_elements(interp_elem)?;
    if parts.len() < 2 {
        return format_err("<interpretation> must contain <type> and <domain>");
    }
    expect_name(parts[0], "type")?;
    let kind = text_content(parts[0])?;
    if kind != INTERP_TYPE {
        return format_err(format!("unsupported interpretation type: {}", kind));
    }
    expect_name(parts[1], "domain")?;
    let domain = text_content(parts[1])?;
    if domain != INTERP_DOMAIN {
        return format_err(format!("unsupported interpretation domain: {}", domain));
    }
    let mut entries: InterpEntries = Vec::new();
    for part in &parts[2..] {
        let entry = parse_interpret(part, sig)?;
        if entries.iter().any(|e| e.symbol == entry.symbol) {
            return format_err(format!(
                "duplicate interpretation for symbol {}",
                entry.symbol
            ));
        }
        entries.push(entry);
    }
    Ok(entries)
}

fn parse_trs_proof(elem: &Element, sig: &mut SignatureBuilder) -> Result<TrsProof, FormatError> {
    match elem.name.as_str() {
        "ruleRemoval" => {
            expect_no_attrs(elem)?;
            let children = child_elements(elem)?;
            let [red_pair, trs, rest] = children.as_slice() else {
                return format_err("<ruleRemoval> must contain redPair, trs and a proof");
            };
            Ok(TrsProof::RuleRemoval {
                interp: parse_red_pair(red_pair, sig)?,
                remaining: parse_rule_list(trs, "trs", sig)?,
                rest: Box::new(parse_trs_proof(rest, sig)?),
            })
        }
        "dpTrans" => {
            expect_no_attrs(elem)?;
            let children = child_elements(elem)?;
            let [dps, rest] = children.as_slice() else {
                return format_err("<dpTrans> must contain dps and a DP proof");
            };
            Ok(TrsProof::DpTrans {
                dps: parse_rule_list(dps, "dps", sig)?,
                rest: Box::new(parse_dp_proof(rest, sig)?),
            })
        }
        "rIsEmpty" => {
            expect_no_attrs(elem)?;
            if !elem.children.is_empty() {
                return format_err("<rIsEmpty> must be empty");
            }
            Ok(TrsProof::RIsEmpty)
        }
        other => format_err(format!("unsupported proof technique: {}", other)),
    }
}

fn parse_component(
    elem: &Element,
    sig: &mut SignatureBuilder,
) -> Result<Component<DpProof>, FormatError> {
    expect_name(elem, "component")?;
    let children = child_elements(elem)?;
    if children.len() < 2 {
        return format_err("<component> must contain dps and realScc");
    }
    let pairs = parse_rule_list(children[0], "dps", sig)?;
    expect_name(children[1], "realScc")?;
    let real_scc = match text_content(children[1])?.as_str() {
        "true" => true,
        "false" => false,
        other => return format_err(format!("invalid <realScc> value '{}'", other)),
    };
    let subproof = match (&children[2..], real_scc) {
        ([], false) => None,
        ([proof], true) => Some(parse_dp_proof(proof, sig)?),
        ([], true) => return format_err("an SCC component must carry a subproof"),
        (_, false) => return format_err("a trivial component must not carry a subproof"),
        (_, true) => return format_err("<component> must contain exactly one subproof"),
    };
    Ok(Component { pairs, real_scc, subproof })
}

fn parse_dp_proof(elem: &Element, sig: &mut SignatureBuilder) -> Result<DpProof, FormatError> {
    match elem.name.as_str() {
        "depGraphProc" => {
            expect_no_attrs(elem)?;
            let components = child_elements(elem)?
                .into_iter()
                .map(|c| parse_component(c, sig))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(DpProof::DepGraphProc { components })
        }
        "redPairUrProc" => {
            expect_no_attrs(elem)?;
            let children = child_elements(elem)?;
            let [red_pair, dps, usable, rest] = children.as_slice() else {
                return format_err(
                    "<redPairUrProc> must contain redPair, dps, usableRules and a DP proof",
                );
            };
            Ok(DpProof::RedPairUrProc {
                interp: parse_red_pair(red_pair, sig)?,
                remaining_pairs: parse_rule_list(dps, "dps", sig)?,
                usable: parse_rule_list(usable, "usableRules", sig)?,
                rest: Box::new(parse_dp_proof(rest, sig)?),
            })
        }
        "monoRedPairUrProc" => {
            expect_no_attrs(elem)?;
            let children = child_elements(elem)?;
            let [red_pair, dps, trs, usable, rest] = children.as_slice() else {
                return format_err(
                    "<monoRedPairUrProc> must contain redPair, dps, trs, usableRules and a DP proof",
                );
            };
            Ok(DpProof::MonoRedPairUrProc {
                interp: parse_red_pair(red_pair, sig)?,
                remaining_pairs: parse_rule_list(dps, "dps", sig)?,
                remaining_rules: parse_rule_list(trs, "trs", sig)?,
                usable: parse_rule_list(usable, "usableRules", sig)?,
                rest: Box::new(parse_dp_proof(rest, sig)?),
            })
        }
        "pIsEmpty" => {
            expect_no_attrs(elem)?;
            if !elem.children.is_empty() {
                return format_err("<pIsEmpty> must be empty");
            }
            Ok(DpProof::PIsEmpty)
        }
        other => format_err(format!("unsupported proof technique: {}", other)),
    }
}

fn parse_substitution(
    elem: &Element,
    sig: &mut SignatureBuilder,
) -> Result<Vec<(String, Term)>, FormatError> {
    expect_name(elem, "substitution")?;
    let mut bindings: Vec<(String, Term)> = Vec::new();
    for bind in child_elements(elem)? {
        expect_name(bind, "bind")?;
        let parts = child_elements(bind)?;
        let [var_elem, term_elem] = parts.as_slice() else {
            return format_err("<bind> must contain a variable and a term");
        };
        let var = match parse_term(var_elem, sig, &proof_term_options())? {
            Term::Var(name) => name,
            other => {
                return format_err(format!("<bind> must bind a variable, found {}", other))
            }
        };
        if bindings.iter().any(|(v, _)| v == &var) {
            return format_err(format!("duplicate binding for variable {}", var));
        }
        let term = parse_term(term_elem, sig, &proof_term_options())?;
        bindings.push((var, term));
    }
    Ok(bindings)
}

fn parse_disproof(elem: &Element, sig: &mut SignatureBuilder) -> Result<TrsDisproof, FormatError> {
    match elem.name.as_str() {
        "loop" => {
            expect_no_attrs(elem)?;
            let children = child_elements(elem)?;
            if children.len() < 2 {
                return format_err("<loop> must contain substitution, context and terms");
            }
            let subst = parse_substitution(children[0], sig)?;
            expect_name(children[1], "context")?;
            let context_children = child_elements(children[1])?;
            let [context_term] = context_children.as_slice() else {
                return format_err("<context> must contain exactly one term");
            };
            let with_box = TermOptions { allow_marked: true, allow_box: true };
            let context_term = parse_term(context_term, sig, &with_box)?;
            let context = Context::new(context_term)
                .map_err(|e| FormatError(format!("invalid <context>: {}", e)))?;
            let terms = children[2..]
                .iter()
                .map(|t| parse_term(t, sig, &proof_term_options()))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(TrsDisproof::Loop { subst, context, terms })
        }
        "notWellFormed" => {
            expect_no_attrs(elem)?;
            if !elem.children.is_empty() {
                return format_err("<notWellFormed> must be empty");
            }
            Ok(TrsDisproof::NotWellFormed)
        }
        other => format_err(format!("unsupported proof technique: {}", other)),
    }
}

/// Parses a proof document against the signature of its problem. Symbols
/// first seen in the proof are added to the table; arity clashes with the
/// problem (or within the proof) are format errors.
pub fn parse_proof(
    root: &Element,
    problem_signature: &BTreeMap<String, usize>,
) -> Result<ProofTree, FormatError> {
    expect_name(root, "proof")?;
    let children = child_elements(root)?;
    let [step] = children.as_slice() else {
        return format_err("<proof> must contain exactly one proof step");
    };
    let mut sig = SignatureBuilder { arities: problem_signature.clone() };
    match step.name.as_str() {
        "loop" | "notWellFormed" => Ok(ProofTree::Disproof(parse_disproof(step, &mut sig)?)),
        _ => Ok(ProofTree::Proof(parse_trs_proof(step, &mut sig)?)),
    }
}

fn rule_list_to_xml(name: &str, rules: &[Rule]) -> Element {
    Element::with_children(
        name,
        rules.iter().map(|r| XmlNode::Element(rule_to_xml(r))).collect(),
    )
}

fn interp_to_xml(entries: &InterpEntries) -> Element {
    let mut children = vec![
        XmlNode::Element(Element::with_text("type", INTERP_TYPE)),
        XmlNode::Element(Element::with_text("domain", INTERP_DOMAIN)),
    ];
    for entry in entries {
        let mut parts = vec![
            XmlNode::Element(Element::with_text("name", entry.symbol.to_string())),
            XmlNode::Element(Element::with_text("arity", entry.symbol.arity.to_string())),
            XmlNode::Element(Element::with_text("constant", entry.constant.to_string())),
        ];
        for coeff in &entry.arg_coeffs {
            parts.push(XmlNode::Element(Element::with_text("coeff", coeff.to_string())));
        }
        children.push(XmlNode::Element(Element::with_children("interpret", parts)));
    }
    Element::with_children(
        "redPair",
        vec![XmlNode::Element(Element::with_children("interpretation", children))],
    )
}

fn trs_proof_to_xml(proof: &TrsProof) -> Element {
    match proof {
        TrsProof::RuleRemoval { interp, remaining, rest } => Element::with_children(
            "ruleRemoval",
            vec![
                XmlNode::Element(interp_to_xml(interp)),
                XmlNode::Element(rule_list_to_xml("trs", remaining)),
                XmlNode::Element(trs_proof_to_xml(rest)),
            ],
        ),
        TrsProof::DpTrans { dps, rest } => Element::with_children(
            "dpTrans",
            vec![
                XmlNode::Element(rule_list_to_xml("dps", dps)),
                XmlNode::Element(dp_proof_to_xml(rest)),
            ],
        ),
        TrsProof::RIsEmpty => Element::new("rIsEmpty"),
    }
}

fn dp_proof_to_xml(proof: &DpProof) -> Element {
    match proof {
        DpProof::DepGraphProc { components } => Element::with_children(
            "depGraphProc",
            components
                .iter()
                .map(|component| {
                    let mut children = vec![
                        XmlNode::Element(rule_list_to_xml("dps", &component.pairs)),
                        XmlNode::Element(Element::with_text(
                            "realScc",
                            if component.real_scc { "true" } else { "false" },
                        )),
                    ];
                    if let Some(subproof) = &component.subproof {
                        children.push(XmlNode::Element(dp_proof_to_xml(subproof)));
                    }
                    XmlNode::Element(Element::with_children("component", children))
                })
                .collect(),
        ),
        DpProof::RedPairUrProc { interp, remaining_pairs, usable, rest } => Element::with_children(
            "redPairUrProc",
            vec![
                XmlNode::Element(interp_to_xml(interp)),
                XmlNode::Element(rule_list_to_xml("dps", remaining_pairs)),
                XmlNode::Element(rule_list_to_xml("usableRules", usable)),
                XmlNode::Element(dp_proof_to_xml(rest)),
            ],
        ),
        DpProof::MonoRedPairUrProc { interp, remaining_pairs, remaining_rules, usable, rest } => {
            Element::with_children(
                "monoRedPairUrProc",
                vec![
                    XmlNode::Element(interp_to_xml(interp)),
                    XmlNode::Element(rule_list_to_xml("dps", remaining_pairs)),
                    XmlNode::Element(rule_list_to_xml("trs", remaining_rules)),
                    XmlNode::Element(rule_list_to_xml("usableRules", usable)),
                    XmlNode::Element(dp_proof_to_xml(rest)),
                ],
            )
        }
        DpProof::PIsEmpty => Element::new("pIsEmpty"),
    }
}

fn disproof_to_xml(disproof: &TrsDisproof) -> Element {
    match disproof {
        TrsDisproof::Loop { subst, context, terms } => {
            let binds = subst
                .iter()
                .map(|(var, term)| {
                    XmlNode::Element(Element::with_children(
                        "bind",
                        vec![
                            XmlNode::Element(Element::with_text("var", var.clone())),
                            XmlNode::Element(term_to_xml(term)),
                        ],
                    ))
                })
                .collect();
            let mut children = vec![
                XmlNode::Element(Element::with_children("substitution", binds)),
                XmlNode::Element(Element::with_children(
                    "context",
                    vec![XmlNode::Element(term_to_xml(context.as_term()))],
                )),
            ];
            for term in terms {
                children.push(XmlNode::Element(term_to_xml(term)));
            }
            Element::with_children("loop", children)
        }
        TrsDisproof::NotWellFormed => Element::new("notWellFormed"),
    }
}

/// Renders a proof back to its canonical element structure.
pub fn proof_to_xml(proof: &ProofTree) -> Element {
    let step = match proof {
        ProofTree::Proof(p) => trs_proof_to_xml(p),
        ProofTree::Disproof(d) => disproof_to_xml(d),
    };
    Element::with_children("proof", vec![XmlNode::Element(step)])
}

/// The canonical combined rendering used by the input echo check: the
/// problem document followed by the proof document.
pub fn serialize(problem: &ProblemDoc, proof: &ProofTree) -> String {
    let mut out = render(&crate::xml::problem::problem_to_xml(problem));
    out.push('\n');
    out.push_str(&render(&proof_to_xml(proof)));
    out
}
