//! Regenerates the certification corpus under `corpus/` at the workspace
//! root: problem/proof pairs covering every proof-tree constructor, plus
//! the batch manifest. Every pair is certified (including the input echo
//! check) before it is written, so the committed corpus is accepted by
//! construction.
//!
//! Run with: `cargo run -p certifier-core --example make_corpus`

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use certifier_core::certify::{certify, CertResult, CertifyOptions};
use certifier_core::dp::Component;
use certifier_core::poly::SymbolInterpretation;
use certifier_core::term::{Context, Rule, Symbol, Term, Trs};
use certifier_core::xml::problem::{problem_to_xml, ProblemDoc};
use certifier_core::xml::proof::{proof_to_xml, DpProof, ProofTree, TrsDisproof, TrsProof};
use certifier_core::xml::render;
use certifier_core::Coeff;

fn v(name: &str) -> Term {
    Term::var(name)
}

fn app(name: &str, args: Vec<Term>) -> Term {
    Term::fun(Symbol::new(name, args.len()), args)
}

fn m(name: &str, args: Vec<Term>) -> Term {
    Term::fun(Symbol::new(name, args.len()).marked_twin(), args)
}

fn rule(lhs: Term, rhs: Term) -> Rule {
    Rule::new(lhs, rhs)
}

fn entry(name: &str, marked: bool, constant: i64, coeffs: &[i64]) -> SymbolInterpretation<Coeff> {
    let mut symbol = Symbol::new(name, coeffs.len());
    if marked {
        symbol = symbol.marked_twin();
    }
    SymbolInterpretation::new(
        symbol,
        Coeff::from(constant),
        coeffs.iter().map(|&c| Coeff::from(c)).collect(),
    )
}

fn problem_doc(trs: Trs) -> ProblemDoc {
    let signature: BTreeMap<String, usize> = trs
        .symbols()
        .into_iter()
        .map(|s| (s.to_string(), s.arity))
        .collect();
    ProblemDoc { trs, signature }
}

fn scc(pairs: Vec<Rule>, subproof: DpProof) -> Component<DpProof> {
    Component { pairs, real_scc: true, subproof: Some(subproof) }
}

fn trivial(pairs: Vec<Rule>) -> Component<DpProof> {
    Component { pairs, real_scc: false, subproof: None }
}

fn add_rules() -> Vec<Rule> {
    vec![
        rule(app("add", vec![app("0", vec![]), v("y")]), v("y")),
        rule(
            app("add", vec![app("s", vec![v("x")]), v("y")]),
            app("s", vec![app("add", vec![v("x"), v("y")])]),
        ),
    ]
}

fn add_pair() -> Rule {
    rule(
        m("add", vec![app("s", vec![v("x")]), v("y")]),
        m("add", vec![v("x"), v("y")]),
    )
}

/// Strict interpretation orienting both add rules strictly.
fn add_strict() -> Vec<SymbolInterpretation<Coeff>> {
    vec![entry("add", false, 1, &[2, 1]), entry("s", false, 1, &[1]), entry("0", false, 0, &[])]
}

/// Weak interpretation projecting add# onto its first argument.
fn add_sharp_proj() -> Vec<SymbolInterpretation<Coeff>> {
    vec![entry("add", true, 0, &[1, 0]), entry("s", false, 1, &[1]), entry("0", false, 0, &[])]
}

fn red_pair_empty_rest(interp: Vec<SymbolInterpretation<Coeff>>, usable: Vec<Rule>) -> DpProof {
    DpProof::RedPairUrProc {
        interp,
        remaining_pairs: vec![],
        usable,
        rest: Box::new(DpProof::PIsEmpty),
    }
}

/// The f/add system: f counts down through add.
fn f_add_rules() -> Vec<Rule> {
    let mut rules = add_rules();
    rules.push(rule(
        app("f", vec![app("s", vec![v("x")])]),
        app("f", vec![app("add", vec![v("x"), app("0", vec![])])]),
    ));
    rules
}

fn f_add_pairs() -> (Rule, Rule, Rule) {
    let p_add = add_pair();
    let p_ff = rule(
        m("f", vec![app("s", vec![v("x")])]),
        m("f", vec![app("add", vec![v("x"), app("0", vec![])])]),
    );
    let p_fa = rule(
        m("f", vec![app("s", vec![v("x")])]),
        m("add", vec![v("x"), app("0", vec![])]),
    );
    (p_add, p_ff, p_fa)
}

/// Weak interpretation for the f# component with usable add rules.
fn f_sharp_interp() -> Vec<SymbolInterpretation<Coeff>> {
    vec![
        entry("f", true, 0, &[1]),
        entry("add", false, 0, &[1, 1]),
        entry("s", false, 1, &[1]),
        entry("0", false, 0, &[]),
    ]
}

/// The three-component graph decomposition of the f/add system.
fn f_add_graph_proof(usable_for_ff: Vec<Rule>) -> TrsProof {
    let (p_add, p_ff, p_fa) = f_add_pairs();
    TrsProof::DpTrans {
        dps: vec![p_add.clone(), p_ff.clone(), p_fa.clone()],
        rest: Box::new(DpProof::DepGraphProc {
            components: vec![
                scc(vec![p_ff], red_pair_empty_rest(f_sharp_interp(), usable_for_ff)),
                trivial(vec![p_fa]),
                scc(vec![p_add], red_pair_empty_rest(add_sharp_proj(), vec![])),
            ],
        }),
    }
}

#[allow(clippy::vec_init_then_push)]
fn corpus() -> Vec<(&'static str, Trs, ProofTree)> {
    let mut entries = Vec::new();

    // 01: trivial proof for the empty system
    entries.push(("01_empty", Trs::default(), ProofTree::Proof(TrsProof::RIsEmpty)));

    // 02: rule removal deletes both add rules at once
    entries.push((
        "02_add_rule_removal",
        Trs::new(add_rules()),
        ProofTree::Proof(TrsProof::RuleRemoval {
            interp: add_strict(),
            remaining: vec![],
            rest: Box::new(TrsProof::RIsEmpty),
        }),
    ));

    // 03: rule removal may keep a strictly oriented rule; the kept rule is
    // then handled in the DP framework
    entries.push((
        "03_add_removal_then_dp",
        Trs::new(add_rules()),
        ProofTree::Proof(TrsProof::RuleRemoval {
            interp: add_strict(),
            remaining: vec![add_rules()[1].clone()],
            rest: Box::new(TrsProof::DpTrans {
                dps: vec![add_pair()],
                rest: Box::new(DpProof::DepGraphProc {
                    components: vec![scc(
                        vec![add_pair()],
                        red_pair_empty_rest(add_sharp_proj(), vec![]),
                    )],
                }),
            }),
        }),
    ));

    // 04: the plain DP route for add
    entries.push((
        "04_add_dp_graph",
        Trs::new(add_rules()),
        ProofTree::Proof(TrsProof::DpTrans {
            dps: vec![add_pair()],
            rest: Box::new(DpProof::DepGraphProc {
                components: vec![scc(
                    vec![add_pair()],
                    red_pair_empty_rest(add_sharp_proj(), vec![]),
                )],
            }),
        }),
    ));

    // 05: three components (one trivial), usable rules nonempty
    entries.push((
        "05_f_add_components",
        Trs::new(f_add_rules()),
        ProofTree::Proof(f_add_graph_proof(add_rules())),
    ));

    // 06: same decomposition, f# component removed by the monotone
    // reduction pair processor, which also shrinks R
    let (p_add, p_ff, p_fa) = f_add_pairs();
    let mono_interp = vec![
        entry("f", true, 0, &[1]),
        entry("add", false, 1, &[1, 1]),
        entry("s", false, 2, &[1]),
        entry("0", false, 0, &[]),
    ];
    entries.push((
        "06_f_add_mono",
        Trs::new(f_add_rules()),
        ProofTree::Proof(TrsProof::DpTrans {
            dps: vec![p_add.clone(), p_ff.clone(), p_fa.clone()],
            rest: Box::new(DpProof::DepGraphProc {
                components: vec![
                    scc(
                        vec![p_ff],
                        DpProof::MonoRedPairUrProc {
                            interp: mono_interp,
                            remaining_pairs: vec![],
                            remaining_rules: vec![add_rules()[1].clone()],
                            usable: add_rules(),
                            rest: Box::new(DpProof::PIsEmpty),
                        },
                    ),
                    trivial(vec![p_fa]),
                    scc(vec![p_add], red_pair_empty_rest(add_sharp_proj(), vec![])),
                ],
            }),
        }),
    ));

    // 07: monotone reduction pair directly on the initial DP problem
    entries.push((
        "07_add_mono",
        Trs::new(add_rules()),
        ProofTree::Proof(TrsProof::DpTrans {
            dps: vec![add_pair()],
            rest: Box::new(DpProof::MonoRedPairUrProc {
                interp: vec![
                    entry("add", true, 0, &[1, 1]),
                    entry("add", false, 1, &[2, 1]),
                    entry("s", false, 1, &[1]),
                    entry("0", false, 0, &[]),
                ],
                remaining_pairs: vec![],
                remaining_rules: vec![],
                usable: vec![],
                rest: Box::new(DpProof::PIsEmpty),
            }),
        }),
    ));

    // 08: one-step loop through a growing substitution
    entries.push((
        "08_loop_grow",
        Trs::new(vec![rule(
            app("f", vec![v("x")]),
            app("f", vec![app("s", vec![v("x")])]),
        )]),
        ProofTree::Disproof(TrsDisproof::Loop {
            subst: vec![("x".to_string(), app("s", vec![v("x")]))],
            context: Context::hole(),
            terms: vec![app("f", vec![v("x")])],
        }),
    ));

    // 09: two-step loop closed by a context
    entries.push((
        "09_loop_two_steps",
        Trs::new(vec![
            rule(app("a", vec![]), app("b", vec![])),
            rule(app("b", vec![]), app("g", vec![app("a", vec![])])),
        ]),
        ProofTree::Disproof(TrsDisproof::Loop {
            subst: vec![],
            context: Context::new(app("g", vec![Term::fun(
                certifier_core::term::hole_symbol(),
                vec![],
            )]))
            .unwrap(),
            terms: vec![app("a", vec![]), app("b", vec![])],
        }),
    ));

    // 10: loop with both a context and a substitution
    entries.push((
        "10_loop_context_subst",
        Trs::new(vec![rule(
            app("f", vec![v("x")]),
            app("g", vec![app("f", vec![app("s", vec![v("x")])])]),
        )]),
        ProofTree::Disproof(TrsDisproof::Loop {
            subst: vec![("x".to_string(), app("s", vec![v("x")]))],
            context: Context::new(app("g", vec![Term::fun(
                certifier_core::term::hole_symbol(),
                vec![],
            )]))
            .unwrap(),
            terms: vec![app("f", vec![v("x")])],
        }),
    ));

    // 11: not well-formed, variable left-hand side
    entries.push((
        "11_nwf_variable_lhs",
        Trs::new(vec![rule(v("x"), app("a", vec![]))]),
        ProofTree::Disproof(TrsDisproof::NotWellFormed),
    ));

    // 12: not well-formed, right-hand side variable dropped
    entries.push((
        "12_nwf_dropped_var",
        Trs::new(vec![rule(app("f", vec![v("x")]), v("y"))]),
        ProofTree::Disproof(TrsDisproof::NotWellFormed),
    ));

    // 13: doubling
    let dbl_rules = vec![
        rule(app("dbl", vec![app("0", vec![])]), app("0", vec![])),
        rule(
            app("dbl", vec![app("s", vec![v("x")])]),
            app("s", vec![app("s", vec![app("dbl", vec![v("x")])])]),
        ),
    ];
    let dbl_pair = rule(m("dbl", vec![app("s", vec![v("x")])]), m("dbl", vec![v("x")]));
    let dbl_proj = vec![entry("dbl", true, 0, &[1]), entry("s", false, 1, &[1]), entry("0", false, 0, &[])];
    entries.push((
        "13_dbl",
        Trs::new(dbl_rules.clone()),
        ProofTree::Proof(TrsProof::DpTrans {
            dps: vec![dbl_pair.clone()],
            rest: Box::new(DpProof::DepGraphProc {
                components: vec![scc(
                    vec![dbl_pair.clone()],
                    red_pair_empty_rest(dbl_proj.clone(), vec![]),
                )],
            }),
        }),
    ));

    // 14: two independent SCCs, no cross edges
    let mut add_dbl = add_rules();
    add_dbl.extend(dbl_rules.clone());
    entries.push((
        "14_add_dbl",
        Trs::new(add_dbl),
        ProofTree::Proof(TrsProof::DpTrans {
            dps: vec![add_pair(), dbl_pair.clone()],
            rest: Box::new(DpProof::DepGraphProc {
                components: vec![
                    scc(vec![add_pair()], red_pair_empty_rest(add_sharp_proj(), vec![])),
                    scc(vec![dbl_pair], red_pair_empty_rest(dbl_proj, vec![])),
                ],
            }),
        }),
    ));

    // 15: minus/quot with a three-component decomposition and nonempty
    // usable rules for the quot# component
    let minus_rules = vec![
        rule(app("minus", vec![v("x"), app("0", vec![])]), v("x")),
        rule(
            app("minus", vec![app("s", vec![v("x")]), app("s", vec![v("y")])]),
            app("minus", vec![v("x"), v("y")]),
        ),
    ];
    let mut quot_rules = minus_rules.clone();
    quot_rules.push(rule(
        app("quot", vec![app("0", vec![]), app("s", vec![v("y")])]),
        app("0", vec![]),
    ));
    quot_rules.push(rule(
        app("quot", vec![app("s", vec![v("x")]), app("s", vec![v("y")])]),
        app("s", vec![app("quot", vec![
            app("minus", vec![v("x"), v("y")]),
            app("s", vec![v("y")]),
        ])]),
    ));
    let p_m = rule(
        m("minus", vec![app("s", vec![v("x")]), app("s", vec![v("y")])]),
        m("minus", vec![v("x"), v("y")]),
    );
    let p_qq = rule(
        m("quot", vec![app("s", vec![v("x")]), app("s", vec![v("y")])]),
        m("quot", vec![app("minus", vec![v("x"), v("y")]), app("s", vec![v("y")])]),
    );
    let p_qm = rule(
        m("quot", vec![app("s", vec![v("x")]), app("s", vec![v("y")])]),
        m("minus", vec![v("x"), v("y")]),
    );
    let quot_proj = vec![
        entry("quot", true, 0, &[1, 0]),
        entry("minus", false, 0, &[1, 0]),
        entry("s", false, 1, &[1]),
        entry("0", false, 0, &[]),
    ];
    let minus_proj = vec![
        entry("minus", true, 0, &[1, 0]),
        entry("s", false, 1, &[1]),
        entry("0", false, 0, &[]),
    ];
    entries.push((
        "15_minus_quot",
        Trs::new(quot_rules),
        ProofTree::Proof(TrsProof::DpTrans {
            dps: vec![p_m.clone(), p_qq.clone(), p_qm.clone()],
            rest: Box::new(DpProof::DepGraphProc {
                components: vec![
                    scc(vec![p_qq], red_pair_empty_rest(quot_proj, minus_rules.clone())),
                    trivial(vec![p_qm]),
                    scc(vec![p_m], red_pair_empty_rest(minus_proj, vec![])),
                ],
            }),
        }),
    ));

    // 16: argument-swapping two-step loop
    entries.push((
        "16_swap_loop",
        Trs::new(vec![rule(app("h", vec![v("x"), v("y")]), app("h", vec![v("y"), v("x")]))]),
        ProofTree::Disproof(TrsDisproof::Loop {
            subst: vec![],
            context: Context::hole(),
            terms: vec![app("h", vec![v("x"), v("y")]), app("h", vec![v("y"), v("x")])],
        }),
    ));

    // 17: loop below the root of the blown-up term
    entries.push((
        "17_loop_under_context",
        Trs::new(vec![rule(app("f", vec![v("x")]), app("s", vec![app("f", vec![v("x")])]))]),
        ProofTree::Disproof(TrsDisproof::Loop {
            subst: vec![],
            context: Context::new(app("s", vec![Term::fun(
                certifier_core::term::hole_symbol(),
                vec![],
            )]))
            .unwrap(),
            terms: vec![app("f", vec![v("x")])],
        }),
    ));

    // 18: two nested rule removals
    let fg_rules = vec![
        rule(app("f", vec![app("s", vec![v("x")])]), app("s", vec![app("f", vec![v("x")])])),
        rule(app("g", vec![v("x")]), app("f", vec![v("x")])),
    ];
    entries.push((
        "18_two_removals",
        Trs::new(fg_rules.clone()),
        ProofTree::Proof(TrsProof::RuleRemoval {
            interp: vec![
                entry("f", false, 0, &[2]),
                entry("g", false, 1, &[3]),
                entry("s", false, 1, &[1]),
            ],
            remaining: vec![fg_rules[0].clone()],
            rest: Box::new(TrsProof::RuleRemoval {
                interp: vec![entry("f", false, 0, &[2]), entry("s", false, 1, &[1])],
                remaining: vec![],
                rest: Box::new(TrsProof::RIsEmpty),
            }),
        }),
    ));

    // 19: duplicate rules, no dependency pairs at all
    entries.push((
        "19_dup_rule_no_pairs",
        Trs::new(vec![
            rule(app("f", vec![v("x")]), v("x")),
            rule(app("f", vec![v("x")]), v("x")),
        ]),
        ProofTree::Proof(TrsProof::DpTrans {
            dps: vec![],
            rest: Box::new(DpProof::PIsEmpty),
        }),
    ));

    // 20: countdown removed by the monotone processor with empty usable rules
    let g_pair = rule(m("g", vec![app("s", vec![v("x")])]), m("g", vec![v("x")]));
    entries.push((
        "20_g_countdown_mono",
        Trs::new(vec![rule(app("g", vec![app("s", vec![v("x")])]), app("g", vec![v("x")]))]),
        ProofTree::Proof(TrsProof::DpTrans {
            dps: vec![g_pair],
            rest: Box::new(DpProof::MonoRedPairUrProc {
                interp: vec![
                    entry("g", true, 0, &[1]),
                    entry("g", false, 0, &[1]),
                    entry("s", false, 1, &[1]),
                ],
                remaining_pairs: vec![],
                remaining_rules: vec![],
                usable: vec![],
                rest: Box::new(DpProof::PIsEmpty),
            }),
        }),
    ));

    // 21: supplied dps are a strict superset of the computed pairs
    let extra_pair = rule(
        m("add", vec![app("s", vec![v("x")]), app("0", vec![])]),
        m("add", vec![v("x"), app("0", vec![])]),
    );
    entries.push((
        "21_add_superset_dps",
        Trs::new(add_rules()),
        ProofTree::Proof(TrsProof::DpTrans {
            dps: vec![add_pair(), extra_pair],
            rest: Box::new(red_pair_empty_rest(add_sharp_proj(), vec![])),
        }),
    ));

    // 22: usable rules listed as a superset (all of R)
    entries.push((
        "22_f_add_usable_superset",
        Trs::new(f_add_rules()),
        ProofTree::Proof(f_add_graph_proof(f_add_rules())),
    ));

    // 23: reduction pair directly on the initial DP problem, no graph
    entries.push((
        "23_add_direct_redpair",
        Trs::new(add_rules()),
        ProofTree::Proof(TrsProof::DpTrans {
            dps: vec![add_pair()],
            rest: Box::new(red_pair_empty_rest(add_sharp_proj(), vec![])),
        }),
    ));

    entries
}

fn main() {
    let out_dir: PathBuf =
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    fs::create_dir_all(&out_dir).expect("create corpus directory");

    let mut manifest = String::new();
    let mut count = 0;
    for (name, trs, proof) in corpus() {
        let problem = problem_doc(trs);
        let problem_text = render(&problem_to_xml(&problem));
        let proof_text = render(&proof_to_xml(&proof));

        let verdict = certify(
            &problem,
            &proof,
            &problem_text,
            &proof_text,
            &CertifyOptions::default(),
        );
        match verdict {
            CertResult::Accepted => {}
            CertResult::Rejected(rejection) => {
                panic!("corpus entry {} does not certify: {}", name, rejection)
            }
        }

        let problem_file = format!("{}.problem.xml", name);
        let proof_file = format!("{}.proof.xml", name);
        fs::write(out_dir.join(&problem_file), &problem_text).expect("write problem");
        fs::write(out_dir.join(&proof_file), &proof_text).expect("write proof");
        manifest.push_str(&format!("{}\t{}\n", problem_file, proof_file));
        count += 1;
    }
    fs::write(out_dir.join("manifest.tsv"), manifest).expect("write manifest");
    println!("wrote {} certified corpus pairs to {}", count, out_dir.display());
}
