//! Properties that must hold of everything the corpus declares.

mod common;

use std::time::{Duration, Instant};

use hurry::kernel::term::{well_scoped, Term};
use hurry::kernel::typing::{check_proof, conv_leq, convertible, infer_type};
use hurry::kernel::{Decl, GlobalEnv, LocalContext};
use hurry::reduction::{normalize, simpl, whnf_all};
use hurry::session::document::Document;
use hurry::surface::print::{nat_literal, print_term};
use proptest::prelude::*;

const FILES: [&str; 7] = ["transcript.v", "bin.v", "even.v", "omega.v", "quant.v", "exercise5_6.v", "exercise6_32.v"];

fn corpus_docs() -> Vec<Document> {
    FILES.iter().map(|f| common::run_ok(&common::corpus_source(f))).collect()
}

/// Declarations with a type and, for definitions, a body.
fn decls(env: &GlobalEnv) -> Vec<(String, Term, Option<Term>)> {
    env.decls()
        .filter_map(|d| match &**d {
            Decl::Definition { name, ty, body, .. } => Some((name.to_string(), ty.clone(), Some(body.clone()))),
            Decl::Axiom { name, ty } | Decl::Oracle { name, ty, .. } => Some((name.to_string(), ty.clone(), None)),
            Decl::Inductive(_) => None,
        })
        .collect()
}

#[test]
fn declarations_are_closed_and_well_typed() {
    let ctx = LocalContext::default();
    for doc in corpus_docs() {
        let env = doc.session().env();
        for (n, ty, body) in decls(env) {
            assert!(well_scoped(&ty, 0), "{n}: type is ill-scoped");
            let Some(body) = body else { continue };
            assert!(well_scoped(&body, 0), "{n}: body is ill-scoped");
            let a = infer_type(env, &ctx, &body).unwrap_or_else(|e| panic!("{n}: {e}"));
            let b = infer_type(env, &ctx, &body).unwrap();
            assert_eq!(a, b, "{n}: inference is not deterministic");
            assert!(conv_leq(env, &ctx, &a, &ty), "{n}: inferred type differs from the declared one");
        }
    }
}

#[test]
fn reduction_preserves_types() {
    let ctx = LocalContext::default();
    for doc in corpus_docs() {
        let env = doc.session().env();
        for (n, ty, body) in decls(env) {
            let Some(body) = body else { continue };
            for reduct in [whnf_all(env, &ctx, &body), simpl(env, &ctx, &body)] {
                assert!(well_scoped(&reduct, 0));
                let t = infer_type(env, &ctx, &reduct).unwrap_or_else(|e| panic!("{n}: reduct ill-typed: {e}"));
                assert!(convertible(env, &ctx, &t, &ty) || conv_leq(env, &ctx, &t, &ty), "{n}");
            }
        }
    }
}

#[test]
fn normalize_and_simpl_are_idempotent() {
    let ctx = LocalContext::default();
    for doc in corpus_docs() {
        let env = doc.session().env();
        for (n, ty, body) in decls(env) {
            for t in std::iter::once(ty).chain(body) {
                let once = normalize(env, &t);
                assert_eq!(normalize(env, &once), once, "{n}");
                let s = simpl(env, &ctx, &t);
                assert_eq!(simpl(env, &ctx, &s), s, "{n}");
            }
        }
    }
}

#[test]
fn schemes_prove_their_statements() {
    for doc in corpus_docs() {
        let env = doc.session().env();
        for (n, ty, body) in decls(env) {
            if n.ends_with("_ind") {
                check_proof(env, &body.expect("schemes have bodies"), &ty).unwrap();
            }
        }
    }
}

#[test]
fn printed_statements_parse_back() {
    for doc in corpus_docs() {
        let env = doc.session().env();
        for (n, ty, _) in decls(env) {
            if env.is_oracle(&n) {
                continue;
            }
            let shown = print_term(env, &ty);
            let back = common::elaborate_in(&doc, &format!("({shown})"));
            assert_eq!(back, ty, "{n}: {shown}");
        }
    }
}

#[test]
fn library_lemmas_use_no_oracles() {
    let t = Instant::now();
    let doc = common::run_ok("Require Import Arith. Require Import List. Require Import Arith_extra.");
    assert!(t.elapsed() < Duration::from_secs(10));
    let env = doc.session().env();
    for (n, _, body) in decls(env) {
        assert!(!env.is_oracle(&n), "{n}");
        if let Some(b) = body {
            assert!(hurry::kernel::typing::oracle_refs(env, &b).is_empty(), "{n}");
        }
    }
}

#[test]
fn search_is_contained_in_the_head_pattern() {
    let mut s = common::prelude();
    s.exec_text("Require Import Arith.").unwrap();
    for (ident, arity) in [("le", 2), ("True", 0), ("eq", 2), ("and", 2), ("or", 2)] {
        let searched = common::golden::listed(&s.exec_text(&format!("Search {ident}.")).unwrap_or_default());
        let holes = vec!["_"; arity].join(" ");
        let pat = s.exec_text(&format!("SearchPattern ({ident} {holes}).")).unwrap_or_default();
        let patterned = common::golden::listed(&pat);
        for n in &searched {
            assert!(patterned.contains(n), "{ident}: {n} missing from the pattern search");
        }
    }
}

#[test]
fn subgoal_counts_follow_the_script() {
    let doc = common::run_ok(&common::corpus_source("transcript.v"));
    let counts: Vec<&str> = doc
        .entries()
        .iter()
        .skip_while(|e| !e.text.starts_with("Theorem example2"))
        .map(|e| e.output.lines().next().unwrap_or(""))
        .collect();
    assert_eq!(
        counts,
        [
            "1 subgoal",
            "",
            "1 subgoal",
            "2 subgoals",
            "2 subgoals",
            "1 subgoal",
            "1 subgoal",
            "Proof completed.",
            "example2 is defined"
        ]
    );
}

/// Closed arithmetic with the truncating subtraction.
#[derive(Clone, Debug)]
enum Arith {
    Lit(u64),
    Plus(Box<Arith>, Box<Arith>),
    Mult(Box<Arith>, Box<Arith>),
    Minus(Box<Arith>, Box<Arith>),
}

impl Arith {
    fn value(&self) -> u64 {
        match self {
            Arith::Lit(n) => *n,
            Arith::Plus(a, b) => a.value() + b.value(),
            Arith::Mult(a, b) => a.value() * b.value(),
            Arith::Minus(a, b) => a.value().saturating_sub(b.value()),
        }
    }

    /// The largest value of any subterm.
    fn peak(&self) -> u64 {
        match self {
            Arith::Lit(n) => *n,
            Arith::Plus(a, b) | Arith::Mult(a, b) | Arith::Minus(a, b) => self.value().max(a.peak()).max(b.peak()),
        }
    }

    fn term(&self) -> Term {
        let op = |f: &str, a: &Arith, b: &Arith| Term::app(Term::constant(f), vec![a.term(), b.term()]);
        match self {
            Arith::Lit(n) => {
                (0..*n).fold(Term::construct("nat", 1), |t, _| Term::app(Term::construct("nat", 2), vec![t]))
            }
            Arith::Plus(a, b) => op("plus", a, b),
            Arith::Mult(a, b) => op("mult", a, b),
            Arith::Minus(a, b) => op("minus", a, b),
        }
    }
}

fn arith() -> impl Strategy<Value = Arith> {
    (0u64..5)
        .prop_map(Arith::Lit)
        .prop_recursive(3, 12, 2, |a| {
            prop_oneof![
                (a.clone(), a.clone()).prop_map(|(x, y)| Arith::Plus(Box::new(x), Box::new(y))),
                (a.clone(), a.clone()).prop_map(|(x, y)| Arith::Mult(Box::new(x), Box::new(y))),
                (a.clone(), a).prop_map(|(x, y)| Arith::Minus(Box::new(x), Box::new(y))),
            ]
        })
        // Numerals are unary, and reducing a very large one recurses past the
        // test thread's stack.
        .prop_filter("numerals stay small", |a| a.peak() <= MAX_NUMERAL)
}

const MAX_NUMERAL: u64 = 200;

fn prelude_env() -> GlobalEnv {
    common::prelude().env().clone()
}

#[test]
fn subtraction_truncates() {
    let env = prelude_env();
    let t = Arith::Minus(Box::new(Arith::Lit(2)), Box::new(Arith::Lit(3))).term();
    assert_eq!(nat_literal(&normalize(&env, &t)), Some(0));
}

proptest! {
    #[test]
    fn closed_nat_terms_normalize_to_numerals(a in arith()) {
        let env = prelude_env();
        prop_assert_eq!(nat_literal(&normalize(&env, &a.term())), Some(a.value()));
    }

    #[test]
    fn conversion_agrees_with_normal_forms(a in arith(), b in arith()) {
        let env = prelude_env();
        let ctx = LocalContext::default();
        let (ta, tb) = (a.term(), b.term());
        prop_assert_eq!(convertible(&env, &ctx, &ta, &tb), normalize(&env, &ta) == normalize(&env, &tb));
    }

    /// A failing tactic leaves the displayed goals exactly as they were.
    #[test]
    fn failing_tactics_change_nothing(script in prop::collection::vec(0usize..TACTICS.len(), 1..6)) {
        let mut s = common::prelude();
        s.exec_text("Lemma t : forall a b : Prop, a /\\ b -> b \\/ (a -> False) -> b /\\ a.").unwrap();
        for k in script {
            let before = common::fingerprint(&s);
            if s.exec_text(TACTICS[k]).is_err() {
                prop_assert_eq!(common::fingerprint(&s), before, "{}", TACTICS[k]);
            }
        }
    }
}

const TACTICS: [&str; 10] = [
    "intros a b H H0.",
    "split.",
    "left.",
    "exact I.",
    "elim H.",
    "destruct H0 as [H1 | H2].",
    "assumption.",
    "apply H2.",
    "discriminate.",
    "intuition.",
];
