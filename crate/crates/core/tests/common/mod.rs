#![allow(dead_code)]

pub mod gen;
pub mod golden;
pub mod kripke;

use std::path::PathBuf;

use hurry::kernel::Decl;
use hurry::session::document::{Document, Located};
use hurry::session::{Options, Session};

pub fn prelude() -> Session {
    Session::new(&Options::with_prelude()).expect("the prelude loads")
}

pub fn corpus_path(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/corpus").join(file)
}

pub fn corpus_source(file: &str) -> String {
    std::fs::read_to_string(corpus_path(file)).expect("corpus file exists")
}

/// Run a whole script from the prelude, returning the document reached.
pub fn run(src: &str) -> (Document, Result<Vec<String>, Located>) {
    let mut doc = Document::new(prelude());
    let r = doc.exec(src);
    (doc, r)
}

/// Run a script that must succeed and leave no proof open.
pub fn run_ok(src: &str) -> Document {
    let (doc, r) = run(src);
    if let Err(e) = r {
        panic!("script failed: {e}\n{}", doc.transcript());
    }
    assert!(doc.session().proof().is_none(), "proof left open");
    doc
}

/// Collapse runs of whitespace so outputs compare modulo layout.
pub fn squash(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Outputs paired with the sentence that produced them.
pub fn outputs(doc: &Document) -> Vec<(String, String)> {
    doc.entries().iter().map(|e| (squash(&e.text), squash(&e.output))).collect()
}

pub fn output_of(doc: &Document, sentence: &str) -> Option<String> {
    let key = squash(sentence);
    outputs(doc).into_iter().find(|(s, _)| *s == key).map(|(_, o)| o)
}

/// Body of a sealed definition.
pub fn body_of<'a>(doc: &'a Document, n: &str) -> &'a hurry::kernel::term::Term {
    match doc.session().env().decl(n).map(|d| &**d) {
        Some(Decl::Definition { body, .. }) => body,
        _ => panic!("{n} has a body"),
    }
}

/// The oracle lemmas a sealed proof depends on.
pub fn oracles_of(doc: &Document, n: &str) -> Vec<String> {
    let env = doc.session().env();
    hurry::kernel::typing::oracle_refs(env, body_of(doc, n)).iter().map(|x| x.to_string()).collect()
}

pub fn oracle_evidence(doc: &Document) -> Vec<(String, String)> {
    doc.session()
        .env()
        .decls()
        .filter_map(|d| match &**d {
            Decl::Oracle { kind, evidence, .. } => Some((format!("{kind}"), evidence.clone())),
            _ => None,
        })
        .collect()
}

/// Check one statement with a single tactic from a fresh session, the
/// lemma named `t`. `Ok` when the proof seals.
pub fn prove_with(base: &Session, statement: &str, tactic: &str) -> Result<Session, String> {
    let mut s = base.clone();
    for sentence in [format!("Lemma t : {statement}."), "Proof.".into(), format!("{tactic}."), "Qed.".into()] {
        s.exec_text(&sentence).map_err(|e| e.message())?;
    }
    Ok(s)
}

/// Kinds of the oracle lemmas a sealed proof depends on.
pub fn oracle_kinds_of(doc: &Document, n: &str) -> Vec<String> {
    let env = doc.session().env();
    oracles_of(doc, n)
        .iter()
        .map(|o| match env.decl(o).map(|d| &**d) {
            Some(Decl::Oracle { kind, .. }) => kind.to_string(),
            _ => panic!("{o} is not an oracle"),
        })
        .collect()
}

/// Run a corpus file; every listed proof must seal with oracles of the
/// allowed kinds only, and the final environment must recheck.
pub fn check_proof_file(file: &str, proofs: &[(&str, &[&str])]) -> Result<(), String> {
    let (doc, r) = run(&corpus_source(file));
    r.map_err(|e| format!("{file}: {e}"))?;
    if doc.session().proof().is_some() {
        return Err(format!("{file}: proof left open"));
    }
    for (n, allowed) in proofs {
        let env = doc.session().env();
        if !matches!(env.decl(n).map(|d| &**d), Some(Decl::Definition { .. })) {
            return Err(format!("{n} is not defined"));
        }
        for k in oracle_kinds_of(&doc, n) {
            if !allowed.contains(&k.as_str()) {
                return Err(format!("{n} lists a {k} oracle"));
            }
        }
        if allowed.is_empty() != oracles_of(&doc, n).is_empty() {
            return Err(format!("{n}: oracle list {:?}", oracles_of(&doc, n)));
        }
    }
    hurry::kernel::typing::recheck(doc.session().env()).map_err(|e| format!("{file}: recheck: {e}"))
}

/// A statement elaborated as a definition body, for alpha-comparison.
pub fn elaborate_in(doc: &Document, stmt: &str) -> hurry::kernel::term::Term {
    let mut s = doc.session().clone();
    s.exec_text(&format!("Definition stmt_under_test := {stmt}.")).expect("statement elaborates");
    s.env().const_body("stmt_under_test").expect("defined").clone()
}

/// Declared names and open goals, enough to tell whether a command
/// changed anything.
pub fn fingerprint(s: &Session) -> (Vec<String>, Option<Vec<hurry::engine::GoalView>>) {
    (s.env().decls().map(|d| d.name().to_string()).collect(), s.proof().map(|p| p.goal_views()))
}
