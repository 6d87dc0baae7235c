use crate::session::{Options, Session};

fn session(lines: &[&str]) -> Session {
    let mut s = Session::new(&Options::with_prelude()).unwrap();
    for l in lines {
        s.exec_text(l).unwrap_or_else(|e| panic!("{l}: {e}"));
    }
    s
}

fn goals(s: &Session) -> Vec<String> {
    s.proof().map(|p| p.goal_views().into_iter().map(|g| g.conclusion).collect()).unwrap_or_default()
}

fn hyps(s: &Session) -> Vec<String> {
    let g = &s.proof().unwrap().goal_views()[0];
    g.hyps.iter().map(|(n, _, t)| format!("{n} : {t}")).collect()
}

#[test]
fn intros_names_and_fresh_names() {
    let s = session(&["Lemma l : forall a b : Prop, a -> b -> a.", "intros."]);
    assert_eq!(hyps(&s), ["a : Prop", "b : Prop", "H : a", "H0 : b"]);
    assert_eq!(goals(&s), ["a"]);
}

#[test]
fn split_orders_goals_left_to_right() {
    let s = session(&["Lemma l : True /\\ (False -> False).", "split."]);
    assert_eq!(goals(&s), ["True", "False -> False"]);
}

#[test]
fn apply_leaves_premises_as_goals() {
    let s = session(&["Lemma l : forall P Q R : Prop, (P -> Q -> R) -> R.", "intros P Q R H.", "apply H."]);
    assert_eq!(goals(&s), ["P", "Q"]);
}

#[test]
fn apply_with_supplies_a_hidden_argument() {
    let s = session(&[
        "Require Import Arith.",
        "Lemma l : forall a b c : nat, a <= b -> b <= c -> a <= c.",
        "intros a b c H1 H2.",
        "apply le_trans with b.",
    ]);
    assert_eq!(goals(&s), ["a <= b", "b <= c"]);
}

#[test]
fn exists_introduces_first() {
    let s = session(&["Lemma l : True -> exists n : nat, n = 1.", "exists 1."]);
    assert_eq!(goals(&s), ["1 = 1"]);
}

#[test]
fn elim_on_a_conjunction_gives_a_curried_goal() {
    let s = session(&["Lemma l : forall a b : Prop, a /\\ b -> b.", "intros a b H.", "elim H."]);
    assert_eq!(goals(&s), ["a -> b -> b"]);
}

#[test]
fn induction_on_nat() {
    let s = session(&["Lemma l : forall n : nat, n + 0 = n.", "intros n.", "elim n."]);
    assert_eq!(goals(&s), ["0 + 0 = 0", "forall n0 : nat, n0 + 0 = n0 -> S n0 + 0 = S n0"]);
}

#[test]
fn rewrite_puts_side_conditions_last() {
    let s = session(&[
        "Require Import Arith.",
        "Lemma cond : forall n : nat, 1 <= n -> n = n + 0.",
        "intros; apply plus_n_O.",
        "Qed.",
        "Lemma l : forall n : nat, n = 2.",
        "intros n.",
        "rewrite cond.",
    ]);
    assert_eq!(goals(&s), ["n + 0 = 2", "1 <= n"]);
}

#[test]
fn assert_adds_a_named_hypothesis_after_its_proof() {
    let s = session(&["Lemma l : True.", "assert (H : 1 = 1)."]);
    assert_eq!(goals(&s), ["1 = 1", "True"]);
    let s = session(&["Lemma l : True.", "assert (H : 1 = 1).", "reflexivity."]);
    assert_eq!(hyps(&s), ["H : 1 = 1"]);
}

#[test]
fn simpl_reduces_closed_arithmetic() {
    let s = session(&["Lemma l : forall n : nat, 2 + n = S (S n).", "intros n.", "simpl."]);
    assert_eq!(goals(&s), ["S (S n) = S (S n)"]);
}

#[test]
fn destruct_with_an_or_pattern() {
    let s = session(&["Lemma l : forall a b : Prop, a \\/ b -> b \\/ a.", "intros a b H.", "destruct H as [H1 | H2]."]);
    assert_eq!(goals(&s), ["b \\/ a", "b \\/ a"]);
    assert_eq!(hyps(&s).last().unwrap(), "H1 : a");
}

#[test]
fn injection_and_discriminate() {
    let s = session(&["Lemma l : forall n m : nat, S n = S m -> n = m.", "intros n m H.", "injection H."]);
    assert_eq!(goals(&s), ["n = m -> n = m"]);
    let s = session(&["Lemma l : forall n : nat, S n = 0 -> False.", "intros n H.", "discriminate H."]);
    assert!(goals(&s).is_empty());
}

#[test]
fn qed_needs_a_complete_proof_and_seals_it() {
    let mut s = session(&["Lemma l : True.", "exact I."]);
    assert_eq!(s.exec_text("Qed.").unwrap(), "l is defined");
    assert!(s.proof().is_none());
    assert!(s.env().contains("l"));
}

#[test]
fn failing_tactic_keeps_the_goals() {
    let mut s = session(&["Lemma l : forall a b : Prop, a -> b.", "intros a b H."]);
    assert!(s.exec_text("exact H.").is_err());
    assert!(s.exec_text("apply H.").is_err());
    assert_eq!(goals(&s), ["b"]);
}

#[test]
fn seq_applies_to_every_generated_goal() {
    let s = session(&["Lemma l : True /\\ True.", "split; exact I."]);
    assert!(goals(&s).is_empty());
}

#[test]
fn auto_uses_hypotheses_and_constructors() {
    let s = session(&["Lemma l : forall a : Prop, a -> a /\\ True.", "intros.", "auto."]);
    assert!(goals(&s).is_empty());
    let s = session(&["Lemma l : forall a b : Prop, a -> b.", "intros.", "auto."]);
    assert_eq!(goals(&s), ["b"]);
}
