//! Commands that must be refused, leaving the session as it was.

mod common;

use hurry::decide::DecideError;
use hurry::engine::EngineError;
use hurry::kernel::typing::KernelError;
use hurry::session::{Session, SessionError};

/// Run `setup`, then check that `bad` fails with an error accepted by
/// `expected` and changes nothing.
fn refused(setup: &[&str], bad: &str, expected: impl Fn(&SessionError) -> bool) -> SessionError {
    let mut s: Session = common::prelude();
    for line in setup {
        s.exec_text(line).unwrap_or_else(|e| panic!("{line}: {e}"));
    }
    let before = common::fingerprint(&s);
    let err = s.exec_text(bad).expect_err("the command must fail");
    assert!(expected(&err), "unexpected error: {err:?}");
    assert_eq!(common::fingerprint(&s), before, "state changed after {bad}");
    err
}

#[test]
fn negative_occurrence_is_rejected() {
    let e = refused(&[], "Inductive bad : Set := mk : (bad -> nat) -> bad.", |e| {
        matches!(e, SessionError::Kernel(KernelError::NegativeOccurrence { .. }))
    });
    assert!(e.to_string().contains("non strictly positive occurrence of bad"));
}

#[test]
fn nested_negative_occurrence_is_rejected() {
    refused(&[], "Inductive bad2 : Prop := mk2 : ((bad2 -> False) -> False) -> bad2.", |e| {
        matches!(e, SessionError::Kernel(KernelError::NegativeOccurrence { .. }))
    });
}

#[test]
fn positive_occurrence_under_arrow_target_is_accepted() {
    let mut s = common::prelude();
    s.exec_text("Inductive tree : Set := leaf : tree | node : (nat -> tree) -> tree.").unwrap();
}

#[test]
fn non_structural_fixpoint_is_rejected() {
    refused(&[], "Fixpoint loop (n : nat) {struct n} : nat := loop (S n).", |e| {
        matches!(e, SessionError::Kernel(KernelError::NonStructuralRecursion(_)))
    });
    refused(&[], "Fixpoint same (n : nat) : nat := match n with 0 => 0 | S p => same n end.", |e| {
        matches!(e, SessionError::Kernel(KernelError::NonStructuralRecursion(_)))
    });
}

#[test]
fn qed_with_open_goals_is_rejected() {
    let setup = ["Lemma open_goal : True /\\ True.", "Proof.", "split."];
    refused(&setup, "Qed.", |e| matches!(e, SessionError::Engine(EngineError::OpenGoalsRemain(2))));
}

#[test]
fn discriminate_needs_a_constructor_clash() {
    let setup = ["Lemma no_clash : forall n : nat, S n = S 0 -> False.", "Proof.", "intros n H."];
    refused(&setup, "discriminate H.", |e| {
        matches!(e, SessionError::Engine(EngineError::Decide(DecideError::NotAConstructorClash)))
    });
}

#[test]
fn omega_rejects_nonlinear_goals() {
    let setup = ["Require Import Omega.", "Lemma nonlinear : forall x y : nat, x * y <= x.", "Proof.", "intros x y."];
    let e = refused(&setup, "omega.", |e| {
        matches!(e, SessionError::Engine(EngineError::Decide(DecideError::NonLinearTerm(_))))
    });
    assert_eq!(e.to_string(), "omega: non-linear term x * y");
}

#[test]
fn omega_rejects_subtraction() {
    let setup = ["Require Import Omega.", "Lemma sub : forall x : nat, x - 1 <= x.", "Proof.", "intros x."];
    refused(&setup, "omega.", |e| {
        matches!(e, SessionError::Engine(EngineError::Decide(DecideError::ContainsSubtraction(_))))
    });
}

#[test]
fn omega_needs_its_package() {
    let setup = ["Lemma early : forall x : nat, x <= x + 1.", "Proof.", "intros x."];
    refused(&setup, "omega.", |e| matches!(e, SessionError::Engine(EngineError::Decide(DecideError::OmegaNotLoaded))));
}

#[test]
fn ring_reports_differing_normal_forms() {
    let setup = ["Lemma off : forall x : nat, x + 1 = x.", "Proof.", "intros x."];
    let e = refused(&setup, "ring.", |e| {
        matches!(e, SessionError::Engine(EngineError::Decide(DecideError::NormalFormsDiffer(..))))
    });
    assert_eq!(e.to_string(), "ring: the normal forms differ: x + 1 <> x");
}

#[test]
fn ring_does_not_reason_about_subtraction() {
    let setup = ["Lemma sub2 : forall x : nat, x - 1 + 1 = x.", "Proof.", "intros x."];
    refused(&setup, "ring.", |e| {
        matches!(e, SessionError::Engine(EngineError::Decide(DecideError::UnsupportedOperator(_))))
    });
}

#[test]
fn intuition_fails_on_peirce() {
    let setup = ["Lemma peirce : forall A B : Prop, ((A -> B) -> A) -> A.", "Proof."];
    refused(&setup, "intuition.", |e| {
        matches!(e, SessionError::Engine(EngineError::Decide(DecideError::SearchExhausted)))
    });
}

#[test]
fn unknown_package_is_rejected() {
    refused(&[], "Require Import NoSuchPkg.", |e| matches!(e, SessionError::UnknownPackage(p) if p == "NoSuchPkg"));
}

#[test]
fn ill_typed_definition_is_rejected() {
    refused(&[], "Definition wrong : nat := True.", |_| true);
}

#[test]
fn redefinition_is_rejected() {
    refused(&["Definition once := 0."], "Definition once := 1.", |e| e.to_string().contains("already exists"));
}
