//! Automation: constructor reasoning on equalities, inversion, a
//! propositional prover, hint-based search, and the arithmetic procedures
//! `ring` and `omega`.

pub mod auto;
pub mod equality;
pub mod intuition;
pub mod inversion;
pub mod linear;
pub mod omega;
pub mod ring;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecideError {
    #[error("discriminate: the two sides are not built from distinct constructors")]
    NotAConstructorClash,
    #[error("injection: the two sides are not built from the same constructor")]
    NotSameConstructor,
    #[error("{0} is not an equality")]
    NotAnEquality(String),
    #[error("{0} is not an inductive hypothesis")]
    NotAnInductiveHypothesis(String),
    #[error("inversion cannot handle the index {0}")]
    UnsupportedIndexShape(String),
    #[error("intuition: {0} is not propositional")]
    NotPropositional(String),
    #[error("intuition: no proof found")]
    SearchExhausted,
    #[error("ring: unsupported operator {0}")]
    UnsupportedOperator(String),
    #[error("ring: the normal forms differ: {0} <> {1}")]
    NormalFormsDiffer(String, String),
    #[error("ring: the goal is not an equality over nat")]
    NotARingGoal,
    #[error("ring: evaluation check failed on {0}")]
    SelfCheckFailed(String),
    #[error("omega: non-linear term {0}")]
    NonLinearTerm(String),
    #[error("omega: subtraction is not supported ({0})")]
    ContainsSubtraction(String),
    #[error("omega: the goal does not hold; counterexample: {0}")]
    NotProvable(String),
    #[error("omega: the goal is not an arithmetic statement")]
    NotArithmetic,
    #[error("omega: gave up ({0})")]
    GaveUp(String),
    #[error("omega is not available; Require Import Omega first")]
    OmegaNotLoaded,
}
