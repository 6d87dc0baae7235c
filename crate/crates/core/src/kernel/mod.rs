//! The trusted kernel: terms, environments, typing, inductive admission and
//! the guard condition.

pub mod context;
pub mod env;
pub mod guard;
pub mod inductive;
pub mod term;
pub mod typing;

pub use context::{LocalContext, LocalDecl};
pub use env::{ConstructorInfo, Decl, GlobalEnv, GlobalRef, InductiveInfo, OracleKind};
pub use inductive::{check_inductive, derive_induction, InductiveDecl};
pub use term::{name, Name, Sort, Term};
pub use typing::{add_definition, check_proof, conv_leq, convertible, infer_type, KernelError, ProofReport};

#[cfg(test)]
mod tests;
