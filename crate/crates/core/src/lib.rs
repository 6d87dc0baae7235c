//! A small proof assistant for a restricted calculus of inductive
//! constructions, driven by Coq-style vernacular scripts.

// Errors carry the terms they are about; boxing them buys nothing here.
#![allow(clippy::result_large_err)]

pub mod decide;
pub mod engine;
pub mod kernel;
pub mod meta;
pub mod query;
pub mod reduction;
pub mod session;
pub mod surface;
pub mod unify;
