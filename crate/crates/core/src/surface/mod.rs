//! Concrete syntax: lexing, parsing, elaboration to kernel terms and
//! printing back.

pub mod ast;
pub mod decls;
pub mod elab;
pub mod lexer;
pub mod matching;
pub mod notation;
pub mod parser;
pub mod print;
