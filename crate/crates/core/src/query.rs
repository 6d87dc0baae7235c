//! `Search`, `SearchPattern` and `SearchRewrite`. Only conclusions are
//! inspected; holes in patterns match any subterm.

use thiserror::Error;

use crate::kernel::term::{Name, Term};
use crate::kernel::{Decl, GlobalEnv, LocalContext};
use crate::meta::MetaCtx;
use crate::surface::ast::Expr;
use crate::surface::elab::{ElabError, Elaborator};
use crate::surface::print::print_term;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QueryError {
    #[error("the reference {0} was not found in the current environment")]
    UnknownIdentifier(String),
    #[error("{0}")]
    Elab(#[from] ElabError),
}

/// Lemma name and statement, in declaration order.
pub type QueryResult = Vec<(Name, Term)>;

/// Everything a search may list: theorems, definitions, axioms and
/// constructors. Oracle lemmas are internal and skipped.
fn candidates(env: &GlobalEnv) -> QueryResult {
    let mut out = Vec::new();
    for d in env.decls() {
        match &**d {
            Decl::Definition { name, ty, .. } | Decl::Axiom { name, ty } => out.push((name.clone(), ty.clone())),
            Decl::Inductive(info) => {
                for c in &info.ctors {
                    out.push((c.name.clone(), c.ty.clone()));
                }
            }
            Decl::Oracle { .. } => {}
        }
    }
    out
}

fn conclusion(ty: &Term) -> Term {
    ty.decompose_prod().1
}

fn global_head(env: &GlobalEnv, t: &Term) -> Option<Name> {
    env.global_name(t.head())
}

pub fn search(env: &GlobalEnv, ident: &str) -> Result<QueryResult, QueryError> {
    if env.lookup(ident).is_none() {
        return Err(QueryError::UnknownIdentifier(ident.to_string()));
    }
    Ok(candidates(env)
        .into_iter()
        .filter(|(_, ty)| global_head(env, &conclusion(ty)).is_some_and(|h| &*h == ident))
        .collect())
}

/// Elaborate a pattern; its holes stay as unsolved metas.
fn elab_pattern(env: &GlobalEnv, pat: &Expr) -> Result<Term, QueryError> {
    let mut metas = MetaCtx::new();
    let mut el = Elaborator::new(env, &mut metas);
    let (t, _) = el.elab(&LocalContext::new(), pat, None)?;
    Ok(metas.instantiate(&t))
}

/// First-order matching; each hole matches independently.
pub fn matches(pat: &Term, t: &Term) -> bool {
    match (pat, t) {
        (Term::Meta(..), _) => true,
        (Term::App(ph, pa), Term::App(th, ta)) => {
            pa.len() == ta.len() && matches(ph, th) && pa.iter().zip(ta.iter()).all(|(p, a)| matches(p, a))
        }
        (Term::Prod(_, pa, pb), Term::Prod(_, ta, tb)) | (Term::Lambda(_, pa, pb), Term::Lambda(_, ta, tb)) => {
            matches(pa, ta) && matches(pb, tb)
        }
        _ => pat == t,
    }
}

pub fn search_pattern(env: &GlobalEnv, pat: &Expr) -> Result<QueryResult, QueryError> {
    let p = elab_pattern(env, pat)?;
    Ok(candidates(env).into_iter().filter(|(_, ty)| matches(&p, &conclusion(ty))).collect())
}

pub fn search_rewrite(env: &GlobalEnv, pat: &Expr) -> Result<QueryResult, QueryError> {
    let p = elab_pattern(env, pat)?;
    Ok(candidates(env)
        .into_iter()
        .filter(|(_, ty)| match conclusion(ty).decompose_app() {
            (Term::Ind(n), [_, l, r]) if &**n == "eq" => matches(&p, l) || matches(&p, r),
            _ => false,
        })
        .collect())
}

/// One `name : statement` line per result.
pub fn format_results(env: &GlobalEnv, r: &QueryResult) -> String {
    r.iter().map(|(n, ty)| format!("{n} : {}", print_term(env, ty))).collect::<Vec<_>>().join("\n")
}
