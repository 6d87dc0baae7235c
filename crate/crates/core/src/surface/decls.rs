//! Elaboration of declarations: definitions, fixpoints, inductive types
//! and theorem statements.

use std::sync::Arc;

use crate::kernel::guard::check_guard;
use crate::kernel::term::{build_lambda, build_prod, name, FixData, Name, Term};
use crate::kernel::{Decl, GlobalEnv, InductiveDecl, InductiveInfo, LocalContext};
use crate::meta::MetaCtx;
use crate::reduction::reduce_to_inductive;

use super::ast::{Binder, Expr, ExprKind};
use super::elab::{EResult, ElabError, Elaborator};
use super::lexer::Pos;
use super::notation::where_clause_symbol;

/// Elaborate a closed term, returning it and its elaborated type.
pub fn elab_closed(env: &GlobalEnv, e: &Expr) -> EResult<(Term, Term)> {
    let mut metas = MetaCtx::new();
    let mut el = Elaborator::new(env, &mut metas);
    let (t, ty) = el.elab(&LocalContext::new(), e, None)?;
    let t = el.finish(&t)?;
    Ok((t, el.metas.instantiate(&ty)))
}

/// Elaborate a closed proposition or type.
pub fn elab_statement(env: &GlobalEnv, e: &Expr) -> EResult<Term> {
    let mut metas = MetaCtx::new();
    let mut el = Elaborator::new(env, &mut metas);
    let (t, _) = el.elab_type(&LocalContext::new(), e)?;
    el.finish(&t)
}

/// `Definition name binders [: ty] := body`: the body and, when given,
/// the declared type (both closed).
pub fn elab_definition(
    env: &GlobalEnv,
    binders: &[Binder],
    ty: Option<&Expr>,
    body: &Expr,
    pos: Pos,
) -> EResult<(Term, Option<Term>)> {
    let mut metas = MetaCtx::new();
    let mut el = Elaborator::new(env, &mut metas);
    let mut ctx = LocalContext::new();
    let bs = el.push_binders(&mut ctx, binders, pos)?;
    let declared = match ty {
        Some(e) => Some(el.elab_type(&ctx, e)?.0),
        None => None,
    };
    let (tb, _) = el.elab(&ctx, body, declared.as_ref())?;
    let term = el.finish(&build_lambda(&bs, tb))?;
    let full = match declared {
        Some(d) => Some(el.finish(&build_prod(&bs, d))?),
        None => None,
    };
    Ok((term, full))
}

/// Check a `where "n ^ m" := (f n m)` clause against the fixpoint `f`.
pub fn check_where_clause(fname: &str, notation: &str, expansion: &Expr) -> EResult<&'static str> {
    let bad = || {
        ElabError::Other(
            expansion.pos,
            format!("only the built-in \"_ ^ _\" notation can be bound to {fname} by a where clause"),
        )
    };
    let sym = where_clause_symbol(notation).ok_or_else(bad)?;
    let vars: Vec<&str> = notation.split_whitespace().collect();
    match &expansion.kind {
        ExprKind::App(h, args)
            if matches!(&h.kind, ExprKind::Var(f) if f == fname)
                && args.len() == 2
                && matches!(&args[0].kind, ExprKind::Var(a) if a == vars[0])
                && matches!(&args[1].kind, ExprKind::Var(b) if b == vars[2]) =>
        {
            Ok(sym)
        }
        _ => Err(bad()),
    }
}

/// `Fixpoint name binders {struct x} : ty := body`. Returns the closed
/// fixpoint term and its type.
#[allow(clippy::too_many_arguments)]
pub fn elab_fixpoint(
    env: &GlobalEnv,
    fname: &str,
    binders: &[Binder],
    struct_arg: Option<&str>,
    ty: &Expr,
    body: &Expr,
    notation: Option<&(String, Expr)>,
    pos: Pos,
) -> EResult<(Term, Term)> {
    if binders.is_empty() {
        return Err(ElabError::Other(pos, format!("{fname} needs at least one argument")));
    }
    let mut local_env;
    let env = match notation {
        Some((s, e)) => {
            let sym = check_where_clause(fname, s, e)?;
            local_env = env.clone();
            local_env.bind_notation(sym, fname);
            &local_env
        }
        None => env,
    };
    let mut metas = MetaCtx::new();
    let mut el = Elaborator::new(env, &mut metas);
    let empty = LocalContext::new();
    let full = Expr::new(ExprKind::Forall(binders.to_vec(), Box::new(ty.clone())), ty.pos);
    let (fty, _) = el.elab_type(&empty, &full)?;
    let (tele, codomain) = fty.decompose_prod();
    let names: Vec<String> = binders.iter().flat_map(|b| b.names.clone()).collect();
    let tele = tele[..names.len()].to_vec();
    let codomain = crate::kernel::term::build_prod(&fty.decompose_prod().0[names.len()..], codomain);
    let mut ctx = LocalContext::new();
    ctx.push(name(fname), fty.clone());
    for (n, t) in &tele {
        ctx.push(n.clone(), t.clone());
    }
    let (tb, _) = el.elab(&ctx, body, Some(&codomain))?;
    let fty = el.finish(&fty)?;
    let fbody = el.finish(&build_lambda(&tele, tb))?;
    let fname_n: Name = name(fname);

    let index = match struct_arg {
        Some(x) => names
            .iter()
            .position(|n| n == x)
            .ok_or_else(|| ElabError::Other(pos, format!("{x} is not an argument of {fname}")))?,
        None => {
            let (tele, _) = fty.decompose_prod();
            let mut c = LocalContext::new();
            let mut found = None;
            for (k, (n, t)) in tele.iter().take(names.len()).enumerate() {
                if reduce_to_inductive(env, &c, t).is_some() {
                    let fx = FixData { name: fname_n.clone(), struct_index: k, ty: fty.clone(), body: fbody.clone() };
                    if check_guard(env, &fx) {
                        found = Some(k);
                        break;
                    }
                }
                c.push(n.clone(), t.clone());
            }
            found.unwrap_or(0)
        }
    };
    Ok((Term::mk_fix(fname_n, index, fty.clone(), fbody), fty))
}

/// `Inductive name params : arity := ctors`.
pub fn elab_inductive(
    env: &GlobalEnv,
    iname: &str,
    params: &[Binder],
    arity: &Expr,
    ctors: &[(String, Vec<Binder>, Option<Expr>)],
    pos: Pos,
) -> EResult<InductiveDecl> {
    let mut metas = MetaCtx::new();
    let mut el = Elaborator::new(env, &mut metas);
    let mut ctx = LocalContext::new();
    let ps = el.push_binders(&mut ctx, params, pos)?;
    let (ar, _) = el.elab_type(&ctx, arity)?;
    let full = el.finish(&build_prod(&ps, ar))?;
    let (tele, ar) = full.decompose_prod();
    let ps: Vec<(Name, Term)> = tele[..ps.len()].to_vec();
    let ar = build_prod(&tele[ps.len()..], ar);
    let (indices, sort) = ar.decompose_prod();
    let sort = match sort {
        Term::Sort(s) => s,
        _ => return Err(ElabError::Other(arity.pos, format!("the arity of {iname} must end in a sort"))),
    };

    let mut tmp = env.clone();
    tmp.push(Decl::Inductive(Arc::new(InductiveInfo {
        name: name(iname),
        params: ps.clone(),
        ty: full.clone(),
        nindices: indices.len(),
        sort,
        ctors: vec![],
        large_elim: true,
    })));
    let mut out = Vec::new();
    for (cname, bs, ty) in ctors {
        let mut metas = MetaCtx::new();
        let mut el = Elaborator::new(&tmp, &mut metas);
        let mut c = LocalContext::new();
        for (n, t) in &ps {
            c.push(n.clone(), t.clone());
        }
        let fields = el.push_binders(&mut c, bs, pos)?;
        let concl = match ty {
            Some(e) => el.elab_type(&c, e)?.0,
            None => {
                if !indices.is_empty() {
                    return Err(ElabError::Other(pos, format!("constructor {cname} needs a type")));
                }
                let n = ps.len() + fields.len();
                Term::app(Term::ind(iname), (0..ps.len()).map(|k| Term::Rel(n - 1 - k)).collect())
            }
        };
        let cty = el.finish(&build_prod(&fields, concl))?;
        out.push((name(cname), cty));
    }
    Ok(InductiveDecl { name: name(iname), params: ps, arity: ar, ctors: out })
}
