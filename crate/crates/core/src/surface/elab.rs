//! Elaboration of surface expressions into kernel terms: numerals,
//! notations, implicit arguments and binder types solved by unification.

use thiserror::Error;

use crate::kernel::term::{build_lambda, name, subst, MetaId, Name, Sort, Term, MAX_LEVEL};
use crate::kernel::{GlobalEnv, KernelError, LocalContext};
use crate::meta::MetaCtx;
use crate::unify::Unifier;

use super::ast::{Binder, Expr, ExprKind, SortName};
use super::lexer::Pos;
use super::notation::{implicit_count, infix_target};
use super::print::print_in;

/// Numerals above this are refused rather than expanded to a huge spine.
pub const MAX_NUMERAL: u64 = 5000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ElabError {
    #[error("{0}: the reference {1} was not found in the current environment")]
    Unknown(Pos, String),
    #[error("{pos}: the term \"{term}\" has type \"{actual}\" while it is expected to have type \"{expected}\"")]
    Mismatch { pos: Pos, term: String, actual: String, expected: String },
    #[error("{pos}: the term \"{term}\" of type \"{ty}\" cannot be applied to more arguments")]
    NotAFunction { pos: Pos, term: String, ty: String },
    #[error("{pos}: cannot infer the type of {name}")]
    CannotInferBinder { pos: Pos, name: String },
    #[error("{pos}: cannot infer {what}")]
    UnsolvedHole { pos: Pos, what: String },
    #[error("{0}: {1}")]
    Pattern(Pos, String),
    #[error("{0}: the notation {1} has no interpretation")]
    NoInterpretation(Pos, String),
    #[error("{0}: the numeral {1} is too large (limit {MAX_NUMERAL})")]
    NumeralTooLarge(Pos, u64),
    #[error("{0}: {1}")]
    Kernel(Pos, KernelError),
    #[error("{0}: {1}")]
    Other(Pos, String),
}

impl ElabError {
    pub fn pos(&self) -> Pos {
        match self {
            ElabError::Unknown(p, _)
            | ElabError::Pattern(p, _)
            | ElabError::NoInterpretation(p, _)
            | ElabError::NumeralTooLarge(p, _)
            | ElabError::Kernel(p, _)
            | ElabError::Other(p, _) => *p,
            ElabError::Mismatch { pos, .. }
            | ElabError::NotAFunction { pos, .. }
            | ElabError::CannotInferBinder { pos, .. }
            | ElabError::UnsolvedHole { pos, .. } => *pos,
        }
    }
}

pub type EResult<T> = Result<T, ElabError>;

#[derive(Clone, Debug)]
pub enum HoleKind {
    Implicit(String),
    Binder(String),
    Wildcard,
    ReturnType,
}

/// An argument that is either still surface syntax or already elaborated.
pub enum Arg<'e> {
    Src(&'e Expr),
    Done(Term),
}

pub struct Elaborator<'a> {
    pub env: &'a GlobalEnv,
    pub metas: &'a mut MetaCtx,
    /// Pattern variables standing for arbitrary terms: (name, term,
    /// context length the term lives in).
    pub(crate) aliases: Vec<(String, Term, usize)>,
    pub(crate) holes: Vec<(MetaId, Pos, HoleKind)>,
}

impl<'a> Elaborator<'a> {
    pub fn new(env: &'a GlobalEnv, metas: &'a mut MetaCtx) -> Elaborator<'a> {
        Elaborator { env, metas, aliases: Vec::new(), holes: Vec::new() }
    }

    pub(crate) fn unifier(&mut self) -> Unifier<'_> {
        Unifier::new(self.env, self.metas)
    }

    pub(crate) fn show(&self, ctx: &LocalContext, t: &Term) -> String {
        print_in(self.env, ctx, &self.metas.instantiate(t))
    }

    pub(crate) fn whnf(&mut self, ctx: &LocalContext, t: &Term) -> Term {
        let t = self.metas.instantiate(t);
        crate::reduction::whnf_all(self.env, ctx, &t)
    }

    pub(crate) fn fresh_type(&mut self, ctx: &LocalContext, pos: Pos, kind: HoleKind) -> Term {
        let (id, m) = self.metas.fresh(ctx, Term::Sort(Sort::Type(MAX_LEVEL)));
        self.holes.push((id, pos, kind));
        m
    }

    pub(crate) fn fresh_term(&mut self, ctx: &LocalContext, ty: Term, pos: Pos, kind: HoleKind) -> Term {
        let (id, m) = self.metas.fresh(ctx, ty);
        self.holes.push((id, pos, kind));
        m
    }

    /// Unify `actual <= expected`, reporting a mismatch on `term`.
    pub(crate) fn coerce(
        &mut self,
        ctx: &LocalContext,
        term: &Term,
        actual: &Term,
        expected: &Term,
        pos: Pos,
    ) -> EResult<()> {
        if self.unifier().unify(ctx, actual, expected, true) {
            Ok(())
        } else {
            Err(ElabError::Mismatch {
                pos,
                term: self.show(ctx, term),
                actual: self.show(ctx, actual),
                expected: self.show(ctx, expected),
            })
        }
    }

    /// Elaborate `e`, returning the term and its type.
    pub fn elab(&mut self, ctx: &LocalContext, e: &Expr, expected: Option<&Term>) -> EResult<(Term, Term)> {
        let (t, ty) = self.elab_inner(ctx, e, expected)?;
        if let Some(exp) = expected {
            self.coerce(ctx, &t, &ty, exp, e.pos)?;
        }
        Ok((t, ty))
    }

    /// Elaborate `e` as a type; returns the term and its sort when known.
    pub fn elab_type(&mut self, ctx: &LocalContext, e: &Expr) -> EResult<(Term, Option<Sort>)> {
        let (t, ty) = self.elab_inner(ctx, e, None)?;
        let w = self.whnf(ctx, &ty);
        match w {
            Term::Sort(s) => Ok((t, Some(s))),
            _ if w.head().is_meta() => Ok((t, None)),
            _ => Err(ElabError::Mismatch {
                pos: e.pos,
                term: self.show(ctx, &t),
                actual: self.show(ctx, &ty),
                expected: "Type".into(),
            }),
        }
    }

    /// Instantiate solved metas and fail on the first unsolved hole.
    pub fn finish(&mut self, t: &Term) -> EResult<Term> {
        let t = self.metas.instantiate(t);
        let unsolved = self.metas.unsolved_in(&t);
        if unsolved.is_empty() {
            return Ok(t);
        }
        for (id, pos, kind) in &self.holes {
            if unsolved.contains(id) {
                return Err(match kind {
                    HoleKind::Binder(n) => ElabError::CannotInferBinder { pos: *pos, name: n.clone() },
                    HoleKind::Implicit(n) => {
                        ElabError::UnsolvedHole { pos: *pos, what: format!("an implicit argument of {n}") }
                    }
                    HoleKind::Wildcard => ElabError::UnsolvedHole { pos: *pos, what: "the hole _".into() },
                    HoleKind::ReturnType => {
                        ElabError::UnsolvedHole { pos: *pos, what: "the return type of the match".into() }
                    }
                });
            }
        }
        Err(ElabError::UnsolvedHole { pos: Pos::default(), what: format!("?{}", unsolved[0]) })
    }

    fn lookup_local(&self, ctx: &LocalContext, x: &str) -> Option<Term> {
        let var = ctx.index_of(x);
        let alias = self.aliases.iter().rev().find(|(n, _, _)| n == x);
        match (var, alias) {
            (Some(i), Some((_, t, c))) => {
                let level = ctx.len() - 1 - i;
                if level >= *c {
                    Some(Term::Rel(i))
                } else {
                    Some(crate::kernel::term::lift(t, (ctx.len() - c) as isize, 0))
                }
            }
            (Some(i), None) => Some(Term::Rel(i)),
            (None, Some((_, t, c))) => Some(crate::kernel::term::lift(t, (ctx.len() - c) as isize, 0)),
            (None, None) => None,
        }
    }

    /// A global applied to fresh metas for its implicit arguments.
    pub(crate) fn global(&mut self, ctx: &LocalContext, x: &str, pos: Pos, implicits: bool) -> EResult<(Term, Term)> {
        let t = self.env.global_term(x).ok_or_else(|| ElabError::Unknown(pos, x.to_string()))?;
        let mut ty = self.env.global_type(&t).expect("global without type");
        let k = if implicits { implicit_count(x) } else { 0 };
        let mut args = Vec::new();
        for _ in 0..k {
            let w = self.whnf(ctx, &ty);
            let Term::Prod(_, dom, cod) = w else { break };
            let m = self.fresh_term(ctx, (*dom).clone(), pos, HoleKind::Implicit(x.to_string()));
            ty = subst(&cod, &m);
            args.push(m);
        }
        Ok((Term::app(t, args), ty))
    }

    fn var(&mut self, ctx: &LocalContext, x: &str, pos: Pos) -> EResult<(Term, Term)> {
        if let Some(t) = self.lookup_local(ctx, x) {
            let ty = self.unifier().infer(ctx, &t).map_err(|e| ElabError::Kernel(pos, e))?;
            return Ok((t, ty));
        }
        self.global(ctx, x, pos, true)
    }

    /// Apply `f : fty` to arguments, elaborating each against its domain.
    pub(crate) fn apply(
        &mut self,
        ctx: &LocalContext,
        mut f: Term,
        mut fty: Term,
        args: Vec<Arg<'_>>,
        pos: Pos,
    ) -> EResult<(Term, Term)> {
        for a in args {
            let mut w = self.whnf(ctx, &fty);
            if let Term::Meta(id, _) = &w {
                // Unknown function type: refine it, in the hole's own
                // context, to a product of fresh holes.
                let mctx = self.metas.info(*id).ctx.clone();
                let a = self.fresh_type(&mctx, pos, HoleKind::Wildcard);
                let mut inner = mctx.clone();
                inner.push(name("x"), a.clone());
                let b = self.fresh_type(&inner, pos, HoleKind::Wildcard);
                self.metas.assign(*id, Term::Prod(name("x"), std::sync::Arc::new(a), std::sync::Arc::new(b)));
                w = self.whnf(ctx, &fty);
            }
            let Term::Prod(_, dom, cod) = w else {
                return Err(ElabError::NotAFunction { pos, term: self.show(ctx, &f), ty: self.show(ctx, &fty) });
            };
            let a = match a {
                Arg::Src(e) => self.elab(ctx, e, Some(&dom))?.0,
                Arg::Done(t) => {
                    let ty = self.unifier().infer(ctx, &t).map_err(|e| ElabError::Kernel(pos, e))?;
                    self.coerce(ctx, &t, &ty, &dom, pos)?;
                    t
                }
            };
            fty = subst(&cod, &a);
            f = Term::app(f, vec![a]);
        }
        Ok((f, fty))
    }

    pub(crate) fn apply_global(
        &mut self,
        ctx: &LocalContext,
        x: &str,
        args: Vec<Arg<'_>>,
        pos: Pos,
    ) -> EResult<(Term, Term)> {
        let (f, fty) = self.global(ctx, x, pos, true)?;
        self.apply(ctx, f, fty, args, pos)
    }

    fn numeral(&mut self, n: u64, pos: Pos) -> EResult<(Term, Term)> {
        if n > MAX_NUMERAL {
            return Err(ElabError::NumeralTooLarge(pos, n));
        }
        if self.env.inductive("nat").is_none() {
            return Err(ElabError::Unknown(pos, "nat".into()));
        }
        let mut t = Term::construct("nat", 1);
        for _ in 0..n {
            t = Term::app(Term::construct("nat", 2), vec![t]);
        }
        Ok((t, Term::ind("nat")))
    }

    /// Push binder groups, elaborating their types (metas when omitted).
    /// Returns the binders added, outermost first.
    pub(crate) fn push_binders(
        &mut self,
        ctx: &mut LocalContext,
        binders: &[Binder],
        pos: Pos,
    ) -> EResult<Vec<(Name, Term)>> {
        let mut out = Vec::new();
        for b in binders {
            let base = ctx.len();
            let ty = match &b.ty {
                Some(e) => Some(self.elab_type(ctx, e)?.0),
                None => None,
            };
            for (k, n) in b.names.iter().enumerate() {
                let t = match &ty {
                    Some(t) => crate::kernel::term::lift(t, k as isize, 0),
                    None => self.fresh_type(ctx, pos, HoleKind::Binder(n.clone())),
                };
                debug_assert_eq!(ctx.len(), base + k);
                ctx.push(name(n), t.clone());
                out.push((name(n), t));
            }
        }
        Ok(out)
    }

    fn sort_of(&mut self, ctx: &LocalContext, ty: &Term) -> Option<Sort> {
        match self.whnf(ctx, ty) {
            Term::Sort(s) => Some(s),
            _ => None,
        }
    }

    fn elab_inner(&mut self, ctx: &LocalContext, e: &Expr, expected: Option<&Term>) -> EResult<(Term, Term)> {
        let pos = e.pos;
        match &e.kind {
            ExprKind::Var(x) => self.var(ctx, x, pos),
            ExprKind::Explicit(x) => self.global(ctx, x, pos, false),
            ExprKind::Num(n) => self.numeral(*n, pos),
            ExprKind::Sort(s) => Ok(match s {
                SortName::Prop => (Term::prop(), Term::sort(Sort::Type(1))),
                SortName::Set => (Term::set(), Term::sort(Sort::Type(1))),
                SortName::Type => (Term::sort(Sort::Type(1)), Term::sort(Sort::Type(2))),
            }),
            ExprKind::Hole => {
                let ty = match expected {
                    Some(t) => t.clone(),
                    None => self.fresh_type(ctx, pos, HoleKind::Wildcard),
                };
                let m = self.fresh_term(ctx, ty.clone(), pos, HoleKind::Wildcard);
                Ok((m, ty))
            }
            ExprKind::App(h, args) => {
                let (f, fty) = self.elab_inner(ctx, h, None)?;
                self.apply(ctx, f, fty, args.iter().map(Arg::Src).collect(), pos)
            }
            ExprKind::Infix(op, a, b) => self.infix(ctx, op, a, b, pos),
            ExprKind::Not(a) => self.apply_global(ctx, "not", vec![Arg::Src(a)], pos),
            ExprKind::Arrow(a, b) => {
                let (ta, sa) = self.elab_type(ctx, a)?;
                let inner = ctx.with(crate::kernel::term::anonymous(), ta.clone());
                let (tb, sb) = self.elab_type(&inner, b)?;
                let s = match (sa, sb) {
                    (Some(x), Some(y)) => x.product(y),
                    (_, Some(Sort::Prop)) => Sort::Prop,
                    _ => Sort::Type(MAX_LEVEL),
                };
                Ok((Term::prod(crate::kernel::term::anonymous(), ta, tb), Term::sort(s)))
            }
            ExprKind::Forall(bs, body) => {
                let mut inner = ctx.clone();
                let binders = self.push_binders(&mut inner, bs, pos)?;
                let (tb, sb) = self.elab_type(&inner, body)?;
                let mut s = sb.unwrap_or(Sort::Type(MAX_LEVEL));
                for (k, (_, ty)) in binders.iter().enumerate().rev() {
                    let mut c = ctx.clone();
                    for (n, t) in &binders[..k] {
                        c.push(n.clone(), t.clone());
                    }
                    let sa = self.sort_of_type(&c, ty).unwrap_or(Sort::Type(MAX_LEVEL));
                    s = sa.product(s);
                }
                Ok((crate::kernel::term::build_prod(&binders, tb), Term::sort(s)))
            }
            ExprKind::Exists(bs, body) => self.exists(ctx, bs, body, pos),
            ExprKind::Fun(bs, body) => self.fun(ctx, bs, body, expected, pos),
            ExprKind::Let(x, ty, v, body) => {
                let (tv, vty) = match ty {
                    Some(t) => {
                        let (tt, _) = self.elab_type(ctx, t)?;
                        let (tv, _) = self.elab(ctx, v, Some(&tt))?;
                        (tv, tt)
                    }
                    None => self.elab(ctx, v, None)?,
                };
                let mut inner = ctx.clone();
                inner.push_def(name(x), vty.clone(), tv.clone());
                let exp = expected.map(|t| crate::kernel::term::lift(t, 1, 0));
                let (tb, bty) = self.elab(&inner, body, exp.as_ref())?;
                Ok((Term::let_in(name(x), tv.clone(), vty, tb), subst(&bty, &tv)))
            }
            ExprKind::Pair(a, b) => self.apply_global(ctx, "pair", vec![Arg::Src(a), Arg::Src(b)], pos),
            ExprKind::Match { scrutinee, as_name, ret, branches } => {
                self.elab_match(ctx, scrutinee, as_name.as_deref(), ret.as_deref(), branches, expected, pos)
            }
        }
    }

    fn sort_of_type(&mut self, ctx: &LocalContext, ty: &Term) -> Option<Sort> {
        let tty = self.unifier().infer(ctx, ty).ok()?;
        self.sort_of(ctx, &tty)
    }

    fn infix(&mut self, ctx: &LocalContext, op: &str, a: &Expr, b: &Expr, pos: Pos) -> EResult<(Term, Term)> {
        match op {
            "*" => {
                let (ta, aty) = self.elab(ctx, a, None)?;
                let target = if matches!(self.whnf(ctx, &aty), Term::Sort(_)) { "prod" } else { "mult" };
                let (f, fty) = self.var(ctx, target, pos)?;
                self.apply(ctx, f, fty, vec![Arg::Done(ta), Arg::Src(b)], pos)
            }
            "<>" => {
                let (eq, _) = self.apply_global(ctx, "eq", vec![Arg::Src(a), Arg::Src(b)], pos)?;
                self.apply_global(ctx, "not", vec![Arg::Done(eq)], pos)
            }
            "^" => {
                let target = self
                    .env
                    .notation_target("^")
                    .map(|t| t.to_string())
                    .ok_or_else(|| ElabError::NoInterpretation(pos, "\"_ ^ _\"".into()))?;
                let (f, fty) = self.var(ctx, &target, pos)?;
                self.apply(ctx, f, fty, vec![Arg::Src(a), Arg::Src(b)], pos)
            }
            _ => {
                // Looked up like an identifier so a fixpoint body can use its
                // own notation for the recursive call.
                let target = infix_target(op).ok_or_else(|| ElabError::NoInterpretation(pos, op.into()))?;
                let (f, fty) = self.var(ctx, target, pos)?;
                self.apply(ctx, f, fty, vec![Arg::Src(a), Arg::Src(b)], pos)
            }
        }
    }

    fn exists(&mut self, ctx: &LocalContext, bs: &[Binder], body: &Expr, pos: Pos) -> EResult<(Term, Term)> {
        let ex = self.env.global_term("ex").ok_or_else(|| ElabError::Unknown(pos, "ex".into()))?;
        let mut inner = ctx.clone();
        let binders = self.push_binders(&mut inner, bs, pos)?;
        let (mut t, _) = self.elab(&inner, body, Some(&Term::prop()))?;
        for (n, ty) in binders.into_iter().rev() {
            t = Term::app(ex.clone(), vec![ty.clone(), Term::lambda(n, ty, t)]);
        }
        Ok((t, Term::prop()))
    }

    fn fun(
        &mut self,
        ctx: &LocalContext,
        bs: &[Binder],
        body: &Expr,
        expected: Option<&Term>,
        pos: Pos,
    ) -> EResult<(Term, Term)> {
        let mut inner = ctx.clone();
        let mut binders: Vec<(Name, Term)> = Vec::new();
        let mut exp = expected.cloned();
        for b in bs {
            let annot = match &b.ty {
                Some(e) => Some(self.elab_type(&inner, e)?.0),
                None => None,
            };
            for (k, x) in b.names.iter().enumerate() {
                let annot = annot.as_ref().map(|t| crate::kernel::term::lift(t, k as isize, 0));
                let dom_cod = exp.as_ref().and_then(|t| match self.whnf(&inner, t) {
                    Term::Prod(_, d, c) => Some(((*d).clone(), (*c).clone())),
                    _ => None,
                });
                let ty = match (annot, &dom_cod) {
                    (Some(a), Some((d, _))) => {
                        if !self.unifier().unify_eq(&inner, &a, d) {
                            return Err(ElabError::Mismatch {
                                pos,
                                term: x.clone(),
                                actual: self.show(&inner, &a),
                                expected: self.show(&inner, d),
                            });
                        }
                        a
                    }
                    (Some(a), None) => a,
                    (None, Some((d, _))) => d.clone(),
                    (None, None) => self.fresh_type(&inner, pos, HoleKind::Binder(x.clone())),
                };
                exp = dom_cod.map(|(_, c)| c);
                inner.push(name(x), ty.clone());
                binders.push((name(x), ty));
            }
        }
        let (tb, bty) = self.elab(&inner, body, exp.as_ref())?;
        let ty = crate::kernel::term::build_prod(&binders, bty);
        Ok((build_lambda(&binders, tb), ty))
    }
}
