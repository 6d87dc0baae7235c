//! Type inference, checking and conversion for kernel terms.
//!
//! Inference is written against the [`Judge`] trait so the elaborator can
//! reuse it with unification in place of conversion. The kernel's own judge
//! ([`Kernel`]) rejects metavariables outright.

use std::sync::Arc;

use thiserror::Error;

use super::context::LocalContext;
use super::env::{Decl, GlobalEnv, OracleKind};
use super::guard;
use super::term::{beta_apply, lift, subst, visit, MetaId, Name, Sort, Term};
use crate::reduction::{whnf, whnf_all, ReductionFlags};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("unbound variable #{0}")]
    UnboundVariable(usize),
    #[error("unknown reference {0}")]
    UnknownGlobal(String),
    #[error("term is not a function")]
    NotAFunction { term: Term, ty: Term },
    #[error("type mismatch at {position}")]
    TypeMismatch { expected: Term, actual: Term, position: String },
    #[error("expected a type")]
    NotASort(Term),
    #[error("match on {ind}: {reason}")]
    ArityMismatch { ind: Name, reason: String },
    #[error("universe inconsistency: the universe ladder stops at Type({})", super::term::MAX_LEVEL)]
    UniverseOverflow,
    #[error("recursive call of {0} is not on a structural subterm")]
    NonStructuralRecursion(Name),
    #[error("ill-formed fixpoint {0}: {1}")]
    BadFixpoint(Name, String),
    #[error("elimination of {ind} into {target} is not allowed")]
    BadElimination { ind: Name, target: Sort },
    #[error("unresolved existential variable ?{0}")]
    UnexpectedMeta(MetaId),
    #[error("non strictly positive occurrence of {ind} in constructor {ctor} ({position})")]
    NegativeOccurrence { ind: Name, ctor: Name, position: String },
    #[error("constructor {0} does not end in the inductive applied to its parameters")]
    BadConstructorConclusion(Name),
    #[error("{0} already exists")]
    NameClash(Name),
}

pub type KResult<T> = Result<T, KernelError>;

/// The judgments inference needs from its caller.
pub trait Judge {
    fn env(&self) -> &GlobalEnv;
    /// Subtyping `a <= b` (conversion up to cumulativity), possibly solving
    /// metavariables as a side effect.
    fn leq(&mut self, ctx: &LocalContext, a: &Term, b: &Term) -> bool;
    /// Weak-head normal form with every rule enabled.
    fn whnf(&mut self, ctx: &LocalContext, t: &Term) -> Term {
        whnf_all(self.env(), ctx, t)
    }
    /// Type of an applied metavariable, in the caller's context.
    fn meta_type(&mut self, id: MetaId, _inst: &[Term]) -> KResult<Term> {
        Err(KernelError::UnexpectedMeta(id))
    }
}

/// The trusted judge: plain conversion, no metavariables.
pub struct Kernel<'a> {
    pub env: &'a GlobalEnv,
}

impl Judge for Kernel<'_> {
    fn env(&self) -> &GlobalEnv {
        self.env
    }

    fn leq(&mut self, ctx: &LocalContext, a: &Term, b: &Term) -> bool {
        conv_leq(self.env, ctx, a, b)
    }
}

pub fn infer_type(env: &GlobalEnv, ctx: &LocalContext, t: &Term) -> KResult<Term> {
    infer(&mut Kernel { env }, ctx, t)
}

pub fn check_type(env: &GlobalEnv, ctx: &LocalContext, t: &Term, ty: &Term) -> KResult<()> {
    check(&mut Kernel { env }, ctx, t, ty)
}

pub fn infer_sort_of(env: &GlobalEnv, ctx: &LocalContext, t: &Term) -> KResult<Sort> {
    infer_sort(&mut Kernel { env }, ctx, t)
}

pub fn infer<J: Judge + ?Sized>(j: &mut J, ctx: &LocalContext, t: &Term) -> KResult<Term> {
    match t {
        Term::Rel(i) => ctx.type_of(*i).ok_or(KernelError::UnboundVariable(*i)),
        Term::Sort(s) => s.successor().map(Term::Sort).ok_or(KernelError::UniverseOverflow),
        Term::Prod(n, a, b) => {
            let sa = infer_sort(j, ctx, a)?;
            let inner = ctx.with(n.clone(), (**a).clone());
            let sb = infer_sort(j, &inner, b)?;
            Ok(Term::Sort(sa.product(sb)))
        }
        Term::Lambda(n, a, b) => {
            infer_sort(j, ctx, a)?;
            let inner = ctx.with(n.clone(), (**a).clone());
            let tb = infer(j, &inner, b)?;
            Ok(Term::Prod(n.clone(), a.clone(), Arc::new(tb)))
        }
        Term::LetIn(n, v, ty, b) => {
            infer_sort(j, ctx, ty)?;
            check(j, ctx, v, ty)?;
            let mut inner = ctx.clone();
            inner.push_def(n.clone(), (**ty).clone(), (**v).clone());
            let tb = infer(j, &inner, b)?;
            Ok(subst(&tb, v))
        }
        Term::App(h, args) => {
            let mut ty = infer(j, ctx, h)?;
            for (k, a) in args.iter().enumerate() {
                let p = match ty {
                    Term::Prod(..) => ty,
                    _ => j.whnf(ctx, &ty),
                };
                match p {
                    Term::Prod(_, dom, cod) => {
                        let ta = infer(j, ctx, a)?;
                        if !j.leq(ctx, &ta, &dom) {
                            return Err(KernelError::TypeMismatch {
                                expected: (*dom).clone(),
                                actual: ta,
                                position: format!("argument {}", k + 1),
                            });
                        }
                        ty = subst(&cod, a);
                    }
                    other => {
                        return Err(KernelError::NotAFunction {
                            term: Term::app((**h).clone(), args[..k].to_vec()),
                            ty: other,
                        })
                    }
                }
            }
            Ok(ty)
        }
        Term::Const(n) | Term::Ind(n) => {
            j.env().global_type(t).ok_or_else(|| KernelError::UnknownGlobal(n.to_string()))
        }
        Term::Construct(n, k) => j.env().global_type(t).ok_or_else(|| KernelError::UnknownGlobal(format!("{n}#{k}"))),
        Term::Match(_) => infer_match(j, ctx, t),
        Term::Fix(fx) => {
            infer_sort(j, ctx, &fx.ty)?;
            let inner = ctx.with(fx.name.clone(), fx.ty.clone());
            let expected = lift(&fx.ty, 1, 0);
            check(j, &inner, &fx.body, &expected)?;
            check_fix_shape(j, ctx, fx)?;
            if !guard::check_guard(j.env(), fx) {
                return Err(KernelError::NonStructuralRecursion(fx.name.clone()));
            }
            Ok(fx.ty.clone())
        }
        Term::Meta(id, inst) => j.meta_type(*id, inst),
    }
}

/// The structural argument must exist and have an inductive type.
fn check_fix_shape<J: Judge + ?Sized>(j: &mut J, ctx: &LocalContext, fx: &super::term::FixData) -> KResult<()> {
    let mut c = ctx.clone();
    let mut ty = fx.ty.clone();
    for k in 0..=fx.struct_index {
        let p = j.whnf(&c, &ty);
        match p {
            Term::Prod(n, a, b) => {
                if k == fx.struct_index {
                    let w = j.whnf(&c, &a);
                    if !matches!(w.head(), Term::Ind(_)) {
                        return Err(KernelError::BadFixpoint(
                            fx.name.clone(),
                            "structural argument is not of an inductive type".into(),
                        ));
                    }
                }
                c.push(n.clone(), (*a).clone());
                ty = (*b).clone();
            }
            _ => {
                return Err(KernelError::BadFixpoint(
                    fx.name.clone(),
                    "not enough arguments for the structural position".into(),
                ))
            }
        }
    }
    Ok(())
}

pub fn infer_sort<J: Judge + ?Sized>(j: &mut J, ctx: &LocalContext, t: &Term) -> KResult<Sort> {
    let ty = infer(j, ctx, t)?;
    match ty {
        Term::Sort(s) => Ok(s),
        _ => match j.whnf(ctx, &ty) {
            Term::Sort(s) => Ok(s),
            _ => Err(KernelError::NotASort(t.clone())),
        },
    }
}

pub fn check<J: Judge + ?Sized>(j: &mut J, ctx: &LocalContext, t: &Term, ty: &Term) -> KResult<()> {
    let actual = infer(j, ctx, t)?;
    if j.leq(ctx, &actual, ty) {
        Ok(())
    } else {
        Err(KernelError::TypeMismatch { expected: ty.clone(), actual, position: "term".into() })
    }
}

/// Substitute the leading products of `ty` with `args` (no reduction).
pub fn instantiate_prod(ty: &Term, args: &[Term]) -> Term {
    let mut t = ty.clone();
    for a in args {
        match t {
            Term::Prod(_, _, b) => t = subst(&b, a),
            _ => panic!("instantiate_prod: not enough products"),
        }
    }
    t
}

/// Expected type of branch `j` (1-based) of a match on `I params` with
/// return predicate `pred`.
pub fn branch_type(env: &GlobalEnv, ind: &str, params: &[Term], pred: &Term, j: usize) -> Option<Term> {
    let info = env.inductive(ind)?;
    let ctor = info.ctors.get(j - 1)?;
    let ty = instantiate_prod(&ctor.ty, params);
    let (fields, concl) = ty.decompose_prod();
    let nf = fields.len();
    let np = params.len();
    let concl_args = concl.args();
    let mut pargs: Vec<Term> = concl_args[np..].to_vec();
    let lifted_params: Vec<Term> = params.iter().map(|p| lift(p, nf as isize, 0)).collect();
    let mut cargs = lifted_params;
    cargs.extend((0..nf).rev().map(Term::Rel));
    pargs.push(Term::app(Term::Construct(info.name.clone(), j), cargs));
    let body = beta_apply(&lift(pred, nf as isize, 0), &pargs);
    Some(super::term::build_prod(&fields, body))
}

fn infer_match<J: Judge + ?Sized>(j: &mut J, ctx: &LocalContext, t: &Term) -> KResult<Term> {
    let Term::Match(m) = t else { unreachable!() };
    let env = j.env().clone();
    let info = env.inductive(&m.ind).ok_or_else(|| KernelError::UnknownGlobal(m.ind.to_string()))?.clone();
    let arity_err = |reason: &str| KernelError::ArityMismatch { ind: m.ind.clone(), reason: reason.to_string() };
    if m.branches.len() != info.ctors.len() {
        return Err(arity_err(&format!("{} branches for {} constructors", m.branches.len(), info.ctors.len())));
    }
    let sty = infer(j, ctx, &m.scrutinee)?;
    let w = j.whnf(ctx, &sty);
    let args = match w.head() {
        Term::Ind(n) if *n == m.ind => w.args().to_vec(),
        _ => {
            return Err(KernelError::TypeMismatch {
                expected: Term::Ind(m.ind.clone()),
                actual: sty,
                position: "match scrutinee".into(),
            })
        }
    };
    let np = info.nparams();
    if args.len() != np + info.nindices {
        return Err(arity_err("scrutinee type is not fully applied"));
    }
    let (params, indices) = args.split_at(np);

    // Predicate: fun indices (x : I params indices) => s
    let pty = infer(j, ctx, &m.predicate)?;
    let arity = instantiate_prod(&info.ty, params);
    let mut c = ctx.clone();
    let mut expect = arity;
    let mut got = pty;
    for _ in 0..info.nindices {
        let e = j.whnf(&c, &expect);
        let g = j.whnf(&c, &got);
        match (e, g) {
            (Term::Prod(_, ea, eb), Term::Prod(n, ga, gb)) => {
                if !j.leq(&c, &ea, &ga) || !j.leq(&c, &ga, &ea) {
                    return Err(arity_err("return predicate has the wrong index types"));
                }
                c.push(n.clone(), (*ga).clone());
                expect = (*eb).clone();
                got = (*gb).clone();
            }
            _ => return Err(arity_err("return predicate has too few binders")),
        }
    }
    let k = info.nindices;
    let self_ty = Term::app(
        Term::Ind(m.ind.clone()),
        params.iter().map(|p| lift(p, k as isize, 0)).chain((0..k).rev().map(Term::Rel)).collect(),
    );
    let g = j.whnf(&c, &got);
    let target = match g {
        Term::Prod(n, ga, gb) => {
            if !j.leq(&c, &self_ty, &ga) || !j.leq(&c, &ga, &self_ty) {
                return Err(arity_err("return predicate binds the wrong scrutinee type"));
            }
            let c2 = c.with(n.clone(), (*ga).clone());
            match j.whnf(&c2, &gb) {
                Term::Sort(s) => s,
                _ => return Err(arity_err("return predicate does not return a type")),
            }
        }
        _ => return Err(arity_err("return predicate has too few binders")),
    };
    if info.sort == Sort::Prop && target != Sort::Prop && !info.large_elim {
        return Err(KernelError::BadElimination { ind: m.ind.clone(), target });
    }

    for (bi, branch) in m.branches.iter().enumerate() {
        let expected =
            branch_type(&env, &m.ind, params, &m.predicate, bi + 1).ok_or_else(|| arity_err("missing constructor"))?;
        let actual = infer(j, ctx, branch)?;
        if !j.leq(ctx, &actual, &expected) {
            return Err(KernelError::TypeMismatch {
                expected,
                actual,
                position: format!("branch {} of match on {}", bi + 1, m.ind),
            });
        }
    }
    let mut pargs = indices.to_vec();
    pargs.push(m.scrutinee.clone());
    Ok(beta_apply(&m.predicate, &pargs))
}

/// Conversion with cumulativity: `a <= b`.
pub fn conv_leq(env: &GlobalEnv, ctx: &LocalContext, a: &Term, b: &Term) -> bool {
    conv(env, ctx, a, b, true)
}

pub fn convertible(env: &GlobalEnv, ctx: &LocalContext, a: &Term, b: &Term) -> bool {
    conv(env, ctx, a, b, false)
}

fn conv(env: &GlobalEnv, ctx: &LocalContext, a: &Term, b: &Term, cumul: bool) -> bool {
    if a == b {
        return true;
    }
    let wa = whnf(env, ctx, a, ReductionFlags::NO_DELTA);
    let wb = whnf(env, ctx, b, ReductionFlags::NO_DELTA);
    if wa == wb || conv_whnf(env, ctx, &wa, &wb, cumul) {
        return true;
    }
    // Delta: unfold everything at the head and retry when that made progress.
    let da = whnf_all(env, ctx, &wa);
    let db = whnf_all(env, ctx, &wb);
    if da == wa && db == wb {
        return eta(env, ctx, &wa, &wb);
    }
    da == db || conv_whnf(env, ctx, &da, &db, cumul) || eta(env, ctx, &da, &db)
}

fn eta(env: &GlobalEnv, ctx: &LocalContext, a: &Term, b: &Term) -> bool {
    match (a, b) {
        (Term::Lambda(n, dom, body), other) | (other, Term::Lambda(n, dom, body))
            if !matches!(other, Term::Lambda(..)) =>
        {
            let inner = ctx.with(n.clone(), (**dom).clone());
            let expanded = Term::app(lift(other, 1, 0), vec![Term::Rel(0)]);
            conv(env, &inner, body, &expanded, false)
        }
        _ => false,
    }
}

fn conv_args(env: &GlobalEnv, ctx: &LocalContext, xs: &[Term], ys: &[Term]) -> bool {
    xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| conv(env, ctx, x, y, false))
}

fn conv_whnf(env: &GlobalEnv, ctx: &LocalContext, a: &Term, b: &Term, cumul: bool) -> bool {
    match (a, b) {
        (Term::Sort(s), Term::Sort(t)) => {
            if cumul {
                s.leq(*t)
            } else {
                s == t
            }
        }
        (Term::Prod(n, a1, b1), Term::Prod(_, a2, b2)) => {
            if !conv(env, ctx, a1, a2, false) {
                return false;
            }
            let inner = ctx.with(n.clone(), (**a1).clone());
            conv(env, &inner, b1, b2, cumul)
        }
        (Term::Lambda(n, a1, b1), Term::Lambda(_, a2, b2)) => {
            if !conv(env, ctx, a1, a2, false) {
                return false;
            }
            let inner = ctx.with(n.clone(), (**a1).clone());
            conv(env, &inner, b1, b2, false)
        }
        (Term::App(h1, xs), Term::App(h2, ys)) => conv_head(env, ctx, h1, h2) && conv_args(env, ctx, xs, ys),
        (Term::Meta(i, xs), Term::Meta(k, ys)) => i == k && conv_args(env, ctx, xs, ys),
        (Term::App(..), _) | (_, Term::App(..)) => false,
        _ => conv_head(env, ctx, a, b),
    }
}

/// Heads of weak-head normal applications.
fn conv_head(env: &GlobalEnv, ctx: &LocalContext, a: &Term, b: &Term) -> bool {
    match (a, b) {
        (Term::Rel(i), Term::Rel(k)) => i == k,
        (Term::Const(x), Term::Const(y)) | (Term::Ind(x), Term::Ind(y)) => x == y,
        (Term::Construct(x, i), Term::Construct(y, k)) => x == y && i == k,
        (Term::Match(m1), Term::Match(m2)) => {
            m1.ind == m2.ind
                && conv(env, ctx, &m1.scrutinee, &m2.scrutinee, false)
                && conv(env, ctx, &m1.predicate, &m2.predicate, false)
                && conv_args(env, ctx, &m1.branches, &m2.branches)
        }
        (Term::Fix(f1), Term::Fix(f2)) => {
            f1.struct_index == f2.struct_index
                && conv(env, ctx, &f1.ty, &f2.ty, false)
                && conv(env, &ctx.with(f1.name.clone(), f1.ty.clone()), &f1.body, &f2.body, false)
        }
        (Term::Meta(i, xs), Term::Meta(k, ys)) => i == k && conv_args(env, ctx, xs, ys),
        _ => a == b,
    }
}

/// Outcome of a successful proof check.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProofReport {
    /// Oracle lemmas the proof refers to, in first-use order.
    pub oracles: Vec<Name>,
}

/// Check that `proof` inhabits `statement` in the empty context.
pub fn check_proof(env: &GlobalEnv, proof: &Term, statement: &Term) -> KResult<ProofReport> {
    let ctx = LocalContext::new();
    infer_sort_of(env, &ctx, statement)?;
    let ty = infer_type(env, &ctx, proof)?;
    if !conv_leq(env, &ctx, &ty, statement) {
        return Err(KernelError::TypeMismatch { expected: statement.clone(), actual: ty, position: "proof".into() });
    }
    Ok(ProofReport { oracles: oracle_refs(env, proof) })
}

/// Oracle constants referenced directly by `t`, in declaration order.
pub fn oracle_refs(env: &GlobalEnv, t: &Term) -> Vec<Name> {
    let mut out: Vec<Name> = Vec::new();
    visit(t, 0, &mut |u, _| {
        if let Term::Const(n) = u {
            if env.is_oracle(n) && !out.contains(n) {
                out.push(n.clone());
            }
        }
        true
    });
    env.decls().map(|d| d.name()).filter(|n| out.contains(n)).cloned().collect()
}

/// Boolean form of [`check_proof`].
pub fn proves(env: &GlobalEnv, proof: &Term, statement: &Term) -> bool {
    check_proof(env, proof, statement).is_ok()
}

fn ensure_fresh(env: &GlobalEnv, name: &Name) -> KResult<()> {
    if env.contains(name) {
        Err(KernelError::NameClash(name.clone()))
    } else {
        Ok(())
    }
}

/// Type-check and add a definition. Returns the (possibly inferred) type.
pub fn add_definition(env: &mut GlobalEnv, name: Name, ty: Option<Term>, body: Term, opaque: bool) -> KResult<Term> {
    ensure_fresh(env, &name)?;
    let ctx = LocalContext::new();
    let ty = match ty {
        Some(ty) => {
            infer_sort_of(env, &ctx, &ty)?;
            check_type(env, &ctx, &body, &ty)?;
            ty
        }
        None => infer_type(env, &ctx, &body)?,
    };
    env.push(Decl::Definition { name, ty: ty.clone(), body, opaque });
    Ok(ty)
}

pub fn add_axiom(env: &mut GlobalEnv, name: Name, ty: Term) -> KResult<()> {
    ensure_fresh(env, &name)?;
    infer_sort_of(env, &LocalContext::new(), &ty)?;
    env.push(Decl::Axiom { name, ty });
    Ok(())
}

/// Register a lemma closed by a decision procedure. Only the statement is
/// type-checked here; the evidence was verified by the procedure's checker.
pub fn add_oracle(env: &mut GlobalEnv, name: Name, ty: Term, kind: OracleKind, evidence: String) -> KResult<()> {
    ensure_fresh(env, &name)?;
    infer_sort_of(env, &LocalContext::new(), &ty)?;
    env.push(Decl::Oracle { name, ty, kind, evidence });
    Ok(())
}

/// Replay every declaration of `env` against the declarations before it:
/// bodies are re-checked against their types and every statement must be
/// well-sorted. Inductive blocks are re-entered with their constructor
/// types re-sorted.
pub fn recheck(env: &GlobalEnv) -> KResult<()> {
    let mut prefix = GlobalEnv::new();
    let ctx = LocalContext::new();
    for d in env.decls() {
        match &**d {
            Decl::Definition { name, ty, body, opaque } => {
                add_definition(&mut prefix, name.clone(), Some(ty.clone()), body.clone(), *opaque)?;
            }
            Decl::Axiom { name, ty } => add_axiom(&mut prefix, name.clone(), ty.clone())?,
            Decl::Oracle { name, ty, kind, evidence } => {
                add_oracle(&mut prefix, name.clone(), ty.clone(), *kind, evidence.clone())?
            }
            Decl::Inductive(info) => {
                ensure_fresh(&prefix, &info.name)?;
                infer_sort_of(&prefix, &ctx, &info.ty)?;
                prefix.push(Decl::Inductive(info.clone()));
                for c in &info.ctors {
                    infer_sort_of(&prefix, &ctx, &c.ty)?;
                }
            }
        }
    }
    Ok(())
}
