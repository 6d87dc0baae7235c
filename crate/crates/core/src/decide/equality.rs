//! `discriminate` and `injection`, plus the constructor discriminators and
//! projections they share with `inversion`. Every proof built here is an
//! ordinary kernel term.

use std::sync::Arc;

use crate::engine::{EngineError, ProofState, Result};
use crate::kernel::term::{build_lambda, lift, name, MetaId, Name, Term};
use crate::kernel::typing::instantiate_prod;
use crate::kernel::{InductiveInfo, LocalContext};
use crate::surface::ast::Expr;

use super::DecideError;

fn err(e: DecideError) -> EngineError {
    EngineError::Decide(e)
}

pub(crate) fn eq_term(ty: &Term, a: &Term, b: &Term) -> Term {
    Term::app(Term::ind("eq"), vec![ty.clone(), a.clone(), b.clone()])
}

/// A path into a constructor tree: (constructor ordinal, field index).
pub(crate) type Path = [(usize, usize)];

impl ProofState {
    /// The inductive (without indices) a type reduces to, with its parameters.
    pub(crate) fn plain_inductive(&self, ctx: &LocalContext, ty: &Term) -> Option<(Arc<InductiveInfo>, Vec<Term>)> {
        let w = self.whnf(ctx, ty);
        let Term::Ind(n) = w.head() else { return None };
        let info = self.env.inductive(n)?.clone();
        if info.nindices != 0 {
            return None;
        }
        Some((info, w.args().to_vec()))
    }

    /// Constructor ordinal and fields of the weak-head form of `t`.
    pub(crate) fn ctor_view(&self, ctx: &LocalContext, t: &Term) -> Option<(usize, Vec<Term>)> {
        let w = self.whnf(ctx, t);
        let Term::Construct(i, j) = w.head() else { return None };
        let np = self.env.inductive(i)?.nparams();
        Some((*j, w.args().get(np..)?.to_vec()))
    }

    /// Field binders of constructor `j` at the given parameters.
    pub(crate) fn ctor_fields(&self, info: &InductiveInfo, params: &[Term], j: usize) -> Vec<(Name, Term)> {
        instantiate_prod(&info.ctors[j - 1].ty, params).decompose_prod().0
    }

    /// Type of field `k`, when it does not depend on earlier fields.
    fn field_type(fields: &[(Name, Term)], k: usize) -> Option<Term> {
        let t = &fields[k].1;
        if (0..k).any(|i| t.has_rel(i)) {
            return None;
        }
        Some(lift(t, -(k as isize), 0))
    }

    /// `fun z : ty => match z return R with C_c fields => body(c) end`,
    /// where `body(c, nf)` is built in the context extended by `z` and the
    /// `nf` fields.
    fn match_on(
        &self,
        info: &InductiveInfo,
        params: &[Term],
        ty: &Term,
        ret: &Term,
        body: &dyn Fn(usize, usize) -> Term,
    ) -> Term {
        let pred = Term::Lambda(name("x"), Arc::new(lift(ty, 1, 0)), Arc::new(lift(ret, 2, 0)));
        let lparams: Vec<Term> = params.iter().map(|p| lift(p, 1, 0)).collect();
        let branches = (1..=info.ctors.len())
            .map(|c| {
                let fs = self.ctor_fields(info, &lparams, c);
                build_lambda(&fs, body(c, fs.len()))
            })
            .collect();
        Term::Lambda(
            name("z"),
            Arc::new(ty.clone()),
            Arc::new(Term::mk_match(info.name.clone(), Term::Rel(0), pred, branches)),
        )
    }

    /// `D : ty -> Prop` with `D a` reducing to `True` and `D b` to `False`,
    /// when `a` and `b` differ by a constructor somewhere along equal
    /// constructor spines.
    pub(crate) fn discriminator(&self, ctx: &LocalContext, ty: &Term, a: &Term, b: &Term) -> Option<Term> {
        let (info, params) = self.plain_inductive(ctx, ty)?;
        let (ja, fa) = self.ctor_view(ctx, a)?;
        let (jb, fb) = self.ctor_view(ctx, b)?;
        let truth = |c: usize| if c == ja { Term::ind("True") } else { Term::ind("False") };
        if ja != jb {
            return Some(self.match_on(&info, &params, ty, &Term::prop(), &|c, _| truth(c)));
        }
        let fields = self.ctor_fields(&info, &params, ja);
        for k in 0..fields.len() {
            let Some(fty) = Self::field_type(&fields, k) else { continue };
            if let Some(dk) = self.discriminator(ctx, &fty, &fa[k], &fb[k]) {
                return Some(self.match_on(&info, &params, ty, &Term::prop(), &|c, nf| {
                    if c == ja {
                        Term::app(lift(&dk, 1 + nf as isize, 0), vec![Term::Rel(nf - 1 - k)])
                    } else {
                        Term::ind("False")
                    }
                }));
            }
        }
        None
    }

    /// A proof of `False` from `h : a = b` when `a` and `b` clash.
    pub(crate) fn false_from_eq(&self, ctx: &LocalContext, ty: &Term, a: &Term, b: &Term, h: Term) -> Option<Term> {
        let d = self.discriminator(ctx, ty, a, b)?;
        Some(Term::app(
            Term::constant("eq_ind"),
            vec![ty.clone(), a.clone(), d, Term::construct("True", 1), b.clone(), h],
        ))
    }

    /// `proj : ty -> R` selecting the subterm of `a` at `path` (and
    /// returning that subterm on other constructors), with `R` and the
    /// subterm.
    pub(crate) fn path_projection(
        &self,
        ctx: &LocalContext,
        ty: &Term,
        a: &Term,
        path: &Path,
    ) -> Option<(Term, Term, Term)> {
        let Some(&(j, k)) = path.first() else {
            return Some((
                Term::Lambda(name("z"), Arc::new(ty.clone()), Arc::new(Term::Rel(0))),
                ty.clone(),
                a.clone(),
            ));
        };
        let (info, params) = self.plain_inductive(ctx, ty)?;
        let (ja, fa) = self.ctor_view(ctx, a)?;
        if ja != j {
            return None;
        }
        let fields = self.ctor_fields(&info, &params, j);
        let fty = Self::field_type(&fields, k)?;
        let (inner, r, sub) = self.path_projection(ctx, &fty, &fa[k], &path[1..])?;
        let proj = self.match_on(&info, &params, ty, &r, &|c, nf| {
            if c == j {
                Term::app(lift(&inner, 1 + nf as isize, 0), vec![Term::Rel(nf - 1 - k)])
            } else {
                lift(&sub, 1 + nf as isize, 0)
            }
        });
        Some((proj, r, sub))
    }

    /// Subterm of `t` at `path`, reading constructors through reduction.
    pub(crate) fn subterm_at(&self, ctx: &LocalContext, t: &Term, path: &Path) -> Option<Term> {
        let mut cur = t.clone();
        for &(j, k) in path {
            let (c, fs) = self.ctor_view(ctx, &cur)?;
            if c != j {
                return None;
            }
            cur = fs.get(k)?.clone();
        }
        Some(cur)
    }

    /// From `h : a = b`, a proof of `a|path = b|path` with that type.
    pub(crate) fn project_eq(
        &self,
        ctx: &LocalContext,
        ty: &Term,
        a: &Term,
        b: &Term,
        h: &Term,
        path: &Path,
    ) -> Option<(Term, Term)> {
        let (proj, r, sub) = self.path_projection(ctx, ty, a, path)?;
        let bsub = self.subterm_at(ctx, b, path)?;
        let motive = Term::Lambda(
            name("z"),
            Arc::new(ty.clone()),
            Arc::new(eq_term(&lift(&r, 1, 0), &lift(&sub, 1, 0), &Term::app(lift(&proj, 1, 0), vec![Term::Rel(0)]))),
        );
        let refl = Term::app(Term::construct("eq", 1), vec![r.clone(), sub.clone()]);
        let proof =
            Term::app(Term::constant("eq_ind"), vec![ty.clone(), a.clone(), motive, refl, b.clone(), h.clone()]);
        Some((proof, eq_term(&r, &sub, &bsub)))
    }
}

pub fn discriminate(ps: &mut ProofState, g: MetaId, e: Option<&Expr>) -> Result<()> {
    let mut g = g;
    let ctx = ps.ctx(g);
    let candidates: Vec<(Term, Term)> = match e {
        Some(e) => {
            let (t, ty) = ps.elab(g, e, None)?;
            if ps.as_equality(&ctx, &ty).is_none() {
                return Err(err(DecideError::NotAnEquality(ps.show(&ctx, &ty))));
            }
            vec![(t, ty)]
        }
        None => {
            let mut v: Vec<(Term, Term)> =
                (0..ctx.len()).map(|i| (Term::Rel(i), ctx.type_of(i).expect("in context"))).collect();
            // A goal `l <> r` is handled by introducing `l = r`.
            if let Term::Prod(_, a, _) = ps.whnf(&ctx, &ps.concl(g)) {
                if ps.as_equality(&ctx, &a).is_some() {
                    g = ps.intro(g, None)?;
                    let c2 = ps.ctx(g);
                    v = vec![(Term::Rel(0), c2.type_of(0).expect("introduced"))];
                }
            }
            v
        }
    };
    let ctx = ps.ctx(g);
    for (h, ty) in candidates {
        let Some((a, l, r)) = ps.as_equality(&ctx, &ty) else { continue };
        if let Some(f) = ps.false_from_eq(&ctx, &a, &l, &r, h) {
            let proof = ps.absurd(g, &name("False"), f);
            return ps.close(g, proof, "discriminate");
        }
    }
    Err(err(DecideError::NotAConstructorClash))
}

/// `injection H` with `H : C a1 .. an = C b1 .. bn`: the goal becomes
/// `a1 = b1 -> .. -> an = bn -> goal`.
pub fn injection(ps: &mut ProofState, g: MetaId, e: &Expr) -> Result<()> {
    let ctx = ps.ctx(g);
    let (h, ty) = ps.elab(g, e, None)?;
    let Some((a, l, r)) = ps.as_equality(&ctx, &ty) else {
        return Err(err(DecideError::NotAnEquality(ps.show(&ctx, &ty))));
    };
    let (jl, fl) = ps.ctor_view(&ctx, &l).ok_or(err(DecideError::NotSameConstructor))?;
    let (jr, _) = ps.ctor_view(&ctx, &r).ok_or(err(DecideError::NotSameConstructor))?;
    if jl != jr || ps.plain_inductive(&ctx, &a).is_none() {
        return Err(err(DecideError::NotSameConstructor));
    }
    let mut eqs = Vec::new();
    for k in 0..fl.len() {
        if let Some(pe) = ps.project_eq(&ctx, &a, &l, &r, &h, &[(jl, k)]) {
            eqs.push(pe);
        }
    }
    let concl = ps.concl(g);
    let mut new = concl;
    for (_, ety) in eqs.iter().rev() {
        new = Term::Prod(crate::kernel::term::anonymous(), Arc::new(ety.clone()), Arc::new(lift(&new, 1, 0)));
    }
    let (_, m) = ps.fresh_goal(&ctx, new);
    let proof = Term::app(m, eqs.into_iter().map(|(p, _)| p).collect());
    ps.close(g, proof, "injection")
}
