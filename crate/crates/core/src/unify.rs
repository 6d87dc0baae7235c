//! First-order unification modulo conversion, solving metavariables by
//! pattern inversion of their instances.

use std::cell::Cell;

use crate::kernel::context::LocalContext;
use crate::kernel::env::GlobalEnv;
use crate::kernel::term::{lift, map_rels, MetaId, Term};
use crate::kernel::typing::{infer, Judge, KResult};
use crate::meta::MetaCtx;
use crate::reduction::{whnf, whnf_all, ReductionFlags};

pub struct Unifier<'a> {
    pub env: &'a GlobalEnv,
    pub metas: &'a mut MetaCtx,
}

impl Judge for Unifier<'_> {
    fn env(&self) -> &GlobalEnv {
        self.env
    }

    fn leq(&mut self, ctx: &LocalContext, a: &Term, b: &Term) -> bool {
        self.unify(ctx, a, b, true)
    }

    fn whnf(&mut self, ctx: &LocalContext, t: &Term) -> Term {
        whnf_all(self.env, ctx, &self.metas.instantiate(t))
    }

    fn meta_type(&mut self, id: MetaId, inst: &[Term]) -> KResult<Term> {
        Ok(self.metas.instance_type(id, inst))
    }
}

impl<'a> Unifier<'a> {
    pub fn new(env: &'a GlobalEnv, metas: &'a mut MetaCtx) -> Unifier<'a> {
        Unifier { env, metas }
    }

    pub fn infer(&mut self, ctx: &LocalContext, t: &Term) -> KResult<Term> {
        let ty = infer(self, ctx, t)?;
        Ok(self.metas.instantiate(&ty))
    }

    /// `a <= b` when `cumul`, otherwise `a == b`, modulo conversion.
    /// On failure the meta assignments are left as they were.
    pub fn unify(&mut self, ctx: &LocalContext, a: &Term, b: &Term, cumul: bool) -> bool {
        let saved = self.metas.clone();
        let a = self.metas.instantiate(a);
        let b = self.metas.instantiate(b);
        if self.unify_inst(ctx, &a, &b, cumul) {
            true
        } else {
            *self.metas = saved;
            false
        }
    }

    pub fn unify_eq(&mut self, ctx: &LocalContext, a: &Term, b: &Term) -> bool {
        self.unify(ctx, a, b, false)
    }

    fn unify_inst(&mut self, ctx: &LocalContext, a: &Term, b: &Term, cumul: bool) -> bool {
        if a == b {
            return true;
        }
        let saved = self.metas.clone();
        match self.try_flex(ctx, a, b) {
            Some(true) => return true,
            // Two holes: the other may be assignable where this one is not.
            Some(false) if b.head().is_meta() => *self.metas = saved,
            Some(false) => return false,
            None => {}
        }
        if let Some(r) = self.try_flex(ctx, b, a) {
            return r;
        }
        let wa = whnf(self.env, ctx, a, ReductionFlags::NO_DELTA);
        let wb = whnf(self.env, ctx, b, ReductionFlags::NO_DELTA);
        if (wa != *a || wb != *b) && (wa.head().is_meta() || wb.head().is_meta()) {
            return self.unify_inst(ctx, &wa, &wb, cumul);
        }
        let saved = self.metas.clone();
        if self.unify_whnf(ctx, &wa, &wb, cumul) {
            return true;
        }
        *self.metas = saved.clone();
        let da = whnf_all(self.env, ctx, &self.metas.instantiate(&wa));
        let db = whnf_all(self.env, ctx, &self.metas.instantiate(&wb));
        if da == wa && db == wb {
            return self.eta(ctx, &wa, &wb);
        }
        if da == db || self.unify_whnf(ctx, &da, &db, cumul) {
            return true;
        }
        *self.metas = saved;
        self.eta(ctx, &da, &db)
    }

    fn eta(&mut self, ctx: &LocalContext, a: &Term, b: &Term) -> bool {
        match (a, b) {
            (Term::Lambda(n, dom, body), other) | (other, Term::Lambda(n, dom, body))
                if !matches!(other, Term::Lambda(..)) && !other.head().is_meta() =>
            {
                let inner = ctx.with(n.clone(), (**dom).clone());
                let expanded = Term::app(lift(other, 1, 0), vec![Term::Rel(0)]);
                self.unify_sub(&inner, body, &expanded, false)
            }
            _ => false,
        }
    }

    fn unify_sub(&mut self, ctx: &LocalContext, a: &Term, b: &Term, cumul: bool) -> bool {
        let a = self.metas.instantiate(a);
        let b = self.metas.instantiate(b);
        self.unify_inst(ctx, &a, &b, cumul)
    }

    fn unify_args(&mut self, ctx: &LocalContext, xs: &[Term], ys: &[Term]) -> bool {
        xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.unify_sub(ctx, x, y, false))
    }

    fn unify_whnf(&mut self, ctx: &LocalContext, a: &Term, b: &Term, cumul: bool) -> bool {
        match (a, b) {
            (Term::Sort(s), Term::Sort(t)) => {
                if cumul {
                    s.leq(*t)
                } else {
                    s == t
                }
            }
            (Term::Prod(n, a1, b1), Term::Prod(_, a2, b2)) => {
                if !self.unify_sub(ctx, a1, a2, false) {
                    return false;
                }
                let inner = ctx.with(n.clone(), (**a1).clone());
                self.unify_sub(&inner, b1, b2, cumul)
            }
            (Term::Lambda(n, a1, b1), Term::Lambda(_, a2, b2)) => {
                if !self.unify_sub(ctx, a1, a2, false) {
                    return false;
                }
                let inner = ctx.with(n.clone(), (**a1).clone());
                self.unify_sub(&inner, b1, b2, false)
            }
            (Term::App(h1, xs), Term::App(h2, ys)) => {
                xs.len() == ys.len() && self.unify_head(ctx, h1, h2) && self.unify_args(ctx, xs, ys)
            }
            (Term::App(..), _) | (_, Term::App(..)) => false,
            _ => self.unify_head(ctx, a, b),
        }
    }

    fn unify_head(&mut self, ctx: &LocalContext, a: &Term, b: &Term) -> bool {
        match (a, b) {
            (Term::Rel(i), Term::Rel(k)) => i == k,
            (Term::Const(x), Term::Const(y)) | (Term::Ind(x), Term::Ind(y)) => x == y,
            (Term::Construct(x, i), Term::Construct(y, k)) => x == y && i == k,
            (Term::Match(m1), Term::Match(m2)) => {
                m1.ind == m2.ind
                    && self.unify_sub(ctx, &m1.scrutinee, &m2.scrutinee, false)
                    && self.unify_sub(ctx, &m1.predicate, &m2.predicate, false)
                    && self.unify_args(ctx, &m1.branches, &m2.branches)
            }
            (Term::Fix(f1), Term::Fix(f2)) => {
                f1.struct_index == f2.struct_index
                    && self.unify_sub(ctx, &f1.ty, &f2.ty, false)
                    && self.unify_sub(&ctx.with(f1.name.clone(), f1.ty.clone()), &f1.body, &f2.body, false)
            }
            (Term::Meta(i, xs), Term::Meta(k, ys)) if i == k => self.unify_args(ctx, xs, ys),
            _ => a == b,
        }
    }

    /// `flex` is an unassigned meta, possibly applied. `None` means "not
    /// applicable, keep going".
    fn try_flex(&mut self, ctx: &LocalContext, flex: &Term, rhs: &Term) -> Option<bool> {
        let (h, args) = flex.decompose_app();
        let Term::Meta(id, inst) = h else { return None };
        if self.metas.is_assigned(*id) {
            return None;
        }
        if args.is_empty() {
            return Some(self.assign(ctx, *id, inst, rhs));
        }
        // First-order approximation: ?m a1..an = h b1..bk an'..
        let (rh, rargs) = rhs.decompose_app();
        if rargs.len() < args.len() {
            return None;
        }
        let k = rargs.len() - args.len();
        let saved = self.metas.clone();
        let head = Term::app(rh.clone(), rargs[..k].to_vec());
        if self.assign(ctx, *id, inst, &head) && self.unify_args(ctx, args, &rargs[k..]) {
            Some(true)
        } else {
            *self.metas = saved;
            None
        }
    }

    fn assign(&mut self, ctx: &LocalContext, id: MetaId, inst: &[Term], rhs: &Term) -> bool {
        let rhs = self.metas.instantiate(rhs);
        if self.metas.occurs(id, &rhs) {
            return false;
        }
        let ok = Cell::new(true);
        let value = map_rels(&rhs, 0, &|i, depth| {
            let k = i - depth;
            match inst.iter().position(|t| *t == Term::Rel(k)) {
                Some(p) => Term::Rel(p + depth),
                None => {
                    ok.set(false);
                    Term::Rel(i)
                }
            }
        });
        if !ok.get() {
            return false;
        }
        let expected = self.metas.instance_type(id, inst);
        self.metas.assign(id, value);
        let ty = match self.infer(ctx, &rhs) {
            Ok(ty) => ty,
            Err(_) => return false,
        };
        if self.unify(ctx, &ty, &expected, true) {
            return true;
        }
        // A type hole on the right may live in a smaller universe.
        if let (Term::Meta(j, _), Term::Sort(_), Term::Sort(_)) = (&rhs, &ty, &expected) {
            if !self.metas.is_assigned(*j) {
                self.metas.set_type(*j, expected);
                return true;
            }
        }
        false
    }
}
