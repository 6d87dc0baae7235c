//! Equality tactics: `rewrite`, `reflexivity`, `symmetry`, `subst`.

use std::sync::Arc;

use crate::kernel::term::{abstract_term, anonymous, lift, name, occurs, subst, visit, MetaId, Term};
use crate::kernel::LocalContext;
use crate::surface::ast::{Expr, RewriteDir};
use crate::unify::Unifier;

use super::{fail, ProofState, Result};

impl ProofState {
    /// `(A, l, r)` when `ty` reduces to `l = r` at type `A`.
    pub(crate) fn as_equality(&self, ctx: &LocalContext, ty: &Term) -> Option<(Term, Term, Term)> {
        let w = self.whnf(ctx, ty);
        match (w.head(), w.args()) {
            (Term::Ind(n), [a, l, r]) if n.as_ref() == "eq" => Some((a.clone(), l.clone(), r.clone())),
            _ => None,
        }
    }

    pub(crate) fn rewrite(&mut self, g: MetaId, dir: &RewriteDir, e: &Expr) -> Result<()> {
        let (t, ty) = self.elab(g, e, None)?;
        self.rewrite_with(g, t, ty, dir).map(|_| ())
    }

    /// Rewrite the goal with a proof `t` of a (possibly universally
    /// quantified) equation; returns the rewritten goal.
    pub(crate) fn rewrite_with(&mut self, g: MetaId, t: Term, ty: Term, dir: &RewriteDir) -> Result<MetaId> {
        let ctx = self.ctx(g);
        let concl = self.concl(g);
        let mut cur = ty;
        let mut args = Vec::new();
        let mut premises = Vec::new();
        loop {
            if self.as_equality(&ctx, &cur).is_some() {
                break;
            }
            let p = match &cur {
                Term::Prod(..) => cur.clone(),
                _ => self.whnf(&ctx, &cur),
            };
            let Term::Prod(_, a, b) = p else {
                return fail("rewrite", "the term is not an equality");
            };
            let (pid, m) = self.fresh_goal(&ctx, (*a).clone());
            premises.push(pid);
            cur = subst(&b, &m);
            args.push(m);
        }
        let (a, l, r) = self.as_equality(&ctx, &cur).expect("checked above");
        let from = if *dir == RewriteDir::LeftToRight { &l } else { &r };
        if from.has_metas() && !self.find_instance(&ctx, &concl, from) {
            return fail("rewrite", format!("nothing to rewrite: no subterm matches {}", self.show(&ctx, from)));
        }
        let (a, l, r) = (self.metas.instantiate(&a), self.metas.instantiate(&l), self.metas.instantiate(&r));
        let h = self.metas.instantiate(&Term::app(t, args));
        let (from, to) = if *dir == RewriteDir::LeftToRight { (&l, &r) } else { (&r, &l) };
        if !occurs(&concl, from) {
            return fail("rewrite", format!("nothing to rewrite: {} does not occur", self.show(&ctx, from)));
        }
        let body = abstract_term(&concl, from);
        let (id, m) = self.fresh_goal(&ctx, subst(&body, to));
        let eq_ind = Term::constant("eq_ind");
        let proof = match dir {
            RewriteDir::LeftToRight => {
                // eq_ind A l (fun z => G[z] -> G[l]) (fun p => p) r H ?new
                let q = Term::Lambda(
                    name("z"),
                    Arc::new(a.clone()),
                    Arc::new(Term::Prod(anonymous(), Arc::new(body), Arc::new(lift(&concl, 2, 0)))),
                );
                let id_fn = Term::Lambda(name("p"), Arc::new(concl.clone()), Arc::new(Term::Rel(0)));
                Term::app(eq_ind, vec![a, l, q, id_fn, r, h, m])
            }
            RewriteDir::RightToLeft => {
                let p = Term::Lambda(name("z"), Arc::new(a.clone()), Arc::new(body));
                Term::app(eq_ind, vec![a, l, p, m, r, h])
            }
        };
        self.close(g, proof, "rewrite")?;
        // Side conditions come after the rewritten goal.
        self.defer(&premises);
        Ok(id)
    }

    /// Instantiate the metas of `pat` by the first subterm of `t` (outermost,
    /// left to right) it unifies with.
    fn find_instance(&mut self, ctx: &LocalContext, t: &Term, pat: &Term) -> bool {
        let mut cands = Vec::new();
        visit(t, 0, &mut |u, depth| {
            let compatible = match (pat.head(), u.head()) {
                (Term::Meta(..), _) => true,
                (h1, h2) => h1 == h2,
            };
            if compatible && (0..depth).all(|i| !u.has_rel(i)) {
                cands.push(lift(u, -(depth as isize), 0));
            }
            true
        });
        for c in cands {
            if Unifier::new(&self.env, &mut self.metas).unify(ctx, &c, pat, false) {
                return true;
            }
        }
        false
    }

    pub(crate) fn reflexivity(&mut self, g: MetaId) -> Result<()> {
        let ctx = self.ctx(g);
        let Some((a, l, _)) = self.as_equality(&ctx, &self.concl(g)) else {
            return fail("reflexivity", "the goal is not an equality");
        };
        let proof = Term::app(Term::construct("eq", 1), vec![a, l]);
        self.close(g, proof, "reflexivity")
    }

    pub(crate) fn symmetry(&mut self, g: MetaId) -> Result<()> {
        let ctx = self.ctx(g);
        let Some((a, l, r)) = self.as_equality(&ctx, &self.concl(g)) else {
            return fail("symmetry", "the goal is not an equality");
        };
        let flipped = Term::app(Term::ind("eq"), vec![a.clone(), r.clone(), l.clone()]);
        let (_, m) = self.fresh_goal(&ctx, flipped);
        // eq_ind A r (fun z => z = r) (eq_refl A r) l ?h : l = r
        let pred = Term::Lambda(
            name("z"),
            Arc::new(a.clone()),
            Arc::new(Term::app(Term::ind("eq"), vec![lift(&a, 1, 0), Term::Rel(0), lift(&r, 1, 0)])),
        );
        let refl = Term::app(Term::construct("eq", 1), vec![a.clone(), r.clone()]);
        let proof = Term::app(Term::constant("eq_ind"), vec![a, r, pred, refl, l, m]);
        self.close(g, proof, "symmetry")
    }

    /// `subst x`: use a hypothesis `x = t` or `t = x` to replace `x` in the
    /// goal, then drop the hypothesis (and `x` when nothing else uses it).
    pub(crate) fn subst(&mut self, g: MetaId, names: &[String]) -> Result<()> {
        let mut g = g;
        for x in names {
            let ctx = self.ctx(g);
            let v = self.hyp(&ctx, x)?;
            let mut found = None;
            for i in 0..ctx.len() {
                let ty = ctx.type_of(i).expect("in context");
                if let Some((_, l, r)) = self.as_equality(&ctx, &ty) {
                    if l == Term::Rel(v) && !r.has_rel(v) {
                        found = Some((i, ty, RewriteDir::LeftToRight));
                    } else if r == Term::Rel(v) && !l.has_rel(v) {
                        found = Some((i, ty, RewriteDir::RightToLeft));
                    }
                }
                if found.is_some() {
                    break;
                }
            }
            let Some((i, ty, dir)) = found else {
                return fail("subst", format!("no equation for {x}"));
            };
            g = if occurs(&self.concl(g), &Term::Rel(v)) { self.rewrite_with(g, Term::Rel(i), ty, &dir)? } else { g };
            g = self.clear_hyp(g, i)?;
            let ctx = self.ctx(g);
            if let Some(v) = ctx.index_of(x) {
                if let Ok(h) = self.clear_hyp(g, v) {
                    g = h;
                }
            }
        }
        Ok(())
    }
}
