//! Introduction, application and bookkeeping tactics.

use std::sync::Arc;

use crate::kernel::term::{anonymous, is_anonymous, lift, map_term, name, subst, MetaId, Name, Term};
use crate::kernel::typing::instantiate_prod;
use crate::kernel::{LocalContext, LocalDecl};
use crate::meta::identity_instance;
use crate::reduction::{beta_normalize, simpl};
use crate::surface::ast::{Expr, IntroPattern};
use crate::surface::elab::Elaborator;
use crate::surface::matching::base_name;

use super::{fail, EngineError, ProofState, Result};

impl ProofState {
    /// Introduce one product binder; returns the new goal.
    pub(crate) fn intro(&mut self, g: MetaId, x: Option<&str>) -> Result<MetaId> {
        let ctx = self.ctx(g);
        let concl = self.concl(g);
        let p = match &concl {
            Term::Prod(..) => concl.clone(),
            _ => self.whnf(&ctx, &concl),
        };
        let Term::Prod(n, a, b) = p else {
            return fail("intro", "no product or implication to introduce");
        };
        let hname = match x {
            Some(x) if ctx.index_of(x).is_some() => return fail("intro", format!("{x} is already used")),
            Some(x) => x.to_string(),
            None => self.default_name(&ctx, &n, &a),
        };
        let inner = ctx.with(name(&hname), (*a).clone());
        let (id, m) = self.fresh_goal(&inner, (*b).clone());
        self.metas.assign(g, Term::Lambda(name(&hname), a, Arc::new(m)));
        Ok(id)
    }

    /// Name for an anonymous or named binder of type `a`.
    pub(crate) fn default_name(&mut self, ctx: &LocalContext, n: &Name, a: &Term) -> String {
        let base = if !is_anonymous(n) {
            n.to_string()
        } else if self.is_prop(ctx, a) {
            "H".to_string()
        } else {
            base_name(&self.env, a)
        };
        Self::fresh_hyp(ctx, &base)
    }

    pub(crate) fn intros(&mut self, g: MetaId, pats: &[IntroPattern]) -> Result<()> {
        if pats.is_empty() {
            let mut cur = g;
            loop {
                let ctx = self.ctx(cur);
                let c = self.concl(cur);
                if !matches!(self.whnf(&ctx, &c), Term::Prod(..)) {
                    return Ok(());
                }
                cur = self.intro(cur, None)?;
            }
        }
        let mut goals = vec![g];
        for p in pats {
            let mut next = Vec::new();
            for h in goals {
                next.extend(self.intro_pattern(h, p)?);
            }
            goals = next;
        }
        Ok(())
    }

    pub(crate) fn intro_pattern(&mut self, g: MetaId, p: &IntroPattern) -> Result<Vec<MetaId>> {
        match p {
            IntroPattern::Name(x) => Ok(vec![self.intro(g, Some(x))?]),
            IntroPattern::Wild => {
                let h = self.intro(g, None)?;
                Ok(vec![self.clear_hyp(h, 0)?])
            }
            IntroPattern::Or(_) => {
                let h = self.intro(g, None)?;
                self.destruct_term(h, Term::Rel(0), Some(p))
            }
        }
    }

    pub(crate) fn exact(&mut self, g: MetaId, e: &Expr) -> Result<()> {
        let ty = self.concl(g);
        let mark = self.metas.len();
        let (t, _) = self.elab(g, e, Some(&ty))?;
        let t = self.metas.instantiate(&t);
        if self.metas.unsolved_in(&t).iter().any(|m| *m >= mark) {
            return fail("exact", "cannot infer all the arguments of the term");
        }
        self.close(g, t, "exact")
    }

    pub(crate) fn assumption(&mut self, g: MetaId) -> Result<()> {
        let ctx = self.ctx(g);
        let concl = self.concl(g);
        for i in 0..ctx.len() {
            let ty = ctx.type_of(i).expect("in context");
            if self.unify(&ctx, &ty, &concl) {
                return self.close(g, Term::Rel(i), "assumption");
            }
        }
        fail("assumption", "no hypothesis matches the goal")
    }

    pub(crate) fn apply_expr(&mut self, g: MetaId, e: &Expr, with: &[Expr]) -> Result<()> {
        let (t, ty) = self.elab(g, e, None)?;
        self.apply_term(g, t, ty, with, "apply")
    }

    /// Unify the conclusion of `ty` (after 0, 1, .. premises) with the goal;
    /// premises not solved by unification become new goals.
    pub(crate) fn apply_term(&mut self, g: MetaId, t: Term, ty: Term, with: &[Expr], tactic: &str) -> Result<()> {
        let ctx = self.ctx(g);
        let goal = self.concl(g);
        let saved = self.metas.clone();
        let mut last = ty.clone();
        for k in 0..=64 {
            self.metas = saved.clone();
            let mut cur = ty.clone();
            let mut args = Vec::new();
            let mut holes = Vec::new();
            let mut ok = true;
            for _ in 0..k {
                let p = match &cur {
                    Term::Prod(..) => cur.clone(),
                    _ => self.whnf(&ctx, &cur),
                };
                match p {
                    Term::Prod(_, a, b) => {
                        let (id, m) = self.fresh_goal(&ctx, (*a).clone());
                        holes.push((id, b.has_rel(0)));
                        cur = subst(&b, &m);
                        args.push(m);
                    }
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                break;
            }
            last = cur.clone();
            if self.unify(&ctx, &cur, &goal) {
                if !with.is_empty() {
                    let deps: Vec<MetaId> =
                        holes.iter().filter(|(id, dep)| *dep && !self.metas.is_assigned(*id)).map(|h| h.0).collect();
                    if with.len() > deps.len() {
                        self.metas = saved;
                        return fail(tactic, "too many bindings in the with clause");
                    }
                    for (w, m) in with.iter().zip(deps) {
                        let mty = self.metas.instantiate(&self.metas.info(m).ty);
                        let (wt, _) = self.elab(g, w, Some(&mty))?;
                        let mv = Term::Meta(m, identity_instance(ctx.len()).into());
                        if !self.unify(&ctx, &mv, &wt) {
                            self.metas = saved;
                            return fail(tactic, "a binding does not fit");
                        }
                    }
                }
                return self.close(g, Term::app(t, args), tactic);
            }
        }
        let err = EngineError::UnificationFailure(self.show(&ctx, &last), self.show(&ctx, &goal));
        self.metas = saved;
        Err(err)
    }

    /// Apply constructor `j` of the goal's inductive type (which must have
    /// `nctors` constructors, or exactly one when `None`).
    pub(crate) fn constructor(&mut self, g: MetaId, tactic: &str, nctors: Option<usize>, j: usize) -> Result<()> {
        let mut g = g;
        while let Term::Prod(..) = self.concl(g) {
            g = self.intro(g, None)?;
        }
        let ctx = self.ctx(g);
        let w = self.whnf(&ctx, &self.concl(g));
        let Term::Ind(ind) = w.head() else {
            return fail(tactic, "the goal is not an inductive type");
        };
        let info = self.env.inductive(ind).expect("inductive").clone();
        let expected = nctors.unwrap_or(1);
        if info.ctors.len() != expected {
            return fail(tactic, format!("{} does not have {expected} constructor(s)", info.name));
        }
        let params = w.args()[..info.nparams()].to_vec();
        let cty = instantiate_prod(&info.ctors[j - 1].ty, &params);
        let c = Term::app(Term::Construct(info.name.clone(), j), params);
        self.apply_term(g, c, cty, &[], tactic)
    }

    pub(crate) fn exists(&mut self, g: MetaId, vs: &[Expr]) -> Result<()> {
        let mut g = g;
        while let Term::Prod(..) = self.concl(g) {
            g = self.intro(g, None)?;
        }
        for v in vs {
            let ctx = self.ctx(g);
            let w = self.whnf(&ctx, &self.concl(g));
            let info = match w.head() {
                Term::Ind(i) => self.env.inductive(i).cloned(),
                _ => None,
            };
            let Some(info) = info.filter(|i| i.ctors.len() == 1 && i.nparams() == 2) else {
                return fail("exists", "the goal is not an existential statement");
            };
            let (a, p) = (w.args()[0].clone(), w.args()[1].clone());
            let (vt, _) = self.elab(g, v, Some(&a))?;
            let body = beta_normalize(&Term::app(p.clone(), vec![vt.clone()]));
            let (id, m) = self.fresh_goal(&ctx, body);
            let proof = Term::app(Term::Construct(info.name.clone(), 1), vec![a, p, vt, m]);
            self.close(g, proof, "exists")?;
            g = id;
        }
        Ok(())
    }

    pub(crate) fn elab_prop(&mut self, g: MetaId, e: &Expr) -> Result<Term> {
        let ctx = self.ctx(g);
        let mut el = Elaborator::new(&self.env, &mut self.metas);
        let (t, _) = el.elab_type(&ctx, e)?;
        Ok(el.finish(&t)?)
    }

    /// `assert (H : P)`: first prove `P`, then the goal with `H : P`.
    pub(crate) fn assert(&mut self, g: MetaId, h: Option<&str>, e: &Expr) -> Result<()> {
        let ctx = self.ctx(g);
        let p = self.elab_prop(g, e)?;
        let hname = match h {
            Some(h) if ctx.index_of(h).is_some() => return fail("assert", format!("{h} is already used")),
            Some(h) => h.to_string(),
            None => Self::fresh_hyp(&ctx, "H"),
        };
        let (_, m1) = self.fresh_goal(&ctx, p.clone());
        let concl = lift(&self.concl(g), 1, 0);
        let (_, m2) = self.fresh_goal(&ctx.with(name(&hname), p.clone()), concl);
        let proof = Term::app(Term::Lambda(name(&hname), Arc::new(p), Arc::new(m2)), vec![m1]);
        self.close(g, proof, "assert")
    }

    /// Replace the goal by a convertible statement.
    pub(crate) fn change(&mut self, g: MetaId, new: Term, tactic: &str) -> Result<MetaId> {
        let ctx = self.ctx(g);
        let (id, m) = self.fresh_goal(&ctx, new);
        self.close(g, m, tactic)?;
        Ok(id)
    }

    pub(crate) fn simpl(&mut self, g: MetaId) -> Result<()> {
        let ctx = self.ctx(g);
        let s = simpl(&self.env, &ctx, &self.concl(g));
        self.change(g, s, "simpl").map(|_| ())
    }

    pub(crate) fn unfold(&mut self, g: MetaId, names: &[String]) -> Result<()> {
        let mut t = self.concl(g);
        for n in names {
            let body = match self.env.lookup(n) {
                Some(crate::kernel::GlobalRef::Const(_)) => self.env.const_body(n).cloned(),
                _ => None,
            };
            let Some(body) = body else {
                return fail("unfold", format!("{n} is not a transparent definition"));
            };
            let target = Term::constant(n);
            t = map_term(&t, 0, &|u, _| if *u == target { Some(body.clone()) } else { None });
        }
        let t = beta_normalize(&t);
        self.change(g, t, "unfold").map(|_| ())
    }

    pub(crate) fn clear_names(&mut self, g: MetaId, names: &[String]) -> Result<()> {
        let mut g = g;
        for n in names {
            let ctx = self.ctx(g);
            let p = self.hyp(&ctx, n)?;
            g = self.clear_hyp(g, p)?;
        }
        Ok(())
    }

    /// Remove hypothesis `Rel(p)` from the goal's context; returns the new
    /// goal. Fails when something else still mentions it.
    pub(crate) fn clear_hyp(&mut self, g: MetaId, p: usize) -> Result<MetaId> {
        let ctx = self.ctx(g);
        let concl = self.concl(g);
        let n = ctx.len();
        let k = n - 1 - p;
        let hname = ctx.entries()[k].name.to_string();
        if concl.has_rel(p) {
            return fail("clear", format!("{hname} is used in the conclusion"));
        }
        let mut nctx = LocalContext::new();
        for (j, d) in ctx.entries().iter().enumerate() {
            if j < k {
                nctx.push_decl(d.clone());
            } else if j > k {
                let rel = j - k - 1;
                if d.ty.has_rel(rel) || d.body.as_ref().is_some_and(|b| b.has_rel(rel)) {
                    return fail("clear", format!("{hname} is used in the hypothesis {}", d.name));
                }
                nctx.push_decl(LocalDecl {
                    name: d.name.clone(),
                    ty: lift(&d.ty, -1, rel),
                    body: d.body.as_ref().map(|b| lift(b, -1, rel)),
                });
            }
        }
        let inst: Vec<Term> = (0..n - 1).map(|i| if i < p { Term::Rel(i) } else { Term::Rel(i + 1) }).collect();
        let (id, m) = self.metas.fresh_with(&nctx, lift(&concl, -1, p), inst);
        self.metas.assign(g, m);
        Ok(id)
    }

    /// Eliminate a proof of an empty inductive type into the goal.
    pub(crate) fn absurd(&self, g: MetaId, ind: &Name, proof: Term) -> Term {
        let concl = self.concl(g);
        let pred = Term::Lambda(anonymous(), Arc::new(Term::Ind(ind.clone())), Arc::new(lift(&concl, 1, 0)));
        Term::mk_match(ind.clone(), proof, pred, Vec::new())
    }

    /// The empty inductive a type reduces to, if any (no indices).
    pub(crate) fn empty_inductive(&self, ctx: &LocalContext, ty: &Term) -> Option<Name> {
        match self.whnf(ctx, ty) {
            Term::Ind(i) => self.env.inductive(&i).filter(|info| info.ctors.is_empty()).map(|_| i),
            _ => None,
        }
    }

    pub(crate) fn contradiction(&mut self, g: MetaId) -> Result<()> {
        let ctx = self.ctx(g);
        for i in 0..ctx.len() {
            let ty = ctx.type_of(i).expect("in context");
            if let Some(ind) = self.empty_inductive(&ctx, &ty) {
                let proof = self.absurd(g, &ind, Term::Rel(i));
                return self.close(g, proof, "contradiction");
            }
        }
        for i in 0..ctx.len() {
            let ty = ctx.type_of(i).expect("in context");
            let Term::Prod(_, a, b) = self.whnf(&ctx, &ty) else { continue };
            if b.has_rel(0) {
                continue;
            }
            let Some(ind) = self.empty_inductive(&ctx, &lift(&b, -1, 0)) else { continue };
            for j in 0..ctx.len() {
                let tj = ctx.type_of(j).expect("in context");
                if self.unify(&ctx, &tj, &a) {
                    let proof = self.absurd(g, &ind, Term::app(Term::Rel(i), vec![Term::Rel(j)]));
                    return self.close(g, proof, "contradiction");
                }
            }
        }
        fail("contradiction", "no contradictory hypotheses")
    }
}
