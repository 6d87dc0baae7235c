//! Case analysis and induction: `elim`, `case`, `destruct`, `induction`.

use std::sync::Arc;

use crate::kernel::inductive::{close_lambda, scheme_name};
use crate::kernel::term::{abstract_term, is_anonymous, name, subst, substl, MetaId, Sort, Term};
use crate::kernel::typing::{branch_type, instantiate_prod};
use crate::kernel::InductiveInfo;
use crate::reduction::{beta_normalize, reduce_to_inductive};
use crate::surface::ast::{Expr, IntroPattern};
use crate::surface::matching::base_name;

use super::{fail, ProofState, Result};

/// What we know about the term being analysed.
struct Target {
    t: Term,
    info: Arc<InductiveInfo>,
    params: Vec<Term>,
    indices: Vec<Term>,
}

impl ProofState {
    fn target(&mut self, g: MetaId, t: Term, tactic: &str) -> Result<Target> {
        let ctx = self.ctx(g);
        let ty = self.infer(&ctx, &t)?;
        let Some((ind, args)) = reduce_to_inductive(&self.env, &ctx, &ty) else {
            return fail(tactic, format!("{} is not of an inductive type", self.show(&ctx, &t)));
        };
        let info = self.env.inductive(&ind).expect("inductive").clone();
        let (params, indices) = args.split_at(info.nparams());
        Ok(Target { t, params: params.to_vec(), indices: indices.to_vec(), info })
    }

    /// `fun indices [x] => goal` with the target and its indices abstracted.
    fn motive(&self, g: MetaId, tg: &Target, dependent: bool) -> Term {
        let ni = tg.indices.len();
        let phs: Vec<Term> = (0..=ni).map(|k| Term::Const(name(&format!("\u{0}m{k}")))).collect();
        let mut body = self.concl(g);
        if dependent {
            body = subst(&abstract_term(&body, &tg.t), &phs[ni]);
        }
        for (k, idx) in tg.indices.iter().enumerate() {
            body = subst(&abstract_term(&body, idx), &phs[k]);
        }
        let arity = instantiate_prod(&tg.info.ty, &tg.params);
        let (idx_bs, _) = arity.decompose_prod();
        let mut binders = Vec::new();
        for (k, (n, ty)) in idx_bs.iter().enumerate() {
            let prev: Vec<Term> = phs[..k].iter().rev().cloned().collect();
            binders.push((n.clone(), phs[k].clone(), substl(ty, &prev)));
        }
        if dependent {
            let mut args = tg.params.clone();
            args.extend(phs[..ni].iter().cloned());
            binders.push((name("x"), phs[ni].clone(), Term::app(Term::Ind(tg.info.name.clone()), args)));
        }
        close_lambda(&binders, body)
    }

    /// Apply the induction scheme; returns one goal per constructor.
    pub(crate) fn elim_term(&mut self, g: MetaId, t: Term) -> Result<Vec<MetaId>> {
        let tg = self.target(g, t, "elim")?;
        let scheme = scheme_name(&tg.info.name);
        let Some(sty) = self.env.const_type(&scheme).cloned() else {
            return fail("elim", format!("no induction scheme for {}", tg.info.name));
        };
        let dependent = tg.info.sort != Sort::Prop;
        let motive = self.motive(g, &tg, dependent);
        let mut args = tg.params.clone();
        args.push(motive);
        let mut rest = instantiate_prod(&sty, &args);
        let ctx = self.ctx(g);
        let mut goals = Vec::new();
        for _ in 0..tg.info.ctors.len() {
            let Term::Prod(_, a, b) = rest else { unreachable!("scheme premises") };
            let (id, m) = self.fresh_goal(&ctx, beta_normalize(&a));
            goals.push(id);
            args.push(m.clone());
            rest = subst(&b, &m);
        }
        args.extend(tg.indices.iter().cloned());
        args.push(tg.t.clone());
        self.close(g, Term::app(Term::constant(&scheme), args), "elim")?;
        Ok(goals)
    }

    /// A match whose branches are new goals, one per constructor.
    pub(crate) fn case_term(&mut self, g: MetaId, t: Term) -> Result<Vec<MetaId>> {
        let tg = self.target(g, t, "case")?;
        let motive = self.motive(g, &tg, true);
        let ctx = self.ctx(g);
        let mut goals = Vec::new();
        let mut branches = Vec::new();
        for j in 1..=tg.info.ctors.len() {
            let bty = branch_type(&self.env, &tg.info.name, &tg.params, &motive, j).expect("constructor");
            let bty = self.name_fields(&beta_normalize(&bty));
            let (id, m) = self.fresh_goal(&ctx, bty);
            goals.push(id);
            branches.push(m);
        }
        let proof = Term::mk_match(tg.info.name.clone(), tg.t.clone(), motive, branches);
        self.close(g, proof, "case")?;
        Ok(goals)
    }

    /// Give anonymous but used product binders a name from their type.
    fn name_fields(&self, t: &Term) -> Term {
        match t {
            Term::Prod(n, a, b) => {
                let n = if is_anonymous(n) && b.has_rel(0) { name(&base_name(&self.env, a)) } else { n.clone() };
                Term::Prod(n, a.clone(), Arc::new(self.name_fields(b)))
            }
            _ => t.clone(),
        }
    }

    /// Apply `t` to new goals for the premises of its type until it is
    /// of an inductive type.
    fn saturate(&mut self, g: MetaId, mut t: Term) -> Result<(Term, Vec<MetaId>)> {
        let ctx = self.ctx(g);
        let mut ty = self.infer(&ctx, &t)?;
        let mut premises = Vec::new();
        while reduce_to_inductive(&self.env, &ctx, &ty).is_none() {
            let Term::Prod(_, a, b) = self.whnf(&ctx, &ty) else { break };
            let (id, m) = self.fresh_goal(&ctx, (*a).clone());
            premises.push(id);
            t = Term::app(t, vec![m.clone()]);
            ty = subst(&b, &m);
        }
        Ok((t, premises))
    }

    /// Move premise goals after the goals created since: each is solved
    /// by a fresh hole with the same statement.
    pub(crate) fn defer(&mut self, premises: &[MetaId]) {
        for id in premises {
            if !self.metas.is_assigned(*id) {
                let info = self.metas.info(*id).clone();
                let (_, m) = self.fresh_goal(&info.ctx, info.ty);
                self.metas.assign(*id, m);
            }
        }
    }

    pub(crate) fn elim(&mut self, g: MetaId, e: &Expr) -> Result<()> {
        let (t, _) = self.elab(g, e, None)?;
        let (t, premises) = self.saturate(g, t)?;
        self.elim_term(g, t)?;
        self.defer(&premises);
        Ok(())
    }

    pub(crate) fn case(&mut self, g: MetaId, e: &Expr) -> Result<()> {
        let (t, _) = self.elab(g, e, None)?;
        let (t, premises) = self.saturate(g, t)?;
        self.case_term(g, t)?;
        self.defer(&premises);
        Ok(())
    }

    pub(crate) fn destruct(&mut self, g: MetaId, e: &Expr, pat: Option<&IntroPattern>) -> Result<()> {
        let (t, _) = self.elab(g, e, None)?;
        let (t, premises) = self.saturate(g, t)?;
        self.destruct_term(g, t, pat)?;
        self.defer(&premises);
        Ok(())
    }

    /// Case analysis followed by introduction of the constructor fields,
    /// named after `pat` when given. A destructed variable is cleared.
    pub(crate) fn destruct_term(&mut self, g: MetaId, t: Term, pat: Option<&IntroPattern>) -> Result<Vec<MetaId>> {
        let ctx = self.ctx(g);
        let var = match &t {
            Term::Rel(p) => Some((*p, ctx.entries()[ctx.len() - 1 - p].name.to_string())),
            _ => None,
        };
        let ind = self.target(g, t.clone(), "destruct")?.info;
        let alts: Vec<Vec<IntroPattern>> = match pat {
            None => vec![Vec::new(); ind.ctors.len()],
            Some(IntroPattern::Or(alts)) if alts.len() == ind.ctors.len() => alts.clone(),
            Some(IntroPattern::Or(alts)) if alts.len() == 1 && ind.ctors.is_empty() => Vec::new(),
            Some(IntroPattern::Name(_) | IntroPattern::Wild) => vec![Vec::new(); ind.ctors.len()],
            Some(_) => {
                return fail(
                    "destruct",
                    format!("the pattern does not match the {} constructor(s) of {}", ind.ctors.len(), ind.name),
                )
            }
        };
        let branches = self.case_term(g, t)?;
        let mut out = Vec::new();
        for (j, mut h) in branches.into_iter().enumerate() {
            if let Some((p, _)) = &var {
                if let Ok(h2) = self.clear_hyp(h, *p) {
                    h = h2;
                }
            }
            let fields = self.field_plan(&ind, j, var.as_ref().map(|v| v.1.as_str()), false);
            out.extend(self.intro_fields(h, &fields, &alts[j])?);
        }
        Ok(out)
    }

    /// Default names for the fields of constructor `j` (0-based), and for
    /// the induction hypotheses when `with_ih`.
    fn field_plan(&self, ind: &InductiveInfo, j: usize, var: Option<&str>, with_ih: bool) -> Vec<FieldName> {
        let c = &ind.ctors[j];
        let (fields, _) = c.ty.decompose_prod();
        let fields = &fields[ind.nparams()..];
        let is_rec = |ty: &Term| matches!(ty.decompose_prod().1.head(), Term::Ind(n) if *n == ind.name);
        let nrec = fields.iter().filter(|f| is_rec(&f.1)).count();
        let mut out = Vec::new();
        let mut k = 0;
        for (n, ty) in fields {
            let rec = is_rec(ty);
            let base = match var {
                Some(v) if rec && nrec == 1 => Some(v.to_string()),
                Some(v) if rec => {
                    k += 1;
                    let sep = if v.ends_with(|c: char| c.is_ascii_digit()) { "_" } else { "" };
                    Some(format!("{v}{sep}{k}"))
                }
                _ if !is_anonymous(n) => Some(n.to_string()),
                _ => None,
            };
            out.push(FieldName::Field(base));
            if rec && with_ih {
                out.push(FieldName::Ih);
            }
        }
        out
    }

    /// Introduce the planned binders, taking names from `pats` first.
    fn intro_fields(&mut self, g: MetaId, plan: &[FieldName], pats: &[IntroPattern]) -> Result<Vec<MetaId>> {
        if pats.len() > plan.len() {
            return fail("destruct", "too many names in the pattern");
        }
        let mut goals = vec![g];
        let mut last_field = String::new();
        for (k, f) in plan.iter().enumerate() {
            let mut next = Vec::new();
            for h in goals {
                if let Some(p) = pats.get(k) {
                    next.extend(self.intro_pattern(h, p)?);
                    if let IntroPattern::Name(x) = p {
                        last_field = x.clone();
                    }
                    continue;
                }
                let ctx = self.ctx(h);
                let x = match f {
                    FieldName::Field(Some(b)) => Self::fresh_hyp(&ctx, b),
                    FieldName::Field(None) => {
                        let c = self.concl(h);
                        match self.whnf(&ctx, &c) {
                            Term::Prod(n, a, _) => self.default_name(&ctx, &n, &a),
                            _ => return fail("destruct", "missing constructor field"),
                        }
                    }
                    FieldName::Ih => Self::fresh_hyp(&ctx, &format!("IH{last_field}")),
                };
                if matches!(f, FieldName::Field(_)) {
                    last_field = x.clone();
                }
                next.push(self.intro(h, Some(&x))?);
            }
            goals = next;
        }
        Ok(goals)
    }

    /// `induction x`: elim on a variable, then name fields and hypotheses.
    pub(crate) fn induction(&mut self, g: MetaId, e: &Expr) -> Result<()> {
        let (t, _) = self.elab(g, e, None)?;
        let ctx = self.ctx(g);
        let Term::Rel(p) = t else {
            return fail("induction", "induction is only supported on a variable");
        };
        let v = ctx.entries()[ctx.len() - 1 - p].name.to_string();
        let ind = self.target(g, t.clone(), "induction")?.info;
        let premises = self.elim_term(g, t)?;
        for (j, mut h) in premises.into_iter().enumerate() {
            if let Ok(h2) = self.clear_hyp(h, p) {
                h = h2;
            }
            let plan = self.field_plan(&ind, j, Some(&v), true);
            self.intro_fields(h, &plan, &[])?;
        }
        Ok(())
    }
}

enum FieldName {
    Field(Option<String>),
    Ih,
}
