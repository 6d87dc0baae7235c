//! Goal-directed proving. A proof state is a partial proof term whose holes
//! are the open goals; tactics refine one hole at a time and `Qed` hands the
//! finished term back to the kernel.

mod basic;
mod cases;
mod rewrite;

use std::sync::Arc;

use thiserror::Error;

use crate::decide::DecideError;
use crate::kernel::inductive::fresh_name;
use crate::kernel::term::{name, MetaId, Sort, Term};
use crate::kernel::typing::{add_oracle, check, check_proof, infer_sort_of, KernelError, ProofReport};
use crate::kernel::{Decl, GlobalEnv, LocalContext, LocalDecl, OracleKind};
use crate::meta::{identity_instance, MetaCtx};
use crate::reduction::{beta_normalize, whnf_all};
use crate::surface::ast::{Expr, Tactic};
use crate::surface::elab::{ElabError, Elaborator};
use crate::surface::print::print_in;
use crate::unify::Unifier;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("no more subgoals")]
    NoGoals,
    #[error("{tactic} failed: {reason}")]
    TacticFailure { tactic: String, reason: String },
    #[error("no hypothesis named {0}")]
    NoSuchHypothesis(String),
    #[error("unable to unify \"{0}\" with \"{1}\"")]
    UnificationFailure(String, String),
    #[error("{0}")]
    Elab(#[from] ElabError),
    #[error("the statement {0} is not a type")]
    IllTypedStatement(String),
    #[error("{0} already exists")]
    NameClash(String),
    #[error("{0} subgoal(s) remain unproved")]
    OpenGoalsRemain(usize),
    #[error("the kernel rejected the proof: {0}")]
    KernelRejection(KernelError),
    #[error("nothing to undo")]
    NothingToUndo,
    #[error("{0}")]
    Decide(#[from] DecideError),
}

pub type Result<T> = std::result::Result<T, EngineError>;

pub(crate) fn fail<T>(tactic: &str, reason: impl Into<String>) -> Result<T> {
    Err(EngineError::TacticFailure { tactic: tactic.to_string(), reason: reason.into() })
}

/// One open goal as displayed: hypotheses (name, body, type) and conclusion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoalView {
    pub id: MetaId,
    pub hyps: Vec<(String, Option<String>, String)>,
    pub conclusion: String,
}

#[derive(Clone, Debug)]
struct Snapshot {
    env: GlobalEnv,
    metas: MetaCtx,
    goals: Vec<MetaId>,
    oracles: usize,
}

#[derive(Clone, Debug)]
pub struct ProofState {
    pub name: String,
    pub statement: Term,
    /// The session environment plus oracle lemmas created so far.
    pub(crate) env: GlobalEnv,
    pub(crate) metas: MetaCtx,
    root: MetaId,
    goals: Vec<MetaId>,
    history: Vec<Snapshot>,
    oracles: usize,
}

impl ProofState {
    pub fn start(env: &GlobalEnv, thm: &str, statement: Term) -> Result<ProofState> {
        if env.contains(thm) {
            return Err(EngineError::NameClash(thm.to_string()));
        }
        let empty = LocalContext::new();
        if infer_sort_of(env, &empty, &statement).is_err() {
            return Err(EngineError::IllTypedStatement(print_in(env, &empty, &statement)));
        }
        let mut metas = MetaCtx::new();
        let (root, _) = metas.fresh(&empty, statement.clone());
        Ok(ProofState {
            name: thm.to_string(),
            statement,
            env: env.clone(),
            metas,
            root,
            goals: vec![root],
            history: Vec::new(),
            oracles: 0,
        })
    }

    pub fn env(&self) -> &GlobalEnv {
        &self.env
    }

    pub fn goal_count(&self) -> usize {
        self.goals.len()
    }

    pub fn is_complete(&self) -> bool {
        self.goals.is_empty()
    }

    fn snapshot(&self) -> Snapshot {
        Snapshot { env: self.env.clone(), metas: self.metas.clone(), goals: self.goals.clone(), oracles: self.oracles }
    }

    fn restore(&mut self, s: Snapshot) {
        self.env = s.env;
        self.metas = s.metas;
        self.goals = s.goals;
        self.oracles = s.oracles;
    }

    /// Run `tac` on the focused goal. On failure the state is unchanged.
    pub fn apply(&mut self, tac: &Tactic) -> Result<()> {
        let g = *self.goals.first().ok_or(EngineError::NoGoals)?;
        let snap = self.snapshot();
        match self.run(tac, g) {
            Ok(new) => {
                let mut goals = new;
                goals.extend(self.goals[1..].iter().copied());
                let mut seen = Vec::new();
                goals.retain(|m| {
                    let keep = !self.metas.is_assigned(*m) && !seen.contains(m);
                    seen.push(*m);
                    keep
                });
                self.goals = goals;
                self.history.push(snap);
                Ok(())
            }
            Err(e) => {
                self.restore(snap);
                Err(e)
            }
        }
    }

    pub fn undo(&mut self) -> Result<()> {
        let s = self.history.pop().ok_or(EngineError::NothingToUndo)?;
        self.restore(s);
        Ok(())
    }

    fn run(&mut self, tac: &Tactic, g: MetaId) -> Result<Vec<MetaId>> {
        match tac {
            Tactic::Seq(a, b) => {
                let mut out = Vec::new();
                for h in self.run(a, g)? {
                    if !self.metas.is_assigned(h) {
                        out.extend(self.run(b, h)?);
                    }
                }
                Ok(out)
            }
            Tactic::Try(t) => {
                let snap = self.snapshot();
                match self.run(t, g) {
                    Ok(v) => Ok(v),
                    Err(_) => {
                        self.restore(snap);
                        Ok(vec![g])
                    }
                }
            }
            Tactic::Repeat(t) => self.repeat(t, g, 0),
            Tactic::Idtac => Ok(vec![g]),
            _ => {
                let mark = self.metas.len();
                self.step(tac, g)?;
                Ok(self.new_goals(g, mark))
            }
        }
    }

    fn repeat(&mut self, t: &Tactic, g: MetaId, depth: usize) -> Result<Vec<MetaId>> {
        if depth > 200 {
            return Ok(vec![g]);
        }
        let snap = self.snapshot();
        match self.run(t, g) {
            Ok(v) if v != [g] => {
                let mut out = Vec::new();
                for h in v {
                    if !self.metas.is_assigned(h) {
                        out.extend(self.repeat(t, h, depth + 1)?);
                    }
                }
                Ok(out)
            }
            _ => {
                self.restore(snap);
                Ok(vec![g])
            }
        }
    }

    /// Holes created since `mark` that the refinement of `g` still needs,
    /// in creation order, with beta-normalized statements.
    pub(crate) fn new_goals(&mut self, g: MetaId, mark: usize) -> Vec<MetaId> {
        if !self.metas.is_assigned(g) {
            return vec![g];
        }
        let n = self.metas.info(g).ctx.len();
        let v = Term::Meta(g, identity_instance(n).into());
        let mut out: Vec<MetaId> = self.metas.unsolved_in(&v).into_iter().filter(|m| *m >= mark).collect();
        out.sort_unstable();
        for m in &out {
            let ty = beta_normalize(&self.metas.instantiate(&self.metas.info(*m).ty));
            self.metas.set_type(*m, ty);
        }
        out
    }

    fn step(&mut self, tac: &Tactic, g: MetaId) -> Result<()> {
        match tac {
            Tactic::Intro(x) => self.intro(g, x.as_deref()).map(|_| ()),
            Tactic::Intros(ps) => self.intros(g, ps),
            Tactic::Exact(e) => self.exact(g, e),
            Tactic::Assumption => self.assumption(g),
            Tactic::Apply(e, with) => self.apply_expr(g, e, with),
            Tactic::Split => self.constructor(g, "split", None, 1),
            Tactic::Left => self.constructor(g, "left", Some(2), 1),
            Tactic::Right => self.constructor(g, "right", Some(2), 2),
            Tactic::Exists(vs) => self.exists(g, vs),
            Tactic::Elim(e) => self.elim(g, e),
            Tactic::Case(e) => self.case(g, e),
            Tactic::Destruct(e, p) => self.destruct(g, e, p.as_ref()),
            Tactic::Induction(e) => self.induction(g, e),
            Tactic::Rewrite(d, e) => self.rewrite(g, d, e),
            Tactic::Reflexivity => self.reflexivity(g),
            Tactic::Symmetry => self.symmetry(g),
            Tactic::Assert(h, e) => self.assert(g, h.as_deref(), e),
            Tactic::Simpl => self.simpl(g),
            Tactic::Unfold(names) => self.unfold(g, names),
            Tactic::Clear(names) => self.clear_names(g, names),
            Tactic::Contradiction => self.contradiction(g),
            Tactic::Subst(names) => self.subst(g, names),
            Tactic::Ring => crate::decide::ring::tactic(self, g),
            Tactic::Omega => crate::decide::omega::tactic(self, g),
            Tactic::Auto => crate::decide::auto::tactic(self, g, 5),
            Tactic::Trivial => crate::decide::auto::tactic(self, g, 1),
            Tactic::Intuition => crate::decide::intuition::tactic(self, g),
            Tactic::Discriminate(e) => crate::decide::equality::discriminate(self, g, e.as_ref()),
            Tactic::Injection(e) => crate::decide::equality::injection(self, g, e),
            Tactic::Inversion(e) => crate::decide::inversion::tactic(self, g, e),
            Tactic::Try(_) | Tactic::Repeat(_) | Tactic::Idtac | Tactic::Seq(..) => {
                unreachable!("combinators are handled by run")
            }
        }
    }

    // ----- helpers shared by the tactics -----

    /// The goal's hypotheses, with solved holes substituted.
    pub(crate) fn ctx(&self, g: MetaId) -> LocalContext {
        let mut out = LocalContext::new();
        for d in self.metas.info(g).ctx.entries() {
            out.push_decl(LocalDecl {
                name: d.name.clone(),
                ty: self.metas.instantiate(&d.ty),
                body: d.body.as_ref().map(|b| self.metas.instantiate(b)),
            });
        }
        out
    }

    pub(crate) fn concl(&self, g: MetaId) -> Term {
        self.metas.instantiate(&self.metas.info(g).ty)
    }

    pub(crate) fn fresh_goal(&mut self, ctx: &LocalContext, ty: Term) -> (MetaId, Term) {
        self.metas.fresh(ctx, ty)
    }

    /// Close `g` with `proof`, after checking it against the goal.
    pub(crate) fn close(&mut self, g: MetaId, proof: Term, tactic: &str) -> Result<()> {
        let ctx = self.ctx(g);
        let ty = self.concl(g);
        let proof = self.metas.instantiate(&proof);
        if self.metas.occurs(g, &proof) {
            return fail(tactic, "the proof would refer to its own goal");
        }
        let saved = self.metas.clone();
        let r = check(&mut Unifier::new(&self.env, &mut self.metas), &ctx, &proof, &ty);
        if let Err(e) = r {
            self.metas = saved;
            return fail(tactic, e.to_string());
        }
        if !self.metas.is_assigned(g) {
            self.metas.assign(g, proof);
        }
        Ok(())
    }

    pub(crate) fn unify(&mut self, ctx: &LocalContext, a: &Term, b: &Term) -> bool {
        Unifier::new(&self.env, &mut self.metas).unify(ctx, a, b, true)
    }

    pub(crate) fn infer(&mut self, ctx: &LocalContext, t: &Term) -> Result<Term> {
        Unifier::new(&self.env, &mut self.metas).infer(ctx, t).map_err(EngineError::KernelRejection)
    }

    pub(crate) fn is_prop(&mut self, ctx: &LocalContext, ty: &Term) -> bool {
        match self.infer(ctx, ty) {
            Ok(s) => matches!(whnf_all(&self.env, ctx, &s), Term::Sort(Sort::Prop)),
            Err(_) => false,
        }
    }

    pub(crate) fn whnf(&self, ctx: &LocalContext, t: &Term) -> Term {
        whnf_all(&self.env, ctx, &self.metas.instantiate(t))
    }

    pub(crate) fn show(&self, ctx: &LocalContext, t: &Term) -> String {
        print_in(&self.env, ctx, &self.metas.instantiate(t))
    }

    /// Elaborate a tactic argument in the goal's context. Holes left open
    /// stay as metas for the caller to deal with.
    pub(crate) fn elab(&mut self, g: MetaId, e: &Expr, expected: Option<&Term>) -> Result<(Term, Term)> {
        let ctx = self.ctx(g);
        let mut el = Elaborator::new(&self.env, &mut self.metas);
        let (t, ty) = el.elab(&ctx, e, expected)?;
        Ok((self.metas.instantiate(&t), self.metas.instantiate(&ty)))
    }

    /// A name based on `base` not used by any hypothesis.
    pub(crate) fn fresh_hyp(ctx: &LocalContext, base: &str) -> String {
        let used: Vec<String> = ctx.names().iter().map(|n| n.to_string()).collect();
        fresh_name(base, &used)
    }

    pub(crate) fn hyp(&self, ctx: &LocalContext, x: &str) -> Result<usize> {
        ctx.index_of(x).ok_or_else(|| EngineError::NoSuchHypothesis(x.to_string()))
    }

    /// Close `g` with a fresh oracle lemma stating the goal generalized
    /// over its hypotheses.
    pub(crate) fn close_by_oracle(&mut self, g: MetaId, kind: OracleKind, evidence: String) -> Result<()> {
        let ctx = self.ctx(g);
        let concl = self.concl(g);
        let mut stmt = concl;
        for d in ctx.entries().iter().rev() {
            stmt = match &d.body {
                Some(b) => Term::LetIn(d.name.clone(), Arc::new(b.clone()), Arc::new(d.ty.clone()), Arc::new(stmt)),
                None => Term::Prod(d.name.clone(), Arc::new(d.ty.clone()), Arc::new(stmt)),
            };
        }
        let n = ctx.len();
        let args: Vec<Term> = ctx
            .entries()
            .iter()
            .enumerate()
            .filter(|(_, d)| d.body.is_none())
            .map(|(k, _)| Term::Rel(n - 1 - k))
            .collect();
        let oname = loop {
            self.oracles += 1;
            let cand = format!("{}_{}_{}", self.name, kind, self.oracles);
            if !self.env.contains(&cand) {
                break cand;
            }
        };
        add_oracle(&mut self.env, name(&oname), stmt, kind, evidence).map_err(EngineError::KernelRejection)?;
        self.close(g, Term::app(Term::constant(&oname), args), &kind.to_string())
    }

    // ----- display -----

    pub fn goal_views(&self) -> Vec<GoalView> {
        self.goals
            .iter()
            .map(|g| {
                let ctx = self.ctx(*g);
                let mut prefix = LocalContext::new();
                let mut hyps = Vec::new();
                for d in ctx.entries() {
                    let ty = print_in(&self.env, &prefix, &d.ty);
                    let body = d.body.as_ref().map(|b| print_in(&self.env, &prefix, b));
                    hyps.push((d.name.to_string(), body, ty));
                    prefix.push_decl(d.clone());
                }
                GoalView { id: *g, hyps, conclusion: print_in(&self.env, &ctx, &self.concl(*g)) }
            })
            .collect()
    }

    /// The goal display: hypotheses of the focused goal above the line,
    /// the other goals' conclusions after it.
    pub fn render(&self) -> String {
        let views = self.goal_views();
        if views.is_empty() {
            return "Proof completed.".to_string();
        }
        let mut out =
            if views.len() == 1 { "1 subgoal\n  \n".to_string() } else { format!("{} subgoals\n  \n", views.len()) };
        for (n, body, ty) in &views[0].hyps {
            match body {
                Some(b) => out.push_str(&format!("  {n} := {b} : {ty}\n")),
                None => out.push_str(&format!("  {n} : {ty}\n")),
            }
        }
        out.push_str("  ============================\n");
        out.push_str(&format!("   {}", views[0].conclusion));
        for (k, v) in views.iter().enumerate().skip(1) {
            out.push_str(&format!("\n\nsubgoal {} is:\n {}", k + 1, v.conclusion));
        }
        out
    }

    // ----- closing -----

    /// The finished proof term (fails while goals remain).
    pub fn proof_term(&self) -> Result<Term> {
        if !self.goals.is_empty() {
            return Err(EngineError::OpenGoalsRemain(self.goals.len()));
        }
        let proof = self.metas.instantiate(&Term::Meta(self.root, Vec::new().into()));
        if let Some(m) = self.metas.unsolved_in(&proof).first() {
            return Err(EngineError::KernelRejection(KernelError::UnexpectedMeta(*m)));
        }
        Ok(proof)
    }

    /// Re-check the assembled proof in the kernel and return the extended
    /// environment (with the oracle lemmas the proof used).
    pub fn qed(&self, opaque: bool) -> Result<(GlobalEnv, ProofReport)> {
        let proof = self.proof_term()?;
        let report = check_proof(&self.env, &proof, &self.statement).map_err(EngineError::KernelRejection)?;
        let mut env = self.env.clone();
        env.push(Decl::Definition { name: name(&self.name), ty: self.statement.clone(), body: proof, opaque });
        Ok((env, report))
    }
}

#[cfg(test)]
mod tests;
