//! `auto`/`trivial`: depth-bounded backward chaining with the hypotheses and
//! the constructors of the goal's inductive type (which covers `I`, `conj`,
//! `or_introl`, `le_n`, `le_S`, `eq_refl` ...). Leaves the goal untouched
//! when no complete proof is found.

use crate::engine::{ProofState, Result};
use crate::kernel::term::{MetaId, Term};

pub fn tactic(ps: &mut ProofState, g: MetaId, depth: usize) -> Result<()> {
    let saved = ps.metas.clone();
    if !search(ps, g, depth) {
        ps.metas = saved;
    }
    Ok(())
}

fn hints(ps: &ProofState, g: MetaId) -> Vec<(Term, Term)> {
    let ctx = ps.ctx(g);
    let mut out: Vec<(Term, Term)> =
        (0..ctx.len()).map(|i| (Term::Rel(i), ctx.type_of(i).expect("in context"))).collect();
    let concl = ps.whnf(&ctx, &ps.concl(g));
    if let Term::Ind(n) = concl.head() {
        if let Some(info) = ps.env.inductive(n) {
            for (j, c) in info.ctors.iter().enumerate() {
                out.push((Term::Construct(n.clone(), j + 1), c.ty.clone()));
            }
        }
    }
    out
}

fn search(ps: &mut ProofState, g: MetaId, depth: usize) -> bool {
    if depth == 0 {
        return false;
    }
    let mark = ps.metas.len();
    if ps.intros(g, &[]).is_err() {
        return false;
    }
    let g = ps.new_goals(g, mark).first().copied().unwrap_or(g);
    if ps.metas.is_assigned(g) {
        return true;
    }
    let saved = ps.metas.clone();
    if ps.assumption(g).is_ok() || ps.reflexivity(g).is_ok() {
        return true;
    }
    ps.metas = saved.clone();
    for (t, ty) in hints(ps, g) {
        let mark = ps.metas.len();
        if ps.apply_term(g, t, ty, &[], "auto").is_ok() && solve_all(ps, g, mark, depth - 1) {
            return true;
        }
        ps.metas = saved.clone();
    }
    false
}

/// Solve the propositional subgoals left by a hint; the other holes must
/// have been fixed by unification along the way.
fn solve_all(ps: &mut ProofState, g: MetaId, mark: usize, depth: usize) -> bool {
    let subs = ps.new_goals(g, mark);
    let mut rest = Vec::new();
    for s in subs {
        let ctx = ps.metas.info(s).ctx.clone();
        let ty = ps.metas.instantiate(&ps.metas.info(s).ty);
        if ps.is_prop(&ctx, &ty) {
            if !ps.metas.is_assigned(s) && !search(ps, s, depth) {
                return false;
            }
        } else {
            rest.push(s);
        }
    }
    rest.iter().all(|s| ps.metas.is_assigned(*s))
}
