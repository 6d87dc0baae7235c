//! `inversion H`: case analysis on an inductive predicate that remembers
//! the indices of `H` as equations, then solves those equations per branch.
//!
//! Each branch is `forall fields, cidx1 = i1 -> .. -> goal`. Equations whose
//! sides clash close the branch, equal constructors are split through
//! projections, and a field equal to a term of the outer context is
//! substituted by transporting the branch hypotheses along the equation.
//! Whatever remains is kept as a hypothesis of the new goal.

use std::sync::Arc;

use crate::engine::{ProofState, Result};
use crate::kernel::inductive::close_lambda;
use crate::kernel::term::{abstract_term, anonymous, is_anonymous, lift, name, subst, substl, MetaId, Name, Term};
use crate::kernel::typing::{branch_type, instantiate_prod};
use crate::kernel::LocalContext;
use crate::reduction::{beta_normalize, reduce_to_inductive};
use crate::surface::ast::Expr;
use crate::surface::matching::base_name;

use super::equality::eq_term;
use super::DecideError;

fn replace_rel(t: &Term, r: usize, v: &Term) -> Term {
    subst(&abstract_term(t, &Term::Rel(r)), v)
}

/// Equations solved so far in one branch, all in the branch context.
#[derive(Default)]
struct Solution {
    /// (field index, value, proof of `field = value`, type)
    determined: Vec<(usize, Term, Term, Term)>,
    /// (proof, statement)
    leftover: Vec<(Term, Term)>,
    /// A proof of `False` when the branch is impossible.
    clash: Option<Term>,
}

struct Branch<'a> {
    ctx: &'a LocalContext,
    /// Field indices are `lo..hi`.
    lo: usize,
    hi: usize,
}

impl Branch<'_> {
    fn is_field(&self, t: &Term) -> Option<usize> {
        match t {
            Term::Rel(r) if (self.lo..self.hi).contains(r) => Some(*r),
            _ => None,
        }
    }
}

impl ProofState {
    /// Solve `c = i` (proof `p`, at type `ty`), where `c` is a constructor
    /// index over the fields and `i` an index of the hypothesis.
    fn solve(&self, b: &Branch, c: &Term, i: &Term, ty: &Term, p: Term, sol: &mut Solution) {
        if sol.clash.is_some() || c == i {
            return;
        }
        if let Some(r) = b.is_field(c) {
            let fresh = !sol.determined.iter().any(|d| d.0 == r);
            if fresh && !(b.lo..b.hi).any(|k| i.has_rel(k)) {
                sol.determined.push((r, i.clone(), p, ty.clone()));
                return;
            }
        }
        if let (Some((jc, fc)), Some((ji, _))) = (self.ctor_view(b.ctx, c), self.ctor_view(b.ctx, i)) {
            if jc != ji {
                sol.clash = self.false_from_eq(b.ctx, ty, c, i, p.clone());
                if sol.clash.is_some() {
                    return;
                }
            } else {
                let parts: Option<Vec<(Term, Term)>> =
                    (0..fc.len()).map(|k| self.project_eq(b.ctx, ty, c, i, &p, &[(jc, k)])).collect();
                if let Some(parts) = parts {
                    for (pk, eq) in parts {
                        let [a, ck, ik] = eq.args() else { unreachable!("equation") };
                        self.solve(b, ck, ik, a, pk, sol);
                    }
                    return;
                }
            }
        }
        sol.leftover.push((p, eq_term(ty, c, i)));
    }
}

pub fn tactic(ps: &mut ProofState, g: MetaId, e: &Expr) -> Result<()> {
    let ctx = ps.ctx(g);
    let (h, hty) = ps.elab(g, e, None)?;
    let Some((ind, args)) = reduce_to_inductive(&ps.env, &ctx, &hty) else {
        return Err(DecideError::NotAnInductiveHypothesis(ps.show(&ctx, &hty)).into());
    };
    let info = ps.env.inductive(&ind).expect("inductive").clone();
    let (params, indices) = args.split_at(info.nparams());
    for i in indices {
        let w = ps.whnf(&ctx, i);
        if !matches!(w.head(), Term::Construct(..) | Term::Rel(_)) {
            return Err(DecideError::UnsupportedIndexShape(ps.show(&ctx, i)).into());
        }
    }
    let concl = ps.concl(g);
    let ni = indices.len();

    // fun idx (x : I params idx) => idx1 = i1 -> .. -> goal
    let phs: Vec<Term> = (0..=ni).map(|k| Term::Const(name(&format!("\u{0}i{k}")))).collect();
    let (idx_bs, _) = instantiate_prod(&info.ty, params).decompose_prod();
    let idx_tys: Vec<Term> =
        (0..ni).map(|k| substl(&idx_bs[k].1, &indices[..k].iter().rev().cloned().collect::<Vec<_>>())).collect();
    let mut body = concl.clone();
    for k in (0..ni).rev() {
        let ph_ty = substl(&idx_bs[k].1, &phs[..k].iter().rev().cloned().collect::<Vec<_>>());
        body = Term::Prod(anonymous(), Arc::new(eq_term(&ph_ty, &phs[k], &indices[k])), Arc::new(lift(&body, 1, 0)));
    }
    let mut binders: Vec<(Name, Term, Term)> = (0..ni)
        .map(|k| {
            (
                idx_bs[k].0.clone(),
                phs[k].clone(),
                substl(&idx_bs[k].1, &phs[..k].iter().rev().cloned().collect::<Vec<_>>()),
            )
        })
        .collect();
    let mut xargs = params.to_vec();
    xargs.extend(phs[..ni].iter().cloned());
    binders.push((name("x"), phs[ni].clone(), Term::app(Term::Ind(ind.clone()), xargs)));
    let motive = close_lambda(&binders, body);

    let mut branches = Vec::new();
    for j in 1..=info.ctors.len() {
        let nf = ps.ctor_fields(&info, params, j).len();
        let bty = beta_normalize(&branch_type(&ps.env, &ind, params, &motive, j).expect("constructor"));
        let mut bctx = ctx.clone();
        let mut bs = Vec::new();
        let mut cur = bty;
        for _ in 0..nf + ni {
            let Term::Prod(n, a, rest) = cur else { unreachable!("branch binders") };
            bctx.push(n.clone(), (*a).clone());
            bs.push((n, (*a).clone()));
            cur = (*rest).clone();
        }
        let body = branch_body(ps, &bctx, &bs, nf, ni, &concl)?;
        branches.push(crate::kernel::term::build_lambda(&bs, body));
    }
    let refls =
        (0..ni).map(|k| Term::app(Term::construct("eq", 1), vec![idx_tys[k].clone(), indices[k].clone()])).collect();
    let proof = Term::app(Term::mk_match(ind.clone(), h, motive, branches), refls);
    ps.close(g, proof, "inversion")
}

/// The proof of one branch, in the context extended by its fields and
/// equations: either an absurdity or a new goal.
fn branch_body(
    ps: &mut ProofState,
    bctx: &LocalContext,
    bs: &[(Name, Term)],
    nf: usize,
    ne: usize,
    concl: &Term,
) -> Result<Term> {
    let gamma = bctx.len() - nf - ne;
    let outer = lift(concl, (nf + ne) as isize, 0);
    let b = Branch { ctx: bctx, lo: ne, hi: ne + nf };
    let mut sol = Solution::default();
    for k in 0..ne {
        let eq = bctx.type_of(ne - 1 - k).expect("equation");
        let [a, c, i] = eq.args() else { unreachable!("equation") };
        ps.solve(&b, c, i, a, Term::Rel(ne - 1 - k), &mut sol);
    }
    if let Some(f) = sol.clash {
        let pred = Term::Lambda(anonymous(), Arc::new(Term::ind("False")), Arc::new(lift(&outer, 1, 0)));
        return Ok(Term::mk_match(name("False"), f, pred, Vec::new()));
    }

    // Kept entries: undetermined fields, then leftover equations.
    let mut kept: Vec<(Name, Term, Term, Option<usize>)> = Vec::new();
    for (f, b) in bs.iter().enumerate().take(nf) {
        let r = ne + nf - 1 - f;
        if sol.determined.iter().any(|d| d.0 == r) {
            continue;
        }
        kept.push((b.0.clone(), Term::Rel(r), bctx.type_of(r).expect("field"), Some(r)));
    }
    for (p, ty) in &sol.leftover {
        kept.push((anonymous(), p.clone(), ty.clone(), None));
    }

    let mut names = ctx_names(bctx, gamma);
    let mut closing = Vec::new();
    let mut values = Vec::new();
    for (k, (n, v, ty, _)) in kept.iter().enumerate() {
        let (mut v, mut ty) = (v.clone(), ty.clone());
        for (r, val, p, a) in &sol.determined {
            if ty.has_rel(*r) {
                let motive = Term::Lambda(name("z"), Arc::new(a.clone()), Arc::new(abstract_term(&ty, &Term::Rel(*r))));
                v = Term::app(
                    Term::constant("eq_ind"),
                    vec![a.clone(), Term::Rel(*r), motive, v, val.clone(), p.clone()],
                );
                ty = replace_rel(&ty, *r, val);
            }
        }
        for (k2, (_, _, _, field)) in kept[..k].iter().enumerate() {
            if let Some(r) = field {
                ty = replace_rel(&ty, *r, &Term::Const(name(&format!("\u{0}k{k2}"))));
            }
        }
        if (0..nf + ne).any(|i| ty.has_rel(i)) {
            return Err(DecideError::UnsupportedIndexShape(ps.show(bctx, &ty)).into());
        }
        let ty = lift(&ty, -((nf + ne) as isize), 0);
        let base = if !is_anonymous(n) {
            n.to_string()
        } else if ps.is_prop(bctx, &kept[k].2) {
            "H".to_string()
        } else {
            base_name(&ps.env, &ty)
        };
        let x = crate::kernel::inductive::fresh_name(&base, &names);
        names.push(x.clone());
        closing.push((name(&x), Term::Const(name(&format!("\u{0}k{k}"))), ty));
        values.push(v);
    }
    let (tys, _) = close_lambda(&closing, Term::prop()).decompose_lambda();
    let mut nctx = LocalContext::new();
    for d in &bctx.entries()[..gamma] {
        nctx.push_decl(d.clone());
    }
    for (n, ty) in tys {
        nctx.push(n, ty);
    }
    let m = values.len();
    let mut inst: Vec<Term> = values.into_iter().rev().collect();
    inst.extend((0..gamma).map(|i| Term::Rel(i + nf + ne)));
    let (_, hole) = ps.metas.fresh_with(&nctx, lift(concl, m as isize, 0), inst);
    Ok(hole)
}

fn ctx_names(ctx: &LocalContext, upto: usize) -> Vec<String> {
    ctx.entries()[..upto].iter().map(|d| d.name.to_string()).collect()
}
