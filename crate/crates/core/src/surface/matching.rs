//! Compilation of surface `match` expressions with nested patterns and
//! wildcards into kernel matches with one branch per constructor.

use crate::kernel::term::{anonymous, beta_apply, build_lambda, lift, name, Name, Term};
use crate::kernel::typing::branch_type;
use crate::kernel::{GlobalRef, InductiveInfo, LocalContext};
use crate::reduction::reduce_to_inductive;
use std::sync::Arc;

use super::ast::{Expr, Pattern};
use super::elab::{EResult, ElabError, Elaborator, HoleKind};
use super::lexer::Pos;

struct Row<'e> {
    pats: Vec<Pattern>,
    rhs: &'e Expr,
    aliases: Vec<(String, Term, usize)>,
}

/// A pattern viewed at one inductive: constructor ordinal and subpatterns,
/// or a catch-all (with an optional variable).
enum Head {
    Ctor(usize, Vec<Pattern>),
    Any(Option<String>),
}

impl Elaborator<'_> {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn elab_match(
        &mut self,
        ctx: &LocalContext,
        scrutinee: &Expr,
        as_name: Option<&str>,
        ret: Option<&Expr>,
        branches: &[(Pattern, Expr)],
        expected: Option<&Term>,
        pos: Pos,
    ) -> EResult<(Term, Term)> {
        let (s, sty) = self.elab(ctx, scrutinee, None)?;
        let sty = self.metas.instantiate(&sty);
        let (ind, args) = reduce_to_inductive(self.env, ctx, &sty).ok_or_else(|| {
            ElabError::Pattern(pos, format!("cannot match on a term of type {}", self.show(ctx, &sty)))
        })?;
        let info = self.env.inductive(&ind).expect("inductive").clone();
        let np = info.nparams();
        let (params, indices) = args.split_at(np);

        let (pred, result_ty) = match ret {
            Some(r) => {
                let mut c = ctx.clone();
                let binders = self.pred_binders(&info, params, as_name);
                for (n, t) in &binders {
                    c.push(n.clone(), t.clone());
                }
                let (body, _) = self.elab_type(&c, r)?;
                let pred = build_lambda(&binders, body);
                let mut pargs = indices.to_vec();
                pargs.push(s.clone());
                let rty = beta_apply(&pred, &pargs);
                (pred, rty)
            }
            None => {
                let r = match expected {
                    Some(t) => t.clone(),
                    None => self.fresh_type(ctx, pos, HoleKind::ReturnType),
                };
                (self.nondep_pred(&info, params, &r), r)
            }
        };

        let rows: Vec<Row> =
            branches.iter().map(|(p, e)| Row { pats: vec![p.clone()], rhs: e, aliases: Vec::new() }).collect();
        let t = self.compile(ctx, vec![s], rows, &result_ty, Some(pred), pos)?;
        Ok((t, result_ty))
    }

    /// Binders `indices.. (x : I params indices)` of a return predicate.
    fn pred_binders(&self, info: &InductiveInfo, params: &[Term], as_name: Option<&str>) -> Vec<(Name, Term)> {
        let arity = crate::kernel::typing::instantiate_prod(&info.ty, params);
        let (idx, _) = arity.decompose_prod();
        let ni = idx.len();
        let mut binders = idx;
        let mut self_args: Vec<Term> = params.iter().map(|p| lift(p, ni as isize, 0)).collect();
        self_args.extend((0..ni).rev().map(Term::Rel));
        let x = as_name.map(name).unwrap_or_else(anonymous);
        binders.push((x, Term::app(Term::Ind(info.name.clone()), self_args)));
        binders
    }

    fn nondep_pred(&self, info: &InductiveInfo, params: &[Term], r: &Term) -> Term {
        let binders = self.pred_binders(info, params, None);
        build_lambda(&binders, lift(r, binders.len() as isize, 0))
    }

    fn head_of(&self, info: &Arc<InductiveInfo>, p: &Pattern, pos: Pos) -> EResult<Head> {
        let ctor_ordinal = |c: &str| -> EResult<Option<usize>> {
            match self.env.lookup(c) {
                Some(GlobalRef::Construct(i, j)) => {
                    if i.name != info.name {
                        Err(ElabError::Pattern(pos, format!("constructor {c} does not belong to {}", info.name)))
                    } else {
                        Ok(Some(j))
                    }
                }
                _ => Ok(None),
            }
        };
        match p {
            Pattern::Wild => Ok(Head::Any(None)),
            Pattern::Ident(x) => match ctor_ordinal(x)? {
                Some(j) => Ok(Head::Ctor(j, vec![])),
                None => Ok(Head::Any(Some(x.clone()))),
            },
            Pattern::App(c, sub) => match ctor_ordinal(c)? {
                Some(j) => Ok(Head::Ctor(j, sub.clone())),
                None => Err(ElabError::Pattern(pos, format!("{c} is not a constructor"))),
            },
            Pattern::Num(n) => {
                if info.name.as_ref() != "nat" {
                    return Err(ElabError::Pattern(pos, format!("numeral pattern at type {}", info.name)));
                }
                Ok(if *n == 0 { Head::Ctor(1, vec![]) } else { Head::Ctor(2, vec![Pattern::Num(n - 1)]) })
            }
        }
    }

    fn compile(
        &mut self,
        ctx: &LocalContext,
        occs: Vec<Term>,
        mut rows: Vec<Row<'_>>,
        goal: &Term,
        pred: Option<Term>,
        pos: Pos,
    ) -> EResult<Term> {
        if rows.is_empty() {
            return Err(ElabError::Pattern(pos, "non exhaustive pattern matching".into()));
        }
        if occs.is_empty() {
            let row = &rows[0];
            let saved = self.aliases.len();
            self.aliases.extend(row.aliases.iter().cloned());
            let r = self.elab(ctx, row.rhs, Some(goal));
            self.aliases.truncate(saved);
            return Ok(r?.0);
        }
        let occ0 = occs[0].clone();
        let all_vars = rows.iter().all(|r| matches!(r.pats[0], Pattern::Wild) || self.is_var_pattern(&r.pats[0]));
        if all_vars && pred.is_none() {
            for r in &mut rows {
                if let Pattern::Ident(x) = r.pats.remove(0) {
                    r.aliases.push((x, occ0.clone(), ctx.len()));
                }
            }
            return self.compile(ctx, occs[1..].to_vec(), rows, goal, None, pos);
        }

        let oty = self.unifier().infer(ctx, &occ0).map_err(|e| ElabError::Kernel(pos, e))?;
        let oty = self.metas.instantiate(&oty);
        let (ind, args) = reduce_to_inductive(self.env, ctx, &oty)
            .ok_or_else(|| ElabError::Pattern(pos, format!("cannot match on type {}", self.show(ctx, &oty))))?;
        let info = self.env.inductive(&ind).expect("inductive").clone();
        let params = &args[..info.nparams()];
        let pred = match pred {
            Some(p) => p,
            None => self.nondep_pred(&info, params, goal),
        };

        let mut heads = Vec::new();
        for r in &rows {
            heads.push(self.head_of(&info, &r.pats[0], pos)?);
        }
        let mut branches = Vec::new();
        for j in 1..=info.ctors.len() {
            let bty = branch_type(self.env, &ind, params, &pred, j).expect("constructor");
            let (mut fields, concl) = bty.decompose_prod();
            let nf = fields.len();
            // Display names for the fields: first variable pattern in a
            // row selecting this constructor, else derived from the type.
            for (k, field) in fields.iter_mut().enumerate() {
                let chosen = rows.iter().zip(&heads).find_map(|(_, h)| match h {
                    Head::Ctor(c, sub) if *c == j => match sub.get(k) {
                        Some(Pattern::Ident(x)) if self.is_var_name(x) => Some(x.clone()),
                        _ => None,
                    },
                    _ => None,
                });
                field.0 = match chosen {
                    Some(x) => name(&x),
                    None if crate::kernel::term::is_anonymous(&field.0) => name(&base_name(self.env, &field.1)),
                    None => field.0.clone(),
                };
            }
            let mut inner = ctx.clone();
            for (n, t) in &fields {
                inner.push(n.clone(), t.clone());
            }
            let mut new_occs: Vec<Term> = (0..nf).rev().map(Term::Rel).collect();
            new_occs.extend(occs[1..].iter().map(|o| lift(o, nf as isize, 0)));
            let mut sub_rows = Vec::new();
            for (r, h) in rows.iter().zip(&heads) {
                let mut aliases = r.aliases.clone();
                let mut pats = match h {
                    Head::Ctor(c, sub) if *c == j => {
                        if sub.len() != nf {
                            return Err(ElabError::Pattern(
                                pos,
                                format!(
                                    "constructor {} expects {nf} arguments, found {}",
                                    info.ctors[j - 1].name,
                                    sub.len()
                                ),
                            ));
                        }
                        sub.clone()
                    }
                    Head::Ctor(..) => continue,
                    Head::Any(x) => {
                        if let Some(x) = x {
                            aliases.push((x.clone(), occ0.clone(), ctx.len()));
                        }
                        vec![Pattern::Wild; nf]
                    }
                };
                pats.extend(r.pats[1..].iter().cloned());
                sub_rows.push(Row { pats, rhs: r.rhs, aliases });
            }
            if sub_rows.is_empty() {
                return Err(ElabError::Pattern(
                    pos,
                    format!("non exhaustive pattern matching: no clause for {}", info.ctors[j - 1].name),
                ));
            }
            let body = self.compile(&inner, new_occs, sub_rows, &concl, None, pos)?;
            branches.push(build_lambda(&fields, body));
        }
        Ok(Term::mk_match(ind, occ0, pred, branches))
    }

    fn is_var_name(&self, x: &str) -> bool {
        !matches!(self.env.lookup(x), Some(GlobalRef::Construct(..)))
    }

    fn is_var_pattern(&self, p: &Pattern) -> bool {
        matches!(p, Pattern::Ident(x) if self.is_var_name(x))
    }
}

/// Lowercase initial of the type's head constant, `x` otherwise.
pub(crate) fn base_name(env: &crate::kernel::GlobalEnv, ty: &Term) -> String {
    env.global_name(ty.head())
        .and_then(|n| n.chars().next())
        .filter(|c| c.is_alphabetic())
        .map(|c| c.to_lowercase().to_string())
        .unwrap_or_else(|| "x".into())
}
