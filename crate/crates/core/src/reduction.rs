//! Evaluation strategies: weak-head normalization (shared by conversion and
//! tactics), full normalization for `Eval compute`, and the `simpl`
//! goal-simplification strategy.

use std::sync::Arc;

use crate::kernel::context::LocalContext;
use crate::kernel::env::GlobalEnv;
use crate::kernel::term::{beta_apply, lift, subst, FixData, MatchData, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReductionFlags {
    pub beta: bool,
    pub delta: bool,
    pub iota: bool,
    pub zeta: bool,
}

impl ReductionFlags {
    pub const ALL: ReductionFlags = ReductionFlags { beta: true, delta: true, iota: true, zeta: true };
    /// Everything except unfolding of global definitions.
    pub const NO_DELTA: ReductionFlags = ReductionFlags { beta: true, delta: false, iota: true, zeta: true };
    pub const BETA: ReductionFlags = ReductionFlags { beta: true, delta: false, iota: false, zeta: false };
}

/// Unfold one fixpoint: the self reference becomes `self_ref` (either the
/// fixpoint itself or the constant it was unfolded from).
fn unfold_fix(fx: &Arc<FixData>, self_ref: Option<Term>) -> Term {
    let me = self_ref.unwrap_or_else(|| Term::Fix(fx.clone()));
    subst(&fx.body, &me)
}

/// Reduce a stuck-or-not match given its already weak-head-normal scrutinee.
/// Returns the selected branch applied to the constructor fields.
fn iota_match(env: &GlobalEnv, m: &MatchData, scrutinee: &Term) -> Option<Term> {
    let (head, args) = scrutinee.decompose_app();
    if let Term::Construct(ind, j) = head {
        let info = env.inductive(ind)?;
        let np = info.nparams();
        let branch = m.branches.get(j - 1)?;
        let fields = args.get(np..).unwrap_or(&[]);
        return Some(beta_apply(branch, fields));
    }
    None
}

pub fn is_constructor_app(t: &Term) -> bool {
    matches!(t.head(), Term::Construct(..))
}

pub fn whnf(env: &GlobalEnv, ctx: &LocalContext, t: &Term, flags: ReductionFlags) -> Term {
    let mut head = t.clone();
    let mut stack: Vec<Term> = Vec::new();
    let mut self_ref: Option<Term> = None;
    loop {
        match &head {
            Term::App(h, args) => {
                let mut new_stack: Vec<Term> = args.iter().cloned().collect();
                new_stack.append(&mut stack);
                stack = new_stack;
                head = (**h).clone();
                continue;
            }
            Term::Lambda(..) if flags.beta && !stack.is_empty() => {
                let n = {
                    let mut n = 0;
                    let mut b = &head;
                    while let Term::Lambda(_, _, body) = b {
                        if n == stack.len() {
                            break;
                        }
                        n += 1;
                        b = body;
                    }
                    n
                };
                let reduced = beta_apply(&head, &stack[..n]);
                stack.drain(..n);
                head = reduced;
                self_ref = None;
            }
            Term::LetIn(_, v, _, b) if flags.zeta => {
                head = subst(b, v);
                self_ref = None;
            }
            Term::Rel(i) if flags.zeta => match ctx.body_of(*i) {
                Some(b) => head = b,
                None => break,
            },
            Term::Const(c) if flags.delta => match env.const_body(c) {
                Some(body) => {
                    self_ref = if matches!(body, Term::Fix(_)) { Some(head.clone()) } else { None };
                    head = body.clone();
                }
                None => break,
            },
            Term::Fix(fx) if flags.iota && stack.len() > fx.struct_index => {
                let arg = whnf(env, ctx, &stack[fx.struct_index], flags);
                if is_constructor_app(&arg) {
                    stack[fx.struct_index] = arg;
                    head = unfold_fix(fx, self_ref.take());
                } else {
                    break;
                }
            }
            Term::Match(m) if flags.iota => {
                let s = whnf(env, ctx, &m.scrutinee, flags);
                match iota_match(env, m, &s) {
                    Some(r) => {
                        head = r;
                        self_ref = None;
                    }
                    None => {
                        head = Term::Match(Arc::new(MatchData {
                            ind: m.ind.clone(),
                            scrutinee: s,
                            predicate: m.predicate.clone(),
                            branches: m.branches.clone(),
                        }));
                        break;
                    }
                }
            }
            _ => break,
        }
    }
    Term::app(head, stack)
}

pub fn whnf_all(env: &GlobalEnv, ctx: &LocalContext, t: &Term) -> Term {
    whnf(env, ctx, t, ReductionFlags::ALL)
}

/// Full normal form under beta, delta, iota and zeta.
pub fn normalize(env: &GlobalEnv, t: &Term) -> Term {
    normalize_in(env, &LocalContext::new(), t)
}

pub fn normalize_in(env: &GlobalEnv, ctx: &LocalContext, t: &Term) -> Term {
    let h = whnf(env, ctx, t, ReductionFlags::ALL);
    descend(env, ctx, &h, &|env, ctx, t| normalize_in(env, ctx, t))
}

/// Apply `f` to the immediate subterms of a weak-head normal term.
fn descend(
    env: &GlobalEnv,
    ctx: &LocalContext,
    t: &Term,
    f: &dyn Fn(&GlobalEnv, &LocalContext, &Term) -> Term,
) -> Term {
    match t {
        Term::App(h, args) => {
            let h2 = match &**h {
                Term::App(..) => unreachable!("application heads are never applications"),
                other => descend(env, ctx, other, f),
            };
            Term::app(h2, args.iter().map(|a| f(env, ctx, a)).collect())
        }
        Term::Prod(n, a, b) => {
            let a2 = f(env, ctx, a);
            let inner = ctx.with(n.clone(), (**a).clone());
            Term::Prod(n.clone(), Arc::new(a2), Arc::new(f(env, &inner, b)))
        }
        Term::Lambda(n, a, b) => {
            let a2 = f(env, ctx, a);
            let inner = ctx.with(n.clone(), (**a).clone());
            Term::Lambda(n.clone(), Arc::new(a2), Arc::new(f(env, &inner, b)))
        }
        Term::LetIn(n, v, ty, b) => {
            let mut inner = ctx.clone();
            inner.push_def(n.clone(), (**ty).clone(), (**v).clone());
            Term::LetIn(n.clone(), Arc::new(f(env, ctx, v)), Arc::new(f(env, ctx, ty)), Arc::new(f(env, &inner, b)))
        }
        Term::Match(m) => Term::Match(Arc::new(MatchData {
            ind: m.ind.clone(),
            scrutinee: f(env, ctx, &m.scrutinee),
            predicate: f(env, ctx, &m.predicate),
            branches: m.branches.iter().map(|b| f(env, ctx, b)).collect(),
        })),
        Term::Fix(fx) => {
            let inner = ctx.with(fx.name.clone(), fx.ty.clone());
            Term::Fix(Arc::new(FixData {
                name: fx.name.clone(),
                struct_index: fx.struct_index,
                ty: f(env, ctx, &fx.ty),
                body: f(env, &inner, &fx.body),
            }))
        }
        Term::Meta(id, inst) => Term::Meta(*id, inst.iter().map(|a| f(env, ctx, a)).collect()),
        _ => t.clone(),
    }
}

/// Beta-normal form (no delta, iota or zeta).
pub fn beta_normalize(t: &Term) -> Term {
    let env = GlobalEnv::new();
    fn go(env: &GlobalEnv, ctx: &LocalContext, t: &Term) -> Term {
        let h = whnf(env, ctx, t, ReductionFlags::BETA);
        descend(env, ctx, &h, &go)
    }
    go(&env, &LocalContext::new(), t)
}

/// The `simpl` strategy: unfold a global or a fixpoint only when doing so
/// exposes an iota step, then simplify all subterms. No refolding.
pub fn simpl(env: &GlobalEnv, ctx: &LocalContext, t: &Term) -> Term {
    let h = simpl_head(env, ctx, t);
    descend(env, ctx, &h, &simpl)
}

/// Weak-head simplification with the progress-only unfolding rule.
pub fn simpl_head(env: &GlobalEnv, ctx: &LocalContext, t: &Term) -> Term {
    let mut cur = t.clone();
    loop {
        match step_simpl(env, ctx, &cur) {
            Some(next) => cur = next,
            None => return cur,
        }
    }
}

fn step_simpl(env: &GlobalEnv, ctx: &LocalContext, t: &Term) -> Option<Term> {
    let (head, args) = t.decompose_app();
    match head {
        Term::Lambda(..) if !args.is_empty() => Some(beta_apply(head, args)),
        Term::LetIn(_, v, _, b) => Some(Term::app(subst(b, v), args.to_vec())),
        Term::Const(c) => {
            let body = env.const_body(c)?;
            let self_ref = if matches!(body, Term::Fix(_)) { Some(head.clone()) } else { None };
            iota_progress(env, ctx, body, args, self_ref)
        }
        Term::Fix(_) | Term::Match(_) => iota_progress(env, ctx, head, args, None),
        _ => None,
    }
}

/// Try to make an iota step from `head args`, going through beta redexes
/// produced along the way. `None` when the term stays stuck.
fn iota_progress(
    env: &GlobalEnv,
    ctx: &LocalContext,
    head: &Term,
    args: &[Term],
    self_ref: Option<Term>,
) -> Option<Term> {
    let mut cur = Term::app(head.clone(), args.to_vec());
    let mut self_ref = self_ref;
    loop {
        let (h, a) = cur.decompose_app();
        match h {
            Term::Lambda(..) if !a.is_empty() => {
                cur = beta_apply(h, a);
                self_ref = None;
            }
            Term::Fix(fx) if a.len() > fx.struct_index => {
                let arg = simpl_head(env, ctx, &a[fx.struct_index]);
                if !is_constructor_app(&arg) {
                    return None;
                }
                let mut a2 = a.to_vec();
                a2[fx.struct_index] = arg;
                return Some(Term::app(unfold_fix(fx, self_ref), a2));
            }
            Term::Match(m) => {
                let s = simpl_head(env, ctx, &m.scrutinee);
                let r = iota_match(env, m, &s)?;
                return Some(Term::app(r, a.to_vec()));
            }
            _ => return None,
        }
    }
}

/// Reduce a type to an applied inductive, returning its name and arguments.
pub fn reduce_to_inductive(
    env: &GlobalEnv,
    ctx: &LocalContext,
    ty: &Term,
) -> Option<(crate::kernel::term::Name, Vec<Term>)> {
    let w = whnf_all(env, ctx, ty);
    match w.head() {
        Term::Ind(n) => Some((n.clone(), w.args().to_vec())),
        _ => None,
    }
}

/// Weak-head reduce until a product is exposed (or give up).
pub fn reduce_to_prod(env: &GlobalEnv, ctx: &LocalContext, ty: &Term) -> Option<Term> {
    if let Term::Prod(..) = ty {
        return Some(ty.clone());
    }
    let w = whnf_all(env, ctx, ty);
    match w {
        Term::Prod(..) => Some(w),
        _ => None,
    }
}

/// Lift helper re-exported for callers that build reduction inputs.
pub fn shift(t: &Term, by: isize) -> Term {
    lift(t, by, 0)
}
