//! Existential variables: holes in partial proofs and unsolved implicit
//! arguments.

use crate::kernel::term::{map_term, substl, MetaId, Term};
use crate::kernel::LocalContext;

#[derive(Clone, Debug)]
pub struct MetaInfo {
    /// Context the hole lives in.
    pub ctx: LocalContext,
    /// Expected type, in `ctx`.
    pub ty: Term,
    pub value: Option<Term>,
}

#[derive(Clone, Debug, Default)]
pub struct MetaCtx {
    metas: Vec<MetaInfo>,
}

/// `[Rel 0, .., Rel (n-1)]`: the instance of a meta in its own context.
pub fn identity_instance(n: usize) -> Vec<Term> {
    (0..n).map(Term::Rel).collect()
}

impl MetaCtx {
    pub fn new() -> MetaCtx {
        MetaCtx::default()
    }

    pub fn len(&self) -> usize {
        self.metas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.metas.is_empty()
    }

    /// Declare a hole of type `ty` in `ctx`; returns it applied to the
    /// identity instance.
    pub fn fresh(&mut self, ctx: &LocalContext, ty: Term) -> (MetaId, Term) {
        let id = self.metas.len();
        self.metas.push(MetaInfo { ctx: ctx.clone(), ty, value: None });
        (id, Term::Meta(id, identity_instance(ctx.len()).into()))
    }

    /// Declare a hole in `ctx`, used from another context through `inst`
    /// (`inst[i]` is the caller's term for `Rel(i)` of `ctx`).
    pub fn fresh_with(&mut self, ctx: &LocalContext, ty: Term, inst: Vec<Term>) -> (MetaId, Term) {
        let id = self.metas.len();
        self.metas.push(MetaInfo { ctx: ctx.clone(), ty, value: None });
        (id, Term::Meta(id, inst.into()))
    }

    /// Replace the type of an unassigned hole by a convertible one.
    pub fn set_type(&mut self, id: MetaId, ty: Term) {
        self.metas[id].ty = ty;
    }

    pub fn info(&self, id: MetaId) -> &MetaInfo {
        &self.metas[id]
    }

    pub fn is_assigned(&self, id: MetaId) -> bool {
        self.metas[id].value.is_some()
    }

    /// Record a solution; `value` lives in the meta's own context.
    pub fn assign(&mut self, id: MetaId, value: Term) {
        debug_assert!(self.metas[id].value.is_none(), "meta ?{id} assigned twice");
        self.metas[id].value = Some(value);
    }

    /// Type of `Meta(id, inst)` in the caller's context.
    pub fn instance_type(&self, id: MetaId, inst: &[Term]) -> Term {
        substl(&self.metas[id].ty, inst)
    }

    /// Replace every assigned meta by its value, recursively.
    pub fn instantiate(&self, t: &Term) -> Term {
        if !t.has_metas() {
            return t.clone();
        }
        map_term(t, 0, &|u, _| match u {
            Term::Meta(id, inst) => {
                let inst: Vec<Term> = inst.iter().map(|a| self.instantiate(a)).collect();
                Some(match &self.metas[*id].value {
                    Some(v) => self.instantiate(&substl(v, &inst)),
                    None => Term::Meta(*id, inst.into()),
                })
            }
            _ => None,
        })
    }

    /// Unassigned metas occurring in `t` (after instantiation), first
    /// occurrence order.
    pub fn unsolved_in(&self, t: &Term) -> Vec<MetaId> {
        let t = self.instantiate(t);
        let mut out = Vec::new();
        crate::kernel::term::visit(&t, 0, &mut |u, _| {
            if let Term::Meta(id, _) = u {
                if !out.contains(id) {
                    out.push(*id);
                }
            }
            true
        });
        out
    }

    pub fn occurs(&self, id: MetaId, t: &Term) -> bool {
        self.unsolved_in(t).contains(&id)
    }
}
