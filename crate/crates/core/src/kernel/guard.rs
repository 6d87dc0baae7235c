//! Syntactic guard condition for structural recursion.
//!
//! Variables are tracked by de Bruijn *level* so the sets stay valid while
//! descending under binders.

use std::collections::HashSet;

use super::env::GlobalEnv;
use super::term::{FixData, Term};

struct Guard<'a> {
    env: &'a GlobalEnv,
    fix_level: usize,
    struct_index: usize,
    /// Levels that may be destructured to produce strict subterms.
    smaller_eq: HashSet<usize>,
    /// Levels known to be strict subterms of the structural argument.
    strict: HashSet<usize>,
}

/// Does every recursive call in `fx` pass a strict subterm of the
/// structural argument?
pub fn check_guard(env: &GlobalEnv, fx: &FixData) -> bool {
    // Levels are relative to the fixpoint's own binder (level 0).
    let mut g =
        Guard { env, fix_level: 0, struct_index: fx.struct_index, smaller_eq: HashSet::new(), strict: HashSet::new() };
    let mut t = &fx.body;
    let mut depth = 1;
    for k in 0..=fx.struct_index {
        match t {
            Term::Lambda(_, dom, body) => {
                if !g.check(dom, depth) {
                    return false;
                }
                if k == fx.struct_index {
                    g.smaller_eq.insert(depth);
                }
                depth += 1;
                t = body;
            }
            _ => return false,
        }
    }
    g.check(t, depth)
}

impl Guard<'_> {
    fn level(&self, i: usize, depth: usize) -> Option<usize> {
        depth.checked_sub(i + 1)
    }

    fn is_fix(&self, t: &Term, depth: usize) -> bool {
        matches!(t, Term::Rel(i) if self.level(*i, depth) == Some(self.fix_level))
    }

    /// Strict subterm, possibly applied (functional recursive arguments).
    fn is_strict(&self, t: &Term, depth: usize) -> bool {
        match t.head() {
            Term::Rel(i) => self.level(*i, depth).is_some_and(|l| self.strict.contains(&l)),
            _ => false,
        }
    }

    fn destructurable(&self, t: &Term, depth: usize) -> bool {
        match t {
            Term::Rel(i) => {
                self.level(*i, depth).is_some_and(|l| self.smaller_eq.contains(&l) || self.strict.contains(&l))
            }
            _ => false,
        }
    }

    fn check(&mut self, t: &Term, depth: usize) -> bool {
        match t {
            Term::Rel(_) => !self.is_fix(t, depth),
            Term::Sort(_) | Term::Const(_) | Term::Ind(_) | Term::Construct(..) => true,
            Term::App(h, args) => {
                if self.is_fix(h, depth) {
                    match args.get(self.struct_index) {
                        Some(a) if self.is_strict(a, depth) => {}
                        _ => return false,
                    }
                } else if !self.check(h, depth) {
                    return false;
                }
                args.iter().all(|a| self.check(a, depth))
            }
            Term::Prod(_, a, b) | Term::Lambda(_, a, b) => self.check(a, depth) && self.check(b, depth + 1),
            Term::LetIn(_, v, ty, b) => {
                if !self.check(v, depth) || !self.check(ty, depth) {
                    return false;
                }
                let added = self.is_strict(v, depth) && self.strict.insert(depth);
                let ok = self.check(b, depth + 1);
                if added {
                    self.strict.remove(&depth);
                }
                ok
            }
            Term::Match(m) => {
                if !self.check(&m.scrutinee, depth) || !self.check(&m.predicate, depth) {
                    return false;
                }
                let destructs = self.destructurable(&m.scrutinee, depth);
                let info = self.env.inductive(&m.ind).cloned();
                for (j, branch) in m.branches.iter().enumerate() {
                    let nfields = info.as_ref().and_then(|i| i.ctors.get(j)).map(|c| c.nfields).unwrap_or(0);
                    if !self.check_branch(branch, depth, if destructs { nfields } else { 0 }) {
                        return false;
                    }
                }
                true
            }
            Term::Fix(fx) => self.check(&fx.ty, depth) && self.check(&fx.body, depth + 1),
            Term::Meta(_, inst) => inst.iter().all(|a| self.check(a, depth)),
        }
    }

    /// Check a branch whose first `fields` lambdas bind strict subterms.
    fn check_branch(&mut self, t: &Term, depth: usize, fields: usize) -> bool {
        if fields == 0 {
            return self.check(t, depth);
        }
        match t {
            Term::Lambda(_, dom, body) => {
                if !self.check(dom, depth) {
                    return false;
                }
                let added = self.strict.insert(depth);
                let ok = self.check_branch(body, depth + 1, fields - 1);
                if added {
                    self.strict.remove(&depth);
                }
                ok
            }
            // Eta-reduced branch: nothing is bound, check as is.
            _ => self.check(t, depth),
        }
    }
}
