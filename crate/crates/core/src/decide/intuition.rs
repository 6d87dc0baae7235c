//! `intuition`: introductions, then a contraction-free sequent search
//! (G4ip) over the propositional structure of the goal and hypotheses.
//! Every successful search yields an ordinary proof term.

use std::sync::Arc;

use crate::engine::{ProofState, Result};
use crate::kernel::inductive::close_lambda;
use crate::kernel::term::{anonymous, lift, name, MetaId, Term};
use crate::kernel::typing::convertible;
use crate::kernel::LocalContext;

use super::DecideError;

/// Propositional formulas over opaque atoms. Negation is `A -> False`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Atom(usize),
    Top,
    Bot,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
}

use Formula::*;

fn imp(a: Formula, b: Formula) -> Formula {
    Imp(Box::new(a), Box::new(b))
}

/// Search steps before giving up.
const STEP_LIMIT: usize = 200_000;

struct Prover<'a> {
    atoms: &'a [Term],
    steps: usize,
    fresh: usize,
}

impl Prover<'_> {
    fn term(&self, f: &Formula) -> Term {
        match f {
            Atom(k) => self.atoms[*k].clone(),
            Top => Term::ind("True"),
            Bot => Term::ind("False"),
            And(a, b) => Term::app(Term::ind("and"), vec![self.term(a), self.term(b)]),
            Or(a, b) => Term::app(Term::ind("or"), vec![self.term(a), self.term(b)]),
            Imp(a, b) => Term::Prod(anonymous(), Arc::new(self.term(a)), Arc::new(lift(&self.term(b), 1, 0))),
        }
    }

    fn placeholder(&mut self) -> Term {
        self.fresh += 1;
        Term::Const(name(&format!("\u{0}q{}", self.fresh)))
    }

    fn lam(&self, x: &Term, ty: &Formula, body: Term) -> Term {
        close_lambda(&[(name("H"), x.clone(), self.term(ty))], body)
    }

    /// `match p return goal with C fields => body end` for `and`/`or`/`False`.
    fn elim(&self, ind: &str, p: Term, scrut_ty: &Formula, goal: &Formula, branches: Vec<Term>) -> Term {
        let pred = Term::Lambda(anonymous(), Arc::new(self.term(scrut_ty)), Arc::new(lift(&self.term(goal), 1, 0)));
        Term::mk_match(name(ind), p, pred, branches)
    }

    fn prove(&mut self, hyps: &[(Formula, Term)], goal: &Formula) -> Option<Term> {
        self.steps += 1;
        if self.steps > STEP_LIMIT {
            return None;
        }
        let without = |i: usize| -> Vec<(Formula, Term)> {
            hyps.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, h)| h.clone()).collect()
        };
        // Invertible left rules.
        for (i, (f, p)) in hyps.iter().enumerate() {
            match f {
                Bot => return Some(self.elim("False", p.clone(), &Bot, goal, Vec::new())),
                Atom(_) if f == goal => return Some(p.clone()),
                _ if matches!(f, Top) || matches!(f, Imp(a, _) if **a == Bot) => {
                    return self.prove(&without(i), goal);
                }
                And(a, b) => {
                    let (x, y) = (self.placeholder(), self.placeholder());
                    let mut rest = without(i);
                    rest.push(((**a).clone(), x.clone()));
                    rest.push(((**b).clone(), y.clone()));
                    let body = self.prove(&rest, goal)?;
                    let branch = close_lambda(&[(name("H"), x, self.term(a)), (name("H"), y, self.term(b))], body);
                    return Some(self.elim("and", p.clone(), f, goal, vec![branch]));
                }
                Or(a, b) => {
                    let x = self.placeholder();
                    let mut r1 = without(i);
                    r1.push(((**a).clone(), x.clone()));
                    let b1 = self.prove(&r1, goal)?;
                    let y = self.placeholder();
                    let mut r2 = without(i);
                    r2.push(((**b).clone(), y.clone()));
                    let b2 = self.prove(&r2, goal)?;
                    let branches = vec![self.lam(&x, a, b1), self.lam(&y, b, b2)];
                    return Some(self.elim("or", p.clone(), f, goal, branches));
                }
                Imp(a, b) => {
                    let mut rest = without(i);
                    match &**a {
                        Top => rest.push(((**b).clone(), Term::app(p.clone(), vec![Term::construct("True", 1)]))),
                        And(c, d) => {
                            let (x, y) = (self.placeholder(), self.placeholder());
                            let pair = Term::app(
                                Term::construct("and", 1),
                                vec![self.term(c), self.term(d), x.clone(), y.clone()],
                            );
                            let q = close_lambda(
                                &[(name("H"), x, self.term(c)), (name("H"), y, self.term(d))],
                                Term::app(p.clone(), vec![pair]),
                            );
                            rest.push((imp((**c).clone(), imp((**d).clone(), (**b).clone())), q));
                        }
                        Or(c, d) => {
                            let (tc, td) = (self.term(c), self.term(d));
                            let x = self.placeholder();
                            let l = Term::app(Term::construct("or", 1), vec![tc.clone(), td.clone(), x.clone()]);
                            let ql = self.lam(&x, c, Term::app(p.clone(), vec![l]));
                            let y = self.placeholder();
                            let r = Term::app(Term::construct("or", 2), vec![tc, td, y.clone()]);
                            let qr = self.lam(&y, d, Term::app(p.clone(), vec![r]));
                            rest.push((imp((**c).clone(), (**b).clone()), ql));
                            rest.push((imp((**d).clone(), (**b).clone()), qr));
                        }
                        Atom(_) => match hyps.iter().find(|(h, _)| h == &**a) {
                            Some((_, q)) => rest.push(((**b).clone(), Term::app(p.clone(), vec![q.clone()]))),
                            None => continue,
                        },
                        _ => continue,
                    }
                    return self.prove(&rest, goal);
                }
                _ => {}
            }
        }
        // Invertible right rules.
        match goal {
            Top => return Some(Term::construct("True", 1)),
            And(a, b) => {
                let pa = self.prove(hyps, a)?;
                let pb = self.prove(hyps, b)?;
                return Some(Term::app(Term::construct("and", 1), vec![self.term(a), self.term(b), pa, pb]));
            }
            Imp(a, b) => {
                let x = self.placeholder();
                let mut h = hyps.to_vec();
                h.push(((**a).clone(), x.clone()));
                let body = self.prove(&h, b)?;
                return Some(self.lam(&x, a, body));
            }
            _ => {}
        }
        // Non-invertible rules.
        if let Or(a, b) = goal {
            for (j, side) in [a, b].into_iter().enumerate() {
                if let Some(pr) = self.prove(hyps, side) {
                    return Some(Term::app(Term::construct("or", j + 1), vec![self.term(a), self.term(b), pr]));
                }
            }
        }
        for (i, (f, p)) in hyps.iter().enumerate() {
            let Imp(cd, b) = f else { continue };
            let Imp(c, d) = &**cd else { continue };
            // From D -> B prove C -> D; then B is available.
            let k = self.placeholder();
            let mut r1 = without(i);
            let db = imp((**d).clone(), (**b).clone());
            r1.push((db.clone(), k.clone()));
            let Some(f1) = self.prove(&r1, cd) else { continue };
            let y = self.placeholder();
            let mut r2 = without(i);
            r2.push(((**b).clone(), y.clone()));
            let Some(f2) = self.prove(&r2, goal) else { continue };
            let z = self.placeholder();
            let const_d = close_lambda(&[(name("H"), self.placeholder(), self.term(c))], z.clone());
            let kval = self.lam(&z, d, Term::app(p.clone(), vec![const_d]));
            let cd_proof = Term::app(self.lam(&k, &db, f1), vec![kval]);
            let bval = Term::app(p.clone(), vec![cd_proof]);
            return Some(Term::app(self.lam(&y, b, f2), vec![bval]));
        }
        None
    }
}

/// Search for a proof of `goal` from `hyps` where atoms are given as
/// terms. Returns the proof term, if any.
pub fn prove(atoms: &[Term], hyps: &[(Formula, Term)], goal: &Formula) -> std::result::Result<Term, DecideError> {
    let mut p = Prover { atoms, steps: 0, fresh: 0 };
    p.prove(hyps, goal).ok_or(DecideError::SearchExhausted)
}

impl ProofState {
    fn intern(&self, ctx: &LocalContext, t: &Term, atoms: &mut Vec<Term>) -> usize {
        if let Some(k) = atoms.iter().position(|a| convertible(&self.env, ctx, a, t)) {
            return k;
        }
        atoms.push(t.clone());
        atoms.len() - 1
    }

    /// Read a proposition as a formula; anything else is an atom.
    fn formula(&mut self, ctx: &LocalContext, t: &Term, atoms: &mut Vec<Term>) -> Formula {
        let args = t.args();
        match (t.head(), args.len()) {
            (Term::Ind(n), 0) if &**n == "True" => return Top,
            (Term::Ind(n), 0) if &**n == "False" => return Bot,
            (Term::Ind(n), 2) if &**n == "and" || &**n == "or" => {
                let a = Box::new(self.formula(ctx, &args[0], atoms));
                let b = Box::new(self.formula(ctx, &args[1], atoms));
                return if &**n == "and" { And(a, b) } else { Or(a, b) };
            }
            (Term::Const(n), 1) if &**n == "not" => return imp(self.formula(ctx, &args[0], atoms), Bot),
            (Term::Const(n), 2) if &**n == "iff" => {
                let a = self.formula(ctx, &args[0], atoms);
                let b = self.formula(ctx, &args[1], atoms);
                return And(Box::new(imp(a.clone(), b.clone())), Box::new(imp(b, a)));
            }
            (Term::Prod(_, a, b), 0) if !b.has_rel(0) && self.is_prop(ctx, a) => {
                let fa = self.formula(ctx, a, atoms);
                let fb = self.formula(ctx, &lift(b, -1, 0), atoms);
                return imp(fa, fb);
            }
            _ => {}
        }
        Atom(self.intern(ctx, t, atoms))
    }
}

pub fn tactic(ps: &mut ProofState, g: MetaId) -> Result<()> {
    let before = ps.metas.len();
    ps.intros(g, &[])?;
    let g = ps.new_goals(g, before).first().copied().unwrap_or(g);
    let ctx = ps.ctx(g);
    let concl = ps.concl(g);
    if !ps.is_prop(&ctx, &concl) {
        return Err(DecideError::NotPropositional(ps.show(&ctx, &concl)).into());
    }
    let mut atoms = Vec::new();
    let mut hyps = Vec::new();
    for i in (0..ctx.len()).rev() {
        let ty = ctx.type_of(i).expect("in context");
        if ps.is_prop(&ctx, &ty) {
            let f = ps.formula(&ctx, &ty, &mut atoms);
            hyps.push((f, Term::Rel(i)));
        }
    }
    let goal = ps.formula(&ctx, &concl, &mut atoms);
    let proof = prove(&atoms, &hyps, &goal)?;
    ps.close(g, proof, "intuition")
}
