//! `omega`: linear arithmetic over `nat`. The hypotheses and the negated
//! goal are put in disjunctive normal form; every case is refuted by the
//! linear solver and the resulting certificate is replayed before the goal
//! is closed with an oracle lemma.

use crate::engine::{ProofState, Result};
use crate::kernel::term::{lift, MetaId, Term};
use crate::kernel::{LocalContext, OracleKind};
use crate::surface::print::nat_literal;

use super::linear::{refute_all, verify_certificate, Constraint, Evidence, Linear, Outcome2};
use super::DecideError;

use num_bigint::BigInt;

/// Disjunctive normal forms larger than this are not attempted.
const MAX_CASES: usize = 4096;

#[derive(Clone)]
enum Prop {
    Lit(Constraint),
    And(Box<Prop>, Box<Prop>),
    Or(Box<Prop>, Box<Prop>),
    Not(Box<Prop>),
    Top,
    Bot,
}

type Dnf = Vec<Vec<Constraint>>;

fn product(a: Dnf, b: Dnf) -> std::result::Result<Dnf, DecideError> {
    if a.len() * b.len() > MAX_CASES {
        return Err(DecideError::GaveUp("too many cases".into()));
    }
    Ok(a.iter().flat_map(|x| b.iter().map(move |y| [x.clone(), y.clone()].concat())).collect())
}

fn ne(l: &Linear) -> Dnf {
    vec![vec![Constraint::Ge(l.plus_const(-1))], vec![Constraint::Ge(l.scale(&BigInt::from(-1)).plus_const(-1))]]
}

fn dnf(p: &Prop, positive: bool) -> std::result::Result<Dnf, DecideError> {
    Ok(match (p, positive) {
        (Prop::Lit(c), true) => vec![vec![c.clone()]],
        (Prop::Lit(Constraint::Ge(l)), false) => vec![vec![Constraint::Ge(l.scale(&BigInt::from(-1)).plus_const(-1))]],
        (Prop::Lit(Constraint::Eq(l)), false) => ne(l),
        (Prop::And(a, b), true) | (Prop::Or(a, b), false) => product(dnf(a, positive)?, dnf(b, positive)?)?,
        (Prop::Or(a, b), true) | (Prop::And(a, b), false) => {
            let mut v = dnf(a, positive)?;
            v.extend(dnf(b, positive)?);
            v
        }
        (Prop::Not(a), _) => dnf(a, !positive)?,
        (Prop::Top, true) | (Prop::Bot, false) => vec![Vec::new()],
        (Prop::Top, false) | (Prop::Bot, true) => Vec::new(),
    })
}

fn const_head(t: &Term, nargs: usize) -> Option<&str> {
    match t.head() {
        Term::Const(n) if t.args().len() == nargs => Some(n),
        _ => None,
    }
}

impl ProofState {
    fn omega_term(
        &self,
        ctx: &LocalContext,
        t: &Term,
        atoms: &mut Vec<Term>,
    ) -> std::result::Result<Linear, DecideError> {
        if let Some(n) = nat_literal(t) {
            return Ok(Linear::constant(n));
        }
        let args = t.args();
        match const_head(t, 2) {
            Some("plus") => {
                return Ok(self.omega_term(ctx, &args[0], atoms)?.add(&self.omega_term(ctx, &args[1], atoms)?))
            }
            Some("mult") => {
                let a = self.omega_term(ctx, &args[0], atoms)?;
                let b = self.omega_term(ctx, &args[1], atoms)?;
                return match (a.is_constant(), b.is_constant()) {
                    (true, _) => Ok(b.scale(&a.constant)),
                    (_, true) => Ok(a.scale(&b.constant)),
                    _ => Err(DecideError::NonLinearTerm(self.show(ctx, t))),
                };
            }
            Some("minus") => return Err(DecideError::ContainsSubtraction(self.show(ctx, t))),
            _ => {}
        }
        if let (Term::Construct(n, 2), 1) = (t.head(), args.len()) {
            if &**n == "nat" {
                return Ok(self.omega_term(ctx, &args[0], atoms)?.plus_const(1));
            }
        }
        let k = match atoms.iter().position(|a| a == t) {
            Some(k) => k,
            None => {
                atoms.push(t.clone());
                atoms.len() - 1
            }
        };
        Ok(Linear::var(k))
    }

    fn is_nat(&self, ctx: &LocalContext, ty: &Term) -> bool {
        matches!(self.whnf(ctx, ty), Term::Ind(n) if &*n == "nat")
    }

    /// Read a proposition; `None` when it is not arithmetic.
    fn omega_prop(
        &mut self,
        ctx: &LocalContext,
        t: &Term,
        atoms: &mut Vec<Term>,
    ) -> std::result::Result<Option<Prop>, DecideError> {
        let args = t.args();
        let diff = |ps: &Self,
                    atoms: &mut Vec<Term>,
                    a: &Term,
                    b: &Term,
                    k: i64|
         -> std::result::Result<Linear, DecideError> {
            Ok(ps.omega_term(ctx, a, atoms)?.sub(&ps.omega_term(ctx, b, atoms)?).plus_const(k))
        };
        let lit = |c| Ok(Some(Prop::Lit(c)));
        if let Some(op) = const_head(t, 2) {
            let (a, b) = (&args[0], &args[1]);
            match op {
                "lt" => return lit(Constraint::Ge(diff(self, atoms, b, a, -1)?)),
                "gt" => return lit(Constraint::Ge(diff(self, atoms, a, b, -1)?)),
                "ge" => return lit(Constraint::Ge(diff(self, atoms, a, b, 0)?)),
                "iff" => {
                    let (Some(p), Some(q)) = (self.omega_prop(ctx, a, atoms)?, self.omega_prop(ctx, b, atoms)?) else {
                        return Ok(None);
                    };
                    let imp = |x, y| Prop::Or(Box::new(Prop::Not(Box::new(x))), Box::new(y));
                    return Ok(Some(Prop::And(Box::new(imp(p.clone(), q.clone())), Box::new(imp(q, p)))));
                }
                _ => {}
            }
        }
        if const_head(t, 1) == Some("not") {
            return Ok(self.omega_prop(ctx, &args[0], atoms)?.map(|p| Prop::Not(Box::new(p))));
        }
        match (t.head(), args.len()) {
            (Term::Ind(n), 0) if &**n == "True" => return Ok(Some(Prop::Top)),
            (Term::Ind(n), 0) if &**n == "False" => return Ok(Some(Prop::Bot)),
            (Term::Ind(n), 2) if &**n == "le" => return lit(Constraint::Ge(diff(self, atoms, &args[1], &args[0], 0)?)),
            (Term::Ind(n), 3) if &**n == "eq" => {
                if !self.is_nat(ctx, &args[0]) {
                    return Ok(None);
                }
                return lit(Constraint::Eq(diff(self, atoms, &args[1], &args[2], 0)?));
            }
            (Term::Ind(n), 2) if &**n == "and" || &**n == "or" => {
                let (Some(p), Some(q)) =
                    (self.omega_prop(ctx, &args[0], atoms)?, self.omega_prop(ctx, &args[1], atoms)?)
                else {
                    return Ok(None);
                };
                let (p, q) = (Box::new(p), Box::new(q));
                return Ok(Some(if &**n == "and" { Prop::And(p, q) } else { Prop::Or(p, q) }));
            }
            (Term::Prod(_, a, b), 0) if !b.has_rel(0) && self.is_prop(ctx, a) => {
                let (Some(p), Some(q)) =
                    (self.omega_prop(ctx, a, atoms)?, self.omega_prop(ctx, &lift(b, -1, 0), atoms)?)
                else {
                    return Ok(None);
                };
                return Ok(Some(Prop::Or(Box::new(Prop::Not(Box::new(p))), Box::new(q))));
            }
            _ => {}
        }
        Ok(None)
    }
}

pub fn tactic(ps: &mut ProofState, g: MetaId) -> Result<()> {
    if !ps.env.has_package("Omega") {
        return Err(DecideError::OmegaNotLoaded.into());
    }
    let before = ps.metas.len();
    ps.intros(g, &[])?;
    let g = ps.new_goals(g, before).first().copied().unwrap_or(g);
    let ctx = ps.ctx(g);
    let concl = ps.metas.instantiate(&ps.concl(g));
    let mut atoms = Vec::new();
    let goal = ps.omega_prop(&ctx, &concl, &mut atoms)?.ok_or(DecideError::NotArithmetic)?;
    let mut whole = Prop::Not(Box::new(goal));
    for i in 0..ctx.len() {
        let ty = ps.metas.instantiate(&ctx.type_of(i).expect("in context"));
        if !ps.is_prop(&ctx, &ty) {
            continue;
        }
        // Hypotheses outside the fragment are ignored; atoms they
        // introduced are harmless.
        if let Ok(Some(h)) = ps.omega_prop(&ctx, &ty, &mut atoms) {
            whole = Prop::And(Box::new(h), Box::new(whole));
        }
    }
    let nonneg: Vec<Constraint> = (0..atoms.len()).map(|k| Constraint::Ge(Linear::var(k))).collect();
    let system: Vec<Vec<Constraint>> = dnf(&whole, true)?.into_iter().map(|c| [nonneg.clone(), c].concat()).collect();
    let names: Vec<String> = atoms.iter().map(|a| ps.show(&ctx, a)).collect();
    match refute_all(&system) {
        Outcome2::Refuted(certificate) => {
            verify_certificate(&system, &certificate)
                .map_err(|e| DecideError::GaveUp(format!("certificate rejected: {e}")))?;
            let evidence = Evidence { system, certificate };
            ps.close_by_oracle(g, OracleKind::Omega, evidence.to_string())
        }
        Outcome2::Model(m) => {
            let shown: Vec<String> = names
                .iter()
                .enumerate()
                .map(|(k, n)| format!("{n} = {}", m.get(&k).cloned().unwrap_or_default()))
                .collect();
            Err(DecideError::NotProvable(shown.join(", ")).into())
        }
        Outcome2::GaveUp(why) => Err(DecideError::GaveUp(why).into()),
    }
}
