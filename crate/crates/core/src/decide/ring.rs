//! `ring`: equalities over `nat` modulo the commutative semiring laws.
//! Both sides are read as polynomials over opaque atoms; equal canonical
//! forms close the goal with an oracle lemma, after a numeric self-check.

use std::collections::BTreeMap;
use std::fmt::Write;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::{ProofState, Result};
use crate::kernel::term::{map_term, MetaId, Term};
use crate::kernel::{LocalContext, OracleKind};
use crate::reduction::normalize_in;
use crate::surface::print::nat_literal;

use super::DecideError;

/// Sum of monomials; a monomial is the sorted list of its atom indices.
/// Zero coefficients are never stored, so equal polynomials are equal
/// maps.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly(BTreeMap<Vec<usize>, BigUint>);

impl Poly {
    pub fn constant(n: impl Into<BigUint>) -> Poly {
        let n = n.into();
        let mut m = BTreeMap::new();
        if !n.is_zero() {
            m.insert(Vec::new(), n);
        }
        Poly(m)
    }

    pub fn atom(k: usize) -> Poly {
        Poly(BTreeMap::from([(vec![k], BigUint::one())]))
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut m = self.0.clone();
        for (mono, c) in &o.0 {
            *m.entry(mono.clone()).or_default() += c;
        }
        Poly(m)
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut m: BTreeMap<Vec<usize>, BigUint> = BTreeMap::new();
        for (ma, ca) in &self.0 {
            for (mb, cb) in &o.0 {
                let mut mono = ma.clone();
                mono.extend(mb);
                mono.sort_unstable();
                *m.entry(mono).or_default() += ca * cb;
            }
        }
        Poly(m)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &BigUint)> {
        self.0.iter()
    }

    pub fn eval(&self, vals: &[u64]) -> BigUint {
        self.0.iter().map(|(mono, c)| mono.iter().fold(c.clone(), |acc, k| acc * BigUint::from(vals[*k]))).sum()
    }

    /// `c1 * a * b + .. + c0`, atoms shown with `names`.
    pub fn show(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (mono, c)) in self.0.iter().rev().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            let mut parts: Vec<String> = mono.iter().map(|k| names[*k].clone()).collect();
            if !c.is_one() || parts.is_empty() {
                parts.insert(0, c.to_string());
            }
            let _ = write!(out, "{}", parts.join(" * "));
        }
        out
    }
}

fn head_is(t: &Term, name: &str, nargs: usize) -> bool {
    t.args().len() == nargs && matches!(t.head(), Term::Const(n) if &**n == name)
}

/// Read `t` as a polynomial, interning non-arithmetic subterms in `atoms`.
/// Subtractions are atoms too; see [`tactic`] for how that is reported.
pub fn to_poly(t: &Term, atoms: &mut Vec<Term>) -> std::result::Result<Poly, DecideError> {
    if let Some(n) = nat_literal(t) {
        return Ok(Poly::constant(n));
    }
    let args = t.args();
    if head_is(t, "plus", 2) {
        return Ok(to_poly(&args[0], atoms)?.add(&to_poly(&args[1], atoms)?));
    }
    if head_is(t, "mult", 2) {
        return Ok(to_poly(&args[0], atoms)?.mul(&to_poly(&args[1], atoms)?));
    }
    if let (Term::Construct(n, 2), 1) = (t.head(), args.len()) {
        if &**n == "nat" {
            return Ok(to_poly(&args[0], atoms)?.add(&Poly::constant(1u32)));
        }
    }
    let k = match atoms.iter().position(|a| a == t) {
        Some(k) => k,
        None => {
            atoms.push(t.clone());
            atoms.len() - 1
        }
    };
    Ok(Poly::atom(k))
}

fn numeral(n: u64) -> Term {
    (0..n).fold(Term::construct("nat", 1), |acc, _| Term::app(Term::construct("nat", 2), vec![acc]))
}

/// `t` with every atom replaced by the numeral for its value.
fn instantiate_atoms(t: &Term, atoms: &[Term], vals: &[u64]) -> Term {
    map_term(t, 0, &|u, depth| {
        if depth != 0 {
            return None;
        }
        atoms.iter().position(|a| a == u).map(|k| numeral(vals[k]))
    })
}

impl ProofState {
    fn ring_sides(&self, ctx: &LocalContext, g: MetaId) -> std::result::Result<(Term, Term), DecideError> {
        let concl = self.concl(g);
        let (a, l, r) = self.as_equality(ctx, &concl).ok_or(DecideError::NotARingGoal)?;
        if !matches!(self.whnf(ctx, &a), Term::Ind(n) if &*n == "nat") {
            return Err(DecideError::NotARingGoal);
        }
        Ok((self.metas.instantiate(&l), self.metas.instantiate(&r)))
    }
}

/// Largest value of a side that the evaluation cross-check will build.
const SELF_CHECK_LIMIT: u32 = 300;

pub fn tactic(ps: &mut ProofState, g: MetaId) -> Result<()> {
    let ctx = ps.ctx(g);
    let (l, r) = ps.ring_sides(&ctx, g)?;
    let mut atoms = Vec::new();
    let pl = to_poly(&l, &mut atoms)?;
    let pr = to_poly(&r, &mut atoms)?;
    let names: Vec<String> = atoms.iter().map(|a| ps.show(&ctx, a)).collect();
    if pl != pr {
        // Equal up to the meaning of subtraction is not something we decide.
        if atoms.iter().any(|a| head_is(a, "minus", 2)) {
            return Err(DecideError::UnsupportedOperator("-".into()).into());
        }
        return Err(DecideError::NormalFormsDiffer(pl.show(&names), pr.show(&names)).into());
    }
    // Cross-check the normal forms by evaluation in the kernel's reducer.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..8 {
        let vals: Vec<u64> = (0..atoms.len()).map(|_| rng.gen_range(0..5)).collect();
        // Unary numerals this large make the reducer recurse too deep.
        if pl.eval(&vals) > BigUint::from(SELF_CHECK_LIMIT) {
            continue;
        }
        let lv = nat_literal(&normalize_in(&ps.env, &ctx, &instantiate_atoms(&l, &atoms, &vals)));
        let rv = nat_literal(&normalize_in(&ps.env, &ctx, &instantiate_atoms(&r, &atoms, &vals)));
        if lv.is_none() || lv != rv {
            return Err(DecideError::SelfCheckFailed(format!("{vals:?}")).into());
        }
    }
    let evidence = format!("(ring (lhs {}) (rhs {}))", pl.show(&names), pr.show(&names));
    ps.close_by_oracle(g, OracleKind::Ring, evidence)
}
