//! Linear integer constraints, a refutation procedure for conjunctions of
//! them, and the certificate format it emits.
//!
//! A refutation derives new `>= 0` constraints as nonnegative combinations
//! of earlier ones (equalities may take any sign), optionally tightened by
//! dividing through the gcd of the coefficients and rounding the constant
//! down. Integer completeness comes from case splits `e <= k \/ e >= k+1`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Var = usize;

/// `sum coeffs[v] * v + constant`. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Linear {
    pub coeffs: BTreeMap<Var, BigInt>,
    pub constant: BigInt,
}

impl Linear {
    pub fn constant(c: impl Into<BigInt>) -> Linear {
        Linear { coeffs: BTreeMap::new(), constant: c.into() }
    }

    pub fn var(v: Var) -> Linear {
        Linear { coeffs: BTreeMap::from([(v, BigInt::one())]), constant: BigInt::zero() }
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, v: Var) -> BigInt {
        self.coeffs.get(&v).cloned().unwrap_or_default()
    }

    pub fn add(&self, o: &Linear) -> Linear {
        let mut r = self.clone();
        for (v, c) in &o.coeffs {
            let e = r.coeffs.entry(*v).or_default();
            *e += c;
            if e.is_zero() {
                r.coeffs.remove(v);
            }
        }
        r.constant += &o.constant;
        r
    }

    pub fn scale(&self, k: &BigInt) -> Linear {
        if k.is_zero() {
            return Linear::default();
        }
        Linear { coeffs: self.coeffs.iter().map(|(v, c)| (*v, c * k)).collect(), constant: &self.constant * k }
    }

    pub fn sub(&self, o: &Linear) -> Linear {
        self.add(&o.scale(&-BigInt::one()))
    }

    pub fn plus_const(&self, c: i64) -> Linear {
        self.add(&Linear::constant(c))
    }

    /// Divide by the gcd of the coefficients, rounding the constant down.
    /// Sound for `>= 0` over the integers.
    pub fn tighten(&self) -> Linear {
        let g = self.coeffs.values().fold(BigInt::zero(), |g, c| g.gcd(c));
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        Linear {
            coeffs: self.coeffs.iter().map(|(v, c)| (*v, c / &g)).collect(),
            constant: self.constant.div_floor(&g),
        }
    }

    pub fn eval(&self, m: &BTreeMap<Var, BigInt>) -> BigInt {
        self.coeffs.iter().map(|(v, c)| c * m.get(v).cloned().unwrap_or_default()).sum::<BigInt>() + &self.constant
    }

    fn eval_q(&self, m: &BTreeMap<Var, BigRational>) -> BigRational {
        let mut acc = BigRational::from_integer(self.constant.clone());
        for (v, c) in &self.coeffs {
            acc += m.get(v).cloned().unwrap_or_default() * BigRational::from_integer(c.clone());
        }
        acc
    }
}

impl fmt::Display for Linear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(+")?;
        for (v, c) in &self.coeffs {
            write!(f, " (* {c} x{v})")?;
        }
        write!(f, " {})", self.constant)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constraint {
    /// `l >= 0`
    Ge(Linear),
    /// `l = 0`
    Eq(Linear),
}

impl Constraint {
    pub fn linear(&self) -> &Linear {
        match self {
            Constraint::Ge(l) | Constraint::Eq(l) => l,
        }
    }

    pub fn holds(&self, m: &BTreeMap<Var, BigInt>) -> bool {
        match self {
            Constraint::Ge(l) => !l.eval(m).is_negative(),
            Constraint::Eq(l) => l.eval(m).is_zero(),
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Ge(l) => write!(f, "(>= {l})"),
            Constraint::Eq(l) => write!(f, "(= {l})"),
        }
    }
}

/// One derived constraint `tighten?(sum m_i * c_i) >= 0`, indexing the
/// clause's constraints followed by earlier derivations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub from: Vec<(usize, BigInt)>,
    pub tighten: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Refutation {
    /// The last derivation must be a constant `c >= 0` with `c < 0`.
    Chain(Vec<Derivation>),
    /// `on <= bound` (appended as `bound - on >= 0`) refuted by `below`,
    /// `on >= bound + 1` refuted by `above`.
    Split { on: Linear, bound: BigInt, below: Box<Refutation>, above: Box<Refutation> },
}

/// One refutation per disjunct of the negated goal.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Certificate {
    pub cases: Vec<Refutation>,
}

impl fmt::Display for Refutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Refutation::Chain(ds) => {
                write!(f, "(chain")?;
                for d in ds {
                    write!(f, " ({}", if d.tighten { "tighten" } else { "sum" })?;
                    for (i, m) in &d.from {
                        write!(f, " ({i} {m})")?;
                    }
                    write!(f, ")")?;
                }
                write!(f, ")")
            }
            Refutation::Split { on, bound, below, above } => write!(f, "(split {on} {bound} {below} {above})"),
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(certificate")?;
        for c in &self.cases {
            write!(f, " {c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertError {
    #[error("expected {expected} cases, found {found}")]
    CaseCount { expected: usize, found: usize },
    #[error("empty derivation")]
    Empty,
    #[error("constraint index {0} out of range")]
    BadIndex(usize),
    #[error("zero multiplier on constraint {0}")]
    ZeroMultiplier(usize),
    #[error("negative multiplier on inequality {0}")]
    NegativeMultiplier(usize),
    #[error("the derivation does not end in a false constant")]
    NotContradictory,
}

fn replay(cons: &[Constraint], r: &Refutation) -> Result<(), CertError> {
    match r {
        Refutation::Chain(ds) => {
            let mut list = cons.to_vec();
            for d in ds {
                if d.from.is_empty() {
                    return Err(CertError::Empty);
                }
                let mut sum = Linear::default();
                for (i, m) in &d.from {
                    let c = list.get(*i).ok_or(CertError::BadIndex(*i))?;
                    if m.is_zero() {
                        return Err(CertError::ZeroMultiplier(*i));
                    }
                    if matches!(c, Constraint::Ge(_)) && m.is_negative() {
                        return Err(CertError::NegativeMultiplier(*i));
                    }
                    sum = sum.add(&c.linear().scale(m));
                }
                list.push(Constraint::Ge(if d.tighten { sum.tighten() } else { sum }));
            }
            if ds.is_empty() {
                return Err(CertError::Empty);
            }
            match list.last() {
                Some(Constraint::Ge(l)) if l.is_constant() && l.constant.is_negative() => Ok(()),
                _ => Err(CertError::NotContradictory),
            }
        }
        Refutation::Split { on, bound, below, above } => {
            let mut lo = cons.to_vec();
            lo.push(Constraint::Ge(Linear::constant(bound.clone()).sub(on)));
            replay(&lo, below)?;
            let mut hi = cons.to_vec();
            hi.push(Constraint::Ge(on.sub(&Linear::constant(bound + 1))));
            replay(&hi, above)
        }
    }
}

/// Check that `r` derives a contradiction from `cons`.
pub fn verify_refutation(cons: &[Constraint], r: &Refutation) -> Result<(), CertError> {
    replay(cons, r)
}

/// Check a certificate against a disjunction of conjunctions.
pub fn verify_certificate(clauses: &[Vec<Constraint>], cert: &Certificate) -> Result<(), CertError> {
    if clauses.len() != cert.cases.len() {
        return Err(CertError::CaseCount { expected: clauses.len(), found: cert.cases.len() });
    }
    clauses.iter().zip(&cert.cases).try_for_each(|(c, r)| replay(c, r))
}

/// Result of searching one conjunction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Refuted(Refutation),
    Model(BTreeMap<Var, BigInt>),
    GaveUp(String),
}

/// Bounds on the number of constraints alive during elimination and on
/// the number of split cases.
const MAX_CONSTRAINTS: usize = 20_000;
const MAX_SPLITS: usize = 2_000;

enum Shadow {
    Refuted(Vec<Derivation>),
    Feasible(BTreeMap<Var, BigRational>),
    TooBig,
}

/// Sources of a derived constraint.
type Node = Vec<(usize, BigInt)>;

/// Fourier-Motzkin over the rationals, with every derived inequality
/// tightened. Refutations found here are valid over the integers; a
/// feasible shadow yields a rational point.
fn shadow(cons: &[Constraint]) -> Shadow {
    let n = cons.len();
    let mut nodes: Vec<Node> = Vec::new();
    let idx = |nodes: &mut Vec<Node>, from: Node| {
        nodes.push(from);
        n + nodes.len() - 1
    };
    let mut work: Vec<(usize, Linear)> = Vec::new();
    for (i, c) in cons.iter().enumerate() {
        match c {
            Constraint::Ge(l) if l.tighten() == *l => work.push((i, l.clone())),
            Constraint::Ge(l) => work.push((idx(&mut nodes, vec![(i, BigInt::one())]), l.tighten())),
            Constraint::Eq(l) => {
                for s in [BigInt::one(), -BigInt::one()] {
                    let t = l.scale(&s).tighten();
                    work.push((idx(&mut nodes, vec![(i, s)]), t));
                }
            }
        }
    }
    // (variable, lower bounds, upper bounds) in elimination order.
    let mut stages: Vec<(Var, Vec<Linear>, Vec<Linear>)> = Vec::new();
    loop {
        if let Some((k, _)) = work.iter().find(|(_, l)| l.is_constant() && l.constant.is_negative()) {
            if *k < n {
                return Shadow::Refuted(vec![Derivation { from: vec![(*k, BigInt::one())], tighten: true }]);
            }
            return Shadow::Refuted(cone(n, &nodes, *k));
        }
        work.retain(|(_, l)| !l.is_constant());
        let mut seen = BTreeSet::new();
        work.retain(|(_, l)| seen.insert(l.clone()));
        let vars: BTreeSet<Var> = work.iter().flat_map(|(_, l)| l.coeffs.keys().copied()).collect();
        let Some(x) = vars.iter().copied().min_by_key(|v| {
            let p = work.iter().filter(|(_, l)| l.coeff(*v).is_positive()).count();
            let q = work.iter().filter(|(_, l)| l.coeff(*v).is_negative()).count();
            p * q
        }) else {
            break;
        };
        let (with, mut rest): (Vec<_>, Vec<_>) = work.into_iter().partition(|(_, l)| !l.coeff(x).is_zero());
        let (lo, hi): (Vec<_>, Vec<_>) = with.into_iter().partition(|(_, l)| l.coeff(x).is_positive());
        for (p, lp) in &lo {
            for (q, lq) in &hi {
                let a = lp.coeff(x);
                let b = -lq.coeff(x);
                let sum = lp.scale(&b).add(&lq.scale(&a)).tighten();
                let k = idx(&mut nodes, vec![(*p, b), (*q, a)]);
                rest.push((k, sum));
            }
        }
        if rest.len() > MAX_CONSTRAINTS {
            return Shadow::TooBig;
        }
        stages.push((x, lo.into_iter().map(|p| p.1).collect(), hi.into_iter().map(|p| p.1).collect()));
        work = rest;
    }
    Shadow::Feasible(back_substitute(&stages))
}

/// Derivations needed for node `k`, renumbered densely after the clause.
fn cone(n: usize, nodes: &[Node], k: usize) -> Vec<Derivation> {
    let mut need = BTreeSet::new();
    let mut stack = vec![k];
    while let Some(i) = stack.pop() {
        if i >= n && need.insert(i) {
            stack.extend(nodes[i - n].iter().map(|(j, _)| *j));
        }
    }
    let order: Vec<usize> = need.into_iter().collect();
    let renum = |j: usize| if j < n { j } else { n + order.binary_search(&j).expect("in cone") };
    order
        .iter()
        .map(|i| Derivation { from: nodes[i - n].iter().map(|(j, m)| (renum(*j), m.clone())).collect(), tighten: true })
        .collect()
}

fn back_substitute(stages: &[(Var, Vec<Linear>, Vec<Linear>)]) -> BTreeMap<Var, BigRational> {
    let mut m: BTreeMap<Var, BigRational> = BTreeMap::new();
    for (x, lo, hi) in stages.iter().rev() {
        // a*x + rest >= 0 with a > 0 gives x >= -rest/a; with a < 0, x <= rest/-a.
        let bound = |l: &Linear| {
            let a = BigRational::from_integer(l.coeff(*x));
            let mut rest = l.clone();
            rest.coeffs.remove(x);
            -rest.eval_q(&m) / a
        };
        let lower = lo.iter().map(bound).max();
        let upper = hi.iter().map(bound).min();
        let v = match (lower, upper) {
            (Some(l), Some(u)) => {
                let c = l.ceil();
                if c <= u {
                    c
                } else {
                    l
                }
            }
            (Some(l), None) => l.ceil(),
            (None, Some(u)) => u.floor(),
            (None, None) => BigRational::zero(),
        };
        m.insert(*x, v);
    }
    m
}

fn search(cons: &[Constraint], splits: &mut usize) -> Outcome {
    match shadow(cons) {
        Shadow::Refuted(ds) => Outcome::Refuted(Refutation::Chain(ds)),
        Shadow::TooBig => Outcome::GaveUp("too many constraints".into()),
        Shadow::Feasible(q) => {
            let Some((x, v)) = q.iter().find(|(_, v)| !v.is_integer()) else {
                return Outcome::Model(q.into_iter().map(|(x, v)| (x, v.to_integer())).collect());
            };
            *splits += 1;
            if *splits > MAX_SPLITS {
                return Outcome::GaveUp("too many case splits".into());
            }
            let on = Linear::var(*x);
            let bound = v.floor().to_integer();
            let mut lo = cons.to_vec();
            lo.push(Constraint::Ge(Linear::constant(bound.clone()).sub(&on)));
            let below = match search(&lo, splits) {
                Outcome::Refuted(r) => r,
                other => return other,
            };
            let mut hi = cons.to_vec();
            hi.push(Constraint::Ge(on.sub(&Linear::constant(&bound + 1))));
            let above = match search(&hi, splits) {
                Outcome::Refuted(r) => r,
                other => return other,
            };
            Outcome::Refuted(Refutation::Split { on, bound, below: Box::new(below), above: Box::new(above) })
        }
    }
}

/// Decide a conjunction over the integers: a refutation or a model.
/// Variables not mentioned by the model are unconstrained.
pub fn solve(cons: &[Constraint]) -> Outcome {
    let mut splits = 0;
    search(cons, &mut splits)
}

/// Decide a disjunction of conjunctions: a certificate refuting every
/// case, or a model of the first satisfiable one.
pub fn refute_all(clauses: &[Vec<Constraint>]) -> Outcome2 {
    let mut cert = Certificate::default();
    for c in clauses {
        match solve(c) {
            Outcome::Refuted(r) => cert.cases.push(r),
            Outcome::Model(m) => return Outcome2::Model(m),
            Outcome::GaveUp(why) => return Outcome2::GaveUp(why),
        }
    }
    Outcome2::Refuted(cert)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome2 {
    Refuted(Certificate),
    Model(BTreeMap<Var, BigInt>),
    GaveUp(String),
}

/// A system together with its certificate, as recorded in oracle lemmas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evidence {
    pub system: Vec<Vec<Constraint>>,
    pub certificate: Certificate,
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(omega (system")?;
        for clause in &self.system {
            write!(f, " (clause")?;
            for c in clause {
                write!(f, " {c}")?;
            }
            write!(f, ")")?;
        }
        write!(f, ") {})", self.certificate)
    }
}

enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

fn read_sexp(src: &str) -> Option<Sexp> {
    let spaced = src.replace('(', " ( ").replace(')', " ) ");
    let mut toks = spaced.split_whitespace();
    let mut stack: Vec<Vec<Sexp>> = Vec::new();
    let mut done = None;
    for t in toks.by_ref() {
        match t {
            "(" => stack.push(Vec::new()),
            ")" => {
                let l = Sexp::List(stack.pop()?);
                match stack.last_mut() {
                    Some(top) => top.push(l),
                    None => {
                        done = Some(l);
                        break;
                    }
                }
            }
            a => stack.last_mut()?.push(Sexp::Atom(a.to_string())),
        }
    }
    if toks.next().is_some() {
        return None;
    }
    done
}

impl Sexp {
    fn list(&self, head: &str) -> Option<&[Sexp]> {
        match self {
            Sexp::List(v) => match v.split_first() {
                Some((Sexp::Atom(h), rest)) if h == head => Some(rest),
                _ => None,
            },
            Sexp::Atom(_) => None,
        }
    }

    fn int(&self) -> Option<BigInt> {
        match self {
            Sexp::Atom(a) => a.parse().ok(),
            Sexp::List(_) => None,
        }
    }

    fn linear(&self) -> Option<Linear> {
        let items = self.list("+")?;
        let (last, terms) = items.split_last()?;
        let mut l = Linear::constant(last.int()?);
        for t in terms {
            let [c, Sexp::Atom(x)] = t.list("*")? else { return None };
            let v: Var = x.strip_prefix('x')?.parse().ok()?;
            l = l.add(&Linear::var(v).scale(&c.int()?));
        }
        Some(l)
    }

    fn constraint(&self) -> Option<Constraint> {
        if let Some([l]) = self.list(">=") {
            return Some(Constraint::Ge(l.linear()?));
        }
        let [l] = self.list("=")? else { return None };
        Some(Constraint::Eq(l.linear()?))
    }

    fn refutation(&self) -> Option<Refutation> {
        if let Some(steps) = self.list("chain") {
            let mut ds = Vec::new();
            for s in steps {
                let Sexp::List(v) = s else { return None };
                let (Sexp::Atom(kind), from) = v.split_first()? else { return None };
                let tighten = match kind.as_str() {
                    "tighten" => true,
                    "sum" => false,
                    _ => return None,
                };
                let from = from
                    .iter()
                    .map(|p| match p {
                        Sexp::List(pair) if pair.len() == 2 => Some((pair[0].int()?.try_into().ok()?, pair[1].int()?)),
                        _ => None,
                    })
                    .collect::<Option<Vec<_>>>()?;
                ds.push(Derivation { from, tighten });
            }
            return Some(Refutation::Chain(ds));
        }
        let [on, bound, below, above] = self.list("split")? else { return None };
        Some(Refutation::Split {
            on: on.linear()?,
            bound: bound.int()?,
            below: Box::new(below.refutation()?),
            above: Box::new(above.refutation()?),
        })
    }
}

impl Evidence {
    /// Read back the printed form.
    pub fn parse(src: &str) -> Option<Evidence> {
        let top = read_sexp(src)?;
        let [sys, cert] = top.list("omega")? else { return None };
        let system = sys
            .list("system")?
            .iter()
            .map(|c| c.list("clause")?.iter().map(Sexp::constraint).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        let cases = cert.list("certificate")?.iter().map(Sexp::refutation).collect::<Option<Vec<_>>>()?;
        Some(Evidence { system, certificate: Certificate { cases } })
    }

    pub fn verify(&self) -> Result<(), CertError> {
        verify_certificate(&self.system, &self.certificate)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lin(coeffs: &[i64], k: i64) -> Linear {
        coeffs
            .iter()
            .enumerate()
            .fold(Linear::constant(k), |acc, (v, c)| acc.add(&Linear::var(v).scale(&BigInt::from(*c))))
    }

    fn ge(coeffs: &[i64], k: i64) -> Constraint {
        Constraint::Ge(lin(coeffs, k))
    }

    fn d(from: &[(usize, i64)], tighten: bool) -> Derivation {
        Derivation { from: from.iter().map(|(i, m)| (*i, BigInt::from(*m))).collect(), tighten }
    }

    #[test]
    fn tighten_divides_and_floors() {
        // 2x - 3 >= 0 becomes x - 2 >= 0 over the integers.
        assert_eq!(lin(&[2], -3).tighten(), lin(&[1], -2));
        assert_eq!(lin(&[3, 6], 4).tighten(), lin(&[1, 2], 1));
    }

    #[test]
    fn display_is_an_sexp() {
        assert_eq!(ge(&[2, 0, -1], 5).to_string(), "(>= (+ (* 2 x0) (* -1 x2) 5))");
    }

    #[test]
    fn checks_a_simple_refutation() {
        // x >= 1 and -x >= 0.
        let cons = [ge(&[1], -1), ge(&[-1], 0)];
        let r = Refutation::Chain(vec![d(&[(0, 1), (1, 1)], false)]);
        assert_eq!(verify_refutation(&cons, &r), Ok(()));
    }

    #[test]
    fn rejects_bad_multipliers() {
        let cons = [ge(&[1], -1), ge(&[-1], 0)];
        let zero = Refutation::Chain(vec![d(&[(0, 0), (1, 0)], false)]);
        assert_eq!(verify_refutation(&cons, &zero), Err(CertError::ZeroMultiplier(0)));
        // Scaling an inequality by a negative number flips it.
        let neg = Refutation::Chain(vec![d(&[(0, -1)], false)]);
        assert_eq!(verify_refutation(&cons, &neg), Err(CertError::NegativeMultiplier(0)));
        let short = Refutation::Chain(vec![d(&[(0, 1)], false)]);
        assert_eq!(verify_refutation(&cons, &short), Err(CertError::NotContradictory));
        let oob = Refutation::Chain(vec![d(&[(7, 1)], false)]);
        assert_eq!(verify_refutation(&cons, &oob), Err(CertError::BadIndex(7)));
    }

    #[test]
    fn equalities_take_either_sign() {
        // x = 2 and x <= 1.
        let cons = [Constraint::Eq(lin(&[1], -2)), ge(&[-1], 1)];
        let r = Refutation::Chain(vec![d(&[(0, 1), (1, 1)], false)]);
        assert_eq!(verify_refutation(&cons, &r), Ok(()));
    }

    #[test]
    fn tightening_is_needed_for_parity() {
        // 2x = 1 has rational but no integer solutions.
        let cons = [ge(&[2], -1), ge(&[-2], 1)];
        assert!(matches!(solve(&cons), Outcome::Refuted(_)));
    }

    #[test]
    fn case_count_must_match() {
        let clauses = vec![vec![ge(&[], -1)], vec![ge(&[], -2)]];
        let cert = Certificate { cases: vec![Refutation::Chain(vec![d(&[(0, 1)], false)])] };
        assert_eq!(verify_certificate(&clauses, &cert), Err(CertError::CaseCount { expected: 2, found: 1 }));
    }

    #[test]
    fn evidence_round_trips() {
        let system = vec![vec![ge(&[1], -1), ge(&[-1], 0)]];
        let Outcome2::Refuted(certificate) = refute_all(&system) else { panic!("refutable") };
        let ev = Evidence { system, certificate };
        let back = Evidence::parse(&ev.to_string()).expect("parses");
        assert_eq!(back.to_string(), ev.to_string());
        assert_eq!(back.verify(), Ok(()));
        assert!(Evidence::parse("(omega (system)").is_none());
    }

    fn brute(cons: &[Constraint], nvars: usize) -> bool {
        let side = 9i64;
        (0..side.pow(nvars as u32)).any(|mut code| {
            let m: BTreeMap<Var, BigInt> = (0..nvars)
                .map(|v| {
                    let x = code % side;
                    code /= side;
                    (v, BigInt::from(x))
                })
                .collect();
            cons.iter().all(|c| c.holds(&m))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

        /// Systems boxed into 0..=8: the solver agrees with enumeration,
        /// its models satisfy the system and its refutations verify.
        #[test]
        fn solver_matches_enumeration(
            rows in prop::collection::vec((prop::collection::vec(-4i64..=4, 2), -8i64..=8, any::<bool>()), 1..4)
        ) {
            let mut cons = vec![ge(&[1, 0], 0), ge(&[0, 1], 0), ge(&[-1, 0], 8), ge(&[0, -1], 8)];
            for (c, k, eq) in &rows {
                cons.push(if *eq { Constraint::Eq(lin(c, *k)) } else { ge(c, *k) });
            }
            match solve(&cons) {
                Outcome::Refuted(r) => {
                    prop_assert!(!brute(&cons, 2));
                    prop_assert_eq!(verify_refutation(&cons, &r), Ok(()));
                }
                Outcome::Model(m) => {
                    prop_assert!(cons.iter().all(|c| c.holds(&m)));
                }
                Outcome::GaveUp(why) => prop_assert!(false, "gave up: {}", why),
            }
        }
    }
}
