//! Random problem generators and the naive evaluators used as oracles.

use rand::seq::SliceRandom;
use rand::Rng;

pub const VARS: [&str; 3] = ["x", "y", "z"];

/// Semiring expressions over nat.
#[derive(Clone, Debug)]
pub enum Expr {
    Var(usize),
    Lit(u64),
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
}

use Expr::*;

fn add(a: Expr, b: Expr) -> Expr {
    Add(Box::new(a), Box::new(b))
}

fn mul(a: Expr, b: Expr) -> Expr {
    Mul(Box::new(a), Box::new(b))
}

impl Expr {
    pub fn eval(&self, vals: &[u128]) -> u128 {
        match self {
            Var(k) => vals[*k],
            Lit(n) => *n as u128,
            Add(a, b) => a.eval(vals) + b.eval(vals),
            Mul(a, b) => a.eval(vals) * b.eval(vals),
        }
    }

    /// Upper bound on the degree of each variable.
    pub fn degree(&self, v: usize) -> usize {
        match self {
            Var(k) => usize::from(*k == v),
            Lit(_) => 0,
            Add(a, b) => a.degree(v).max(b.degree(v)),
            Mul(a, b) => a.degree(v) + b.degree(v),
        }
    }

    pub fn render(&self) -> String {
        match self {
            Var(k) => VARS[*k].to_string(),
            Lit(n) => n.to_string(),
            Add(a, b) => format!("({} + {})", a.render(), b.render()),
            Mul(a, b) => format!("({} * {})", a.render(), b.render()),
        }
    }
}

pub fn expr(rng: &mut impl Rng, nvars: usize, depth: usize) -> Expr {
    if depth == 0 || rng.gen_bool(0.3) {
        return if rng.gen_bool(0.6) { Var(rng.gen_range(0..nvars)) } else { Lit(rng.gen_range(0..4)) };
    }
    let (a, b) = (expr(rng, nvars, depth - 1), expr(rng, nvars, depth - 1));
    if rng.gen_bool(0.5) {
        add(a, b)
    } else {
        mul(a, b)
    }
}

/// One semiring law applied somewhere in `e`.
fn rewrite(rng: &mut impl Rng, e: Expr) -> Expr {
    let here = rng.gen_bool(0.4);
    match e {
        Add(a, b) if here => match (rng.gen_range(0..3), *a, *b) {
            (0, a, b) => add(b, a),
            (1, Add(a1, a2), b) => add(*a1, add(*a2, b)),
            (_, a, b) => add(add(a, Lit(0)), b),
        },
        Mul(a, b) if here => match (rng.gen_range(0..3), *a, *b) {
            (0, a, b) => mul(b, a),
            (1, Add(a1, a2), b) => add(mul(*a1, b.clone()), mul(*a2, b)),
            (_, a, b) => mul(mul(a, Lit(1)), b),
        },
        Add(a, b) if rng.gen_bool(0.5) => add(rewrite(rng, *a), *b),
        Add(a, b) => add(*a, rewrite(rng, *b)),
        Mul(a, b) if rng.gen_bool(0.5) => mul(rewrite(rng, *a), *b),
        Mul(a, b) => mul(*a, rewrite(rng, *b)),
        Lit(n) if here && n >= 2 => add(Lit(1), Lit(n - 1)),
        leaf => leaf,
    }
}

/// A small change that usually breaks equality.
fn mutate(rng: &mut impl Rng, e: Expr, nvars: usize) -> Expr {
    match e {
        Add(a, b) if rng.gen_bool(0.5) => add(mutate(rng, *a, nvars), *b),
        Add(a, b) => add(*a, mutate(rng, *b, nvars)),
        Mul(a, b) if rng.gen_bool(0.5) => mul(mutate(rng, *a, nvars), *b),
        Mul(a, b) => mul(*a, mutate(rng, *b, nvars)),
        Lit(n) => Lit((n + 1) % 4),
        Var(k) => Var((k + 1) % nvars.max(2)),
    }
}

/// A pair of sides, usually equal by construction. Each variable has
/// degree at most 3 on both sides, so agreement on {0..3}^n decides
/// polynomial identity.
pub fn ring_problem(rng: &mut impl Rng) -> (usize, Expr, Expr) {
    loop {
        let nvars = rng.gen_range(1..=3);
        let lhs = expr(rng, nvars, 3);
        let mut rhs = lhs.clone();
        for _ in 0..rng.gen_range(1..6) {
            rhs = rewrite(rng, rhs);
        }
        if rng.gen_bool(0.25) {
            rhs = mutate(rng, rhs, nvars);
        }
        let nvars = nvars.max(if rhs.degree(1) > 0 { 2 } else { 0 });
        if (0..nvars).all(|v| lhs.degree(v) <= 3 && rhs.degree(v) <= 3) {
            return (nvars, lhs, rhs);
        }
    }
}

/// Whether two sides agree on every assignment from {0..3}.
pub fn agree_on_grid(nvars: usize, a: &Expr, b: &Expr) -> bool {
    let mut vals = vec![0u128; 3];
    let total = 4usize.pow(nvars as u32);
    (0..total).all(|mut code| {
        for v in vals.iter_mut().take(nvars) {
            *v = (code % 4) as u128;
            code /= 4;
        }
        a.eval(&vals) == b.eval(&vals)
    })
}

pub fn binders(nvars: usize) -> String {
    VARS[..nvars].join(" ")
}

/// `sum coeffs[i] * var_i + constant REL 0` over nat.
#[derive(Clone, Debug)]
pub struct Atom {
    pub coeffs: Vec<i64>,
    pub constant: i64,
    pub rel: Rel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Ge,
    Gt,
    Eq,
}

impl Atom {
    pub fn holds(&self, point: &[i64]) -> bool {
        let v: i64 = self.coeffs.iter().zip(point).map(|(c, x)| c * x).sum::<i64>() + self.constant;
        match self.rel {
            Rel::Ge => v >= 0,
            Rel::Gt => v > 0,
            Rel::Eq => v == 0,
        }
    }

    /// Negative coefficients move to the right-hand side.
    pub fn render(&self) -> String {
        let side = |sign: i64| {
            let mut parts: Vec<String> = self
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| **c * sign > 0)
                .map(|(k, c)| match (c * sign, VARS[k]) {
                    (1, v) => v.to_string(),
                    (c, v) => format!("{c} * {v}"),
                })
                .collect();
            if self.constant * sign > 0 {
                parts.push((self.constant * sign).to_string());
            }
            if parts.is_empty() {
                "0".to_string()
            } else {
                parts.join(" + ")
            }
        };
        let op = match self.rel {
            Rel::Ge => ">=",
            Rel::Gt => ">",
            Rel::Eq => "=",
        };
        format!("{} {op} {}", side(1), side(-1))
    }
}

pub fn atom(rng: &mut impl Rng, nvars: usize) -> Atom {
    let rel = *[Rel::Ge, Rel::Gt, Rel::Eq].choose(rng).expect("nonempty");
    Atom { coeffs: (0..nvars).map(|_| rng.gen_range(-4..=4)).collect(), constant: rng.gen_range(-8..=8), rel }
}

/// The largest value any variable takes in a generated system.
pub const BOUND: i64 = 12;

/// A goal `x <= 12 -> .. -> h1 -> .. -> concl` where `concl` is
/// `False`, an atom, or a disjunction of two atoms. The box hypotheses
/// make enumeration over 0..=12 a complete decision procedure.
#[derive(Clone, Debug)]
pub struct System {
    pub nvars: usize,
    pub hyps: Vec<Atom>,
    pub concl: Vec<Atom>,
}

impl System {
    pub fn valid(&self) -> bool {
        let n = self.nvars as u32;
        let side = (BOUND + 1) as usize;
        (0..side.pow(n)).all(|mut code| {
            let mut p = vec![0i64; self.nvars];
            for x in p.iter_mut() {
                *x = (code % side) as i64;
                code /= side;
            }
            !self.hyps.iter().all(|h| h.holds(&p)) || self.concl.iter().any(|c| c.holds(&p))
        })
    }

    pub fn render(&self) -> String {
        let mut parts: Vec<String> = VARS[..self.nvars].iter().map(|v| format!("{v} <= {BOUND}")).collect();
        parts.extend(self.hyps.iter().map(|h| h.render()));
        let concl = match self.concl.len() {
            0 => "False".to_string(),
            _ => self.concl.iter().map(|c| c.render()).collect::<Vec<_>>().join(" \\/ "),
        };
        parts.push(concl);
        format!("forall {} : nat, {}", binders(self.nvars), parts.join(" -> "))
    }
}

pub fn system(rng: &mut impl Rng) -> System {
    let nvars = rng.gen_range(1..=3);
    let hyps = (0..rng.gen_range(1..=3)).map(|_| atom(rng, nvars)).collect();
    let concl = (0..rng.gen_range(0..=2)).map(|_| atom(rng, nvars)).collect();
    System { nvars, hyps, concl }
}
