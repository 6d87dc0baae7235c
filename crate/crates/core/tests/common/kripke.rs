//! Propositional formulas and a brute-force search for finite Kripke
//! countermodels.

use rand::Rng;

pub const ATOMS: [&str; 3] = ["A", "B", "C"];

#[derive(Clone, Debug)]
pub enum F {
    Atom(usize),
    Top,
    Bot,
    Not(Box<F>),
    And(Box<F>, Box<F>),
    Or(Box<F>, Box<F>),
    Imp(Box<F>, Box<F>),
}

impl F {
    pub fn render(&self) -> String {
        match self {
            F::Atom(k) => ATOMS[*k].to_string(),
            F::Top => "True".into(),
            F::Bot => "False".into(),
            F::Not(a) => format!("~ {}", a.render()),
            F::And(a, b) => format!("({} /\\ {})", a.render(), b.render()),
            F::Or(a, b) => format!("({} \\/ {})", a.render(), b.render()),
            F::Imp(a, b) => format!("({} -> {})", a.render(), b.render()),
        }
    }

    pub fn statement(&self) -> String {
        format!("forall {} : Prop, {}", ATOMS.join(" "), self.render())
    }
}

pub fn formula(rng: &mut impl Rng, depth: usize) -> F {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..10) {
            0 => F::Top,
            1 => F::Bot,
            _ => F::Atom(rng.gen_range(0..3)),
        };
    }
    let pick = rng.gen_range(0..7);
    let mut sub = || Box::new(formula(rng, depth - 1));
    match pick {
        0 => F::Not(sub()),
        1 | 2 => F::And(sub(), sub()),
        3 | 4 => F::Or(sub(), sub()),
        _ => F::Imp(sub(), sub()),
    }
}

/// A finite rooted-or-not preorder with a monotone valuation.
struct Model {
    n: usize,
    le: Vec<Vec<bool>>,
    val: Vec<[bool; 3]>,
}

impl Model {
    fn forces(&self, w: usize, f: &F) -> bool {
        match f {
            F::Atom(k) => self.val[w][*k],
            F::Top => true,
            F::Bot => false,
            F::And(a, b) => self.forces(w, a) && self.forces(w, b),
            F::Or(a, b) => self.forces(w, a) || self.forces(w, b),
            F::Not(a) => (0..self.n).all(|v| !self.le[w][v] || !self.forces(v, a)),
            F::Imp(a, b) => (0..self.n).all(|v| !self.le[w][v] || !self.forces(v, a) || self.forces(v, b)),
        }
    }
}

/// Partial orders on `n` labelled worlds.
fn orders(n: usize) -> Vec<Vec<Vec<bool>>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i != j).collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for (b, (i, j)) in pairs.iter().enumerate() {
            le[*i][*j] = mask & (1 << b) != 0;
        }
        let antisym = pairs.iter().all(|&(i, j)| !(le[i][j] && le[j][i]));
        let trans = (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(le[i][j] && le[j][k]) || le[i][k])));
        if antisym && trans {
            out.push(le);
        }
    }
    out
}

/// Whether some model with at most `worlds` worlds refutes `f`.
pub fn refuted(f: &F, worlds: usize) -> bool {
    for n in 1..=worlds {
        for le in orders(n) {
            let upsets: Vec<u32> = (0u32..(1 << n))
                .filter(|s| (0..n).all(|i| s & (1 << i) == 0 || (0..n).all(|j| !le[i][j] || s & (1 << j) != 0)))
                .collect();
            for &a in &upsets {
                for &b in &upsets {
                    for &c in &upsets {
                        let val = (0..n).map(|w| [a >> w & 1 == 1, b >> w & 1 == 1, c >> w & 1 == 1]).collect();
                        let m = Model { n, le: le.clone(), val };
                        if (0..n).any(|w| !m.forces(w, f)) {
                            return true;
                        }
                    }
                }
            }
        }
    }
    false
}

/// Classical validity, for sanity checks.
pub fn tautology(f: &F) -> bool {
    !refuted(f, 1)
}
