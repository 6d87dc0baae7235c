//! Pretty-printing of kernel terms back to surface syntax: notations are
//! folded, numerals re-sugared, implicit arguments hidden and parentheses
//! kept to the minimum the parser needs.

use crate::kernel::term::{is_anonymous, lift, Term};
use crate::kernel::{GlobalEnv, LocalContext};

use super::notation::{implicit_count, symbol_for};

/// Levels mirror the parser's operator table.
fn infix_levels(sym: &str) -> (u32, u32, u32) {
    match sym {
        "->" => (99, 98, 200),
        "<->" => (95, 94, 94),
        "\\/" => (85, 84, 85),
        "/\\" => (80, 79, 80),
        "=" | "<>" | "<=" | "<" | ">=" | ">" => (70, 69, 69),
        "::" | "++" => (60, 59, 60),
        "+" | "-" => (50, 50, 49),
        "*" => (40, 40, 39),
        "^" => (30, 29, 30),
        _ => (10, 10, 9),
    }
}

pub struct Printer<'a> {
    env: &'a GlobalEnv,
    /// Binder names in scope, outermost first.
    names: Vec<String>,
}

pub fn print_term(env: &GlobalEnv, t: &Term) -> String {
    Printer::new(env, &[]).print(t)
}

/// Print `t` in a local context (names taken from the context).
pub fn print_in(env: &GlobalEnv, ctx: &LocalContext, t: &Term) -> String {
    let names: Vec<String> = ctx.names().iter().map(|n| n.to_string()).collect();
    Printer::new(env, &names).print(t)
}

impl<'a> Printer<'a> {
    pub fn new(env: &'a GlobalEnv, names: &[String]) -> Printer<'a> {
        Printer { env, names: names.to_vec() }
    }

    pub fn print(&mut self, t: &Term) -> String {
        self.pr(t, 200)
    }

    fn paren(s: String, lvl: u32, max: u32) -> String {
        if lvl > max {
            format!("({s})")
        } else {
            s
        }
    }

    /// Name for a binder whose body is `body`: never reuse a name already
    /// in scope, nor a global the body refers to.
    fn binder_name(&self, n: &str, body: &Term) -> String {
        let base = if is_anonymous(n) { "x".to_string() } else { n.to_string() };
        let clash = |cand: &str| {
            self.names.iter().any(|m| m == cand) || self.env.global_term(cand).is_some_and(|g| occurs_global(body, &g))
        };
        if !clash(&base) {
            return base;
        }
        let stem = base.trim_end_matches(|c: char| c.is_ascii_digit()).to_string();
        (0..).map(|k| format!("{stem}{k}")).find(|c| !clash(c)).unwrap()
    }

    fn pr(&mut self, t: &Term, max: u32) -> String {
        match t {
            Term::Rel(i) => {
                let len = self.names.len();
                if *i < len {
                    self.names[len - 1 - i].clone()
                } else {
                    format!("_UNBOUND_REL_{i}")
                }
            }
            Term::Sort(s) => s.to_string(),
            Term::Const(_) | Term::Ind(_) | Term::Construct(..) => {
                if let Some(n) = nat_literal(t) {
                    return n.to_string();
                }
                self.env.global_name(t).map(|n| n.to_string()).unwrap_or_else(|| "?".into())
            }
            Term::Meta(id, _) => format!("?{id}"),
            Term::Prod(n, a, b) => {
                if !b.has_rel(0) {
                    let l = self.pr(a, 98);
                    self.names.push("_".into());
                    let r = self.pr(b, 200);
                    self.names.pop();
                    return Self::paren(format!("{l} -> {r}"), 99, max);
                }
                let s = self.binders("forall", ",", t, true);
                let _ = (n, a);
                Self::paren(s, 200, max)
            }
            Term::Lambda(..) => {
                let s = self.binders("fun", " =>", t, false);
                Self::paren(s, 200, max)
            }
            Term::LetIn(n, v, _, b) => {
                let vs = self.pr(v, 200);
                let x = self.binder_name(n, b);
                self.names.push(x.clone());
                let bs = self.pr(b, 200);
                self.names.pop();
                Self::paren(format!("let {x} := {vs} in {bs}"), 200, max)
            }
            Term::App(..) => self.app(t, max),
            Term::Match(m) => {
                let s = self.pr(&m.scrutinee, 200);
                let mut out = format!("match {s} with");
                let info = self.env.inductive(&m.ind).cloned();
                for (j, br) in m.branches.iter().enumerate() {
                    let (cname, nf) = match &info {
                        Some(info) => (info.ctors[j].name.to_string(), info.ctors[j].nfields),
                        None => (format!("C{}", j + 1), 0),
                    };
                    let saved = self.names.len();
                    let mut body = br.clone();
                    let mut vars = Vec::new();
                    for k in 0..nf {
                        match body {
                            Term::Lambda(n, _, b) => {
                                let x = self.binder_name(&n, &b);
                                self.names.push(x.clone());
                                vars.push(x);
                                body = (*b).clone();
                            }
                            other => {
                                // Eta-expand a branch that is not syntactically a lambda.
                                let rest = nf - k;
                                let args = (0..rest).rev().map(Term::Rel).collect();
                                body = Term::app(lift(&other, rest as isize, 0), args);
                                for _ in 0..rest {
                                    let x = self.binder_name("x", &body);
                                    self.names.push(x.clone());
                                    vars.push(x);
                                }
                                break;
                            }
                        }
                    }
                    let pat = if m.ind.as_ref() == "nat" && j == 0 {
                        "0".to_string()
                    } else if vars.is_empty() {
                        cname
                    } else {
                        format!("{cname} {}", vars.join(" "))
                    };
                    let bs = self.pr(&body, 200);
                    self.names.truncate(saved);
                    out.push_str(&format!(" | {pat} => {bs}"));
                }
                out.push_str(" end");
                out
            }
            Term::Fix(f) => {
                let (bs, ret) = f.ty.decompose_prod();
                let saved = self.names.len();
                let fname = f.name.to_string();
                self.names.push(fname.clone());
                let mut body = f.body.clone();
                let mut header = Vec::new();
                let mut struct_name = String::new();
                let mut ok = true;
                let mut tys = Vec::new();
                for k in 0..bs.len() {
                    match body {
                        Term::Lambda(n, a, b) => {
                            let ty = self.pr(&a, 200);
                            let x = self.binder_name(&n, &b);
                            header.push(format!("({x} : {ty})"));
                            if k == f.struct_index {
                                struct_name = x.clone();
                            }
                            self.names.push(x);
                            tys.push(a);
                            body = (*b).clone();
                        }
                        _ => {
                            ok = false;
                            break;
                        }
                    }
                }
                let out = if ok {
                    // The return type lives under the binders, not under `f`.
                    let names_for_ret: Vec<String> = self.names.clone();
                    let mut rn = names_for_ret[..saved].to_vec();
                    rn.extend(names_for_ret[saved + 1..].iter().cloned());
                    let rs = Printer { env: self.env, names: rn }.pr(&ret, 200);
                    let b = self.pr(&body, 200);
                    format!("fix {fname} {} {{struct {struct_name}}} : {rs} := {b}", header.join(" "))
                } else {
                    let b = self.pr(&body, 200);
                    format!("fix {fname} := {b}")
                };
                self.names.truncate(saved);
                Self::paren(out, 200, max)
            }
        }
    }

    /// `forall`/`fun` with consecutive binders of the same type grouped.
    fn binders(&mut self, kw: &str, sep: &str, t: &Term, is_prod: bool) -> String {
        let saved = self.names.len();
        let mut groups: Vec<(Vec<String>, String)> = Vec::new();
        let mut cur = t.clone();
        let mut prev_ty: Option<Term> = None;
        loop {
            let (n, a, b) = match (&cur, is_prod) {
                (Term::Prod(n, a, b), true) if b.has_rel(0) => (n.clone(), a.clone(), b.clone()),
                (Term::Lambda(n, a, b), false) => (n.clone(), a.clone(), b.clone()),
                _ => break,
            };
            let x = self.binder_name(&n, &b);
            let same = prev_ty.as_ref().is_some_and(|p| lift(p, 1, 0) == *a);
            if same {
                groups.last_mut().unwrap().0.push(x.clone());
            } else {
                let ty = self.pr(&a, 200);
                groups.push((vec![x.clone()], ty));
            }
            prev_ty = Some((*a).clone());
            self.names.push(x);
            cur = (*b).clone();
        }
        let body = self.pr(&cur, 200);
        self.names.truncate(saved);
        let bs: Vec<String> = if groups.len() == 1 {
            vec![format!("{} : {}", groups[0].0.join(" "), groups[0].1)]
        } else {
            groups.iter().map(|(ns, ty)| format!("({} : {})", ns.join(" "), ty)).collect()
        };
        format!("{kw} {}{sep} {body}", bs.join(" "))
    }

    fn app(&mut self, t: &Term, max: u32) -> String {
        if let Some(n) = nat_literal(t) {
            return n.to_string();
        }
        let (h, args) = t.decompose_app();
        let hname = self.env.global_name(h).map(|n| n.to_string());
        if let Some(hn) = hname.as_deref() {
            if let Some(s) = self.notation(hn, args, max) {
                return s;
            }
        }
        let skip = hname.as_deref().map(implicit_count).unwrap_or(0).min(args.len());
        let hs = self.pr(h, 9);
        let shown = &args[skip..];
        if shown.is_empty() {
            return hs;
        }
        let mut parts = vec![hs];
        for a in shown {
            parts.push(self.pr(a, 9));
        }
        Self::paren(parts.join(" "), 10, max)
    }

    fn infix(&mut self, sym: &str, a: &Term, b: &Term, max: u32) -> String {
        let (l, lm, rm) = infix_levels(sym);
        let ls = self.pr(a, lm);
        let rs = self.pr(b, rm);
        Self::paren(format!("{ls} {sym} {rs}"), l, max)
    }

    fn notation(&mut self, hn: &str, args: &[Term], max: u32) -> Option<String> {
        match (hn, args) {
            ("not", [a]) => {
                if let Some((x, y)) = as_eq(self.env, a) {
                    return Some(self.infix("<>", &x, &y, max));
                }
                let s = self.pr(a, 75);
                Some(Self::paren(format!("~ {s}"), 75, max))
            }
            ("eq", [_, x, y]) => Some(self.infix("=", x, y, max)),
            ("pair", [_, _, x, y]) => {
                let xs = self.pr(x, 200);
                let ys = self.pr(y, 200);
                Some(format!("({xs}, {ys})"))
            }
            ("cons" | "app", [_, x, y]) => Some(self.infix(symbol_for(hn)?, x, y, max)),
            ("ex", [_, lam @ Term::Lambda(..)]) => {
                let s = self.binders("exists", ",", lam, false);
                Some(Self::paren(s, 200, max))
            }
            (_, [x, y]) => {
                let sym =
                    if self.env.notation_target("^").is_some_and(|t| t.as_ref() == hn) { "^" } else { symbol_for(hn)? };
                if matches!(sym, "(,)" | "->") {
                    return None;
                }
                Some(self.infix(sym, x, y, max))
            }
            _ => None,
        }
    }
}

fn as_eq(env: &GlobalEnv, t: &Term) -> Option<(Term, Term)> {
    let (h, args) = t.decompose_app();
    match (env.global_name(h).as_deref(), args) {
        (Some("eq"), [_, x, y]) => Some((x.clone(), y.clone())),
        _ => None,
    }
}

fn occurs_global(t: &Term, g: &Term) -> bool {
    let mut found = false;
    crate::kernel::term::visit(t, 0, &mut |u, _| {
        if u == g {
            found = true;
        }
        !found
    });
    found
}

/// `S (S .. O)` as a number.
pub fn nat_literal(t: &Term) -> Option<u64> {
    let mut n = 0;
    let mut cur = t;
    loop {
        match cur {
            Term::Construct(i, 1) if i.as_ref() == "nat" => return Some(n),
            Term::App(h, args) if args.len() == 1 => match &**h {
                Term::Construct(i, 2) if i.as_ref() == "nat" => {
                    n += 1;
                    cur = &args[0];
                }
                _ => return None,
            },
            _ => return None,
        }
    }
}
