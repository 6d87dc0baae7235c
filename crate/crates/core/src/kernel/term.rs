//! Kernel syntax: de Bruijn indexed terms of the object language.
//!
//! Binder names are carried for display only; equality on [`Term`] is
//! alpha-equivalence (names are ignored).

use std::fmt;
use std::sync::Arc;

/// Display name of a binder or global. `_` is the anonymous name.
pub type Name = Arc<str>;

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

pub fn anonymous() -> Name {
    Arc::from("_")
}

pub fn is_anonymous(n: &str) -> bool {
    n == "_"
}

/// Highest universe level of the fixed ladder `Type(1) .. Type(MAX_LEVEL)`.
pub const MAX_LEVEL: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Prop,
    Set,
    Type(u32),
}

impl Sort {
    /// Cumulativity: `Prop <= Set <= Type(i) <= Type(j)` for `i <= j`.
    pub fn leq(self, other: Sort) -> bool {
        match (self, other) {
            (Sort::Prop, _) => true,
            (Sort::Set, Sort::Prop) => false,
            (Sort::Set, _) => true,
            (Sort::Type(_), Sort::Prop | Sort::Set) => false,
            (Sort::Type(i), Sort::Type(j)) => i <= j,
        }
    }

    pub fn level(self) -> u32 {
        match self {
            Sort::Prop | Sort::Set => 0,
            Sort::Type(i) => i,
        }
    }

    /// The sort of this sort, `None` when it would leave the ladder.
    pub fn successor(self) -> Option<Sort> {
        match self {
            Sort::Prop | Sort::Set => Some(Sort::Type(1)),
            Sort::Type(i) if i < MAX_LEVEL => Some(Sort::Type(i + 1)),
            Sort::Type(_) => None,
        }
    }

    /// Sort of a product whose domain lives in `self` and codomain in `codomain`.
    pub fn product(self, codomain: Sort) -> Sort {
        match codomain {
            Sort::Prop => Sort::Prop,
            Sort::Set => match self {
                Sort::Prop | Sort::Set => Sort::Set,
                Sort::Type(i) => Sort::Type(i),
            },
            Sort::Type(j) => Sort::Type(j.max(self.level())),
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Prop => write!(f, "Prop"),
            Sort::Set => write!(f, "Set"),
            Sort::Type(_) => write!(f, "Type"),
        }
    }
}

pub type MetaId = usize;

#[derive(Clone, Debug)]
pub enum Term {
    Rel(usize),
    Sort(Sort),
    Prod(Name, Arc<Term>, Arc<Term>),
    Lambda(Name, Arc<Term>, Arc<Term>),
    /// `let name : ty := value in body`, stored as (name, value, ty, body).
    LetIn(Name, Arc<Term>, Arc<Term>, Arc<Term>),
    /// Application; the head is never itself an `App` and `args` is nonempty.
    App(Arc<Term>, Arc<[Term]>),
    Const(Name),
    Ind(Name),
    /// Constructor of an inductive, ordinal starting at 1.
    Construct(Name, usize),
    Match(Arc<MatchData>),
    Fix(Arc<FixData>),
    /// Existential variable applied to an instance of its context
    /// (`inst[i]` stands for `Rel(i)` of the meta's own context).
    /// Never accepted by the kernel.
    Meta(MetaId, Arc<[Term]>),
}

#[derive(Clone, Debug)]
pub struct MatchData {
    pub ind: Name,
    pub scrutinee: Term,
    /// `fun indices.. (x : I params indices) => T`
    pub predicate: Term,
    /// One branch per constructor, each a function of the constructor fields.
    pub branches: Vec<Term>,
}

#[derive(Clone, Debug)]
pub struct FixData {
    pub name: Name,
    /// Zero-based position of the structural argument.
    pub struct_index: usize,
    pub ty: Term,
    /// Body, typed in a context extended with the fixpoint itself as `Rel(0)`.
    pub body: Term,
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        use Term::*;
        match (self, other) {
            (Rel(a), Rel(b)) => a == b,
            (Sort(a), Sort(b)) => a == b,
            (Prod(_, a1, b1), Prod(_, a2, b2)) | (Lambda(_, a1, b1), Lambda(_, a2, b2)) => a1 == a2 && b1 == b2,
            (LetIn(_, v1, t1, b1), LetIn(_, v2, t2, b2)) => v1 == v2 && t1 == t2 && b1 == b2,
            (App(h1, a1), App(h2, a2)) => h1 == h2 && a1 == a2,
            (Const(a), Const(b)) | (Ind(a), Ind(b)) => a == b,
            (Construct(a, i), Construct(b, j)) => a == b && i == j,
            (Match(m1), Match(m2)) => {
                Arc::ptr_eq(m1, m2)
                    || (m1.ind == m2.ind
                        && m1.scrutinee == m2.scrutinee
                        && m1.predicate == m2.predicate
                        && m1.branches == m2.branches)
            }
            (Fix(f1), Fix(f2)) => {
                Arc::ptr_eq(f1, f2) || (f1.struct_index == f2.struct_index && f1.ty == f2.ty && f1.body == f2.body)
            }
            (Meta(m1, i1), Meta(m2, i2)) => m1 == m2 && i1 == i2,
            _ => false,
        }
    }
}

impl Eq for Term {}

impl Term {
    pub fn sort(s: Sort) -> Term {
        Term::Sort(s)
    }

    pub fn prop() -> Term {
        Term::Sort(Sort::Prop)
    }

    pub fn set() -> Term {
        Term::Sort(Sort::Set)
    }

    pub fn prod(n: impl Into<Name>, dom: Term, cod: Term) -> Term {
        Term::Prod(n.into(), Arc::new(dom), Arc::new(cod))
    }

    /// Non-dependent arrow; `cod` is given in the outer scope and lifted here.
    pub fn arrow(dom: Term, cod: Term) -> Term {
        Term::Prod(anonymous(), Arc::new(dom), Arc::new(lift(&cod, 1, 0)))
    }

    pub fn lambda(n: impl Into<Name>, dom: Term, body: Term) -> Term {
        Term::Lambda(n.into(), Arc::new(dom), Arc::new(body))
    }

    pub fn let_in(n: impl Into<Name>, value: Term, ty: Term, body: Term) -> Term {
        Term::LetIn(n.into(), Arc::new(value), Arc::new(ty), Arc::new(body))
    }

    pub fn constant(n: &str) -> Term {
        Term::Const(name(n))
    }

    pub fn ind(n: &str) -> Term {
        Term::Ind(name(n))
    }

    pub fn construct(ind: &str, ordinal: usize) -> Term {
        Term::Construct(name(ind), ordinal)
    }

    /// Application that keeps the flattening invariant.
    pub fn app(head: Term, args: Vec<Term>) -> Term {
        if args.is_empty() {
            return head;
        }
        match head {
            Term::App(h, prev) => {
                let mut all: Vec<Term> = prev.iter().cloned().collect();
                all.extend(args);
                Term::App(h, all.into())
            }
            h => Term::App(Arc::new(h), args.into()),
        }
    }

    pub fn app1(head: Term, arg: Term) -> Term {
        Term::app(head, vec![arg])
    }

    pub fn mk_match(ind: Name, scrutinee: Term, predicate: Term, branches: Vec<Term>) -> Term {
        Term::Match(Arc::new(MatchData { ind, scrutinee, predicate, branches }))
    }

    pub fn mk_fix(name: Name, struct_index: usize, ty: Term, body: Term) -> Term {
        Term::Fix(Arc::new(FixData { name, struct_index, ty, body }))
    }

    /// Head and arguments of an application (`args` empty for non-applications).
    pub fn decompose_app(&self) -> (&Term, &[Term]) {
        match self {
            Term::App(h, args) => (h, args),
            t => (t, &[]),
        }
    }

    pub fn head(&self) -> &Term {
        self.decompose_app().0
    }

    pub fn args(&self) -> &[Term] {
        self.decompose_app().1
    }

    pub fn is_meta(&self) -> bool {
        matches!(self, Term::Meta(..))
    }

    pub fn is_sort(&self) -> bool {
        matches!(self, Term::Sort(_))
    }

    pub fn as_sort(&self) -> Option<Sort> {
        match self {
            Term::Sort(s) => Some(*s),
            _ => None,
        }
    }

    /// Name of the global at the head, if the head is a constant.
    pub fn head_const(&self) -> Option<&str> {
        match self.head() {
            Term::Const(n) => Some(n),
            _ => None,
        }
    }

    pub fn head_ind(&self) -> Option<&str> {
        match self.head() {
            Term::Ind(n) => Some(n),
            _ => None,
        }
    }

    pub fn head_construct(&self) -> Option<(&str, usize)> {
        match self.head() {
            Term::Construct(n, i) => Some((n, *i)),
            _ => None,
        }
    }

    pub fn has_metas(&self) -> bool {
        let mut found = false;
        visit(self, 0, &mut |t, _| {
            if matches!(t, Term::Meta(..)) {
                found = true;
            }
            !found
        });
        found
    }

    /// True when `Rel(k)` (relative to the root of `self`) occurs free.
    pub fn has_rel(&self, k: usize) -> bool {
        let mut found = false;
        visit(self, 0, &mut |t, depth| {
            if let Term::Rel(i) = t {
                if *i == k + depth {
                    found = true;
                }
            }
            !found
        });
        found
    }

    /// Smallest `n` such that every free index is below `n`.
    pub fn free_bound(&self) -> usize {
        let mut bound = 0;
        visit(self, 0, &mut |t, depth| {
            if let Term::Rel(i) = t {
                if *i >= depth {
                    bound = bound.max(i - depth + 1);
                }
            }
            true
        });
        bound
    }

    pub fn is_closed(&self) -> bool {
        self.free_bound() == 0
    }

    /// Product telescope: binders (outermost first) and final codomain.
    pub fn decompose_prod(&self) -> (Vec<(Name, Term)>, Term) {
        let mut binders = Vec::new();
        let mut t = self.clone();
        while let Term::Prod(n, a, b) = t {
            binders.push((n.clone(), (*a).clone()));
            t = (*b).clone();
        }
        (binders, t)
    }

    pub fn decompose_lambda(&self) -> (Vec<(Name, Term)>, Term) {
        let mut binders = Vec::new();
        let mut t = self.clone();
        while let Term::Lambda(n, a, b) = t {
            binders.push((n.clone(), (*a).clone()));
            t = (*b).clone();
        }
        (binders, t)
    }

    pub fn prod_arity(&self) -> usize {
        let mut n = 0;
        let mut t = self;
        while let Term::Prod(_, _, b) = t {
            n += 1;
            t = b;
        }
        n
    }
}

/// Rebuild `forall binders, body` (binders outermost first).
pub fn build_prod(binders: &[(Name, Term)], body: Term) -> Term {
    binders.iter().rev().fold(body, |acc, (n, ty)| Term::prod(n.clone(), ty.clone(), acc))
}

pub fn build_lambda(binders: &[(Name, Term)], body: Term) -> Term {
    binders.iter().rev().fold(body, |acc, (n, ty)| Term::lambda(n.clone(), ty.clone(), acc))
}

/// Pre-order traversal; `f` receives each subterm with its binder depth and
/// returns whether to descend into it.
pub fn visit(t: &Term, depth: usize, f: &mut dyn FnMut(&Term, usize) -> bool) {
    if !f(t, depth) {
        return;
    }
    match t {
        Term::Rel(_) | Term::Sort(_) | Term::Const(_) | Term::Ind(_) | Term::Construct(..) => {}
        Term::Prod(_, a, b) | Term::Lambda(_, a, b) => {
            visit(a, depth, f);
            visit(b, depth + 1, f);
        }
        Term::LetIn(_, v, ty, b) => {
            visit(v, depth, f);
            visit(ty, depth, f);
            visit(b, depth + 1, f);
        }
        Term::App(h, args) => {
            visit(h, depth, f);
            for a in args.iter() {
                visit(a, depth, f);
            }
        }
        Term::Match(m) => {
            visit(&m.scrutinee, depth, f);
            visit(&m.predicate, depth, f);
            for b in &m.branches {
                visit(b, depth, f);
            }
        }
        Term::Fix(fx) => {
            visit(&fx.ty, depth, f);
            visit(&fx.body, depth + 1, f);
        }
        Term::Meta(_, inst) => {
            for a in inst.iter() {
                visit(a, depth, f);
            }
        }
    }
}

/// Rebuild `t`, replacing free variables via `f(index, depth)`; bound
/// variables (below `depth`) are left alone by contract of `f`.
pub fn map_rels(t: &Term, depth: usize, f: &dyn Fn(usize, usize) -> Term) -> Term {
    map_term(t, depth, &|t, d| match t {
        Term::Rel(i) if *i >= d => Some(f(*i, d)),
        Term::Rel(_) => Some(t.clone()),
        _ => None,
    })
}

/// Generic bottom-up rewriting skeleton: `f` may replace a node outright
/// (returning `Some`); otherwise children are mapped recursively.
pub fn map_term(t: &Term, depth: usize, f: &dyn Fn(&Term, usize) -> Option<Term>) -> Term {
    if let Some(r) = f(t, depth) {
        return r;
    }
    match t {
        Term::Rel(_) | Term::Sort(_) | Term::Const(_) | Term::Ind(_) | Term::Construct(..) => t.clone(),
        Term::Prod(n, a, b) => {
            Term::Prod(n.clone(), Arc::new(map_term(a, depth, f)), Arc::new(map_term(b, depth + 1, f)))
        }
        Term::Lambda(n, a, b) => {
            Term::Lambda(n.clone(), Arc::new(map_term(a, depth, f)), Arc::new(map_term(b, depth + 1, f)))
        }
        Term::LetIn(n, v, ty, b) => Term::LetIn(
            n.clone(),
            Arc::new(map_term(v, depth, f)),
            Arc::new(map_term(ty, depth, f)),
            Arc::new(map_term(b, depth + 1, f)),
        ),
        Term::App(h, args) => {
            let h2 = map_term(h, depth, f);
            let args2: Vec<Term> = args.iter().map(|a| map_term(a, depth, f)).collect();
            Term::app(h2, args2)
        }
        Term::Match(m) => Term::Match(Arc::new(MatchData {
            ind: m.ind.clone(),
            scrutinee: map_term(&m.scrutinee, depth, f),
            predicate: map_term(&m.predicate, depth, f),
            branches: m.branches.iter().map(|b| map_term(b, depth, f)).collect(),
        })),
        Term::Fix(fx) => Term::Fix(Arc::new(FixData {
            name: fx.name.clone(),
            struct_index: fx.struct_index,
            ty: map_term(&fx.ty, depth, f),
            body: map_term(&fx.body, depth + 1, f),
        })),
        Term::Meta(id, inst) => Term::Meta(*id, inst.iter().map(|a| map_term(a, depth, f)).collect()),
    }
}

/// Shift free indices `>= cutoff` by `by`.
///
/// Panics if an index would become negative; that is a kernel invariant
/// violation, never a user error.
pub fn lift(t: &Term, by: isize, cutoff: usize) -> Term {
    if by == 0 {
        return t.clone();
    }
    map_rels(t, cutoff, &|i, _| {
        let j = i as isize + by;
        assert!(j >= 0, "de Bruijn index underflow while lifting Rel({i}) by {by}");
        Term::Rel(j as usize)
    })
}

/// Replace `Rel(0)` by `replacement` and decrement the other free indices.
pub fn subst(t: &Term, replacement: &Term) -> Term {
    substl(t, std::slice::from_ref(replacement))
}

/// Simultaneous substitution: `Rel(i)` for `i < args.len()` becomes `args[i]`
/// (lifted under binders), larger indices drop by `args.len()`.
pub fn substl(t: &Term, args: &[Term]) -> Term {
    if args.is_empty() {
        return t.clone();
    }
    let k = args.len();
    map_rels(t, 0, &|i, depth| {
        let j = i - depth;
        if j < k {
            lift(&args[j], depth as isize, 0)
        } else {
            Term::Rel(i - k)
        }
    })
}

/// Beta-reduce `(fun binders => body) args` for a term known to be a lambda
/// spine; extra arguments are re-applied.
pub fn beta_apply(f: &Term, args: &[Term]) -> Term {
    let mut t = f.clone();
    let mut consumed = 0;
    let mut pending: Vec<Term> = Vec::new();
    while consumed < args.len() {
        match t {
            Term::Lambda(_, _, ref body) => {
                pending.push(args[consumed].clone());
                let b = (**body).clone();
                t = b;
                consumed += 1;
            }
            _ => break,
        }
    }
    if !pending.is_empty() {
        pending.reverse();
        t = substl(&t, &pending);
    }
    Term::app(t, args[consumed..].to_vec())
}

/// Abstract every occurrence of `pattern` (a term in the outer scope) into
/// a fresh `Rel(0)`; the result lives under one extra binder.
pub fn abstract_term(t: &Term, pattern: &Term) -> Term {
    fn go(t: &Term, pattern: &Term, depth: usize) -> Term {
        if lift(pattern, depth as isize, 0) == *t {
            return Term::Rel(depth);
        }
        match t {
            Term::Rel(i) if *i >= depth => Term::Rel(i + 1),
            Term::Rel(_) | Term::Sort(_) | Term::Const(_) | Term::Ind(_) | Term::Construct(..) => t.clone(),
            Term::Prod(n, a, b) => {
                Term::Prod(n.clone(), Arc::new(go(a, pattern, depth)), Arc::new(go(b, pattern, depth + 1)))
            }
            Term::Lambda(n, a, b) => {
                Term::Lambda(n.clone(), Arc::new(go(a, pattern, depth)), Arc::new(go(b, pattern, depth + 1)))
            }
            Term::LetIn(n, v, ty, b) => Term::LetIn(
                n.clone(),
                Arc::new(go(v, pattern, depth)),
                Arc::new(go(ty, pattern, depth)),
                Arc::new(go(b, pattern, depth + 1)),
            ),
            Term::App(h, args) => {
                let h2 = go(h, pattern, depth);
                Term::app(h2, args.iter().map(|a| go(a, pattern, depth)).collect())
            }
            Term::Match(m) => Term::Match(Arc::new(MatchData {
                ind: m.ind.clone(),
                scrutinee: go(&m.scrutinee, pattern, depth),
                predicate: go(&m.predicate, pattern, depth),
                branches: m.branches.iter().map(|b| go(b, pattern, depth)).collect(),
            })),
            Term::Fix(fx) => Term::Fix(Arc::new(FixData {
                name: fx.name.clone(),
                struct_index: fx.struct_index,
                ty: go(&fx.ty, pattern, depth),
                body: go(&fx.body, pattern, depth + 1),
            })),
            Term::Meta(id, inst) => Term::Meta(*id, inst.iter().map(|a| go(a, pattern, depth)).collect()),
        }
    }
    go(t, pattern, 0)
}

/// True when `pattern` occurs syntactically (up to alpha) in `t`.
pub fn occurs(t: &Term, pattern: &Term) -> bool {
    let mut found = false;
    visit(t, 0, &mut |u, depth| {
        if !found && lift(pattern, depth as isize, 0) == *u {
            found = true;
        }
        !found
    });
    found
}

/// Replace free `Rel(i)` with `Rel(map(i))` where `map` renames the free
/// variables of the root scope.
pub fn rename_rels(t: &Term, map: &dyn Fn(usize) -> usize) -> Term {
    map_rels(t, 0, &|i, depth| Term::Rel(map(i - depth) + depth))
}

/// Well-scopedness: every free index is below `ctx_len`.
pub fn well_scoped(t: &Term, ctx_len: usize) -> bool {
    t.free_bound() <= ctx_len
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat() -> Term {
        Term::ind("nat")
    }

    #[test]
    fn lift_single_free_variable() {
        assert_eq!(lift(&Term::Rel(0), 1, 0), Term::Rel(1));
    }

    #[test]
    fn lift_closed_lambda_unchanged() {
        let t = Term::lambda("x", nat(), Term::Rel(0));
        assert_eq!(lift(&t, 5, 0), t);
    }

    #[test]
    fn lift_respects_cutoff() {
        let t = Term::app(Term::Rel(2), vec![Term::Rel(0)]);
        assert_eq!(lift(&t, 3, 1), Term::app(Term::Rel(5), vec![Term::Rel(0)]));
    }

    #[test]
    #[should_panic]
    fn lift_underflow_panics() {
        lift(&Term::Rel(0), -1, 0);
    }

    #[test]
    fn subst_replaces_index_zero() {
        assert_eq!(subst(&Term::Rel(0), &Term::constant("O")), Term::constant("O"));
    }

    #[test]
    fn subst_decrements_outer() {
        assert_eq!(subst(&Term::Rel(1), &Term::constant("O")), Term::Rel(0));
    }

    #[test]
    fn subst_lifts_replacement_under_binders() {
        // (fun y => Rel1) [Rel0 := Rel3]  ==> fun y => Rel4
        let t = Term::lambda("y", nat(), Term::Rel(1));
        let r = subst(&t, &Term::Rel(3));
        assert_eq!(r, Term::lambda("y", nat(), Term::Rel(4)));
    }

    #[test]
    fn app_stays_flat() {
        let f = Term::app(Term::constant("f"), vec![Term::Rel(0)]);
        let g = Term::app(f, vec![Term::Rel(1)]);
        match &g {
            Term::App(h, args) => {
                assert_eq!(**h, Term::constant("f"));
                assert_eq!(args.len(), 2);
            }
            _ => panic!(),
        }
    }

    #[test]
    fn alpha_equality_ignores_names() {
        let a = Term::lambda("x", nat(), Term::Rel(0));
        let b = Term::lambda("y", nat(), Term::Rel(0));
        assert_eq!(a, b);
    }

    #[test]
    fn abstract_replaces_occurrences() {
        let x = Term::Rel(0);
        let t = Term::app(Term::constant("f"), vec![x.clone(), Term::lambda("y", nat(), Term::Rel(1))]);
        let a = abstract_term(&t, &x);
        assert_eq!(a, Term::app(Term::constant("f"), vec![Term::Rel(0), Term::lambda("y", nat(), Term::Rel(1))]));
    }

    #[test]
    fn sort_product_rules() {
        assert_eq!(Sort::Set.product(Sort::Prop), Sort::Prop);
        assert_eq!(Sort::Type(3).product(Sort::Prop), Sort::Prop);
        assert_eq!(Sort::Set.product(Sort::Type(1)), Sort::Type(1));
        assert_eq!(Sort::Set.product(Sort::Set), Sort::Set);
        assert!(Sort::Prop.leq(Sort::Type(1)));
        assert!(!Sort::Type(2).leq(Sort::Type(1)));
    }
}
