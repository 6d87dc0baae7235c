//! Surface syntax trees produced by the parser.

use super::lexer::Pos;

#[derive(Clone, Debug, PartialEq)]
pub enum SortName {
    Prop,
    Set,
    Type,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Binder {
    pub names: Vec<String>,
    pub ty: Option<Expr>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Pattern {
    Wild,
    /// A bare identifier: a constructor if one is in scope, else a variable.
    Ident(String),
    App(String, Vec<Pattern>),
    Num(u64),
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Var(String),
    /// `@f`: implicit arguments given explicitly.
    Explicit(String),
    Num(u64),
    Sort(SortName),
    Hole,
    App(Box<Expr>, Vec<Expr>),
    /// Infix notation application, e.g. `+`, `/\`, `::`.
    Infix(&'static str, Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
    Arrow(Box<Expr>, Box<Expr>),
    Forall(Vec<Binder>, Box<Expr>),
    Exists(Vec<Binder>, Box<Expr>),
    Fun(Vec<Binder>, Box<Expr>),
    Let(String, Option<Box<Expr>>, Box<Expr>, Box<Expr>),
    Pair(Box<Expr>, Box<Expr>),
    Match {
        scrutinee: Box<Expr>,
        as_name: Option<String>,
        ret: Option<Box<Expr>>,
        branches: Vec<(Pattern, Expr)>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

impl Expr {
    pub fn new(kind: ExprKind, pos: Pos) -> Expr {
        Expr { kind, pos }
    }

    pub fn var(s: &str, pos: Pos) -> Expr {
        Expr::new(ExprKind::Var(s.to_string()), pos)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum IntroPattern {
    Name(String),
    Wild,
    /// `[p1 p2 ..]` (one alternative) or `[p1 | p2 | ..]`.
    Or(Vec<Vec<IntroPattern>>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum RewriteDir {
    LeftToRight,
    RightToLeft,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Tactic {
    Intro(Option<String>),
    Intros(Vec<IntroPattern>),
    Exact(Expr),
    Assumption,
    Apply(Expr, Vec<Expr>),
    Split,
    Left,
    Right,
    Exists(Vec<Expr>),
    Elim(Expr),
    Case(Expr),
    Destruct(Expr, Option<IntroPattern>),
    Induction(Expr),
    Rewrite(RewriteDir, Expr),
    Reflexivity,
    Symmetry,
    Assert(Option<String>, Expr),
    Simpl,
    Unfold(Vec<String>),
    Ring,
    Omega,
    Auto,
    Trivial,
    Intuition,
    Discriminate(Option<Expr>),
    Injection(Expr),
    Inversion(Expr),
    Subst(Vec<String>),
    Clear(Vec<String>),
    Contradiction,
    Try(Box<Tactic>),
    Repeat(Box<Tactic>),
    Idtac,
    /// `t1; t2`: `t2` on every goal produced by `t1`.
    Seq(Box<Tactic>, Box<Tactic>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Sentence {
    Check(Expr),
    EvalCompute(Expr),
    Definition {
        name: String,
        binders: Vec<Binder>,
        ty: Option<Expr>,
        body: Expr,
    },
    Fixpoint {
        name: String,
        binders: Vec<Binder>,
        struct_arg: Option<String>,
        ty: Expr,
        body: Expr,
        /// `where "n ^ m" := (f n m)`: notation string and its expansion.
        notation: Option<(String, Expr)>,
    },
    Inductive {
        name: String,
        params: Vec<Binder>,
        arity: Expr,
        ctors: Vec<(String, Vec<Binder>, Option<Expr>)>,
    },
    TheoremStart {
        keyword: String,
        name: String,
        statement: Expr,
    },
    Proof,
    Qed,
    Abort,
    Undo(usize),
    Tactic(Tactic),
    RequireImport(Vec<String>),
    Search(String),
    SearchPattern(Expr),
    SearchRewrite(Expr),
    Locate(String),
    Print(String),
}
