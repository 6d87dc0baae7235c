//! Recursive-descent/Pratt parser for sentences, terms and tactics.
//! Operator levels follow the usual Coq standard library levels.

use thiserror::Error;

use super::ast::*;
use super::lexer::{tokenize, LexError, Pos, Tok, Token};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("{pos}: syntax error, expected {}; found {found}", expected.join(" or "))]
    Syntax { pos: Pos, expected: Vec<String>, found: String },
    #[error(transparent)]
    Lex(#[from] LexError),
}

impl ParseError {
    pub fn pos(&self) -> Pos {
        match self {
            ParseError::Syntax { pos, .. } => *pos,
            ParseError::Lex(e) => e.pos(),
        }
    }
}

type PResult<T> = Result<T, ParseError>;

/// Words that never start an application argument.
const KEYWORDS: &[&str] = &[
    "with", "end", "in", "as", "return", "struct", "where", "forall", "exists", "fun", "let", "then", "else", "at",
    "using",
];

/// Infix operators: (symbol, level, left operand max, right operand max).
fn infix(sym: &str) -> Option<(u32, u32, u32)> {
    Some(match sym {
        "->" => (99, 98, 200),
        "<->" => (95, 94, 94),
        "\\/" => (85, 84, 85),
        "/\\" => (80, 79, 80),
        "=" | "<>" | "<=" | "<" | ">=" | ">" => (70, 69, 69),
        "::" | "++" => (60, 59, 60),
        "+" | "-" => (50, 50, 49),
        "*" => (40, 40, 39),
        "^" => (30, 29, 30),
        _ => return None,
    })
}

pub struct Parser {
    toks: Vec<Token>,
    i: usize,
}

impl Parser {
    pub fn new(src: &str) -> PResult<Parser> {
        Ok(Parser { toks: tokenize(src)?, i: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.i + k).min(self.toks.len() - 1)].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].pos
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].tok.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn err<T>(&self, expected: &[&str]) -> PResult<T> {
        Err(ParseError::Syntax {
            pos: self.pos(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().to_string(),
        })
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn is_kw(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == s)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn eat_kw(&mut self, s: &str) -> bool {
        if self.is_kw(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> PResult<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.err(&[&format!("'{s}'")])
        }
    }

    fn expect_kw(&mut self, s: &str) -> PResult<()> {
        if self.eat_kw(s) {
            Ok(())
        } else {
            self.err(&[&format!("'{s}'")])
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            _ => self.err(&["identifier"]),
        }
    }

    fn expect_dot(&mut self) -> PResult<()> {
        if matches!(self.peek(), Tok::Dot) {
            self.bump();
            Ok(())
        } else {
            self.err(&["'.'"])
        }
    }

    pub fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    // ---------------------------------------------------------------- terms

    pub fn term(&mut self) -> PResult<Expr> {
        self.expr(200)
    }

    fn expr(&mut self, max: u32) -> PResult<Expr> {
        let (mut left, mut lvl) = self.prefix(max)?;
        while let Tok::Sym(s) = self.peek() {
            let s: &'static str = s;
            let Some((l, lmax, rmax)) = infix(s) else { break };
            if l > max || lvl > lmax {
                break;
            }
            let pos = self.pos();
            self.bump();
            let right = self.expr(rmax)?;
            let kind = if s == "->" {
                ExprKind::Arrow(Box::new(left), Box::new(right))
            } else {
                ExprKind::Infix(s, Box::new(left), Box::new(right))
            };
            left = Expr::new(kind, pos);
            lvl = l;
        }
        Ok(left)
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => !KEYWORDS.contains(&s.as_str()) || s == "match",
            Tok::Num(_) => true,
            Tok::Sym(s) => *s == "(" || *s == "@",
            _ => false,
        }
    }

    /// A prefix form and its level.
    fn prefix(&mut self, max: u32) -> PResult<(Expr, u32)> {
        let pos = self.pos();
        if self.is_kw("forall") || self.is_kw("exists") || self.is_kw("fun") {
            let kw = match self.bump() {
                Tok::Ident(s) => s,
                _ => unreachable!(),
            };
            let sep = if kw == "fun" { "=>" } else { "," };
            let binders = self.binders(sep)?;
            self.expect_sym(sep)?;
            let body = self.expr(200)?;
            let kind = match kw.as_str() {
                "forall" => ExprKind::Forall(binders, Box::new(body)),
                "exists" => ExprKind::Exists(binders, Box::new(body)),
                _ => ExprKind::Fun(binders, Box::new(body)),
            };
            return self.level_ok(Expr::new(kind, pos), 200, max);
        }
        if self.eat_kw("let") {
            let name = self.ident()?;
            let ty = if self.eat_sym(":") { Some(Box::new(self.expr(200)?)) } else { None };
            self.expect_sym(":=")?;
            let val = self.expr(200)?;
            self.expect_kw("in")?;
            let body = self.expr(200)?;
            return self.level_ok(Expr::new(ExprKind::Let(name, ty, Box::new(val), Box::new(body)), pos), 200, max);
        }
        if self.eat_sym("~") {
            let e = self.expr(75)?;
            return self.level_ok(Expr::new(ExprKind::Not(Box::new(e)), pos), 75, max);
        }
        let head = self.atom()?;
        if max >= 10 && self.starts_atom() {
            let mut args = Vec::new();
            while self.starts_atom() {
                args.push(self.atom()?);
            }
            return Ok((Expr::new(ExprKind::App(Box::new(head), args), pos), 10));
        }
        Ok((head, 0))
    }

    /// Binder and prefix forms extend as far right as possible, so they are
    /// accepted in any operand position, as in Coq.
    fn level_ok(&self, e: Expr, lvl: u32, _max: u32) -> PResult<(Expr, u32)> {
        Ok((e, lvl))
    }

    fn atom(&mut self) -> PResult<Expr> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(Expr::new(ExprKind::Num(n), pos))
            }
            Tok::Ident(s) if s == "match" => self.match_expr(),
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                let kind = match s.as_str() {
                    "_" => ExprKind::Hole,
                    "Prop" => ExprKind::Sort(SortName::Prop),
                    "Set" => ExprKind::Sort(SortName::Set),
                    "Type" => ExprKind::Sort(SortName::Type),
                    _ => ExprKind::Var(s),
                };
                Ok(Expr::new(kind, pos))
            }
            Tok::Sym("@") => {
                self.bump();
                let s = self.ident()?;
                Ok(Expr::new(ExprKind::Explicit(s), pos))
            }
            Tok::Sym("(") => {
                self.bump();
                let mut e = self.expr(200)?;
                while self.eat_sym(",") {
                    let r = self.expr(200)?;
                    e = Expr::new(ExprKind::Pair(Box::new(e), Box::new(r)), pos);
                }
                self.expect_sym(")")?;
                Ok(e)
            }
            _ => self.err(&["term"]),
        }
    }

    /// Binder groups up to (not including) `sep`.
    fn binders(&mut self, sep: &str) -> PResult<Vec<Binder>> {
        let mut out = Vec::new();
        if self.is_sym("(") {
            while self.eat_sym("(") {
                let mut names = vec![self.ident()?];
                while let Tok::Ident(_) = self.peek() {
                    names.push(self.ident()?);
                }
                self.expect_sym(":")?;
                let ty = self.expr(200)?;
                self.expect_sym(")")?;
                out.push(Binder { names, ty: Some(ty) });
            }
            return Ok(out);
        }
        let mut names = vec![self.ident()?];
        while matches!(self.peek(), Tok::Ident(_)) {
            names.push(self.ident()?);
        }
        let ty = if self.eat_sym(":") { Some(self.expr(200)?) } else { None };
        out.push(Binder { names, ty });
        if !self.is_sym(sep) {
            return self.err(&[&format!("'{sep}'")]);
        }
        Ok(out)
    }

    fn match_expr(&mut self) -> PResult<Expr> {
        let pos = self.pos();
        self.expect_kw("match")?;
        let scrutinee = self.expr(200)?;
        let as_name = if self.eat_kw("as") { Some(self.ident()?) } else { None };
        let ret = if self.eat_kw("return") { Some(Box::new(self.expr(100)?)) } else { None };
        self.expect_kw("with")?;
        self.eat_sym("|");
        let mut branches = Vec::new();
        if !self.is_kw("end") {
            loop {
                let p = self.pattern()?;
                self.expect_sym("=>")?;
                let e = self.expr(200)?;
                branches.push((p, e));
                if !self.eat_sym("|") {
                    break;
                }
            }
        }
        self.expect_kw("end")?;
        Ok(Expr::new(ExprKind::Match { scrutinee: Box::new(scrutinee), as_name, ret, branches }, pos))
    }

    fn pattern(&mut self) -> PResult<Pattern> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "_" => {
                self.bump();
                Ok(Pattern::Wild)
            }
            Tok::Ident(_) => {
                let head = self.ident()?;
                let mut args = Vec::new();
                loop {
                    match self.peek().clone() {
                        Tok::Ident(s) if s == "_" => {
                            self.bump();
                            args.push(Pattern::Wild);
                        }
                        Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                            self.bump();
                            args.push(Pattern::Ident(s));
                        }
                        Tok::Num(n) => {
                            self.bump();
                            args.push(Pattern::Num(n));
                        }
                        Tok::Sym("(") => {
                            self.bump();
                            args.push(self.pattern()?);
                            self.expect_sym(")")?;
                        }
                        _ => break,
                    }
                }
                if args.is_empty() {
                    Ok(Pattern::Ident(head))
                } else {
                    Ok(Pattern::App(head, args))
                }
            }
            Tok::Num(n) => {
                self.bump();
                Ok(Pattern::Num(n))
            }
            Tok::Sym("(") => {
                self.bump();
                let p = self.pattern()?;
                self.expect_sym(")")?;
                Ok(p)
            }
            _ => self.err(&["pattern"]),
        }
    }

    // ------------------------------------------------------------ sentences

    pub fn sentence(&mut self) -> PResult<Sentence> {
        let word = match self.peek().clone() {
            Tok::Ident(s) => s,
            _ => return self.err(&["command or tactic"]),
        };
        let s = match word.as_str() {
            "Check" => {
                self.bump();
                Sentence::Check(self.term()?)
            }
            "Eval" => {
                self.bump();
                let strategy = self.ident()?;
                if strategy != "compute" {
                    return Err(ParseError::Syntax {
                        pos: self.pos(),
                        expected: vec!["'compute'".into()],
                        found: strategy,
                    });
                }
                self.expect_kw("in")?;
                Sentence::EvalCompute(self.term()?)
            }
            "Definition" => {
                self.bump();
                let name = self.ident()?;
                let binders = self.param_binders()?;
                let ty = if self.eat_sym(":") { Some(self.term()?) } else { None };
                self.expect_sym(":=")?;
                Sentence::Definition { name, binders, ty, body: self.term()? }
            }
            "Fixpoint" => {
                self.bump();
                self.fixpoint()?
            }
            "Inductive" => {
                self.bump();
                self.inductive()?
            }
            "Theorem" | "Lemma" | "Remark" | "Fact" | "Corollary" | "Proposition" | "Example" => {
                self.bump();
                let name = self.ident()?;
                let binders = self.param_binders()?;
                self.expect_sym(":")?;
                let mut statement = self.term()?;
                if !binders.is_empty() {
                    let pos = statement.pos;
                    statement = Expr::new(ExprKind::Forall(binders, Box::new(statement)), pos);
                }
                Sentence::TheoremStart { keyword: word, name, statement }
            }
            "Proof" => {
                self.bump();
                Sentence::Proof
            }
            "Qed" | "Defined" | "Save" => {
                self.bump();
                Sentence::Qed
            }
            "Abort" => {
                self.bump();
                Sentence::Abort
            }
            "Undo" => {
                self.bump();
                let n = match self.peek() {
                    Tok::Num(n) => {
                        let n = *n as usize;
                        self.bump();
                        n
                    }
                    _ => 1,
                };
                Sentence::Undo(n)
            }
            "Require" => {
                self.bump();
                self.eat_kw("Import");
                self.eat_kw("Export");
                let mut names = vec![self.ident()?];
                while let Tok::Ident(_) = self.peek() {
                    names.push(self.ident()?);
                }
                Sentence::RequireImport(names)
            }
            "Search" => {
                self.bump();
                Sentence::Search(self.ident()?)
            }
            "SearchPattern" => {
                self.bump();
                Sentence::SearchPattern(self.atom()?)
            }
            "SearchRewrite" => {
                self.bump();
                Sentence::SearchRewrite(self.atom()?)
            }
            "Locate" => {
                self.bump();
                match self.bump() {
                    Tok::Str(s) => Sentence::Locate(s),
                    _ => return self.err(&["string"]),
                }
            }
            "Print" => {
                self.bump();
                Sentence::Print(self.ident()?)
            }
            _ => Sentence::Tactic(self.tactic_seq()?),
        };
        self.expect_dot()?;
        Ok(s)
    }

    /// `(x y : T) (z : U)` groups, or bare names, before `:` / `:=`.
    fn param_binders(&mut self) -> PResult<Vec<Binder>> {
        let mut out = Vec::new();
        loop {
            if self.is_sym("(") {
                self.bump();
                let mut names = vec![self.ident()?];
                while let Tok::Ident(_) = self.peek() {
                    names.push(self.ident()?);
                }
                self.expect_sym(":")?;
                let ty = self.term()?;
                self.expect_sym(")")?;
                out.push(Binder { names, ty: Some(ty) });
            } else if matches!(self.peek(), Tok::Ident(s) if !KEYWORDS.contains(&s.as_str())) {
                let n = self.ident()?;
                out.push(Binder { names: vec![n], ty: None });
            } else {
                return Ok(out);
            }
        }
    }

    fn fixpoint(&mut self) -> PResult<Sentence> {
        let name = self.ident()?;
        let binders = self.param_binders()?;
        let struct_arg = if self.eat_sym("{") {
            self.expect_kw("struct")?;
            let a = self.ident()?;
            self.expect_sym("}")?;
            Some(a)
        } else {
            None
        };
        self.expect_sym(":")?;
        let ty = self.term()?;
        self.expect_sym(":=")?;
        let body = self.term()?;
        let notation = if self.eat_kw("where") {
            let s = match self.bump() {
                Tok::Str(s) => s,
                _ => return self.err(&["notation string"]),
            };
            self.expect_sym(":=")?;
            let e = self.atom()?;
            Some((s, e))
        } else {
            None
        };
        Ok(Sentence::Fixpoint { name, binders, struct_arg, ty, body, notation })
    }

    fn inductive(&mut self) -> PResult<Sentence> {
        let name = self.ident()?;
        let params = self.param_binders()?;
        self.expect_sym(":")?;
        let arity = self.term()?;
        self.expect_sym(":=")?;
        self.eat_sym("|");
        let mut ctors = Vec::new();
        if !matches!(self.peek(), Tok::Dot) {
            loop {
                let cname = self.ident()?;
                let binders = self.param_binders()?;
                let ty = if self.eat_sym(":") { Some(self.term()?) } else { None };
                ctors.push((cname, binders, ty));
                if !self.eat_sym("|") {
                    break;
                }
            }
        }
        Ok(Sentence::Inductive { name, params, arity, ctors })
    }

    // -------------------------------------------------------------- tactics

    pub fn tactic_seq(&mut self) -> PResult<Tactic> {
        let mut t = self.tactic()?;
        while self.eat_sym(";") {
            let r = self.tactic()?;
            t = Tactic::Seq(Box::new(t), Box::new(r));
        }
        Ok(t)
    }

    fn names(&mut self) -> Vec<String> {
        let mut out = Vec::new();
        while let Tok::Ident(s) = self.peek().clone() {
            if KEYWORDS.contains(&s.as_str()) {
                break;
            }
            self.bump();
            out.push(s);
        }
        out
    }

    fn tactic(&mut self) -> PResult<Tactic> {
        if self.eat_sym("(") {
            let t = self.tactic_seq()?;
            self.expect_sym(")")?;
            return Ok(t);
        }
        let word = match self.peek().clone() {
            Tok::Ident(s) => s,
            _ => return self.err(&["tactic"]),
        };
        self.bump();
        let t = match word.as_str() {
            "intro" => match self.peek() {
                Tok::Ident(_) => Tactic::Intro(Some(self.ident()?)),
                _ => Tactic::Intro(None),
            },
            "intros" => {
                let mut pats = Vec::new();
                while let Tok::Ident(_) | Tok::Sym("[") = self.peek() {
                    pats.push(self.intro_pattern()?);
                }
                Tactic::Intros(pats)
            }
            "exact" => Tactic::Exact(self.term()?),
            "assumption" => Tactic::Assumption,
            "apply" => {
                let e = self.term()?;
                let mut with = Vec::new();
                if self.eat_kw("with") {
                    while self.starts_atom() {
                        with.push(self.atom()?);
                    }
                }
                Tactic::Apply(e, with)
            }
            "split" => Tactic::Split,
            "left" => Tactic::Left,
            "right" => Tactic::Right,
            "exists" => {
                let mut args = vec![self.expr(199)?];
                while self.eat_sym(",") {
                    args.push(self.expr(199)?);
                }
                Tactic::Exists(args)
            }
            "elim" => Tactic::Elim(self.term()?),
            "case" => Tactic::Case(self.term()?),
            "destruct" => {
                let e = self.term()?;
                let pat = if self.eat_kw("as") { Some(self.intro_pattern()?) } else { None };
                Tactic::Destruct(e, pat)
            }
            "induction" => Tactic::Induction(self.term()?),
            "rewrite" => {
                let dir = if self.eat_sym("<-") {
                    RewriteDir::RightToLeft
                } else {
                    self.eat_sym("->");
                    RewriteDir::LeftToRight
                };
                Tactic::Rewrite(dir, self.term()?)
            }
            "reflexivity" => Tactic::Reflexivity,
            "symmetry" => Tactic::Symmetry,
            "assert" => {
                // assert (H : P) or assert P
                if self.is_sym("(")
                    && matches!(self.peek_at(1), Tok::Ident(_))
                    && matches!(self.peek_at(2), Tok::Sym(":"))
                {
                    self.bump();
                    let h = self.ident()?;
                    self.expect_sym(":")?;
                    let p = self.term()?;
                    self.expect_sym(")")?;
                    Tactic::Assert(Some(h), p)
                } else {
                    Tactic::Assert(None, self.term()?)
                }
            }
            "simpl" => Tactic::Simpl,
            "unfold" => {
                let mut names = vec![self.ident()?];
                while self.eat_sym(",") {
                    names.push(self.ident()?);
                }
                Tactic::Unfold(names)
            }
            "ring" => Tactic::Ring,
            "omega" => Tactic::Omega,
            "auto" => Tactic::Auto,
            "trivial" => Tactic::Trivial,
            "intuition" => Tactic::Intuition,
            "tauto" => Tactic::Intuition,
            "discriminate" => {
                if self.starts_atom() {
                    Tactic::Discriminate(Some(self.term()?))
                } else {
                    Tactic::Discriminate(None)
                }
            }
            "injection" => Tactic::Injection(self.term()?),
            "inversion" => Tactic::Inversion(self.term()?),
            "subst" => Tactic::Subst(self.names()),
            "clear" => Tactic::Clear(self.names()),
            "contradiction" => Tactic::Contradiction,
            "try" => Tactic::Try(Box::new(self.tactic()?)),
            "repeat" => Tactic::Repeat(Box::new(self.tactic()?)),
            "idtac" => Tactic::Idtac,
            _ => {
                self.i -= 1;
                return self.err(&["tactic"]);
            }
        };
        Ok(t)
    }

    fn intro_pattern(&mut self) -> PResult<IntroPattern> {
        if self.eat_sym("[") {
            let mut alts = vec![Vec::new()];
            loop {
                if self.eat_sym("]") {
                    break;
                }
                if self.eat_sym("|") {
                    alts.push(Vec::new());
                    continue;
                }
                let p = self.intro_pattern()?;
                alts.last_mut().unwrap().push(p);
            }
            return Ok(IntroPattern::Or(alts));
        }
        let n = self.ident()?;
        Ok(if n == "_" { IntroPattern::Wild } else { IntroPattern::Name(n) })
    }
}

/// Parse exactly one sentence (including its terminating period).
pub fn parse_sentence(text: &str) -> PResult<Sentence> {
    let mut p = Parser::new(text)?;
    let s = p.sentence()?;
    if !p.at_eof() {
        return p.err(&["end of input"]);
    }
    Ok(s)
}

/// Parse a standalone term (no period).
pub fn parse_term(text: &str) -> PResult<Expr> {
    let mut p = Parser::new(text)?;
    let e = p.term()?;
    if !p.at_eof() {
        return p.err(&["end of input"]);
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn show(e: &Expr) -> String {
        match &e.kind {
            ExprKind::Var(s) => s.clone(),
            ExprKind::Num(n) => n.to_string(),
            ExprKind::Infix(op, a, b) => format!("({} {op} {})", show(a), show(b)),
            ExprKind::Arrow(a, b) => format!("({} -> {})", show(a), show(b)),
            ExprKind::App(h, args) => {
                let a: Vec<String> = args.iter().map(show).collect();
                format!("[{} {}]", show(h), a.join(" "))
            }
            ExprKind::Not(a) => format!("~{}", show(a)),
            ExprKind::Pair(a, b) => format!("<{}, {}>", show(a), show(b)),
            other => format!("{other:?}"),
        }
    }

    #[test]
    fn precedence_levels() {
        assert_eq!(show(&parse_term("x*x+2*x+1").unwrap()), "(((x * x) + (2 * x)) + 1)");
        assert_eq!(show(&parse_term("a -> b -> c").unwrap()), "(a -> (b -> c))");
        assert_eq!(show(&parse_term("a /\\ b \\/ c").unwrap()), "((a /\\ b) \\/ c)");
        assert_eq!(show(&parse_term("~ a /\\ b").unwrap()), "(~a /\\ b)");
        assert_eq!(show(&parse_term("1 :: 2 :: l ++ m").unwrap()), "(1 :: (2 :: (l ++ m)))");
        assert_eq!(show(&parse_term("n * n ^ p").unwrap()), "(n * (n ^ p))");
        assert_eq!(show(&parse_term("f x + g y = 3").unwrap()), "(([f x] + [g y]) = 3)");
        assert_eq!(show(&parse_term("(3, 4)").unwrap()), "<3, 4>");
    }

    #[test]
    fn sentences() {
        assert!(matches!(parse_sentence("Check (3=5).").unwrap(), Sentence::Check(_)));
        match parse_sentence("Definition example1 (x : nat) := x*x+2*x+1.").unwrap() {
            Sentence::Definition { name, binders, .. } => {
                assert_eq!(name, "example1");
                assert_eq!(binders.len(), 1);
            }
            other => panic!("{other:?}"),
        }
        let e = parse_sentence("Check (3=5").unwrap_err();
        assert!(matches!(e, ParseError::Syntax { .. }));
    }

    #[test]
    fn fixpoint_with_struct_and_where() {
        let s = parse_sentence(
            "Fixpoint nat_power (n m:nat) {struct m} : nat :=\n match m with 0 => 1 | S p => n*n^p end\nwhere \"n ^ m\" := (nat_power n m).",
        )
        .unwrap();
        match s {
            Sentence::Fixpoint { struct_arg, notation, .. } => {
                assert_eq!(struct_arg.as_deref(), Some("m"));
                assert_eq!(notation.unwrap().0, "n ^ m");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tactics() {
        let s = parse_sentence("destruct IHx as [y Heq]; rewrite Heq.").unwrap();
        match s {
            Sentence::Tactic(Tactic::Seq(a, b)) => {
                assert!(matches!(*a, Tactic::Destruct(_, Some(IntroPattern::Or(_)))));
                assert!(matches!(*b, Tactic::Rewrite(RewriteDir::LeftToRight, _)));
            }
            other => panic!("{other:?}"),
        }
        let s = parse_sentence("assert (lemma: (even x -> exists y, x=2*y)/\\ (even (S x) -> exists y, S x=2*y)).")
            .unwrap();
        assert!(matches!(s, Sentence::Tactic(Tactic::Assert(Some(_), _))));
        let s = parse_sentence("apply plus_reg_l with (1*sum_f(nat_power x) n).").unwrap();
        match s {
            Sentence::Tactic(Tactic::Apply(_, w)) => assert_eq!(w.len(), 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn inductive_decl() {
        let s = parse_sentence(
            "Inductive even : nat -> Prop :=\n  even0 : even 0\n| evenS : forall x:nat, even x -> even (S (S x)).",
        )
        .unwrap();
        match s {
            Sentence::Inductive { ctors, .. } => assert_eq!(ctors.len(), 2),
            other => panic!("{other:?}"),
        }
    }
}
