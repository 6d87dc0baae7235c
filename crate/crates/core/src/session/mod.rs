//! The vernacular driver: one environment, at most one open proof, and the
//! dispatch of each sentence to the module that handles it.

pub mod document;
pub mod protocol;

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Mutex, OnceLock};

use thiserror::Error;

use crate::engine::{EngineError, ProofState};
use crate::kernel::inductive::check_inductive;
use crate::kernel::term::name;
use crate::kernel::typing::{add_definition, KernelError};
use crate::kernel::{Decl, GlobalEnv};
use crate::query::{self, QueryError};
use crate::reduction::normalize;
use crate::surface::ast::Sentence;
use crate::surface::decls::{
    check_where_clause, elab_closed, elab_definition, elab_fixpoint, elab_inductive, elab_statement,
};
use crate::surface::elab::ElabError;
use crate::surface::lexer::{split_sentences, Pos};
use crate::surface::notation::{format_locate, locate};
use crate::surface::parser::{parse_sentence, ParseError};
use crate::surface::print::print_term;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SessionError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Elab(#[from] ElabError),
    #[error("{0}")]
    Kernel(#[from] KernelError),
    #[error("{0}")]
    Engine(#[from] EngineError),
    #[error("{0}")]
    Query(#[from] QueryError),
    #[error("no proof in progress")]
    NoProof,
    #[error("the proof of {0} is still open")]
    ProofInProgress(String),
    #[error("unknown package {0}")]
    UnknownPackage(String),
    #[error("package {0} requires itself")]
    LoadCycle(String),
    #[error("while loading {package}: {pos}: {message}")]
    LoadFailure { package: String, pos: Pos, message: String },
    #[error("cannot go back to sentence {0}: only {1} executed")]
    OutOfRange(usize, usize),
    #[error("{0}")]
    Io(String),
}

impl SessionError {
    /// Position relative to the sentence text, when the error carries one.
    pub fn pos(&self) -> Option<Pos> {
        match self {
            SessionError::Parse(e) => Some(e.pos()),
            SessionError::Elab(e) => Some(e.pos()),
            SessionError::Engine(EngineError::Elab(e)) => Some(e.pos()),
            _ => None,
        }
    }
}

impl SessionError {
    /// The error text without its sentence-relative position.
    pub fn message(&self) -> String {
        let msg = self.to_string();
        match self.pos() {
            Some(p) => msg.strip_prefix(&format!("{p}: ")).map(str::to_string).unwrap_or(msg),
            None => msg,
        }
    }
}

pub type Result<T> = std::result::Result<T, SessionError>;

/// Packages shipped with the tool.
pub fn builtin_package(name: &str) -> Option<&'static str> {
    Some(match name {
        "Prelude" => include_str!("../stdlib/Prelude.v"),
        "Arith" => include_str!("../stdlib/Arith.v"),
        "List" => include_str!("../stdlib/List.v"),
        "Omega" => include_str!("../stdlib/Omega.v"),
        "Arith_extra" => include_str!("../stdlib/Arith_extra.v"),
        _ => return None,
    })
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub prelude: bool,
    pub load_path: Vec<PathBuf>,
}

impl Options {
    pub fn with_prelude() -> Options {
        Options { prelude: true, load_path: Vec::new() }
    }
}

/// Environments reached by loading only builtin packages, keyed by the
/// package sequence. Loading is deterministic, so these can be shared.
fn package_cache() -> &'static Mutex<HashMap<Vec<String>, GlobalEnv>> {
    static CACHE: OnceLock<Mutex<HashMap<Vec<String>, GlobalEnv>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

#[derive(Clone, Debug)]
pub struct Session {
    env: GlobalEnv,
    proof: Option<ProofState>,
    load_path: Vec<PathBuf>,
    loading: Vec<String>,
    /// Builtin packages loaded so far, while nothing else was declared.
    pristine: Option<Vec<String>>,
}

impl Session {
    pub fn new(opts: &Options) -> Result<Session> {
        let mut s = Session {
            env: GlobalEnv::new(),
            proof: None,
            load_path: opts.load_path.clone(),
            loading: Vec::new(),
            pristine: Some(Vec::new()),
        };
        if opts.prelude {
            s.require("Prelude")?;
        }
        Ok(s)
    }

    pub fn env(&self) -> &GlobalEnv {
        &self.env
    }

    pub fn proof(&self) -> Option<&ProofState> {
        self.proof.as_ref()
    }

    /// Parse and execute one sentence given as text.
    pub fn exec_text(&mut self, text: &str) -> Result<String> {
        let s = parse_sentence(text)?;
        self.exec(&s)
    }

    pub fn exec(&mut self, s: &Sentence) -> Result<String> {
        if let Some(ps) = &self.proof {
            let global = matches!(
                s,
                Sentence::Definition { .. }
                    | Sentence::Fixpoint { .. }
                    | Sentence::Inductive { .. }
                    | Sentence::TheoremStart { .. }
                    | Sentence::RequireImport(_)
            );
            if global {
                return Err(SessionError::ProofInProgress(ps.name.clone()));
            }
        }
        let declares = matches!(
            s,
            Sentence::Definition { .. } | Sentence::Fixpoint { .. } | Sentence::Inductive { .. } | Sentence::Qed
        );
        let out = self.dispatch(s)?;
        if declares && self.loading.is_empty() {
            self.pristine = None;
        }
        Ok(out)
    }

    fn dispatch(&mut self, s: &Sentence) -> Result<String> {
        let env = &self.env;
        match s {
            Sentence::Check(e) => {
                let (t, ty) = elab_closed(env, e)?;
                Ok(format!("{} : {}", print_term(env, &t), print_term(env, &ty)))
            }
            Sentence::EvalCompute(e) => {
                let (t, ty) = elab_closed(env, e)?;
                Ok(format!("= {} : {}", print_term(env, &normalize(env, &t)), print_term(env, &ty)))
            }
            Sentence::Definition { name: n, binders, ty, body } => {
                let (t, declared) = elab_definition(env, binders, ty.as_ref(), body, body.pos)?;
                add_definition(&mut self.env, name(n), declared, t, false)?;
                Ok(format!("{n} is defined"))
            }
            Sentence::Fixpoint { name: n, binders, struct_arg, ty, body, notation } => {
                let (t, fty) =
                    elab_fixpoint(env, n, binders, struct_arg.as_deref(), ty, body, notation.as_ref(), body.pos)?;
                let mut next = env.clone();
                add_definition(&mut next, name(n), Some(fty), t, false)?;
                if let Some((s, e)) = notation {
                    next.bind_notation(check_where_clause(n, s, e)?, n);
                }
                self.env = next;
                Ok(format!("{n} is recursively defined"))
            }
            Sentence::Inductive { name: n, params, arity, ctors } => {
                let decl = elab_inductive(env, n, params, arity, ctors, arity.pos)?;
                check_inductive(&mut self.env, &decl)?;
                Ok(format!("{n} is defined\n{n}_ind is defined"))
            }
            Sentence::TheoremStart { name: n, statement, .. } => {
                let stmt = elab_statement(env, statement)?;
                let ps = ProofState::start(env, n, stmt)?;
                let out = ps.render();
                self.proof = Some(ps);
                Ok(out)
            }
            Sentence::Proof => self.proof.as_ref().map(|_| String::new()).ok_or(SessionError::NoProof),
            Sentence::Qed => {
                let ps = self.proof.as_ref().ok_or(SessionError::NoProof)?;
                let (env, report) = ps.qed(true)?;
                let mut out = format!("{} is defined", ps.name);
                if !report.oracles.is_empty() {
                    let names: Vec<String> = report.oracles.iter().map(|n| n.to_string()).collect();
                    out.push_str(&format!("\n(oracles: {})", names.join(", ")));
                }
                self.env = env;
                self.proof = None;
                Ok(out)
            }
            Sentence::Abort => {
                self.proof.take().ok_or(SessionError::NoProof)?;
                Ok(String::new())
            }
            Sentence::Undo(n) => {
                let ps = self.proof.as_mut().ok_or(SessionError::NoProof)?;
                let mut tmp = ps.clone();
                for _ in 0..*n {
                    tmp.undo()?;
                }
                *ps = tmp;
                Ok(ps.render())
            }
            Sentence::Tactic(t) => {
                let ps = self.proof.as_mut().ok_or(SessionError::NoProof)?;
                ps.apply(t)?;
                Ok(ps.render())
            }
            Sentence::RequireImport(pkgs) => {
                let mut tmp = self.clone();
                for p in pkgs {
                    tmp.require(p)?;
                }
                *self = tmp;
                Ok(String::new())
            }
            Sentence::Search(id) => Ok(query::format_results(env, &query::search(env, id)?)),
            Sentence::SearchPattern(p) => Ok(query::format_results(env, &query::search_pattern(env, p)?)),
            Sentence::SearchRewrite(p) => Ok(query::format_results(env, &query::search_rewrite(env, p)?)),
            Sentence::Locate(s) => Ok(format_locate(&locate(env, s))),
            Sentence::Print(n) => self.print(n),
        }
    }

    fn print(&self, n: &str) -> Result<String> {
        let env = &self.env;
        match env.decl(n).map(|d| &**d) {
            Some(Decl::Definition { ty, body, opaque: false, .. }) => {
                Ok(format!("{n} = {}\n     : {}", print_term(env, body), print_term(env, ty)))
            }
            Some(Decl::Definition { ty, .. } | Decl::Axiom { ty, .. } | Decl::Oracle { ty, .. }) => {
                Ok(format!("{n} : {}", print_term(env, ty)))
            }
            _ => match env.global_term(n).and_then(|t| env.global_type(&t)) {
                Some(ty) => Ok(format!("{n} : {}", print_term(env, &ty))),
                None => Err(QueryError::UnknownIdentifier(n.to_string()).into()),
            },
        }
    }

    /// Load a package from the builtin set or the load path; a package
    /// already loaded is skipped.
    pub fn require(&mut self, pkg: &str) -> Result<()> {
        if self.env.has_package(pkg) {
            return Ok(());
        }
        if self.loading.iter().any(|p| p == pkg) {
            return Err(SessionError::LoadCycle(pkg.to_string()));
        }
        let builtin = builtin_package(pkg);
        let top = self.loading.is_empty();
        if let (Some(_), Some(prev), true) = (builtin, &self.pristine, top) {
            let mut key = prev.clone();
            key.push(pkg.to_string());
            if let Some(env) = package_cache().lock().expect("cache").get(&key) {
                self.env = env.clone();
                self.pristine = Some(key);
                return Ok(());
            }
        }
        let src = match builtin {
            Some(s) => s.to_string(),
            None => self.find_on_path(pkg)?,
        };
        let before = self.pristine.clone();
        self.loading.push(pkg.to_string());
        let r = self.load_source(pkg, &src);
        self.loading.pop();
        r?;
        self.env.mark_package(pkg);
        match (builtin, before) {
            (Some(_), Some(mut key)) if top => {
                key.push(pkg.to_string());
                package_cache().lock().expect("cache").insert(key.clone(), self.env.clone());
                self.pristine = Some(key);
            }
            (_, _) if top => self.pristine = None,
            _ => {}
        }
        Ok(())
    }

    fn find_on_path(&self, pkg: &str) -> Result<String> {
        for dir in &self.load_path {
            let p = dir.join(format!("{pkg}.v"));
            if p.is_file() {
                return std::fs::read_to_string(&p).map_err(|e| SessionError::Io(format!("{}: {e}", p.display())));
            }
        }
        Err(SessionError::UnknownPackage(pkg.to_string()))
    }

    fn load_source(&mut self, pkg: &str, src: &str) -> Result<()> {
        let fail = |pos: Pos, message: String| SessionError::LoadFailure { package: pkg.to_string(), pos, message };
        let spans = split_sentences(src).map_err(|e| fail(e.pos(), e.to_string()))?;
        for (a, b) in spans {
            let start = pos_at(src, a);
            if let Err(e) = self.exec_text(&src[a..b]) {
                let pos = e.pos().map(|p| absolute(start, p)).unwrap_or(start);
                return Err(fail(pos, e.message()));
            }
        }
        match &self.proof {
            Some(ps) => Err(fail(pos_at(src, src.len()), format!("the proof of {} is still open", ps.name))),
            None => Ok(()),
        }
    }
}

/// Line and column of a byte offset (both 1-based).
pub fn pos_at(src: &str, offset: usize) -> Pos {
    let before = &src[..offset];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    Pos { line, col }
}

/// Translate a position inside a sentence to one in the whole source.
pub fn absolute(start: Pos, rel: Pos) -> Pos {
    if rel.line == 1 {
        Pos { line: start.line, col: start.col + rel.col - 1 }
    } else {
        Pos { line: start.line + rel.line - 1, col: rel.col }
    }
}
