use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use super::term::{name, Name, Sort, Term};

/// Which decision procedure produced an oracle lemma.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleKind {
    Ring,
    Omega,
}

impl std::fmt::Display for OracleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OracleKind::Ring => write!(f, "ring"),
            OracleKind::Omega => write!(f, "omega"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConstructorInfo {
    pub name: Name,
    /// Closed type `forall params, forall fields, I params indices`.
    pub ty: Term,
    pub nfields: usize,
}

#[derive(Clone, Debug)]
pub struct InductiveInfo {
    pub name: Name,
    pub params: Vec<(Name, Term)>,
    /// Closed type `forall params, forall indices, Sort`.
    pub ty: Term,
    pub nindices: usize,
    pub sort: Sort,
    pub ctors: Vec<ConstructorInfo>,
    /// Whether matches may return outside `Prop` (always true outside `Prop`).
    pub large_elim: bool,
}

impl InductiveInfo {
    pub fn nparams(&self) -> usize {
        self.params.len()
    }
}

#[derive(Clone, Debug)]
pub enum Decl {
    Definition {
        name: Name,
        ty: Term,
        body: Term,
        opaque: bool,
    },
    Axiom {
        name: Name,
        ty: Term,
    },
    /// A lemma closed by a decision procedure; `evidence` is the
    /// procedure's certificate in its plain-text form.
    Oracle {
        name: Name,
        ty: Term,
        kind: OracleKind,
        evidence: String,
    },
    Inductive(Arc<InductiveInfo>),
}

impl Decl {
    pub fn name(&self) -> &Name {
        match self {
            Decl::Definition { name, .. } | Decl::Axiom { name, .. } | Decl::Oracle { name, .. } => name,
            Decl::Inductive(info) => &info.name,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Entry {
    Decl(usize),
    Constructor(usize, usize),
}

/// Ordered declaration store. Cloning is cheap enough to snapshot per
/// executed sentence.
#[derive(Clone, Debug, Default)]
pub struct GlobalEnv {
    decls: Vec<Arc<Decl>>,
    index: HashMap<Name, Entry>,
    /// Infix notations whose target is bound at load time (e.g. `^`).
    notations: BTreeMap<String, Name>,
    packages: BTreeSet<String>,
}

/// What a global identifier resolves to.
#[derive(Clone, Debug)]
pub enum GlobalRef {
    Const(Arc<Decl>),
    Ind(Arc<InductiveInfo>),
    Construct(Arc<InductiveInfo>, usize),
}

impl GlobalEnv {
    pub fn new() -> GlobalEnv {
        GlobalEnv::default()
    }

    pub fn len(&self) -> usize {
        self.decls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }

    pub fn decls(&self) -> impl Iterator<Item = &Arc<Decl>> {
        self.decls.iter()
    }

    pub fn contains(&self, n: &str) -> bool {
        self.index.contains_key(n)
    }

    pub fn lookup(&self, n: &str) -> Option<GlobalRef> {
        match self.index.get(n)? {
            Entry::Decl(i) => match &*self.decls[*i] {
                Decl::Inductive(info) => Some(GlobalRef::Ind(info.clone())),
                _ => Some(GlobalRef::Const(self.decls[*i].clone())),
            },
            Entry::Constructor(i, j) => match &*self.decls[*i] {
                Decl::Inductive(info) => Some(GlobalRef::Construct(info.clone(), *j)),
                _ => None,
            },
        }
    }

    pub fn decl(&self, n: &str) -> Option<&Arc<Decl>> {
        match self.index.get(n)? {
            Entry::Decl(i) => Some(&self.decls[*i]),
            Entry::Constructor(..) => None,
        }
    }

    pub fn inductive(&self, n: &str) -> Option<&Arc<InductiveInfo>> {
        match self.decl(n).map(|d| &**d) {
            Some(Decl::Inductive(info)) => Some(info),
            _ => None,
        }
    }

    pub fn constructor(&self, ind: &str, ordinal: usize) -> Option<&ConstructorInfo> {
        self.inductive(ind)?.ctors.get(ordinal.checked_sub(1)?)
    }

    /// Type of a constant, if declared.
    pub fn const_type(&self, n: &str) -> Option<&Term> {
        match &**self.decl(n)? {
            Decl::Definition { ty, .. } | Decl::Axiom { ty, .. } | Decl::Oracle { ty, .. } => Some(ty),
            Decl::Inductive(_) => None,
        }
    }

    /// Body of a transparent definition.
    pub fn const_body(&self, n: &str) -> Option<&Term> {
        match &**self.decl(n)? {
            Decl::Definition { body, opaque: false, .. } => Some(body),
            _ => None,
        }
    }

    pub fn is_oracle(&self, n: &str) -> bool {
        matches!(self.decl(n).map(|d| &**d), Some(Decl::Oracle { .. }))
    }

    /// Low-level insertion; callers are responsible for having checked the
    /// declaration (see `typing::add_definition` and `inductive::check_inductive`).
    pub(crate) fn push(&mut self, decl: Decl) {
        let i = self.decls.len();
        if let Decl::Inductive(info) = &decl {
            for (j, c) in info.ctors.iter().enumerate() {
                self.index.insert(c.name.clone(), Entry::Constructor(i, j + 1));
            }
        }
        self.index.insert(decl.name().clone(), Entry::Decl(i));
        self.decls.push(Arc::new(decl));
    }

    pub fn notation_target(&self, symbol: &str) -> Option<&Name> {
        self.notations.get(symbol)
    }

    pub fn bind_notation(&mut self, symbol: &str, target: &str) {
        self.notations.insert(symbol.to_string(), name(target));
    }

    pub fn has_package(&self, p: &str) -> bool {
        self.packages.contains(p)
    }

    pub fn mark_package(&mut self, p: &str) {
        self.packages.insert(p.to_string());
    }

    /// Type of a global term node (`Const`, `Ind`, `Construct`).
    pub fn global_type(&self, t: &Term) -> Option<Term> {
        match t {
            Term::Const(n) => self.const_type(n).cloned(),
            Term::Ind(n) => self.inductive(n).map(|i| i.ty.clone()),
            Term::Construct(n, j) => self.constructor(n, *j).map(|c| c.ty.clone()),
            _ => None,
        }
    }

    /// Display name of a global term node.
    pub fn global_name(&self, t: &Term) -> Option<Name> {
        match t {
            Term::Const(n) | Term::Ind(n) => Some(n.clone()),
            Term::Construct(n, j) => self.constructor(n, *j).map(|c| c.name.clone()),
            _ => None,
        }
    }

    /// Term node for a global identifier.
    pub fn global_term(&self, n: &str) -> Option<Term> {
        Some(match self.lookup(n)? {
            GlobalRef::Const(d) => Term::Const(d.name().clone()),
            GlobalRef::Ind(info) => Term::Ind(info.name.clone()),
            GlobalRef::Construct(info, j) => Term::Construct(info.name.clone(), j),
        })
    }
}
