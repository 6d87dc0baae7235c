use super::term::{lift, Name, Term};

#[derive(Clone, Debug, PartialEq)]
pub struct LocalDecl {
    pub name: Name,
    pub ty: Term,
    pub body: Option<Term>,
}

/// Local typing context, outermost entry first. `Rel(0)` is the last entry.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LocalContext {
    entries: Vec<LocalDecl>,
}

impl LocalContext {
    pub fn new() -> LocalContext {
        LocalContext::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, name: Name, ty: Term) {
        self.entries.push(LocalDecl { name, ty, body: None });
    }

    pub fn push_def(&mut self, name: Name, ty: Term, body: Term) {
        self.entries.push(LocalDecl { name, ty, body: Some(body) });
    }

    pub fn push_decl(&mut self, d: LocalDecl) {
        self.entries.push(d);
    }

    pub fn pop(&mut self) -> Option<LocalDecl> {
        self.entries.pop()
    }

    pub fn truncate(&mut self, len: usize) {
        self.entries.truncate(len);
    }

    pub fn with(&self, name: Name, ty: Term) -> LocalContext {
        let mut c = self.clone();
        c.push(name, ty);
        c
    }

    pub fn entries(&self) -> &[LocalDecl] {
        &self.entries
    }

    /// Entry for `Rel(i)`, unlifted.
    pub fn get(&self, i: usize) -> Option<&LocalDecl> {
        self.entries.len().checked_sub(i + 1).map(|k| &self.entries[k])
    }

    /// Type of `Rel(i)` expressed in the full context.
    pub fn type_of(&self, i: usize) -> Option<Term> {
        self.get(i).map(|d| lift(&d.ty, i as isize + 1, 0))
    }

    /// Let-body of `Rel(i)` expressed in the full context.
    pub fn body_of(&self, i: usize) -> Option<Term> {
        self.get(i).and_then(|d| d.body.as_ref()).map(|b| lift(b, i as isize + 1, 0))
    }

    /// de Bruijn index of the innermost entry named `n`.
    pub fn index_of(&self, n: &str) -> Option<usize> {
        self.entries.iter().rev().position(|d| &*d.name == n)
    }

    pub fn names(&self) -> Vec<Name> {
        self.entries.iter().map(|d| d.name.clone()).collect()
    }
}
