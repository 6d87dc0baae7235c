//! A document is the list of executed sentences, each with the session
//! state reached after it, so stepping back is a lookup.

use crate::engine::GoalView;
use crate::surface::lexer::{split_sentences, Pos};

use super::{absolute, pos_at, Result, Session, SessionError};

#[derive(Clone, Debug)]
pub struct Entry {
    pub text: String,
    pub start: Pos,
    pub output: String,
    state: Session,
}

/// An error located in the whole text handed to [`Document::exec`].
#[derive(Clone, Debug, PartialEq)]
pub struct Located {
    pub pos: Pos,
    pub error: SessionError,
}

impl Located {
    /// The error text without the sentence-relative position.
    pub fn message(&self) -> String {
        self.error.message()
    }
}

impl std::fmt::Display for Located {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.pos, self.message())
    }
}

#[derive(Clone, Debug)]
pub struct Document {
    initial: Session,
    entries: Vec<Entry>,
}

impl Document {
    pub fn new(initial: Session) -> Document {
        Document { initial, entries: Vec::new() }
    }

    pub fn session(&self) -> &Session {
        self.entries.last().map_or(&self.initial, |e| &e.state)
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Execute every sentence of `text` in order, stopping at the first
    /// error. Sentences before the error stay executed. Returns the
    /// outputs of the executed sentences.
    pub fn exec(&mut self, text: &str) -> std::result::Result<Vec<String>, Located> {
        let spans =
            split_sentences(text).map_err(|e| Located { pos: e.pos(), error: SessionError::Parse(e.into()) })?;
        let mut outs = Vec::new();
        for (a, b) in spans {
            let start = pos_at(text, a);
            let sentence = &text[a..b];
            let mut next = self.session().clone();
            match next.exec_text(sentence) {
                Ok(out) => {
                    self.entries.push(Entry { text: sentence.to_string(), start, output: out.clone(), state: next });
                    outs.push(out);
                }
                Err(error) => {
                    let pos = error.pos().map_or(start, |p| absolute(start, p));
                    return Err(Located { pos, error });
                }
            }
        }
        Ok(outs)
    }

    /// Keep only the first `n` executed sentences.
    pub fn back(&mut self, n: usize) -> Result<()> {
        if n > self.entries.len() {
            return Err(SessionError::OutOfRange(n, self.entries.len()));
        }
        self.entries.truncate(n);
        Ok(())
    }

    pub fn goals(&self) -> Vec<GoalView> {
        self.session().proof().map(|p| p.goal_views()).unwrap_or_default()
    }

    /// Input sentences interleaved with their outputs.
    pub fn transcript(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&e.text);
            out.push('\n');
            if !e.output.is_empty() {
                out.push_str(&e.output);
                out.push('\n');
            }
        }
        out
    }
}

/// Outcome of checking a whole file.
#[derive(Clone, Debug)]
pub struct FileReport {
    pub transcript: String,
    pub error: Option<Located>,
    pub open_proof: bool,
}

impl FileReport {
    pub fn success(&self) -> bool {
        self.error.is_none() && !self.open_proof
    }
}

pub fn run_source(session: Session, src: &str) -> FileReport {
    let mut doc = Document::new(session);
    let error = doc.exec(src).err();
    let open_proof = error.is_none() && doc.session().proof().is_some();
    let mut transcript = doc.transcript();
    if let Some(e) = &error {
        transcript.push_str(&format!("Error: {e}\n"));
    } else if open_proof {
        transcript.push_str("Error: open proof at end of file\n");
    }
    FileReport { transcript, error, open_proof }
}

pub fn run_file(session: Session, path: &std::path::Path) -> std::result::Result<FileReport, SessionError> {
    let src = std::fs::read_to_string(path).map_err(|e| SessionError::Io(format!("{}: {e}", path.display())))?;
    Ok(run_source(session, &src))
}
