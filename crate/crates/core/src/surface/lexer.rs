//! Tokenizer for vernacular source. Handles nested `(* *)` comments and
//! distinguishes the sentence-ending period from other dots.

use thiserror::Error;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl std::fmt::Display for Pos {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}, column {}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(u64),
    Str(String),
    Sym(&'static str),
    /// Sentence terminator.
    Dot,
    Eof,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::Num(n) => write!(f, "{n}"),
            Tok::Str(s) => write!(f, "\"{s}\""),
            Tok::Sym(s) => write!(f, "{s}"),
            Tok::Dot => write!(f, "."),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
    /// Byte offsets in the source.
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LexError {
    #[error("{0}: unterminated comment")]
    UnterminatedComment(Pos),
    #[error("{0}: unterminated string")]
    UnterminatedString(Pos),
    #[error("{0}: unexpected character '{1}'")]
    BadChar(Pos, char),
}

impl LexError {
    pub fn pos(&self) -> Pos {
        match self {
            LexError::UnterminatedComment(p) | LexError::UnterminatedString(p) | LexError::BadChar(p, _) => *p,
        }
    }
}

/// Longest match first.
const SYMBOLS: &[&str] = &[
    "<->", "->", "<-", "<=", "<>", ">=", "=>", ":=", "::", "++", "/\\", "\\/", "(", ")", "{", "}", "[", "]", ",", ":",
    ";", "|", "=", "<", ">", "+", "-", "*", "^", "~", "@", "!",
];

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, LexError> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, n: usize| {
        for _ in 0..n {
            if chars[*i].1 == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        }
    };
    let offset = |i: usize| chars.get(i).map(|c| c.0).unwrap_or(src.len());
    while i < chars.len() {
        let c = chars[i].1;
        let pos = Pos { line, col };
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, 1);
            continue;
        }
        if c == '(' && chars.get(i + 1).map(|c| c.1) == Some('*') {
            let mut depth = 0;
            loop {
                if i >= chars.len() {
                    return Err(LexError::UnterminatedComment(pos));
                }
                let a = chars[i].1;
                let b = chars.get(i + 1).map(|c| c.1);
                if a == '(' && b == Some('*') {
                    depth += 1;
                    advance(&mut i, &mut line, &mut col, 2);
                } else if a == '*' && b == Some(')') {
                    depth -= 1;
                    advance(&mut i, &mut line, &mut col, 2);
                    if depth == 0 {
                        break;
                    }
                } else {
                    advance(&mut i, &mut line, &mut col, 1);
                }
            }
            continue;
        }
        let start = i;
        let tok = if is_ident_start(c) {
            let mut j = i;
            while j < chars.len() && is_ident_char(chars[j].1) {
                j += 1;
            }
            let s: String = chars[i..j].iter().map(|c| c.1).collect();
            let n = j - i;
            advance(&mut i, &mut line, &mut col, n);
            Tok::Ident(s)
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].1.is_ascii_digit() {
                j += 1;
            }
            let s: String = chars[i..j].iter().map(|c| c.1).collect();
            let n = j - i;
            advance(&mut i, &mut line, &mut col, n);
            Tok::Num(s.parse().unwrap_or(u64::MAX))
        } else if c == '"' {
            let mut j = i + 1;
            while j < chars.len() && chars[j].1 != '"' {
                j += 1;
            }
            if j >= chars.len() {
                return Err(LexError::UnterminatedString(pos));
            }
            let s: String = chars[i + 1..j].iter().map(|c| c.1).collect();
            let n = j + 1 - i;
            advance(&mut i, &mut line, &mut col, n);
            Tok::Str(s)
        } else if c == '.' {
            advance(&mut i, &mut line, &mut col, 1);
            Tok::Dot
        } else {
            let rest = &src[chars[i].0..];
            match SYMBOLS.iter().find(|s| rest.starts_with(*s)) {
                Some(s) => {
                    advance(&mut i, &mut line, &mut col, s.chars().count());
                    Tok::Sym(s)
                }
                None => return Err(LexError::BadChar(pos, c)),
            }
        };
        out.push(Token { tok, pos, start: offset(start), end: offset(i) });
    }
    out.push(Token { tok: Tok::Eof, pos: Pos { line, col }, start: src.len(), end: src.len() });
    Ok(out)
}

/// Split source into sentences: byte spans ending just after each
/// terminating period. Trailing text without a period is returned as a
/// final span so callers can report it.
pub fn split_sentences(src: &str) -> Result<Vec<(usize, usize)>, LexError> {
    let toks = tokenize(src)?;
    let mut spans = Vec::new();
    let mut start: Option<usize> = None;
    for t in &toks {
        match t.tok {
            Tok::Eof => {
                if let Some(s) = start {
                    spans.push((s, src.len()));
                }
            }
            Tok::Dot => {
                let s = start.take().unwrap_or(t.start);
                spans.push((s, t.end));
            }
            _ => {
                if start.is_none() {
                    start = Some(t.start);
                }
            }
        }
    }
    Ok(spans)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn operators_and_idents() {
        assert_eq!(
            toks("a /\\ b -> t'1 <= 3."),
            vec![
                Tok::Ident("a".into()),
                Tok::Sym("/\\"),
                Tok::Ident("b".into()),
                Tok::Sym("->"),
                Tok::Ident("t'1".into()),
                Tok::Sym("<="),
                Tok::Num(3),
                Tok::Dot,
                Tok::Eof
            ]
        );
    }

    #[test]
    fn nested_comments_skipped() {
        assert_eq!(toks("(* a (* b *) c *) x"), vec![Tok::Ident("x".into()), Tok::Eof]);
    }

    #[test]
    fn sentences_split_on_periods() {
        let src = "simpl. reflexivity.\nQed.";
        let spans = split_sentences(src).unwrap();
        let parts: Vec<&str> = spans.iter().map(|(a, b)| &src[*a..*b]).collect();
        assert_eq!(parts, vec!["simpl.", "reflexivity.", "Qed."]);
    }

    #[test]
    fn positions_are_one_based() {
        let t = tokenize("\n  foo").unwrap();
        assert_eq!(t[0].pos, Pos { line: 2, col: 3 });
    }
}
