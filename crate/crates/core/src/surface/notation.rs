//! The fixed notation table and the hard-coded implicit-argument table.

use crate::kernel::GlobalEnv;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Notation {
    /// Operator token(s) used for lookup, e.g. `<=` or `(,)`.
    pub key: &'static str,
    /// Display form with variables, e.g. `x <= y`.
    pub pattern: &'static str,
    /// Target constant; empty for built-in forms.
    pub target: &'static str,
    /// Right-hand side as shown by `Locate`.
    pub expansion: &'static str,
    pub scope: &'static str,
    pub level: u32,
}

const fn n(
    key: &'static str,
    pattern: &'static str,
    target: &'static str,
    expansion: &'static str,
    scope: &'static str,
    level: u32,
) -> Notation {
    Notation { key, pattern, target, expansion, scope, level }
}

/// Entries sharing a key are listed default interpretation first.
pub const TABLE: &[Notation] = &[
    n("->", "A -> B", "", "forall _ : A, B", "type_scope", 99),
    n("<->", "A <-> B", "iff", "iff A B", "type_scope", 95),
    n("\\/", "A \\/ B", "or", "or A B", "type_scope", 85),
    n("/\\", "A /\\ B", "and", "and A B", "type_scope", 80),
    n("~", "~ x", "not", "not x", "type_scope", 75),
    n("=", "x = y", "eq", "eq x y", "type_scope", 70),
    n("<>", "x <> y", "not", "not (eq x y)", "type_scope", 70),
    n("<=", "x <= y", "le", "le x y", "nat_scope", 70),
    n("<", "x < y", "lt", "lt x y", "nat_scope", 70),
    n(">=", "x >= y", "ge", "ge x y", "nat_scope", 70),
    n(">", "x > y", "gt", "gt x y", "nat_scope", 70),
    n("::", "x :: y", "cons", "cons x y", "list_scope", 60),
    n("++", "x ++ y", "app", "app x y", "list_scope", 60),
    n("+", "x + y", "plus", "plus x y", "nat_scope", 50),
    n("-", "x - y", "minus", "minus x y", "nat_scope", 50),
    n("*", "x * y", "mult", "mult x y", "nat_scope", 40),
    n("*", "x * y", "prod", "prod x y", "type_scope", 40),
    n("^", "x ^ y", "", "", "nat_scope", 30),
    n("(,)", "( x , y )", "pair", "pair x y", "core_scope", 0),
];

/// Default target constant of an infix operator (the nat reading for `*`).
pub fn infix_target(sym: &str) -> Option<&'static str> {
    TABLE.iter().find(|e| e.key == sym && !e.target.is_empty()).map(|e| e.target)
}

/// Infix symbol printed for a fully applied binary constant.
pub fn symbol_for(target: &str) -> Option<&'static str> {
    match target {
        "not" | "pair" => None,
        _ => TABLE.iter().find(|e| e.target == target).map(|e| e.key),
    }
}

/// Number of leading implicit arguments of a standard constant.
pub fn implicit_count(name: &str) -> usize {
    match name {
        "eq" | "cons" | "nil" | "app" | "ex" | "eq_ind" | "eq_sym" | "eq_trans" | "f_equal" | "length" => 1,
        "pair" | "ex_intro" | "conj" | "or_introl" | "or_intror" | "eq_refl" | "fst" | "snd" => 2,
        _ => 0,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocateEntry {
    pub pattern: String,
    pub expansion: String,
    pub scope: String,
}

fn normalize_key(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace() && *c != '_').collect()
}

/// Every table entry whose operator matches `query` (e.g. `"_ <= _"`).
pub fn locate(env: &GlobalEnv, query: &str) -> Vec<LocateEntry> {
    let key = normalize_key(query);
    TABLE
        .iter()
        .filter(|e| e.key == key)
        .filter_map(|e| {
            let expansion =
                if e.key == "^" { format!("{} x y", env.notation_target("^")?) } else { e.expansion.to_string() };
            Some(LocateEntry { pattern: e.pattern.to_string(), expansion, scope: e.scope.to_string() })
        })
        .collect()
}

/// Render `Locate` output: a header, then one line per interpretation,
/// the first marked as the default.
pub fn format_locate(entries: &[LocateEntry]) -> String {
    if entries.is_empty() {
        return "Unknown notation".to_string();
    }
    let mut out = String::from("Notation            Scope     \n");
    for (k, e) in entries.iter().enumerate() {
        out.push_str(&format!("\"{}\" := {}   : {}\n", e.pattern, e.expansion, e.scope));
        if k == 0 {
            out.push_str("                      (default interpretation)\n");
        }
    }
    out.pop();
    out
}

/// Validate a `where "n ^ m" := (f n m)` clause. Only the built-in `^`
/// entry can be bound; returns the operator symbol.
pub fn where_clause_symbol(notation: &str) -> Option<&'static str> {
    let parts: Vec<&str> = notation.split_whitespace().collect();
    match parts.as_slice() {
        [a, "^", b] if is_var(a) && is_var(b) && a != b => Some("^"),
        _ => None,
    }
}

fn is_var(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_alphabetic())
        && s.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}
