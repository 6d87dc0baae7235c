//! Expected responses for the introductory transcript. Comparison is
//! modulo whitespace, so `3=5` and `3 = 5` agree.

pub const TRANSCRIPT: &[(&str, &str)] = &[
    ("Check True.", "True : Prop"),
    ("Check False.", "False : Prop"),
    ("Check 3.", "3 : nat"),
    ("Check (3+4).", "3 + 4 : nat"),
    ("Check (3=5).", "3=5 : Prop"),
    ("Check (3,4).", "(3,4) : nat * nat"),
    ("Check ((3=5)/\\True).", "3 = 5 /\\ True : Prop"),
    ("Check nat -> Prop.", "nat -> Prop : Type"),
    ("Check (3 <= 6).", "3 <= 6 : Prop"),
    ("Check (fun x:nat => x = 3).", "fun x : nat => x = 3 : nat -> Prop"),
    (
        "Check (forall x:nat, x < 3 \\/ (exists y:nat, x = y + 3)).",
        "forall x : nat, x < 3 \\/ (exists y : nat, x = y + 3) : Prop",
    ),
    ("Check (let f := fun x => (x * 3,x) in f 3).", "let f := fun x : nat => (x * 3, x) in f 3 : nat * nat"),
    (
        "Locate \"_ <= _\".",
        "Notation            Scope     \n\"x <= y\" := le x y   : nat_scope\n                      (default interpretation)",
    ),
    ("Check and.", "and : Prop -> Prop -> Prop"),
    ("Check (and True False).", "True /\\ False : Prop"),
    ("Eval compute in let f := fun x => (x * 3, x) in f 3.", "= (9, 3) : nat * nat"),
    ("Definition example1 := fun x : nat => x*x+2*x+1.", "example1 is defined"),
    ("Check example1.", "example1 : nat -> nat"),
    ("Eval compute in example1 1.", "= 4 : nat"),
    ("Check le_n.", "le_n : forall n : nat, n <= n"),
    ("Check (le_n 0).", "le_n 0 : 0 <= 0"),
    // The printed source has `le_S 0 1` and `le_n O` here; both are typos.
    ("Check (le_S 0 0).", "le_S 0 0 : 0 <= 0 -> 0 <= 1"),
    ("Check (le_S 0 0 (le_n 0)).", "le_S 0 0 (le_n 0) : 0 <= 1"),
];

/// Whitespace-insensitive equality.
pub fn same(a: &str, b: &str) -> bool {
    let strip = |s: &str| s.chars().filter(|c| !c.is_whitespace()).collect::<String>();
    strip(a) == strip(b)
}

/// Replay the transcript from the prelude; the mismatches, if any.
pub fn replay() -> Vec<String> {
    let mut s = super::prelude();
    let mut bad = Vec::new();
    for (input, expected) in TRANSCRIPT {
        match s.exec_text(input) {
            Ok(out) if same(&out, expected) => {}
            Ok(out) => bad.push(format!("{input} gave {out:?}, expected {expected:?}")),
            Err(e) => bad.push(format!("{input} failed: {e}")),
        }
    }
    bad
}

pub const BIN_IND: &str = "forall P : bin -> Prop,
       P L ->
       (forall b : bin,
         P b -> forall b0 : bin, P b0 -> P (N b b0)) ->
       forall b : bin, P b";

pub const EVEN_IND: &str = "forall P : nat -> Prop,
       P 0 ->
       (forall x : nat, even x -> P x -> P (S (S x))) ->
       forall n : nat, even n -> P n";

/// A proof name and the oracle kinds it may list.
pub type Expect = (&'static str, &'static [&'static str]);

/// Proof scripts that must seal, with the proofs they define.
pub const PROOFS: &[(&str, &[Expect])] = &[
    ("transcript.v", &[("example2", &[])]),
    ("bin.v", &[("example3_size", &[]), ("flatten_aux_size", &["ring"]), ("flatten_size", &["ring"])]),
    ("even.v", &[("even_mult", &["ring"]), ("even_mult'", &["ring"]), ("not_even_1", &[])]),
    ("omega.v", &[("omega_example", &["omega"])]),
    ("quant.v", &[("ex1", &[]), ("ex2", &[])]),
];

/// Query commands after `Require Import Arith`, with lemma names that
/// must appear in the answer (in this relative order).
pub const QUERIES: &[(&str, &[&str])] = &[
    ("Search True.", &["I"]),
    ("Search le.", &["le_n", "le_S"]),
    ("SearchPattern (_ + _ <= _ + _).", &["plus_le_compat_l", "plus_le_compat_r", "plus_le_compat"]),
    ("SearchRewrite (_ + (_ - _)).", &["le_plus_minus"]),
];

/// Names listed by a query answer, one `name : type` per line.
pub fn listed(out: &str) -> Vec<String> {
    out.lines().filter_map(|l| l.split(" : ").next()).map(|n| n.trim().to_string()).filter(|n| !n.is_empty()).collect()
}

/// Every query answer contains its required names in order; the
/// failures, if any.
pub fn check_queries() -> Vec<String> {
    let mut s = super::prelude();
    s.exec_text("Require Import Arith.").expect("Arith loads");
    let mut bad = Vec::new();
    for (q, required) in QUERIES {
        let out = match s.exec_text(q) {
            Ok(o) => o,
            Err(e) => {
                bad.push(format!("{q} failed: {e}"));
                continue;
            }
        };
        let names = listed(&out);
        let pos: Vec<Option<usize>> = required.iter().map(|r| names.iter().position(|n| n == r)).collect();
        let ordered = pos.windows(2).all(|w| matches!(w, [Some(a), Some(b)] if a < b));
        if pos.iter().any(Option::is_none) || !ordered {
            bad.push(format!("{q} listed {names:?}"));
        }
        if s.exec_text(q).ok().as_deref() != Some(out.as_str()) {
            bad.push(format!("{q} is not deterministic"));
        }
    }
    bad
}
