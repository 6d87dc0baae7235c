use super::context::LocalContext;
use super::env::GlobalEnv;
use super::inductive::{check_inductive, InductiveDecl};
use super::term::{name, Term};
use super::typing::{add_definition, check_proof, convertible, infer_type, KernelError};
use crate::reduction::{normalize, simpl, whnf_all};

fn nat() -> Term {
    Term::ind("nat")
}
fn o() -> Term {
    Term::construct("nat", 1)
}
fn s(t: Term) -> Term {
    Term::app1(Term::construct("nat", 2), t)
}
fn num(k: usize) -> Term {
    (0..k).fold(o(), |t, _| s(t))
}
fn arrow(a: Term, b: Term) -> Term {
    Term::arrow(a, b)
}
/// Anonymous product whose codomain is already under the binder.
fn imp(a: Term, b: Term) -> Term {
    Term::prod("_", a, b)
}

fn base_env() -> GlobalEnv {
    let mut env = GlobalEnv::new();
    check_inductive(
        &mut env,
        &InductiveDecl {
            name: name("nat"),
            params: vec![],
            arity: Term::set(),
            ctors: vec![(name("O"), nat()), (name("S"), arrow(nat(), nat()))],
        },
    )
    .unwrap();
    check_inductive(
        &mut env,
        &InductiveDecl {
            name: name("bool"),
            params: vec![],
            arity: Term::set(),
            ctors: vec![(name("true"), Term::ind("bool")), (name("false"), Term::ind("bool"))],
        },
    )
    .unwrap();
    check_inductive(
        &mut env,
        &InductiveDecl {
            name: name("True"),
            params: vec![],
            arity: Term::prop(),
            ctors: vec![(name("I"), Term::ind("True"))],
        },
    )
    .unwrap();
    check_inductive(
        &mut env,
        &InductiveDecl { name: name("False"), params: vec![], arity: Term::prop(), ctors: vec![] },
    )
    .unwrap();
    // plus n m := match n with O => m | S p => S (plus p m) end
    let body = Term::lambda(
        "n",
        nat(),
        Term::lambda(
            "m",
            nat(),
            Term::mk_match(
                name("nat"),
                Term::Rel(1),
                Term::lambda("x", nat(), nat()),
                vec![
                    Term::Rel(0),
                    Term::lambda("p", nat(), s(Term::app(Term::Rel(3), vec![Term::Rel(0), Term::Rel(1)]))),
                ],
            ),
        ),
    );
    let ty = arrow(nat(), arrow(nat(), nat()));
    let fix = Term::mk_fix(name("plus"), 0, ty.clone(), body);
    add_definition(&mut env, name("plus"), Some(ty), fix, false).unwrap();
    env
}

fn plus(a: Term, b: Term) -> Term {
    Term::app(Term::constant("plus"), vec![a, b])
}

fn bin_decl() -> InductiveDecl {
    let bin = Term::ind("bin");
    InductiveDecl {
        name: name("bin"),
        params: vec![],
        arity: Term::set(),
        ctors: vec![(name("L"), bin.clone()), (name("N"), arrow(bin.clone(), arrow(bin.clone(), bin)))],
    }
}

fn even_decl() -> InductiveDecl {
    let even = |t: Term| Term::app1(Term::ind("even"), t);
    InductiveDecl {
        name: name("even"),
        params: vec![],
        arity: arrow(nat(), Term::prop()),
        ctors: vec![
            (name("even0"), even(o())),
            (name("evenS"), Term::prod("x", nat(), arrow(even(Term::Rel(0)), even(s(s(Term::Rel(0))))))),
        ],
    }
}

#[test]
fn infer_plus_numerals() {
    let env = base_env();
    let t = plus(num(3), num(4));
    assert_eq!(infer_type(&env, &LocalContext::new(), &t).unwrap(), nat());
}

#[test]
fn nat_arrow_prop_is_type_one() {
    let env = base_env();
    let t = arrow(nat(), Term::prop());
    let ty = infer_type(&env, &LocalContext::new(), &t).unwrap();
    assert_eq!(ty, Term::Sort(super::term::Sort::Type(1)));
    assert_eq!(format!("{}", ty.as_sort().unwrap()), "Type");
}

#[test]
fn convertible_examples() {
    let env = base_env();
    let ctx = LocalContext::new();
    assert!(convertible(&env, &ctx, &plus(num(2), num(1)), &num(3)));
    let t = plus(num(5), num(0));
    assert!(convertible(&env, &ctx, &t, &t));
    assert!(!convertible(&env, &ctx, &Term::construct("bool", 1), &Term::construct("bool", 2)));
}

#[test]
fn convertible_agrees_with_normalize() {
    let env = base_env();
    let ctx = LocalContext::new();
    for a in 0..4 {
        for b in 0..4 {
            let t = plus(num(a), num(b));
            for c in 0..8 {
                assert_eq!(convertible(&env, &ctx, &t, &num(c)), normalize(&env, &t) == normalize(&env, &num(c)));
            }
        }
    }
}

#[test]
fn check_proof_examples() {
    let env = base_env();
    assert!(check_proof(&env, &Term::construct("True", 1), &Term::ind("True")).is_ok());
    assert!(check_proof(&env, &Term::construct("True", 1), &Term::ind("False")).is_err());
}

#[test]
fn bin_admitted_with_paper_scheme() {
    let mut env = base_env();
    check_inductive(&mut env, &bin_decl()).unwrap();
    let stmt = env.const_type("bin_ind").unwrap().clone();
    // forall P : bin -> Prop, P L -> (forall b, P b -> forall b0, P b0 -> P (N b b0)) -> forall b, P b
    let bin = Term::ind("bin");
    let l = Term::construct("bin", 1);
    let n = Term::construct("bin", 2);
    let expected = Term::prod(
        "P",
        imp(bin.clone(), Term::prop()),
        imp(
            Term::app1(Term::Rel(0), l),
            imp(
                Term::prod(
                    "b",
                    bin.clone(),
                    imp(
                        Term::app1(Term::Rel(2), Term::Rel(0)),
                        Term::prod(
                            "b0",
                            bin.clone(),
                            imp(
                                Term::app1(Term::Rel(4), Term::Rel(0)),
                                Term::app1(Term::Rel(5), Term::app(n, vec![Term::Rel(3), Term::Rel(1)])),
                            ),
                        ),
                    ),
                ),
                Term::prod("b", bin, Term::app1(Term::Rel(3), Term::Rel(0))),
            ),
        ),
    );
    assert_eq!(stmt, expected);
    // Display names survive for the printer.
    let (binders, _) = stmt.decompose_prod();
    let (inner, _) = binders[2].1.decompose_prod();
    let names: Vec<&str> = inner.iter().map(|(n, _)| &**n).collect();
    assert_eq!(names, vec!["b", "_", "b0", "_"]);
}

#[test]
fn even_admitted_with_paper_scheme() {
    let mut env = base_env();
    check_inductive(&mut env, &even_decl()).unwrap();
    let stmt = env.const_type("even_ind").unwrap().clone();
    let even = |t: Term| Term::app1(Term::ind("even"), t);
    // forall P : nat -> Prop, P 0 -> (forall x, even x -> P x -> P (S (S x))) -> forall n, even n -> P n
    let expected = Term::prod(
        "P",
        imp(nat(), Term::prop()),
        imp(
            Term::app1(Term::Rel(0), o()),
            imp(
                Term::prod(
                    "x",
                    nat(),
                    imp(
                        even(Term::Rel(0)),
                        imp(Term::app1(Term::Rel(3), Term::Rel(1)), Term::app1(Term::Rel(4), s(s(Term::Rel(2))))),
                    ),
                ),
                Term::prod("n", nat(), imp(even(Term::Rel(0)), Term::app1(Term::Rel(4), Term::Rel(1)))),
            ),
        ),
    );
    assert_eq!(stmt, expected);
}

#[test]
fn bool_scheme_by_hand() {
    let env = base_env();
    let stmt = env.const_type("bool_ind").unwrap().clone();
    let b = Term::ind("bool");
    let expected = Term::prod(
        "P",
        imp(b.clone(), Term::prop()),
        imp(
            Term::app1(Term::Rel(0), Term::construct("bool", 1)),
            imp(
                Term::app1(Term::Rel(1), Term::construct("bool", 2)),
                Term::prod("b", b, Term::app1(Term::Rel(3), Term::Rel(0))),
            ),
        ),
    );
    assert_eq!(stmt, expected);
}

#[test]
fn negative_occurrence_rejected() {
    let mut env = base_env();
    let bad = Term::ind("bad");
    let decl = InductiveDecl {
        name: name("bad"),
        params: vec![],
        arity: Term::set(),
        ctors: vec![(name("c"), arrow(arrow(bad.clone(), bad.clone()), bad))],
    };
    let before = env.len();
    assert!(matches!(check_inductive(&mut env, &decl), Err(KernelError::NegativeOccurrence { .. })));
    assert_eq!(env.len(), before);
}

#[test]
fn bad_conclusion_rejected() {
    let mut env = base_env();
    let decl =
        InductiveDecl { name: name("weird"), params: vec![], arity: Term::set(), ctors: vec![(name("w"), nat())] };
    assert!(matches!(check_inductive(&mut env, &decl), Err(KernelError::BadConstructorConclusion(_))));
}

#[test]
fn name_clash_rejected() {
    let mut env = base_env();
    let decl = InductiveDecl { name: name("nat"), params: vec![], arity: Term::set(), ctors: vec![] };
    assert!(matches!(check_inductive(&mut env, &decl), Err(KernelError::NameClash(_))));
}

#[test]
fn identity_recursion_rejected() {
    let env = base_env();
    let ty = arrow(nat(), nat());
    let body = Term::lambda("x", nat(), Term::app1(Term::Rel(1), Term::Rel(0)));
    let fix = Term::mk_fix(name("f"), 0, ty, body);
    let r = infer_type(&env, &LocalContext::new(), &fix);
    assert!(matches!(r, Err(KernelError::NonStructuralRecursion(_))));
}

#[test]
fn whnf_and_normalize_examples() {
    let env = base_env();
    let ctx = LocalContext::new();
    let id = Term::lambda("x", nat(), Term::Rel(0));
    assert_eq!(whnf_all(&env, &ctx, &Term::app1(id, o())), o());
    // closed nat terms normalize to numerals
    assert_eq!(normalize(&env, &plus(num(2), num(3))), num(5));
    let t = plus(num(2), num(3));
    assert_eq!(normalize(&env, &normalize(&env, &t)), normalize(&env, &t));
}

#[test]
fn simpl_keeps_names_on_opaque_arguments() {
    let env = base_env();
    let mut ctx = LocalContext::new();
    ctx.push(name("n"), nat());
    // simpl (1 + n) = S n, simpl (n + 1) stays put
    let t = plus(num(1), Term::Rel(0));
    assert_eq!(simpl(&env, &ctx, &t), s(Term::Rel(0)));
    let u = plus(Term::Rel(0), num(1));
    assert_eq!(simpl(&env, &ctx, &u), u);
    assert_eq!(simpl(&env, &ctx, &simpl(&env, &ctx, &t)), simpl(&env, &ctx, &t));
}

#[test]
fn let_typing_substitutes() {
    let env = base_env();
    let t = Term::let_in("x", num(2), nat(), plus(Term::Rel(0), Term::Rel(0)));
    assert_eq!(infer_type(&env, &LocalContext::new(), &t).unwrap(), nat());
    assert_eq!(normalize(&env, &t), num(4));
}

#[test]
fn not_a_function_reported() {
    let env = base_env();
    let t = Term::app1(o(), o());
    assert!(matches!(infer_type(&env, &LocalContext::new(), &t), Err(KernelError::NotAFunction { .. })));
}
