//! Admission of inductive declarations and generation of their induction
//! schemes.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use super::context::LocalContext;
use super::env::{ConstructorInfo, Decl, GlobalEnv, InductiveInfo};
use super::term::{abstract_term, build_prod, name, subst, Name, Sort, Term};
use super::typing::{check_proof, infer_sort, infer_sort_of, instantiate_prod, KResult, Kernel, KernelError};

/// An inductive declaration as handed over by the elaborator.
///
/// `arity` and every constructor type live in the context of `params`;
/// the inductive itself is referred to as `Ind(name)` applied to the
/// parameters.
#[derive(Clone, Debug)]
pub struct InductiveDecl {
    pub name: Name,
    pub params: Vec<(Name, Term)>,
    pub arity: Term,
    pub ctors: Vec<(Name, Term)>,
}

pub fn scheme_name(ind: &str) -> String {
    format!("{ind}_ind")
}

/// Check a declaration, register it and its `_ind` scheme.
pub fn check_inductive(env: &mut GlobalEnv, decl: &InductiveDecl) -> KResult<Arc<InductiveInfo>> {
    let mut names: Vec<&Name> = vec![&decl.name];
    names.extend(decl.ctors.iter().map(|(n, _)| n));
    let ind_scheme = name(&scheme_name(&decl.name));
    names.push(&ind_scheme);
    for (k, n) in names.iter().enumerate() {
        if env.contains(n) || names[..k].contains(n) {
            return Err(KernelError::NameClash((*n).clone()));
        }
    }

    let mut ctx = LocalContext::new();
    for (n, ty) in &decl.params {
        infer_sort_of(env, &ctx, ty)?;
        ctx.push(n.clone(), ty.clone());
    }
    let (indices, sort_t) = decl.arity.decompose_prod();
    let sort = match sort_t {
        Term::Sort(s) => s,
        other => return Err(KernelError::NotASort(other)),
    };
    infer_sort_of(env, &ctx, &decl.arity)?;
    let np = decl.params.len();
    let nindices = indices.len();

    // Provisional entry so constructor types can mention the inductive.
    let full_ty = build_prod(&decl.params, decl.arity.clone());
    let provisional = Arc::new(InductiveInfo {
        name: decl.name.clone(),
        params: decl.params.clone(),
        ty: full_ty.clone(),
        nindices,
        sort,
        ctors: vec![],
        large_elim: true,
    });
    let mut tmp = env.clone();
    tmp.push(Decl::Inductive(provisional));

    let mut ctors = Vec::new();
    let mut all_fields_prop = true;
    for (cname, cty) in &decl.ctors {
        let (fields, concl) = cty.decompose_prod();
        // Each field type must be a type of an admissible universe.
        let mut fctx = ctx.clone();
        for (k, (fname, fty)) in fields.iter().enumerate() {
            let s = infer_sort(&mut Kernel { env: &tmp }, &fctx, fty)?;
            if s != Sort::Prop {
                all_fields_prop = false;
            }
            if sort != Sort::Prop && !s.leq(sort) {
                return Err(KernelError::TypeMismatch {
                    expected: Term::Sort(sort),
                    actual: Term::Sort(s),
                    position: format!("field {} of constructor {cname}", k + 1),
                });
            }
            check_positive(&decl.name, cname, np, fctx.len(), fty, k + 1)?;
            fctx.push(fname.clone(), fty.clone());
        }
        check_conclusion(&decl.name, cname, np, fields.len(), nindices, &concl)?;
        infer_sort(&mut Kernel { env: &tmp }, &ctx, cty)?;
        ctors.push(ConstructorInfo {
            name: cname.clone(),
            ty: build_prod(&decl.params, cty.clone()),
            nfields: fields.len(),
        });
    }

    let large_elim = sort != Sort::Prop || decl.ctors.is_empty() || (decl.ctors.len() == 1 && all_fields_prop);
    let info = Arc::new(InductiveInfo {
        name: decl.name.clone(),
        params: decl.params.clone(),
        ty: full_ty,
        nindices,
        sort,
        ctors,
        large_elim,
    });
    let mut next = env.clone();
    next.push(Decl::Inductive(info.clone()));
    let (stmt, proof) = derive_induction(&info);
    check_proof(&next, &proof, &stmt)?;
    next.push(Decl::Definition { name: ind_scheme, ty: stmt, body: proof, opaque: false });
    *env = next;
    Ok(info)
}

fn mentions(t: &Term, ind: &str) -> bool {
    let mut found = false;
    super::term::visit(t, 0, &mut |u, _| {
        if matches!(u, Term::Ind(n) if &**n == ind) {
            found = true;
        }
        !found
    });
    found
}

/// `I p1 .. pn idx..` with the parameters as the outermost `np` variables of
/// a context of length `depth`.
fn is_self_app(ind: &str, np: usize, depth: usize, nindices: usize, t: &Term) -> bool {
    let (h, args) = t.decompose_app();
    if !matches!(h, Term::Ind(n) if &**n == ind) || args.len() != np + nindices {
        return false;
    }
    let params_ok = args[..np].iter().enumerate().all(|(k, a)| *a == Term::Rel(depth - 1 - k));
    params_ok && args[np..].iter().all(|a| !mentions(a, ind))
}

fn check_conclusion(ind: &Name, ctor: &Name, np: usize, nfields: usize, nindices: usize, concl: &Term) -> KResult<()> {
    if is_self_app(ind, np, np + nfields, nindices, concl) {
        Ok(())
    } else {
        Err(KernelError::BadConstructorConclusion(ctor.clone()))
    }
}

/// Strict positivity of one field type, typed in a context of `depth`
/// entries (parameters first).
fn check_positive(ind: &Name, ctor: &Name, np: usize, depth: usize, fty: &Term, field: usize) -> KResult<()> {
    if !mentions(fty, ind) {
        return Ok(());
    }
    let (binders, concl) = fty.decompose_prod();
    for (k, (_, dom)) in binders.iter().enumerate() {
        if mentions(dom, ind) {
            return Err(KernelError::NegativeOccurrence {
                ind: ind.clone(),
                ctor: ctor.clone(),
                position: format!("field {field}, left of arrow {}", k + 1),
            });
        }
    }
    let nindices = concl.args().len().saturating_sub(np);
    if is_self_app(ind, np, depth + binders.len(), nindices, &concl) {
        Ok(())
    } else {
        Err(KernelError::NegativeOccurrence {
            ind: ind.clone(),
            ctor: ctor.clone(),
            position: format!("field {field}, nested or non-uniform occurrence"),
        })
    }
}

/// Placeholder constants for building terms by name and closing them later.
#[derive(Default)]
pub(crate) struct Namer {
    next: usize,
    display: HashMap<Name, Name>,
    /// Placeholders whose display name was invented rather than declared.
    auto: HashSet<Name>,
}

impl Namer {
    pub(crate) fn fresh(&mut self, display: &str) -> Term {
        let n = name(&format!("\u{0}s{}", self.next));
        self.next += 1;
        self.display.insert(n.clone(), name(display));
        Term::Const(n)
    }

    /// Base name for a binder of type `ty`: first letter of the head.
    fn base_for(&self, ty: &Term) -> String {
        let head = match ty.head() {
            Term::Ind(n) | Term::Const(n) => self.display.get(n).cloned().unwrap_or(n.clone()),
            Term::Sort(_) => name("T"),
            _ => name("x"),
        };
        head.chars().next().map(|c| c.to_lowercase().to_string()).unwrap_or_else(|| "x".into())
    }
}

pub(crate) fn fresh_name(base: &str, used: &[String]) -> String {
    if !used.iter().any(|u| u == base) {
        return base.to_string();
    }
    (0..).map(|k| format!("{base}{k}")).find(|c| !used.iter().any(|u| u == c)).unwrap()
}

/// `forall (n1 : T1) .. , body` where each `ni` is given by a placeholder.
pub(crate) fn close_prod(binders: &[(Name, Term, Term)], body: Term) -> Term {
    binders
        .iter()
        .rev()
        .fold(body, |acc, (n, ph, ty)| Term::Prod(n.clone(), Arc::new(ty.clone()), Arc::new(abstract_term(&acc, ph))))
}

/// Like [`close_prod`], but invented names of unused binders are dropped
/// so they display as arrows.
fn close_statement(namer: &Namer, binders: &[(Name, Term, Term)], body: Term) -> Term {
    binders.iter().rev().fold(body, |acc, (n, ph, ty)| {
        let b = abstract_term(&acc, ph);
        let auto = matches!(ph, Term::Const(c) if namer.auto.contains(c));
        let n = if auto && !b.has_rel(0) { super::term::anonymous() } else { n.clone() };
        Term::Prod(n, Arc::new(ty.clone()), Arc::new(b))
    })
}

pub(crate) fn close_lambda(binders: &[(Name, Term, Term)], body: Term) -> Term {
    binders
        .iter()
        .rev()
        .fold(body, |acc, (n, ph, ty)| Term::Lambda(n.clone(), Arc::new(ty.clone()), Arc::new(abstract_term(&acc, ph))))
}

/// Peel products of `ty` with fresh placeholders, naming anonymous binders
/// after their type. Returns the binders and the remaining conclusion.
fn open_prods(
    namer: &mut Namer,
    ty: &Term,
    count: Option<usize>,
    used: &mut Vec<String>,
) -> (Vec<(Name, Term, Term)>, Term) {
    let mut out = Vec::new();
    let mut t = ty.clone();
    while let Term::Prod(n, a, b) = &t {
        if count.is_some_and(|c| out.len() == c) {
            break;
        }
        let anon = super::term::is_anonymous(n);
        let base = if anon { namer.base_for(a) } else { n.to_string() };
        let shown = fresh_name(&base, used);
        used.push(shown.clone());
        let ph = namer.fresh(&shown);
        if anon {
            if let Term::Const(c) = &ph {
                namer.auto.insert(c.clone());
            }
        }
        out.push((name(&shown), ph.clone(), (**a).clone()));
        t = subst(b, &ph);
    }
    (out, t)
}

/// Standard minimality scheme `I_ind` and its proof by structural recursion.
pub fn derive_induction(info: &InductiveInfo) -> (Term, Term) {
    let mut namer = Namer::default();
    let np = info.nparams();
    let dependent = info.sort != Sort::Prop;
    let ind = Term::Ind(info.name.clone());

    // Parameters.
    let mut used: Vec<String> = Vec::new();
    let (params, arity) = open_prods(&mut namer, &info.ty, Some(np), &mut used);
    let pvals: Vec<Term> = params.iter().map(|(_, ph, _)| ph.clone()).collect();

    // Motive type: forall indices, [forall x : I params indices,] Prop.
    let motive_ty = {
        let mut u = used.clone();
        let (idx, _) = open_prods(&mut namer, &arity, None, &mut u);
        let mut binders = idx.clone();
        if dependent {
            let self_ty =
                Term::app(ind.clone(), pvals.iter().cloned().chain(idx.iter().map(|b| b.1.clone())).collect());
            let x = namer.fresh("x");
            binders.push((super::term::anonymous(), x, self_ty));
        }
        close_statement(&namer, &binders, Term::prop())
    };
    used.push("P".into());
    let p = namer.fresh("P");
    let motive = |idx: Vec<Term>, x: Term| -> Term {
        let mut args = idx;
        if dependent {
            args.push(x);
        }
        Term::app(p.clone(), args)
    };

    // One premise per constructor, plus the data to build its branch.
    let mut premises: Vec<(Name, Term, Term)> = Vec::new();
    let mut branch_specs = Vec::new();
    for (j, c) in info.ctors.iter().enumerate() {
        let cty = instantiate_prod(&c.ty, &pvals);
        let mut local_used = used.clone();
        let (fields, concl) = open_prods(&mut namer, &cty, None, &mut local_used);
        let mut binders: Vec<(Name, Term, Term)> = Vec::new();
        // For each field: Some((inner binders, recursive indices)) if recursive.
        let mut recs = Vec::new();
        for f in &fields {
            binders.push(f.clone());
            let (inner, fc) = open_prods(&mut namer, &f.2, None, &mut local_used.clone());
            if matches!(fc.head(), Term::Ind(n) if *n == info.name) {
                let idx = fc.args()[np..].to_vec();
                let applied = Term::app(f.1.clone(), inner.iter().map(|b| b.1.clone()).collect());
                let ih = close_prod(&inner, motive(idx.clone(), applied));
                let ph = namer.fresh("IH");
                binders.push((super::term::anonymous(), ph, ih));
                recs.push(Some((inner, idx)));
            } else {
                recs.push(None);
            }
        }
        let cidx = concl.args()[np..].to_vec();
        let cterm = Term::app(
            Term::Construct(info.name.clone(), j + 1),
            pvals.iter().cloned().chain(fields.iter().map(|f| f.1.clone())).collect(),
        );
        let premise = close_statement(&namer, &binders, motive(cidx, cterm));
        let fph = namer.fresh("f");
        premises.push((super::term::anonymous(), fph.clone(), premise));
        branch_specs.push((fph, fields, recs));
    }

    // Conclusion binders: indices then the element.
    let mut cused = used.clone();
    let (idx, _) = open_prods(&mut namer, &arity, None, &mut cused);
    let self_ty = Term::app(ind.clone(), pvals.iter().cloned().chain(idx.iter().map(|b| b.1.clone())).collect());
    let xname = if dependent { fresh_name(&namer.base_for(&self_ty), &cused) } else { "_".to_string() };
    let x = namer.fresh(&xname);
    let idx_vals: Vec<Term> = idx.iter().map(|b| b.1.clone()).collect();
    let goal = motive(idx_vals.clone(), x.clone());
    let mut concl_binders = idx.clone();
    concl_binders.push((name(&xname), x.clone(), self_ty.clone()));
    let fix_ty = close_statement(&namer, &concl_binders, goal);

    let mut head = params.clone();
    head.push((name("P"), p.clone(), motive_ty));
    head.extend(premises.iter().cloned());
    let statement = close_prod(&head, fix_ty.clone());

    // Proof: fun params P premises => fix F idx x := match x ... end.
    let fself = namer.fresh("F");
    let mut branches = Vec::new();
    for (fph, fields, recs) in &branch_specs {
        let mut args = Vec::new();
        for (f, rec) in fields.iter().zip(recs) {
            args.push(f.1.clone());
            if let Some((inner, ridx)) = rec {
                let applied = Term::app(f.1.clone(), inner.iter().map(|b| b.1.clone()).collect());
                let mut call_args = ridx.clone();
                call_args.push(applied);
                let call = Term::app(fself.clone(), call_args);
                args.push(close_lambda(inner, call));
            }
        }
        branches.push(close_lambda(fields, Term::app(fph.clone(), args)));
    }
    let mut pu = used.clone();
    let (pidx, _) = open_prods(&mut namer, &arity, None, &mut pu);
    let pself_ty = Term::app(ind.clone(), pvals.iter().cloned().chain(pidx.iter().map(|b| b.1.clone())).collect());
    let px = namer.fresh("x");
    let mut pbinders = pidx.clone();
    pbinders.push((name("x"), px.clone(), pself_ty));
    let predicate = close_lambda(&pbinders, motive(pidx.iter().map(|b| b.1.clone()).collect(), px));
    let body = Term::mk_match(info.name.clone(), x.clone(), predicate, branches);
    let fix_body = abstract_term(&close_lambda(&concl_binders, body), &fself);
    let fix = Term::mk_fix(name("F"), idx.len(), fix_ty, fix_body);
    let proof = close_lambda(&head, fix);
    (statement, proof)
}
