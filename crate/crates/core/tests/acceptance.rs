//! Acceptance run: one PASS/FAIL line per headline criterion. Runs
//! without the libtest harness so the lines always print.

mod common;

use std::time::{Duration, Instant};

use common::{gen, golden, kripke};
use hurry::decide::linear::Evidence;
use hurry::decide::DecideError;
use hurry::engine::EngineError;
use hurry::kernel::typing::KernelError;
use hurry::session::{Session, SessionError};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;

/// Time budgets, pinned.
const TRANSCRIPT_BUDGET: Duration = Duration::from_secs(1);
const CORPUS_BUDGET: Duration = Duration::from_secs(10);
const DECISION_BUDGET: Duration = Duration::from_secs(60);

const RING_CASES: usize = 1000;
const OMEGA_CASES: usize = 200;
const INTUITION_CASES: usize = 200;

fn timed(budget: Duration, f: impl FnOnce() -> Verdict) -> Verdict {
    let t = Instant::now();
    let r = f()?;
    let took = t.elapsed();
    if took > budget {
        return Err(format!("took {took:.2?}, budget {budget:?}"));
    }
    Ok(format!("{r}; {took:.2?}"))
}

fn transcript() -> Verdict {
    timed(TRANSCRIPT_BUDGET, || {
        let bad = golden::replay();
        if bad.is_empty() {
            Ok(format!("{} responses match", golden::TRANSCRIPT.len()))
        } else {
            Err(bad.join("; "))
        }
    })
}

fn proof_corpus() -> Verdict {
    timed(CORPUS_BUDGET, || {
        let mut n = 0;
        for (file, proofs) in golden::PROOFS {
            common::check_proof_file(file, proofs)?;
            n += proofs.len();
        }
        Ok(format!("{n} proofs sealed and rechecked, oracles only from ring/omega"))
    })
}

fn schemes() -> Verdict {
    for (file, ind, shown) in [("bin.v", "bin_ind", golden::BIN_IND), ("even.v", "even_ind", golden::EVEN_IND)] {
        let (doc, r) = common::run(&common::corpus_source(file));
        r.map_err(|e| e.to_string())?;
        let derived = doc.session().env().const_type(ind).ok_or(format!("no {ind}"))?;
        if *derived != common::elaborate_in(&doc, shown) {
            return Err(format!("{ind} differs"));
        }
    }
    Ok("bin_ind and even_ind alpha-equal".into())
}

fn refused(setup: &[&str], bad: &str, ok: fn(&SessionError) -> bool) -> Result<(), String> {
    let mut s: Session = common::prelude();
    for line in setup {
        s.exec_text(line).map_err(|e| format!("{line}: {e}"))?;
    }
    let before = common::fingerprint(&s);
    match s.exec_text(bad) {
        Ok(_) => Err(format!("{bad} was accepted")),
        Err(e) if !ok(&e) => Err(format!("{bad}: unexpected error {e}")),
        Err(_) if common::fingerprint(&s) != before => Err(format!("{bad} changed the state")),
        Err(_) => Ok(()),
    }
}

fn rejections() -> Verdict {
    use SessionError::{Engine, Kernel};
    refused(&[], "Inductive bad : Set := mk : (bad -> nat) -> bad.", |e| {
        matches!(e, Kernel(KernelError::NegativeOccurrence { .. }))
    })?;
    refused(&[], "Fixpoint loop (n : nat) {struct n} : nat := loop (S n).", |e| {
        matches!(e, Kernel(KernelError::NonStructuralRecursion(_)))
    })?;
    refused(&["Lemma open_goal : True /\\ True.", "split."], "Qed.", |e| {
        matches!(e, Engine(EngineError::OpenGoalsRemain(_)))
    })?;
    refused(&["Lemma no_clash : forall n : nat, S n = S 0 -> False.", "intros n H."], "discriminate H.", |e| {
        matches!(e, Engine(EngineError::Decide(DecideError::NotAConstructorClash)))
    })?;
    refused(
        &["Require Import Omega.", "Lemma nonlinear : forall x y : nat, x * y <= x.", "intros x y."],
        "omega.",
        |e| matches!(e, Engine(EngineError::Decide(DecideError::NonLinearTerm(_)))),
    )?;
    Ok("5 commands refused with their errors, state unchanged".into())
}

fn ring_oracle(base: &Session) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut proved, mut bad) = (0, Vec::new());
    for _ in 0..RING_CASES {
        let (n, lhs, rhs) = gen::ring_problem(&mut rng);
        let stmt = format!("forall {} : nat, {} = {}", gen::binders(n), lhs.render(), rhs.render());
        let ok = common::prove_with(base, &stmt, "intros; ring").is_ok();
        proved += ok as usize;
        if ok != gen::agree_on_grid(n, &lhs, &rhs) {
            bad.push(stmt);
        }
    }
    match bad.first() {
        None => Ok(format!("ring {proved}/{RING_CASES} identities")),
        Some(s) => Err(format!("ring disagrees on {} cases, e.g. {s}", bad.len())),
    }
}

fn omega_oracle(base: &Session) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut s = base.clone();
    s.exec_text("Require Import Omega.").map_err(|e| e.to_string())?;
    let (mut proved, mut certs) = (0, 0);
    for _ in 0..OMEGA_CASES {
        let sys = gen::system(&mut rng);
        let stmt = sys.render();
        let r = common::prove_with(&s, &stmt, "intros; omega");
        if r.is_ok() != sys.valid() {
            return Err(format!("omega disagrees on {stmt}: {:?}", r.err()));
        }
        if let Ok(after) = r {
            proved += 1;
            for d in after.env().decls().skip(s.env().len()) {
                if let hurry::kernel::Decl::Oracle { evidence, .. } = &**d {
                    let ev = Evidence::parse(evidence).ok_or("unparseable evidence")?;
                    ev.verify().map_err(|e| format!("certificate rejected on {stmt}: {e}"))?;
                    certs += 1;
                }
            }
        }
    }
    Ok(format!("omega {proved}/{OMEGA_CASES} valid, {certs} certificates verified"))
}

fn intuition_oracle(base: &Session) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut proved, mut refuted) = (0, 0);
    for _ in 0..INTUITION_CASES {
        let f = kripke::formula(&mut rng, 3);
        let ok = common::prove_with(base, &f.statement(), "intuition").is_ok();
        let countermodel = kripke::refuted(&f, 2);
        if ok && countermodel {
            return Err(format!("intuition proved {}, which has a countermodel", f.render()));
        }
        proved += ok as usize;
        refuted += countermodel as usize;
    }
    let (doc, r) = common::run(&common::corpus_source("exercise5_6.v"));
    r.map_err(|e| format!("exercises: {e}"))?;
    if doc.session().proof().is_some() {
        return Err("exercises left a proof open".into());
    }
    if common::prove_with(base, "forall A B : Prop, ((A -> B) -> A) -> A", "intuition").is_ok() {
        return Err("intuition proved Peirce's law".into());
    }
    Ok(format!("intuition {proved} proved, {refuted} refuted, exercises proved, Peirce refused"))
}

fn decision_procedures() -> Verdict {
    let base = common::prelude();
    timed(DECISION_BUDGET, || {
        let parts = [ring_oracle(&base)?, omega_oracle(&base)?, intuition_oracle(&base)?];
        Ok(parts.join(", "))
    })
}

fn sum_identities() -> Verdict {
    common::check_proof_file("exercise6_32.v", &[("sum_n_double", &["ring"])])?;
    let stretch = common::check_proof_file(
        "sum_of_powers.v",
        &[("power_0_inv", &[]), ("sum_of_powers1", &["ring"]), ("sum_of_powers", &["ring", "omega"])],
    );
    match stretch {
        Ok(()) => Ok("sum_n_double proved; sum of powers over nat replays".into()),
        Err(e) => Err(format!("sum_n_double proved; sum of powers over nat failed: {e}")),
    }
}

fn queries() -> Verdict {
    let bad = golden::check_queries();
    if bad.is_empty() {
        Ok(format!("{} queries list their lemmas in order", golden::QUERIES.len()))
    } else {
        Err(bad.join("; "))
    }
}

fn main() {
    type Criterion = (&'static str, fn() -> Verdict);
    let criteria: [Criterion; 7] = [
        ("transcript fidelity", transcript),
        ("proof corpus", proof_corpus),
        ("scheme generation", schemes),
        ("rejection suite", rejections),
        ("decision-procedure oracles", decision_procedures),
        ("sum identities by induction and ring", sum_identities),
        ("query goldens", queries),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
