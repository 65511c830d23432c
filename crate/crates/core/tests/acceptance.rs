//! Acceptance suite: one line per criterion, exact checks throughout.
//!
//! Run with `cargo test -p symdyn-core --test acceptance`. Exits non-zero if
//! any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use symdyn_core::boolean_algebra::{modsat_boolean, modsat_matrix, StoneDual};
use symdyn_core::ideals::{
    check_ideal_lattice, check_matrix_units, check_property_star, check_property_starstar, check_psi, matrix_units, tail_class_sample, Psi,
    HULL_STEPS,
};
use symdyn_core::partial_action::{check_disjointness, check_partial_action_axioms};
use symdyn_core::representation::{
    verify_appendix_axiom_sets, verify_ck_relations, verify_crossed_product, verify_definition_relations, FiniteBasis, Representation,
};
use symdyn_core::{Algebra, Alphabet, FreeGroup, ReducedWord, Report, Resolution, ShiftPresentation, Side, Verdict};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const SEED: u64 = 0;
const FLOOR: f64 = 0.9;

fn golden() -> Algebra {
    Algebra::from_presentation(ShiftPresentation::golden_mean(Side::OneSided)).unwrap()
}

fn upper_triangular() -> Algebra {
    Algebra::from_presentation(ShiftPresentation::upper_triangular(Side::OneSided)).unwrap()
}

fn full(side: Side) -> Algebra {
    Algebra::from_presentation(ShiftPresentation::full_shift(Alphabet::ab(), side)).unwrap()
}

fn fibonacci(side: Side) -> Algebra {
    Algebra::from_presentation(ShiftPresentation::fibonacci(side)).unwrap()
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn checked(r: &Report, identity: &str) -> u64 {
    r.metrics.get(&format!("checked.{identity}")).and_then(|v| v.as_u64()).unwrap_or(0)
}

/// A passing report with no counterexamples, in which every listed
/// identity was checked at least `min` times.
fn require(r: &Report, identities: &[&str], min: u64) -> Result<(), String> {
    if r.verdict != Verdict::Pass || !r.counterexamples.is_empty() {
        let first = r.counterexamples.first().or(r.notes.first()).cloned().unwrap_or_default();
        return Err(format!("{} is {:?}: {first}", r.suite, r.verdict));
    }
    for id in identities {
        let n = checked(r, id);
        if n < min {
            return Err(format!("{}: identity {id} checked {n} times, need {min}", r.suite));
        }
    }
    Ok(())
}

fn total_checked(r: &Report) -> u64 {
    r.metrics.iter().filter(|(k, _)| k.starts_with("checked.")).filter_map(|(_, v)| v.as_u64()).sum()
}

fn free_group_laws() -> Outcome {
    let ball = FreeGroup::new(2).ball(3);
    let e = ReducedWord::identity();
    let mut failures = Vec::new();
    let mut count = 0u64;
    let mut fail = |what: String| failures.push(what);
    for g in &ball {
        count += 1;
        if g.multiply(&g.inverse()) != e || g.inverse().multiply(g) != e || g.inverse().inverse() != *g {
            fail(format!("inverse of {g}"));
        }
        if g.multiply(&e) != *g || e.multiply(g) != *g {
            fail(format!("unit on {g}"));
        }
        // p q⁻¹ form: positive letters, then only negative letters
        let letters = g.letters();
        let split = letters.iter().position(|l| l.inverse).unwrap_or(letters.len());
        let expect_form = letters[split..].iter().all(|l| l.inverse);
        match g.one_sided_normal_form() {
            Some((p, q)) => {
                if ReducedWord::positive(&p).multiply(&ReducedWord::positive(&q).inverse()) != *g || !expect_form {
                    fail(format!("normal form of {g}"));
                }
            }
            None if expect_form => fail(format!("{g} has no normal form")),
            None => {}
        }
        for h in &ball {
            let gh = g.multiply(h);
            if gh.degree() != g.degree() + h.degree() {
                fail(format!("degree of {g}·{h}"));
            }
            if gh.inverse() != h.inverse().multiply(&g.inverse()) {
                fail(format!("inverse of {g}·{h}"));
            }
            for k in &ball {
                count += 1;
                if gh.multiply(k) != g.multiply(&h.multiply(k)) {
                    fail(format!("associativity at {g}, {h}, {k}"));
                }
            }
        }
    }
    match failures.first() {
        None => Ok(format!("{} elements, {count} instances", ball.len())),
        Some(f) => Err(format!("{} counterexamples; first: {f}", failures.len())),
    }
}

fn partial_action_axioms() -> Outcome {
    let alg = golden();
    let points = alg.presentation().eventually_periodic_points(2, 3).map_err(err)?;
    let ball = FreeGroup::new(2).ball(2);
    let axioms = check_partial_action_axioms(alg.action(), &ball, &points, 1.0).map_err(err)?;
    require(&axioms, &["identity", "range", "inverse", "image", "composition"], 1)?;
    let disjoint = check_disjointness(alg.action(), 3, &points, 1.0).map_err(err)?;
    require(&disjoint, &["disjoint"], 1)?;
    Ok(format!("{} points, {} + {} instances", points.len(), total_checked(&axioms), total_checked(&disjoint)))
}

/// Words of length `n` over {a, b} without `bb`, by brute force.
fn golden_words(n: usize) -> usize {
    (0..1usize << n).filter(|w| (0..n.saturating_sub(1)).all(|i| (w >> i) & 3 != 3)).count()
}

fn atom_counts() -> Outcome {
    let g = golden();
    let mut got = Vec::new();
    for k in 1..=3 {
        got.push(g.atoms(Resolution::new(k, 1)).map_err(err)?.len());
    }
    // an atom at (k, 1) is fixed by a word of length k + 1
    let oracle: Vec<usize> = (1..=3).map(|k| golden_words(k + 1)).collect();
    if got != [3, 5, 8] || got != oracle {
        return Err(format!("golden mean counts {got:?}, oracle {oracle:?}"));
    }
    let f = full(Side::OneSided);
    for k in 0..=6 {
        let n = f.atoms(Resolution::new(k, 0)).map_err(err)?.len();
        if n != 1 << k {
            return Err(format!("full shift at ({k},0) has {n} atoms"));
        }
    }
    Ok("golden (1,1),(2,1),(3,1) = 3,5,8; full shift (k,0) = 2^k for k ≤ 6".into())
}

fn relation_suites() -> Outcome {
    let mut total = 0;
    for (name, alg) in [("golden", golden()), ("full", full(Side::OneSided))] {
        let rep = Representation::new(&alg, FiniteBasis::build(&alg, 2, 3, 4).map_err(err)?);
        let def = verify_definition_relations(&rep, 2, FLOOR).map_err(err)?;
        let app = verify_appendix_axiom_sets(&rep, 2, FLOOR).map_err(err)?;
        for r in [&def, &app] {
            require(r, &[], 0).map_err(|e| format!("{name}: {e}"))?;
            if let Some((id, c)) = r.coverage.iter().find(|(_, &c)| c < FLOOR) {
                return Err(format!("{name}: coverage of {id} is {c}"));
            }
            total += total_checked(r);
        }
    }
    Ok(format!("golden and full shift, radius 2, {total} guarded instances"))
}

fn diagonal_identity() -> Outcome {
    let mut total = 0;
    for (name, alg) in [("golden", golden()), ("upper-triangular", upper_triangular())] {
        let rep = Representation::new(&alg, FiniteBasis::build(&alg, 2, 3, 6).map_err(err)?);
        let r = verify_ck_relations(&rep, true, 3, FLOOR).map_err(err)?;
        require(&r, &["cka-symbolic", "cka-agreement", "cka", "ckpa", "ckpb", "ckpc", "ckpd", "ckpe"], 1).map_err(|e| format!("{name}: {e}"))?;
        if checked(&r, "cka-symbolic") != 16 {
            return Err(format!("{name}: {} symbolic pairs, expected 16", checked(&r, "cka-symbolic")));
        }
        total += total_checked(&r);
    }
    Ok(format!("16 pairs symbolic on both systems, {total} instances"))
}

fn crossed_product() -> Outcome {
    let alg = full(Side::TwoSided);
    let rep = Representation::new(&alg, FiniteBasis::build(&alg, 0, 4, 0).map_err(err)?);
    let r = verify_crossed_product(&rep, 3, 1.0).map_err(err)?;
    require(&r, &["permutation", "unitary", "generator-form", "covariance", "degree"], 1)?;
    Ok(format!("{} periodic points, radius 3, {} instances", rep.basis().len(), total_checked(&r)))
}

fn modsat() -> Outcome {
    let ids: Vec<String> = (1..=5).map(|n| format!("n={n}")).collect();
    let ids: Vec<&str> = ids.iter().map(String::as_str).collect();
    let m = modsat_matrix(5, 200, 8, SEED);
    require(&m, &ids, 200)?;
    let b = modsat_boolean(&golden(), Resolution::new(2, 2), 5, 200, SEED).map_err(err)?;
    require(&b, &ids, 200)?;
    Ok("n = 1..5, 200 instances each, Boolean and 0/1 diagonal".into())
}

fn stone_dual() -> Outcome {
    let alg = golden();
    let dual = StoneDual::build(&alg, Resolution::new(2, 2)).map_err(err)?;
    let sep = dual.check_separation();
    require(&sep, &["separation"], 1)?;
    let iso = dual.check_iso(&alg, 100, SEED).map_err(err)?;
    require(&iso, &[], 0)?;
    Ok(format!("{} dual points, {} generators", dual.points().len(), dual.generator_names().len()))
}

fn ideal_lattice() -> Outcome {
    let r = Resolution::new(3, 3);
    let (ut, lattice) = check_ideal_lattice(&upper_triangular(), r, HULL_STEPS, 1.0).map_err(err)?;
    require(&ut, &["order-preserving", "round-trip", "stable-under-refinement"], 1)?;
    if lattice.len() != 3 {
        return Err(format!("upper-triangular has {} invariant admissible sets", lattice.len()));
    }
    let (fs, lattice) = check_ideal_lattice(&full(Side::OneSided), r, HULL_STEPS, 1.0).map_err(err)?;
    require(&fs, &["order-preserving", "round-trip", "stable-under-refinement"], 1)?;
    if lattice.len() != 2 {
        return Err(format!("full shift has {} invariant admissible sets", lattice.len()));
    }
    Ok("upper-triangular 3 (chain), full shift 2, at (3,3) and (4,4)".into())
}

fn special_properties() -> Outcome {
    let g = golden();
    let star = check_property_star(g.presentation(), 3, 8).map_err(err)?;
    if star.verdict != Verdict::Fail || star.metrics.get("witness").and_then(|w| w.as_str()) != Some("b") {
        return Err(format!("golden (*) is {:?} with witness {:?}", star.verdict, star.metrics.get("witness")));
    }
    let (ss, _) = check_property_starstar(g.presentation(), 3, 12, 8).map_err(err)?;
    if ss.verdict != Verdict::Fail || !ss.counterexamples.iter().any(|c| c.starts_with("finitely-many")) {
        return Err(format!("golden (**) is {:?} without a growth counterexample", ss.verdict));
    }
    let fib = fibonacci(Side::OneSided);
    let star = check_property_star(fib.presentation(), 6, 32).map_err(err)?;
    require(&star, &["singleton-predecessors"], 1)?;
    let (ss, ledger) = check_property_starstar(fib.presentation(), 6, 12, 32).map_err(err)?;
    require(&ss, &["property-star", "finitely-many", "nonperiodic"], 1)?;
    if ledger.n_x != Some(1) {
        return Err(format!("Fibonacci n_X = {:?}", ledger.n_x));
    }
    Ok("golden fails (*) at μ = b and (**); Fibonacci passes both, n_X = 1".into())
}

fn psi_suite() -> Outcome {
    let one = fibonacci(Side::OneSided);
    let two = fibonacci(Side::TwoSided);
    let psi = Psi::new(&one, &two, 3).map_err(err)?;
    let r = check_psi(&psi, Resolution::new(3, 3), 100, 50, SEED, 1.0).map_err(err)?;
    require(&r, &["full-to-full", "kernel-rule", "equivariance", "complement", "meet", "join"], 1)?;
    require(&r, &["kappa"], 50)?;
    Ok(format!("resolutions up to (3,3), {} instances", total_checked(&r)))
}

fn matrix_unit_suite() -> Outcome {
    let alg = fibonacci(Side::OneSided);
    let (_, sample) = tail_class_sample(alg.presentation(), 2).map_err(err)?;
    let system = matrix_units(&alg, sample, 8, 12).map_err(err)?;
    let r = check_matrix_units(&alg, &system, 12, 1.0).map_err(err)?;
    require(&r, &["adjoint", "product", "orthogonal", "diagonal"], 3)?;
    require(&r, &["singleton-witness"], 1)?;
    let k = system.singleton_witness.ok_or("no singleton witness")?;
    Ok(format!("{} points, singleton witness k = {k}", system.points.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("free-group laws", free_group_laws),
        ("partial-action axioms", partial_action_axioms),
        ("atom counts", atom_counts),
        ("relation and axiom-set suites", relation_suites),
        ("diagonal identity and word relations", diagonal_identity),
        ("crossed product", crossed_product),
        ("modsat", modsat),
        ("Stone dual", stone_dual),
        ("ideal lattice", ideal_lattice),
        ("properties (*) and (**)", special_properties),
        ("psi", psi_suite),
        ("matrix units", matrix_unit_suite),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
