//! Relation suites for the generators `S_g` on a truncated basis.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Op, Representation};
use crate::boolean_algebra::{BoolExpr, Resolution, SymbolicSet};
use crate::free_group::{FreeGroup, ReducedWord};
use crate::report::{Report, ReportBuilder};
use crate::shift_space::ShiftError;

fn ball(rep: &Representation<'_>, radius: usize) -> Vec<ReducedWord> {
    FreeGroup::new(rep.algebra().presentation().rank()).ball(radius)
}

fn names(rep: &Representation<'_>) -> Vec<char> {
    rep.algebra().presentation().alphabet().names().to_vec()
}

fn params(b: &mut ReportBuilder, rep: &Representation<'_>, radius: usize) {
    let (q, p, d) = rep.basis().params();
    b.param("radius", radius)
        .param("basis_q", q)
        .param("basis_p", p)
        .param("closure_depth", d)
        .metric("basis_size", rep.basis().len())
        .metric("core_size", rep.basis().core().len());
}

/// Partial isometries with commuting range projections, `s_e = 1`,
/// `s_{g⁻¹} = s_g*`, `s_h s_i = s_h s_h* s_{hi}`, and `D_g ↦ s_g s_g*`
/// respecting meets and complements of domains.
pub fn verify_definition_relations(rep: &Representation<'_>, radius: usize, floor: f64) -> Result<Report, ShiftError> {
    let mut b = ReportBuilder::new("definition");
    params(&mut b, rep, radius);
    let alg = rep.algebra();
    let names = names(rep);
    let group = ball(rep, radius);
    let e = ReducedWord::identity();
    rep.check_identity(&mut b, "unit", &rep.s(&e)?, &Op::Identity, || "s_e".into());
    for g in &group {
        let s = rep.operator_of(g)?;
        let gs = g.render(&names);
        b.check("injective", s.is_injective(), || format!("S[{gs}] not injective"));
        let sss = Op::compose(vec![Op::S(s.clone()), Op::Adjoint(s.clone()), Op::S(s.clone())]);
        rep.check_identity(&mut b, "partial-isometry", &sss, &Op::S(s.clone()), || format!("g={gs}"));
        rep.check_identity(&mut b, "adjoint", &rep.s(&g.inverse())?, &Op::Adjoint(s.clone()), || format!("g={gs}"));
        let range = Op::range_projection(&s);
        let domain = rep.projection(&alg.domain_set(g, Resolution::new(0, 0))?)?;
        rep.check_identity(&mut b, "range-is-domain", &range, &domain, || format!("g={gs}"));
        let complement = rep.projection(&alg.complement(&alg.domain_set(g, Resolution::new(0, 0))?)?)?;
        rep.check_identity(&mut b, "range-complement", &range.clone().one_minus(), &complement, || format!("g={gs}"));
    }
    for h in &group {
        let sh = rep.operator_of(h)?;
        for i in &group {
            let si = rep.operator_of(i)?;
            let hi = h.multiply(i);
            let ctx = || format!("h={} i={}", h.render(&names), i.render(&names));
            let lhs = Op::compose(vec![Op::S(sh.clone()), Op::S(si.clone())]);
            let rhs = Op::compose(vec![Op::S(sh.clone()), Op::Adjoint(sh.clone()), rep.s(&hi)?]);
            rep.check_identity(&mut b, "product", &lhs, &rhs, ctx);
            let (ph, pi) = (Op::range_projection(&sh), Op::range_projection(&si));
            let hp = Op::compose(vec![ph.clone(), pi.clone()]);
            rep.check_identity(&mut b, "commuting-ranges", &hp, &Op::compose(vec![pi, ph]), ctx);
            let meet = alg.meet(&alg.domain_set(h, Resolution::new(0, 0))?, &alg.domain_set(i, Resolution::new(0, 0))?)?;
            rep.check_identity(&mut b, "range-meet", &hp, &rep.projection(&meet)?, ctx);
        }
    }
    Ok(b.finish(floor))
}

const SETS: [&str; 3] = ["set1", "set2", "set3"];

/// The three equivalent axiom sets for partial representations.
///
/// set1: `u(e) = 1`, `u(g⁻¹) = u(g)*`, `u(h)u(i)u(i⁻¹) = u(hi)u(i⁻¹)`.
/// set2: commuting range projections, `u(e)u(e)* = 1`,
/// `u(g)*u(g) = u(g⁻¹)u(g⁻¹)*`, `u(h)u(i)u(i)*u(h)* = u(h)u(i)u(hi)*`.
/// set3: commuting range projections, `u(e) = 1`, `u(g)* = u(g⁻¹)`,
/// `u(h)u(i) = u(h)u(h)*u(hi)`.
pub fn verify_appendix_axiom_sets(rep: &Representation<'_>, radius: usize, floor: f64) -> Result<Report, ShiftError> {
    let mut b = ReportBuilder::new("appendix");
    params(&mut b, rep, radius);
    let names = names(rep);
    let group = ball(rep, radius);
    let e = ReducedWord::identity();
    let u = |g: &ReducedWord| rep.s(g);
    let ustar = |g: &ReducedWord| rep.s_adj(g);
    rep.check_identity(&mut b, "set1.unit", &u(&e)?, &Op::Identity, || "u(e)".into());
    rep.check_identity(&mut b, "set3.unit", &u(&e)?, &Op::Identity, || "u(e)".into());
    rep.check_identity(&mut b, "set2.unit-range", &Op::compose(vec![u(&e)?, ustar(&e)?]), &Op::Identity, || "u(e)u(e)*".into());
    for g in &group {
        let gi = g.inverse();
        let ctx = || format!("g={}", g.render(&names));
        rep.check_identity(&mut b, "set1.adjoint", &u(&gi)?, &ustar(g)?, ctx);
        rep.check_identity(&mut b, "set3.adjoint", &ustar(g)?, &u(&gi)?, ctx);
        let s = rep.operator_of(g)?;
        let sss = Op::compose(vec![Op::S(s.clone()), Op::Adjoint(s.clone()), Op::S(s.clone())]);
        for set in ["set2", "set3"] {
            rep.check_identity(&mut b, &format!("{set}.partial-isometry"), &sss, &Op::S(s.clone()), ctx);
        }
        let src = Op::compose(vec![ustar(g)?, u(g)?]);
        let rng = Op::compose(vec![u(&gi)?, ustar(&gi)?]);
        rep.check_identity(&mut b, "set2.source-range", &src, &rng, ctx);
    }
    for h in &group {
        for i in &group {
            let hi = h.multiply(i);
            let ii = i.inverse();
            let ctx = || format!("h={} i={}", h.render(&names), i.render(&names));
            let l1 = Op::compose(vec![u(h)?, u(i)?, u(&ii)?]);
            let r1 = Op::compose(vec![u(&hi)?, u(&ii)?]);
            rep.check_identity(&mut b, "set1.cancel", &l1, &r1, ctx);
            let l2 = Op::compose(vec![u(h)?, u(i)?, ustar(i)?, ustar(h)?]);
            let r2 = Op::compose(vec![u(h)?, u(i)?, ustar(&hi)?]);
            rep.check_identity(&mut b, "set2.conjugate", &l2, &r2, ctx);
            let l3 = Op::compose(vec![u(h)?, u(i)?]);
            let r3 = Op::compose(vec![u(h)?, ustar(h)?, u(&hi)?]);
            rep.check_identity(&mut b, "set3.product", &l3, &r3, ctx);
            let (ph, pi) = (Op::compose(vec![u(h)?, ustar(h)?]), Op::compose(vec![u(i)?, ustar(i)?]));
            let a = Op::compose(vec![ph.clone(), pi.clone()]);
            let c = Op::compose(vec![pi, ph]);
            for set in ["set2", "set3"] {
                rep.check_identity(&mut b, &format!("{set}.commuting-ranges"), &a, &c, ctx);
            }
        }
    }
    let failed: Vec<bool> = SETS
        .iter()
        .map(|s| b.failed_with_prefix(&format!("{s}.")))
        .collect();
    for (s, f) in SETS.iter().zip(&failed) {
        b.metric(&format!("{s}.verdict"), if *f { "fail" } else { "pass" });
    }
    b.check("sets-agree", failed.iter().all(|&f| f == failed[0]), || format!("axiom set verdicts differ: {failed:?}"));
    Ok(b.finish(floor))
}

/// Conjugation `Λ(θ_g(A)) = s_g Λ(A) s_g*`, its symbolic counterpart via
/// the meet/complement rewriting of `θ_g`, and the vanishing statements:
/// `D_g = ∅ ⇒ s_g = 0`, `D_h ∩ D_i = ∅ ⇒ s_h* s_i = 0`.
pub fn verify_lemmas(rep: &Representation<'_>, radius: usize, samples: usize, seed: u64, floor: f64) -> Result<Report, ShiftError> {
    let mut b = ReportBuilder::new("lemmas");
    params(&mut b, rep, radius);
    b.param("samples", samples).param("seed", seed);
    let alg = rep.algebra();
    let names = names(rep);
    let group = ball(rep, radius);
    let base = Resolution::new(0, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut exprs: Vec<BoolExpr> = group.iter().map(|g| BoolExpr::domain(g.clone())).collect();
    for _ in 0..samples {
        let pick = |rng: &mut ChaCha8Rng| BoolExpr::domain(group[rng.gen_range(0..group.len())].clone());
        let x = pick(&mut rng);
        let y = pick(&mut rng);
        exprs.push(match rng.gen_range(0..3) {
            0 => x.and(y.negate()),
            1 => x.or(y),
            _ => x.negate().and(y),
        });
    }
    let sets: Vec<SymbolicSet> = exprs.iter().map(|e| alg.eval(e, base)).collect::<Result<_, _>>()?;
    for g in &group {
        let gs = g.render(&names);
        let s = rep.operator_of(g)?;
        for (e, a) in exprs.iter().zip(&sets) {
            let image = alg.act(g, a)?;
            let rewritten = alg.eval(&e.theta(g), base)?;
            b.check("theta-rewrite", alg.set_eq(&image, &rewritten)?, || format!("g={gs}"));
            let lhs = rep.projection(&image)?;
            let rhs = Op::compose(vec![Op::S(s.clone()), rep.projection(a)?, Op::Adjoint(s.clone())]);
            rep.check_identity(&mut b, "theta-conjugation", &lhs, &rhs, || format!("g={gs}"));
        }
    }
    for g in FreeGroup::new(alg.presentation().rank()).ball(radius + 1) {
        if alg.domain_set(&g, base)?.is_empty() {
            let s = rep.operator_of(&g)?;
            b.check("empty-domain", s.is_zero(), || format!("S[{}] nonzero on empty domain", g.render(&names)));
        }
    }
    for h in &group {
        for i in &group {
            let meet = alg.meet(&alg.domain_set(h, base)?, &alg.domain_set(i, base)?)?;
            if meet.is_empty() {
                let op = Op::compose(vec![rep.s_adj(h)?, rep.s(i)?]);
                rep.check_identity(&mut b, "disjoint-domains", &op, &Op::Zero, || {
                    format!("h={} i={}", h.render(&names), i.render(&names))
                });
            }
        }
    }
    Ok(b.finish(floor))
}
