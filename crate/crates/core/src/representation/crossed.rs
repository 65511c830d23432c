//! Two-sided shifts as crossed products, and the maps `λ_a`, `φ_a` on
//! projections of a one-sided shift.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Op, Representation};
use crate::boolean_algebra::{Resolution, SymbolicSet};
use crate::free_group::{FreeGroup, ReducedWord, Symbol};
use crate::report::{Report, ReportBuilder};
use crate::shift_space::{ShiftError, Side};
use crate::truth::Tri;

/// `U^n` as a product of `U = Σ_a S_a` or of its adjoint.
fn u_power(u: &Op, u_adj: &Op, n: i64) -> Op {
    match n {
        0 => Op::Identity,
        n if n > 0 => Op::compose(vec![u.clone(); n as usize]),
        n => Op::compose(vec![u_adj.clone(); n.unsigned_abs() as usize]),
    }
}

/// On a two-sided shift, `U = Σ_a S_a` is the unitary of the shift and
/// `S_g = 1_{D_g} U^{[g]}` for every `g` in the ball.
pub fn verify_crossed_product(rep: &Representation<'_>, radius: usize, floor: f64) -> Result<Report, ShiftError> {
    let alg = rep.algebra();
    if alg.side() != Side::TwoSided {
        return Err(ShiftError::Unsupported("crossed product check needs a two-sided shift".into()));
    }
    let names = alg.presentation().alphabet().names().to_vec();
    let basis = rep.basis();
    let mut b = ReportBuilder::new("crossed");
    let (_, p, _) = basis.params();
    b.param("radius", radius).param("basis_p", p).metric("basis_size", basis.len());

    // The basis must be closed under the shift for U to make sense on it.
    for x in basis.points() {
        let closed = basis.index_of(&x.shift()).is_some() && x.shift_inverse().and_then(|y| basis.index_of(&y)).is_some();
        b.check("shift-closed", closed, || format!("{x} leaves the basis"));
    }

    let rank = alg.presentation().rank();
    let gens: Vec<_> = (0..rank).map(|s| rep.operator_of(&ReducedWord::generator(s as Symbol))).collect::<Result<_, _>>()?;
    let u = Op::Sum(gens.iter().map(|s| (1, Op::S(s.clone()))).collect());
    let u_adj = Op::Sum(gens.iter().map(|s| (1, Op::Adjoint(s.clone()))).collect());

    // U permutes the basis: each e_i goes to a single e_j, injectively.
    let mut images = BTreeSet::new();
    for i in 0..basis.len() {
        let v = u.apply(&super::basis_vector(i));
        let target = v.as_ref().filter(|v| v.len() == 1 && v.values().all(|&c| c == 1)).and_then(|v| v.keys().next().copied());
        match target {
            Some(j) => b.check("permutation", images.insert(j), || format!("two points map to {}", basis.point(j))),
            None => b.check("permutation", false, || format!("U e_x is not a basis vector for x = {}", basis.point(i))),
        }
    }
    rep.check_identity(&mut b, "unitary", &Op::compose(vec![u_adj.clone(), u.clone()]), &Op::Identity, || "U*U".into());
    rep.check_identity(&mut b, "unitary", &Op::compose(vec![u.clone(), u_adj.clone()]), &Op::Identity, || "UU*".into());

    let ball = FreeGroup::new(rank).ball(radius);
    let action = alg.action();
    for g in &ball {
        let gs = g.render(&names);
        let domain = rep.projection(&alg.domain_set(g, Resolution::new(0, 0))?)?;
        let rhs = Op::compose(vec![domain.clone(), u_power(&u, &u_adj, g.degree())]);
        rep.check_identity(&mut b, "generator-form", &rep.s(g)?, &rhs, || format!("g={gs}"));

        // U 1_{D_g} U* is the projection onto the preimage of D_g under the shift.
        let preimage = rep.projection_where(|x| Ok(action.in_domain(g, &x.shift())? == Tri::True))?;
        let lhs = Op::compose(vec![u.clone(), domain, u_adj.clone()]);
        rep.check_identity(&mut b, "covariance", &lhs, &preimage, || format!("g={gs}"));
    }
    for h in &ball {
        for i in &ball {
            let (dh, di) = (h.degree(), i.degree());
            let lhs = Op::compose(vec![u_power(&u, &u_adj, dh), u_power(&u, &u_adj, di)]);
            let rhs = u_power(&u, &u_adj, h.multiply(i).degree());
            rep.check_identity(&mut b, "degree", &lhs, &rhs, || format!("h={} i={}", h.render(&names), i.render(&names)));
        }
    }
    Ok(b.finish(floor))
}

/// Sets used as test inputs: all domains in the ball and random unions of
/// atoms at a fixed resolution.
fn sample_sets(rep: &Representation<'_>, radius: usize, samples: usize, seed: u64) -> Result<Vec<(String, SymbolicSet)>, ShiftError> {
    let alg = rep.algebra();
    let names = alg.presentation().alphabet().names().to_vec();
    let r = Resolution::new(2, 2);
    let mut out = Vec::new();
    for g in FreeGroup::new(alg.presentation().rank()).ball(radius) {
        out.push((format!("D[{}]", g.render(&names)), alg.domain_set(&g, r)?));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for n in 0..samples {
        out.push((format!("random#{n}"), alg.subset_of_atoms(r, |_| rng.gen_bool(0.5))?));
    }
    Ok(out)
}

/// For each letter `a` and sample set `A` on a one-sided shift:
/// `λ_a(1_A)(x) = 1_A(ax)` equals `S_a* Λ(A) S_a = Λ(θ_{a⁻¹}(A))`, and
/// `φ_a(1_A)(x) = 1_{D_a}(x) 1_A(σx)` equals `S_a Λ(A) S_a* = Λ(θ_a(A))`.
pub fn verify_lambda_phi(rep: &Representation<'_>, radius: usize, samples: usize, seed: u64, floor: f64) -> Result<Report, ShiftError> {
    let alg = rep.algebra();
    if alg.side() != Side::OneSided {
        return Err(ShiftError::Unsupported("lambda and phi need a one-sided shift".into()));
    }
    let pres = alg.presentation();
    let names = pres.alphabet().names().to_vec();
    let mut b = ReportBuilder::new("lambda-phi");
    b.param("radius", radius).param("samples", samples).param("seed", seed);
    b.metric("basis_size", rep.basis().len()).metric("core_size", rep.basis().core().len());
    let sets = sample_sets(rep, radius, samples, seed)?;
    b.metric("sets", sets.len());

    for a in 0..pres.rank() as Symbol {
        let ga = ReducedWord::generator(a);
        let sa = rep.operator_of(&ga)?;
        let an = names[a as usize];
        for (label, set) in &sets {
            let ctx = || format!("a={an} A={label}");
            let p = rep.projection(set)?;

            let lambda = rep.projection_where(|x| {
                let ax = x.prepend(&[a]);
                Ok(pres.contains(&ax)? == Tri::True && alg.contains(set, &ax)?)
            })?;
            let conj = Op::compose(vec![Op::Adjoint(sa.clone()), p.clone(), Op::S(sa.clone())]);
            let theta = rep.projection(&alg.act(&ga.inverse(), set)?)?;
            rep.check_identity(&mut b, "lambda-operator", &lambda, &conj, ctx);
            rep.check_identity(&mut b, "lambda-set", &lambda, &theta, ctx);

            let phi = rep.projection_where(|x| Ok(x.symbol(0)? == a && alg.contains(set, &x.shift())?))?;
            let conj = Op::compose(vec![Op::S(sa.clone()), p, Op::Adjoint(sa.clone())]);
            let theta = rep.projection(&alg.act(&ga, set)?)?;
            rep.check_identity(&mut b, "phi-operator", &phi, &conj, ctx);
            rep.check_identity(&mut b, "phi-set", &phi, &theta, ctx);
        }
        if sa.is_zero() {
            b.note(format!("D[{an}] is empty on the basis, so both maps vanish"));
        }
    }
    Ok(b.finish(floor))
}
