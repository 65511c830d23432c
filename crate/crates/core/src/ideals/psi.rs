//! The map `ψ` from the one-sided Boolean algebra to the two-sided one.
//!
//! A one-sided atom `(w, P)` at `(k, l)` with `P = {u}` goes to the
//! two-sided cylinder fixing `u` on `[k - l, k[` and `w` on `[0, k[`; atoms
//! with two or more predecessors go to `∅`. This needs property (*), which
//! makes every such cylinder the image of some singleton atom.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::special::{check_property_star, left_special_scan};
use crate::boolean_algebra::{Algebra, Atom, Resolution, SymbolicSet};
use crate::free_group::{ReducedWord, Symbol, Word};
use crate::report::{Report, ReportBuilder, Verdict};
use crate::shift_space::{ShiftError, Side};

#[derive(Debug)]
pub struct Psi<'a> {
    one: &'a Algebra,
    two: &'a Algebra,
    level: usize,
}

/// Witness search bound for the property (*) precondition.
const WITNESS_BOUND: usize = 32;

impl<'a> Psi<'a> {
    /// Requires the same alphabet and language on both sides and property (*)
    /// for predecessor lengths up to `level`.
    pub fn new(one: &'a Algebra, two: &'a Algebra, level: usize) -> Result<Self, ShiftError> {
        if one.side() != Side::OneSided || two.side() != Side::TwoSided {
            return Err(ShiftError::Invalid("ψ maps a one-sided system to a two-sided one".into()));
        }
        if one.presentation().kind() != two.presentation().kind() || one.presentation().alphabet() != two.presentation().alphabet() {
            return Err(ShiftError::Invalid("ψ needs the same shift on both sides".into()));
        }
        let star = check_property_star(one.presentation(), level, WITNESS_BOUND)?;
        if star.verdict != Verdict::Pass {
            return Err(ShiftError::Invalid(format!("property (*) does not hold up to length {level}: {:?}", star.counterexamples)));
        }
        Ok(Psi { one, two, level })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Two-sided resolution receiving sets at `r`.
    pub fn image_resolution(r: Resolution) -> Resolution {
        Resolution::new(r.k, r.l.saturating_sub(r.k))
    }

    /// Image cylinder of one atom, or `None` for the kernel.
    pub fn atom_image(&self, t: &Atom, r: Resolution) -> Option<Atom> {
        if t.preds.len() != 1 {
            return None;
        }
        let u = t.preds.iter().next().expect("one predecessor");
        if r.l <= r.k {
            (t.prefix[r.k - r.l..] == u[..]).then(|| Atom::cylinder(Vec::new(), t.prefix.clone()))
        } else {
            (u[r.l - r.k..] == t.prefix[..]).then(|| Atom::cylinder(u[..r.l - r.k].to_vec(), t.prefix.clone()))
        }
    }

    pub fn apply(&self, a: &SymbolicSet) -> Result<SymbolicSet, ShiftError> {
        if a.side() != Side::OneSided {
            return Err(ShiftError::Invalid("ψ takes one-sided sets".into()));
        }
        let r = a.resolution();
        let target = Self::image_resolution(r);
        let realizable = self.two.atoms(target)?;
        let mut out = BTreeSet::new();
        for t in a.atoms() {
            if let Some(c) = self.atom_image(t, r) {
                if !realizable.contains(&c) {
                    return Err(ShiftError::Invalid(format!("ψ image of {:?} is not a cylinder of the shift", t)));
                }
                out.insert(c);
            }
        }
        Ok(SymbolicSet::new(Side::TwoSided, target, out))
    }
}

/// `κ(1_{𝒞(μ,ν)})` by the three-case formula.
pub fn kappa_on_cylinder(two: &Algebra, mu: &[Symbol], nu: &[Symbol]) -> Result<SymbolicSet, ShiftError> {
    let (left, right): (Word, Word) = if nu.ends_with(mu) {
        (Vec::new(), nu.to_vec())
    } else if mu.ends_with(nu) {
        (mu[..mu.len() - nu.len()].to_vec(), nu.to_vec())
    } else {
        return Ok(two.empty(Resolution::new(nu.len(), 0)));
    };
    let r = Resolution::new(right.len(), left.len());
    let atoms = two.atoms(r)?.iter().filter(|t| t.prefix == right && t.left() == left.as_slice()).cloned().collect();
    Ok(SymbolicSet::new(Side::TwoSided, r, atoms))
}

fn random_set(alg: &Algebra, r: Resolution, rng: &mut ChaCha8Rng) -> Result<SymbolicSet, ShiftError> {
    alg.subset_of_atoms(r, |_| rng.gen_bool(0.5))
}

fn random_word(alg: &Algebra, max_len: usize, rng: &mut ChaCha8Rng) -> Result<Word, ShiftError> {
    let n = rng.gen_range(0..=max_len);
    let words = alg.presentation().factors(n)?;
    Ok(words.iter().nth(rng.gen_range(0..words.len())).cloned().expect("nonempty level"))
}

/// Homomorphism and equivariance of `ψ` on all atoms up to `max_res` and on
/// random pairs, the kernel rule, `κ` against `ψ` on random cylinders, and
/// the kernel atoms against the left special scan.
pub fn check_psi(psi: &Psi<'_>, max_res: Resolution, pairs: usize, kappa_samples: usize, seed: u64, floor: f64) -> Result<Report, ShiftError> {
    let (one, two) = (psi.one, psi.two);
    let names = one.presentation().alphabet().names().to_vec();
    let mut b = ReportBuilder::new("psi");
    b.param("max_resolution", json!([max_res.k, max_res.l]))
        .param("pairs", pairs)
        .param("kappa_samples", kappa_samples)
        .param("seed", seed)
        .param("level", psi.level);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let resolutions: Vec<Resolution> =
        (0..=max_res.k).flat_map(|k| (0..=max_res.l).map(move |l| Resolution::new(k, l))).collect();
    let letters: Vec<ReducedWord> = (0..one.presentation().rank() as Symbol)
        .flat_map(|a| [ReducedWord::generator(a), ReducedWord::generator(a).inverse()])
        .collect();
    let ledger = left_special_scan(one.presentation(), max_res.k + max_res.l + 8)?;
    let special: BTreeSet<Word> = ledger.candidates.iter().map(|c| c.word.clone()).collect();
    let mut kernel_atoms = 0usize;

    for &r in &resolutions {
        let full = one.full(r)?;
        let image_full = psi.apply(&full)?;
        b.check("full-to-full", two.set_eq(&image_full, &two.full(Psi::image_resolution(r))?)?, || format!("r={r}"));
        let mut images: Vec<(Atom, SymbolicSet)> = Vec::new();
        for t in one.atoms(r)?.iter() {
            let ctx = || format!("r={r} atom={}", t.render(&names, Side::OneSided));
            let single = SymbolicSet::new(Side::OneSided, r, [t.clone()].into_iter().collect());
            let image = psi.apply(&single)?;
            b.check("kernel-rule", image.is_empty() == (t.preds.len() != 1), ctx);
            let not = psi.apply(&one.complement(&single)?)?;
            b.check("complement", two.set_eq(&not, &two.complement(&image)?)?, ctx);
            for g in &letters {
                let lhs = psi.apply(&one.act(g, &single)?)?;
                let rhs = two.act(g, &image)?;
                b.check("equivariance", two.set_eq(&lhs, &rhs)?, || format!("{} g={}", ctx(), g.render(&names)));
            }
            if t.preds.len() >= 2 {
                kernel_atoms += 1;
                // Some suffix of a predecessor, followed by the tail, begins a
                // left special sequence.
                let pres = one.presentation();
                let window = pres.memory().unwrap_or_else(|| pres.pred_window());
                let mut members = Vec::new();
                for v in pres.factors(r.k + window)?.iter().filter(|v| v.starts_with(&t.prefix)) {
                    if pres.predecessors_of_word(r.l, &v[r.k..])?.words == t.preds {
                        members.push(v[r.k..(r.k + 8).min(v.len())].to_vec());
                    }
                }
                let ok = members.iter().all(|tail| {
                    t.preds.iter().any(|mu| (0..mu.len()).any(|i| {
                        let mut w = mu[i + 1..].to_vec();
                        w.extend_from_slice(tail);
                        special.iter().any(|s| s.starts_with(&w) || w.starts_with(s))
                    }))
                });
                b.check("kernel-near-left-special", ok, ctx);
            }
            for (u, other) in &images {
                if t.preds.len() == 1 && u.preds.len() == 1 {
                    let meet = two.meet(&image, other)?;
                    b.check("disjoint-images", meet.is_empty(), || format!("{} and {}", ctx(), u.render(&names, Side::OneSided)));
                }
            }
            images.push((t.clone(), image));
        }
    }
    b.metric("kernel_atoms", kernel_atoms);

    for n in 0..pairs {
        let (r1, r2) = (resolutions[rng.gen_range(0..resolutions.len())], resolutions[rng.gen_range(0..resolutions.len())]);
        let (x, y) = (random_set(one, r1, &mut rng)?, random_set(one, r2, &mut rng)?);
        let (px, py) = (psi.apply(&x)?, psi.apply(&y)?);
        let meet = psi.apply(&one.meet(&x, &y)?)?;
        b.check("meet", two.set_eq(&meet, &two.meet(&px, &py)?)?, || format!("pair {n} at {r1}, {r2}"));
        let join = psi.apply(&one.join(&x, &y)?)?;
        b.check("join", two.set_eq(&join, &two.join(&px, &py)?)?, || format!("pair {n} at {r1}, {r2}"));
        let not = psi.apply(&one.complement(&x)?)?;
        b.check("complement", two.set_eq(&not, &two.complement(&px)?)?, || format!("pair {n} at {r1}"));
        // refining first does not change the image
        let finer = r1.join(r2, Side::OneSided);
        let refined = psi.apply(&one.refine(&x, finer)?)?;
        b.check("refinement", two.set_eq(&refined, &px)?, || format!("pair {n} {r1} -> {finer}"));
    }

    let max_word = max_res.k.max(max_res.l);
    for n in 0..kappa_samples {
        let mu = random_word(one, max_word, &mut rng)?;
        let nu = random_word(one, max_word, &mut rng)?;
        let kappa = kappa_on_cylinder(two, &mu, &nu)?;
        let via_psi = psi.apply(&one.cylinder(&mu, &nu, Resolution::new(0, 0))?)?;
        let render = |w: &[Symbol]| if w.is_empty() { "ε".to_string() } else { one.presentation().alphabet().render(w) };
        b.check("kappa", two.set_eq(&kappa, &via_psi)?, || format!("sample {n}: μ={} ν={}", render(&mu), render(&nu)));
    }
    Ok(b.finish(floor))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift_space::ShiftPresentation;

    const A: Symbol = 0;
    const B: Symbol = 1;

    fn fib() -> (Algebra, Algebra) {
        (
            Algebra::from_presentation(ShiftPresentation::fibonacci(Side::OneSided)).unwrap(),
            Algebra::from_presentation(ShiftPresentation::fibonacci(Side::TwoSided)).unwrap(),
        )
    }

    #[test]
    fn atom_images_at_one_one() {
        let (one, two) = fib();
        let psi = Psi::new(&one, &two, 3).unwrap();
        let r = Resolution::new(1, 1);
        let mut union = two.empty(Psi::image_resolution(r));
        for t in one.atoms(r).unwrap().iter() {
            let image = psi.apply(&SymbolicSet::new(Side::OneSided, r, [t.clone()].into_iter().collect())).unwrap();
            if t.preds.len() >= 2 {
                assert!(image.is_empty());
            } else {
                assert_eq!(image.len(), 1);
                assert!(two.meet(&union, &image).unwrap().is_empty());
            }
            union = two.join(&union, &image).unwrap();
        }
        assert!(two.set_eq(&union, &two.full(Resolution::new(0, 0)).unwrap()).unwrap());
    }

    #[test]
    fn kappa_cases() {
        let (_, two) = fib();
        // μ = ε: the cylinder on ν
        let k = kappa_on_cylinder(&two, &[], &[A, B]).unwrap();
        assert_eq!(k.resolution(), Resolution::new(2, 0));
        assert_eq!(k.len(), 1);
        // ν = ε: the cylinder on z_{[-|μ|,0[}
        let k = kappa_on_cylinder(&two, &[B, A], &[]).unwrap();
        assert_eq!(k.atoms().iter().next().unwrap().left(), &[B, A]);
        // incomparable
        assert!(kappa_on_cylinder(&two, &[A], &[B]).unwrap().is_empty());
    }

    #[test]
    fn needs_property_star() {
        let one = Algebra::from_presentation(ShiftPresentation::golden_mean(Side::OneSided)).unwrap();
        let two = Algebra::from_presentation(ShiftPresentation::golden_mean(Side::TwoSided)).unwrap();
        assert!(Psi::new(&one, &two, 1).is_err());
    }

    #[test]
    fn fibonacci_suite_small() {
        let (one, two) = fib();
        let psi = Psi::new(&one, &two, 3).unwrap();
        let r = check_psi(&psi, Resolution::new(2, 2), 20, 20, 5, 1.0).unwrap();
        assert!(r.passed(), "{:?}", r.counterexamples);
    }
}
