//! The finite Stone dual at one resolution.
//!
//! Dual points are the atoms, viewed as `{0,1}`-valued homomorphisms; each is
//! described by its values on a generating family of cylinders.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Algebra, Atom, Resolution, SymbolicSet};
use crate::free_group::{ReducedWord, Word};
use crate::report::{Report, ReportBuilder};
use crate::shift_space::{ShiftError, Side};

#[derive(Debug, Clone)]
pub struct StoneDual {
    resolution: Resolution,
    side: Side,
    generator_names: Vec<String>,
    generators: Vec<SymbolicSet>,
    points: Vec<Atom>,
    signatures: Vec<Vec<bool>>,
}

/// Expressions over the generating family, evaluated either by the atom
/// engine or pointwise through a dual point's generator values.
#[derive(Debug, Clone)]
enum GenExpr {
    Leaf(usize),
    Full,
    And(Box<GenExpr>, Box<GenExpr>),
    Or(Box<GenExpr>, Box<GenExpr>),
    Not(Box<GenExpr>),
}

impl StoneDual {
    /// One-sided generators: `𝒞(μ, ν)` with `(|ν|, |μ|) ⪯ r`.
    /// Two-sided generators: `D_μ` with `|μ| ≤ k` and `D_{μ⁻¹}` with `|μ| ≤ l`.
    pub fn build(alg: &Algebra, r: Resolution) -> Result<Self, ShiftError> {
        let pres = alg.presentation();
        let names = pres.alphabet().names().to_vec();
        let render = |w: &Word| pres.alphabet().render(w);
        let mut generator_names = Vec::new();
        let mut generators = Vec::new();
        match alg.side() {
            Side::OneSided => {
                for kk in 0..=r.k {
                    let max_l = r.l as i64 - r.k as i64 + kk as i64;
                    for ll in 0..=max_l.max(-1) {
                        let ll = ll as usize;
                        for nu in pres.factors(kk)?.iter() {
                            for mu in pres.factors(ll)?.iter() {
                                generator_names.push(format!("C({},{})", render(mu), render(nu)));
                                generators.push(alg.refine(&alg.cylinder(mu, nu, Resolution::new(0, 0))?, r)?);
                            }
                        }
                    }
                }
            }
            Side::TwoSided => {
                for n in 0..=r.k.max(r.l) {
                    for w in pres.factors(n)?.iter() {
                        let mut gs = Vec::new();
                        if n <= r.k {
                            gs.push(ReducedWord::positive(w));
                        }
                        if n <= r.l && n > 0 {
                            gs.push(ReducedWord::positive_inverse(w));
                        }
                        for g in gs {
                            generator_names.push(format!("D[{}]", g.render(&names)));
                            generators.push(alg.refine(&alg.domain_set(&g, Resolution::new(0, 0))?, r)?);
                        }
                    }
                }
            }
        }
        let points: Vec<Atom> = alg.atoms(r)?.iter().cloned().collect();
        let signatures = points.iter().map(|p| generators.iter().map(|g| g.atoms().contains(p)).collect()).collect();
        Ok(StoneDual { resolution: r, side: alg.side(), generator_names, generators, points, signatures })
    }

    pub fn points(&self) -> &[Atom] {
        &self.points
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn signature(&self, i: usize) -> &[bool] {
        &self.signatures[i]
    }

    /// Distinct dual points differ on some generator.
    pub fn check_separation(&self) -> Report {
        let mut b = ReportBuilder::new("stone-separation");
        b.param("resolution", format!("{}", self.resolution))
            .metric("points", self.points.len())
            .metric("generators", self.generators.len());
        for i in 0..self.points.len() {
            for j in i + 1..self.points.len() {
                b.check("separation", self.signatures[i] != self.signatures[j], || format!("points {i} and {j} agree on every generator"));
            }
        }
        b.finish(1.0)
    }

    fn eval_engine(&self, alg: &Algebra, e: &GenExpr) -> Result<SymbolicSet, ShiftError> {
        Ok(match e {
            GenExpr::Leaf(i) => self.generators[*i].clone(),
            GenExpr::Full => alg.full(self.resolution)?,
            GenExpr::And(a, b) => alg.meet(&self.eval_engine(alg, a)?, &self.eval_engine(alg, b)?)?,
            GenExpr::Or(a, b) => alg.join(&self.eval_engine(alg, a)?, &self.eval_engine(alg, b)?)?,
            GenExpr::Not(a) => alg.complement(&self.eval_engine(alg, a)?)?,
        })
    }

    fn eval_point(&self, point: usize, e: &GenExpr) -> bool {
        match e {
            GenExpr::Leaf(i) => self.signatures[point][*i],
            GenExpr::Full => true,
            GenExpr::And(a, b) => self.eval_point(point, a) && self.eval_point(point, b),
            GenExpr::Or(a, b) => self.eval_point(point, a) || self.eval_point(point, b),
            GenExpr::Not(a) => !self.eval_point(point, a),
        }
    }

    /// `Â`: the dual points at which `e` evaluates to 1.
    fn hat(&self, e: &GenExpr) -> BTreeSet<usize> {
        (0..self.points.len()).filter(|&p| self.eval_point(p, e)).collect()
    }

    /// Normal form of a set of dual points as a join of generator minterms.
    fn minterms(&self, subset: &BTreeSet<usize>) -> GenExpr {
        let mut out: Option<GenExpr> = None;
        for &p in subset {
            let mut term = GenExpr::Full;
            for (g, &v) in self.signatures[p].iter().enumerate() {
                let lit = if v { GenExpr::Leaf(g) } else { GenExpr::Not(Box::new(GenExpr::Leaf(g))) };
                term = GenExpr::And(Box::new(term), Box::new(lit));
            }
            out = Some(match out {
                None => term,
                Some(acc) => GenExpr::Or(Box::new(acc), Box::new(term)),
            });
        }
        out.unwrap_or_else(|| GenExpr::Not(Box::new(GenExpr::Full)))
    }

    fn random_expr(&self, rng: &mut ChaCha8Rng, depth: usize) -> GenExpr {
        if depth == 0 || self.generators.is_empty() {
            return if self.generators.is_empty() { GenExpr::Full } else { GenExpr::Leaf(rng.gen_range(0..self.generators.len())) };
        }
        match rng.gen_range(0..4) {
            0 => GenExpr::Leaf(rng.gen_range(0..self.generators.len())),
            1 => GenExpr::And(Box::new(self.random_expr(rng, depth - 1)), Box::new(self.random_expr(rng, depth - 1))),
            2 => GenExpr::Or(Box::new(self.random_expr(rng, depth - 1)), Box::new(self.random_expr(rng, depth - 1))),
            _ => GenExpr::Not(Box::new(self.random_expr(rng, depth - 1))),
        }
    }

    /// `A ↦ Â` is a Boolean isomorphism onto the subsets of the dual.
    ///
    /// Every subset of the dual is hit by its minterm expression, whose
    /// engine value has exactly those atoms (surjective, and the generators
    /// generate); distinct elements have distinct images (injective); on
    /// random expressions the engine value and the pointwise evaluation agree
    /// (each dual point is a homomorphism).
    pub fn check_iso(&self, alg: &Algebra, random: usize, seed: u64) -> Result<Report, ShiftError> {
        let mut b = ReportBuilder::new("stone-iso");
        b.param("resolution", format!("{}", self.resolution)).param("random", random).param("seed", seed);
        let n = self.points.len();
        let index_of = |s: &SymbolicSet| -> BTreeSet<usize> {
            (0..n).filter(|&i| s.atoms().contains(&self.points[i])).collect()
        };
        if n <= 12 {
            let mut images = BTreeSet::new();
            for mask in 0u32..(1 << n) {
                let subset: BTreeSet<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
                let e = self.minterms(&subset);
                let value = self.eval_engine(alg, &e)?;
                b.check("generation", index_of(&value) == subset, || format!("subset {mask:b} not generated"));
                let hat = self.hat(&e);
                b.check("surjective", hat == subset, || format!("subset {mask:b} not hit"));
                images.insert(hat);
            }
            b.check("injective", images.len() == 1 << n, || format!("{} images for {} elements", images.len(), 1u64 << n));
        } else {
            b.inconclusive(format!("{n} dual points: exhaustive bijectivity skipped"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for t in 0..random {
            let x = self.random_expr(&mut rng, 3);
            let y = self.random_expr(&mut rng, 3);
            let (vx, vy) = (self.eval_engine(alg, &x)?, self.eval_engine(alg, &y)?);
            b.check("evaluation", index_of(&vx) == self.hat(&x), || format!("random element {t}"));
            let meet = alg.meet(&vx, &vy)?;
            let hx = self.hat(&x);
            let hy = self.hat(&y);
            b.check("meet", index_of(&meet) == hx.intersection(&hy).copied().collect(), || format!("pair {t}"));
            let join = alg.join(&vx, &vy)?;
            b.check("join", index_of(&join) == hx.union(&hy).copied().collect(), || format!("pair {t}"));
            let comp = alg.complement(&vx)?;
            b.check("complement", index_of(&comp) == (0..n).filter(|i| !hx.contains(i)).collect(), || format!("element {t}"));
        }
        Ok(b.finish(1.0))
    }

    /// Bipartite DOT graph: dual points linked to the generators containing them.
    pub fn to_dot(&self, names: &[char]) -> String {
        let mut s = String::from("graph stone {\n  rankdir=LR;\n");
        for (i, p) in self.points.iter().enumerate() {
            s.push_str(&format!("  p{i} [shape=box,label=\"{}\"];\n", p.render(names, self.side)));
        }
        for (g, name) in self.generator_names.iter().enumerate() {
            s.push_str(&format!("  g{g} [shape=ellipse,label=\"{name}\"];\n"));
        }
        for (i, sig) in self.signatures.iter().enumerate() {
            for (g, &v) in sig.iter().enumerate() {
                if v {
                    s.push_str(&format!("  p{i} -- g{g};\n"));
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Verdict;
    use crate::shift_space::{Alphabet, PresentationKind, ShiftPresentation};

    #[test]
    fn golden_mean_dual_at_1_1() {
        let alg = Algebra::from_presentation(ShiftPresentation::golden_mean(Side::OneSided)).unwrap();
        let dual = StoneDual::build(&alg, Resolution::new(1, 1)).unwrap();
        assert_eq!(dual.points().len(), 3);
        assert_eq!(dual.check_separation().verdict, Verdict::Pass);
        assert_eq!(dual.check_iso(&alg, 30, 1).unwrap().verdict, Verdict::Pass);
        // D_a, D_b and 𝒞(b, a) = θ_a(D_{b⁻¹}) already separate the three points
        let idx = |n: &str| dual.generator_names().iter().position(|g| g == n).unwrap();
        let chosen = [idx("C(ε,a)"), idx("C(ε,b)"), idx("C(b,a)")];
        let sigs: BTreeSet<Vec<bool>> = (0..3).map(|p| chosen.iter().map(|&g| dual.signature(p)[g]).collect()).collect();
        assert_eq!(sigs.len(), 3);
    }

    #[test]
    fn one_atom_algebra_has_one_dual_point() {
        let p = ShiftPresentation::new(Alphabet::ab(), PresentationKind::FinitePointSet(vec![vec![0]]), Side::OneSided).unwrap();
        let alg = Algebra::from_presentation(p).unwrap();
        let dual = StoneDual::build(&alg, Resolution::new(2, 2)).unwrap();
        assert_eq!(dual.points().len(), 1);
        assert_eq!(dual.check_iso(&alg, 5, 0).unwrap().verdict, Verdict::Pass);
    }

    #[test]
    fn two_sided_dual() {
        let alg = Algebra::from_presentation(ShiftPresentation::golden_mean(Side::TwoSided)).unwrap();
        let dual = StoneDual::build(&alg, Resolution::new(1, 1)).unwrap();
        assert_eq!(dual.check_separation().verdict, Verdict::Pass);
        assert_eq!(dual.check_iso(&alg, 10, 0).unwrap().verdict, Verdict::Pass);
    }
}
