//! Matrix units on one tail-equivalence class of left special sequences.
//!
//! For `x`, `y` in the class with `x_{[n,∞[} = y_{[m,∞[}`, the unit is
//! `e_{x,y} = Λ({x}) s_g Λ({y})` with `g = x_{[0,n[} y_{[0,m[}⁻¹`. It sends
//! `y` to `x` and every other point to zero.

use std::collections::BTreeMap;

use crate::boolean_algebra::Algebra;
use crate::free_group::{ReducedWord, Symbol};
use crate::report::{Report, ReportBuilder};
use crate::shift_space::{Point, ShiftError, ShiftPresentation, Side};
use crate::truth::Tri;

use super::same_point;

/// Depth to which points of the class are compared.
pub const COMPARE_DEPTH: usize = 96;

/// The least `(n, m)` with `x_{[n,∞[} = y_{[m,∞[}` to `depth`, searching
/// `n, m ≤ bound`. Errors when two matches have different `n - m`, which
/// would make the tails eventually periodic.
pub fn splice(x: &Point, y: &Point, bound: usize, depth: usize) -> Result<Option<(usize, usize)>, ShiftError> {
    let mut found: Vec<(usize, usize)> = Vec::new();
    for n in 0..=bound {
        let xs = x.window(n as i64, (n + depth) as i64)?;
        for m in 0..=bound {
            if y.window(m as i64, (m + depth) as i64)? == xs {
                found.push((n, m));
            }
        }
    }
    if let Some(&(n0, m0)) = found.first() {
        if found.iter().any(|&(n, m)| n as i64 - m as i64 != n0 as i64 - m0 as i64) {
            return Err(ShiftError::Invalid("splice exponents differ: tails are eventually periodic".into()));
        }
    }
    Ok(found.into_iter().min_by_key(|&(n, m)| (n + m, n)))
}

/// The left special sequence of a substitution shift: a fixed point with
/// two one-letter left extensions. Returns it with a sample of its class:
/// the sequence, its first shifts, and its left extensions.
pub fn tail_class_sample(pres: &ShiftPresentation, shifts: usize) -> Result<(Point, Vec<Point>), ShiftError> {
    for fixed in pres.fixed_points() {
        let c = Point::orbit(fixed, 0);
        let ext: Vec<Symbol> =
            (0..pres.rank() as Symbol).filter(|&a| pres.admits_prefix(&[a], &c).map(|t| t == Tri::True).unwrap_or(false)).collect();
        if ext.len() >= 2 {
            let mut sample = vec![c.clone()];
            for i in 1..=shifts {
                sample.push(c.drop(i));
            }
            for a in ext {
                sample.push(c.prepend(&[a]));
            }
            return Ok((c, sample));
        }
    }
    Err(ShiftError::Unsupported("no fixed point is left special".into()))
}

/// The least `k ≤ max_k` such that, with `u = c_{[0,k[}` and two left
/// extensions `a ≠ b` of `c`, exactly one word `w` of each length up to
/// `depth` has `a·u·w` and `b·u·w` in the language, and it is the
/// continuation of `c`. Then `D_{(au)⁻¹} ∧ D_{(bu)⁻¹}` is the single point
/// `σ^k(c)`.
pub fn lemma_iso_witness(pres: &ShiftPresentation, c: &Point, max_k: usize, depth: usize) -> Result<Option<usize>, ShiftError> {
    let ext: Vec<Symbol> = (0..pres.rank() as Symbol).filter(|&a| pres.admits_prefix(&[a], c).map(|t| t == Tri::True).unwrap_or(false)).collect();
    if ext.len() < 2 {
        return Ok(None);
    }
    let (a, b) = (ext[0], ext[1]);
    'k: for k in 0..=max_k {
        let u = c.window(0, k as i64)?;
        for m in 1..=depth {
            let mut hits = Vec::new();
            for w in pres.factors(m)?.iter() {
                let with = |s: Symbol| {
                    let mut v = vec![s];
                    v.extend_from_slice(&u);
                    v.extend_from_slice(w);
                    v
                };
                if pres.is_factor(&with(a))? && pres.is_factor(&with(b))? {
                    hits.push(w.clone());
                }
            }
            if hits.len() != 1 || hits[0] != c.window(k as i64, (k + m) as i64)? {
                continue 'k;
            }
        }
        return Ok(Some(k));
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixUnit {
    pub x: usize,
    pub y: usize,
    pub n: usize,
    pub m: usize,
    /// `x_{[0,n[} y_{[0,m[}⁻¹`, reduced.
    pub word: ReducedWord,
}

#[derive(Debug, Clone)]
pub struct MatrixUnitSystem {
    pub class: usize,
    pub points: Vec<Point>,
    pub units: BTreeMap<(usize, usize), MatrixUnit>,
    /// Least `k` for which the singleton `{σ^k(c)}` is a Boolean element.
    pub singleton_witness: Option<usize>,
}

/// Build `e_{x,y}` for every pair of sample points.
pub fn matrix_units(alg: &Algebra, points: Vec<Point>, bound: usize, max_k: usize) -> Result<MatrixUnitSystem, ShiftError> {
    if alg.side() != Side::OneSided {
        return Err(ShiftError::Unsupported("matrix units are built on the one-sided shift".into()));
    }
    for i in 0..points.len() {
        for j in 0..i {
            if same_point(&points[i], &points[j], COMPARE_DEPTH) {
                return Err(ShiftError::Invalid(format!("sample points {j} and {i} coincide")));
            }
        }
    }
    let mut units = BTreeMap::new();
    for (i, x) in points.iter().enumerate() {
        for (j, y) in points.iter().enumerate() {
            let Some((n, m)) = splice(x, y, bound, COMPARE_DEPTH)? else {
                return Err(ShiftError::Invalid(format!("points {i} and {j} are not tail equivalent within {bound}")));
            };
            let word = ReducedWord::from_pair(&x.window(0, n as i64)?, &y.window(0, m as i64)?);
            units.insert((i, j), MatrixUnit { x: i, y: j, n, m, word });
        }
    }
    let singleton_witness = lemma_iso_witness(alg.presentation(), &points[0], max_k, 24)?;
    Ok(MatrixUnitSystem { class: 0, points, units, singleton_witness })
}

impl MatrixUnitSystem {
    /// `Λ({x}) s_g Λ({y})` applied to sample point `z`: the index of the image
    /// or `None` for zero.
    pub fn apply_word(&self, alg: &Algebra, x: usize, word: &ReducedWord, y: usize, z: usize) -> Result<Option<usize>, ShiftError> {
        if !same_point(&self.points[z], &self.points[y], COMPARE_DEPTH) {
            return Ok(None);
        }
        let Some(image) = alg.action().apply(word, &self.points[z])? else { return Ok(None) };
        Ok(same_point(&image, &self.points[x], COMPARE_DEPTH).then_some(x))
    }

    pub fn apply(&self, alg: &Algebra, unit: &MatrixUnit, z: usize) -> Result<Option<usize>, ShiftError> {
        self.apply_word(alg, unit.x, &unit.word, unit.y, z)
    }
}

/// Adjoint law, product law, orthogonality, diagonal units, and the
/// singleton witness.
pub fn check_matrix_units(alg: &Algebra, system: &MatrixUnitSystem, max_k: usize, floor: f64) -> Result<Report, ShiftError> {
    let mut b = ReportBuilder::new("units");
    let n = system.points.len();
    let names = alg.presentation().alphabet().names().to_vec();
    b.param("points", n).param("class", system.class).param("max_k", max_k);
    match system.singleton_witness {
        Some(k) => {
            b.metric("singleton_witness_k", k);
            b.check("singleton-witness", k <= max_k, || format!("witness k = {k} above {max_k}"));
        }
        None => {
            b.skip("singleton-witness");
            b.inconclusive(format!("no singleton witness with k ≤ {max_k}"));
        }
    }
    let unit = |i: usize, j: usize| &system.units[&(i, j)];
    for x in 0..n {
        let e = unit(x, x);
        b.check("diagonal", e.word.is_identity(), || format!("e_{{{x},{x}}} has word {}", e.word.render(&names)));
        for z in 0..n {
            let got = system.apply(alg, e, z)?;
            b.check("diagonal", got == (z == x).then_some(x), || format!("e_{{{x},{x}}} on point {z}"));
        }
        for y in 0..n {
            let e = unit(x, y);
            let adj = unit(y, x);
            b.check("adjoint", e.word.inverse() == adj.word, || {
                format!("e_{{{x},{y}}}* = {} but e_{{{y},{x}}} = {}", e.word.inverse().render(&names), adj.word.render(&names))
            });
            for z in 0..n {
                let fwd = system.apply(alg, e, z)?;
                b.check("maps-y-to-x", fwd == (z == y).then_some(x), || format!("e_{{{x},{y}}} on point {z}"));
            }
            for y2 in 0..n {
                for w in 0..n {
                    let f = unit(y2, w);
                    let product = e.word.multiply(&f.word);
                    for z in 0..n {
                        // e_{x,y} e_{y2,w} applied to z, step by step
                        let step = system.apply(alg, f, z)?;
                        let lhs = match step {
                            Some(p) => system.apply(alg, e, p)?,
                            None => None,
                        };
                        let rhs = if y == y2 { system.apply(alg, unit(x, w), z)? } else { None };
                        let id = if y == y2 { "product" } else { "orthogonal" };
                        b.check(id, lhs == rhs, || format!("e_{{{x},{y}}} e_{{{y2},{w}}} on point {z}"));
                    }
                    if y == y2 {
                        // the reduced product word is itself a splice of x and w
                        let ok = match product.one_sided_normal_form() {
                            Some((p, q)) => {
                                let xs = system.points[x].window(p.len() as i64, (p.len() + COMPARE_DEPTH) as i64)?;
                                let ws = system.points[w].window(q.len() as i64, (q.len() + COMPARE_DEPTH) as i64)?;
                                p == system.points[x].window(0, p.len() as i64)? && q == system.points[w].window(0, q.len() as i64)? && xs == ws
                            }
                            None => false,
                        };
                        b.check("product-word", ok, || format!("e_{{{x},{y}}} e_{{{y},{w}}} word {}", product.render(&names)));
                    }
                }
            }
        }
    }
    Ok(b.finish(floor))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib() -> Algebra {
        Algebra::from_presentation(ShiftPresentation::fibonacci(Side::OneSided)).unwrap()
    }

    #[test]
    fn fibonacci_class() {
        let alg = fib();
        let (c, sample) = tail_class_sample(alg.presentation(), 2).unwrap();
        assert_eq!(alg.presentation().alphabet().render(&c.window(0, 8).unwrap()), "abaababa");
        assert_eq!(sample.len(), 5);
        assert_eq!(splice(&sample[0], &sample[2], 8, 64).unwrap(), Some((2, 0)));
        assert_eq!(splice(&sample[3], &sample[4], 8, 64).unwrap(), Some((1, 1)));
        assert_eq!(lemma_iso_witness(alg.presentation(), &c, 12, 24).unwrap(), Some(0));
    }

    #[test]
    fn fibonacci_units() {
        let alg = fib();
        let (_, sample) = tail_class_sample(alg.presentation(), 2).unwrap();
        let system = matrix_units(&alg, sample, 8, 12).unwrap();
        let r = check_matrix_units(&alg, &system, 12, 1.0).unwrap();
        assert!(r.passed(), "{:?} {:?}", r.counterexamples, r.notes);
        // e_{x,x} is the projection onto x
        assert!(system.units[&(1, 1)].word.is_identity());
    }
}
