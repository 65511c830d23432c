//! The partial action of the free group on a shift space.
//!
//! One-sided: for `g = p q⁻¹` in normal form, `D_g` is the set of points
//! starting with `p` whose tail after `p` still lies in the space when
//! prefixed by `q`, and `θ_g` replaces a leading `q` by `p`. Two-sided:
//! only positive words and their inverses have nonempty domains and
//! `θ_g = τ^{-[g]}`.

use std::sync::Arc;

use crate::free_group::{FreeGroup, ReducedWord, Word};
use crate::report::{Report, ReportBuilder};
use crate::shift_space::{point_equal, Point, PointEquality, ShiftError, ShiftPresentation, Side};
use crate::truth::Tri;

/// Window depth used when two points can only be compared symbol by symbol.
pub const COMPARE_DEPTH: usize = 64;

#[derive(Debug, Clone)]
pub struct PartialAction {
    pres: Arc<ShiftPresentation>,
}

fn undecided_on_inconclusive(r: Result<Tri, ShiftError>) -> Result<Tri, ShiftError> {
    match r {
        Err(ShiftError::Inconclusive { .. }) => Ok(Tri::Undecided),
        other => other,
    }
}

impl PartialAction {
    pub fn new(pres: Arc<ShiftPresentation>) -> Self {
        PartialAction { pres }
    }

    pub fn presentation(&self) -> &ShiftPresentation {
        &self.pres
    }

    pub fn shared_presentation(&self) -> Arc<ShiftPresentation> {
        self.pres.clone()
    }

    pub fn side(&self) -> Side {
        self.pres.side()
    }

    /// Positive word `μ` with `g = μ` or `g = μ⁻¹`, and whether it is inverted.
    fn two_sided_shape(g: &ReducedWord) -> Option<(Word, bool)> {
        if let Some(w) = g.positive_word() {
            return Some((w, false));
        }
        g.negative_word().map(|w| (w, true))
    }

    /// Membership `x ∈ D_g`.
    pub fn in_domain(&self, g: &ReducedWord, x: &Point) -> Result<Tri, ShiftError> {
        if g.is_identity() {
            return Ok(Tri::True);
        }
        match self.side() {
            Side::OneSided => {
                let Some((p, q)) = g.one_sided_normal_form() else { return Ok(Tri::False) };
                if x.window(0, p.len() as i64)? != p {
                    return Ok(Tri::False);
                }
                undecided_on_inconclusive(self.pres.admits_prefix(&q, &x.drop(p.len())))
            }
            Side::TwoSided => {
                let Some((w, inverted)) = Self::two_sided_shape(g) else { return Ok(Tri::False) };
                let n = w.len() as i64;
                let read = if inverted { x.window(-n, 0)? } else { x.window(0, n)? };
                Ok(Tri::from_bool(read == w))
            }
        }
    }

    /// `θ_g(x)` for `x ∈ D_{g⁻¹}`; `None` outside the domain.
    pub fn apply(&self, g: &ReducedWord, x: &Point) -> Result<Option<Point>, ShiftError> {
        match self.in_domain(&g.inverse(), x)? {
            Tri::False => return Ok(None),
            Tri::Undecided => return Err(ShiftError::Inconclusive { depth: self.pres.pred_window() }),
            Tri::True => {}
        }
        if g.is_identity() {
            return Ok(Some(x.clone()));
        }
        match self.side() {
            Side::OneSided => {
                let (p, q) = g.one_sided_normal_form().expect("domain of g⁻¹ is nonempty");
                Ok(Some(x.drop(q.len()).prepend(&p)))
            }
            Side::TwoSided => Ok(x.shift_by(-g.degree())),
        }
    }

    /// Membership `x ∈ θ_h(D_i)`, computed through `θ_{h⁻¹}`.
    pub fn in_image(&self, h: &ReducedWord, i: &ReducedWord, x: &Point) -> Result<Tri, ShiftError> {
        match self.in_domain(h, x)? {
            Tri::True => {}
            other => return Ok(other),
        }
        match self.apply(&h.inverse(), x) {
            Ok(Some(y)) => undecided_on_inconclusive(self.in_domain(i, &y)),
            Ok(None) => Ok(Tri::False),
            Err(ShiftError::Inconclusive { .. }) => Ok(Tri::Undecided),
            Err(e) => Err(e),
        }
    }
}

/// Check the partial-action axioms on a finite sample.
pub fn check_partial_action_axioms(
    action: &PartialAction,
    group: &[ReducedWord],
    points: &[Point],
    floor: f64,
) -> Result<Report, ShiftError> {
    let mut b = ReportBuilder::new("axioms");
    b.param("group_sample", group.len()).param("point_sample", points.len());
    let e = ReducedWord::identity();
    let same = |p: &Point, q: &Point| point_equal(p, q, COMPARE_DEPTH);
    for x in points {
        match action.apply(&e, x)? {
            Some(y) => b.check("identity", y == *x, || format!("θ_e moved {x}")),
            None => b.check("identity", false, || format!("{x} outside D_e")),
        }
    }
    for h in group {
        for x in points {
            if action.in_domain(&h.inverse(), x)? != Tri::True {
                continue;
            }
            match action.apply(h, x) {
                Ok(Some(y)) => {
                    let inside = action.in_domain(h, &y)?;
                    match inside {
                        Tri::Undecided => b.skip("range"),
                        t => b.check("range", t == Tri::True, || format!("θ_{h}({x}) = {y} not in D_{h}")),
                    }
                    match action.apply(&h.inverse(), &y) {
                        Ok(Some(z)) => match same(&z, x) {
                            PointEquality::Undecided => b.skip("inverse"),
                            eq => b.check("inverse", eq == PointEquality::Equal, || format!("θ_{h}⁻¹θ_{h}({x}) = {z}")),
                        },
                        Ok(None) => b.check("inverse", false, || format!("θ_{h}({x}) outside D_{h}")),
                        Err(_) => b.skip("inverse"),
                    }
                }
                Ok(None) => b.check("range", false, || format!("θ_{h} undefined at {x} in D_{h}⁻¹")),
                Err(_) => b.skip("range"),
            }
        }
    }
    for h in group {
        for i in group {
            let hi = h.multiply(i);
            let hi_inv = hi.inverse();
            let i_inv = i.inverse();
            for x in points {
                // θ_h(D_i) = D_h ∩ D_{hi}
                let left = action.in_image(h, i, x)?;
                let right = action.in_domain(h, x)?.and(action.in_domain(&hi, x)?);
                match (left.known(), right.known()) {
                    (Some(l), Some(r)) => b.check("image", l == r, || format!("h={h} i={i} x={x}: θ_h(D_i) {l}, D_h∩D_hi {r}")),
                    _ => b.skip("image"),
                }
                // θ_h θ_i = θ_{hi} on D_{i⁻¹} ∩ D_{i⁻¹h⁻¹}
                let dom = action.in_domain(&i_inv, x)?.and(action.in_domain(&hi_inv, x)?);
                match dom {
                    Tri::False => {}
                    Tri::Undecided => b.skip("composition"),
                    Tri::True => {
                        let lhs = action.apply(i, x).and_then(|y| match y {
                            Some(y) => action.apply(h, &y),
                            None => Ok(None),
                        });
                        let rhs = action.apply(&hi, x);
                        match (lhs, rhs) {
                            (Ok(Some(p)), Ok(Some(q))) => match same(&p, &q) {
                                PointEquality::Undecided => b.skip("composition"),
                                eq => b.check("composition", eq == PointEquality::Equal, || format!("h={h} i={i} x={x}: {p} ≠ {q}")),
                            },
                            (Ok(l), Ok(r)) => b.check("composition", false, || {
                                format!("h={h} i={i} x={x}: defined {} vs {}", l.is_some(), r.is_some())
                            }),
                            _ => b.skip("composition"),
                        }
                    }
                }
            }
        }
    }
    Ok(b.finish(floor))
}

/// No sampled point lies in `D_μ ∩ D_ν` for distinct positive words of equal length.
pub fn check_disjointness(action: &PartialAction, max_len: usize, points: &[Point], floor: f64) -> Result<Report, ShiftError> {
    let mut b = ReportBuilder::new("disjointness");
    b.param("max_len", max_len).param("point_sample", points.len());
    let fg = FreeGroup::new(action.presentation().rank());
    for n in 1..=max_len {
        let words = fg.positive_words(n);
        for (j, mu) in words.iter().enumerate() {
            for nu in &words[j + 1..] {
                let (gm, gn) = (ReducedWord::positive(mu), ReducedWord::positive(nu));
                for x in points {
                    let both = action.in_domain(&gm, x)?.and(action.in_domain(&gn, x)?);
                    match both.known() {
                        Some(hit) => b.check("disjoint", !hit, || format!("{x} in D_{gm} and D_{gn}")),
                        None => b.skip("disjoint"),
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
    use crate::free_group::Symbol;
    use crate::report::Verdict;

    const A: Symbol = 0;
    const B: Symbol = 1;

    fn golden() -> PartialAction {
        PartialAction::new(Arc::new(ShiftPresentation::golden_mean(Side::OneSided)))
    }

    fn pt(pre: &[Symbol], period: &[Symbol]) -> Point {
        Point::eventually_periodic(pre.to_vec(), period.to_vec()).unwrap()
    }

    #[test]
    fn golden_mean_domain_of_b_a_inverse() {
        // x ∈ D_{ba⁻¹} iff x starts with b and a·σx is admissible
        let act = golden();
        let g = ReducedWord::from_pair(&[B], &[A]);
        let m = [[1, 1], [1, 0]];
        for x in act.presentation().eventually_periodic_points(2, 3).unwrap() {
            let w = x.window(0, 2).unwrap();
            let expected = w[0] == B && m[A as usize][w[1] as usize] == 1;
            assert_eq!(act.in_domain(&g, &x).unwrap(), Tri::from_bool(expected), "{x}");
        }
    }

    #[test]
    fn identity_domain_is_everything() {
        let act = golden();
        assert_eq!(act.in_domain(&ReducedWord::identity(), &pt(&[B], &[A])).unwrap(), Tri::True);
    }

    #[test]
    fn two_sided_mixed_words_have_empty_domain() {
        let act = PartialAction::new(Arc::new(ShiftPresentation::full_shift(crate::Alphabet::ab(), Side::TwoSided)));
        let g = ReducedWord::positive_inverse(&[A]).multiply(&ReducedWord::generator(B));
        for period in [vec![A], vec![B], vec![A, B]] {
            let z = Point::periodic_two_sided(period).unwrap();
            assert_eq!(act.in_domain(&g, &z).unwrap(), Tri::False);
        }
    }

    #[test]
    fn generators_prepend_and_shift() {
        let act = golden();
        let x = pt(&[], &[A, B]);
        assert_eq!(act.apply(&ReducedWord::generator(B), &x).unwrap(), Some(pt(&[B], &[A, B])));
        let a_inv = ReducedWord::positive_inverse(&[A]);
        assert_eq!(act.apply(&a_inv, &x).unwrap(), Some(x.shift()));
        // b·b is forbidden
        assert_eq!(act.apply(&ReducedWord::generator(B), &pt(&[], &[B, A])).unwrap(), None);
    }

    #[test]
    fn two_sided_application_is_inverse_shift() {
        let act = PartialAction::new(Arc::new(ShiftPresentation::full_shift(crate::Alphabet::ab(), Side::TwoSided)));
        let z = Point::periodic_two_sided(vec![A, A, B]).unwrap();
        // z_{[-2,0[} = ab, so z ∈ D_{(ab)⁻¹}
        let mu = ReducedWord::positive(&[A, B]);
        assert_eq!(act.apply(&mu, &z).unwrap(), z.shift_by(-2));
        assert_eq!(act.apply(&ReducedWord::positive(&[B, B]), &z).unwrap(), None);
    }

    #[test]
    fn axioms_on_golden_mean_sample() {
        let act = golden();
        let pts = act.presentation().eventually_periodic_points(1, 2).unwrap();
        let r = check_partial_action_axioms(&act, &FreeGroup::new(2).ball(2), &pts, 0.9).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{:?}", r.counterexamples);
        let d = check_disjointness(&act, 2, &pts, 0.9).unwrap();
        assert_eq!(d.verdict, Verdict::Pass);
    }

    #[test]
    fn lemma_prefix_swap_literally() {
        // θ_{νμ⁻¹}(μx) = νx
        let act = golden();
        let x = pt(&[], &[A]);
        for (mu, nu) in [(vec![A], vec![B]), (vec![B, A], vec![A]), (vec![], vec![A, B])] {
            let g = ReducedWord::from_pair(&nu, &mu);
            let y = act.apply(&g, &x.prepend(&mu)).unwrap().unwrap();
            assert_eq!(y, x.prepend(&nu));
        }
    }
}
