//! Partial isometries `S_g` on a finite truncation of `ℓ₂(X)`.
//!
//! `S_g e_y = e_{θ_g(y)}` for `y ∈ D_{g⁻¹}` and `0` otherwise. On a finite
//! basis of eventually periodic points this is a partial injection, except
//! where `θ_g(y)` leaves the basis: there the truncated operator is unknown
//! and identities are not asserted (guarded verification).

mod ck;
mod crossed;
mod suites;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

pub use ck::verify_ck_relations;
pub use crossed::{verify_crossed_product, verify_lambda_phi};
pub use suites::{verify_appendix_axiom_sets, verify_definition_relations, verify_lemmas};

use crate::boolean_algebra::{Algebra, SymbolicSet};
use crate::free_group::ReducedWord;
use crate::report::ReportBuilder;
use crate::shift_space::{Point, PresentationKind, ShiftError, Side};
use crate::truth::Tri;

/// Finite set of basis points, indexed.
///
/// One-sided: eventually periodic points with least period at most `p` and
/// preperiod at most `q + d`; the vectors with preperiod at most `q` form the
/// core on which identities are asserted, the extra `d` symbols give room for
/// the operators to act. Two-sided: periodic points with period at most `p`.
#[derive(Debug, Clone)]
pub struct FiniteBasis {
    points: Vec<Point>,
    index: HashMap<Point, usize>,
    core: Vec<usize>,
    q: usize,
    p: usize,
    d: usize,
}

impl FiniteBasis {
    pub fn build(alg: &Algebra, q: usize, p: usize, d: usize) -> Result<Self, ShiftError> {
        let pres = alg.presentation();
        if matches!(pres.kind(), PresentationKind::Substitution(_)) {
            return Err(ShiftError::Unsupported("substitution shifts have no eventually periodic points".into()));
        }
        let points = match pres.side() {
            Side::OneSided => pres.eventually_periodic_points(q + d, p)?,
            Side::TwoSided => pres.eventually_periodic_points(0, p)?,
        };
        let index = points.iter().enumerate().map(|(i, x)| (x.clone(), i)).collect();
        let core = points
            .iter()
            .enumerate()
            .filter(|(_, x)| pres.side() == Side::TwoSided || x.right().prefix().len() <= q)
            .map(|(i, _)| i)
            .collect();
        Ok(FiniteBasis { points, index, core, q, p, d })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn index_of(&self, x: &Point) -> Option<usize> {
        self.index.get(x).copied()
    }

    /// Indices on which identities are asserted.
    pub fn core(&self) -> &[usize] {
        &self.core
    }

    pub fn params(&self) -> (usize, usize, usize) {
        (self.q, self.p, self.d)
    }
}

/// `S_g` on the basis: a partial injection plus the vectors where the
/// truncation loses information.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialIsometryOp {
    pub label: String,
    map: BTreeMap<usize, usize>,
    inverse: BTreeMap<usize, usize>,
    /// Sources in `D_{g⁻¹}` whose image leaves the basis.
    escaped: BTreeSet<usize>,
    /// Basis points of `D_g` (the range of the untruncated operator).
    range_domain: BTreeSet<usize>,
}

impl PartialIsometryOp {
    pub fn map(&self) -> &BTreeMap<usize, usize> {
        &self.map
    }

    pub fn is_zero(&self) -> bool {
        self.map.is_empty() && self.escaped.is_empty()
    }

    /// Indices where `S_g e_x` is known exactly.
    pub fn guard(&self, basis: &FiniteBasis) -> BTreeSet<usize> {
        (0..basis.len()).filter(|i| !self.escaped.contains(i)).collect()
    }

    pub fn is_injective(&self) -> bool {
        self.map.len() == self.inverse.len()
    }
}

/// Sparse integer vector over basis indices.
pub type Vector = BTreeMap<usize, i64>;

pub fn basis_vector(i: usize) -> Vector {
    [(i, 1)].into_iter().collect()
}

/// Operator expressions evaluated exactly on basis vectors.
#[derive(Debug, Clone)]
pub enum Op {
    Identity,
    Zero,
    S(Arc<PartialIsometryOp>),
    Adjoint(Arc<PartialIsometryOp>),
    /// Diagonal projection onto the given basis indices.
    Proj(Arc<BTreeSet<usize>>),
    /// Product, rightmost factor applied first.
    Compose(Vec<Op>),
    Sum(Vec<(i64, Op)>),
}

impl Op {
    pub fn compose(ops: Vec<Op>) -> Op {
        Op::Compose(ops)
    }

    /// `1 - self`.
    pub fn one_minus(self) -> Op {
        Op::Sum(vec![(1, Op::Identity), (-1, self)])
    }

    /// `S S*`.
    pub fn range_projection(s: &Arc<PartialIsometryOp>) -> Op {
        Op::Compose(vec![Op::S(s.clone()), Op::Adjoint(s.clone())])
    }

    /// `S* S`.
    pub fn source_projection(s: &Arc<PartialIsometryOp>) -> Op {
        Op::Compose(vec![Op::Adjoint(s.clone()), Op::S(s.clone())])
    }

    /// Exact image of `v`, or `None` when some step leaves the truncation.
    pub fn apply(&self, v: &Vector) -> Option<Vector> {
        let mut out = Vector::new();
        match self {
            Op::Identity => return Some(v.clone()),
            Op::Zero => {}
            Op::S(s) => {
                for (&i, &c) in v {
                    if let Some(&j) = s.map.get(&i) {
                        *out.entry(j).or_insert(0) += c;
                    } else if s.escaped.contains(&i) {
                        return None;
                    }
                }
            }
            Op::Adjoint(s) => {
                for (&i, &c) in v {
                    if let Some(&j) = s.inverse.get(&i) {
                        *out.entry(j).or_insert(0) += c;
                    } else if s.range_domain.contains(&i) {
                        return None;
                    }
                }
            }
            Op::Proj(support) => {
                for (&i, &c) in v {
                    if support.contains(&i) {
                        out.insert(i, c);
                    }
                }
            }
            Op::Compose(ops) => {
                let mut cur = v.clone();
                for op in ops.iter().rev() {
                    cur = op.apply(&cur)?;
                }
                return Some(cur);
            }
            Op::Sum(terms) => {
                for (coeff, op) in terms {
                    for (i, c) in op.apply(v)? {
                        *out.entry(i).or_insert(0) += coeff * c;
                    }
                }
            }
        }
        out.retain(|_, c| *c != 0);
        Some(out)
    }
}

/// Operators of one partial action on one basis, built on demand.
#[derive(Debug)]
pub struct Representation<'a> {
    alg: &'a Algebra,
    basis: FiniteBasis,
    ops: Mutex<HashMap<ReducedWord, Arc<PartialIsometryOp>>>,
}

impl<'a> Representation<'a> {
    pub fn new(alg: &'a Algebra, basis: FiniteBasis) -> Self {
        Representation { alg, basis, ops: Mutex::new(HashMap::new()) }
    }

    pub fn algebra(&self) -> &Algebra {
        self.alg
    }

    pub fn basis(&self) -> &FiniteBasis {
        &self.basis
    }

    fn build(&self, g: &ReducedWord) -> Result<PartialIsometryOp, ShiftError> {
        let action = self.alg.action();
        let names = self.alg.presentation().alphabet().names();
        let mut op = PartialIsometryOp {
            label: format!("S[{}]", g.render(names)),
            map: BTreeMap::new(),
            inverse: BTreeMap::new(),
            escaped: BTreeSet::new(),
            range_domain: BTreeSet::new(),
        };
        for (i, x) in self.basis.points.iter().enumerate() {
            if action.in_domain(g, x)? == Tri::True {
                op.range_domain.insert(i);
            }
            if let Some(y) = action.apply(g, x)? {
                match self.basis.index_of(&y) {
                    Some(j) => {
                        op.map.insert(i, j);
                        op.inverse.insert(j, i);
                    }
                    None => {
                        op.escaped.insert(i);
                    }
                }
            }
        }
        Ok(op)
    }

    /// `S_g` on the basis.
    pub fn operator_of(&self, g: &ReducedWord) -> Result<Arc<PartialIsometryOp>, ShiftError> {
        if let Some(op) = self.ops.lock().expect("operator cache poisoned").get(g) {
            return Ok(op.clone());
        }
        let op = Arc::new(self.build(g)?);
        Ok(self.ops.lock().expect("operator cache poisoned").entry(g.clone()).or_insert(op).clone())
    }

    pub fn s(&self, g: &ReducedWord) -> Result<Op, ShiftError> {
        Ok(Op::S(self.operator_of(g)?))
    }

    pub fn s_adj(&self, g: &ReducedWord) -> Result<Op, ShiftError> {
        Ok(Op::Adjoint(self.operator_of(g)?))
    }

    /// `Λ(A)`: projection onto the basis points lying in `A`.
    pub fn projection(&self, a: &SymbolicSet) -> Result<Op, ShiftError> {
        let mut support = BTreeSet::new();
        for (i, x) in self.basis.points.iter().enumerate() {
            if self.alg.contains(a, x)? {
                support.insert(i);
            }
        }
        Ok(Op::Proj(Arc::new(support)))
    }

    /// Projection onto the basis points satisfying `pred`.
    pub fn projection_where(&self, mut pred: impl FnMut(&Point) -> Result<bool, ShiftError>) -> Result<Op, ShiftError> {
        let mut support = BTreeSet::new();
        for (i, x) in self.basis.points.iter().enumerate() {
            if pred(x)? {
                support.insert(i);
            }
        }
        Ok(Op::Proj(Arc::new(support)))
    }

    /// Compare `lhs` and `rhs` on every core basis vector.
    pub fn compare(&self, lhs: &Op, rhs: &Op) -> Comparison {
        let mut c = Comparison::default();
        for &i in &self.basis.core {
            let v = basis_vector(i);
            match (lhs.apply(&v), rhs.apply(&v)) {
                (Some(l), Some(r)) => {
                    c.checked += 1;
                    if l != r {
                        c.failures.push(i);
                    }
                }
                _ => c.skipped += 1,
            }
        }
        c
    }

    /// Assert `lhs = rhs` on every core basis vector where both sides stay
    /// inside the truncation.
    pub fn check_identity(&self, b: &mut ReportBuilder, identity: &str, lhs: &Op, rhs: &Op, context: impl Fn() -> String) -> bool {
        let c = self.compare(lhs, rhs);
        self.record(b, identity, &c, context)
    }

    /// Add a comparison to a report; true when it found no failure.
    pub fn record(&self, b: &mut ReportBuilder, identity: &str, c: &Comparison, context: impl Fn() -> String) -> bool {
        let mut failures = c.failures.iter();
        for _ in 0..c.checked {
            match failures.next() {
                Some(&i) => b.check(identity, false, || format!("{} at {}", context(), self.basis.points[i])),
                None => b.check(identity, true, String::new),
            }
        }
        for _ in 0..c.skipped {
            b.skip(identity);
        }
        c.failures.is_empty()
    }
}

/// Outcome of comparing two operators on the core vectors.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Comparison {
    pub checked: usize,
    pub skipped: usize,
    /// Core indices where both sides were defined and differed.
    pub failures: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean_algebra::Algebra;
    use crate::free_group::Symbol;
    use crate::shift_space::{Alphabet, ShiftPresentation};

    const A: Symbol = 0;
    const B: Symbol = 1;

    #[test]
    fn basis_examples() {
        let full = Algebra::from_presentation(ShiftPresentation::full_shift(Alphabet::ab(), Side::OneSided)).unwrap();
        let basis = FiniteBasis::build(&full, 0, 2, 0).unwrap();
        let expected: std::collections::HashSet<Point> = [vec![A], vec![B], vec![A, B], vec![B, A]]
            .into_iter()
            .map(|p| Point::eventually_periodic(vec![], p).unwrap())
            .collect();
        assert_eq!(basis.points().iter().cloned().collect::<std::collections::HashSet<_>>().len(), 4);
        assert!(basis.points().iter().all(|x| expected.contains(x)));

        let golden = Algebra::from_presentation(ShiftPresentation::golden_mean(Side::OneSided)).unwrap();
        let basis = FiniteBasis::build(&golden, 0, 2, 0).unwrap();
        assert_eq!(basis.len(), 3);
        assert!(basis.index_of(&Point::eventually_periodic(vec![], vec![B]).unwrap()).is_none());
        let bigger = FiniteBasis::build(&golden, 1, 2, 0).unwrap();
        // adds b·a^∞ and a·(ab)^∞; the other prefixes normalize away or are forbidden
        assert_eq!(bigger.len(), 5);
        assert!(bigger.index_of(&Point::eventually_periodic(vec![B], vec![A]).unwrap()).is_some());

        let fib = Algebra::from_presentation(ShiftPresentation::fibonacci(Side::OneSided)).unwrap();
        assert!(FiniteBasis::build(&fib, 0, 2, 0).is_err());
    }

    #[test]
    fn operator_examples() {
        let full = Algebra::from_presentation(ShiftPresentation::full_shift(Alphabet::ab(), Side::OneSided)).unwrap();
        let rep = Representation::new(&full, FiniteBasis::build(&full, 1, 2, 1).unwrap());
        let e = rep.operator_of(&ReducedWord::identity()).unwrap();
        assert_eq!(e.map().len(), rep.basis().len());
        assert!(e.map().iter().all(|(i, j)| i == j));
        let s0 = rep.operator_of(&ReducedWord::generator(A)).unwrap();
        assert!(s0.is_injective());
        for (&i, &j) in s0.map() {
            assert_eq!(*rep.basis().point(j), rep.basis().point(i).prepend(&[A]));
        }
        // S_{g⁻¹} and S_g* agree where both are defined
        let g = ReducedWord::from_pair(&[A], &[B]);
        let s = rep.operator_of(&g).unwrap();
        let t = rep.operator_of(&g.inverse()).unwrap();
        for (&i, &j) in s.map() {
            if let Some(&back) = t.map().get(&j) {
                assert_eq!(back, i);
            }
        }
    }

    #[test]
    fn guarded_apply_reports_escape() {
        let golden = Algebra::from_presentation(ShiftPresentation::golden_mean(Side::OneSided)).unwrap();
        let rep = Representation::new(&golden, FiniteBasis::build(&golden, 0, 2, 0).unwrap());
        let s = rep.s(&ReducedWord::generator(B)).unwrap();
        let a_inf = rep.basis().index_of(&Point::eventually_periodic(vec![], vec![A]).unwrap()).unwrap();
        // b·a^∞ is not in the basis
        assert_eq!(s.apply(&basis_vector(a_inf)), None);
        let ab = rep.basis().index_of(&Point::eventually_periodic(vec![], vec![A, B]).unwrap()).unwrap();
        let ba = rep.basis().index_of(&Point::eventually_periodic(vec![], vec![B, A]).unwrap()).unwrap();
        assert_eq!(s.apply(&basis_vector(ab)), Some(basis_vector(ba)));
        let ba_vec = basis_vector(ba);
        // b·(ba)^∞ is forbidden: an exact zero
        assert_eq!(s.apply(&ba_vec), Some(Vector::new()));
    }
}
