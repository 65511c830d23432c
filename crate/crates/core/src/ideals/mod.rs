//! Invariant admissible sets, left special elements, the map `ψ` onto the
//! two-sided shift, and matrix units.
//!
//! An admissible set is a union of elements of the Boolean algebra; at a
//! fixed resolution `r` we work with its trace, the `r`-atoms it contains.
//! Invariant admissible sets are open, so they are rarely unions of atoms at
//! one resolution: the trace of the invariant hull of a family of atoms is
//! what is enumerated.

mod psi;
mod special;
mod units;

use std::collections::BTreeSet;

use serde_json::json;

pub use psi::{check_psi, kappa_on_cylinder, Psi};
pub use special::{check_property_star, check_property_starstar, left_special_scan, Candidate, SpecialElementLedger};
pub use units::{check_matrix_units, lemma_iso_witness, matrix_units, splice, tail_class_sample, MatrixUnit, MatrixUnitSystem};

use crate::boolean_algebra::{Algebra, Atom, Resolution, SymbolicSet};
use crate::free_group::{ReducedWord, Symbol, Word};
use crate::report::{Report, ReportBuilder};
use crate::shift_space::{point_equal, Point, PointEquality, PresentationKind, ShiftError, Side};

/// A subset of the space given either as a Boolean element or as finitely
/// many points.
#[derive(Debug, Clone)]
pub enum Region {
    Set(SymbolicSet),
    Points(Vec<Point>),
}

/// Depth to which finitely many points are compared with atom windows.
const POINT_DEPTH: usize = 64;

/// Union of the atoms of `r` contained in `y`.
pub fn admissible_core(alg: &Algebra, y: &Region, r: Resolution) -> Result<SymbolicSet, ShiftError> {
    match y {
        Region::Set(s) => core_of_set(alg, s, r),
        Region::Points(points) => {
            let mut atoms = BTreeSet::new();
            for t in alg.atoms(r)?.iter() {
                if let Some(members) = finite_atom_windows(alg, t, r)? {
                    let inside = members.iter().all(|w| {
                        points.iter().any(|x| x.window(0, w.len() as i64).map(|v| &v == w).unwrap_or(false))
                    });
                    if inside {
                        atoms.insert(t.clone());
                    }
                }
            }
            Ok(SymbolicSet::new(alg.side(), r, atoms))
        }
    }
}

/// The `r`-atoms contained in `y`, for `y` at any resolution.
fn core_of_set(alg: &Algebra, y: &SymbolicSet, r: Resolution) -> Result<SymbolicSet, ShiftError> {
    let joint = r.join(y.resolution(), alg.side());
    let fine = alg.refine(y, joint)?;
    let mut outside = BTreeSet::new();
    for t in alg.atoms(joint)?.iter() {
        if !fine.atoms().contains(t) {
            outside.insert(alg.coarsen_atom(t, joint, r)?);
        }
    }
    let atoms = alg.atoms(r)?.iter().filter(|t| !outside.contains(*t)).cloned().collect();
    Ok(SymbolicSet::new(alg.side(), r, atoms))
}

/// For a finite atom, the windows (one per point, long enough to determine
/// it); `None` when the atom is infinite.
///
/// On a finite-type shift with memory `s` and `V` state blocks, the atom is
/// determined by windows of length `k + s`, and the number of extensions of
/// those windows stops growing within `V` symbols exactly when the atom is
/// finite.
fn finite_atom_windows(alg: &Algebra, t: &Atom, r: Resolution) -> Result<Option<Vec<Word>>, ShiftError> {
    let pres = alg.presentation();
    if alg.side() != Side::OneSided {
        return Err(ShiftError::Unsupported("point regions are one-sided".into()));
    }
    match pres.kind() {
        PresentationKind::FinitePointSet(periods) => {
            let mut out = Vec::new();
            for v in periods {
                for i in 0..v.len() {
                    let mut rot = v.clone();
                    rot.rotate_left(i);
                    let x = Point::eventually_periodic(Vec::new(), rot)?;
                    if alg.atom_of(&x, r)? == *t {
                        out.push(x.window(0, POINT_DEPTH as i64)?);
                    }
                }
            }
            Ok(Some(out))
        }
        _ if pres.is_finite_type() => {
            let s = pres.memory().unwrap_or(1);
            let states = pres.rank().pow(s as u32);
            let base = r.k + s;
            let windows: Vec<Word> = pres
                .factors(base)?
                .iter()
                .filter(|v| {
                    v[..r.k] == t.prefix[..]
                        && pres.predecessors_of_word(r.l, &v[r.k..]).map(|p| p.words == t.preds).unwrap_or(false)
                })
                .cloned()
                .collect();
            let extensions = |n: usize| -> Result<Vec<Word>, ShiftError> {
                Ok(pres.factors(n)?.iter().filter(|w| windows.iter().any(|v| w.starts_with(v))).cloned().collect())
            };
            let first = extensions(base + states)?;
            let second = extensions(base + 2 * states)?;
            if first.len() != second.len() {
                return Ok(None);
            }
            let depth = POINT_DEPTH.max(base + 2 * states);
            let mut out = Vec::new();
            for w in second {
                // the continuation is unique; follow it
                let mut cur = w;
                while cur.len() < depth {
                    let next: Vec<Word> = (0..pres.rank() as Symbol)
                        .map(|a| {
                            let mut v = cur.clone();
                            v.push(a);
                            v
                        })
                        .filter(|v| pres.is_factor(&v[v.len().saturating_sub(s + 1)..]).unwrap_or(false))
                        .collect();
                    match next.len() {
                        1 => cur = next.into_iter().next().expect("one continuation"),
                        _ => return Ok(None),
                    }
                }
                out.push(cur);
            }
            Ok(Some(out))
        }
        _ => Err(ShiftError::Unsupported(format!("finiteness of atoms of a {} shift", pres.kind_name()))),
    }
}

fn letters(alg: &Algebra) -> Vec<ReducedWord> {
    let n = alg.presentation().rank();
    (0..n as Symbol).flat_map(|a| [ReducedWord::generator(a), ReducedWord::generator(a).inverse()]).collect()
}

/// One step of the invariant hull: `H ∪ ⋃_a θ_a(H) ∪ θ_{a⁻¹}(H)`.
fn hull_step(alg: &Algebra, h: &SymbolicSet) -> Result<SymbolicSet, ShiftError> {
    let mut next = h.clone();
    for g in letters(alg) {
        next = alg.join(&next, &alg.act(&g, h)?)?;
    }
    coarsest_l(alg, &next)
}

/// The same set at the least predecessor length that still represents it
/// exactly. Without this the hull's resolution grows by two predecessor
/// symbols per step, and atom enumeration with it.
fn coarsest_l(alg: &Algebra, s: &SymbolicSet) -> Result<SymbolicSet, ShiftError> {
    let r = s.resolution();
    let atoms = alg.atoms(r)?;
    for l in 0..r.l {
        let to = Resolution::new(r.k, l);
        let mut inside = BTreeSet::new();
        let mut outside = BTreeSet::new();
        for t in atoms.iter() {
            let c = alg.coarsen_atom(t, r, to)?;
            if s.atoms().contains(t) {
                inside.insert(c);
            } else {
                outside.insert(c);
            }
        }
        if inside.is_disjoint(&outside) {
            return Ok(SymbolicSet::new(alg.side(), to, inside));
        }
    }
    Ok(s.clone())
}

/// Invariant admissible set traced at one resolution, with the hull that
/// produced it and the checks made on it.
#[derive(Debug, Clone)]
pub struct InvariantSetCertificate {
    pub set: SymbolicSet,
    /// Finite stage of the invariant hull of `set`.
    pub hull: SymbolicSet,
    pub hull_steps: usize,
    /// The trace was unchanged over the last two hull steps.
    pub stabilized: bool,
    /// `set` is the trace of its own hull.
    pub admissible: bool,
    /// The traces of `σ(hull)` and `σ⁻¹(hull)` lie in `set`.
    pub sigma_invariant: bool,
    pub sigma_inverse_invariant: bool,
}

impl InvariantSetCertificate {
    /// Re-run the invariance and admissibility checks.
    pub fn verify(&self, alg: &Algebra) -> Result<bool, ShiftError> {
        let (a, s, si) = certify(alg, &self.set, &self.hull)?;
        Ok(a == self.admissible && s == self.sigma_invariant && si == self.sigma_inverse_invariant)
    }

    pub fn is_valid(&self) -> bool {
        self.stabilized && self.admissible && self.sigma_invariant && self.sigma_inverse_invariant
    }
}

fn certify(alg: &Algebra, set: &SymbolicSet, hull: &SymbolicSet) -> Result<(bool, bool, bool), ShiftError> {
    let r = set.resolution();
    let admissible = core_of_set(alg, hull, r)? == *set;
    let mut sigma = true;
    let mut sigma_inv = true;
    for g in letters(alg) {
        let image = core_of_set(alg, &alg.act(&g, hull)?, r)?;
        let ok = image.atoms().is_subset(set.atoms());
        // θ_{a⁻¹} is the shift on D_a; θ_a is its inverse branch
        if g.degree() < 0 {
            sigma &= ok;
        } else {
            sigma_inv &= ok;
        }
    }
    Ok((admissible, sigma, sigma_inv))
}

/// `core_r(hull(F))`, iterating the hull until the trace is stable over two
/// consecutive steps or `max_steps` is reached.
pub fn invariant_closure(alg: &Algebra, f: &SymbolicSet, max_steps: usize) -> Result<InvariantSetCertificate, ShiftError> {
    let r = f.resolution();
    let full_len = alg.atoms(r)?.len();
    let mut hull = f.clone();
    let mut trace = core_of_set(alg, &hull, r)?;
    let mut unchanged = 0;
    let mut steps = 0;
    while steps < max_steps && unchanged < 2 && trace.len() < full_len && !trace.is_empty() {
        hull = hull_step(alg, &hull)?;
        steps += 1;
        let next = core_of_set(alg, &hull, r)?;
        unchanged = if next == trace { unchanged + 1 } else { 0 };
        trace = next;
    }
    // ∅ and the full set are invariant outright
    let stabilized = unchanged >= 2 || trace.is_empty() || trace.len() == full_len;
    let (admissible, sigma_invariant, sigma_inverse_invariant) = certify(alg, &trace, &hull)?;
    Ok(InvariantSetCertificate { set: trace, hull, hull_steps: steps, stabilized, admissible, sigma_invariant, sigma_inverse_invariant })
}

/// Traces at one resolution of the invariant admissible sets, ordered by
/// inclusion.
#[derive(Debug, Clone)]
pub struct IdealLattice {
    pub resolution: Resolution,
    pub sets: Vec<InvariantSetCertificate>,
    /// Covering pairs `(i, j)`: `sets[i] ⊂ sets[j]` with nothing in between.
    pub covers: Vec<(usize, usize)>,
}

/// Default bound on hull iterations.
pub const HULL_STEPS: usize = 6;

/// All traces at `r` of invariant admissible sets: the fixed points of
/// `F ↦ core_r(hull(F))`, generated from single atoms and closed under joins.
pub fn invariant_admissible_sets(alg: &Algebra, r: Resolution, max_steps: usize) -> Result<IdealLattice, ShiftError> {
    let mut found: Vec<InvariantSetCertificate> = Vec::new();
    let mut seen: BTreeSet<BTreeSet<Atom>> = BTreeSet::new();
    let mut push = |c: InvariantSetCertificate, found: &mut Vec<InvariantSetCertificate>| {
        if seen.insert(c.set.atoms().clone()) {
            found.push(c);
        }
    };
    push(invariant_closure(alg, &alg.empty(r), max_steps)?, &mut found);
    for t in alg.atoms(r)?.iter() {
        let single = SymbolicSet::new(alg.side(), r, [t.clone()].into_iter().collect());
        push(invariant_closure(alg, &single, max_steps)?, &mut found);
    }
    let mut i = 0;
    while i < found.len() {
        for j in 0..i {
            let union: BTreeSet<Atom> = found[i].set.atoms().union(found[j].set.atoms()).cloned().collect();
            let u = SymbolicSet::new(alg.side(), r, union);
            if !found.iter().any(|c| c.set == u) {
                push(invariant_closure(alg, &u, max_steps)?, &mut found);
            }
        }
        i += 1;
    }
    found.sort_by_key(|c| (c.set.len(), c.set.atoms().clone()));
    let n = found.len();
    let sub = |i: usize, j: usize| i != j && found[i].set.atoms().is_subset(found[j].set.atoms());
    let mut covers = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if sub(i, j) && !(0..n).any(|m| sub(i, m) && sub(m, j)) {
                covers.push((i, j));
            }
        }
    }
    Ok(IdealLattice { resolution: r, sets: found, covers })
}

impl IdealLattice {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Whether `sets[i] ⊆ sets[j]`.
    pub fn includes(&self, i: usize, j: usize) -> bool {
        self.sets[i].set.atoms().is_subset(self.sets[j].set.atoms())
    }

    pub fn to_dot(&self, names: &[char]) -> String {
        let mut out = String::from("digraph ideals {\n  rankdir=BT;\n");
        for (i, c) in self.sets.iter().enumerate() {
            let label = if c.set.is_empty() { "∅".to_string() } else { format!("{} atoms", c.set.len()) };
            out.push_str(&format!("  y{i} [label=\"{label}\" tooltip=\"{}\"];\n", c.set.render(names).replace('"', "'")));
        }
        for (i, j) in &self.covers {
            out.push_str(&format!("  y{i} -> y{j};\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// Inclusion pattern of a lattice, for comparing lattices at two resolutions.
fn shape(l: &IdealLattice) -> Vec<Vec<bool>> {
    (0..l.len()).map(|i| (0..l.len()).map(|j| l.includes(i, j)).collect()).collect()
}

/// Enumerate the lattice at `r`, compare it with the lattice at
/// `(k + 1, l + 1)`, and check order preservation and the round trip
/// `Y ↦ ideal ↦ Y` at atom level.
pub fn check_ideal_lattice(alg: &Algebra, r: Resolution, max_steps: usize, floor: f64) -> Result<(Report, IdealLattice), ShiftError> {
    let mut b = ReportBuilder::new("ideals");
    b.param("resolution", json!([r.k, r.l])).param("hull_steps", max_steps);
    let lattice = invariant_admissible_sets(alg, r, max_steps)?;
    let names = alg.presentation().alphabet().names().to_vec();
    b.metric("count", lattice.len()).metric("atoms", alg.atoms(r)?.len());
    for (i, c) in lattice.sets.iter().enumerate() {
        let ctx = || format!("Y{i} = {}", c.set.render(&names));
        if c.stabilized {
            b.check("certificate", c.is_valid(), ctx);
            b.check("certificate-recheck", c.verify(alg)?, ctx);
        } else {
            b.skip("certificate");
            b.inconclusive(format!("hull of Y{i} did not stabilize in {} steps", c.hull_steps));
        }
    }
    let full = alg.full(r)?;
    b.check("contains-empty", lattice.sets.iter().any(|c| c.set.is_empty()), || "∅ missing".into());
    b.check("contains-full", lattice.sets.iter().any(|c| c.set == full), || "full set missing".into());

    // Ideal of Y at the finer resolution: atoms contained in the hull.
    let finer = Resolution::new(r.k + 1, r.l + 1);
    let mut families = Vec::new();
    for c in &lattice.sets {
        families.push(core_of_set(alg, &c.hull, finer)?);
    }
    for (i, c) in lattice.sets.iter().enumerate() {
        let back = core_of_set(alg, &families[i], r)?;
        b.check("round-trip", back == c.set, || format!("Y{i}: {} vs {}", back.render(&names), c.set.render(&names)));
        for j in 0..lattice.len() {
            if lattice.includes(i, j) {
                let nested = families[i].atoms().is_subset(families[j].atoms());
                b.check("order-preserving", nested, || format!("Y{i} ⊆ Y{j} but their ideals are not nested"));
            }
        }
    }

    let refined = invariant_admissible_sets(alg, finer, max_steps)?;
    b.metric("count_refined", refined.len());
    let stable = refined.len() == lattice.len() && shape(&refined) == shape(&lattice);
    b.check("stable-under-refinement", stable, || format!("{} sets at {r}, {} at {finer}", lattice.len(), refined.len()));
    // each refined set is the same invariant set seen at the finer resolution
    for (i, c) in refined.sets.iter().enumerate() {
        let coarse = core_of_set(alg, &c.set, r)?;
        let hit = lattice.sets.iter().any(|d| core_of_set(alg, &d.hull, r).map(|x| x == coarse).unwrap_or(false));
        b.check("refined-sets-match", hit, || format!("refined set {i} has no counterpart"));
    }
    Ok((b.finish(floor), lattice))
}

/// Set-level content of passing to the quotient by the ideal of `y`:
/// the restricted system on `X ∖ Y` has the Boolean algebra `{A ∧ ¬Y}`, and
/// `Y` is recovered from its ideal.
pub fn quotient_report(alg: &Algebra, y: &InvariantSetCertificate, radius: usize, floor: f64) -> Result<Report, ShiftError> {
    let mut b = ReportBuilder::new("quotient");
    let r = y.set.resolution();
    let names = alg.presentation().alphabet().names().to_vec();
    b.param("resolution", json!([r.k, r.l])).param("radius", radius);
    let rest = alg.complement(&y.set)?;
    b.metric("complement_atoms", rest.len());
    b.metric("complement", rest.render(&names));

    // Restrictions of domains: meets and complements relative to X ∖ Y.
    let group = crate::free_group::FreeGroup::new(alg.presentation().rank()).ball(radius);
    let doms: Vec<SymbolicSet> = group.iter().map(|g| alg.domain_set(g, r)).collect::<Result<_, _>>()?;
    for (i, a) in doms.iter().enumerate() {
        let ra = alg.meet(a, &rest)?;
        let rel_complement = alg.difference(&rest, &ra)?;
        let direct = alg.meet(&alg.complement(a)?, &rest)?;
        b.check("restricted-complement", alg.set_eq(&rel_complement, &direct)?, || format!("g={}", group[i].render(&names)));
        for (j, c) in doms.iter().enumerate() {
            let both = alg.meet(&ra, &alg.meet(c, &rest)?)?;
            let direct = alg.meet(&alg.meet(a, c)?, &rest)?;
            b.check("restricted-meet", alg.set_eq(&both, &direct)?, || {
                format!("g={} h={}", group[i].render(&names), group[j].render(&names))
            });
        }
    }
    // Each atom is in Y exactly when it lies in the union of the ideal's atoms.
    let atoms = alg.atoms(r)?;
    for t in atoms.iter() {
        let single = SymbolicSet::new(alg.side(), r, [t.clone()].into_iter().collect());
        let in_family = alg.is_subset(&single, &y.hull)?;
        b.check("atom-membership", in_family == y.set.atoms().contains(t), || t.render(&names, alg.side()));
    }
    if y.set.is_empty() {
        b.check("empty-quotient-is-original", rest.len() == atoms.len(), || "complement of ∅ is not everything".into());
    }
    if y.set.len() == atoms.len() {
        b.check("full-quotient-is-empty", rest.is_empty(), || "complement of the full set is nonempty".into());
    }
    Ok(b.finish(floor))
}

/// Whether two points agree to `depth`.
pub(crate) fn same_point(x: &Point, y: &Point, depth: usize) -> bool {
    point_equal(x, y, depth) != PointEquality::Distinct
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift_space::{Alphabet, ShiftPresentation};

    const A: Symbol = 0;
    const B: Symbol = 1;

    fn alg(p: ShiftPresentation) -> Algebra {
        Algebra::from_presentation(p).unwrap()
    }

    #[test]
    fn core_examples() {
        let g = alg(ShiftPresentation::golden_mean(Side::OneSided));
        let r = Resolution::new(2, 2);
        let full = g.full(r).unwrap();
        assert_eq!(admissible_core(&g, &Region::Set(full.clone()), r).unwrap(), full);
        let d = g.domain_set(&ReducedWord::generator(A), r).unwrap();
        assert_eq!(admissible_core(&g, &Region::Set(d.clone()), r).unwrap(), d);
        // a single point of an irreducible shift contains no atom
        let x = Point::eventually_periodic(vec![], vec![A, B]).unwrap();
        for r in [Resolution::new(0, 0), Resolution::new(2, 1), Resolution::new(3, 3)] {
            assert!(admissible_core(&g, &Region::Points(vec![x.clone()]), r).unwrap().is_empty());
        }
    }

    #[test]
    fn isolated_points_form_atoms() {
        // upper triangular: b^∞ is the only point with prefix bb
        let u = alg(ShiftPresentation::upper_triangular(Side::OneSided));
        let r = Resolution::new(2, 0);
        let y = Region::Points(vec![Point::eventually_periodic(vec![], vec![B]).unwrap()]);
        let core = admissible_core(&u, &y, r).unwrap();
        assert_eq!(core.len(), 1);
        assert_eq!(core.atoms().iter().next().unwrap().prefix, vec![B, B]);
    }

    #[test]
    fn upper_triangular_has_three() {
        let u = alg(ShiftPresentation::upper_triangular(Side::OneSided));
        let lattice = invariant_admissible_sets(&u, Resolution::new(3, 3), HULL_STEPS).unwrap();
        assert_eq!(lattice.len(), 3);
        assert!(lattice.sets.iter().all(|c| c.is_valid()));
        // the middle set is everything except the atom of a^∞
        let middle = &lattice.sets[1].set;
        let a_inf = Point::eventually_periodic(vec![], vec![A]).unwrap();
        assert!(!u.contains(middle, &a_inf).unwrap());
        assert!(!u.contains(middle, &Point::eventually_periodic(vec![A, A, A, A], vec![B]).unwrap()).unwrap());
        assert!(u.contains(middle, &Point::eventually_periodic(vec![A, A], vec![B]).unwrap()).unwrap());
        assert_eq!(lattice.covers, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn full_shift_has_two() {
        let f = alg(ShiftPresentation::full_shift(Alphabet::ab(), Side::OneSided));
        let lattice = invariant_admissible_sets(&f, Resolution::new(2, 2), HULL_STEPS).unwrap();
        assert_eq!(lattice.len(), 2);
    }

    #[test]
    fn quotient_examples() {
        let u = alg(ShiftPresentation::upper_triangular(Side::OneSided));
        let lattice = invariant_admissible_sets(&u, Resolution::new(2, 2), HULL_STEPS).unwrap();
        for c in &lattice.sets {
            let r = quotient_report(&u, c, 1, 1.0).unwrap();
            assert!(r.passed(), "{:?}", r.counterexamples);
        }
        // removing the points containing b leaves only the atom of a^∞
        let r = quotient_report(&u, &lattice.sets[1], 1, 1.0).unwrap();
        assert_eq!(r.metrics["complement_atoms"], 1);
    }
}
