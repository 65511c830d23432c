//! The Boolean algebra generated by the domains of the partial action.
//!
//! One-sided elements are unions of atoms `(w, P)` at a resolution `(k, l)`:
//! the points with prefix `w` whose tail after `w` has predecessor set
//! `P = 𝒫_l`. Two-sided elements are unions of cylinders
//! `z_{[-l,0[} = u, z_{[0,k[} = w`, stored as atoms with `P = {u}`.
//!
//! The one-sided engine assumes every point has a preimage under the shift
//! (every word of the language is left-extendable); construction rejects
//! presentations without this property.

mod expr;
mod modsat;
mod stone;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::Serialize;

pub use expr::BoolExpr;
pub use modsat::{modsat_boolean, modsat_matrix, IntMatrix, Ring};
pub use stone::StoneDual;

use crate::free_group::{Letter, ReducedWord, Symbol, Word};
use crate::partial_action::PartialAction;
use crate::shift_space::{Point, PresentationKind, ShiftError, ShiftPresentation, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Resolution {
    pub k: usize,
    pub l: usize,
}

impl Resolution {
    pub fn new(k: usize, l: usize) -> Self {
        Resolution { k, l }
    }

    /// `self ⪯ other`. One-sided: `k₁ ≤ k₂` and `l₁ - k₁ ≤ l₂ - k₂`;
    /// two-sided: componentwise.
    pub fn precedes(self, other: Resolution, side: Side) -> bool {
        match side {
            Side::OneSided => self.k <= other.k && self.l as i64 - self.k as i64 <= other.l as i64 - other.k as i64,
            Side::TwoSided => self.k <= other.k && self.l <= other.l,
        }
    }

    /// Least common refinement.
    pub fn join(self, other: Resolution, side: Side) -> Resolution {
        let k = self.k.max(other.k);
        match side {
            Side::OneSided => {
                let d = (self.l as i64 - self.k as i64).max(other.l as i64 - other.k as i64);
                Resolution { k, l: (k as i64 + d) as usize }
            }
            Side::TwoSided => Resolution { k, l: self.l.max(other.l) },
        }
    }
}

impl fmt::Display for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.k, self.l)
    }
}

/// An atom: a prefix and a predecessor set (a single left word for two-sided cylinders).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Atom {
    pub prefix: Word,
    pub preds: BTreeSet<Word>,
}

impl Atom {
    pub fn new(prefix: Word, preds: BTreeSet<Word>) -> Self {
        Atom { prefix, preds }
    }

    /// Two-sided cylinder `z_{[-|left|,0[} = left`, `z_{[0,|right|[} = right`.
    pub fn cylinder(left: Word, right: Word) -> Self {
        Atom { prefix: right, preds: [left].into_iter().collect() }
    }

    /// The left word of a two-sided cylinder.
    pub fn left(&self) -> &[Symbol] {
        self.preds.iter().next().map(|w| w.as_slice()).unwrap_or(&[])
    }

    pub fn render(&self, names: &[char], side: Side) -> String {
        let n = |w: &[Symbol]| {
            if w.is_empty() {
                "ε".to_string()
            } else {
                w.iter().map(|&s| names.get(s as usize).copied().unwrap_or('?')).collect()
            }
        };
        match side {
            Side::OneSided => {
                let p: Vec<String> = self.preds.iter().map(|w| n(w)).collect();
                format!("({},{{{}}})", n(&self.prefix), p.join(","))
            }
            Side::TwoSided => format!("[{}.{}]", n(self.left()), n(&self.prefix)),
        }
    }
}

/// An element of the Boolean algebra: a set of atoms at one resolution.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SymbolicSet {
    side: Side,
    resolution: Resolution,
    atoms: BTreeSet<Atom>,
}

impl SymbolicSet {
    pub fn new(side: Side, resolution: Resolution, atoms: BTreeSet<Atom>) -> Self {
        SymbolicSet { side, resolution, atoms }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn resolution(&self) -> Resolution {
        self.resolution
    }

    pub fn atoms(&self) -> &BTreeSet<Atom> {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn render(&self, names: &[char]) -> String {
        let parts: Vec<String> = self.atoms.iter().map(|a| a.render(names, self.side)).collect();
        format!("{}{{{}}}", self.resolution, parts.join(" "))
    }
}

type AtomCache = Mutex<HashMap<Resolution, Result<Arc<BTreeSet<Atom>>, ShiftError>>>;

/// Atom engine for one partial action.
#[derive(Debug)]
pub struct Algebra {
    action: PartialAction,
    atoms: AtomCache,
}

fn suffixes(words: &BTreeSet<Word>, n: usize) -> BTreeSet<Word> {
    words.iter().filter(|w| w.len() >= n).map(|w| w[w.len() - n..].to_vec()).collect()
}

impl Algebra {
    pub fn new(action: PartialAction) -> Result<Self, ShiftError> {
        if action.side() == Side::OneSided && !action.presentation().is_left_extendable()? {
            return Err(ShiftError::Unsupported(
                "the one-sided atom engine needs a surjective shift (a word without left extension exists)".into(),
            ));
        }
        Ok(Algebra { action, atoms: Mutex::new(HashMap::new()) })
    }

    pub fn from_presentation(pres: ShiftPresentation) -> Result<Self, ShiftError> {
        Self::new(PartialAction::new(Arc::new(pres)))
    }

    pub fn action(&self) -> &PartialAction {
        &self.action
    }

    pub fn presentation(&self) -> &ShiftPresentation {
        self.action.presentation()
    }

    pub fn side(&self) -> Side {
        self.action.side()
    }

    /// False when atoms are computed from finite windows (substitution shifts).
    pub fn is_exact(&self) -> bool {
        !matches!(self.presentation().kind(), PresentationKind::Substitution(_))
    }

    fn compute_atoms(&self, r: Resolution) -> Result<BTreeSet<Atom>, ShiftError> {
        let pres = self.presentation();
        if self.side() == Side::TwoSided {
            return Ok(pres
                .factors(r.k + r.l)?
                .iter()
                .map(|v| Atom::cylinder(v[..r.l].to_vec(), v[r.l..].to_vec()))
                .collect());
        }
        match pres.kind() {
            PresentationKind::FinitePointSet(points) => {
                let mut out = BTreeSet::new();
                for v in points {
                    for i in 0..v.len() {
                        let mut rot = v.clone();
                        rot.rotate_left(i);
                        let x = Point::eventually_periodic(Vec::new(), rot)?;
                        out.insert(self.atom_of(&x, r)?);
                    }
                }
                Ok(out)
            }
            _ => {
                let margin = pres.memory().unwrap_or_else(|| pres.pred_window());
                let mut memo: HashMap<Word, BTreeSet<Word>> = HashMap::new();
                let mut out = BTreeSet::new();
                for v in pres.factors(r.k + margin)?.iter() {
                    let tail = v[r.k..].to_vec();
                    let preds = match memo.get(&tail) {
                        Some(p) => p.clone(),
                        None => {
                            let p = pres.predecessors_of_word(r.l, &tail)?.words;
                            memo.insert(tail, p.clone());
                            p
                        }
                    };
                    out.insert(Atom::new(v[..r.k].to_vec(), preds));
                }
                Ok(out)
            }
        }
    }

    /// All atoms at resolution `r`.
    pub fn atoms(&self, r: Resolution) -> Result<Arc<BTreeSet<Atom>>, ShiftError> {
        if let Some(hit) = self.atoms.lock().expect("atom cache poisoned").get(&r) {
            return hit.clone();
        }
        let computed = self.compute_atoms(r).map(Arc::new);
        self.atoms.lock().expect("atom cache poisoned").entry(r).or_insert(computed).clone()
    }

    /// The atom containing `x`.
    pub fn atom_of(&self, x: &Point, r: Resolution) -> Result<Atom, ShiftError> {
        match self.side() {
            Side::OneSided => {
                let prefix = x.window(0, r.k as i64)?;
                let preds = self.presentation().predecessors(r.l, &x.drop(r.k))?.words;
                Ok(Atom::new(prefix, preds))
            }
            Side::TwoSided => Ok(Atom::cylinder(x.window(-(r.l as i64), 0)?, x.window(0, r.k as i64)?)),
        }
    }

    pub fn contains(&self, a: &SymbolicSet, x: &Point) -> Result<bool, ShiftError> {
        Ok(a.atoms.contains(&self.atom_of(x, a.resolution)?))
    }

    pub fn full(&self, r: Resolution) -> Result<SymbolicSet, ShiftError> {
        Ok(SymbolicSet::new(self.side(), r, (*self.atoms(r)?).clone()))
    }

    pub fn empty(&self, r: Resolution) -> SymbolicSet {
        SymbolicSet::new(self.side(), r, BTreeSet::new())
    }

    /// Image of an atom at `from` in the coarser resolution `to`.
    pub fn coarsen_atom(&self, atom: &Atom, from: Resolution, to: Resolution) -> Result<Atom, ShiftError> {
        if !to.precedes(from, self.side()) {
            return Err(ShiftError::NotRefinement(from.k, from.l, to.k, to.l));
        }
        let prefix = atom.prefix[..to.k].to_vec();
        match self.side() {
            Side::TwoSided => {
                let left = atom.left();
                Ok(Atom::cylinder(left[left.len() - to.l..].to_vec(), prefix))
            }
            Side::OneSided => {
                // μ·σ^k x ∈ X iff μ·w_{[k,k')} is a suffix of some predecessor of σ^{k'} x
                let middle = &atom.prefix[to.k..from.k];
                let tails = suffixes(&atom.preds, to.l + middle.len());
                let preds = self
                    .presentation()
                    .factors(to.l)?
                    .iter()
                    .filter(|mu| {
                        let mut v = (*mu).clone();
                        v.extend_from_slice(middle);
                        tails.contains(&v)
                    })
                    .cloned()
                    .collect();
                Ok(Atom::new(prefix, preds))
            }
        }
    }

    /// The same set expressed at resolution `to`.
    ///
    /// When `to` is not `⪯`-above the set's resolution, the set is refined to
    /// the join and accepted only if it is a union of fibres over `to`.
    pub fn refine(&self, a: &SymbolicSet, to: Resolution) -> Result<SymbolicSet, ShiftError> {
        if a.resolution == to {
            return Ok(a.clone());
        }
        if !a.resolution.precedes(to, self.side()) {
            let joint = a.resolution.join(to, self.side());
            let fine = self.refine(a, joint)?;
            let mut inside = BTreeSet::new();
            let mut outside = BTreeSet::new();
            for t in self.atoms(joint)?.iter() {
                let c = self.coarsen_atom(t, joint, to)?;
                if fine.atoms.contains(t) {
                    inside.insert(c);
                } else {
                    outside.insert(c);
                }
            }
            if !inside.is_disjoint(&outside) {
                return Err(ShiftError::NotRefinement(to.k, to.l, a.resolution.k, a.resolution.l));
            }
            return Ok(SymbolicSet::new(self.side(), to, inside));
        }
        let mut atoms = BTreeSet::new();
        for t in self.atoms(to)?.iter() {
            if a.atoms.contains(&self.coarsen_atom(t, to, a.resolution)?) {
                atoms.insert(t.clone());
            }
        }
        Ok(SymbolicSet::new(self.side(), to, atoms))
    }

    fn common(&self, a: &SymbolicSet, b: &SymbolicSet) -> Result<(SymbolicSet, SymbolicSet), ShiftError> {
        if a.side != b.side {
            return Err(ShiftError::Invalid("sets of different sides".into()));
        }
        let r = a.resolution.join(b.resolution, self.side());
        Ok((self.refine(a, r)?, self.refine(b, r)?))
    }

    pub fn meet(&self, a: &SymbolicSet, b: &SymbolicSet) -> Result<SymbolicSet, ShiftError> {
        let (a, b) = self.common(a, b)?;
        Ok(SymbolicSet::new(a.side, a.resolution, a.atoms.intersection(&b.atoms).cloned().collect()))
    }

    pub fn join(&self, a: &SymbolicSet, b: &SymbolicSet) -> Result<SymbolicSet, ShiftError> {
        let (a, b) = self.common(a, b)?;
        Ok(SymbolicSet::new(a.side, a.resolution, a.atoms.union(&b.atoms).cloned().collect()))
    }

    pub fn difference(&self, a: &SymbolicSet, b: &SymbolicSet) -> Result<SymbolicSet, ShiftError> {
        let (a, b) = self.common(a, b)?;
        Ok(SymbolicSet::new(a.side, a.resolution, a.atoms.difference(&b.atoms).cloned().collect()))
    }

    pub fn complement(&self, a: &SymbolicSet) -> Result<SymbolicSet, ShiftError> {
        let all = self.atoms(a.resolution)?;
        Ok(SymbolicSet::new(a.side, a.resolution, all.difference(&a.atoms).cloned().collect()))
    }

    /// Equality as sets of points.
    pub fn set_eq(&self, a: &SymbolicSet, b: &SymbolicSet) -> Result<bool, ShiftError> {
        let (a, b) = self.common(a, b)?;
        Ok(a.atoms == b.atoms)
    }

    pub fn is_subset(&self, a: &SymbolicSet, b: &SymbolicSet) -> Result<bool, ShiftError> {
        let (a, b) = self.common(a, b)?;
        Ok(a.atoms.is_subset(&b.atoms))
    }

    /// Smallest resolution carrying `D_g`, or `None` when `D_g` is empty by shape.
    pub fn domain_resolution(&self, g: &ReducedWord) -> Option<Resolution> {
        match self.side() {
            Side::OneSided => g.one_sided_normal_form().map(|(p, q)| Resolution::new(p.len(), q.len())),
            Side::TwoSided => {
                if let Some(w) = g.positive_word() {
                    Some(Resolution::new(w.len(), 0))
                } else {
                    g.negative_word().map(|w| Resolution::new(0, w.len()))
                }
            }
        }
    }

    /// `D_g`, at the join of `r` and the resolution `D_g` needs.
    pub fn domain_set(&self, g: &ReducedWord, r: Resolution) -> Result<SymbolicSet, ShiftError> {
        let Some(native) = self.domain_resolution(g) else { return Ok(self.empty(r)) };
        let atoms = self.atoms(native)?;
        let set: BTreeSet<Atom> = match self.side() {
            Side::OneSided => {
                let (p, q) = g.one_sided_normal_form().expect("resolution exists");
                atoms.iter().filter(|t| t.prefix == p && t.preds.contains(&q)).cloned().collect()
            }
            Side::TwoSided => match g.positive_word() {
                Some(w) => atoms.iter().filter(|t| t.prefix == w).cloned().collect(),
                None => {
                    let w = g.negative_word().expect("shape checked");
                    atoms.iter().filter(|t| t.left() == w.as_slice()).cloned().collect()
                }
            },
        };
        self.refine(&SymbolicSet::new(self.side(), native, set), r.join(native, self.side()))
    }

    /// `𝒞(μ, ν) = θ_ν(D_{μ⁻¹})`, read directly off atoms at `(|ν|, |μ|)`.
    pub fn cylinder(&self, mu: &[Symbol], nu: &[Symbol], r: Resolution) -> Result<SymbolicSet, ShiftError> {
        if self.side() != Side::OneSided {
            return Err(ShiftError::Unsupported("cylinders 𝒞(μ,ν) are one-sided".into()));
        }
        let native = Resolution::new(nu.len(), mu.len());
        let set = self
            .atoms(native)?
            .iter()
            .filter(|t| t.prefix == nu && t.preds.contains(mu))
            .cloned()
            .collect();
        self.refine(&SymbolicSet::new(self.side(), native, set), r.join(native, self.side()))
    }

    fn act_letter(&self, letter: Letter, a: &SymbolicSet) -> Result<SymbolicSet, ShiftError> {
        let Resolution { k, l } = a.resolution;
        let sym = letter.symbol;
        match (self.side(), letter.inverse) {
            (Side::OneSided, false) => {
                // x ↦ a·x on D_{a⁻¹}; a·x ∈ X is read off 𝒫_l once l > k
                let fine = self.refine(a, Resolution::new(k, l.max(k + 1)))?;
                let r = fine.resolution;
                let atoms = fine
                    .atoms
                    .iter()
                    .filter(|t| {
                        let mut aw = vec![sym];
                        aw.extend_from_slice(&t.prefix);
                        suffixes(&t.preds, k + 1).contains(&aw)
                    })
                    .map(|t| {
                        let mut aw = vec![sym];
                        aw.extend_from_slice(&t.prefix);
                        Atom::new(aw, t.preds.clone())
                    })
                    .collect();
                Ok(SymbolicSet::new(self.side(), Resolution::new(k + 1, r.l), atoms))
            }
            (Side::OneSided, true) => {
                // x ↦ σx on D_a
                let k1 = k.max(1);
                let l1 = (l + k1 - k).max(k1);
                let fine = self.refine(a, Resolution::new(k1, l1))?;
                let atoms = fine
                    .atoms
                    .iter()
                    .filter(|t| t.prefix[0] == sym)
                    .map(|t| Atom::new(t.prefix[1..].to_vec(), t.preds.clone()))
                    .collect();
                Ok(SymbolicSet::new(self.side(), Resolution::new(k1 - 1, l1), atoms))
            }
            (Side::TwoSided, false) => {
                // τ⁻¹ on {z_{-1} = a}
                let fine = self.refine(a, Resolution::new(k, l.max(1)))?;
                let l1 = fine.resolution.l;
                let atoms = fine
                    .atoms
                    .iter()
                    .filter(|t| t.left().last() == Some(&sym))
                    .map(|t| {
                        let left = t.left();
                        let mut right = vec![sym];
                        right.extend_from_slice(&t.prefix);
                        Atom::cylinder(left[..left.len() - 1].to_vec(), right)
                    })
                    .collect();
                Ok(SymbolicSet::new(self.side(), Resolution::new(k + 1, l1 - 1), atoms))
            }
            (Side::TwoSided, true) => {
                // τ on {z_0 = a}
                let fine = self.refine(a, Resolution::new(k.max(1), l))?;
                let k1 = fine.resolution.k;
                let atoms = fine
                    .atoms
                    .iter()
                    .filter(|t| t.prefix[0] == sym)
                    .map(|t| {
                        let mut left = t.left().to_vec();
                        left.push(sym);
                        Atom::cylinder(left, t.prefix[1..].to_vec())
                    })
                    .collect();
                Ok(SymbolicSet::new(self.side(), Resolution::new(k1 - 1, l + 1), atoms))
            }
        }
    }

    /// `θ_g(A)`, composed letter by letter from the right.
    pub fn act(&self, g: &ReducedWord, a: &SymbolicSet) -> Result<SymbolicSet, ShiftError> {
        let mut cur = a.clone();
        for &letter in g.letters().iter().rev() {
            cur = self.act_letter(letter, &cur)?;
        }
        Ok(cur)
    }

    /// Evaluate a Boolean expression over domains at (at least) resolution `r`.
    pub fn eval(&self, e: &BoolExpr, r: Resolution) -> Result<SymbolicSet, ShiftError> {
        Ok(match e {
            BoolExpr::Full => self.full(r)?,
            BoolExpr::Empty => self.empty(r),
            BoolExpr::Domain(g) => self.domain_set(g, r)?,
            BoolExpr::Cylinder(mu, nu) => self.cylinder(mu, nu, r)?,
            BoolExpr::And(x, y) => self.meet(&self.eval(x, r)?, &self.eval(y, r)?)?,
            BoolExpr::Or(x, y) => self.join(&self.eval(x, r)?, &self.eval(y, r)?)?,
            BoolExpr::Not(x) => self.complement(&self.eval(x, r)?)?,
        })
    }

    /// Sets built from arbitrary atoms at `r` for sampling, using `pick` to choose membership.
    pub fn subset_of_atoms(&self, r: Resolution, mut pick: impl FnMut(&Atom) -> bool) -> Result<SymbolicSet, ShiftError> {
        let atoms = self.atoms(r)?.iter().filter(|t| pick(t)).cloned().collect();
        Ok(SymbolicSet::new(self.side(), r, atoms))
    }

    /// Test fixture: the algebra of an owned presentation.
    pub fn shared(pres: Arc<ShiftPresentation>) -> Result<Self, ShiftError> {
        Self::new(PartialAction::new(pres))
    }
}
