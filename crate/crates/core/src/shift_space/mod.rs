//! Shift spaces over finite alphabets and their language oracles.
//!
//! Supported presentations: the full shift, transition-matrix and
//! forbidden-word shifts of finite type, primitive substitution shifts and
//! finite sets of periodic points. One-sided presentations describe `X⁺`,
//! two-sided ones `X`.

mod point;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use point::{point_equal, FixedPoint, Point, PointEquality, Tail, TailBody};

use crate::free_group::{Symbol, Word};
use crate::truth::Tri;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShiftError {
    #[error("invalid presentation: {0}")]
    Invalid(String),
    #[error("substitution scan did not saturate within {depth} iterations")]
    Inconclusive { depth: usize },
    #[error("index {0} outside a one-sided point")]
    IndexOutOfRange(i64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("resolution ({0}, {1}) does not refine ({2}, {3})")]
    NotRefinement(usize, usize, usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    OneSided,
    TwoSided,
}

/// Symbol names; symbol `i` is rendered as `names[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<char>,
}

impl Alphabet {
    pub fn new(names: Vec<char>) -> Result<Self, ShiftError> {
        if names.is_empty() {
            return Err(ShiftError::Invalid("empty alphabet".into()));
        }
        let distinct: HashSet<_> = names.iter().collect();
        if distinct.len() != names.len() || names.len() > Symbol::MAX as usize {
            return Err(ShiftError::Invalid("alphabet symbols must be distinct".into()));
        }
        Ok(Alphabet { names })
    }

    pub fn ab() -> Self {
        Alphabet { names: vec!['a', 'b'] }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[char] {
        &self.names
    }

    pub fn parse_word(&self, text: &str) -> Result<Word, ShiftError> {
        text.chars()
            .map(|c| {
                self.names
                    .iter()
                    .position(|&n| n == c)
                    .map(|i| i as Symbol)
                    .ok_or_else(|| ShiftError::Invalid(format!("symbol {c:?} not in alphabet")))
            })
            .collect()
    }

    pub fn render(&self, w: &[Symbol]) -> String {
        if w.is_empty() {
            return "ε".into();
        }
        w.iter().map(|&s| self.names.get(s as usize).copied().unwrap_or('?')).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PresentationKind {
    FullShift,
    MatrixSft(Vec<Vec<u8>>),
    ForbiddenWords(Vec<Word>),
    /// Image of each symbol.
    Substitution(Vec<Word>),
    /// Periodic points, each given by one period; closed under rotation.
    FinitePointSet(Vec<Word>),
}

/// Shift of finite type as a graph on `s`-blocks.
#[derive(Debug)]
struct BlockGraph {
    s: usize,
    forbidden: Vec<Word>,
    forward_live: HashSet<Word>,
    backward_live: HashSet<Word>,
}

impl BlockGraph {
    fn new(rank: usize, forbidden: Vec<Word>) -> Self {
        let s = forbidden.iter().map(|f| f.len()).max().unwrap_or(2).saturating_sub(1).max(1);
        let mut g = BlockGraph { s, forbidden, forward_live: HashSet::new(), backward_live: HashSet::new() };
        let mut states: Vec<Word> = vec![Vec::new()];
        for _ in 0..s {
            states = states
                .into_iter()
                .flat_map(|w| {
                    (0..rank).map(move |c| {
                        let mut v = w.clone();
                        v.push(c as Symbol);
                        v
                    })
                })
                .filter(|w| g.avoids(w))
                .collect();
        }
        let mut fwd: HashSet<Word> = states.iter().cloned().collect();
        loop {
            let keep: HashSet<Word> = fwd
                .iter()
                .filter(|u| {
                    (0..rank).any(|c| {
                        let mut ext = (*u).clone();
                        ext.push(c as Symbol);
                        g.avoids(&ext) && fwd.contains(&ext[1..])
                    })
                })
                .cloned()
                .collect();
            if keep.len() == fwd.len() {
                break;
            }
            fwd = keep;
        }
        let mut bwd: HashSet<Word> = states.into_iter().collect();
        loop {
            let keep: HashSet<Word> = bwd
                .iter()
                .filter(|u| {
                    (0..rank).any(|c| {
                        let mut ext = vec![c as Symbol];
                        ext.extend_from_slice(u);
                        g.avoids(&ext) && bwd.contains(&ext[..ext.len() - 1])
                    })
                })
                .cloned()
                .collect();
            if keep.len() == bwd.len() {
                break;
            }
            bwd = keep;
        }
        g.forward_live = fwd;
        g.backward_live = bwd;
        g
    }

    fn avoids(&self, w: &[Symbol]) -> bool {
        self.forbidden.iter().all(|f| f.len() > w.len() || !w.windows(f.len()).any(|x| x == f.as_slice()))
    }

    fn is_factor(&self, w: &[Symbol], side: Side) -> bool {
        if !self.avoids(w) {
            return false;
        }
        let s = self.s;
        if w.len() >= s {
            let fwd = self.forward_live.contains(&w[w.len() - s..]);
            match side {
                Side::OneSided => fwd,
                Side::TwoSided => fwd && self.backward_live.contains(&w[..s]),
            }
        } else {
            self.forward_live
                .iter()
                .any(|t| t.starts_with(w) && (side == Side::OneSided || self.backward_live.contains(t)))
        }
    }
}

type FactorCache = Mutex<HashMap<usize, Result<Arc<BTreeSet<Word>>, ShiftError>>>;

/// A finite-alphabet shift space with a memoized language oracle.
#[derive(Debug)]
pub struct ShiftPresentation {
    alphabet: Alphabet,
    kind: PresentationKind,
    side: Side,
    graph: Option<BlockGraph>,
    max_iterations: usize,
    max_length: usize,
    pred_window: usize,
    factors: FactorCache,
    two_factors: Mutex<Option<BTreeSet<Word>>>,
}

/// The length-`l` words `μ` with `μx` in the shift space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PredecessorSet {
    pub length: usize,
    pub words: BTreeSet<Word>,
    /// False when computed from a finite window (an over-approximation).
    pub exact: bool,
}

impl ShiftPresentation {
    pub fn new(alphabet: Alphabet, kind: PresentationKind, side: Side) -> Result<Self, ShiftError> {
        let rank = alphabet.len();
        let in_range = |w: &Word| w.iter().all(|&s| (s as usize) < rank);
        let graph = match &kind {
            PresentationKind::FullShift => Some(BlockGraph::new(rank, Vec::new())),
            PresentationKind::MatrixSft(m) => {
                if m.len() != rank || m.iter().any(|r| r.len() != rank) {
                    return Err(ShiftError::Invalid("matrix must be square of alphabet size".into()));
                }
                if m.iter().flatten().any(|&e| e > 1) {
                    return Err(ShiftError::Invalid("matrix entries must be 0 or 1".into()));
                }
                if m.iter().any(|r| r.iter().all(|&e| e == 0)) {
                    return Err(ShiftError::Invalid("matrix has a zero row".into()));
                }
                let forbidden = (0..rank)
                    .flat_map(|i| (0..rank).map(move |j| (i, j)))
                    .filter(|&(i, j)| m[i][j] == 0)
                    .map(|(i, j)| vec![i as Symbol, j as Symbol])
                    .collect();
                Some(BlockGraph::new(rank, forbidden))
            }
            PresentationKind::ForbiddenWords(f) => {
                if f.iter().any(|w| w.is_empty() || !in_range(w)) {
                    return Err(ShiftError::Invalid("forbidden words must be nonempty over the alphabet".into()));
                }
                let g = BlockGraph::new(rank, f.clone());
                if g.forward_live.is_empty() {
                    return Err(ShiftError::Invalid("forbidden words leave an empty shift space".into()));
                }
                Some(g)
            }
            PresentationKind::Substitution(images) => {
                if images.len() != rank || images.iter().any(|w| w.is_empty() || !in_range(w)) {
                    return Err(ShiftError::Invalid("every symbol needs a nonempty image over the alphabet".into()));
                }
                if images.iter().all(|w| w.len() == 1) {
                    return Err(ShiftError::Invalid("substitution must be growing".into()));
                }
                None
            }
            PresentationKind::FinitePointSet(points) => {
                if points.is_empty() || points.iter().any(|w| w.is_empty() || !in_range(w)) {
                    return Err(ShiftError::Invalid("point set needs nonempty periods over the alphabet".into()));
                }
                None
            }
        };
        Ok(ShiftPresentation {
            alphabet,
            kind,
            side,
            graph,
            max_iterations: 64,
            max_length: 1 << 22,
            pred_window: 48,
            factors: Mutex::new(HashMap::new()),
            two_factors: Mutex::new(None),
        })
    }

    pub fn full_shift(alphabet: Alphabet, side: Side) -> Self {
        Self::new(alphabet, PresentationKind::FullShift, side).expect("full shift is valid")
    }

    pub fn matrix(alphabet: Alphabet, rows: Vec<Vec<u8>>, side: Side) -> Result<Self, ShiftError> {
        Self::new(alphabet, PresentationKind::MatrixSft(rows), side)
    }

    pub fn substitution(alphabet: Alphabet, images: Vec<Word>, side: Side) -> Result<Self, ShiftError> {
        Self::new(alphabet, PresentationKind::Substitution(images), side)
    }

    /// Golden-mean shift on `{a, b}`: `bb` forbidden.
    pub fn golden_mean(side: Side) -> Self {
        Self::matrix(Alphabet::ab(), vec![vec![1, 1], vec![1, 0]], side).expect("valid")
    }

    /// Upper-triangular shift on `{a, b}`: `ba` forbidden.
    pub fn upper_triangular(side: Side) -> Self {
        Self::matrix(Alphabet::ab(), vec![vec![1, 1], vec![0, 1]], side).expect("valid")
    }

    /// Fibonacci substitution `a → ab`, `b → a`.
    pub fn fibonacci(side: Side) -> Self {
        Self::substitution(Alphabet::ab(), vec![vec![0, 1], vec![0]], side).expect("valid")
    }

    pub fn with_limits(mut self, max_iterations: usize, pred_window: usize) -> Self {
        self.max_iterations = max_iterations;
        self.pred_window = pred_window;
        self
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rank(&self) -> usize {
        self.alphabet.len()
    }

    pub fn kind(&self) -> &PresentationKind {
        &self.kind
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            PresentationKind::FullShift => "full",
            PresentationKind::MatrixSft(_) => "matrix",
            PresentationKind::ForbiddenWords(_) => "forbidden",
            PresentationKind::Substitution(_) => "substitution",
            PresentationKind::FinitePointSet(_) => "points",
        }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn pred_window(&self) -> usize {
        self.pred_window
    }

    /// True for full shifts and shifts of finite type.
    pub fn is_finite_type(&self) -> bool {
        self.graph.is_some()
    }

    pub fn matrix_entries(&self) -> Option<&[Vec<u8>]> {
        match &self.kind {
            PresentationKind::MatrixSft(m) => Some(m),
            _ => None,
        }
    }

    /// Memory of the finite-type presentation (length of the state blocks).
    pub fn memory(&self) -> Option<usize> {
        self.graph.as_ref().map(|g| g.s)
    }

    /// Whether every word of the language has a one-letter left extension.
    pub fn is_left_extendable(&self) -> Result<bool, ShiftError> {
        match &self.graph {
            Some(g) => {
                let ws = self.factors(g.s)?;
                Ok(ws.iter().all(|w| (0..self.rank()).any(|c| self.is_factor_sft(&[&[c as Symbol], w.as_slice()].concat()))))
            }
            None => Ok(true),
        }
    }

    fn is_factor_sft(&self, w: &[Symbol]) -> bool {
        self.graph.as_ref().expect("finite type").is_factor(w, self.side)
    }

    /// Whether the substitution is primitive (some power of its incidence matrix is positive).
    pub fn is_primitive(&self) -> Option<bool> {
        let PresentationKind::Substitution(images) = &self.kind else { return None };
        let n = self.rank();
        let mut m = vec![vec![false; n]; n];
        for (c, img) in images.iter().enumerate() {
            for &d in img {
                m[c][d as usize] = true;
            }
        }
        let mut p = m.clone();
        for _ in 0..(n - 1) * (n - 1) + 1 {
            if p.iter().flatten().all(|&e| e) {
                return Some(true);
            }
            let mut q = vec![vec![false; n]; n];
            for i in 0..n {
                for j in 0..n {
                    q[i][j] = (0..n).any(|k| p[i][k] && m[k][j]);
                }
            }
            p = q;
        }
        Some(false)
    }

    fn substitute(images: &[Word], w: &[Symbol]) -> Word {
        w.iter().flat_map(|&s| images[s as usize].iter().copied()).collect()
    }

    fn substitution_two_factors(&self, images: &[Word]) -> BTreeSet<Word> {
        let mut guard = self.two_factors.lock().expect("cache poisoned");
        if let Some(s) = guard.as_ref() {
            return s.clone();
        }
        let mut set: BTreeSet<Word> = BTreeSet::new();
        for img in images {
            set.extend(img.windows(2).map(|w| w.to_vec()));
        }
        loop {
            let mut next = set.clone();
            for cd in &set {
                next.extend(Self::substitute(images, cd).windows(2).map(|w| w.to_vec()));
            }
            if next.len() == set.len() {
                break;
            }
            set = next;
        }
        *guard = Some(set.clone());
        set
    }

    fn compute_factors(&self, n: usize) -> Result<BTreeSet<Word>, ShiftError> {
        if n == 0 {
            return Ok([Vec::new()].into_iter().collect());
        }
        match &self.kind {
            PresentationKind::Substitution(images) => {
                // Every n-factor sits inside σ^m(cd) for a 2-factor cd once all σ^m(c) have length ≥ n.
                let two = self.substitution_two_factors(images);
                let mut blocks: Vec<Word> = two.iter().cloned().collect();
                let mut letters: Vec<Word> = (0..self.rank()).map(|c| vec![c as Symbol]).collect();
                let mut m = 0;
                while letters.iter().map(|w| w.len()).min().unwrap_or(0) < n {
                    m += 1;
                    if m > self.max_iterations {
                        return Err(ShiftError::Inconclusive { depth: self.max_iterations });
                    }
                    letters = letters.iter().map(|w| Self::substitute(images, w)).collect();
                    blocks = blocks.iter().map(|w| Self::substitute(images, w)).collect();
                    if blocks.iter().any(|b| b.len() > self.max_length) {
                        return Err(ShiftError::Inconclusive { depth: m });
                    }
                }
                Ok(blocks.iter().flat_map(|b| b.windows(n).map(|w| w.to_vec())).collect())
            }
            PresentationKind::FinitePointSet(points) => Ok(points
                .iter()
                .flat_map(|v| {
                    let reps = n / v.len() + 2;
                    let long: Word = v.iter().copied().cycle().take(v.len() * reps).collect();
                    (0..v.len()).map(move |i| long[i..i + n].to_vec()).collect::<Vec<_>>()
                })
                .collect()),
            _ => {
                let prev = self.factors(n - 1)?;
                let mut out = BTreeSet::new();
                for w in prev.iter() {
                    for c in 0..self.rank() {
                        let mut v = w.clone();
                        v.push(c as Symbol);
                        if self.is_factor_sft(&v) {
                            out.insert(v);
                        }
                    }
                }
                Ok(out)
            }
        }
    }

    /// The length-`n` words of the language.
    pub fn factors(&self, n: usize) -> Result<Arc<BTreeSet<Word>>, ShiftError> {
        if let Some(hit) = self.factors.lock().expect("cache poisoned").get(&n) {
            return hit.clone();
        }
        let computed = self.compute_factors(n).map(Arc::new);
        self.factors.lock().expect("cache poisoned").entry(n).or_insert(computed).clone()
    }

    /// Language membership.
    pub fn is_factor(&self, w: &[Symbol]) -> Result<bool, ShiftError> {
        if w.iter().any(|&s| s as usize >= self.rank()) {
            return Ok(false);
        }
        if self.graph.is_some() {
            return Ok(self.is_factor_sft(w));
        }
        Ok(self.factors(w.len())?.contains(w))
    }

    /// `{μ : |μ| = l, μw ∈ ℒ}`: the word-level predecessor set.
    pub fn predecessors_of_word(&self, l: usize, w: &[Symbol]) -> Result<PredecessorSet, ShiftError> {
        let mut words = BTreeSet::new();
        for mu in self.factors(l)?.iter() {
            let mut v = mu.clone();
            v.extend_from_slice(w);
            if self.is_factor(&v)? {
                words.insert(mu.clone());
            }
        }
        Ok(PredecessorSet { length: l, words, exact: false })
    }

    /// `𝒫_l(x)` for a point `x` of the (one-sided) space.
    pub fn predecessors(&self, l: usize, x: &Point) -> Result<PredecessorSet, ShiftError> {
        match &self.kind {
            PresentationKind::Substitution(_) => {
                let w = x.right().window(0, self.pred_window);
                self.predecessors_of_word(l, &w)
            }
            PresentationKind::FinitePointSet(_) => {
                let mut words = BTreeSet::new();
                for mu in self.factors(l)?.iter() {
                    if self.contains_one_sided(&x.forward().prepend(mu))? == Tri::True {
                        words.insert(mu.clone());
                    }
                }
                Ok(PredecessorSet { length: l, words, exact: true })
            }
            _ => {
                let s = self.memory().expect("finite type");
                let mut set = self.predecessors_of_word(l, &x.right().window(0, s))?;
                set.exact = true;
                Ok(set)
            }
        }
    }

    fn periodic_cycle_points(&self) -> Vec<Word> {
        match &self.kind {
            PresentationKind::FinitePointSet(points) => points
                .iter()
                .flat_map(|v| {
                    (0..v.len()).map(move |i| {
                        let mut r = v.clone();
                        r.rotate_left(i);
                        r
                    })
                })
                .collect(),
            _ => Vec::new(),
        }
    }

    fn contains_one_sided(&self, x: &Point) -> Result<Tri, ShiftError> {
        let t = x.right();
        match (&self.kind, t.body()) {
            (PresentationKind::FinitePointSet(_), _) => {
                for r in self.periodic_cycle_points() {
                    if Point::eventually_periodic(Vec::new(), r)? == x.forward() {
                        return Ok(Tri::True);
                    }
                }
                Ok(Tri::False)
            }
            (_, TailBody::Periodic(p)) if self.graph.is_some() => {
                let s = self.memory().unwrap_or(1);
                let reps = (s + 1) / p.len() + 2;
                let w = t.window(0, t.prefix().len() + reps * p.len());
                Ok(Tri::from_bool(self.is_factor(&w)?))
            }
            _ => {
                let w = t.window(0, self.pred_window + t.prefix().len());
                Ok(if self.is_factor(&w)? { Tri::True } else { Tri::False })
            }
        }
    }

    /// Whether `x` lies in the space. Exact for finite type and point sets;
    /// for substitution shifts a positive answer is checked to the predecessor window.
    pub fn contains(&self, x: &Point) -> Result<Tri, ShiftError> {
        match x.left() {
            None => self.contains_one_sided(x),
            Some(left) => {
                let reach = |t: &Tail| {
                    t.prefix().len()
                        + match t.body() {
                            TailBody::Periodic(p) => p.len() * ((self.memory().unwrap_or(1) + 1) / p.len() + 2),
                            TailBody::Orbit { .. } => self.pred_window,
                        }
                };
                let lo = reach(left) as i64;
                let hi = reach(x.right()) as i64;
                let w = x.window(-lo, hi)?;
                if let PresentationKind::FinitePointSet(_) = self.kind {
                    for r in self.periodic_cycle_points() {
                        if Point::periodic_two_sided(r)? == *x {
                            return Ok(Tri::True);
                        }
                    }
                    return Ok(Tri::False);
                }
                Ok(Tri::from_bool(self.is_factor(&w)?))
            }
        }
    }

    /// Whether `w · x` lies in the one-sided space, for `x` in it.
    pub fn admits_prefix(&self, w: &[Symbol], x: &Point) -> Result<Tri, ShiftError> {
        if w.is_empty() {
            return Ok(Tri::True);
        }
        match &self.kind {
            PresentationKind::FinitePointSet(_) => self.contains_one_sided(&x.forward().prepend(w)),
            PresentationKind::Substitution(_) => {
                let mut v = w.to_vec();
                v.extend(x.right().window(0, self.pred_window));
                Ok(Tri::from_bool(self.is_factor(&v)?))
            }
            _ => {
                let mut v = w.to_vec();
                v.extend(x.right().window(0, self.memory().unwrap_or(1)));
                Ok(Tri::from_bool(self.is_factor(&v)?))
            }
        }
    }

    /// Fixed points of the substitution (seeds whose image starts with themselves).
    pub fn fixed_points(&self) -> Vec<Arc<FixedPoint>> {
        match &self.kind {
            PresentationKind::Substitution(images) => (0..self.rank())
                .filter_map(|c| FixedPoint::new(images.clone(), c as Symbol).ok())
                .map(Arc::new)
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Eventually periodic one-sided points, or periodic two-sided points,
    /// with preperiod at most `q` and least period at most `p`.
    pub fn eventually_periodic_points(&self, q: usize, p: usize) -> Result<Vec<Point>, ShiftError> {
        if matches!(self.kind, PresentationKind::Substitution(_)) {
            return Err(ShiftError::Unsupported("substitution shifts have no periodic points".into()));
        }
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for len in 1..=p {
            for period in crate::free_group::FreeGroup::new(self.rank()).positive_words(len) {
                if primitive_root_len(&period) != len {
                    continue;
                }
                match self.side {
                    Side::TwoSided => {
                        let z = Point::periodic_two_sided(period.clone())?;
                        if self.contains(&z)? == Tri::True && seen.insert(z.clone()) {
                            out.push(z);
                        }
                    }
                    Side::OneSided => {
                        for qq in 0..=q {
                            for pre in crate::free_group::FreeGroup::new(self.rank()).positive_words(qq) {
                                let x = Point::eventually_periodic(pre, period.clone())?;
                                if x.right().prefix().len() != qq {
                                    continue;
                                }
                                if self.contains(&x)? == Tri::True && seen.insert(x.clone()) {
                                    out.push(x);
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

pub(crate) use point::primitive_root_len;

#[cfg(test)]
mod tests {
    use super::*;

    const A: Symbol = 0;
    const B: Symbol = 1;

    /// Brute force: words whose consecutive pairs are allowed by the matrix.
    fn matrix_words(m: &[Vec<u8>], n: usize) -> BTreeSet<Word> {
        crate::free_group::FreeGroup::new(m.len())
            .positive_words(n)
            .into_iter()
            .filter(|w| w.windows(2).all(|p| m[p[0] as usize][p[1] as usize] == 1))
            .collect()
    }

    #[test]
    fn golden_mean_language() {
        let g = ShiftPresentation::golden_mean(Side::OneSided);
        assert!(!g.is_factor(&[B, B]).unwrap());
        assert_eq!(*g.factors(2).unwrap(), [vec![A, A], vec![A, B], vec![B, A]].into_iter().collect());
        let m = vec![vec![1, 1], vec![1, 0]];
        for n in 0..8 {
            assert_eq!(*g.factors(n).unwrap(), matrix_words(&m, n));
        }
        let counts: Vec<usize> = (2..=4).map(|n| g.factors(n).unwrap().len()).collect();
        assert_eq!(counts, vec![3, 5, 8]);
    }

    #[test]
    fn full_shift_language() {
        let f = ShiftPresentation::full_shift(Alphabet::ab(), Side::TwoSided);
        for n in 0..7 {
            assert_eq!(f.factors(n).unwrap().len(), 1 << n);
        }
        assert!(f.is_factor(&[B, B, B, A]).unwrap());
    }

    /// Factors of a long prefix of the fixed point, computed directly.
    fn fibonacci_prefix_factors(n: usize) -> BTreeSet<Word> {
        let mut w = vec![A];
        while w.len() < 5000 {
            w = w.iter().flat_map(|&s| if s == A { vec![A, B] } else { vec![A] }).collect();
        }
        w.windows(n).map(|x| x.to_vec()).collect()
    }

    #[test]
    fn fibonacci_language_matches_prefix_scan() {
        let f = ShiftPresentation::fibonacci(Side::OneSided);
        assert!(!f.is_factor(&[A, A, A]).unwrap());
        assert!(!f.is_factor(&[B, B]).unwrap());
        for n in 1..30 {
            let ws = f.factors(n).unwrap();
            assert_eq!(ws.len(), n + 1, "Sturmian complexity at {n}");
            assert_eq!(*ws, fibonacci_prefix_factors(n));
        }
        assert_eq!(f.is_primitive(), Some(true));
    }

    #[test]
    fn factorial_closure() {
        for pres in [
            ShiftPresentation::golden_mean(Side::TwoSided),
            ShiftPresentation::fibonacci(Side::OneSided),
            ShiftPresentation::upper_triangular(Side::OneSided),
        ] {
            for n in 1..9 {
                let big = pres.factors(n).unwrap();
                let small = pres.factors(n - 1).unwrap();
                for w in big.iter() {
                    assert!(small.contains(&w[1..]) && small.contains(&w[..n - 1]));
                }
            }
        }
    }

    #[test]
    fn transfer_matrix_recurrence() {
        let g = ShiftPresentation::golden_mean(Side::OneSided);
        let m = [[1u64, 1], [1, 0]];
        for n in 1..10 {
            let ends = |last: Symbol| g.factors(n).unwrap().iter().filter(|w| *w.last().unwrap() == last).count() as u64;
            let next = g.factors(n + 1).unwrap().len() as u64;
            let predicted: u64 = (0..2).map(|i| (0..2).map(|j| m[i][j] * ends(i as Symbol)).sum::<u64>()).sum();
            assert_eq!(next, predicted);
        }
    }

    #[test]
    fn predecessor_examples() {
        let g = ShiftPresentation::golden_mean(Side::OneSided);
        let xa = Point::eventually_periodic(vec![], vec![A]).unwrap();
        let xb = Point::eventually_periodic(vec![B], vec![A]).unwrap();
        assert_eq!(g.predecessors(1, &xa).unwrap().words, [vec![A], vec![B]].into_iter().collect());
        assert_eq!(g.predecessors(1, &xb).unwrap().words, [vec![A]].into_iter().collect());
        assert_eq!(g.predecessors(0, &xb).unwrap().words, [vec![]].into_iter().collect());
        for l in 0..5 {
            let p = g.predecessors(l, &xb).unwrap();
            assert!(p.words.is_subset(&g.factors(l).unwrap()));
        }
    }

    #[test]
    fn forbidden_word_sft_matches_matrix() {
        let f = ShiftPresentation::new(Alphabet::ab(), PresentationKind::ForbiddenWords(vec![vec![B, B]]), Side::OneSided).unwrap();
        let g = ShiftPresentation::golden_mean(Side::OneSided);
        for n in 0..7 {
            assert_eq!(f.factors(n).unwrap(), g.factors(n).unwrap());
        }
        let no_a = ShiftPresentation::new(Alphabet::ab(), PresentationKind::ForbiddenWords(vec![vec![A]]), Side::OneSided).unwrap();
        assert_eq!(no_a.factors(3).unwrap().len(), 1);
    }

    #[test]
    fn two_sided_prunes_dead_ends() {
        // a may only be followed by a, b by anything: in two-sided form b never follows a.
        let m = ShiftPresentation::matrix(Alphabet::ab(), vec![vec![1, 0], vec![1, 1]], Side::TwoSided).unwrap();
        assert!(m.is_factor(&[B, A]).unwrap());
        let one = ShiftPresentation::matrix(Alphabet::ab(), vec![vec![1, 0], vec![1, 1]], Side::OneSided).unwrap();
        assert!(one.is_factor(&[B, A]).unwrap());
        assert!(!one.is_factor(&[A, B]).unwrap());
    }

    #[test]
    fn periodic_point_enumeration() {
        let full = ShiftPresentation::full_shift(Alphabet::ab(), Side::OneSided);
        assert_eq!(full.eventually_periodic_points(0, 2).unwrap().len(), 4);
        let g = ShiftPresentation::golden_mean(Side::OneSided);
        let pts = g.eventually_periodic_points(0, 2).unwrap();
        assert_eq!(pts.len(), 3);
        assert!(!pts.contains(&Point::eventually_periodic(vec![], vec![B]).unwrap()));
        let more = g.eventually_periodic_points(1, 2).unwrap();
        assert!(more.len() > pts.len());
        assert!(more.iter().all(|x| g.contains(x).unwrap() == Tri::True));
        let two = ShiftPresentation::full_shift(Alphabet::ab(), Side::TwoSided);
        // least periods 1..4: 2 + 2 + 6 + 12
        assert_eq!(two.eventually_periodic_points(0, 4).unwrap().len(), 22);
    }

    #[test]
    fn finite_point_set_language_and_predecessors() {
        let p = ShiftPresentation::new(Alphabet::ab(), PresentationKind::FinitePointSet(vec![vec![A, B]]), Side::OneSided).unwrap();
        assert_eq!(p.factors(3).unwrap().len(), 2);
        let x = Point::eventually_periodic(vec![], vec![A, B]).unwrap();
        assert_eq!(p.predecessors(1, &x).unwrap().words, [vec![B]].into_iter().collect());
        assert_eq!(p.contains(&Point::eventually_periodic(vec![], vec![A]).unwrap()).unwrap(), Tri::False);
    }
}
