//! Points with a finitely described tail.
//!
//! A one-sided sequence is a [`Tail`]: a finite prefix followed by either a
//! repeated period or a suffix of a substitution fixed point. Tails are kept
//! normalized, so two purely periodic descriptions are equal iff the
//! sequences are.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex};

use serde::Serialize;

use super::{ShiftError, Side};
use crate::free_group::{Symbol, Word};

/// The fixed point of a substitution that starts with `seed`, unrolled lazily.
#[derive(Debug)]
pub struct FixedPoint {
    images: Vec<Word>,
    seed: Symbol,
    prefix: Mutex<Word>,
}

impl FixedPoint {
    pub fn new(images: Vec<Word>, seed: Symbol) -> Result<Self, ShiftError> {
        let img = images
            .get(seed as usize)
            .ok_or_else(|| ShiftError::Invalid(format!("seed {seed} has no image")))?;
        if img.first() != Some(&seed) || img.len() < 2 {
            return Err(ShiftError::Invalid(format!(
                "image of seed {seed} must start with it and have length at least 2"
            )));
        }
        Ok(FixedPoint { images, seed, prefix: Mutex::new(vec![seed]) })
    }

    pub fn seed(&self) -> Symbol {
        self.seed
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn window(&self, from: usize, to: usize) -> Word {
        let mut prefix = self.prefix.lock().expect("fixed point cache poisoned");
        while prefix.len() < to {
            let next: Word = prefix.iter().flat_map(|&s| self.images[s as usize].iter().copied()).collect();
            *prefix = next;
        }
        prefix[from..to].to_vec()
    }

    pub fn symbol(&self, i: usize) -> Symbol {
        self.window(i, i + 1)[0]
    }
}

impl PartialEq for FixedPoint {
    fn eq(&self, other: &Self) -> bool {
        self.seed == other.seed && self.images == other.images
    }
}

impl Eq for FixedPoint {}

impl Hash for FixedPoint {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.seed.hash(state);
        self.images.hash(state);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TailBody {
    Periodic(Word),
    Orbit { fixed: Arc<FixedPoint>, offset: usize },
}

/// A one-sided sequence `prefix · body`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tail {
    prefix: Word,
    body: TailBody,
}

fn primitive_root(w: &[Symbol]) -> Word {
    let n = w.len();
    for d in 1..=n {
        if n.is_multiple_of(d) && (0..n).all(|i| w[i] == w[i % d]) {
            return w[..d].to_vec();
        }
    }
    w.to_vec()
}

/// Length of the shortest word whose powers give `w`.
pub(crate) fn primitive_root_len(w: &[Symbol]) -> usize {
    primitive_root(w).len()
}

impl Tail {
    pub fn eventually_periodic(prefix: Word, period: Word) -> Result<Tail, ShiftError> {
        if period.is_empty() {
            return Err(ShiftError::Invalid("period must be nonempty".into()));
        }
        Ok(Tail { prefix, body: TailBody::Periodic(period) }.normalized())
    }

    pub fn orbit(prefix: Word, fixed: Arc<FixedPoint>, offset: usize) -> Tail {
        Tail { prefix, body: TailBody::Orbit { fixed, offset } }.normalized()
    }

    pub fn prefix(&self) -> &[Symbol] {
        &self.prefix
    }

    pub fn body(&self) -> &TailBody {
        &self.body
    }

    pub fn is_periodic_spec(&self) -> bool {
        matches!(self.body, TailBody::Periodic(_))
    }

    fn normalized(mut self) -> Tail {
        match &mut self.body {
            TailBody::Periodic(period) => {
                let mut p = primitive_root(period);
                while let (Some(&last), Some(&plast)) = (self.prefix.last(), p.last()) {
                    if last != plast {
                        break;
                    }
                    self.prefix.pop();
                    p.rotate_right(1);
                }
                *period = p;
            }
            TailBody::Orbit { fixed, offset } => {
                while let Some(&last) = self.prefix.last() {
                    if *offset == 0 || fixed.symbol(*offset - 1) != last {
                        break;
                    }
                    self.prefix.pop();
                    *offset -= 1;
                }
            }
        }
        self
    }

    pub fn symbol(&self, i: usize) -> Symbol {
        if i < self.prefix.len() {
            return self.prefix[i];
        }
        let j = i - self.prefix.len();
        match &self.body {
            TailBody::Periodic(p) => p[j % p.len()],
            TailBody::Orbit { fixed, offset } => fixed.symbol(offset + j),
        }
    }

    pub fn window(&self, from: usize, to: usize) -> Word {
        if to <= from {
            return Vec::new();
        }
        let mut out = Vec::with_capacity(to - from);
        let plen = self.prefix.len();
        let mut i = from;
        while i < to && i < plen {
            out.push(self.prefix[i]);
            i += 1;
        }
        if i < to {
            match &self.body {
                TailBody::Periodic(p) => out.extend((i..to).map(|k| p[(k - plen) % p.len()])),
                TailBody::Orbit { fixed, offset } => {
                    out.extend(fixed.window(offset + i - plen, offset + to - plen))
                }
            }
        }
        out
    }

    /// Drop the first symbol.
    pub fn shifted(&self) -> Tail {
        if !self.prefix.is_empty() {
            return Tail { prefix: self.prefix[1..].to_vec(), body: self.body.clone() };
        }
        let body = match &self.body {
            TailBody::Periodic(p) => {
                let mut q = p.clone();
                q.rotate_left(1);
                TailBody::Periodic(q)
            }
            TailBody::Orbit { fixed, offset } => TailBody::Orbit { fixed: fixed.clone(), offset: offset + 1 },
        };
        Tail { prefix: Vec::new(), body }
    }

    pub fn prepended(&self, w: &[Symbol]) -> Tail {
        let mut prefix = w.to_vec();
        prefix.extend_from_slice(&self.prefix);
        Tail { prefix, body: self.body.clone() }.normalized()
    }

    fn render(&self, names: &[char]) -> String {
        let n = |w: &[Symbol]| w.iter().map(|&s| names.get(s as usize).copied().unwrap_or('?')).collect::<String>();
        match &self.body {
            TailBody::Periodic(p) => format!("{}({})^∞", n(&self.prefix), n(p)),
            TailBody::Orbit { fixed, offset } => {
                format!("{}σ^{}(fix {})", n(&self.prefix), offset, names.get(fixed.seed() as usize).copied().unwrap_or('?'))
            }
        }
    }
}

/// A one- or two-sided sequence. For two-sided points `left` reads
/// `z_{-1} z_{-2} ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point {
    side: Side,
    right: Tail,
    left: Option<Tail>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PointEquality {
    Equal,
    Distinct,
    Undecided,
}

impl Point {
    pub fn one_sided(tail: Tail) -> Point {
        Point { side: Side::OneSided, right: tail, left: None }
    }

    pub fn two_sided(left: Tail, right: Tail) -> Point {
        Point { side: Side::TwoSided, right, left: Some(left) }
    }

    /// One-sided `pre · period^∞`.
    pub fn eventually_periodic(pre: Word, period: Word) -> Result<Point, ShiftError> {
        Ok(Point::one_sided(Tail::eventually_periodic(pre, period)?))
    }

    /// Two-sided `... v v . v v ...` with `z_{[0,|v|[} = v`.
    pub fn periodic_two_sided(period: Word) -> Result<Point, ShiftError> {
        let mut rev = period.clone();
        rev.reverse();
        Ok(Point::two_sided(Tail::eventually_periodic(Vec::new(), rev)?, Tail::eventually_periodic(Vec::new(), period)?))
    }

    pub fn orbit(fixed: Arc<FixedPoint>, offset: usize) -> Point {
        Point::one_sided(Tail::orbit(Vec::new(), fixed, offset))
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn right(&self) -> &Tail {
        &self.right
    }

    pub fn left(&self) -> Option<&Tail> {
        self.left.as_ref()
    }

    /// The one-sided sequence `z_{[0,∞[}`.
    pub fn forward(&self) -> Point {
        Point::one_sided(self.right.clone())
    }

    pub fn is_periodic_spec(&self) -> bool {
        self.right.is_periodic_spec() && self.left.as_ref().is_none_or(|l| l.is_periodic_spec())
    }

    pub fn symbol(&self, i: i64) -> Result<Symbol, ShiftError> {
        if i >= 0 {
            Ok(self.right.symbol(i as usize))
        } else {
            match &self.left {
                Some(l) => Ok(l.symbol((-i - 1) as usize)),
                None => Err(ShiftError::IndexOutOfRange(i)),
            }
        }
    }

    /// `x_{[from,to[}`.
    pub fn window(&self, from: i64, to: i64) -> Result<Word, ShiftError> {
        if to <= from {
            return Ok(Vec::new());
        }
        if from >= 0 {
            return Ok(self.right.window(from as usize, to as usize));
        }
        let left = self.left.as_ref().ok_or(ShiftError::IndexOutOfRange(from))?;
        let lo = (-from) as usize;
        let hi = if to < 0 { (-to) as usize } else { 0 };
        let mut out = left.window(hi, lo);
        out.reverse();
        if to > 0 {
            out.extend(self.right.window(0, to as usize));
        }
        Ok(out)
    }

    /// `σ` on one-sided points, `τ` on two-sided ones.
    pub fn shift(&self) -> Point {
        let first = self.right.symbol(0);
        Point {
            side: self.side,
            right: self.right.shifted(),
            left: self.left.as_ref().map(|l| l.prepended(&[first])),
        }
    }

    /// `τ^{-1}`; absent for one-sided points.
    pub fn shift_inverse(&self) -> Option<Point> {
        let left = self.left.as_ref()?;
        let last = left.symbol(0);
        Some(Point { side: self.side, right: self.right.prepended(&[last]), left: Some(left.shifted()) })
    }

    /// `τ^n` for any integer `n` (two-sided) or `σ^n`, `n ≥ 0` (one-sided).
    pub fn shift_by(&self, n: i64) -> Option<Point> {
        let mut p = self.clone();
        if n >= 0 {
            for _ in 0..n {
                p = p.shift();
            }
        } else {
            for _ in 0..(-n) {
                p = p.shift_inverse()?;
            }
        }
        Some(p)
    }

    /// `w · x` for a one-sided point.
    pub fn prepend(&self, w: &[Symbol]) -> Point {
        Point { side: self.side, right: self.right.prepended(w), left: self.left.clone() }
    }

    /// Drop `n` leading symbols of a one-sided point.
    pub fn drop(&self, n: usize) -> Point {
        let mut t = self.right.clone();
        for _ in 0..n {
            t = t.shifted();
        }
        Point { side: self.side, right: t, left: self.left.clone() }
    }

    pub fn render(&self, names: &[char]) -> String {
        match &self.left {
            None => self.right.render(names),
            Some(l) => format!("[{}].{}", l.render(names), self.right.render(names)),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<char> = (0..36u32).map(|d| std::char::from_digit(d, 36).unwrap()).collect();
        write!(f, "{}", self.render(&names))
    }
}

/// Compare two points: structurally, then by windows within `±depth`.
pub fn point_equal(p: &Point, q: &Point, depth: usize) -> PointEquality {
    if p == q {
        return PointEquality::Equal;
    }
    if p.side == q.side && p.is_periodic_spec() && q.is_periodic_spec() {
        return PointEquality::Distinct;
    }
    let lo = if p.side == Side::TwoSided { -(depth as i64) } else { 0 };
    match (p.window(lo, depth as i64), q.window(lo, depth as i64)) {
        (Ok(a), Ok(b)) if a != b => PointEquality::Distinct,
        _ => PointEquality::Undecided,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: Symbol = 0;
    const B: Symbol = 1;

    fn fib() -> Arc<FixedPoint> {
        Arc::new(FixedPoint::new(vec![vec![A, B], vec![A]], A).unwrap())
    }

    #[test]
    fn eventually_periodic_window_and_shift() {
        let p = Point::eventually_periodic(vec![A], vec![B, A]).unwrap();
        assert_eq!(p.window(0, 5).unwrap(), vec![A, B, A, B, A]);
        let q = Point::eventually_periodic(vec![], vec![A, B]).unwrap();
        // a(ba)^∞ normalizes to (ab)^∞
        assert_eq!(p, q);
        assert_eq!(p.shift(), Point::eventually_periodic(vec![], vec![B, A]).unwrap());
        assert!(p.window(0, 0).unwrap().is_empty());
        assert!(p.window(-1, 2).is_err());
    }

    #[test]
    fn shift_then_window_commutes() {
        let p = Point::eventually_periodic(vec![B, B, A], vec![A, B, B]).unwrap();
        for k in 0..6 {
            for l in k..10 {
                assert_eq!(p.shift().window(k, l).unwrap(), p.window(k + 1, l + 1).unwrap());
            }
        }
    }

    #[test]
    fn two_sided_periodic_shift_round_trip() {
        let z = Point::periodic_two_sided(vec![A, B]).unwrap();
        assert_eq!(z.window(-3, 3).unwrap(), vec![B, A, B, A, B, A]);
        assert_eq!(z.shift().shift(), z);
        assert_eq!(z.shift().shift_inverse().unwrap(), z);
        assert_eq!(z.shift_inverse().unwrap().window(0, 2).unwrap(), vec![B, A]);
    }

    #[test]
    fn fibonacci_fixed_point() {
        let x = Point::orbit(fib(), 0);
        assert_eq!(x.window(0, 5).unwrap(), vec![A, B, A, A, B]);
        assert_eq!(Point::orbit(fib(), 3).shift(), Point::orbit(fib(), 4));
        // a·σ(u) normalizes back to u
        assert_eq!(Point::orbit(fib(), 1).prepend(&[A]), Point::orbit(fib(), 0));
    }

    #[test]
    fn point_equality_modes() {
        let x = Point::orbit(fib(), 0);
        assert_eq!(point_equal(&x, &x.clone(), 10), PointEquality::Equal);
        let p = Point::eventually_periodic(vec![A, A], vec![B]).unwrap();
        let q = Point::eventually_periodic(vec![A, B], vec![B]).unwrap();
        assert_eq!(point_equal(&p, &q, 0), PointEquality::Distinct);
        assert_eq!(point_equal(&Point::orbit(fib(), 2), &Point::orbit(fib(), 7), 50), PointEquality::Distinct);
        assert_eq!(point_equal(&Point::orbit(fib(), 2), &Point::orbit(fib(), 7), 0), PointEquality::Undecided);
    }
}
