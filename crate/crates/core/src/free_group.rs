//! Reduced words in the free group on a finite alphabet.
//!
//! Symbols are alphabet indices. A [`ReducedWord`] is always stored in
//! reduced form, so structural equality is group equality.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of a symbol in a finite alphabet.
pub type Symbol = u8;

/// A positive word over the alphabet.
pub type Word = Vec<Symbol>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreeGroupError {
    #[error("symbol index {symbol} outside alphabet of size {rank}")]
    InvalidSymbol { symbol: Symbol, rank: usize },
    #[error("cannot parse group word {0:?}")]
    Parse(String),
}

/// A generator or the inverse of a generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub symbol: Symbol,
    pub inverse: bool,
}

impl Letter {
    pub fn pos(symbol: Symbol) -> Self {
        Letter { symbol, inverse: false }
    }

    pub fn neg(symbol: Symbol) -> Self {
        Letter { symbol, inverse: true }
    }

    pub fn inv(self) -> Self {
        Letter { symbol: self.symbol, inverse: !self.inverse }
    }

    fn cancels(self, other: Letter) -> bool {
        self.symbol == other.symbol && self.inverse != other.inverse
    }
}

/// An element of the free group, in reduced form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct ReducedWord {
    letters: Vec<Letter>,
}

/// Free group of a given rank; validates symbols and enumerates balls.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FreeGroup {
    rank: usize,
}

impl FreeGroup {
    pub fn new(rank: usize) -> Self {
        FreeGroup { rank }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Freely reduce a raw letter sequence.
    pub fn reduce(&self, raw: &[Letter]) -> Result<ReducedWord, FreeGroupError> {
        if let Some(bad) = raw.iter().find(|l| l.symbol as usize >= self.rank) {
            return Err(FreeGroupError::InvalidSymbol { symbol: bad.symbol, rank: self.rank });
        }
        Ok(ReducedWord::reduce_unchecked(raw))
    }

    /// All reduced words of length at most `radius`, shortest first.
    pub fn ball(&self, radius: usize) -> Vec<ReducedWord> {
        let mut out = vec![ReducedWord::identity()];
        let mut frontier = vec![ReducedWord::identity()];
        for _ in 0..radius {
            let mut next = Vec::new();
            for w in &frontier {
                for s in 0..self.rank {
                    for inverse in [false, true] {
                        let l = Letter { symbol: s as Symbol, inverse };
                        if w.letters.last().is_some_and(|last| last.cancels(l)) {
                            continue;
                        }
                        let mut letters = w.letters.clone();
                        letters.push(l);
                        next.push(ReducedWord { letters });
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    /// All positive words of length exactly `n`, in lexicographic order.
    pub fn positive_words(&self, n: usize) -> Vec<Word> {
        let mut out: Vec<Word> = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|w| {
                    (0..self.rank).map(move |s| {
                        let mut v = w.clone();
                        v.push(s as Symbol);
                        v
                    })
                })
                .collect();
        }
        out
    }
}

impl ReducedWord {
    pub fn identity() -> Self {
        ReducedWord { letters: Vec::new() }
    }

    pub fn reduce_unchecked(raw: &[Letter]) -> Self {
        let mut stack: Vec<Letter> = Vec::with_capacity(raw.len());
        for &l in raw {
            if stack.last().is_some_and(|top| top.cancels(l)) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        ReducedWord { letters: stack }
    }

    /// The positive word `w` as a group element.
    pub fn positive(w: &[Symbol]) -> Self {
        ReducedWord { letters: w.iter().map(|&s| Letter::pos(s)).collect() }
    }

    /// The inverse of the positive word `w`.
    pub fn positive_inverse(w: &[Symbol]) -> Self {
        Self::positive(w).inverse()
    }

    pub fn generator(s: Symbol) -> Self {
        ReducedWord { letters: vec![Letter::pos(s)] }
    }

    /// `mu * nu^{-1}` for positive words.
    pub fn from_pair(mu: &[Symbol], nu: &[Symbol]) -> Self {
        Self::positive(mu).multiply(&Self::positive_inverse(nu))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn multiply(&self, other: &ReducedWord) -> ReducedWord {
        let mut letters = self.letters.clone();
        let mut rest = other.letters.as_slice();
        while let (Some(&last), Some(&first)) = (letters.last(), rest.first()) {
            if last.cancels(first) {
                letters.pop();
                rest = &rest[1..];
            } else {
                break;
            }
        }
        letters.extend_from_slice(rest);
        ReducedWord { letters }
    }

    pub fn inverse(&self) -> ReducedWord {
        ReducedWord { letters: self.letters.iter().rev().map(|l| l.inv()).collect() }
    }

    /// Image under the homomorphism to the integers sending every generator to 1.
    pub fn degree(&self) -> i64 {
        self.letters.iter().map(|l| if l.inverse { -1 } else { 1 }).sum()
    }

    pub fn is_positive(&self) -> bool {
        self.letters.iter().all(|l| !l.inverse)
    }

    pub fn positive_word(&self) -> Option<Word> {
        self.is_positive().then(|| self.letters.iter().map(|l| l.symbol).collect())
    }

    /// The inverse of a positive word, read back as that positive word.
    pub fn negative_word(&self) -> Option<Word> {
        self.inverse().positive_word()
    }

    /// Split as `mu * nu^{-1}` with `mu`, `nu` positive.
    ///
    /// In a reduced word this exists iff no positive letter follows an
    /// inverse one; the last letters of `mu` and `nu` then differ.
    pub fn one_sided_normal_form(&self) -> Option<(Word, Word)> {
        let split = self.letters.iter().position(|l| l.inverse).unwrap_or(self.letters.len());
        let (pos, neg) = self.letters.split_at(split);
        if neg.iter().any(|l| !l.inverse) {
            return None;
        }
        let mu = pos.iter().map(|l| l.symbol).collect();
        let nu = neg.iter().rev().map(|l| l.symbol).collect();
        Some((mu, nu))
    }

    /// Parse `ab'a` style notation: a trailing `'` or `⁻¹` inverts the preceding symbol.
    pub fn parse(text: &str, alphabet: &[char]) -> Result<ReducedWord, FreeGroupError> {
        let text = text.trim();
        if text.is_empty() || text == "e" && !alphabet.contains(&'e') || text == "ε" {
            return Ok(ReducedWord::identity());
        }
        let mut raw = Vec::new();
        let mut chars = text.chars().peekable();
        while let Some(c) = chars.next() {
            let sym = alphabet
                .iter()
                .position(|&a| a == c)
                .ok_or_else(|| FreeGroupError::Parse(text.to_string()))?;
            let mut inverse = false;
            match chars.peek() {
                Some('\'') => {
                    chars.next();
                    inverse = true;
                }
                Some('⁻') => {
                    chars.next();
                    if chars.next() != Some('¹') {
                        return Err(FreeGroupError::Parse(text.to_string()));
                    }
                    inverse = true;
                }
                _ => {}
            }
            raw.push(Letter { symbol: sym as Symbol, inverse });
        }
        Ok(ReducedWord::reduce_unchecked(&raw))
    }

    /// Render with the given alphabet, inverses marked by `'`.
    pub fn render(&self, alphabet: &[char]) -> String {
        if self.letters.is_empty() {
            return "ε".to_string();
        }
        let mut s = String::new();
        for l in &self.letters {
            s.push(alphabet.get(l.symbol as usize).copied().unwrap_or('?'));
            if l.inverse {
                s.push('\'');
            }
        }
        s
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "ε");
        }
        for l in &self.letters {
            write!(f, "{}", l.symbol)?;
            if l.inverse {
                write!(f, "'")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: Symbol = 0;
    const B: Symbol = 1;

    fn w(letters: &[(Symbol, bool)]) -> Vec<Letter> {
        letters.iter().map(|&(symbol, inverse)| Letter { symbol, inverse }).collect()
    }

    #[test]
    fn reduce_examples() {
        let g = FreeGroup::new(2);
        assert!(g.reduce(&w(&[(A, false), (A, true)])).unwrap().is_identity());
        let r = g.reduce(&w(&[(A, false), (B, false), (B, true), (A, false)])).unwrap();
        assert_eq!(r, ReducedWord::positive(&[A, A]));
        assert!(matches!(g.reduce(&w(&[(2, false)])), Err(FreeGroupError::InvalidSymbol { .. })));
    }

    #[test]
    fn multiply_and_invert_examples() {
        let ab_ = ReducedWord::from_pair(&[A], &[B]);
        let ba_ = ReducedWord::from_pair(&[B], &[A]);
        assert!(ab_.multiply(&ba_).is_identity());
        let g = ReducedWord::positive(&[A, B]);
        assert_eq!(ReducedWord::identity().multiply(&g), g);
        assert_eq!(g.inverse(), ReducedWord::positive_inverse(&[A, B]));
        assert_eq!(g.inverse().letters(), &[Letter::neg(B), Letter::neg(A)]);
        assert!(ReducedWord::identity().inverse().is_identity());
    }

    #[test]
    fn degree_examples() {
        assert_eq!(ReducedWord::positive(&[A, A, B]).degree(), 3);
        assert_eq!(ReducedWord::from_pair(&[A], &[B]).degree(), 0);
    }

    #[test]
    fn normal_form_examples() {
        assert_eq!(ReducedWord::from_pair(&[A], &[B]).one_sided_normal_form(), Some((vec![A], vec![B])));
        let g = ReducedWord::positive_inverse(&[A]).multiply(&ReducedWord::generator(B));
        assert_eq!(g.one_sided_normal_form(), None);
        let g = ReducedWord::reduce_unchecked(&w(&[(A, false), (A, false), (B, true), (A, true)]));
        let (mu, nu) = g.one_sided_normal_form().unwrap();
        assert_eq!((mu.clone(), nu.clone()), (vec![A, A], vec![A, B]));
        assert_eq!(ReducedWord::from_pair(&mu, &nu), g);
    }

    #[test]
    fn positivity_examples() {
        assert!(ReducedWord::positive(&[A, B]).is_positive());
        assert!(!ReducedWord::from_pair(&[A], &[B]).is_positive());
        assert!(ReducedWord::identity().is_positive());
        assert_eq!(ReducedWord::positive(&[B, A]).positive_word(), Some(vec![B, A]));
    }

    #[test]
    fn ball_sizes() {
        let g = FreeGroup::new(2);
        // 1 + 4 + 4*3 + 4*9
        assert_eq!(g.ball(3).len(), 53);
        assert!(g.ball(3).iter().all(|w| w.len() <= 3));
    }

    #[test]
    fn parse_and_render_round_trip() {
        let alphabet = ['a', 'b'];
        let g = ReducedWord::parse("aab'a'", &alphabet).unwrap();
        assert_eq!(g.render(&alphabet), "aab'a'");
        assert_eq!(ReducedWord::parse("bb⁻¹", &alphabet).unwrap(), ReducedWord::identity());
        assert!(ReducedWord::parse("c", &alphabet).is_err());
    }

    #[test]
    fn idempotent_reduction_on_random_sequences() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let raw: Vec<Letter> = (0..12)
                .map(|_| Letter { symbol: rng.gen_range(0..2), inverse: rng.gen_bool(0.5) })
                .collect();
            let once = ReducedWord::reduce_unchecked(&raw);
            let twice = ReducedWord::reduce_unchecked(once.letters());
            assert_eq!(once, twice);
            assert!(once.letters().windows(2).all(|p| !p[0].cancels(p[1])));
        }
    }
}
