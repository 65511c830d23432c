//! Boolean expressions over domains, and the rewriting of `θ_g` through them.

use crate::free_group::{ReducedWord, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoolExpr {
    Full,
    Empty,
    Domain(ReducedWord),
    /// `𝒞(μ, ν)`.
    Cylinder(Word, Word),
    And(Box<BoolExpr>, Box<BoolExpr>),
    Or(Box<BoolExpr>, Box<BoolExpr>),
    Not(Box<BoolExpr>),
}

impl BoolExpr {
    pub fn domain(g: ReducedWord) -> Self {
        BoolExpr::Domain(g)
    }

    pub fn and(self, other: BoolExpr) -> Self {
        BoolExpr::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: BoolExpr) -> Self {
        BoolExpr::Or(Box::new(self), Box::new(other))
    }

    pub fn negate(self) -> Self {
        BoolExpr::Not(Box::new(self))
    }

    /// An expression for `θ_g(self)` built only from domains, using
    /// `θ_g(D_h) = D_g ∧ D_{gh}`, `θ_g(A ∧ B) = θ_g(A) ∧ θ_g(B)` and
    /// `θ_g(X ∖ A) = D_g ∖ θ_g(A)`.
    pub fn theta(&self, g: &ReducedWord) -> BoolExpr {
        let dg = || BoolExpr::Domain(g.clone());
        match self {
            BoolExpr::Full => dg(),
            BoolExpr::Empty => BoolExpr::Empty,
            BoolExpr::Domain(h) => dg().and(BoolExpr::Domain(g.multiply(h))),
            BoolExpr::Cylinder(mu, nu) => {
                let as_domains = BoolExpr::Domain(ReducedWord::positive(nu)).and(BoolExpr::Domain(ReducedWord::from_pair(nu, mu)));
                as_domains.theta(g)
            }
            BoolExpr::And(a, b) => a.theta(g).and(b.theta(g)),
            BoolExpr::Or(a, b) => a.theta(g).or(b.theta(g)),
            BoolExpr::Not(a) => dg().and(a.theta(g).negate()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            BoolExpr::And(a, b) | BoolExpr::Or(a, b) => 1 + a.size() + b.size(),
            BoolExpr::Not(a) => 1 + a.size(),
            _ => 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_of_domain_is_a_meet() {
        let g = ReducedWord::generator(0);
        let h = ReducedWord::generator(1);
        assert_eq!(
            BoolExpr::Domain(h.clone()).theta(&g),
            BoolExpr::Domain(g.clone()).and(BoolExpr::Domain(g.multiply(&h)))
        );
        assert_eq!(BoolExpr::Full.theta(&g), BoolExpr::Domain(g.clone()));
        assert_eq!(BoolExpr::Empty.theta(&g), BoolExpr::Empty);
    }
}
