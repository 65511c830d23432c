//! The expansion `1 - ∏ xᵢ = Σ_{∅≠E⊆{1..n}} ∏_{i∉E} xᵢ ∏_{j∈E} (1 - xⱼ)`
//! in any unital ring, checked in two concrete rings.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Algebra, Resolution, SymbolicSet};
use crate::report::{Report, ReportBuilder};
use crate::shift_space::ShiftError;

/// A unital ring with exact arithmetic.
pub trait Ring: Clone + PartialEq {
    fn one(&self) -> Self;
    fn zero(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
}

/// Both sides of the expansion for `xs`.
pub fn modsat_sides<R: Ring>(xs: &[R]) -> (R, R) {
    let one = xs[0].one();
    let product = xs.iter().fold(one.clone(), |acc, x| acc.mul(x));
    let lhs = one.sub(&product);
    let n = xs.len();
    let mut rhs = xs[0].zero();
    for mask in 1u32..(1 << n) {
        let term = xs.iter().enumerate().fold(one.clone(), |acc, (i, x)| {
            if mask & (1 << i) != 0 {
                acc.mul(&one.sub(x))
            } else {
                acc.mul(x)
            }
        });
        rhs = rhs.add(&term);
    }
    (lhs, rhs)
}

/// Dense square integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl IntMatrix {
    pub fn diagonal(diag: &[i64]) -> Self {
        let n = diag.len();
        let mut entries = vec![0; n * n];
        for (i, &d) in diag.iter().enumerate() {
            entries[i * n + i] = d;
        }
        IntMatrix { n, entries }
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }
}

impl Ring for IntMatrix {
    fn one(&self) -> Self {
        IntMatrix::diagonal(&vec![1; self.n])
    }

    fn zero(&self) -> Self {
        IntMatrix { n: self.n, entries: vec![0; self.n * self.n] }
    }

    fn add(&self, other: &Self) -> Self {
        IntMatrix { n: self.n, entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect() }
    }

    fn sub(&self, other: &Self) -> Self {
        IntMatrix { n: self.n, entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect() }
    }

    fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a != 0 {
                    for j in 0..n {
                        entries[i * n + j] += a * other.get(k, j);
                    }
                }
            }
        }
        IntMatrix { n, entries }
    }
}

/// Integer-valued functions on a finite set of atoms, with pointwise operations.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Indicator(Vec<i64>);

impl Ring for Indicator {
    fn one(&self) -> Self {
        Indicator(vec![1; self.0.len()])
    }

    fn zero(&self) -> Self {
        Indicator(vec![0; self.0.len()])
    }

    fn add(&self, other: &Self) -> Self {
        Indicator(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn sub(&self, other: &Self) -> Self {
        Indicator(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    fn mul(&self, other: &Self) -> Self {
        Indicator(self.0.iter().zip(&other.0).map(|(a, b)| a * b).collect())
    }
}

/// The expansion on random 0/1 diagonal matrices of size `size`.
pub fn modsat_matrix(max_n: usize, instances: usize, size: usize, seed: u64) -> Report {
    let mut b = ReportBuilder::new("modsat-matrix");
    b.param("max_n", max_n).param("instances", instances).param("size", size).param("seed", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for n in 1..=max_n {
        for t in 0..instances {
            let xs: Vec<IntMatrix> = (0..n)
                .map(|_| IntMatrix::diagonal(&(0..size).map(|_| rng.gen_range(0..2)).collect::<Vec<_>>()))
                .collect();
            let (lhs, rhs) = modsat_sides(&xs);
            b.check(&format!("n={n}"), lhs == rhs, || format!("instance {t}"));
        }
    }
    b.finish(1.0)
}

/// The expansion on random elements of the Boolean algebra at `r`: products
/// are meets and `1 - x` is the complement. The right-hand side terms are
/// built as sets and summed as indicator functions, so the check also shows
/// the terms are disjoint and cover the complement of the meet.
pub fn modsat_boolean(alg: &Algebra, r: Resolution, max_n: usize, instances: usize, seed: u64) -> Result<Report, ShiftError> {
    let mut b = ReportBuilder::new("modsat-boolean");
    b.param("max_n", max_n).param("instances", instances).param("resolution", format!("{r}")).param("seed", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all = alg.atoms(r)?;
    let indicator = |s: &SymbolicSet| Indicator(all.iter().map(|t| s.atoms().contains(t) as i64).collect());
    for n in 1..=max_n {
        for t in 0..instances {
            let xs: Vec<SymbolicSet> = (0..n)
                .map(|_| alg.subset_of_atoms(r, |_| rng.gen_bool(0.5)))
                .collect::<Result<_, _>>()?;
            let meet_all = xs.iter().skip(1).try_fold(xs[0].clone(), |acc, x| alg.meet(&acc, x))?;
            let lhs = indicator(&alg.complement(&meet_all)?);
            let mut rhs = lhs.zero();
            for mask in 1u32..(1 << n) {
                let mut term = alg.full(r)?;
                for (i, x) in xs.iter().enumerate() {
                    let factor = if mask & (1 << i) != 0 { alg.complement(x)? } else { x.clone() };
                    term = alg.meet(&term, &factor)?;
                }
                rhs = rhs.add(&indicator(&term));
            }
            b.check(&format!("n={n}"), lhs == rhs, || format!("instance {t}"));
            // the same identity in the ring of indicator functions
            let (l2, r2) = modsat_sides(&xs.iter().map(&indicator).collect::<Vec<_>>());
            b.check(&format!("n={n} ring"), l2 == r2 && l2 == lhs, || format!("instance {t}"));
        }
    }
    Ok(b.finish(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases_by_hand() {
        let x = IntMatrix::diagonal(&[0, 1]);
        let (l, r) = modsat_sides(std::slice::from_ref(&x));
        assert_eq!(l, r);
        assert_eq!(l, IntMatrix::diagonal(&[1, 0]));
        let y = IntMatrix::diagonal(&[1, 1]);
        let (l, r) = modsat_sides(&[x, y]);
        assert_eq!(l, r);
    }

    #[test]
    fn holds_for_arbitrary_entries() {
        // the expansion is an identity of polynomials, so it holds for any entries
        let x = IntMatrix::diagonal(&[2, -3]);
        let y = IntMatrix::diagonal(&[5, 7]);
        let (l, r) = modsat_sides(&[x, y]);
        assert_eq!(l, r);
    }
}
