//! Cuntz-Krieger relations for a Markov shift given by a 0/1 matrix.
//!
//! `A(X, Y, j) = ∏_{x∈X} A(x, j) ∏_{y∈Y} (1 - A(y, j))`, and the relation for
//! a pair of symbol sets reads
//! `∏_{x∈X} S_x*S_x ∏_{y∈Y} (1 - S_y*S_y) = Σ_j A(X, Y, j) S_j S_j*`.

use super::{Op, Representation};
use crate::boolean_algebra::Resolution;
use crate::free_group::{FreeGroup, ReducedWord, Symbol, Word};
use crate::report::{Report, ReportBuilder};
use crate::shift_space::{PresentationKind, ShiftError, Side};

/// Transition matrix of a one-sided matrix or full shift.
pub fn transition_matrix(rep: &Representation<'_>) -> Result<Vec<Vec<u8>>, ShiftError> {
    let pres = rep.algebra().presentation();
    if pres.side() != Side::OneSided {
        return Err(ShiftError::Unsupported("Cuntz-Krieger relations need a one-sided shift".into()));
    }
    match pres.kind() {
        PresentationKind::MatrixSft(m) => Ok(m.clone()),
        PresentationKind::FullShift => Ok(vec![vec![1; pres.rank()]; pres.rank()]),
        _ => Err(ShiftError::Unsupported(format!("{} shift has no transition matrix", pres.kind_name()))),
    }
}

/// `A(X, Y, j)` with `X` and `Y` given as bit masks.
pub fn ck_coefficient(matrix: &[Vec<u8>], x: u32, y: u32, j: usize) -> u8 {
    let mut c = 1;
    for (i, row) in matrix.iter().enumerate() {
        if x & (1 << i) != 0 {
            c &= row[j];
        }
        if y & (1 << i) != 0 {
            c &= 1 - row[j];
        }
    }
    c
}

/// All pairs `(X, Y)` of symbol sets. Overlapping pairs make both sides
/// zero; `X = Y = ∅` reads `1 = Σ_j S_j S_j*`.
pub fn ck_pairs(n: usize) -> Vec<(u32, u32)> {
    let full = 1u32 << n;
    (0..full).flat_map(|x| (0..full).map(move |y| (x, y))).collect()
}

fn mask_name(mask: u32, names: &[char]) -> String {
    let s: String = names.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, c)| *c).collect();
    if s.is_empty() {
        "∅".into()
    } else {
        s
    }
}

fn gen(s: usize) -> ReducedWord {
    ReducedWord::generator(s as Symbol)
}

/// Operator relations for the matrix, their set-level counterparts, and the
/// word relations for positive words up to `max_word_len`.
pub fn verify_ck_relations(rep: &Representation<'_>, symbolic: bool, max_word_len: usize, floor: f64) -> Result<Report, ShiftError> {
    let matrix = transition_matrix(rep)?;
    let n = matrix.len();
    let alg = rep.algebra();
    let names = alg.presentation().alphabet().names().to_vec();
    let mut b = ReportBuilder::new("ck");
    let (q, p, d) = rep.basis().params();
    b.param("basis_q", q).param("basis_p", p).param("closure_depth", d).param("max_word_len", max_word_len);
    b.metric("basis_size", rep.basis().len()).metric("core_size", rep.basis().core().len());

    let ops: Vec<_> = (0..n).map(|s| rep.operator_of(&gen(s))).collect::<Result<_, _>>()?;
    let source = |s: usize| Op::source_projection(&ops[s]);
    let range = |s: usize| Op::range_projection(&ops[s]);

    let pairs = ck_pairs(n);
    b.metric("ck_pairs", pairs.len());
    let mut disagreements = 0usize;
    for &(x, y) in &pairs {
        let ctx = || format!("X={} Y={}", mask_name(x, &names), mask_name(y, &names));
        let mut factors = Vec::new();
        for i in 0..n {
            if x & (1 << i) != 0 {
                factors.push(source(i));
            }
            if y & (1 << i) != 0 {
                factors.push(source(i).one_minus());
            }
        }
        let lhs = Op::compose(factors);
        let rhs = Op::Sum((0..n).map(|j| (ck_coefficient(&matrix, x, y, j) as i64, range(j))).collect());
        let c = rep.compare(&lhs, &rhs);
        let op_ok = rep.record(&mut b, "cka", &c, ctx);
        if symbolic {
            let r = Resolution::new(1, 1);
            let mut left = alg.full(r)?;
            let mut right = alg.empty(r);
            for i in 0..n {
                let d_inv = alg.domain_set(&gen(i).inverse(), r)?;
                if x & (1 << i) != 0 {
                    left = alg.meet(&left, &d_inv)?;
                }
                if y & (1 << i) != 0 {
                    left = alg.meet(&left, &alg.complement(&d_inv)?)?;
                }
                if ck_coefficient(&matrix, x, y, i) == 1 {
                    right = alg.join(&right, &alg.domain_set(&gen(i), r)?)?;
                }
            }
            let set_ok = alg.set_eq(&left, &right)?;
            b.check("cka-symbolic", set_ok, || format!("{}: {} vs {}", ctx(), left.render(&names), right.render(&names)));
            if set_ok != op_ok {
                disagreements += 1;
            }
            b.check("cka-agreement", set_ok == op_ok, || format!("{}: operator {op_ok}, sets {set_ok}", ctx()));
        }
    }
    b.metric("symbolic_disagreements", disagreements);

    for i in 0..n {
        for j in 0..n {
            let ctx = || format!("i={} j={}", names[i], names[j]);
            let l = Op::compose(vec![source(i), source(j)]);
            let r = Op::compose(vec![source(j), source(i)]);
            rep.check_identity(&mut b, "ckb", &l, &r, ctx);
            if i != j {
                let l = Op::compose(vec![Op::Adjoint(ops[i].clone()), Op::S(ops[j].clone())]);
                rep.check_identity(&mut b, "ckc", &l, &Op::Zero, ctx);
            }
            let l = Op::compose(vec![source(i), Op::S(ops[j].clone())]);
            let r = if matrix[i][j] == 1 { Op::S(ops[j].clone()) } else { Op::Zero };
            rep.check_identity(&mut b, "ckd", &l, &r, ctx);
        }
    }

    verify_word_relations(rep, &matrix, max_word_len, &mut b)?;
    Ok(b.finish(floor))
}

fn s_word(rep: &Representation<'_>, w: &[Symbol]) -> Result<Op, ShiftError> {
    rep.s(&ReducedWord::positive(w))
}

/// Relations among `S_μ` for positive words `μ`.
fn verify_word_relations(rep: &Representation<'_>, matrix: &[Vec<u8>], max_len: usize, b: &mut ReportBuilder) -> Result<(), ShiftError> {
    let names = rep.algebra().presentation().alphabet().names().to_vec();
    let fg = FreeGroup::new(matrix.len());
    let words: Vec<Word> = (0..=max_len).flat_map(|k| fg.positive_words(k)).collect();
    let render = |w: &[Symbol]| if w.is_empty() { "ε".to_string() } else { w.iter().map(|&s| names[s as usize]).collect() };

    for mu in &words {
        for nu in &words {
            let ctx = || format!("mu={} nu={}", render(mu), render(nu));
            let concat: Word = mu.iter().chain(nu).copied().collect();
            let l = Op::compose(vec![s_word(rep, mu)?, s_word(rep, nu)?]);
            rep.check_identity(b, "ckpb", &l, &s_word(rep, &concat)?, ctx);
            if mu.len() == nu.len() && mu != nu {
                let l = Op::compose(vec![rep.s_adj(&ReducedWord::positive(mu))?, s_word(rep, nu)?]);
                rep.check_identity(b, "ckpc", &l, &Op::Zero, ctx);
            }
        }
        if let Some(&last) = mu.last() {
            let allowed = mu.windows(2).all(|p| matrix[p[0] as usize][p[1] as usize] == 1);
            let s = rep.operator_of(&ReducedWord::positive(mu))?;
            let rhs = if allowed { Op::source_projection(&rep.operator_of(&gen(last as usize))?) } else { Op::Zero };
            rep.check_identity(b, "ckpd", &Op::source_projection(&s), &rhs, || format!("mu={}", render(mu)));
        }
    }

    // Source projections commute, and nonzero S_g come from normal forms.
    let ball = fg.ball(max_len.min(3));
    for h in &ball {
        let sh = rep.operator_of(h)?;
        for i in &ball {
            let si = rep.operator_of(i)?;
            let l = Op::compose(vec![Op::source_projection(&sh), Op::source_projection(&si)]);
            let r = Op::compose(vec![Op::source_projection(&si), Op::source_projection(&sh)]);
            rep.check_identity(b, "ckpa", &l, &r, || format!("h={} i={}", h.render(&names), i.render(&names)));
        }
        if sh.is_zero() {
            continue;
        }
        match h.one_sided_normal_form() {
            Some((mu, nu)) => {
                let r = Op::compose(vec![s_word(rep, &mu)?, rep.s_adj(&ReducedWord::positive(&nu))?]);
                rep.check_identity(b, "ckpe", &Op::S(sh.clone()), &r, || format!("g={}", h.render(&names)));
            }
            None => b.check("ckpe", false, || format!("S[{}] nonzero without normal form", h.render(&names))),
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean_algebra::Algebra;
    use crate::representation::FiniteBasis;
    use crate::shift_space::ShiftPresentation;

    #[test]
    fn coefficients() {
        let golden = vec![vec![1, 1], vec![1, 0]];
        // X = {a}, Y = {b}: A(a,j)(1 - A(b,j)) is 1 only at j = b.
        assert_eq!(ck_coefficient(&golden, 0b01, 0b10, 0), 0);
        assert_eq!(ck_coefficient(&golden, 0b01, 0b10, 1), 1);
        assert_eq!(ck_pairs(2).len(), 16);
    }

    #[test]
    fn golden_mean_relations_hold() {
        let alg = Algebra::from_presentation(ShiftPresentation::golden_mean(Side::OneSided)).unwrap();
        let basis = FiniteBasis::build(&alg, 1, 2, 6).unwrap();
        let rep = Representation::new(&alg, basis);
        let r = verify_ck_relations(&rep, true, 2, 0.0).unwrap();
        assert!(r.counterexamples.is_empty(), "{:?}", r.counterexamples);
        assert_eq!(r.metrics["symbolic_disagreements"], 0);
    }
}
