//! Left special elements and the properties (*) and (**).
//!
//! (*): every word `μ` is the only length-`|μ|` predecessor of some point.
//! (**): (*) holds, there are finitely many left special elements, and none
//! of them is eventually periodic.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use serde_json::json;

use crate::free_group::{Symbol, Word};
use crate::report::{Report, ReportBuilder, Verdict};
use crate::shift_space::{ShiftError, ShiftPresentation};

/// A left special factor of the scan depth, standing for the left special
/// sequences it begins.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub word: Word,
    /// Letters `a` with `a·word` in the language; at least two.
    pub extensions: BTreeSet<Symbol>,
    /// The word has a period of at most a third of its length.
    pub periodic: bool,
    /// Index of its tail-equivalence class.
    pub class: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpecialElementLedger {
    pub depth: usize,
    /// Number of left special factors of each length `1..=depth`.
    pub counts: Vec<usize>,
    pub candidates: Vec<Candidate>,
    pub classes: usize,
    /// Number of classes, reported when the counts are constant over the
    /// last third of the lengths.
    pub n_x: Option<usize>,
}

impl SpecialElementLedger {
    pub fn counts_stable(&self) -> bool {
        self.n_x.is_some()
    }
}

fn left_extensions(pres: &ShiftPresentation, w: &[Symbol]) -> Result<BTreeSet<Symbol>, ShiftError> {
    let mut out = BTreeSet::new();
    for a in 0..pres.rank() as Symbol {
        let mut v = vec![a];
        v.extend_from_slice(w);
        if pres.is_factor(&v)? {
            out.insert(a);
        }
    }
    Ok(out)
}

fn has_short_period(w: &[Symbol]) -> bool {
    (1..=w.len() / 3).any(|p| (p..w.len()).all(|i| w[i] == w[i - p]))
}

/// Whether `u` and `v` agree after dropping at most a third of each.
fn tail_equivalent(u: &[Symbol], v: &[Symbol]) -> bool {
    let n = u.len().min(v.len());
    let lag = n / 3;
    let overlap = n - lag;
    (0..=lag).any(|i| (0..=lag).any(|j| u[i..i + overlap] == v[j..j + overlap]))
}

/// Left special factors of every length up to `depth`, grouped at the
/// deepest level into tail-equivalence classes.
pub fn left_special_scan(pres: &ShiftPresentation, depth: usize) -> Result<SpecialElementLedger, ShiftError> {
    if depth == 0 {
        return Err(ShiftError::Invalid("scan depth must be at least 1".into()));
    }
    let mut counts = Vec::new();
    let mut deepest = Vec::new();
    for n in 1..=depth {
        let mut level = Vec::new();
        for w in pres.factors(n)?.iter() {
            let ext = left_extensions(pres, w)?;
            if ext.len() >= 2 {
                level.push((w.clone(), ext));
            }
        }
        counts.push(level.len());
        if n == depth {
            deepest = level;
        }
    }
    let mut class_of: Vec<usize> = (0..deepest.len()).collect();
    for i in 0..deepest.len() {
        for j in 0..i {
            if tail_equivalent(&deepest[i].0, &deepest[j].0) {
                let (ci, cj) = (class_of[i], class_of[j]);
                for c in class_of.iter_mut() {
                    if *c == ci {
                        *c = cj;
                    }
                }
            }
        }
    }
    let mut renumber = BTreeMap::new();
    for c in &class_of {
        let next = renumber.len();
        renumber.entry(*c).or_insert(next);
    }
    let candidates: Vec<Candidate> = deepest
        .into_iter()
        .zip(&class_of)
        .map(|((word, extensions), c)| Candidate { periodic: has_short_period(&word), word, extensions, class: renumber[c] })
        .collect();
    let classes = renumber.len();
    let tail = &counts[depth - depth / 3 - 1..];
    let n_x = tail.iter().all(|&c| c == tail[0]).then_some(classes);
    Ok(SpecialElementLedger { depth, counts, candidates, classes, n_x })
}

/// Search for a word `w` with word-level `𝒫_{|μ|}(w) = {μ}` for every factor
/// `μ` with `|μ| ≤ max_len`.
///
/// For a finite-type shift with memory `s`, predecessor sets of words longer
/// than `s` are those of their length-`s` prefixes, so searching witnesses
/// of length at most `s` is exhaustive and a failure is exact. Otherwise
/// witnesses are searched up to `witness_bound` and a miss is inconclusive.
pub fn check_property_star(pres: &ShiftPresentation, max_len: usize, witness_bound: usize) -> Result<Report, ShiftError> {
    let mut b = ReportBuilder::new("property-star");
    b.param("max_len", max_len).param("witness_bound", witness_bound);
    let exhaustive = pres.memory();
    let bound = exhaustive.map(|s| s.max(1)).unwrap_or(witness_bound);
    b.metric("exhaustive", exhaustive.is_some());
    for n in 1..=max_len {
        let mut missing: BTreeSet<Word> = pres.factors(n)?.iter().cloned().collect();
        for m in 1..=bound {
            if missing.is_empty() {
                break;
            }
            // predecessor sets of all factors of length m at once
            let mut preds: BTreeMap<&[Symbol], BTreeSet<&[Symbol]>> = BTreeMap::new();
            let joint = pres.factors(n + m)?;
            for v in joint.iter() {
                preds.entry(&v[n..]).or_default().insert(&v[..n]);
            }
            for p in preds.values() {
                if p.len() == 1 {
                    let mu = p.iter().next().expect("one predecessor").to_vec();
                    missing.remove(&mu);
                }
            }
        }
        let total = pres.factors(n)?.len();
        b.metric(&format!("witnessed.{n}"), total - missing.len());
        if let Some(mu) = missing.iter().next() {
            let name = pres.alphabet().render(mu);
            if exhaustive.is_some() {
                b.metric("witness", name.clone());
                b.check("singleton-predecessors", false, || format!("no point has {{{name}}} as its predecessors of length {n}"));
                return Ok(b.finish(0.0));
            }
            b.skip("singleton-predecessors");
            b.inconclusive(format!("no witness of length ≤ {bound} for μ = {name}"));
            return Ok(b.finish(1.0));
        }
        for _ in 0..total {
            b.check("singleton-predecessors", true, String::new);
        }
    }
    Ok(b.finish(1.0))
}

/// Property (**): (*) up to `max_len`, stable and finite left special
/// counts up to `depth`, and no periodic candidate.
pub fn check_property_starstar(pres: &ShiftPresentation, max_len: usize, depth: usize, witness_bound: usize) -> Result<(Report, SpecialElementLedger), ShiftError> {
    let star = check_property_star(pres, max_len, witness_bound)?;
    let ledger = left_special_scan(pres, depth)?;
    let mut b = ReportBuilder::new("property-starstar");
    b.param("max_len", max_len).param("depth", depth).param("witness_bound", witness_bound);
    b.metric("left_special_counts", json!(ledger.counts));
    b.metric("classes", ledger.classes);
    if let Some(n) = ledger.n_x {
        b.metric("n_x", n);
    }
    match star.verdict {
        Verdict::Pass => b.check("property-star", true, String::new),
        Verdict::Fail => b.check("property-star", false, || star.counterexamples.join("; ")),
        Verdict::Inconclusive => {
            b.skip("property-star");
            b.inconclusive("property (*) undecided");
        }
    }
    // A strictly growing count means infinitely many left special elements.
    let growing = ledger.counts.windows(2).skip(depth / 2).all(|w| w[1] > w[0]) && depth >= 3;
    if growing {
        b.check("finitely-many", false, || format!("left special counts grow: {:?}", ledger.counts));
    } else if ledger.counts_stable() {
        b.check("finitely-many", true, String::new);
    } else {
        b.skip("finitely-many");
        b.inconclusive(format!("left special counts not stable: {:?}", ledger.counts));
    }
    for c in &ledger.candidates {
        b.check("nonperiodic", !c.periodic, || format!("candidate {} is periodic", pres.alphabet().render(&c.word)));
    }
    Ok((b.finish(1.0), ledger))
}
