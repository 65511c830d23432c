//! Verification reports shared by every suite and the command-line driver.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Inconclusive,
    Fail,
}

/// Outcome of one suite. A failing report always carries a counterexample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub verdict: Verdict,
    pub params: BTreeMap<String, Value>,
    pub counterexamples: Vec<String>,
    /// Fraction of checked instances per identity.
    pub coverage: BTreeMap<String, f64>,
    pub timings_ms: BTreeMap<String, u64>,
    pub metrics: BTreeMap<String, Value>,
    /// Why the verdict is not a plain pass, when no counterexample exists.
    pub notes: Vec<String>,
}

/// Tally for one identity: instances checked against instances considered.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Tally {
    pub checked: usize,
    pub total: usize,
}

impl Tally {
    pub fn fraction(self) -> f64 {
        if self.total == 0 {
            1.0
        } else {
            self.checked as f64 / self.total as f64
        }
    }
}

/// Accumulates counterexamples and coverage while a suite runs.
#[derive(Debug)]
pub struct ReportBuilder {
    report: Report,
    tallies: BTreeMap<String, Tally>,
    failed: std::collections::BTreeSet<String>,
    inconclusive: bool,
    started: Instant,
}

/// Counterexample lists are capped so a badly broken run stays readable.
const MAX_COUNTEREXAMPLES: usize = 50;

impl ReportBuilder {
    pub fn new(suite: &str) -> Self {
        ReportBuilder {
            report: Report {
                suite: suite.to_string(),
                verdict: Verdict::Pass,
                params: BTreeMap::new(),
                counterexamples: Vec::new(),
                coverage: BTreeMap::new(),
                timings_ms: BTreeMap::new(),
                metrics: BTreeMap::new(),
                notes: Vec::new(),
            },
            tallies: BTreeMap::new(),
            failed: Default::default(),
            inconclusive: false,
            started: Instant::now(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.report.params.insert(key.to_string(), value.into());
        self
    }

    pub fn metric(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.report.metrics.insert(key.to_string(), value.into());
        self
    }

    pub fn fail(&mut self, message: impl Into<String>) {
        self.report.verdict = Verdict::Fail;
        if self.report.counterexamples.len() < MAX_COUNTEREXAMPLES {
            self.report.counterexamples.push(message.into());
        } else if self.report.counterexamples.len() == MAX_COUNTEREXAMPLES {
            self.report.counterexamples.push("further counterexamples omitted".into());
        }
    }

    /// Record `ok` for an identity, failing with `message` when false.
    pub fn check(&mut self, identity: &str, ok: bool, message: impl FnOnce() -> String) {
        let t = self.tallies.entry(identity.to_string()).or_default();
        t.checked += 1;
        t.total += 1;
        if !ok {
            self.failed.insert(identity.to_string());
            let m = message();
            self.fail(format!("{identity}: {m}"));
        }
    }

    /// Count an instance of an identity that could not be checked.
    pub fn skip(&mut self, identity: &str) {
        self.tallies.entry(identity.to_string()).or_default().total += 1;
    }

    pub fn inconclusive(&mut self, note: impl Into<String>) {
        self.inconclusive = true;
        self.report.notes.push(note.into());
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.report.notes.push(note.into());
    }

    pub fn tally(&self, identity: &str) -> Tally {
        self.tallies.get(identity).copied().unwrap_or_default()
    }

    /// Whether any identity whose name starts with `prefix` failed.
    pub fn failed_with_prefix(&self, prefix: &str) -> bool {
        self.failed.iter().any(|f| f.starts_with(prefix))
    }

    pub fn has_failed(&self) -> bool {
        self.report.verdict == Verdict::Fail
    }

    /// Close the report; identities whose coverage is below `floor` make a
    /// passing run inconclusive.
    pub fn finish(mut self, floor: f64) -> Report {
        for (name, t) in &self.tallies {
            let f = t.fraction();
            self.report.coverage.insert(name.clone(), f);
            if f < floor {
                self.inconclusive = true;
                self.report.notes.push(format!("coverage of {name} is {}/{} below floor {floor}", t.checked, t.total));
            }
            self.report
                .metrics
                .insert(format!("checked.{name}"), Value::from(t.checked));
        }
        if self.report.verdict != Verdict::Fail && self.inconclusive {
            self.report.verdict = Verdict::Inconclusive;
        }
        self.report.timings_ms.insert("total".into(), self.started.elapsed().as_millis() as u64);
        self.report
    }
}

impl Report {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Worst verdict over several reports.
    pub fn combined_verdict<'a>(reports: impl IntoIterator<Item = &'a Report>) -> Verdict {
        reports.into_iter().map(|r| r.verdict).max().unwrap_or(Verdict::Pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_precedence() {
        let mut b = ReportBuilder::new("t");
        b.check("x", true, String::new);
        assert_eq!(b.finish(0.9).verdict, Verdict::Pass);

        let mut b = ReportBuilder::new("t");
        b.check("x", true, String::new);
        b.skip("x");
        let r = b.finish(0.9);
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert_eq!(r.coverage["x"], 0.5);

        let mut b = ReportBuilder::new("t");
        b.skip("x");
        b.check("y", false, || "broken".into());
        let r = b.finish(0.9);
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.counterexamples, vec!["y: broken".to_string()]);
    }

    #[test]
    fn json_field_names() {
        let r = ReportBuilder::new("modsat").finish(0.9);
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in ["suite", "verdict", "params", "counterexamples", "coverage", "timings_ms"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["verdict"], "pass");
    }
}
