//! Law reports: one record per certified law, serialized either as a
//! human-readable table or as line-delimited JSON.
//!
//! Line-delimited schema (one JSON object per line, keys in this order):
//!
//! ```text
//! {"type":"suite","suite":<string>,"status":"pass"|"fail","laws":<int>,"failed":<int>}
//! {"type":"law","law":<string>,"anchor":<string>,"status":"pass"|"fail",
//!  "mode":"exhaustive"|"sampled"|"single","checked":<int>,"failures":<int>,
//!  "witness":<string|null>,"note":<string|null>}
//! ```
//!
//! Law lines follow the suite line sorted by `law`. Elapsed times are only
//! emitted (as `"elapsed_ms"`) when explicitly requested, so the default output
//! is byte-identical across runs with the same seed.

use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled,
    Single,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LawRecord {
    pub law: String,
    pub anchor: String,
    pub status: Status,
    pub mode: Mode,
    pub checked: u64,
    pub failures: u64,
    pub witness: Option<String>,
    pub note: Option<String>,
    pub elapsed: Duration,
}

impl LawRecord {
    /// A record for a single deterministic computation.
    pub fn single(law: impl Into<String>, anchor: impl Into<String>, outcome: Result<(), String>) -> Self {
        let (status, failures, witness) = match outcome {
            Ok(()) => (Status::Pass, 0, None),
            Err(w) => (Status::Fail, 1, Some(w)),
        };
        LawRecord {
            law: law.into(),
            anchor: anchor.into(),
            status,
            mode: Mode::Single,
            checked: 1,
            failures,
            witness,
            note: None,
            elapsed: Duration::ZERO,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Serialize)]
struct SuiteLine<'a> {
    #[serde(rename = "type")]
    kind: &'static str,
    suite: &'a str,
    status: Status,
    laws: usize,
    failed: usize,
}

#[derive(Serialize)]
struct LawLine<'a> {
    #[serde(rename = "type")]
    kind: &'static str,
    law: &'a str,
    anchor: &'a str,
    status: Status,
    mode: Mode,
    checked: u64,
    failures: u64,
    witness: &'a Option<String>,
    note: &'a Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct LawReport {
    pub suite: String,
    pub records: Vec<LawRecord>,
}

impl LawReport {
    pub fn new(suite: impl Into<String>) -> Self {
        LawReport {
            suite: suite.into(),
            records: Vec::new(),
        }
    }

    pub fn push(&mut self, record: LawRecord) {
        self.records.push(record);
    }

    pub fn extend(&mut self, records: impl IntoIterator<Item = LawRecord>) {
        self.records.extend(records);
    }

    /// Appends another report's records, prefixing nothing.
    pub fn absorb(&mut self, other: LawReport) {
        self.records.extend(other.records);
    }

    /// Overall status: fail iff any record fails.
    pub fn status(&self) -> Status {
        if self.records.iter().all(LawRecord::passed) {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn passed(&self) -> bool {
        self.status() == Status::Pass
    }

    pub fn failed(&self) -> impl Iterator<Item = &LawRecord> {
        self.records.iter().filter(|r| !r.passed())
    }

    pub fn record(&self, law: &str) -> Option<&LawRecord> {
        self.records.iter().find(|r| r.law == law)
    }

    /// Sorts records by law id (stable, so duplicate ids keep insertion order).
    pub fn sorted(mut self) -> Self {
        self.records.sort_by(|a, b| a.law.cmp(&b.law));
        self
    }

    pub fn elapsed(&self) -> Duration {
        self.records.iter().map(|r| r.elapsed).sum()
    }

    pub fn to_jsonl(&self, timings: bool) -> String {
        let mut out = String::new();
        let failed = self.failed().count();
        let head = SuiteLine {
            kind: "suite",
            suite: &self.suite,
            status: self.status(),
            laws: self.records.len(),
            failed,
        };
        out.push_str(&serde_json::to_string(&head).expect("serializable"));
        out.push('\n');
        for r in &self.records {
            let line = LawLine {
                kind: "law",
                law: &r.law,
                anchor: &r.anchor,
                status: r.status,
                mode: r.mode,
                checked: r.checked,
                failures: r.failures,
                witness: &r.witness,
                note: &r.note,
                elapsed_ms: timings.then_some(r.elapsed.as_secs_f64() * 1e3),
            };
            out.push_str(&serde_json::to_string(&line).expect("serializable"));
            out.push('\n');
        }
        out
    }

    pub fn to_table(&self) -> String {
        let law_w = self.records.iter().map(|r| r.law.len()).max().unwrap_or(3).max(3);
        let anchor_w = self.records.iter().map(|r| r.anchor.len()).max().unwrap_or(6).max(6);
        let mut out = String::new();
        let _ = writeln!(out, "suite {} : {}", self.suite, status_word(self.status()));
        let _ = writeln!(
            out,
            "{:<law_w$}  {:<anchor_w$}  {:<6}  {:<10}  {:>10}  {:>9}  {:>10}",
            "law", "anchor", "status", "mode", "checked", "failures", "ms"
        );
        for r in &self.records {
            let mode = match r.mode {
                Mode::Exhaustive => "exhaustive",
                Mode::Sampled => "sampled",
                Mode::Single => "single",
            };
            let _ = writeln!(
                out,
                "{:<law_w$}  {:<anchor_w$}  {:<6}  {:<10}  {:>10}  {:>9}  {:>10.1}",
                r.law,
                r.anchor,
                status_word(r.status),
                mode,
                r.checked,
                r.failures,
                r.elapsed.as_secs_f64() * 1e3
            );
            if let Some(w) = &r.witness {
                let _ = writeln!(out, "    witness: {w}");
            }
            if let Some(n) = &r.note {
                let _ = writeln!(out, "    note: {n}");
            }
        }
        out
    }
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_status_tracks_failures() {
        let mut r = LawReport::new("demo");
        r.push(LawRecord::single("b", "Eq 1", Ok(())));
        assert!(r.passed());
        r.push(LawRecord::single("a", "Eq 2", Err("x".into())));
        assert!(!r.passed());
        let r = r.sorted();
        assert_eq!(r.records[0].law, "a");
    }

    #[test]
    fn jsonl_omits_timings_by_default() {
        let mut r = LawReport::new("demo");
        let mut rec = LawRecord::single("a", "Eq 2", Ok(()));
        rec.elapsed = Duration::from_millis(5);
        r.push(rec);
        let text = r.to_jsonl(false);
        assert!(!text.contains("elapsed_ms"));
        assert_eq!(text.lines().count(), 2);
        assert!(r.to_jsonl(true).contains("elapsed_ms"));
        for line in text.lines() {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            assert!(v.get("type").is_some());
        }
    }
}
