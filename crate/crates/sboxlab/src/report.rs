//! Plain-text search reports.
//!
//! The layout is `key=value` lines, a `[classes]` section and a `[witnesses]`
//! section with one `A B C` hex triple per line. [`parse_report`] reads the
//! same layout back.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use sboxlab_core::search::{AbcTriple, SearchResult};

use crate::format::{parse_hex, FormatError};

/// Witnesses written unless the caller asks for all of them.
pub const DEFAULT_SHOWN: usize = 32;

fn flag(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "true",
        Some(false) => "false",
        None => "unverified",
    }
}

pub fn write_report(result: &SearchResult, max_witnesses: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# sboxlab search report");
    let _ = writeln!(out, "family=x^(2^(s+1)+2)+A*x+B*x^4+C*x^16");
    let _ = writeln!(out, "n={}", result.n);
    let _ = writeln!(out, "s={}", result.s);
    let _ = writeln!(out, "poly={:#x}", result.reduction_poly);
    let _ = writeln!(out, "total_candidates={}", result.total_candidates);
    let _ = writeln!(out, "permutation_count={}", result.permutation_count);
    let _ = writeln!(out, "all_delta_4={}", flag(result.all_delta_4));
    let _ = writeln!(out, "all_beta_4={}", flag(result.all_beta_4));
    let _ = writeln!(out, "truncated={}", result.truncated);
    let _ = writeln!(out, "[classes]");
    for (label, count) in &result.classified_counts {
        let _ = writeln!(out, "{label}={count}");
    }
    let shown = result.witnesses.len().min(max_witnesses);
    let _ = writeln!(out, "[witnesses] shown={shown}");
    for t in &result.witnesses[..shown] {
        let _ = writeln!(out, "{:#04x} {:#04x} {:#04x}", t.a, t.b, t.c);
    }
    out
}

/// Contents of a report file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParsedReport {
    pub fields: BTreeMap<String, String>,
    pub classes: BTreeMap<String, u64>,
    pub witnesses: Vec<AbcTriple>,
}

impl ParsedReport {
    pub fn get_u64(&self, key: &str) -> Option<u64> {
        self.fields.get(key).and_then(|v| v.parse().ok())
    }
}

pub fn parse_report(text: &str) -> Result<ParsedReport, FormatError> {
    #[derive(PartialEq)]
    enum Section {
        Header,
        Classes,
        Witnesses,
    }
    let bad = |line: usize, message: &str| FormatError {
        line,
        message: message.to_string(),
    };
    let mut section = Section::Header;
    let mut report = ParsedReport::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        if content == "[classes]" {
            section = Section::Classes;
            continue;
        }
        if content.starts_with("[witnesses]") {
            section = Section::Witnesses;
            continue;
        }
        match section {
            Section::Header => {
                let (k, v) = content.split_once('=').ok_or_else(|| bad(line, "expected key=value"))?;
                report.fields.insert(k.to_string(), v.to_string());
            }
            Section::Classes => {
                let (k, v) = content.split_once('=').ok_or_else(|| bad(line, "expected label=count"))?;
                let v = v.parse().map_err(|_| bad(line, "bad count"))?;
                report.classes.insert(k.to_string(), v);
            }
            Section::Witnesses => {
                let parts: Vec<u32> = content
                    .split_whitespace()
                    .map(parse_hex)
                    .collect::<Option<_>>()
                    .ok_or_else(|| bad(line, "bad hex triple"))?;
                let [a, b, c] = parts[..] else {
                    return Err(bad(line, "expected three values"));
                };
                report.witnesses.push(AbcTriple { a, b, c });
            }
        }
    }
    Ok(report)
}
