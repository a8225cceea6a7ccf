//! Sbox text files.
//!
//! ```text
//! n=3 poly=0xb
//! 0 1 3 4 5 6 7 2
//! ```
//!
//! The first non-comment line is the header; `poly` may be omitted, in which
//! case the default reduction polynomial for `n` is used. The remaining
//! whitespace-separated tokens are the `2^n` outputs in hex, for inputs
//! `0 .. 2^n - 1`. Anything after `#` on a line is a comment.

use std::fmt::Write as _;

use sboxlab_core::{default_reduction_poly, Field, SBox};
use thiserror::Error;

/// Values per line in written files.
const PER_LINE: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError {
        line,
        message: message.into(),
    }
}

/// Parses a hex number with an optional `0x` prefix.
pub fn parse_hex(token: &str) -> Option<u32> {
    let digits = token
        .strip_prefix("0x")
        .or_else(|| token.strip_prefix("0X"))
        .unwrap_or(token);
    u32::from_str_radix(digits, 16).ok()
}

fn parse_header(line: usize, text: &str) -> Result<Field, FormatError> {
    let mut n = None;
    let mut poly = None;
    for token in text.split_whitespace() {
        if let Some(v) = token.strip_prefix("n=") {
            n = Some(v.parse::<u32>().map_err(|_| err(line, format!("bad degree `{v}`")))?);
        } else if let Some(v) = token.strip_prefix("poly=") {
            poly = Some(parse_hex(v).ok_or_else(|| err(line, format!("bad polynomial `{v}`")))?);
        } else {
            return Err(err(line, format!("unexpected header token `{token}`")));
        }
    }
    let n = n.ok_or_else(|| err(line, "header must start with n=<int>"))?;
    let poly = match poly {
        Some(p) => p,
        None => default_reduction_poly(n).map_err(|e| err(line, e.to_string()))?,
    };
    Field::new(n, poly).map_err(|e| err(line, e.to_string()))
}

pub fn parse_sbox(text: &str) -> Result<SBox, FormatError> {
    let mut field = None;
    let mut values = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some(field) = field else {
            field = Some(parse_header(line, content)?);
            continue;
        };
        for token in content.split_whitespace() {
            let v = parse_hex(token).ok_or_else(|| err(line, format!("bad hex value `{token}`")))?;
            if !field.contains(v) {
                return Err(err(
                    line,
                    format!("value {v:#x} out of range for n={}", field.degree()),
                ));
            }
            if values.len() == field.order() {
                return Err(err(line, format!("more than {} values", field.order())));
            }
            values.push(v);
        }
    }
    let field = field.ok_or_else(|| err(last_line.max(1), "missing header"))?;
    if values.len() != field.order() {
        return Err(err(
            last_line,
            format!("expected {} values, found {}", field.order(), values.len()),
        ));
    }
    SBox::from_lut(field, values).map_err(|e| err(last_line, e.to_string()))
}

pub fn write_sbox(f: &SBox) -> String {
    write_sbox_with_comment(f, None)
}

/// Canonical writer; `comment` goes on its own `# ` line after the header.
pub fn write_sbox_with_comment(f: &SBox, comment: Option<&str>) -> String {
    let field = f.field();
    let mut out = format!("n={} poly={:#x}\n", field.degree(), field.reduction_poly());
    if let Some(c) = comment {
        let _ = writeln!(out, "# {c}");
    }
    for chunk in f.lut().chunks(PER_LINE) {
        let line: Vec<String> = chunk.iter().map(|v| format!("{v:x}")).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}
