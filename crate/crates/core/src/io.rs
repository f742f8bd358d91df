//! Edge-list text input.
//!
//! One sentiment per line, `source target value`, separated by whitespace
//! and/or commas. Blank lines and lines starting with `#` or `%` are skipped,
//! which covers the SNAP `soc-sign-*` files.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::RawSentiment;

pub fn parse_edge_list(text: &str) -> Result<Vec<RawSentiment>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = trimmed
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|f| !f.is_empty())
            .collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: line_no,
                message: format!(
                    "expected `source target value`, found {} fields",
                    fields.len()
                ),
            });
        }
        let value = fields[2]
            .strip_prefix('+')
            .unwrap_or(fields[2])
            .parse::<i64>()
            .map_err(|_| Error::Parse {
                line: line_no,
                message: format!("value `{}` is not an integer", fields[2]),
            })?;
        out.push(RawSentiment::new(fields[0], fields[1], value));
    }
    Ok(out)
}

pub fn read_edge_list(path: &Path) -> Result<Vec<RawSentiment>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(&text)
}
