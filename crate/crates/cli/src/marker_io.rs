//! The marker-file format.
//!
//! UTF-8 TSV with the exact header
//! `marker_id⇥chrom⇥pos⇥R0⇥R1⇥R⇥S0⇥S1⇥S`, one marker per row,
//! `#`-prefixed comment lines ignored anywhere. Per group (R = cases,
//! S = controls): the `0`/`1` columns count subjects carrying zero and one
//! copy of the counted allele, and the bare column is the group total —
//! two-copy homozygotes are the remainder. The counted allele is the minor
//! allele by convention of the producing pipeline; nothing here enforces
//! that.

use crate::errors::{input, CliError, Result};
use allelic::counts::{CaseControlTable, GroupGenotypeCounts};
use std::collections::HashSet;
use std::io::BufRead;

pub const HEADER: &str = "marker_id\tchrom\tpos\tR0\tR1\tR\tS0\tS1\tS";

#[derive(Debug, Clone)]
pub struct MarkerRecord {
    pub marker_id: String,
    pub chrom: String,
    pub pos: u64,
    pub table: CaseControlTable,
}

/// Streaming reader: one record per data line, constant memory per marker
/// (plus the id set for duplicate detection).
pub struct MarkerReader<B> {
    source: String,
    lines: B,
    line_no: usize,
    header_seen: bool,
    seen_ids: HashSet<String>,
}

impl<B: BufRead> MarkerReader<B> {
    pub fn new(source: impl Into<String>, reader: B) -> Self {
        Self {
            source: source.into(),
            lines: reader,
            line_no: 0,
            header_seen: false,
            seen_ids: HashSet::new(),
        }
    }

    fn fail(&self, msg: impl std::fmt::Display) -> CliError {
        input(format!("{}:{}: {msg}", self.source, self.line_no))
    }

    fn parse_row(&mut self, line: &str) -> Result<MarkerRecord> {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 9 {
            return Err(self.fail(format!(
                "expected 9 tab-separated fields, found {}",
                fields.len()
            )));
        }
        let marker_id = fields[0].to_string();
        if marker_id.is_empty() {
            return Err(self.fail("empty marker_id"));
        }
        if !self.seen_ids.insert(marker_id.clone()) {
            return Err(self.fail(format!("duplicate marker_id {marker_id:?}")));
        }
        let pos = self.parse_count(fields[2], "pos")?;
        let cases = self.parse_group(&fields[3..6], "cases (R0/R1/R)")?;
        let controls = self.parse_group(&fields[6..9], "controls (S0/S1/S)")?;
        Ok(MarkerRecord {
            marker_id,
            chrom: fields[1].to_string(),
            pos,
            table: CaseControlTable::new(cases, controls),
        })
    }

    fn parse_count(&self, text: &str, what: &str) -> Result<u64> {
        text.parse::<u64>()
            .map_err(|_| self.fail(format!("bad {what}: {text:?} is not a non-negative integer")))
    }

    fn parse_group(&self, fields: &[&str], what: &str) -> Result<GroupGenotypeCounts> {
        let zero = self.parse_count(fields[0], what)?;
        let het = self.parse_count(fields[1], what)?;
        let total = self.parse_count(fields[2], what)?;
        let used = zero
            .checked_add(het)
            .ok_or_else(|| self.fail(format!("{what}: counts overflow")))?;
        if used > total {
            return Err(self.fail(format!(
                "{what}: zero-copy + one-copy counts ({zero} + {het}) exceed the group total {total}"
            )));
        }
        // The stored `hom` is the two-copy class: total - zero - het.
        GroupGenotypeCounts::new(total - used, het, total).map_err(|e| self.fail(e))
    }
}

impl<B: BufRead> Iterator for MarkerReader<B> {
    type Item = Result<MarkerRecord>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let mut line = String::new();
            self.line_no += 1;
            match self.lines.read_line(&mut line) {
                Ok(0) => {
                    return if self.header_seen {
                        None
                    } else {
                        Some(Err(self.fail("empty file: missing header line")))
                    }
                }
                Ok(_) => {}
                Err(e) => return Some(Err(self.fail(format!("read error: {e}")))),
            }
            let line = line.trim_end_matches(['\n', '\r']);
            if line.starts_with('#') || (line.is_empty() && self.header_seen) {
                continue;
            }
            if !self.header_seen {
                self.header_seen = true;
                if line == HEADER {
                    continue;
                }
                return Some(Err(self.fail(format!(
                    "bad header: expected {HEADER:?}, got {line:?}"
                ))));
            }
            return Some(self.parse_row(line));
        }
    }
}
