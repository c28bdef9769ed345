//! CSV output: RFC-4180 quoting, `NA` for undefined values, and the fixed
//! numeric formats every table in this tool uses:
//!
//! * statistics, p-values, rates, ratios, powers, standard errors —
//!   scientific with 10 significant digits (`{:.9e}`);
//! * −log10(p) — fixed, 6 decimals;
//! * grid / frequency values — fixed, 6 decimals;
//! * counts — plain integers.
//!
//! One format per column kind keeps outputs byte-stable across runs, which
//! the determinism contract depends on.

use crate::errors::{input, Result};
use std::borrow::Cow;
use std::io::Write;

pub const NA: &str = "NA";

/// Quote a field per RFC 4180 when it contains a comma, quote, or newline.
pub fn field(text: &str) -> Cow<'_, str> {
    if text.contains(['"', ',', '\n', '\r']) {
        Cow::Owned(format!("\"{}\"", text.replace('"', "\"\"")))
    } else {
        Cow::Borrowed(text)
    }
}

/// Scientific notation, 10 significant digits.
pub fn sci(x: f64) -> String {
    format!("{x:.9e}")
}

pub fn opt_sci(x: Option<f64>) -> String {
    x.map(sci).unwrap_or_else(|| NA.to_string())
}

/// Fixed-point, 6 decimals (grid values, frequencies, −log10 p).
pub fn fixed6(x: f64) -> String {
    format!("{x:.6}")
}

pub fn opt_fixed6(x: Option<f64>) -> String {
    x.map(fixed6).unwrap_or_else(|| NA.to_string())
}

pub struct CsvWriter<W: Write> {
    sink: W,
    columns: usize,
}

impl<W: Write> CsvWriter<W> {
    /// Start a CSV stream by writing the header row.
    pub fn with_header(mut sink: W, header: &[&str]) -> Result<Self> {
        let line: Vec<Cow<'_, str>> = header.iter().map(|h| field(h)).collect();
        writeln!(sink, "{}", line.join(",")).map_err(|e| input(format!("write error: {e}")))?;
        Ok(Self { sink, columns: header.len() })
    }

    pub fn row(&mut self, fields: &[String]) -> Result<()> {
        debug_assert_eq!(fields.len(), self.columns, "ragged CSV row");
        let line: Vec<Cow<'_, str>> = fields.iter().map(|f| field(f)).collect();
        writeln!(self.sink, "{}", line.join(","))
            .map_err(|e| input(format!("write error: {e}")))
    }

    pub fn finish(mut self) -> Result<()> {
        self.sink.flush().map_err(|e| input(format!("write error: {e}")))
    }
}
