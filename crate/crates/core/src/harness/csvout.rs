//! CSV emission: RFC-4180 lines, floats at 17 significant digits.

use std::path::Path;

use crate::{Error, Result};

/// Format a float with 17 significant digits, enough to round-trip f64.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write a header plus preformatted rows, CRLF-terminated.
pub fn write_lines(path: &Path, header: &str, rows: &[String]) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
    }
    let mut out = String::with_capacity((rows.len() + 1) * 32);
    out.push_str(header);
    out.push_str("\r\n");
    for row in rows {
        out.push_str(row);
        out.push_str("\r\n");
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}
