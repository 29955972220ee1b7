use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Numbers are written with 9 significant digits in scientific notation.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.8e}")
}

/// CSV text with a header row and numeric columns.
pub fn csv_string(header: &[&str], rows: &[Vec<f64>]) -> Result<String> {
    let mut out = header.join(",");
    out.push('\n');
    for (i, row) in rows.iter().enumerate() {
        if row.len() != header.len() {
            return Err(Error::Validation(format!("csv row {i} has {} columns, header has {}", row.len(), header.len())));
        }
        let cells: Vec<String> = row.iter().map(|v| fmt_num(*v)).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    Ok(out)
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    std::fs::write(path, csv_string(header, rows)?)?;
    Ok(())
}

/// Parse CSV written by [`write_csv`] back into a header and rows.
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Validation(format!("{} is empty", path.display())))?
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.split(',')
                .map(|c| c.parse::<f64>().map_err(|e| Error::Validation(format!("bad number '{c}': {e}"))))
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok((header, rows))
}
