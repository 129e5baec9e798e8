//! Tabular output and number formatting.

use std::path::Path;

use crate::error::CliError;

/// Writes a header and rows as CSV.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let name = path.display().to_string();
    let mut writer =
        csv::Writer::from_path(path).map_err(|e| CliError::io(std::io::Error::other(e), &name))?;
    let io = |e: csv::Error| CliError::io(std::io::Error::other(e), &name);
    writer.write_record(header).map_err(io)?;
    for row in rows {
        writer.write_record(row).map_err(io)?;
    }
    writer.flush().map_err(|e| CliError::io(e, &name))
}

/// `x` rounded to `digits` significant digits, in positional notation for
/// moderate magnitudes and scientific notation otherwise.
pub fn format_significant(x: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let exponent: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..15).contains(&exponent) {
        let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}
