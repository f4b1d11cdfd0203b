//! CSV and JSON emission.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::Result;
use crate::metrics::SparsificationCurve;
use crate::scalar::Scalar;

/// Formats `x` with `digits` significant digits in the style of C's `%.Ng`:
/// fixed notation for moderate exponents, scientific otherwise, trailing zeros trimmed.
pub fn format_sig(x: f64, digits: usize) -> String {
    let digits = digits.max(1);
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let m = trim_fraction(mantissa);
        return format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_fraction(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// CSV text with a header row and LF line endings; numbers use 9 significant digits.
pub fn csv_from_rows<T: Scalar>(header: &[&str], rows: &[(T, T)]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for (a, b) in rows {
        let _ = writeln!(out, "{},{}", format_sig(a.to_f64_lossy(), 9), format_sig(b.to_f64_lossy(), 9));
    }
    out
}

/// `c,total` rows of a loss scan.
pub fn loss_scan_csv<T: Scalar>(points: &[(T, T)]) -> String {
    csv_from_rows(&["c", "total"], points)
}

/// `density,error_rate` rows of a sparsification curve.
pub fn sparsification_csv<T: Scalar>(curve: &SparsificationCurve<T>) -> String {
    csv_from_rows(&["density", "error_rate"], &curve.points)
}

pub fn to_json<S: Serialize>(value: &S) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| crate::Error::format(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<S: Serialize>(value: &S, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_json(value)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(0.0, 9), "0");
        assert_eq!(format_sig(1.0, 9), "1");
        assert_eq!(format_sig(5.0 / 12.0, 9), "0.416666667");
        assert_eq!(format_sig(10.0, 9), "10");
        assert_eq!(format_sig(5.079401234567, 9), "5.07940123");
        assert_eq!(format_sig(1e-6, 9), "1e-06");
        assert_eq!(format_sig(123456789012.0, 9), "1.23456789e+11");
        assert_eq!(format_sig(-0.00012345, 9), "-0.00012345");
        assert_eq!(format_sig(9.9999999999, 9), "10");
    }

    #[test]
    fn csv_layout() {
        let csv = loss_scan_csv(&[(0.5f64, 1.25), (1.0, 2.0)]);
        assert_eq!(csv, "c,total\n0.5,1.25\n1,2\n");
    }
}
