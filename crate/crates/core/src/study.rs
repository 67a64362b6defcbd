//! Refinement-study helpers: decay-rate fits and CSV tables.

/// Gaps below this are treated as quadrature noise and left out of slope fits.
pub const SLOPE_FLOOR: f64 = 1e-13;

/// Least-squares slope of `log2 value` against `log2 h`, skipping values below
/// [`SLOPE_FLOOR`]. `None` with fewer than two usable points.
pub fn fit_slope(h: &[f64], values: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = h
        .iter()
        .zip(values)
        .filter(|(h, v)| **v >= SLOPE_FLOOR && **h > 0.0 && v.is_finite())
        .map(|(h, v)| (h.log2(), v.log2()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// A record that renders as one CSV line.
pub trait CsvRow {
    const HEADER: &'static str;
    fn fields(&self) -> Vec<String>;
}

/// Shortest round-trip representation.
pub fn fmt_real(x: f64) -> String {
    format!("{x:e}")
}

/// Renders rows under their header, preceded by `# `-prefixed comment lines.
pub fn to_csv<R: CsvRow>(comments: &[String], rows: &[R]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    out.push_str(R::HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.fields().join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law_is_exact() {
        let h = [0.1, 0.05, 0.025, 0.0125];
        let v: Vec<f64> = h.iter().map(|h| 3.0 * h * h).collect();
        assert!((fit_slope(&h, &v).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn floor_values_are_skipped() {
        let h = [0.1, 0.05, 0.025];
        assert!((fit_slope(&h, &[0.1, 0.05, 1e-16]).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(fit_slope(&h, &[0.0, 0.0, 0.0]), None);
    }
}
