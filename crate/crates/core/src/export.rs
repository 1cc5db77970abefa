//! Deterministic text output: 17 significant digits in scientific notation,
//! fixed column order.

use crate::operators::{FockState, UncertaintyReport};
use crate::spectrum::Spectrum;
use std::fmt::Write;

/// `{:.16e}`, which is locale independent and round-trips every f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// A CSV table; cells are written as given.
pub fn csv<S: AsRef<str>>(header: &[&str], rows: &[Vec<S>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<&str> = row.iter().map(|c| c.as_ref()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub const STATE_COLUMNS: [&str; 5] = ["n", "energy", "re_c", "im_c", "abs2"];

pub fn state_rows(state: &FockState, s: &Spectrum) -> Vec<Vec<String>> {
    state
        .coefficients
        .iter()
        .enumerate()
        .map(|(n, c)| {
            let e = s.energy_or_formula(n).unwrap_or(f64::NAN);
            vec![
                n.to_string(),
                fmt_f64(e),
                fmt_f64(c.re),
                fmt_f64(c.im),
                fmt_f64(c.norm_sqr()),
            ]
        })
        .collect()
}

pub fn state_csv(state: &FockState, s: &Spectrum) -> String {
    csv(&STATE_COLUMNS, &state_rows(state, s))
}

pub fn report_row(r: &UncertaintyReport) -> Vec<String> {
    r.values().iter().map(|v| fmt_f64(*v)).collect()
}

pub fn report_csv(r: &UncertaintyReport) -> String {
    csv(&UncertaintyReport::FIELDS, &[report_row(r)])
}

/// `# key = value` header lines echoing run parameters.
pub fn header_lines(pairs: &[(&str, String)]) -> String {
    let mut out = String::new();
    for (k, v) in pairs {
        let _ = writeln!(out, "# {k} = {v}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format() {
        assert_eq!(fmt_f64(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_f64(-0.1), "-1.0000000000000001e-1");
        let x = std::f64::consts::PI * 1e-7;
        assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn csv_layout() {
        let t = csv(&["a", "b"], &[vec!["1", "2"], vec!["3", "4"]]);
        assert_eq!(t, "a,b\n1,2\n3,4\n");
    }
}
