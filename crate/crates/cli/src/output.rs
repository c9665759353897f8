//! Text formats of the emitted artifacts.

use std::fmt::Write;

use num_complex::Complex64;
use obscat::fields::FieldGrid;

/// Twelve significant digits.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:.11e}")
    }
}

pub fn csv_row(cells: &[String]) -> String {
    let mut line = cells.join(",");
    line.push('\n');
    line
}

/// `re ± i im` with twelve decimals.
pub fn complex_fixed(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:.12} {sign} i {:.12}", z.re, z.im.abs())
}

/// Grid of moduli, one row per `j` (y ascending), one column per `k` (x
/// ascending); masked cells are `nan`.
pub fn grid_csv(grid: &FieldGrid, values: &[Option<Complex64>], field: &str) -> String {
    let s = grid.spec;
    let mut out = String::new();
    let _ = writeln!(out, "# field = {field}");
    let _ = writeln!(out, "# c = {}", s.c);
    let _ = writeln!(out, "# m = {}", s.m);
    let _ = writeln!(out, "# clearance = {}", s.clearance);
    let _ = writeln!(out, "# delta = {}", num(s.step()));
    let _ = writeln!(out, "# rows: j = 0..{} with y = -c + j*delta; columns: k = 0..{} with x = -c + k*delta", s.side() - 1, s.side() - 1);
    let _ = writeln!(out, "# mask: nan = hole or within clearance of a boundary");
    for j in 0..s.side() {
        let row: Vec<String> = (0..s.side())
            .map(|k| num(values[grid.index(k, j)].map_or(f64::NAN, |v| v.norm())))
            .collect();
        out.push_str(&csv_row(&row));
    }
    out
}

/// Parses a grid file back into rows of values.
pub fn parse_grid(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .map(|l| l.split(',').map(|v| v.parse().unwrap_or(f64::NAN)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(num(0.551550951838), "5.51550951838e-1");
        assert_eq!(num(-1.0), "-1.00000000000e0");
        assert_eq!(num(f64::NAN), "nan");
        assert_eq!(csv_row(&["a".into(), "b".into()]), "a,b\n");
    }

    #[test]
    fn complex_format() {
        assert_eq!(complex_fixed(Complex64::new(0.5, -0.25)), "0.500000000000 - i 0.250000000000");
        assert_eq!(complex_fixed(Complex64::new(-0.5, 0.0)), "-0.500000000000 + i 0.000000000000");
    }

    #[test]
    fn grid_round_trip() {
        assert_eq!(parse_grid("# x\n1.0,nan\n2.5e0,3\n")[1], vec![2.5, 3.0]);
        assert!(parse_grid("nan\n")[0][0].is_nan());
    }
}
