//! CSV and JSON artifacts. Floats are written with 17 significant digits and files are
//! replaced atomically.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::geometry::TracedCurve;
use crate::jet::MapJet;
use crate::poisson::HarmonicSeries;

/// Round-trip safe scientific formatting, 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn row(out: &mut String, cols: &[f64]) {
    for (j, v) in cols.iter().enumerate() {
        if j > 0 {
            out.push(',');
        }
        out.push_str(&fmt_f64(*v));
    }
    out.push('\n');
}

/// `re,im,margin`
pub fn margin_csv(grid: &[Complex64], field: &[f64]) -> String {
    let mut out = String::from("re,im,margin\n");
    for (z, m) in grid.iter().zip(field) {
        row(&mut out, &[z.re, z.im, *m]);
    }
    out
}

/// `re,im,f_re,f_im,fz_re,fz_im,fzb_re,fzb_im,jac`
pub fn jets_csv(grid: &[Complex64], jets: &[MapJet]) -> String {
    let mut out = String::from("re,im,f_re,f_im,fz_re,fz_im,fzb_re,fzb_im,jac\n");
    for (z, j) in grid.iter().zip(jets) {
        row(
            &mut out,
            &[
                z.re, z.im, j.value.re, j.value.im, j.f_z.re, j.f_z.im, j.f_zbar.re, j.f_zbar.im,
                j.jacobian,
            ],
        );
    }
    out
}

/// `t,re,im`
pub fn curve_csv(curve: &TracedCurve) -> String {
    let mut out = String::from("t,re,im\n");
    for (j, p) in curve.points.iter().enumerate() {
        row(&mut out, &[curve.angle(j), p.re, p.im]);
    }
    out
}

/// `k,re,im` for every stored Fourier coefficient.
pub fn series_csv(series: &HarmonicSeries) -> String {
    let mut out = String::from("k,re,im\n");
    for (k, c) in series.coefficients().iter() {
        let _ = write!(out, "{k},");
        row(&mut out, &[c.re, c.im]);
    }
    out
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| crate::error::Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Writes `contents` to a temporary file next to `path`, then renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
    }

    #[test]
    fn margin_schema() {
        let s = margin_csv(&[Complex64::new(0.5, 0.0)], &[0.75]);
        let mut lines = s.lines();
        assert_eq!(lines.next(), Some("re,im,margin"));
        assert_eq!(lines.next(), Some("5.0000000000000000e-1,0.0000000000000000e0,7.5000000000000000e-1"));
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.csv");
        write_atomic(&p, "a\n").unwrap();
        write_atomic(&p, "b\n").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "b\n");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
