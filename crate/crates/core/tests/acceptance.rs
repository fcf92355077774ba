//! Acceptance criteria 1 to 11. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any criterion fails.

// `!(x <= tol)` style comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::Instant;

use harmdisk::geometry::{self, rotational_symmetry_defect, trace};
use harmdisk::numerics::wirtinger_fd;
use harmdisk::poisson::{circle_average_profile, perimeter_of_family, poisson_extend, sp_scan};
use harmdisk::verify::{
    area_cases, profile_drop, random_disk_points, standard_mus, standard_series, standard_specs,
    standard_shifts, PROFILE_RADII,
};
use harmdisk::{
    BoundaryFamily, BoundaryFunction, CurveReport, DiskSelfMap, ExtremalSpec, PlanarMap, PolarGrid,
    Result,
};
use num_complex::Complex64;

/// Worst-case findings of one criterion.
#[derive(Default)]
struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn at_most(&mut self, what: &str, value: f64, tol: f64) {
        if !(value <= tol) {
            self.failures.push(format!("{what}: {value:.3e} > {tol:.1e}"));
        }
    }

    fn holds(&mut self, what: &str, ok: bool) {
        if !ok {
            self.failures.push(what.to_string());
        }
    }

    fn note(&mut self, text: String) {
        self.notes.push(text);
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn grid() -> Vec<Complex64> {
    PolarGrid::default().points()
}

fn criterion_1(out: &mut Outcome) -> Result<()> {
    let s = ExtremalSpec::normalized(DiskSelfMap::Zero, 1.0)?;
    let worst = grid()
        .iter()
        .map(|&z| (s.schwarz_pick_margin(z) - (1.0 - z.norm_sqr())).abs())
        .fold(0.0, f64::max);
    out.at_most("margin vs 1-|z|^2", worst, 1e-12);
    let rep = CurveReport::of(&trace(&s, 0.999, 8192)?)?;
    let err = (rep.perimeter - 2.0 * PI * 0.999).abs();
    out.at_most("perimeter at r=0.999", err, 1e-5);
    out.holds("convex", rep.convex);
    out.note(format!("perimeter err {err:.1e}"));
    Ok(())
}

fn criterion_2(out: &mut Outcome) -> Result<()> {
    let r = 1.0 - 1e-4;
    for n in 1..=4u32 {
        let s = ExtremalSpec::normalized(DiskSelfMap::Monomial(n), 1.0)?;
        let rep = CurveReport::of(&trace(&s, r, 16384)?)?;
        out.holds(&format!("n={n} convex"), rep.convex);
        let rel = (rep.perimeter / (2.0 * PI) - 1.0).abs();
        out.at_most(&format!("n={n} perimeter rel. error"), rel, 1e-2);
        let defect = rotational_symmetry_defect(&s, r, 16384, n + 2)?;
        out.at_most(&format!("n={n} {}-fold symmetry defect", n + 2), defect, 1e-6);
        if n == 2 {
            let rel_area = (rep.area / (PI * PI / 4.0) - 1.0).abs();
            out.at_most("n=2 area vs pi^2/4", rel_area, 1e-2);
            out.note(format!("n=2 area rel. err {rel_area:.1e}"));
        }
        out.note(format!("n={n} perimeter rel. err {rel:.1e}"));
    }
    Ok(())
}

fn criterion_3(out: &mut Outcome) -> Result<()> {
    let g = grid();
    let mut worst: f64 = 0.0;
    for s in standard_specs() {
        worst = worst.max(g.iter().map(|&z| s.beltrami_residual(z)).fold(0.0, f64::max));
    }
    out.at_most("Beltrami residual", worst, 1e-13);
    out.note(format!("max residual {worst:.1e}"));
    Ok(())
}

fn criterion_4(out: &mut Outcome) -> Result<()> {
    let g = grid();
    let mut worst_over: f64 = f64::NEG_INFINITY;
    let mut worst_eq: f64 = 0.0;
    for s in standard_specs() {
        let max = s.margin_field(&g).into_iter().fold(f64::NEG_INFINITY, f64::max);
        worst_over = worst_over.max(max - 1.0);
        let at = s.schwarz_pick_margin(s.equality_point());
        worst_eq = worst_eq.max((at - 1.0).abs());
    }
    out.at_most("max margin - 1", worst_over, 1e-12);
    out.at_most("|margin at equality point - 1|", worst_eq, 1e-10);
    let shifts = standard_shifts();
    out.holds("shifts 0, 0.5, 0.3-0.6i", shifts == [c(0.0, 0.0), c(0.5, 0.0), c(0.3, -0.6)]);
    out.note(format!("equality err {worst_eq:.1e}"));
    Ok(())
}

fn criterion_5(out: &mut Outcome) -> Result<()> {
    let pts = random_disk_points(2024, 200, 0.9);
    let mut worst: f64 = 0.0;
    for s in standard_specs() {
        for &z in &pts {
            let (fz, fzb) = s.derivatives(z)?;
            let (dz, dzb) = wirtinger_fd(|w| s.eval(w).unwrap_or(c(f64::NAN, f64::NAN)), z, 1e-5);
            worst = worst.max((fz - dz).norm()).max((fzb - dzb).norm());
        }
    }
    out.at_most("closed form vs FD", worst, 1e-6);
    out.note(format!("max diff {worst:.1e}"));
    Ok(())
}

fn criterion_6(out: &mut Outcome) -> Result<()> {
    let circle = poisson_extend(&BoundaryFunction::from_family(&BoundaryFamily::Circle, 256)?)?;
    let stray = circle
        .coefficients()
        .iter()
        .map(|(k, v)| if k == 1 { (v - 1.0).norm() } else { v.norm() })
        .fold(0.0, f64::max);
    out.at_most("circle coefficient error", stray, 1e-13);

    let family = BoundaryFamily::Ellipse { b: 0.5 };
    let ellipse = poisson_extend(&BoundaryFunction::from_family(&family, 256)?)?;
    let err = ellipse
        .coefficients()
        .iter()
        .map(|(k, v)| match k {
            1 => (v - 0.75).norm(),
            -1 => (v - 0.25).norm(),
            _ => v.norm(),
        })
        .fold(0.0, f64::max);
    out.at_most("ellipse coefficient error", err, 1e-13);
    let l = perimeter_of_family(&family)?;
    out.at_most("ellipse perimeter vs 4.844224", (l - 4.844224).abs(), 1e-4);
    let scan = sp_scan(&ellipse, l / (2.0 * PI), &grid())?;
    out.at_most("ellipse max margin vs 0.97283", (scan.max_margin - 0.97283).abs(), 1e-4);
    out.holds("ellipse argmax at 0", scan.argmax == c(0.0, 0.0));
    out.note(format!("L={l:.7} margin={:.6}", scan.max_margin));
    Ok(())
}

fn criterion_7(out: &mut Outcome) -> Result<()> {
    let mut worst: f64 = 0.0;
    for s in standard_specs() {
        worst = worst.max(profile_drop(&circle_average_profile(&s, &PROFILE_RADII)?));
        if s.perimeter_radius() == 1.0 {
            let p = circle_average_profile(&s, &[0.999])?[0];
            out.at_most(&format!("{}: |profile(0.999) - 1|", s.source_id()), (p - 1.0).abs(), 2e-2);
        }
    }
    for s in standard_series()? {
        worst = worst.max(profile_drop(&circle_average_profile(&s, &PROFILE_RADII)?));
    }
    out.at_most("profile drop", worst, 1e-10);
    out.note(format!("max drop {worst:.1e}"));
    Ok(())
}

fn criterion_8(out: &mut Outcome) -> Result<()> {
    let s = ExtremalSpec::normalized(DiskSelfMap::ScaledMonomial { k: 0.5, n: 1 }, 1.0)?;
    let g = grid();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &z in &g {
        let (fz, fzb) = s.normalized_derivatives(z);
        lo = lo.min(fz.norm() - fzb.norm());
        hi = hi.max(fz.norm() + fzb.norm());
    }
    out.at_most("1/3 - min(|f_z|-|f_zbar|)", 1.0 / 3.0 - lo, 1e-12);
    out.at_most("max(|f_z|+|f_zbar|) - 3", hi - 3.0, 1e-12);
    out.holds("report agrees", s.bilipschitz_report(&g).is_ok());
    out.note(format!("min {lo:.6} max {hi:.6}"));
    Ok(())
}

fn criterion_9(out: &mut Outcome) -> Result<()> {
    let g = grid();
    for mu in standard_mus() {
        let s = ExtremalSpec::normalized(mu.clone(), 1.0)?;
        let min = g
            .iter()
            .map(|&z| {
                let (a, b) = s.normalized_derivatives(z);
                a.norm_sqr() + b.norm_sqr()
            })
            .fold(f64::INFINITY, f64::min);
        out.at_most(&format!("mu={mu}: R^2/2 - min |DF|^2"), 0.5 - min, 1e-12);
        let rho = geometry::dist_origin(&trace(&s, 0.999, 8192)?);
        out.holds(&format!("mu={mu}: rho <= R"), rho <= 1.0);
    }
    let sq = ExtremalSpec::normalized(DiskSelfMap::Monomial(2), 1.0)?;
    let rho = geometry::dist_origin(&trace(&sq, 1.0 - 1e-4, 16384)?);
    let rel = (rho / (PI / 4.0) - 1.0).abs();
    out.at_most("n=2 apothem vs pi/4", rel, 1e-2);
    out.note(format!("apothem rel. err {rel:.1e}"));
    Ok(())
}

fn criterion_10(out: &mut Outcome) -> Result<()> {
    for (label, h) in area_cases() {
        let chk = geometry::area_series_check(&h, 1.0)?;
        let rel = (chk.derived - chk.oracle).abs() / chk.oracle;
        out.at_most(&format!("{label}: derived vs oracle"), rel, 1e-6);
        if h.iter().all(|a| a.norm() == 0.0) {
            out.holds("h=0 gives exactly pi", chk.derived == PI);
        }
        out.note(format!(
            "{label}: derived {:.6} oracle {:.6} reference {:.6}",
            chk.derived, chk.oracle, chk.reference_formula
        ));
    }
    Ok(())
}

fn criterion_11(out: &mut Outcome) -> Result<()> {
    let dir = tempfile::tempdir().map_err(|e| harmdisk::Error::Io(e.to_string()))?;
    let mut reports = Vec::new();
    for name in ["first.json", "second.json"] {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_harmdisk"))
            .args(["verify", "--out"])
            .arg(&path)
            .output()
            .map_err(|e| harmdisk::Error::Io(e.to_string()))?
            .status;
        out.holds(&format!("{name}: verify exit status {status}"), status.success());
        reports.push(std::fs::read(&path).map_err(|e| harmdisk::Error::Io(e.to_string()))?);
    }
    out.holds("reports bit-identical", reports[0] == reports[1]);
    out.note(format!("{} bytes", reports[0].len()));
    Ok(())
}

fn main() -> ExitCode {
    type Criterion = fn(&mut Outcome) -> Result<()>;
    let criteria: [(&str, Criterion); 11] = [
        ("identity extremal", criterion_1),
        ("example polygons", criterion_2),
        ("Beltrami identity", criterion_3),
        ("sharpness", criterion_4),
        ("jet cross-validation", criterion_5),
        ("Poisson engine", criterion_6),
        ("circle-average monotonicity", criterion_7),
        ("bi-Lipschitz bounds", criterion_8),
        ("|DF|^2 bounds", criterion_9),
        ("area arbitration", criterion_10),
        ("determinism", criterion_11),
    ];
    let mut failed = 0;
    for (j, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut out = Outcome::default();
        if let Err(e) = run(&mut out) {
            out.failures.push(format!("error: {e}"));
        }
        let secs = start.elapsed().as_secs_f64();
        let verdict = if out.failures.is_empty() { "PASS" } else { "FAIL" };
        let detail = if out.failures.is_empty() { out.notes.join("; ") } else { out.failures.join("; ") };
        println!("[{verdict}] criterion {:>2} {name:<28} ({secs:.2}s) {detail}", j + 1);
        failed += usize::from(!out.failures.is_empty());
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
