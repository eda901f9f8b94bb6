//! Report files: `report.json`, CSV rows and SVG plots.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rough_kernel::trignorms::NormFit;
use serde::Serialize;

use crate::config::Format;
use crate::report::{ConstructionSummary, VerificationReport};
use crate::run::{Outcome, PlotData};
use crate::svg::{Plot, Series};

pub const CSV_HEADER: &str = "N,n,c,absD,margin,modular,luxemburg,sup_m,c7,c8,ratio_p4,slope_p4";

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// One CSV line (no newline) in the order of [`CSV_HEADER`].
pub fn csv_row(s: &ConstructionSummary) -> String {
    [
        s.big_n.to_string(),
        s.n.to_string(),
        cell(s.c),
        cell(s.abs_d),
        cell(s.margin),
        cell(s.modular),
        cell(s.luxemburg),
        cell(s.sup_m),
        cell(s.c7),
        cell(s.c8),
        cell(s.ratio_p4),
        cell(s.slope_p4),
    ]
    .join(",")
}

/// Header plus one row per report; aborted points before construction keep
/// only `N` and `n`.
pub fn csv_table(reports: &[VerificationReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        let row = match &r.construction {
            Some(s) => csv_row(s),
            None => csv_row(&ConstructionSummary {
                big_n: r.config.big_n,
                n: r.config.n.unwrap_or(0),
                ..Default::default()
            }),
        };
        out.push_str(&row);
        out.push('\n');
    }
    out
}

fn write(dir: &Path, name: &str, body: &str, written: &mut Vec<PathBuf>) -> io::Result<()> {
    let path = dir.join(name);
    fs::write(&path, body)?;
    written.push(path);
    Ok(())
}

/// Writes the requested formats of a single verification run into `dir`.
pub fn emit_verify(outcome: &Outcome, formats: &std::collections::BTreeSet<Format>, dir: &Path) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    if formats.contains(&Format::Json) {
        write(dir, "report.json", &outcome.report.to_json(), &mut written)?;
    }
    if formats.contains(&Format::Csv) {
        write(dir, "report.csv", &csv_table(std::slice::from_ref(&outcome.report)), &mut written)?;
    }
    if formats.contains(&Format::Svg) {
        match &outcome.plot {
            Some(plot) => {
                for (name, body) in plots(plot) {
                    write(dir, name, &body, &mut written)?;
                }
            }
            None => log::warn!("run aborted before profiles were computed; no plots written"),
        }
    }
    Ok(written)
}

#[derive(Serialize)]
struct SweepFile<'a> {
    reports: &'a [VerificationReport],
    #[serde(skip_serializing_if = "Option::is_none")]
    fit: Option<FitRecord>,
}

#[derive(Serialize)]
struct FitRecord {
    slope: f64,
    intercept: f64,
    residual: f64,
    samples: Vec<(usize, f64)>,
}

/// Writes `sweep.json`, `sweep.csv` and `ratio_loglog.svg` for a sweep.
pub fn emit_sweep(
    reports: &[VerificationReport],
    fit: Option<&NormFit>,
    formats: &std::collections::BTreeSet<Format>,
    dir: &Path,
) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    if formats.contains(&Format::Json) {
        let file = SweepFile {
            reports,
            fit: fit.map(|f| FitRecord {
                slope: f.slope,
                intercept: f.intercept,
                residual: f.residual,
                samples: f.samples.clone(),
            }),
        };
        let body = serde_json::to_string_pretty(&file).expect("reports serialise") + "\n";
        write(dir, "sweep.json", &body, &mut written)?;
    }
    if formats.contains(&Format::Csv) {
        write(dir, "sweep.csv", &csv_table(reports), &mut written)?;
    }
    if formats.contains(&Format::Svg) {
        if let Some(f) = fit {
            write(dir, "ratio_loglog.svg", &ratio_plot(&[(4.0, f.clone())]), &mut written)?;
        }
    }
    Ok(written)
}

/// The three plot files of a run.
pub fn plots(plot: &PlotData) -> Vec<(&'static str, String)> {
    let window: Vec<usize> = plot
        .profile
        .grid
        .iter()
        .enumerate()
        .filter(|(_, a)| (FRAC_PI_2..=3.0 * FRAC_PI_4).contains(&a.value()))
        .map(|(i, _)| i)
        .collect();
    let bands: Vec<(f64, f64)> = plot
        .guards
        .iter()
        .map(|g| {
            let c = g.center().value();
            (c - g.half_length(), c + g.half_length())
        })
        .collect();
    let profile_plot = |title: &str, values: &[f64], colour: &'static str| {
        let points = window.iter().map(|&i| (plot.profile.grid[i].value(), values[i])).collect();
        let mut p = Plot::new(title, "angle (rad)", "value");
        p.bands = bands.clone();
        p.series.push(Series { label: title.to_string(), points, colour, line: true });
        p.render()
    };
    vec![
        ("khat_profile.svg", profile_plot("K̂ of Ω_n over the window", &plot.profile.khat, "#1f77b4")),
        ("m_profile.svg", profile_plot("m(Ω_n) over the window", &plot.profile.m, "#d62728")),
        ("ratio_loglog.svg", ratio_plot(&plot.fits)),
    ]
}

/// `log₂ ratio` against `log₂ n` with fitted lines.
pub fn ratio_plot(fits: &[(f64, NormFit)]) -> String {
    const COLOURS: [&str; 4] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd"];
    let mut p = Plot::new("unconditionality ratio", "log2 n", "log2 ratio");
    for (i, (pexp, fit)) in fits.iter().enumerate() {
        let colour = COLOURS[i % COLOURS.len()];
        let pts: Vec<(f64, f64)> = fit.samples.iter().map(|&(n, r)| ((n as f64).log2(), r.log2())).collect();
        let line = pts
            .iter()
            .map(|&(x, _)| (x, (fit.intercept + fit.slope * x * std::f64::consts::LN_2) / std::f64::consts::LN_2))
            .collect();
        let mut label = String::new();
        let _ = write!(label, "p = {pexp}, slope {:.4}", fit.slope);
        p.series.push(Series { label, points: pts, colour, line: false });
        p.series.push(Series { label: String::new(), points: line, colour, line: true });
    }
    p.render()
}
