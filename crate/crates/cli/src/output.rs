use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use plotters::prelude::*;

use crate::config::{Format, Scenario};
use crate::scan::{PointError, Record, ResultSet};
use crate::CliError;

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Writes every configured format into `dir`, returning the paths written.
pub fn emit(results: &ResultSet, dir: &Path, stem: &str, formats: &[Format]) -> Result<Vec<PathBuf>, CliError> {
    if results.records.is_empty() {
        return Err(CliError::Run("no records to write".into()));
    }
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let mut written = Vec::new();
    for f in formats {
        let path = dir.join(format!(
            "{stem}.{}",
            match f {
                Format::Csv => "csv",
                Format::Json => "json",
                Format::Svg => "svg",
            }
        ));
        let done = match f {
            Format::Csv => write_csv(results, &path).map(|_| true)?,
            Format::Json => write_json(results, &path).map(|_| true)?,
            Format::Svg => write_svg(results, &path)?,
        };
        if done {
            written.push(path);
        }
    }
    Ok(written)
}

fn error_cell(errors: &[PointError]) -> String {
    errors.iter().map(|e| format!("{}: {}", e.kind, e.message)).collect::<Vec<_>>().join(" | ")
}

/// One row per record; values use the shortest representation that parses
/// back to the same `f64`, empty cells mark values that were not evaluated.
pub fn write_csv(results: &ResultSet, path: &Path) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
    let mut header: Vec<&str> = results.columns.iter().map(String::as_str).collect();
    header.push("error");
    w.write_record(&header).map_err(|e| io_err(path, e))?;
    for r in &results.records {
        let mut row: Vec<String> =
            results.columns.iter().map(|c| r.values.get(c).map(|v| v.to_string()).unwrap_or_default()).collect();
        row.push(error_cell(&r.errors));
        w.write_record(&row).map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

/// Reads a CSV written by [`write_csv`] back into column names and records.
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Record>), CliError> {
    let mut rd = csv::Reader::from_path(path).map_err(|e| io_err(path, e))?;
    let header: Vec<String> = rd.headers().map_err(|e| io_err(path, e))?.iter().map(String::from).collect();
    let Some((last, columns)) = header.split_last() else {
        return Err(io_err(path, "empty header"));
    };
    if last != "error" {
        return Err(io_err(path, "last column must be `error`"));
    }
    let mut records = Vec::new();
    for (index, row) in rd.records().enumerate() {
        let row = row.map_err(|e| io_err(path, e))?;
        let mut values = BTreeMap::new();
        for (c, cell) in columns.iter().zip(row.iter()) {
            if !cell.is_empty() {
                let v: f64 = cell.parse().map_err(|_| io_err(path, format!("row {index}, column {c}: bad number {cell:?}")))?;
                values.insert(c.clone(), v);
            }
        }
        let errors = row
            .get(columns.len())
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.split(" | ")
                    .map(|e| {
                        let (kind, message) = e.split_once(": ").unwrap_or(("error", e));
                        PointError { kind: kind.into(), message: message.into() }
                    })
                    .collect()
            })
            .unwrap_or_default();
        records.push(Record { index, values, errors });
    }
    Ok((columns.to_vec(), records))
}

pub fn write_json(results: &ResultSet, path: &Path) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(results).map_err(|e| io_err(path, e))?;
    std::fs::write(path, text + "\n").map_err(|e| io_err(path, e))
}

/// Abscissa of the 1-D plot and the curves drawn against it.
fn plot_layout(results: &ResultSet) -> Option<(&'static str, &'static str, Vec<&'static str>, &'static str)> {
    let varying = |c: &str| {
        let mut v: Vec<f64> = results.records.iter().filter_map(|r| r.values.get(c).copied()).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v.len() > 1
    };
    let geometric = ["a_um", "r_a_um", "r_b_um", "dphi_rad", "dz_um", "theta_rad", "phi_rad"];
    let axis_label = |c: &str| match c {
        "a_um" => "fibre radius a (um)",
        "r_a_um" => "R_A (um)",
        "r_b_um" => "R_B (um)",
        "dphi_rad" => "dphi (rad)",
        "dz_um" => "dz (um)",
        "theta_rad" => "Theta (rad)",
        _ => "Phi (rad)",
    };
    let (x, ys, ylabel): (&str, Vec<&str>, &str) = match results.scenario {
        Scenario::C6Table => return None,
        Scenario::Forster => ("n", vec!["delta1_ghz", "delta2_ghz"], "detuning (GHz)"),
        Scenario::Channels => {
            (geometric.iter().copied().find(|c| varying(c))?, vec!["vacuum_allowed_over_u0", "fibre_enabled_over_u0"], "contribution / U0")
        }
        Scenario::Quad => (geometric.iter().copied().find(|c| varying(c))?, vec!["quad_fraction_pt2", "quad_fraction_diag"], "U_quad / U_dd"),
        Scenario::ScanZ => ("dz_um", vec!["ratio_pt2", "ratio_diag", "model:pipi_ratio"], "U / U0"),
        Scenario::ScanPhi => ("dphi_rad", vec!["ratio_pt2", "ratio_diag"], "U / U0"),
        Scenario::ScanAxis => {
            let x = if varying("theta_rad") { "theta_rad" } else { "phi_rad" };
            (x, vec!["ratio_pt2", "ratio_diag", "model:sigma_plus"], "U / U0, sigma+ model / vacuum maximum")
        }
    };
    if results.scenario != Scenario::Forster {
        // only 1-D scans are plotted
        if geometric.iter().filter(|c| varying(c)).count() != 1 || !varying(x) {
            return None;
        }
    }
    let xlabel = if x == "n" { "n" } else { axis_label(x) };
    let ys: Vec<&str> = ys.into_iter().filter(|y| results.records.iter().any(|r| r.values.contains_key(*y))).collect();
    (!ys.is_empty()).then_some((x, xlabel, ys, ylabel))
}

/// Returns `false` when the result set is not a 1-D scan and nothing was drawn.
pub fn write_svg(results: &ResultSet, path: &Path) -> Result<bool, CliError> {
    let Some((x, xlabel, ys, ylabel)) = plot_layout(results) else {
        return Ok(false);
    };
    let series: Vec<Vec<Vec<(f64, f64)>>> = ys
        .iter()
        .map(|y| {
            // break the curve at points where the value is missing
            let mut runs = vec![Vec::new()];
            for r in &results.records {
                match (r.values.get(x), r.values.get(*y)) {
                    (Some(&a), Some(&b)) if b.is_finite() => runs.last_mut().unwrap().push((a, b)),
                    _ => runs.push(Vec::new()),
                }
            }
            runs.retain(|r| !r.is_empty());
            runs
        })
        .collect();
    let all: Vec<(f64, f64)> = series.iter().flatten().flatten().copied().collect();
    if all.is_empty() {
        return Ok(false);
    }
    let (x0, x1) = all.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.0), b.max(p.0)));
    let (y0, y1) = all.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.1), b.max(p.1)));
    let pad = |lo: f64, hi: f64| {
        let d = if hi > lo { 0.05 * (hi - lo) } else { 0.5 * lo.abs().max(1.0) };
        (lo - d, hi + d)
    };
    let (x0, x1) = pad(x0, x1);
    let (y0, y1) = pad(y0, y1);

    let draw = || -> Result<(), Box<dyn std::error::Error>> {
        let root = SVGBackend::new(path, (900, 560)).into_drawing_area();
        root.fill(&WHITE)?;
        let mut chart = ChartBuilder::on(&root)
            .caption(results.scenario.name(), ("sans-serif", 22))
            .margin(16)
            .x_label_area_size(44)
            .y_label_area_size(70)
            .build_cartesian_2d(x0..x1, y0..y1)?;
        chart.configure_mesh().x_desc(xlabel).y_desc(ylabel).draw()?;
        let palette = [RED, BLUE, BLACK, GREEN, MAGENTA];
        for (k, (name, runs)) in ys.iter().zip(&series).enumerate() {
            let color = palette[k % palette.len()];
            for (j, run) in runs.iter().enumerate() {
                let s = chart.draw_series(LineSeries::new(run.iter().copied(), color.stroke_width(2)))?;
                if j == 0 {
                    s.label(*name).legend(move |(a, b)| PathElement::new(vec![(a, b), (a + 18, b)], color));
                }
                chart.draw_series(run.iter().map(|p| Circle::new(*p, 3, color.filled())))?;
            }
        }
        chart.configure_series_labels().background_style(WHITE.mix(0.8)).border_style(BLACK).draw()?;
        root.present()?;
        Ok(())
    };
    draw().map_err(|e| io_err(path, e))?;
    Ok(true)
}
