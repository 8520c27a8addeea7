//! Tab-separated tables and simple SVG line charts.
//!
//! Series tables put the x value (cut-off or threshold) in the first column
//! and one series per further column. Numbers are printed with four decimals.

use std::fmt::Write;

use crate::pir::{Breakdown, PirCell, PirGrid, CATEGORY_NAMES};

pub fn fmt4(x: f64) -> String {
    format!("{x:.4}")
}

/// Trims trailing zeros from grid coordinates: 0.05, 1, 120.
fn coord(x: f64) -> String {
    let s = format!("{x:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() || s == "-" {
        "0".into()
    } else {
        s.into()
    }
}

fn count_columns(out: &mut String, cell: &PirCell) {
    let c = cell.counts;
    for n in [c.correct_pref, c.correct_equal, c.false_pref, c.missed_pref, c.reversed_pref] {
        write!(out, "\t{n}").unwrap();
    }
    writeln!(out, "\t{}", cell.excluded).unwrap();
}

/// Every cell of a sweep, one per line.
pub fn grid_tsv(grid: &PirGrid) -> String {
    let mut out = format!("config\tcutoff\tthreshold\tpir\t{}\texcluded\n", CATEGORY_NAMES.join("\t"));
    for (ci, config) in grid.configs.iter().enumerate() {
        let label = config.label();
        for &cutoff in &grid.cutoffs {
            for cell in grid.row(ci, cutoff).expect("grid row") {
                write!(out, "{label}\t{cutoff}\t{}\t{}", coord(cell.threshold), fmt4(cell.pir)).unwrap();
                count_columns(&mut out, cell);
            }
        }
    }
    out
}

fn by_cutoff(grid: &PirGrid, value: impl Fn(usize, usize) -> Option<f64>) -> String {
    let mut out = String::from("cutoff");
    for c in &grid.configs {
        write!(out, "\t{}", c.label()).unwrap();
    }
    out.push('\n');
    for &cutoff in &grid.cutoffs {
        write!(out, "{cutoff}").unwrap();
        for ci in 0..grid.configs.len() {
            match value(ci, cutoff) {
                Some(v) => write!(out, "\t{}", fmt4(v)).unwrap(),
                None => out.push_str("\tNA"),
            }
        }
        out.push('\n');
    }
    out
}

/// Best-threshold PIR per cut-off.
pub fn best_series_tsv(grid: &PirGrid) -> String {
    by_cutoff(grid, |ci, c| grid.best_threshold(ci, c).map(|b| b.1))
}

/// The threshold achieving the best PIR per cut-off.
pub fn best_threshold_tsv(grid: &PirGrid) -> String {
    by_cutoff(grid, |ci, c| grid.best_threshold(ci, c).map(|b| b.0))
}

/// PIR at threshold zero per cut-off.
pub fn zero_series_tsv(grid: &PirGrid) -> String {
    by_cutoff(grid, |ci, c| grid.zero_threshold(ci, c))
}

/// Category shares and PIR along a threshold grid.
pub fn breakdown_tsv(rows: &[Breakdown]) -> String {
    let mut out = format!("threshold\t{}\tpir\texcluded\n", CATEGORY_NAMES.join("\t"));
    for b in rows {
        out.push_str(&coord(b.threshold));
        for s in b.shares() {
            write!(out, "\t{}", fmt4(s)).unwrap();
        }
        writeln!(out, "\t{}\t{}", fmt4(b.pir()), b.excluded).unwrap();
    }
    out
}

/// A single PIR row over thresholds (implicit measures).
pub fn threshold_series_tsv(cells: &[PirCell]) -> String {
    let mut out = format!("threshold\tpir\t{}\texcluded\n", CATEGORY_NAMES.join("\t"));
    for cell in cells {
        write!(out, "{}\t{}", coord(cell.threshold), fmt4(cell.pir)).unwrap();
        count_columns(&mut out, cell);
    }
    out
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Line chart whose y-axis spans at least 0.5..1.0.
pub fn line_chart_svg(title: &str, x_label: &str, xs: &[f64], series: &[(String, Vec<f64>)]) -> String {
    let (w, h) = (720.0, 440.0);
    let (left, right, top, bottom) = (60.0, 220.0, 40.0, 50.0);
    let pw = w - left - right;
    let ph = h - top - bottom;

    let x_min = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let x_max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let x_span = if x_max > x_min { x_max - x_min } else { 1.0 };
    let values = series.iter().flat_map(|s| s.1.iter().copied()).filter(|v| v.is_finite());
    let (lo, hi) = values.fold((0.5f64, 1.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    let y_min = (lo * 10.0).floor() / 10.0;
    let y_max = (hi * 10.0).ceil() / 10.0;
    let y_span = (y_max - y_min).max(0.1);
    let px = |x: f64| left + (x - x_min) / x_span * pw;
    let py = |y: f64| top + (y_max - y) / y_span * ph;

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(svg, r#"<rect width="{w}" height="{h}" fill="white"/>"#).unwrap();
    writeln!(svg, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, left + pw / 2.0, escape(title)).unwrap();

    let ticks = 5;
    for i in 0..=ticks {
        let y = y_min + y_span * i as f64 / ticks as f64;
        writeln!(
            svg,
            r##"<line x1="{left}" y1="{0:.1}" x2="{1}" y2="{0:.1}" stroke="#ddd"/><text x="{2}" y="{3:.1}" text-anchor="end">{4:.2}</text>"##,
            py(y),
            left + pw,
            left - 6.0,
            py(y) + 4.0,
            y
        )
        .unwrap();
    }
    for &x in xs {
        writeln!(
            svg,
            r#"<text x="{:.1}" y="{}" text-anchor="middle">{}</text>"#,
            px(x),
            top + ph + 18.0,
            coord(x)
        )
        .unwrap();
    }
    writeln!(
        svg,
        r#"<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        left + pw / 2.0,
        h - 10.0,
        escape(x_label)
    )
    .unwrap();

    for (i, (name, ys)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let points: Vec<String> = xs
            .iter()
            .zip(ys)
            .filter(|(_, y)| y.is_finite())
            .map(|(&x, &y)| format!("{:.1},{:.1}", px(x), py(y)))
            .collect();
        writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            points.join(" ")
        )
        .unwrap();
        let ly = top + 10.0 + i as f64 * 18.0;
        writeln!(
            svg,
            r#"<line x1="{0}" y1="{ly}" x2="{1}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{2}" y="{3}">{4}</text>"#,
            left + pw + 12.0,
            left + pw + 32.0,
            left + pw + 38.0,
            ly + 4.0,
            escape(name)
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");
    svg
}

/// Best-threshold or zero-threshold series of a grid as a chart over cut-offs.
pub fn grid_chart_svg(grid: &PirGrid, title: &str, zero: bool) -> String {
    let xs: Vec<f64> = grid.cutoffs.iter().map(|&c| c as f64).collect();
    let series: Vec<(String, Vec<f64>)> = grid
        .configs
        .iter()
        .enumerate()
        .map(|(ci, c)| {
            let ys = grid
                .cutoffs
                .iter()
                .map(|&k| {
                    let v = if zero {
                        grid.zero_threshold(ci, k)
                    } else {
                        grid.best_threshold(ci, k).map(|b| b.1)
                    };
                    v.unwrap_or(f64::NAN)
                })
                .collect();
            (c.label(), ys)
        })
        .collect();
    line_chart_svg(title, "cut-off rank", &xs, &series)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinates_and_decimals() {
        assert_eq!(coord(0.0), "0");
        assert_eq!(coord(0.05), "0.05");
        assert_eq!(coord(120.0), "120");
        assert_eq!(fmt4(0.875), "0.8750");
        assert_eq!(fmt4(2.0 / 3.0), "0.6667");
    }

    #[test]
    fn chart_is_well_formed() {
        let svg = line_chart_svg("t <x>", "cut-off", &[1.0, 2.0], &[("a&b".into(), vec![0.6, f64::NAN])]);
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert!(svg.contains("a&amp;b") && svg.contains("t &lt;x&gt;"));
    }
}
