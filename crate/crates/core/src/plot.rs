//! Minimal static SVG line charts of survey probabilities against the total
//! dimension `N`, one chart per statistic family.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::survey::{Statistic, SurveyRecord};

/// A chart: file stem, title and the statistics drawn on it.
pub struct Family {
    pub stem: &'static str,
    pub title: &'static str,
    pub stats: &'static [Statistic],
    pub log_y: bool,
}

pub const FAMILIES: &[Family] = &[
    Family {
        stem: "ppt",
        title: "P(PPT)",
        stats: &[Statistic::Ppt],
        log_y: false,
    },
    Family {
        stem: "ppt_semilog",
        title: "P(PPT), semi-log",
        stats: &[Statistic::Ppt],
        log_y: true,
    },
    Family {
        stem: "reduction",
        title: "P(reduction)",
        stats: &[Statistic::Reduction],
        log_y: false,
    },
    Family {
        stem: "majorization_qent",
        title: "P(majorization), P(q-entropic, q = inf)",
        stats: &[Statistic::Majorization, Statistic::QEntropicInf],
        log_y: false,
    },
    Family {
        stem: "agree_ppt_reduction",
        title: "PPT / reduction agreement",
        stats: &[Statistic::AgreePptReduction],
        log_y: false,
    },
    Family {
        stem: "agree_ppt",
        title: "PPT / majorization and PPT / q-entropic agreement",
        stats: &[Statistic::AgreePptMajorization, Statistic::AgreePptQent],
        log_y: false,
    },
    Family {
        stem: "agree_reduction",
        title: "Reduction / majorization and reduction / q-entropic agreement",
        stats: &[Statistic::AgreeReductionMajorization, Statistic::AgreeReductionQent],
        log_y: false,
    },
    Family {
        stem: "agree_majorization_qent",
        title: "Majorization / q-entropic agreement",
        stats: &[Statistic::AgreeMajorizationQent],
        log_y: false,
    },
    Family {
        stem: "agree_all",
        title: "All criteria agree",
        stats: &[Statistic::AgreeAll],
        log_y: false,
    },
    Family {
        stem: "violations",
        title: "Violation of reduction (distillable) and of majorization",
        stats: &[Statistic::ViolateReduction, Statistic::ViolateMajorization],
        log_y: false,
    },
];

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

struct Point {
    x: f64,
    y: f64,
    err: f64,
}

struct Series {
    name: String,
    color: &'static str,
    dashed: bool,
    points: Vec<Point>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn series_for(records: &[SurveyRecord], family: &Family) -> Vec<Series> {
    let mut by_n1: BTreeMap<usize, Vec<&SurveyRecord>> = BTreeMap::new();
    for r in records {
        by_n1.entry(r.dims.n_a).or_default().push(r);
    }
    let mut out = Vec::new();
    for (s_idx, stat) in family.stats.iter().enumerate() {
        for (k, (n1, recs)) in by_n1.iter().enumerate() {
            let mut points: Vec<Point> = recs
                .iter()
                .filter(|r| r.counts.contains_key(stat) && r.samples > 0)
                .map(|r| Point {
                    x: r.dims.total() as f64,
                    y: r.probability(*stat),
                    err: r.std_error(*stat),
                })
                .filter(|p| !family.log_y || p.y > 0.0)
                .collect();
            points.sort_by(|a, b| a.x.total_cmp(&b.x));
            out.push(Series {
                name: format!("{stat}, n1={n1}"),
                color: COLORS[s_idx % COLORS.len()],
                dashed: k % 2 == 1,
                points,
            });
        }
    }
    out
}

fn nice_ticks(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if !(hi > lo) {
        return vec![lo];
    }
    let raw = (hi - lo) / count as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() * step;
    (0..)
        .map(|k| first + k as f64 * step)
        .take_while(|t| *t <= hi + 1e-9 * step)
        .collect()
}

/// Renders one chart as an SVG document.
pub fn render(records: &[SurveyRecord], family: &Family) -> String {
    let series = series_for(records, family);
    let pts = || series.iter().flat_map(|s| s.points.iter());
    let (mut x_lo, mut x_hi) = pts().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.x), b.max(p.x)));
    if !x_lo.is_finite() {
        (x_lo, x_hi) = (0.0, 1.0);
    }
    if x_hi - x_lo < 1.0 {
        x_lo -= 1.0;
        x_hi += 1.0;
    }
    let (y_lo, y_hi, ticks_y): (f64, f64, Vec<f64>) = if family.log_y {
        let lo = pts().map(|p| (p.y - p.err).max(p.y / 10.0)).fold(1.0, f64::min);
        let lo = lo.log10().floor().min(-1.0);
        (lo, 0.0, (lo as i32..=0).map(f64::from).collect())
    } else {
        (0.0, 1.0, nice_ticks(0.0, 1.0, 5))
    };
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = |y: f64| {
        let y = if family.log_y { y.max(1e-300).log10() } else { y };
        TOP + plot_h - (y.clamp(y_lo, y_hi) - y_lo) / (y_hi - y_lo) * plot_h
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">
<rect width="100%" height="100%" fill="white"/>
<text x="{:.1}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        LEFT + plot_w / 2.0,
        escape(family.title)
    );
    let _ = writeln!(
        svg,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    for t in nice_ticks(x_lo, x_hi, 8) {
        let x = sx(t);
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}" stroke="black"/><text x="{x:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            TOP + plot_h,
            TOP + plot_h + 5.0,
            TOP + plot_h + 18.0,
            t
        );
    }
    for t in ticks_y {
        let y = if family.log_y { sy(10f64.powf(t)) } else { sy(t) };
        let label = if family.log_y {
            format!("1e{t}")
        } else {
            format!("{t:.1}")
        };
        let _ = writeln!(
            svg,
            r##"<line x1="{:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#ddd"/><text x="{:.1}" y="{:.1}" text-anchor="end">{label}</text>"##,
            LEFT,
            LEFT + plot_w,
            LEFT - 6.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">N</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{:.1}" text-anchor="middle" transform="rotate(-90 18 {:.1})">probability</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    for (k, s) in series.iter().enumerate() {
        let dash = if s.dashed { r#" stroke-dasharray="6 4""# } else { "" };
        let _ = writeln!(svg, r#"<g class="series" data-name="{}">"#, escape(&s.name));
        if s.points.len() > 1 {
            let path: Vec<String> = s
                .points
                .iter()
                .map(|p| format!("{:.2},{:.2}", sx(p.x), sy(p.y)))
                .collect();
            let _ = writeln!(
                svg,
                r#"<polyline fill="none" stroke="{}" stroke-width="1.5"{dash} points="{}"/>"#,
                s.color,
                path.join(" ")
            );
        }
        for p in &s.points {
            let (x, y) = (sx(p.x), sy(p.y));
            let _ = writeln!(
                svg,
                r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="{}"/><circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{}"/>"#,
                sy(p.y + p.err),
                sy(p.y - p.err),
                s.color,
                s.color
            );
        }
        let ly = TOP + 10.0 + 18.0 * k as f64;
        let lx = LEFT + plot_w + 12.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{}" stroke-width="1.5"{dash}/><text x="{:.1}" y="{:.1}">{}</text>"#,
            lx + 24.0,
            s.color,
            lx + 30.0,
            ly + 4.0,
            escape(&s.name)
        );
        svg.push_str("</g>\n");
    }
    svg.push_str("</svg>\n");
    svg
}

/// Writes one SVG per family into `out_dir` as `<prefix><stem>.svg`.
/// Fails without writing anything when `records` is empty.
pub fn emit_plots(records: &[SurveyRecord], out_dir: &Path, prefix: &str) -> Result<Vec<PathBuf>> {
    if records.is_empty() {
        return Err(Error::EmptyRecords);
    }
    fs::create_dir_all(out_dir)?;
    FAMILIES
        .iter()
        .map(|family| {
            let path = out_dir.join(format!("{prefix}{}.svg", family.stem));
            fs::write(&path, render(records, family))?;
            Ok(path)
        })
        .collect()
}
