//! Static line plots. Axes are fixed from the data extents.

use std::fmt::Write;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 150.0;
const MARGIN_Y: f64 = 50.0;
const TICKS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stroke {
    Solid,
    Dashed,
    Dotted,
}

impl Stroke {
    fn dasharray(self) -> Option<&'static str> {
        match self {
            Stroke::Solid => None,
            Stroke::Dashed => Some("7 4"),
            Stroke::Dotted => Some("1.5 3"),
        }
    }
}

/// One legend entry drawn as one or more disconnected polylines.
#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub color: &'static str,
    pub stroke: Stroke,
    pub segments: Vec<Vec<(f64, f64)>>,
}

impl Series {
    pub fn line(label: &str, color: &'static str, stroke: Stroke, points: Vec<(f64, f64)>) -> Self {
        Self { label: label.to_owned(), color, stroke, segments: vec![points] }
    }
}

/// Splits `points` into runs sharing a key. Adjacent runs share their boundary
/// point so the curve stays visually connected.
pub fn split_runs<K: PartialEq + Copy>(points: &[(f64, f64, K)]) -> Vec<(K, Vec<(f64, f64)>)> {
    let mut runs: Vec<(K, Vec<(f64, f64)>)> = Vec::new();
    for (i, &(x, y, key)) in points.iter().enumerate() {
        match runs.last_mut() {
            Some((k, run)) if *k == key => run.push((x, y)),
            _ => {
                let mut run = Vec::new();
                if i > 0 {
                    run.push((points[i - 1].0, points[i - 1].1));
                }
                run.push((x, y));
                runs.push((key, run));
            }
        }
    }
    runs
}

fn extent(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) =
        values.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        return (lo - 0.5, hi + 0.5);
    }
    (lo, hi)
}

pub fn render(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let points = || series.iter().flat_map(|s| s.segments.iter().flatten());
    let (x0, x1) = extent(points().map(|p| p.0));
    let (y_lo, y_hi) = extent(points().map(|p| p.1));
    let (y0, y1) = (y_lo.min(0.0), y_hi);
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - 2.0 * MARGIN_Y;
    let sx = |x: f64| MARGIN_LEFT + (x - x0) / (x1 - x0) * plot_w;
    let sy = |y: f64| HEIGHT - MARGIN_Y - (y - y0) / (y1 - y0) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="25" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let _ = writeln!(
        svg,
        r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_Y}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    for i in 0..=TICKS {
        let f = i as f64 / TICKS as f64;
        let (x, y) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let _ = writeln!(
            svg,
            r#"<line x1="{0:.2}" y1="{1}" x2="{0:.2}" y2="{2}" stroke="black"/><text x="{0:.2}" y="{3}" text-anchor="middle">{4}</text>"#,
            sx(x),
            HEIGHT - MARGIN_Y,
            HEIGHT - MARGIN_Y + 5.0,
            HEIGHT - MARGIN_Y + 18.0,
            tick(x)
        );
        let _ = writeln!(
            svg,
            r#"<line x1="{0}" y1="{1:.2}" x2="{2}" y2="{1:.2}" stroke="black"/><text x="{3}" y="{4:.2}" text-anchor="end">{5}</text>"#,
            MARGIN_LEFT - 5.0,
            sy(y),
            MARGIN_LEFT,
            MARGIN_LEFT - 8.0,
            sy(y) + 4.0,
            tick(y)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{0}" text-anchor="middle" transform="rotate(-90 18 {0})">{1}</text>"#,
        MARGIN_Y + plot_h / 2.0,
        escape(y_label)
    );

    for (i, s) in series.iter().enumerate() {
        let dash = s.stroke.dasharray().map(|d| format!(r#" stroke-dasharray="{d}""#)).unwrap_or_default();
        for seg in s.segments.iter().filter(|seg| !seg.is_empty()) {
            let pts: Vec<String> = seg
                .iter()
                .filter(|p| p.0.is_finite() && p.1.is_finite())
                .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            let _ = writeln!(
                svg,
                r#"<polyline fill="none" stroke="{}" stroke-width="1.5"{dash} points="{}"/>"#,
                s.color,
                pts.join(" ")
            );
        }
        let ly = MARGIN_Y + 15.0 + 20.0 * i as f64;
        let lx = WIDTH - MARGIN_RIGHT + 15.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{}" stroke-width="1.5"{dash}/><text x="{}" y="{}">{}</text>"#,
            lx + 30.0,
            s.color,
            lx + 36.0,
            ly + 4.0,
            escape(&s.label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn tick(x: f64) -> String {
    let s = format!("{x:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_owned()
    } else {
        s.to_owned()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
