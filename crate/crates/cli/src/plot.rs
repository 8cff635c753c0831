//! Minimal SVG line plots with a logarithmic vertical axis.

use std::fmt::Write as _;
use std::path::Path;

use crate::comparison::{Series, TrajectoryLog};
use crate::error::{CliError, CliResult};

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 540.0;
const MARGIN: f64 = 60.0;
const FLOOR: f64 = 1e-16;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// Which per-sample metric to draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Lyapunov,
    Euclidean,
    TraceDistance,
}

impl Metric {
    fn values(self, s: &Series) -> &[f64] {
        match self {
            Metric::Lyapunov => &s.lyapunov,
            Metric::Euclidean => &s.euclidean,
            Metric::TraceDistance => &s.trace_distance,
        }
    }

    fn title(self) -> &'static str {
        match self {
            Metric::Lyapunov => "Lyapunov function",
            Metric::Euclidean => "Euclidean distance",
            Metric::TraceDistance => "trace distance",
        }
    }
}

/// Renders every series; actual-state curves are solid, estimated dashed.
pub fn render_svg(log: &TrajectoryLog, metric: Metric) -> String {
    let t_max = log.times.last().copied().unwrap_or(1.0).max(f64::MIN_POSITIVE);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for s in &log.series {
        for &v in metric.values(s) {
            let l = v.max(FLOOR).log10();
            lo = lo.min(l);
            hi = hi.max(l);
        }
    }
    let (lo, hi) = if lo.is_finite() { (lo.floor(), hi.ceil().max(lo.floor() + 1.0)) } else { (-16.0, 0.0) };
    let px = |t: f64| MARGIN + (WIDTH - 2.0 * MARGIN) * t / t_max;
    let py = |v: f64| HEIGHT - MARGIN - (HEIGHT - 2.0 * MARGIN) * (v.max(FLOOR).log10() - lo) / (hi - lo);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}: {}</text>"#,
        WIDTH / 2.0,
        log.scenario,
        metric.title()
    );
    let _ = writeln!(
        svg,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    for e in (lo as i32)..=(hi as i32) {
        let y = py(10f64.powi(e));
        let _ = writeln!(
            svg,
            r##"<line x1="{MARGIN}" x2="{}" y1="{y:.2}" y2="{y:.2}" stroke="#ddd"/><text x="{}" y="{:.2}" text-anchor="end">1e{e}</text>"##,
            WIDTH - MARGIN,
            MARGIN - 6.0,
            y + 4.0
        );
    }
    for k in 0..=5 {
        let t = t_max * k as f64 / 5.0;
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{}" text-anchor="middle">{}</text>"#,
            px(t),
            HEIGHT - MARGIN + 18.0,
            (t * 100.0).round() / 100.0
        );
    }
    for (i, s) in log.series.iter().enumerate() {
        let color = COLORS[(i / 2) % COLORS.len()];
        let dash = if i % 2 == 1 { r#" stroke-dasharray="6 4""# } else { "" };
        let mut points = String::new();
        for (t, v) in log.times.iter().zip(metric.values(s)) {
            let _ = write!(points, "{:.2},{:.2} ", px(*t), py(*v));
        }
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{}"/>"#,
            points.trim_end()
        );
        let ly = MARGIN + 16.0 + 16.0 * i as f64;
        let lx = WIDTH - MARGIN - 170.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx}" x2="{}" y1="{ly}" y2="{ly}" stroke="{color}" stroke-width="2"{dash}/><text x="{}" y="{}">{}</text>"#,
            lx + 24.0,
            lx + 30.0,
            ly + 4.0,
            s.label()
        );
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn save_svg(log: &TrajectoryLog, metric: Metric, path: &Path) -> CliResult<()> {
    std::fs::write(path, render_svg(log, metric)).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}
