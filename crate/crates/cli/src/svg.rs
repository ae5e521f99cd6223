//! Intensity-versus-z plots as hand-written SVG markup.

use std::collections::BTreeMap;
use std::fmt::Write;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 500.0;

const LEFT: f64 = 70.0;
const RIGHT: f64 = 650.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 440.0;

const PALETTE: [&str; 10] =
    ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"];

pub type Traces = BTreeMap<i64, Vec<(f64, f64)>>;

/// A set of traces and the legend label describing their source.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub label: String,
    pub traces: Traces,
}

#[derive(Debug, Clone)]
pub struct Plot {
    pub title: Option<String>,
    pub guides: Vec<i64>,
    /// Drawn solid.
    pub primary: Dataset,
    /// Drawn dashed on top of the primary curves.
    pub overlay: Option<Dataset>,
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

/// A 1-2-5 step giving roughly `target` intervals over `span`.
fn nice_step(span: f64, target: f64) -> f64 {
    let raw = span / target;
    let mag = 10f64.powf(raw.log10().floor());
    let frac = raw / mag;
    let nice = if frac <= 1.0 {
        1.0
    } else if frac <= 2.0 {
        2.0
    } else if frac <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

/// Axis range and tick positions covering `[lo, hi]`.
fn axis(lo: f64, hi: f64) -> (f64, f64, Vec<f64>, usize) {
    let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - 0.5, lo + 0.5) };
    let step = nice_step(hi - lo, 5.0);
    let start = (lo / step).floor() * step;
    let end = (hi / step).ceil() * step;
    let count = ((end - start) / step).round() as usize;
    let ticks = (0..=count).map(|i| start + i as f64 * step).collect();
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    (start, end, ticks, decimals)
}

fn fmt_tick(v: f64, decimals: usize) -> String {
    let s = format!("{v:.decimals$}");
    // avoid "-0" labels
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

fn colour(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()]
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn x(&self, z: f64) -> f64 {
        LEFT + (z - self.x0) / (self.x1 - self.x0) * (RIGHT - LEFT)
    }

    fn y(&self, v: f64) -> f64 {
        BOTTOM - (v - self.y0) / (self.y1 - self.y0) * (BOTTOM - TOP)
    }
}

fn curve(svg: &mut String, frame: &Frame, pts: &[(f64, f64)], stroke: &str, dashed: bool) {
    let dash = if dashed { r#" stroke-dasharray="6 4""# } else { "" };
    if let [(z, v)] = pts {
        let fill = if dashed { "none" } else { stroke };
        let _ = writeln!(
            svg,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{fill}" stroke="{stroke}"{dash}/>"#,
            frame.x(*z),
            frame.y(*v)
        );
        return;
    }
    let mut points = String::new();
    for (i, (z, v)) in pts.iter().enumerate() {
        if i > 0 {
            points.push(' ');
        }
        let _ = write!(points, "{:.2},{:.2}", frame.x(*z), frame.y(*v));
    }
    let _ = writeln!(svg, r#"<polyline points="{points}" fill="none" stroke="{stroke}" stroke-width="1.5"{dash}/>"#);
}

fn legend_entry(svg: &mut String, y: f64, stroke: &str, dashed: bool, label: &str) {
    let dash = if dashed { r#" stroke-dasharray="6 4""# } else { "" };
    let _ =
        writeln!(svg, r#"<line x1="665" y1="{y:.2}" x2="695" y2="{y:.2}" stroke="{stroke}" stroke-width="2"{dash}/>"#);
    let _ = writeln!(svg, r#"<text x="702" y="{:.2}" font-size="12">{}</text>"#, y + 4.0, escape(label));
}

/// Renders the plot; guides missing from a dataset are skipped.
pub fn render(plot: &Plot) -> String {
    let datasets: Vec<&Dataset> = std::iter::once(&plot.primary).chain(plot.overlay.as_ref()).collect();
    let selected = || datasets.iter().flat_map(|d| plot.guides.iter().filter_map(|n| d.traces.get(n))).flatten();
    let z_lo = selected().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let z_hi = selected().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let v_hi = selected().map(|p| p.1).fold(0.0, f64::max);
    let (z_lo, z_hi) = if z_lo.is_finite() { (z_lo, z_hi) } else { (0.0, 1.0) };
    let (x0, x1, x_ticks, x_dec) = axis(z_lo, z_hi);
    let (y0, y1, y_ticks, y_dec) = axis(0.0, if v_hi > 0.0 { v_hi } else { 1.0 });
    let frame = Frame { x0, x1, y0, y1 };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">"#
    );
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    if let Some(title) = &plot.title {
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="24" font-size="16" text-anchor="middle">{}</text>"#,
            (LEFT + RIGHT) / 2.0,
            escape(title)
        );
    }

    svg.push_str("<g stroke=\"#dddddd\" stroke-width=\"1\">\n");
    for &t in &x_ticks {
        let _ = writeln!(svg, r#"<line x1="{0:.2}" y1="{TOP}" x2="{0:.2}" y2="{BOTTOM}"/>"#, frame.x(t));
    }
    for &t in &y_ticks {
        let _ = writeln!(svg, r#"<line x1="{LEFT}" y1="{0:.2}" x2="{RIGHT}" y2="{0:.2}"/>"#, frame.y(t));
    }
    svg.push_str("</g>\n");
    let _ = writeln!(
        svg,
        r#"<rect x="{LEFT}" y="{TOP}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        RIGHT - LEFT,
        BOTTOM - TOP
    );
    for &t in &x_ticks {
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{}" font-size="12" text-anchor="middle">{}</text>"#,
            frame.x(t),
            BOTTOM + 18.0,
            fmt_tick(t, x_dec)
        );
    }
    for &t in &y_ticks {
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{:.2}" font-size="12" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            frame.y(t) + 4.0,
            fmt_tick(t, y_dec)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{}" font-size="14" text-anchor="middle">z</text>"#,
        (LEFT + RIGHT) / 2.0,
        BOTTOM + 44.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{0:.2}" font-size="14" text-anchor="middle" transform="rotate(-90 20 {0:.2})">|u<tspan baseline-shift="sub" font-size="10">n</tspan>|²</text>"#,
        (TOP + BOTTOM) / 2.0
    );

    for (dataset, dashed) in datasets.iter().zip([false, true]) {
        let _ = writeln!(svg, r#"<g class="{}">"#, if dashed { "overlay" } else { "primary" });
        for (i, n) in plot.guides.iter().enumerate() {
            if let Some(pts) = dataset.traces.get(n) {
                curve(&mut svg, &frame, pts, colour(i), dashed);
            }
        }
        svg.push_str("</g>\n");
    }

    let entries = plot.guides.len() + if plot.overlay.is_some() { 3 } else { 0 };
    let spacing = (400.0 / entries.max(1) as f64).min(18.0);
    let mut y = TOP + 8.0;
    svg.push_str("<g class=\"legend\">\n");
    for (i, n) in plot.guides.iter().enumerate() {
        legend_entry(&mut svg, y, colour(i), false, &format!("n = {n}"));
        y += spacing;
    }
    if let Some(overlay) = &plot.overlay {
        y += spacing;
        legend_entry(&mut svg, y, "black", false, &plot.primary.label);
        legend_entry(&mut svg, y + spacing, "black", true, &overlay.label);
    }
    svg.push_str("</g>\n</svg>\n");
    svg
}
