//! Minimal static SVG plots. Output is a pure function of the input.

use std::fmt::Write;

use btc_core::meanfield::Stability;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SvgError {
    #[error("nothing to plot")]
    EmptyDataset,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Line,
    Dots,
    Squares,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub style: Style,
}

impl Series {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>, style: Style) -> Self {
        Self {
            label: label.into(),
            points,
            style,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    /// Fixed points drawn on top, styled by class.
    pub markers: Vec<(f64, f64, Stability)>,
    pub x_range: Option<(f64, f64)>,
    pub y_range: Option<(f64, f64)>,
    /// Lines of the `<!-- -->` comment at the top of the file.
    pub comment: Vec<String>,
}

const W: f64 = 640.0;
const H: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn span(lo: f64, hi: f64) -> (f64, f64) {
    if hi > lo {
        (lo, hi)
    } else {
        let pad = if lo == 0.0 { 1.0 } else { 0.5 * lo.abs() };
        (lo - pad, hi + pad)
    }
}

fn extent(vals: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    vals.filter(|v| v.is_finite()).fold(None, |acc, v| match acc {
        None => Some((v, v)),
        Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
    })
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

pub fn emit_svg(plot: &Plot) -> Result<String, SvgError> {
    let all = || {
        plot.series
            .iter()
            .flat_map(|s| s.points.iter().copied())
            .chain(plot.markers.iter().map(|m| (m.0, m.1)))
    };
    if all().all(|p| !(p.0.is_finite() && p.1.is_finite())) {
        return Err(SvgError::EmptyDataset);
    }
    let (x0, x1) = plot
        .x_range
        .or_else(|| extent(all().map(|p| p.0)))
        .map(|(a, b)| span(a, b))
        .ok_or(SvgError::EmptyDataset)?;
    let (y0, y1) = plot
        .y_range
        .or_else(|| extent(all().map(|p| p.1)))
        .map(|(a, b)| span(a, b))
        .ok_or(SvgError::EmptyDataset)?;
    let pw = W - LEFT - RIGHT;
    let ph = H - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + (y1 - y) / (y1 - y0) * ph;

    let mut o = String::new();
    o.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    for line in &plot.comment {
        let _ = writeln!(o, "<!-- {} -->", line.replace("--", "- -"));
    }
    let _ = writeln!(
        o,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\" font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(o, "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>");
    let _ = writeln!(
        o,
        "<text x=\"{:.1}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>",
        LEFT + pw / 2.0,
        escape(&plot.title)
    );
    let _ = writeln!(
        o,
        "<rect x=\"{LEFT}\" y=\"{TOP}\" width=\"{pw}\" height=\"{ph}\" fill=\"none\" stroke=\"black\"/>"
    );
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let xv = x0 + f * (x1 - x0);
        let yv = y0 + f * (y1 - y0);
        let _ = writeln!(
            o,
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>",
            sx(xv),
            TOP + ph + 18.0,
            tick_label(xv)
        );
        let _ = writeln!(
            o,
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{}</text>",
            LEFT - 6.0,
            sy(yv) + 4.0,
            tick_label(yv)
        );
    }
    let _ = writeln!(
        o,
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>",
        LEFT + pw / 2.0,
        H - 12.0,
        escape(&plot.x_label)
    );
    let _ = writeln!(
        o,
        "<text x=\"16\" y=\"{:.1}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.1})\">{}</text>",
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(&plot.y_label)
    );

    let _ = writeln!(
        o,
        "<clipPath id=\"plot\"><rect x=\"{LEFT}\" y=\"{TOP}\" width=\"{pw}\" height=\"{ph}\"/></clipPath>"
    );
    let _ = writeln!(o, "<g clip-path=\"url(#plot)\">");
    for (k, s) in plot.series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let pts: Vec<(f64, f64)> = s
            .points
            .iter()
            .filter(|p| p.0.is_finite() && p.1.is_finite())
            .map(|&(x, y)| (sx(x), sy(y)))
            .collect();
        match s.style {
            Style::Line => {
                let mut d = String::new();
                for (i, (x, y)) in pts.iter().enumerate() {
                    let _ = write!(d, "{}{x:.2},{y:.2}", if i == 0 { "M" } else { " L" });
                }
                if pts.len() == 1 {
                    let _ = writeln!(o, "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2\" fill=\"{color}\"/>", pts[0].0, pts[0].1);
                } else if !pts.is_empty() {
                    let _ = writeln!(o, "<path d=\"{d}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.2\"/>");
                }
            }
            Style::Dots => {
                for (x, y) in pts {
                    let _ = writeln!(o, "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"2.5\" fill=\"{color}\"/>");
                }
            }
            Style::Squares => {
                for (x, y) in pts {
                    let _ = writeln!(
                        o,
                        "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"6\" height=\"6\" fill=\"{color}\"/>",
                        x - 3.0,
                        y - 3.0
                    );
                }
            }
        }
    }
    for &(x, y, class) in &plot.markers {
        if !(x.is_finite() && y.is_finite()) {
            continue;
        }
        let (x, y) = (sx(x), sy(y));
        let _ = writeln!(o, "{}", marker(x, y, class));
    }
    o.push_str("</g>\n");

    // legend
    let lx = W - RIGHT + 12.0;
    let mut ly = TOP + 10.0;
    for (k, s) in plot.series.iter().enumerate() {
        if s.label.is_empty() {
            continue;
        }
        let color = PALETTE[k % PALETTE.len()];
        let _ = writeln!(
            o,
            "<rect x=\"{lx:.1}\" y=\"{:.1}\" width=\"10\" height=\"10\" fill=\"{color}\"/><text x=\"{:.1}\" y=\"{:.1}\">{}</text>",
            ly - 9.0,
            lx + 16.0,
            ly,
            escape(&s.label)
        );
        ly += 18.0;
    }
    let mut classes: Vec<Stability> = plot.markers.iter().map(|m| m.2).collect();
    classes.sort_by_key(|c| c.as_str());
    classes.dedup();
    for c in classes {
        let _ = writeln!(
            o,
            "{}<text x=\"{:.1}\" y=\"{:.1}\">{}</text>",
            marker(lx + 5.0, ly - 4.0, c),
            lx + 16.0,
            ly,
            c.as_str().to_lowercase()
        );
        ly += 18.0;
    }
    o.push_str("</svg>\n");
    Ok(o)
}

/// Attractor: filled circle. Repeller: open circle. Marginal: dashed square.
/// Saddle: cross.
fn marker(x: f64, y: f64, class: Stability) -> String {
    match class {
        Stability::Attractor => format!("<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"5\" fill=\"black\"/>"),
        Stability::Repeller => format!(
            "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"5\" fill=\"white\" stroke=\"black\" stroke-width=\"1.5\"/>"
        ),
        Stability::Marginal => format!(
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"10\" height=\"10\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" stroke-dasharray=\"2,2\"/>",
            x - 5.0,
            y - 5.0
        ),
        Stability::Saddle => format!(
            "<path d=\"M{:.2},{:.2} L{:.2},{:.2} M{:.2},{:.2} L{:.2},{:.2}\" stroke=\"black\" stroke-width=\"1.5\"/>",
            x - 5.0,
            y - 5.0,
            x + 5.0,
            y + 5.0,
            x - 5.0,
            y + 5.0,
            x + 5.0,
            y - 5.0
        ),
    }
}
