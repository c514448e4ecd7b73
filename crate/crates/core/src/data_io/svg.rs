//! Self-contained SVG line plots.

use std::fmt::Write as _;
use std::path::Path;

use super::{write_atomic, DataError};
use crate::numerics::{LineFit, SampledCurve};

const WIDTH: f64 = 640.0;
const PANEL_HEIGHT: f64 = 400.0;
const LEFT: f64 = 84.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 36.0;
const BOTTOM: f64 = 52.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesStyle {
    Markers,
    Line,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub curve: SampledCurve,
    pub style: SeriesStyle,
}

impl Series {
    pub fn markers(name: impl Into<String>, curve: SampledCurve) -> Self {
        Self {
            name: name.into(),
            curve,
            style: SeriesStyle::Markers,
        }
    }

    pub fn line(name: impl Into<String>, curve: SampledCurve) -> Self {
        Self {
            name: name.into(),
            curve,
            style: SeriesStyle::Line,
        }
    }
}

/// One set of axes. A fit is drawn from its x-intercept across the data and
/// the intercept is labelled `V_T = ... V`.
#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    pub fit: Option<LineFit>,
}

impl Panel {
    pub fn new(title: impl Into<String>, x_label: impl Into<String>, y_label: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            series: Vec::new(),
            fit: None,
        }
    }

    pub fn with_series(mut self, s: Series) -> Self {
        self.series.push(s);
        self
    }

    pub fn with_fit(mut self, fit: LineFit) -> Self {
        self.fit = Some(fit);
        self
    }

    fn finite_points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.series
            .iter()
            .flat_map(|s| s.curve.points())
            .filter(|(x, y)| x.is_finite() && y.is_finite())
    }
}

/// Panels stacked vertically.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Figure {
    pub panels: Vec<Panel>,
}

impl Figure {
    pub fn new(panels: Vec<Panel>) -> Self {
        Self { panels }
    }
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

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if hi > lo {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    } else {
        let d = if lo == 0.0 { 1.0 } else { 0.5 * lo.abs() };
        (lo - d, hi + d)
    }
}

fn ticks(lo: f64, hi: f64) -> (Vec<f64>, f64) {
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    ((first..=last).map(|k| k as f64 * step).collect(), step)
}

fn tick_label(v: f64, step: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !(1e-3..1e4).contains(&step) {
        return format!("{v:.1e}");
    }
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    format!("{v:.decimals$}")
}

struct Frame {
    x0: f64,
    y0: f64,
    w: f64,
    h: f64,
    xr: (f64, f64),
    yr: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        self.x0 + (x - self.xr.0) / (self.xr.1 - self.xr.0) * self.w
    }

    fn py(&self, y: f64) -> f64 {
        self.y0 + self.h - (y - self.yr.0) / (self.yr.1 - self.yr.0) * self.h
    }
}

fn render_panel(out: &mut String, panel: &Panel, index: usize) -> Result<(), DataError> {
    let (mut xlo, mut xhi, mut ylo, mut yhi) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    let mut any = false;
    for (x, y) in panel.finite_points() {
        any = true;
        xlo = xlo.min(x);
        xhi = xhi.max(x);
        ylo = ylo.min(y);
        yhi = yhi.max(y);
    }
    if !any {
        return Err(DataError::EmptyPlot);
    }
    let fit = panel.fit.as_ref().filter(|f| f.x_intercept.is_finite() && f.slope.is_finite());
    if let Some(f) = fit {
        xlo = xlo.min(f.x_intercept);
        xhi = xhi.max(f.x_intercept);
        ylo = ylo.min(0.0);
        yhi = yhi.max(0.0);
    }
    let top = index as f64 * PANEL_HEIGHT;
    let fr = Frame {
        x0: LEFT,
        y0: top + TOP,
        w: WIDTH - LEFT - RIGHT,
        h: PANEL_HEIGHT - TOP - BOTTOM,
        xr: padded(xlo, xhi),
        yr: padded(ylo, yhi),
    };

    let _ = writeln!(out, "<g id=\"panel{index}\">");
    let _ = writeln!(
        out,
        "<clipPath id=\"clip{index}\"><rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\"/></clipPath>",
        fr.x0, fr.y0, fr.w, fr.h
    );
    let _ = writeln!(
        out,
        "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"#000\"/>",
        fr.x0, fr.y0, fr.w, fr.h
    );
    let _ = writeln!(
        out,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"14\">{}</text>",
        fr.x0 + fr.w / 2.0,
        top + TOP - 12.0,
        escape(&panel.title)
    );

    let (xt, xs) = ticks(fr.xr.0, fr.xr.1);
    for t in xt {
        let x = fr.px(t);
        let yb = fr.y0 + fr.h;
        let _ = writeln!(out, "<line x1=\"{x:.2}\" y1=\"{yb:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"#000\"/>", yb + 5.0);
        let _ = writeln!(
            out,
            "<text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"11\">{}</text>",
            yb + 18.0,
            tick_label(t, xs)
        );
    }
    let (yt, ys) = ticks(fr.yr.0, fr.yr.1);
    for t in yt {
        let y = fr.py(t);
        let _ = writeln!(out, "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"#000\"/>", fr.x0 - 5.0, fr.x0);
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\" font-size=\"11\">{}</text>",
            fr.x0 - 8.0,
            y + 4.0,
            tick_label(t, ys)
        );
    }
    let _ = writeln!(
        out,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"12\">{}</text>",
        fr.x0 + fr.w / 2.0,
        fr.y0 + fr.h + 40.0,
        escape(&panel.x_label)
    );
    let (lx, ly) = (18.0, fr.y0 + fr.h / 2.0);
    let _ = writeln!(
        out,
        "<text x=\"{lx:.2}\" y=\"{ly:.2}\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 {lx:.2} {ly:.2})\">{}</text>",
        escape(&panel.y_label)
    );

    let _ = writeln!(out, "<g clip-path=\"url(#clip{index})\">");
    for (k, s) in panel.series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let pts: Vec<(f64, f64)> = s
            .curve
            .points()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|(x, y)| (fr.px(x), fr.py(y)))
            .collect();
        match s.style {
            SeriesStyle::Markers => {
                for (x, y) in pts {
                    let _ = writeln!(out, "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3\" fill=\"none\" stroke=\"{color}\"/>");
                }
            }
            SeriesStyle::Line => {
                let d: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
                let _ = writeln!(out, "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\"/>", d.join(" "));
            }
        }
    }
    if let Some(f) = fit {
        let a = xlo.min(f.x_intercept);
        let b = xhi;
        let _ = writeln!(
            out,
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#000\" stroke-dasharray=\"6 3\"/>",
            fr.px(a),
            fr.py(f.eval(a)),
            fr.px(b),
            fr.py(f.eval(b))
        );
    }
    out.push_str("</g>\n");

    if let Some(f) = fit {
        let (x, y) = (fr.px(f.x_intercept), fr.py(0.0));
        let _ = writeln!(out, "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"4\" fill=\"#000\"/>");
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\">V_T = {:.3} V</text>",
            x + 6.0,
            y - 8.0,
            f.x_intercept
        );
    }

    let mut ly = fr.y0 + 16.0;
    for (k, s) in panel.series.iter().enumerate().filter(|(_, s)| !s.name.is_empty()) {
        let color = PALETTE[k % PALETTE.len()];
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{ly:.2}\" font-size=\"11\" fill=\"{color}\">{}</text>",
            fr.x0 + 8.0,
            escape(&s.name)
        );
        ly += 14.0;
    }
    out.push_str("</g>\n");
    Ok(())
}

/// SVG document text for `figure`.
pub fn render_svg(figure: &Figure) -> Result<String, DataError> {
    if figure.panels.is_empty() {
        return Err(DataError::EmptyPlot);
    }
    let height = PANEL_HEIGHT * figure.panels.len() as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{height}\" viewBox=\"0 0 {WIDTH} {height}\" font-family=\"sans-serif\">"
    );
    let _ = writeln!(out, "<rect width=\"{WIDTH}\" height=\"{height}\" fill=\"#fff\"/>");
    for (i, p) in figure.panels.iter().enumerate() {
        render_panel(&mut out, p, i)?;
    }
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn emit_plot(figure: &Figure, path: impl AsRef<Path>) -> Result<(), DataError> {
    let text = render_svg(figure)?;
    write_atomic(path.as_ref(), text.as_bytes())
}
