use std::fmt::Write as _;
use std::path::Path;

use super::sweep::{CurvePoint, SweepResult};
use crate::analytic::Method;
use crate::error::{Error, Result};
use crate::estimators::{DensityGrid, DiameterSample, DENSITY_HEADER, DIAMETER_HEADER};
use crate::sde::{TrajectoryRecord, TRAJECTORY_HEADER};

pub const SWEEP_HEADER: &str = "alpha,b,sigma,lambda1,lambda2,regime,sigma0,method,error";
pub const CURVE_HEADER: &str = "alpha,sigma0";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            _ => Err(Error::InvalidInput(format!(
                "unknown format {s:?} (csv, json, svg)"
            ))),
        }
    }
}

impl Format {
    /// Guess from a file extension.
    pub fn from_path(path: &Path) -> Option<Self> {
        path.extension()?.to_str()?.parse().ok()
    }
}

/// Anything that can be written as CSV, JSON or an SVG chart.
pub trait Emit {
    fn csv(&self) -> String;
    fn json(&self) -> Result<String>;
    fn svg(&self) -> String;
}

/// Render to a string in the given format.
pub fn render<T: Emit + ?Sized>(artifact: &T, format: Format) -> Result<String> {
    match format {
        Format::Csv => Ok(artifact.csv()),
        Format::Json => artifact.json(),
        Format::Svg => Ok(artifact.svg()),
    }
}

/// Render and write to `path`. Write failures surface as `IoFailure`.
pub fn emit<T: Emit + ?Sized>(artifact: &T, format: Format, path: &Path) -> Result<()> {
    let text = render(artifact, format)?;
    std::fs::write(path, text)?;
    Ok(())
}

/// Shortest round-trip representation; exponent form outside `[1e-4, 1e15)`.
fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn to_json<T: serde::Serialize + ?Sized>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)
        .map_err(|e| Error::InvalidInput(format!("cannot serialize: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn table<T>(header: &str, rows: &[T], fields: impl Fn(&T) -> Vec<String>) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(header);
    out.push('\n');
    for r in rows {
        out.push_str(&fields(r).join(","));
        out.push('\n');
    }
    out
}

impl Emit for SweepResult {
    fn csv(&self) -> String {
        table(SWEEP_HEADER, &self.rows, |r| {
            let error = match &r.error {
                super::RowError::Estimate(e) => num(*e),
                // keep one field per column whatever the message says
                super::RowError::Failure(m) => m.replace(',', ";"),
            };
            vec![
                num(r.alpha),
                num(r.b),
                num(r.sigma),
                opt(r.lambda1),
                opt(r.lambda2),
                r.regime.map(|k| k.as_str().to_string()).unwrap_or_default(),
                opt(r.sigma0),
                r.method.as_str().to_string(),
                error,
            ]
        })
    }

    fn json(&self) -> Result<String> {
        to_json(self)
    }

    /// `lambda_1` against sigma, one line per `(alpha, b, method)` slice.
    fn svg(&self) -> String {
        let mut chart = Chart::new("lambda1 vs sigma", "sigma", "lambda1");
        for method in [Method::Quadrature, Method::MonteCarlo] {
            for slice in self.slices(method) {
                let pts: Vec<(f64, f64)> = slice
                    .iter()
                    .filter_map(|r| r.lambda1.map(|l| (r.sigma, l)))
                    .collect();
                if pts.is_empty() {
                    continue;
                }
                chart.series.push(Series {
                    label: format!(
                        "alpha={} b={} {}",
                        num(slice[0].alpha),
                        num(slice[0].b),
                        method.as_str()
                    ),
                    points: pts,
                });
                if method == Method::Quadrature || self.slices(Method::Quadrature).is_empty() {
                    if let Some(s0) = slice[0].sigma0 {
                        chart.markers.push(s0);
                    }
                }
            }
        }
        chart.zero_line = true;
        chart.render()
    }
}

impl Emit for [CurvePoint] {
    fn csv(&self) -> String {
        table(CURVE_HEADER, self, |c| vec![num(c.alpha), num(c.sigma0)])
    }

    fn json(&self) -> Result<String> {
        to_json(self)
    }

    fn svg(&self) -> String {
        let mut chart = Chart::new("critical noise amplitude", "alpha", "sigma0");
        chart.series.push(Series {
            label: "sigma0".into(),
            points: self.iter().map(|c| (c.alpha, c.sigma0)).collect(),
        });
        chart.render()
    }
}

impl Emit for DensityGrid {
    fn csv(&self) -> String {
        let rows: Vec<(f64, f64)> = self
            .phi
            .iter()
            .copied()
            .zip(self.p.iter().copied())
            .collect();
        table(DENSITY_HEADER, &rows, |&(phi, p)| vec![num(phi), num(p)])
    }

    fn json(&self) -> Result<String> {
        to_json(self)
    }

    fn svg(&self) -> String {
        let mut chart = Chart::new("stationary angle density", "phi", "p");
        chart.series.push(Series {
            label: "p".into(),
            points: self
                .phi
                .iter()
                .copied()
                .zip(self.p.iter().copied())
                .collect(),
        });
        chart.render()
    }
}

impl Emit for [DiameterSample] {
    fn csv(&self) -> String {
        table(DIAMETER_HEADER, self, |d| vec![num(d.t), num(d.diameter)])
    }

    fn json(&self) -> Result<String> {
        to_json(self)
    }

    /// Diameter on a log10 axis; zero diameters are dropped.
    fn svg(&self) -> String {
        let mut chart = Chart::new("pullback cloud diameter", "t", "log10 diameter");
        chart.series.push(Series {
            label: "diameter".into(),
            points: self
                .iter()
                .filter(|d| d.diameter > 0.0)
                .map(|d| (d.t, d.diameter.log10()))
                .collect(),
        });
        chart.render()
    }
}

impl Emit for [TrajectoryRecord] {
    fn csv(&self) -> String {
        table(TRAJECTORY_HEADER, self, |r| {
            [r.t, r.y, r.theta, r.v_y, r.v_theta, r.log_norm]
                .iter()
                .map(|&x| num(x))
                .collect()
        })
    }

    fn json(&self) -> Result<String> {
        to_json(self)
    }

    fn svg(&self) -> String {
        let mut chart = Chart::new("trajectory", "t", "y");
        chart.series.push(Series {
            label: "y".into(),
            points: self.iter().map(|r| (r.t, r.y)).collect(),
        });
        chart.render()
    }
}

struct Series {
    label: String,
    points: Vec<(f64, f64)>,
}

/// Minimal line chart: axes with min/max labels, polylines, an optional
/// dashed zero line and vertical markers at given x positions.
struct Chart {
    title: String,
    x_label: String,
    y_label: String,
    series: Vec<Series>,
    zero_line: bool,
    markers: Vec<f64>,
}

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];
const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 56.0;

impl Chart {
    fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            series: Vec::new(),
            zero_line: false,
            markers: Vec::new(),
        }
    }

    fn bounds(&self) -> (f64, f64, f64, f64) {
        let pts = self
            .series
            .iter()
            .flat_map(|s| s.points.iter())
            .filter(|p| p.0.is_finite() && p.1.is_finite());
        let (mut x0, mut x1, mut y0, mut y1) = (
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        );
        for &(x, y) in pts {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if !x0.is_finite() {
            return (0.0, 1.0, 0.0, 1.0);
        }
        if self.zero_line {
            y0 = y0.min(0.0);
            y1 = y1.max(0.0);
        }
        let pad = |lo: f64, hi: f64| {
            if hi > lo {
                (lo, hi)
            } else {
                (lo - 0.5, hi + 0.5)
            }
        };
        let (x0, x1) = pad(x0, x1);
        let (y0, y1) = pad(y0, y1);
        (x0, x1, y0, y1)
    }

    fn render(&self) -> String {
        let (x0, x1, y0, y1) = self.bounds();
        let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
        let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="20" text-anchor="middle">{}</text>"#,
            WIDTH / 2.0,
            self.title
        );
        let (l, r, t, b) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
        let _ = writeln!(
            s,
            r#"<path d="M{l:.1},{t:.1} V{b:.1} H{r:.1}" fill="none" stroke="black"/>"#
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            WIDTH / 2.0,
            HEIGHT - 12.0,
            self.x_label
        );
        let _ = writeln!(
            s,
            r#"<text x="14" y="{:.1}" text-anchor="middle" transform="rotate(-90 14 {:.1})">{}</text>"#,
            HEIGHT / 2.0,
            HEIGHT / 2.0,
            self.y_label
        );
        for (v, anchor, x, y) in [(x0, "start", l, b + 16.0), (x1, "end", r, b + 16.0)] {
            let _ = writeln!(
                s,
                r#"<text x="{x:.1}" y="{y:.1}" text-anchor="{anchor}">{}</text>"#,
                short(v)
            );
        }
        for (v, y) in [(y0, b), (y1, t)] {
            let _ = writeln!(
                s,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
                l - 4.0,
                y + 4.0,
                short(v)
            );
        }
        if self.zero_line {
            let _ = writeln!(
                s,
                r##"<line class="zero-line" x1="{l:.1}" y1="{0:.2}" x2="{r:.1}" y2="{0:.2}" stroke="#555" stroke-dasharray="4 3"/>"##,
                sy(0.0)
            );
        }
        for (i, series) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let pts: Vec<String> = series
                .points
                .iter()
                .filter(|p| p.0.is_finite() && p.1.is_finite())
                .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"><title>{}</title></polyline>"#,
                pts.join(" "),
                series.label
            );
        }
        for &m in self.markers.iter().filter(|&&m| m >= x0 && m <= x1) {
            let x = sx(m);
            let _ = writeln!(
                s,
                r##"<g class="sigma0-marker"><line x1="{x:.2}" y1="{t:.1}" x2="{x:.2}" y2="{b:.1}" stroke="#888" stroke-dasharray="2 2"/><circle cx="{x:.2}" cy="{:.2}" r="4" fill="none" stroke="black"/><title>sigma0 = {}</title></g>"##,
                sy(0.0).clamp(t, b),
                num(m)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

fn short(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-3 || v.abs() >= 1e5) {
        format!("{v:.2e}")
    } else {
        format!("{}", (v * 1000.0).round() / 1000.0)
    }
}
