//! Minimal SVG 1.1 plots: line charts and filled triangle fields.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn header(out: &mut String, width: f64, height: f64) {
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="Helvetica, Arial, sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>"#
    );
}

fn text(out: &mut String, x: f64, y: f64, anchor: &str, extra: &str, s: &str) {
    let _ = writeln!(
        out,
        r#"<text x="{x:.1}" y="{y:.1}" text-anchor="{anchor}"{extra}>{}</text>"#,
        escape(s)
    );
}

fn write_file(path: &Path, svg: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, svg).map_err(|e| Error::io(path, e))
}

/// Tick positions covering `[lo, hi]` with a 1-2-5 step.
fn ticks(lo: f64, hi: f64, target: usize) -> (Vec<f64>, f64) {
    let raw = (hi - lo) / target.max(1) as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|m| m * mag)
        .find(|&s| s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    let values = (first..=last).map(|k| k as f64 * step).collect();
    (values, step)
}

fn tick_label(v: f64, step: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let e = step.abs().log10().floor();
    if !(-3.0..=4.0).contains(&e) {
        format!("{v:.1e}")
    } else {
        let decimals = if e >= 0.0 { 0 } else { (-e) as usize };
        format!("{v:.decimals$}")
    }
}

/// Data range padded by 5 %, widened if degenerate.
fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if !(lo.is_finite() && hi.is_finite()) {
        return (0.0, 1.0);
    }
    let span = hi - lo;
    if span <= f64::EPSILON * hi.abs().max(lo.abs()).max(1e-300) {
        let d = if lo == 0.0 { 1.0 } else { 0.1 * lo.abs() };
        return (lo - d, hi + d);
    }
    (lo - 0.05 * span, hi + 0.05 * span)
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<[f64; 2]>,
    pub dashed: bool,
}

/// Line chart with a legend on the right. Non-finite points break the line.
#[derive(Debug, Clone)]
pub struct LinePlot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    pub width: f64,
    pub height: f64,
}

impl LinePlot {
    pub fn new(title: impl Into<String>, x_label: impl Into<String>, y_label: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            series: Vec::new(),
            width: 720.0,
            height: 440.0,
        }
    }

    pub fn line(mut self, label: impl Into<String>, points: Vec<[f64; 2]>) -> Self {
        self.series.push(Series {
            label: label.into(),
            points,
            dashed: false,
        });
        self
    }

    pub fn dashed(mut self, label: impl Into<String>, points: Vec<[f64; 2]>) -> Self {
        self.series.push(Series {
            label: label.into(),
            points,
            dashed: true,
        });
        self
    }

    pub fn render(&self) -> String {
        let (left, right, top, bottom) = (80.0, 170.0, 36.0, 52.0);
        let pw = self.width - left - right;
        let ph = self.height - top - bottom;
        let finite = self
            .series
            .iter()
            .flat_map(|s| s.points.iter())
            .filter(|p| p[0].is_finite() && p[1].is_finite());
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for p in finite {
            x0 = x0.min(p[0]);
            x1 = x1.max(p[0]);
            y0 = y0.min(p[1]);
            y1 = y1.max(p[1]);
        }
        let (x0, x1) = padded(x0, x1);
        let (y0, y1) = padded(y0, y1);
        let sx = |x: f64| left + (x - x0) / (x1 - x0) * pw;
        let sy = |y: f64| top + (y1 - y) / (y1 - y0) * ph;

        let mut out = String::new();
        header(&mut out, self.width, self.height);
        text(
            &mut out,
            left + pw / 2.0,
            22.0,
            "middle",
            r#" font-size="14""#,
            &self.title,
        );

        let (xt, xs) = ticks(x0, x1, 6);
        let (yt, ys) = ticks(y0, y1, 6);
        let _ = writeln!(out, r##"<g stroke="#e0e0e0" stroke-width="1">"##);
        for &x in &xt {
            let _ = writeln!(
                out,
                r#"<line x1="{:.2}" y1="{top:.2}" x2="{:.2}" y2="{:.2}"/>"#,
                sx(x),
                sx(x),
                top + ph
            );
        }
        for &y in &yt {
            let _ = writeln!(
                out,
                r#"<line x1="{left:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
                sy(y),
                left + pw,
                sy(y)
            );
        }
        let _ = writeln!(out, "</g>");
        if y0 < 0.0 && y1 > 0.0 {
            let _ = writeln!(
                out,
                r##"<line x1="{left:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#404040" stroke-width="1" stroke-dasharray="4 3"/>"##,
                left + pw,
                y = sy(0.0)
            );
        }
        for &x in &xt {
            text(&mut out, sx(x), top + ph + 16.0, "middle", "", &tick_label(x, xs));
        }
        for &y in &yt {
            text(&mut out, left - 6.0, sy(y) + 4.0, "end", "", &tick_label(y, ys));
        }
        text(
            &mut out,
            left + pw / 2.0,
            self.height - 12.0,
            "middle",
            "",
            &self.x_label,
        );
        let (lx, ly) = (18.0, top + ph / 2.0);
        text(
            &mut out,
            lx,
            ly,
            "middle",
            &format!(r#" transform="rotate(-90 {lx:.1} {ly:.1})""#),
            &self.y_label,
        );

        for (k, s) in self.series.iter().enumerate() {
            let color = PALETTE[k % PALETTE.len()];
            let dash = if s.dashed { r#" stroke-dasharray="6 4""# } else { "" };
            let mut runs: Vec<Vec<[f64; 2]>> = vec![Vec::new()];
            for p in &s.points {
                if p[0].is_finite() && p[1].is_finite() {
                    runs.last_mut().unwrap().push(*p);
                } else if !runs.last().unwrap().is_empty() {
                    runs.push(Vec::new());
                }
            }
            for run in runs.iter().filter(|r| r.len() >= 2) {
                let pts: Vec<String> = run.iter().map(|p| format!("{:.2},{:.2}", sx(p[0]), sy(p[1]))).collect();
                let _ = writeln!(
                    out,
                    r#"<polyline fill="none" stroke="{color}" stroke-width="1.6"{dash} points="{}"/>"#,
                    pts.join(" ")
                );
            }
            let ly = top + 14.0 + 18.0 * k as f64;
            let lx = left + pw + 14.0;
            let _ = writeln!(
                out,
                r#"<line x1="{lx:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="{color}" stroke-width="2"{dash}/>"#,
                ly - 4.0,
                lx + 22.0,
                ly - 4.0
            );
            text(&mut out, lx + 28.0, ly, "start", "", &s.label);
        }
        let _ = writeln!(
            out,
            r#"<rect x="{left}" y="{top}" width="{pw:.2}" height="{ph:.2}" fill="none" stroke="black" stroke-width="1"/>"#
        );
        out.push_str("</svg>\n");
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_file(path, &self.render())
    }
}

/// Colour for `t` in `[0, 1]` from a blue-white-red map when `diverging`,
/// otherwise from a dark-blue to yellow ramp.
fn colour(t: f64, diverging: bool) -> String {
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.5 };
    let stops: &[[f64; 3]] = if diverging {
        &[[59.0, 76.0, 192.0], [247.0, 247.0, 247.0], [180.0, 4.0, 38.0]]
    } else {
        &[
            [68.0, 1.0, 84.0],
            [59.0, 82.0, 139.0],
            [33.0, 145.0, 140.0],
            [94.0, 201.0, 98.0],
            [253.0, 231.0, 37.0],
        ]
    };
    let x = t * (stops.len() - 1) as f64;
    let i = (x.floor() as usize).min(stops.len() - 2);
    let f = x - i as f64;
    let c: Vec<u8> = (0..3)
        .map(|k| (stops[i][k] + f * (stops[i + 1][k] - stops[i][k])).round() as u8)
        .collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

/// Triangulated field in the (r, z) plane: filled triangles coloured by the
/// mean vertex value, the zero level drawn in black, and a colour bar. Without
/// values only the triangle edges are drawn.
#[derive(Debug, Clone)]
pub struct FieldPlot {
    pub title: String,
    pub label: String,
    pub vertices: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
    pub values: Option<Vec<f64>>,
    pub width: f64,
}

impl FieldPlot {
    pub fn new(title: impl Into<String>, vertices: Vec<[f64; 2]>, triangles: Vec<[usize; 3]>) -> Self {
        Self {
            title: title.into(),
            label: String::new(),
            vertices,
            triangles,
            values: None,
            width: 640.0,
        }
    }

    pub fn values(mut self, label: impl Into<String>, values: Vec<f64>) -> Self {
        self.label = label.into();
        self.values = Some(values);
        self
    }

    pub fn render(&self) -> String {
        let (left, right, top, bottom) = (50.0, if self.values.is_some() { 130.0 } else { 30.0 }, 36.0, 40.0);
        let (mut r0, mut r1, mut z0, mut z1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for v in &self.vertices {
            r0 = r0.min(v[0]);
            r1 = r1.max(v[0]);
            z0 = z0.min(v[1]);
            z1 = z1.max(v[1]);
        }
        let (r0, r1) = padded(r0, r1);
        let (z0, z1) = padded(z0, z1);
        let pw = self.width - left - right;
        let scale = pw / (r1 - r0);
        let ph = (z1 - z0) * scale;
        let height = top + ph + bottom;
        let sx = |r: f64| left + (r - r0) * scale;
        let sy = |z: f64| top + (z1 - z) * scale;

        let mut out = String::new();
        header(&mut out, self.width, height);
        text(
            &mut out,
            self.width / 2.0,
            22.0,
            "middle",
            r#" font-size="14""#,
            &self.title,
        );

        match &self.values {
            None => {
                let _ = writeln!(out, r##"<g fill="none" stroke="#303030" stroke-width="0.4">"##);
                for t in &self.triangles {
                    let p = t.map(|i| self.vertices[i]);
                    let _ = writeln!(
                        out,
                        r#"<polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}"/>"#,
                        sx(p[0][0]),
                        sy(p[0][1]),
                        sx(p[1][0]),
                        sy(p[1][1]),
                        sx(p[2][0]),
                        sy(p[2][1])
                    );
                }
                let _ = writeln!(out, "</g>");
            }
            Some(values) => {
                let (lo, hi) = values
                    .iter()
                    .filter(|v| v.is_finite())
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
                let (lo, hi) = if lo.is_finite() { (lo, hi) } else { (0.0, 0.0) };
                let diverging = lo < 0.0 && hi > 0.0;
                let (c0, c1) = if diverging {
                    let m = lo.abs().max(hi.abs());
                    (-m, m)
                } else if hi > lo {
                    (lo, hi)
                } else {
                    (lo - 1.0, hi + 1.0)
                };
                let to_t = |v: f64| (v - c0) / (c1 - c0);
                let _ = writeln!(out, r#"<g stroke-width="0.3">"#);
                for t in &self.triangles {
                    let p = t.map(|i| self.vertices[i]);
                    let mean = (values[t[0]] + values[t[1]] + values[t[2]]) / 3.0;
                    let c = colour(to_t(mean), diverging);
                    let _ = writeln!(
                        out,
                        r#"<polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="{c}" stroke="{c}"/>"#,
                        sx(p[0][0]),
                        sy(p[0][1]),
                        sx(p[1][0]),
                        sy(p[1][1]),
                        sx(p[2][0]),
                        sy(p[2][1])
                    );
                }
                let _ = writeln!(out, "</g>");
                if diverging {
                    let _ = writeln!(out, r#"<g stroke="black" stroke-width="1">"#);
                    for t in &self.triangles {
                        let mut hits = Vec::with_capacity(2);
                        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                            let (va, vb) = (values[a], values[b]);
                            if (va < 0.0) != (vb < 0.0) {
                                let s = va / (va - vb);
                                let pa = self.vertices[a];
                                let pb = self.vertices[b];
                                hits.push([pa[0] + s * (pb[0] - pa[0]), pa[1] + s * (pb[1] - pa[1])]);
                            }
                        }
                        if hits.len() == 2 {
                            let _ = writeln!(
                                out,
                                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
                                sx(hits[0][0]),
                                sy(hits[0][1]),
                                sx(hits[1][0]),
                                sy(hits[1][1])
                            );
                        }
                    }
                    let _ = writeln!(out, "</g>");
                }

                let bx = left + pw + 30.0;
                let bh = ph.clamp(120.0, 320.0);
                let n = 48;
                for k in 0..n {
                    let t = (k as f64 + 0.5) / n as f64;
                    let y = top + bh * (1.0 - (k + 1) as f64 / n as f64);
                    let _ = writeln!(
                        out,
                        r#"<rect x="{bx:.1}" y="{y:.2}" width="18" height="{:.2}" fill="{}"/>"#,
                        bh / n as f64 + 0.3,
                        colour(t, diverging)
                    );
                }
                let _ = writeln!(
                    out,
                    r#"<rect x="{bx:.1}" y="{top:.1}" width="18" height="{bh:.2}" fill="none" stroke="black"/>"#
                );
                text(&mut out, bx + 24.0, top + 10.0, "start", "", &format!("{c1:.3e}"));
                text(&mut out, bx + 24.0, top + bh, "start", "", &format!("{c0:.3e}"));
                text(&mut out, bx, top + bh + 18.0, "start", "", &self.label);
            }
        }
        let (xt, xs) = ticks(r0, r1, 6);
        for &x in &xt {
            text(&mut out, sx(x), top + ph + 16.0, "middle", "", &tick_label(x, xs));
        }
        text(&mut out, left + pw / 2.0, height - 8.0, "middle", "", "r [cm]");
        let (zt, zs) = ticks(z0, z1, 6);
        for &z in &zt {
            text(&mut out, left - 6.0, sy(z) + 4.0, "end", "", &tick_label(z, zs));
        }
        out.push_str("</svg>\n");
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_file(path, &self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ticks_are_round_and_cover() {
        let (t, step) = ticks(-0.013, 0.072, 5);
        assert_eq!(step, 0.02);
        assert!((t[0] - 0.0).abs() < 1e-12 || t[0] < 0.0);
        assert!(t.iter().all(|v| (-0.013..=0.072).contains(v)));
        assert_eq!(tick_label(0.04, step), "0.04");
        assert_eq!(tick_label(3e-5, 1e-5), "3.0e-5");
    }

    #[test]
    fn line_plot_is_well_formed() {
        let pts: Vec<[f64; 2]> = (0..50).map(|i| [i as f64 * 0.02, (i as f64 * 0.2).sin()]).collect();
        let svg = LinePlot::new("a < b & c", "r [cm]", "u_n [µm]")
            .line("sin", pts)
            .dashed("gap", vec![[0.0, 0.0], [f64::NAN, 1.0], [0.5, 0.5], [0.9, 0.2]])
            .render();
        assert!(svg.starts_with("<?xml"));
        assert!(svg.contains(r#"version="1.1""#));
        assert!(svg.contains("a &lt; b &amp; c"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.trim_end().ends_with("</svg>"));
        // zero line: data spans both signs
        assert!(svg.contains("stroke-dasharray=\"4 3\""));
    }

    #[test]
    fn field_plot_draws_zero_level() {
        let vertices = vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]];
        let triangles = vec![[0, 1, 2], [1, 3, 2]];
        let svg = FieldPlot::new("f", vertices.clone(), triangles.clone())
            .values("f [MPa]", vec![-1.0, 1.0, -1.0, 1.0])
            .render();
        assert_eq!(svg.matches("<polygon").count(), 2);
        assert_eq!(svg.matches("<line").count(), 2);
        let mesh = FieldPlot::new("m", vertices, triangles).render();
        assert!(mesh.contains(r#"fill="none""#));
    }

    #[test]
    fn colour_endpoints() {
        assert_eq!(colour(0.5, true), "#f7f7f7");
        assert_eq!(colour(0.0, true), "#3b4cc0");
        assert_eq!(colour(1.0, false), "#fde725");
    }
}
