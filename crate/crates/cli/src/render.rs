//! CSV, JSON and SVG text. Everything here is a pure function of its inputs so
//! repeated runs produce identical bytes.

use std::fmt::Write as _;

use cubic_kappa::curvature::KappaEvaluator;
use cubic_kappa::extrema::{ExtremaKind, ExtremaReport, ExtremumLocation};
use cubic_kappa::scalar::{fmt_rational, rat, to_f64};
use cubic_kappa::{Rational, RationalCubic};
use serde::Serialize;

/// `i / (n - 1)` for `n` samples, `0` alone when `n == 1`.
fn sample_params(n: usize) -> impl Iterator<Item = Rational> {
    let den = n.saturating_sub(1).max(1) as i64;
    (0..n).map(move |i| rat(i as i64, den))
}

/// Shortest round-trip decimal, with `-0` folded into `0`.
fn num(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else {
        v.to_string()
    }
}

/// Fixed six decimals for SVG coordinates.
fn fixed(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

pub fn points_csv(c: &RationalCubic, samples: usize) -> String {
    let mut s = String::from("t,x,y\n");
    for t in sample_params(samples) {
        let p = c.bezier().point_at(&t);
        let _ = writeln!(s, "{},{},{}", num(to_f64(&t)), num(to_f64(&p.x)), num(to_f64(&p.y)));
    }
    s
}

/// CSV plus the number of samples that fell on a kink.
pub fn curvature_csv(c: &RationalCubic, samples: usize) -> (String, usize) {
    let ev = KappaEvaluator::new(c.bezier());
    let mut s = String::from("t,kappa\n");
    let mut kinks = 0;
    for t in sample_params(samples) {
        let t = to_f64(&t);
        match ev.kappa(t) {
            Ok(k) => {
                let _ = writeln!(s, "{},{}", num(t), num(k));
            }
            Err(_) => {
                kinks += 1;
                let _ = writeln!(s, "{},", num(t));
            }
        }
    }
    (s, kinks)
}

#[derive(Serialize)]
struct LocationJson {
    t: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    t_exact: Option<String>,
    kappa: Option<f64>,
    /// Isolating window on the input curve's parameter.
    window: [String; 2],
    multiplicity: usize,
}

impl From<&ExtremumLocation> for LocationJson {
    fn from(l: &ExtremumLocation) -> Self {
        LocationJson {
            t: l.t,
            t_exact: l.t_exact.as_ref().map(fmt_rational),
            kappa: l.kappa,
            window: [fmt_rational(&l.input_window[0]), fmt_rational(&l.input_window[1])],
            multiplicity: l.window.multiplicity,
        }
    }
}

#[derive(Serialize)]
struct ExtremaJson {
    kind: ExtremaKind,
    count: usize,
    theorem_regime: bool,
    locations: Vec<LocationJson>,
    degenerate_critical_points: Vec<LocationJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_count: Option<usize>,
}

pub fn extrema_json(r: &ExtremaReport, oracle_count: Option<usize>) -> String {
    let doc = ExtremaJson {
        kind: r.kind,
        count: r.count,
        theorem_regime: r.theorem_regime,
        locations: r.locations.iter().map(Into::into).collect(),
        degenerate_critical_points: r.degenerate_critical_points.iter().map(Into::into).collect(),
        oracle_count,
    };
    serde_json::to_string_pretty(&doc).expect("report serializes") + "\n"
}

/// Affine map from a data box onto a pixel box, y pointing up.
struct Frame {
    x0: f64,
    y0: f64,
    sx: f64,
    sy: f64,
    px: f64,
    py: f64,
}

impl Frame {
    fn new(data: [f64; 4], pixels: [f64; 4], equal_aspect: bool) -> Self {
        let [dx0, dy0, dx1, dy1] = data;
        let [px0, py0, px1, py1] = pixels;
        let (w, h) = ((dx1 - dx0).max(1e-12), (dy1 - dy0).max(1e-12));
        let (mut sx, mut sy) = ((px1 - px0) / w, (py1 - py0) / h);
        let (mut px, mut py) = (px0, py0);
        if equal_aspect {
            let s = sx.min(sy);
            px += ((px1 - px0) - s * w) / 2.0;
            py += ((py1 - py0) - s * h) / 2.0;
            sx = s;
            sy = s;
        }
        // `py` is the pixel row of the data minimum
        Frame {
            x0: dx0,
            y0: dy0,
            sx,
            sy,
            px,
            py: py + sy * h,
        }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        (self.px + (x - self.x0) * self.sx, self.py - (y - self.y0) * self.sy)
    }
}

fn bounds(points: impl Iterator<Item = (f64, f64)>) -> [f64; 4] {
    let mut b = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
    for (x, y) in points {
        b = [b[0].min(x), b[1].min(y), b[2].max(x), b[3].max(y)];
    }
    if !b[0].is_finite() {
        return [0.0, -1.0, 1.0, 1.0];
    }
    // pad degenerate extents so flat data sits mid-panel
    if b[3] - b[1] < 1e-12 {
        b[1] -= 1.0;
        b[3] += 1.0;
    }
    if b[2] - b[0] < 1e-12 {
        b[0] -= 1.0;
        b[2] += 1.0;
    }
    b
}

fn polyline(out: &mut String, frame: &Frame, pts: &[(f64, f64)], stroke: &str) {
    if pts.is_empty() {
        return;
    }
    let coords: Vec<String> = pts
        .iter()
        .map(|&(x, y)| {
            let (u, v) = frame.map(x, y);
            format!("{},{}", fixed(u), fixed(v))
        })
        .collect();
    let _ = writeln!(
        out,
        r#"<polyline fill="none" stroke="{stroke}" stroke-width="1.5" points="{}"/>"#,
        coords.join(" ")
    );
}

pub fn plot_svg(c: &RationalCubic, report: &ExtremaReport, width: u32, height: u32, samples: usize) -> String {
    let (w, h) = (width as f64, height as f64);
    let pad = 24.0;
    let curve = c.to_f64();
    let ev = KappaEvaluator::new(c.bezier());
    let ts: Vec<f64> = sample_params(samples).map(|t| to_f64(&t)).collect();

    let pts: Vec<(f64, f64)> = ts
        .iter()
        .map(|&t| {
            let p = curve.bezier().point_at(&t);
            (p.x, p.y)
        })
        .collect();
    // curvature graph, split at kinks
    let mut runs: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
    for &t in &ts {
        match ev.kappa(t) {
            Ok(k) if k.is_finite() => runs.last_mut().expect("nonempty").push((t, k)),
            _ => {
                if !runs.last().expect("nonempty").is_empty() {
                    runs.push(Vec::new());
                }
            }
        }
    }

    let left = Frame::new(
        bounds(pts.iter().copied()),
        [pad, pad, w / 2.0 - pad, h - 2.0 * pad],
        true,
    );
    let kb = bounds(runs.iter().flatten().copied());
    let right = Frame::new(
        [0.0, kb[1], 1.0, kb[3]],
        [w / 2.0 + pad, pad, w - pad, h - 2.0 * pad],
        false,
    );

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(s, r#"<rect width="{width}" height="{height}" fill="white"/>"#);

    // control polygon, then the curve
    let cps: Vec<(f64, f64)> = curve.control_points().iter().map(|p| (p.x, p.y)).collect();
    let _ = writeln!(s, r#"<g id="curve">"#);
    polyline(&mut s, &left, &cps, "#bbbbbb");
    polyline(&mut s, &left, &pts, "#1f4e9c");
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r#"<g id="curvature">"#);
    if kb[1] < 0.0 && kb[3] > 0.0 {
        polyline(&mut s, &right, &[(0.0, 0.0), (1.0, 0.0)], "#dddddd");
    }
    for run in &runs {
        polyline(&mut s, &right, run, "#b3261e");
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r#"<g id="extrema">"#);
    for loc in &report.locations {
        let p = curve.bezier().point_at(&loc.t);
        let (u, v) = left.map(p.x, p.y);
        let _ = writeln!(
            s,
            r##"<circle cx="{}" cy="{}" r="4" fill="#2e7d32"/>"##,
            fixed(u),
            fixed(v)
        );
        match loc.kappa {
            Some(k) => {
                let (u, v) = right.map(loc.t, k);
                let _ = writeln!(
                    s,
                    r##"<circle cx="{}" cy="{}" r="4" fill="#2e7d32"/>"##,
                    fixed(u),
                    fixed(v)
                );
            }
            None => {
                let (u, top) = right.map(loc.t, kb[3]);
                let (_, bottom) = right.map(loc.t, kb[1]);
                let _ = writeln!(
                    s,
                    r##"<line x1="{u}" y1="{top}" x2="{u}" y2="{bottom}" stroke="#2e7d32" stroke-dasharray="4 3"/>"##,
                    u = fixed(u),
                    top = fixed(top),
                    bottom = fixed(bottom)
                );
            }
        }
    }
    let _ = writeln!(s, "</g>");

    let legend = if report.count == 0 {
        "monotone".to_string()
    } else {
        let ts: Vec<String> = report.locations.iter().map(|l| fixed(l.t)).collect();
        format!("extremum at t = {}", ts.join(", "))
    };
    let kind = match report.kind {
        ExtremaKind::Regular => String::new(),
        k => format!(" ({k:?})"),
    };
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="14">{legend}{kind}</text>"#,
        fixed(pad),
        fixed(h - pad / 2.0)
    );
    let _ = writeln!(s, "</svg>");
    s
}
