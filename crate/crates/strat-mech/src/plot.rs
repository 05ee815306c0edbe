//! Static SVG plots of trajectory tables: the base path on the `(x, y)` disk
//! of the upper hemisphere, the spin path on its `(x1, x2)` disk, and energy
//! against time.

use std::fmt::Write as _;

use crate::io::Table;

const SIZE: f64 = 400.0;
const MARGIN: f64 = 24.0;
/// Radius of the base sphere `S^2(1/2)`.
const BASE_RADIUS: f64 = 0.5;
/// Relative spread below which a series is drawn as flat.
const FLAT_TOL: f64 = 1e-12;

/// One emitted plot: a short kind tag and the SVG text.
#[derive(Debug, Clone, PartialEq)]
pub struct Plot {
    pub kind: &'static str,
    pub svg: String,
}

struct Canvas {
    body: String,
}

impl Canvas {
    fn new(title: &str) -> Self {
        let mut body = String::new();
        writeln!(
            body,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
        )
        .unwrap();
        writeln!(
            body,
            r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#
        )
        .unwrap();
        writeln!(
            body,
            r#"<text x="{MARGIN}" y="16" font-family="monospace" font-size="12">{title}</text>"#
        )
        .unwrap();
        Self { body }
    }

    fn circle(&mut self, cx: f64, cy: f64, r: f64, style: &str) {
        writeln!(
            self.body,
            r#"<circle cx="{cx:.3}" cy="{cy:.3}" r="{r:.3}" {style}/>"#
        )
        .unwrap();
    }

    fn label(&mut self, x: f64, y: f64, text: &str) {
        writeln!(
            self.body,
            r#"<text x="{x:.3}" y="{y:.3}" font-family="monospace" font-size="10">{text}</text>"#
        )
        .unwrap();
    }

    /// A polyline through `points`, or a single dot when they all coincide.
    fn path(&mut self, points: &[(f64, f64)]) {
        let Some(&(x0, y0)) = points.first() else {
            return;
        };
        let constant = points
            .iter()
            .all(|&(x, y)| (x - x0).abs() < 1e-9 && (y - y0).abs() < 1e-9);
        if constant {
            self.circle(x0, y0, 3.0, r#"fill="black""#);
            return;
        }
        let mut pts = String::new();
        for (i, (x, y)) in points.iter().enumerate() {
            if i > 0 {
                pts.push(' ');
            }
            write!(pts, "{x:.3},{y:.3}").unwrap();
        }
        writeln!(
            self.body,
            r#"<polyline points="{pts}" fill="none" stroke="black" stroke-width="1"/>"#
        )
        .unwrap();
    }

    fn finish(mut self) -> String {
        self.body.push_str("</svg>\n");
        self.body
    }
}

/// Maps `[-r, r]^2` onto the canvas with `y` pointing up.
fn disk_map(r: f64) -> impl Fn(f64, f64) -> (f64, f64) {
    let half = 0.5 * SIZE;
    let k = (half - MARGIN) / r;
    move |x, y| (half + k * x, half - k * y)
}

fn finite_pairs(xs: &[f64], ys: &[f64]) -> Vec<(f64, f64)> {
    xs.iter()
        .zip(ys)
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .map(|(x, y)| (*x, *y))
        .collect()
}

fn disk_plot(title: &str, radius: f64, boundary: &str, xs: &[f64], ys: &[f64]) -> String {
    let mut c = Canvas::new(title);
    let map = disk_map(radius);
    let (cx, cy) = map(0.0, 0.0);
    c.circle(cx, cy, 0.5 * SIZE - MARGIN, r#"fill="none" stroke="gray""#);
    c.label(MARGIN, SIZE - 8.0, boundary);
    let pts: Vec<(f64, f64)> = finite_pairs(xs, ys)
        .into_iter()
        .map(|(x, y)| map(x, y))
        .collect();
    c.path(&pts);
    c.finish()
}

fn time_plot(title: &str, ts: &[f64], ys: &[f64]) -> String {
    let mut c = Canvas::new(title);
    let pairs = finite_pairs(ts, ys);
    let (t0, t1) = pairs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| {
            (a.min(p.0), b.max(p.0))
        });
    let (y0, y1) = pairs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| {
            (a.min(p.1), b.max(p.1))
        });
    let left = MARGIN * 3.0;
    let (w, h) = (SIZE - left - MARGIN, SIZE - 3.0 * MARGIN);
    writeln!(
        c.body,
        r#"<rect x="{left:.3}" y="{:.3}" width="{w:.3}" height="{h:.3}" fill="none" stroke="gray"/>"#,
        2.0 * MARGIN
    )
    .unwrap();
    if pairs.is_empty() {
        return c.finish();
    }
    let mid = 0.5 * (y0 + y1);
    let flat = y1 - y0 <= FLAT_TOL * mid.abs().max(1.0);
    let (lo, span) = if flat {
        (mid - 1.0, 2.0)
    } else {
        (y0, y1 - y0)
    };
    let tspan = if t1 > t0 { t1 - t0 } else { 1.0 };
    let pts: Vec<(f64, f64)> = pairs
        .iter()
        .map(|&(t, y)| {
            (
                left + w * (t - t0) / tspan,
                2.0 * MARGIN + h * (1.0 - (y - lo) / span),
            )
        })
        .collect();
    c.label(
        4.0,
        2.0 * MARGIN + 8.0,
        &format!("{:.6e}", if flat { mid } else { y1 }),
    );
    c.label(
        4.0,
        2.0 * MARGIN + h,
        &format!("{:.6e}", if flat { mid } else { y0 }),
    );
    c.label(left, SIZE - 8.0, &format!("t in [{t0}, {t1}]"));
    if pts.len() == 1 {
        c.circle(pts[0].0, pts[0].1, 3.0, r#"fill="black""#);
    } else {
        c.path(&pts);
    }
    c.finish()
}

/// All plots the table's columns support, in a fixed order.
pub fn plots(name: &str, table: &Table) -> Vec<Plot> {
    let mut out = Vec::new();
    if let (Some(x), Some(y)) = (table.numbers("base_x"), table.numbers("base_y")) {
        out.push(Plot {
            kind: "base",
            svg: disk_plot(
                &format!("{name}: base (x, y)"),
                BASE_RADIUS,
                "equator |x|=1/2",
                &x,
                &y,
            ),
        });
    }
    if let (Some(x), Some(y)) = (table.numbers("spin_1"), table.numbers("spin_2")) {
        let r = table
            .numbers("momentum_norm")
            .and_then(|m| m.into_iter().find(|v| v.is_finite() && *v > 0.0))
            .unwrap_or(1.0);
        out.push(Plot {
            kind: "spin",
            svg: disk_plot(
                &format!("{name}: spin (x1, x2)"),
                r,
                &format!("|x|={r}"),
                &x,
                &y,
            ),
        });
    }
    if let (Some(t), Some(e)) = (table.numbers("t"), table.numbers("energy")) {
        out.push(Plot {
            kind: "energy",
            svg: time_plot(&format!("{name}: energy"), &t, &e),
        });
    }
    out
}
