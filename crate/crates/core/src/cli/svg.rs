//! SVG picture of the normal plane at a point: indicatrix, characteristic
//! conic, binormals and the origin.

use std::f64::consts::PI;
use std::fmt::Write as _;

use nalgebra::Vector2;

use crate::classify::{binormals_with, ToleranceSet};
use crate::conics::{conjugate_radii, eta, evolvent_point, indicatrix};
use crate::localgeom::SecondFundamentalForm;

const SIZE: f64 = 800.0;
const MARGIN: f64 = 0.1;
const INDICATRIX_SAMPLES: usize = 256;
const CHARACTERISTIC_SAMPLES: usize = 1024;
/// Characteristic points farther than this many view widths are dropped.
const FAR: f64 = 4.0;

struct View {
    cx: f64,
    cy: f64,
    scale: f64,
    half_world: f64,
}

impl View {
    fn fit(points: &[Vector2<f64>]) -> Self {
        let (mut x0, mut x1, mut y0, mut y1) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for p in points {
            x0 = x0.min(p.x);
            x1 = x1.max(p.x);
            y0 = y0.min(p.y);
            y1 = y1.max(p.y);
        }
        let mut span = (x1 - x0).max(y1 - y0);
        if !(span > 0.0) {
            span = 1.0;
        }
        let world = span * (1.0 + 2.0 * MARGIN);
        View {
            cx: 0.5 * (x0 + x1),
            cy: 0.5 * (y0 + y1),
            scale: SIZE / world,
            half_world: 0.5 * world,
        }
    }

    fn map(&self, p: Vector2<f64>) -> (f64, f64) {
        (
            0.5 * SIZE + (p.x - self.cx) * self.scale,
            0.5 * SIZE - (p.y - self.cy) * self.scale,
        )
    }

    fn is_far(&self, p: Vector2<f64>) -> bool {
        (p.x - self.cx).abs().max((p.y - self.cy).abs()) > FAR * 2.0 * self.half_world
    }
}

fn c(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

fn polyline(out: &mut String, class: &str, view: &View, pts: &[Vector2<f64>]) {
    let coords: Vec<String> = pts
        .iter()
        .map(|&p| {
            let (x, y) = view.map(p);
            format!("{},{}", c(x), c(y))
        })
        .collect();
    let _ = writeln!(out, r#"<polyline class="{class}" points="{}"/>"#, coords.join(" "));
}

/// Branches of the characteristic curve from the evolvent points. A branch
/// ends where a tangent of the indicatrix passes through the origin.
fn characteristic_branches(sff: &SecondFundamentalForm, view: &View) -> Vec<Vec<Vector2<f64>>> {
    let n = CHARACTERISTIC_SAMPLES;
    let samples: Vec<(f64, Option<Vector2<f64>>)> = (0..n)
        .map(|k| {
            let t = k as f64 * PI / n as f64;
            let e = eta(sff, t);
            let z = conjugate_radii(sff, t).1;
            let side = e.x * z.y - e.y * z.x;
            let p = evolvent_point(sff, t).ok().filter(|p| !view.is_far(*p));
            (side, p)
        })
        .collect();
    // start the cyclic scan just after a side change so no branch wraps
    let Some(start) = (0..n)
        .find(|&k| samples[k].0.signum() != samples[(k + n - 1) % n].0.signum() || samples[k].1.is_none())
    else {
        // a single closed curve
        let mut closed: Vec<Vector2<f64>> = samples.iter().filter_map(|s| s.1).collect();
        closed.push(closed[0]);
        return vec![closed];
    };
    let mut branches = Vec::new();
    let mut current: Vec<Vector2<f64>> = Vec::new();
    let mut prev_side = samples[start].0.signum();
    for k in 0..n {
        let (side, p) = samples[(start + k) % n];
        if side.signum() != prev_side || p.is_none() {
            if current.len() >= 2 {
                branches.push(std::mem::take(&mut current));
            }
            current.clear();
        }
        prev_side = side.signum();
        if let Some(p) = p {
            current.push(p);
        }
    }
    if current.len() >= 2 {
        branches.push(current);
    }
    branches
}

pub fn render_plot(sff: &SecondFundamentalForm, tol: &ToleranceSet) -> String {
    let ind = indicatrix(sff);
    let mut curve: Vec<Vector2<f64>> = (0..INDICATRIX_SAMPLES)
        .map(|k| eta(sff, k as f64 * PI / INDICATRIX_SAMPLES as f64))
        .collect();
    curve.push(curve[0]);
    let mut fit_pts = curve.clone();
    fit_pts.push(Vector2::zeros());
    let view = View::fit(&fit_pts);

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(
        out,
        "<style>polyline{{fill:none;stroke-width:2}} .indicatrix{{stroke:#1f77b4}} \
         .characteristic{{stroke:#d62728}} .binormal{{stroke:#2ca02c;stroke-width:2}} \
         .head{{fill:#2ca02c}} .axis{{stroke:#bbb;stroke-width:1}} .origin{{fill:#000}}</style>"
    );
    let (ox, oy) = view.map(Vector2::zeros());
    let _ = writeln!(
        out,
        r#"<line class="axis" x1="0" y1="{y}" x2="{SIZE}" y2="{y}"/>"#,
        y = c(oy)
    );
    let _ = writeln!(
        out,
        r#"<line class="axis" x1="{x}" y1="0" x2="{x}" y2="{SIZE}"/>"#,
        x = c(ox)
    );

    polyline(&mut out, "indicatrix", &view, &curve);
    if !ind.degenerate {
        for branch in characteristic_branches(sff, &view) {
            polyline(&mut out, "characteristic", &view, &branch);
        }
    }

    if let Ok(b) = binormals_with(sff, tol) {
        let len = 0.35 * SIZE;
        for p in &b.pairs {
            let [bx, by] = p.binormal.as_array();
            let (tx, ty) = (ox + len * bx, oy - len * by);
            let _ = writeln!(
                out,
                r#"<line class="binormal" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                c(ox),
                c(oy),
                c(tx),
                c(ty)
            );
            // arrow head
            let (hx, hy) = (-bx * 14.0, by * 14.0);
            let (px, py) = (-by * 6.0, -bx * 6.0);
            let _ = writeln!(
                out,
                r#"<polygon class="head" points="{},{} {},{} {},{}"/>"#,
                c(tx),
                c(ty),
                c(tx + hx + px),
                c(ty + hy + py),
                c(tx + hx - px),
                c(ty + hy - py)
            );
        }
    }
    let _ = writeln!(out, r#"<circle class="origin" cx="{}" cy="{}" r="4"/>"#, c(ox), c(oy));
    let _ = writeln!(out, "</svg>");
    out
}
