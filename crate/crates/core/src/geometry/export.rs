//! Boundary export as CSV rows and SVG polylines.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{BoundaryCurveId, DomainSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundarySample {
    pub piece: BoundaryCurveId,
    pub s: f64,
    pub x: f64,
    pub y: f64,
}

/// `n + 1` samples per piece over the closed natural parameter range.
pub fn boundary_samples(domain: &DomainSpec, n: usize) -> Vec<BoundarySample> {
    let n = n.max(1);
    let mut out = Vec::with_capacity(3 * (n + 1));
    for piece in BoundaryCurveId::ALL {
        let (lo, hi) = domain.param_range(piece);
        for i in 0..=n {
            let s = lo + (hi - lo) * i as f64 / n as f64;
            if let Ok(p) = domain.curve_point(piece, s) {
                out.push(BoundarySample { piece, s, x: p.x, y: p.y });
            }
        }
    }
    out
}

/// CSV with header `piece,s,x,y`.
pub fn boundary_csv(domain: &DomainSpec, n: usize) -> String {
    let mut out = String::from("piece,s,x,y\n");
    for r in boundary_samples(domain, n) {
        let _ = writeln!(out, "{},{},{},{}", r.piece, r.s, r.x, r.y);
    }
    out
}

/// SVG document with one `path` per boundary piece; the viewport is fitted to the samples.
pub fn boundary_svg(domain: &DomainSpec, n: usize) -> String {
    let samples = boundary_samples(domain, n);
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for r in &samples {
        x0 = x0.min(r.x);
        x1 = x1.max(r.x);
        y0 = y0.min(r.y);
        y1 = y1.max(r.y);
    }
    let pad = 0.05 * (x1 - x0).max(y1 - y0).max(1e-12);
    let (w, h) = (x1 - x0 + 2.0 * pad, y1 - y0 + 2.0 * pad);
    let stroke = 0.004 * w.max(h);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        x0 - pad,
        -(y1 + pad),
        w,
        h
    );
    let colors = [("AC", "#1f77b4"), ("BC", "#d62728"), ("Sigma", "#2ca02c")];
    for (piece, (name, color)) in BoundaryCurveId::ALL.iter().zip(colors) {
        let mut d = String::new();
        for (i, r) in samples.iter().filter(|r| r.piece == *piece).enumerate() {
            let _ = write!(d, "{}{} {} ", if i == 0 { "M" } else { "L" }, r.x, -r.y);
        }
        let _ = writeln!(
            out,
            r#"  <path id="{name}" d="{}" fill="none" stroke="{color}" stroke-width="{stroke}"/>"#,
            d.trim_end()
        );
    }
    out.push_str("</svg>\n");
    out
}
