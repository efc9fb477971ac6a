//! Static SVG of best-known κ(n) against two reference curves: the
//! rounding bound (1 + u·e)/(1 − u·e) at flatness u = 1/√n, and the
//! orthogonal-triple floor sqrt(1 + 2/(n − 1)) drawn at n ≢ 0 (mod 4).
//! Output bytes depend only on the input points.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::io::format_sig10;
use crate::rounding::bernstein_bound;
use crate::search::Registry;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN_LEFT: f64 = 60.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 20.0;
const MARGIN_BOTTOM: f64 = 50.0;

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn x(&self, n: f64) -> f64 {
        MARGIN_LEFT + (n - self.x_min) / (self.x_max - self.x_min) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn y(&self, k: f64) -> f64 {
        HEIGHT - MARGIN_BOTTOM
            - (k - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }
}

fn bernstein_curve(n: usize) -> Option<f64> {
    let c = bernstein_bound(n, 1.0 / (n as f64).sqrt());
    c.kappa_bound.is_finite().then_some(c.kappa_bound)
}

fn floor_curve(n: usize) -> Option<f64> {
    (n >= 3 && n % 4 != 0).then(|| (1.0 + 2.0 / (n as f64 - 1.0)).sqrt())
}

fn polyline(out: &mut String, frame: &Frame, pts: &[(usize, f64)], class: &str) {
    if pts.is_empty() {
        return;
    }
    let coords: Vec<String> = pts
        .iter()
        .map(|&(n, k)| format!("{:.2},{:.2}", frame.x(n as f64), frame.y(k)))
        .collect();
    writeln!(out, r#"<polyline class="{class}" fill="none" points="{}"/>"#, coords.join(" "))
        .expect("string write");
}

/// Renders (n, κ) points; κ must be finite. Errors on an empty input.
pub fn kappa_curve_svg(points: &[(usize, f64)]) -> Result<String> {
    if points.is_empty() {
        return Err(Error::EmptyRegistry);
    }
    let mut points = points.to_vec();
    points.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    if points.iter().any(|p| !p.1.is_finite()) {
        return Err(Error::Precondition("cannot plot an infinite kappa".into()));
    }
    let n_lo = points[0].0;
    let n_hi = points[points.len() - 1].0;
    let x_min = n_lo.saturating_sub(1).max(1) as f64;
    let x_max = (n_hi + 1).max(x_min as usize + 4) as f64;

    let range = (x_min as usize)..=(x_max as usize);
    let bern: Vec<(usize, f64)> = range.clone().filter_map(|n| bernstein_curve(n).map(|k| (n, k))).collect();
    let floor: Vec<(usize, f64)> = range.filter_map(|n| floor_curve(n).map(|k| (n, k))).collect();

    let top = points
        .iter()
        .chain(&bern)
        .chain(&floor)
        .map(|p| p.1)
        .fold(1.0f64, f64::max);
    let y_max = ((top * 2.0).ceil() / 2.0).max(1.5);
    let frame = Frame {
        x_min,
        x_max,
        y_min: 1.0,
        y_max,
    };

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .expect("string write");
    out.push_str(
        "<style>\n\
         .axis{stroke:#000;stroke-width:1}\n\
         .grid{stroke:#ddd;stroke-width:1}\n\
         .bernstein{stroke:#1f77b4;stroke-width:2}\n\
         .floor{stroke:#d62728;stroke-width:2;stroke-dasharray:6 4}\n\
         .point{fill:#000}\n\
         text{font-family:sans-serif;font-size:12px}\n\
         </style>\n",
    );

    let (x0, x1) = (frame.x(x_min), frame.x(x_max));
    let (y0, y1) = (frame.y(frame.y_min), frame.y(frame.y_max));
    let y_step = if y_max - 1.0 > 5.0 { 1.0 } else { 0.5 };
    let mut k = 1.0;
    while k <= y_max + 1e-9 {
        let y = frame.y(k);
        writeln!(out, r#"<line class="grid" x1="{x0:.2}" y1="{y:.2}" x2="{x1:.2}" y2="{y:.2}"/>"#).unwrap();
        writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{k:.1}</text>"#, x0 - 6.0, y + 4.0).unwrap();
        k += y_step;
    }
    let x_step = if x_max - x_min > 20.0 { 5 } else { 1 };
    for n in (x_min as usize)..=(x_max as usize) {
        if n % x_step != 0 {
            continue;
        }
        let x = frame.x(n as f64);
        writeln!(out, r#"<line class="grid" x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{y1:.2}"/>"#).unwrap();
        writeln!(out, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{n}</text>"#, y0 + 18.0).unwrap();
    }
    writeln!(out, r#"<line class="axis" x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y0:.2}"/>"#).unwrap();
    writeln!(out, r#"<line class="axis" x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{y1:.2}"/>"#).unwrap();
    writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">n</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 10.0
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="15" y="{:.2}" text-anchor="middle" transform="rotate(-90 15 {:.2})">condition number</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    )
    .unwrap();

    polyline(&mut out, &frame, &bern, "bernstein");
    polyline(&mut out, &frame, &floor, "floor");
    for &(n, k) in &points {
        writeln!(
            out,
            r#"<circle class="point" cx="{:.2}" cy="{:.2}" r="3.5"><title>n={n} kappa={}</title></circle>"#,
            frame.x(n as f64),
            frame.y(k),
            format_sig10(k)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Plots the best κ per n stored in a registry.
pub fn plot_registry(registry: &Registry) -> Result<String> {
    let points: Vec<(usize, f64)> = registry
        .best_per_n()
        .into_iter()
        .filter(|e| e.kappa.is_finite())
        .map(|e| (e.n, e.kappa))
        .collect();
    kappa_curve_svg(&points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_is_an_error() {
        assert!(matches!(kappa_curve_svg(&[]), Err(Error::EmptyRegistry)));
    }

    #[test]
    fn single_point() {
        let svg = kappa_curve_svg(&[(3, 2.0)]).unwrap();
        assert_eq!(svg.matches("<circle").count(), 1);
        assert!(svg.contains("<title>n=3 kappa=2.000000000</title>"));
        // x range [2, 6]; the rounding curve peaks near 5.52 at n = 4.
        let frame = Frame {
            x_min: 2.0,
            x_max: 6.0,
            y_min: 1.0,
            y_max: 6.0,
        };
        let expected = format!(r#"cx="{:.2}" cy="{:.2}""#, frame.x(3.0), frame.y(2.0));
        assert!(svg.contains(&expected), "{svg}");
        assert_eq!(svg, kappa_curve_svg(&[(3, 2.0)]).unwrap());
    }

    #[test]
    fn floor_skips_multiples_of_four() {
        assert!(floor_curve(8).is_none());
        assert!((floor_curve(3).unwrap() - 2f64.sqrt()).abs() < 1e-15);
    }
}
