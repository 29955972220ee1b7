//! Bare-bones SVG figures. CSV stays the authoritative output; these are
//! for a quick look.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;

const W: f64 = 640.0;
const H: f64 = 440.0;
const PAD_L: f64 = 80.0;
const PAD_R: f64 = 20.0;
const PAD_T: f64 = 36.0;
const PAD_B: f64 = 56.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// One curve of a line plot.
pub struct Series<'a> {
    pub name: &'a str,
    pub x: &'a [f64],
    pub y: &'a [f64],
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn frame(out: &mut String, title: &str, x_label: &str, y_label: &str, xr: (f64, f64), yr: (f64, f64), log_y: bool) {
    let _ = write!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = write!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = write!(out, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, escape(title));
    let (x0, y0, x1, y1) = (PAD_L, H - PAD_B, W - PAD_R, PAD_T);
    let _ = write!(out, r#"<rect x="{x0}" y="{y1}" width="{}" height="{}" fill="none" stroke="black"/>"#, x1 - x0, y0 - y1);
    let fmt = |v: f64| if log_y { format!("1e{v:.1}") } else { format!("{v:.3e}") };
    let _ = write!(out, r#"<text x="{x0}" y="{}" text-anchor="start">{:.1}</text>"#, y0 + 18.0, xr.0);
    let _ = write!(out, r#"<text x="{x1}" y="{}" text-anchor="end">{:.1}</text>"#, y0 + 18.0, xr.1);
    let _ = write!(out, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, x0 - 4.0, y0, fmt(yr.0));
    let _ = write!(out, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, x0 - 4.0, y1 + 10.0, fmt(yr.1));
    let _ = write!(out, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, (x0 + x1) / 2.0, H - 14.0, escape(x_label));
    let _ = write!(
        out,
        r#"<text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})">{}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(y_label)
    );
}

fn range(v: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = v.filter(|x| x.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

/// Line plot; with `log_y` nonpositive points are dropped.
pub fn line_plot(title: &str, x_label: &str, y_label: &str, series: &[Series], log_y: bool) -> String {
    let ty = |v: f64| if log_y { if v > 0.0 { v.log10() } else { f64::NAN } } else { v };
    let xr = range(series.iter().flat_map(|s| s.x.iter().cloned()));
    let mut yr = range(series.iter().flat_map(|s| s.y.iter().map(|v| ty(*v))));
    if log_y {
        // keep ten decades at most so a zero-ish tail does not flatten the plot
        yr.0 = yr.0.max(yr.1 - 10.0);
    }
    let mut out = String::new();
    frame(&mut out, title, x_label, y_label, xr, yr, log_y);
    let px = |x: f64| PAD_L + (x - xr.0) / (xr.1 - xr.0) * (W - PAD_L - PAD_R);
    let py = |y: f64| (H - PAD_B) - (y.max(yr.0) - yr.0) / (yr.1 - yr.0) * (H - PAD_B - PAD_T);
    for (k, s) in series.iter().enumerate() {
        let pts: Vec<String> = s
            .x
            .iter()
            .zip(s.y)
            .filter_map(|(x, y)| {
                let y = ty(*y);
                y.is_finite().then(|| format!("{:.2},{:.2}", px(*x), py(y)))
            })
            .collect();
        let color = PALETTE[k % PALETTE.len()];
        let _ = write!(out, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, pts.join(" "));
        let _ = write!(
            out,
            r#"<text x="{}" y="{}" fill="{color}" text-anchor="end">{}</text>"#,
            W - PAD_R - 6.0,
            PAD_T + 16.0 + 14.0 * k as f64,
            escape(s.name)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Grayscale heatmap of a row-major map (rows along y, columns along x);
/// darker means larger.
pub fn heatmap(title: &str, x_label: &str, y_label: &str, x: &[f64], y: &[f64], values: &[f64]) -> String {
    let xr = range(x.iter().cloned());
    let yr = range(y.iter().cloned());
    let peak = values.iter().cloned().filter(|v| v.is_finite()).fold(0.0, f64::max);
    let mut out = String::new();
    frame(&mut out, title, x_label, y_label, xr, yr, false);
    let (nx, ny) = (x.len(), y.len());
    let cw = (W - PAD_L - PAD_R) / nx as f64;
    let ch = (H - PAD_B - PAD_T) / ny as f64;
    for r in 0..ny {
        for c in 0..nx {
            let v = values[r * nx + c];
            let t = if peak > 0.0 && v.is_finite() { (v / peak).clamp(0.0, 1.0) } else { 0.0 };
            if t < 1e-3 {
                continue;
            }
            let g = (255.0 * (1.0 - t)).round() as u8;
            // increasing y runs up the page
            let _ = write!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="rgb({g},{g},{g})"/>"#,
                PAD_L + c as f64 * cw,
                H - PAD_B - (r + 1) as f64 * ch,
                cw + 0.05,
                ch + 0.05
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

pub fn write_svg(path: &Path, svg: &str) -> Result<()> {
    std::fs::write(path, svg)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documents_are_well_formed_enough() {
        let x = [1.0, 2.0, 3.0];
        let y = [1.0, 10.0, 0.0];
        let s = line_plot("t<1>", "x", "y", &[Series { name: "a", x: &x, y: &y }], true);
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert!(s.contains("t&lt;1&gt;"));
        let h = heatmap("m", "x", "y", &x, &x, &[0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]);
        assert_eq!(h.matches("<rect").count(), 2 + 8);
    }
}
