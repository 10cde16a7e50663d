//! Minimal static SVG rendering for convergence series and occupancy
//! heatmaps.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;
const COLORS: &[&str] = &["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn header(title: &str, w: f64, h: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">{}</text>\n",
        w / 2.0,
        escape(title)
    )
}

/// Line chart; `x` is plotted on a log₁₀ axis when `log_x` is set.
pub fn line_plot(title: &str, series: &[(String, Vec<(f64, f64)>)], log_x: bool) -> String {
    let tx = |x: f64| if log_x { x.max(1e-300).log10() } else { x };
    let points = series.iter().flat_map(|(_, p)| p.iter()).filter(|p| p.1.is_finite());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in points {
        x0 = x0.min(tx(x));
        x1 = x1.max(tx(x));
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 - x0 < 1e-12 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-12 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let sx = |x: f64| MARGIN + (tx(x) - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut svg = header(title, WIDTH, HEIGHT);
    let _ = writeln!(
        svg,
        "<rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#888\"/>",
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    for (label, y) in [(y0, y0), (y1, y1)] {
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{:.1}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">{label:.4}</text>",
            MARGIN - 4.0,
            sy(y) + 3.0
        );
    }
    let xlabel = if log_x { "log10 n" } else { "n" };
    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">{xlabel} ({x0:.2} to {x1:.2})</text>",
        WIDTH / 2.0,
        HEIGHT - 15.0
    );
    for (i, (label, pts)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let path: Vec<String> = pts
            .iter()
            .filter(|p| p.1.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            svg,
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>",
            path.join(" ")
        );
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"10\" fill=\"{color}\">{}</text>",
            MARGIN + 6.0,
            MARGIN + 14.0 * (i + 1) as f64,
            escape(label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Heatmap of `counts` (row-major, `bins × bins`, rows along x).
pub fn heatmap(title: &str, bins: usize, counts: &[u64]) -> String {
    let size = 400.0;
    let cell = size / bins as f64;
    let max = counts.iter().copied().max().unwrap_or(0).max(1) as f64;
    let mut svg = header(title, size + 2.0 * MARGIN, size + 2.0 * MARGIN);
    for i in 0..bins {
        for j in 0..bins {
            let c = counts[i * bins + j];
            if c == 0 {
                continue;
            }
            let g = (255.0 * (1.0 - (c as f64).ln_1p() / max.ln_1p())) as u8;
            let _ = writeln!(
                svg,
                "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{cell:.2}\" height=\"{cell:.2}\" fill=\"rgb({g},{g},255)\"/>",
                MARGIN + i as f64 * cell,
                MARGIN + size - (j + 1) as f64 * cell,
            );
        }
    }
    let _ = writeln!(
        svg,
        "<rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{size}\" height=\"{size}\" fill=\"none\" stroke=\"#888\"/>"
    );
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plots_are_well_formed() {
        let s = line_plot("a < b", &[("x".into(), vec![(1.0, 0.5), (10.0, 0.25)])], true);
        assert!(s.starts_with("<svg") && s.ends_with("</svg>\n"));
        assert!(s.contains("a &lt; b") && s.contains("<polyline"));
        let h = heatmap("occ", 2, &[0, 1, 2, 3]);
        assert_eq!(h.matches("<rect").count(), 1 + 3 + 1);
    }
}
