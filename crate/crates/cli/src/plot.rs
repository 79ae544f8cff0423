//! Log-log error plot as a standalone SVG.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const MARGIN: f64 = 60.0;

pub struct Series<'a> {
    pub label: &'a str,
    pub points: &'a [(f64, f64)],
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        MARGIN + (x.log10() - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y.log10() - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - 2.0 * MARGIN)
    }
}

const COLOURS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// Error against `n` with reference slopes -1/2 and -1 through the first
/// point of the first series. Non-positive points are dropped.
pub fn loglog_svg(title: &str, series: &[Series]) -> String {
    let positive: Vec<(f64, f64)> =
        series.iter().flat_map(|s| s.points.iter().copied()).filter(|&(x, y)| x > 0.0 && y > 0.0).collect();
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    );
    let _ = writeln!(svg, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    let _ = writeln!(svg, "<text x=\"{}\" y=\"24\" text-anchor=\"middle\">{}</text>", WIDTH / 2.0, escape(title));
    if positive.is_empty() {
        svg.push_str("</svg>\n");
        return svg;
    }
    let span = |values: Vec<f64>| {
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min).log10().floor();
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max).log10().ceil();
        (lo, if hi > lo { hi } else { lo + 1.0 })
    };
    let frame =
        Frame { x: span(positive.iter().map(|p| p.0).collect()), y: span(positive.iter().map(|p| p.1).collect()) };

    let (x0, x1, y0, y1) = (MARGIN, WIDTH - MARGIN, HEIGHT - MARGIN, MARGIN);
    let _ = writeln!(svg, "<path d=\"M{x0} {y1} L{x0} {y0} L{x1} {y0}\" fill=\"none\" stroke=\"black\"/>");
    for d in frame.x.0 as i32..=frame.x.1 as i32 {
        let x = frame.px(10f64.powi(d));
        let _ = writeln!(svg, "<text x=\"{x:.1}\" y=\"{}\" text-anchor=\"middle\">1e{d}</text>", y0 + 18.0);
    }
    for d in frame.y.0 as i32..=frame.y.1 as i32 {
        let y = frame.py(10f64.powi(d));
        let _ = writeln!(svg, "<text x=\"{}\" y=\"{y:.1}\" text-anchor=\"end\">1e{d}</text>", x0 - 6.0);
    }
    let _ = writeln!(svg, "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">n</text>", WIDTH / 2.0, HEIGHT - 16.0);
    let _ = writeln!(
        svg,
        "<text x=\"16\" y=\"{}\" transform=\"rotate(-90 16 {})\" text-anchor=\"middle\">|error|</text>",
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );

    if let Some(&(ax, ay)) = series.first().and_then(|s| s.points.iter().find(|&&(x, y)| x > 0.0 && y > 0.0)) {
        let right = 10f64.powf(frame.x.1);
        for (slope, dash) in [(-0.5, "6 4"), (-1.0, "2 3")] {
            let by = ay * (right / ax).powf(slope);
            let _ = writeln!(
                svg,
                "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"gray\" stroke-dasharray=\"{dash}\"><title>slope {slope}</title></line>",
                frame.px(ax),
                frame.py(ay),
                frame.px(right),
                frame.py(by)
            );
        }
    }

    for (i, s) in series.iter().enumerate() {
        let colour = COLOURS[i % COLOURS.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .filter(|&&(x, y)| x > 0.0 && y > 0.0)
            .map(|&(x, y)| format!("{:.1},{:.1}", frame.px(x), frame.py(y)))
            .collect();
        let _ = writeln!(
            svg,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{colour}\" stroke-width=\"2\"/>",
            pts.join(" ")
        );
        let ly = MARGIN + 16.0 * i as f64;
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{ly}\" fill=\"{colour}\" text-anchor=\"end\">{}</text>",
            WIDTH - MARGIN,
            escape(s.label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draws_series_and_references() {
        let pts = [(25.0, 0.2), (100.0, 0.1), (400.0, 0.05)];
        let svg = loglog_svg("t2 <worst>", &[Series { label: "worst", points: &pts }]);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("&lt;worst&gt;"));
        assert!(svg.contains("slope -0.5"));
        assert!(svg.contains("slope -1"));
        assert_eq!(svg.matches("<polyline").count(), 1);
    }

    #[test]
    fn empty_plot_is_valid() {
        let svg = loglog_svg("none", &[Series { label: "zero", points: &[(10.0, 0.0)] }]);
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}
