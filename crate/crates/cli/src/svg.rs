//! Minimal standalone SVG line charts, no external renderer.

use reclab_core::evaluate::CurvePoint;

const WIDTH: f64 = 560.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 48.0;

const PALETTE: [&str; 8] = [
    "#1b6ca8", "#d1495b", "#66a182", "#edae49", "#775DD0", "#00b0be", "#8c5e58", "#2e4057",
];

/// Renders one polyline per series over a fixed [0, 1] x [0, 1] frame with
/// axis labels and a legend.
pub fn line_chart(
    title: &str,
    x_name: &str,
    y_name: &str,
    series: &[(String, Vec<CurvePoint>)],
) -> String {
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let sx = |x: f64| MARGIN + x.clamp(0.0, 1.0) * plot_w;
    let sy = |y: f64| HEIGHT - MARGIN - y.clamp(0.0, 1.0) * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">{title}</text>\n",
        WIDTH / 2.0
    ));
    // frame and gridlines
    svg.push_str(&format!(
        "<rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{plot_w}\" height=\"{plot_h}\" \
         fill=\"none\" stroke=\"#444\"/>\n"
    ));
    for i in 1..5 {
        let t = i as f64 / 5.0;
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#ddd\"/>\n",
            sx(t),
            sy(0.0),
            sx(t),
            sy(1.0)
        ));
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#ddd\"/>\n",
            sx(0.0),
            sy(t),
            sx(1.0),
            sy(t)
        ));
    }
    for i in 0..=5 {
        let t = i as f64 / 5.0;
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{t:.1}</text>\n",
            sx(t),
            HEIGHT - MARGIN + 16.0
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{t:.1}</text>\n",
            MARGIN - 6.0,
            sy(t) + 4.0
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{x_name}</text>\n",
        WIDTH / 2.0,
        HEIGHT - 8.0
    ));
    svg.push_str(&format!(
        "<text x=\"14\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 14 {})\">{y_name}</text>\n",
        HEIGHT / 2.0,
        HEIGHT / 2.0
    ));

    for (s, (label, points)) in series.iter().enumerate() {
        let color = PALETTE[s % PALETTE.len()];
        let path: Vec<String> = points
            .iter()
            .map(|p| format!("{:.2},{:.2}", sx(p.x), sy(p.y)))
            .collect();
        if !path.is_empty() {
            svg.push_str(&format!(
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\"/>\n",
                path.join(" ")
            ));
            for p in points {
                svg.push_str(&format!(
                    "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.4\" fill=\"{color}\"/>\n",
                    sx(p.x),
                    sy(p.y)
                ));
            }
        }
        let ly = MARGIN + 14.0 + s as f64 * 16.0;
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
            WIDTH - MARGIN - 150.0,
            ly - 4.0,
            WIDTH - MARGIN - 130.0,
            ly - 4.0
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\">{label}</text>\n",
            WIDTH - MARGIN - 124.0,
            ly
        ));
    }
    svg.push_str("</svg>\n");
    svg
}
