//! Minimal standalone SVG line charts for fitness curves.

use std::fmt::Write as _;

use linebal::engine::GenerationRow;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 50.0;

struct Series<'a> {
    label: &'a str,
    color: &'a str,
    values: Vec<f64>,
}

/// Renders avg/min/max fitness per generation as three polylines.
pub fn fitness_chart(rows: &[GenerationRow], title: &str) -> String {
    let series = [
        Series { label: "avg", color: "#1f77b4", values: rows.iter().map(|r| r.avg_fitness).collect() },
        Series { label: "min", color: "#7f7f7f", values: rows.iter().map(|r| r.min_fitness).collect() },
        Series { label: "max", color: "#2ca02c", values: rows.iter().map(|r| r.max_fitness).collect() },
    ];
    let y_min = series.iter().flat_map(|s| s.values.iter().copied()).fold(f64::INFINITY, f64::min);
    let y_max = series
        .iter()
        .flat_map(|s| s.values.iter().copied())
        .fold(f64::NEG_INFINITY, f64::max);
    let y_span = if (y_max - y_min).abs() < f64::EPSILON { 1.0 } else { y_max - y_min };
    let x_max = (rows.len().saturating_sub(1)).max(1) as f64;

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x_of = |gen: f64| MARGIN_LEFT + gen / x_max * plot_w;
    let y_of = |v: f64| MARGIN_TOP + (1.0 - (v - y_min) / y_span) * plot_h;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="18" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        xml_escape(title)
    );
    // Axes.
    let x0 = MARGIN_LEFT;
    let y0 = MARGIN_TOP + plot_h;
    let _ = writeln!(
        out,
        r#"<line x1="{x0}" y1="{y0}" x2="{}" y2="{y0}" stroke="black"/>"#,
        MARGIN_LEFT + plot_w
    );
    let _ = writeln!(out, r#"<line x1="{x0}" y1="{MARGIN_TOP}" x2="{x0}" y2="{y0}" stroke="black"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">generation</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">fitness</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    );
    // Tick labels at the extremes.
    let _ = writeln!(out, r#"<text x="{x0}" y="{}" text-anchor="middle">0</text>"#, y0 + 16.0);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        MARGIN_LEFT + plot_w,
        y0 + 16.0,
        rows.len().saturating_sub(1)
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="end">{:.3e}</text>"#,
        x0 - 4.0,
        y0 + 4.0,
        y_min
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="end">{:.3e}</text>"#,
        x0 - 4.0,
        MARGIN_TOP + 4.0,
        y_max
    );
    for (idx, s) in series.iter().enumerate() {
        let points: Vec<String> = s
            .values
            .iter()
            .enumerate()
            .map(|(gen, &v)| format!("{:.2},{:.2}", x_of(gen as f64), y_of(v)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
            s.color,
            points.join(" ")
        );
        let lx = MARGIN_LEFT + plot_w - 60.0;
        let ly = MARGIN_TOP + 16.0 * (idx as f64 + 1.0);
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="1.5"/>"#,
            lx,
            ly - 4.0,
            lx + 20.0,
            ly - 4.0,
            s.color
        );
        let _ = writeln!(out, r#"<text x="{}" y="{}">{}</text>"#, lx + 26.0, ly, s.label);
    }
    out.push_str("</svg>\n");
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
