//! Static SVG plots of a ledger's entropy time series.

use std::fmt::Write as _;

use crate::ledger::{EventTag, LedgerEntry};

const WIDTH: f64 = 720.0;
const PANEL_HEIGHT: f64 = 200.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 30.0;
const GAP: f64 = 50.0;

struct Panel<'a> {
    title: &'a str,
    color: &'a str,
    values: Vec<f64>,
}

/// Two stacked panels, `I_x(t)` on top and `S(t)` below, with dashed
/// vertical markers at absorption events.
pub fn render_entropy_svg(entries: &[LedgerEntry]) -> String {
    let height = MARGIN_TOP + 2.0 * PANEL_HEIGHT + GAP + 40.0;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if entries.is_empty() {
        svg.push_str("</svg>\n");
        return svg;
    }

    let ts: Vec<f64> = entries.iter().map(|e| e.t).collect();
    let panels = [
        Panel {
            title: "position entropy I_x (nats)",
            color: "#1f77b4",
            values: entries.iter().map(|e| e.i_x).collect(),
        },
        Panel {
            title: "thermodynamic entropy S (k_B)",
            color: "#d62728",
            values: entries.iter().map(|e| e.s).collect(),
        },
    ];
    let (t_lo, t_hi) = padded_range(&ts);
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let sx = |t: f64| MARGIN_LEFT + (t - t_lo) / (t_hi - t_lo) * plot_w;

    for (i, panel) in panels.iter().enumerate() {
        let top = MARGIN_TOP + i as f64 * (PANEL_HEIGHT + GAP);
        let (v_lo, v_hi) = padded_range(&panel.values);
        let sy = |v: f64| top + PANEL_HEIGHT - (v - v_lo) / (v_hi - v_lo) * PANEL_HEIGHT;

        let _ = writeln!(
            svg,
            r##"<rect x="{MARGIN_LEFT}" y="{top}" width="{plot_w}" height="{PANEL_HEIGHT}" fill="none" stroke="#444"/>"##
        );
        let _ = writeln!(
            svg,
            r#"<text x="{MARGIN_LEFT}" y="{:.1}">{}</text>"#,
            top - 8.0,
            panel.title
        );
        for v in [v_lo, 0.5 * (v_lo + v_hi), v_hi] {
            let _ = writeln!(
                svg,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
                MARGIN_LEFT - 6.0,
                sy(v) + 4.0,
                tick(v)
            );
        }
        for e in entries.iter().filter(|e| e.event == EventTag::Absorption) {
            let x = sx(e.t);
            let _ = writeln!(
                svg,
                r##"<line x1="{x:.2}" y1="{top:.2}" x2="{x:.2}" y2="{:.2}" stroke="#888" stroke-dasharray="4 3"/>"##,
                top + PANEL_HEIGHT
            );
        }
        let points: Vec<String> = ts
            .iter()
            .zip(&panel.values)
            .map(|(&t, &v)| format!("{:.2},{:.2}", sx(t), sy(v)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
            panel.color,
            points.join(" ")
        );
        for p in &points {
            let (x, y) = p.split_once(',').expect("formatted pair");
            let _ = writeln!(
                svg,
                r#"<circle cx="{x}" cy="{y}" r="2.5" fill="{}"/>"#,
                panel.color
            );
        }
    }

    let axis_y = MARGIN_TOP + 2.0 * PANEL_HEIGHT + GAP + 16.0;
    for t in [t_lo, 0.5 * (t_lo + t_hi), t_hi] {
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{axis_y:.1}" text-anchor="middle">{}</text>"#,
            sx(t),
            tick(t)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">t</text>"#,
        MARGIN_LEFT + 0.5 * plot_w,
        axis_y + 18.0
    );
    svg.push_str("</svg>\n");
    svg
}

fn padded_range(values: &[f64]) -> (f64, f64) {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    if span > 1e-9 * (1.0 + lo.abs()) {
        (lo - 0.05 * span, hi + 0.05 * span)
    } else {
        let pad = 0.5 * (1.0 + lo.abs()) * 1e-3;
        (lo - pad, hi + pad)
    }
}

fn tick(v: f64) -> String {
    format!("{v:.4}")
}
