//! Self-contained SVG error plots: one panel per rule, log₂ axes.

use std::collections::BTreeMap;
use std::fmt::Write;

use medqmc_core::testbed::ConvergenceRecord;

const PANEL_W: f64 = 380.0;
const PANEL_H: f64 = 320.0;
const MARGIN_L: f64 = 56.0;
const MARGIN_R: f64 = 16.0;
const MARGIN_T: f64 = 36.0;
const MARGIN_B: f64 = 48.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#ff7f0e", "#d4b000", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn series_label(r: &ConvergenceRecord) -> String {
    match r.c {
        Some(c) => format!("{} c={c}", r.function),
        None => r.function.to_string(),
    }
}

/// (x, y) = (log₂ N, log₂ error); zero errors are left out.
fn point(r: &ConvergenceRecord) -> Option<(f64, f64)> {
    (r.abs_error > 0.0).then(|| ((r.n as f64).log2(), r.abs_error.log2()))
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = (hi - lo).max(1.0);
    let step = [1.0, 2.0, 4.0, 5.0, 10.0, 20.0].into_iter().find(|s| span / s <= 8.0).unwrap_or(50.0);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

/// Renders the records, grouped into one panel per rule in first-seen order.
pub fn render(records: &[ConvergenceRecord], title: &str) -> String {
    let mut rules: Vec<&str> = Vec::new();
    for r in records {
        if !rules.contains(&r.rule.id()) {
            rules.push(r.rule.id());
        }
    }
    let pts: Vec<(f64, f64)> = records.iter().filter_map(point).collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if pts.is_empty() {
        (x0, x1, y0, y1) = (0.0, 1.0, -1.0, 0.0);
    }
    let (x0, x1, y0, y1) = (x0.floor(), x1.ceil().max(x0.floor() + 1.0), y0.floor() - 1.0, y1.ceil() + 1.0);

    let width = PANEL_W * rules.len().max(1) as f64;
    let height = PANEL_H + 24.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="16" text-anchor="middle" font-size="13">{}</text>"#, width / 2.0, escape(title));

    for (pi, rule) in rules.iter().enumerate() {
        let ox = pi as f64 * PANEL_W;
        let oy = 24.0;
        let (pw, ph) = (PANEL_W - MARGIN_L - MARGIN_R, PANEL_H - MARGIN_T - MARGIN_B);
        let sx = |x: f64| ox + MARGIN_L + (x - x0) / (x1 - x0) * pw;
        let sy = |y: f64| oy + MARGIN_T + (y1 - y) / (y1 - y0) * ph;
        let _ = writeln!(s, r#"<g class="panel">"#);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">{}</text>"#,
            ox + MARGIN_L + pw / 2.0,
            oy + MARGIN_T - 12.0,
            escape(rule)
        );
        let _ = writeln!(
            s,
            r#"<rect x="{}" y="{}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#,
            sx(x0),
            sy(y1)
        );
        for t in ticks(x0, x1) {
            let _ = writeln!(
                s,
                r##"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="#ddd"/><text x="{0}" y="{3}" text-anchor="middle">{t}</text>"##,
                sx(t),
                sy(y0),
                sy(y1),
                sy(y0) + 14.0
            );
        }
        for t in ticks(y0, y1) {
            let _ = writeln!(
                s,
                r##"<line x1="{0}" y1="{2}" x2="{1}" y2="{2}" stroke="#ddd"/><text x="{3}" y="{4}" text-anchor="end">{t}</text>"##,
                sx(x0),
                sx(x1),
                sy(t),
                sx(x0) - 4.0,
                sy(t) + 4.0
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">log2 N</text>"#,
            ox + MARGIN_L + pw / 2.0,
            oy + PANEL_H - 12.0
        );
        let (lx, ly) = (ox + 14.0, oy + MARGIN_T + ph / 2.0);
        let _ = writeln!(
            s,
            r#"<text x="{lx}" y="{ly}" text-anchor="middle" transform="rotate(-90 {lx} {ly})">log2 error</text>"#
        );

        let mut series: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
        for r in records.iter().filter(|r| r.rule.id() == *rule) {
            let e = series.entry(series_label(r)).or_default();
            if let Some(p) = point(r) {
                e.push(p);
            }
        }
        for (si, (label, mut line)) in series.into_iter().enumerate() {
            line.sort_by(|a, b| a.0.total_cmp(&b.0));
            let color = PALETTE[si % PALETTE.len()];
            let path: Vec<String> = line.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                path.join(" ")
            );
            for &(x, y) in &line {
                let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2" fill="{color}"/>"#, sx(x), sy(y));
            }
            let ky = sy(y1) + 14.0 + 14.0 * si as f64;
            let kx = sx(x1) - 90.0;
            let _ = writeln!(
                s,
                r#"<line x1="{kx}" y1="{0}" x2="{1}" y2="{0}" stroke="{color}" stroke-width="2"/><text x="{2}" y="{3}">{4}</text>"#,
                ky - 4.0,
                kx + 16.0,
                kx + 20.0,
                ky,
                escape(&label)
            );
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    s
}
