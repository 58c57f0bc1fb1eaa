//! Minimal line plot of mean ARI across the settings of a sweep.

use std::fmt::Write;

use crate::results::ResultRow;

const COLORS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn ari_plot(rows: &[ResultRow]) -> String {
    let mut settings: Vec<String> = Vec::new();
    let mut methods: Vec<String> = Vec::new();
    for r in rows {
        let s = r.setting_label();
        if !settings.contains(&s) {
            settings.push(s);
        }
        if !methods.contains(&r.method) {
            methods.push(r.method.clone());
        }
    }
    let (left, top, width, height) = (60.0, 20.0, 80.0 * settings.len().max(2) as f64, 300.0);
    let legend_y = top + height + 120.0;
    let total_h = legend_y + 20.0 * methods.len() as f64;
    let x = |i: usize| left + (i as f64 + 0.5) * width / settings.len() as f64;
    let y = |v: f64| top + (1.0 - v.clamp(0.0, 1.0)) * height;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" font-family="sans-serif" font-size="11">"#,
        left + width + 20.0,
        total_h
    );
    let _ = writeln!(out, r#"<rect x="{left}" y="{top}" width="{width}" height="{height}" fill="none" stroke="black"/>"#);
    for tick in 0..=4 {
        let v = tick as f64 / 4.0;
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="end">{v}</text>"#,
            left - 6.0,
            y(v) + 4.0
        );
    }
    for (i, s) in settings.iter().enumerate() {
        let (tx, ty) = (x(i), top + height + 12.0);
        let _ = writeln!(
            out,
            r#"<text x="{tx}" y="{ty}" transform="rotate(40 {tx} {ty})">{}</text>"#,
            escape(s)
        );
    }
    for (m, method) in methods.iter().enumerate() {
        let color = COLORS[m % COLORS.len()];
        let points: Vec<String> = rows
            .iter()
            .filter(|r| &r.method == method)
            .map(|r| {
                let i = settings.iter().position(|s| *s == r.setting_label()).unwrap_or(0);
                format!("{:.2},{:.2}", x(i), y(r.mean_ari))
            })
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            points.join(" ")
        );
        let ly = legend_y + 20.0 * m as f64;
        let _ = writeln!(out, r#"<rect x="{left}" y="{}" width="12" height="12" fill="{color}"/>"#, ly - 10.0);
        let _ = writeln!(out, r#"<text x="{}" y="{ly}">{}</text>"#, left + 18.0, escape(method));
    }
    out.push_str("</svg>\n");
    out
}
